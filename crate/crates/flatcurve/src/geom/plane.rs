//! Exact plane primitives: points, direction vectors, the chart transition
//! isometries `z ↦ ±z + c`, and segment predicates.

use crate::exact::QuadNum;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: QuadNum,
    pub y: QuadNum,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

impl Point2 {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Point2 { x, y }
    }

    pub fn to(&self, other: &Point2) -> Vec2 {
        Vec2 { x: &other.x - &self.x, y: &other.y - &self.y }
    }

    pub fn add(&self, v: &Vec2) -> Point2 {
        Point2 { x: &self.x + &v.x, y: &self.y + &v.y }
    }

    /// Midpoint of the segment to `other`.
    pub fn midpoint(&self, other: &Point2) -> Point2 {
        let half = QuadNum::ratio(1, 2);
        Point2 {
            x: (&self.x + &other.x) * half.clone(),
            y: (&self.y + &other.y) * half,
        }
    }

    /// Lexicographic order, the canonical tie-break everywhere.
    pub fn lex_cmp(&self, other: &Point2) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl Vec2 {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Vec2 { x, y }
    }

    pub fn cross(&self, other: &Vec2) -> QuadNum {
        &(&self.x * &other.y) - &(&self.y * &other.x)
    }

    pub fn dot(&self, other: &Vec2) -> QuadNum {
        &(&self.x * &other.x) + &(&self.y * &other.y)
    }

    pub fn neg(&self) -> Vec2 {
        Vec2 { x: -&self.x, y: -&self.y }
    }

    pub fn scale(&self, t: &QuadNum) -> Vec2 {
        Vec2 { x: &self.x * t, y: &self.y * t }
    }

    /// Counterclockwise rotation by π/2.
    pub fn rot90(&self) -> Vec2 {
        Vec2 { x: -&self.y, y: self.x.clone() }
    }

    pub fn norm_sq(&self) -> QuadNum {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_parallel(&self, other: &Vec2) -> bool {
        self.cross(other).is_zero()
    }

    /// Same ray: parallel and pointing the same way.
    pub fn same_ray(&self, other: &Vec2) -> bool {
        self.is_parallel(other) && self.dot(other).is_positive()
    }
}

/// Sign of the signed area of the triangle (a, b, c): +1 counterclockwise.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> i32 {
    a.to(b).cross(&a.to(c)).sign()
}

/// An isometry of the plane of the form `z ↦ ±z + c`; `flip` selects −z.
/// These are exactly the transition maps of a half-translation atlas.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlaneIso {
    pub flip: bool,
    pub t: Vec2,
}

impl PlaneIso {
    pub fn identity() -> Self {
        PlaneIso { flip: false, t: Vec2::new(QuadNum::zero(), QuadNum::zero()) }
    }

    pub fn translation(t: Vec2) -> Self {
        PlaneIso { flip: false, t }
    }

    pub fn flip_about(t: Vec2) -> Self {
        PlaneIso { flip: true, t }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        if self.flip {
            Point2 { x: &self.t.x - &p.x, y: &self.t.y - &p.y }
        } else {
            Point2 { x: &p.x + &self.t.x, y: &p.y + &self.t.y }
        }
    }

    /// Derivative action on direction vectors: ±v.
    pub fn apply_vec(&self, v: &Vec2) -> Vec2 {
        if self.flip {
            v.neg()
        } else {
            v.clone()
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &PlaneIso) -> PlaneIso {
        // (±₁(±₂ z + c₂) + c₁) = (±₁±₂) z + (±₁c₂ + c₁)
        let t = self.apply(&Point2::new(other.t.x.clone(), other.t.y.clone()));
        PlaneIso { flip: self.flip != other.flip, t: Vec2::new(t.x, t.y) }
    }

    pub fn inverse(&self) -> PlaneIso {
        if self.flip {
            // z ↦ −z + c is an involution.
            self.clone()
        } else {
            PlaneIso { flip: false, t: self.t.neg() }
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.flip && self.t.is_zero()
    }
}

/// Where a point sits relative to a closed segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OnSegment {
    Off,
    Start,
    End,
    Interior,
}

/// Exact classification of `p` against segment `[a, b]` (a ≠ b).
pub fn point_on_segment(p: &Point2, a: &Point2, b: &Point2) -> OnSegment {
    if p == a {
        return OnSegment::Start;
    }
    if p == b {
        return OnSegment::End;
    }
    let ab = a.to(b);
    let ap = a.to(p);
    if !ab.cross(&ap).is_zero() {
        return OnSegment::Off;
    }
    let t = ab.dot(&ap);
    if t.is_positive() && t < ab.norm_sq() {
        OnSegment::Interior
    } else {
        OnSegment::Off
    }
}

/// Exact intersection of two closed segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegIntersection {
    Empty,
    /// A single common point with parameters along each segment
    /// (s along [a1,b1], t along [a2,b2], both in [0,1]).
    Point { p: Point2, s: QuadNum, t: QuadNum },
    /// A common collinear sub-segment [p, q] with p ≠ q.
    Overlap { p: Point2, q: Point2 },
}

pub fn seg_intersect(a1: &Point2, b1: &Point2, a2: &Point2, b2: &Point2) -> SegIntersection {
    let d1 = a1.to(b1);
    let d2 = a2.to(b2);
    let denom = d1.cross(&d2);
    let r = a1.to(a2);
    if denom.is_zero() {
        if !d1.cross(&r).is_zero() {
            return SegIntersection::Empty; // parallel, distinct lines
        }
        // Collinear: project onto d1, intersect parameter intervals.
        let n = d1.norm_sq();
        let t_a2 = d1.dot(&a1.to(a2)) / n.clone();
        let t_b2 = d1.dot(&a1.to(b2)) / n;
        let (lo2, hi2) = if t_a2 <= t_b2 { (t_a2, t_b2) } else { (t_b2, t_a2) };
        let lo = lo2.max(QuadNum::zero());
        let hi = hi2.min(QuadNum::one());
        match lo.cmp(&hi) {
            Ordering::Greater => SegIntersection::Empty,
            Ordering::Equal => {
                let p = a1.add(&d1.scale(&lo));
                let t = param_of(&p, a2, &d2);
                SegIntersection::Point { p, s: lo, t }
            }
            Ordering::Less => {
                let p = a1.add(&d1.scale(&lo));
                let q = a1.add(&d1.scale(&hi));
                SegIntersection::Overlap { p, q }
            }
        }
    } else {
        // s = (a2−a1)×d2 / (d1×d2), t = (a2−a1)×d1 / (d1×d2)
        let s = r.cross(&d2) / denom.clone();
        let t = r.cross(&d1) / denom;
        let zero = QuadNum::zero();
        let one = QuadNum::one();
        if s < zero || s > one || t < zero || t > one {
            return SegIntersection::Empty;
        }
        let p = a1.add(&d1.scale(&s));
        SegIntersection::Point { p, s, t }
    }
}

fn param_of(p: &Point2, a: &Point2, d: &Vec2) -> QuadNum {
    // Parameter of p on the line a + t·d, using the dominant coordinate.
    if !d.x.is_zero() {
        (&p.x - &a.x) / d.x.clone()
    } else {
        (&p.y - &a.y) / d.y.clone()
    }
}

/// True if ray `v` lies strictly inside the counterclockwise wedge from
/// `from` to `to` (wedge angle may be anywhere in (0, 2π)).
pub fn in_ccw_wedge(from: &Vec2, to: &Vec2, v: &Vec2) -> bool {
    let c_ft = from.cross(to);
    let side_f = from.cross(v);
    let side_t = to.cross(v);
    if c_ft.is_positive() {
        // Wedge < π: strictly left of `from` and strictly right of `to`.
        side_f.is_positive() && side_t.is_negative()
    } else if c_ft.is_negative() {
        // Wedge > π: complement of the closed CW wedge.
        side_f.is_positive() || side_t.is_negative()
    } else if from.dot(to).is_negative() {
        // Wedge exactly π.
        side_f.is_positive()
    } else {
        // from and to are the same ray: empty wedge.
        false
    }
}

/// Number of half-turns swept by a closed chain of direction vectors where
/// each consecutive counterclockwise step is strictly less than π. The chain
/// must end on ±(its first vector). Exact.
pub fn half_turns(chain: &[Vec2]) -> u32 {
    // A step crosses the horizontal-axis direction class exactly when the
    // half-plane classifier changes; each crossing is half a turn.
    let upper = |v: &Vec2| -> bool {
        let sy = v.y.sign();
        sy > 0 || (sy == 0 && v.x.is_positive())
    };
    let mut k = 0u32;
    for w in chain.windows(2) {
        if upper(&w[0]) != upper(&w[1]) {
            k += 1;
        }
    }
    k
}

/// Splits the counterclockwise sweep from `a` to `b` (angle in (0, 2π)) into
/// direction vectors with consecutive steps < π, for use with `half_turns`.
pub fn split_sweep(a: &Vec2, b: &Vec2, out: &mut Vec<Vec2>) {
    out.push(a.clone());
    let c = a.cross(b);
    if c.is_positive() {
        // < π: nothing to insert.
    } else if c.is_zero() {
        // Exactly π (b = −a up to scale): one perpendicular.
        debug_assert!(a.dot(b).is_negative());
        out.push(a.rot90());
    } else {
        // > π: two quarter-turn inserts.
        out.push(a.rot90());
        out.push(a.neg());
    }
    out.push(b.clone());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadNum;

    fn pt(x: i64, y: i64) -> Point2 {
        Point2::new(QuadNum::from_int(x), QuadNum::from_int(y))
    }

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(QuadNum::from_int(x), QuadNum::from_int(y))
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), 1);
        assert_eq!(orient(&pt(0, 0), &pt(0, 1), &pt(1, 0)), -1);
        assert_eq!(orient(&pt(0, 0), &pt(1, 1), &pt(2, 2)), 0);
    }

    #[test]
    fn iso_composition() {
        // Two flips compose to a translation.
        let f1 = PlaneIso::flip_about(v(1, 0));
        let f2 = PlaneIso::flip_about(v(3, 2));
        let c = f2.compose(&f1);
        assert!(!c.flip);
        assert_eq!(c.t, v(2, 2));
        assert!(f1.compose(&f1).is_identity());
        let p = pt(5, -7);
        assert_eq!(c.apply(&p), pt(7, -5));
    }

    #[test]
    fn segment_intersections() {
        match seg_intersect(&pt(0, 0), &pt(2, 2), &pt(0, 2), &pt(2, 0)) {
            SegIntersection::Point { p, .. } => assert_eq!(p, pt(1, 1)),
            other => panic!("expected point, got {other:?}"),
        }
        match seg_intersect(&pt(0, 0), &pt(3, 0), &pt(1, 0), &pt(5, 0)) {
            SegIntersection::Overlap { p, q } => {
                assert_eq!(p, pt(1, 0));
                assert_eq!(q, pt(3, 0));
            }
            other => panic!("expected overlap, got {other:?}"),
        }
        assert_eq!(
            seg_intersect(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)),
            SegIntersection::Empty
        );
        // Touch at an endpoint is a point intersection.
        match seg_intersect(&pt(0, 0), &pt(1, 1), &pt(1, 1), &pt(2, 0)) {
            SegIntersection::Point { p, .. } => assert_eq!(p, pt(1, 1)),
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn wedge_membership() {
        // Quarter wedge from +x to +y.
        assert!(in_ccw_wedge(&v(1, 0), &v(0, 1), &v(1, 1)));
        assert!(!in_ccw_wedge(&v(1, 0), &v(0, 1), &v(1, -1)));
        // Reflex wedge from +x to −y (3π/2): −x is inside.
        assert!(in_ccw_wedge(&v(1, 0), &v(0, -1), &v(-1, 0)));
        assert!(!in_ccw_wedge(&v(1, 0), &v(0, -1), &v(1, -1)));
        // Straight wedge (π): +y inside, −y outside.
        assert!(in_ccw_wedge(&v(1, 0), &v(-1, 0), &v(0, 1)));
        assert!(!in_ccw_wedge(&v(1, 0), &v(-1, 0), &v(0, -1)));
    }

    #[test]
    fn half_turn_counting() {
        // Full square corner cycle: 4 quarter turns = 2 half-turns = 2π.
        let mut chain = Vec::new();
        split_sweep(&v(1, 0), &v(0, 1), &mut chain);
        split_sweep(&v(0, 1), &v(-1, 0), &mut chain);
        split_sweep(&v(-1, 0), &v(0, -1), &mut chain);
        split_sweep(&v(0, -1), &v(1, 0), &mut chain);
        assert_eq!(half_turns(&chain), 2);
        // A single straight angle is one half-turn.
        let mut chain = Vec::new();
        split_sweep(&v(1, 0), &v(-1, 0), &mut chain);
        assert_eq!(half_turns(&chain), 1);
    }
}
