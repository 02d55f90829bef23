//! Embedded piecewise-straight closed curves: validation, exact
//! intersections, simplicity and essentialness, bicorn surgery.

mod bicorn;
mod intersect;

pub use bicorn::{bicorn_path, bicorns, Bicorn, BicornPathError};
pub use intersect::{intersections, is_simple, Crossing, IntersectionReport, PathPos};

use crate::exact::QuadNum;
use crate::geom::develop::{develop, junction_iso, Development};
use crate::geom::plane::{seg_intersect, Point2, SegIntersection, Vec2};
use crate::surface::{Place, Surface};
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum CurveError {
    #[error("segment {0} is degenerate")]
    Degenerate(usize),
    #[error("segment {0} leaves its polygon")]
    LeavesPolygon(usize),
    #[error("segment {0} touches a polygon vertex")]
    TouchesVertex(usize),
    #[error("segment {0} touches an edge away from its breakpoints; split it there")]
    UnsplitEdgeContact(usize),
    #[error("segments {0} and {1} do not connect")]
    BrokenChain(usize, usize),
    #[error("curve is empty")]
    Empty,
}

/// One straight piece of a curve inside a single chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSegment {
    pub poly: usize,
    pub start: Point2,
    pub end: Point2,
}

impl CurveSegment {
    pub fn new(poly: usize, start: Point2, end: Point2) -> Self {
        CurveSegment { poly, start, end }
    }

    pub fn dir(&self) -> Vec2 {
        self.start.to(&self.end)
    }

    pub fn at(&self, t: &QuadNum) -> Point2 {
        self.start.add(&self.dir().scale(t))
    }
}

/// A closed piecewise-straight curve given as a cyclic chain of chart
/// segments. Construction checks the structural invariants (closed
/// connected chain, segments inside their polygons, breakpoints at all
/// boundary contacts, no vertex contact); embeddedness is checked by
/// `is_simple`, essentialness by `homology_class` / `is_essential`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlCurve {
    segs: Vec<CurveSegment>,
}

impl PlCurve {
    pub fn new(s: &Surface, segs: Vec<CurveSegment>) -> Result<Self, CurveError> {
        if segs.is_empty() {
            return Err(CurveError::Empty);
        }
        for (i, seg) in segs.iter().enumerate() {
            validate_segment(s, i, seg)?;
        }
        let n = segs.len();
        for i in 0..n {
            let next = &segs[(i + 1) % n];
            if junction_iso(s, &segs[i], next).is_none() {
                return Err(CurveError::BrokenChain(i, (i + 1) % n));
            }
        }
        Ok(PlCurve { segs })
    }

    pub fn segments(&self) -> &[CurveSegment] {
        &self.segs
    }

    pub fn len(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// The curve with reversed orientation.
    pub fn reversed(&self) -> PlCurve {
        let segs = self
            .segs
            .iter()
            .rev()
            .map(|s| CurveSegment::new(s.poly, s.end.clone(), s.start.clone()))
            .collect();
        PlCurve { segs }
    }

    /// Develops one period from breakpoint 0.
    pub fn develop(&self, s: &Surface) -> Development {
        develop(s, &self.segs, true).expect("validated curve develops")
    }

    /// Signed crossing counts through the loop gluings of the surface — a
    /// faithful first-homology label whenever the surface has a single
    /// vertex orbit (all shipped positive-genus surfaces do; on the
    /// pillowcase sphere the vector is empty and every class is zero).
    pub fn homology_class(&self, s: &Surface) -> Vec<i64> {
        let loops = s.loop_gluings();
        let mut counts = vec![0i64; loops.len()];
        let n = self.segs.len();
        for i in 0..n {
            let seg = &self.segs[i];
            let next = &self.segs[(i + 1) % n];
            if seg.poly == next.poly && seg.end == next.start {
                continue;
            }
            if let Place::OnEdge(e) = s.locate(seg.poly, &seg.end) {
                // Intersection sign with the identified edge, oriented along
                // side a: exiting through side b crosses positively.
                let (gi, is_a) = s.gluing_of(crate::surface::EdgeRef::new(seg.poly, e));
                if let Some(k) = loops.iter().position(|&l| l == gi) {
                    counts[k] += if is_a { -1 } else { 1 };
                }
            }
        }
        counts
    }

    /// Nonseparating ⟺ nonzero homology class, for simple curves.
    pub fn is_nonseparating(&self, s: &Surface) -> bool {
        self.homology_class(s).iter().any(|&c| c != 0)
    }

    /// Essentialness certificate: nonzero homology class, or nontrivial
    /// holonomy of the developed period (a contractible loop develops
    /// closed with the identity total placement). Exact on tori; on higher
    /// genus a curve failing both certificates is treated as inessential.
    pub fn is_essential(&self, s: &Surface) -> bool {
        if self.is_nonseparating(s) {
            return true;
        }
        let d = self.develop(s);
        !d.holonomy.is_identity() || d.points[0] != *d.points.last().unwrap()
    }

    /// Total L¹ bound for the curve length (reporting aid).
    pub fn l1_length(&self, s: &Surface) -> QuadNum {
        self.develop(s).l1_length()
    }
}

fn validate_segment(s: &Surface, i: usize, seg: &CurveSegment) -> Result<(), CurveError> {
    if seg.start == seg.end {
        return Err(CurveError::Degenerate(i));
    }
    let pg = &s.polygons[seg.poly];
    for p in [&seg.start, &seg.end] {
        match pg.locate(p) {
            Place::Outside => return Err(CurveError::LeavesPolygon(i)),
            Place::AtVertex(_) => return Err(CurveError::TouchesVertex(i)),
            _ => {}
        }
    }
    // No polygon vertex may lie on the segment.
    for v in &pg.vertices {
        if crate::geom::plane::point_on_segment(v, &seg.start, &seg.end)
            != crate::geom::plane::OnSegment::Off
        {
            return Err(CurveError::TouchesVertex(i));
        }
    }
    // Boundary contacts only at breakpoints or as full collinear runs.
    for e in 0..pg.len() {
        let (a, b) = pg.edge(e);
        match seg_intersect(&seg.start, &seg.end, a, b) {
            SegIntersection::Empty | SegIntersection::Overlap { .. } => {}
            SegIntersection::Point { s: sp, .. } => {
                if !(sp.is_zero() || sp == QuadNum::one()) {
                    return Err(CurveError::UnsplitEdgeContact(i));
                }
            }
        }
    }
    // Midpoint check pins the segment inside (needed for reflex polygons).
    if pg.locate(&seg.start.midpoint(&seg.end)) == Place::Outside {
        return Err(CurveError::LeavesPolygon(i));
    }
    Ok(())
}

/// Straight (p, q) loop on a one-polygon torus, offset to avoid vertices.
/// The class is measured against the (bottom↔top, right↔left) gluing basis:
/// the first coordinate counts upward wraps, the second rightward wraps.
pub fn torus_straight_loop(s: &Surface, up: i64, right: i64, offset: &QuadNum) -> PlCurve {
    let (u_side, u_up) = s.torus_lattice().expect("torus_straight_loop needs a torus");
    assert!(up != 0 || right != 0);
    let g = gcd(up.unsigned_abs(), right.unsigned_abs());
    assert_eq!(g, 1, "class must be primitive");
    // Target deck vector: right·u_side + up·u_up from a start point on the
    // bottom edge (or interior), traced chart by chart.
    let start = Point2::new(offset.clone(), QuadNum::ratio(1, 1000));
    let target = Vec2::new(
        &(&u_side.x * &QuadNum::from_int(right)) + &(&u_up.x * &QuadNum::from_int(up)),
        &(&u_side.y * &QuadNum::from_int(right)) + &(&u_up.y * &QuadNum::from_int(up)),
    );
    trace_loop(s, start, target)
}

/// Traces the straight loop from `start` with developed period `target`,
/// splitting at each edge crossing; panics if the line meets a vertex
/// (choose a different offset).
pub fn trace_loop(s: &Surface, start: Point2, target: Vec2) -> PlCurve {
    use crate::geom::trace::{trace_ray, RayHit};
    let mut segs = Vec::new();
    let mut poly = 0usize;
    let mut p = start;
    let mut dir = target;
    let mut covered = QuadNum::zero();
    loop {
        let hit = trace_ray(s, poly, &p, &dir);
        let remaining = QuadNum::one() - covered.clone();
        if *hit.t() >= remaining {
            let end = p.add(&dir.scale(&remaining));
            segs.push(CurveSegment::new(poly, p, end));
            break;
        }
        match hit {
            RayHit::Vertex { .. } => panic!("straight loop hits a vertex; adjust the offset"),
            RayHit::Edge { edge, p: q, t } => {
                segs.push(CurveSegment::new(poly, p.clone(), q.clone()));
                let (partner, iso) = s.partner(crate::surface::EdgeRef::new(poly, edge));
                p = iso.apply(&q);
                dir = iso.apply_vec(&dir);
                poly = partner.poly;
                covered += &t;
            }
        }
    }
    PlCurve::new(s, segs).expect("traced loop is structurally valid")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::exact::rat;

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point2 {
        Point2::new(QuadNum::from_rat(rat(x.0, x.1)), QuadNum::from_rat(rat(y.0, y.1)))
    }

    #[test]
    fn straight_loops_have_expected_classes() {
        let s = builtin::square_torus();
        let c = torus_straight_loop(&s, 1, 0, &QuadNum::ratio(1, 3));
        assert_eq!(c.homology_class(&s), vec![1, 0]);
        assert!(c.is_nonseparating(&s));
        assert!(c.is_essential(&s));
        let c = torus_straight_loop(&s, 1, 2, &QuadNum::ratio(1, 7));
        assert_eq!(c.homology_class(&s), vec![1, 2]);
    }

    #[test]
    fn contractible_loop_is_inessential_and_separating() {
        let s = builtin::square_torus();
        // A small triangle inside the square.
        let segs = vec![
            CurveSegment::new(0, pt((1, 4), (1, 4)), pt((1, 2), (1, 4))),
            CurveSegment::new(0, pt((1, 2), (1, 4)), pt((1, 4), (1, 2))),
            CurveSegment::new(0, pt((1, 4), (1, 2)), pt((1, 4), (1, 4))),
        ];
        let c = PlCurve::new(&s, segs).unwrap();
        assert_eq!(c.homology_class(&s), vec![0, 0]);
        assert!(!c.is_essential(&s));
    }

    #[test]
    fn validation_rejects_bad_chains() {
        let s = builtin::square_torus();
        let segs = vec![
            CurveSegment::new(0, pt((1, 4), (1, 4)), pt((1, 2), (1, 4))),
            CurveSegment::new(0, pt((3, 4), (1, 4)), pt((1, 4), (1, 4))),
        ];
        assert!(matches!(PlCurve::new(&s, segs), Err(CurveError::BrokenChain(0, 1))));
        let segs = vec![CurveSegment::new(0, pt((0, 1), (0, 1)), pt((1, 2), (1, 2)))];
        assert!(matches!(PlCurve::new(&s, segs), Err(CurveError::TouchesVertex(0))));
        let segs = vec![CurveSegment::new(0, pt((1, 4), (1, 2)), pt((3, 2), (1, 2)))];
        assert!(matches!(PlCurve::new(&s, segs), Err(CurveError::LeavesPolygon(0))));
    }

    #[test]
    fn golden_loop_traces_in_field_coordinates() {
        let s = builtin::golden_torus();
        let c = torus_straight_loop(&s, 1, 0, &QuadNum::ratio(1, 3));
        assert_eq!(c.homology_class(&s), vec![1, 0]);
        // One upward wrap crosses the bottom↔top gluing once and the side
        // gluing at most once.
        assert!(c.len() <= 3);
    }
}
