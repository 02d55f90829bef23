//! Developing maps: chart-by-chart planar unrolling of paths.

use crate::curves::CurveSegment;
use crate::exact::QuadNum;
use crate::geom::plane::{PlaneIso, Point2};
use crate::surface::{Place, Surface};

#[derive(Debug, Clone, thiserror::Error)]
pub enum DevelopError {
    #[error("segment {0} does not connect to its successor")]
    BrokenChain(usize),
    #[error("segment {0} passes through a vertex")]
    ThroughVertex(usize),
}

/// A developed path: per-segment placements and the developed polyline.
/// For one period of a closed curve, `holonomy` is the deck transformation
/// identifying the start chart with its recurrence; it is the identity
/// exactly for paths developing to closed polylines with trivial total
/// placement.
#[derive(Debug, Clone)]
pub struct Development {
    pub steps: Vec<(usize, PlaneIso)>,
    pub points: Vec<Point2>,
    pub holonomy: PlaneIso,
}

impl Development {
    /// Total length of the developed polyline as exact L¹ (Σ|Δx|+|Δy|)
    /// parts; the true length is between L∞ and L¹ of each segment.
    pub fn l1_length(&self) -> QuadNum {
        let mut acc = QuadNum::zero();
        for w in self.points.windows(2) {
            let v = w[0].to(&w[1]);
            acc += &v.x.abs();
            acc += &v.y.abs();
        }
        acc
    }
}

/// The transition from the chart of `seg` to the chart of `next`, if the two
/// segments connect: either the same chart with equal junction points, or an
/// exit through a glued edge with matching image.
pub fn junction_iso(s: &Surface, seg: &CurveSegment, next: &CurveSegment) -> Option<PlaneIso> {
    if seg.poly == next.poly && seg.end == next.start {
        return Some(PlaneIso::identity());
    }
    if let Place::OnEdge(e) = s.locate(seg.poly, &seg.end) {
        let (partner, iso) = s.partner(crate::surface::EdgeRef::new(seg.poly, e));
        if partner.poly == next.poly && iso.apply(&seg.end) == next.start {
            return Some(iso);
        }
    }
    None
}

/// Develops the segment chain starting from the identity placement on the
/// first chart. For closed curves pass the cyclic chain once; `holonomy` is
/// then the placement of the wrapped-around start chart.
pub fn develop(s: &Surface, segs: &[CurveSegment], closed: bool) -> Result<Development, DevelopError> {
    assert!(!segs.is_empty());
    let mut steps: Vec<(usize, PlaneIso)> = Vec::with_capacity(segs.len());
    let mut points = Vec::with_capacity(segs.len() + 1);
    let mut place = PlaneIso::identity();
    points.push(place.apply(&segs[0].start));
    for (i, seg) in segs.iter().enumerate() {
        steps.push((seg.poly, place.clone()));
        points.push(place.apply(&seg.end));
        let next = if i + 1 < segs.len() {
            Some(&segs[i + 1])
        } else if closed {
            Some(&segs[0])
        } else {
            None
        };
        if let Some(n) = next {
            let iso = junction_iso(s, seg, n).ok_or(DevelopError::BrokenChain(i))?;
            place = place.compose(&iso.inverse());
        }
    }
    Ok(Development { steps, points, holonomy: place })
}

/// Develops `periods` copies of a closed chain, applying the holonomy
/// between periods; the resulting polyline has `periods·len + 1` points.
pub fn develop_periods(
    s: &Surface,
    segs: &[CurveSegment],
    periods: usize,
) -> Result<Development, DevelopError> {
    let one = develop(s, segs, true)?;
    let mut steps = Vec::with_capacity(segs.len() * periods);
    let mut points = Vec::with_capacity(segs.len() * periods + 1);
    points.push(one.points[0].clone());
    let mut shift = PlaneIso::identity();
    for _ in 0..periods {
        for (i, (poly, place)) in one.steps.iter().enumerate() {
            steps.push((*poly, shift.compose(place)));
            points.push(shift.apply(&one.points[i + 1]));
        }
        shift = shift.compose(&one.holonomy);
    }
    Ok(Development { steps, points, holonomy: shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::exact::rat;

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point2 {
        Point2::new(QuadNum::from_rat(rat(x.0, x.1)), QuadNum::from_rat(rat(y.0, y.1)))
    }

    fn seg(poly: usize, a: Point2, b: Point2) -> CurveSegment {
        CurveSegment { poly, start: a, end: b }
    }

    #[test]
    fn horizontal_torus_loop_develops_to_unit_step() {
        let s = builtin::square_torus();
        let segs = vec![seg(0, pt((0, 1), (1, 2)), pt((1, 1), (1, 2)))];
        let d = develop(&s, &segs, true).unwrap();
        assert_eq!(d.points, vec![pt((0, 1), (1, 2)), pt((1, 1), (1, 2))]);
        // Holonomy: translate back by (−1, 0) to recover the start chart.
        assert!(!d.holonomy.flip);
        assert_eq!(d.holonomy.t, pt((0, 1), (0, 1)).to(&pt((-1, 1), (0, 1))));
    }

    #[test]
    fn two_periods_develop_to_length_two() {
        let s = builtin::square_torus();
        let segs = vec![seg(0, pt((0, 1), (1, 2)), pt((1, 1), (1, 2)))];
        let d = develop_periods(&s, &segs, 2).unwrap();
        assert_eq!(d.points.last().unwrap(), &pt((2, 1), (1, 2)));
        assert_eq!(d.l1_length(), QuadNum::from_int(2));
    }

    #[test]
    fn double_flip_crossing_composes_to_translation() {
        // A vertical run on the pillowcase bouncing off the top and bottom
        // folds: crossing two flip gluings composes to a translation.
        let s = builtin::pillowcase();
        // Fold points are at side midpoints; run between (1/3, 0) and
        // (1/3, 1) vertically, crossing the top fold onto the reversed
        // chart, then back down.
        let up = seg(0, pt((1, 3), (0, 1)), pt((1, 3), (1, 1)));
        let down = seg(0, pt((2, 3), (1, 1)), pt((2, 3), (0, 1)));
        let d = develop(&s, &[up, down], false).unwrap();
        let (_, last_place) = &d.steps[1];
        assert!(last_place.flip, "one flip crossing flips the chart");
        // Continue across the bottom fold: composing two flips yields a
        // translation.
        let (_, iso) = s.partner(crate::surface::EdgeRef::new(0, 0));
        let net = last_place.compose(&iso.inverse());
        assert!(net.flip != last_place.flip);
    }
}
