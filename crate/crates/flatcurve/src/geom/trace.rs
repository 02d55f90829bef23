//! Chart-local ray tracing and canonical surface positions.

use crate::exact::QuadNum;
use crate::geom::plane::{Point2, Vec2};
use crate::surface::{Place, Surface};

/// A surface point in chart coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChartPoint {
    pub poly: usize,
    pub p: Point2,
}

impl ChartPoint {
    pub fn new(poly: usize, p: Point2) -> Self {
        ChartPoint { poly, p }
    }

    /// Canonical representative of the underlying surface point: interior
    /// points are their own representative, edge points take the
    /// lexicographically least of their two chart copies. Vertex points are
    /// not supported by the curve machinery and are returned unchanged.
    pub fn canonical(&self, s: &Surface) -> ChartPoint {
        match s.locate(self.poly, &self.p) {
            Place::OnEdge(e) => {
                let (partner, iso) = s.partner(crate::surface::EdgeRef::new(self.poly, e));
                let q = iso.apply(&self.p);
                let a = (self.poly, &self.p);
                let b = (partner.poly, &q);
                if b.0 < a.0 || (b.0 == a.0 && q.lex_cmp(&self.p).is_lt()) {
                    ChartPoint { poly: partner.poly, p: q }
                } else {
                    self.clone()
                }
            }
            _ => self.clone(),
        }
    }

    /// Whether two chart points describe the same surface point.
    pub fn same_point(&self, other: &ChartPoint, s: &Surface) -> bool {
        self.canonical(s) == other.canonical(s)
    }
}

/// First boundary contact of a chart ray, strictly ahead of the start.
#[derive(Clone, Debug)]
pub enum RayHit {
    /// Exits the polygon through the interior of `edge` at `p`,
    /// `t` the exact ray parameter of the contact.
    Edge { edge: usize, p: Point2, t: QuadNum },
    /// Reaches polygon vertex `vertex` exactly.
    Vertex { vertex: usize, p: Point2, t: QuadNum },
}

impl RayHit {
    pub fn t(&self) -> &QuadNum {
        match self {
            RayHit::Edge { t, .. } | RayHit::Vertex { t, .. } => t,
        }
    }

    pub fn point(&self) -> &Point2 {
        match self {
            RayHit::Edge { p, .. } | RayHit::Vertex { p, .. } => p,
        }
    }
}

/// Traces the ray `start + t·dir`, t > 0, inside polygon `poly` up to its
/// first boundary contact. The caller guarantees the ray immediately enters
/// the closed polygon (start inside, or on the boundary pointing inward or
/// along it). Handles rays running along boundary edges: the contact is then
/// the far vertex of the collinear run.
pub fn trace_ray(s: &Surface, poly: usize, start: &Point2, dir: &Vec2) -> RayHit {
    debug_assert!(!dir.is_zero());
    let pg = &s.polygons[poly];
    let n = pg.len();
    let mut best: Option<RayHit> = None;
    let mut consider = |hit: RayHit| {
        let better = match &best {
            None => true,
            Some(b) => {
                let c = hit.t().cmp(b.t());
                // Prefer vertex hits at equal parameter: an exit exactly at a
                // vertex must be classified as a vertex contact.
                c.is_lt()
                    || (c.is_eq()
                        && matches!(hit, RayHit::Vertex { .. })
                        && matches!(b, RayHit::Edge { .. }))
            }
        };
        if better {
            best = Some(hit);
        }
    };
    for e in 0..n {
        let (a, b) = pg.edge(e);
        let ev = a.to(b);
        let denom = dir.cross(&ev);
        let sa = start.to(a);
        if denom.is_zero() {
            // Parallel; collinear only if start–a is also parallel to dir.
            if sa.cross(dir).is_zero() {
                for (vi, v) in [(e, a), ((e + 1) % n, b)] {
                    let t = project_param(start, dir, v);
                    if t.is_positive() {
                        consider(RayHit::Vertex { vertex: vi, p: v.clone(), t });
                    }
                }
            }
            continue;
        }
        // start + t·dir = a + u·ev  ⇒  t = (sa × ev)/(dir × ev), u = (sa × dir)/(dir × ev)
        let t = sa.cross(&ev) / denom.clone();
        let u = sa.cross(dir) / denom;
        if !t.is_positive() {
            continue;
        }
        let zero = QuadNum::zero();
        let one = QuadNum::one();
        if u < zero || u > one {
            continue;
        }
        let p = start.add(&dir.scale(&t));
        if u.is_zero() {
            consider(RayHit::Vertex { vertex: e, p, t });
        } else if u == one {
            consider(RayHit::Vertex { vertex: (e + 1) % n, p, t });
        } else {
            consider(RayHit::Edge { edge: e, p, t });
        }
    }
    best.expect("ray entering a closed polygon must reach its boundary")
}

fn project_param(start: &Point2, dir: &Vec2, v: &Point2) -> QuadNum {
    let sv = start.to(v);
    if !dir.x.is_zero() {
        sv.x / dir.x.clone()
    } else {
        sv.y / dir.y.clone()
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
    fn vertical_ray_exits_top() {
        let s = builtin::square_torus();
        let hit = trace_ray(&s, 0, &pt((1, 2), (1, 4)), &Vec2::new(QuadNum::zero(), QuadNum::one()));
        match hit {
            RayHit::Edge { edge, p, t } => {
                assert_eq!(edge, 2);
                assert_eq!(p, pt((1, 2), (1, 1)));
                assert_eq!(t, QuadNum::ratio(3, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ray_along_edge_stops_at_vertex() {
        let s = builtin::square_torus();
        let hit = trace_ray(&s, 0, &pt((0, 1), (1, 2)), &Vec2::new(QuadNum::zero(), QuadNum::one()));
        match hit {
            RayHit::Vertex { vertex, .. } => assert_eq!(vertex, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagonal_ray_reaches_corner() {
        let s = builtin::square_torus();
        let hit = trace_ray(&s, 0, &pt((0, 1), (0, 1)), &Vec2::new(QuadNum::one(), QuadNum::one()));
        match hit {
            RayHit::Vertex { vertex, t, .. } => {
                assert_eq!(vertex, 2);
                assert_eq!(t, QuadNum::one());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_edge_points_agree() {
        let s = builtin::square_torus();
        // (1/3, 0) on the bottom edge equals (1/3, 1) on the top edge.
        let a = ChartPoint::new(0, pt((1, 3), (0, 1)));
        let b = ChartPoint::new(0, pt((1, 3), (1, 1)));
        assert!(a.same_point(&b, &s));
        assert!(!a.same_point(&ChartPoint::new(0, pt((2, 3), (0, 1))), &s));
    }
}
