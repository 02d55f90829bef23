//! Half-translation surfaces as polygon gluings.
//!
//! A surface is a finite set of simple plane polygons with coordinates in
//! Q(√d), together with a perfect matching of their edges; each matched pair
//! is identified by a translation `z ↦ z + c` or a flip `z ↦ −z + c`. Both
//! maps preserve plane orientation, so the quotient is an oriented surface
//! whose cone angles are automatically integer multiples of π. Vertical and
//! horizontal line fields descend from the charts.

mod cover;
mod loader;

pub use cover::{build_resolving_cover, ResolvingCover};
pub use loader::load_surface_str;

use crate::exact::QuadNum;
use crate::geom::plane::{
    half_turns, point_on_segment, split_sweep, OnSegment, PlaneIso, Point2, Vec2,
};
use std::collections::HashMap;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SurfaceError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("field context mismatch: literal `{literal}` does not live in Q(√{d})")]
    FieldContext { literal: String, d: u64 },
    #[error("polygon {0}: {1}")]
    BadPolygon(String, String),
    #[error("gluing {a} ↔ {b}: edges have unequal or non-parallel vectors")]
    EdgeMismatch { a: String, b: String },
    #[error("gluing {a} ↔ {b}: {kind} gluing has the wrong boundary orientation")]
    Orientation { a: String, b: String, kind: String },
    #[error("edge {0} is glued {1} times; the gluing must be a perfect matching")]
    NotAMatching(String, usize),
    #[error("gluing graph is disconnected")]
    Disconnected,
    #[error("cone angle at vertex orbit {0} is not a positive multiple of π")]
    BadConeAngle(usize),
    #[error("Gauss–Bonnet violated: Σ(2−k) = {lhs}, 2χ = {rhs}")]
    GaussBonnet { lhs: i64, rhs: i64 },
    #[error("automorphism {name}: {msg}")]
    BadAuto { name: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(poly: usize, edge: usize) -> Self {
        EdgeRef { poly, edge }
    }
}

impl std::fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "P{}.{}", self.poly, self.edge)
    }
}

/// A corner of a polygon: vertex `vertex` between edges `vertex−1` and `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Corner {
    pub poly: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum GluingKind {
    Translation,
    Flip,
}

#[derive(Debug, Clone)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub kind: GluingKind,
}

#[derive(Debug, Clone)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
}

/// Exact location of a point relative to a polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Outside,
    Interior,
    OnEdge(usize),
    AtVertex(usize),
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Endpoints of edge `i`, from vertex `i` to vertex `i+1`.
    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        let n = self.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edge_vec(&self, i: usize) -> Vec2 {
        let (a, b) = self.edge(i);
        a.to(b)
    }

    /// Twice the signed area (shoelace).
    pub fn double_area(&self) -> QuadNum {
        let mut acc = QuadNum::zero();
        let n = self.len();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            acc += &(&(&p.x * &q.y) - &(&p.y * &q.x));
        }
        acc
    }

    /// Exact point location via ray casting, with boundary classification.
    pub fn locate(&self, p: &Point2) -> Place {
        let n = self.len();
        for (i, v) in self.vertices.iter().enumerate() {
            if v == p {
                return Place::AtVertex(i);
            }
        }
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_on_segment(p, a, b) == OnSegment::Interior {
                return Place::OnEdge(i);
            }
        }
        // Crossing-number parity of the horizontal ray to +∞.
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let (ay, by) = (&a.y, &b.y);
            let up = ay.cmp(&p.y);
            let vp = by.cmp(&p.y);
            if (up == std::cmp::Ordering::Greater) != (vp == std::cmp::Ordering::Greater) {
                // x coordinate of the edge at height p.y
                let t = (&p.y - ay) / (by - ay);
                let x = &a.x + &(&(&b.x - &a.x) * &t);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        if inside {
            Place::Interior
        } else {
            Place::Outside
        }
    }

    fn validate(&self, name: &str) -> Result<(), SurfaceError> {
        let err = |msg: &str| SurfaceError::BadPolygon(name.to_string(), msg.to_string());
        let n = self.len();
        if n < 3 {
            return Err(err("fewer than 3 vertices"));
        }
        for i in 0..n {
            if self.edge_vec(i).is_zero() {
                return Err(err("repeated consecutive vertices"));
            }
        }
        if !self.double_area().is_positive() {
            return Err(err("vertices must be in counterclockwise order"));
        }
        // Corner angles must be in (0, 2π): outgoing ray ≠ incoming ray.
        for i in 0..n {
            let out = self.edge_vec(i);
            let inc = self.edge_vec((i + n - 1) % n).neg();
            if out.same_ray(&inc) {
                return Err(err("zero-angle corner"));
            }
        }
        // Simplicity: non-adjacent edges disjoint, adjacent share one point.
        use crate::geom::plane::{seg_intersect, SegIntersection};
        for i in 0..n {
            for j in (i + 1)..n {
                let (a1, b1) = self.edge(i);
                let (a2, b2) = self.edge(j);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match seg_intersect(a1, b1, a2, b2) {
                    SegIntersection::Empty => {}
                    SegIntersection::Point { ref p, .. } if adjacent => {
                        let shared = if j == i + 1 { b1 } else { a1 };
                        if p != shared {
                            return Err(err("adjacent edges touch away from their joint"));
                        }
                    }
                    _ => return Err(err("boundary is not simple")),
                }
            }
        }
        Ok(())
    }
}

/// A vertex orbit of the gluing, with its cone angle k·π.
#[derive(Debug, Clone)]
pub struct VertexOrbit {
    /// Corners in counterclockwise walk order around the point.
    pub corners: Vec<Corner>,
    /// Cone angle in units of π.
    pub angle_pi: u32,
}

/// A singular point report: orbit index and angle multiple k (θ = kπ, k ≠ 2).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConePoint {
    pub orbit: usize,
    pub angle_pi: u32,
    pub corners: usize,
}

/// Declared affine symmetry, verified by the dynamics module.
#[derive(Debug, Clone)]
pub struct AutoSpec {
    pub name: String,
    /// Row-major plane matrix [[m00, m01], [m10, m11]].
    pub matrix: [QuadNum; 4],
    /// Optional combinatorial data: (src polygon, dst polygon, offset),
    /// meaning `M·z + offset` maps polygon src onto polygon dst.
    pub maps: Vec<(usize, usize, Vec2)>,
}

#[derive(Debug, Clone)]
pub struct Surface {
    pub d: u64,
    pub name: String,
    pub polygons: Vec<Polygon>,
    pub poly_names: Vec<String>,
    pub gluings: Vec<Gluing>,
    pub autos: Vec<AutoSpec>,
    /// edge → (gluing index, true when the edge is side `a`).
    edge_gluing: HashMap<EdgeRef, (usize, bool)>,
    orbits: Vec<VertexOrbit>,
    corner_orbit: HashMap<Corner, (usize, usize)>,
}

impl Surface {
    /// Assembles and fully validates a surface from raw parts.
    pub fn assemble(
        name: String,
        d: u64,
        polygons: Vec<Polygon>,
        poly_names: Vec<String>,
        gluings: Vec<Gluing>,
        autos: Vec<AutoSpec>,
    ) -> Result<Self, SurfaceError> {
        for (p, nm) in polygons.iter().zip(&poly_names) {
            p.validate(nm)?;
        }
        // Perfect matching.
        let mut edge_gluing = HashMap::new();
        let mut seen: HashMap<EdgeRef, usize> = HashMap::new();
        for g in &gluings {
            *seen.entry(g.a).or_insert(0) += 1;
            *seen.entry(g.b).or_insert(0) += 1;
        }
        for (pi, poly) in polygons.iter().enumerate() {
            for e in 0..poly.len() {
                let r = EdgeRef::new(pi, e);
                match seen.get(&r) {
                    Some(1) => {}
                    other => {
                        return Err(SurfaceError::NotAMatching(
                            r.to_string(),
                            other.copied().unwrap_or(0),
                        ))
                    }
                }
            }
        }
        for (gi, g) in gluings.iter().enumerate() {
            edge_gluing.insert(g.a, (gi, true));
            edge_gluing.insert(g.b, (gi, false));
        }

        let mut s = Surface {
            d,
            name,
            polygons,
            poly_names,
            gluings,
            autos,
            edge_gluing,
            orbits: Vec::new(),
            corner_orbit: HashMap::new(),
        };
        s.validate_gluings()?;
        s.check_connected()?;
        s.compute_orbits()?;
        s.check_gauss_bonnet()?;
        Ok(s)
    }

    fn validate_gluings(&self) -> Result<(), SurfaceError> {
        for g in &self.gluings {
            let va = self.polygons[g.a.poly].edge_vec(g.a.edge);
            let vb = self.polygons[g.b.poly].edge_vec(g.b.edge);
            let (want, kind) = match g.kind {
                // Orientation rule: a translation-glued pair has anti-parallel
                // boundary vectors, a flip-glued pair equal ones.
                GluingKind::Translation => (va.neg(), "translation"),
                GluingKind::Flip => (va.clone(), "flip"),
            };
            if vb != want {
                // Distinguish "not even parallel/equal length" from a pure
                // orientation problem for better diagnostics.
                if !va.is_parallel(&vb) || va.norm_sq() != vb.norm_sq() {
                    return Err(SurfaceError::EdgeMismatch {
                        a: g.a.to_string(),
                        b: g.b.to_string(),
                    });
                }
                return Err(SurfaceError::Orientation {
                    a: g.a.to_string(),
                    b: g.b.to_string(),
                    kind: kind.to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), SurfaceError> {
        let n = self.polygons.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in 0..self.polygons[p].len() {
                let (q, _) = self.partner(EdgeRef::new(p, e));
                if !seen[q.poly] {
                    seen[q.poly] = true;
                    stack.push(q.poly);
                }
            }
        }
        if seen.iter().all(|&b| b) {
            Ok(())
        } else {
            Err(SurfaceError::Disconnected)
        }
    }

    /// The glued partner of an edge and the chart transition from the edge's
    /// own chart into the partner's chart.
    pub fn partner(&self, e: EdgeRef) -> (EdgeRef, PlaneIso) {
        let &(gi, is_a) = self.edge_gluing.get(&e).expect("edge not in gluing");
        let g = &self.gluings[gi];
        let other = if is_a { g.b } else { g.a };
        let (tail_e, _) = self.polygons[e.poly].edge(e.edge);
        let (_, head_o) = self.polygons[other.poly].edge(other.edge);
        let iso = match g.kind {
            // φ(tail(e)) = head(e′) pins down the constant.
            GluingKind::Translation => PlaneIso::translation(tail_e.to(head_o)),
            GluingKind::Flip => PlaneIso::flip_about(Vec2::new(
                &tail_e.x + &head_o.x,
                &tail_e.y + &head_o.y,
            )),
        };
        (other, iso)
    }

    pub fn gluing_of(&self, e: EdgeRef) -> (usize, bool) {
        *self.edge_gluing.get(&e).expect("edge not in gluing")
    }

    /// Counterclockwise-next corner around the vertex of `c`, crossing the
    /// edge that ends at the corner's vertex. Returns the corner and whether
    /// the crossed gluing flips directions.
    pub fn corner_ccw(&self, c: Corner) -> (Corner, bool) {
        let n = self.polygons[c.poly].len();
        let e_in = EdgeRef::new(c.poly, (c.vertex + n - 1) % n);
        let (other, iso) = self.partner(e_in);
        // φ(head(e_in)) = tail(partner): land on the partner's tail vertex.
        (Corner { poly: other.poly, vertex: other.edge }, iso.flip)
    }

    /// Clockwise-next corner, crossing the edge that starts at the vertex.
    pub fn corner_cw(&self, c: Corner) -> (Corner, bool) {
        let e_out = EdgeRef::new(c.poly, c.vertex);
        let (other, iso) = self.partner(e_out);
        let n = self.polygons[other.poly].len();
        // φ(tail(e_out)) = head(partner).
        (Corner { poly: other.poly, vertex: (other.edge + 1) % n }, iso.flip)
    }

    /// Outgoing ray of a corner (along edge `vertex`) and incoming ray
    /// (toward vertex `vertex−1`); the corner's interior sweeps CCW from the
    /// outgoing to the incoming ray.
    pub fn corner_rays(&self, c: Corner) -> (Vec2, Vec2) {
        let poly = &self.polygons[c.poly];
        let n = poly.len();
        let out = poly.edge_vec(c.vertex);
        let inc = poly.edge_vec((c.vertex + n - 1) % n).neg();
        (out, inc)
    }

    fn compute_orbits(&mut self) -> Result<(), SurfaceError> {
        let mut visited: HashMap<Corner, bool> = HashMap::new();
        let mut orbits = Vec::new();
        for pi in 0..self.polygons.len() {
            for vi in 0..self.polygons[pi].len() {
                let start = Corner { poly: pi, vertex: vi };
                if visited.contains_key(&start) {
                    continue;
                }
                let mut corners = Vec::new();
                let mut chain: Vec<Vec2> = Vec::new();
                let mut sign = false; // accumulated flip parity
                let mut cur = start;
                loop {
                    visited.insert(cur, true);
                    corners.push(cur);
                    let (out, inc) = self.corner_rays(cur);
                    let (a, b) = if sign { (out.neg(), inc.neg()) } else { (out, inc) };
                    if !chain.is_empty() {
                        debug_assert_eq!(chain.last(), Some(&a), "corner fan must be continuous");
                    }
                    split_sweep(&a, &b, &mut chain);
                    let (next, flip) = self.corner_ccw(cur);
                    sign ^= flip;
                    cur = next;
                    if cur == start {
                        break;
                    }
                }
                let k = half_turns(&chain);
                if k == 0 {
                    return Err(SurfaceError::BadConeAngle(orbits.len()));
                }
                orbits.push(VertexOrbit { corners, angle_pi: k });
            }
        }
        self.orbits = orbits;
        self.corner_orbit = self
            .orbits
            .iter()
            .enumerate()
            .flat_map(|(oi, o)| {
                o.corners.iter().enumerate().map(move |(ci, &c)| (c, (oi, ci)))
            })
            .collect();
        Ok(())
    }

    fn check_gauss_bonnet(&self) -> Result<(), SurfaceError> {
        let lhs: i64 = self.orbits.iter().map(|o| 2 - o.angle_pi as i64).sum();
        let rhs = 2 * self.euler_characteristic();
        if lhs != rhs {
            return Err(SurfaceError::GaussBonnet { lhs, rhs });
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.orbits.len() as i64;
        let e = self.gluings.len() as i64;
        let f = self.polygons.len() as i64;
        v - e + f
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    pub fn orbits(&self) -> &[VertexOrbit] {
        &self.orbits
    }

    pub fn orbit_of(&self, c: Corner) -> (usize, usize) {
        *self.corner_orbit.get(&c).expect("corner out of range")
    }

    /// All singular vertex orbits (cone angle ≠ 2π), in orbit order.
    pub fn cone_points(&self) -> Vec<ConePoint> {
        self.orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| o.angle_pi != 2)
            .map(|(i, o)| ConePoint { orbit: i, angle_pi: o.angle_pi, corners: o.corners.len() })
            .collect()
    }

    /// The distinguished set P of angle-π singularities, as orbit indices.
    pub fn angle_pi_points(&self) -> Vec<usize> {
        self.orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| o.angle_pi == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn area(&self) -> QuadNum {
        let mut acc = QuadNum::zero();
        for p in &self.polygons {
            acc += &p.double_area();
        }
        acc * QuadNum::ratio(1, 2)
    }

    /// For single-polygon surfaces glued entirely by translations (flat
    /// tori), the two translation vectors spanning the deck lattice.
    pub fn torus_lattice(&self) -> Option<(Vec2, Vec2)> {
        if self.polygons.len() != 1 || self.gluings.len() != 2 {
            return None;
        }
        let mut vs = Vec::new();
        for g in &self.gluings {
            if g.kind != GluingKind::Translation {
                return None;
            }
            let (_, iso) = self.partner(g.a);
            vs.push(iso.t);
        }
        let (u, w) = (vs.remove(0), vs.remove(0));
        if u.cross(&w).is_zero() {
            return None;
        }
        Some((u, w))
    }

    /// True when every vertex orbit is regular (angle 2π); then the universal
    /// cover develops isometrically onto the plane and all geodesics are
    /// straight segments.
    pub fn is_plane_cover(&self) -> bool {
        self.orbits.iter().all(|o| o.angle_pi == 2)
    }

    pub fn locate(&self, poly: usize, p: &Point2) -> Place {
        self.polygons[poly].locate(p)
    }

    /// Orders the gluings as a homology reference: gluing index g carries the
    /// signed crossing count of a curve through that identified edge. Only
    /// gluings whose identified edge is a loop (both endpoints in the same
    /// vertex orbit) yield homology invariants.
    pub fn loop_gluings(&self) -> Vec<usize> {
        (0..self.gluings.len())
            .filter(|&gi| {
                let g = &self.gluings[gi];
                let n = self.polygons[g.a.poly].len();
                let tail = Corner { poly: g.a.poly, vertex: g.a.edge };
                let head = Corner { poly: g.a.poly, vertex: (g.a.edge + 1) % n };
                self.orbit_of(tail).0 == self.orbit_of(head).0
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn square_torus_has_no_singularities() {
        let s = builtin::square_torus();
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.cone_points().is_empty());
        assert_eq!(s.orbits().len(), 1);
        assert_eq!(s.orbits()[0].angle_pi, 2);
        assert_eq!(s.area(), QuadNum::one());
        assert!(s.torus_lattice().is_some());
    }

    #[test]
    fn pillowcase_has_four_angle_pi_points() {
        let s = builtin::pillowcase();
        // Sphere: χ = 2, four k = 1 singular orbits at the folded midpoints,
        // one regular orbit collecting the four corners.
        assert_eq!(s.euler_characteristic(), 2);
        let cones = s.cone_points();
        assert_eq!(cones.len(), 4);
        assert!(cones.iter().all(|c| c.angle_pi == 1));
        assert_eq!(s.angle_pi_points().len(), 4);
        assert_eq!(s.orbits().len(), 5);
    }

    #[test]
    fn l_origami_has_one_6pi_point() {
        let s = builtin::l_origami();
        assert_eq!(s.euler_characteristic(), -2);
        assert_eq!(s.genus(), 2);
        let cones = s.cone_points();
        assert_eq!(cones.len(), 1);
        assert_eq!(cones[0].angle_pi, 6);
        assert_eq!(cones[0].corners, 12);
        assert!(s.angle_pi_points().is_empty());
        assert_eq!(s.area(), QuadNum::from_int(3));
    }

    #[test]
    fn golden_torus_shape() {
        let s = builtin::golden_torus();
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.cone_points().is_empty());
        assert_eq!(s.area(), QuadNum::one());
        assert_eq!(s.d, 5);
    }

    #[test]
    fn orbits_partition_the_corners() {
        for s in [
            builtin::square_torus(),
            builtin::golden_torus(),
            builtin::pillowcase(),
            builtin::l_origami(),
        ] {
            let total: usize = s.orbits().iter().map(|o| o.corners.len()).sum();
            let expect: usize = s.polygons.iter().map(|p| p.len()).sum();
            assert_eq!(total, expect, "{}", s.name);
            let mut seen = std::collections::HashSet::new();
            for o in s.orbits() {
                for c in &o.corners {
                    assert!(seen.insert(*c), "corner repeated in {}", s.name);
                }
            }
        }
    }

    #[test]
    fn locate_classifies_points() {
        let s = builtin::square_torus();
        let p = |x: (i64, i64), y: (i64, i64)| {
            Point2::new(
                QuadNum::from_rat(crate::exact::rat(x.0, x.1)),
                QuadNum::from_rat(crate::exact::rat(y.0, y.1)),
            )
        };
        assert_eq!(s.locate(0, &p((1, 2), (1, 2))), Place::Interior);
        assert_eq!(s.locate(0, &p((1, 2), (0, 1))), Place::OnEdge(0));
        assert_eq!(s.locate(0, &p((0, 1), (0, 1))), Place::AtVertex(0));
        assert_eq!(s.locate(0, &p((3, 1), (1, 2))), Place::Outside);
    }
}
