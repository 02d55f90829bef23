//! Unfolded balls of the universal cover of a (resolving-cover) surface.
//!
//! Cells are polygon copies with a plane placement `z ↦ ±z + c`; the complex
//! grows breadth-first by polygon adjacency from a seed chart or seed chain.
//! Around every lifted vertex the corner fan is tracked: once all corners of
//! the base vertex orbit are present, the two extreme edges are identified,
//! so the complex is exactly a combinatorial ball in the universal cover —
//! cells are never deduplicated by placement (the developing map of a cone
//! surface is not injective), only by fan closure.

use crate::exact::QuadNum;
use crate::geom::len::Length;
use crate::geom::plane::{PlaneIso, Point2, Vec2};
use crate::geom::trace::{trace_ray, RayHit};
use crate::surface::{Corner, EdgeRef, Place, Surface};
use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct Cell {
    pub poly: usize,
    pub place: PlaneIso,
    pub depth: u32,
    nbr: Vec<Option<usize>>,
}

/// A lifted vertex: the corners of its (possibly partial) fan in
/// counterclockwise order, its developed position, and whether the full
/// cone angle is present.
#[derive(Clone, Debug)]
pub struct VertexNode {
    pub dev: Point2,
    pub orbit: usize,
    pub corners: Vec<(usize, usize)>, // (cell, vertex index)
    pub closed: bool,
}

pub struct Unfolding<'s> {
    pub surface: &'s Surface,
    pub cells: Vec<Cell>,
    nodes: Vec<VertexNode>,
    corner_node: Vec<Vec<usize>>, // per cell, per vertex
}

/// A point of the complex: cell plus chart-local coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellPoint {
    pub cell: usize,
    pub p: Point2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Blocked {
    /// The chord leaves the built complex through an unglued edge.
    Boundary,
    /// The chord meets a lifted vertex strictly inside.
    Vertex,
}

impl<'s> Unfolding<'s> {
    /// Grows a ball of combinatorial `radius` around a single seed chart
    /// placed with the identity.
    pub fn from_chart(surface: &'s Surface, poly: usize, radius: u32) -> Self {
        Self::from_seeds(surface, vec![(poly, PlaneIso::identity())], &[], radius)
    }

    /// Grows around a developed chain of charts; `links[i]` is the edge of
    /// chain cell i crossed into cell i+1.
    pub fn from_chain(
        surface: &'s Surface,
        chain: Vec<(usize, PlaneIso)>,
        links: &[usize],
        radius: u32,
    ) -> Self {
        Self::from_seeds(surface, chain, links, radius)
    }

    fn from_seeds(
        surface: &'s Surface,
        seeds: Vec<(usize, PlaneIso)>,
        links: &[usize],
        radius: u32,
    ) -> Self {
        assert!(!seeds.is_empty());
        let mut u = Unfolding { surface, cells: Vec::new(), nodes: Vec::new(), corner_node: Vec::new() };
        for (poly, place) in seeds {
            let n = surface.polygons[poly].len();
            u.cells.push(Cell { poly, place, depth: 0, nbr: vec![None; n] });
        }
        // Link the seed chain and run closure on the links.
        let mut work: Vec<(usize, usize)> = Vec::new();
        for (i, &e) in links.iter().enumerate() {
            u.link(i, e, i + 1, &mut work);
        }
        for i in 0..u.cells.len() {
            for v in 0..u.surface.polygons[u.cells[i].poly].len() {
                work.push((i, v));
            }
        }
        u.drain_closures(&mut work);

        let mut queue: VecDeque<usize> = (0..u.cells.len()).collect();
        while let Some(c) = queue.pop_front() {
            if u.cells[c].depth >= radius {
                continue;
            }
            let n = u.surface.polygons[u.cells[c].poly].len();
            for e in 0..n {
                if u.cells[c].nbr[e].is_some() {
                    continue;
                }
                let new = u.spawn(c, e, &mut work);
                u.drain_closures(&mut work);
                queue.push_back(new);
            }
        }
        u.build_nodes();
        u
    }

    fn spawn(&mut self, c: usize, e: usize, work: &mut Vec<(usize, usize)>) -> usize {
        let cell = &self.cells[c];
        let (other, iso) = self.surface.partner(EdgeRef::new(cell.poly, e));
        let place = cell.place.compose(&iso.inverse());
        let depth = cell.depth + 1;
        let n = self.surface.polygons[other.poly].len();
        let id = self.cells.len();
        self.cells.push(Cell { poly: other.poly, place, depth, nbr: vec![None; n] });
        self.link(c, e, id, work);
        for v in 0..n {
            work.push((id, v));
        }
        id
    }

    /// Mutually links cell `a` across its edge `e` with cell `b` (whose side
    /// is the glued partner edge), then queues closure checks at the shared
    /// endpoints.
    fn link(&mut self, a: usize, e: usize, b: usize, work: &mut Vec<(usize, usize)>) {
        let pa = self.cells[a].poly;
        let (other, _) = self.surface.partner(EdgeRef::new(pa, e));
        debug_assert_eq!(other.poly, self.cells[b].poly);
        self.cells[a].nbr[e] = Some(b);
        self.cells[b].nbr[other.edge] = Some(a);
        let na = self.surface.polygons[pa].len();
        let nb = self.surface.polygons[other.poly].len();
        work.push((a, e));
        work.push((a, (e + 1) % na));
        work.push((b, other.edge));
        work.push((b, (other.edge + 1) % nb));
    }

    fn drain_closures(&mut self, work: &mut Vec<(usize, usize)>) {
        while let Some((c, v)) = work.pop() {
            self.try_close(c, v, work);
        }
    }

    /// Walks the fan through `(c, v)`; when all corners of the base orbit
    /// are present but the extreme edges are not yet identified, links them.
    fn try_close(&mut self, c: usize, v: usize, work: &mut Vec<(usize, usize)>) {
        let fan = self.fan(c, v);
        if fan.closed {
            return;
        }
        let corner = |&(cell, vertex): &(usize, usize)| Corner {
            poly: self.cells[cell].poly,
            vertex,
        };
        let orbit_len = {
            let (oi, _) = self.surface.orbit_of(corner(&fan.corners[0]));
            self.surface.orbits()[oi].corners.len()
        };
        debug_assert!(fan.corners.len() <= orbit_len, "fan exceeded full cone angle");
        if fan.corners.len() != orbit_len {
            return;
        }
        // Identify the ccw-extreme's ccw edge with the cw-extreme's cw edge.
        let &(c_ccw, v_ccw) = fan.corners.last().unwrap();
        let &(c_cw, v_cw) = fan.corners.first().unwrap();
        let n_ccw = self.surface.polygons[self.cells[c_ccw].poly].len();
        let e = (v_ccw + n_ccw - 1) % n_ccw;
        let (other, iso) = self.surface.partner(EdgeRef::new(self.cells[c_ccw].poly, e));
        debug_assert_eq!(other.poly, self.cells[c_cw].poly);
        debug_assert_eq!(
            self.surface.corner_ccw(corner(&(c_ccw, v_ccw))).0.vertex,
            v_cw,
            "fan closure must meet the cw extreme"
        );
        debug_assert_eq!(
            self.cells[c_cw].place,
            self.cells[c_ccw].place.compose(&iso.inverse()),
            "placements around a closed fan must agree"
        );
        self.link(c_ccw, e, c_cw, work);
    }

    /// Corners of the maximal fan through `(c, v)` in counterclockwise
    /// order, and whether the fan wraps (is closed).
    fn fan(&self, c: usize, v: usize) -> Fan {
        let mut forward = vec![(c, v)];
        let (mut cc, mut cv) = (c, v);
        let closed = loop {
            let n = self.surface.polygons[self.cells[cc].poly].len();
            let e = (cv + n - 1) % n;
            match self.cells[cc].nbr[e] {
                None => break false,
                Some(next) => {
                    let (nc, _) = self
                        .surface
                        .corner_ccw(Corner { poly: self.cells[cc].poly, vertex: cv });
                    debug_assert_eq!(nc.poly, self.cells[next].poly);
                    cc = next;
                    cv = nc.vertex;
                    if (cc, cv) == (c, v) {
                        break true;
                    }
                    forward.push((cc, cv));
                }
            }
        };
        if closed {
            return Fan { corners: forward, closed: true };
        }
        let mut backward = Vec::new();
        let (mut cc, mut cv) = (c, v);
        loop {
            match self.cells[cc].nbr[cv] {
                None => break,
                Some(next) => {
                    let (nc, _) = self
                        .surface
                        .corner_cw(Corner { poly: self.cells[cc].poly, vertex: cv });
                    debug_assert_eq!(nc.poly, self.cells[next].poly);
                    cc = next;
                    cv = nc.vertex;
                    debug_assert_ne!((cc, cv), (c, v));
                    backward.push((cc, cv));
                }
            }
        }
        backward.reverse();
        backward.extend(forward);
        Fan { corners: backward, closed: false }
    }

    fn build_nodes(&mut self) {
        self.corner_node = self
            .cells
            .iter()
            .map(|c| vec![usize::MAX; self.surface.polygons[c.poly].len()])
            .collect();
        for c in 0..self.cells.len() {
            for v in 0..self.surface.polygons[self.cells[c].poly].len() {
                if self.corner_node[c][v] != usize::MAX {
                    continue;
                }
                let fan = self.fan(c, v);
                let id = self.nodes.len();
                let (cell0, v0) = fan.corners[0];
                let dev = self.cells[cell0]
                    .place
                    .apply(&self.surface.polygons[self.cells[cell0].poly].vertices[v0]);
                let (orbit, _) = self.surface.orbit_of(Corner {
                    poly: self.cells[cell0].poly,
                    vertex: v0,
                });
                for &(fc, fv) in &fan.corners {
                    self.corner_node[fc][fv] = id;
                }
                self.nodes.push(VertexNode {
                    dev,
                    orbit,
                    corners: fan.corners.clone(),
                    closed: fan.closed,
                });
            }
        }
    }

    pub fn nodes(&self) -> &[VertexNode] {
        &self.nodes
    }

    pub fn node_of(&self, cell: usize, vertex: usize) -> usize {
        self.corner_node[cell][vertex]
    }

    pub fn neighbor(&self, cell: usize, edge: usize) -> Option<usize> {
        self.cells[cell].nbr[edge]
    }

    pub fn dev(&self, cp: &CellPoint) -> Point2 {
        self.cells[cp.cell].place.apply(&cp.p)
    }

    /// Developed position of a direction vector in a cell's chart.
    pub fn dev_vec(&self, cell: usize, v: &Vec2) -> Vec2 {
        self.cells[cell].place.apply_vec(v)
    }

    /// Straight chord from `start` to the developed position `target_dev`.
    /// Returns the cells crossed as (cell, local entry, local exit). Fails
    /// when the chord exits the complex or meets a vertex strictly inside.
    pub fn trace_chord(
        &self,
        start: &CellPoint,
        target_dev: &Point2,
    ) -> Result<Vec<(usize, Point2, Point2)>, Blocked> {
        let start_dev = self.dev(start);
        let dir_dev = start_dev.to(target_dev);
        if dir_dev.is_zero() {
            return Ok(vec![(start.cell, start.p.clone(), start.p.clone())]);
        }
        let mut steps = Vec::new();
        let mut cell = start.cell;
        let mut local = start.p.clone();
        // Parameter progress measured in units of the full chord.
        let mut covered = QuadNum::zero();
        loop {
            let inv = self.cells[cell].place.inverse();
            let local_target = inv.apply(target_dev);
            let local_dir = self.cells[cell].place.inverse().apply_vec(&dir_dev);
            // Is the target within this cell along the ray?
            let pg = &self.surface.polygons[self.cells[cell].poly];
            let hit = trace_ray(self.surface, self.cells[cell].poly, &local, &local_dir);
            let remaining = QuadNum::one() - covered.clone();
            // hit.t is in chord units because placements are isometries and
            // local_dir is the full chord vector.
            if *hit.t() >= remaining {
                // Target inside (or on the boundary of) this cell.
                debug_assert!(pg.locate(&local_target) != Place::Outside);
                steps.push((cell, local, local_target));
                return Ok(steps);
            }
            match hit {
                RayHit::Vertex { p, t, .. } => {
                    // Strictly interior vertex contact blocks the chord —
                    // unless it IS the target (handled above).
                    let _ = (p, t);
                    return Err(Blocked::Vertex);
                }
                RayHit::Edge { edge, p, t } => {
                    steps.push((cell, local, p.clone()));
                    let next = match self.cells[cell].nbr[edge] {
                        None => return Err(Blocked::Boundary),
                        Some(nx) => nx,
                    };
                    let (_, iso) = self
                        .surface
                        .partner(EdgeRef::new(self.cells[cell].poly, edge));
                    local = iso.apply(&p);
                    covered += &t;
                    cell = next;
                }
            }
        }
    }

    /// Lower bound for the distance from `x` to the boundary of the built
    /// complex: the minimum developed Euclidean distance from `x` to any
    /// unglued edge. Any path leaving the complex is at least this long.
    pub fn boundary_distance(&self, x: &CellPoint) -> Option<Length> {
        let dev = self.dev(x);
        let mut best: Option<Length> = None;
        for (ci, cell) in self.cells.iter().enumerate() {
            let pg = &self.surface.polygons[cell.poly];
            for e in 0..pg.len() {
                if cell.nbr[e].is_some() {
                    continue;
                }
                let (a, b) = pg.edge(e);
                let (da, db) = (cell.place.apply(a), cell.place.apply(b));
                let cand = point_segment_distance(&dev, &da, &db);
                best = Some(match best {
                    None => cand,
                    Some(old) => {
                        if cand.cmp_len(&old).is_lt() {
                            cand
                        } else {
                            old
                        }
                    }
                });
                let _ = ci;
            }
        }
        best
    }
}

struct Fan {
    corners: Vec<(usize, usize)>,
    closed: bool,
}

pub fn point_segment_distance(p: &Point2, a: &Point2, b: &Point2) -> Length {
    let ab = a.to(b);
    let ap = a.to(p);
    let t = ab.dot(&ap);
    if !t.is_positive() {
        return Length::euclid(&ap.x, &ap.y);
    }
    let n = ab.norm_sq();
    if t >= n {
        let bp = b.to(p);
        return Length::euclid(&bp.x, &bp.y);
    }
    // Perpendicular foot inside: distance² = cross²/|ab|².
    let c = ab.cross(&ap);
    Length::sqrt_of(&(c.square() / n))
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
    fn torus_unfolding_tiles_the_plane() {
        let s = builtin::square_torus();
        let u = Unfolding::from_chart(&s, 0, 2);
        // Radius-2 combinatorial ball of the square tiling: 13 cells
        // (diamond |i|+|j| ≤ 2), all placements pure translations.
        assert_eq!(u.cells.len(), 13);
        assert!(u.cells.iter().all(|c| !c.place.flip));
        // Interior vertex fans are closed with 4 corners each.
        let closed: Vec<_> = u.nodes().iter().filter(|n| n.closed).collect();
        assert!(!closed.is_empty());
        assert!(closed.iter().all(|n| n.corners.len() == 4));
    }

    #[test]
    fn chord_crosses_cells() {
        let s = builtin::square_torus();
        let u = Unfolding::from_chart(&s, 0, 3);
        let start = CellPoint { cell: 0, p: pt((1, 2), (1, 2)) };
        // Target: 2 cells to the right at the same height.
        let target = pt((5, 2), (1, 2));
        let steps = u.trace_chord(&start, &target).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(u.dev(&CellPoint { cell: steps[2].0, p: steps[2].2.clone() }), target);
    }

    #[test]
    fn chord_blocked_by_vertex() {
        let s = builtin::square_torus();
        let u = Unfolding::from_chart(&s, 0, 3);
        let start = CellPoint { cell: 0, p: pt((1, 2), (1, 2)) };
        // Aim exactly through the lifted corner (1,1) to (3/2, 3/2).
        let target = pt((3, 2), (3, 2));
        assert_eq!(u.trace_chord(&start, &target), Err(Blocked::Vertex));
    }

    #[test]
    fn l_origami_cone_fans() {
        let s = builtin::l_origami();
        let u = Unfolding::from_chart(&s, 0, 3);
        // The 6π cone point appears as closed fans of 12 corners.
        let big: Vec<_> = u
            .nodes()
            .iter()
            .filter(|n| n.closed && n.corners.len() == 12)
            .collect();
        assert!(!big.is_empty(), "expected a closed 6π fan within radius 3");
    }

    #[test]
    fn boundary_distance_positive_inside() {
        let s = builtin::square_torus();
        let u = Unfolding::from_chart(&s, 0, 2);
        let x = CellPoint { cell: 0, p: pt((1, 2), (1, 2)) };
        let d = u.boundary_distance(&x).unwrap();
        assert!(d.cmp_len(&Length::zero()).is_gt());
    }
}
