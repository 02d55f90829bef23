//! P-resolving branched covers.
//!
//! The cover is the canonical degree-2 cover branched exactly at the set P
//! of angle-π points, built by re-gluing two copies of the surface
//! crosswise along a set of slit edges. The slit set is chosen along a fixed
//! BFS spanning tree of the vertex-orbit graph so that the sheet-swap
//! monodromy around a vertex orbit is nontrivial exactly on P. When |P| is
//! odd, an unbranched connected double cover is taken first (swapping along
//! one tree cycle), which doubles P to even size.

use super::{
    AutoSpec, Corner, EdgeRef, Gluing, Polygon, Surface, SurfaceError,
};
use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct ResolvingCover {
    pub cover: Surface,
    pub degree: u32,
    /// Per cover polygon: (base polygon, sheet label).
    pub poly_map: Vec<(usize, usize)>,
    /// Per cover gluing: the base gluing it lifts.
    pub gluing_map: Vec<usize>,
    /// Base vertex orbits at which the cover branches (local degree 2).
    pub branch_orbits: Vec<usize>,
}

impl ResolvingCover {
    pub fn is_identity(&self) -> bool {
        self.degree == 1
    }

    /// Sheet-local edge partner lookup: cover polygon index for (base poly, sheet).
    pub fn lift_poly(&self, base: usize, sheet: usize) -> usize {
        self.poly_map
            .iter()
            .position(|&(b, s)| b == base && s == sheet)
            .expect("sheet out of range")
    }
}

/// Builds the canonical P-resolving cover. For P = ∅ this is the identity
/// cover of degree 1.
pub fn build_resolving_cover(base: &Surface) -> Result<ResolvingCover, SurfaceError> {
    let p = base.angle_pi_points();
    if p.is_empty() {
        return Ok(ResolvingCover {
            cover: base.clone(),
            degree: 1,
            poly_map: (0..base.polygons.len()).map(|i| (i, 0)).collect(),
            gluing_map: (0..base.gluings.len()).collect(),
            branch_orbits: Vec::new(),
        });
    }
    if p.len() % 2 == 0 {
        let swap = branch_swap_set(base, &p);
        let cover = double_cover(base, &swap, &p)?;
        verify(base, &cover)?;
        Ok(cover)
    } else {
        // Doubling step: unbranched connected double cover along one tree
        // cycle, then resolve the (now even) lifted singular set.
        let cycle = tree_cycle(base);
        let doubled = double_cover(base, &cycle, &[])?;
        let inner = build_resolving_cover(&doubled.cover)?;
        let poly_map = inner
            .poly_map
            .iter()
            .map(|&(mid, s2)| {
                let (b, s1) = doubled.poly_map[mid];
                (b, s2 * 2 + s1)
            })
            .collect();
        let gluing_map = inner
            .gluing_map
            .iter()
            .map(|&g| doubled.gluing_map[g])
            .collect();
        let cover = ResolvingCover {
            cover: inner.cover,
            degree: 2 * inner.degree,
            poly_map,
            gluing_map,
            branch_orbits: p,
        };
        verify(base, &cover)?;
        Ok(cover)
    }
}

/// Orbit-graph endpoints of a gluing: the vertex orbits of the identified
/// edge's two endpoints.
fn gluing_endpoints(s: &Surface, gi: usize) -> (usize, usize) {
    let g = &s.gluings[gi];
    let n = s.polygons[g.a.poly].len();
    let tail = Corner { poly: g.a.poly, vertex: g.a.edge };
    let head = Corner { poly: g.a.poly, vertex: (g.a.edge + 1) % n };
    (s.orbit_of(tail).0, s.orbit_of(head).0)
}

/// BFS spanning tree of the vertex-orbit graph: parent gluing per orbit.
fn orbit_tree(s: &Surface) -> Vec<Option<(usize, usize)>> {
    let n = s.orbits().len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (gluing, parent orbit)
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for gi in 0..s.gluings.len() {
            let (x, y) = gluing_endpoints(s, gi);
            for (from, to) in [(x, y), (y, x)] {
                if from == v && !seen[to] {
                    seen[to] = true;
                    parent[to] = Some((gi, v));
                    queue.push_back(to);
                }
            }
        }
    }
    debug_assert!(seen.iter().all(|&b| b), "orbit graph of a connected surface is connected");
    parent
}

/// Gluing set whose sheet-swap monodromy is odd exactly at the orbits in
/// `targets` (|targets| even): toggle the tree path from each target to the
/// root.
fn branch_swap_set(s: &Surface, targets: &[usize]) -> Vec<bool> {
    let parent = orbit_tree(s);
    let mut swap = vec![false; s.gluings.len()];
    for &t in targets {
        let mut v = t;
        while let Some((gi, up)) = parent[v] {
            swap[gi] = !swap[gi];
            v = up;
        }
    }
    swap
}

/// A cycle in the orbit multigraph: one non-tree gluing plus the tree paths
/// joining its endpoints. Every orbit has even degree in the result, and the
/// swap monodromy is globally nontrivial, so the double cover along it is
/// connected and unbranched.
fn tree_cycle(s: &Surface) -> Vec<bool> {
    let parent = orbit_tree(s);
    let tree_gluings: Vec<usize> = parent.iter().flatten().map(|&(g, _)| g).collect();
    let extra = (0..s.gluings.len())
        .find(|gi| !tree_gluings.contains(gi))
        .expect("closed surface orbit graph has a non-tree edge");
    let mut swap = vec![false; s.gluings.len()];
    swap[extra] = true;
    let (x, y) = gluing_endpoints(s, extra);
    for mut v in [x, y] {
        while let Some((gi, up)) = parent[v] {
            swap[gi] = !swap[gi];
            v = up;
        }
    }
    swap
}

/// Two copies of every polygon; gluings are sheet-preserving off the swap
/// set and crosswise on it.
fn double_cover(
    base: &Surface,
    swap: &[bool],
    branch_orbits: &[usize],
) -> Result<ResolvingCover, SurfaceError> {
    let n = base.polygons.len();
    let lift = |e: EdgeRef, sheet: usize| EdgeRef::new(sheet * n + e.poly, e.edge);

    let mut polygons: Vec<Polygon> = Vec::with_capacity(2 * n);
    let mut names = Vec::with_capacity(2 * n);
    let mut poly_map = Vec::with_capacity(2 * n);
    for sheet in 0..2 {
        for (i, p) in base.polygons.iter().enumerate() {
            polygons.push(p.clone());
            names.push(format!("{}~{}", base.poly_names[i], sheet));
            poly_map.push((i, sheet));
        }
    }
    let mut gluings = Vec::with_capacity(2 * base.gluings.len());
    let mut gluing_map = Vec::with_capacity(2 * base.gluings.len());
    for (gi, g) in base.gluings.iter().enumerate() {
        for sheet in 0..2 {
            let other = if swap[gi] { 1 - sheet } else { sheet };
            gluings.push(Gluing { a: lift(g.a, sheet), b: lift(g.b, other), kind: g.kind });
            gluing_map.push(gi);
        }
    }
    // Declared symmetries do not lift canonically; the cover carries none.
    let autos: Vec<AutoSpec> = Vec::new();
    let cover = Surface::assemble(
        format!("{}^", base.name),
        base.d,
        polygons,
        names,
        gluings,
        autos,
    )?;
    Ok(ResolvingCover {
        cover,
        degree: 2,
        poly_map,
        gluing_map,
        branch_orbits: branch_orbits.to_vec(),
    })
}

fn verify(base: &Surface, rc: &ResolvingCover) -> Result<(), SurfaceError> {
    // No angle-π points survive in the cover.
    if !rc.cover.angle_pi_points().is_empty() {
        return Err(SurfaceError::BadConeAngle(rc.cover.angle_pi_points()[0]));
    }
    // Riemann–Hurwitz with local degree 2 over each branch orbit: every
    // branch point contributes (2−1) per preimage, and the preimage count
    // over a branch orbit is degree/2.
    let d = rc.degree as i64;
    let defect = (d / 2) * rc.branch_orbits.len() as i64;
    let expect = d * base.euler_characteristic() - defect;
    if rc.cover.euler_characteristic() != expect {
        return Err(SurfaceError::GaussBonnet {
            lhs: rc.cover.euler_characteristic(),
            rhs: expect,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn torus_cover_is_identity() {
        let s = builtin::square_torus();
        let rc = build_resolving_cover(&s).unwrap();
        assert!(rc.is_identity());
        assert_eq!(rc.cover.euler_characteristic(), 0);
        let g = builtin::golden_torus();
        assert!(build_resolving_cover(&g).unwrap().is_identity());
    }

    #[test]
    fn pillowcase_cover_is_a_torus() {
        let s = builtin::pillowcase();
        let rc = build_resolving_cover(&s).unwrap();
        assert_eq!(rc.degree, 2);
        // χ̂ = 2·2 − 4 = 0 and the four angle-π points resolve to 2π.
        assert_eq!(rc.cover.euler_characteristic(), 0);
        assert!(rc.cover.angle_pi_points().is_empty());
        assert_eq!(rc.branch_orbits.len(), 4);
        // The classical orientation double cover of the pillowcase: a torus,
        // so no singular points at all.
        assert!(rc.cover.cone_points().is_empty());
    }

    #[test]
    fn l_origami_cover_is_identity() {
        let s = builtin::l_origami();
        let rc = build_resolving_cover(&s).unwrap();
        assert!(rc.is_identity());
        assert_eq!(rc.cover.cone_points().len(), 1);
    }

    #[test]
    fn unbranched_doubling_is_connected_and_regular() {
        let s = builtin::square_torus();
        let cycle = tree_cycle(&s);
        let doubled = double_cover(&s, &cycle, &[]).unwrap();
        // Connectivity is enforced by assembly; χ doubles (here 0), and no
        // singularities appear.
        assert_eq!(doubled.cover.euler_characteristic(), 0);
        assert!(doubled.cover.cone_points().is_empty());
        assert_eq!(doubled.cover.polygons.len(), 2);
    }
}
