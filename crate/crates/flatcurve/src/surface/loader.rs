//! Surface file parser.
//!
//! Structured text, line oriented, `#` starts a comment:
//!
//! ```text
//! surface golden-sheared-torus
//! field 5                      # the d of Q(√d); 1 means rational
//! polygon A
//!   v 0 0
//!   v 1 0
//!   v 3/2-1/2√5 1
//!   v 1/2-1/2√5 1
//! glue A.0 A.2 translation
//! glue A.1 A.3 translation
//! auto cat
//!   matrix 3/2-1/2√5 0 1 3/2+1/2√5
//! ```
//!
//! Vertices are QuadNum literals in counterclockwise order; edge `i` runs
//! from vertex `i` to vertex `i+1`. A record gluing an edge to itself with
//! kind `flip` is a fold; the loader splits that edge at its midpoint so the
//! fold center becomes an honest angle-π vertex.

use super::{AutoSpec, EdgeRef, Gluing, GluingKind, Polygon, Surface, SurfaceError};
use crate::exact::QuadNum;
use crate::geom::plane::{Point2, Vec2};

pub fn load_surface_str(text: &str) -> Result<Surface, SurfaceError> {
    let mut name = String::from("unnamed");
    let mut field: Option<u64> = None;
    let mut polygons: Vec<Polygon> = Vec::new();
    let mut poly_names: Vec<String> = Vec::new();
    let mut records: Vec<(EdgeRef, EdgeRef, GluingKind)> = Vec::new();
    let mut autos: Vec<AutoSpec> = Vec::new();

    let err = |line: usize, msg: String| SurfaceError::Parse { line: line + 1, msg };
    let lookup = |names: &[String], n: &str, line: usize| -> Result<usize, SurfaceError> {
        names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| err(line, format!("unknown polygon `{n}`")))
    };

    enum Block {
        None,
        Polygon,
        Auto,
    }
    let mut block = Block::None;

    for (ln, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match toks[0] {
            "surface" => {
                name = toks.get(1).ok_or_else(|| err(ln, "missing name".into()))?.to_string();
            }
            "field" => {
                let d: u64 = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(ln, "field needs a positive integer".into()))?;
                if !crate::exact::is_square_free(d) {
                    return Err(err(ln, format!("{d} is not square-free")));
                }
                field = Some(d);
            }
            "polygon" => {
                let n = toks.get(1).ok_or_else(|| err(ln, "missing polygon name".into()))?;
                if poly_names.iter().any(|x| x == n) {
                    return Err(err(ln, format!("duplicate polygon `{n}`")));
                }
                poly_names.push(n.to_string());
                polygons.push(Polygon { vertices: Vec::new() });
                block = Block::Polygon;
            }
            "v" => {
                if !matches!(block, Block::Polygon) {
                    return Err(err(ln, "vertex outside a polygon block".into()));
                }
                if toks.len() != 3 {
                    return Err(err(ln, "vertex needs two coordinates".into()));
                }
                let d = field.ok_or_else(|| err(ln, "field must be declared first".into()))?;
                let x = parse_coord(toks[1], d, ln)?;
                let y = parse_coord(toks[2], d, ln)?;
                polygons.last_mut().unwrap().vertices.push(Point2::new(x, y));
            }
            "glue" => {
                if toks.len() != 4 {
                    return Err(err(ln, "glue needs two edges and a kind".into()));
                }
                let a = parse_edge(toks[1], &poly_names, ln)?;
                let b = parse_edge(toks[2], &poly_names, ln)?;
                let kind = match toks[3] {
                    "translation" => GluingKind::Translation,
                    "flip" => GluingKind::Flip,
                    other => return Err(err(ln, format!("unknown gluing kind `{other}`"))),
                };
                records.push((a, b, kind));
                block = Block::None;
            }
            "auto" => {
                let n = toks.get(1).ok_or_else(|| err(ln, "missing automorphism name".into()))?;
                autos.push(AutoSpec {
                    name: n.to_string(),
                    matrix: [
                        QuadNum::zero(),
                        QuadNum::zero(),
                        QuadNum::zero(),
                        QuadNum::zero(),
                    ],
                    maps: Vec::new(),
                });
                block = Block::Auto;
            }
            "matrix" => {
                if !matches!(block, Block::Auto) || toks.len() != 5 {
                    return Err(err(ln, "matrix needs four entries inside an auto block".into()));
                }
                let d = field.ok_or_else(|| err(ln, "field must be declared first".into()))?;
                let a = autos.last_mut().unwrap();
                for (slot, tok) in a.matrix.iter_mut().zip(&toks[1..]) {
                    *slot = parse_coord(tok, d, ln)?;
                }
            }
            "maps" => {
                if !matches!(block, Block::Auto) || toks.len() != 5 {
                    return Err(err(ln, "maps needs `src dst cx cy` inside an auto block".into()));
                }
                let d = field.ok_or_else(|| err(ln, "field must be declared first".into()))?;
                let src = lookup(&poly_names, toks[1], ln)?;
                let dst = lookup(&poly_names, toks[2], ln)?;
                let cx = parse_coord(toks[3], d, ln)?;
                let cy = parse_coord(toks[4], d, ln)?;
                autos.last_mut().unwrap().maps.push((src, dst, Vec2::new(cx, cy)));
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }

    let d = field.ok_or_else(|| err(0, "missing `field` declaration".into()))?;
    split_self_glues(&mut polygons, &mut records)?;
    let gluings = records
        .into_iter()
        .map(|(a, b, kind)| Gluing { a, b, kind })
        .collect();
    Surface::assemble(name, d, polygons, poly_names, gluings, autos)
}

fn parse_coord(tok: &str, d: u64, ln: usize) -> Result<QuadNum, SurfaceError> {
    let v = QuadNum::parse(tok).map_err(|e| SurfaceError::Parse {
        line: ln + 1,
        msg: e.to_string(),
    })?;
    if v.context() != 1 && v.context() != d {
        return Err(SurfaceError::FieldContext { literal: tok.to_string(), d });
    }
    Ok(v)
}

fn parse_edge(tok: &str, names: &[String], ln: usize) -> Result<EdgeRef, SurfaceError> {
    let bad = || SurfaceError::Parse {
        line: ln + 1,
        msg: format!("bad edge reference `{tok}`, want `name.index`"),
    };
    let (pname, idx) = tok.rsplit_once('.').ok_or_else(bad)?;
    let poly = names.iter().position(|x| x == pname).ok_or_else(bad)?;
    let edge: usize = idx.parse().map_err(|_| bad())?;
    Ok(EdgeRef::new(poly, edge))
}

/// Rewrites `glue P.e P.e flip` fold records by splitting the edge at its
/// midpoint; subsequent edge indices of the same polygon shift up by one.
fn split_self_glues(
    polygons: &mut [Polygon],
    records: &mut Vec<(EdgeRef, EdgeRef, GluingKind)>,
) -> Result<(), SurfaceError> {
    loop {
        let Some(i) = records.iter().position(|(a, b, _)| a == b) else {
            return Ok(());
        };
        let (e, _, kind) = records[i];
        if kind != GluingKind::Flip {
            return Err(SurfaceError::Orientation {
                a: e.to_string(),
                b: e.to_string(),
                kind: "translation".to_string(),
            });
        }
        let poly = &mut polygons[e.poly];
        if e.edge >= poly.len() {
            return Err(SurfaceError::Parse {
                line: 0,
                msg: format!("edge {e} out of range"),
            });
        }
        let (a, b) = poly.edge(e.edge);
        let mid = a.midpoint(b);
        poly.vertices.insert(e.edge + 1, mid);
        for (a, b, _) in records.iter_mut() {
            for side in [a, b] {
                if side.poly == e.poly && side.edge > e.edge {
                    side.edge += 1;
                }
            }
        }
        records[i] = (
            EdgeRef::new(e.poly, e.edge),
            EdgeRef::new(e.poly, e.edge + 1),
            GluingKind::Flip,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_edges() {
        let text = "\nfield 1\npolygon A\n v 0 0\n v 2 0\n v 2 1\n v 0 1\n\
                    glue A.0 A.1 translation\nglue A.2 A.3 translation\n";
        assert!(matches!(
            load_surface_str(text),
            Err(SurfaceError::EdgeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_wrong_orientation() {
        // Opposite square sides glued by `flip` have anti-parallel vectors.
        let text = "field 1\npolygon A\n v 0 0\n v 1 0\n v 1 1\n v 0 1\n\
                    glue A.0 A.2 flip\nglue A.1 A.3 translation\n";
        assert!(matches!(
            load_surface_str(text),
            Err(SurfaceError::Orientation { .. })
        ));
    }

    #[test]
    fn rejects_disconnected_surface() {
        let text = "field 1\n\
            polygon A\n v 0 0\n v 1 0\n v 1 1\n v 0 1\n\
            polygon B\n v 3 0\n v 4 0\n v 4 1\n v 3 1\n\
            glue A.0 A.2 translation\nglue A.1 A.3 translation\n\
            glue B.0 B.2 translation\nglue B.1 B.3 translation\n";
        assert!(matches!(load_surface_str(text), Err(SurfaceError::Disconnected)));
    }

    #[test]
    fn rejects_double_gluing() {
        let text = "field 1\npolygon A\n v 0 0\n v 1 0\n v 1 1\n v 0 1\n\
                    glue A.0 A.2 translation\nglue A.0 A.2 translation\nglue A.1 A.3 translation\n";
        assert!(matches!(load_surface_str(text), Err(SurfaceError::NotAMatching(..))));
    }

    #[test]
    fn rejects_foreign_field_literal() {
        let text = "field 5\npolygon A\n v 0 0\n v 1 0\n v 1 0-1√2\n v 0 1\n";
        assert!(matches!(load_surface_str(text), Err(SurfaceError::FieldContext { .. })));
    }

    #[test]
    fn fold_gluing_splits_at_midpoint() {
        let s = crate::builtin::pillowcase();
        // Each original side became two half-edges; 8 edges, 4 gluing pairs.
        assert_eq!(s.polygons[0].len(), 8);
        assert_eq!(s.gluings.len(), 4);
    }
}
