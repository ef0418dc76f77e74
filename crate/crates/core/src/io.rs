//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n m
//! u v w [mult]
//! ```
//!
//! Vertices are zero-indexed, `mult` defaults to 1 and a self-loop is written
//! `u u w`. Weights are written in shortest round-trip form, so a graph read
//! back is bit-identical. A file may hold several such blocks in sequence,
//! which is how decompositions are stored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;

pub fn write_edge_list(g: &WeightedMultigraph) -> String {
    let mut out = String::new();
    write_block(&mut out, g);
    out
}

fn write_block(out: &mut String, g: &WeightedMultigraph) {
    let _ = writeln!(out, "{} {}", g.n(), g.record_count());
    for e in g.edges() {
        if e.mult == 1 {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
        } else {
            let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.w, e.mult);
        }
    }
}

/// Several graphs as consecutive blocks, each preceded by a `# block i`
/// comment line.
pub fn write_blocks<'a, I>(blocks: I) -> String
where
    I: IntoIterator<Item = &'a WeightedMultigraph>,
{
    let mut out = String::new();
    for (i, g) in blocks.into_iter().enumerate() {
        let _ = writeln!(out, "# block {i}");
        write_block(&mut out, g);
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<WeightedMultigraph> {
    let mut blocks = parse_blocks(text)?;
    match blocks.len() {
        1 => Ok(blocks.remove(0)),
        0 => Err(Error::Parse {
            line: 0,
            msg: "missing `n m` header".into(),
        }),
        k => Err(Error::Parse {
            line: 0,
            msg: format!("expected one graph, found {k} blocks"),
        }),
    }
}

pub fn parse_blocks(text: &str) -> Result<Vec<WeightedMultigraph>> {
    let mut blocks = Vec::new();
    let mut current: Option<(WeightedMultigraph, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line: line_no, msg };
        match current.take() {
            None => {
                if fields.len() != 2 {
                    return Err(err(format!("expected `n m`, got {line:?}")));
                }
                let n = parse_num::<usize>(fields[0], line_no)?;
                let m = parse_num::<usize>(fields[1], line_no)?;
                let g = WeightedMultigraph::new(n);
                if m == 0 {
                    blocks.push(g);
                } else {
                    current = Some((g, m));
                }
            }
            Some((mut g, remaining)) => {
                if !(3..=4).contains(&fields.len()) {
                    return Err(err(format!("expected `u v w [mult]`, got {line:?}")));
                }
                let u = parse_num::<usize>(fields[0], line_no)?;
                let v = parse_num::<usize>(fields[1], line_no)?;
                let w = parse_num::<f64>(fields[2], line_no)?;
                let mult = match fields.get(3) {
                    Some(s) => parse_num::<u32>(s, line_no)?,
                    None => 1,
                };
                if mult == 0 {
                    return Err(err("multiplicity must be positive".into()));
                }
                if w <= 0.0 {
                    return Err(err(format!("weight must be positive, got {w}")));
                }
                g.add_edge_mult(u, v, w, mult).map_err(|e| err(e.to_string()))?;
                if remaining == 1 {
                    blocks.push(g);
                } else {
                    current = Some((g, remaining - 1));
                }
            }
        }
    }
    if let Some((_, remaining)) = current {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("{remaining} edge lines missing"),
        });
    }
    Ok(blocks)
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {s:?}"),
    })
}

pub fn read_graph(path: &Path) -> Result<WeightedMultigraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &WeightedMultigraph) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_defaults_and_loops() {
        let text = "# a graph\n3 3  # header\n0 1 2.5\n1 2 1 3\n2 2 0.5\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight_between(0, 1), 2.5);
        assert_eq!(g.multiplicity_between(1, 2), 3);
        assert_eq!(g.degrees(), vec![2.5, 5.5, 4.0]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_edge_list("3\n").is_err());
        assert!(parse_edge_list("3 2\n0 1 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 5 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 1 -1\n").is_err());
        assert!(parse_edge_list("3 1\n0 1 1 0\n").is_err());
        assert!(parse_edge_list("3 1\n0 1 x\n").is_err());
    }

    #[test]
    fn weights_round_trip_bit_exact() {
        let g = WeightedMultigraph::from_edges(
            4,
            [(0, 1, 0.1 + 0.2), (1, 2, 1.0 / 3.0), (2, 3, 1e-300), (3, 3, 7.0)],
        )
        .unwrap();
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn blocks_round_trip() {
        let a = WeightedMultigraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        let b = WeightedMultigraph::from_pairs(4, [(0, 2), (1, 3)]).unwrap();
        let empty = WeightedMultigraph::new(4);
        let text = write_blocks([&a, &empty, &b]);
        assert_eq!(parse_blocks(&text).unwrap(), vec![a, empty, b]);
    }
}
