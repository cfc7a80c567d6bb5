//! Input loading: graph files, Seifert strings, orders and selectors.

use num_rational::Rational64;
use sha2::{Digest, Sha256};
use std::path::Path;
use zhat::homology::GroupElement;
use zhat::plumbing::{GraphRecord, PlumbingGraph};
use zhat::seifert::SeifertData;
use zhat::{Error, Result};

/// Reads a graph from a text or JSON file; `-` reads standard input.
pub fn read_graph(path: &Path) -> Result<PlumbingGraph> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        let rec: GraphRecord = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        PlumbingGraph::from_record(&rec)
    } else {
        PlumbingGraph::parse(&text)
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Error::Parse {
            line: 1,
            column: 1,
            message: format!("stdin: {e}"),
        })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: format!("{}: {e}", path.display()),
    })
}

/// A graph given either as a file or as Seifert data `b; a1/b1 a2/b2 …`.
pub fn resolve_graph(path: Option<&Path>, seifert: Option<&str>) -> Result<PlumbingGraph> {
    match (path, seifert) {
        (Some(p), None) => read_graph(p),
        (None, Some(s)) => SeifertData::parse(s)?.to_plumbing(),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "give exactly one of a graph file or --seifert".into(),
        }),
    }
}

/// Parses a nonnegative rational such as `25` or `7/2`.
pub fn parse_order(s: &str) -> std::result::Result<Rational64, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| format!("bad numerator {n:?}"))?;
    let d: i64 = d.parse().map_err(|_| format!("bad denominator {d:?}"))?;
    if d <= 0 {
        return Err("denominator must be positive".into());
    }
    let r = Rational64::new(n, d);
    if r < Rational64::from_integer(0) {
        return Err("order must be nonnegative".into());
    }
    Ok(r)
}

/// Parses a group element written `x1,x2,…` in divisor coordinates.
pub fn parse_element(s: &str, rank: usize) -> Result<GroupElement> {
    let coords: std::result::Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match coords {
        Ok(v) if v.len() == rank => Ok(GroupElement(v)),
        Ok(v) => Err(Error::UnknownSpinc(format!(
            "element has {} coordinates, group rank is {rank}",
            v.len()
        ))),
        Err(_) => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("bad group element {s:?}"),
        }),
    }
}

/// SHA-256 of the canonical text form.
pub fn graph_hash(g: &PlumbingGraph) -> String {
    let digest = Sha256::digest(g.to_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn rat(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
