//! Plumbing trees, their matrices, and Neumann moves.

use crate::error::{Error, Result};
use crate::{IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Stable vertex identity; survives Neumann moves.
pub type Label = u32;

/// A framed tree. Edges are stored as sorted `(min, max)` index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlumbingGraph {
    labels: Vec<Label>,
    framings: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Structured mirror of the text graph format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub framings: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Degree 0: the whole graph is one vertex.
    Isolated,
    Leaf,
    Joint,
    Node,
}

impl PlumbingGraph {
    pub fn new(framings: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let labels = (0..framings.len() as Label).collect();
        Self::with_labels(labels, framings, edges)
    }

    pub fn with_labels(labels: Vec<Label>, framings: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let s = framings.len();
        if s == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if labels.len() != s {
            return Err(Error::InvalidGraph("label count differs from vertex count".into()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != s {
            return Err(Error::InvalidGraph("duplicate vertex labels".into()));
        }
        if edges.len() != s - 1 {
            return Err(Error::InvalidGraph(format!(
                "a tree on {s} vertices has {} edges, found {}",
                s - 1,
                edges.len()
            )));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); s];
        for &(u, v) in &edges {
            if u >= s || v >= s {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if norm.contains(&e) {
                return Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})")));
            }
            norm.push(e);
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        // s - 1 edges and connected implies a tree
        let mut seen = vec![false; s];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&x| !x) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        norm.sort_unstable();
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(PlumbingGraph {
            labels,
            framings,
            edges: norm,
            adjacency,
        })
    }

    pub fn s(&self) -> usize {
        self.framings.len()
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn framing(&self, v: usize) -> i64 {
        self.framings[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.adjacency.iter().map(|a| a.len() as i64).collect()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    pub fn role(&self, v: usize) -> Role {
        match self.degree(v) {
            0 => Role::Isolated,
            1 => Role::Leaf,
            2 => Role::Joint,
            _ => Role::Node,
        }
    }

    pub fn roles(&self) -> Vec<Role> {
        (0..self.s()).map(|v| self.role(v)).collect()
    }

    pub fn vertices_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.s()).filter(|&v| self.role(v) == role).collect()
    }

    /// Unique path from `a` to `b`, endpoints included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.s()];
        let mut stack = vec![a];
        parent[a] = a;
        while let Some(u) = stack.pop() {
            if u == b {
                break;
            }
            for &w in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Vertices of the component of `start` after deleting the edge `start–away`.
    pub fn side(&self, start: usize, away: usize) -> Vec<usize> {
        let mut seen = vec![false; self.s()];
        seen[start] = true;
        seen[away] = true;
        let mut out = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_record(&self) -> GraphRecord {
        let default_labels = self.labels.iter().enumerate().all(|(i, &l)| l as usize == i);
        GraphRecord {
            framings: self.framings.clone(),
            edges: self.edges.clone(),
            labels: (!default_labels).then(|| self.labels.clone()),
        }
    }

    pub fn from_record(rec: &GraphRecord) -> Result<Self> {
        match &rec.labels {
            Some(l) => Self::with_labels(l.clone(), rec.framings.clone(), rec.edges.clone()),
            None => Self::new(rec.framings.clone(), rec.edges.clone()),
        }
    }

    /// Text format: `s`, then the `s` framings, then one `u v` edge per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty());
        let tokens = |lineno: usize, line: &str| -> Result<Vec<i64>> {
            let mut out = Vec::new();
            let mut col = 1;
            for piece in line.split_inclusive(char::is_whitespace) {
                let tok = piece.trim();
                if !tok.is_empty() {
                    let offset = piece.len() - piece.trim_start().len();
                    out.push(tok.parse::<i64>().map_err(|_| {
                        Error::parse(lineno, col + offset, format!("expected an integer, found {tok:?}"))
                    })?);
                }
                col += piece.chars().count();
            }
            Ok(out)
        };
        let (l1, first) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty graph file"))?;
        let head = tokens(l1, first)?;
        if head.len() != 1 || head[0] < 1 {
            return Err(Error::parse(l1, 1, "first line must be a positive vertex count"));
        }
        let s = head[0] as usize;
        let (l2, second) = lines
            .next()
            .ok_or_else(|| Error::parse(l1 + 1, 1, "missing framing line"))?;
        let framings = tokens(l2, second)?;
        if framings.len() != s {
            return Err(Error::parse(
                l2,
                1,
                format!("expected {s} framings, found {}", framings.len()),
            ));
        }
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let t = tokens(ln, line)?;
            if t.len() != 2 {
                return Err(Error::parse(ln, 1, "edge lines must contain two vertex indices"));
            }
            if t.iter().any(|&x| x < 0 || x as usize >= s) {
                return Err(Error::parse(ln, 1, format!("vertex index out of range 0..{s}")));
            }
            edges.push((t[0] as usize, t[1] as usize));
        }
        Self::new(framings, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.s());
        let f: Vec<String> = self.framings.iter().map(|x| x.to_string()).collect();
        out.push_str(&f.join(" "));
        out.push('\n');
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    fn fresh_label(&self) -> Label {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    fn require_vertex(&self, label: Label) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::Inapplicable(format!("no vertex labelled {label}")))
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Plumbing matrix with cached determinant, inverse and adjugate.
#[derive(Clone, Debug, PartialEq)]
pub struct PlumbingMatrix {
    entries: IntMatrix,
    det: BigInt,
    inverse: Option<RatMatrix>,
    adjugate: IntMatrix,
}

pub fn matrix_of(g: &PlumbingGraph) -> PlumbingMatrix {
    let s = g.s();
    let entries = IntMatrix::from_fn(s, s, |i, j| {
        if i == j {
            BigInt::from(g.framing(i))
        } else if g.has_edge(i, j) {
            BigInt::from(1)
        } else {
            BigInt::zero()
        }
    });
    PlumbingMatrix::from_entries(entries)
}

impl PlumbingMatrix {
    pub fn from_entries(entries: IntMatrix) -> Self {
        let det = entries.det_bareiss();
        let inverse = if det.is_zero() {
            None
        } else {
            entries.to_rational().inverse()
        };
        let adjugate = match &inverse {
            Some(inv) => {
                let d = crate::Rational::from_integer(det.clone());
                inv.map(|x| {
                    let v = x * &d;
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
            }
            None => entries.adjugate_cofactor(),
        };
        PlumbingMatrix {
            entries,
            det,
            inverse,
            adjugate,
        }
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn s(&self) -> usize {
        self.entries.rows()
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// `|det M|`, the order of `H₁`.
    pub fn order(&self) -> BigInt {
        self.det.abs()
    }

    pub fn inverse(&self) -> Option<&RatMatrix> {
        self.inverse.as_ref()
    }

    pub fn adjugate(&self) -> &IntMatrix {
        &self.adjugate
    }

    pub fn trace(&self) -> BigInt {
        (0..self.s()).map(|i| self.entries.get(i, i).clone()).sum()
    }

    pub fn is_negative_definite(&self) -> bool {
        is_negative_definite(self)
    }
}

/// True iff every LDLᵀ pivot of `-M` is positive.
pub fn is_negative_definite(m: &PlumbingMatrix) -> bool {
    m.entries.to_rational().map(|x| -x).is_positive_definite()
}

/// Blow-ups and blow-downs of ±1-framed vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum NeumannMove {
    /// Attach a new leaf framed `sign` to `at`; the framing of `at` gains `sign`.
    BlowUpLeaf { at: Label, sign: i64 },
    /// Subdivide the edge with a new vertex framed `sign`; both ends gain `sign`.
    BlowUpEdge { between: (Label, Label), sign: i64 },
    /// Remove a ±1-framed vertex of degree 1 or 2, undoing one of the above.
    BlowDown { vertex: Label },
}

impl NeumannMove {
    /// Parses `blowup-leaf L ±1`, `blowup-edge L1 L2 ±1` or `blowdown L`.
    pub fn parse(line: &str, lineno: usize) -> Result<Self> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<i64> {
            toks.get(i)
                .ok_or_else(|| Error::parse(lineno, 1, "missing argument"))?
                .parse::<i64>()
                .map_err(|_| Error::parse(lineno, 1, format!("bad integer {:?}", toks[i])))
        };
        let label = |i: usize| -> Result<Label> {
            let v = num(i)?;
            Label::try_from(v).map_err(|_| Error::parse(lineno, 1, format!("bad label {v}")))
        };
        let mv = match toks.first().copied() {
            Some("blowup-leaf") if toks.len() == 3 => NeumannMove::BlowUpLeaf {
                at: label(1)?,
                sign: num(2)?,
            },
            Some("blowup-edge") if toks.len() == 4 => NeumannMove::BlowUpEdge {
                between: (label(1)?, label(2)?),
                sign: num(3)?,
            },
            Some("blowdown") if toks.len() == 2 => NeumannMove::BlowDown { vertex: label(1)? },
            _ => return Err(Error::parse(lineno, 1, format!("unrecognised move {line:?}"))),
        };
        Ok(mv)
    }
}

fn check_sign(sign: i64) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::Inapplicable(format!("blow-up sign must be ±1, got {sign}")))
    }
}

pub fn neumann_move(g: &PlumbingGraph, mv: &NeumannMove) -> Result<PlumbingGraph> {
    let mut labels = g.labels.clone();
    let mut framings = g.framings.clone();
    let mut edges = g.edges.clone();
    match *mv {
        NeumannMove::BlowUpLeaf { at, sign } => {
            check_sign(sign)?;
            let v = g.require_vertex(at)?;
            framings[v] += sign;
            labels.push(g.fresh_label());
            framings.push(sign);
            edges.push((v, g.s()));
            PlumbingGraph::with_labels(labels, framings, edges)
        }
        NeumannMove::BlowUpEdge { between, sign } => {
            check_sign(sign)?;
            let u = g.require_vertex(between.0)?;
            let w = g.require_vertex(between.1)?;
            if !g.has_edge(u, w) {
                return Err(Error::Inapplicable(format!(
                    "no edge between {} and {}",
                    between.0, between.1
                )));
            }
            framings[u] += sign;
            framings[w] += sign;
            let n = g.s();
            labels.push(g.fresh_label());
            framings.push(sign);
            edges.retain(|&e| e != (u.min(w), u.max(w)));
            edges.push((u, n));
            edges.push((w, n));
            PlumbingGraph::with_labels(labels, framings, edges)
        }
        NeumannMove::BlowDown { vertex } => {
            let v = g.require_vertex(vertex)?;
            let eps = g.framing(v);
            if eps != 1 && eps != -1 {
                return Err(Error::Inapplicable(format!(
                    "vertex {vertex} has framing {eps}, not ±1"
                )));
            }
            let nbrs = g.neighbors(v).to_vec();
            if nbrs.is_empty() || nbrs.len() > 2 {
                return Err(Error::Inapplicable(format!(
                    "vertex {vertex} has degree {}, blow-down needs 1 or 2",
                    nbrs.len()
                )));
            }
            for &w in &nbrs {
                framings[w] -= eps;
            }
            edges.retain(|&(a, b)| a != v && b != v);
            if nbrs.len() == 2 {
                edges.push((nbrs[0], nbrs[1]));
            }
            labels.remove(v);
            framings.remove(v);
            let shift = |x: usize| if x > v { x - 1 } else { x };
            let edges = edges.into_iter().map(|(a, b)| (shift(a), shift(b))).collect();
            PlumbingGraph::with_labels(labels, framings, edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn e12_matrix_matches_display() {
        let g = corpus::e12();
        let m = matrix_of(&g);
        let expect = IntMatrix::from_i64_rows(&[
            vec![-7, 0, 0, 1],
            vec![0, -3, 0, 1],
            vec![0, 0, -2, 1],
            vec![1, 1, 1, -1],
        ]);
        assert_eq!(m.entries(), &expect);
        assert!(m.is_negative_definite());
    }

    #[test]
    fn single_vertices() {
        let g = PlumbingGraph::new(vec![-1], vec![]).unwrap();
        let m = matrix_of(&g);
        assert_eq!(m.det(), &BigInt::from(-1));
        assert!(m.is_negative_definite());
        let g = PlumbingGraph::new(vec![1], vec![]).unwrap();
        assert!(!matrix_of(&g).is_negative_definite());
    }

    #[test]
    fn e6_classification_and_det() {
        let g = corpus::e6();
        let m = matrix_of(&g);
        assert_eq!(m.det(), &BigInt::from(3));
        assert!(m.is_negative_definite());
        let roles = g.roles();
        assert_eq!(roles.iter().filter(|&&r| r == Role::Leaf).count(), 3);
        assert_eq!(roles.iter().filter(|&&r| r == Role::Joint).count(), 2);
        assert_eq!(roles.iter().filter(|&&r| r == Role::Node).count(), 1);
    }

    #[test]
    fn h_graph_classification() {
        let g = corpus::y1();
        let roles = g.roles();
        let count = |r| roles.iter().filter(|&&x| x == r).count();
        assert_eq!((count(Role::Leaf), count(Role::Joint), count(Role::Node)), (4, 2, 2));
    }

    #[test]
    fn rejects_non_trees() {
        assert!(PlumbingGraph::new(vec![-2, -2, -2], vec![(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(PlumbingGraph::new(vec![-2, -2, -2, -2], vec![(0, 1), (2, 3), (0, 0)]).is_err());
        assert!(PlumbingGraph::new(vec![], vec![]).is_err());
    }

    #[test]
    fn parse_reports_position() {
        let err = PlumbingGraph::parse("2\n-2 x2\n0 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 4,
                message: "expected an integer, found \"x2\"".into()
            }
        );
        let g = PlumbingGraph::parse("# E6\n6\n-2 -2 -2 -2 -2 -2\n0 3\n0 4\n0 5\n1 4\n2 5\n").unwrap();
        assert_eq!(g, corpus::e6());
        assert_eq!(PlumbingGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn e6_neumann_figure() {
        let g = corpus::e6();
        // leaf 2 ends the leg 0–5–2
        let up = neumann_move(&g, &NeumannMove::BlowUpLeaf { at: 2, sign: 1 }).unwrap();
        assert_eq!(up.s(), 7);
        assert_eq!(up.framings(), &[-2, -2, -1, -2, -2, -2, 1]);
        assert!(up.has_edge(2, 6));
        assert_eq!(matrix_of(&up).order(), BigInt::from(3));
        let down = neumann_move(&up, &NeumannMove::BlowDown { vertex: 6 }).unwrap();
        assert_eq!(down, g);
        assert!(matches!(
            neumann_move(&g, &NeumannMove::BlowDown { vertex: 0 }),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn edge_blowup_round_trip() {
        let g = corpus::e6();
        let up = neumann_move(
            &g,
            &NeumannMove::BlowUpEdge {
                between: (0, 3),
                sign: -1,
            },
        )
        .unwrap();
        assert_eq!(matrix_of(&up).order(), BigInt::from(3));
        assert!(matrix_of(&up).is_negative_definite());
        let down = neumann_move(&up, &NeumannMove::BlowDown { vertex: 6 }).unwrap();
        assert_eq!(down, g);
    }
}
