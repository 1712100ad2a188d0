//! Expected graph changes under the two circle operations.

use super::PRGraph;
use crate::tree::{CanonicalCode, Tree};

/// `before` with edge `(u, v)` replaced by the path `u - a - b - v`.
fn subdivided_twice(t: &Tree, u: usize, v: usize) -> (Vec<(usize, usize)>, usize, usize) {
    let n = t.len();
    let (a, b) = (n, n + 1);
    let mut edges: Vec<_> = t
        .edges()
        .into_iter()
        .filter(|&(x, y)| !((x, y) == (u, v) || (x, y) == (v, u)))
        .collect();
    edges.extend([(u, a), (a, b), (b, v)]);
    (edges, a, b)
}

fn code_of(n: usize, edges: &[(usize, usize)]) -> Option<CanonicalCode> {
    Tree::from_edges(n, edges).ok().map(|t| t.canonical_code())
}

fn endpoints(before: &PRGraph, edge: usize) -> Option<(Tree, usize, usize)> {
    let t = before.to_tree().ok()?;
    let e = before.edges.get(edge)?;
    Some((t, e.endpoints.0, e.endpoints.1))
}

/// True when `after` is `before` with `edge` subdivided twice and a pendant
/// leaf hung from one of the two new vertices.
pub fn check_corollary1(before: &PRGraph, after: &PRGraph, edge: usize) -> bool {
    let Some((t, u, v)) = endpoints(before, edge) else {
        return false;
    };
    let Ok(got) = after.canonical_code() else {
        return false;
    };
    let (edges, a, b) = subdivided_twice(&t, u, v);
    let n = t.len() + 3;
    [a, b].into_iter().any(|at| {
        let mut e = edges.clone();
        e.push((at, n - 1));
        code_of(n, &e).as_ref() == Some(&got)
    })
}

/// True when `after` is `before` with `edge` subdivided twice.
pub fn check_corollary2(before: &PRGraph, after: &PRGraph, edge: usize) -> bool {
    let Some((t, u, v)) = endpoints(before, edge) else {
        return false;
    };
    let Ok(got) = after.canonical_code() else {
        return false;
    };
    let (edges, _, _) = subdivided_twice(&t, u, v);
    code_of(t.len() + 2, &edges).as_ref() == Some(&got)
}
