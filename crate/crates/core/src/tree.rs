//! Undirected trees and their canonical (center-rooted AHU) codes.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Builds a tree, rejecting anything that is not simple, connected and acyclic.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || edges.len() + 1 != n {
            return Err(Error::NotATree);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v || adj[u].contains(&v) {
                return Err(Error::NotATree);
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let t = Tree { adj };
        if t.reachable_from(0) != n {
            return Err(Error::NotATree);
        }
        Ok(t)
    }

    pub fn single_edge() -> Self {
        Tree::path(2)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n, &edges).expect("path is a tree")
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::from_edges(leaves + 1, &edges).expect("star is a tree")
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.len())
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        e.sort_unstable();
        e
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn reachable_from(&self, s: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        let mut count = 0;
        while let Some(u) = q.pop_front() {
            count += 1;
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        count
    }

    pub fn relabeled(&self, perm: &[usize]) -> Tree {
        let edges: Vec<_> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Tree::from_edges(self.len(), &edges).expect("relabeling preserves trees")
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canonical_code_of(&self.adj, None)
    }
}

/// Canonical string of an unrooted (optionally vertex-labeled) tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub String);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The one or two centers of a tree given by adjacency lists.
pub fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &u in &layer {
            for &v in &adj[u] {
                if deg[v] > 1 {
                    deg[v] -= 1;
                    if deg[v] == 1 {
                        next.push(v);
                    }
                }
            }
            deg[u] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn rooted_code(
    adj: &[Vec<usize>],
    root: usize,
    labels: Option<&[String]>,
) -> (String, Vec<String>) {
    // Iterative post-order to keep deep paths off the call stack.
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut codes = vec![String::new(); n];
    for &u in order.iter().rev() {
        let mut kids: Vec<&str> = adj[u]
            .iter()
            .filter(|&&v| v != root && parent[v] == u)
            .map(|&v| codes[v].as_str())
            .collect();
        kids.sort_unstable();
        let mut s = String::new();
        if let Some(l) = labels {
            s.push_str(&l[u]);
        }
        s.push('(');
        for k in kids {
            s.push_str(k);
        }
        s.push(')');
        codes[u] = s;
    }
    (codes[root].clone(), codes)
}

/// Canonical code; with `labels`, vertex labels become part of the code.
pub fn canonical_code_of(adj: &[Vec<usize>], labels: Option<&[String]>) -> CanonicalCode {
    let code = centers(adj)
        .into_iter()
        .map(|c| rooted_code(adj, c, labels).0)
        .min()
        .unwrap_or_default();
    CanonicalCode(code)
}

/// A deterministic rooting of a tree: rooted at the center with the smallest
/// code, children ordered by subtree code and then by `tie`.
#[derive(Debug, Clone)]
pub struct CanonicalOrder {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Child-index path from the root to each vertex.
    pub path: Vec<Vec<usize>>,
}

impl CanonicalOrder {
    pub fn new<K: PartialOrd>(adj: &[Vec<usize>], tie: impl Fn(usize) -> K) -> Self {
        let mut best: Option<(String, usize)> = None;
        for c in centers(adj) {
            let (code, _) = rooted_code(adj, c, None);
            let better = match &best {
                None => true,
                Some((bc, bv)) => {
                    code < *bc
                        || (code == *bc
                            && tie(c).partial_cmp(&tie(*bv)) == Some(std::cmp::Ordering::Less))
                }
            };
            if better {
                best = Some((code, c));
            }
        }
        let root = best.map(|b| b.1).unwrap_or(0);
        let (_, codes) = rooted_code(adj, root, None);
        let n = adj.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut path = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            let mut kids: Vec<usize> = adj[u].iter().copied().filter(|&v| !seen[v]).collect();
            kids.sort_by(|&a, &b| {
                codes[a].cmp(&codes[b]).then(
                    tie(a)
                        .partial_cmp(&tie(b))
                        .unwrap_or(std::cmp::Ordering::Equal),
                )
            });
            for (i, &v) in kids.iter().enumerate() {
                seen[v] = true;
                parent[v] = Some(u);
                let mut p = path[u].clone();
                p.push(i);
                path[v] = p;
                q.push_back(v);
            }
            children[u] = kids;
        }
        CanonicalOrder {
            root,
            parent,
            children,
            path,
        }
    }

    /// Address of the edge joining `v` to its parent.
    pub fn edge_address(&self, u: usize, v: usize) -> Option<String> {
        let child = if self.parent[v] == Some(u) {
            v
        } else if self.parent[u] == Some(v) {
            u
        } else {
            return None;
        };
        Some(format_path(&self.path[child]))
    }

    pub fn resolve(&self, address: &str) -> Option<(usize, usize)> {
        let steps = parse_path(address)?;
        if steps.is_empty() {
            return None;
        }
        let mut v = self.root;
        for s in steps {
            v = *self.children[v].get(s)?;
        }
        Some((self.parent[v]?, v))
    }
}

pub fn format_path(path: &[usize]) -> String {
    let mut s = String::new();
    for p in path {
        s.push('/');
        s.push_str(&p.to_string());
    }
    if s.is_empty() {
        s.push('/');
    }
    s
}

pub fn parse_path(s: &str) -> Option<Vec<usize>> {
    let s = s.strip_prefix('/')?;
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split('/').map(|p| p.parse().ok()).collect()
}
