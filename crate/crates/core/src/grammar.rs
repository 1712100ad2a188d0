//! The inductive tree family reachable by circle additions from the disk.
//!
//! A tree is grown in units. The root unit is a single edge subdivided `n0`
//! times. Every subdivision vertex `v` then receives a pendant unit: a new
//! edge hung from `v`, subdivided `attach[v]` times, whose own subdivision
//! vertices receive pendants in turn. Finally each edge of this skeleton is
//! subdivided `final[e]` more times, subject to parity and lower bounds that
//! depend on the unit the edge belongs to.
//!
//! Addresses: the root unit's subdivision vertices are `"0"`, `"1"`, ... in
//! path order, the pendant unit hung from vertex `a` has vertices `"a/0"`,
//! `"a/1"`, .... Skeleton edges are `"e<k>"` for the root unit and `"a/e<k>"`
//! for the pendant at `a`, numbered from the attachment end.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::tree::{CanonicalCode, Tree};

pub const MAX_ENUMERATION_VERTICES: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GrammarParams {
    pub n0: usize,
    pub attach: BTreeMap<String, usize>,
    pub final_counts: BTreeMap<String, usize>,
}

/// One skeleton edge and the number of its endpoints that are junctions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub address: String,
    pub junction_ends: usize,
}

/// A generation unit: the root edge or one pendant edge with its subdivisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    /// `""` for the root unit, otherwise the address of the vertex it hangs from.
    pub address: String,
    pub subdivisions: usize,
    pub edges: Vec<SkeletonEdge>,
}

impl Unit {
    fn new(address: &str, n: usize) -> Unit {
        let root = address.is_empty();
        let edges = (0..=n)
            .map(|k| {
                let junction_ends = if root {
                    (k > 0) as usize + (k < n) as usize
                } else {
                    1 + (k < n) as usize
                };
                SkeletonEdge {
                    address: edge_address(address, k),
                    junction_ends,
                }
            })
            .collect();
        Unit {
            address: address.to_string(),
            subdivisions: n,
            edges,
        }
    }

    pub fn vertex_address(&self, k: usize) -> String {
        vertex_address(&self.address, k)
    }
}

fn vertex_address(unit: &str, k: usize) -> String {
    if unit.is_empty() {
        k.to_string()
    } else {
        format!("{unit}/{k}")
    }
}

fn edge_address(unit: &str, k: usize) -> String {
    if unit.is_empty() {
        format!("e{k}")
    } else {
        format!("{unit}/e{k}")
    }
}

/// Diagnostic result of checking parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamsReport {
    pub problems: Vec<String>,
}

impl ParamsReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for ParamsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.problems.is_empty() {
            return f.write_str("valid");
        }
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(p)?;
        }
        Ok(())
    }
}

/// Units in construction order, or the attach addresses that are missing.
pub fn units(params: &GrammarParams) -> std::result::Result<Vec<Unit>, Vec<String>> {
    let mut out = vec![Unit::new("", params.n0)];
    let mut missing = Vec::new();
    let mut i = 0;
    while i < out.len() {
        for k in 0..out[i].subdivisions {
            let a = out[i].vertex_address(k);
            match params.attach.get(&a) {
                Some(&n) => out.push(Unit::new(&a, n)),
                None => missing.push(a),
            }
        }
        i += 1;
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(missing)
    }
}

/// Checks the per-unit parity rule on the final counts of one unit.
fn check_unit(unit: &Unit, counts: &[usize]) -> Vec<String> {
    let name = if unit.address.is_empty() {
        "root unit".to_string()
    } else {
        format!("unit at {}", unit.address)
    };
    let mut problems = Vec::new();
    let n = unit.subdivisions;
    if n == 0 {
        for (e, &c) in unit.edges.iter().zip(counts) {
            if c % 2 != 0 {
                problems.push(format!("{name}: edge {} needs an even count, got {c}", e.address));
            }
        }
        return problems;
    }
    let odd: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] % 2 == 1).collect();
    if n.is_multiple_of(2) && !odd.is_empty() {
        for &i in &odd {
            problems.push(format!(
                "{name}: edge {} needs an even count, got {}",
                unit.edges[i].address, counts[i]
            ));
        }
    }
    if n % 2 == 1 && odd.len() != 1 {
        problems.push(format!(
            "{name}: exactly one edge needs an odd count, found {}",
            odd.len()
        ));
    }
    for (e, &c) in unit.edges.iter().zip(counts) {
        let bound = 2 * e.junction_ends;
        if c < bound {
            problems.push(format!(
                "{name}: edge {} needs at least {bound} vertices, got {c}",
                e.address
            ));
        }
    }
    problems
}

pub fn validate_params(params: &GrammarParams) -> ParamsReport {
    let mut problems = Vec::new();
    let units = match units(params) {
        Ok(u) => u,
        Err(missing) => {
            for a in missing {
                problems.push(format!("missing attach entry for vertex {a}"));
            }
            return ParamsReport { problems };
        }
    };
    let known_vertices: Vec<String> = units.iter().skip(1).map(|u| u.address.clone()).collect();
    for a in params.attach.keys() {
        if !known_vertices.contains(a) {
            problems.push(format!("attach entry {a} names no subdivision vertex"));
        }
    }
    let mut known_edges = Vec::new();
    for u in &units {
        let mut counts = Vec::with_capacity(u.edges.len());
        for e in &u.edges {
            known_edges.push(e.address.clone());
            match params.final_counts.get(&e.address) {
                Some(&c) => counts.push(c),
                None => problems.push(format!("missing final entry for edge {}", e.address)),
            }
        }
        if counts.len() == u.edges.len() {
            problems.extend(check_unit(u, &counts));
        }
    }
    for a in params.final_counts.keys() {
        if !known_edges.contains(a) {
            problems.push(format!("final entry {a} names no skeleton edge"));
        }
    }
    ParamsReport { problems }
}

/// Where the parts of a generated tree came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Embedding {
    /// The two ends of the root edge.
    pub root_ends: (usize, usize),
    /// Junction address to tree vertex.
    pub junctions: BTreeMap<String, usize>,
    /// Skeleton edge address to the tree path realizing it, including both ends.
    pub edges: BTreeMap<String, Vec<usize>>,
}

pub fn generate(params: &GrammarParams) -> Result<Tree> {
    generate_with_embedding(params).map(|(t, _)| t)
}

pub fn generate_with_embedding(params: &GrammarParams) -> Result<(Tree, Embedding)> {
    let report = validate_params(params);
    if !report.is_valid() {
        return Err(Error::InvalidParams(report.to_string()));
    }
    let units = units(params).expect("validated");
    let mut n = 0;
    let mut fresh = || {
        n += 1;
        n - 1
    };
    let mut emb = Embedding::default();
    let mut edges = Vec::new();
    for u in &units {
        // Ends of the unit path: attachment vertex (or a new leaf) then subdivisions, then a leaf.
        let mut path = Vec::with_capacity(u.subdivisions + 2);
        if u.address.is_empty() {
            path.push(fresh());
        } else {
            path.push(emb.junctions[&u.address]);
        }
        for k in 0..u.subdivisions {
            let v = fresh();
            emb.junctions.insert(u.vertex_address(k), v);
            path.push(v);
        }
        path.push(fresh());
        if u.address.is_empty() {
            emb.root_ends = (path[0], path[path.len() - 1]);
        }
        for (k, e) in u.edges.iter().enumerate() {
            let mut chain = vec![path[k]];
            for _ in 0..params.final_counts[&e.address] {
                chain.push(fresh());
            }
            chain.push(path[k + 1]);
            for w in chain.windows(2) {
                edges.push((w[0], w[1]));
            }
            emb.edges.insert(e.address.clone(), chain);
        }
    }
    let tree = Tree::from_edges(n, &edges)?;
    Ok((tree, emb))
}

pub fn vertex_count(params: &GrammarParams) -> Option<usize> {
    let units = units(params).ok()?;
    let junctions: usize = units.iter().map(|u| u.subdivisions).sum();
    let extra: usize = params.final_counts.values().sum();
    Some(2 + 2 * junctions + extra)
}

/// Proof of membership: parameters plus the tree's vertices for each part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub params: GrammarParams,
    pub embedding: Embedding,
}

/// Parameters of one unit as read off a tree: the path from the attachment
/// (or first leaf) to the final leaf, split at junctions.
#[derive(Debug, Clone)]
struct Reading {
    /// Junctions along the path and, for each, the pendant reading hanging off it.
    junctions: Vec<(usize, Reading)>,
    /// Tree paths of the unit's skeleton edges.
    segments: Vec<Vec<usize>>,
}

struct Recognizer<'a> {
    t: &'a Tree,
    memo: HashMap<(usize, usize), Option<Reading>>,
}

impl Recognizer<'_> {
    /// Walks from `from` through `next` until a vertex of degree other than 2.
    fn segment(&self, from: usize, next: usize) -> Vec<usize> {
        let mut seg = vec![from, next];
        let (mut prev, mut cur) = (from, next);
        while self.t.degree(cur) == 2 {
            let nxt = *self.t.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
            seg.push(nxt);
            prev = cur;
            cur = nxt;
        }
        seg
    }
}

fn counts_of(reading: &Reading) -> Vec<usize> {
    reading.segments.iter().map(|s| s.len() - 2).collect()
}

fn reading_valid(reading: &Reading, root: bool) -> bool {
    let n = reading.junctions.len();
    let unit = Unit::new(if root { "" } else { "p" }, n);
    check_unit(&unit, &counts_of(reading)).is_empty()
}

/// Decides membership. On success the certificate regenerates `t` exactly.
pub fn recognize(t: &Tree) -> Result<Certificate> {
    if t.len() < 2 {
        return Err(Error::NotInFamily("a single vertex is not a family tree".into()));
    }
    if t.max_degree() >= 4 {
        return Err(Error::NotInFamily("tree has a vertex of degree at least 4".into()));
    }
    let leaves: Vec<usize> = (0..t.len()).filter(|&v| t.degree(v) == 1).collect();
    let mut rec = Recognizer {
        t,
        memo: HashMap::new(),
    };
    for &a in &leaves {
        let first = t.neighbors(a)[0];
        if let Some(reading) = read_complete(&mut rec, a, first, true) {
            let cert = certificate(a, &reading);
            let regenerated = generate(&cert.params)?;
            if regenerated.canonical_code() == t.canonical_code() {
                return Ok(cert);
            }
        }
    }
    Err(Error::NotInFamily(
        "no leaf-to-leaf spine admits a valid unit decomposition".into(),
    ))
}

/// Reads the part of the tree entered from `start` through `first` as one
/// unit. The unit path may turn either way at each junction, the other
/// branch becoming a pendant; every complete choice is checked against the
/// parity rule.
fn read_complete(rec: &mut Recognizer<'_>, start: usize, first: usize, root: bool) -> Option<Reading> {
    let mut found = None;
    walk(rec, start, first, root, Vec::new(), Vec::new(), &mut found);
    found
}

fn walk(
    rec: &mut Recognizer<'_>,
    start: usize,
    first: usize,
    root: bool,
    junctions: Vec<(usize, Reading)>,
    segments: Vec<Vec<usize>>,
    found: &mut Option<Reading>,
) {
    if found.is_some() {
        return;
    }
    let seg = rec.segment(start, first);
    let end = *seg.last().unwrap();
    let prev = seg[seg.len() - 2];
    let mut segments = segments;
    segments.push(seg);
    match rec.t.degree(end) {
        1 => {
            let reading = Reading { junctions, segments };
            if reading_valid(&reading, root) {
                *found = Some(reading);
            }
        }
        3 => {
            let others: Vec<usize> = rec.t.neighbors(end).iter().copied().filter(|&w| w != prev).collect();
            for (cont, off) in [(others[0], others[1]), (others[1], others[0])] {
                let Some(side) = pendant_reading(rec, end, off) else { continue };
                let mut js = junctions.clone();
                js.push((end, side));
                walk(rec, end, cont, root, js, segments.clone(), found);
                if found.is_some() {
                    return;
                }
            }
        }
        _ => {}
    }
}

fn pendant_reading(rec: &mut Recognizer<'_>, v: usize, x: usize) -> Option<Reading> {
    if let Some(r) = rec.memo.get(&(v, x)) {
        return r.clone();
    }
    let r = read_complete(rec, v, x, false);
    rec.memo.insert((v, x), r.clone());
    r
}

fn certificate(start: usize, reading: &Reading) -> Certificate {
    let mut params = GrammarParams {
        n0: reading.junctions.len(),
        ..GrammarParams::default()
    };
    let mut emb = Embedding::default();
    let last = reading.segments.last().unwrap();
    emb.root_ends = (start, *last.last().unwrap());
    fill(&mut params, &mut emb, "", reading);
    Certificate {
        params,
        embedding: emb,
    }
}

fn fill(params: &mut GrammarParams, emb: &mut Embedding, unit: &str, reading: &Reading) {
    for (k, seg) in reading.segments.iter().enumerate() {
        let a = edge_address(unit, k);
        params.final_counts.insert(a.clone(), seg.len() - 2);
        emb.edges.insert(a, seg.clone());
    }
    for (k, (v, side)) in reading.junctions.iter().enumerate() {
        let a = vertex_address(unit, k);
        params.attach.insert(a.clone(), side.junctions.len());
        emb.junctions.insert(a.clone(), *v);
        fill(params, emb, &a, side);
    }
}

/// All family trees with at most `max_vertices` vertices, one parameter set
/// each, ordered by vertex count and then code.
pub fn enumerate_family(max_vertices: usize) -> Result<Vec<(CanonicalCode, GrammarParams)>> {
    if max_vertices > MAX_ENUMERATION_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "max_vertices {max_vertices} exceeds {MAX_ENUMERATION_VERTICES}"
        )));
    }
    let mut seen: BTreeMap<(usize, CanonicalCode), GrammarParams> = BTreeMap::new();
    if max_vertices < 2 {
        return Ok(Vec::new());
    }
    let max_junctions = (max_vertices - 2) / 2;
    for skeleton in skeletons(max_junctions) {
        let units = units(&skeleton).expect("complete skeleton");
        let junctions: usize = units.iter().map(|u| u.subdivisions).sum();
        let budget = max_vertices - 2 - 2 * junctions;
        let mut counts = Vec::new();
        assign_counts(&units, 0, budget, &mut counts, &mut |counts| {
            let mut p = skeleton.clone();
            for (e, c) in units.iter().flat_map(|u| u.edges.iter()).zip(counts) {
                p.final_counts.insert(e.address.clone(), *c);
            }
            let t = generate(&p).expect("enumerated parameters are valid");
            seen.entry((t.len(), t.canonical_code())).or_insert(p);
        });
    }
    Ok(seen.into_iter().map(|((_, c), p)| (c, p)).collect())
}

/// Every attach assignment with at most `max_junctions` junctions in total.
fn skeletons(max_junctions: usize) -> Vec<GrammarParams> {
    let mut out = Vec::new();
    for n0 in 0..=max_junctions {
        let p = GrammarParams {
            n0,
            ..GrammarParams::default()
        };
        let pending: Vec<String> = (0..n0).map(|k| k.to_string()).collect();
        expand(p, pending, max_junctions - n0, &mut out);
    }
    out
}

fn expand(p: GrammarParams, mut pending: Vec<String>, budget: usize, out: &mut Vec<GrammarParams>) {
    let Some(a) = pending.pop() else {
        out.push(p);
        return;
    };
    for n in 0..=budget {
        let mut q = p.clone();
        q.attach.insert(a.clone(), n);
        let mut more = pending.clone();
        more.extend((0..n).map(|k| vertex_address(&a, k)));
        expand(q, more, budget - n, out);
    }
}

/// Calls `emit` with every valid final-count vector (units in order) whose sum is at most `budget`.
fn assign_counts(units: &[Unit], i: usize, budget: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if i == units.len() {
        emit(acc);
        return;
    }
    let u = &units[i];
    let mut local = Vec::new();
    unit_counts(u, 0, budget, &mut local, &mut |counts, used| {
        let before = acc.len();
        acc.extend_from_slice(counts);
        assign_counts(units, i + 1, budget - used, acc, emit);
        acc.truncate(before);
    });
}

fn unit_counts(u: &Unit, k: usize, budget: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize], usize)) {
    if k == u.edges.len() {
        if check_unit(u, acc).is_empty() {
            emit(acc, acc.iter().sum());
        }
        return;
    }
    for c in 0..=budget {
        acc.push(c);
        unit_counts(u, k + 1, budget - c, acc, emit);
        acc.pop();
    }
}
