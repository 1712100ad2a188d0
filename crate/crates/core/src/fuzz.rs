//! Seeded random operation sequences from the disk, with independent checks
//! after every step and shrinking of failing sequences.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::format::{write_atomic, write_plan, write_region};
use crate::geom::Axis;
use crate::ops::{self, MbccOptions, OpKind, OpRecord, Plan, SsccCase, SsccOptions};
use crate::reeb::{check_corollary1, check_corollary2, compute_pr_graph, PRGraph};
use crate::region::SSRegion;

/// What a single fuzz step tries to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Op(OpKind),
    Pair,
}

impl StepKind {
    pub const ALL: [StepKind; 5] = [
        StepKind::Op(OpKind::Mbcc),
        StepKind::Op(OpKind::SsccA1),
        StepKind::Op(OpKind::SsccA2),
        StepKind::Op(OpKind::SsccB),
        StepKind::Pair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepKind::Op(k) => k.name(),
            StepKind::Pair => "pair",
        }
    }

    fn pick(rng: &mut ChaCha8Rng) -> StepKind {
        // MBCC is drawn about twice as often as each of the other kinds.
        match rng.gen_range(0..6) {
            0 | 1 => StepKind::Op(OpKind::Mbcc),
            2 => StepKind::Op(OpKind::SsccA1),
            3 => StepKind::Op(OpKind::SsccA2),
            4 => StepKind::Op(OpKind::SsccB),
            _ => StepKind::Pair,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub steps: usize,
    pub seed: u64,
    pub count: usize,
    /// Where shrunken failing plans are written.
    pub out_dir: Option<PathBuf>,
}

/// One successfully applied operation together with what the checks saw.
#[derive(Debug, Clone, PartialEq)]
pub struct AppliedStep {
    pub kind: StepKind,
    pub values: Vec<Vec<f64>>,
    pub vertices_before: usize,
    pub vertices_after: usize,
}

#[derive(Debug, Clone)]
pub struct SequenceOutcome {
    pub index: usize,
    pub plan: Plan,
    pub region: SSRegion,
    pub applied: Vec<AppliedStep>,
    pub search_failures: Vec<(StepKind, String)>,
    pub tree_violations: usize,
    /// The first failed check and the shrunken plan that still fails it.
    pub failure: Option<(String, Plan)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub seed: u64,
    pub steps: usize,
    pub sequences: usize,
    pub attempted: usize,
    pub applied: BTreeMap<&'static str, usize>,
    pub search_failures: BTreeMap<&'static str, usize>,
    pub tree_violations: usize,
    pub assertion_failures: usize,
    pub failing_plans: Vec<String>,
    /// Hash of every final region file, in sequence order.
    pub checksum: u64,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.assertion_failures == 0 && self.tree_violations == 0
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuzz seed={} steps={} count={}", self.seed, self.steps, self.sequences)?;
        writeln!(f, "attempted {}", self.attempted)?;
        for (label, map) in [("applied", &self.applied), ("search_failures", &self.search_failures)] {
            write!(f, "{label}")?;
            for k in StepKind::ALL {
                write!(f, " {}={}", k.name(), map.get(k.name()).copied().unwrap_or(0))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "tree_violations {}", self.tree_violations)?;
        writeln!(f, "assertion_failures {}", self.assertion_failures)?;
        for p in &self.failing_plans {
            writeln!(f, "failing_plan {p}")?;
        }
        writeln!(f, "checksum {:016x}", self.checksum)
    }
}

fn is_search_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NoCandidatePoint
            | Error::NoCandidatePair
            | Error::SearchBudgetExceeded { .. }
            | Error::WindowUnsatisfiable(_)
            | Error::CaseInapplicable(_)
            | Error::ArcPairNotFound(_)
    )
}

fn tree_ok(g: &PRGraph) -> bool {
    g.vertices.len() == g.edges.len() + 1 && g.is_tree()
}

fn strictly_increasing(values: &[f64], gap: f64) -> bool {
    values.windows(2).all(|w| w[1] - w[0] > gap)
}

/// Checks one recorded circle addition from scratch: the new region is valid,
/// its graph is a tree, and the graph changed by the expected pattern.
pub fn check_transition(r: &SSRegion, rec: &OpRecord) -> Result<(SSRegion, PRGraph), String> {
    let before = compute_pr_graph(r, Axis::Horizontal).map_err(|e| format!("before: {e}"))?;
    let edge = before
        .resolve_edge_address(&rec.target_edge)
        .map_err(|e| e.to_string())?;
    let next = r.with_constraint(rec.constraint());
    let report = next.validate();
    if !report.is_valid() {
        return Err(format!("invalid region after {}: {report}", rec.kind));
    }
    let after = compute_pr_graph(&next, Axis::Horizontal).map_err(|e| format!("after: {e}"))?;
    if !tree_ok(&after) {
        return Err(format!("graph after {} is not a tree", rec.kind));
    }
    let ok = match rec.kind {
        OpKind::Mbcc => check_corollary1(&before, &after, edge),
        _ => check_corollary2(&before, &after, edge),
    };
    if !ok {
        return Err(format!("{} pattern mismatch on edge {}", rec.kind, rec.target_edge));
    }
    Ok((next, after))
}

fn attempt(r: &SSRegion, kind: StepKind, edge: &str) -> crate::Result<(Vec<OpRecord>, Vec<Vec<f64>>)> {
    match kind {
        StepKind::Op(OpKind::Mbcc) => {
            ops::mbcc(r, edge, &MbccOptions::default()).map(|(_, rec, rep)| (vec![rec], vec![rep.new_singular_values]))
        }
        StepKind::Op(k) => {
            let case = match k {
                OpKind::SsccA1 => SsccCase::A1,
                OpKind::SsccA2 => SsccCase::A2,
                _ => SsccCase::B,
            };
            ops::sscc(r, edge, case, &SsccOptions::default())
                .map(|(_, rec, rep)| (vec![rec], vec![rep.new_singular_values]))
        }
        StepKind::Pair => ops::mbssc_pair(r, edge, 0.5).map(|(_, recs, rep)| {
            (
                recs.to_vec(),
                vec![rep.sscc.new_singular_values, rep.mbcc.new_singular_values],
            )
        }),
    }
}

/// Runs sequence `index` of the stream seeded by `seed`, attempting `steps`
/// random operations on random edges.
pub fn run_sequence(seed: u64, index: usize, steps: usize) -> SequenceOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let base = SSRegion::unit_disk();
    let mut out = SequenceOutcome {
        index,
        plan: Plan::new(base.clone()),
        region: base,
        applied: Vec::new(),
        search_failures: Vec::new(),
        tree_violations: 0,
        failure: None,
    };
    for _ in 0..steps {
        let r = out.region.clone();
        let g = match compute_pr_graph(&r, Axis::Horizontal) {
            Ok(g) => g,
            Err(e) => {
                out.failure = Some((format!("graph of current region: {e}"), out.plan.clone()));
                break;
            }
        };
        let kind = StepKind::pick(&mut rng);
        let pick = rng.gen_range(0..g.edges.len());
        let edge = match g.edge_address(pick) {
            Ok(a) => a,
            Err(e) => {
                out.failure = Some((format!("edge address: {e}"), out.plan.clone()));
                break;
            }
        };
        let (records, values) = match attempt(&r, kind, &edge) {
            Ok(x) => x,
            Err(e) if is_search_failure(&e) => {
                out.search_failures.push((kind, e.to_string()));
                continue;
            }
            Err(e) => {
                out.failure = Some((format!("{} on {edge}: {e}", kind.name()), out.plan.clone()));
                break;
            }
        };
        let plan_len = out.plan.steps.len();
        let mut cur = r;
        let mut last_graph = None;
        let mut failed = None;
        for rec in &records {
            out.plan.steps.push(rec.clone());
            match check_transition(&cur, rec) {
                Ok((next, g2)) => {
                    cur = next;
                    last_graph = Some(g2);
                }
                Err(msg) => {
                    if msg.contains("not a tree") {
                        out.tree_violations += 1;
                    }
                    failed = Some(msg);
                    break;
                }
            }
        }
        let gap = 2.0 * cur.tol.eps_abs;
        let expected_lens: &[usize] = match kind {
            StepKind::Op(OpKind::Mbcc) => &[3],
            StepKind::Op(_) => &[2],
            StepKind::Pair => &[2, 3],
        };
        if failed.is_none() {
            let lens: Vec<usize> = values.iter().map(Vec::len).collect();
            if lens != expected_lens || !values.iter().all(|v| strictly_increasing(v, gap)) {
                failed = Some(format!("{} reported values {values:?}", kind.name()));
            } else if kind == StepKind::Pair {
                let (s, m) = (&values[0], &values[1]);
                let c = records[1].circle;
                if !(s[0] < m[0] && m[2] < s[1]) || c.center.y - c.radius <= 0.0 {
                    failed = Some(format!("pair nesting violated: {values:?}"));
                }
            }
        }
        if let Some(msg) = failed {
            let shrunk = shrink(&out.plan, |r, rec| check_transition(r, rec).is_err());
            out.plan.steps.truncate(plan_len);
            out.failure = Some((msg, shrunk));
            break;
        }
        let g2 = last_graph.expect("at least one record");
        out.applied.push(AppliedStep {
            kind,
            values,
            vertices_before: g.vertices.len(),
            vertices_after: g2.vertices.len(),
        });
        out.region = cur;
    }
    out
}

/// Drops earlier steps one at a time while the last step still fails
/// `fails`. Steps are re-applied without checks, so any subset replays.
pub fn shrink(plan: &Plan, fails: impl Fn(&SSRegion, &OpRecord) -> bool) -> Plan {
    let Some((last, prefix)) = plan.steps.split_last() else {
        return plan.clone();
    };
    let still_fails = |steps: &[OpRecord]| {
        let mut r = plan.base.clone();
        for s in steps {
            r = r.with_constraint(s.constraint());
        }
        fails(&r, last)
    };
    let mut kept: Vec<OpRecord> = prefix.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if still_fails(&trial) {
            kept = trial;
        } else {
            i += 1;
        }
    }
    kept.push(last.clone());
    Plan {
        base: plan.base.clone(),
        steps: kept,
    }
}

fn failing_path(dir: &Path, seed: u64, index: usize) -> PathBuf {
    dir.join(format!("fuzz-fail-{seed}-{index}.plan"))
}

/// Runs `count` sequences in parallel and folds them into a summary that only
/// depends on the configuration.
pub fn run(config: &FuzzConfig) -> (FuzzSummary, Vec<SequenceOutcome>) {
    let outcomes: Vec<SequenceOutcome> = (0..config.count)
        .into_par_iter()
        .map(|i| run_sequence(config.seed, i, config.steps))
        .collect();
    let mut s = FuzzSummary {
        seed: config.seed,
        steps: config.steps,
        sequences: config.count,
        ..FuzzSummary::default()
    };
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    for o in &outcomes {
        s.attempted += o.applied.len() + o.search_failures.len() + usize::from(o.failure.is_some());
        for a in &o.applied {
            *s.applied.entry(a.kind.name()).or_default() += 1;
        }
        for (k, _) in &o.search_failures {
            *s.search_failures.entry(k.name()).or_default() += 1;
        }
        s.tree_violations += o.tree_violations;
        if let Some((msg, plan)) = &o.failure {
            s.assertion_failures += 1;
            let label = match &config.out_dir {
                Some(dir) => {
                    let path = failing_path(dir, config.seed, o.index);
                    let mut text = format!("# {msg}\n");
                    text.push_str(&write_plan(plan));
                    match write_atomic(&path, &text) {
                        Ok(()) => path.display().to_string(),
                        Err(e) => format!("sequence {} ({msg}); write failed: {e}", o.index),
                    }
                }
                None => format!("sequence {} ({msg})", o.index),
            };
            s.failing_plans.push(label);
        }
        write_region(&o.region).hash(&mut hasher);
    }
    s.checksum = hasher.finish();
    (s, outcomes)
}
