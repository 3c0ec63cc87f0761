//! Pruned backtracking search for flat sets with a hyperplane secant cap,
//! at desk scale.
//!
//! The tree is the lex-increasing sequences of candidate indices. Prunes:
//! (a) a per-hyperplane counter would exceed the cap t — always sound;
//! (b) too few candidates remain to reach the target size — always sound;
//! (c) when targeting the size bound exactly, a (k−1)-subset of the
//!     partial set fails to span fully — sound for bound-attaining sets,
//!     where full (k−1)-subset spans are forced;
//! (d) with theory enabled, a firm infeasibility verdict short-circuits
//!     the whole search.
//!
//! Exhaustion is certified: a complete traversal reports a SHA-256 tree
//! hash over the (deterministic) event stream, combined per depth-2
//! prefix so serial and work-stealing parallel runs agree bit-for-bit.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::BigInt;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::analysis::{spectrum, verify_length_maximal};
use crate::formulas::{
    classify_parameters, length_bound, FeasibilityReason, FeasibilityStatus, ParameterSet,
};
use crate::geometry::{
    count_flats, enumerate_flats, enumerate_span_indices, num_points, point_index, rref,
    Hyperplane, Subspace, SubspaceSet,
};
use crate::gf::{FiniteField, GFElem};
use crate::{Error, Result};

/// Candidate universes larger than this are not desk-scale searches.
pub const UNIVERSE_LIMIT: u128 = 1 << 20;
const HYPERPLANE_LIMIT: u64 = 1 << 24;
const INCIDENCE_ENTRY_LIMIT: u128 = 1 << 26;
/// Exhaustive confirmation over more candidates than this demands an
/// explicit acknowledgment that the run may take long.
pub const ACK_FREE_UNIVERSE: usize = 100;
const DEBUG_CHECK_NODE_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryBreaking {
    /// Candidates are chosen in strictly increasing index order. Complete:
    /// every set is reachable exactly once.
    Lex,
    /// The first k elements are pinned to the k unit points. Sound for
    /// spanning witnesses only (any spanning set can be mapped onto the
    /// unit points by a projectivity); requires h = 1, an exact-bound
    /// target, and t ≥ k−1.
    FirstElementStabilized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
    RuledOutByTheory,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub cap_prunes: u64,
    pub degree_prunes: u64,
    pub span_prunes: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    params: ParameterSet,
    n_target: u64,
    use_theory: bool,
    symmetry: SymmetryBreaking,
    span_prune: bool,
    node_budget: u64,
    time_budget: Option<Duration>,
    parallel_width: usize,
    collect_all: bool,
}

impl SearchProblem {
    /// A search for a set attaining the size bound of `params`. The target
    /// size can be overridden (near-maximal or bound-exceeding searches).
    pub fn new(params: ParameterSet) -> Result<SearchProblem> {
        if params.k() < 2 {
            return Err(Error::Unsupported("searches need k >= 2".into()));
        }
        if params.t() > u16::MAX as u64 {
            return Err(Error::Unsupported("secant caps beyond 65535 are not desk-scale".into()));
        }
        let bound = length_bound(&params);
        if bound <= BigInt::from(0) {
            return Err(Error::Unsupported(format!(
                "the size bound {bound} is not positive; no search target exists"
            )));
        }
        if bound > BigInt::from(u32::MAX) {
            return Err(Error::Unsupported(format!("the size bound {bound} is not desk-scale")));
        }
        let n_target: u64 = bound.to_string().parse().expect("checked range");
        Ok(SearchProblem {
            params,
            n_target,
            use_theory: true,
            symmetry: SymmetryBreaking::Lex,
            span_prune: true,
            node_budget: u64::MAX,
            time_budget: None,
            parallel_width: 1,
            collect_all: false,
        })
    }

    pub fn with_target(mut self, n: u64) -> SearchProblem {
        self.n_target = n;
        self
    }
    pub fn without_theory(mut self) -> SearchProblem {
        self.use_theory = false;
        self
    }
    pub fn with_symmetry(mut self, s: SymmetryBreaking) -> SearchProblem {
        self.symmetry = s;
        self
    }
    /// Disable the (k−1)-subset span prune (it is only ever applied when
    /// the target equals the size bound, where it is theory-backed).
    pub fn without_span_prune(mut self) -> SearchProblem {
        self.span_prune = false;
        self
    }
    pub fn with_node_budget(mut self, nodes: u64) -> SearchProblem {
        self.node_budget = nodes;
        self
    }
    pub fn with_time_budget(mut self, limit: Duration) -> SearchProblem {
        self.time_budget = Some(limit);
        self
    }
    /// Width 1 is serial; anything larger enables work-stealing over
    /// depth-2 subtrees.
    pub fn with_parallel_width(mut self, width: usize) -> SearchProblem {
        self.parallel_width = width.max(1);
        self
    }
    /// Keep traversing after a witness; collect every witness in lex order.
    pub fn enumerate_all(mut self) -> SearchProblem {
        self.collect_all = true;
        self
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }
    pub fn n_target(&self) -> u64 {
        self.n_target
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// One witness when status is Found (the lex-first one in serial or
    /// enumerate-all runs).
    pub witness: Option<SubspaceSet>,
    /// Every witness, in lex order, when enumerate-all was requested.
    pub witnesses: Vec<SubspaceSet>,
    pub stats: SearchStats,
    /// Why the search was short-circuited, when status is RuledOutByTheory.
    pub theory_reasons: Vec<FeasibilityReason>,
    /// SHA-256 over the traversal event stream; present exactly when the
    /// full tree was traversed, making ExhaustedNone a checkable
    /// certificate.
    pub tree_hash: Option<String>,
    pub universe_size: u64,
    pub n_target: u64,
}

const EV_ENTER: u8 = 0;
const EV_CAP: u8 = 1;
const EV_DEGREE: u8 = 2;
const EV_SPAN: u8 = 3;
const EV_WITNESS: u8 = 4;

fn ev(hasher: &mut Sha256, tag: u8, depth: usize, cand: u32) {
    hasher.update([tag]);
    hasher.update((depth as u32).to_le_bytes());
    hasher.update(cand.to_le_bytes());
}

struct Engine<'a> {
    f: &'a Arc<FiniteField>,
    cands: &'a [Subspace],
    incidence: &'a [Vec<u32>],
    t: u16,
    n_target: usize,
    k: u32,
    h: u32,
    span_check: bool,
    collect_all: bool,
    skip: Option<&'a BTreeSet<u32>>,
    /// skip_suffix[c] = how many skipped indices are ≥ c.
    skip_suffix: Option<&'a [u32]>,
    stop: &'a AtomicBool,
    budget_hit: &'a AtomicBool,
    nodes: &'a AtomicU64,
    node_budget: u64,
    deadline: Option<Instant>,
    debug_hps: Option<&'a [Hyperplane]>,
}

struct Segment {
    hash: [u8; 32],
    nodes: u64,
    cap_prunes: u64,
    degree_prunes: u64,
    span_prunes: u64,
    witnesses: Vec<Vec<u32>>,
    complete: bool,
}

impl<'a> Engine<'a> {
    fn universe(&self) -> u32 {
        self.cands.len() as u32
    }

    fn available_from(&self, cand: u32) -> usize {
        let raw = (self.universe() - cand) as usize;
        match self.skip_suffix {
            Some(suf) => raw - suf[cand as usize] as usize,
            None => raw,
        }
    }

    /// Apply candidate increments; on a cap violation roll back and
    /// report false.
    fn apply(&self, cand: u32, counters: &mut [u16]) -> bool {
        let inc = &self.incidence[cand as usize];
        for (pos, &hp) in inc.iter().enumerate() {
            counters[hp as usize] += 1;
            if counters[hp as usize] > self.t {
                for &back in &inc[..=pos] {
                    counters[back as usize] -= 1;
                }
                return false;
            }
        }
        true
    }

    fn unapply(&self, cand: u32, counters: &mut [u16]) {
        for &hp in &self.incidence[cand as usize] {
            counters[hp as usize] -= 1;
        }
    }

    /// Every (k−1)-subset of chosen ∪ {cand} that contains cand must span
    /// a full ((k−1)h − 1)-flat.
    fn span_ok(&self, chosen: &[u32], cand: u32) -> bool {
        let r = (self.k - 2) as usize;
        if r == 0 || chosen.len() < r {
            return true;
        }
        let need = ((self.k - 1) * self.h) as usize;
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let mut rows: Vec<Vec<GFElem>> = Vec::with_capacity(need);
            for &i in &idx {
                rows.extend(self.cands[chosen[i] as usize].gens().iter().cloned());
            }
            rows.extend(self.cands[cand as usize].gens().iter().cloned());
            if rref(self.f, &mut rows) < need {
                return false;
            }
            let Some(pos) = (0..r).rev().find(|&i| idx[i] < chosen.len() - r + i) else {
                return true;
            };
            idx[pos] += 1;
            for i in pos + 1..r {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }

    /// One more node visited; returns false when the walk must stop.
    fn tick(&self) -> bool {
        let so_far = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if so_far > self.node_budget {
            self.budget_hit.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                self.budget_hit.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.stop.load(Ordering::Relaxed)
    }

    /// Independent recount of the per-hyperplane counters (debug builds,
    /// small trees only).
    fn debug_counters_agree(&self, chosen: &[u32], counters: &[u16]) {
        let Some(hps) = self.debug_hps else { return };
        if self.nodes.load(Ordering::Relaxed) > DEBUG_CHECK_NODE_CAP {
            return;
        }
        for (hp_idx, hp) in hps.iter().enumerate() {
            let count = chosen
                .iter()
                .filter(|&&c| {
                    crate::geometry::incidence(self.f, &self.cands[c as usize], hp).unwrap()
                })
                .count();
            assert_eq!(
                count as u16, counters[hp_idx],
                "counter drift at hyperplane {hp_idx} with partial set {chosen:?}"
            );
        }
    }

    fn walk(&self, mut chosen: Vec<u32>, mut counters: Vec<u16>, start: u32, seed: &[u8]) -> Segment {
        let mut hasher = Sha256::new();
        hasher.update(seed);
        for &c in &chosen {
            hasher.update(c.to_le_bytes());
        }
        let mut seg = Segment {
            hash: [0; 32],
            nodes: 0,
            cap_prunes: 0,
            degree_prunes: 0,
            span_prunes: 0,
            witnesses: Vec::new(),
            complete: true,
        };
        self.dfs(&mut chosen, &mut counters, start, &mut hasher, &mut seg);
        seg.hash = hasher.finalize().into();
        seg
    }

    fn dfs(
        &self,
        chosen: &mut Vec<u32>,
        counters: &mut Vec<u16>,
        start: u32,
        hasher: &mut Sha256,
        seg: &mut Segment,
    ) -> bool {
        let u = self.universe();
        let depth = chosen.len();
        let mut cand = start;
        while cand < u {
            if let Some(skip) = self.skip {
                if skip.contains(&cand) {
                    cand += 1;
                    continue;
                }
            }
            if depth + self.available_from(cand) < self.n_target {
                seg.degree_prunes += 1;
                ev(hasher, EV_DEGREE, depth, cand);
                break;
            }
            if !self.tick() {
                seg.complete = false;
                return false;
            }
            seg.nodes += 1;
            ev(hasher, EV_ENTER, depth, cand);
            if !self.apply(cand, counters) {
                seg.cap_prunes += 1;
                ev(hasher, EV_CAP, depth, cand);
                cand += 1;
                continue;
            }
            if self.span_check && !self.span_ok(chosen, cand) {
                seg.span_prunes += 1;
                ev(hasher, EV_SPAN, depth, cand);
                self.unapply(cand, counters);
                cand += 1;
                continue;
            }
            chosen.push(cand);
            if cfg!(debug_assertions) {
                self.debug_counters_agree(chosen, counters);
            }
            if chosen.len() == self.n_target {
                ev(hasher, EV_WITNESS, depth, cand);
                seg.witnesses.push(chosen.clone());
                if !self.collect_all {
                    self.stop.store(true, Ordering::Relaxed);
                    chosen.pop();
                    self.unapply(cand, counters);
                    seg.complete = false;
                    return false;
                }
            } else if !self.dfs(chosen, counters, cand + 1, hasher, seg) {
                chosen.pop();
                self.unapply(cand, counters);
                return false;
            }
            chosen.pop();
            self.unapply(cand, counters);
            cand += 1;
        }
        true
    }
}

/// Run the configured search.
pub fn search(problem: &SearchProblem) -> Result<SearchOutcome> {
    run(problem)
}

/// Exhaustively certify that no set of the target size with the secant cap
/// exists: theory and the theory-backed span prune are forced off, so the
/// traversal relies only on unconditionally sound prunes. ExhaustedNone
/// with its tree hash is the certificate. A large universe demands
/// `ack_long` (or tight budgets) up front; running out of budget is an
/// error because no certificate exists in that case.
pub fn confirm_nonexistence(problem: &SearchProblem, ack_long: bool) -> Result<SearchOutcome> {
    let mut raw = problem.clone();
    raw.use_theory = false;
    raw.span_prune = false;
    raw.collect_all = false;
    let ps = raw.params;
    let universe = count_flats(ps.q(), ps.k() * ps.h(), ps.h()).unwrap_or(u128::MAX);
    if universe > ACK_FREE_UNIVERSE as u128 && !ack_long {
        return Err(Error::Unsupported(format!(
            "exhaustive confirmation over {universe} candidates may run long; \
             acknowledge the long run explicitly or set budgets"
        )));
    }
    let out = run(&raw)?;
    if out.status == SearchStatus::BudgetExceeded {
        // Name the budget that actually tripped.
        if out.stats.nodes >= raw.node_budget {
            return Err(Error::BudgetExceeded {
                what: "exhaustive confirmation (nodes)",
                needed: out.stats.nodes as u128 + 1,
                budget: raw.node_budget as u128,
            });
        }
        let limit = raw.time_budget.map(|d| d.as_millis()).unwrap_or(0);
        return Err(Error::BudgetExceeded {
            what: "exhaustive confirmation (milliseconds)",
            needed: out.stats.wall.as_millis().max(limit + 1),
            budget: limit,
        });
    }
    Ok(out)
}

fn run(p: &SearchProblem) -> Result<SearchOutcome> {
    let started = Instant::now();
    let ps = p.params;
    let (q, h, k, t) = (ps.q(), ps.h(), ps.k(), ps.t());
    let bound = length_bound(&ps);
    let at_bound = BigInt::from(p.n_target) == bound;

    if p.use_theory && at_bound {
        let verdict = classify_parameters(q, h, k, t)?;
        if verdict.status == FeasibilityStatus::RuledOut {
            return Ok(SearchOutcome {
                status: SearchStatus::RuledOutByTheory,
                witness: None,
                witnesses: Vec::new(),
                stats: SearchStats { wall: started.elapsed(), ..SearchStats::default() },
                theory_reasons: verdict.reasons,
                tree_hash: None,
                universe_size: 0,
                n_target: p.n_target,
            });
        }
    }

    let f = Arc::new(FiniteField::new(ps.p(), ps.m())?);
    let w = k * h;
    let universe = count_flats(q, w, h).unwrap_or(u128::MAX);
    if universe > UNIVERSE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "search universe",
            needed: universe,
            budget: UNIVERSE_LIMIT,
        });
    }
    let cands = enumerate_flats(&f, w, h)?;
    let hp_count = num_points(q, w - 1)?;
    if hp_count > HYPERPLANE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "hyperplane counters",
            needed: hp_count as u128,
            budget: HYPERPLANE_LIMIT as u128,
        });
    }
    let dual_size = (cands.len() as u128).saturating_mul(num_points(q, w - h - 1).map(|v| v as u128).unwrap_or(u128::MAX));
    if dual_size > INCIDENCE_ENTRY_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "incidence table",
            needed: dual_size,
            budget: INCIDENCE_ENTRY_LIMIT,
        });
    }
    let incidence: Vec<Vec<u32>> = cands
        .iter()
        .map(|s| {
            let rows = s.dual_flat_basis(&f);
            enumerate_span_indices(&f, &rows).into_iter().map(|i| i as u32).collect()
        })
        .collect();

    let stop = AtomicBool::new(false);
    let budget_hit = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let debug_hps: Option<Vec<Hyperplane>> = if cfg!(debug_assertions) {
        Some(
            (0..hp_count)
                .map(|i| Hyperplane::from_index(&f, w - 1, i))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let mut engine = Engine {
        f: &f,
        cands: &cands,
        incidence: &incidence,
        t: t as u16,
        n_target: p.n_target as usize,
        k,
        h,
        span_check: p.span_prune && at_bound && k >= 3,
        collect_all: p.collect_all,
        skip: None,
        skip_suffix: None,
        stop: &stop,
        budget_hit: &budget_hit,
        nodes: &nodes,
        node_budget: p.node_budget,
        deadline: p.time_budget.map(|d| started + d),
        debug_hps: debug_hps.as_deref(),
    };

    let preamble = {
        let mut v = Vec::new();
        v.extend_from_slice(b"flatset-tree-v1");
        v.extend_from_slice(&q.to_le_bytes());
        v.extend_from_slice(&h.to_le_bytes());
        v.extend_from_slice(&k.to_le_bytes());
        v.extend_from_slice(&t.to_le_bytes());
        v.extend_from_slice(&p.n_target.to_le_bytes());
        v.extend_from_slice(&(cands.len() as u64).to_le_bytes());
        v
    };

    let frame_set;
    let frame_suffix;
    let segments: Vec<Segment> = match p.symmetry {
        SymmetryBreaking::Lex => {
            if p.n_target < 3 {
                vec![engine.walk(Vec::new(), vec![0u16; hp_count as usize], 0, &preamble)]
            } else {
                lex_prefix_walk(&engine, hp_count as usize, &preamble, p.parallel_width)
            }
        }
        SymmetryBreaking::FirstElementStabilized => {
            if h != 1 || !at_bound || t < (k - 1) as u64 {
                return Err(Error::Unsupported(
                    "the stabilized mode needs h = 1, a target equal to the size bound, \
                     and t >= k-1 (it only finds spanning witnesses)"
                        .into(),
                ));
            }
            let mut frame: Vec<u32> = Vec::new();
            for i in 0..w as usize {
                let mut coords = vec![0 as GFElem; w as usize];
                coords[i] = 1;
                frame.push(point_index(&f, &coords) as u32);
            }
            frame.sort_unstable();
            frame_set = frame.iter().copied().collect::<BTreeSet<u32>>();
            let mut suffix = vec![0u32; cands.len() + 1];
            for c in (0..cands.len()).rev() {
                suffix[c] = suffix[c + 1] + u32::from(frame_set.contains(&(c as u32)));
            }
            frame_suffix = suffix;
            engine.skip = Some(&frame_set);
            engine.skip_suffix = Some(&frame_suffix);
            let mut counters = vec![0u16; hp_count as usize];
            for &c in &frame {
                assert!(engine.apply(c, &mut counters), "unit points violate the cap");
            }
            let mut seed = preamble.clone();
            seed.extend_from_slice(b"stab");
            vec![engine.walk(frame, counters, 0, &seed)]
        }
    };

    let complete = segments.iter().all(|s| s.complete) && !stop.load(Ordering::Relaxed);
    let found_stop = stop.load(Ordering::Relaxed) && !budget_hit.load(Ordering::Relaxed);

    let mut stats = SearchStats::default();
    let mut witness_indices: Vec<Vec<u32>> = Vec::new();
    let mut hasher = Sha256::new();
    hasher.update(&preamble);
    for seg in &segments {
        stats.nodes += seg.nodes;
        stats.cap_prunes += seg.cap_prunes;
        stats.degree_prunes += seg.degree_prunes;
        stats.span_prunes += seg.span_prunes;
        witness_indices.extend(seg.witnesses.iter().cloned());
        hasher.update(seg.hash);
    }
    stats.wall = started.elapsed();
    let tree_hash = if complete {
        let digest = hasher.finalize();
        Some(digest.iter().map(|b| format!("{b:02x}")).collect::<String>())
    } else {
        None
    };

    // In a raced parallel first-witness run, keep the lex-least witness.
    witness_indices.sort();
    if !p.collect_all {
        witness_indices.truncate(1);
    }
    let witnesses: Vec<SubspaceSet> = witness_indices
        .iter()
        .map(|idxs| reify_and_verify(&f, &engine, idxs, at_bound))
        .collect::<Result<Vec<_>>>()?;

    let status = if !witnesses.is_empty() {
        SearchStatus::Found
    } else if budget_hit.load(Ordering::Relaxed) {
        SearchStatus::BudgetExceeded
    } else {
        debug_assert!(complete && !found_stop);
        SearchStatus::ExhaustedNone
    };

    Ok(SearchOutcome {
        status,
        witness: witnesses.first().cloned(),
        witnesses,
        stats,
        theory_reasons: Vec::new(),
        tree_hash,
        universe_size: cands.len() as u64,
        n_target: p.n_target,
    })
}

fn lex_prefix_walk(
    engine: &Engine,
    hp_count: usize,
    preamble: &[u8],
    width: usize,
) -> Vec<Segment> {
    let u = engine.universe();
    let mut root_hasher = Sha256::new();
    root_hasher.update(preamble);
    root_hasher.update(b"root");
    let mut root = Segment {
        hash: [0; 32],
        nodes: 0,
        cap_prunes: 0,
        degree_prunes: 0,
        span_prunes: 0,
        witnesses: Vec::new(),
        complete: true,
    };
    let mut prefixes: Vec<(u32, u32)> = Vec::new();
    let mut counters = vec![0u16; hp_count];

    'outer: for i in 0..u {
        if engine.available_from(i) < engine.n_target {
            root.degree_prunes += 1;
            ev(&mut root_hasher, EV_DEGREE, 0, i);
            break;
        }
        if !engine.tick() {
            root.complete = false;
            break;
        }
        root.nodes += 1;
        ev(&mut root_hasher, EV_ENTER, 0, i);
        if !engine.apply(i, &mut counters) {
            root.cap_prunes += 1;
            ev(&mut root_hasher, EV_CAP, 0, i);
            continue;
        }
        for j in i + 1..u {
            if 1 + engine.available_from(j) < engine.n_target {
                root.degree_prunes += 1;
                ev(&mut root_hasher, EV_DEGREE, 1, j);
                break;
            }
            if !engine.tick() {
                root.complete = false;
                engine.unapply(i, &mut counters);
                break 'outer;
            }
            root.nodes += 1;
            ev(&mut root_hasher, EV_ENTER, 1, j);
            if !engine.apply(j, &mut counters) {
                root.cap_prunes += 1;
                ev(&mut root_hasher, EV_CAP, 1, j);
                continue;
            }
            if engine.span_check && !engine.span_ok(&[i], j) {
                root.span_prunes += 1;
                ev(&mut root_hasher, EV_SPAN, 1, j);
            } else {
                prefixes.push((i, j));
            }
            engine.unapply(j, &mut counters);
        }
        engine.unapply(i, &mut counters);
    }
    root.hash = root_hasher.finalize().into();

    let walk_one = |&(i, j): &(u32, u32)| -> Segment {
        let mut counters = vec![0u16; hp_count];
        assert!(engine.apply(i, &mut counters) && engine.apply(j, &mut counters));
        let mut seed = preamble.to_vec();
        seed.extend_from_slice(b"prefix");
        seed.extend_from_slice(&i.to_le_bytes());
        seed.extend_from_slice(&j.to_le_bytes());
        engine.walk(vec![i, j], counters, j + 1, &seed)
    };

    let mut segments = vec![root];
    if width > 1 {
        segments.extend(prefixes.par_iter().map(walk_one).collect::<Vec<_>>());
    } else {
        segments.extend(prefixes.iter().map(walk_one));
    }
    segments
}

fn reify_and_verify(
    f: &Arc<FiniteField>,
    engine: &Engine,
    idxs: &[u32],
    at_bound: bool,
) -> Result<SubspaceSet> {
    let elements: Vec<Subspace> =
        idxs.iter().map(|&c| engine.cands[c as usize].clone()).collect();
    let set = SubspaceSet::new(f.clone(), engine.k, engine.h, elements)?;
    let sp = spectrum(&set)?;
    if set.len() != engine.n_target || sp.max_secant() as u64 > engine.t as u64 {
        return Err(Error::SelfCheckFailed(format!(
            "search produced a bogus witness: size {}, max secant {}",
            set.len(),
            sp.max_secant()
        )));
    }
    if at_bound {
        let report = verify_length_maximal(&set, engine.t as u32)?;
        if !report.is_length_maximal {
            return Err(Error::SelfCheckFailed(
                "search witness fails independent maximality verification".into(),
            ));
        }
    }
    Ok(set)
}
