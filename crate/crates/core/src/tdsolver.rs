//! Dynamic programming over a nice tree decomposition of the constraint graph,
//! for both decision and counting, and the strip-guessing wrapper on top.

use std::collections::HashMap;
use std::hash::BuildHasherDefault;
use std::collections::hash_map::DefaultHasher;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::count::MatchCount;
use crate::csp::{build_csp, Constraint, CspInstance};
use crate::perm::Permutation;
use crate::treewidth::{make_nice, min_fill_decomposition, DecompositionError, NiceKind, TreeDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(#[from] DecompositionError),
}

/// Fixed hasher so table iteration order is reproducible across runs.
type Table<T> = HashMap<Vec<usize>, T, BuildHasherDefault<DefaultHasher>>;

/// What a table entry records: presence, or a number of partial solutions.
trait Tally: Clone {
    fn one() -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

impl Tally for bool {
    fn one() -> Self {
        true
    }
    fn add_assign(&mut self, other: &Self) {
        *self |= *other;
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
}

impl Tally for BigUint {
    fn one() -> Self {
        <BigUint as One>::one()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub width: usize,
    pub nice_nodes: usize,
    pub max_table: usize,
}

fn run_dp<T: Tally>(
    inst: &CspInstance,
    td: &TreeDecomposition,
) -> Result<(Option<T>, DpStats), SolveError> {
    td.check(&inst.constraint_graph())?;
    let nice = make_nice(td)?;
    let k = inst.variable_count();
    let text = inst.text();
    let mut incident: Vec<Vec<(usize, &Constraint)>> = vec![Vec::new(); k];
    for c in inst.constraints() {
        incident[c.low].push((c.high, c));
        incident[c.high].push((c.low, c));
    }
    let mut stats = DpStats {
        width: nice.width(),
        nice_nodes: nice.nodes.len(),
        max_table: 0,
    };
    let mut tables: Vec<Option<Table<T>>> = vec![None; nice.nodes.len()];
    for t in nice.postorder() {
        let node = &nice.nodes[t];
        let table: Table<T> = match node.kind {
            NiceKind::Leaf => {
                let mut tab = Table::default();
                tab.insert(Vec::new(), T::one());
                tab
            }
            NiceKind::Introduce(v) => {
                let child = tables[node.children[0]].take().unwrap();
                let pos = node.bag.binary_search(&v).unwrap();
                // Bag positions of already-present constrained neighbours.
                let checks: Vec<(usize, &Constraint)> = incident[v]
                    .iter()
                    .filter_map(|&(u, c)| {
                        node.bag.binary_search(&u).ok().map(|p| {
                            let slot = if p > pos { p - 1 } else { p };
                            (slot, c)
                        })
                    })
                    .collect();
                let mut tab = Table::default();
                for (key, val) in &child {
                    for &a in inst.domain(v) {
                        let ok = checks.iter().all(|&(slot, c)| {
                            let b = key[slot];
                            if c.low == v {
                                c.holds(text, a, b)
                            } else {
                                c.holds(text, b, a)
                            }
                        });
                        if ok {
                            let mut nk = Vec::with_capacity(key.len() + 1);
                            nk.extend_from_slice(&key[..pos]);
                            nk.push(a);
                            nk.extend_from_slice(&key[pos..]);
                            tab.insert(nk, val.clone());
                        }
                    }
                }
                tab
            }
            NiceKind::Forget(v) => {
                let child = tables[node.children[0]].take().unwrap();
                let pos = nice.nodes[node.children[0]].bag.binary_search(&v).unwrap();
                let mut tab: Table<T> = Table::default();
                for (key, val) in child {
                    let mut nk = key;
                    nk.remove(pos);
                    match tab.get_mut(&nk) {
                        Some(acc) => acc.add_assign(&val),
                        None => {
                            tab.insert(nk, val);
                        }
                    }
                }
                tab
            }
            NiceKind::Join => {
                let a = tables[node.children[0]].take().unwrap();
                let b = tables[node.children[1]].take().unwrap();
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                let mut tab = Table::default();
                for (key, val) in small {
                    if let Some(other) = large.get(&key) {
                        tab.insert(key, val.mul(other));
                    }
                }
                tab
            }
        };
        stats.max_table = stats.max_table.max(table.len());
        if table.is_empty() && t != nice.root {
            return Ok((None, stats));
        }
        tables[t] = Some(table);
    }
    let root = tables[nice.root].take().unwrap();
    Ok((root.get(&Vec::new()).cloned(), stats))
}

pub fn solve_decision(inst: &CspInstance, td: &TreeDecomposition) -> Result<bool, SolveError> {
    solve_decision_with_stats(inst, td).map(|(b, _)| b)
}

pub fn solve_decision_with_stats(
    inst: &CspInstance,
    td: &TreeDecomposition,
) -> Result<(bool, DpStats), SolveError> {
    let (res, stats) = run_dp::<bool>(inst, td)?;
    Ok((res.unwrap_or(false), stats))
}

pub fn solve_count(inst: &CspInstance, td: &TreeDecomposition) -> Result<MatchCount, SolveError> {
    solve_count_with_stats(inst, td).map(|(c, _)| c)
}

pub fn solve_count_with_stats(
    inst: &CspInstance,
    td: &TreeDecomposition,
) -> Result<(MatchCount, DpStats), SolveError> {
    let (res, stats) = run_dp::<BigUint>(inst, td)?;
    Ok((MatchCount::from(res.unwrap_or_else(BigUint::zero)), stats))
}

/// Builds the CSP, decomposes it by min-fill and decides containment.
pub fn treedp_contains(text: &Permutation, pattern: &Permutation) -> bool {
    if pattern.len() > text.len() {
        return false;
    }
    let inst = build_csp(text, pattern);
    let td = min_fill_decomposition(&inst.constraint_graph());
    solve_decision(&inst, &td).expect("min-fill decompositions are valid")
}

pub fn treedp_count(text: &Permutation, pattern: &Permutation) -> MatchCount {
    if pattern.len() > text.len() {
        return MatchCount::zero();
    }
    let inst = build_csp(text, pattern);
    let td = min_fill_decomposition(&inst.constraint_graph());
    solve_count(&inst, &td).expect("min-fill decompositions are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StripCount {
    /// `max(1, round(n^(1/4)))`.
    Auto,
    Fixed(usize),
}

impl StripCount {
    pub fn resolve(self, n: usize) -> usize {
        let s = match self {
            StripCount::Auto => ((n as f64).powf(0.25).round() as usize).max(1),
            StripCount::Fixed(s) => s.max(1),
        };
        s.min(n.max(1))
    }
}

/// Inclusive index ranges of `s` contiguous strips over `1..=n`; the first
/// `n mod s` strips are one longer.
pub fn strip_bounds(n: usize, s: usize) -> Vec<(usize, usize)> {
    let base = n / s;
    let extra = n % s;
    let mut out = Vec::with_capacity(s);
    let mut start = 1;
    for i in 0..s {
        let len = base + usize::from(i < extra);
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StripStats {
    pub strips: usize,
    /// Guesses (leader set plus strip assignment) that reached the DP.
    pub guesses: usize,
    pub max_width: usize,
}

/// Strip guessing: guess which pattern entries are leftmost in their strip and
/// which strips those leaders occupy; every other entry shares its leader's
/// strip. Cross-strip index constraints become implied and are removed.
pub fn solve_strips(text: &Permutation, pattern: &Permutation, strips: StripCount) -> bool {
    solve_strips_with_stats(text, pattern, strips).0
}

pub fn solve_strips_with_stats(
    text: &Permutation,
    pattern: &Permutation,
    strips: StripCount,
) -> (bool, StripStats) {
    let n = text.len();
    let k = pattern.len();
    let s = strips.resolve(n);
    let mut stats = StripStats {
        strips: s,
        ..Default::default()
    };
    if k > n {
        return (false, stats);
    }
    let bounds = strip_bounds(n, s);
    let base = build_csp(text, pattern);
    // Bit `i` of the mask puts pattern index `i + 2` into the leader set.
    for mask in 0u64..(1u64 << (k - 1)) {
        let leaders: Vec<usize> = std::iter::once(1)
            .chain((0..k - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 2))
            .collect();
        if leaders.len() > s {
            continue;
        }
        let mut assign = Vec::with_capacity(leaders.len());
        if guess_strips(&base, &leaders, &bounds, 0, &mut assign, &mut stats) {
            return (true, stats);
        }
    }
    (false, stats)
}

fn guess_strips(
    base: &CspInstance,
    leaders: &[usize],
    bounds: &[(usize, usize)],
    next_strip: usize,
    assign: &mut Vec<usize>,
    stats: &mut StripStats,
) -> bool {
    if assign.len() == leaders.len() {
        stats.guesses += 1;
        return solve_guess(base, leaders, bounds, assign, stats);
    }
    let remaining = leaders.len() - assign.len();
    for strip in next_strip..=bounds.len() - remaining {
        assign.push(strip);
        let found = guess_strips(base, leaders, bounds, strip + 1, assign, stats);
        assign.pop();
        if found {
            return true;
        }
    }
    false
}

fn solve_guess(
    base: &CspInstance,
    leaders: &[usize],
    bounds: &[(usize, usize)],
    assign: &[usize],
    stats: &mut StripStats,
) -> bool {
    let mut inst = base.clone();
    let mut leader = 0;
    for var in 0..inst.variable_count() {
        let index = var + 1;
        if leader + 1 < leaders.len() && leaders[leader + 1] == index {
            leader += 1;
        }
        let (lo, hi) = bounds[assign[leader]];
        inst.restrict_domain(var, |a| lo <= a && a <= hi);
        if inst.domain(var).is_empty() {
            return false;
        }
    }
    for &x in &leaders[1..] {
        inst.remove_left_constraint(x - 1);
    }
    let td = min_fill_decomposition(&inst.constraint_graph());
    stats.max_width = stats.max_width.max(td.width());
    solve_decision(&inst, &td).expect("min-fill decompositions are valid")
}
