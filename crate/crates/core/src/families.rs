//! Extremal pattern families with checkable minor certificates, and detectors
//! for t-monotone patterns.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::perm::{incidence_graph, lis_lds, IncidenceGraph, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("grid size must be a positive even number, got {0}")]
    BadGridSize(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("host vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("host vertex {vertex} lies in branch sets {first} and {second}")]
    Overlap { vertex: usize, first: usize, second: usize },
    #[error("branch set {0} is empty")]
    EmptyBranch(usize),
    #[error("branch set {0} is not connected")]
    Disconnected(usize),
    #[error("no host edge between branch sets {0} and {1}")]
    MissingAdjacency(usize, usize),
}

/// Witness that a graph on `branch_sets.len()` vertices with edge set
/// `required` is a minor of the host's incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCertificate {
    pub host: Permutation,
    /// Host indices (1-based) contracted into each minor vertex.
    pub branch_sets: Vec<Vec<usize>>,
    /// Minor edges, as pairs of branch-set ids.
    pub required: Vec<(usize, usize)>,
}

impl MinorCertificate {
    pub fn verify(&self) -> Result<(), CertificateError> {
        let g = incidence_graph(&self.host);
        let n = self.host.len();
        let mut owner = vec![usize::MAX; n];
        for (b, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(CertificateError::EmptyBranch(b));
            }
            for &i in set {
                if i == 0 || i > n {
                    return Err(CertificateError::OutOfRange(i));
                }
                if owner[i - 1] != usize::MAX {
                    return Err(CertificateError::Overlap {
                        vertex: i,
                        first: owner[i - 1],
                        second: b,
                    });
                }
                owner[i - 1] = b;
            }
            let vs: Vec<usize> = set.iter().map(|&i| i - 1).collect();
            if !g.graph().is_connected_subset(&vs) {
                return Err(CertificateError::Disconnected(b));
            }
        }
        let mut touching = BTreeSet::new();
        for (u, v) in g.graph().edges() {
            let (a, b) = (owner[u], owner[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                touching.insert((a.min(b), a.max(b)));
            }
        }
        for &(a, b) in &self.required {
            if !touching.contains(&(a.min(b), a.max(b))) {
                return Err(CertificateError::MissingAdjacency(a, b));
            }
        }
        Ok(())
    }

    /// The graph the certificate claims as a minor.
    pub fn minor_graph(&self) -> Graph {
        Graph::from_edges(self.branch_sets.len(), self.required.iter().copied())
    }
}

/// Lays out a permutation whose index path visits vertices in `index_path`
/// order and whose value path visits them in `value_path` order.
fn realize(index_path: &[usize], value_path: &[usize]) -> (Permutation, Vec<usize>) {
    let mut value_of = vec![0; value_path.len()];
    for (pos, &v) in value_path.iter().enumerate() {
        value_of[v] = pos + 1;
    }
    let mut index_of = vec![0; index_path.len()];
    let values = index_path
        .iter()
        .enumerate()
        .map(|(pos, &v)| {
            index_of[v] = pos + 1;
            value_of[v]
        })
        .collect();
    (Permutation::new(values).expect("two Hamiltonian paths"), index_of)
}

/// Branch-set id of grid vertex `(i, j)`, `i ∈ [k]`, `j ∈ [2k]`.
pub fn grid_label(k: usize, i: usize, j: usize) -> usize {
    (i - 1) * 2 * k + (j - 1)
}

/// A 2-increasing permutation of length `2k²` whose incidence graph contains
/// a `k × 2k` grid, with the grid as a certificate.
pub fn gen_grid_two_track(k: usize) -> Result<(Permutation, MinorCertificate), FamilyError> {
    if k == 0 || k % 2 == 1 {
        return Err(FamilyError::BadGridSize(k));
    }
    let kk = k * k;
    // x_t is vertex t-1, y_t is vertex kk+t-1
    let x = |t: usize| t - 1;
    let y = |t: usize| kk + t - 1;
    let mut h1 = Vec::with_capacity(2 * kk);
    for t in 1..=kk / 2 {
        h1.extend([x(2 * t - 1), y(2 * t - 1), y(2 * t), x(2 * t)]);
    }
    let mut h2: Vec<usize> = (1..=k).map(x).collect();
    for t in 1..=(kk - k) / 2 {
        h2.extend([y(2 * t - 1), x(k + 2 * t - 1), x(k + 2 * t), y(2 * t)]);
    }
    h2.extend((kk - k + 1..=kk).map(y));
    let (host, index_of) = realize(&h1, &h2);

    let z = |i: usize, j: usize| {
        if j % 2 == 1 {
            x((j / 2) * k + i)
        } else {
            y((j / 2 - 1) * k + i)
        }
    };
    let mut branch_sets = vec![Vec::new(); 2 * kk];
    for i in 1..=k {
        for j in 1..=2 * k {
            branch_sets[grid_label(k, i, j)] = vec![index_of[z(i, j)]];
        }
    }
    let mut required = Vec::new();
    for i in 1..=k {
        for j in 1..=2 * k {
            if i < k {
                required.push((grid_label(k, i, j), grid_label(k, i + 1, j)));
            }
            if j < 2 * k {
                required.push((grid_label(k, i, j), grid_label(k, i, j + 1)));
            }
        }
    }
    let cert = MinorCertificate {
        host: host.clone(),
        branch_sets,
        required,
    };
    Ok((host, cert))
}

/// `id = π_1, …, π_m = π` with `π_{i+1} = π_i ∘ σ_i` and every `σ_i` a split
/// permutation other than the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSequence {
    pub n: usize,
    pub sigmas: Vec<Permutation>,
    /// `p(σ_i)`: how many entries were moved to the front.
    pub split_points: Vec<usize>,
    pub sequence: Vec<Permutation>,
}

impl SplitSequence {
    /// Number of sequence elements (one more than the number of splits).
    pub fn m(&self) -> usize {
        self.sequence.len()
    }

    pub fn target(&self) -> &Permutation {
        self.sequence.last().unwrap()
    }

    /// Recomposes `σ_1 ∘ … ∘ σ_{m-1}` from scratch.
    pub fn recompose(&self) -> Permutation {
        self.sigmas
            .iter()
            .fold(Permutation::identity(self.n), |acc, s| acc.compose(s))
    }

    pub fn is_valid(&self) -> bool {
        self.sigmas.len() + 1 == self.sequence.len()
            && self.sequence[0].is_identity()
            && self.sigmas.iter().zip(&self.split_points).all(|(s, &p)| split_point(s) == Some(p))
            && self
                .sigmas
                .iter()
                .enumerate()
                .all(|(i, s)| self.sequence[i].compose(s) == self.sequence[i + 1])
    }
}

/// `p(σ)` for a split permutation `σ ≠ id`, or `None` if `σ` is not one.
pub fn split_point(sigma: &Permutation) -> Option<usize> {
    let v = sigma.values();
    let descents: Vec<usize> = (1..v.len()).filter(|&i| v[i - 1] > v[i]).collect();
    match descents.as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

/// Splits by binary digits of each value's target position, least significant
/// first, so at most `⌈log₂ n⌉` splits are used.
pub fn split_decomposition(pi: &Permutation) -> SplitSequence {
    let n = pi.len();
    let key = |v: usize| pi.position(v) - 1;
    let mut current = Permutation::identity(n);
    let mut sequence = vec![current.clone()];
    let mut sigmas = Vec::new();
    let mut split_points = Vec::new();
    let bits = usize::BITS - (n.max(1) - 1).leading_zeros();
    for bit in 0..bits {
        if &current == pi {
            break;
        }
        let (front, back): (Vec<usize>, Vec<usize>) =
            (1..=n).partition(|&j| key(current.value(j)) >> bit & 1 == 0);
        let sigma = Permutation::new(front.iter().chain(&back).copied().collect()).unwrap();
        if sigma.is_identity() {
            continue;
        }
        split_points.push(front.len());
        current = current.compose(&sigma);
        sigmas.push(sigma);
        sequence.push(current.clone());
    }
    debug_assert_eq!(&current, pi);
    SplitSequence {
        n,
        sigmas,
        split_points,
        sequence,
    }
}

/// Result of [`gen_three_track`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeTrack {
    pub host: Permutation,
    pub certificate: MinorCertificate,
    pub splits: SplitSequence,
}

/// A 3-increasing host permutation whose incidence graph has the union of the
/// index paths of every `π_i` in `π`'s split sequence as a minor.
pub fn gen_three_track(pi: &Permutation) -> ThreeTrack {
    let splits = split_decomposition(pi);
    let n = pi.len();
    let m = splits.m();
    // x_{i,j} and the y/z vertex c_{i,j} (y when j ≤ p(σ_i)), all 1-based
    let x = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let c = |i: usize, j: usize| m * n + (i - 1) * n + (j - 1);
    let inv: Vec<Permutation> = splits.sigmas.iter().map(|s| s.inverse()).collect();
    let s_c_of_x = |i: usize, j: usize| c(i, inv[i - 1].value(j));

    let mut p1 = Vec::with_capacity(m * n + (m - 1) * n);
    for i in 1..m {
        for j in 1..=n {
            p1.push(x(i, j));
            p1.push(s_c_of_x(i, j));
        }
    }
    p1.extend((1..=n).map(|j| x(m, j)));
    let mut p2: Vec<usize> = (1..=n).map(|j| x(1, j)).collect();
    for i in 2..=m {
        for j in 1..=n {
            p2.push(x(i, j));
            p2.push(c(i - 1, j));
        }
    }
    let (host, index_of) = realize(&p1, &p2);

    let branch_sets = (1..=n)
        .map(|k| {
            let mut set = Vec::with_capacity(2 * m - 1);
            let mut j = k;
            for i in 1..=m {
                set.push(index_of[x(i, j)]);
                if i < m {
                    let jj = inv[i - 1].value(j);
                    set.push(index_of[c(i, jj)]);
                    j = jj;
                }
            }
            set
        })
        .collect();
    let mut required = BTreeSet::new();
    for p in &splits.sequence {
        for j in 1..n {
            let (a, b) = (p.value(j) - 1, p.value(j + 1) - 1);
            required.insert((a.min(b), a.max(b)));
        }
    }
    let certificate = MinorCertificate {
        host: host.clone(),
        branch_sets,
        required: required.into_iter().collect(),
    };
    ThreeTrack {
        host,
        certificate,
        splits,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// t-increasing: a union of `t` increasing subsequences, i.e. LDS ≤ t.
pub fn detect_t_monotone(sigma: &Permutation, t: usize, direction: Monotone) -> bool {
    let (lis, lds) = lis_lds(sigma);
    match direction {
        Monotone::Increasing => lds <= t,
        Monotone::Decreasing => lis <= t,
    }
}

/// Splits the indices into an increasing and a decreasing subsequence, if possible.
pub fn detect_2_monotone(sigma: &Permutation) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = sigma.len();
    let inverted = |i: usize, j: usize| (i < j) == (sigma.value(i) > sigma.value(j));
    let degree: Vec<usize> = (1..=n)
        .map(|i| (1..=n).filter(|&j| j != i && inverted(i, j)).count())
        .collect();
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(degree[i - 1]));
    let d: Vec<usize> = order.iter().map(|&i| degree[i - 1]).collect();
    // Hammer–Simeone: split iff the degree sequence is tight at its clique size
    let q = (1..=n).filter(|&r| d[r - 1] + 1 >= r).max().unwrap_or(0);
    let head: usize = d[..q].iter().sum();
    let tail: usize = d[q..].iter().sum();
    if head != q * q.saturating_sub(1) + tail {
        return None;
    }
    let mut dec: Vec<usize> = order[..q].to_vec();
    let mut inc: Vec<usize> = order[q..].to_vec();
    dec.sort_unstable();
    inc.sort_unstable();
    let ok = inc.windows(2).all(|w| sigma.value(w[0]) < sigma.value(w[1]))
        && dec.windows(2).all(|w| sigma.value(w[0]) > sigma.value(w[1]));
    ok.then_some((inc, dec))
}

/// The incidence graph with its vertices split into tracks that both
/// Hamiltonian paths visit in track order.
#[derive(Clone, Debug)]
pub struct TrackGraph {
    pub incidence: IncidenceGraph,
    /// Each track as increasing 1-based indices.
    pub tracks: Vec<Vec<usize>>,
    pub direction: Monotone,
}

impl TrackGraph {
    /// Uses the fewest tracks over both directions (ties go to increasing).
    pub fn new(sigma: &Permutation) -> Self {
        let inc = greedy_cover(sigma, Monotone::Increasing);
        let dec = greedy_cover(sigma, Monotone::Decreasing);
        let (tracks, direction) = if dec.len() < inc.len() {
            (dec, Monotone::Decreasing)
        } else {
            (inc, Monotone::Increasing)
        };
        TrackGraph {
            incidence: incidence_graph(sigma),
            tracks,
            direction,
        }
    }

    pub fn track_count(&self) -> usize {
        self.tracks.len()
    }

    pub fn is_valid(&self) -> bool {
        let sigma = self.incidence.permutation();
        let mut seen = vec![false; sigma.len()];
        for track in &self.tracks {
            for &i in track {
                if std::mem::replace(&mut seen[i - 1], true) {
                    return false;
                }
            }
            let monotone = track.windows(2).all(|w| {
                w[0] < w[1]
                    && match self.direction {
                        Monotone::Increasing => sigma.value(w[0]) < sigma.value(w[1]),
                        Monotone::Decreasing => sigma.value(w[0]) > sigma.value(w[1]),
                    }
            });
            if !monotone {
                return false;
            }
        }
        seen.into_iter().all(|b| b)
    }
}

/// Minimum cover by monotone subsequences: each entry joins the pile whose
/// last value is closest below it (above it, for decreasing).
fn greedy_cover(sigma: &Permutation, direction: Monotone) -> Vec<Vec<usize>> {
    let mut piles: Vec<Vec<usize>> = Vec::new();
    for i in 1..=sigma.len() {
        let v = sigma.value(i);
        let fits = |p: &Vec<usize>| {
            let last = sigma.value(*p.last().unwrap());
            match direction {
                Monotone::Increasing => last < v,
                Monotone::Decreasing => last > v,
            }
        };
        let best = piles
            .iter()
            .enumerate()
            .filter(|(_, p)| fits(p))
            .min_by_key(|(_, p)| sigma.value(*p.last().unwrap()).abs_diff(v))
            .map(|(idx, _)| idx);
        match best {
            Some(idx) => piles[idx].push(i),
            None => piles.push(vec![i]),
        }
    }
    piles
}
