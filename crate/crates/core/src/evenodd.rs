//! Polynomial-space search: guess where the even-index pattern points go, then
//! place the odd-index points greedily (or count their placements) in value order.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::count::MatchCount;
use crate::perm::{Embedding, Permutation, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenOddPartition {
    /// Even-index points in index order.
    pub evens: Vec<Point>,
    /// Odd-index points in increasing order of value.
    pub odds: Vec<Point>,
}

pub fn even_odd_partition(pattern: &Permutation) -> EvenOddPartition {
    let evens = pattern.points().filter(|p| p.x % 2 == 0).collect();
    let mut odds: Vec<Point> = pattern.points().filter(|p| p.x % 2 == 1).collect();
    odds.sort_by_key(|p| p.y);
    EvenOddPartition { evens, odds }
}

/// Open box `(lo_x, hi_x) × (lo_y, hi_y)`; `hi_y == None` means unbounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstraintBox {
    pub lo_x: usize,
    pub hi_x: usize,
    pub lo_y: usize,
    pub hi_y: Option<usize>,
}

impl ConstraintBox {
    pub fn contains(&self, q: Point) -> bool {
        self.lo_x < q.x && q.x < self.hi_x && self.lo_y < q.y && self.hi_y.is_none_or(|h| q.y < h)
    }

    /// The text point of smallest value inside the box.
    pub fn lowest(&self, text: &Permutation) -> Option<Point> {
        let top = self.hi_y.unwrap_or(text.len() + 1).min(text.len() + 1);
        (self.lo_y + 1..top)
            .map(|y| Point::new(text.position(y), y))
            .find(|q| self.lo_x < q.x && q.x < self.hi_x)
    }
}

/// Which candidate filters the g0 enumerator applies before the order check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pruning {
    /// Leave at least one free text index before, between and after the even
    /// images wherever an odd pattern index has to fit.
    pub index_gaps: bool,
    /// Leave enough free text values between consecutive even images (in value
    /// order) for the odd pattern values that lie between them.
    pub value_gaps: bool,
}

impl Pruning {
    pub const NONE: Pruning = Pruning {
        index_gaps: false,
        value_gaps: false,
    };
    pub const ALL: Pruning = Pruning {
        index_gaps: true,
        value_gaps: true,
    };
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::ALL
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct G0Stats {
    /// Index subsequences of the right length, `C(n, ⌊k/2⌋)`.
    pub raw: MatchCount,
    /// Subsequences actually generated (after index-gap pruning, if enabled).
    pub candidates: u64,
    pub order_rejected: u64,
    pub value_pruned: u64,
    pub yielded: u64,
}

/// Streams the text-index images of the even pattern points, in lexicographic order.
pub struct G0Enumerator<'a> {
    text: &'a Permutation,
    pattern: &'a Permutation,
    pruning: Pruning,
    h: usize,
    first_min: usize,
    step: usize,
    last_max: usize,
    /// Even slots (0-based) sorted by pattern value.
    by_value: Vec<usize>,
    current: Option<Vec<usize>>,
    started: bool,
    stats: G0Stats,
}

impl<'a> G0Enumerator<'a> {
    pub fn new(text: &'a Permutation, pattern: &'a Permutation, pruning: Pruning) -> Self {
        let n = text.len();
        let k = pattern.len();
        let h = k / 2;
        let (first_min, step, last_max) = if pruning.index_gaps {
            (2, 2, if k % 2 == 1 { n.saturating_sub(1) } else { n })
        } else {
            (1, 1, n)
        };
        let mut by_value: Vec<usize> = (0..h).collect();
        by_value.sort_by_key(|&t| pattern.value(2 * t + 2));
        G0Enumerator {
            text,
            pattern,
            pruning,
            h,
            first_min,
            step,
            last_max,
            by_value,
            current: None,
            started: false,
            stats: G0Stats {
                raw: MatchCount::binomial(n, h),
                ..Default::default()
            },
        }
    }

    pub fn stats(&self) -> &G0Stats {
        &self.stats
    }

    pub fn into_stats(self) -> G0Stats {
        self.stats
    }

    fn max_at(&self, t: usize) -> usize {
        self.last_max.saturating_sub(self.step * (self.h - 1 - t))
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            let first: Vec<usize> = (0..self.h).map(|t| self.first_min + self.step * t).collect();
            let ok = self.h == 0 || first[self.h - 1] <= self.last_max;
            self.current = ok.then_some(first);
            return ok;
        }
        let h = self.h;
        let step = self.step;
        let maxes: Vec<usize> = (0..h).map(|t| self.max_at(t)).collect();
        let Some(cur) = self.current.as_mut() else {
            return false;
        };
        let Some(t) = (0..h).rev().find(|&t| cur[t] < maxes[t]) else {
            self.current = None;
            return false;
        };
        cur[t] += 1;
        for u in t + 1..h {
            cur[u] = cur[u - 1] + step;
        }
        true
    }

    fn order_ok(&self, cur: &[usize]) -> bool {
        self.by_value
            .windows(2)
            .all(|w| self.text.value(cur[w[0]]) < self.text.value(cur[w[1]]))
    }

    fn value_room_ok(&self, cur: &[usize]) -> bool {
        let n = self.text.len();
        let k = self.pattern.len();
        let Some((&lowest, &highest)) = self.by_value.first().zip(self.by_value.last()) else {
            return true;
        };
        let pv = |t: usize| self.pattern.value(2 * t + 2);
        let tv = |t: usize| self.text.value(cur[t]);
        // pattern values strictly between consecutive evens are all odd
        tv(lowest) >= pv(lowest)
            && n - tv(highest) >= k - pv(highest)
            && self.by_value.windows(2).all(|w| tv(w[1]) - tv(w[0]) >= pv(w[1]) - pv(w[0]))
    }
}

impl Iterator for G0Enumerator<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while self.advance() {
            let cur = self.current.clone().unwrap();
            self.stats.candidates += 1;
            if !self.order_ok(&cur) {
                self.stats.order_rejected += 1;
                continue;
            }
            if self.pruning.value_gaps && !self.value_room_ok(&cur) {
                self.stats.value_pruned += 1;
                continue;
            }
            self.stats.yielded += 1;
            return Some(cur);
        }
        None
    }
}

/// Partial embeddings of the even points, one per accepted candidate.
pub fn enumerate_g0<'a>(
    text: &'a Permutation,
    pattern: &'a Permutation,
    pruning: Pruning,
) -> impl Iterator<Item = Embedding> + 'a {
    G0Enumerator::new(text, pattern, pruning).map(move |evens| {
        Embedding::from_index_pairs(
            pattern,
            text,
            evens.iter().enumerate().map(|(t, &a)| (2 * t + 2, a)),
        )
        .expect("increasing indices give an injective map")
    })
}

struct Extender<'a> {
    text: &'a Permutation,
    pattern: &'a Permutation,
    odds: Vec<usize>,
}

impl<'a> Extender<'a> {
    fn new(text: &'a Permutation, pattern: &'a Permutation) -> Self {
        let odds = even_odd_partition(pattern).odds.iter().map(|p| p.x).collect();
        Extender { text, pattern, odds }
    }

    fn evens_consistent(&self, img: &[usize]) -> bool {
        let k = self.pattern.len();
        let ok_index = (2..=k).step_by(2).collect::<Vec<_>>().windows(2).all(|w| img[w[0]] < img[w[1]]);
        let mut by_value: Vec<usize> = (2..=k).step_by(2).collect();
        by_value.sort_by_key(|&i| self.pattern.value(i));
        ok_index
            && by_value
                .windows(2)
                .all(|w| self.text.value(img[w[0]]) < self.text.value(img[w[1]]))
    }

    fn x_range(&self, img: &[usize], i: usize) -> (usize, usize) {
        let lo = if i == 1 { 0 } else { img[i - 1] };
        let hi = if i == self.pattern.len() { self.text.len() + 1 } else { img[i + 1] };
        (lo, hi)
    }

    /// Value of the image of `N^D(i)`, 0 when it is virtual; the image must be placed.
    fn lo_y(&self, img: &[usize], i: usize) -> usize {
        match self.pattern.value(i) {
            1 => 0,
            v => self.text.value(img[self.pattern.position(v - 1)]),
        }
    }

    /// Value of the image of `N^U(i)` if that point is even.
    fn hi_y(&self, img: &[usize], i: usize) -> Option<usize> {
        let v = self.pattern.value(i);
        if v == self.pattern.len() {
            return None;
        }
        let u = self.pattern.position(v + 1);
        (u % 2 == 0).then(|| self.text.value(img[u]))
    }

    /// Box for odd pattern index `i`; `img` must hold every neighbor except an odd `N^U`.
    fn constraint_box(&self, img: &[usize], i: usize) -> ConstraintBox {
        let (lo_x, hi_x) = self.x_range(img, i);
        ConstraintBox {
            lo_x,
            hi_x,
            lo_y: self.lo_y(img, i),
            hi_y: self.hi_y(img, i),
        }
    }

    /// `evens[t]` is the image of pattern index `2t+2`. Returns text indices
    /// by pattern index (slot 0 unused).
    fn greedy(&self, evens: &[usize]) -> Option<Vec<usize>> {
        let k = self.pattern.len();
        let mut img = vec![0; k + 1];
        for (t, &a) in evens.iter().enumerate() {
            img[2 * t + 2] = a;
        }
        if !self.evens_consistent(&img) {
            return None;
        }
        for &i in &self.odds {
            let q = self.constraint_box(&img, i).lowest(self.text)?;
            img[i] = q.x;
        }
        Some(img)
    }

    fn count(&self, evens: &[usize]) -> BigUint {
        let k = self.pattern.len();
        let n = self.text.len();
        let mut img = vec![0; k + 1];
        for (t, &a) in evens.iter().enumerate() {
            img[2 * t + 2] = a;
        }
        if !self.evens_consistent(&img) {
            return BigUint::zero();
        }
        let mut total = BigUint::one();
        let mut start = 0;
        while start < self.odds.len() {
            let mut end = start + 1;
            while end < self.odds.len()
                && self.pattern.value(self.odds[end]) == self.pattern.value(self.odds[end - 1]) + 1
            {
                end += 1;
            }
            let chain = &self.odds[start..end];
            // inside a chain only the ends see even or virtual value neighbors
            let bottom = self.lo_y(&img, chain[0]);
            let top = self.hi_y(&img, chain[chain.len() - 1]).unwrap_or(n + 1);
            let xs: Vec<(usize, usize)> = chain.iter().map(|&i| self.x_range(&img, i)).collect();
            // ways[t]: placements of the first t chain points at values seen so far
            let mut ways = vec![BigUint::zero(); chain.len() + 1];
            ways[0] = BigUint::one();
            for y in bottom + 1..top {
                let x = self.text.position(y);
                // x-ranges of odd points are disjoint, so at most one slot matches
                if let Some(t) = xs.iter().position(|&(lo, hi)| lo < x && x < hi) {
                    let add = ways[t].clone();
                    ways[t + 1] += add;
                }
            }
            total *= &ways[chain.len()];
            if total.is_zero() {
                return total;
            }
            start = end;
        }
        total
    }
}

/// Extends a partial embedding of the even points by the lowest-point rule.
pub fn extend_greedy(text: &Permutation, pattern: &Permutation, g0: &Embedding) -> Option<Embedding> {
    let evens: Vec<usize> = (2..=pattern.len())
        .step_by(2)
        .map(|i| g0.get(pattern.point(i)).map(|q| q.x))
        .collect::<Option<_>>()?;
    if g0.len() != evens.len() {
        return None;
    }
    let img = Extender::new(text, pattern).greedy(&evens)?;
    Embedding::from_occurrence(pattern, text, &img[1..]).ok()
}

pub fn evenodd_contains(text: &Permutation, pattern: &Permutation) -> bool {
    evenodd_contains_with(text, pattern, Pruning::ALL).0
}

pub fn evenodd_contains_with(text: &Permutation, pattern: &Permutation, pruning: Pruning) -> (bool, G0Stats) {
    let ext = Extender::new(text, pattern);
    let mut g0s = G0Enumerator::new(text, pattern, pruning);
    let found = pattern.len() <= text.len() && g0s.by_ref().any(|evens| ext.greedy(&evens).is_some());
    (found, g0s.into_stats())
}

/// The first occurrence found, as text indices in pattern order.
pub fn evenodd_find(text: &Permutation, pattern: &Permutation) -> Option<Vec<usize>> {
    if pattern.len() > text.len() {
        return None;
    }
    let ext = Extender::new(text, pattern);
    G0Enumerator::new(text, pattern, Pruning::ALL)
        .find_map(|evens| ext.greedy(&evens))
        .map(|img| img[1..].to_vec())
}

pub fn evenodd_count(text: &Permutation, pattern: &Permutation) -> MatchCount {
    evenodd_count_with(text, pattern, Pruning::ALL).0
}

pub fn evenodd_count_with(text: &Permutation, pattern: &Permutation, pruning: Pruning) -> (MatchCount, G0Stats) {
    let ext = Extender::new(text, pattern);
    let mut g0s = G0Enumerator::new(text, pattern, pruning);
    let mut total = BigUint::zero();
    if pattern.len() <= text.len() {
        for evens in g0s.by_ref() {
            total += ext.count(&evens);
        }
    }
    (MatchCount::from(total), g0s.into_stats())
}
