//! Reference solvers by backtracking over increasing index choices.
//!
//! These exist to be obviously correct; every other solver is checked against them.

use std::ops::ControlFlow;

use crate::count::MatchCount;
use crate::hardness::{HardnessError, PppmInstance};
use crate::perm::Permutation;

/// For each pattern position `j`, the earlier positions holding the nearest
/// smaller and nearest larger pattern value.
fn value_brackets(pattern: &Permutation) -> Vec<(Option<usize>, Option<usize>)> {
    let k = pattern.len();
    (0..k)
        .map(|j| {
            let v = pattern.values()[j];
            let mut lo: Option<usize> = None;
            let mut hi: Option<usize> = None;
            for l in 0..j {
                let w = pattern.values()[l];
                if w < v && lo.is_none_or(|x| pattern.values()[x] < w) {
                    lo = Some(l);
                }
                if w > v && hi.is_none_or(|x| pattern.values()[x] > w) {
                    hi = Some(l);
                }
            }
            (lo, hi)
        })
        .collect()
}

struct Backtrack<'a> {
    text: &'a Permutation,
    k: usize,
    brackets: Vec<(Option<usize>, Option<usize>)>,
    colors: Option<&'a [usize]>,
    chosen: Vec<usize>,
}

impl Backtrack<'_> {
    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let j = self.chosen.len();
        if j == self.k {
            return visit(&self.chosen);
        }
        let n = self.text.len();
        let start = self.chosen.last().map_or(1, |&a| a + 1);
        let last = n + j + 1 - self.k;
        let (lo, hi) = self.brackets[j];
        let lo = lo.map_or(0, |l| self.text.value(self.chosen[l]));
        let hi = hi.map_or(n + 1, |l| self.text.value(self.chosen[l]));
        for a in start..=last {
            let v = self.text.value(a);
            if v <= lo || v >= hi {
                continue;
            }
            if let Some(colors) = self.colors {
                if colors[a - 1] != j + 1 {
                    continue;
                }
            }
            self.chosen.push(a);
            let flow = self.run(visit);
            self.chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn search<F>(text: &Permutation, pattern: &Permutation, colors: Option<&[usize]>, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if pattern.len() > text.len() {
        return;
    }
    let mut bt = Backtrack {
        text,
        k: pattern.len(),
        brackets: value_brackets(pattern),
        colors,
        chosen: Vec::with_capacity(pattern.len()),
    };
    let _ = bt.run(&mut visit);
}

/// Calls `visit` with the (1-based, increasing) text indices of every occurrence.
pub fn for_each_occurrence<F>(text: &Permutation, pattern: &Permutation, mut visit: F)
where
    F: FnMut(&[usize]),
{
    search(text, pattern, None, |occ| {
        visit(occ);
        ControlFlow::Continue(())
    });
}

pub fn brute_contains(text: &Permutation, pattern: &Permutation) -> bool {
    let mut found = false;
    search(text, pattern, None, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

pub fn brute_count(text: &Permutation, pattern: &Permutation) -> MatchCount {
    let mut count: u64 = 0;
    search(text, pattern, None, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    MatchCount::from(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PppmMode {
    Decision,
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PppmAnswer {
    Contains(bool),
    Count(MatchCount),
}

/// Color-respecting embeddings: pattern index `i` may only use text entries of color `i`.
pub fn brute_pppm(inst: &PppmInstance, mode: PppmMode) -> Result<PppmAnswer, HardnessError> {
    inst.check_colors()?;
    let colors = Some(inst.colors());
    Ok(match mode {
        PppmMode::Decision => {
            let mut found = false;
            search(inst.text(), inst.pattern(), colors, |_| {
                found = true;
                ControlFlow::Break(())
            });
            PppmAnswer::Contains(found)
        }
        PppmMode::Count => {
            let mut count: u64 = 0;
            search(inst.text(), inst.pattern(), colors, |_| {
                count += 1;
                ControlFlow::Continue(())
            });
            PppmAnswer::Count(MatchCount::from(count))
        }
    })
}

pub fn brute_pppm_contains(inst: &PppmInstance) -> Result<bool, HardnessError> {
    match brute_pppm(inst, PppmMode::Decision)? {
        PppmAnswer::Contains(b) => Ok(b),
        PppmAnswer::Count(_) => unreachable!(),
    }
}

pub fn brute_pppm_count(inst: &PppmInstance) -> Result<MatchCount, HardnessError> {
    match brute_pppm(inst, PppmMode::Count)? {
        PppmAnswer::Count(c) => Ok(c),
        PppmAnswer::Contains(_) => unreachable!(),
    }
}

/// Occurrences whose images carry each color `1..=k` exactly once, in any order.
pub fn brute_colorful_count(inst: &PppmInstance) -> Result<MatchCount, HardnessError> {
    inst.check_colors()?;
    let k = inst.pattern().len();
    let mut count: u64 = 0;
    let mut seen = vec![false; k + 1];
    search(inst.text(), inst.pattern(), None, |occ| {
        seen.iter_mut().for_each(|s| *s = false);
        if occ.iter().all(|&a| !std::mem::replace(&mut seen[inst.colors()[a - 1]], true)) {
            count += 1;
        }
        ControlFlow::Continue(())
    });
    Ok(MatchCount::from(count))
}
