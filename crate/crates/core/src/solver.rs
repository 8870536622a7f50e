use std::fmt;
use std::str::FromStr;

use crate::count::MatchCount;
use crate::evenodd::{evenodd_contains, evenodd_count};
use crate::oracle::{brute_contains, brute_count};
use crate::perm::Permutation;
use crate::tdsolver::{solve_strips, treedp_contains, treedp_count, StripCount};

/// Anything that decides (and possibly counts) pattern occurrences.
pub trait Solver: Sync {
    fn name(&self) -> String;
    fn contains(&self, text: &Permutation, pattern: &Permutation) -> bool;
    /// `None` when the solver only decides.
    fn count(&self, text: &Permutation, pattern: &Permutation) -> Option<MatchCount>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Auto,
    Brute,
    TreeDp,
    Strips(StripCount),
    EvenOdd,
}

impl Algorithm {
    /// Solvers with a fixed method (no `Auto`), strips at its default count.
    pub const CONCRETE: [Algorithm; 4] = [
        Algorithm::Brute,
        Algorithm::TreeDp,
        Algorithm::Strips(StripCount::Auto),
        Algorithm::EvenOdd,
    ];

    /// Replaces `Auto` by brute force for tiny texts, even-odd for long
    /// patterns, and tree DP otherwise.
    pub fn resolve(self, n: usize, k: usize) -> Algorithm {
        match self {
            Algorithm::Auto if n <= 10 => Algorithm::Brute,
            Algorithm::Auto if 2 * k >= n => Algorithm::EvenOdd,
            Algorithm::Auto => Algorithm::TreeDp,
            other => other,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Auto => f.write_str("auto"),
            Algorithm::Brute => f.write_str("brute"),
            Algorithm::TreeDp => f.write_str("treedp"),
            Algorithm::Strips(StripCount::Auto) => f.write_str("strips"),
            Algorithm::Strips(StripCount::Fixed(s)) => write!(f, "strips:{s}"),
            Algorithm::EvenOdd => f.write_str("evenodd"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "brute" => Ok(Algorithm::Brute),
            "treedp" => Ok(Algorithm::TreeDp),
            "strips" => Ok(Algorithm::Strips(StripCount::Auto)),
            "evenodd" => Ok(Algorithm::EvenOdd),
            _ => match s.strip_prefix("strips:").map(str::parse::<usize>) {
                Some(Ok(n)) if n > 0 => Ok(Algorithm::Strips(StripCount::Fixed(n))),
                _ => Err(format!(
                    "unknown algorithm {s:?} (expected auto, brute, treedp, strips, strips:<s>, evenodd)"
                )),
            },
        }
    }
}

impl Solver for Algorithm {
    fn name(&self) -> String {
        self.to_string()
    }

    fn contains(&self, text: &Permutation, pattern: &Permutation) -> bool {
        match self.resolve(text.len(), pattern.len()) {
            Algorithm::Brute => brute_contains(text, pattern),
            Algorithm::TreeDp => treedp_contains(text, pattern),
            Algorithm::Strips(s) => solve_strips(text, pattern, s),
            Algorithm::EvenOdd => evenodd_contains(text, pattern),
            Algorithm::Auto => unreachable!(),
        }
    }

    fn count(&self, text: &Permutation, pattern: &Permutation) -> Option<MatchCount> {
        match self.resolve(text.len(), pattern.len()) {
            Algorithm::Brute => Some(brute_count(text, pattern)),
            Algorithm::TreeDp => Some(treedp_count(text, pattern)),
            Algorithm::Strips(_) => None,
            Algorithm::EvenOdd => Some(evenodd_count(text, pattern)),
            Algorithm::Auto => unreachable!(),
        }
    }
}
