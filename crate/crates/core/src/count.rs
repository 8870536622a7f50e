use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// An exact number of occurrences (arbitrary precision).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchCount(BigUint);

impl MatchCount {
    pub fn zero() -> Self {
        MatchCount(BigUint::zero())
    }

    pub fn one() -> Self {
        MatchCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn binomial(n: usize, k: usize) -> Self {
        if k > n {
            return Self::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigUint::one();
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        MatchCount(acc)
    }

    pub fn to_u64(&self) -> Option<u64> {
        num_traits::ToPrimitive::to_u64(&self.0)
    }
}

impl From<u64> for MatchCount {
    fn from(v: u64) -> Self {
        MatchCount(BigUint::from(v))
    }
}

impl From<usize> for MatchCount {
    fn from(v: usize) -> Self {
        MatchCount(BigUint::from(v))
    }
}

impl From<BigUint> for MatchCount {
    fn from(v: BigUint) -> Self {
        MatchCount(v)
    }
}

impl fmt::Display for MatchCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for MatchCount {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(MatchCount)
    }
}

impl Add for MatchCount {
    type Output = MatchCount;
    fn add(self, rhs: MatchCount) -> MatchCount {
        MatchCount(self.0 + rhs.0)
    }
}

impl AddAssign<&MatchCount> for MatchCount {
    fn add_assign(&mut self, rhs: &MatchCount) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for MatchCount {
    fn add_assign(&mut self, rhs: MatchCount) {
        self.0 += rhs.0;
    }
}

impl Mul for MatchCount {
    type Output = MatchCount;
    fn mul(self, rhs: MatchCount) -> MatchCount {
        MatchCount(self.0 * rhs.0)
    }
}

impl Sum for MatchCount {
    fn sum<I: Iterator<Item = MatchCount>>(iter: I) -> Self {
        iter.fold(MatchCount::zero(), |a, b| a + b)
    }
}

impl PartialEq<u64> for MatchCount {
    fn eq(&self, other: &u64) -> bool {
        self.to_u64() == Some(*other)
    }
}
