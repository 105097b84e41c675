use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = num_bigint::BigInt;
/// Reduced fraction of two [`ExactInt`]s with positive denominator.
pub type ExactRat = num_rational::BigRational;

/// A nonempty sequence of positive integer parts `(a_1, ..., a_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartSeq(Vec<u64>);

impl PartSeq {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyParts);
        }
        if let Some(&bad) = parts.iter().find(|&&a| a == 0) {
            return Err(Error::NonPositivePart(bad));
        }
        Ok(PartSeq(parts))
    }

    /// The sequence `(1, d, d^2, ..., d^k)`.
    pub fn powers(d: u64, k: u32) -> Result<Self> {
        let mut parts = Vec::with_capacity(k as usize + 1);
        let mut p: u64 = 1;
        for i in 0..=k {
            if i > 0 {
                p = p
                    .checked_mul(d)
                    .ok_or_else(|| Error::Domain(format!("{d}^{k} overflows u64")))?;
            }
            parts.push(p);
        }
        PartSeq::new(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn sorted(&self) -> PartSeq {
        let mut parts = self.0.clone();
        parts.sort_unstable();
        PartSeq(parts)
    }

    /// Every part multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> PartSeq {
        PartSeq(self.0.iter().map(|&a| a * factor).collect())
    }

    pub(crate) fn require_len(&self, required: usize) -> Result<()> {
        if self.len() < required {
            return Err(Error::TooFewParts {
                required,
                got: self.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_strictly_increasing(&self) -> Result<()> {
        if !self.is_strictly_increasing() {
            return Err(Error::NotStrictlyIncreasing(self.0.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for PartSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The congruence modulus `d >= 2`: multiplicities are restricted to
/// residues 0 and 1 mod `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidModulus(d));
        }
        Ok(Modulus(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn admits(self, x: u64) -> bool {
        x % self.0 <= 1
    }

    /// `x - (d-2) * floor(x/d)`; equals `2q + e` for `x = dq + e`.
    pub fn weight(self, x: u64) -> u64 {
        x - (self.0 - 2) * (x / self.0)
    }
}

/// A nonnegative multiplicity vector `(x_1, ..., x_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionVec(pub Vec<u64>);

impl SolutionVec {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for SolutionVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", xs.join(","))
    }
}

/// Truncated power series: `coeffs[m]` is the coefficient of `z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPrefix {
    pub coeffs: Vec<ExactInt>,
}

impl SeriesPrefix {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn part_seq_validation() {
        assert_eq!(PartSeq::new(vec![]), Err(Error::EmptyParts));
        assert_eq!(PartSeq::new(vec![1, 0]), Err(Error::NonPositivePart(0)));
        assert!(PartSeq::new(vec![3, 1, 3]).is_ok());
    }

    #[test]
    fn powers_sequence() {
        assert_eq!(PartSeq::powers(3, 2).unwrap().parts(), &[1, 3, 9]);
        assert_eq!(PartSeq::powers(2, 0).unwrap().parts(), &[1]);
        assert!(PartSeq::powers(2, 64).is_err());
    }

    #[test]
    fn modulus_weight() {
        assert!(Modulus::new(1).is_err());
        let d = Modulus::new(3).unwrap();
        assert!(d.admits(0) && d.admits(1) && !d.admits(2) && d.admits(3) && d.admits(7));
        assert_eq!(d.weight(3), 2);
        assert_eq!(d.weight(6), 4);
        assert_eq!(d.weight(7), 5);
        let two = Modulus::new(2).unwrap();
        assert!((0..20).all(|x| two.weight(x) == x && two.admits(x)));
    }
}
