//! Box sums shared by every displayed closed form.
//!
//! Each formula sums `prod_{l=1}^{deg} ((m - s) / M + l)` over a box of
//! index vectors, where the shift `s` is a nonnegative combination of fixed
//! generators and `M` is the modulus. Only the multiset of shifts matters,
//! so the box is stored as a histogram `s -> multiplicity`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::types::{ExactInt, ExactRat};

/// Largest histogram we are willing to materialize.
const MAX_SHIFT_SPAN: u64 = 1 << 26;

pub(crate) fn lcm_all(values: impl IntoIterator<Item = u64>) -> Result<u64> {
    values.into_iter().try_fold(1u64, |acc, v| {
        let g = acc.gcd(&v);
        (acc / g)
            .checked_mul(v)
            .ok_or_else(|| Error::Domain("least common multiple overflows u64".into()))
    })
}

pub(crate) fn factorial(k: usize) -> ExactInt {
    (1..=k).fold(ExactInt::one(), |acc, i| acc * i)
}

/// Histogram of shifts over a box of index vectors.
#[derive(Debug, Clone)]
pub(crate) struct ShiftBox {
    modulus: u64,
    degree: usize,
    counts: Vec<u64>,
}

impl ShiftBox {
    /// `generators` lists `(g, c)`: an index ranging over `0..c` with weight `g`.
    pub(crate) fn new(modulus: u64, degree: usize, generators: &[(u64, u64)]) -> Result<Self> {
        let span = generators.iter().try_fold(0u64, |acc, &(g, c)| {
            g.checked_mul(c.saturating_sub(1))
                .and_then(|t| acc.checked_add(t))
        });
        match span {
            Some(s) if s < MAX_SHIFT_SPAN => {}
            _ => {
                return Err(Error::Domain(
                    "closed-form box too large to evaluate".into(),
                ))
            }
        }
        let mut counts = vec![1u64];
        for &(g, c) in generators {
            let g = g as usize;
            let new_len = counts.len() + g * (c as usize - 1);
            let mut next = vec![0u64; new_len];
            for (s, &mult) in counts.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                for t in 0..c as usize {
                    next[s + g * t] += mult;
                }
            }
            counts = next;
        }
        Ok(ShiftBox {
            modulus,
            degree,
            counts,
        })
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `prod_{l=1}^{deg} (m - s + l M)`, the product with `M^deg` cleared.
    fn term(&self, m: &BigInt, s: usize) -> BigInt {
        let base = m - BigInt::from(s);
        (1..=self.degree).fold(BigInt::one(), |acc, l| {
            acc * (&base + BigInt::from(self.modulus) * l)
        })
    }

    /// Sum of cleared products over shifts with `s = m (mod M)`.
    pub(crate) fn matched_sum(&self, m: i64) -> BigInt {
        let residue = m.rem_euclid(self.modulus as i64) as usize;
        let big_m = BigInt::from(m);
        let mut total = BigInt::zero();
        for s in (residue..self.counts.len()).step_by(self.modulus as usize) {
            let mult = self.counts[s];
            if mult != 0 {
                total += self.term(&big_m, s) * mult;
            }
        }
        total
    }

    /// Products evaluated at `m` but summed over shifts `s = residue (mod M)`,
    /// divided by `M^deg deg!`.
    pub(crate) fn constituent(&self, residue: u64, m: i64) -> ExactRat {
        let big_m = BigInt::from(m);
        let mut total = BigInt::zero();
        for s in (residue as usize..self.counts.len()).step_by(self.modulus as usize) {
            let mult = self.counts[s];
            if mult != 0 {
                total += self.term(&big_m, s) * mult;
            }
        }
        ExactRat::new(total, self.count_denominator())
    }

    /// Sum of cleared products over every shift in the box.
    pub(crate) fn full_sum(&self, m: i64) -> BigInt {
        let big_m = BigInt::from(m);
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &mult)| mult != 0)
            .map(|(s, &mult)| self.term(&big_m, s) * mult)
            .sum()
    }

    /// `M^deg * deg!`
    pub(crate) fn count_denominator(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.modulus), self.degree) * factorial(self.degree)
    }

    /// The congruence-matched box sum divided by `M^deg deg!`; the division
    /// is asserted exact.
    pub(crate) fn count(&self, m: i64, context: &'static str) -> Result<ExactInt> {
        exact_div(self.matched_sum(m), self.count_denominator(), context)
    }

    /// Unreduced `(numerator, denominator)` of the full box sum over
    /// `M^{deg+1} deg!`.
    pub(crate) fn average_parts(&self, m: i64) -> (BigInt, BigInt) {
        (
            self.full_sum(m),
            self.count_denominator() * BigInt::from(self.modulus),
        )
    }

    pub(crate) fn average(&self, m: i64) -> ExactRat {
        let (num, den) = self.average_parts(m);
        ExactRat::new(num, den)
    }
}

pub(crate) fn exact_div(num: BigInt, den: BigInt, context: &'static str) -> Result<ExactInt> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Inexact {
            context,
            numerator: num.to_string(),
            denominator: den.to_string(),
        });
    }
    Ok(q)
}
