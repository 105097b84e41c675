//! Closed forms for the weighted counts `p_{a,d}(n; j)`.
//!
//! These reduce the weighted count to denumerants of the difference
//! sequence `(a_2 - a_1, ..., a_r - a_1)` after eliminating `x_1`. The
//! elimination drops the requirement that the eliminated multiplicity stays
//! nonnegative, so the values are upper bounds for the true counts and agree
//! with them only on part of the parameter space. Results are flagged
//! [`Exactness::UpperBound`].

use num_traits::Zero;

use super::shift_box::{lcm_all, ShiftBox};
use super::{DenumerantFormula, Exactness, FormulaResult};
use crate::error::{Error, Result};
use crate::types::{ExactInt, Modulus, PartSeq};

pub const COUNTED_NOTE: &str =
    "omits the constraint x_2+...+x_r <= j; may exceed the true count p_a(n;j)";
pub const COUNTED_CONGRUENT_NOTE: &str =
    "omits q_1 >= 0 (equivalently sum_{i>=2} q_i <= (j-|e|)/2) and admits |e| > j terms";

fn differences(a: &PartSeq) -> Result<PartSeq> {
    a.require_len(2)?;
    a.require_strictly_increasing()?;
    let a1 = a.parts()[0];
    PartSeq::new(a.parts()[1..].iter().map(|&ai| ai - a1).collect())
}

/// `p_a(n; j)` via `p_{(a_2-a_1, ..., a_r-a_1)}(n - a_1 j)`.
#[derive(Debug, Clone)]
pub struct CountedFormula {
    first: u64,
    inner: DenumerantFormula,
}

impl CountedFormula {
    pub fn new(a: &PartSeq) -> Result<Self> {
        let diffs = differences(a)?;
        Ok(CountedFormula {
            first: a.parts()[0],
            inner: DenumerantFormula::new(&diffs)?,
        })
    }

    pub fn evaluate(&self, n: i64, j: u64) -> Result<FormulaResult> {
        let m = i128::from(n) - i128::from(self.first) * i128::from(j);
        let value = if m < 0 {
            ExactInt::zero()
        } else {
            self.inner.count(to_i64(m)?)?
        };
        Ok(FormulaResult::upper_bound(value, COUNTED_NOTE))
    }
}

pub fn counted_closed(a: &PartSeq, n: i64, j: u64) -> Result<FormulaResult> {
    CountedFormula::new(a)?.evaluate(n, j)
}

fn to_i64(m: i128) -> Result<i64> {
    i64::try_from(m).map_err(|_| Error::Domain(format!("target {m} out of range")))
}

/// Iterates `e in {0,1}^len` as binary integers, low bit first, keeping
/// those with `|e| = j (mod 2)`. Yields `(mask, |e|)`.
fn parity_masks(len: usize, j: u64) -> impl Iterator<Item = (u64, u64)> {
    (0u64..1 << len)
        .map(|mask| (mask, u64::from(mask.count_ones())))
        .filter(move |&(_, w)| (w + j).is_multiple_of(2))
}

/// Target `n - a_1 d (j - |e|)/2 - sum a_i e_i` of one `e` term.
fn reduced_target(n: i64, first: u64, d: u64, j: u64, weight: u64, shift: u64) -> i128 {
    let half = (i128::from(j) - i128::from(weight)) / 2;
    i128::from(n) - i128::from(first) * i128::from(d) * half - i128::from(shift)
}

/// `p_{a,d}(n; j)` as a sum over `e` with `|e| = j (mod 2)` of denumerants
/// of `(d(a_2-a_1), ..., d(a_r-a_1))`.
#[derive(Debug, Clone)]
pub struct CountedCongruentFormula {
    parts: Vec<u64>,
    d: u64,
    inner: DenumerantFormula,
}

impl CountedCongruentFormula {
    pub fn new(a: &PartSeq, d: Modulus) -> Result<Self> {
        let diffs = differences(a)?;
        if a.len() >= 64 {
            return Err(Error::Domain("too many parts for e expansion".into()));
        }
        Ok(CountedCongruentFormula {
            parts: a.parts().to_vec(),
            d: d.get(),
            inner: DenumerantFormula::new(&diffs.scaled(d.get()))?,
        })
    }

    pub fn evaluate(&self, n: i64, j: u64) -> Result<FormulaResult> {
        let mut total = ExactInt::zero();
        for (mask, weight) in parity_masks(self.parts.len(), j) {
            let shift: u64 = self
                .parts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .sum();
            let m = reduced_target(n, self.parts[0], self.d, j, weight, shift);
            if m >= 0 {
                total += self.inner.count(to_i64(m)?)?;
            }
        }
        Ok(FormulaResult::upper_bound(total, COUNTED_CONGRUENT_NOTE))
    }
}

pub fn counted_congruent_closed(a: &PartSeq, d: Modulus, n: i64, j: u64) -> Result<FormulaResult> {
    CountedCongruentFormula::new(a, d)?.evaluate(n, j)
}

/// The weighted closed form for `(1, d, ..., d^k)`, written with
/// `D' = lcm(d-1, d^2-1, ..., d^k-1)`, indices `0 <= j_i < D'/(d^i-1)` of
/// weight `d(d^i-1)`, modulus `d D'` and `(k-1)!` normalization. For `k = 1`
/// it delegates to [`CountedCongruentFormula`] on `(1, d)`.
#[derive(Debug, Clone)]
pub struct DaryCountedFormula {
    d: u64,
    powers: Vec<u64>,
    kind: DaryCountedKind,
}

#[derive(Debug, Clone)]
enum DaryCountedKind {
    Pair(CountedCongruentFormula),
    Boxed(ShiftBox),
}

impl DaryCountedFormula {
    pub fn new(d: Modulus, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain(
                "weighted d-ary closed form needs k >= 1".into(),
            ));
        }
        let powers = PartSeq::powers(d.get(), k)?.parts().to_vec();
        let kind = if k == 1 {
            DaryCountedKind::Pair(CountedCongruentFormula::new(
                &PartSeq::new(powers.clone())?,
                d,
            )?)
        } else {
            let dd = d.get();
            let lcm = lcm_all(powers[1..].iter().map(|&p| p - 1))?;
            let modulus = lcm
                .checked_mul(dd)
                .ok_or_else(|| Error::Domain("modulus overflows u64".into()))?;
            let generators: Vec<(u64, u64)> = powers[1..]
                .iter()
                .map(|&p| (dd * (p - 1), lcm / (p - 1)))
                .collect();
            DaryCountedKind::Boxed(ShiftBox::new(modulus, k as usize - 1, &generators)?)
        };
        Ok(DaryCountedFormula {
            d: d.get(),
            powers,
            kind,
        })
    }

    pub fn evaluate(&self, n: i64, j: u64) -> Result<FormulaResult> {
        let boxed = match &self.kind {
            DaryCountedKind::Pair(inner) => return inner.evaluate(n, j),
            DaryCountedKind::Boxed(b) => b,
        };
        let mut total = ExactInt::zero();
        for (mask, weight) in parity_masks(self.powers.len(), j) {
            let shift: u64 = self
                .powers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .sum();
            let m = reduced_target(n, 1, self.d, j, weight, shift);
            if m >= 0 {
                total += boxed.count(to_i64(m)?, "weighted d-ary box sum")?;
            }
        }
        Ok(FormulaResult::upper_bound(total, COUNTED_CONGRUENT_NOTE))
    }
}

pub fn dary_counted_closed(d: Modulus, k: u32, n: i64, j: u64) -> Result<FormulaResult> {
    DaryCountedFormula::new(d, k)?.evaluate(n, j)
}

impl FormulaResult {
    pub fn is_upper_bound(&self) -> bool {
        self.exactness == Exactness::UpperBound
    }
}
