//! Exact evaluation of the displayed closed formulas.
//!
//! All sums are accumulated as integers with the denominators cleared and
//! divided once at the end; the division is asserted exact wherever the
//! formula claims to produce a count. Nothing here calls into
//! [`crate::oracle`].

mod counted;
mod shift_box;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::types::{ExactInt, ExactRat, Modulus, PartSeq};
use shift_box::{lcm_all, ShiftBox};

pub use counted::{
    counted_closed, counted_congruent_closed, dary_counted_closed, CountedCongruentFormula,
    CountedFormula, DaryCountedFormula, COUNTED_CONGRUENT_NOTE, COUNTED_NOTE,
};

/// Whether a formula value is known to equal the count it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exactness {
    /// Proven (and exhaustively checked) equal to the count.
    CountCertified,
    /// Never below the count; strictly above it on some inputs.
    UpperBound,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::CountCertified => "count-certified",
            Exactness::UpperBound => "upper-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaResult {
    pub value: ExactRat,
    pub exactness: Exactness,
    pub note: Option<&'static str>,
}

impl FormulaResult {
    pub fn certified(value: ExactInt) -> Self {
        FormulaResult {
            value: ExactRat::from_integer(value),
            exactness: Exactness::CountCertified,
            note: None,
        }
    }

    pub(crate) fn upper_bound(value: ExactInt, note: &'static str) -> Self {
        FormulaResult {
            value: ExactRat::from_integer(value),
            exactness: Exactness::UpperBound,
            note: Some(note),
        }
    }

    /// The value as an integer, when it is one.
    pub fn integer(&self) -> Option<ExactInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }
}

/// The least common multiples the closed forms are built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcmCache {
    /// `lcm(a_1, ..., a_r)`
    pub plain: u64,
    /// `lcm(d a_1, ..., d a_r)`
    pub scaled: u64,
    /// `lcm(d (a_2 - a_1), ..., d (a_r - a_1))`, for strictly increasing parts
    /// with `r >= 2`.
    pub differences: Option<u64>,
}

impl LcmCache {
    pub fn new(a: &PartSeq, d: Modulus) -> Result<Self> {
        let plain = lcm_all(a.parts().iter().copied())?;
        let scaled = plain
            .checked_mul(d.get())
            .ok_or_else(|| Error::Domain("least common multiple overflows u64".into()))?;
        let differences = if a.len() >= 2 && a.is_strictly_increasing() {
            let a1 = a.parts()[0];
            Some(lcm_all(
                a.parts()[1..].iter().map(|&ai| d.get() * (ai - a1)),
            )?)
        } else {
            None
        };
        Ok(LcmCache {
            plain,
            scaled,
            differences,
        })
    }
}

/// Shift generators `(a_i, D / a_i)` for the plain denumerant box.
fn plain_generators(parts: &[u64], modulus: u64) -> Vec<(u64, u64)> {
    parts.iter().map(|&a| (a, modulus / a)).collect()
}

/// The denumerant of `a` as a sum over the box `0 <= j_i < D / a_i`.
///
/// Works for any `r >= 1` (for `r = 1` it reduces to the indicator of
/// `a_1 | n`). Reusable across many `n`.
#[derive(Debug, Clone)]
pub struct DenumerantFormula {
    total: u64,
    boxed: ShiftBox,
}

impl DenumerantFormula {
    pub fn new(a: &PartSeq) -> Result<Self> {
        let modulus = lcm_all(a.parts().iter().copied())?;
        let boxed = ShiftBox::new(modulus, a.len() - 1, &plain_generators(a.parts(), modulus))?;
        Ok(DenumerantFormula {
            total: a.sum(),
            boxed,
        })
    }

    /// The congruence-matched box sum. On each residue class it is the
    /// polynomial constituent of the quasi-polynomial, so it returns 0 for
    /// `-sum(a) < n < 0`. For `n <= -sum(a)` the constituents no longer
    /// vanish and the count (zero) is returned without evaluating.
    pub fn count(&self, n: i64) -> Result<ExactInt> {
        if n <= -(self.total as i64) {
            return Ok(ExactInt::zero());
        }
        self.boxed.count(n, "denumerant box sum")
    }

    /// The full box sum divided by `D^r (r-1)!`; a polynomial in `n`.
    pub fn polynomial_part(&self, n: i64) -> ExactRat {
        self.boxed.average(n)
    }
}

/// Denumerant closed form: `(1/(r-1)!) sum_{j in box, sum a_i j_i = n (mod D)}
/// prod_{l=1}^{r-1} ((n - sum a_i j_i) / D + l)`. Requires `r >= 2`.
pub fn popoviciu_general(a: &PartSeq, n: i64) -> Result<ExactInt> {
    a.require_len(2)?;
    DenumerantFormula::new(a)?.count(n)
}

/// Polynomial part of the denumerant: the unrestricted box sum over `D (r-1)!`.
pub fn polynomial_part(a: &PartSeq, n: i64) -> Result<ExactRat> {
    a.require_len(2)?;
    Ok(DenumerantFormula::new(a)?.polynomial_part(n))
}

/// `p_{a,d}(n)` as a single box sum over `e in {0,1}^r` and
/// `0 <= j_i < D(d) / (d a_i)`, shifts `sum a_i (d j_i + e_i)`, modulus `D(d)`.
#[derive(Debug, Clone)]
pub struct CongruentFormula {
    boxed: ShiftBox,
}

impl CongruentFormula {
    pub fn new(a: &PartSeq, d: Modulus) -> Result<Self> {
        a.require_len(2)?;
        let modulus = LcmCache::new(a, d)?.scaled;
        let mut generators: Vec<(u64, u64)> = a
            .parts()
            .iter()
            .map(|&ai| (d.get() * ai, modulus / (d.get() * ai)))
            .collect();
        generators.extend(a.parts().iter().map(|&ai| (ai, 2)));
        Ok(CongruentFormula {
            boxed: ShiftBox::new(modulus, a.len() - 1, &generators)?,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.boxed.modulus()
    }

    pub fn count(&self, n: i64) -> Result<ExactInt> {
        if n < 0 {
            return Err(Error::Domain(format!("closed form needs n >= 0, got {n}")));
        }
        self.boxed.count(n, "congruent box sum")
    }

    pub fn polynomial_part(&self, n: i64) -> ExactRat {
        self.boxed.average(n)
    }

    /// The polynomial part before reduction: `(box sum, D(d)^r (r-1)!)`.
    pub fn polynomial_part_unreduced(&self, n: i64) -> (ExactInt, ExactInt) {
        self.boxed.average_parts(n)
    }

    /// The box sum restricted to shifts `s = residue (mod D(d))`, with the
    /// products evaluated at `n`, divided by `(r-1)!` and `D(d)^{r-1}`.
    /// For `residue = n mod D(d)` this is [`CongruentFormula::count`].
    pub fn constituent(&self, residue: u64, n: i64) -> ExactRat {
        self.boxed.constituent(residue, n)
    }
}

/// Closed form for `p_{a,d}(n)` with `e` and `j` summed jointly. `n >= 0`.
pub fn congruent_closed(a: &PartSeq, d: Modulus, n: i64) -> Result<ExactInt> {
    CongruentFormula::new(a, d)?.count(n)
}

/// Polynomial part of `p_{a,d}`, exact rational.
pub fn congruent_poly_part(a: &PartSeq, d: Modulus, n: i64) -> Result<ExactRat> {
    Ok(CongruentFormula::new(a, d)?.polynomial_part(n))
}

/// `p_{a,d}(n) = sum_{J subset [r]} p_{d a}(n - a_J)`, with each inner
/// denumerant from the box-sum formula and negative targets contributing 0.
#[derive(Debug, Clone)]
pub struct CongruentDecomposition {
    parts: Vec<u64>,
    inner: DenumerantFormula,
}

impl CongruentDecomposition {
    pub fn new(a: &PartSeq, d: Modulus) -> Result<Self> {
        if a.len() >= 64 {
            return Err(Error::Domain("too many parts for subset expansion".into()));
        }
        Ok(CongruentDecomposition {
            parts: a.parts().to_vec(),
            inner: DenumerantFormula::new(&a.scaled(d.get()))?,
        })
    }

    fn subset_sums(&self) -> impl Iterator<Item = u64> + '_ {
        (0u64..1 << self.parts.len()).map(move |mask| {
            self.parts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .sum()
        })
    }

    pub fn count(&self, n: i64) -> Result<ExactInt> {
        if n < 0 {
            return Err(Error::Domain(format!(
                "decomposition needs n >= 0, got {n}"
            )));
        }
        let mut total = ExactInt::zero();
        for shift in self.subset_sums() {
            let m = n - shift as i64;
            if m >= 0 {
                total += self.inner.count(m)?;
            }
        }
        Ok(total)
    }

    /// `sum_J P_{d a}(n - a_J)`; polynomial parts are not clamped.
    pub fn polynomial_part(&self, n: i64) -> ExactRat {
        self.subset_sums()
            .map(|shift| self.inner.polynomial_part(n - shift as i64))
            .sum()
    }
}

pub fn congruent_by_decomposition(a: &PartSeq, d: Modulus, n: i64) -> Result<ExactInt> {
    CongruentDecomposition::new(a, d)?.count(n)
}

/// Specialization to the parts `(1, d, ..., d^k)`, written directly with
/// modulus `d^{k+1}`: indices `0 <= j_i < d^{k-i}` with weight `d^{i+1}`
/// for `i < k`, and `e_i` with weight `d^i` for `i <= k`.
#[derive(Debug, Clone)]
pub struct DaryFormula {
    boxed: ShiftBox,
}

impl DaryFormula {
    pub fn new(d: Modulus, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("d-ary closed form needs k >= 1".into()));
        }
        let d = d.get();
        let pow = |e: u32| {
            d.checked_pow(e)
                .ok_or_else(|| Error::Domain(format!("{d}^{e} overflows u64")))
        };
        let modulus = pow(k + 1)?;
        let mut generators = Vec::with_capacity(2 * k as usize + 1);
        for i in 0..k {
            generators.push((pow(i + 1)?, pow(k - i)?));
        }
        for i in 0..=k {
            generators.push((pow(i)?, 2));
        }
        Ok(DaryFormula {
            boxed: ShiftBox::new(modulus, k as usize, &generators)?,
        })
    }

    pub fn count(&self, n: i64) -> Result<ExactInt> {
        if n < 0 {
            return Err(Error::Domain(format!("closed form needs n >= 0, got {n}")));
        }
        self.boxed.count(n, "d-ary box sum")
    }

    pub fn polynomial_part(&self, n: i64) -> ExactRat {
        self.boxed.average(n)
    }
}

pub fn dary_closed(d: Modulus, k: u32, n: i64) -> Result<ExactInt> {
    DaryFormula::new(d, k)?.count(n)
}

pub fn dary_poly_part(d: Modulus, k: u32, n: i64) -> Result<ExactRat> {
    Ok(DaryFormula::new(d, k)?.polynomial_part(n))
}

/// Number of binary partitions of `n` with parts at most `2^k`:
/// `(1/k!) sum prod_{l=1}^k ((n - j_1 - 2 j_2 - ... - 2^{k-1} j_k) / 2^k + l)`
/// over `0 <= j_i < 2^{k-i+1}` with the shift congruent to `n` mod `2^k`.
pub fn binary_partitions_closed(k: u32, n: i64) -> Result<ExactInt> {
    if k < 1 {
        return Err(Error::Domain(
            "binary partition closed form needs k >= 1".into(),
        ));
    }
    if n < 0 {
        return Err(Error::Domain(format!("closed form needs n >= 0, got {n}")));
    }
    if k >= 40 {
        return Err(Error::Domain(format!("k = {k} too large")));
    }
    let modulus = 1u64 << k;
    let generators: Vec<(u64, u64)> = (1..=k)
        .map(|i| (1u64 << (i - 1), 1u64 << (k - i + 1)))
        .collect();
    ShiftBox::new(modulus, k as usize, &generators)?.count(n, "binary partition box sum")
}
