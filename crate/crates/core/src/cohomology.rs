//! Stable cohomology dimensions `h^j_st(-n, n)` of line bundles on flag
//! varieties in characteristic `p`.
//!
//! The dimensions are indexed by the tuples `(a_0, ..., a_k)` with
//! `sum a_i p^i = n` and every `a_i = 0, 1 (mod p)`; the tuple contributes to
//! degree `j = sum (a_i - (p-2) floor(a_i/p))`. The enumeration method walks
//! these tuples directly. The closed-form method evaluates the weighted
//! closed forms on `(1, p, ..., p^k)` and inherits their overcount.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::closed_forms::{
    dary_closed, CountedFormula, DaryCountedFormula, Exactness, COUNTED_CONGRUENT_NOTE,
    COUNTED_NOTE,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::types::{ExactInt, Modulus, PartSeq};

/// A prime characteristic `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPrime(u64);

impl CharPrime {
    pub fn new(p: u64) -> Result<Self> {
        let prime = p >= 2
            && (2..)
                .take_while(|q| q * q <= p)
                .all(|q| !p.is_multiple_of(q));
        if !prime {
            return Err(Error::NotPrime(p));
        }
        Ok(CharPrime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    fn modulus(self) -> Modulus {
        Modulus::new(self.0).expect("primes are at least 2")
    }
}

/// `floor(log_p n)` for `n >= 1`, and 0 for `n = 0`.
pub fn log_floor(p: CharPrime, n: u64) -> u32 {
    let mut k = 0;
    let mut power = p.get();
    while power <= n {
        k += 1;
        match power.checked_mul(p.get()) {
            Some(next) => power = next,
            None => break,
        }
    }
    k
}

/// A tuple `(a_0, ..., a_k)` with `sum a_i p^i = n`, `a_i = 0, 1 (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryCongruentTuple(pub Vec<u64>);

impl fmt::Display for BinaryCongruentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.0.iter().map(u64::to_string).collect();
        if xs.len() == 1 {
            write!(f, "({},)", xs[0])
        } else {
            write!(f, "({})", xs.join(","))
        }
    }
}

/// Cohomological degree of a tuple: `sum (a_i - (p-2) floor(a_i / p))`.
pub fn phi(p: CharPrime, a: &BinaryCongruentTuple) -> u64 {
    a.0.iter().map(|&x| x - (p.get() - 2) * (x / p.get())).sum()
}

fn nonnegative(n: i64) -> Result<u64> {
    u64::try_from(n).map_err(|_| Error::Domain(format!("n must be nonnegative, got {n}")))
}

fn powers(p: CharPrime, k: u32) -> Result<PartSeq> {
    PartSeq::powers(p.get(), k)
}

/// All tuples indexing the stable cohomology of `O(-n, n)`.
pub fn ap_set(p: CharPrime, n: i64) -> Result<Vec<BinaryCongruentTuple>> {
    let k = log_floor(p, nonnegative(n)?);
    Ok(oracle::enumerate_solutions(&powers(p, k)?, p.modulus(), n)?
        .into_iter()
        .map(|s| BinaryCongruentTuple(s.0))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Enumeration,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// `j -> h^j_st(-n, n)`; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomProfile {
    pub p: CharPrime,
    pub n: u64,
    pub k: u32,
    pub h: BTreeMap<u64, ExactInt>,
    pub method: Method,
    pub exactness: Exactness,
    pub note: Option<&'static str>,
}

impl CohomProfile {
    pub fn total(&self) -> ExactInt {
        self.h.values().sum()
    }

    pub fn get(&self, j: u64) -> ExactInt {
        self.h.get(&j).cloned().unwrap_or_else(ExactInt::zero)
    }

    /// Dense coefficient list of `sum_j h^j t^j`.
    pub fn dense(&self) -> Vec<ExactInt> {
        let len = self.h.keys().next_back().map_or(0, |&j| j as usize + 1);
        let mut coeffs = vec![ExactInt::zero(); len];
        for (&j, c) in &self.h {
            coeffs[j as usize] = c.clone();
        }
        coeffs
    }
}

/// The closed forms need at least two parts; `(1, p)` has the same
/// solutions as `(1)` whenever `n < p`, so `k = 0` is evaluated at `k = 1`.
fn closed_form_k(k: u32) -> u32 {
    k.max(1)
}

pub fn stable_profile(p: CharPrime, n: i64, method: Method) -> Result<CohomProfile> {
    let n = nonnegative(n)?;
    let k = log_floor(p, n);
    let signed_n = i64::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    let mut h = BTreeMap::new();
    let (exactness, note) = match method {
        Method::Enumeration => {
            oracle::for_each_solution(&powers(p, k)?, p.modulus(), n, |a| {
                let j = a
                    .iter()
                    .map(|&x| x - (p.get() - 2) * (x / p.get()))
                    .sum::<u64>();
                *h.entry(j).or_insert_with(ExactInt::zero) += 1;
            });
            (Exactness::CountCertified, None)
        }
        Method::ClosedForm => {
            let k = closed_form_k(k);
            let degrees = if n == 0 { 0..=0 } else { 1..=n };
            let (eval, note): (Box<dyn Fn(u64) -> Result<ExactInt>>, _) = if p.get() == 2 {
                let f = CountedFormula::new(&powers(p, k)?)?;
                (
                    Box::new(move |j| Ok(f.evaluate(signed_n, j)?.value.to_integer())),
                    COUNTED_NOTE,
                )
            } else {
                let f = DaryCountedFormula::new(p.modulus(), k)?;
                (
                    Box::new(move |j| Ok(f.evaluate(signed_n, j)?.value.to_integer())),
                    COUNTED_CONGRUENT_NOTE,
                )
            };
            for j in degrees {
                let v = eval(j)?;
                if !v.is_zero() {
                    h.insert(j, v);
                }
            }
            (Exactness::UpperBound, Some(note))
        }
    };
    Ok(CohomProfile {
        p,
        n,
        k,
        h,
        method,
        exactness,
        note,
    })
}

/// `h_st(-n, n) = sum_j h^j_st(-n, n)`.
pub fn h_total(p: CharPrime, n: i64, method: Method) -> Result<ExactInt> {
    let un = nonnegative(n)?;
    match method {
        Method::Enumeration => {
            let k = log_floor(p, un);
            let mut count = ExactInt::zero();
            oracle::for_each_solution(&powers(p, k)?, p.modulus(), un, |_| {
                count += ExactInt::one()
            });
            Ok(count)
        }
        Method::ClosedForm => dary_closed(p.modulus(), closed_form_k(log_floor(p, un)), n),
    }
}

/// Coefficients of `sum_j h^j_st(-n, n) t^j` from the enumeration profile.
pub fn poincare_polynomial(p: CharPrime, n: i64) -> Result<Vec<ExactInt>> {
    Ok(stable_profile(p, n, Method::Enumeration)?.dense())
}

/// Renders `[0, 1, 1]` as `t + t^2`.
pub fn format_polynomial(coeffs: &[ExactInt], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let power = match j {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{j}"),
            };
            match (c.is_one(), j) {
                (_, 0) => c.to_string(),
                (true, _) => power,
                (false, _) => format!("{c}{power}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> CharPrime {
        CharPrime::new(p).unwrap()
    }

    fn profile(pairs: &[(u64, i64)]) -> BTreeMap<u64, ExactInt> {
        pairs.iter().map(|&(j, c)| (j, ExactInt::from(c))).collect()
    }

    fn tuple(xs: &[u64]) -> BinaryCongruentTuple {
        BinaryCongruentTuple(xs.to_vec())
    }

    #[test]
    fn primality() {
        for p in [2, 3, 5, 7, 11, 97] {
            assert!(CharPrime::new(p).is_ok());
        }
        for p in [0, 1, 4, 9, 15, 91] {
            assert_eq!(CharPrime::new(p), Err(Error::NotPrime(p)));
        }
    }

    #[test]
    fn log_floor_is_exact() {
        assert_eq!(log_floor(prime(3), 9), 2);
        assert_eq!(log_floor(prime(3), 8), 1);
        assert_eq!(log_floor(prime(2), 6), 2);
        assert_eq!(log_floor(prime(2), 1), 0);
        assert_eq!(log_floor(prime(2), 0), 0);
        assert_eq!(log_floor(prime(5), 125), 3);
        assert_eq!(log_floor(prime(2), u64::MAX), 63);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(prime(3), &tuple(&[0, 3, 0])), 2);
        assert_eq!(phi(prime(3), &tuple(&[6, 1, 0])), 5);
        assert_eq!(phi(prime(2), &tuple(&[2, 2, 0])), 4);
    }

    #[test]
    fn ap_set_examples() {
        let listing: Vec<Vec<u64>> = ap_set(prime(3), 9)
            .unwrap()
            .into_iter()
            .map(|t| t.0)
            .collect();
        assert_eq!(
            listing,
            vec![vec![0, 0, 1], vec![0, 3, 0], vec![6, 1, 0], vec![9, 0, 0]]
        );
        assert_eq!(ap_set(prime(2), 6).unwrap().len(), 6);
        assert_eq!(ap_set(prime(2), 0).unwrap(), vec![tuple(&[0])]);
        assert_eq!(tuple(&[0]).to_string(), "(0,)");
        assert!(ap_set(prime(2), -1).is_err());
    }

    #[test]
    fn enumeration_profiles() {
        let p3 = stable_profile(prime(3), 9, Method::Enumeration).unwrap();
        assert_eq!(p3.h, profile(&[(1, 1), (2, 1), (5, 1), (6, 1)]));
        assert_eq!(p3.k, 2);
        let p2 = stable_profile(prime(2), 6, Method::Enumeration).unwrap();
        assert_eq!(p2.h, profile(&[(2, 1), (3, 2), (4, 1), (5, 1), (6, 1)]));
        let zero = stable_profile(prime(2), 0, Method::Enumeration).unwrap();
        assert_eq!((zero.k, zero.h), (0, profile(&[(0, 1)])));
        // no tuple when 1 < n < p
        assert!(stable_profile(prime(5), 3, Method::Enumeration)
            .unwrap()
            .h
            .is_empty());
    }

    #[test]
    fn closed_form_profile_overcounts_binary_six() {
        let closed = stable_profile(prime(2), 6, Method::ClosedForm).unwrap();
        assert_eq!(closed.exactness, Exactness::UpperBound);
        assert_eq!(closed.note, Some(COUNTED_NOTE));
        assert_eq!(
            closed.h,
            profile(&[(1, 2), (2, 2), (3, 2), (4, 1), (5, 1), (6, 1)])
        );
    }

    #[test]
    fn totals() {
        for method in [Method::Enumeration, Method::ClosedForm] {
            assert_eq!(h_total(prime(3), 9, method).unwrap(), ExactInt::from(4));
            assert_eq!(h_total(prime(2), 6, method).unwrap(), ExactInt::from(6));
            for p in [2, 3, 5, 7] {
                assert_eq!(h_total(prime(p), 0, method).unwrap(), ExactInt::one());
            }
        }
    }

    #[test]
    fn poincare_examples() {
        let render = |p, n| format_polynomial(&poincare_polynomial(prime(p), n).unwrap(), "t");
        assert_eq!(render(3, 9), "t + t^2 + t^5 + t^6");
        assert_eq!(render(2, 6), "t^2 + 2t^3 + t^4 + t^5 + t^6");
        assert_eq!(render(5, 1), "t");
        assert_eq!(render(2, 0), "1");
        assert_eq!(render(5, 3), "0");
    }
}
