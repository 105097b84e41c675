//! Registered identities and their single-case evaluation.
//!
//! Every identity pairs a formula side from [`crate::closed_forms`] with an
//! oracle side from [`crate::oracle`] (or, for the cohomology identities,
//! the closed-form and enumeration methods). The two sides never exchange
//! intermediate values.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    binary_partitions_closed, CongruentDecomposition, CongruentFormula, CountedCongruentFormula,
    CountedFormula, DaryCountedFormula, DaryFormula, DenumerantFormula, LcmCache,
};
use crate::cohomology::{h_total, stable_profile, CharPrime, CohomProfile, Method};
use crate::error::{Error, Result};
use crate::oracle::{self, WeightProfile};
use crate::types::{ExactInt, ExactRat, Modulus, PartSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    DenumerantClosed,
    CongruentClosed,
    SubsetDecomposition,
    DaryClosed,
    Series,
    SumOverJ,
    D2Reduction,
    DivisibilityMonotonicity,
    QuasiPeriod,
    PolyPartAverage,
    CohomologyTotal,
    BinaryPartitions,
    CountedClosed,
    CountedCongruentClosed,
    DaryCountedClosed,
    CohomologyDegree,
}

/// Canonical names first, then accepted aliases.
const NAMES: &[(&str, IdentityId)] = &[
    ("denumerant-closed", IdentityId::DenumerantClosed),
    ("congruent-closed", IdentityId::CongruentClosed),
    ("subset-decomposition", IdentityId::SubsetDecomposition),
    ("dary-closed", IdentityId::DaryClosed),
    ("series", IdentityId::Series),
    ("sum-over-j", IdentityId::SumOverJ),
    ("d2-reduction", IdentityId::D2Reduction),
    (
        "divisibility-monotonicity",
        IdentityId::DivisibilityMonotonicity,
    ),
    ("quasi-period", IdentityId::QuasiPeriod),
    ("poly-part-average", IdentityId::PolyPartAverage),
    ("cohomology-total", IdentityId::CohomologyTotal),
    ("binary-partitions", IdentityId::BinaryPartitions),
    ("counted-closed", IdentityId::CountedClosed),
    (
        "counted-congruent-closed",
        IdentityId::CountedCongruentClosed,
    ),
    ("dary-counted-closed", IdentityId::DaryCountedClosed),
    ("cohomology-degree", IdentityId::CohomologyDegree),
    // short aliases
    ("popoviciu", IdentityId::DenumerantClosed),
    ("thm1.1", IdentityId::DenumerantClosed),
    ("thm2.3", IdentityId::CongruentClosed),
    ("prop2.2", IdentityId::SubsetDecomposition),
    ("cor2.4", IdentityId::DaryClosed),
    ("prop2.1", IdentityId::Series),
    ("prop2.1-series", IdentityId::Series),
    ("averaging", IdentityId::PolyPartAverage),
    ("prop2.6", IdentityId::CountedClosed),
    ("thm2.7", IdentityId::CountedCongruentClosed),
    ("cor2.8", IdentityId::DaryCountedClosed),
    ("thm3.1", IdentityId::CohomologyDegree),
    ("thm3.3", IdentityId::CohomologyDegree),
];

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::DenumerantClosed,
        IdentityId::CongruentClosed,
        IdentityId::SubsetDecomposition,
        IdentityId::DaryClosed,
        IdentityId::Series,
        IdentityId::SumOverJ,
        IdentityId::D2Reduction,
        IdentityId::DivisibilityMonotonicity,
        IdentityId::QuasiPeriod,
        IdentityId::PolyPartAverage,
        IdentityId::CohomologyTotal,
        IdentityId::BinaryPartitions,
        IdentityId::CountedClosed,
        IdentityId::CountedCongruentClosed,
        IdentityId::DaryCountedClosed,
        IdentityId::CohomologyDegree,
    ];

    pub fn name(self) -> &'static str {
        NAMES
            .iter()
            .find(|(_, id)| *id == self)
            .map(|(name, _)| *name)
            .expect("every identity has a canonical name")
    }

    /// Identities whose two sides are proven equal; any mismatch fails a run.
    pub fn is_certified(self) -> bool {
        !matches!(
            self,
            IdentityId::CountedClosed
                | IdentityId::CountedCongruentClosed
                | IdentityId::DaryCountedClosed
                | IdentityId::CohomologyDegree
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(s))
            .map(|(_, id)| *id)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Parameter tuple of one case. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseParams {
    pub parts: Option<Vec<u64>>,
    pub d: Option<u64>,
    /// Second modulus of the divisibility check (`d | d2`).
    pub d2: Option<u64>,
    pub p: Option<u64>,
    pub k: Option<u32>,
    /// Target `n` (series: the truncation order `N`).
    pub n: i64,
    pub j: Option<u64>,
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut fields = Vec::new();
        if let Some(parts) = &self.parts {
            let parts: Vec<String> = parts.iter().map(u64::to_string).collect();
            fields.push(format!("parts={}", parts.join(",")));
        }
        if let Some(d) = self.d {
            fields.push(format!("d={d}"));
        }
        if let Some(d2) = self.d2 {
            fields.push(format!("d2={d2}"));
        }
        if let Some(p) = self.p {
            fields.push(format!("p={p}"));
        }
        if let Some(k) = self.k {
            fields.push(format!("k={k}"));
        }
        fields.push(format!("n={}", self.n));
        if let Some(j) = self.j {
            fields.push(format!("j={j}"));
        }
        f.write_str(&fields.join(" "))
    }
}

impl CaseParams {
    fn missing(field: &str, id: IdentityId) -> Error {
        Error::Config(format!("identity `{id}` needs parameter `{field}`"))
    }

    fn parts(&self, id: IdentityId) -> Result<PartSeq> {
        PartSeq::new(
            self.parts
                .clone()
                .ok_or_else(|| Self::missing("parts", id))?,
        )
    }

    fn d(&self, id: IdentityId) -> Result<Modulus> {
        Modulus::new(self.d.ok_or_else(|| Self::missing("d", id))?)
    }

    fn d2(&self, id: IdentityId) -> Result<Modulus> {
        Modulus::new(self.d2.ok_or_else(|| Self::missing("d2", id))?)
    }

    fn p(&self, id: IdentityId) -> Result<CharPrime> {
        CharPrime::new(self.p.ok_or_else(|| Self::missing("p", id))?)
    }

    fn k(&self, id: IdentityId) -> Result<u32> {
        self.k.ok_or_else(|| Self::missing("k", id))
    }

    fn j(&self, id: IdentityId) -> Result<u64> {
        self.j.ok_or_else(|| Self::missing("j", id))
    }

    fn nonnegative_n(&self) -> Result<usize> {
        usize::try_from(self.n)
            .map_err(|_| Error::Domain(format!("n must be nonnegative, got {}", self.n)))
    }
}

/// How the two sides are expected to relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// The formula side must not exceed the oracle side.
    AtMost,
}

/// Both sides of one evaluated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub formula: ExactRat,
    pub oracle: ExactRat,
    pub relation: Relation,
}

impl Comparison {
    fn equal(formula: ExactRat, oracle: ExactRat) -> Self {
        Comparison {
            formula,
            oracle,
            relation: Relation::Equal,
        }
    }

    fn ints(formula: ExactInt, oracle: ExactInt) -> Self {
        Comparison::equal(
            ExactRat::from_integer(formula),
            ExactRat::from_integer(oracle),
        )
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Equal => self.formula == self.oracle,
            Relation::AtMost => self.formula <= self.oracle,
        }
    }
}

/// Lagrange interpolation through `points`, evaluated at `x`.
pub(crate) fn interpolate(points: &[(i64, ExactInt)], x: i64) -> ExactRat {
    let mut total = ExactRat::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = ExactRat::from_integer(yi.clone());
        for (m, (xm, _)) in points.iter().enumerate() {
            if m != i {
                term *= ExactRat::new(ExactInt::from(x - xm), ExactInt::from(xi - xm));
            }
        }
        total += term;
    }
    total
}

/// Per-worker memo of oracle tables and formula evaluators. Both sides of
/// a comparison are still computed independently; the cache only avoids
/// rebuilding the same table for neighbouring `n`.
#[derive(Default)]
pub struct Evaluator {
    denumerants: HashMap<Vec<u64>, Vec<ExactInt>>,
    congruent: HashMap<(Vec<u64>, u64), Vec<ExactInt>>,
    weighted: HashMap<(Vec<u64>, u64), Vec<WeightProfile>>,
    denumerant_formulas: HashMap<Vec<u64>, DenumerantFormula>,
    congruent_formulas: HashMap<(Vec<u64>, u64), CongruentFormula>,
    decompositions: HashMap<(Vec<u64>, u64), CongruentDecomposition>,
    dary_formulas: HashMap<(u64, u32), DaryFormula>,
    counted_formulas: HashMap<Vec<u64>, CountedFormula>,
    counted_congruent_formulas: HashMap<(Vec<u64>, u64), CountedCongruentFormula>,
    dary_counted_formulas: HashMap<(u64, u32), DaryCountedFormula>,
    profiles: HashMap<(u64, u64, Method), CohomProfile>,
}

/// Grows a cached table to cover index `n`, rebuilding with headroom.
fn table_entry<K, T, F>(map: &mut HashMap<K, Vec<T>>, key: K, n: usize, build: F) -> &T
where
    K: std::hash::Hash + Eq,
    F: FnOnce(usize) -> Vec<T>,
{
    let table = map.entry(key).or_default();
    if table.len() <= n {
        *table = build((n + 1).max(table.len() * 2));
    }
    &table[n]
}

fn formula_entry<K, T, F>(map: &mut HashMap<K, T>, key: K, build: F) -> Result<&T>
where
    K: std::hash::Hash + Eq,
    F: FnOnce() -> Result<T>,
{
    use std::collections::hash_map::Entry;
    match map.entry(key) {
        Entry::Occupied(e) => Ok(e.into_mut()),
        Entry::Vacant(v) => Ok(v.insert(build()?)),
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    fn denumerant(&mut self, a: &PartSeq, n: i64) -> ExactInt {
        match usize::try_from(n) {
            Ok(n) => table_entry(&mut self.denumerants, a.parts().to_vec(), n, |len| {
                oracle::denumerant_table(a, len - 1)
            })
            .clone(),
            Err(_) => ExactInt::zero(),
        }
    }

    fn congruent(&mut self, a: &PartSeq, d: Modulus, n: i64) -> ExactInt {
        match usize::try_from(n) {
            Ok(n) => table_entry(
                &mut self.congruent,
                (a.parts().to_vec(), d.get()),
                n,
                |len| oracle::congruent_table(a, d, len - 1),
            )
            .clone(),
            Err(_) => ExactInt::zero(),
        }
    }

    fn weighted(&mut self, a: &PartSeq, d: Modulus, n: usize) -> &WeightProfile {
        table_entry(
            &mut self.weighted,
            (a.parts().to_vec(), d.get()),
            n,
            |len| oracle::weighted_table(a, d, len - 1),
        )
    }

    fn weighted_at(&mut self, a: &PartSeq, d: Modulus, n: i64, j: u64) -> ExactInt {
        match usize::try_from(n) {
            Ok(n) => self
                .weighted(a, d, n)
                .get(&j)
                .cloned()
                .unwrap_or_else(ExactInt::zero),
            Err(_) => ExactInt::zero(),
        }
    }

    fn congruent_formula(&mut self, a: &PartSeq, d: Modulus) -> Result<&CongruentFormula> {
        formula_entry(
            &mut self.congruent_formulas,
            (a.parts().to_vec(), d.get()),
            || CongruentFormula::new(a, d),
        )
    }

    fn profile(&mut self, p: CharPrime, n: i64, method: Method) -> Result<&CohomProfile> {
        let key = (p.get(), u64::try_from(n).unwrap_or(u64::MAX), method);
        formula_entry(&mut self.profiles, key, || stable_profile(p, n, method))
    }

    /// Evaluates both sides of one case.
    pub fn compare(&mut self, id: IdentityId, params: &CaseParams) -> Result<Comparison> {
        let n = params.n;
        Ok(match id {
            IdentityId::DenumerantClosed => {
                let a = params.parts(id)?;
                a.require_len(2)?;
                let formula =
                    formula_entry(&mut self.denumerant_formulas, a.parts().to_vec(), || {
                        DenumerantFormula::new(&a)
                    })?
                    .count(n)?;
                Comparison::ints(formula, self.denumerant(&a, n))
            }
            IdentityId::CongruentClosed => {
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let formula = self.congruent_formula(&a, d)?.count(n)?;
                Comparison::ints(formula, self.congruent(&a, d, n))
            }
            IdentityId::SubsetDecomposition => {
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let formula = formula_entry(
                    &mut self.decompositions,
                    (a.parts().to_vec(), d.get()),
                    || CongruentDecomposition::new(&a, d),
                )?
                .count(n)?;
                Comparison::ints(formula, self.congruent(&a, d, n))
            }
            IdentityId::DaryClosed => {
                let (d, k) = (params.d(id)?, params.k(id)?);
                let formula = formula_entry(&mut self.dary_formulas, (d.get(), k), || {
                    DaryFormula::new(d, k)
                })?
                .count(n)?;
                Comparison::ints(formula, self.congruent(&PartSeq::powers(d.get(), k)?, d, n))
            }
            IdentityId::Series => {
                // holds when every coefficient through z^N matches; the
                // compared values are the first mismatching pair, or the last
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let len = params.nonnegative_n()?;
                let series = oracle::series_coeffs(&a, d, len);
                let counts = oracle::congruent_table(&a, d, len);
                let m = (0..=len)
                    .find(|&m| series.coeffs[m] != counts[m])
                    .unwrap_or(len);
                Comparison::ints(series.coeffs[m].clone(), counts[m].clone())
            }
            IdentityId::SumOverJ => {
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let total: ExactInt = match usize::try_from(n) {
                    Ok(un) => self.weighted(&a, d, un).values().sum(),
                    Err(_) => ExactInt::zero(),
                };
                Comparison::ints(total, self.congruent(&a, d, n))
            }
            IdentityId::D2Reduction => {
                let a = params.parts(id)?;
                let two = Modulus::new(2)?;
                Comparison::ints(self.congruent(&a, two, n), self.denumerant(&a, n))
            }
            IdentityId::DivisibilityMonotonicity => {
                let (a, d1, d2) = (params.parts(id)?, params.d(id)?, params.d2(id)?);
                if d2.get() % d1.get() != 0 {
                    return Err(Error::Config(format!(
                        "{} does not divide {}",
                        d1.get(),
                        d2.get()
                    )));
                }
                Comparison {
                    formula: ExactRat::from_integer(self.congruent(&a, d2, n)),
                    oracle: ExactRat::from_integer(self.congruent(&a, d1, n)),
                    relation: Relation::AtMost,
                }
            }
            IdentityId::QuasiPeriod => {
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let r = a.len();
                let f = self.congruent_formula(&a, d)?;
                let period = f.modulus() as i64;
                let mut values = Vec::with_capacity(r + 1);
                for m in 0..=r as i64 {
                    values.push(f.count(n + m * period)?);
                }
                // r-th forward difference
                for _ in 0..r {
                    values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
                }
                Comparison::ints(values.swap_remove(0), ExactInt::zero())
            }
            IdentityId::PolyPartAverage => {
                let (a, d) = (params.parts(id)?, params.d(id)?);
                let period = LcmCache::new(&a, d)?.scaled as i64;
                let formula = self.congruent_formula(&a, d)?.polynomial_part(n)
                    * ExactRat::from_integer(ExactInt::from(period));
                // each residue class's polynomial, interpolated through r counts
                let mut oracle = ExactRat::zero();
                for c in 0..period {
                    let points: Vec<(i64, ExactInt)> = (0..a.len() as i64)
                        .map(|m| {
                            let x = c + m * period;
                            (x, self.congruent(&a, d, x))
                        })
                        .collect();
                    oracle += interpolate(&points, n);
                }
                Comparison::equal(formula, oracle)
            }
            IdentityId::CohomologyTotal => {
                let p = params.p(id)?;
                Comparison::ints(
                    h_total(p, n, Method::ClosedForm)?,
                    h_total(p, n, Method::Enumeration)?,
                )
            }
            IdentityId::BinaryPartitions => {
                let k = params.k(id)?;
                Comparison::ints(
                    binary_partitions_closed(k, n)?,
                    self.denumerant(&PartSeq::powers(2, k)?, n),
                )
            }
            IdentityId::CountedClosed => {
                let (a, j) = (params.parts(id)?, params.j(id)?);
                let formula =
                    formula_entry(&mut self.counted_formulas, a.parts().to_vec(), || {
                        CountedFormula::new(&a)
                    })?
                    .evaluate(n, j)?
                    .value;
                let two = Modulus::new(2)?;
                Comparison::equal(
                    formula,
                    ExactRat::from_integer(self.weighted_at(&a, two, n, j)),
                )
            }
            IdentityId::CountedCongruentClosed => {
                let (a, d, j) = (params.parts(id)?, params.d(id)?, params.j(id)?);
                let formula = formula_entry(
                    &mut self.counted_congruent_formulas,
                    (a.parts().to_vec(), d.get()),
                    || CountedCongruentFormula::new(&a, d),
                )?
                .evaluate(n, j)?
                .value;
                Comparison::equal(
                    formula,
                    ExactRat::from_integer(self.weighted_at(&a, d, n, j)),
                )
            }
            IdentityId::DaryCountedClosed => {
                let (d, k, j) = (params.d(id)?, params.k(id)?, params.j(id)?);
                let formula = formula_entry(&mut self.dary_counted_formulas, (d.get(), k), || {
                    DaryCountedFormula::new(d, k)
                })?
                .evaluate(n, j)?
                .value;
                let a = PartSeq::powers(d.get(), k)?;
                Comparison::equal(
                    formula,
                    ExactRat::from_integer(self.weighted_at(&a, d, n, j)),
                )
            }
            IdentityId::CohomologyDegree => {
                let (p, j) = (params.p(id)?, params.j(id)?);
                let formula = self.profile(p, n, Method::ClosedForm)?.get(j);
                let oracle = self.profile(p, n, Method::Enumeration)?.get(j);
                Comparison::ints(formula, oracle)
            }
        })
    }
}

/// Signed gap `formula - oracle`.
pub fn gap(c: &Comparison) -> ExactRat {
    &c.formula - &c.oracle
}

pub(crate) fn is_overcount(c: &Comparison) -> bool {
    gap(c).is_positive()
}
