//! Sweep reports and their two serializations: a line-oriented text form
//! and one JSON document. Field order is fixed in both.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use num_traits::One;
use serde::Serialize;

use super::{Classification, DiscrepancyRecord, IdentityId, SweepConfig};
use crate::types::ExactRat;

/// `num/den` in lowest terms, or just `num` for integers.
pub fn format_rat(r: &ExactRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IdentityTotals {
    pub cases: usize,
    pub matches: usize,
    pub known: usize,
    pub novel: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub cases: usize,
    pub matches: usize,
    pub discrepancies: usize,
    pub known: usize,
    pub novel: usize,
}

/// Outcome of a whole run, worst first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    CertifiedFailure,
    Novel,
    KnownOnly,
    Clean,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedFailure => "certified-failure",
            Verdict::Novel => "novel",
            Verdict::KnownOnly => "known-only",
            Verdict::Clean => "clean",
        }
    }

    /// Process exit status: 0 when only known discrepancies occurred, 4 for
    /// a novel one, 5 when a certified identity failed.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::CertifiedFailure => 5,
            Verdict::Novel => 4,
            Verdict::KnownOnly | Verdict::Clean => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub totals: Totals,
    pub per_identity: BTreeMap<IdentityId, IdentityTotals>,
    pub records: Vec<DiscrepancyRecord>,
    pub duration: Duration,
}

#[derive(Serialize)]
struct RecordWire<'a> {
    identity: &'a str,
    params: String,
    formula: String,
    oracle: String,
    gap: String,
    classification: &'a str,
    note: &'a str,
}

#[derive(Serialize)]
struct IdentityWire<'a> {
    identity: &'a str,
    certified: bool,
    #[serde(flatten)]
    totals: IdentityTotals,
}

#[derive(Serialize)]
struct ReportWire<'a> {
    config: &'a SweepConfig,
    totals: Totals,
    identities: Vec<IdentityWire<'a>>,
    records: Vec<RecordWire<'a>>,
    verdict: &'a str,
    duration_ms: u128,
}

impl SweepReport {
    pub(crate) fn new(
        config: SweepConfig,
        per_identity: BTreeMap<IdentityId, IdentityTotals>,
        records: Vec<DiscrepancyRecord>,
        duration: Duration,
    ) -> Self {
        let mut totals = Totals::default();
        for t in per_identity.values() {
            totals.cases += t.cases;
            totals.matches += t.matches;
            totals.known += t.known;
            totals.novel += t.novel;
        }
        totals.discrepancies = records.len();
        SweepReport {
            config,
            totals,
            per_identity,
            records,
            duration,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.records
            .iter()
            .map(|r| match (r.identity.is_certified(), r.classification) {
                (true, _) => Verdict::CertifiedFailure,
                (false, Classification::Novel) => Verdict::Novel,
                (false, Classification::Known) => Verdict::KnownOnly,
            })
            .min()
            .unwrap_or(Verdict::Clean)
    }

    pub fn records_for(&self, id: IdentityId) -> impl Iterator<Item = &DiscrepancyRecord> {
        self.records.iter().filter(move |r| r.identity == id)
    }

    /// Line-oriented text. Everything but the final `duration_ms` line is
    /// determined by the configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let list = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let names: Vec<&str> = c.identities.iter().map(|id| id.name()).collect();
        let _ = writeln!(
            out,
            "config identities={} r={}..{} max_part={} strict={} d={} n={}..{} j_max={} k={} primes={} threads={}",
            names.join(","),
            c.r_min,
            c.r_max,
            c.max_part,
            c.strict,
            list(&c.d_values),
            c.n_min,
            c.n_max,
            c.j_max.map_or_else(|| "n".to_string(), |j| j.to_string()),
            c.k_values.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
            list(&c.primes),
            c.threads,
        );
        for (id, t) in &self.per_identity {
            let _ = writeln!(
                out,
                "identity {} {} cases={} matches={} known={} novel={}",
                id,
                if id.is_certified() {
                    "certified"
                } else {
                    "upper-bound"
                },
                t.cases,
                t.matches,
                t.known,
                t.novel
            );
        }
        for r in &self.records {
            let _ = writeln!(
                out,
                "record identity={} {} formula={} oracle={} gap={} class={} note=\"{}\"",
                r.identity,
                r.params,
                format_rat(&r.formula),
                format_rat(&r.oracle),
                format_rat(&r.gap()),
                r.classification.as_str(),
                r.note
            );
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "totals cases={} matches={} discrepancies={} known={} novel={}",
            t.cases, t.matches, t.discrepancies, t.known, t.novel
        );
        let _ = writeln!(out, "verdict {}", self.verdict().as_str());
        let _ = writeln!(out, "duration_ms={}", self.duration.as_millis());
        out
    }

    /// One JSON document; `duration_ms` is the last field.
    pub fn to_json(&self) -> String {
        let wire = ReportWire {
            config: &self.config,
            totals: self.totals,
            identities: self
                .per_identity
                .iter()
                .map(|(id, t)| IdentityWire {
                    identity: id.name(),
                    certified: id.is_certified(),
                    totals: *t,
                })
                .collect(),
            records: self
                .records
                .iter()
                .map(|r| RecordWire {
                    identity: r.identity.name(),
                    params: r.params.to_string(),
                    formula: format_rat(&r.formula),
                    oracle: format_rat(&r.oracle),
                    gap: format_rat(&r.gap()),
                    classification: r.classification.as_str(),
                    note: r.note,
                })
                .collect(),
            verdict: self.verdict().as_str(),
            duration_ms: self.duration.as_millis(),
        };
        serde_json::to_string(&wire).expect("report serialization cannot fail")
    }
}
