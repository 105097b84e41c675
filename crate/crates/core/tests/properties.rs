use num_integer::binomial;
use num_traits::Zero;
use proptest::prelude::*;

use rpart::closed_forms::{
    congruent_by_decomposition, congruent_closed, counted_closed, counted_congruent_closed,
    dary_closed, popoviciu_general, CongruentFormula,
};
use rpart::cohomology::{h_total, stable_profile, CharPrime, Method};
use rpart::oracle::{
    congruent_count, congruent_table, denumerant, enumerate_solutions, series_coeffs,
    weighted_profile, weighted_table,
};
use rpart::verifier::{sweep, IdentityId, SweepConfig};
use rpart::{ExactInt, ExactRat, Modulus, PartSeq};

fn parts(max_len: usize, max_part: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=max_part, 1..=max_len)
}

fn strict_parts(max_len: usize, max_part: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(1..=max_part, 2..=max_len).prop_map(|s| s.into_iter().collect())
}

fn modulus() -> impl Strategy<Value = u64> {
    2u64..=5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_is_permutation_invariant(a in parts(4, 7), d in modulus(), n in 0i64..60, seed in any::<u64>()) {
        let mut shuffled = a.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed % len as u64) as usize);
        if seed & 1 == 1 {
            shuffled.reverse();
        }
        let d = Modulus::new(d).unwrap();
        prop_assert_eq!(
            congruent_count(&PartSeq::new(a).unwrap(), d, n),
            congruent_count(&PartSeq::new(shuffled).unwrap(), d, n)
        );
    }

    #[test]
    fn series_coefficients_are_counts(a in parts(4, 7), d in modulus(), max_n in 0usize..80) {
        let a = PartSeq::new(a).unwrap();
        let d = Modulus::new(d).unwrap();
        prop_assert_eq!(series_coeffs(&a, d, max_n).coeffs, congruent_table(&a, d, max_n));
    }

    #[test]
    fn enumeration_matches_count(a in parts(3, 6), d in modulus(), n in 0i64..40) {
        let a = PartSeq::new(a).unwrap();
        let d = Modulus::new(d).unwrap();
        let sols = enumerate_solutions(&a, d, n).unwrap();
        prop_assert_eq!(ExactInt::from(sols.len()), congruent_count(&a, d, n));
        for s in &sols {
            let total: u64 = s.0.iter().zip(a.parts()).map(|(x, p)| x * p).sum();
            prop_assert_eq!(total as i64, n);
            prop_assert!(s.0.iter().all(|&x| d.admits(x)));
        }
        prop_assert!(sols.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn weighted_profile_sums_to_count(a in parts(4, 7), d in modulus(), n in 0i64..60) {
        let a = PartSeq::new(a).unwrap();
        let d = Modulus::new(d).unwrap();
        let profile = weighted_profile(&a, d, n);
        let total = profile.values().fold(ExactInt::zero(), |acc, v| acc + v);
        prop_assert_eq!(total, congruent_count(&a, d, n));
        prop_assert!(profile.keys().all(|&j| j as i64 <= n));
    }

    #[test]
    fn modulus_two_is_unrestricted(a in parts(4, 7), n in 0i64..80) {
        let a = PartSeq::new(a).unwrap();
        prop_assert_eq!(congruent_count(&a, Modulus::new(2).unwrap(), n), denumerant(&a, n));
    }

    #[test]
    fn finer_modulus_counts_fewer(a in parts(3, 7), d in 2u64..=4, m in 2u64..=3, n in 0i64..80) {
        let a = PartSeq::new(a).unwrap();
        let coarse = congruent_count(&a, Modulus::new(d).unwrap(), n);
        let fine = congruent_count(&a, Modulus::new(d * m).unwrap(), n);
        prop_assert!(fine <= coarse);
    }

    #[test]
    fn closed_forms_match_oracle(a in parts(3, 6), d in 2u64..=4, n in 0i64..120) {
        let a = PartSeq::new(a).unwrap();
        let md = Modulus::new(d).unwrap();
        let oracle = congruent_count(&a, md, n);
        prop_assert_eq!(congruent_by_decomposition(&a, md, n).unwrap(), oracle.clone());
        if a.len() >= 2 {
            prop_assert_eq!(congruent_closed(&a, md, n).unwrap(), oracle);
            prop_assert_eq!(popoviciu_general(&a, n).unwrap(), denumerant(&a, n));
        }
    }

    #[test]
    fn denumerant_closed_form_vanishes_below_zero(a in parts(3, 6), n in -40i64..0) {
        let a = PartSeq::new(a).unwrap();
        prop_assume!(a.len() >= 2);
        prop_assert_eq!(popoviciu_general(&a, n).unwrap(), ExactInt::zero());
    }

    #[test]
    fn quasi_period_difference_vanishes(a in strict_parts(3, 5), d in 2u64..=3, n in 0usize..40) {
        let a = PartSeq::new(a).unwrap();
        let md = Modulus::new(d).unwrap();
        let period = CongruentFormula::new(&a, md).unwrap().modulus() as usize;
        let r = a.len();
        let table = congruent_table(&a, md, n + r * period);
        let mut diff = ExactInt::zero();
        for i in 0..=r {
            let term = ExactInt::from(binomial(r as u64, i as u64)) * &table[n + i * period];
            if i % 2 == 0 { diff += term } else { diff -= term }
        }
        prop_assert!(diff.is_zero());
    }

    #[test]
    fn polynomial_part_is_constituent_average(a in strict_parts(3, 5), d in 2u64..=3, n in -20i64..40) {
        let a = PartSeq::new(a).unwrap();
        let f = CongruentFormula::new(&a, Modulus::new(d).unwrap()).unwrap();
        let period = f.modulus();
        let sum = (0..period).fold(ExactRat::zero(), |acc, s| acc + f.constituent(s, n));
        prop_assert_eq!(sum / ExactRat::from_integer(period.into()), f.polynomial_part(n));
    }

    #[test]
    fn weighted_closed_forms_bound_the_count(a in strict_parts(3, 6), d in 2u64..=3, n in 0i64..40) {
        let a = PartSeq::new(a).unwrap();
        let md = Modulus::new(d).unwrap();
        let table = weighted_table(&a, md, n as usize);
        let exact = &table[n as usize];
        for j in 0..=n as u64 {
            let truth = ExactRat::from_integer(exact.get(&j).cloned().unwrap_or_default());
            let formula = counted_congruent_closed(&a, md, n, j).unwrap();
            prop_assert!(formula.is_upper_bound());
            prop_assert!(formula.value >= truth, "j={} formula {} truth {}", j, formula.value, truth);
        }
    }

    #[test]
    fn unrestricted_weighted_form_bounds_the_count(a in strict_parts(3, 6), n in 0i64..40) {
        let a = PartSeq::new(a).unwrap();
        // modulus 2 weights are the plain part counts
        let exact = weighted_profile(&a, Modulus::new(2).unwrap(), n);
        for j in 0..=n as u64 {
            let truth = ExactRat::from_integer(exact.get(&j).cloned().unwrap_or_default());
            prop_assert!(counted_closed(&a, n, j).unwrap().value >= truth);
        }
    }

    #[test]
    fn dary_closed_form_matches_oracle(d in 2u64..=4, k in 1u32..=3, n in 0i64..150) {
        let md = Modulus::new(d).unwrap();
        let a = PartSeq::powers(d, k).unwrap();
        prop_assert_eq!(dary_closed(md, k, n).unwrap(), congruent_count(&a, md, n));
    }

    #[test]
    fn cohomology_totals_agree(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 0i64..100) {
        let p = CharPrime::new(p).unwrap();
        let enumerated = h_total(p, n, Method::Enumeration).unwrap();
        prop_assert_eq!(h_total(p, n, Method::ClosedForm).unwrap(), enumerated.clone());
        prop_assert_eq!(stable_profile(p, n, Method::Enumeration).unwrap().total(), enumerated);
    }
}

#[test]
fn sweep_is_independent_of_threads() {
    let base = SweepConfig {
        n_max: 20,
        identities: vec![
            IdentityId::CongruentClosed,
            IdentityId::CountedCongruentClosed,
            IdentityId::CohomologyDegree,
        ],
        ..SweepConfig::default()
    };
    let single = sweep(&base).unwrap();
    let parallel = sweep(&SweepConfig {
        threads: 4,
        ..base.clone()
    })
    .unwrap();
    assert_eq!(single.records, parallel.records);
    assert_eq!(single.totals, parallel.totals);
    assert_eq!(single.per_identity, parallel.per_identity);
    let strip = |text: String| {
        text.lines()
            .filter(|l| !l.starts_with("config") && !l.starts_with("duration_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(single.to_text()), strip(parallel.to_text()));
    assert_eq!(
        single.totals.cases,
        single.totals.matches + single.records.len()
    );
}

#[test]
fn report_json_round_trips_values() {
    let config = SweepConfig {
        n_max: 8,
        identities: vec![IdentityId::CountedClosed],
        ..SweepConfig::default()
    };
    let report = sweep(&config).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), report.records.len());
    for (wire, r) in records.iter().zip(&report.records) {
        let formula: ExactRat = wire["formula"].as_str().unwrap().parse().unwrap();
        let oracle: ExactRat = wire["oracle"].as_str().unwrap().parse().unwrap();
        assert_eq!(formula, r.formula);
        assert_eq!(oracle, r.oracle);
        assert_eq!(wire["identity"], "counted-closed");
    }
    assert_eq!(json["totals"]["cases"], report.totals.cases);
    let raw = report.to_json();
    let tail = raw.rsplit_once(",\"duration_ms\":").unwrap().1;
    assert!(tail
        .trim_end_matches('}')
        .chars()
        .all(|c| c.is_ascii_digit()));
}
