mod args;
mod config;
mod render;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::Parser;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use rpart::closed_forms::{
    congruent_by_decomposition, congruent_closed, counted_congruent_closed, polynomial_part,
    CongruentFormula,
};
use rpart::cohomology::{format_polynomial, h_total, log_floor, stable_profile, CharPrime, Method};
use rpart::oracle::{congruent_count, series_coeffs, weighted_profile};
use rpart::verifier::format_rat;
use rpart::verifier::{
    check_identity, sweep, CaseParams, CheckOutcome, Classification, SweepConfig,
};
use rpart::{Error, ExactInt, Modulus, PartSeq};

use args::{
    Cli, CohomMethod, CohomMode, CohomologyArgs, Command, CountArgs, CountMethod, Format,
    PolypartArgs, SeriesArgs, VerifyArgs, WeightedArgs, WeightedMethod,
};
use render::{Field, Output};

/// Largest target the table-based oracles will allocate for.
const ORACLE_LIMIT: i64 = 10_000_000;

/// A failed invocation and its exit status.
#[derive(Debug)]
enum Failure {
    /// Invalid input: exit 2.
    Usage(String),
    /// Count methods disagree: exit 3, after printing the values.
    Disagree(Output),
    /// Any other status, with an optional message.
    Status(u8, Option<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inexact { .. } => Failure::Status(1, Some(e.to_string())),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(a) => count(a),
        Command::Polypart(a) => polypart(a),
        Command::Weighted(a) => weighted(a),
        Command::Cohomology(a) => cohomology(a),
        Command::Verify(a) => return verify(a, cli.format),
        Command::Series(a) => series(a),
    };
    match result {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Disagree(out)) => {
            print!("{}", out.render(cli.format));
            fail(Failure::Status(3, Some("count methods disagree".into())))
        }
        Err(failure) => fail(failure),
    }
}

fn fail(failure: Failure) -> ExitCode {
    let (code, msg) = match failure {
        Failure::Usage(m) => (2, Some(m)),
        Failure::Disagree(_) => (3, None),
        Failure::Status(code, m) => (code, m),
    };
    if let Some(m) = msg {
        eprintln!("rpart: {m}");
    }
    ExitCode::from(code)
}

fn target(n: &BigInt) -> Result<i64, Failure> {
    n.to_i64()
        .ok_or_else(|| Failure::Usage(format!("n = {n} is out of range")))
}

fn nonnegative(n: &BigInt) -> Result<i64, Failure> {
    let v = target(n)?;
    if v < 0 {
        return Err(Failure::Usage(format!("n must be nonnegative, got {v}")));
    }
    Ok(v)
}

fn oracle_target(n: i64) -> Result<i64, Failure> {
    if n > ORACLE_LIMIT {
        return Err(Failure::Usage(format!(
            "the oracle tabulates every value up to n; n <= {ORACLE_LIMIT} required"
        )));
    }
    Ok(n)
}

fn canonical(parts: &[u64]) -> Result<PartSeq, Failure> {
    Ok(PartSeq::new(parts.to_vec())?.sorted())
}

fn strictly_increasing(parts: &[u64]) -> Result<PartSeq, Failure> {
    let a = PartSeq::new(parts.to_vec())?;
    if !a.is_strictly_increasing() {
        return Err(Failure::Usage(format!(
            "weighted counts need strictly increasing parts a_1 < ... < a_r, got {a}"
        )));
    }
    Ok(a)
}

fn count(args: CountArgs) -> Outcome {
    let a = canonical(&args.parts)?;
    let d = Modulus::new(args.d)?;
    let n = nonnegative(&args.n)?;
    let wanted = |m: CountMethod| args.method == m || args.method == CountMethod::All;
    let mut values: Vec<(&str, ExactInt)> = Vec::new();
    if wanted(CountMethod::Oracle) {
        values.push(("oracle", congruent_count(&a, d, oracle_target(n)?)));
    }
    if wanted(CountMethod::Closed) {
        values.push(("closed", congruent_closed(&a, d, n)?));
    }
    if wanted(CountMethod::Decomposition) {
        values.push(("decomposition", congruent_by_decomposition(&a, d, n)?));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    let mut out = Output::new("count")
        .field("parts", Field::Parts(a.parts().to_vec()))
        .field("d", Field::Small(d.get()))
        .field("n", Field::Big(n.to_string()));
    out = out.field(
        "values",
        Field::Map(
            values
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        ),
    );
    if args.method == CountMethod::All {
        out = out.field(
            "verdict",
            Field::Text(if agree { "agree" } else { "disagree" }.into()),
        );
    }
    if !agree {
        return Err(Failure::Disagree(out));
    }
    Ok(out)
}

fn polypart(args: PolypartArgs) -> Outcome {
    let a = canonical(&args.parts)?;
    let n = target(&args.n)?;
    if args.plain {
        let value = polynomial_part(&a, n)?;
        return Ok(Output::new("polypart")
            .field("parts", Field::Parts(a.parts().to_vec()))
            .field("n", Field::Big(n.to_string()))
            .field("plain", Field::Flag(true))
            .field("value", Field::Big(format_rat(&value))));
    }
    let d = Modulus::new(args.d.expect("clap requires --d without --plain"))?;
    let formula = CongruentFormula::new(&a, d)?;
    let mut out = Output::new("polypart")
        .field("parts", Field::Parts(a.parts().to_vec()))
        .field("d", Field::Small(d.get()))
        .field("n", Field::Big(n.to_string()))
        .field("value", Field::Big(format_rat(&formula.polynomial_part(n))));
    if args.unreduced {
        let (num, den) = formula.polynomial_part_unreduced(n);
        out = out.field("unreduced", Field::Big(format!("{num}/{den}")));
    }
    Ok(out)
}

fn weighted(args: WeightedArgs) -> Outcome {
    let a = strictly_increasing(&args.parts)?;
    let d = Modulus::new(args.d)?;
    let n = nonnegative(&args.n)?;
    let weights: Vec<u64> = match args.j {
        Some(j) => vec![j],
        None => (0..=n as u64).collect(),
    };
    let keep = |v: &ExactInt| args.j.is_some() || !v.is_zero();
    let mut out = Output::new("weighted")
        .field("parts", Field::Parts(a.parts().to_vec()))
        .field("d", Field::Small(d.get()))
        .field("n", Field::Big(n.to_string()));
    if args.method != WeightedMethod::Closed {
        let profile = weighted_profile(&a, d, oracle_target(n)?);
        let map: BTreeMap<u64, String> = weights
            .iter()
            .map(|j| (*j, profile.get(j).cloned().unwrap_or_default()))
            .filter(|(_, v)| keep(v))
            .map(|(j, v)| (j, v.to_string()))
            .collect();
        out = out.field("oracle", Field::Profile(map));
    }
    if args.method != WeightedMethod::Oracle {
        let mut map = BTreeMap::new();
        let mut note = None;
        for &j in &weights {
            let r = counted_congruent_closed(&a, d, n, j)?;
            note = note.or(r.note);
            let v = r.value.to_integer();
            if keep(&v) {
                map.insert(j, v.to_string());
            }
        }
        out = out.field("closed", Field::Profile(map));
        if let Some(note) = note {
            out = out.field("note", Field::Text(note.into()));
        }
    }
    Ok(out)
}

fn cohomology(args: CohomologyArgs) -> Outcome {
    let p = CharPrime::new(args.p)?;
    let n = nonnegative(&args.n)?;
    let method = match args.method {
        CohomMethod::Enumeration => Method::Enumeration,
        CohomMethod::Closed => Method::ClosedForm,
    };
    let mode = match args.mode {
        CohomMode::Profile => "profile",
        CohomMode::Total => "total",
        CohomMode::Poincare => "poincare",
    };
    let method_name = match args.method {
        CohomMethod::Enumeration => "enumeration",
        CohomMethod::Closed => "closed",
    };
    let mut out = Output::new("cohomology")
        .field("p", Field::Small(p.get()))
        .field("n", Field::Big(n.to_string()))
        .field("k", Field::Small(u64::from(log_floor(p, n as u64))))
        .field("mode", Field::Text(mode.into()))
        .field("method", Field::Text(method_name.into()));
    if args.mode == CohomMode::Total {
        let total = h_total(p, n, method)?;
        return Ok(out.field("total", Field::Big(total.to_string())));
    }
    let profile = stable_profile(p, n, method)?;
    out = match args.mode {
        CohomMode::Profile => out.field(
            "profile",
            Field::Profile(profile.h.iter().map(|(j, v)| (*j, v.to_string())).collect()),
        ),
        _ => {
            let coeffs = profile.dense();
            out.field("polynomial", Field::Text(format_polynomial(&coeffs, "t")))
                .field(
                    "coefficients",
                    Field::List(coeffs.iter().map(ToString::to_string).collect()),
                )
        }
    };
    if let Some(note) = profile.note {
        out = out
            .field("exactness", Field::Text(profile.exactness.as_str().into()))
            .field("note", Field::Text(note.into()));
    }
    Ok(out)
}

fn series(args: SeriesArgs) -> Outcome {
    let a = canonical(&args.parts)?;
    let d = Modulus::new(args.d)?;
    let order = nonnegative(&args.order)?;
    let order = oracle_target(order)? as usize;
    let coeffs = series_coeffs(&a, d, order).coeffs;
    Ok(Output::new("series")
        .field("parts", Field::Parts(a.parts().to_vec()))
        .field("d", Field::Small(d.get()))
        .field("N", Field::Small(order as u64))
        .field(
            "coefficients",
            Field::List(coeffs.iter().map(ToString::to_string).collect()),
        ))
}

fn verify(args: VerifyArgs, format: Format) -> ExitCode {
    let result = match &args.case {
        Some(name) => verify_case(name, &args),
        None => verify_grid(&args, format),
    };
    match result {
        Ok((out, code)) => {
            if let Some(out) = out {
                print!("{}", out.render(format));
            }
            ExitCode::from(code)
        }
        Err(failure) => fail(failure),
    }
}

fn verify_case(name: &str, args: &VerifyArgs) -> Result<(Option<Output>, u8), Failure> {
    let n = args
        .n
        .as_ref()
        .ok_or_else(|| Failure::Usage("a single case needs --n".into()))?;
    let params = CaseParams {
        parts: args.parts.clone(),
        d: args.d,
        d2: args.d2,
        p: args.p,
        k: args.k,
        n: target(n)?,
        j: args.j,
    };
    let outcome = check_identity(name, &params).map_err(|e| match e {
        Error::Inexact { .. } => Failure::Status(5, Some(e.to_string())),
        e => Failure::from(e),
    })?;
    let id: rpart::verifier::IdentityId = name.parse()?;
    let out = Output::new("verify")
        .field("identity", Field::Text(id.name().into()))
        .field("params", Field::Text(params.to_string()));
    Ok(match outcome {
        CheckOutcome::Match => (Some(out.field("result", Field::Text("match".into()))), 0),
        CheckOutcome::Discrepancy(r) => {
            let code = match (id.is_certified(), r.classification) {
                (true, _) => 5,
                (false, Classification::Novel) => 4,
                (false, Classification::Known) => 0,
            };
            let out = out
                .field("result", Field::Text("discrepancy".into()))
                .field("formula", Field::Big(format_rat(&r.formula)))
                .field("oracle", Field::Big(format_rat(&r.oracle)))
                .field(
                    "classification",
                    Field::Text(r.classification.as_str().into()),
                )
                .field("note", Field::Text(r.note.into()));
            (Some(out), code)
        }
    })
}

fn grid_config(args: &VerifyArgs) -> Result<SweepConfig, Failure> {
    let mut c = SweepConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        config::apply(&mut c, &text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(names) = &args.identities {
        c.identities = config::identities(names).map_err(Failure::Usage)?;
    }
    macro_rules! overlay {
        ($($field:ident),*) => {$(
            if let Some(v) = &args.$field {
                c.$field = v.clone();
            }
        )*};
    }
    overlay!(r_min, r_max, max_part, d_values, n_min, n_max, k_values, primes, threads);
    if args.allow_repeats {
        c.strict = false;
    }
    if args.j_max.is_some() {
        c.j_max = args.j_max;
    }
    if let Some(path) = &args.output {
        c.output = Some(path.display().to_string());
    }
    c.validate()?;
    Ok(c)
}

fn verify_grid(args: &VerifyArgs, format: Format) -> Result<(Option<Output>, u8), Failure> {
    let config = grid_config(args)?;
    let report = sweep(&config).map_err(|e| match e {
        Error::Inexact { .. } => Failure::Status(5, Some(e.to_string())),
        e => Failure::from(e),
    })?;
    let text = match format {
        Format::Table => report.to_text(),
        Format::Record => report.to_json() + "\n",
        Format::Csv => render::report_csv(&report),
    };
    let code = report.verdict().exit_code() as u8;
    match &config.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Status(1, Some(format!("{path}: {e}"))))?,
        None => print!("{text}"),
    }
    Ok((None, code))
}
