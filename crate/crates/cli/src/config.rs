//! Key=value sweep configuration files.
//!
//! ```text
//! # comments and blank lines are ignored
//! identities = congruent-closed, series
//! r_min = 2
//! d_values = 2,3,4
//! strict = true
//! ```

use std::str::FromStr;

use rpart::verifier::{IdentityId, SweepConfig};

use crate::args::{parse_i64, parse_u32, parse_u64, parse_usize};

fn list<T>(value: &str, item: fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

pub fn identities(names: &[String]) -> Result<Vec<IdentityId>, String> {
    let mut ids = Vec::new();
    for name in names {
        let id = IdentityId::from_str(name.trim()).map_err(|e| e.to_string())?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Applies every `key = value` line of `text` on top of `config`.
pub fn apply(config: &mut SweepConfig, text: &str) -> Result<(), String> {
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("line {}: {msg}", index + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected key = value, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "identities" => {
                let names: Vec<String> = value.split(',').map(str::to_string).collect();
                config.identities = identities(&names).map_err(at)?;
            }
            "r_min" => config.r_min = parse_usize(value).map_err(at)?,
            "r_max" => config.r_max = parse_usize(value).map_err(at)?,
            "max_part" => config.max_part = parse_u64(value).map_err(at)?,
            "strict" => {
                config.strict = value
                    .parse()
                    .map_err(|_| at(format!("`{value}` is not true or false")))?
            }
            "d_values" => config.d_values = list(value, parse_u64).map_err(at)?,
            "n_min" => config.n_min = parse_i64(value).map_err(at)?,
            "n_max" => config.n_max = parse_i64(value).map_err(at)?,
            "j_max" => config.j_max = Some(parse_u64(value).map_err(at)?),
            "k_values" => config.k_values = list(value, parse_u32).map_err(at)?,
            "primes" => config.primes = list(value, parse_u64).map_err(at)?,
            "threads" => config.threads = parse_usize(value).map_err(at)?,
            "output" => config.output = Some(value.to_string()),
            _ => return Err(at(format!("unknown key `{key}`"))),
        }
    }
    Ok(())
}
