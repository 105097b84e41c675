//! Ground-truth counts by dynamic programming and direct enumeration.
//!
//! Nothing in here evaluates a closed formula. Every count is either a
//! multiplicity DP over admissible `x_i`, a truncated power-series product,
//! or a depth-first walk over solution vectors. The closed forms and the
//! cohomology layer are checked against these.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::types::{ExactInt, Modulus, PartSeq, SeriesPrefix, SolutionVec};

/// Map from weight `j` to the number of solutions with that weight. Absent
/// keys are zero.
pub type WeightProfile = BTreeMap<u64, ExactInt>;

fn target(n: i64) -> Option<usize> {
    usize::try_from(n).ok()
}

/// `p_a(m)` for every `0 <= m <= max_n`, by the coin-change recurrence on
/// `1 / prod (1 - z^{a_i})`.
pub fn denumerant_table(a: &PartSeq, max_n: usize) -> Vec<ExactInt> {
    let mut table = vec![ExactInt::zero(); max_n + 1];
    table[0] = ExactInt::one();
    for &part in a.parts() {
        let part = part as usize;
        for m in part..=max_n {
            let prev = table[m - part].clone();
            table[m] += prev;
        }
    }
    table
}

/// Number of nonnegative solutions of `sum a_i x_i = n`; zero for `n < 0`.
pub fn denumerant(a: &PartSeq, n: i64) -> ExactInt {
    match target(n) {
        Some(n) => denumerant_table(a, n).swap_remove(n),
        None => ExactInt::zero(),
    }
}

/// Admissible multiplicities `0, 1, d, d+1, 2d, 2d+1, ...` with `x * part <= bound`.
fn admissible(d: Modulus, part: u64, bound: u64) -> impl Iterator<Item = u64> {
    let d = d.get();
    (0..)
        .flat_map(move |q| [d * q, d * q + 1])
        .take_while(move |&x| x * part <= bound)
}

/// `p_{a,d}(m)` for every `0 <= m <= max_n`: for each part, convolve with the
/// indicator of admissible multiplicities.
pub fn congruent_table(a: &PartSeq, d: Modulus, max_n: usize) -> Vec<ExactInt> {
    let mut table = vec![ExactInt::zero(); max_n + 1];
    table[0] = ExactInt::one();
    for &part in a.parts() {
        let mut next = vec![ExactInt::zero(); max_n + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            for x in admissible(d, part, m as u64) {
                *slot += &table[m - (x * part) as usize];
            }
        }
        table = next;
    }
    table
}

/// Number of solutions of `sum a_i x_i = n` with every `x_i = 0, 1 (mod d)`.
pub fn congruent_count(a: &PartSeq, d: Modulus, n: i64) -> ExactInt {
    match target(n) {
        Some(n) => congruent_table(a, d, n).swap_remove(n),
        None => ExactInt::zero(),
    }
}

/// Weighted refinement of [`congruent_table`]: entry `m` maps each weight
/// `j = sum (x_i - (d-2) floor(x_i/d))` to the number of solutions of weight `j`.
pub fn weighted_table(a: &PartSeq, d: Modulus, max_n: usize) -> Vec<WeightProfile> {
    // dense[m][j]; a solution of target m has weight at most m / min part.
    let mut dense: Vec<Vec<ExactInt>> = vec![Vec::new(); max_n + 1];
    dense[0] = vec![ExactInt::one()];
    for &part in a.parts() {
        let mut next: Vec<Vec<ExactInt>> = vec![Vec::new(); max_n + 1];
        for (m, row) in next.iter_mut().enumerate() {
            for x in admissible(d, part, m as u64) {
                let src = &dense[m - (x * part) as usize];
                let shift = d.weight(x) as usize;
                if src.is_empty() {
                    continue;
                }
                if row.len() < src.len() + shift {
                    row.resize(src.len() + shift, ExactInt::zero());
                }
                for (w, c) in src.iter().enumerate() {
                    if !c.is_zero() {
                        row[w + shift] += c;
                    }
                }
            }
        }
        dense = next;
    }
    dense
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as u64, c))
                .collect()
        })
        .collect()
}

/// `j -> p_{a,d}(n; j)`. Empty for `n < 0`.
pub fn weighted_profile(a: &PartSeq, d: Modulus, n: i64) -> WeightProfile {
    match target(n) {
        Some(n) => weighted_table(a, d, n).swap_remove(n),
        None => WeightProfile::new(),
    }
}

/// Calls `visit` on every solution of `sum a_i x_i = n` with admissible
/// multiplicities, in lexicographic order of `x`.
pub fn for_each_solution<F: FnMut(&[u64])>(a: &PartSeq, d: Modulus, n: u64, mut visit: F) {
    fn walk<F: FnMut(&[u64])>(
        parts: &[u64],
        d: Modulus,
        remaining: u64,
        current: &mut Vec<u64>,
        visit: &mut F,
    ) {
        let i = current.len();
        if i + 1 == parts.len() {
            let part = parts[i];
            if remaining.is_multiple_of(part) && d.admits(remaining / part) {
                current.push(remaining / part);
                visit(current);
                current.pop();
            }
            return;
        }
        for x in admissible(d, parts[i], remaining) {
            current.push(x);
            walk(parts, d, remaining - x * parts[i], current, visit);
            current.pop();
        }
    }
    let mut current = Vec::with_capacity(a.len());
    walk(a.parts(), d, n, &mut current, &mut visit);
}

/// Every solution counted by [`congruent_count`], lexicographically ordered.
pub fn enumerate_solutions(a: &PartSeq, d: Modulus, n: i64) -> Result<Vec<SolutionVec>> {
    let n = u64::try_from(n)
        .map_err(|_| Error::Domain(format!("cannot list solutions for negative target {n}")))?;
    let mut out = Vec::new();
    for_each_solution(a, d, n, |x| out.push(SolutionVec(x.to_vec())));
    Ok(out)
}

/// Coefficients of `prod (1 + z^{a_i}) / prod (1 - z^{d a_i})` through `z^max_n`.
///
/// The numerator is expanded as a polynomial product, then each denominator
/// factor is divided out as a running geometric-series convolution.
pub fn series_coeffs(a: &PartSeq, d: Modulus, max_n: usize) -> SeriesPrefix {
    let mut coeffs = vec![ExactInt::zero(); max_n + 1];
    coeffs[0] = ExactInt::one();
    for &part in a.parts() {
        let part = part as usize;
        // multiply by (1 + z^part), high to low so each term is used once
        for m in (part..=max_n).rev() {
            let prev = coeffs[m - part].clone();
            coeffs[m] += prev;
        }
    }
    for &part in a.parts() {
        let step = (part * d.get()) as usize;
        for m in step..=max_n {
            let prev = coeffs[m - step].clone();
            coeffs[m] += prev;
        }
    }
    SeriesPrefix { coeffs }
}
