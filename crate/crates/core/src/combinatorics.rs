//! Counting behind the local-entropy lower bound: partition names along a
//! Følner set, Hamming distance between names, Hamming-ball sizes `L_n`,
//! and the Stirling-type constant `K` with `L_n ≤ exp(K ε |F_n|)`.

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{Enumeration, FiniteSubset};
use crate::numeric::ln_biguint;
use crate::shift_space::{act, Pattern};

/// The `(ξ, F)`-name: partition cells visited along `F`, listed in
/// enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NameVector(pub Vec<u32>);

impl NameVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Cell of `g·x` in the partition by patterns on `E_{depth+1}`, encoded in
/// base `k` along the enumeration.
pub fn cell_at(
    x: &Pattern,
    g: &crate::group::GroupElement,
    base: &[crate::group::GroupElement],
    k: usize,
    enumeration: &Enumeration,
) -> Result<u32> {
    let group = enumeration.group();
    let mut code = 0u64;
    for h in base {
        let hg = group.mul(h, g);
        let s = x
            .get(&hg)
            .ok_or_else(|| Error::InsufficientWindow(format!("name needs x at {hg}")))?;
        code = code * k as u64 + s as u64;
    }
    u32::try_from(code).map_err(|_| Error::InvalidArgument("partition too fine".into()))
}

pub fn name_of(x: &Pattern, f: &FiniteSubset, depth: usize, k: usize, enumeration: &Enumeration) -> Result<NameVector> {
    let base = enumeration.prefix(depth + 1);
    let order = enumeration.order(f.as_slice())?;
    let cells = order
        .iter()
        .map(|g| cell_at(x, g, &base, k, enumeration))
        .collect::<Result<_>>()?;
    Ok(NameVector(cells))
}

/// Name of `h·x` along `F`, computed through the action (used to check
/// `name(h·x, F) = name(x, F·h)` entrywise).
pub fn name_of_translate(
    x: &Pattern,
    h: &crate::group::GroupElement,
    f: &FiniteSubset,
    depth: usize,
    k: usize,
    enumeration: &Enumeration,
) -> Result<NameVector> {
    let group = enumeration.group();
    let base = enumeration.prefix(depth + 1);
    let needed: Vec<_> = f
        .iter()
        .flat_map(|g| base.iter().map(move |b| group.mul(b, g)))
        .collect();
    let shifted = act(group, h, x, &FiniteSubset::from_vec(needed))?;
    name_of(&shifted, f, depth, k, enumeration)
}

pub fn hamming_distance(a: &NameVector, b: &NameVector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

pub fn normalized_hamming(a: &NameVector, b: &NameVector) -> Result<Ratio<u64>> {
    let d = hamming_distance(a, b)?;
    Ok(Ratio::new(d as u64, a.len().max(1) as u64))
}

/// `L_n = Σ_{j=0}^{⌊ε₁ n⌋} C(n, j) (cells − 1)^j`.
pub fn hamming_ball_count(n: usize, eps1: Ratio<u64>, cells: usize) -> BigUint {
    let top = (eps1 * Ratio::from_integer(n as u64)).to_integer() as usize;
    let top = top.min(n);
    let base = BigUint::from(cells.saturating_sub(1));
    let nn = BigUint::from(n);
    let mut total = BigUint::zero();
    let mut power = BigUint::one();
    for j in 0..=top {
        total += binomial(nn.clone(), BigUint::from(j)) * &power;
        power *= &base;
    }
    total
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// `K = (1/ε)(ε₁ + ε₁ ln(#ξ−1) − ε₁ ln ε₁ − (1−ε₁) ln(1−ε₁)) + 2`.
pub fn stirling_k(epsilon: Ratio<u64>, eps1: Ratio<u64>, cells: usize) -> Result<f64> {
    let e = ratio_f64(epsilon);
    let e1 = ratio_f64(eps1);
    if e.is_nan() || e <= 0.0 || e1.is_nan() || e1 <= 0.0 || e1 >= 1.0 || cells < 2 {
        return Err(Error::InvalidArgument(format!(
            "stirling K needs ε > 0, 0 < ε₁ < 1, #ξ ≥ 2 (got {e}, {e1}, {cells})"
        )));
    }
    // ε₁·ln(#ξ−1) vanishes for two cells
    let cells_term = if cells == 2 {
        0.0
    } else {
        e1 * ((cells - 1) as f64).ln()
    };
    let inner = e1 + cells_term - e1 * e1.ln() - (1.0 - e1) * (1.0 - e1).ln();
    Ok(inner / e + 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct LnBoundRow {
    pub n: usize,
    pub l_n: String,
    pub ln_l_n: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LnBoundReport {
    pub k: f64,
    pub holds: bool,
    pub first_violation: Option<usize>,
    /// `n` where the float comparison was too close to certify either way.
    pub undecided: Vec<usize>,
    pub rows: Vec<LnBoundRow>,
}

/// Checks `L_n ≤ exp(K ε n)` for `1 ≤ n ≤ n_max` with the given `K`.
///
/// `L_n` is exact; `ln L_n` and `K ε n` are compared with a relative
/// margin of `1e-9`, and comparisons inside the margin are reported as
/// undecided (and count as failures).
pub fn verify_ln_bound_with(
    n_max: usize,
    epsilon: Ratio<u64>,
    eps1: Ratio<u64>,
    cells: usize,
    k: f64,
    exec: Execution,
) -> LnBoundReport {
    let e = ratio_f64(epsilon);
    let rows: Vec<LnBoundRow> = exec.map_range(1..n_max + 1, |n| {
        let l = hamming_ball_count(n, eps1, cells);
        let ln_l = ln_biguint(&l);
        let bound = k * e * n as f64;
        LnBoundRow {
            n,
            l_n: l.to_string(),
            ln_l_n: ln_l,
            bound,
            slack: bound - ln_l,
        }
    });
    let mut first_violation = None;
    let mut undecided = Vec::new();
    for r in &rows {
        let margin = 1e-9 * (1.0 + r.bound.abs());
        if r.slack < -margin {
            first_violation.get_or_insert(r.n);
        } else if r.slack <= margin {
            undecided.push(r.n);
        }
    }
    LnBoundReport {
        k,
        holds: first_violation.is_none() && undecided.is_empty(),
        first_violation,
        undecided,
        rows,
    }
}

pub fn verify_ln_bound(
    n_max: usize,
    epsilon: Ratio<u64>,
    eps1: Ratio<u64>,
    cells: usize,
    exec: Execution,
) -> Result<LnBoundReport> {
    let k = stirling_k(epsilon, eps1, cells)?;
    Ok(verify_ln_bound_with(n_max, epsilon, eps1, cells, k, exec))
}
