//! Topological entropy of symbolic systems by counting the refined clopen
//! partition `U_{F_n}`, with a separated-set cross-check.

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{FiniteSubset, FolnerSequence};
use crate::numeric::ln_biguint;
use crate::shift_space::{act, Epsilon, MetricSpec, ShiftSpace};

/// The partition of `X` by patterns on the first `depth + 1` enumerated
/// elements; depth 0 is the alphabet partition `{[a] : a ∈ A}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OpenCoverSpec {
    pub depth: usize,
}

impl OpenCoverSpec {
    pub fn alphabet() -> Self {
        OpenCoverSpec { depth: 0 }
    }

    pub fn refined(depth: usize) -> Self {
        OpenCoverSpec { depth }
    }

    /// Number of enumerated elements the partition reads.
    pub fn base_len(&self) -> usize {
        self.depth + 1
    }

    /// The window `E_{r+1}·F` on which elements of `U_F` are cylinders.
    pub fn window(&self, metric: &MetricSpec, f: &FiniteSubset) -> FiniteSubset {
        metric.window_at_depth(f, self.base_len())
    }
}

/// `N(U_F)`: the number of nonempty elements of the refined partition.
pub fn cover_count(s: &ShiftSpace, cover: OpenCoverSpec, f: &FiniteSubset) -> Result<BigUint> {
    let metric = MetricSpec::new(s.group().clone());
    s.count_admissible(&cover.window(&metric, f))
}

#[derive(Clone, Debug, Serialize)]
pub struct HtopRow {
    pub n: usize,
    pub size: usize,
    pub count: String,
    pub estimate: f64,
}

/// `ln N(U_{F_n}) / |F_n|` for each `n`.
pub fn htop_profile(
    s: &ShiftSpace,
    cover: OpenCoverSpec,
    seq: &FolnerSequence,
    ns: &[usize],
    exec: Execution,
) -> Result<Vec<HtopRow>> {
    exec.map(ns, |&n| {
        let f = seq.set(n)?;
        let count = cover_count(s, cover, &f)?;
        Ok(HtopRow {
            n,
            size: f.len(),
            estimate: ln_biguint(&count) / f.len() as f64,
            count: count.to_string(),
        })
    })
    .into_iter()
    .collect()
}

const SEPARATED_GUARD: usize = 1 << 12;

/// Greedy maximal `ε`-separated set under `d_F(x,y) = max_{g∈F} d(gx, gy)`,
/// computed from the metric itself rather than from window equality.
pub fn separated_set_size(s: &ShiftSpace, f: &FiniteSubset, epsilon: Epsilon, metric: &MetricSpec) -> Result<usize> {
    let m = metric.depth(epsilon)?;
    let window = metric.bowen_window(f, epsilon)?;
    let points = s.admissible_patterns(&window)?;
    if points.len() > SEPARATED_GUARD {
        return Err(Error::BudgetExceeded {
            what: "separated-set search",
            needed: points.len() as u128,
            limit: SEPARATED_GUARD as u128,
        });
    }
    let base = FiniteSubset::from_vec(metric.enumeration().prefix(m));
    let eps_r = Ratio::new(*epsilon.numer(), *epsilon.denom());
    // orbit views (g·x)|_{E_m} for g ∈ F
    let views: Vec<Vec<_>> = points
        .iter()
        .map(|x| {
            f.iter()
                .map(|g| act(s.group(), g, x, &base))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut chosen: Vec<usize> = Vec::new();
    for (i, vi) in views.iter().enumerate() {
        let mut separated = true;
        for &j in &chosen {
            let mut far = false;
            for (a, b) in vi.iter().zip(&views[j]) {
                if let Some(d) = metric.distance(a, b, m)? {
                    if d >= eps_r {
                        far = true;
                        break;
                    }
                }
            }
            if !far {
                separated = false;
                break;
            }
        }
        if separated {
            chosen.push(i);
        }
    }
    Ok(chosen.len())
}
