//! The 5r-covering lemma for equal-scale Bowen balls and its weighted
//! iteration.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift_space::{Cylinder, Epsilon, MetricSpec};

/// The cylinder of `ball` on the 5ε window `E_{max(1, m(ε)−2)}·F`.
pub fn enlargement(ball: &Cylinder, f: &FiniteSubset, epsilon: Epsilon, metric: &MetricSpec) -> Result<Cylinder> {
    let w = metric.window_at_depth(f, metric.enlarged_depth(epsilon)?);
    Ok(Cylinder::new(ball.pattern().restrict(&w)?))
}

fn check_scale(balls: &[Cylinder], f: &FiniteSubset, epsilon: Epsilon, metric: &MetricSpec) -> Result<FiniteSubset> {
    let w = metric.bowen_window(f, epsilon)?;
    if let Some(b) = balls.iter().find(|b| b.window() != &w) {
        return Err(Error::InvalidArgument(format!(
            "ball on {:?} is not at the common scale {:?}",
            b.window(),
            w
        )));
    }
    Ok(metric.window_at_depth(f, metric.enlarged_depth(epsilon)?))
}

fn disjointify(balls: &[Cylinder], members: impl Iterator<Item = usize>, big: &FiniteSubset) -> Result<Vec<usize>> {
    let mut taken: HashSet<Vec<u8>> = HashSet::new();
    let mut out = Vec::new();
    for i in members {
        let key = balls[i].pattern().restrict(big)?.symbols().to_vec();
        if taken.insert(key) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Greedy in input order: keep a ball unless it lies in the enlargement of
/// one already kept. Kept balls differ on the enlarged window, hence are
/// disjoint; every input ball lies in some kept ball's enlargement.
pub fn five_r_disjointify(
    balls: &[Cylinder],
    f: &FiniteSubset,
    epsilon: Epsilon,
    metric: &MetricSpec,
) -> Result<Vec<usize>> {
    let big = check_scale(balls, f, epsilon, metric)?;
    disjointify(balls, 0..balls.len(), &big)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedSubfamilies {
    /// `B_1, …, B_t` as indices into the input.
    pub families: Vec<Vec<usize>>,
    /// Index (0-based) of the smallest family.
    pub j0: usize,
}

/// Subfamilies `B_1 … B_t`: `B_j` disjointifies the balls whose residual
/// weight `v_{j−1}` is still positive, and `v_j` drops by one on `B_j`.
pub fn weighted_disjoint_subfamilies(
    balls: &[Cylinder],
    weights: &[u64],
    t: u64,
    f: &FiniteSubset,
    epsilon: Epsilon,
    metric: &MetricSpec,
) -> Result<WeightedSubfamilies> {
    if weights.len() != balls.len() {
        return Err(Error::DimensionMismatch {
            expected: balls.len(),
            got: weights.len(),
        });
    }
    if t == 0 || weights.contains(&0) {
        return Err(Error::InvalidArgument(
            "weights and threshold must be positive integers".into(),
        ));
    }
    let big = check_scale(balls, f, epsilon, metric)?;
    let mut v = weights.to_vec();
    let mut families = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let live = (0..balls.len()).filter(|&i| v[i] > 0);
        let fam = disjointify(balls, live, &big)?;
        for &i in &fam {
            v[i] -= 1;
        }
        families.push(fam);
    }
    let j0 = (0..families.len()).min_by_key(|&j| families[j].len()).expect("t ≥ 1");
    Ok(WeightedSubfamilies { families, j0 })
}
