//! Exact rational simplex for the packing LP
//! `max f·y  s.t.  Σ_{a∈B} y_a ≤ w_B,  y ≥ 0`
//! and its covering dual `min w·c  s.t.  Σ_{B∋a} c_B ≥ f_a,  c ≥ 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rows are balls (capacity `w_B`, listing their atom columns); columns are
/// atoms with profit `f_a`.
#[derive(Clone, Debug)]
pub(crate) struct PackingLp {
    pub rows: Vec<Vec<usize>>,
    pub capacity: Vec<BigRational>,
    pub profit: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub(crate) struct LpSolution {
    pub value: BigRational,
    /// Optimal `y`, one entry per column.
    pub packing: Vec<BigRational>,
    /// Optimal `c`, one entry per row.
    pub covering: Vec<BigRational>,
}

/// `None` when a column with positive profit meets no row (unbounded
/// packing, infeasible covering).
pub(crate) fn solve(lp: &PackingLp) -> Option<LpSolution> {
    let m = lp.rows.len();
    let n = lp.profit.len();
    let width = n + m;
    let mut t = vec![vec![BigRational::zero(); width]; m];
    for (i, row) in lp.rows.iter().enumerate() {
        for &j in row {
            t[i][j] = BigRational::from_integer(1.into());
        }
        t[i][n + i] = BigRational::from_integer(1.into());
    }
    let mut rhs = lp.capacity.clone();
    let mut obj: Vec<BigRational> = lp.profit.iter().map(|f| -f).collect();
    obj.resize(width, BigRational::zero());
    let mut z = BigRational::zero();
    let mut basis: Vec<usize> = (n..width).collect();

    // Bland's rule: lowest entering index, lowest basic index on ratio ties
    while let Some(j) = obj.iter().position(|c| c.is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &rhs[i] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (p, _) = leave?;
        let piv = t[p][j].clone();
        let nz: Vec<usize> = (0..width).filter(|&k| !t[p][k].is_zero()).collect();
        for &k in &nz {
            t[p][k] = &t[p][k] / &piv;
        }
        rhs[p] = &rhs[p] / &piv;
        let (pivot_row, pivot_rhs) = (t[p].clone(), rhs[p].clone());
        for r in 0..m {
            if r == p || t[r][j].is_zero() {
                continue;
            }
            let f = t[r][j].clone();
            for &k in &nz {
                let d = &f * &pivot_row[k];
                t[r][k] -= d;
            }
            rhs[r] -= &f * &pivot_rhs;
        }
        let f = obj[j].clone();
        for &k in &nz {
            let d = &f * &pivot_row[k];
            obj[k] -= d;
        }
        z -= &f * &pivot_rhs;
        basis[p] = j;
    }

    let mut packing = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            packing[b] = rhs[i].clone();
        }
    }
    let covering = obj[n..].to_vec();
    let sol = LpSolution {
        value: z,
        packing,
        covering,
    };
    debug_assert!(certify(lp, &sol));
    Some(sol)
}

/// Primal and dual feasibility plus equal objectives: both are optimal.
pub(crate) fn certify(lp: &PackingLp, sol: &LpSolution) -> bool {
    if sol.packing.iter().chain(&sol.covering).any(|v| v.is_negative()) {
        return false;
    }
    let mut cover_at = vec![BigRational::zero(); lp.profit.len()];
    let mut cost = BigRational::zero();
    for (i, row) in lp.rows.iter().enumerate() {
        let load: BigRational = row.iter().map(|&j| &sol.packing[j]).sum();
        if load > lp.capacity[i] {
            return false;
        }
        for &j in row {
            cover_at[j] += &sol.covering[i];
        }
        cost += &sol.covering[i] * &lp.capacity[i];
    }
    if cover_at.iter().zip(&lp.profit).any(|(c, f)| c < f) {
        return false;
    }
    let profit: BigRational = lp.profit.iter().zip(&sol.packing).map(|(f, y)| f * y).sum();
    profit == sol.value && cost == sol.value
}
