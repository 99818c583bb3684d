//! Carathéodory outer measures built from Bowen balls at finite scale.
//!
//! A family of Bowen balls `B_{F_n}(x, ε)` with `N ≤ n ≤ N_max` generates a
//! finite σ-algebra (the [`AtomSpace`]); covers of a target set are then
//! covers of its atoms. `M(Z, N, ε, s)` is the minimum of
//! `Σ e^{−s|F_{n_i}|}` over integer covers, `W(f, N, ε, s)` its LP
//! relaxation, and the Frostman measure is the optimal LP packing.

mod cover;
mod family;
mod lp;
mod vitali;

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::entropy_top::OpenCoverSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::FolnerSequence;
use crate::numeric::{rational_to_f64, ser_rational, ser_rationals, Exponent};
use crate::shift_space::{Epsilon, ShiftSpace};

use cover::{Component, Laminar};
pub use family::{balls_at_depth, candidate_balls, AtomSpace, Ball, BallFamily, TargetSet};
pub use vitali::{enlargement, five_r_disjointify, weighted_disjoint_subfamilies, WeightedSubfamilies};

pub const DEFAULT_ATOM_BUDGET: usize = 1 << 14;

#[derive(Clone, Copy, Debug)]
pub struct BowenOptions {
    /// Largest connected component (in atoms) solved exactly by
    /// branch-and-bound or by the rational simplex.
    pub atom_budget: usize,
    pub exec: Execution,
    /// Use the tree DP when windows are nested.
    pub use_laminar: bool,
    /// Bisection width for critical exponents.
    pub tolerance: f64,
    pub node_limit: u64,
}

impl Default for BowenOptions {
    fn default() -> Self {
        BowenOptions {
            atom_budget: DEFAULT_ATOM_BUDGET,
            exec: Execution::default(),
            use_laminar: true,
            tolerance: 1e-12,
            node_limit: cover::NODE_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMethod {
    Empty,
    Laminar,
    BranchAndBound,
    /// Greedy upper bound with a dual-packing lower bound.
    Bracket,
}

#[derive(Clone, Debug, Serialize)]
pub struct OuterMeasureResult {
    pub s: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub depth: usize,
    pub epsilon: Option<String>,
    #[serde(serialize_with = "ser_rational")]
    pub value_lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub value_upper: BigRational,
    pub exact: bool,
    pub method: CoverMethod,
    /// Indices of the balls in the cover realising `value_upper`.
    pub certificate: Vec<usize>,
    pub atoms: usize,
    pub balls: usize,
}

impl OuterMeasureResult {
    pub fn lower_f64(&self) -> f64 {
        rational_to_f64(&self.value_lower)
    }

    pub fn upper_f64(&self) -> f64 {
        rational_to_f64(&self.value_upper)
    }
}

fn eps_label(e: Option<Epsilon>) -> Option<String> {
    e.map(|e| format!("{}/{}", e.numer(), e.denom()))
}

fn exact_weights(family: &BallFamily, s: &Exponent) -> Vec<BigRational> {
    let mut cache: HashMap<usize, BigRational> = HashMap::new();
    family
        .balls
        .iter()
        .map(|b| cache.entry(b.size).or_insert_with(|| s.weight(b.size)).clone())
        .collect()
}

fn float_weights(family: &BallFamily, s: &Exponent) -> Vec<f64> {
    family.balls.iter().map(|b| s.weight_f64(b.size)).collect()
}

/// A target set laid out on the atoms of a family, ready for repeated
/// evaluation at different exponents.
pub struct CoverInstance<'a> {
    family: &'a BallFamily,
    atoms: AtomSpace,
    laminar: Option<Laminar>,
    components: Vec<Component>,
    opts: BowenOptions,
}

struct Bracket<C> {
    lower: C,
    upper: C,
    exact: bool,
    cover: Vec<usize>,
}

impl<'a> CoverInstance<'a> {
    pub fn new(s: &ShiftSpace, family: &'a BallFamily, target: &TargetSet, opts: BowenOptions) -> Result<Self> {
        let atoms = AtomSpace::new(s, family, target)?;
        let uncovered = atoms.uncovered();
        if uncovered > 0 {
            return Err(Error::NotCoverable { uncovered });
        }
        let laminar = if opts.use_laminar {
            Laminar::build(family, &atoms)
        } else {
            None
        };
        let components = if laminar.is_none() {
            let all: Vec<u32> = (0..atoms.len() as u32).collect();
            cover::components(&atoms, family.len(), &all)
        } else {
            Vec::new()
        };
        Ok(CoverInstance {
            family,
            atoms,
            laminar,
            components,
            opts,
        })
    }

    pub fn atoms(&self) -> &AtomSpace {
        &self.atoms
    }

    pub fn method(&self) -> CoverMethod {
        if self.atoms.is_empty() {
            CoverMethod::Empty
        } else if self.laminar.is_some() {
            CoverMethod::Laminar
        } else if self.components.iter().all(|c| c.atoms.len() <= self.opts.atom_budget) {
            CoverMethod::BranchAndBound
        } else {
            CoverMethod::Bracket
        }
    }

    fn solve_components(&self, fw: &[f64]) -> Vec<(Vec<usize>, bool)> {
        self.opts.exec.map(&self.components, |comp| {
            if comp.atoms.len() <= self.opts.atom_budget {
                if let Some(set) = cover::branch_and_bound(comp, &self.atoms, fw, self.opts.node_limit) {
                    return (set, true);
                }
            }
            (cover::greedy_cover(comp, &self.atoms, fw), false)
        })
    }

    fn bracket_f64(&self, s: &Exponent) -> Bracket<f64> {
        let fw = float_weights(self.family, s);
        if self.atoms.is_empty() {
            return Bracket {
                lower: 0.0,
                upper: 0.0,
                exact: true,
                cover: Vec::new(),
            };
        }
        if let Some(lam) = &self.laminar {
            let (v, cover) = lam.solve(&fw);
            return Bracket {
                lower: v,
                upper: v,
                exact: true,
                cover,
            };
        }
        let mut b = Bracket {
            lower: 0.0,
            upper: 0.0,
            exact: true,
            cover: Vec::new(),
        };
        for (comp, (set, exact)) in self.components.iter().zip(self.solve_components(&fw)) {
            let cost: f64 = set.iter().map(|&i| fw[i]).sum();
            b.upper += cost;
            b.lower += if exact {
                cost
            } else {
                cover::packing_bound(comp, &self.atoms, &fw)
            };
            b.exact &= exact;
            b.cover.extend(set);
        }
        b
    }

    /// `(lower, upper)` bounds on `M` in floating point.
    pub fn evaluate_f64(&self, s: &Exponent) -> (f64, f64, bool) {
        let b = self.bracket_f64(s);
        (b.lower, b.upper, b.exact)
    }

    /// Certified bracket with exact rational weights.
    pub fn evaluate(&self, s: &Exponent) -> OuterMeasureResult {
        let xw = exact_weights(self.family, s);
        let b: Bracket<BigRational> = if self.atoms.is_empty() {
            Bracket {
                lower: BigRational::zero(),
                upper: BigRational::zero(),
                exact: true,
                cover: Vec::new(),
            }
        } else if let Some(lam) = &self.laminar {
            let (v, cover) = lam.solve(&xw);
            Bracket {
                lower: v.clone(),
                upper: v,
                exact: true,
                cover,
            }
        } else {
            let fw = float_weights(self.family, s);
            let mut b = Bracket {
                lower: BigRational::zero(),
                upper: BigRational::zero(),
                exact: true,
                cover: Vec::new(),
            };
            for (comp, (set, exact)) in self.components.iter().zip(self.solve_components(&fw)) {
                let cost: BigRational = set.iter().map(|&i| &xw[i]).sum();
                if exact {
                    b.lower += &cost;
                } else {
                    b.lower += cover::packing_bound(comp, &self.atoms, &xw);
                }
                b.upper += cost;
                b.exact &= exact;
                b.cover.extend(set);
            }
            b.cover.sort_unstable();
            b
        };
        OuterMeasureResult {
            s: s.value(),
            n_min: self.family.n_min,
            n_max: self.family.n_max,
            depth: self.family.depth,
            epsilon: eps_label(self.family.epsilon),
            value_lower: b.lower,
            value_upper: b.upper,
            exact: b.exact,
            method: self.method(),
            certificate: b.cover,
            atoms: self.atoms.len(),
            balls: self.family.len(),
        }
    }
}

/// `M(Z, N, ε, s)`: the cheapest cover of `Z` by balls of the family.
pub fn outer_measure_m(
    s: &ShiftSpace,
    target: &TargetSet,
    family: &BallFamily,
    exponent: &Exponent,
    opts: BowenOptions,
) -> Result<OuterMeasureResult> {
    Ok(CoverInstance::new(s, family, target, opts)?.evaluate(exponent))
}

/// `M` for covers by words of the refined partition of depth `r`: the
/// bodies `X(U)` are cylinders on `E_{r+1}·F_n`.
#[allow(clippy::too_many_arguments)]
pub fn cover_word_m(
    s: &ShiftSpace,
    target: &TargetSet,
    cover: OpenCoverSpec,
    seq: &FolnerSequence,
    n_min: usize,
    n_max: usize,
    exponent: &Exponent,
    opts: BowenOptions,
) -> Result<OuterMeasureResult> {
    let family = balls_at_depth(s, seq, cover.base_len(), n_min, n_max, target)?;
    outer_measure_m(s, target, &family, exponent, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedCoverResult {
    pub s: f64,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// Multiplicities `c_i`, one per ball of the family.
    #[serde(serialize_with = "ser_rationals")]
    pub weights: Vec<BigRational>,
    /// Optimal dual packing, one entry per atom.
    #[serde(serialize_with = "ser_rationals")]
    pub packing: Vec<BigRational>,
    /// Primal and dual feasibility with equal objectives, checked exactly.
    pub certified: bool,
    pub components: usize,
}

impl WeightedCoverResult {
    pub fn value_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

/// `W(f, N, ε, s)` for a nonnegative function `f` on the atoms.
pub fn weighted_w_on(
    atoms: &AtomSpace,
    f: &[BigRational],
    family: &BallFamily,
    exponent: &Exponent,
    opts: BowenOptions,
) -> Result<WeightedCoverResult> {
    if f.len() != atoms.len() {
        return Err(Error::DimensionMismatch {
            expected: atoms.len(),
            got: f.len(),
        });
    }
    if f.iter().any(|v| v.is_negative()) {
        return Err(Error::InvalidArgument("f must be nonnegative".into()));
    }
    let active: Vec<u32> = (0..atoms.len() as u32)
        .filter(|&a| f[a as usize].is_positive())
        .collect();
    let uncovered = active
        .iter()
        .filter(|&&a| atoms.balls_of(a as usize).is_empty())
        .count();
    if uncovered > 0 {
        return Err(Error::NotCoverable { uncovered });
    }
    let comps = cover::components(atoms, family.len(), &active);
    let xw = exact_weights(family, exponent);

    type Part = (Vec<(usize, BigRational)>, Vec<(usize, BigRational)>, BigRational, bool);
    let parts: Vec<Result<Part>> = opts.exec.map(&comps, |comp| {
        // atoms with identical incidence give identical rows; keep the largest f
        let mut reps: Vec<u32> = Vec::new();
        let mut by_key: HashMap<&[u32], usize> = HashMap::new();
        for &a in &comp.atoms {
            match by_key.get(atoms.balls_of(a as usize)) {
                Some(&r) => {
                    if f[a as usize] > f[reps[r] as usize] {
                        reps[r] = a;
                    }
                }
                None => {
                    by_key.insert(atoms.balls_of(a as usize), reps.len());
                    reps.push(a);
                }
            }
        }
        if reps.len() > opts.atom_budget {
            return Err(Error::BudgetExceeded {
                what: "LP component atoms",
                needed: reps.len() as u128,
                limit: opts.atom_budget as u128,
            });
        }
        let pos = |b: u32| comp.balls.binary_search(&b).expect("ball in component");
        let mut rows = vec![Vec::new(); comp.balls.len()];
        for (col, &a) in reps.iter().enumerate() {
            for &b in atoms.balls_of(a as usize) {
                rows[pos(b)].push(col);
            }
        }
        let lp = lp::PackingLp {
            rows,
            capacity: comp.balls.iter().map(|&b| xw[b as usize].clone()).collect(),
            profit: reps.iter().map(|&a| f[a as usize].clone()).collect(),
        };
        let sol = lp::solve(&lp).ok_or(Error::NotCoverable { uncovered: 1 })?;
        let ok = lp::certify(&lp, &sol);
        let cover = comp.balls.iter().map(|&b| b as usize).zip(sol.covering).collect();
        let pack = reps.iter().map(|&a| a as usize).zip(sol.packing).collect();
        Ok((cover, pack, sol.value, ok))
    });

    let mut weights = vec![BigRational::zero(); family.len()];
    let mut packing = vec![BigRational::zero(); atoms.len()];
    let mut value = BigRational::zero();
    let mut certified = true;
    for p in parts {
        let (cover, pack, v, ok) = p?;
        for (b, c) in cover {
            weights[b] = c;
        }
        for (a, y) in pack {
            packing[a] = y;
        }
        value += v;
        certified &= ok;
    }
    Ok(WeightedCoverResult {
        s: exponent.value(),
        value,
        weights,
        packing,
        certified,
        components: comps.len(),
    })
}

/// `W(χ_Z, N, ε, s)`.
pub fn weighted_w(
    s: &ShiftSpace,
    target: &TargetSet,
    family: &BallFamily,
    exponent: &Exponent,
    opts: BowenOptions,
) -> Result<WeightedCoverResult> {
    let atoms = AtomSpace::new(s, family, target)?;
    let f = vec![BigRational::one(); atoms.len()];
    weighted_w_on(&atoms, &f, family, exponent, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomMass {
    pub atom: String,
    #[serde(serialize_with = "ser_rational")]
    pub mass: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrostmanResult {
    pub s: f64,
    /// Packing optimum `c`.
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// `W(χ_K, …)` recomputed from the covering multiplicities.
    #[serde(serialize_with = "ser_rational")]
    pub cover_value: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub duality_gap: BigRational,
    pub certified: bool,
    /// `μ` on the atoms of `K`, normalised so `μ(K) = 1`.
    pub measure: Vec<AtomMass>,
    /// `e^{−s|F_{n_i}|}/c − μ(B_i)` per ball.
    #[serde(serialize_with = "ser_rationals")]
    pub slacks: Vec<BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub min_slack: BigRational,
}

impl FrostmanResult {
    pub fn gap_is_zero(&self) -> bool {
        self.duality_gap.is_zero()
    }
}

/// A probability measure on `K` with `μ(B_i) ≤ (1/c)·e^{−s|F_{n_i}|}` for
/// every ball, where `c = W(χ_K, …)`.
pub fn frostman_measure(
    s: &ShiftSpace,
    k: &TargetSet,
    family: &BallFamily,
    exponent: &Exponent,
    opts: BowenOptions,
) -> Result<FrostmanResult> {
    let atoms = AtomSpace::new(s, family, k)?;
    let f = vec![BigRational::one(); atoms.len()];
    let w = weighted_w_on(&atoms, &f, family, exponent, opts)?;
    if w.value.is_zero() {
        return Err(Error::NotChargeable);
    }
    let c = w.value.clone();
    let xw = exact_weights(family, exponent);
    let cover_value: BigRational = w.weights.iter().zip(&xw).map(|(ci, wi)| ci * wi).sum();
    let mu: Vec<BigRational> = w.packing.iter().map(|y| y / &c).collect();
    let slacks: Vec<BigRational> = (0..family.len())
        .map(|b| {
            let mass: BigRational = atoms.atoms_of(b).iter().map(|&a| &mu[a as usize]).sum();
            &xw[b] / &c - mass
        })
        .collect();
    let min_slack = slacks.iter().min().cloned().unwrap_or_else(BigRational::zero);
    let total: BigRational = mu.iter().sum();
    let measure = mu
        .into_iter()
        .enumerate()
        .map(|(i, mass)| AtomMass {
            atom: crate::shift_space::format_pattern(&atoms.atom(i)),
            mass,
        })
        .collect();
    Ok(FrostmanResult {
        s: exponent.value(),
        duality_gap: &cover_value - &c,
        certified: w.certified && total.is_one() && !min_slack.is_negative(),
        value: c,
        cover_value,
        measure,
        slacks,
        min_slack,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalExponent {
    pub epsilon: Option<String>,
    pub n_min: usize,
    pub n_max: usize,
    /// The `s` with `M(Z, family, s) = 1`.
    pub s_hat: f64,
    /// Crossings of the lower and upper bounds on `M`; equal when exact.
    pub s_lower: f64,
    pub s_upper: f64,
    pub exact: bool,
    pub method: CoverMethod,
    pub atoms: usize,
    pub balls: usize,
    /// `|W(F_{N_max}, ε)| / |F_{N_max}|`, the finite-size inflation of the
    /// cost exponent.
    pub window_ratio: f64,
}

fn crossing(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    if f(0.0) <= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 1.0 && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Critical exponent of an explicit family.
pub fn critical_exponent_of(
    s: &ShiftSpace,
    target: &TargetSet,
    family: &BallFamily,
    opts: BowenOptions,
) -> Result<CriticalExponent> {
    let inst = CoverInstance::new(s, family, target, opts)?;
    let upper = |x: f64| inst.evaluate_f64(&Exponent::real(x)).1;
    let s_upper = crossing(upper, opts.tolerance);
    let exact = inst.method() != CoverMethod::Bracket;
    let s_lower = if exact {
        s_upper
    } else {
        crossing(|x: f64| inst.evaluate_f64(&Exponent::real(x)).0, opts.tolerance)
    };
    let last = family.balls.iter().max_by_key(|b| b.size);
    let window_ratio = last
        .map(|b| b.cylinder.window().len() as f64 / b.size as f64)
        .unwrap_or(1.0);
    Ok(CriticalExponent {
        epsilon: eps_label(family.epsilon),
        n_min: family.n_min,
        n_max: family.n_max,
        s_hat: s_upper,
        s_lower,
        s_upper,
        exact,
        method: inst.method(),
        atoms: inst.atoms.len(),
        balls: family.len(),
        window_ratio,
    })
}

/// `ŝ(Z, ε, N, N_max)`: the exponent where the finite-scale `M` crosses 1.
#[allow(clippy::too_many_arguments)]
pub fn critical_exponent(
    s: &ShiftSpace,
    target: &TargetSet,
    seq: &FolnerSequence,
    epsilon: Epsilon,
    n_min: usize,
    n_max: usize,
    opts: BowenOptions,
) -> Result<CriticalExponent> {
    let family = candidate_balls(s, seq, epsilon, n_min, n_max, target)?;
    critical_exponent_of(s, target, &family, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleEntry {
    #[serde(serialize_with = "ser_eps")]
    pub epsilon: Epsilon,
    pub n_min: usize,
    pub n_max: usize,
}

fn ser_eps<S: serde::Serializer>(e: &Epsilon, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", e.numer(), e.denom()))
}

#[derive(Clone, Debug, Serialize)]
pub struct BowenReport {
    pub rows: Vec<CriticalExponent>,
    /// Row at the smallest ε, then the largest N, then the largest N_max.
    pub estimate: f64,
    pub estimate_row: usize,
    /// `ŝ` never increases with `N_max` among rows sharing `(ε, N)`.
    pub nonincreasing_in_n_max: bool,
}

pub fn bowen_entropy_estimate(
    s: &ShiftSpace,
    target: &TargetSet,
    seq: &FolnerSequence,
    schedule: &[ScheduleEntry],
    opts: BowenOptions,
) -> Result<BowenReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("empty schedule".into()));
    }
    let rows: Vec<CriticalExponent> = opts
        .exec
        .map(schedule, |e| {
            critical_exponent(s, target, seq, e.epsilon, e.n_min, e.n_max, opts)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let estimate_row = (0..schedule.len())
        .min_by(|&i, &j| {
            let (a, b) = (&schedule[i], &schedule[j]);
            a.epsilon
                .cmp(&b.epsilon)
                .then(b.n_min.cmp(&a.n_min))
                .then(b.n_max.cmp(&a.n_max))
        })
        .expect("nonempty");
    let mut nonincreasing = true;
    for i in 0..schedule.len() {
        for j in 0..schedule.len() {
            let (a, b) = (&schedule[i], &schedule[j]);
            if a.epsilon == b.epsilon
                && a.n_min == b.n_min
                && a.n_max < b.n_max
                && rows[j].s_hat > rows[i].s_hat + opts.tolerance * 10.0
            {
                nonincreasing = false;
            }
        }
    }
    Ok(BowenReport {
        estimate: rows[estimate_row].s_hat,
        estimate_row,
        rows,
        nonincreasing_in_n_max: nonincreasing,
    })
}
