//! Shift-invariant measures with exact cylinder masses, and the estimators
//! built on them: ergodic averages, Shannon–McMillan–Breiman profiles and
//! Brin–Katok local entropy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{FiniteSubset, FolnerSequence, GroupKind, GroupSpec};
use crate::numeric::{frac, ln_rational, rational_to_f64};
use crate::shift_space::{Cylinder, Epsilon, MetricSpec, Pattern};

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    Bernoulli(Vec<BigRational>),
    /// Stationary Markov chain on ℤ with transition matrix `P` and
    /// stationary vector `π`.
    MarkovZ {
        transition: Vec<Vec<BigRational>>,
        stationary: Vec<BigRational>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductMeasure {
    kind: MeasureKind,
    group: GroupSpec,
}

fn check_distribution(p: &[BigRational], what: &str) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::InvalidMeasure(format!("{what}: at least two symbols")));
    }
    if p.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidMeasure(format!("{what}: negative entry")));
    }
    let total: BigRational = p.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidMeasure(format!("{what}: entries sum to {total}")));
    }
    Ok(())
}

impl ProductMeasure {
    pub fn bernoulli(group: GroupSpec, p: Vec<BigRational>) -> Result<Self> {
        check_distribution(&p, "bernoulli")?;
        Ok(ProductMeasure {
            kind: MeasureKind::Bernoulli(p),
            group,
        })
    }

    /// Bernoulli measure from `(numerator, denominator)` pairs.
    pub fn bernoulli_frac(group: GroupSpec, p: &[(i64, i64)]) -> Result<Self> {
        Self::bernoulli(group, p.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    pub fn uniform(group: GroupSpec, k: usize) -> Result<Self> {
        Self::bernoulli(group, vec![frac(1, k as i64); k])
    }

    /// Stationary Markov measure on ℤ. `P` must be row-stochastic and
    /// `πP = π`; irreducibility of `P` is the caller's precondition.
    pub fn markov_z(transition: Vec<Vec<BigRational>>, stationary: Vec<BigRational>) -> Result<Self> {
        let k = stationary.len();
        check_distribution(&stationary, "stationary vector")?;
        if transition.len() != k || transition.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidMeasure("transition matrix must be k×k".into()));
        }
        for (i, row) in transition.iter().enumerate() {
            check_distribution(row, &format!("transition row {i}"))?;
        }
        for j in 0..k {
            let v: BigRational = (0..k).map(|i| &stationary[i] * &transition[i][j]).sum();
            if v != stationary[j] {
                return Err(Error::InvalidMeasure(format!(
                    "πP ≠ π at state {j}: {v} vs {}",
                    stationary[j]
                )));
            }
        }
        Ok(ProductMeasure {
            kind: MeasureKind::MarkovZ { transition, stationary },
            group: GroupSpec::z(),
        })
    }

    /// Rational approximation of the Parry (maximal entropy) chain of the
    /// golden-mean shift (forbidden word `11`): `P = [[a, 1−a], [1, 0]]` with
    /// `a = Fib(k)/Fib(k+1) → 1/φ`.
    pub fn parry_golden_mean(k: usize) -> Self {
        let (mut f0, mut f1) = (BigInt::zero(), BigInt::one());
        for _ in 0..k {
            let t = &f0 + &f1;
            f0 = std::mem::replace(&mut f1, t);
        }
        // f0 = Fib(k), f1 = Fib(k+1)
        let a = BigRational::new(f0, f1);
        let one = BigRational::one();
        let two = &one + &one;
        let pi0 = &one / (&two - &a);
        let pi1 = (&one - &a) / (&two - &a);
        Self::markov_z(
            vec![vec![a.clone(), &one - &a], vec![one.clone(), BigRational::zero()]],
            vec![pi0, pi1],
        )
        .expect("Parry chain is stationary")
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alphabet_size(&self) -> usize {
        match &self.kind {
            MeasureKind::Bernoulli(p) => p.len(),
            MeasureKind::MarkovZ { stationary, .. } => stationary.len(),
        }
    }

    fn parameters(&self) -> Vec<&BigRational> {
        match &self.kind {
            MeasureKind::Bernoulli(p) => p.iter().collect(),
            MeasureKind::MarkovZ { transition, stationary } => {
                stationary.iter().chain(transition.iter().flatten()).collect()
            }
        }
    }

    /// The cylinder mass as a monomial in the measure's parameters.
    pub fn mass_monomial(&self, p: &Pattern) -> Result<MassMonomial> {
        let k = self.alphabet_size();
        if p.symbols().iter().any(|&s| s as usize >= k) {
            return Err(Error::InvalidArgument("symbol outside the measure's alphabet".into()));
        }
        match &self.kind {
            MeasureKind::Bernoulli(_) => {
                let mut exps = vec![0u64; k];
                for &s in p.symbols() {
                    exps[s as usize] += 1;
                }
                Ok(MassMonomial { exponents: exps })
            }
            MeasureKind::MarkovZ { .. } => {
                let mut exps = vec![0u64; k + k * k];
                if p.window().is_empty() {
                    return Ok(MassMonomial { exponents: exps });
                }
                if p.window().as_interval().is_none() {
                    return Err(Error::InvalidArgument(
                        "Markov cylinder masses need an interval window".into(),
                    ));
                }
                let s = p.symbols();
                exps[s[0] as usize] += 1;
                for w in s.windows(2) {
                    exps[k + w[0] as usize * k + w[1] as usize] += 1;
                }
                Ok(MassMonomial { exponents: exps })
            }
        }
    }

    pub fn cylinder_mass(&self, c: &Cylinder) -> Result<BigRational> {
        Ok(self.evaluate(&self.mass_monomial(c.pattern())?))
    }

    pub fn evaluate(&self, m: &MassMonomial) -> BigRational {
        self.parameters()
            .iter()
            .zip(&m.exponents)
            .fold(BigRational::one(), |acc, (p, &e)| {
                acc * num_traits::pow((*p).clone(), e as usize)
            })
    }

    /// `−ln` of the monomial's value; `+∞` when the mass is zero.
    pub fn neg_ln(&self, m: &MassMonomial) -> f64 {
        let mut total = 0.0;
        for (p, &e) in self.parameters().iter().zip(&m.exponents) {
            if e == 0 {
                continue;
            }
            if p.is_zero() {
                return f64::INFINITY;
            }
            total -= e as f64 * ln_rational(p);
        }
        total
    }

    pub fn bowen_ball_mass(
        &self,
        x: &Pattern,
        f: &FiniteSubset,
        epsilon: Epsilon,
        metric: &MetricSpec,
    ) -> Result<BigRational> {
        self.cylinder_mass(&metric.bowen_ball(x, f, epsilon)?)
    }

    /// Closed-form entropy `h_μ` in nats.
    pub fn entropy(&self) -> f64 {
        let h = |p: &BigRational| {
            if p.is_zero() {
                0.0
            } else {
                let v = rational_to_f64(p);
                -v * ln_rational(p)
            }
        };
        match &self.kind {
            MeasureKind::Bernoulli(p) => p.iter().map(h).sum(),
            MeasureKind::MarkovZ { transition, stationary } => stationary
                .iter()
                .zip(transition)
                .map(|(pi, row)| rational_to_f64(pi) * row.iter().map(h).sum::<f64>())
                .sum(),
        }
    }

    /// A μ-typical pattern on `window`, deterministic per seed.
    pub fn sample(&self, window: &FiniteSubset, seed: u64) -> Result<Pattern> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = |p: &[BigRational]| -> WeightedIndex<f64> {
            WeightedIndex::new(p.iter().map(|x| x.to_f64().unwrap_or(0.0)))
                .expect("a distribution has positive total weight")
        };
        match &self.kind {
            MeasureKind::Bernoulli(p) => {
                for g in window {
                    self.group.check(g)?;
                }
                let dist = weights(p);
                let symbols = (0..window.len()).map(|_| dist.sample(&mut rng) as u8).collect();
                Pattern::new(window.clone(), symbols)
            }
            MeasureKind::MarkovZ { transition, stationary } => {
                if window.as_interval().is_none() {
                    return Err(Error::InvalidArgument("Markov samples need an interval window".into()));
                }
                let rows: Vec<_> = transition.iter().map(|r| weights(r)).collect();
                let mut symbols = Vec::with_capacity(window.len());
                let mut state = weights(stationary).sample(&mut rng);
                symbols.push(state as u8);
                for _ in 1..window.len() {
                    state = rows[state].sample(&mut rng);
                    symbols.push(state as u8);
                }
                Pattern::new(window.clone(), symbols)
            }
        }
    }
}

/// Exact cylinder mass `∏ θ_j^{e_j}` over the measure's parameters
/// (symbol probabilities, or `π` followed by the entries of `P`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MassMonomial {
    pub exponents: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub n: usize,
    /// `|F_n|`.
    pub size: usize,
    pub monomial: MassMonomial,
    /// `−ln μ(cylinder) / |F_n|`.
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalEntropyEstimate {
    pub epsilon: (u64, u64),
    pub points: Vec<ProfilePoint>,
    /// Minimum over the last quarter of the computed range.
    pub liminf_proxy: f64,
    /// Maximum over the last quarter of the computed range.
    pub limsup_proxy: f64,
}

pub fn tail_proxies(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let tail = values.len().div_ceil(4);
    let t = &values[values.len() - tail..];
    let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `−ln μ(B_{F_n}(x, ε)) / |F_n|` for each `n`.
pub fn local_entropy_profile(
    mu: &ProductMeasure,
    x: &Pattern,
    epsilon: Epsilon,
    seq: &FolnerSequence,
    ns: &[usize],
    metric: &MetricSpec,
) -> Result<LocalEntropyEstimate> {
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let f = seq.set(n)?;
        let ball = metric.bowen_ball(x, &f, epsilon)?;
        let monomial = mu.mass_monomial(ball.pattern())?;
        let value = mu.neg_ln(&monomial) / f.len() as f64;
        points.push(ProfilePoint {
            n,
            size: f.len(),
            monomial,
            value,
        });
    }
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    let (liminf_proxy, limsup_proxy) = tail_proxies(&values);
    Ok(LocalEntropyEstimate {
        epsilon: (*epsilon.numer(), *epsilon.denom()),
        points,
        liminf_proxy,
        limsup_proxy,
    })
}

/// `−ln μ(ξ_{F_n}(x)) / |F_n|` for the partition ξ by the symbol at the
/// identity, whose `F_n`-refinement is the cylinder on `F_n` itself.
pub fn smb_estimate(mu: &ProductMeasure, x: &Pattern, seq: &FolnerSequence, ns: &[usize]) -> Result<Vec<ProfilePoint>> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let f = seq.set(n)?;
        let atom = x.restrict(&f)?;
        let monomial = mu.mass_monomial(&atom)?;
        let value = mu.neg_ln(&monomial) / f.len() as f64;
        out.push(ProfilePoint {
            n,
            size: f.len(),
            monomial,
            value,
        });
    }
    Ok(out)
}

/// `(1/|F_n|) Σ_{g∈F_n} f((g·x)(e))`; note `(g·x)(e) = x(g)`.
pub fn ergodic_average(
    f: impl Fn(u8) -> f64,
    x: &Pattern,
    seq: &FolnerSequence,
    ns: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let set = seq.set(n)?;
        let mut total = 0.0;
        for g in &set {
            let s = x
                .get(g)
                .ok_or_else(|| Error::InsufficientWindow(format!("x undefined at {g}")))?;
            total += f(s);
        }
        out.push((n, total / set.len() as f64));
    }
    Ok(out)
}

/// Smallest window containing every Bowen window `W(F_n, ε)` for `n ∈ ns`.
pub fn covering_window(
    seq: &FolnerSequence,
    ns: &[usize],
    epsilon: Epsilon,
    metric: &MetricSpec,
) -> Result<FiniteSubset> {
    let mut w = FiniteSubset::default();
    let nested_box = matches!(seq.group().kind(), GroupKind::Zd(_) | GroupKind::Heisenberg)
        && !matches!(seq.rule(), crate::group::FolnerRule::Explicit(_));
    if nested_box {
        if let Some(&n) = ns.iter().max() {
            return metric.bowen_window(&seq.set(n)?, epsilon);
        }
    }
    for &n in ns {
        w = w.union(&metric.bowen_window(&seq.set(n)?, epsilon)?);
    }
    Ok(w)
}

/// Local-entropy profiles of independent μ-samples, one per seed.
pub fn local_entropy_batch(
    mu: &ProductMeasure,
    epsilon: Epsilon,
    seq: &FolnerSequence,
    ns: &[usize],
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<LocalEntropyEstimate>> {
    let metric = MetricSpec::new(seq.group().clone());
    let window = covering_window(seq, ns, epsilon, &metric)?;
    exec.map(seeds, |&seed| {
        let x = mu.sample(&window, seed)?;
        local_entropy_profile(mu, &x, epsilon, seq, ns, &metric)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FolnerRule, GroupElement};
    use crate::numeric::int;
    use crate::shift_space::{eps, parse_pattern};

    fn ln_h(p: f64) -> f64 {
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    }

    #[test]
    fn cylinder_mass_examples() {
        let z = GroupSpec::z();
        let fair = ProductMeasure::uniform(z.clone(), 2).unwrap();
        let c = Cylinder::new(parse_pattern("box[0,7) : 0110100").unwrap());
        assert_eq!(fair.cylinder_mass(&c).unwrap(), frac(1, 128));

        let b = ProductMeasure::bernoulli_frac(z.clone(), &[(3, 10), (7, 10)]).unwrap();
        let c = Cylinder::new(parse_pattern("box[0,3) : 010").unwrap());
        assert_eq!(b.cylinder_mass(&c).unwrap(), frac(63, 1000));

        let m = ProductMeasure::markov_z(
            vec![vec![int(0), int(1)], vec![frac(1, 2), frac(1, 2)]],
            vec![frac(1, 3), frac(2, 3)],
        )
        .unwrap();
        let c = Cylinder::new(parse_pattern("box[0,2) : 10").unwrap());
        assert_eq!(m.cylinder_mass(&c).unwrap(), frac(1, 3));
        let gap = Cylinder::new(parse_pattern("pts[0,2] : 10").unwrap());
        assert!(m.cylinder_mass(&gap).is_err());
    }

    #[test]
    fn invalid_measures_rejected() {
        let z = GroupSpec::z();
        assert!(ProductMeasure::bernoulli_frac(z.clone(), &[(1, 2), (1, 3)]).is_err());
        assert!(ProductMeasure::bernoulli_frac(z, &[(3, 2), (-1, 2)]).is_err());
        assert!(ProductMeasure::markov_z(
            vec![vec![int(0), int(1)], vec![frac(1, 2), frac(1, 2)]],
            vec![frac(1, 2), frac(1, 2)],
        )
        .is_err());
    }

    #[test]
    fn masses_sum_to_one_on_a_window() {
        let m = ProductMeasure::markov_z(
            vec![vec![int(0), int(1)], vec![frac(1, 2), frac(1, 2)]],
            vec![frac(1, 3), frac(2, 3)],
        )
        .unwrap();
        let b = ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(1, 5), (3, 10), (1, 2)]).unwrap();
        for (mu, k) in [(&m, 2u8), (&b, 3u8)] {
            let w = FiniteSubset::interval(0, 6);
            let mut total = BigRational::zero();
            let count = (k as usize).pow(6);
            for v in 0..count {
                let mut syms = Vec::new();
                let mut t = v;
                for _ in 0..6 {
                    syms.push((t % k as usize) as u8);
                    t /= k as usize;
                }
                let c = Cylinder::new(Pattern::new(w.clone(), syms).unwrap());
                total += mu.cylinder_mass(&c).unwrap();
            }
            assert!(total.is_one());
        }
    }

    #[test]
    fn bowen_ball_mass_examples() {
        let z = GroupSpec::z();
        let metric = MetricSpec::new(z.clone());
        let fair = ProductMeasure::uniform(z.clone(), 2).unwrap();
        let x = fair.sample(&FiniteSubset::interval(-1, 11), 3).unwrap();
        let f6 = FiniteSubset::interval(0, 6);
        assert_eq!(fair.bowen_ball_mass(&x, &f6, eps(1, 2), &metric).unwrap(), frac(1, 64));
        let f10 = FiniteSubset::interval(0, 10);
        assert_eq!(
            fair.bowen_ball_mass(&x, &f10, eps(1, 8), &metric).unwrap(),
            frac(1, 4096)
        );
        let b = ProductMeasure::bernoulli_frac(z, &[(3, 10), (7, 10)]).unwrap();
        let zeros = Pattern::from_fn(FiniteSubset::interval(0, 4), |_| 0);
        assert_eq!(
            b.bowen_ball_mass(&zeros, &FiniteSubset::interval(0, 4), eps(1, 2), &metric)
                .unwrap(),
            frac(81, 10000)
        );
    }

    #[test]
    fn entropy_closed_forms() {
        let z = GroupSpec::z();
        assert!((ProductMeasure::uniform(z.clone(), 2).unwrap().entropy() - 2f64.ln()).abs() < 1e-15);
        let b = ProductMeasure::bernoulli_frac(z, &[(3, 10), (7, 10)]).unwrap();
        assert!((b.entropy() - 0.610864302054894).abs() < 1e-12);
        let parry = ProductMeasure::parry_golden_mean(40);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((parry.entropy() - phi.ln()).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_seeded_and_concentrated() {
        let z = GroupSpec::z();
        let w = FiniteSubset::interval(0, 10_000);
        let degenerate = ProductMeasure::bernoulli(z.clone(), vec![int(1), int(0)]).unwrap();
        assert!(degenerate.sample(&w, 1).unwrap().symbols().iter().all(|&s| s == 0));
        let fair = ProductMeasure::uniform(z, 2).unwrap();
        let a = fair.sample(&w, 7).unwrap();
        assert_eq!(a, fair.sample(&w, 7).unwrap());
        let ones = a.symbols().iter().filter(|&&s| s == 1).count() as f64 / 1e4;
        assert!((0.45..=0.55).contains(&ones));
    }

    #[test]
    fn fair_coin_profiles_are_exactly_log2() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let fair = ProductMeasure::uniform(GroupSpec::z(), 2).unwrap();
        let ns: Vec<usize> = (1..=2000).step_by(37).collect();
        let x = fair.sample(&FiniteSubset::interval(0, 2000), 11).unwrap();
        let metric = MetricSpec::new(GroupSpec::z());
        let prof = local_entropy_profile(&fair, &x, eps(1, 2), &seq, &ns, &metric).unwrap();
        for p in &prof.points {
            assert_eq!(p.monomial.exponents.iter().sum::<u64>(), p.n as u64);
            assert!((p.value - 2f64.ln()).abs() < 1e-12);
        }
        let smb = smb_estimate(&fair, &x, &seq, &ns).unwrap();
        assert!(smb.iter().all(|p| (p.value - 2f64.ln()).abs() < 1e-12));
    }

    #[test]
    fn smaller_radius_gives_larger_local_entropy_counts() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let b = ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(3, 10), (7, 10)]).unwrap();
        let metric = MetricSpec::new(GroupSpec::z());
        let x = b.sample(&FiniteSubset::interval(-1, 301), 5).unwrap();
        let ns: Vec<usize> = (1..=300).collect();
        let coarse = local_entropy_profile(&b, &x, eps(1, 2), &seq, &ns, &metric).unwrap();
        let fine = local_entropy_profile(&b, &x, eps(1, 8), &seq, &ns, &metric).unwrap();
        for (c, f) in coarse.points.iter().zip(&fine.points) {
            // −ln mass is nondecreasing as ε decreases
            assert!(f.value * f.size as f64 >= c.value * c.size as f64 - 1e-9);
        }
    }

    #[test]
    fn smb_and_local_entropy_for_biased_coin() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let b = ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(3, 10), (7, 10)]).unwrap();
        let x = b.sample(&FiniteSubset::interval(0, 5000), 2024).unwrap();
        let smb = smb_estimate(&b, &x, &seq, &[5000]).unwrap();
        assert!((smb[0].value - ln_h(0.3)).abs() < 0.03);
        let metric = MetricSpec::new(GroupSpec::z());
        let loc = local_entropy_profile(&b, &x, eps(1, 2), &seq, &[2000], &metric).unwrap();
        assert!((loc.points[0].value - ln_h(0.3)).abs() < 0.05);
    }

    #[test]
    fn smb_for_parry_chain() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let parry = ProductMeasure::parry_golden_mean(40);
        let x = parry.sample(&FiniteSubset::interval(0, 5000), 99).unwrap();
        // samples never contain the forbidden word
        assert!(x.symbols().windows(2).all(|w| w != [1, 1]));
        let smb = smb_estimate(&parry, &x, &seq, &[5000]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((smb[0].value - phi.ln()).abs() < 0.03);
    }

    #[test]
    fn ergodic_average_examples() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let b = ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(3, 10), (7, 10)]).unwrap();
        let x = b.sample(&FiniteSubset::interval(0, 10_000), 31).unwrap();
        let avg = ergodic_average(|s| (s == 1) as u8 as f64, &x, &seq, &[10_000]).unwrap();
        assert!((avg[0].1 - 0.7).abs() < 0.02);
        let c = ergodic_average(|_| 2.5, &x, &seq, &[1, 10, 100]).unwrap();
        assert!(c.iter().all(|&(_, v)| v == 2.5));
        let periodic = Pattern::from_fn(FiniteSubset::interval(0, 200), |g| (g.coords()[0] % 2) as u8);
        let even = FolnerSequence::new(
            GroupSpec::z(),
            FolnerRule::Explicit((1..=100).map(|n| FiniteSubset::interval(0, 2 * n)).collect()),
        )
        .unwrap();
        let ns: Vec<usize> = (1..=100).collect();
        let avg = ergodic_average(|s| s as f64, &periodic, &even, &ns).unwrap();
        assert!(avg.iter().all(|&(_, v)| v == 0.5));
        assert!(ergodic_average(|s| s as f64, &periodic, &seq, &[201]).is_err());
    }

    #[test]
    fn heisenberg_bernoulli_cylinder() {
        let h = GroupSpec::heisenberg();
        let b = ProductMeasure::uniform(h.clone(), 3).unwrap();
        let w = FiniteSubset::box_set(&[(0, 2), (0, 2), (0, 4)]);
        let x = b.sample(&w, 1).unwrap();
        assert_eq!(b.cylinder_mass(&Cylinder::new(x)).unwrap(), frac(1, 3i64.pow(16)));
        let bad = Pattern::from_fn(FiniteSubset::singleton(GroupElement::new(&[0])), |_| 0);
        assert!(b.sample(bad.window(), 0).is_err());
    }
}
