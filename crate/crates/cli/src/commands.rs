//! One function per command. Each validates its parameter table, runs the
//! computation and returns a JSON result with entropies in the run's units.

use amenable_entropy::bowen::{
    bowen_entropy_estimate, candidate_balls, frostman_measure, outer_measure_m, weighted_w, BowenOptions,
};
use amenable_entropy::combinatorics::stirling_k;
use amenable_entropy::combinatorics::verify_ln_bound_with;
use amenable_entropy::entropy_top::{htop_profile, separated_set_size, OpenCoverSpec};
use amenable_entropy::group::GroupSpec;
use amenable_entropy::measures::{covering_window, local_entropy_batch, local_entropy_profile, smb_estimate};
use amenable_entropy::numeric::{format_rational, is_nonnegative};
use amenable_entropy::shift_space::MetricSpec;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{
    epsilon, ExponentSpec, FolnerSpec, GroupName, Indices, MeasureSpec, ScheduleSpec, SystemSpec, TargetSpec, Units,
};
use crate::{CliError, CommandName, ExperimentEntry, Outcome, RunContext, Table};

pub fn run(e: &ExperimentEntry, ctx: RunContext) -> Result<Outcome, CliError> {
    match e.command {
        CommandName::FolnerCheck => folner_check(e.params()?),
        CommandName::Htop => htop(e.params()?, ctx),
        CommandName::Bowen => bowen(e.params()?, ctx),
        CommandName::LocalEntropy => local_entropy(e.params()?, ctx),
        CommandName::Smb => smb(e.params()?, ctx),
        CommandName::VpCheck => vp_check(e.params()?, ctx),
        CommandName::DualityCheck => duality_check(e.params()?, ctx),
        CommandName::LnBound => ln_bound(e.params()?, ctx),
    }
}

fn options(ctx: RunContext) -> BowenOptions {
    BowenOptions {
        atom_budget: ctx.budget_atoms,
        exec: ctx.exec,
        ..BowenOptions::default()
    }
}

/// Rescales the numeric fields named in `keys`, at any depth.
fn scale_fields(v: &mut Value, keys: &[&str], units: Units) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                match x {
                    Value::Number(n) if keys.contains(&k.as_str()) => {
                        if let Some(f) = n.as_f64() {
                            *x = json!(units.scale(f));
                        }
                    }
                    _ => scale_fields(x, keys, units),
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| scale_fields(x, keys, units)),
        _ => {}
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn seeds(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

// ---------------------------------------------------------------- folner

fn default_monotone_from() -> usize {
    4
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerCheckParams {
    #[serde(default)]
    pub group: GroupName,
    #[serde(default)]
    pub folner: FolnerSpec,
    pub n_max: usize,
    /// Defects must decrease strictly from this index on.
    #[serde(default = "default_monotone_from")]
    pub monotone_from: usize,
    /// Upper index of the Shulman prefix maximum; defaults to `n_max`.
    pub shulman_n_max: Option<usize>,
    /// First index of the growth-ratio check (`x/ln x` bottoms out at `e`).
    #[serde(default = "default_growth_from")]
    pub growth_from: usize,
}

fn default_growth_from() -> usize {
    3
}

fn folner_check(p: FolnerCheckParams) -> Result<Outcome, CliError> {
    let group = p.group.build();
    let seq = p.folner.build(group.clone())?;
    if p.n_max < 2 {
        return Err(CliError::Config("folner-check needs n_max ≥ 2".into()));
    }
    if seq.max_index().is_some_and(|m| m < p.n_max) {
        return Err(CliError::Config(format!(
            "explicit sequence has {} sets, n_max = {}",
            seq.max_index().unwrap_or(0),
            p.n_max
        )));
    }
    let gens = group.generators().to_vec();
    let mut rows = Vec::with_capacity(p.n_max);
    let mut table = Table {
        headers: vec!["n".into(), "size".into(), "max_defect".into()],
        rows: Vec::new(),
    };
    let mut max_defects = Vec::with_capacity(p.n_max);
    for n in 1..=p.n_max {
        let f = seq.set(n)?;
        let defects: Vec<_> = gens.iter().map(|g| group.folner_defect(&f, g)).collect();
        let max = defects.iter().copied().max().unwrap_or_default();
        max_defects.push(max);
        table
            .rows
            .push(vec![n.to_string(), f.len().to_string(), max.to_string()]);
        rows.push(json!({
            "n": n,
            "size": f.len(),
            "defects": defects.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "max_defect": max.to_string(),
        }));
    }
    let from = p.monotone_from.max(1);
    let monotone = max_defects
        .iter()
        .skip(from - 1)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] < w[0]);
    let (shulman, argmax) = seq.shulman_constant(p.shulman_n_max.unwrap_or(p.n_max))?;
    if p.growth_from < 2 || p.growth_from >= p.n_max {
        return Err(CliError::Config("growth_from must lie in [2, n_max)".into()));
    }
    let growth = seq.growth_ratios(p.growth_from..=p.n_max)?;
    let result = json!({
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "defects": rows,
        "monotone_from": from,
        "defect_monotone": monotone,
        "shulman": {
            "value": shulman.to_string(),
            "value_f64": *shulman.numer() as f64 / *shulman.denom() as f64,
            "argmax": argmax,
            "n_max": p.shulman_n_max.unwrap_or(p.n_max),
        },
        "growth": growth,
        "growth_flag": !growth.increasing,
    });
    Ok(Outcome {
        result,
        table: Some(table),
    })
}

// ---------------------------------------------------------------- htop

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HtopParams {
    pub system: SystemSpec,
    #[serde(default)]
    pub folner: FolnerSpec,
    pub n: Indices,
    /// Word depth `r` of the cover (`0` is the alphabet partition).
    #[serde(default)]
    pub cover_depth: usize,
    /// Also report greedy maximal ε-separated sets at this ε.
    pub separated: Option<String>,
}

fn htop(p: HtopParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let s = p.system.build()?;
    let seq = p.folner.build(s.group().clone())?;
    let ns = p.n.resolve()?;
    let cover = if p.cover_depth == 0 {
        OpenCoverSpec::alphabet()
    } else {
        OpenCoverSpec::refined(p.cover_depth)
    };
    let rows = htop_profile(&s, cover, &seq, &ns, ctx.exec)?;
    let table = Table {
        headers: vec!["n".into(), "size".into(), "count".into(), "estimate".into()],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.size.to_string(),
                    r.count.clone(),
                    ctx.units.scale(r.estimate).to_string(),
                ]
            })
            .collect(),
    };
    let separated = match &p.separated {
        None => Value::Null,
        Some(e) => {
            let eps = epsilon(e)?;
            let metric = MetricSpec::new(s.group().clone());
            let out = ctx
                .exec
                .map(&ns, |&n| -> Result<Value, CliError> {
                    let f = seq.set(n)?;
                    let count = separated_set_size(&s, &f, eps, &metric)?;
                    Ok(json!({"n": n, "size": f.len(), "count": count, "estimate": (count as f64).ln() / f.len() as f64}))
                })
                .into_iter()
                .collect::<Result<Vec<_>, _>>()?;
            json!({ "epsilon": e, "rows": out })
        }
    };
    let mut result = json!({
        "cover_depth": p.cover_depth,
        "rows": to_value(&rows),
        "last": rows.last().map(|r| r.estimate),
        "separated": separated,
    });
    scale_fields(&mut result, &["estimate", "last"], ctx.units);
    Ok(Outcome {
        result,
        table: Some(table),
    })
}

// ---------------------------------------------------------------- bowen

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BowenParams {
    pub system: SystemSpec,
    #[serde(default)]
    pub folner: FolnerSpec,
    #[serde(default)]
    pub target: TargetSpec,
    pub schedule: Vec<ScheduleSpec>,
    /// Exponents at which `M` (and `W`, if requested) are evaluated on each
    /// schedule row.
    #[serde(default)]
    pub exponents: Vec<ExponentSpec>,
    #[serde(default)]
    pub weighted: bool,
}

const ENTROPY_KEYS: &[&str] = &["s", "s_hat", "s_lower", "s_upper", "estimate"];

fn bowen(p: BowenParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let s = p.system.build()?;
    let seq = p.folner.build(s.group().clone())?;
    let target = p.target.build(&s)?;
    let schedule = p
        .schedule
        .iter()
        .map(ScheduleSpec::build)
        .collect::<Result<Vec<_>, _>>()?;
    if schedule.is_empty() {
        return Err(CliError::Config("bowen needs a nonempty schedule".into()));
    }
    let exponents = p
        .exponents
        .iter()
        .map(ExponentSpec::build)
        .collect::<Result<Vec<_>, _>>()?;
    let opts = options(ctx);
    let report = bowen_entropy_estimate(&s, &target, &seq, &schedule, opts)?;
    let mut evaluations = Vec::new();
    for row in &schedule {
        if exponents.is_empty() {
            break;
        }
        let family = candidate_balls(&s, &seq, row.epsilon, row.n_min, row.n_max, &target)?;
        for x in &exponents {
            let m = outer_measure_m(&s, &target, &family, x, opts)?;
            let w = if p.weighted {
                let w = weighted_w(&s, &target, &family, x, opts)?;
                json!({
                    "value": format_rational(&w.value),
                    "value_f64": w.value_f64(),
                    "certified": w.certified,
                    "m_minus_w": format_rational(&(&m.value_lower - &w.value)),
                })
            } else {
                Value::Null
            };
            evaluations.push(json!({
                "measure": to_value(&m),
                "value_lower_f64": m.lower_f64(),
                "value_upper_f64": m.upper_f64(),
                "weighted": w,
            }));
        }
    }
    let table = Table {
        headers: [
            "epsilon", "n_min", "n_max", "s_hat", "s_lower", "s_upper", "exact", "method",
        ]
        .map(String::from)
        .to_vec(),
        rows: report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.epsilon.clone().unwrap_or_default(),
                    r.n_min.to_string(),
                    r.n_max.to_string(),
                    ctx.units.scale(r.s_hat).to_string(),
                    ctx.units.scale(r.s_lower).to_string(),
                    ctx.units.scale(r.s_upper).to_string(),
                    r.exact.to_string(),
                    to_value(&r.method).as_str().unwrap_or_default().to_string(),
                ]
            })
            .collect(),
    };
    let mut result = json!({ "report": to_value(&report), "evaluations": evaluations });
    scale_fields(&mut result, ENTROPY_KEYS, ctx.units);
    Ok(Outcome {
        result,
        table: Some(table),
    })
}

// ---------------------------------------------------------------- local entropy

fn default_samples() -> usize {
    1
}

fn default_le_tolerance() -> f64 {
    0.05
}

fn half() -> String {
    "1/2".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalEntropyParams {
    pub measure: MeasureSpec,
    #[serde(default)]
    pub group: GroupName,
    #[serde(default)]
    pub folner: FolnerSpec,
    #[serde(default = "half")]
    pub epsilon: String,
    pub n: Indices,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Per-sample tolerance around the measure's entropy.
    #[serde(default = "default_le_tolerance")]
    pub tolerance: f64,
    /// Emit every sample's full profile, not just its proxies.
    #[serde(default)]
    pub profiles: bool,
}

fn group_for(measure: &MeasureSpec, group: GroupName) -> GroupSpec {
    match measure {
        MeasureSpec::Parry { .. } | MeasureSpec::Markov { .. } => GroupSpec::z(),
        _ => group.build(),
    }
}

fn local_entropy(p: LocalEntropyParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let group = group_for(&p.measure, p.group);
    let mu = p.measure.build(group.clone())?;
    let seq = p.folner.build(group)?;
    let eps = epsilon(&p.epsilon)?;
    let ns = p.n.resolve()?;
    if p.samples == 0 {
        return Err(CliError::Config("samples must be ≥ 1".into()));
    }
    let seed_list = seeds(ctx.seed, p.samples);
    let estimates = local_entropy_batch(&mu, eps, &seq, &ns, &seed_list, ctx.exec)?;
    let h = mu.entropy();
    let mean_proxy = mean(estimates.iter().map(|e| e.liminf_proxy));
    let within = estimates
        .iter()
        .filter(|e| (e.liminf_proxy - h).abs() <= p.tolerance)
        .count();
    let mean_profile: Vec<Value> = ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            json!({
                "n": n,
                "size": estimates[0].points[i].size,
                "value": mean(estimates.iter().map(|e| e.points[i].value)),
            })
        })
        .collect();
    let table = Table {
        headers: vec!["n".into(), "size".into(), "mean".into()],
        rows: mean_profile
            .iter()
            .map(|r| {
                vec![
                    r["n"].to_string(),
                    r["size"].to_string(),
                    ctx.units.scale(r["value"].as_f64().unwrap_or(f64::NAN)).to_string(),
                ]
            })
            .collect(),
    };
    let samples: Vec<Value> = seed_list
        .iter()
        .zip(&estimates)
        .map(|(seed, e)| {
            let mut v = json!({"seed": seed, "liminf_proxy": e.liminf_proxy, "limsup_proxy": e.limsup_proxy});
            if p.profiles {
                v["points"] = to_value(&e.points);
            }
            v
        })
        .collect();
    let mut result = json!({
        "measure": p.measure.label(),
        "epsilon": p.epsilon,
        "entropy": h,
        "mean_liminf_proxy": mean_proxy,
        "tolerance": p.tolerance,
        "within_tolerance": within,
        "samples": samples,
        "mean_profile": mean_profile,
    });
    scale_fields(
        &mut result,
        &["entropy", "mean_liminf_proxy", "liminf_proxy", "limsup_proxy", "value"],
        ctx.units,
    );
    Ok(Outcome {
        result,
        table: Some(table),
    })
}

// ---------------------------------------------------------------- smb

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmbParams {
    pub measure: MeasureSpec,
    #[serde(default)]
    pub group: GroupName,
    #[serde(default)]
    pub folner: FolnerSpec,
    pub n: Indices,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn smb(p: SmbParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let group = group_for(&p.measure, p.group);
    let mu = p.measure.build(group.clone())?;
    let seq = p.folner.build(group.clone())?;
    let ns = p.n.resolve()?;
    if p.samples == 0 {
        return Err(CliError::Config("samples must be ≥ 1".into()));
    }
    let half = amenable_entropy::shift_space::eps(1, 2);
    let metric = MetricSpec::new(group);
    let window = covering_window(&seq, &ns, half, &metric)?;
    let seed_list = seeds(ctx.seed, p.samples);
    let rows = ctx
        .exec
        .map(&seed_list, |&seed| -> Result<(Vec<_>, bool), CliError> {
            let x = mu.sample(&window, seed)?;
            let smb = smb_estimate(&mu, &x, &seq, &ns)?;
            let local = local_entropy_profile(&mu, &x, half, &seq, &ns, &metric)?;
            let equal = smb
                .iter()
                .zip(&local.points)
                .all(|(a, b)| a.monomial == b.monomial && a.value.to_bits() == b.value.to_bits());
            Ok((smb, equal))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let all_equal = rows.iter().all(|(_, eq)| *eq);
    let table = Table {
        headers: vec!["seed".into(), "n".into(), "size".into(), "value".into()],
        rows: seed_list
            .iter()
            .zip(&rows)
            .flat_map(|(seed, (pts, _))| {
                pts.iter().map(move |pt| {
                    vec![
                        seed.to_string(),
                        pt.n.to_string(),
                        pt.size.to_string(),
                        ctx.units.scale(pt.value).to_string(),
                    ]
                })
            })
            .collect(),
    };
    let samples: Vec<Value> = seed_list
        .iter()
        .zip(&rows)
        .map(|(seed, (pts, eq))| json!({"seed": seed, "points": to_value(pts), "equals_local_entropy": eq}))
        .collect();
    let mut result = json!({
        "measure": p.measure.label(),
        "entropy": mu.entropy(),
        "equals_local_entropy": all_equal,
        "samples": samples,
    });
    scale_fields(&mut result, &["entropy", "value"], ctx.units);
    Ok(Outcome {
        result,
        table: Some(table),
    })
}

// ---------------------------------------------------------------- vp-check

fn default_vp_tolerance() -> f64 {
    0.02
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VpCheckParams {
    pub system: SystemSpec,
    #[serde(default)]
    pub folner: FolnerSpec,
    #[serde(default)]
    pub target: TargetSpec,
    pub measures: Vec<MeasureSpec>,
    #[serde(default = "half")]
    pub epsilon: String,
    pub n: Indices,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub bowen: ScheduleSpec,
    #[serde(default = "default_vp_tolerance")]
    pub tolerance: f64,
}

fn vp_check(p: VpCheckParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let s = p.system.build()?;
    let seq = p.folner.build(s.group().clone())?;
    let target = p.target.build(&s)?;
    if p.measures.is_empty() {
        return Err(CliError::Config("vp-check needs at least one measure".into()));
    }
    if p.samples == 0 {
        return Err(CliError::Config("samples must be ≥ 1".into()));
    }
    let eps = epsilon(&p.epsilon)?;
    let ns = p.n.resolve()?;
    let row = p.bowen.build()?;
    let ce =
        amenable_entropy::bowen::critical_exponent(&s, &target, &seq, row.epsilon, row.n_min, row.n_max, options(ctx))?;
    let seed_list = seeds(ctx.seed, p.samples);
    let mut per_measure = Vec::with_capacity(p.measures.len());
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (i, m) in p.measures.iter().enumerate() {
        let mu = m.build(s.group().clone())?;
        let est = local_entropy_batch(&mu, eps, &seq, &ns, &seed_list, ctx.exec)?;
        let proxy = mean(est.iter().map(|e| e.liminf_proxy));
        if proxy > best.0 {
            best = (proxy, i);
        }
        per_measure.push(json!({"measure": m.label(), "entropy": mu.entropy(), "proxy": proxy}));
    }
    let gap = (best.0 - ce.s_hat).abs();
    let mut result = json!({
        "measures": per_measure,
        "maximizer": best.1,
        "maximizer_label": p.measures[best.1].label(),
        "max_proxy": best.0,
        "bowen": to_value(&ce),
        "s_hat": ce.s_hat,
        "tolerance": p.tolerance,
        "gap": gap,
        "holds": best.0 <= ce.s_hat + p.tolerance,
        "within_tolerance": gap <= p.tolerance,
    });
    scale_fields(
        &mut result,
        &["entropy", "proxy", "max_proxy", "s_hat", "s_lower", "s_upper", "gap"],
        ctx.units,
    );
    Ok(Outcome { result, table: None })
}

// ---------------------------------------------------------------- duality

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualityParams {
    pub system: SystemSpec,
    #[serde(default)]
    pub folner: FolnerSpec,
    pub epsilon: String,
    pub n_min: usize,
    pub n_max: usize,
    pub targets: Vec<TargetSpec>,
    pub exponents: Vec<ExponentSpec>,
    /// Emit the Frostman measure on the atoms of each target.
    #[serde(default)]
    pub measures: bool,
}

fn duality_check(p: DualityParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let s = p.system.build()?;
    let seq = p.folner.build(s.group().clone())?;
    let row = ScheduleSpec {
        epsilon: p.epsilon.clone(),
        n_min: p.n_min,
        n_max: p.n_max,
    }
    .build()?;
    let exponents = p
        .exponents
        .iter()
        .map(ExponentSpec::build)
        .collect::<Result<Vec<_>, _>>()?;
    let targets = p.targets.iter().map(|t| t.build(&s)).collect::<Result<Vec<_>, _>>()?;
    if targets.is_empty() || exponents.is_empty() {
        return Err(CliError::Config("duality-check needs targets and exponents".into()));
    }
    let opts = options(ctx);
    let mut rows = Vec::new();
    let mut all_zero = true;
    let mut all_nonneg = true;
    for (ti, k) in targets.iter().enumerate() {
        let family = candidate_balls(&s, &seq, row.epsilon, row.n_min, row.n_max, k)?;
        for x in &exponents {
            let w = weighted_w(&s, k, &family, x, opts)?;
            let fr = frostman_measure(&s, k, &family, x, opts)?;
            let nonneg = is_nonnegative(&fr.min_slack);
            all_zero &= fr.gap_is_zero() && w.value == fr.value;
            all_nonneg &= nonneg;
            let mut r = json!({
                "target": ti,
                "s": fr.s,
                "w": format_rational(&w.value),
                "w_f64": w.value_f64(),
                "frostman": format_rational(&fr.value),
                "duality_gap": format_rational(&fr.duality_gap),
                "gap_zero": fr.gap_is_zero(),
                "certified": w.certified && fr.certified,
                "min_slack": format_rational(&fr.min_slack),
                "slacks_nonnegative": nonneg,
            });
            if p.measures {
                r["measure"] = to_value(&fr.measure);
            }
            rows.push(r);
        }
    }
    let mut result = json!({ "rows": rows, "all_gaps_zero": all_zero, "all_slacks_nonnegative": all_nonneg });
    scale_fields(&mut result, &["s"], ctx.units);
    Ok(Outcome { result, table: None })
}

// ---------------------------------------------------------------- ln bound

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LnBoundParams {
    pub epsilons: Vec<String>,
    pub eps1: Vec<String>,
    pub cells: Vec<usize>,
    pub n_max: usize,
}

fn ln_bound(p: LnBoundParams, ctx: RunContext) -> Result<Outcome, CliError> {
    let parse = |v: &[String]| {
        v.iter()
            .map(|t| amenable_entropy::numeric::parse_ratio_u64(t).map_err(|e| CliError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()
    };
    let epsilons = parse(&p.epsilons)?;
    let eps1s = parse(&p.eps1)?;
    if epsilons.is_empty() || eps1s.is_empty() || p.cells.is_empty() || p.n_max == 0 {
        return Err(CliError::Config("ln-bound needs a nonempty grid and n_max ≥ 1".into()));
    }
    let mut rows = Vec::new();
    let mut all_hold = true;
    for &e in &epsilons {
        for &e1 in &eps1s {
            for &c in &p.cells {
                let k = stirling_k(e, e1, c).map_err(|e| CliError::Config(e.to_string()))?;
                let r = verify_ln_bound_with(p.n_max, e, e1, c, k, ctx.exec);
                all_hold &= r.holds;
                rows.push(json!({
                    "epsilon": e.to_string(),
                    "eps1": e1.to_string(),
                    "cells": c,
                    "k": r.k,
                    "holds": r.holds,
                    "first_violation": r.first_violation,
                    "undecided": r.undecided,
                    "min_slack": r.rows.iter().map(|x| x.slack).fold(f64::INFINITY, f64::min),
                }));
            }
        }
    }
    Ok(Outcome {
        result: json!({ "n_max": p.n_max, "rows": rows, "all_hold": all_hold }),
        table: None,
    })
}
