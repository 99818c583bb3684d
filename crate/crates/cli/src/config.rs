//! Experiment configuration (TOML). Each `[[experiment]]` names a command;
//! its remaining keys are validated against that command's schema.

use amenable_entropy::bowen::{ScheduleEntry, TargetSet};
use amenable_entropy::group::{FolnerRule, FolnerSequence, GroupSpec};
use amenable_entropy::measures::ProductMeasure;
use amenable_entropy::numeric::{parse_ratio_u64, parse_rational, Exponent};
use amenable_entropy::shift_space::{parse_pattern, parse_window, Alphabet, Cylinder, Epsilon, ShiftSpace};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn scale(self, x: f64) -> f64 {
        match self {
            Units::Nats => x,
            Units::Bits => x / std::f64::consts::LN_2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    FolnerCheck,
    Htop,
    Bowen,
    LocalEntropy,
    Smb,
    VpCheck,
    DualityCheck,
    LnBound,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub units: Option<Units>,
    pub budget_atoms: Option<usize>,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<ExperimentEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentEntry {
    pub name: String,
    pub command: CommandName,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub params: toml::Table,
}

impl ExperimentEntry {
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        toml::Value::Table(self.params.clone())
            .try_into()
            .map_err(|e| CliError::Config(format!("experiment {:?}: {e}", self.name)))
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let cfg: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if cfg.experiments.is_empty() {
        return Err(CliError::Config("no [[experiment]] entries".into()));
    }
    let mut names: Vec<&str> = cfg.experiments.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(format!("duplicate experiment name {:?}", w[0])));
    }
    Ok(cfg)
}

fn cfg_err(e: amenable_entropy::Error) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupName {
    #[default]
    Z,
    Z2,
    Z3,
    Heisenberg,
}

impl GroupName {
    pub fn build(self) -> GroupSpec {
        match self {
            GroupName::Z => GroupSpec::z(),
            GroupName::Z2 => GroupSpec::zd(2).expect("d = 2"),
            GroupName::Z3 => GroupSpec::zd(3).expect("d = 3"),
            GroupName::Heisenberg => GroupSpec::heisenberg(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    GoldenMean,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default)]
    pub group: GroupName,
    pub alphabet: Option<usize>,
    #[serde(default)]
    pub forbidden: Vec<String>,
    pub preset: Option<Preset>,
}

impl SystemSpec {
    pub fn group(&self) -> GroupSpec {
        match self.preset {
            Some(Preset::GoldenMean) => GroupSpec::z(),
            None => self.group.build(),
        }
    }

    pub fn build(&self) -> Result<ShiftSpace, CliError> {
        if let Some(Preset::GoldenMean) = self.preset {
            if !self.forbidden.is_empty() || self.alphabet.is_some_and(|k| k != 2) {
                return Err(CliError::Config(
                    "golden-mean preset fixes alphabet and forbidden words".into(),
                ));
            }
            return Ok(ShiftSpace::golden_mean());
        }
        let alphabet = Alphabet::new(self.alphabet.unwrap_or(2)).map_err(cfg_err)?;
        let forbidden = self
            .forbidden
            .iter()
            .map(|p| parse_pattern(p))
            .collect::<Result<_, _>>()
            .map_err(cfg_err)?;
        ShiftSpace::new(self.group(), alphabet, forbidden).map_err(cfg_err)
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    Box,
    Symmetric,
    Heisenberg,
    Explicit,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerSpec {
    pub rule: Option<RuleName>,
    #[serde(default)]
    pub sets: Vec<String>,
}

impl FolnerSpec {
    pub fn build(&self, group: GroupSpec) -> Result<FolnerSequence, CliError> {
        let heis = group == GroupSpec::heisenberg();
        let rule = match self.rule {
            None if heis => FolnerRule::HeisenbergBox,
            None | Some(RuleName::Box) => FolnerRule::ZdBox,
            Some(RuleName::Symmetric) => FolnerRule::SymmetricBox,
            Some(RuleName::Heisenberg) => FolnerRule::HeisenbergBox,
            Some(RuleName::Explicit) => FolnerRule::Explicit(
                self.sets
                    .iter()
                    .map(|s| parse_window(s))
                    .collect::<Result<_, _>>()
                    .map_err(cfg_err)?,
            ),
        };
        if !matches!(rule, FolnerRule::Explicit(_)) && !self.sets.is_empty() {
            return Err(CliError::Config("`sets` is only used by the explicit rule".into()));
        }
        FolnerSequence::new(group, rule).map_err(cfg_err)
    }
}

fn default_approximant() -> usize {
    30
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureSpec {
    Bernoulli {
        p: Vec<String>,
    },
    Uniform {
        k: usize,
    },
    /// Parry chain of the golden-mean shift, with `a = Fib(m)/Fib(m+1)`.
    Parry {
        #[serde(default = "default_approximant")]
        approximant: usize,
    },
    Markov {
        transition: Vec<Vec<String>>,
        stationary: Vec<String>,
    },
}

fn rationals(v: &[String]) -> Result<Vec<BigRational>, CliError> {
    v.iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_, _>>()
        .map_err(cfg_err)
}

impl MeasureSpec {
    pub fn build(&self, group: GroupSpec) -> Result<ProductMeasure, CliError> {
        match self {
            MeasureSpec::Bernoulli { p } => ProductMeasure::bernoulli(group, rationals(p)?).map_err(cfg_err),
            MeasureSpec::Uniform { k } => ProductMeasure::uniform(group, *k).map_err(cfg_err),
            MeasureSpec::Parry { approximant } => {
                if group != GroupSpec::z() {
                    return Err(CliError::Config("the Parry chain lives on ℤ".into()));
                }
                Ok(ProductMeasure::parry_golden_mean(*approximant))
            }
            MeasureSpec::Markov { transition, stationary } => {
                if group != GroupSpec::z() {
                    return Err(CliError::Config("Markov measures live on ℤ".into()));
                }
                let t = transition.iter().map(|r| rationals(r)).collect::<Result<_, _>>()?;
                ProductMeasure::markov_z(t, rationals(stationary)?).map_err(cfg_err)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            MeasureSpec::Bernoulli { p } => format!("bernoulli({})", p.join(",")),
            MeasureSpec::Uniform { k } => format!("uniform({k})"),
            MeasureSpec::Parry { approximant } => format!("parry(m={approximant})"),
            MeasureSpec::Markov { .. } => "markov".into(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetSpec {
    #[default]
    Whole,
    Empty,
    Cylinders {
        patterns: Vec<String>,
    },
    Subshift {
        #[serde(default)]
        forbidden: Vec<String>,
        preset: Option<Preset>,
    },
}

impl TargetSpec {
    pub fn build(&self, ambient: &ShiftSpace) -> Result<TargetSet, CliError> {
        Ok(match self {
            TargetSpec::Whole => TargetSet::Whole,
            TargetSpec::Empty => TargetSet::Empty,
            TargetSpec::Cylinders { patterns } => TargetSet::Cylinders(
                patterns
                    .iter()
                    .map(|p| parse_pattern(p).map(Cylinder::new))
                    .collect::<Result<_, _>>()
                    .map_err(cfg_err)?,
            ),
            TargetSpec::Subshift { forbidden, preset } => {
                let z = match preset {
                    Some(Preset::GoldenMean) => ShiftSpace::golden_mean(),
                    None => ShiftSpace::new(
                        ambient.group().clone(),
                        ambient.alphabet(),
                        forbidden
                            .iter()
                            .map(|p| parse_pattern(p))
                            .collect::<Result<_, _>>()
                            .map_err(cfg_err)?,
                    )
                    .map_err(cfg_err)?,
                };
                TargetSet::SubShift(z)
            }
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ExponentSpec {
    Number(f64),
    Text(String),
}

impl ExponentSpec {
    pub fn build(&self) -> Result<Exponent, CliError> {
        match self {
            ExponentSpec::Number(x) if x.is_finite() && *x >= 0.0 => Ok(Exponent::real(*x)),
            ExponentSpec::Number(x) => Err(CliError::Config(format!("exponent {x} must be finite and ≥ 0"))),
            ExponentSpec::Text(t) => Exponent::parse(t).map_err(cfg_err),
        }
    }
}

pub fn epsilon(text: &str) -> Result<Epsilon, CliError> {
    let e = parse_ratio_u64(text).map_err(cfg_err)?;
    amenable_entropy::shift_space::depth_of(e).map_err(cfg_err)?;
    Ok(e)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub epsilon: String,
    pub n_min: usize,
    pub n_max: usize,
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<ScheduleEntry, CliError> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(CliError::Config(format!(
                "bad scale range [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        Ok(ScheduleEntry {
            epsilon: epsilon(&self.epsilon)?,
            n_min: self.n_min,
            n_max: self.n_max,
        })
    }
}

/// Følner indices: an explicit list `[4, 8, 16]` or a range
/// `{ min = 1, max = 20, step = 1 }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Indices {
    List(Vec<usize>),
    Range(IndexRange),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexRange {
    #[serde(default = "one")]
    pub min: usize,
    pub max: usize,
    #[serde(default = "one")]
    pub step: usize,
}

fn one() -> usize {
    1
}

impl Indices {
    pub fn resolve(&self) -> Result<Vec<usize>, CliError> {
        let ns = match self {
            Indices::List(ns) => ns.clone(),
            Indices::Range(r) => (r.min..=r.max).step_by(r.step.max(1)).collect(),
        };
        if ns.is_empty() || ns.contains(&0) {
            return Err(CliError::Config("Følner indices must be ≥ 1 and nonempty".into()));
        }
        Ok(ns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_resolve() {
        let r: Indices = toml::from_str::<toml::Table>("n = { min = 2, max = 9, step = 3 }").unwrap()["n"]
            .clone()
            .try_into()
            .unwrap();
        assert_eq!(r.resolve().unwrap(), vec![2, 5, 8]);
        assert!(Indices::List(vec![]).resolve().is_err());
        assert!(Indices::List(vec![0, 1]).resolve().is_err());
    }

    #[test]
    fn exponents_and_units() {
        assert_eq!(ExponentSpec::Number(0.5).build().unwrap().value(), 0.5);
        assert!((ExponentSpec::Text("ln(2)".into()).build().unwrap().value() - 2f64.ln()).abs() < 1e-15);
        assert!(ExponentSpec::Number(-1.0).build().is_err());
        assert_eq!(Units::Bits.scale(2f64.ln()), 1.0);
        assert_eq!(Units::Nats.scale(0.25), 0.25);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(parse_config("seed = 3"), Err(CliError::Config(_))));
        let dup = "[[experiment]]\nname = \"a\"\ncommand = \"htop\"\n[[experiment]]\nname = \"a\"\ncommand = \"smb\"\n";
        assert!(parse_config(dup).is_err());
        let ok = parse_config("units = \"bits\"\n[[experiment]]\nname = \"a\"\ncommand = \"ln-bound\"\nn_max = 3\n")
            .unwrap();
        assert_eq!(ok.units, Some(Units::Bits));
        assert_eq!(ok.experiments[0].command, CommandName::LnBound);
        assert_eq!(ok.experiments[0].params["n_max"].as_integer(), Some(3));
    }

    #[test]
    fn system_specs() {
        let gm = SystemSpec {
            preset: Some(Preset::GoldenMean),
            ..Default::default()
        };
        assert_eq!(gm.build().unwrap().forbidden().len(), 1);
        let clash = SystemSpec {
            preset: Some(Preset::GoldenMean),
            alphabet: Some(3),
            ..Default::default()
        };
        assert!(clash.build().is_err());
        let z2 = SystemSpec {
            group: GroupName::Z2,
            alphabet: Some(3),
            ..Default::default()
        };
        assert!(z2.build().unwrap().is_full());
        assert!(epsilon("3/4").is_err());
        assert!(epsilon("1/8").is_ok());
    }
}
