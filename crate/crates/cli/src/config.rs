//! The JSON experiment config and its conversion into library values.
//!
//! Stocks are numbered from 1 in the file and from 0 in the library; every
//! index is shifted and range-checked here. Rationals are strings in `"p/q"`
//! form (plain integers and finite decimals are accepted too).

use std::fs;
use std::path::Path;

use serde::Deserialize;
use trading_prophet::matroid::{MatroidKind, PartitionBlock, MAX_GROUND_SIZE};
use trading_prophet::pricing::{product, DEFAULT_JOINT_LIMIT};
use trading_prophet::rational::parse_rational;
use trading_prophet::{JointDiscreteDistribution, MarginalDistribution, Matroid, Rational, StockSet};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    Exact,
    HardnessSweep,
    RandomOrder,
    Density,
    Certify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Exact => "exact",
            Mode::HardnessSweep => "hardness-sweep",
            Mode::RandomOrder => "random-order",
            Mode::Density => "density",
            Mode::Certify => "certify",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Label for the `instance_id` column; defaults to the config file stem.
    pub id: Option<String>,
    /// If present, must match the subcommand.
    pub mode: Option<Mode>,
    pub matroid: Option<MatroidSpec>,
    /// Matroid of the offline player when it differs from the online one.
    pub offline_matroid: Option<MatroidSpec>,
    pub model: Option<ModelSpec>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    /// `"matroid"`, `"uniform"` or a rational.
    pub bound: Option<String>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform { k: usize, capacity: usize },
    Partition { k: usize, blocks: Vec<BlockSpec> },
    /// Stock `i` is the `i`-th edge; vertex labels are arbitrary.
    Graphic { edges: Vec<(usize, usize)> },
    Explicit { k: usize, sets: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub elements: Vec<usize>,
    pub capacity: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// A joint distribution given atom by atom.
    Iid { atoms: Vec<AtomSpec> },
    /// Independent stocks, one marginal each.
    Marginals { marginals: Vec<Vec<ValueSpec>> },
    /// One of the hardness generators at a fixed epsilon.
    Generator { name: Generator, epsilon: String },
    /// One joint distribution per step, revealed in random order.
    RandomOrder { distributions: Vec<Vec<AtomSpec>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub prices: Vec<String>,
    pub prob: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSpec {
    pub price: String,
    pub prob: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Matroid,
    UniformRatio,
    Half,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: Generator,
    /// Strictly decreasing.
    pub epsilons: Vec<String>,
}

impl ExperimentConfig {
    /// Reads and parses a config file. Syntax errors carry serde's line and
    /// column.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match self.mode {
            Some(m) if m != mode => Err(CliError::config(format!(
                "mode: config is for `{}` but the `{}` subcommand was run",
                m.name(),
                mode.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn matroid(&self) -> Result<Matroid> {
        let spec = self.matroid.as_ref().ok_or_else(|| missing("matroid"))?;
        spec.build("matroid")
    }

    pub fn offline_matroid(&self) -> Result<Option<Matroid>> {
        self.offline_matroid.as_ref().map(|s| s.build("offline_matroid")).transpose()
    }

    pub fn model(&self) -> Result<&ModelSpec> {
        self.model.as_ref().ok_or_else(|| missing("model"))
    }
}

pub fn missing(field: &str) -> CliError {
    CliError::config(format!("{field}: required for this subcommand"))
}

pub fn rational(path: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| CliError::config(format!("{path}: {e}")))
}

fn ground_size(path: &str, k: usize) -> Result<()> {
    if k > MAX_GROUND_SIZE {
        return Err(CliError::Capacity(format!(
            "{path}.k: {k} stocks, at most {MAX_GROUND_SIZE} are supported"
        )));
    }
    Ok(())
}

fn stock(path: &str, k: usize, one_based: usize) -> Result<usize> {
    if one_based == 0 || one_based > k {
        return Err(CliError::config(format!("{path}: stock {one_based} outside 1..={k}")));
    }
    Ok(one_based - 1)
}

impl MatroidSpec {
    pub fn build(&self, path: &str) -> Result<Matroid> {
        let m = match self {
            MatroidSpec::Uniform { k, capacity } => Matroid::uniform(*k, *capacity),
            MatroidSpec::Partition { k, blocks } => {
                ground_size(path, *k)?;
                let mut seen = vec![false; *k];
                let mut converted = Vec::with_capacity(blocks.len());
                for (b, block) in blocks.iter().enumerate() {
                    let mut elements = Vec::with_capacity(block.elements.len());
                    for (i, &e) in block.elements.iter().enumerate() {
                        let at = format!("{path}.blocks[{b}].elements[{i}]");
                        let s = stock(&at, *k, e)?;
                        if std::mem::replace(&mut seen[s], true) {
                            return Err(CliError::config(format!("{at}: stock {e} is in two blocks")));
                        }
                        elements.push(s);
                    }
                    converted.push(PartitionBlock {
                        elements,
                        cap: block.capacity,
                    });
                }
                if let Some(s) = seen.iter().position(|&x| !x) {
                    return Err(CliError::config(format!("{path}.blocks: stock {} is in no block", s + 1)));
                }
                Matroid::partition(*k, converted)
            }
            MatroidSpec::Graphic { edges } => Matroid::graphic(edges.clone()),
            MatroidSpec::Explicit { k, sets } => {
                ground_size(path, *k)?;
                let mut family = Vec::with_capacity(sets.len());
                for (i, set) in sets.iter().enumerate() {
                    let mut s = StockSet::empty();
                    for (j, &e) in set.iter().enumerate() {
                        s.insert(stock(&format!("{path}.sets[{i}][{j}]"), *k, e)?);
                    }
                    family.push(s);
                }
                Matroid::explicit_from_sets(*k, family)
            }
        }
        .map_err(|e| CliError::at(path, e))?;
        m.validate().map_err(|e| CliError::at(path, e))?;
        Ok(m)
    }
}

/// The capacity of a uniform matroid, or a config error naming `path`.
pub fn uniform_capacity(m: &Matroid, path: &str) -> Result<usize> {
    match m.kind() {
        MatroidKind::Uniform { capacity } => Ok(*capacity),
        _ => Err(CliError::config(format!("{path}: must be a uniform matroid, got {}", m.kind_name()))),
    }
}

fn joint(path: &str, k: usize, atoms: &[AtomSpec]) -> Result<JointDiscreteDistribution> {
    let mut entries = Vec::with_capacity(atoms.len());
    for (i, a) in atoms.iter().enumerate() {
        let at = format!("{path}[{i}]");
        if a.prices.len() != k {
            return Err(CliError::config(format!(
                "{at}.prices: {} prices for {k} stocks",
                a.prices.len()
            )));
        }
        let prices = a
            .prices
            .iter()
            .enumerate()
            .map(|(s, x)| rational(&format!("{at}.prices[{s}]"), x))
            .collect::<Result<Vec<_>>>()?;
        entries.push((prices, rational(&format!("{at}.prob"), &a.prob)?));
    }
    JointDiscreteDistribution::new(k, entries).map_err(|e| CliError::at(path, e))
}

fn marginal(path: &str, values: &[ValueSpec]) -> Result<MarginalDistribution> {
    let entries = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Ok((
                rational(&format!("{path}[{i}].price"), &v.price)?,
                rational(&format!("{path}[{i}].prob"), &v.prob)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    MarginalDistribution::new(entries).map_err(|e| CliError::at(path, e))
}

impl ModelSpec {
    /// The per-step distribution of an i.i.d. model.
    pub fn iid(&self, m: &Matroid) -> Result<JointDiscreteDistribution> {
        let k = m.ground_size();
        match self {
            ModelSpec::Iid { atoms } => joint("model.atoms", k, atoms),
            ModelSpec::Marginals { marginals } => {
                if marginals.len() != k {
                    return Err(CliError::config(format!(
                        "model.marginals: {} marginals for {k} stocks",
                        marginals.len()
                    )));
                }
                let ms = marginals
                    .iter()
                    .enumerate()
                    .map(|(s, v)| marginal(&format!("model.marginals[{s}]"), v))
                    .collect::<Result<Vec<_>>>()?;
                product(&ms, DEFAULT_JOINT_LIMIT).map_err(|e| CliError::at("model.marginals", e))
            }
            ModelSpec::Generator { name, epsilon } => {
                let eps = rational("model.epsilon", epsilon)?;
                family(*name, m, None)?.instance(&eps).map_err(|e| CliError::at("model", e))
            }
            ModelSpec::RandomOrder { .. } => Err(CliError::config(
                "model.type: random_order models are handled by the random-order subcommand",
            )),
        }
    }

    pub fn random_order(&self, m: &Matroid) -> Result<Vec<JointDiscreteDistribution>> {
        match self {
            ModelSpec::RandomOrder { distributions } => distributions
                .iter()
                .enumerate()
                .map(|(i, atoms)| joint(&format!("model.distributions[{i}]"), m.ground_size(), atoms))
                .collect(),
            _ => Err(CliError::config("model.type: expected random_order")),
        }
    }
}

/// The hardness family for a generator name. The uniform families take `k`
/// and the capacity from the (uniform) matroid, and the offline capacity from
/// `offline`, defaulting to the same capacity.
pub fn family(
    name: Generator,
    m: &Matroid,
    offline: Option<&Matroid>,
) -> Result<trading_prophet::analytics::HardnessFamily> {
    use trading_prophet::analytics::HardnessFamily;
    if name == Generator::Matroid {
        return Ok(HardnessFamily::Matroid(m.clone()));
    }
    let k = m.ground_size();
    let capacity = uniform_capacity(m, "matroid")?;
    let offline_capacity = match offline {
        Some(o) if o.ground_size() != k => {
            return Err(CliError::config(format!(
                "offline_matroid: ground set of {} stocks, expected {k}",
                o.ground_size()
            )))
        }
        Some(o) => uniform_capacity(o, "offline_matroid")?,
        None => capacity,
    };
    Ok(match name {
        Generator::UniformRatio => HardnessFamily::UniformRatio {
            k,
            capacity,
            offline_capacity,
        },
        _ => HardnessFamily::Half {
            k,
            capacity,
            offline_capacity,
        },
    })
}
