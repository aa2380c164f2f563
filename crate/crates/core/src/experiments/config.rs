//! Run configuration. Every flag of a subcommand doubles as a key of the
//! flat TOML config file, under the same kebab-case name; flags win.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use toml::{Table, Value};

use super::ConfigError;
use crate::hypercube::{MetricKind, PartnerCounting, RpmpConfig};
use crate::line::{LineError, LineExperimentConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Rpmp,
    Line,
    Exact,
    Enumerate,
    Validate,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Rpmp => "rpmp",
            Suite::Line => "line",
            Suite::Exact => "exact",
            Suite::Enumerate => "enumerate",
            Suite::Validate => "validate",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default, PartialEq)]
pub struct GlobalArgs {
    /// Run seed; required by the stochastic suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Result file; stdout when absent. A manifest is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat TOML file whose keys mirror the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Hamming,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingArg {
    Exhaustive,
    AlgorithmI,
    Extremal,
}

impl From<CountingArg> for PartnerCounting {
    fn from(c: CountingArg) -> Self {
        match c {
            CountingArg::Exhaustive => PartnerCounting::Exhaustive,
            CountingArg::AlgorithmI => PartnerCounting::AlgorithmI,
            CountingArg::Extremal => PartnerCounting::Extremal,
        }
    }
}

impl From<PartnerCounting> for CountingArg {
    fn from(c: PartnerCounting) -> Self {
        match c {
            PartnerCounting::Exhaustive => CountingArg::Exhaustive,
            PartnerCounting::AlgorithmI => CountingArg::AlgorithmI,
            PartnerCounting::Extremal => CountingArg::Extremal,
        }
    }
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RpmpArgs {
    /// Men per market.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Questions per profile.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Sampled agents per market whose matching distance is reported.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    /// Extra women beyond `n`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unbalanced_r: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counting: Option<CountingArg>,
    /// Report P(X < k/2 - sqrt(beta k log2 n)).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Include profile group counts (JSON only).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<bool>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LineArgs {
    /// Blue (passenger) rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Red (cab) rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Radii r at which P(X > r) is reported.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_grid: Option<Vec<f64>>,
    /// Add per-blue records to JSON output; CSV output always has them.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum ExactOp {
    /// Expected greedy cost over orderings.
    #[value(name = "E")]
    #[serde(rename = "E")]
    E,
    /// Greedy cost of the given ordering.
    #[value(name = "D")]
    #[serde(rename = "D")]
    D,
    /// Average over all orderings by brute force.
    #[value(name = "oracle")]
    #[serde(rename = "oracle")]
    Oracle,
    /// Odd partitions of k with their weights.
    #[value(name = "partitions")]
    #[serde(rename = "partitions")]
    Partitions,
    /// Sum of the partition weights of k.
    #[value(name = "weights")]
    #[serde(rename = "weights")]
    Weights,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieArg {
    Average,
    Leftmost,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExactArgs {
    /// Comma-separated gaps, each a fraction, decimal or integer.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<ExactOp>,
    /// Partition size for `partitions` and `weights`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Tie rule for `D`.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie: Option<TieArg>,
    /// Split samples per partition when E is estimated beyond the exact cap.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EnumerateArgs {
    /// Instance JSON file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ValidateArgs {
    /// Criterion ids to run; all when absent.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SuiteArgs {
    Rpmp(RpmpArgs),
    Line(LineArgs),
    Exact(ExactArgs),
    Enumerate(EnumerateArgs),
    Validate(ValidateArgs),
}

impl SuiteArgs {
    pub fn suite(&self) -> Suite {
        match self {
            SuiteArgs::Rpmp(_) => Suite::Rpmp,
            SuiteArgs::Line(_) => Suite::Line,
            SuiteArgs::Exact(_) => Suite::Exact,
            SuiteArgs::Enumerate(_) => Suite::Enumerate,
            SuiteArgs::Validate(_) => Suite::Validate,
        }
    }

    fn to_table(&self) -> Table {
        let value = match self {
            SuiteArgs::Rpmp(a) => Value::try_from(a),
            SuiteArgs::Line(a) => Value::try_from(a),
            SuiteArgs::Exact(a) => Value::try_from(a),
            SuiteArgs::Enumerate(a) => Value::try_from(a),
            SuiteArgs::Validate(a) => Value::try_from(a),
        };
        match value.expect("argument structs serialize to tables") {
            Value::Table(t) => t,
            _ => unreachable!("argument structs serialize to tables"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactJob {
    pub op: ExactOp,
    pub gaps: Option<String>,
    pub k: Option<usize>,
    pub tie: TieArg,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumerateJob {
    pub instance: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidateJob {
    pub criteria: Option<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SuiteConfig {
    Rpmp(RpmpConfig),
    Line { config: LineExperimentConfig, records: bool },
    Exact(ExactJob),
    Enumerate(EnumerateJob),
    Validate(ValidateJob),
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub suite: SuiteConfig,
}

pub const DEFAULT_VALIDATE_SEED: u64 = 20_240_601;
const DEFAULT_EXACT_SAMPLES: usize = 2000;

impl ExperimentConfig {
    pub fn suite_kind(&self) -> Suite {
        match self.suite {
            SuiteConfig::Rpmp(_) => Suite::Rpmp,
            SuiteConfig::Line { .. } => Suite::Line,
            SuiteConfig::Exact(_) => Suite::Exact,
            SuiteConfig::Enumerate(_) => Suite::Enumerate,
            SuiteConfig::Validate(_) => Suite::Validate,
        }
    }

    fn args(&self) -> SuiteArgs {
        match &self.suite {
            SuiteConfig::Rpmp(c) => SuiteArgs::Rpmp(RpmpArgs {
                n: Some(c.n),
                k: Some(c.k),
                metric: Some(match c.metric {
                    MetricKind::Weighted => MetricArg::Weighted,
                    _ => MetricArg::Hamming,
                }),
                trials: Some(c.trials),
                sample_size: Some(c.sample_size),
                unbalanced_r: Some(c.unbalanced_r),
                counting: Some(c.counting.into()),
                beta: c.beta,
                groups: Some(c.groups),
            }),
            SuiteConfig::Line { config, records } => SuiteArgs::Line(LineArgs {
                lambda: Some(config.lambda),
                mu: Some(config.mu),
                window: Some(config.window),
                trials: Some(config.trials),
                tail_grid: Some(config.tail_grid.clone()),
                records: Some(*records),
            }),
            SuiteConfig::Exact(j) => SuiteArgs::Exact(ExactArgs {
                gaps: j.gaps.clone(),
                op: Some(j.op),
                k: j.k,
                tie: Some(j.tie),
                samples: Some(j.samples),
            }),
            SuiteConfig::Enumerate(j) => {
                SuiteArgs::Enumerate(EnumerateArgs { instance: Some(j.instance.clone()) })
            }
            SuiteConfig::Validate(j) => {
                SuiteArgs::Validate(ValidateArgs { criteria: j.criteria.clone() })
            }
        }
    }

    /// Flat TOML that parses back to this configuration.
    pub fn to_toml(&self) -> String {
        let mut t = Table::new();
        t.insert("suite".into(), Value::String(self.suite_kind().to_string()));
        if let Some(seed) = self.seed {
            t.insert("seed".into(), seed_value(seed));
        }
        if let Some(out) = &self.out {
            t.insert("out".into(), Value::String(out.display().to_string()));
        }
        t.insert("format".into(), Value::String(format_name(self.format).into()));
        if let Some(threads) = self.threads {
            t.insert("threads".into(), Value::Integer(threads as i64));
        }
        t.extend(self.args().to_table());
        toml::to_string(&t).expect("config tables serialize")
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

// TOML integers are signed; larger seeds travel as strings.
fn seed_value(seed: u64) -> Value {
    match i64::try_from(seed) {
        Ok(i) => Value::Integer(i),
        Err(_) => Value::String(seed.to_string()),
    }
}

fn read_seed(v: &Value) -> Result<u64, ConfigError> {
    let invalid = || ConfigError::Invalid { key: "seed".into(), message: "expected a 64-bit unsigned integer".into() };
    match v {
        Value::Integer(i) => u64::try_from(*i).map_err(|_| invalid()),
        Value::String(s) => s.parse().map_err(|_| invalid()),
        _ => Err(invalid()),
    }
}

fn take<T: DeserializeOwned>(t: &mut Table, key: &str) -> Result<Option<T>, ConfigError> {
    t.remove(key)
        .map(|v| {
            v.try_into().map_err(|e: toml::de::Error| ConfigError::Invalid {
                key: key.into(),
                message: e.message().to_string(),
            })
        })
        .transpose()
}

fn suite_args<T: DeserializeOwned>(t: Table) -> Result<T, ConfigError> {
    Value::Table(t).try_into().map_err(|e: toml::de::Error| {
        let message = e.message().to_string();
        match unknown_field(&message) {
            Some(key) => ConfigError::UnknownKey(key),
            None => ConfigError::Invalid { key: field_of(&message), message },
        }
    })
}

fn unknown_field(message: &str) -> Option<String> {
    let rest = message.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

fn field_of(message: &str) -> String {
    message
        .split('`')
        .nth(1)
        .map(str::to_string)
        .unwrap_or_else(|| "config".into())
}

fn required<T>(v: Option<T>, key: &'static str) -> Result<T, ConfigError> {
    v.ok_or(ConfigError::Missing(key))
}

/// Resolves a merged key/value table for `suite`.
pub fn from_table(suite: Suite, mut t: Table) -> Result<ExperimentConfig, ConfigError> {
    if let Some(v) = t.remove("suite") {
        let named = v.as_str().unwrap_or_default().to_string();
        if named != suite.as_str() {
            return Err(ConfigError::Contradiction(format!(
                "config file is for suite `{named}` but the `{suite}` subcommand was given"
            )));
        }
    }
    let seed = t.remove("seed").map(|v| read_seed(&v)).transpose()?;
    let out: Option<PathBuf> = take(&mut t, "out")?;
    let format: Format = take(&mut t, "format")?.unwrap_or_default();
    let threads: Option<usize> = take(&mut t, "threads")?;
    if threads == Some(0) {
        return Err(ConfigError::Invalid { key: "threads".into(), message: "must be at least 1".into() });
    }
    let need_seed = || seed.ok_or(ConfigError::Missing("seed"));
    let invalid = |key: &str, message: String| ConfigError::Invalid { key: key.into(), message };
    let suite = match suite {
        Suite::Rpmp => {
            let a: RpmpArgs = suite_args(t)?;
            let metric = match a.metric.unwrap_or(MetricArg::Hamming) {
                MetricArg::Hamming => MetricKind::Hamming,
                MetricArg::Weighted => MetricKind::Weighted,
            };
            let mut c = RpmpConfig::new(
                required(a.n, "n")?,
                required(a.k, "k")?,
                metric,
                a.trials.unwrap_or(100),
                need_seed()?,
            );
            c.sample_size = a.sample_size.unwrap_or(1);
            c.unbalanced_r = a.unbalanced_r.unwrap_or(0);
            c.counting = a.counting.map(Into::into).unwrap_or(PartnerCounting::AlgorithmI);
            c.beta = a.beta;
            c.groups = a.groups.unwrap_or(false);
            c.validate().map_err(|e| invalid("rpmp", e.to_string()))?;
            SuiteConfig::Rpmp(c)
        }
        Suite::Line => {
            let a: LineArgs = suite_args(t)?;
            let config = LineExperimentConfig {
                lambda: required(a.lambda, "lambda")?,
                mu: required(a.mu, "mu")?,
                window: a.window.unwrap_or(2000.0),
                trials: a.trials.unwrap_or(10),
                seed: need_seed()?,
                tail_grid: a.tail_grid.unwrap_or_default(),
                keep_records: false,
            };
            config.params().map_err(|e| {
                let key = match e {
                    LineError::BadWindow(_) | LineError::NoInterior { .. } => "window",
                    _ => "lambda",
                };
                invalid(key, e.to_string())
            })?;
            if config.trials == 0 {
                return Err(invalid("trials", "must be at least 1".into()));
            }
            SuiteConfig::Line { config, records: a.records.unwrap_or(false) }
        }
        Suite::Exact => {
            let a: ExactArgs = suite_args(t)?;
            let op = required(a.op, "op")?;
            match op {
                ExactOp::E | ExactOp::D | ExactOp::Oracle if a.gaps.is_none() => {
                    return Err(ConfigError::Missing("gaps"))
                }
                ExactOp::Partitions | ExactOp::Weights if a.k.is_none() => {
                    return Err(ConfigError::Missing("k"))
                }
                _ => {}
            }
            if let Some(g) = &a.gaps {
                crate::exact::GapSequence::parse(g).map_err(|e| invalid("gaps", e.to_string()))?;
            }
            SuiteConfig::Exact(ExactJob {
                op,
                gaps: a.gaps,
                k: a.k,
                tie: a.tie.unwrap_or(TieArg::Average),
                samples: a.samples.unwrap_or(DEFAULT_EXACT_SAMPLES),
            })
        }
        Suite::Enumerate => {
            let a: EnumerateArgs = suite_args(t)?;
            SuiteConfig::Enumerate(EnumerateJob { instance: required(a.instance, "instance")? })
        }
        Suite::Validate => {
            let a: ValidateArgs = suite_args(t)?;
            if let Some(bad) = a.criteria.iter().flatten().find(|&&c| !(1..=13).contains(&c)) {
                return Err(invalid("criteria", format!("no criterion {bad}; ids run from 1 to 13")));
            }
            SuiteConfig::Validate(ValidateJob { criteria: a.criteria })
        }
    };
    Ok(ExperimentConfig { seed, out, format, threads, suite })
}

/// Parses a flat TOML config file.
pub fn parse_config_text(suite: Suite, text: &str) -> Result<ExperimentConfig, ConfigError> {
    let table: Table = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    from_table(suite, table)
}

fn read_config_file(path: &Path) -> Result<Table, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Syntax(format!("cannot read {}: {e}", path.display())))?;
    let table: Table = toml::from_str(&text)
        .map_err(|e| ConfigError::Syntax(format!("{}: {e}", path.display())))?;
    if table.contains_key("config") {
        return Err(ConfigError::UnknownKey("config".into()));
    }
    Ok(table)
}

/// Merges the optional config file with command-line flags, flags taking
/// precedence, and resolves the result.
pub fn parse_config(global: &GlobalArgs, args: &SuiteArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut table = match &global.config {
        Some(path) => read_config_file(path)?,
        None => Table::new(),
    };
    if let Some(seed) = global.seed {
        table.insert("seed".into(), seed_value(seed));
    }
    if let Some(out) = &global.out {
        table.insert("out".into(), Value::String(out.display().to_string()));
    }
    if let Some(f) = global.format {
        table.insert("format".into(), Value::String(format_name(f).into()));
    }
    if let Some(threads) = global.threads {
        table.insert("threads".into(), Value::Integer(threads as i64));
    }
    table.extend(args.to_table());
    from_table(args.suite(), table)
}
