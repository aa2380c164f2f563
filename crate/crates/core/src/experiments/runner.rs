use std::path::PathBuf;
use std::time::{Duration, SystemTime};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{EnumerateJob, ExactJob, ExactOp, ExperimentConfig, Format, SuiteConfig, TieArg, DEFAULT_VALIDATE_SEED};
use super::manifest::{manifest_path, RunManifest};
use super::validate::run_validation;
use super::{ConfigError, ExperimentError};
use crate::exact::{
    estimate_expected_greedy_cost, expected_greedy_cost, greedy_cost, odd_partitions,
    partition_weight, permutation_oracle, GapSequence, Rational, TiePolicy, EXPECTATION_CAP,
};
use crate::hypercube::rpmp_experiment;
use crate::line::line_experiment;
use crate::matching::{enumerate_stable_matchings, unmatched_agents, InstanceJson, MatchingInstance};
use crate::rng::substream;

/// Header row of each CSV result file.
pub const CSV_HEADERS: [(&str, &str); 6] = [
    ("rpmp", "trial,n,k,metric,multiplePartnerCount,uniqueCertificate,sampledAgentX"),
    ("line", "trial,waveId,N_plus,N_minus,blueCoord,X,matchedRedCoord,matcher"),
    ("exact", "op,numerator,denominator,value,stdError"),
    ("exact-partitions", "partition,r,numerator,denominator,value"),
    ("enumerate", "matching,man,woman"),
    ("validate", "id,name,passed,measured,threshold,seconds"),
];

fn header(name: &str) -> &'static str {
    CSV_HEADERS.iter().find(|h| h.0 == name).map(|h| h.1).expect("known schema")
}

/// Result of one run, before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub body: Vec<u8>,
    pub summary: Value,
    /// False only when a validation criterion failed.
    pub passed: bool,
}

struct Csv {
    w: csv::Writer<Vec<u8>>,
}

impl Csv {
    fn new(schema: &str) -> Self {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(header(schema).split(',')).expect("in-memory write");
        Csv { w }
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        self.w.write_record(fields.into_iter().collect::<Vec<_>>()).expect("in-memory write");
    }

    fn finish(self) -> Vec<u8> {
        self.w.into_inner().expect("in-memory flush")
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, ExperimentError> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| ExperimentError::Output(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn summary_of<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn rational_json(r: &Rational) -> Value {
    use num_traits::ToPrimitive;
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
        "value": r.to_f64(),
    })
}

/// Runs the configured suite and renders its result file.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    match &cfg.suite {
        SuiteConfig::Rpmp(rc) => {
            let (stats, trials) = rpmp_experiment(rc)?;
            let body = match cfg.format {
                Format::Csv => {
                    let mut csv = Csv::new("rpmp");
                    for t in &trials {
                        for x in &t.sampled_x {
                            csv.row([
                                t.trial.to_string(),
                                rc.n.to_string(),
                                rc.k.to_string(),
                                rc.metric.name().to_string(),
                                t.multiple_partner_count.to_string(),
                                t.unique_certificate.to_string(),
                                x.to_string(),
                            ]);
                        }
                    }
                    csv.finish()
                }
                Format::Json => to_json(&json!({ "stats": stats, "trials": trials }))?,
            };
            let mut summary = summary_of(&stats);
            if let Value::Object(m) = &mut summary {
                m.remove("matchingDistanceSamples");
            }
            Ok(RunOutput { body, summary, passed: true })
        }
        SuiteConfig::Line { config, records } => {
            let mut lc = config.clone();
            lc.keep_records = cfg.format == Format::Csv || *records;
            let (stats, recs) = line_experiment(&lc)?;
            let body = match cfg.format {
                Format::Csv => {
                    let mut csv = Csv::new("line");
                    for r in &recs {
                        csv.row([
                            r.trial.to_string(),
                            r.wave_id.to_string(),
                            r.n_plus.to_string(),
                            r.n_minus.to_string(),
                            r.blue_coord.to_string(),
                            opt(r.x),
                            opt(r.matched_red_coord),
                            r.matcher.as_str().to_string(),
                        ]);
                    }
                    csv.finish()
                }
                Format::Json if *records => to_json(&json!({ "stats": stats, "records": recs }))?,
                Format::Json => to_json(&json!({ "stats": stats }))?,
            };
            Ok(RunOutput { body, summary: summary_of(&stats), passed: true })
        }
        SuiteConfig::Exact(job) => run_exact(cfg, job),
        SuiteConfig::Enumerate(job) => run_enumerate(cfg.format, job),
        SuiteConfig::Validate(job) => {
            let report = run_validation(cfg.seed.unwrap_or(DEFAULT_VALIDATE_SEED), job.criteria.as_deref());
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let body = match cfg.format {
                Format::Csv => {
                    let mut csv = Csv::new("validate");
                    for c in &report.criteria {
                        csv.row([
                            c.id.to_string(),
                            c.name.to_string(),
                            c.passed.to_string(),
                            c.measured.clone(),
                            c.threshold.clone(),
                            format!("{:.3}", c.seconds),
                        ]);
                    }
                    csv.finish()
                }
                Format::Json => to_json(&report)?,
            };
            Ok(RunOutput { body, summary: summary_of(&report), passed: report.passed })
        }
    }
}

fn run_exact(cfg: &ExperimentConfig, job: &ExactJob) -> Result<RunOutput, ExperimentError> {
    let gaps = job.gaps.as_deref().map(GapSequence::parse).transpose()?;
    let op_name = match job.op {
        ExactOp::E => "E",
        ExactOp::D => "D",
        ExactOp::Oracle => "oracle",
        ExactOp::Partitions => "partitions",
        ExactOp::Weights => "weights",
    };
    let single = |value: &Rational| -> Result<RunOutput, ExperimentError> {
        let v = rational_json(value);
        let body = match cfg.format {
            Format::Csv => {
                let mut csv = Csv::new("exact");
                csv.row([
                    op_name.to_string(),
                    value.numer().to_string(),
                    value.denom().to_string(),
                    v["value"].to_string(),
                    String::new(),
                ]);
                csv.finish()
            }
            Format::Json => to_json(&json!({ "op": op_name, "gaps": job.gaps, "k": job.k, "result": v }))?,
        };
        Ok(RunOutput { body, summary: json!({ "op": op_name, "result": v }), passed: true })
    };
    match job.op {
        ExactOp::E => {
            let x = gaps.expect("validated");
            if x.len() <= EXPECTATION_CAP {
                return single(&expected_greedy_cost(&x)?);
            }
            let seed = cfg.seed.ok_or(ConfigError::Missing("seed"))?;
            let mut rng = substream(seed, "exact", 0);
            let est = estimate_expected_greedy_cost(&x, job.samples, &mut rng);
            let result = json!({
                "estimate": est.value,
                "stdError": est.std_error,
                "samplesPerPartition": est.samples_per_partition,
                "partitions": est.partitions,
            });
            let body = match cfg.format {
                Format::Csv => {
                    let mut csv = Csv::new("exact");
                    csv.row([
                        "E-estimate".to_string(),
                        String::new(),
                        String::new(),
                        est.value.to_string(),
                        est.std_error.to_string(),
                    ]);
                    csv.finish()
                }
                Format::Json => to_json(&json!({ "op": "E", "estimated": true, "gaps": job.gaps, "result": result }))?,
            };
            Ok(RunOutput { body, summary: json!({ "op": "E", "estimated": true, "result": result }), passed: true })
        }
        ExactOp::D => {
            let policy = match job.tie {
                TieArg::Average => TiePolicy::Average,
                TieArg::Leftmost => TiePolicy::Leftmost,
            };
            single(&greedy_cost(&gaps.expect("validated"), policy)?)
        }
        ExactOp::Oracle => single(&permutation_oracle(&gaps.expect("validated"))?),
        ExactOp::Weights => {
            let total: Rational = odd_partitions(job.k.expect("validated")).iter().map(partition_weight).sum();
            single(&total)
        }
        ExactOp::Partitions => {
            let parts = odd_partitions(job.k.expect("validated"));
            let rows: Vec<Value> = parts
                .iter()
                .map(|o| {
                    let mut v = rational_json(&partition_weight(o));
                    v["partition"] = json!(o.parts());
                    v["r"] = json!(o.r());
                    v
                })
                .collect();
            let body = match cfg.format {
                Format::Csv => {
                    let mut csv = Csv::new("exact-partitions");
                    for (o, v) in parts.iter().zip(&rows) {
                        csv.row([
                            o.to_string(),
                            o.r().to_string(),
                            v["numerator"].as_str().unwrap_or_default().to_string(),
                            v["denominator"].as_str().unwrap_or_default().to_string(),
                            v["value"].to_string(),
                        ]);
                    }
                    csv.finish()
                }
                Format::Json => to_json(&json!({ "op": op_name, "k": job.k, "partitions": rows }))?,
            };
            Ok(RunOutput { body, summary: json!({ "op": op_name, "k": job.k, "count": parts.len() }), passed: true })
        }
    }
}

fn run_enumerate(format: Format, job: &EnumerateJob) -> Result<RunOutput, ExperimentError> {
    let text = std::fs::read_to_string(&job.instance).map_err(|e| ExperimentError::io(&job.instance, e))?;
    let parsed: InstanceJson = serde_json::from_str(&text).map_err(|e| ExperimentError::io(&job.instance, e))?;
    let inst = MatchingInstance::try_from(parsed)?;
    let all = enumerate_stable_matchings(&inst)?;
    let unmatched: Vec<String> = match all.first() {
        Some(mu) => unmatched_agents(mu, &inst)
            .expect("enumerated matchings fit the instance")
            .iter()
            .map(|a| a.to_string())
            .collect(),
        None => Vec::new(),
    };
    let body = match format {
        Format::Csv => {
            let mut csv = Csv::new("enumerate");
            for (i, mu) in all.iter().enumerate() {
                for (m, w) in mu.pairs() {
                    csv.row([i.to_string(), m.to_string(), w.to_string()]);
                }
            }
            csv.finish()
        }
        Format::Json => to_json(&json!({ "count": all.len(), "matchings": all, "unmatched": unmatched }))?,
    };
    Ok(RunOutput { body, summary: json!({ "count": all.len(), "unmatched": unmatched }), passed: true })
}

/// Writes the result to `cfg.out` (stdout when unset) and, for files, the
/// manifest next to it. Returns the manifest path.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    output: &RunOutput,
    started: SystemTime,
    elapsed: Duration,
) -> Result<Option<PathBuf>, ExperimentError> {
    use std::io::Write;
    let Some(out) = &cfg.out else {
        std::io::stdout()
            .write_all(&output.body)
            .map_err(|e| ExperimentError::Output(e.to_string()))?;
        return Ok(None);
    };
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    }
    std::fs::write(out, &output.body).map_err(|e| ExperimentError::io(out, e))?;
    let manifest = RunManifest::new(cfg, output.summary.clone(), started, elapsed);
    let path = manifest_path(out);
    std::fs::write(&path, to_json(&manifest)?).map_err(|e| ExperimentError::io(&path, e))?;
    Ok(Some(path))
}
