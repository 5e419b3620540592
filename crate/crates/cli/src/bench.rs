//! Declarative benchmark runs: a TOML config names the dataset, the
//! constraint files, an optional stratified-sampling step, a noise grid, the
//! seeds and the algorithms. Each (seed, noise, algorithm) cell yields one
//! report line in a JSON-lines file; a CSV summary adds the per-instance
//! deletion overhead and per-algorithm repair quality when exact metrics
//! are enabled.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use rsrepair_core::heuristics::AlgorithmChoice;
use rsrepair_core::metrics::{deletion_overhead, repair_quality};
use rsrepair_core::noise::{inject_noise, stratified_sample, NoiseSpec};
use rsrepair_core::rc::Proportion;
use rsrepair_core::relation::Relation;
use rsrepair_core::Error;

use crate::csvio::load_relation_csv;
use crate::dsl::{bind_fds, parse_fd_dsl, parse_rc_dsl};
use crate::report::execute;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub input: PathBuf,
    pub sensitive: String,
    pub fds: PathBuf,
    pub rc: PathBuf,
    pub algorithms: Vec<String>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_node_cap")]
    pub node_cap: u64,
    /// Compute deletion overhead and repair quality with the exact solver.
    #[serde(default)]
    pub metrics: bool,
    pub out_jsonl: PathBuf,
    pub out_csv: PathBuf,
    /// Per-group sample sizes; omit to use the input as-is.
    #[serde(default)]
    pub sampling: Option<BTreeMap<String, usize>>,
    /// Noise grid; omit for a single noise-free run.
    #[serde(default)]
    pub noise: Vec<NoiseEntry>,
}

fn default_node_cap() -> u64 {
    1_000_000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseEntry {
    /// Overall level as `num/den`, e.g. `"5/100"`.
    pub level: String,
    /// Group-1/Group-2 budget shares, e.g. `[20, 80]`; must sum to 100.
    pub group_split: [u64; 2],
    /// Explicit (Group-1, Group-2) sensitive values; defaults to ascending
    /// value order.
    #[serde(default)]
    pub groups: Option<[String; 2]>,
}

fn parse_level(text: &str) -> Result<Proportion> {
    let (num, den) = text
        .split_once('/')
        .with_context(|| format!("noise level {text:?} is not `num/den`"))?;
    Ok(Proportion::new(num.trim().parse()?, den.trim().parse()?)?)
}

impl NoiseEntry {
    fn to_spec(&self, seed: u64) -> Result<NoiseSpec> {
        let [first, second] = self.group_split;
        if first + second != 100 {
            bail!("group_split {:?} must sum to 100", self.group_split);
        }
        Ok(NoiseSpec {
            overall_level: parse_level(&self.level)?,
            group_split: (Proportion::new(first, 100)?, Proportion::new(second, 100)?),
            groups: self.groups.clone().map(|[a, b]| (a, b)),
            seed,
        })
    }

    fn label(&self) -> String {
        format!("{}@{}-{}", self.level, self.group_split[0], self.group_split[1])
    }
}

pub fn load_config(path: &Path) -> Result<BenchConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: BenchConfig =
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if config.algorithms.is_empty() {
        bail!("no algorithms configured");
    }
    if config.seeds.is_empty() {
        bail!("no seeds configured");
    }
    Ok(config)
}

/// Relative paths in the config resolve against the config file location.
fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

pub fn run_bench(config_path: &Path) -> Result<()> {
    let config = load_config(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new(".")).to_path_buf();

    let input = load_relation_csv(&resolve(&base, &config.input), &config.sensitive)?;
    let named = parse_fd_dsl(&fs::read_to_string(resolve(&base, &config.fds))?)?;
    let fds = bind_fds(&named, input.schema())?;
    let rc = parse_rc_dsl(&fs::read_to_string(resolve(&base, &config.rc))?)?;
    let algorithms: Vec<AlgorithmChoice> = config
        .algorithms
        .iter()
        .map(|name| name.parse())
        .collect::<Result<_, Error>>()?;

    let mut jsonl = fs::File::create(resolve(&base, &config.out_jsonl))?;
    let mut csv_out = csv::Writer::from_path(resolve(&base, &config.out_csv))?;
    csv_out.write_record([
        "seed",
        "noise",
        "algorithm",
        "input_size",
        "output_size",
        "deleted",
        "satisfies_fds",
        "satisfies_rc",
        "runtime_ms",
        "status",
        "deletion_overhead",
        "repair_quality",
    ])?;

    // One no-noise entry keeps the grid non-empty.
    let noise_entries: Vec<Option<&NoiseEntry>> = if config.noise.is_empty() {
        vec![None]
    } else {
        config.noise.iter().map(Some).collect()
    };

    for &seed in &config.seeds {
        for noise in &noise_entries {
            let mut instance: Relation = match &config.sampling {
                Some(sizes) => stratified_sample(&input, sizes, seed)?,
                None => input.clone(),
            };
            let noise_label = match noise {
                Some(entry) => {
                    instance = inject_noise(&instance, &fds, &entry.to_spec(seed)?)?;
                    entry.label()
                }
                None => "none".to_string(),
            };

            let overhead: Option<String> = if config.metrics {
                match deletion_overhead(&instance, &fds, &rc, config.node_cap) {
                    Ok(overhead) => Some(
                        overhead
                            .ratio_f64()
                            .map_or("inf".to_string(), |r| format!("{r:.4}")),
                    ),
                    Err(err) => {
                        log::warn!("deletion overhead unavailable: {err}");
                        Some("na".to_string())
                    }
                }
            } else {
                None
            };

            for &algorithm in &algorithms {
                match execute(algorithm, &instance, &fds, &rc, config.node_cap) {
                    Ok((output, mut report, runtime_ms)) => {
                        report.runtime_ms = Some(runtime_ms);
                        writeln!(jsonl, "{}", serde_json::to_string(&report)?)?;
                        let quality: String = if config.metrics {
                            match repair_quality(&instance, &output, &fds, &rc, config.node_cap)
                            {
                                Ok(quality) => format!("{:.4}", quality.ratio_f64()),
                                Err(err) => {
                                    log::warn!("repair quality unavailable: {err}");
                                    "na".to_string()
                                }
                            }
                        } else {
                            String::new()
                        };
                        csv_out.write_record([
                            seed.to_string(),
                            noise_label.clone(),
                            report.algorithm.clone(),
                            report.input_size.to_string(),
                            report.output_size.to_string(),
                            report.deleted.to_string(),
                            report.satisfies_fds.to_string(),
                            report.satisfies_rc.to_string(),
                            runtime_ms.to_string(),
                            report.status.clone(),
                            overhead.clone().unwrap_or_default(),
                            quality,
                        ])?;
                    }
                    Err(err) => {
                        // A failed cell (typically a solver cap) is recorded
                        // and the grid keeps going.
                        log::warn!("{algorithm} failed on seed {seed}, noise {noise_label}: {err}");
                        csv_out.write_record([
                            seed.to_string(),
                            noise_label.clone(),
                            algorithm.name().to_string(),
                            instance.len().to_string(),
                            String::new(),
                            String::new(),
                            String::new(),
                            String::new(),
                            String::new(),
                            "error".to_string(),
                            overhead.clone().unwrap_or_default(),
                            String::new(),
                        ])?;
                    }
                }
            }
        }
    }
    csv_out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_with_defaults() {
        let text = r#"
            input = "data.csv"
            sensitive = "S"
            fds = "fds.txt"
            rc = "rc.txt"
            algorithms = ["lhschain-dp"]
            seeds = [1, 2]
            out_jsonl = "runs.jsonl"
            out_csv = "summary.csv"

            [[noise]]
            level = "5/100"
            group_split = [20, 80]
        "#;
        let config: BenchConfig = toml::from_str(text).unwrap();
        assert_eq!(config.node_cap, 1_000_000);
        assert!(!config.metrics);
        assert_eq!(config.noise.len(), 1);
        assert_eq!(config.noise[0].label(), "5/100@20-80");
        let spec = config.noise[0].to_spec(7).unwrap();
        assert_eq!(spec.seed, 7);
    }

    #[test]
    fn bad_split_rejected() {
        let entry = NoiseEntry {
            level: "1/10".into(),
            group_split: [30, 30],
            groups: None,
        };
        assert!(entry.to_spec(1).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"
            input = "data.csv"
            sensitive = "S"
            fds = "fds.txt"
            rc = "rc.txt"
            algorithms = ["lhschain-dp"]
            seeds = [1]
            out_jsonl = "a"
            out_csv = "b"
            typo_field = 1
        "#;
        assert!(toml::from_str::<BenchConfig>(text).is_err());
    }
}
