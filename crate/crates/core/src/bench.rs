//! Parameter sweeps over the system parameters, one CSV row per run.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{sample_sets, RoadNetwork};
use crate::output::format_pairs;
use crate::partition::{build_hierarchy, PartitionHierarchy, SmoothingConfig};
use crate::query::QueryParams;
use crate::sched::{closest_pairs_parallel, SchedulerConfig};

pub const CSV_HEADER: &str = "dataset,param,value,rep,wall_ms,expanded,settled,updates,checksum";

/// Value lists to sweep. Each list is swept on its own while every other
/// parameter stays at its default.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct BenchSpec {
    pub alpha_values: Vec<f64>,
    pub parallelism_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub r_pcts: Vec<f64>,
    pub s_pcts: Vec<f64>,
    pub default_alpha: f64,
    pub default_parallelism: usize,
    pub default_k: usize,
    pub default_r_pct: f64,
    pub default_s_pct: f64,
    pub repetitions: usize,
    pub seed: u64,
    pub leaf_size_limit: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        let pcts = vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0];
        BenchSpec {
            alpha_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            parallelism_values: vec![2, 4, 6, 8, 10, 12, 14],
            k_values: vec![20, 40, 60, 80, 100, 120, 140],
            r_pcts: pcts.clone(),
            s_pcts: pcts,
            default_alpha: 0.0,
            default_parallelism: 8,
            default_k: 80,
            default_r_pct: 8.0,
            default_s_pct: 8.0,
            repetitions: 1,
            seed: 1,
            leaf_size_limit: 4096,
        }
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub param: &'static str,
    pub value: String,
    pub alpha: f64,
    pub parallelism: usize,
    pub k: usize,
    pub r_pct: f64,
    pub s_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub dataset: String,
    pub param: String,
    pub value: String,
    pub rep: usize,
    pub wall_ms: f64,
    pub expanded: u64,
    pub settled: u64,
    pub updates: u64,
    pub checksum: String,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{},{},{},{}",
            self.dataset,
            self.param,
            self.value,
            self.rep,
            self.wall_ms,
            self.expanded,
            self.settled,
            self.updates,
            self.checksum
        )
    }
}

impl BenchSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: BenchSpec = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let alphas = self.alpha_values.iter().chain([&self.default_alpha]);
        if let Some(a) = alphas.into_iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::domain(format!("alpha must lie in [0, 1], got {a}")));
        }
        let pcts = self
            .r_pcts
            .iter()
            .chain(&self.s_pcts)
            .chain([&self.default_r_pct, &self.default_s_pct]);
        if let Some(p) = pcts.into_iter().find(|p| !(0.0..=100.0).contains(*p)) {
            return Err(Error::domain(format!("set percentage must lie in [0, 100], got {p}")));
        }
        if self.parallelism_values.contains(&0) || self.default_parallelism == 0 {
            return Err(Error::domain("parallelism must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::domain("repetitions must be at least 1"));
        }
        if self.leaf_size_limit == 0 {
            return Err(Error::domain("leaf size limit must be at least 1"));
        }
        Ok(())
    }

    fn base(&self, param: &'static str, value: String) -> BenchConfig {
        BenchConfig {
            param,
            value,
            alpha: self.default_alpha,
            parallelism: self.default_parallelism,
            k: self.default_k,
            r_pct: self.default_r_pct,
            s_pct: self.default_s_pct,
        }
    }

    /// Every sweep point in order: alpha, parallelism, k, R size, S size.
    pub fn configurations(&self) -> Vec<BenchConfig> {
        let mut out = Vec::new();
        for &a in &self.alpha_values {
            out.push(BenchConfig {
                alpha: a,
                ..self.base("alpha", a.to_string())
            });
        }
        for &p in &self.parallelism_values {
            out.push(BenchConfig {
                parallelism: p,
                ..self.base("parallelism", p.to_string())
            });
        }
        for &k in &self.k_values {
            out.push(BenchConfig {
                k,
                ..self.base("k", k.to_string())
            });
        }
        for &r in &self.r_pcts {
            out.push(BenchConfig {
                r_pct: r,
                ..self.base("r_pct", r.to_string())
            });
        }
        for &s in &self.s_pcts {
            out.push(BenchConfig {
                s_pct: s,
                ..self.base("s_pct", s.to_string())
            });
        }
        out
    }
}

/// Hex SHA-256 of the result text.
pub fn checksum(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Runs every configuration of `spec` on `net` sequentially and hands each
/// record to `sink` as soon as it exists. Stops at the first failure.
pub fn run_bench(
    net: &RoadNetwork,
    dataset: &str,
    spec: &BenchSpec,
    mut sink: impl FnMut(&BenchRecord) -> Result<()>,
) -> Result<()> {
    spec.validate()?;
    let mut hierarchies: Vec<(f64, PartitionHierarchy)> = Vec::new();
    for cfg in spec.configurations() {
        let idx = match hierarchies.iter().position(|(a, _)| *a == cfg.alpha) {
            Some(i) => i,
            None => {
                let h = build_hierarchy(net, spec.leaf_size_limit, SmoothingConfig::new(cfg.alpha)?)?;
                hierarchies.push((cfg.alpha, h));
                hierarchies.len() - 1
            }
        };
        let h = &hierarchies[idx].1;
        let sets = sample_sets(net, cfg.r_pct, cfg.s_pct, spec.seed)?;
        let params = QueryParams::closest_pairs(cfg.k, f64::INFINITY)?;
        let sched = SchedulerConfig {
            parallelism: cfg.parallelism,
            ..SchedulerConfig::default()
        };
        for rep in 0..spec.repetitions {
            let start = Instant::now();
            let outcome = closest_pairs_parallel(net, h, &sets, params, &sched)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            sink(&BenchRecord {
                dataset: dataset.to_string(),
                param: cfg.param.to_string(),
                value: cfg.value.clone(),
                rep,
                wall_ms,
                expanded: outcome.stats.expanded_cross_edges,
                settled: outcome.stats.settled_vertices,
                updates: outcome.stats.threshold_updates,
                checksum: checksum(&format_pairs(net, &outcome.pairs)),
            })?;
        }
    }
    Ok(())
}

/// Opens `path` for appending rows. A new or empty file gets the header;
/// an existing file must already start with it.
pub fn open_csv(path: &Path) -> Result<File> {
    if path.exists() {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut first = String::new();
        BufReader::new(f)
            .read_line(&mut first)
            .map_err(|e| Error::io(path, e))?;
        if !first.is_empty() && first.trim_end_matches(['\r', '\n']) != CSV_HEADER {
            return Err(Error::Format(format!(
                "{} has a different CSV header: {}",
                path.display(),
                first.trim_end()
            )));
        }
        let mut f = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        if first.is_empty() {
            writeln!(f, "{CSV_HEADER}").map_err(|e| Error::io(path, e))?;
        }
        Ok(f)
    } else {
        let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
        writeln!(f, "{CSV_HEADER}").map_err(|e| Error::io(path, e))?;
        Ok(f)
    }
}
