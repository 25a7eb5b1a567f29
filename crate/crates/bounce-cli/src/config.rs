//! Run configuration: command-line flags, optional TOML config file, and the
//! merge rule (flags win).

use std::path::PathBuf;

use serde::Deserialize;

/// Values accepted from a TOML config file; every key is optional and any
/// explicit command-line flag overrides it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub benchmark: Option<String>,
    pub dim: Option<usize>,
    pub wcnf: Option<PathBuf>,
    pub wcnf_sha256: Option<String>,
    pub randomize_optimum: Option<u64>,
    pub instance_seed: Option<u64>,
    pub evals: Option<usize>,
    pub batch: Option<usize>,
    pub budget_to_full: Option<usize>,
    pub d_init: Option<usize>,
    pub split_factor: Option<usize>,
    pub seeds: Option<String>,
    pub low_sequency: Option<bool>,
    pub legacy_tr: Option<bool>,
    pub algorithm: Option<String>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub mc_samples: Option<usize>,
    pub fit_restarts: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))
    }
}

/// Parses a seed list: `"7"`, `"0,3,9"`, or a half-open range `"0..50"`.
pub fn parse_seeds(spec: &str) -> anyhow::Result<Vec<u64>> {
    let spec = spec.trim();
    if let Some((start, end)) = spec.split_once("..") {
        let start: u64 = start.trim().parse()?;
        let end: u64 = end.trim().parse()?;
        anyhow::ensure!(start < end, "empty seed range {spec:?}");
        return Ok((start..end).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(Into::into))
        .collect()
}

/// Benchmarks that default to 500 evaluations instead of 200.
pub fn default_evals(benchmark: &str) -> usize {
    match benchmark {
        "labs" | "maxsat" | "clusterexpansion" => 500,
        _ => 200,
    }
}

/// Default budget to reach the input dimensionality: 100 evaluations for
/// batch sizes up to 5, then 25 per batch slot.
pub fn default_budget_to_full(batch: usize) -> usize {
    if batch <= 5 {
        100
    } else {
        25 * batch
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_specs_parse() {
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert_eq!(parse_seeds("0,3,9").unwrap(), vec![0, 3, 9]);
        assert_eq!(parse_seeds("0..4").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_seeds("5..5").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn defaults_match_study_setup() {
        assert_eq!(default_evals("labs"), 500);
        assert_eq!(default_evals("clusterexpansion"), 500);
        assert_eq!(default_evals("pestcontrol"), 200);
        assert_eq!(default_budget_to_full(1), 100);
        assert_eq!(default_budget_to_full(5), 100);
        assert_eq!(default_budget_to_full(10), 250);
        assert_eq!(default_budget_to_full(20), 500);
    }

    #[test]
    fn file_config_rejects_unknown_keys() {
        let ok: FileConfig = toml::from_str("benchmark = \"labs\"\nevals = 10\n").unwrap();
        assert_eq!(ok.benchmark.as_deref(), Some("labs"));
        let err: Result<FileConfig, _> = toml::from_str("no_such_key = 1\n");
        assert!(err.is_err());
    }
}
