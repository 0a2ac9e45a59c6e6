//! Config files: a flat key-value TOML for experiment runs and another for
//! synthetic corpus generation.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use elicit_core::harness::{RunSettings, Scenario};
use elicit_core::mf::Hyperparams;
use elicit_core::strategies::StrategyKind;
use elicit_core::synth::SynthSpec;

/// Strategy list entry meaning "baseline only".
pub const BASELINE_NAME: &str = "none";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    target_csv: PathBuf,
    auxiliary_csv: Option<PathBuf>,
    scenarios: Option<Vec<String>>,
    strategies: Vec<String>,
    folds: Option<usize>,
    max_elicited: Option<usize>,
    top_n: Option<usize>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    factor_count: Option<usize>,
    learning_rate: Option<f64>,
    regularization: Option<f64>,
    epochs_per_factor: Option<usize>,
}

/// A validated experiment description. The baseline always runs; the
/// strategy list only controls which elicitation strategies run on top.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub target_csv: PathBuf,
    pub auxiliary_csv: Option<PathBuf>,
    pub scenarios: Vec<Scenario>,
    pub strategies: Vec<StrategyKind>,
    pub settings: RunSettings,
    pub output_dir: PathBuf,
}

pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let raw: RawRunConfig = toml::from_str(&text)
        .with_context(|| format!("cannot parse config {}", path.display()))?;

    let scenario_names = raw.scenarios.unwrap_or_else(|| vec!["single".to_string()]);
    if scenario_names.is_empty() {
        bail!("config key scenarios: list is empty");
    }
    let mut scenarios = Vec::new();
    for name in &scenario_names {
        let scenario: Scenario =
            name.parse().map_err(|e| anyhow!("config key scenarios: {e}"))?;
        if !scenarios.contains(&scenario) {
            scenarios.push(scenario);
        }
    }
    if scenarios.contains(&Scenario::CrossDomain) && raw.auxiliary_csv.is_none() {
        bail!("config key scenarios: \"cross\" requires auxiliary_csv");
    }

    if raw.strategies.is_empty() {
        bail!("config key strategies: list is empty");
    }
    let mut strategies = Vec::new();
    for name in &raw.strategies {
        if name == BASELINE_NAME {
            continue;
        }
        let kind: StrategyKind =
            name.parse().map_err(|e| anyhow!("config key strategies: {e}"))?;
        if !strategies.contains(&kind) {
            strategies.push(kind);
        }
    }

    let defaults = Hyperparams::default();
    let hyperparams = Hyperparams {
        factor_count: raw.factor_count.unwrap_or(defaults.factor_count),
        learning_rate: raw.learning_rate.unwrap_or(defaults.learning_rate),
        regularization: raw.regularization.unwrap_or(defaults.regularization),
        epochs_per_factor: raw.epochs_per_factor.unwrap_or(defaults.epochs_per_factor),
        ..defaults
    };
    hyperparams.validate().map_err(|e| anyhow!("config: {e}"))?;

    let settings = RunSettings {
        hyperparams,
        fold_count: raw.folds.unwrap_or(5),
        max_elicited: raw.max_elicited.unwrap_or(5),
        top_n: raw.top_n.unwrap_or(10),
        seed: raw.seed.unwrap_or(0),
    };
    if settings.fold_count == 0 {
        bail!("config key folds: must be at least 1");
    }
    if settings.top_n == 0 {
        bail!("config key top_n: must be at least 1");
    }

    Ok(RunConfig {
        target_csv: raw.target_csv,
        auxiliary_csv: raw.auxiliary_csv,
        scenarios,
        strategies,
        settings,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("results")),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSynthConfig {
    users: usize,
    target_items: usize,
    aux_items: usize,
    density: f64,
    correlation: f64,
    shared_item_factors: Option<bool>,
    noise: Option<f64>,
    rank: Option<usize>,
    min_per_domain: Option<usize>,
    seed: Option<u64>,
    target_out: PathBuf,
    auxiliary_out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub spec: SynthSpec,
    pub target_out: PathBuf,
    pub auxiliary_out: PathBuf,
}

pub fn load_synth_config(path: &Path) -> Result<SynthConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec {}", path.display()))?;
    let raw: RawSynthConfig =
        toml::from_str(&text).with_context(|| format!("cannot parse spec {}", path.display()))?;
    let defaults = SynthSpec::default();
    let spec = SynthSpec {
        users: raw.users,
        target_items: raw.target_items,
        aux_items: raw.aux_items,
        density: raw.density,
        correlation: raw.correlation,
        shared_item_factors: raw.shared_item_factors.unwrap_or(false),
        noise: raw.noise.unwrap_or(defaults.noise),
        rank: raw.rank.unwrap_or(defaults.rank),
        min_per_domain: raw.min_per_domain.unwrap_or(defaults.min_per_domain),
        seed: raw.seed.unwrap_or(0),
    };
    spec.validate().map_err(|e| anyhow!("spec: {e}"))?;
    Ok(SynthConfig { spec, target_out: raw.target_out, auxiliary_out: raw.auxiliary_out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn minimal_run_config_gets_defaults() {
        let f = config_file(
            "target_csv = \"t.csv\"\nstrategies = [\"popularity\"]\n",
        );
        let cfg = load_run_config(f.path()).unwrap();
        assert_eq!(cfg.scenarios, vec![Scenario::SingleDomain]);
        assert_eq!(cfg.strategies, vec![StrategyKind::Popularity]);
        assert_eq!(cfg.settings.fold_count, 5);
        assert_eq!(cfg.settings.max_elicited, 5);
        assert_eq!(cfg.settings.top_n, 10);
        assert_eq!(cfg.settings.seed, 0);
        assert_eq!(cfg.settings.hyperparams, Hyperparams::default());
        assert_eq!(cfg.output_dir, PathBuf::from("results"));
    }

    #[test]
    fn full_run_config_overrides_everything() {
        let f = config_file(
            r#"
target_csv = "t.csv"
auxiliary_csv = "a.csv"
scenarios = ["single", "cross"]
strategies = ["none", "entropy0", "highest-predicted"]
folds = 3
max_elicited = 2
top_n = 7
seed = 99
output_dir = "out"
factor_count = 6
learning_rate = 0.01
regularization = 0.02
epochs_per_factor = 12
"#,
        );
        let cfg = load_run_config(f.path()).unwrap();
        assert_eq!(cfg.scenarios, vec![Scenario::SingleDomain, Scenario::CrossDomain]);
        assert_eq!(cfg.strategies, vec![StrategyKind::Entropy0, StrategyKind::HighestPredicted]);
        assert_eq!(cfg.settings.fold_count, 3);
        assert_eq!(cfg.settings.hyperparams.factor_count, 6);
        assert_eq!(cfg.settings.hyperparams.learning_rate, 0.01);
        assert_eq!(cfg.settings.hyperparams.regularization, 0.02);
        assert_eq!(cfg.settings.hyperparams.epochs_per_factor, 12);
        assert_eq!(cfg.settings.seed, 99);
    }

    #[test]
    fn baseline_only_config_is_valid() {
        let f = config_file("target_csv = \"t.csv\"\nstrategies = [\"none\"]\n");
        let cfg = load_run_config(f.path()).unwrap();
        assert!(cfg.strategies.is_empty());
    }

    #[test]
    fn cross_scenario_requires_auxiliary_path() {
        let f = config_file(
            "target_csv = \"t.csv\"\nscenarios = [\"cross\"]\nstrategies = [\"none\"]\n",
        );
        let err = load_run_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("auxiliary_csv"), "{err}");
    }

    #[test]
    fn unknown_strategy_is_rejected_with_the_key_name() {
        let f = config_file("target_csv = \"t.csv\"\nstrategies = [\"random\"]\n");
        let err = load_run_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("strategies"), "{err}");
    }

    #[test]
    fn empty_strategy_list_is_rejected() {
        let f = config_file("target_csv = \"t.csv\"\nstrategies = []\n");
        assert!(load_run_config(f.path()).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let f = config_file(
            "target_csv = \"t.csv\"\nstrategies = [\"none\"]\nlearning_rat = 0.1\n",
        );
        assert!(load_run_config(f.path()).is_err());
    }

    #[test]
    fn invalid_hyperparams_are_rejected_at_parse_time() {
        let f = config_file(
            "target_csv = \"t.csv\"\nstrategies = [\"none\"]\nlearning_rate = 0.0\n",
        );
        assert!(load_run_config(f.path()).is_err());
    }

    #[test]
    fn synth_config_round_trips() {
        let f = config_file(
            r#"
users = 50
target_items = 60
aux_items = 60
density = 0.3
correlation = 1.0
shared_item_factors = true
noise = 0.2
rank = 3
seed = 5
target_out = "target.csv"
auxiliary_out = "aux.csv"
"#,
        );
        let cfg = load_synth_config(f.path()).unwrap();
        assert_eq!(cfg.spec.users, 50);
        assert_eq!(cfg.spec.correlation, 1.0);
        assert!(cfg.spec.shared_item_factors);
        assert_eq!(cfg.spec.min_per_domain, 20);
        assert_eq!(cfg.target_out, PathBuf::from("target.csv"));
    }

    #[test]
    fn synth_config_validates_the_spec() {
        let f = config_file(
            r#"
users = 0
target_items = 60
aux_items = 60
density = 0.3
correlation = 0.5
target_out = "target.csv"
auxiliary_out = "aux.csv"
"#,
        );
        assert!(load_synth_config(f.path()).is_err());
    }
}
