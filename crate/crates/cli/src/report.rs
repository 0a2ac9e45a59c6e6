//! CSV renderings of experiment results. All floats print with 4 decimal
//! places so reruns diff cleanly; absent improvements print as empty
//! fields.

use elicit_core::harness::{improvement, Direction, ExperimentResult, Scenario};
use elicit_core::strategies::StrategyKind;

pub const RESULTS_HEADER: &str =
    "scenario,strategy,iteration,mae,spread,improvement_mae,improvement_spread";
pub const TABLE_HEADER: &str =
    "scenario,strategy,basis,mae,improvement_mae,spread,improvement_spread";

fn fmt(value: f64) -> String {
    format!("{value:.4}")
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt).unwrap_or_default()
}

fn strategy_label(strategy: Option<StrategyKind>) -> &'static str {
    strategy.map(StrategyKind::name).unwrap_or("none")
}

/// Full learning curves, one row per (scenario, strategy, iteration).
pub fn results_csv(results: &[ExperimentResult]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for row in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.scenario.name(),
            strategy_label(row.strategy),
            row.iteration,
            fmt(row.mae),
            fmt(row.spread),
            fmt_opt(row.improvement_mae),
            fmt_opt(row.improvement_spread),
        ));
    }
    out
}

/// Summary table: per (scenario, strategy) the final-iteration metrics and,
/// on a second row, the mean over all iterations, both with improvements
/// against that scenario's baseline. The `basis` column labels which of the
/// two a row carries.
pub fn table_csv(results: &[ExperimentResult]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');

    let mut scenarios: Vec<Scenario> = Vec::new();
    for row in results {
        if !scenarios.contains(&row.scenario) {
            scenarios.push(row.scenario);
        }
    }

    for scenario in scenarios {
        let baseline = results.iter().find(|r| r.scenario == scenario && r.strategy.is_none());
        let Some(baseline) = baseline else {
            continue;
        };
        out.push_str(&format!(
            "{},none,final,{},,{},\n",
            scenario.name(),
            fmt(baseline.mae),
            fmt(baseline.spread),
        ));

        let mut strategies: Vec<StrategyKind> = Vec::new();
        for row in results.iter().filter(|r| r.scenario == scenario) {
            if let Some(kind) = row.strategy {
                if !strategies.contains(&kind) {
                    strategies.push(kind);
                }
            }
        }
        for kind in strategies {
            let curve: Vec<&ExperimentResult> = results
                .iter()
                .filter(|r| r.scenario == scenario && r.strategy == Some(kind))
                .collect();
            let last = curve.last().expect("strategy appears, so its curve is non-empty");
            let count = curve.len() as f64;
            let mean_mae = curve.iter().map(|r| r.mae).sum::<f64>() / count;
            let mean_spread = curve.iter().map(|r| r.spread).sum::<f64>() / count;
            for (basis, mae_value, spread_value) in
                [("final", last.mae, last.spread), ("mean", mean_mae, mean_spread)]
            {
                out.push_str(&format!(
                    "{},{},{basis},{},{},{},{}\n",
                    scenario.name(),
                    kind.name(),
                    fmt(mae_value),
                    fmt_opt(improvement(mae_value, baseline.mae, Direction::LowerIsBetter).ok()),
                    fmt(spread_value),
                    fmt_opt(
                        improvement(spread_value, baseline.spread, Direction::HigherIsBetter).ok()
                    ),
                ));
            }
        }
    }
    out
}
