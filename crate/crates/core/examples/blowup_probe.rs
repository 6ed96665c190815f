//! Pushes a soliton inward hard enough for the gradient to exhaust the grid
//! and reports the verdict, the extrapolated blow-up time and the scale ratio.

use wavemap::harness::{execute, exit_code, RunConfig};

const CONFIG: &str = r#"
name = "imploding_probe"

[grid]
dr = 0.01
r_max = 30.0

[solver]
t_end = 10.0
record_every = 10

[initial_data]
family = "imploding"
lambda = 1.0
speed = -3.0
inner = 2.0
outer = 8.0

[decomposition]
enabled = true
min_tau = 2.0
"#;

fn main() -> wavemap::Result<()> {
    let config = RunConfig::from_toml_str(CONFIG)?;
    let art = execute(&config)?;
    let summary = art.summary();
    println!("verdict {} (exit {})", summary.verdict.as_str(), exit_code(summary.verdict));
    println!("energy {:.6}, stopped at t = {:.4}", summary.energy, summary.final_time);
    if let Some(t_star) = summary.blowup_time {
        println!("estimated blow-up time {t_star:.4}");
    }
    for (t, ratio) in art.outcome.blowup_ratio_series().iter().rev().take(8).rev() {
        println!("t = {t:.4}: lambda / (T - t) = {ratio:.4}");
    }
    if let Some(report) = &art.diagnostics.decomposition {
        if let Some(last) = report.records.last() {
            println!("last fitted lambda {:.4e}, ratio {:?}", last.lambda_fit, last.lambda_over_remaining);
        }
    }
    for w in &summary.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
