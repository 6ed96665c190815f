//! Bump-amplitude sweep run in parallel; each member writes its own bundle
//! and the sweep writes `sweep_summary.csv` next to them.

use wavemap::harness::{sweep, RunConfig, SweepAxis};

const TEMPLATE: &str = r#"
name = "amplitude"
enforce_regime = true

[grid]
dr = 0.04
r_max = 40.0

[solver]
t_end = 10.0
record_every = 25

[initial_data]
family = "soliton_plus_bump"
lambda = 1.0
amplitude = 0.0
center = 8.0
width = 1.0

[output]
fields = false
"#;

fn main() -> wavemap::Result<()> {
    let template = RunConfig::from_toml_str(TEMPLATE)?;
    let axis = SweepAxis::numeric("initial_data.amplitude", &[0.0, 0.1, 0.2, 0.4, 0.8, 1.6]);
    let root = std::env::temp_dir().join("wavemap_amplitude_sweep");
    let members = sweep(&template, &axis, &root, None)?;
    for m in &members {
        match &m.summary {
            Some(s) => println!(
                "A = {:>4}: exit {}, energy {:.5}, final lambda {:?}",
                m.value, m.exit_code, s.energy, s.final_lambda
            ),
            None => println!("A = {:>4}: exit {}, {}", m.value, m.exit_code, m.error.as_deref().unwrap_or("")),
        }
    }
    println!("bundles under {}", root.display());
    Ok(())
}
