//! A small ascending-β sweep with regime thresholds and the default checks.
//!
//! cargo run --release --example beta_sweep -- out_dir

use cohesion_net::sweeps::linear_grid;
use cohesion_net::*;

fn main() -> Result<()> {
    let params = GameParams {
        flexibility: 4.0,
        ..GameParams::default()
    };
    let base = generate_scenario(8, params, 1)?;
    let spec = SweepSpec::new(base, SweepAxis::Beta, linear_grid(0.0, 0.4, 9), vec![1, 2])?;
    let result = run_sweep(&spec, 1)?;

    print!("{}", result.to_csv());
    for t in &result.thresholds {
        println!("seed {}: {:?} δ*={:?} δ**={:?}", t.seed, t.sequence, t.delta_star, t.delta_star_star);
    }
    for v in &result.verdicts {
        println!("{:?}: {}", v.check, if v.passed { "pass" } else { "fail" });
    }
    if let Some(dir) = std::env::args().nth(1) {
        result.write_to(std::path::Path::new(&dir))?;
    }
    Ok(())
}
