//! Write a solved network as Graphviz DOT and as JSON.
//!
//! cargo run --release --example export_dot > net.dot

use cohesion_net::network::to_dot;
use cohesion_net::*;

fn main() -> Result<()> {
    let params = GameParams {
        beta: 0.5,
        ..GameParams::default()
    };
    let scenario = Scenario::from_ideologies(&[0.0, 0.1, 0.9, 1.0], params)?;
    let result = solve_equilibrium(&scenario, &EquilibriumSettings::default())?;
    println!("{}", to_dot(&scenario, &result.network));
    eprintln!("{}", serde_json::to_string(&result.network)?);
    Ok(())
}
