//! Solve one scenario and print the certified network.
//!
//! cargo run --release --example solve -- 0.5

use cohesion_net::*;

fn main() -> Result<()> {
    let beta = std::env::args().nth(1).map_or(Ok(0.5), |s| s.parse()).unwrap_or(0.5);
    let params = GameParams {
        beta,
        ..GameParams::default()
    };
    let scenario = Scenario::from_ideologies(&[0.0, 0.1, 0.45, 0.55, 0.9, 1.0], params)?;
    let result = solve_equilibrium(&scenario, &EquilibriumSettings::default())?;

    println!("certified: unilateral {} bilateral {}", result.certified_unilateral, result.certified_bilateral);
    println!("balance: {:?} {:?}", result.balance.kind, result.balance.cliques);
    for (i, w) in result.windows.iter().enumerate() {
        println!(
            "agent {i} θ={:.2} tolerates {}..={} effort {:.4} strength {:.4}",
            scenario.theta(i),
            w.lo,
            w.hi,
            result.profile.efforts[i],
            result.network.strengths[i]
        );
    }
    let report = report_from_network(&result.network, &result.profile.efforts);
    println!("intensity {:.4}, disputes {}, total effort {:.4}", report.dispute_intensity, report.dispute_count, report.total_effort);
    Ok(())
}
