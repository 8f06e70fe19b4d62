//! Enumerate every bilateral equilibrium of a 4-agent society under both
//! congestion readings and compare with the constructive solver.

use cohesion_net::*;

fn show(label: &str, scenario: &Scenario) -> Result<()> {
    let report = brute_force_oracle(scenario)?;
    println!(
        "{label}: {} equilibria ({} ordered), {} profiles examined, {} unresolved, solver agrees: {}",
        report.all_equilibria.len(),
        report.ordered_count,
        report.profiles_examined,
        report.unresolved,
        report.matches_solver
    );
    for e in &report.all_equilibria {
        let w: Vec<_> = e.windows.iter().map(|w| (w.lo, w.hi)).collect();
        println!("  windows {w:?} efforts {:.4?}", e.efforts);
    }
    Ok(())
}

fn main() -> Result<()> {
    let params = GameParams {
        beta: 0.5,
        ..GameParams::default()
    };
    let literal = Scenario::from_ideologies(&[0.0, 0.3, 0.7, 1.0], params)?;
    show("tolerated congestion", &literal)?;

    let mutual = literal.with_params(GameParams {
        congestion: Congestion::Mutual,
        ..params
    })?;
    show("mutual congestion", &mutual)?;

    // Why the literal reading loses the two cliques: the moderates defect together.
    let tolerances = intervals_of(&literal, &[Window { lo: 0, hi: 1 }, Window { lo: 0, hi: 1 }, Window { lo: 2, hi: 3 }, Window { lo: 2, hi: 3 }]);
    let efforts = solve_efforts(&literal, &tolerances)?.efforts;
    let profile = StrategyProfile { tolerances, efforts };
    let check = check_bilateral(&literal, &profile, VerificationLevel::Exhaustive)?;
    if let Some(w) = check.witness {
        println!("two-clique profile: agents {} and {} gain {:.4} and {:.4} by moving together", w.i, w.j, w.gain_i, w.gain_j);
    }
    Ok(())
}
