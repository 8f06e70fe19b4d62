//! Model variants: dispute initiation, alternative strengths, heterogeneous
//! flexibility.

use cohesion_net::*;

fn main() -> Result<()> {
    let settings = EquilibriumSettings::default();

    // Initiation costs below the threshold leave the equilibrium unchanged.
    let params = GameParams {
        beta: 0.5,
        dispute_cost: Some(0.1),
        ..GameParams::default()
    };
    let scenario = Scenario::from_ideologies(&[0.0, 0.1, 0.9, 1.0], params)?;
    let outcome = dispute_initiation_equilibrium(&scenario, &settings)?;
    println!("initiation threshold {:?}, cost {}, same as baseline: {}", outcome.threshold, outcome.cost, outcome.equivalent_to_baseline);

    // Strength with shared allies removed, and along longer paths.
    let line = Scenario::from_ideologies(&[0.0, 0.5, 1.0], GameParams::default())?;
    let profile = StrategyProfile {
        tolerances: vec![ToleranceInterval::new(0.0, 0.5), ToleranceInterval::new(0.0, 1.0), ToleranceInterval::new(0.5, 1.0)],
        efforts: vec![1.0; 3],
    };
    let net = build_network(&line, &profile);
    println!("λ {:?}", net.strengths);
    println!("adjusted μ_0 against 2: {:.4}", adjusted_strength(&net, 0, 2)?);
    for m in 1..=2 {
        println!("path μ (m={m}): {:.4?}", path_strength(&net, m)?.mu);
    }

    // Stubborn extremists keep the network ordered.
    let stubborn = GameParams {
        beta: 0.5,
        flexibility_mode: FlexibilityMode::StubbornExtremists { base: 1.0, slope: 4.0 },
        ..GameParams::default()
    };
    let s = generate_scenario(8, stubborn, 3)?;
    let h = heterogeneous_equilibrium(&s, &settings)?;
    println!("stubborn: certified {} ordered {} {:?}", h.equilibrium.certified(), h.ordered, h.equilibrium.balance.kind);

    // Free-tolerance extremists allied across the spectrum, fighting the moderates.
    let flexible = GameParams {
        beta: 0.5,
        flexibility_mode: FlexibilityMode::FlexibleExtremists { cap: 0.5, slope: 1.0 },
        dispute_set: DisputeSet::Unlinked,
        ..GameParams::default()
    };
    let s = Scenario::evenly_spaced(6, flexible)?;
    let mut windows = vec![Window { lo: 1, hi: 4 }; 6];
    windows[0] = Window { lo: 0, hi: 5 };
    windows[5] = Window { lo: 0, hi: 5 };
    let tolerances = intervals_of(&s, &windows);
    let efforts = solve_efforts(&s, &tolerances)?.efforts;
    let p = StrategyProfile { tolerances, efforts };
    let uni = check_unilateral(&s, &p)?;
    let bi = check_bilateral(&s, &p, VerificationLevel::Exhaustive)?;
    println!("flexible two-clique profile: unilateral {} bilateral {} ordered {}", uni.passed, bi.passed, is_ordered(&s, &p));
    Ok(())
}
