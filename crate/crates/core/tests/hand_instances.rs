mod common;

use cohesion_net::*;
use common::hand;

#[test]
fn line_network() {
    hand::line_instance().unwrap();
}

#[test]
fn two_clique_network() {
    hand::two_clique_instance().unwrap();
}

#[test]
fn contest_and_schedule() {
    hand::contest_values().unwrap();
}

#[test]
fn tolerance_cost_values() {
    hand::tolerance_costs().unwrap();
}

#[test]
fn threshold_and_strength_variants() {
    hand::extension_values().unwrap();
}

#[test]
fn adjusted_strength_needs_a_dispute() {
    let s = hand::scenario(&hand::LINE, GameParams::default());
    let net = build_network(&s, &hand::profile(&hand::line_bounds(), &[1.0; 3]));
    assert!(matches!(adjusted_strength(&net, 0, 1), Err(Error::NotInDispute(0, 1))));
}

#[test]
fn candidate_window_counts() {
    let s = hand::scenario(&[0.0, 0.2, 0.4, 0.6, 1.0], GameParams::default());
    for i in 0..5 {
        assert_eq!(candidate_windows(&s, i).len(), (i + 1) * (5 - i));
    }
}

#[test]
fn middle_agent_best_window_matches_naive_scan() {
    let params = GameParams {
        beta: 1.0,
        ..GameParams::default()
    };
    let s = hand::scenario(&hand::LINE, params);
    let p = hand::profile(&[(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)], &[0.4, 0.4, 0.4]);
    let (best, effort, value) = equilibrium::best_window_with(&s, &p, 1, &EffortSettings::default()).unwrap();
    // Naive scan over the four windows with effort on a fine grid.
    let mut top = (f64::NEG_INFINITY, (0, 0));
    for (lo, hi) in [(0, 1), (0, 2), (1, 1), (1, 2)] {
        let bounds = [(0.0, 0.0), (hand::LINE[lo], hand::LINE[hi]), (1.0, 1.0)];
        for k in 1..=40_000 {
            let x1 = k as f64 * 1e-4;
            let u = common::utility(&hand::LINE, &bounds, &[0.4, x1, 0.4], 1, 1.0, 1.0, 1.0, 1.0, 1.0);
            if u > top.0 {
                top = (u, (lo, hi));
            }
        }
    }
    assert_eq!((best.lo, best.hi), top.1);
    assert!((value - top.0).abs() < 1e-6, "{value} vs {}", top.0);
    assert!(effort > 0.0);
}
