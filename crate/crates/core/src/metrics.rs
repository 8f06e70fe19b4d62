//! Polarization and diagnostic measurements.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::network::{build_network, BalanceClass, BalanceKind, Network};
use crate::scenario::{GameParams, Scenario, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentMetrics {
    pub strength: f64,
    pub degree: usize,
    pub disputes: usize,
    pub effort: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationReport {
    pub dispute_intensity: f64,
    /// Unordered pairs in dispute.
    pub dispute_count: usize,
    pub total_effort: f64,
    pub per_agent: Vec<AgentMetrics>,
}

/// `Σ λ_i λ_j` over ordered pairs with no link.
pub fn dispute_intensity(net: &Network) -> f64 {
    2.0 * net
        .dispute_pairs
        .iter()
        .map(|&(i, j)| net.strengths[i] * net.strengths[j])
        .sum::<f64>()
}

pub fn polarization_report(scenario: &Scenario, profile: &StrategyProfile) -> PolarizationReport {
    let net = build_network(scenario, profile);
    report_from_network(&net, &profile.efforts)
}

pub fn report_from_network(net: &Network, efforts: &[f64]) -> PolarizationReport {
    let n = net.n();
    let mut disputes = vec![0usize; n];
    for &(i, j) in &net.dispute_pairs {
        disputes[i] += 1;
        disputes[j] += 1;
    }
    let per_agent = (0..n)
        .map(|i| AgentMetrics {
            strength: net.strengths[i],
            degree: net.degrees[i],
            disputes: disputes[i],
            effort: efforts[i],
        })
        .collect();
    PolarizationReport {
        dispute_intensity: dispute_intensity(net),
        dispute_count: net.dispute_pairs.len(),
        total_effort: efforts.iter().sum(),
        per_agent,
    }
}

/// A pair breaking degree–effort monotonicity: `k_i ≥ k_j` but `x_i > x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeEffortViolation {
    pub i: usize,
    pub j: usize,
    pub degree_i: usize,
    pub degree_j: usize,
    pub effort_i: f64,
    pub effort_j: f64,
}

/// Pairs where the better-connected agent works strictly harder than `slack` allows.
pub fn degree_effort_violations(net: &Network, efforts: &[f64], slack: f64) -> Vec<DegreeEffortViolation> {
    let n = net.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && net.degrees[i] >= net.degrees[j] && efforts[i] > efforts[j] + slack {
                out.push(DegreeEffortViolation {
                    i,
                    j,
                    degree_i: net.degrees[i],
                    degree_j: net.degrees[j],
                    effort_i: efforts[i],
                    effort_j: efforts[j],
                });
            }
        }
    }
    out
}

pub const CSV_HEADER: &str = "scenario_hash,n,phi,beta,alpha,effort_cost,flexibility,intensity,dispute_count,total_effort,balance,variant";

/// One CSV row in [`CSV_HEADER`] order.
pub fn csv_row(scenario: &Scenario, report: &PolarizationReport, balance: &BalanceClass, variant: &str) -> String {
    csv_fields(&scenario.content_hash(), scenario.n(), &scenario.params, Some(report), Some(balance.kind), variant)
}

/// Same columns from loose parts; a missing report or class leaves its cells empty.
pub fn csv_fields(
    hash: &str,
    n: usize,
    p: &GameParams,
    report: Option<&PolarizationReport>,
    kind: Option<BalanceKind>,
    variant: &str,
) -> String {
    let mut s = String::new();
    write!(s, "{hash},{n},{},{},{},{},{},", p.phi, p.beta, p.alpha, p.effort_cost, p.flexibility)
        .expect("writing to a String cannot fail");
    match report {
        Some(r) => write!(s, "{},{},{},", r.dispute_intensity, r.dispute_count, r.total_effort),
        None => write!(s, ",,,"),
    }
    .expect("writing to a String cannot fail");
    s.push_str(kind.map_or("", BalanceKind::label));
    s.push(',');
    s.push_str(variant);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ToleranceInterval;

    #[test]
    fn line_intensity() {
        let s = Scenario::from_ideologies(&[0.0, 0.5, 1.0], GameParams::default()).unwrap();
        let p = StrategyProfile {
            tolerances: vec![
                ToleranceInterval::new(0.0, 0.5),
                ToleranceInterval::new(0.0, 1.0),
                ToleranceInterval::new(0.5, 1.0),
            ],
            efforts: vec![1.0; 3],
        };
        let r = polarization_report(&s, &p);
        assert_eq!(r.dispute_count, 1);
        assert!((r.dispute_intensity - 25.0 / 18.0).abs() < 1e-12);
        assert_eq!(r.total_effort, 3.0);
    }

    #[test]
    fn singletons_at_zero_effort() {
        let s = Scenario::evenly_spaced(5, GameParams::default()).unwrap();
        let p = StrategyProfile::singletons(&s, vec![0.0; 5]);
        let r = polarization_report(&s, &p);
        assert_eq!(r.dispute_intensity, 0.0);
        assert_eq!(r.total_effort, 0.0);
        assert_eq!(r.dispute_count, 10);
    }

    #[test]
    fn csv_row_has_every_column() {
        let s = Scenario::evenly_spaced(4, GameParams::default()).unwrap();
        let p = StrategyProfile::singletons(&s, vec![1.0; 4]);
        let net = build_network(&s, &p);
        let r = report_from_network(&net, &p.efforts);
        let row = csv_row(&s, &r, &crate::network::classify(&net), "baseline");
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
    }
}
