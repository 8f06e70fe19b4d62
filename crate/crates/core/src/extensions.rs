//! Model variants: costly dispute initiation, heterogeneous flexibility and
//! alternative strength notions.

use serde::{Deserialize, Serialize};

use crate::contest::{csf_value, CsfParams};
use crate::efforts::{solve_with, Evaluator, Initiation};
use crate::equilibrium::{brute_force_oracle_with, intervals_of, solve_equilibrium, EquilibriumResult, EquilibriumSettings, OracleReport, ORACLE_MAX_N};
use crate::error::{Error, Result};
use crate::network::{build_network, classify, cohesion_count, is_ordered, Network};
use crate::scenario::{FlexibilityMode, Scenario, StrategyProfile};

/// `λ_i − Σ_{h≠i,j} g_ih·sgn(g_hj)` on a dense row-major weight matrix.
pub(crate) fn adjusted_from_dense(w: &[f64], n: usize, lam: &[f64], i: usize, j: usize) -> f64 {
    let row_i = &w[i * n..(i + 1) * n];
    let mut out = lam[i];
    for h in 0..n {
        if h != i && h != j && row_i[h] > 0.0 && w[h * n + j] > 0.0 {
            out -= row_i[h];
        }
    }
    out
}

/// Best path products up to length `m` from every agent, summed with the self-loop.
pub(crate) fn path_mu_from_dense(w: &[f64], n: usize, m: usize, mu: &mut [f64]) {
    let mut best = vec![0.0; n];
    let mut next = vec![0.0; n];
    for i in 0..n {
        path_row(w, n, m, i, &mut best, &mut next);
        mu[i] = w[i * n + i] + best.iter().sum::<f64>();
    }
}

/// Fills `best[j]` with the maximum product over `i → j` paths of length at most `m`.
fn path_row(w: &[f64], n: usize, m: usize, i: usize, best: &mut [f64], next: &mut [f64]) {
    for j in 0..n {
        best[j] = if j == i { 0.0 } else { w[i * n + j] };
    }
    for _ in 1..m {
        next.copy_from_slice(best);
        for h in 0..n {
            if h == i || best[h] <= 0.0 {
                continue;
            }
            let row_h = &w[h * n..(h + 1) * n];
            for j in 0..n {
                if j != i && j != h {
                    let v = best[h] * row_h[j];
                    if v > next[j] {
                        next[j] = v;
                    }
                }
            }
        }
        best.copy_from_slice(next);
    }
}

fn dense(net: &Network) -> Vec<f64> {
    net.weights.iter().flatten().copied().collect()
}

/// Strength of `i` against `j` with links to common neighbours removed.
pub fn adjusted_strength(net: &Network, i: usize, j: usize) -> Result<f64> {
    if i == j || !net.in_dispute(i, j) {
        return Err(Error::NotInDispute(i, j));
    }
    Ok(adjusted_from_dense(&dense(net), net.n(), &net.strengths, i, j))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStrength {
    pub max_length: usize,
    /// Agents reachable within `max_length` steps; the agent itself is always listed.
    pub reach_sets: Vec<Vec<usize>>,
    /// `path_weights[i][i]` is the self-loop.
    pub path_weights: Vec<Vec<f64>>,
    pub mu: Vec<f64>,
}

pub fn path_strength(net: &Network, m: usize) -> Result<PathStrength> {
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "max_length",
            reason: "must be at least 1".into(),
        });
    }
    let n = net.n();
    let w = dense(net);
    let mut best = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut path_weights = Vec::with_capacity(n);
    let mut reach_sets = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    for i in 0..n {
        path_row(&w, n, m, i, &mut best, &mut next);
        let mut row = best.clone();
        row[i] = w[i * n + i];
        reach_sets.push((0..n).filter(|&j| j == i || row[j] > 0.0).collect());
        mu.push(row.iter().sum());
        path_weights.push(row);
    }
    Ok(PathStrength {
        max_length: m,
        reach_sets,
        path_weights,
        mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "weight", rename_all = "snake_case")]
pub enum Relation {
    Dispute,
    Neutral,
    Ally(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedRelation {
    pub entries: Vec<Vec<Relation>>,
}

impl SignedRelation {
    pub fn get(&self, i: usize, j: usize) -> Relation {
        self.entries[i][j]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitiationOutcome {
    pub equilibrium: EquilibriumResult,
    /// `initiated[i][j]`: `i` starts a dispute with `j`.
    pub initiated: Vec<Vec<bool>>,
    pub relation: SignedRelation,
    /// Largest cost under which every non-allied pair still fights.
    pub threshold: Option<f64>,
    pub cost: f64,
    /// Whether the baseline equilibrium carries over unchanged.
    pub equivalent_to_baseline: bool,
}

/// Dispute benefit of `i` against `j` in `net`, in each direction.
fn directional_benefits(scenario: &Scenario, net: &Network, i: usize, j: usize) -> (f64, f64) {
    let csf = CsfParams::from(&scenario.params);
    let (li, lj) = (net.strengths[i], net.strengths[j]);
    let cij = cohesion_count(net, i, j).unwrap_or(0);
    let cji = cohesion_count(net, j, i).unwrap_or(0);
    (csf_value(&csf, li, lj, cij), csf_value(&csf, lj, li, cji))
}

/// `min` over disputing pairs of the larger directional benefit.
pub fn initiation_threshold(scenario: &Scenario, net: &Network) -> Option<f64> {
    net.dispute_pairs
        .iter()
        .map(|&(i, j)| {
            let (a, b) = directional_benefits(scenario, net, i, j);
            a.max(b)
        })
        .min_by(f64::total_cmp)
}

/// Baseline equilibrium with one-sided, costly dispute initiation layered on
/// top. Benefits are read off the baseline network; when the cost exceeds
/// the threshold, efforts are re-solved with the surviving disputes only and
/// the result is left uncertified.
pub fn dispute_initiation_equilibrium(scenario: &Scenario, settings: &EquilibriumSettings) -> Result<InitiationOutcome> {
    let cost = scenario.params.dispute_cost.ok_or_else(|| Error::InvalidParameter {
        name: "dispute_cost",
        reason: "required for dispute initiation".into(),
    })?;
    if scenario.params.beta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: "dispute initiation needs a positive cohesion weight".into(),
        });
    }
    let mut base_scenario = scenario.clone();
    base_scenario.params.dispute_cost = None;
    let baseline = solve_equilibrium(&base_scenario, settings)?;
    let net = &baseline.network;
    let n = net.n();
    let threshold = initiation_threshold(scenario, net);

    let mut initiated = vec![vec![false; n]; n];
    for &(i, j) in &net.dispute_pairs {
        let (a, b) = directional_benefits(scenario, net, i, j);
        initiated[i][j] = a >= cost;
        initiated[j][i] = b >= cost;
    }
    let equivalent = threshold.map_or(true, |t| cost <= t);

    let equilibrium = if equivalent {
        baseline.clone()
    } else {
        let tol = intervals_of(scenario, &baseline.windows);
        let mask = Initiation {
            cost,
            initiated: initiated.iter().flatten().copied().collect(),
        };
        let mut ev = Evaluator::new(scenario, &tol).with_initiation(Some(mask));
        let start = vec![settings.effort.initial_effort; n];
        let sol = solve_with(&mut ev, &start, &settings.effort)?;
        let profile = StrategyProfile {
            tolerances: tol,
            efforts: sol.efforts,
        };
        let network = build_network(scenario, &profile);
        let balance = classify(&network);
        let ordered = is_ordered(scenario, &profile);
        let mut diagnostics = baseline.diagnostics.clone();
        diagnostics.effort_converged = sol.converged;
        EquilibriumResult {
            profile,
            windows: baseline.windows.clone(),
            network,
            balance,
            certified_unilateral: false,
            certified_bilateral: false,
            verification_level: baseline.verification_level,
            ordered,
            diagnostics,
        }
    };

    let net = &equilibrium.network;
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j && net.allied(i, j) {
                        Relation::Ally(net.weight(i, j))
                    } else if i != j && (initiated[i][j] || initiated[j][i]) {
                        Relation::Dispute
                    } else {
                        Relation::Neutral
                    }
                })
                .collect()
        })
        .collect();

    Ok(InitiationOutcome {
        equilibrium,
        initiated,
        relation: SignedRelation { entries },
        threshold,
        cost,
        equivalent_to_baseline: equivalent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeterogeneousOutcome {
    pub equilibrium: EquilibriumResult,
    pub ordered: bool,
    /// Present for small societies with flexible extremists.
    pub oracle: Option<OracleReport>,
}

/// Equilibrium with agent-specific flexibility. Flexible extremists may
/// break orderedness, so small instances are cross-checked by enumeration.
pub fn heterogeneous_equilibrium(scenario: &Scenario, settings: &EquilibriumSettings) -> Result<HeterogeneousOutcome> {
    if matches!(scenario.params.flexibility_mode, FlexibilityMode::Uniform) {
        return Err(Error::InvalidParameter {
            name: "flexibility_mode",
            reason: "expected stubborn or flexible extremists".into(),
        });
    }
    let flexible = matches!(scenario.params.flexibility_mode, FlexibilityMode::FlexibleExtremists { .. });
    let oracle = if flexible && scenario.n() <= ORACLE_MAX_N {
        Some(brute_force_oracle_with(scenario, settings)?)
    } else {
        None
    };
    let equilibrium = match &oracle {
        Some(report) => report.solver.clone().expect("oracle runs the solver"),
        None => solve_equilibrium(scenario, settings)?,
    };
    Ok(HeterogeneousOutcome {
        ordered: equilibrium.ordered,
        equilibrium,
        oracle,
    })
}
