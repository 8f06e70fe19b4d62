//! Tolerance–cohesion network formation: equilibrium solver, balance
//! classification, polarization metrics and comparative statics.

pub mod cli;
pub mod contest;
pub mod efforts;
pub mod equilibrium;
pub mod error;
pub mod extensions;
pub mod metrics;
pub mod network;
pub mod scenario;
pub mod sweeps;

pub use contest::{cohesion_schedule, csf_value, CohesionSchedule, CsfParams};
pub use efforts::{
    best_response_effort, best_response_effort_with, effort_upper_bound, fixed_point_residual, near_cap_kink, solve_efforts,
    solve_efforts_from, utility, EffortSettings, EffortSolution, UtilityBreakdown,
};
pub use equilibrium::{
    best_window, brute_force_oracle, brute_force_oracle_with, candidate_windows, check_bilateral, check_unilateral,
    intervals_of, solve_equilibrium, windows_of, EquilibriumResult, EquilibriumSettings, OracleReport, VerificationLevel,
    Window,
};
pub use extensions::{
    adjusted_strength, dispute_initiation_equilibrium, heterogeneous_equilibrium, initiation_threshold, path_strength,
    PathStrength, Relation, SignedRelation,
};
pub use error::{Error, Result};
pub use metrics::{degree_effort_violations, dispute_intensity, polarization_report, report_from_network, PolarizationReport};
pub use network::{build_network, classify, cohesion_count, is_ordered, BalanceClass, BalanceKind, Network};
pub use scenario::{
    generate_scenario, tolerance_cost, Congestion, CsfForm, DisputeSet, FlexibilityMode, GameParams, Ideology, Scenario, StrategyProfile,
    StrengthMode, ToleranceInterval, TypeDistribution,
};
pub use sweeps::{run_sweep, CheckKind, CheckReport, SweepAxis, SweepResult, SweepSpec};
