//! Parameter sweeps, regime thresholds and monotonicity checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve_equilibrium, EquilibriumResult, EquilibriumSettings, VerificationLevel};
use crate::error::{Error, Result};
use crate::extensions::{dispute_initiation_equilibrium, heterogeneous_equilibrium};
use crate::metrics::{csv_fields, report_from_network, PolarizationReport, CSV_HEADER};
use crate::network::{BalanceClass, BalanceKind};
use crate::scenario::{generate_scenario, FlexibilityMode, GameParams, Scenario, ScenarioFile, StrengthMode, TypeDistribution};

/// Monotonicity slack shared by every check, relative to magnitudes above 1.
pub const SLACK: f64 = 1e-7;

#[inline]
fn slack(v: f64) -> f64 {
    SLACK * v.abs().max(1.0)
}

/// Bisection stops once the bracket is this fraction of the grid step.
const REFINE_DIVISOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Beta,
    Alpha,
    EffortCost,
    Flexibility,
    /// Slope of the heterogeneous flexibility profile.
    Kappa,
    DisputeCost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Bisect classification changes down to a 64th of the grid step.
    pub refine: bool,
    pub settings: EquilibriumSettings,
}

/// On-disk form of a [`SweepSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpecFile {
    pub base: ScenarioFile,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_refine")]
    pub refine: bool,
    #[serde(default)]
    pub verify: Option<VerificationLevel>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_refine() -> bool {
    true
}

impl SweepSpec {
    pub fn new(base: Scenario, axis: SweepAxis, grid: Vec<f64>, seeds: Vec<u64>) -> Result<Self> {
        let spec = SweepSpec {
            base,
            axis,
            grid,
            seeds,
            refine: true,
            settings: EquilibriumSettings::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "must not be empty".into(),
            });
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "must be strictly ascending".into(),
            });
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter {
                name: "seeds",
                reason: "must not be empty".into(),
            });
        }
        if self.axis == SweepAxis::Kappa && self.base.params.flexibility_mode == FlexibilityMode::Uniform {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: "kappa sweeps need a heterogeneous flexibility mode".into(),
            });
        }
        for &v in &self.grid {
            self.params_at(v).validate()?;
        }
        Ok(())
    }

    /// Base parameters with the swept one set to `value`.
    pub fn params_at(&self, value: f64) -> GameParams {
        let mut p = self.base.params;
        match self.axis {
            SweepAxis::Beta => p.beta = value,
            SweepAxis::Alpha => p.alpha = value,
            SweepAxis::EffortCost => p.effort_cost = value,
            SweepAxis::Flexibility => {
                p.flexibility = value;
                p.flexibility_mode = match p.flexibility_mode {
                    FlexibilityMode::Uniform => FlexibilityMode::Uniform,
                    FlexibilityMode::StubbornExtremists { slope, .. } => FlexibilityMode::StubbornExtremists { base: value, slope },
                    FlexibilityMode::FlexibleExtremists { slope, .. } => FlexibilityMode::FlexibleExtremists { cap: value, slope },
                };
            }
            SweepAxis::Kappa => {
                p.flexibility_mode = match p.flexibility_mode {
                    FlexibilityMode::Uniform => FlexibilityMode::Uniform,
                    FlexibilityMode::StubbornExtremists { base, .. } => FlexibilityMode::StubbornExtremists { base, slope: value },
                    FlexibilityMode::FlexibleExtremists { cap, .. } => FlexibilityMode::FlexibleExtremists { cap, slope: value },
                };
            }
            SweepAxis::DisputeCost => p.dispute_cost = Some(value),
        }
        p
    }

    /// The scenario solved for one cell. Pinned-uniform bases draw fresh
    /// types per seed; explicit lists keep their types.
    pub fn scenario_at(&self, seed: u64, value: f64) -> Result<Scenario> {
        let params = self.params_at(value);
        match self.base.type_distribution {
            TypeDistribution::UniformPinned => generate_scenario(self.base.n(), params, seed),
            TypeDistribution::ExplicitList => {
                let mut s = self.base.with_params(params)?;
                s.seed = seed;
                Ok(s)
            }
        }
    }

    pub fn from_file(file: SweepSpecFile) -> Result<Self> {
        let mut settings = EquilibriumSettings::default();
        settings.verify = file.verify;
        let spec = SweepSpec {
            base: file.base.into_scenario()?,
            axis: file.axis,
            grid: file.grid,
            seeds: file.seeds,
            refine: file.refine,
            settings,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SweepSpecFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("sweep spec, line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> SweepSpecFile {
        SweepSpecFile {
            base: ScenarioFile::from(&self.base),
            axis: self.axis,
            grid: self.grid.clone(),
            seeds: self.seeds.clone(),
            refine: self.refine,
            verify: self.settings.verify,
        }
    }
}

/// Label for the model variant a scenario runs.
pub fn variant_label(p: &GameParams) -> &'static str {
    if p.dispute_cost.is_some() {
        return "initiation";
    }
    match (p.flexibility_mode, p.strength_mode) {
        (FlexibilityMode::StubbornExtremists { .. }, _) => "stubborn_extremists",
        (FlexibilityMode::FlexibleExtremists { .. }, _) => "flexible_extremists",
        (_, StrengthMode::Adjusted) => "adjusted_strength",
        (_, StrengthMode::PathBased { .. }) => "path_strength",
        _ => "baseline",
    }
}

/// Dispatches to the solver matching the scenario's variant.
pub fn solve_cell(scenario: &Scenario, settings: &EquilibriumSettings) -> Result<EquilibriumResult> {
    let p = &scenario.params;
    if p.dispute_cost.is_some() {
        return Ok(dispute_initiation_equilibrium(scenario, settings)?.equilibrium);
    }
    if p.flexibility_mode != FlexibilityMode::Uniform {
        return Ok(heterogeneous_equilibrium(scenario, settings)?.equilibrium);
    }
    solve_equilibrium(scenario, settings)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub seed: u64,
    pub value: f64,
    pub scenario_hash: String,
    pub n: usize,
    pub params: GameParams,
    pub variant: String,
    /// Absent when the solve returned an error.
    pub report: Option<PolarizationReport>,
    pub balance: Option<BalanceClass>,
    pub certified: bool,
    pub ordered: bool,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn kind(&self) -> Option<BalanceKind> {
        self.balance.as_ref().map(|b| b.kind)
    }

    fn usable(&self) -> bool {
        self.certified && self.report.is_some()
    }

    fn intensity(&self) -> f64 {
        self.report.as_ref().map_or(f64::NAN, |r| r.dispute_intensity)
    }
}

fn run_cell(spec: &SweepSpec, seed: u64, value: f64) -> SweepRow {
    let params = spec.params_at(value);
    let variant = variant_label(&params).to_string();
    let solved = spec
        .scenario_at(seed, value)
        .and_then(|s| solve_cell(&s, &spec.settings).map(|r| (s, r)));
    match solved {
        Ok((scenario, eq)) => SweepRow {
            seed,
            value,
            scenario_hash: scenario.content_hash(),
            n: scenario.n(),
            params,
            variant,
            report: Some(report_from_network(&eq.network, &eq.profile.efforts)),
            certified: eq.certified(),
            ordered: eq.ordered,
            balance: Some(eq.balance),
            error: None,
        },
        Err(e) => SweepRow {
            seed,
            value,
            scenario_hash: String::new(),
            n: spec.base.n(),
            params,
            variant,
            report: None,
            balance: None,
            certified: false,
            ordered: false,
            error: Some(e.to_string()),
        },
    }
}

/// A classification change between two adjacent certified cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: BalanceKind,
    pub to: BalanceKind,
    pub lower: f64,
    pub upper: f64,
    /// Midpoint of the final bracket.
    pub estimate: f64,
    pub refinement_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedThresholds {
    pub seed: u64,
    /// First overlapping → segregated crossing.
    pub delta_star: Option<f64>,
    /// First crossing into strong balance (or beyond).
    pub delta_star_star: Option<f64>,
    pub transitions: Vec<Transition>,
    /// Classes of certified cells with repeats collapsed.
    pub sequence: Vec<BalanceKind>,
    /// Some certified step moves down the overlapping → weak → strong ladder.
    pub backward: bool,
    pub uncertified_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Prop3,
    Prop4,
    Extremists,
    Flexibility,
    RegimeLadder,
}

impl CheckKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "prop3" | "cohesion" => Some(CheckKind::Prop3),
            "prop4" | "effort_cost" => Some(CheckKind::Prop4),
            "extremists" => Some(CheckKind::Extremists),
            "flexibility" => Some(CheckKind::Flexibility),
            "ladder" | "regime_ladder" => Some(CheckKind::RegimeLadder),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub lower: f64,
    pub upper: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedVerdict {
    pub seed: u64,
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub passed: bool,
    pub per_seed: Vec<SeedVerdict>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpecFile,
    /// Seed-major, grid order within a seed.
    pub rows: Vec<SweepRow>,
    pub thresholds: Vec<SeedThresholds>,
    pub verdicts: Vec<CheckReport>,
}

impl SweepResult {
    pub fn axis(&self) -> SweepAxis {
        self.spec.axis
    }

    pub fn rows_for(&self, seed: u64) -> impl Iterator<Item = &SweepRow> + '_ {
        self.rows.iter().filter(move |r| r.seed == seed)
    }

    /// Cells left out of the monotonicity checks.
    pub fn excluded(&self) -> Vec<(u64, f64)> {
        self.rows.iter().filter(|r| !r.usable()).map(|r| (r.seed, r.value)).collect()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.spec.seeds.clone()
    }

    pub fn verdict(&self, check: CheckKind) -> Option<&CheckReport> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("seed,value,{CSV_HEADER},certified\n");
        for r in &self.rows {
            let body = csv_fields(&r.scenario_hash, r.n, &r.params, r.report.as_ref(), r.kind(), &r.variant);
            out.push_str(&format!("{},{},{},{}\n", r.seed, r.value, body, r.certified));
        }
        out
    }

    /// Writes `rows.csv`, `thresholds.json`, `verdicts.json` and the full `sweep.json`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("rows.csv"), self.to_csv())?;
        fs::write(dir.join("thresholds.json"), serde_json::to_string_pretty(&self.thresholds)?)?;
        fs::write(dir.join("verdicts.json"), serde_json::to_string_pretty(&self.verdicts)?)?;
        fs::write(dir.join("sweep.json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read_from(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join("sweep.json"))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Solves every (seed, grid point) cell on a pool of `parallelism` workers.
/// Output is identical for any worker count.
pub fn run_sweep(spec: &SweepSpec, parallelism: usize) -> Result<SweepResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::SolveFailed(format!("thread pool: {e}")))?;
    let cells: Vec<(u64, f64)> = spec
        .seeds
        .iter()
        .flat_map(|&s| spec.grid.iter().map(move |&v| (s, v)))
        .collect();
    let rows: Vec<SweepRow> = pool.install(|| cells.par_iter().map(|&(s, v)| run_cell(spec, s, v)).collect());
    let thresholds: Vec<SeedThresholds> = pool.install(|| {
        spec.seeds
            .par_iter()
            .map(|&seed| {
                let seed_rows: Vec<&SweepRow> = rows.iter().filter(|r| r.seed == seed).collect();
                thresholds_for(spec, seed, &seed_rows)
            })
            .collect()
    });
    let mut result = SweepResult {
        spec: spec.to_file(),
        rows,
        thresholds,
        verdicts: Vec::new(),
    };
    result.verdicts = default_checks(&result);
    Ok(result)
}

/// Checks that apply to the sweep's axis.
pub fn default_checks(result: &SweepResult) -> Vec<CheckReport> {
    let mut out = Vec::new();
    match result.axis() {
        SweepAxis::Beta | SweepAxis::Alpha => {
            out.push(check_prop3(result));
            if result.axis() == SweepAxis::Beta {
                out.push(check_regime_ladder(result, result.spec.seeds.len()));
            }
            if result.rows.first().map_or(0, |r| r.n) >= 30 {
                out.push(check_extremists(result));
            }
        }
        SweepAxis::EffortCost => out.push(check_prop4(result)),
        SweepAxis::Flexibility => out.push(check_flexibility(result)),
        SweepAxis::Kappa | SweepAxis::DisputeCost => {}
    }
    out
}

fn thresholds_for(spec: &SweepSpec, seed: u64, rows: &[&SweepRow]) -> SeedThresholds {
    let certified: Vec<&SweepRow> = rows.iter().copied().filter(|r| r.usable()).collect();
    let step = if spec.grid.len() > 1 {
        (spec.grid[spec.grid.len() - 1] - spec.grid[0]) / (spec.grid.len() - 1) as f64
    } else {
        0.0
    };
    let mut transitions = Vec::new();
    let mut sequence: Vec<BalanceKind> = Vec::new();
    let mut backward = false;
    for r in &certified {
        let k = r.kind().expect("usable rows carry a class");
        if sequence.last() != Some(&k) {
            sequence.push(k);
        }
    }
    for pair in certified.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (ka, kb) = (a.kind().unwrap(), b.kind().unwrap());
        if ka == kb {
            continue;
        }
        if kb.rank() < ka.rank() {
            backward = true;
        }
        let (lower, upper, steps) = if spec.refine && step > 0.0 {
            refine(spec, seed, a.value, b.value, ka, step / REFINE_DIVISOR)
        } else {
            (a.value, b.value, 0)
        };
        transitions.push(Transition {
            from: ka,
            to: kb,
            lower,
            upper,
            estimate: 0.5 * (lower + upper),
            refinement_steps: steps,
        });
    }
    let delta_star = transitions
        .iter()
        .find(|t| t.from == BalanceKind::Overlapping && t.to.is_segregated())
        .map(|t| t.estimate);
    let delta_star_star = transitions
        .iter()
        .find(|t| t.from.rank() < BalanceKind::StrongBalance.rank() && t.to.rank() >= BalanceKind::StrongBalance.rank())
        .map(|t| t.estimate);
    SeedThresholds {
        seed,
        delta_star,
        delta_star_star,
        transitions,
        sequence,
        backward,
        uncertified_cells: rows.len() - certified.len(),
    }
}

/// Narrows `[lo, hi]` around the change away from `from`. Uncertified
/// midpoints end the refinement.
fn refine(spec: &SweepSpec, seed: u64, mut lo: f64, mut hi: f64, from: BalanceKind, width: f64) -> (f64, f64, usize) {
    let mut steps = 0;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let row = run_cell(spec, seed, mid);
        if !row.usable() {
            break;
        }
        steps += 1;
        if row.kind() == Some(from) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi, steps)
}

/// Maximal runs of consecutive certified cells whose regime agrees under `key`.
fn segments<'a, K: PartialEq + Copy>(rows: &[&'a SweepRow], key: impl Fn(&SweepRow) -> K) -> Vec<(K, Vec<&'a SweepRow>)> {
    let mut out: Vec<(K, Vec<&SweepRow>)> = Vec::new();
    let mut open = false;
    for &r in rows {
        if !r.usable() {
            open = false;
            continue;
        }
        let k = key(r);
        match out.last_mut() {
            Some((last, run)) if open && *last == k => run.push(r),
            _ => out.push((k, vec![r])),
        }
        open = true;
    }
    out
}

fn seed_rows(result: &SweepResult, seed: u64) -> Vec<&SweepRow> {
    result.rows_for(seed).collect()
}

fn verdict(seed: u64, violations: Vec<Violation>, warnings: Vec<String>) -> SeedVerdict {
    SeedVerdict {
        seed,
        passed: violations.is_empty(),
        violations,
        warnings,
    }
}

fn report(check: CheckKind, per_seed: Vec<SeedVerdict>, metadata: BTreeMap<String, String>) -> CheckReport {
    CheckReport {
        check,
        passed: per_seed.iter().all(|v| v.passed),
        per_seed,
        metadata,
    }
}

fn axis_warning(result: &SweepResult, allowed: &[SweepAxis]) -> Vec<String> {
    if allowed.contains(&result.axis()) {
        Vec::new()
    } else {
        vec![format!("check expects axis {:?}, sweep used {:?}", allowed, result.axis())]
    }
}

/// Walks consecutive pairs of `run`, recording those where `ok(prev, next)` fails.
fn pairwise(run: &[&SweepRow], what: &str, ok: impl Fn(&SweepRow, &SweepRow) -> bool, out: &mut Vec<Violation>) {
    for pair in run.windows(2) {
        if !ok(pair[0], pair[1]) {
            out.push(Violation {
                lower: pair[0].value,
                upper: pair[1].value,
                detail: what.to_string(),
            });
        }
    }
}

/// Intensity rises inside overlapping segments and falls inside segregated ones.
pub fn check_prop3(result: &SweepResult) -> CheckReport {
    let base_warnings = axis_warning(result, &[SweepAxis::Beta, SweepAxis::Alpha]);
    let per_seed = result
        .seeds()
        .into_iter()
        .map(|seed| {
            let rows = seed_rows(result, seed);
            let segs = segments(&rows, |r| r.kind().is_some_and(BalanceKind::is_segregated));
            let mut violations = Vec::new();
            let mut warnings = base_warnings.clone();
            if segs.iter().all(|(_, run)| run.len() < 2) {
                warnings.push("no segment spans two certified cells; vacuous pass".into());
            }
            for (segregated, run) in &segs {
                if *segregated {
                    pairwise(run, "intensity rose in a segregated segment", |a, b| b.intensity() <= a.intensity() + slack(a.intensity()), &mut violations);
                } else {
                    pairwise(run, "intensity fell in an overlapping segment", |a, b| b.intensity() >= a.intensity() - slack(a.intensity()), &mut violations);
                }
            }
            verdict(seed, violations, warnings)
        })
        .collect();
    report(CheckKind::Prop3, per_seed, BTreeMap::new())
}

/// Effort falls everywhere in `c`; intensity rises just below the
/// segregation onset and falls on the segregated tail.
pub fn check_prop4(result: &SweepResult) -> CheckReport {
    let mut base_warnings = axis_warning(result, &[SweepAxis::EffortCost]);
    if let Some(r) = result.rows.first() {
        if r.n < 30 {
            base_warnings.push(format!("n = {} is below the dense-society size 30", r.n));
        }
        if r.params.beta <= 0.0 {
            base_warnings.push("beta = 0".into());
        }
    }
    let per_seed = result
        .seeds()
        .into_iter()
        .map(|seed| {
            let rows = seed_rows(result, seed);
            let usable: Vec<&SweepRow> = rows.iter().copied().filter(|r| r.usable()).collect();
            let mut violations = Vec::new();
            let warnings = base_warnings.clone();
            let effort = |r: &SweepRow| r.report.as_ref().map_or(f64::NAN, |m| m.total_effort);
            pairwise(&usable, "total effort rose", |a, b| effort(b) <= effort(a) + slack(effort(a)), &mut violations);

            // Onset: first certified segregated cell after which every certified cell stays segregated.
            let onset = (0..usable.len()).find(|&k| {
                k > 0
                    && usable[k..].iter().all(|r| r.kind().is_some_and(BalanceKind::is_segregated))
                    && !usable[k - 1].kind().is_some_and(BalanceKind::is_segregated)
            });
            match onset {
                None => violations.push(Violation {
                    lower: result.spec.grid[0],
                    upper: *result.spec.grid.last().unwrap(),
                    detail: "no overlapping-to-segregated onset on the grid".into(),
                }),
                Some(k) => {
                    let rising = |a: &SweepRow, b: &SweepRow| b.intensity() > a.intensity();
                    let crossing = rising(usable[k - 1], usable[k]);
                    let below = k >= 2 && !usable[k - 2].kind().is_some_and(BalanceKind::is_segregated) && rising(usable[k - 2], usable[k - 1]);
                    if !(crossing || below) {
                        violations.push(Violation {
                            lower: usable[k.saturating_sub(2)].value,
                            upper: usable[k].value,
                            detail: "intensity does not rise next to the segregation onset".into(),
                        });
                    }
                    pairwise(&usable[k..], "intensity rose on the segregated tail", |a, b| b.intensity() <= a.intensity() + slack(a.intensity()), &mut violations);
                }
            }
            verdict(seed, violations, warnings)
        })
        .collect();
    report(CheckKind::Prop4, per_seed, BTreeMap::new())
}

/// The two extreme agents work less and fight less as cohesion gets more
/// effective, within overlapping segments.
pub fn check_extremists(result: &SweepResult) -> CheckReport {
    let mut base_warnings = axis_warning(result, &[SweepAxis::Beta, SweepAxis::Alpha]);
    if let Some(r) = result.rows.first() {
        if r.n < 30 {
            base_warnings.push(format!("n = {} is below the dense-society size 30", r.n));
        }
    }
    let per_seed = result
        .seeds()
        .into_iter()
        .map(|seed| {
            let rows = seed_rows(result, seed);
            let mut violations = Vec::new();
            let mut warnings = base_warnings.clone();
            let segs = segments(&rows, |r| r.kind().is_some_and(BalanceKind::is_segregated));
            let overlapping: Vec<&Vec<&SweepRow>> = segs.iter().filter(|(s, _)| !s).map(|(_, run)| run).collect();
            if overlapping.iter().all(|run| run.len() < 2) {
                warnings.push("no overlapping segment spans two certified cells; vacuous pass".into());
            }
            for run in overlapping {
                for (label, pick) in [("lowest", 0usize), ("highest", usize::MAX)] {
                    let agent = |r: &SweepRow| {
                        let per = &r.report.as_ref().expect("usable").per_agent;
                        per[pick.min(per.len() - 1)]
                    };
                    pairwise(run, &format!("{label} type raised its effort"), |a, b| agent(b).effort <= agent(a).effort + slack(agent(a).effort), &mut violations);
                    pairwise(run, &format!("{label} type gained disputes"), |a, b| agent(b).disputes <= agent(a).disputes, &mut violations);
                }
            }
            verdict(seed, violations, warnings)
        })
        .collect();
    report(CheckKind::Extremists, per_seed, BTreeMap::new())
}

/// Intensity and dispute count weakly increase in `τ`.
pub fn check_flexibility(result: &SweepResult) -> CheckReport {
    let base_warnings = axis_warning(result, &[SweepAxis::Flexibility]);
    let per_seed = result
        .seeds()
        .into_iter()
        .map(|seed| {
            let rows = seed_rows(result, seed);
            let usable: Vec<&SweepRow> = rows.iter().copied().filter(|r| r.usable()).collect();
            let mut violations = Vec::new();
            let count = |r: &SweepRow| r.report.as_ref().map_or(0, |m| m.dispute_count);
            pairwise(&usable, "intensity fell as tau rose", |a, b| b.intensity() >= a.intensity() - slack(a.intensity()), &mut violations);
            pairwise(&usable, "dispute count fell as tau rose", |a, b| count(b) >= count(a), &mut violations);
            verdict(seed, violations, base_warnings.clone())
        })
        .collect();
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "reading".into(),
        "flexibility is low tau; intensity and dispute count are checked nondecreasing in tau".into(),
    );
    metadata.insert(
        "ambiguity".into(),
        "the statement names tau itself as flexibility; the opposite sign would follow from that wording".into(),
    );
    report(CheckKind::Flexibility, per_seed, metadata)
}

/// No seed moves backward on the ladder, and at least `min_seeds` seeds
/// pass through overlapping, weak and strong balance in that order with
/// both thresholds located.
pub fn check_regime_ladder(result: &SweepResult, min_seeds: usize) -> CheckReport {
    let base_warnings = axis_warning(result, &[SweepAxis::Beta]);
    let mut full = 0;
    let mut per_seed = Vec::new();
    for t in &result.thresholds {
        let mut violations = Vec::new();
        let mut warnings = base_warnings.clone();
        if t.backward {
            violations.push(Violation {
                lower: result.spec.grid[0],
                upper: *result.spec.grid.last().unwrap(),
                detail: format!("backward transition in {:?}", t.sequence),
            });
        }
        let ladder = [BalanceKind::Overlapping, BalanceKind::WeakBalance, BalanceKind::StrongBalance];
        let mut it = t.sequence.iter();
        let ordered = ladder.iter().all(|k| it.any(|s| s == k));
        if ordered && t.delta_star.is_some() && t.delta_star_star.is_some() {
            full += 1;
        } else {
            warnings.push(format!("ladder incomplete: {:?}", t.sequence));
        }
        per_seed.push(verdict(t.seed, violations, warnings));
    }
    let no_backward = per_seed.iter().all(|v| v.passed);
    let mut metadata = BTreeMap::new();
    metadata.insert("seeds_with_full_ladder".into(), full.to_string());
    metadata.insert("required".into(), min_seeds.to_string());
    CheckReport {
        check: CheckKind::RegimeLadder,
        passed: no_backward && full >= min_seeds,
        per_seed,
        metadata,
    }
}

pub fn run_check(result: &SweepResult, check: CheckKind) -> CheckReport {
    match check {
        CheckKind::Prop3 => check_prop3(result),
        CheckKind::Prop4 => check_prop4(result),
        CheckKind::Extremists => check_extremists(result),
        CheckKind::Flexibility => check_flexibility(result),
        CheckKind::RegimeLadder => check_regime_ladder(result, result.spec.seeds.len()),
    }
}

/// `count` points from `lo` to `hi`, evenly spaced on a log scale.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect()
}
