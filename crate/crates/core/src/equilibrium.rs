//! Bilateral equilibrium: construction, deviation certificates and a
//! brute-force oracle for small societies.
//!
//! Tolerance intervals are searched over type-anchored contiguous windows.
//! Costs grow strictly with bound distance while benefits only change when
//! a bound crosses another agent's type, so an optimal bound always sits on
//! some agent's type.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::efforts::{solve_with, EffortSettings, Evaluator};
use crate::error::{Error, Result};
use crate::network::{build_network, classify, is_ordered, BalanceClass, Layout, Network};
use crate::scenario::{tolerance_cost, FlexibilityMode, Scenario, StrategyProfile, ToleranceInterval};

/// Gains at or below this are treated as noise.
pub const DEVIATION_MARGIN: f64 = 1e-9;

/// Effort tolerance for the returned profile.
const FINAL_TOLERANCE: f64 = 1e-10;
const FINAL_SWEEPS: usize = 200;

/// Largest society the brute-force oracle accepts.
pub const ORACLE_MAX_N: usize = 5;

/// A contiguous range of agents `lo..=hi` in type order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Window {
    pub lo: usize,
    pub hi: usize,
}

impl Window {
    pub fn singleton(i: usize) -> Self {
        Window { lo: i, hi: i }
    }

    #[inline]
    pub fn contains(&self, j: usize) -> bool {
        self.lo <= j && j <= self.hi
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo
    }

    pub fn interval(&self, scenario: &Scenario) -> ToleranceInterval {
        ToleranceInterval::new(scenario.theta(self.lo), scenario.theta(self.hi))
    }
}

/// Windows currently held by each agent, read off the tolerated sets.
pub fn windows_of(scenario: &Scenario, profile: &StrategyProfile) -> Vec<Window> {
    let layout = Layout::new(scenario, &profile.tolerances);
    (0..scenario.n())
        .map(|i| Window {
            lo: layout.lo[i],
            hi: layout.hi[i],
        })
        .collect()
}

pub fn intervals_of(scenario: &Scenario, windows: &[Window]) -> Vec<ToleranceInterval> {
    windows.iter().map(|w| w.interval(scenario)).collect()
}

/// Every contiguous window containing agent `i`: `(i+1)·(n−i)` of them.
pub fn candidate_windows(scenario: &Scenario, i: usize) -> Vec<Window> {
    let n = scenario.n();
    let mut out = Vec::with_capacity((i + 1) * (n - i));
    for lo in 0..=i {
        for hi in i..n {
            out.push(Window { lo, hi });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationLevel {
    /// Full cross product of candidate windows for every pair.
    Exhaustive,
    /// One-step boundary moves plus the mutual-inclusion pair.
    EdgeMove,
}

impl VerificationLevel {
    pub fn default_for(n: usize) -> Self {
        if n <= 8 {
            VerificationLevel::Exhaustive
        } else {
            VerificationLevel::EdgeMove
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSettings {
    pub effort: EffortSettings,
    /// `None` picks by society size.
    pub verify: Option<VerificationLevel>,
    pub max_sweeps: usize,
    pub max_repairs: usize,
    /// Largest `n` for the enumeration fallback.
    pub fallback_max_n: usize,
}

impl Default for EquilibriumSettings {
    fn default() -> Self {
        EquilibriumSettings {
            effort: EffortSettings {
                max_sweeps: 1500,
                ..EffortSettings::default()
            },
            verify: None,
            max_sweeps: 60,
            max_repairs: 20,
            fallback_max_n: 8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub sweeps: usize,
    pub repairs: usize,
    pub cycle_detected: bool,
    pub fallback_used: bool,
    pub effort_converged: bool,
    pub skipped_bilateral: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub profile: StrategyProfile,
    pub windows: Vec<Window>,
    pub network: Network,
    pub balance: BalanceClass,
    pub certified_unilateral: bool,
    pub certified_bilateral: bool,
    pub verification_level: VerificationLevel,
    pub ordered: bool,
    pub diagnostics: SolveDiagnostics,
}

impl EquilibriumResult {
    pub fn certified(&self) -> bool {
        self.certified_unilateral && self.certified_bilateral
    }
}

/// A profitable single-agent deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnilateralWitness {
    pub agent: usize,
    pub window: Window,
    pub effort: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnilateralCheck {
    pub passed: bool,
    pub witness: Option<UnilateralWitness>,
}

/// A joint deviation that helps one agent without hurting the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilateralWitness {
    pub i: usize,
    pub j: usize,
    pub window_i: Window,
    pub window_j: Window,
    pub effort_i: f64,
    pub effort_j: f64,
    pub gain_i: f64,
    pub gain_j: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilateralCheck {
    pub passed: bool,
    pub witness: Option<BilateralWitness>,
    /// Candidates dropped because the pair's effort alternation stalled.
    pub skipped: usize,
}

fn with_window(scenario: &Scenario, tolerances: &[ToleranceInterval], i: usize, w: Window) -> Vec<ToleranceInterval> {
    let mut t = tolerances.to_vec();
    t[i] = w.interval(scenario);
    t
}

/// Utility-maximising window for `i` with its own effort re-optimised.
pub fn best_window(scenario: &Scenario, profile: &StrategyProfile, i: usize) -> Result<Window> {
    best_window_with(scenario, profile, i, &EffortSettings::default()).map(|(w, _, _)| w)
}

/// Returns `(window, effort, utility)`.
pub fn best_window_with(
    scenario: &Scenario,
    profile: &StrategyProfile,
    i: usize,
    settings: &EffortSettings,
) -> Result<(Window, f64, f64)> {
    let mut best: Option<(Window, f64, f64, f64)> = None;
    let mut x = profile.efforts.clone();
    for w in candidate_windows(scenario, i) {
        let tol = with_window(scenario, &profile.tolerances, i, w);
        let mut ev = Evaluator::new(scenario, &tol);
        let (effort, value) = ev.best_response(&mut x, i, settings)?;
        let cost = tolerance_cost(i, &w.interval(scenario), scenario);
        let better = match &best {
            None => true,
            Some((bw, _, bv, bc)) => {
                if value > bv + 1e-12 {
                    true
                } else if value >= bv - 1e-12 {
                    (w.width(), cost) < (bw.width(), *bc)
                } else {
                    false
                }
            }
        };
        if better {
            best = Some((w, effort, value, cost));
        }
    }
    let (w, e, v, _) = best.expect("at least the singleton window");
    Ok((w, e, v))
}

/// No agent gains more than the margin from any window-and-effort change.
pub fn check_unilateral(scenario: &Scenario, profile: &StrategyProfile) -> Result<UnilateralCheck> {
    check_unilateral_with(scenario, profile, &EffortSettings::default())
}

pub fn check_unilateral_with(
    scenario: &Scenario,
    profile: &StrategyProfile,
    settings: &EffortSettings,
) -> Result<UnilateralCheck> {
    let n = scenario.n();
    let mut x = profile.efforts.clone();
    let current: Vec<f64> = {
        let mut ev = Evaluator::new(scenario, &profile.tolerances);
        (0..n).map(|i| ev.total(&x, i)).collect()
    };
    for i in 0..n {
        // Effort-only deviation under the held interval.
        let mut ev = Evaluator::new(scenario, &profile.tolerances);
        let (e, v) = ev.best_response(&mut x, i, settings)?;
        if v - current[i] > DEVIATION_MARGIN {
            let w = windows_of(scenario, profile)[i];
            return Ok(fail_unilateral(i, w, e, v - current[i]));
        }
        for w in candidate_windows(scenario, i) {
            let tol = with_window(scenario, &profile.tolerances, i, w);
            let mut ev = Evaluator::new(scenario, &tol);
            let (e, v) = ev.best_response(&mut x, i, settings)?;
            if v - current[i] > DEVIATION_MARGIN {
                return Ok(fail_unilateral(i, w, e, v - current[i]));
            }
        }
    }
    Ok(UnilateralCheck {
        passed: true,
        witness: None,
    })
}

fn fail_unilateral(agent: usize, window: Window, effort: f64, gain: f64) -> UnilateralCheck {
    UnilateralCheck {
        passed: false,
        witness: Some(UnilateralWitness {
            agent,
            window,
            effort,
            gain,
        }),
    }
}

const COARSE_MARGIN: f64 = 1e-4;

/// Odometer step over per-agent candidate lists; false once exhausted.
fn advance(index: &mut [usize], candidates: &[Vec<Window>]) -> bool {
    for k in (0..index.len()).rev() {
        index[k] += 1;
        if index[k] < candidates[k].len() {
            return true;
        }
        index[k] = 0;
    }
    false
}

/// Cheap necessary condition: no window change pays off at the current effort.
fn unilateral_screen(scenario: &Scenario, tolerances: &[ToleranceInterval], x: &[f64]) -> bool {
    screen_with_margin(scenario, tolerances, x, DEVIATION_MARGIN)
}

fn screen_with_margin(scenario: &Scenario, tolerances: &[ToleranceInterval], x: &[f64], margin: f64) -> bool {
    let n = scenario.n();
    let mut ev = Evaluator::new(scenario, tolerances);
    let current: Vec<f64> = (0..n).map(|i| ev.total(x, i)).collect();
    for i in 0..n {
        for w in candidate_windows(scenario, i) {
            let tol = with_window(scenario, tolerances, i, w);
            let mut ev = Evaluator::new(scenario, &tol);
            if ev.total(x, i) - current[i] > margin {
                return false;
            }
        }
    }
    true
}

fn edge_moves(scenario: &Scenario, w: Window, owner: usize) -> Vec<Window> {
    let n = scenario.n();
    let mut out = vec![w];
    if w.lo > 0 {
        out.push(Window { lo: w.lo - 1, hi: w.hi });
    }
    if w.lo < owner {
        out.push(Window { lo: w.lo + 1, hi: w.hi });
    }
    if w.hi + 1 < n {
        out.push(Window { lo: w.lo, hi: w.hi + 1 });
    }
    if w.hi > owner {
        out.push(Window { lo: w.lo, hi: w.hi - 1 });
    }
    out
}

fn include(w: Window, j: usize) -> Window {
    Window {
        lo: w.lo.min(j),
        hi: w.hi.max(j),
    }
}

/// Joint window pairs examined for the pair `(i, j)` at `level`.
fn joint_candidates(scenario: &Scenario, windows: &[Window], i: usize, j: usize, level: VerificationLevel) -> Vec<(Window, Window)> {
    match level {
        VerificationLevel::Exhaustive => {
            let wi = candidate_windows(scenario, i);
            let wj = candidate_windows(scenario, j);
            wi.iter().flat_map(|&a| wj.iter().map(move |&b| (a, b))).collect()
        }
        VerificationLevel::EdgeMove => {
            let mi = edge_moves(scenario, windows[i], i);
            let mj = edge_moves(scenario, windows[j], j);
            let mut out: Vec<(Window, Window)> = mi.iter().flat_map(|&a| mj.iter().map(move |&b| (a, b))).collect();
            let mutual = (include(windows[i], j), include(windows[j], i));
            if !out.contains(&mutual) {
                out.push(mutual);
            }
            out
        }
    }
}

const PAIR_ROUNDS: usize = 60;
const PAIR_TOLERANCE: f64 = 1e-7;

/// Alternating best responses of `i` and `j`; `None` if it stalls.
fn pair_efforts(ev: &mut Evaluator<'_>, x: &mut [f64], i: usize, j: usize, settings: &EffortSettings) -> Result<Option<()>> {
    for _ in 0..PAIR_ROUNDS {
        let (ei, _) = ev.best_response(x, i, settings)?;
        let di = (ei - x[i]).abs();
        x[i] = ei;
        let (ej, _) = ev.best_response(x, j, settings)?;
        let dj = (ej - x[j]).abs();
        x[j] = ej;
        if di.max(dj) < PAIR_TOLERANCE * x[i].max(x[j]).max(1.0) {
            return Ok(Some(()));
        }
    }
    Ok(None)
}

/// No pair has a joint deviation that is strictly better for one and weakly
/// better for the other, with all other strategies fixed.
pub fn check_bilateral(scenario: &Scenario, profile: &StrategyProfile, level: VerificationLevel) -> Result<BilateralCheck> {
    check_bilateral_with(scenario, profile, level, &EffortSettings::default())
}

pub fn check_bilateral_with(
    scenario: &Scenario,
    profile: &StrategyProfile,
    level: VerificationLevel,
    settings: &EffortSettings,
) -> Result<BilateralCheck> {
    let n = scenario.n();
    let windows = windows_of(scenario, profile);
    let base: Vec<f64> = {
        let mut ev = Evaluator::new(scenario, &profile.tolerances);
        (0..n).map(|i| ev.total(&profile.efforts, i)).collect()
    };
    let mut skipped = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for (wi, wj) in joint_candidates(scenario, &windows, i, j, level) {
                if wi == windows[i] && wj == windows[j] {
                    continue;
                }
                let mut tol = with_window(scenario, &profile.tolerances, i, wi);
                tol[j] = wj.interval(scenario);
                let mut ev = Evaluator::new(scenario, &tol);
                let mut x = profile.efforts.clone();
                if pair_efforts(&mut ev, &mut x, i, j, settings)?.is_none() {
                    skipped += 1;
                    continue;
                }
                let gi = ev.total(&x, i) - base[i];
                let gj = ev.total(&x, j) - base[j];
                let violation = (gi > DEVIATION_MARGIN && gj >= -DEVIATION_MARGIN)
                    || (gj > DEVIATION_MARGIN && gi >= -DEVIATION_MARGIN);
                if violation {
                    return Ok(BilateralCheck {
                        passed: false,
                        witness: Some(BilateralWitness {
                            i,
                            j,
                            window_i: wi,
                            window_j: wj,
                            effort_i: x[i],
                            effort_j: x[j],
                            gain_i: gi,
                            gain_j: gj,
                        }),
                        skipped,
                    });
                }
            }
        }
    }
    Ok(BilateralCheck {
        passed: true,
        witness: None,
        skipped,
    })
}

/// Agents from most to least extreme; at equal extremity the higher type first.
pub fn extremity_order(scenario: &Scenario) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scenario.n()).collect();
    order.sort_by(|&a, &b| {
        let ea = (scenario.theta(a) - 0.5).abs();
        let eb = (scenario.theta(b) - 0.5).abs();
        eb.total_cmp(&ea).then(b.cmp(&a))
    });
    order
}

/// `windows` after `i` adopts `w` and everyone reciprocates: agents inside
/// `w` extend to include `i`, agents outside stop tolerating `i`.
pub fn reciprocate(windows: &[Window], i: usize, w: Window) -> Vec<Window> {
    let mut out = windows.to_vec();
    out[i] = w;
    for (j, wj) in out.iter_mut().enumerate() {
        if j == i {
            continue;
        }
        if w.contains(j) {
            *wj = include(*wj, i);
        } else if wj.contains(i) {
            if j > i {
                wj.lo = i + 1;
            } else {
                wj.hi = i - 1;
            }
        }
    }
    out
}

struct Search<'s> {
    scenario: &'s Scenario,
    settings: EquilibriumSettings,
    diagnostics: SolveDiagnostics,
}

impl<'s> Search<'s> {
    fn nash(&mut self, windows: &[Window], start: &[f64]) -> Result<Vec<f64>> {
        let tol = intervals_of(self.scenario, windows);
        let mut ev = Evaluator::new(self.scenario, &tol);
        let sol = solve_with(&mut ev, start, &self.settings.effort)?;
        self.diagnostics.effort_converged = sol.converged;
        Ok(sol.efforts)
    }

    /// One pass of reciprocated best windows in extremity order.
    fn sweep(&mut self, windows: &mut Vec<Window>, x: &mut Vec<f64>) -> Result<bool> {
        let mut changed = false;
        for i in extremity_order(self.scenario) {
            let mut best = (windows[i], f64::NEG_INFINITY, f64::INFINITY);
            let mut best_effort = x[i];
            let mut best_profile = windows.clone();
            for w in candidate_windows(self.scenario, i) {
                let trial = reciprocate(windows, i, w);
                let tol = intervals_of(self.scenario, &trial);
                let mut ev = Evaluator::new(self.scenario, &tol);
                let (e, v) = ev.best_response(x, i, &self.settings.effort)?;
                let cost = tolerance_cost(i, &w.interval(self.scenario), self.scenario);
                let better = v > best.1 + 1e-12 || (v >= best.1 - 1e-12 && (w.width(), cost) < (best.0.width(), best.2));
                if better {
                    best = (w, v, cost);
                    best_effort = e;
                    best_profile = trial;
                }
            }
            if best_profile != *windows {
                *windows = best_profile;
                x[i] = best_effort;
                changed = true;
            }
        }
        Ok(changed)
    }

    fn certify(&mut self, windows: &[Window], x: &[f64], level: VerificationLevel) -> Result<(UnilateralCheck, BilateralCheck)> {
        let profile = StrategyProfile {
            tolerances: intervals_of(self.scenario, windows),
            efforts: x.to_vec(),
        };
        let clock = std::time::Instant::now();
        let uni = check_unilateral_with(self.scenario, &profile, &self.settings.effort)?;
        log::debug!("unilateral check {:?}", clock.elapsed());
        if !uni.passed {
            let bi = BilateralCheck {
                passed: false,
                witness: None,
                skipped: 0,
            };
            return Ok((uni, bi));
        }
        let bi = check_bilateral_with(self.scenario, &profile, level, &self.settings.effort)?;
        self.diagnostics.skipped_bilateral = bi.skipped;
        log::debug!("bilateral check {:?}", clock.elapsed());
        Ok((uni, bi))
    }
}

/// Constructs the bilateral equilibrium and certifies it.
pub fn solve_equilibrium(scenario: &Scenario, settings: &EquilibriumSettings) -> Result<EquilibriumResult> {
    let n = scenario.n();
    let level = settings.verify.unwrap_or_else(|| VerificationLevel::default_for(n));
    let mut search = Search {
        scenario,
        settings: *settings,
        diagnostics: SolveDiagnostics::default(),
    };
    let mut windows: Vec<Window> = (0..n).map(Window::singleton).collect();
    let start = vec![settings.effort.initial_effort; n];
    let mut x = search.nash(&windows, &start)?;
    let mut seen: HashSet<Vec<Window>> = HashSet::new();
    seen.insert(windows.clone());

    let clock = std::time::Instant::now();
    let mut cycled = false;
    for _ in 0..settings.max_sweeps {
        search.diagnostics.sweeps += 1;
        let changed = search.sweep(&mut windows, &mut x)?;
        x = search.nash(&windows, &x)?;
        if !changed {
            break;
        }
        if !seen.insert(windows.clone()) {
            cycled = true;
            break;
        }
    }
    log::debug!("{} sweeps in {:?}", search.diagnostics.sweeps, clock.elapsed());

    // Improvement path along certificate witnesses.
    let mut verdict = search.certify(&windows, &x, level)?;
    log::debug!("first certificate at {:?}", clock.elapsed());
    let mut visited: HashSet<Vec<Window>> = HashSet::new();
    visited.insert(windows.clone());
    while !(verdict.0.passed && verdict.1.passed) && search.diagnostics.repairs < settings.max_repairs {
        search.diagnostics.repairs += 1;
        if let Some(w) = verdict.0.witness {
            windows[w.agent] = w.window;
            x[w.agent] = w.effort;
        } else if let Some(w) = verdict.1.witness {
            windows[w.i] = w.window_i;
            windows[w.j] = w.window_j;
            x[w.i] = w.effort_i;
            x[w.j] = w.effort_j;
        } else {
            break;
        }
        x = search.nash(&windows, &x)?;
        if !visited.insert(windows.clone()) {
            cycled = true;
            break;
        }
        verdict = search.certify(&windows, &x, level)?;
    }
    log::debug!("{} repairs, done at {:?}", search.diagnostics.repairs, clock.elapsed());
    search.diagnostics.cycle_detected = cycled;

    if !(verdict.0.passed && verdict.1.passed) && n <= settings.fallback_max_n {
        log::debug!("constructive search did not certify; enumerating window profiles");
        let ordered_only = !matches!(scenario.params.flexibility_mode, FlexibilityMode::FlexibleExtremists { .. });
        if let Some((w, e)) = enumerate_certified(&mut search, level, ordered_only)? {
            windows = w;
            x = e;
            verdict = search.certify(&windows, &x, level)?;
            search.diagnostics.fallback_used = true;
        }
    }
    // Restate convergence for the returned windows (the enumeration overwrites
    // the flag) and tighten the efforts so symmetric agents agree closely.
    let mut x = search.nash(&windows, &x)?;
    if search.diagnostics.effort_converged {
        // Undamped sweeps from a near-fixed point usually land on an exact
        // floating-point fixed point; keep the result unless it wandered off.
        let tight = EffortSettings {
            tolerance: settings.effort.tolerance.min(FINAL_TOLERANCE),
            max_sweeps: FINAL_SWEEPS,
            halvings: 0,
            damping: 1.0,
            ..settings.effort
        };
        let tol = intervals_of(scenario, &windows);
        let sol = solve_with(&mut Evaluator::new(scenario, &tol), &x, &tight)?;
        if sol.residual <= settings.effort.tolerance {
            x = sol.efforts;
        }
    }

    let profile = StrategyProfile {
        tolerances: intervals_of(scenario, &windows),
        efforts: x,
    };
    let network = build_network(scenario, &profile);
    let balance = classify(&network);
    let ordered = is_ordered(scenario, &profile);
    Ok(EquilibriumResult {
        profile,
        windows,
        network,
        balance,
        certified_unilateral: verdict.0.passed,
        certified_bilateral: verdict.0.passed && verdict.1.passed,
        verification_level: level,
        ordered,
        diagnostics: search.diagnostics,
    })
}

/// All mutual-tolerance window profiles, optionally restricted to ordered ones.
pub fn mutual_window_profiles(n: usize, ordered_only: bool) -> Vec<Vec<Window>> {
    fn extend(n: usize, ordered_only: bool, acc: &mut Vec<Window>, out: &mut Vec<Vec<Window>>) {
        let i = acc.len();
        if i == n {
            // Forward consistency: j ∈ W_i for j > i must match i ∈ W_j.
            out.push(acc.clone());
            return;
        }
        for lo in 0..=i {
            for hi in i..n {
                let w = Window { lo, hi };
                let consistent = (0..i).all(|j| w.contains(j) == acc[j].contains(i));
                if !consistent {
                    continue;
                }
                if ordered_only && i > 0 && (w.lo < acc[i - 1].lo || w.hi < acc[i - 1].hi) {
                    continue;
                }
                acc.push(w);
                extend(n, ordered_only, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, ordered_only, &mut Vec::with_capacity(n), &mut out);
    out
}

fn enumerate_certified(search: &mut Search<'_>, level: VerificationLevel, ordered_only: bool) -> Result<Option<(Vec<Window>, Vec<f64>)>> {
    let scenario = search.scenario;
    let n = scenario.n();
    let start = vec![search.settings.effort.initial_effort; n];
    for windows in mutual_window_profiles(n, ordered_only) {
        let x = search.nash(&windows, &start)?;
        let tol = intervals_of(scenario, &windows);
        if !unilateral_screen(scenario, &tol, &x) {
            continue;
        }
        let (u, b) = search.certify(&windows, &x, level)?;
        if u.passed && b.passed {
            return Ok(Some((windows, x)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEquilibrium {
    pub windows: Vec<Window>,
    pub efforts: Vec<f64>,
    pub ordered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub all_equilibria: Vec<OracleEquilibrium>,
    pub ordered_count: usize,
    pub profiles_examined: usize,
    /// Profiles whose coarse effort iteration did not settle.
    pub unresolved: usize,
    pub matches_solver: bool,
    pub solver: Option<EquilibriumResult>,
}

/// Enumerates every window profile (ordered or not), keeps those passing
/// exhaustive unilateral and bilateral checks, and compares with the solver.
pub fn brute_force_oracle(scenario: &Scenario) -> Result<OracleReport> {
    brute_force_oracle_with(scenario, &EquilibriumSettings::default())
}

pub fn brute_force_oracle_with(scenario: &Scenario, settings: &EquilibriumSettings) -> Result<OracleReport> {
    let n = scenario.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge { n, limit: ORACLE_MAX_N });
    }
    // Cheap pass: loose effort solve, warm-started along the enumeration,
    // then a fixed-effort window screen with a generous margin.
    let coarse = EffortSettings {
        tolerance: 1e-6,
        max_sweeps: 60,
        bracket: 1e-4,
        grid_points: 16,
        halvings: 0,
        ..settings.effort
    };
    let retry = EffortSettings {
        damping: 0.2,
        max_sweeps: 100,
        halvings: 0,
        ..coarse
    };
    let candidates: Vec<Vec<Window>> = (0..n).map(|i| candidate_windows(scenario, i)).collect();
    let mut index = vec![0usize; n];
    let start = vec![settings.effort.initial_effort; n];
    let mut warm = start.clone();
    let mut found = Vec::new();
    let mut examined = 0;
    let mut unresolved = 0;
    loop {
        let windows: Vec<Window> = index.iter().enumerate().map(|(i, &k)| candidates[i][k]).collect();
        examined += 1;
        let tol = intervals_of(scenario, &windows);
        let mut ev = Evaluator::new(scenario, &tol);
        let mut rough = solve_with(&mut ev, &warm, &coarse)?;
        if !rough.converged {
            // Slower, more heavily damped retry before giving up on the profile.
            rough = solve_with(&mut ev, &start, &retry)?;
        }
        if !rough.converged {
            unresolved += 1;
        } else {
            warm.clone_from(&rough.efforts);
            if screen_with_margin(scenario, &tol, &rough.efforts, COARSE_MARGIN) {
                let sol = solve_with(&mut ev, &rough.efforts, &settings.effort)?;
                if sol.converged {
                    let profile = StrategyProfile {
                        tolerances: tol,
                        efforts: sol.efforts.clone(),
                    };
                    if check_unilateral_with(scenario, &profile, &settings.effort)?.passed
                        && check_bilateral_with(scenario, &profile, VerificationLevel::Exhaustive, &settings.effort)?.passed
                    {
                        found.push(OracleEquilibrium {
                            ordered: is_ordered(scenario, &profile),
                            windows: windows.clone(),
                            efforts: sol.efforts,
                        });
                    }
                }
            }
        }
        if !advance(&mut index, &candidates) {
            break;
        }
    }
    let solver_settings = EquilibriumSettings {
        verify: Some(VerificationLevel::Exhaustive),
        ..*settings
    };
    let solver = solve_equilibrium(scenario, &solver_settings)?;
    let matches_solver = solver.certified()
        && found.iter().any(|eq| {
            eq.windows == solver.windows
                && eq
                    .efforts
                    .iter()
                    .zip(&solver.profile.efforts)
                    .all(|(a, b)| (a - b).abs() <= 1e-6)
        });
    Ok(OracleReport {
        ordered_count: found.iter().filter(|e| e.ordered).count(),
        all_equilibria: found,
        profiles_examined: examined,
        unresolved,
        matches_solver,
        solver: Some(solver),
    })
}

