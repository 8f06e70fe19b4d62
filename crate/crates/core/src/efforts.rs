//! Utilities and the effort fixed point for a fixed tolerance profile.
//!
//! The hot path is [`Evaluator`]: it owns scratch buffers and rebuilds only
//! what agent `i`'s utility needs, so a best-response line search costs
//! `O(n²)` per probe.

use serde::{Deserialize, Serialize};

use crate::contest::CsfParams;
use crate::error::{Error, Result};
use crate::extensions::{adjusted_from_dense, path_mu_from_dense};
use crate::network::Layout;
use crate::scenario::{tolerance_cost, DisputeSet, Scenario, StrategyProfile, StrengthMode, ToleranceInterval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityBreakdown {
    /// Net of any dispute initiation costs.
    pub dispute_benefits: f64,
    pub effort_cost: f64,
    pub tolerance_cost: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortSolution {
    pub efforts: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub damping: f64,
}

/// Solver knobs for best responses and the effort fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffortSettings {
    pub damping: f64,
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Final golden-section bracket width.
    pub bracket: f64,
    pub grid_points: usize,
    /// Run a 256-point scan and reject multimodal objectives.
    pub unimodality_scan: bool,
    pub initial_effort: f64,
    /// Times the damping is halved after a stalled run.
    pub halvings: usize,
}

impl Default for EffortSettings {
    fn default() -> Self {
        EffortSettings {
            damping: 0.5,
            tolerance: 1e-8,
            max_sweeps: 10_000,
            bracket: 1e-10,
            grid_points: 64,
            unimodality_scan: false,
            initial_effort: 1.0,
            halvings: 2,
        }
    }
}

/// Which disputes pay out when initiation is costly.
#[derive(Debug, Clone)]
pub(crate) struct Initiation {
    pub cost: f64,
    /// `initiated[i * n + j]`: `i` starts the dispute with `j`.
    pub initiated: Vec<bool>,
}

impl Initiation {
    #[inline]
    fn active(&self, n: usize, i: usize, j: usize) -> bool {
        self.initiated[i * n + j] || self.initiated[j * n + i]
    }
}

/// Upper end of the effort search interval.
pub fn effort_upper_bound(scenario: &Scenario) -> f64 {
    let n = scenario.n() as f64;
    let p = &scenario.params;
    let cohesion_cap = p.beta * (n - 2.0).max(0.0).powf(p.alpha);
    2.0 * n * (0.5 + cohesion_cap) / p.effort_cost
}

pub(crate) struct Evaluator<'s> {
    scenario: &'s Scenario,
    csf: CsfParams,
    pub layout: Layout,
    tol_costs: Vec<f64>,
    initiation: Option<Initiation>,
    n: usize,
    prefix: Vec<f64>,
    w: Vec<f64>,
    lam: Vec<f64>,
    mu: Vec<f64>,
    allies: Vec<usize>,
}

impl<'s> Evaluator<'s> {
    pub fn new(scenario: &'s Scenario, tolerances: &[ToleranceInterval]) -> Self {
        let n = scenario.n();
        let layout = Layout::new(scenario, tolerances);
        let tol_costs = tolerances
            .iter()
            .enumerate()
            .map(|(i, t)| tolerance_cost(i, t, scenario))
            .collect();
        Evaluator {
            scenario,
            csf: CsfParams::from(&scenario.params),
            layout,
            tol_costs,
            initiation: None,
            n,
            prefix: Vec::with_capacity(n + 1),
            w: vec![0.0; n * n],
            lam: vec![0.0; n],
            mu: vec![0.0; n],
            allies: Vec::with_capacity(n),
        }
    }

    pub fn with_initiation(mut self, initiation: Option<Initiation>) -> Self {
        self.initiation = initiation;
        self
    }

    pub fn utility(&mut self, x: &[f64], i: usize) -> UtilityBreakdown {
        let (strength, fixed) = self.split(x, i);
        let effort_cost = self.scenario.params.effort_cost * x[i];
        let tolerance_cost = self.tol_costs[i];
        let benefits = strength + fixed;
        UtilityBreakdown {
            dispute_benefits: benefits,
            effort_cost,
            tolerance_cost,
            total: benefits - effort_cost - tolerance_cost,
        }
    }

    /// Dispute benefits as `(strength terms, cohesion and initiation terms)`.
    /// The second part only depends on `x_i` through whether it is zero.
    fn split(&mut self, x: &[f64], i: usize) -> (f64, f64) {
        let n = self.n;
        self.layout.fill_weights(x, &mut self.prefix, &mut self.w);
        for a in 0..n {
            self.lam[a] = self.w[a * n..(a + 1) * n].iter().sum();
        }
        let mode = self.scenario.params.strength_mode;
        if let StrengthMode::PathBased { max_length } = mode {
            path_mu_from_dense(&self.w, n, max_length, &mut self.mu);
        }
        self.allies.clear();
        for h in 0..n {
            if h != i && self.w[i * n + h] > 0.0 {
                self.allies.push(h);
            }
        }
        let (lo, hi) = (self.layout.lo[i], self.layout.hi[i]);
        let unlinked = self.scenario.params.dispute_set == DisputeSet::Unlinked;
        let mut strength = 0.0;
        let mut fixed = 0.0;
        for j in 0..n {
            let opponent = if unlinked {
                j != i && self.w[i * n + j] <= 0.0
            } else {
                j < lo || j > hi
            };
            if !opponent {
                continue;
            }
            if let Some(init) = &self.initiation {
                if !init.active(n, i, j) {
                    continue;
                }
                if init.initiated[i * n + j] {
                    fixed -= init.cost;
                }
            }
            let row_j = &self.w[j * n..(j + 1) * n];
            let coh = self
                .allies
                .iter()
                .filter(|&&h| h != j && row_j[h] <= 0.0)
                .count();
            let (si, sj) = match mode {
                StrengthMode::Baseline => (self.lam[i], self.lam[j]),
                StrengthMode::Adjusted => (
                    adjusted_from_dense(&self.w, n, &self.lam, i, j),
                    adjusted_from_dense(&self.w, n, &self.lam, j, i),
                ),
                StrengthMode::PathBased { .. } => (self.mu[i], self.mu[j]),
            };
            strength += self.csf.strength_part(si, sj);
            fixed += self.csf.cohesion_part(coh);
        }
        (strength, fixed)
    }

    #[inline]
    pub fn total(&mut self, x: &[f64], i: usize) -> f64 {
        self.utility(x, i).total
    }

    /// Own-effort best response of `i`; `x` is restored before returning.
    pub fn best_response(&mut self, x: &mut [f64], i: usize, settings: &EffortSettings) -> Result<(f64, f64)> {
        let saved = x[i];
        let upper = effort_upper_bound(self.scenario);
        let cost = self.scenario.params.effort_cost;
        // Maximise only the parts that move with x_i; the large constant
        // would otherwise swamp a flat top in rounding noise.
        x[i] = upper;
        let offset = self.split(x, i).1 - self.tol_costs[i];
        let out = {
            let mut f = |v: f64| {
                x[i] = v;
                if v > 0.0 {
                    self.split(x, i).0 - cost * v
                } else {
                    self.total(x, i) - offset
                }
            };
            maximize_1d(&mut f, upper, settings)
        };
        x[i] = saved;
        out.map(|(v, u)| (v, u + offset)).map_err(|(first, second)| Error::NonUnimodal {
            agent: i,
            first,
            second,
        })
    }
}

/// Grid-seeded golden-section maximisation on `[0, upper]`.
///
/// Returns `(argmax, max)`, or the two peak locations when the optional
/// unimodality scan finds separated local maxima.
pub(crate) fn maximize_1d(
    f: &mut impl FnMut(f64) -> f64,
    upper: f64,
    settings: &EffortSettings,
) -> std::result::Result<(f64, f64), (f64, f64)> {
    if settings.unimodality_scan {
        scan_unimodal(f, upper)?;
    }
    let m = settings.grid_points.max(3);
    let step = upper / (m - 1) as f64;
    let mut best_k = 0;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..m {
        let v = f(k as f64 * step);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let a = best_k.saturating_sub(1) as f64 * step;
    let b = ((best_k + 1).min(m - 1)) as f64 * step;
    // Bracketing below ~1e-7 relative only chases rounding noise on a flat
    // top; parabolic steps resolve smooth maxima far more finely.
    let (gx, gv) = golden_section_max(f, a, b, settings.bracket, GOLDEN_FLOOR);
    let (mut x, mut v) = if gv > best_v { (gx, gv) } else { (best_k as f64 * step, best_v) };
    for h in [1e-5, 1e-5] {
        if let Some((px, pv)) = parabolic_step(f, x, v, h * x.max(1e-2), upper) {
            // Near a flat top the values differ by rounding noise only, so
            // the vertex wins unless it is clearly worse.
            if pv >= v - 64.0 * f64::EPSILON * v.abs().max(1.0) {
                x = px;
                v = pv;
            }
        }
    }
    Ok((x, v))
}

const GOLDEN_FLOOR: f64 = 1e-7;

/// Vertex of the parabola through `x − h, x, x + h`, if it is a maximum nearby.
fn parabolic_step(f: &mut impl FnMut(f64) -> f64, x: f64, fx: f64, h: f64, upper: f64) -> Option<(f64, f64)> {
    if x - h < 0.0 || x + h > upper {
        return None;
    }
    let fl = f(x - h);
    let fr = f(x + h);
    let curvature = fl - 2.0 * fx + fr;
    if curvature >= 0.0 {
        return None;
    }
    let shift = 0.5 * h * (fl - fr) / curvature;
    if shift.abs() > h {
        return None;
    }
    let px = x + shift;
    Some((px, f(px)))
}

/// Stops once the bracket is narrower than `width` or `relative` times its midpoint.
fn golden_section_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, width: f64, relative: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut guard = 0;
    while b - a > width.max(relative * 0.5 * (a + b)) && guard < 200 {
        guard += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn scan_unimodal(f: &mut impl FnMut(f64) -> f64, upper: f64) -> std::result::Result<(), (f64, f64)> {
    const POINTS: usize = 256;
    const SLACK: f64 = 1e-9;
    let xs: Vec<f64> = (0..POINTS).map(|k| upper * k as f64 / (POINTS - 1) as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let peaks: Vec<usize> = (0..POINTS)
        .filter(|&k| {
            let left = k == 0 || vs[k] >= vs[k - 1];
            let right = k == POINTS - 1 || vs[k] >= vs[k + 1];
            left && right
        })
        .collect();
    for w in peaks.windows(2) {
        let (p, q) = (w[0], w[1]);
        let dip = vs[p..=q].iter().copied().fold(f64::INFINITY, f64::min);
        if dip < vs[p].min(vs[q]) - SLACK {
            return Err((xs[p], xs[q]));
        }
    }
    Ok(())
}

/// Full utility breakdown of agent `i` under `profile`.
pub fn utility(scenario: &Scenario, profile: &StrategyProfile, i: usize) -> UtilityBreakdown {
    Evaluator::new(scenario, &profile.tolerances).utility(&profile.efforts, i)
}

/// Utility-maximising own effort, everything else held fixed.
pub fn best_response_effort(scenario: &Scenario, profile: &StrategyProfile, i: usize) -> Result<f64> {
    best_response_effort_with(scenario, profile, i, &EffortSettings::default())
}

pub fn best_response_effort_with(
    scenario: &Scenario,
    profile: &StrategyProfile,
    i: usize,
    settings: &EffortSettings,
) -> Result<f64> {
    let mut ev = Evaluator::new(scenario, &profile.tolerances);
    let mut x = profile.efforts.clone();
    Ok(ev.best_response(&mut x, i, settings)?.0)
}

/// Damped Gauss–Seidel best-response iteration from a uniform start.
pub fn solve_efforts(scenario: &Scenario, tolerances: &[ToleranceInterval]) -> Result<EffortSolution> {
    let settings = EffortSettings::default();
    let start = vec![settings.initial_effort; scenario.n()];
    solve_efforts_from(scenario, tolerances, &start, &settings)
}

pub fn solve_efforts_from(
    scenario: &Scenario,
    tolerances: &[ToleranceInterval],
    start: &[f64],
    settings: &EffortSettings,
) -> Result<EffortSolution> {
    let mut ev = Evaluator::new(scenario, tolerances);
    solve_with(&mut ev, start, settings)
}

pub(crate) fn solve_with(ev: &mut Evaluator<'_>, start: &[f64], settings: &EffortSettings) -> Result<EffortSolution> {
    let n = start.len();
    let mut damping = settings.damping;
    let mut total_sweeps = 0;
    let mut last = EffortSolution {
        efforts: start.to_vec(),
        iterations: 0,
        residual: f64::INFINITY,
        converged: false,
        damping,
    };
    for _attempt in 0..=settings.halvings {
        let mut x = start.to_vec();
        let mut residual = f64::INFINITY;
        for sweep in 0..settings.max_sweeps {
            residual = 0.0;
            for i in 0..n {
                let (br, _) = ev.best_response(&mut x, i, settings)?;
                let next = (1.0 - damping) * x[i] + damping * br;
                residual = f64::max(residual, (next - x[i]).abs());
                x[i] = next;
            }
            total_sweeps += 1;
            if residual < settings.tolerance {
                // Undamped polish so corner solutions land exactly.
                let mut polished = x.clone();
                let mut shift: f64 = 0.0;
                for i in 0..n {
                    let (br, _) = ev.best_response(&mut polished, i, settings)?;
                    shift = shift.max((br - polished[i]).abs());
                    polished[i] = br;
                }
                if shift < settings.tolerance.sqrt() {
                    x = polished;
                    residual = shift;
                }
                return Ok(EffortSolution {
                    efforts: x,
                    iterations: total_sweeps,
                    residual,
                    converged: true,
                    damping,
                });
            }
            if sweep + 1 == settings.max_sweeps {
                log::debug!("effort iteration stalled at residual {residual:e} with damping {damping}");
            }
        }
        last = EffortSolution {
            efforts: x,
            iterations: total_sweeps,
            residual,
            converged: false,
            damping,
        };
        damping *= 0.5;
    }
    Ok(last)
}

/// `max_i |BR_i(x) − x_i|`, each best response taken against the unchanged profile.
pub fn fixed_point_residual(scenario: &Scenario, profile: &StrategyProfile, settings: &EffortSettings) -> Result<f64> {
    let mut ev = Evaluator::new(scenario, &profile.tolerances);
    let mut worst: f64 = 0.0;
    for i in 0..scenario.n() {
        let mut x = profile.efforts.clone();
        let (br, _) = ev.best_response(&mut x, i, settings)?;
        worst = worst.max((br - profile.efforts[i]).abs());
    }
    Ok(worst)
}

/// True when some capped/uncapped status flips within `radius` of `x_i`.
pub fn near_cap_kink(scenario: &Scenario, profile: &StrategyProfile, i: usize, radius: f64) -> bool {
    let layout = Layout::new(scenario, &profile.tolerances);
    let mut lo = profile.efforts.clone();
    let mut hi = profile.efforts.clone();
    lo[i] = (lo[i] - radius).max(0.0);
    hi[i] += radius;
    let a = layout.raw_weights(&lo);
    let b = layout.raw_weights(&hi);
    let mid = layout.raw_weights(&profile.efforts);
    let capped = |v: &[(usize, usize, f64)]| -> Vec<(usize, usize, bool)> {
        v.iter().map(|&(p, q, g)| (p, q, g >= 1.0)).collect()
    };
    let (ca, cb, cm) = (capped(&a), capped(&b), capped(&mid));
    ca != cm || cb != cm
}
