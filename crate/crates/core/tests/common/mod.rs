//! Direct, unoptimised evaluation of the model used as an oracle in tests.
#![allow(dead_code)]

/// Tolerated sets as explicit index lists.
pub fn tolerated(thetas: &[f64], bounds: &[(f64, f64)]) -> Vec<Vec<usize>> {
    bounds
        .iter()
        .map(|&(lo, hi)| (0..thetas.len()).filter(|&j| thetas[j] >= lo && thetas[j] <= hi).collect())
        .collect()
}

pub fn weights(thetas: &[f64], bounds: &[(f64, f64)], x: &[f64]) -> Vec<Vec<f64>> {
    let n = thetas.len();
    let k = tolerated(thetas, bounds);
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if x[i] <= 0.0 || x[j] <= 0.0 {
                continue;
            }
            if i == j {
                let s: f64 = k[i].iter().map(|&h| x[h]).sum();
                g[i][i] = (x[i] * x[i] / s).min(1.0);
            } else if k[i].contains(&j) && k[j].contains(&i) {
                let s: f64 = (0..n).filter(|h| k[i].contains(h) || k[j].contains(h)).map(|h| x[h]).sum();
                g[i][j] = (x[i] * x[j] / s).min(1.0);
            }
        }
    }
    g
}

pub fn strengths(g: &[Vec<f64>]) -> Vec<f64> {
    g.iter().map(|r| r.iter().sum()).collect()
}

pub fn intensity(g: &[Vec<f64>]) -> f64 {
    let lam = strengths(g);
    let n = g.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j && g[i][j] == 0.0 {
                s += lam[i] * lam[j];
            }
        }
    }
    s
}

/// Ratio-form utility with the literal dispute set.
#[allow(clippy::too_many_arguments)]
pub fn utility(thetas: &[f64], bounds: &[(f64, f64)], x: &[f64], i: usize, phi: f64, beta: f64, alpha: f64, c: f64, tau: f64) -> f64 {
    let n = thetas.len();
    let g = weights(thetas, bounds, x);
    let lam = strengths(&g);
    let k = tolerated(thetas, bounds);
    let mut benefit = 0.0;
    for j in 0..n {
        if k[i].contains(&j) {
            continue;
        }
        let coh = (0..n).filter(|&h| h != i && h != j && g[i][h] > 0.0 && g[h][j] == 0.0).count();
        let (a, b) = (lam[i].powf(phi), lam[j].powf(phi));
        let strength = if lam[i] == 0.0 && lam[j] == 0.0 { 0.0 } else { a / (a + b) - 0.5 };
        let cohesion = if coh == 0 { 0.0 } else { beta * (coh as f64).powf(alpha) };
        benefit += strength + cohesion;
    }
    let (lo, hi) = bounds[i];
    benefit - c * x[i] - tau * ((thetas[i] - lo).powi(2) + (hi - thetas[i]).powi(2))
}

pub mod hand {
    use cohesion_net::*;
    use std::result::Result;

    pub const LINE: [f64; 3] = [0.0, 0.5, 1.0];
    pub const TWO: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

    pub fn scenario(thetas: &[f64], params: GameParams) -> Scenario {
        Scenario::from_ideologies(thetas, params).unwrap()
    }

    pub fn profile(bounds: &[(f64, f64)], x: &[f64]) -> StrategyProfile {
        StrategyProfile {
            tolerances: bounds.iter().map(|&(l, u)| ToleranceInterval::new(l, u)).collect(),
            efforts: x.to_vec(),
        }
    }

    pub fn line_bounds() -> Vec<(f64, f64)> {
        vec![(0.0, 0.5), (0.0, 1.0), (0.5, 1.0)]
    }

    pub fn two_bounds() -> Vec<(f64, f64)> {
        vec![(0.0, 0.3), (0.0, 0.3), (0.7, 1.0), (0.7, 1.0)]
    }

    fn close(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
        if (got - want).abs() <= tol {
            Ok(())
        } else {
            Err(format!("{label}: got {got}, want {want}"))
        }
    }

    fn weights_match(net: &Network, want: &[Vec<f64>]) -> Result<(), String> {
        for (i, row) in want.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                close(&format!("g[{i}][{j}]"), net.weight(i, j), w, 1e-12)?;
            }
        }
        Ok(())
    }

    pub fn line_instance() -> Result<(), String> {
        let s = scenario(&LINE, GameParams::default());
        let p = profile(&line_bounds(), &[1.0; 3]);
        let net = build_network(&s, &p);
        let t = 1.0 / 3.0;
        weights_match(&net, &[vec![0.5, t, 0.0], vec![t, t, t], vec![0.0, t, 0.5]])?;
        weights_match(&net, &super::weights(&LINE, &line_bounds(), &[1.0; 3]))?;
        for (i, want) in [5.0 / 6.0, 1.0, 5.0 / 6.0].into_iter().enumerate() {
            close(&format!("lambda[{i}]"), net.strengths[i], want, 1e-12)?;
        }
        close("intensity", dispute_intensity(&net), 25.0 / 18.0, 1e-12)?;
        let r = polarization_report(&s, &p);
        if r.dispute_count != 1 {
            return Err(format!("dispute_count {}", r.dispute_count));
        }
        if cohesion_count(&net, 0, 2).unwrap() != 0 {
            return Err("line cohesion should be 0".into());
        }
        if !is_ordered(&s, &p) {
            return Err("line profile should be ordered".into());
        }
        Ok(())
    }

    pub fn two_clique_instance() -> Result<(), String> {
        let params = GameParams {
            beta: 0.5,
            ..GameParams::default()
        };
        let s = scenario(&TWO, params);
        let p = profile(&two_bounds(), &[1.0; 4]);
        let net = build_network(&s, &p);
        let h = 0.5;
        weights_match(
            &net,
            &[
                vec![h, h, 0.0, 0.0],
                vec![h, h, 0.0, 0.0],
                vec![0.0, 0.0, h, h],
                vec![0.0, 0.0, h, h],
            ],
        )?;
        for i in 0..4 {
            close(&format!("lambda[{i}]"), net.strengths[i], 1.0, 1e-12)?;
        }
        close("intensity", dispute_intensity(&net), 8.0, 1e-12)?;
        if cohesion_count(&net, 0, 2).unwrap() != 1 {
            return Err("cross-clique cohesion should be 1".into());
        }
        let class = classify(&net);
        if class.kind != BalanceKind::StrongBalance || class.cliques != Some(vec![vec![0, 1], vec![2, 3]]) {
            return Err(format!("classification {class:?}"));
        }
        let u = utility(&s, &p, 0);
        close("utility", u.total, -0.09, 1e-12)?;
        close("naive utility", super::utility(&TWO, &two_bounds(), &[1.0; 4], 0, 1.0, 0.5, 1.0, 1.0, 1.0), -0.09, 1e-12)?;
        Ok(())
    }

    pub fn contest_values() -> Result<(), String> {
        let csf = CsfParams {
            phi: 1.0,
            beta: 0.0,
            alpha: 1.0,
            form: CsfForm::Ratio,
        };
        close("csf", csf_value(&csf, 2.0, 1.0, 0), 1.0 / 6.0, 1e-12)?;
        let sched = cohesion_schedule(
            &CsfParams {
                beta: 0.1,
                alpha: 2.0,
                ..csf
            },
            4,
        );
        close("delta(1)", sched.increments[0], 0.1, 1e-12)?;
        close("delta(2)", sched.increments[1], 0.3, 1e-12)?;
        close("floor", sched.floor, 0.1, 1e-12)
    }

    pub fn tolerance_costs() -> Result<(), String> {
        let s = scenario(
            &[0.0, 0.5, 1.0],
            GameParams {
                flexibility: 2.0,
                ..GameParams::default()
            },
        );
        close("uniform cost", tolerance_cost(1, &ToleranceInterval::new(0.3, 0.8), &s), 0.26, 1e-12)?;
        let s = scenario(
            &[0.0, 0.5, 1.0],
            GameParams {
                flexibility_mode: FlexibilityMode::FlexibleExtremists { cap: 2.0, slope: 4.0 },
                ..GameParams::default()
            },
        );
        close("flexible cost", tolerance_cost(2, &ToleranceInterval::new(0.9, 1.0), &s), 0.0, 1e-12)
    }

    pub fn extension_values() -> Result<(), String> {
        let params = GameParams {
            beta: 0.5,
            ..GameParams::default()
        };
        let s = scenario(&TWO, params);
        let net = build_network(&s, &profile(&two_bounds(), &[1.0; 4]));
        close("threshold", initiation_threshold(&s, &net).ok_or("no disputes")?, 0.5, 1e-12)?;

        let s = scenario(&LINE, GameParams::default());
        let net = build_network(&s, &profile(&line_bounds(), &[1.0; 3]));
        close("adjusted", adjusted_strength(&net, 0, 2).map_err(|e| e.to_string())?, 0.5, 1e-12)?;
        let m1 = path_strength(&net, 1).map_err(|e| e.to_string())?;
        close("path m=1", m1.mu[0], 5.0 / 6.0, 1e-12)?;
        let m2 = path_strength(&net, 2).map_err(|e| e.to_string())?;
        close("path m=2", m2.mu[0], 17.0 / 18.0, 1e-12)
    }
}
