//! Contest success functions and the cohesion increment schedule.

use serde::{Deserialize, Serialize};

use crate::scenario::{CsfForm, GameParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsfParams {
    pub phi: f64,
    pub beta: f64,
    pub alpha: f64,
    pub form: CsfForm,
}

impl From<&GameParams> for CsfParams {
    fn from(p: &GameParams) -> Self {
        CsfParams {
            phi: p.phi,
            beta: p.beta,
            alpha: p.alpha,
            form: p.csf_form,
        }
    }
}

impl CsfParams {
    /// The strength-dependent part of the contest, in `[-1/2, 1/2]`.
    #[inline]
    pub fn strength_part(&self, lam_i: f64, lam_j: f64) -> f64 {
        match self.form {
            CsfForm::Ratio => {
                // 0^0 := 1, so φ = 0 makes both sides equal.
                if self.phi == 0.0 {
                    return 0.0;
                }
                if lam_i == 0.0 && lam_j == 0.0 {
                    return 0.0;
                }
                let a = pow(lam_i, self.phi);
                let b = pow(lam_j, self.phi);
                a / (a + b) - 0.5
            }
            CsfForm::Difference => 1.0 / (1.0 + (self.phi * (lam_j - lam_i)).exp()) - 0.5,
        }
    }

    /// `β·y^α` with the count-zero term pinned to zero for every `α`.
    #[inline]
    pub fn cohesion_part(&self, lam_ij: usize) -> f64 {
        if lam_ij == 0 || self.beta == 0.0 {
            0.0
        } else {
            self.beta * pow(lam_ij as f64, self.alpha)
        }
    }
}

#[inline]
fn pow(base: f64, exp: f64) -> f64 {
    if exp == 1.0 {
        base
    } else if exp == 0.5 {
        base.sqrt()
    } else if exp == 2.0 {
        base * base
    } else {
        base.powf(exp)
    }
}

/// Benefit of agent `i` from a dispute with `j`.
#[inline]
pub fn csf_value(params: &CsfParams, lam_i: f64, lam_j: f64, lam_ij: usize) -> f64 {
    params.strength_part(lam_i, lam_j) + params.cohesion_part(lam_ij)
}

/// Marginal value of each additional shared opponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohesionSchedule {
    /// `increments[y - 1] = δ(y)` for `y = 1..=n-2`.
    pub increments: Vec<f64>,
    pub floor: f64,
}

/// `δ(y) = β·(y^α − (y−1)^α)` for `y = 1..=n−2`, and its minimum.
pub fn cohesion_schedule(params: &CsfParams, n: usize) -> CohesionSchedule {
    let max_y = n.saturating_sub(2).max(1);
    let increments: Vec<f64> = (1..=max_y)
        .map(|y| params.cohesion_part(y) - params.cohesion_part(y - 1))
        .collect();
    let floor = increments.iter().copied().fold(f64::INFINITY, f64::min);
    CohesionSchedule { increments, floor }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(phi: f64, beta: f64, alpha: f64) -> CsfParams {
        CsfParams {
            phi,
            beta,
            alpha,
            form: CsfForm::Ratio,
        }
    }

    #[test]
    fn ratio_example() {
        let v = csf_value(&ratio(1.0, 0.0, 1.0), 2.0, 1.0, 0);
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn normalization_at_equal_strengths() {
        for form in [CsfForm::Ratio, CsfForm::Difference] {
            for &alpha in &[0.0, 0.5, 1.0, 2.0] {
                let p = CsfParams {
                    phi: 0.7,
                    beta: 0.4,
                    alpha,
                    form,
                };
                for &lam in &[0.0, 0.3, 1.0, 4.0] {
                    assert_eq!(csf_value(&p, lam, lam, 0), 0.0);
                }
            }
        }
    }

    #[test]
    fn difference_without_decisiveness_is_flat() {
        let p = CsfParams {
            phi: 0.0,
            beta: 0.0,
            alpha: 1.0,
            form: CsfForm::Difference,
        };
        assert_eq!(csf_value(&p, 5.0, 1.0, 0), 0.0);
    }

    #[test]
    fn schedules() {
        let s = cohesion_schedule(&ratio(1.0, 0.2, 1.0), 5);
        assert_eq!(s.increments.len(), 3);
        assert!(s.increments.iter().all(|d| (d - 0.2).abs() < 1e-15));
        assert!((s.floor - 0.2).abs() < 1e-15);

        let s = cohesion_schedule(&ratio(1.0, 0.1, 2.0), 4);
        assert!((s.increments[0] - 0.1).abs() < 1e-15);
        assert!((s.increments[1] - 0.3).abs() < 1e-15);
        assert!((s.floor - 0.1).abs() < 1e-15);

        let s = cohesion_schedule(&ratio(1.0, 0.0, 3.0), 7);
        assert!(s.increments.iter().all(|&d| d == 0.0));
        assert_eq!(s.floor, 0.0);
    }

    #[test]
    fn ratio_with_both_strengths_zero_is_zero() {
        assert_eq!(csf_value(&ratio(0.5, 0.0, 1.0), 0.0, 0.0, 0), 0.0);
    }
}
