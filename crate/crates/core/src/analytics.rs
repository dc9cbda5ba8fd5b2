//! Closed-form sudden-limit results for the TLS refrigerator.
//!
//! These take pre-built [`RatePair`]s and never re-derive rates. They serve
//! as fast evaluators for sweeps and as oracles for the cycle engine.

use serde::{Deserialize, Serialize};

use crate::cycle::CycleSpec;
use crate::error::{check, ModelError};
use crate::qubit_model::RatePair;

/// Largest Δ/q_M for which the two-term coherent expansion is trusted.
pub const COHERENT_EXPANSION_RANGE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuddenLimitInputs {
    pub rates_cold: RatePair,
    pub rates_hot: RatePair,
    pub de_cold: f64,
    pub de_hot: f64,
    pub beta_cold: f64,
    pub beta_hot: f64,
}

impl SuddenLimitInputs {
    /// Validates that each rate pair obeys detailed balance at its (β, ΔE).
    pub fn new(
        rates_cold: RatePair,
        rates_hot: RatePair,
        de_cold: f64,
        de_hot: f64,
        beta_cold: f64,
        beta_hot: f64,
    ) -> Result<Self, ModelError> {
        check("de_cold", de_cold, "> 0", |v| v > 0.0)?;
        check("de_hot", de_hot, "> 0", |v| v > 0.0)?;
        check("beta_cold", beta_cold, ">= 0", |v| v >= 0.0)?;
        check("beta_hot", beta_hot, ">= 0", |v| v >= 0.0)?;
        for (rates, beta, de) in [
            (&rates_cold, beta_cold, de_cold),
            (&rates_hot, beta_hot, de_hot),
        ] {
            let expected = (-beta * de).exp();
            let consistent = if rates.down == 0.0 {
                rates.up == 0.0
            } else {
                (rates.up - expected * rates.down).abs() <= 1e-12 * rates.down
            };
            if !consistent || rates.total != rates.down + rates.up {
                return Err(ModelError::DetailedBalance {
                    ratio: rates.up / rates.down,
                    expected,
                });
            }
        }
        Ok(Self {
            rates_cold,
            rates_hot,
            de_cold,
            de_hot,
            beta_cold,
            beta_hot,
        })
    }

    pub fn from_spec(spec: &CycleSpec) -> Self {
        Self {
            rates_cold: *spec.rates_cold(),
            rates_hot: *spec.rates_hot(),
            de_cold: spec.de_cold(),
            de_hot: spec.de_hot(),
            beta_cold: spec.cold().beta(),
            beta_hot: spec.hot().beta(),
        }
    }

    fn boltzmann_cold(&self) -> f64 {
        (-self.beta_cold * self.de_cold).exp()
    }

    fn boltzmann_hot(&self) -> f64 {
        (-self.beta_hot * self.de_hot).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPair {
    pub p_cold: f64,
    pub p_hot: f64,
}

/// Sudden limit of the coherent cycle at η_M → 1: both baths are heated.
///
/// P_C = ΔE_C Γ↓^C Γ_Σ^H (1 − e^{−β_C ΔE_C}) / [4(2Γ_Σ^C + Γ_Σ^H)], and the
/// mirror expression for P_H.
pub fn coherent_sudden_power(inp: &SuddenLimitInputs) -> PowerPair {
    let (c, h) = (&inp.rates_cold, &inp.rates_hot);
    let one_sided = |de: f64, own: &RatePair, other: &RatePair, beta: f64| {
        de * own.down * other.total * -(-beta * de).exp_m1()
            / (4.0 * (2.0 * own.total + other.total))
    };
    PowerPair {
        p_cold: one_sided(inp.de_cold, c, h, inp.beta_cold),
        p_hot: one_sided(inp.de_hot, h, c, inp.beta_hot),
    }
}

/// First-order coefficients γ of the coherent powers in Δ/q_M.
pub fn coherent_correction_gamma(inp: &SuddenLimitInputs) -> PowerPair {
    let (c, h) = (&inp.rates_cold, &inp.rates_hot);
    let denom = 2.0 * (2.0 * c.total + h.total) * (2.0 * h.total + c.total);
    let sum = c.total + h.total;
    PowerPair {
        p_cold: -inp.de_cold * (h.down - h.up) * c.total * sum / denom,
        p_hot: -inp.de_hot * (c.down - c.up) * h.total * sum / denom,
    }
}

/// P(Δ/q_M) ≈ P(0) + γ·Δ/q_M.
pub fn coherent_two_term_power(inp: &SuddenLimitInputs, delta_over_qm: f64) -> PowerPair {
    let p0 = coherent_sudden_power(inp);
    let gamma = coherent_correction_gamma(inp);
    PowerPair {
        p_cold: p0.p_cold + gamma.p_cold * delta_over_qm,
        p_hot: p0.p_hot + gamma.p_hot * delta_over_qm,
    }
}

/// Sudden-limit powers of the classical (or coherence-free) cycle.
pub fn classical_sudden_power(inp: &SuddenLimitInputs) -> PowerPair {
    let (c, h) = (&inp.rates_cold, &inp.rates_hot);
    let prefactor = 0.5 * c.down * h.down / (c.total + h.total);
    let (x_c, x_h) = (inp.boltzmann_cold(), inp.boltzmann_hot());
    PowerPair {
        p_cold: prefactor * (x_h - x_c) * inp.de_cold,
        p_hot: prefactor * (x_c - x_h) * inp.de_hot,
    }
}

/// Population change per cold leg, 𝒟_b − 𝒟_a, to linear order in δt.
pub fn classical_delta_d(inp: &SuddenLimitInputs, dt: f64) -> f64 {
    let (c, h) = (&inp.rates_cold, &inp.rates_hot);
    (c.down * h.up - c.up * h.down) * dt / (c.total + h.total)
}

/// Ideal Otto coefficient of performance ΔE_C/(ΔE_H − ΔE_C).
pub fn otto_cop(de_cold: f64, de_hot: f64) -> Result<f64, ModelError> {
    check("de_cold", de_cold, "> 0", |v| v > 0.0)?;
    check("de_hot", de_hot, "> de_cold", |v| v > de_cold)?;
    Ok(de_cold / (de_hot - de_cold))
}

/// Cold-bath power when cold-bath excitation is the slowest process and βΔE ≫ 1.
pub fn slow_rate_limit_power(gamma_up_cold: f64, de_cold: f64) -> f64 {
    -0.5 * gamma_up_cold * de_cold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit_model::detailed_balance_rates;
    use proptest::prelude::*;

    fn inputs(down: (f64, f64), beta: (f64, f64), de: (f64, f64)) -> SuddenLimitInputs {
        SuddenLimitInputs::new(
            detailed_balance_rates(down.0, beta.0, de.0).unwrap(),
            detailed_balance_rates(down.1, beta.1, de.1).unwrap(),
            de.0,
            de.1,
            beta.0,
            beta.1,
        )
        .unwrap()
    }

    #[test]
    fn rejects_inconsistent_rates() {
        let bad = RatePair::new(1.0, 0.9).unwrap();
        let ok = detailed_balance_rates(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            SuddenLimitInputs::new(bad, ok, 1.0, 1.0, 1.0, 1.0),
            Err(ModelError::DetailedBalance { .. })
        ));
    }

    #[test]
    fn coherent_examples() {
        let p = coherent_sudden_power(&inputs((0.0, 1.0), (1.0, 1.0), (1.0, 2.0)));
        assert_eq!(p.p_cold, 0.0);
        let p = coherent_sudden_power(&inputs((1.0, 1.0), (1e-14, 1.0), (1.0, 2.0)));
        assert!(p.p_cold.abs() < 1e-14);
        // identical baths, ΔE = 1, β = 1, Γ↓ = 1: Σ = 1 + e⁻¹,
        // P = Σ(1 − e⁻¹)/(4·3Σ) = (1 − e⁻¹)/12
        let p = coherent_sudden_power(&inputs((1.0, 1.0), (1.0, 1.0), (1.0, 1.0)));
        let expected = (1.0 - (-1f64).exp()) / 12.0;
        assert!((p.p_cold - expected).abs() < 1e-16);
        assert_eq!(p.p_cold, p.p_hot);
    }

    #[test]
    fn gamma_examples() {
        let g = coherent_correction_gamma(&inputs((1.0, 1.0), (1.0, 0.0), (1.0, 2.0)));
        assert_eq!(g.p_cold, 0.0);
        assert!(g.p_hot < 0.0);
        let g = coherent_correction_gamma(&inputs((1.0, 0.7), (1.0, 1.0), (1.0, 2.0)));
        assert!(g.p_cold < 0.0 && g.p_hot < 0.0);
    }

    #[test]
    fn classical_examples() {
        let p = classical_sudden_power(&inputs((1.0, 0.5), (2.0, 2.0), (1.0, 1.0)));
        assert_eq!((p.p_cold, p.p_hot), (0.0, 0.0));
        let p = classical_sudden_power(&inputs((1.0, 1.0), (1.0, 1.0), (1.0, 2.0)));
        // frozen from direct evaluation: ½/(2 + e⁻¹ + e⁻²)·(e⁻² − e⁻¹)
        assert!((p.p_cold - -0.046449103160700736).abs() < 1e-15);
        assert!(p.p_cold < 0.0 && p.p_hot > 0.0);
    }

    #[test]
    fn delta_d_examples() {
        assert_eq!(
            classical_delta_d(&inputs((1.0, 1.0), (1.0, 1.0), (1.0, 1.0)), 0.1),
            0.0
        );
        let inp = inputs((0.8, 1.3), (1.2, 0.6), (1.0, 3.0));
        let dt = 1e-3;
        let dd = classical_delta_d(&inp, dt);
        let f = 1.0 / (2.0 * dt);
        let p = classical_sudden_power(&inp);
        assert!((p.p_cold - dd * inp.de_cold * f).abs() < 1e-15);
        assert!((p.p_hot + dd * inp.de_hot * f).abs() < 1e-15);
    }

    #[test]
    fn cop_examples() {
        assert_eq!(otto_cop(1.0, 2.0).unwrap(), 1.0);
        assert!((otto_cop(1.0, 1.0 + 1e-6).unwrap() / 1e6 - 1.0).abs() < 1e-9);
        assert!(otto_cop(2.0, 1.0).is_err());
        assert!(otto_cop(1.0, 1.0).is_err());
    }

    #[test]
    fn slow_rate_examples() {
        assert_eq!(slow_rate_limit_power(0.0, 1.0), 0.0);
        // β_C ΔE_C = 8, β_H ΔE_H = 16. The limit also needs Γ↓^H ≫ Γ↓^C:
        // the exact prefactor is Γ↓^H/(Γ↓^C + Γ↓^H), which is 1/2 for equal rates.
        let inp = inputs((1.0, 50.0), (8.0, 8.0), (1.0, 2.0));
        let exact = classical_sudden_power(&inp).p_cold;
        let approx = slow_rate_limit_power(inp.rates_cold.up, inp.de_cold);
        assert!(approx <= 0.0);
        assert!((approx / exact - 1.0).abs() < 0.05, "{approx} vs {exact}");
    }

    proptest! {
        #[test]
        fn coherent_always_positive(dc in 0.01f64..5.0, dh in 0.01f64..5.0, bc in 0.01f64..10.0,
                                    bh in 0.01f64..10.0, ec in 0.1f64..3.0, eh in 0.1f64..3.0) {
            let p = coherent_sudden_power(&inputs((dc, dh), (bc, bh), (ec, eh)));
            prop_assert!(p.p_cold > 0.0 && p.p_hot > 0.0);
        }

        #[test]
        fn classical_sign_rule(dc in 0.01f64..5.0, dh in 0.01f64..5.0, bc in 0.01f64..10.0,
                               bh in 0.01f64..10.0, ec in 0.1f64..3.0, eh in 0.1f64..3.0) {
            let p = classical_sudden_power(&inputs((dc, dh), (bc, bh), (ec, eh)));
            prop_assert_eq!(p.p_cold < 0.0, bh * eh > bc * ec);
        }

        #[test]
        fn cop_matches_otto(dc in 0.01f64..5.0, dh in 0.01f64..5.0, bc in 0.01f64..10.0,
                            bh in 0.01f64..10.0, ec in 0.1f64..3.0, ratio in 1.01f64..5.0) {
            let eh = ec * ratio;
            let p = classical_sudden_power(&inputs((dc, dh), (bc, bh), (ec, eh)));
            let total = p.p_cold + p.p_hot;
            prop_assume!(total > 0.0);
            let cop = -p.p_cold / total;
            let otto = otto_cop(ec, eh).unwrap();
            prop_assert!((cop - otto).abs() <= 1e-12 * otto);
        }
    }
}
