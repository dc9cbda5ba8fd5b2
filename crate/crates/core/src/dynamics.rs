//! TLS state in the instantaneous eigenbasis and its two evolution primitives:
//! sudden ramps (basis rotations) and thermalization at fixed splitting.
//!
//! The dynamical phase φ is taken as zero, so (ℛ, ℐ) are the real and
//! imaginary parts of ρ_ge directly.

use nalgebra::{Complex, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{check, ModelError};
use crate::qubit_model::{RampRotation, RatePair};

/// Largest Γ_Σ·δt accepted by the linearized thermalization map.
pub const LINEAR_MAP_LIMIT: f64 = 0.1;

/// Minimum RK4 steps per unit of Γ_Σ·δt for [`lindblad_integrate`].
pub const RK4_STEPS_PER_UNIT: f64 = 1e3;

/// Density matrix as (𝒟, ℛ, ℐ) with 𝒟 = ρ_gg − 1/2 and ρ_ge = ℛ + iℐ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochState {
    pub d: f64,
    pub r: f64,
    pub i: f64,
}

impl BlochState {
    pub const MAXIMALLY_MIXED: Self = Self {
        d: 0.0,
        r: 0.0,
        i: 0.0,
    };

    /// Validated constructor: rejects states outside the Bloch ball.
    pub fn new(d: f64, r: f64, i: f64) -> Result<Self, ModelError> {
        let s = Self { d, r, i };
        check("d² + r² + i²", s.purity(), "<= 1/4", |v| {
            v <= 0.25 + 1e-12
        })?;
        Ok(s)
    }

    pub fn diagonal(d: f64) -> Self {
        Self { d, r: 0.0, i: 0.0 }
    }

    /// d² + r² + i², one quarter of the squared Bloch radius.
    pub fn purity(&self) -> f64 {
        self.d * self.d + self.r * self.r + self.i * self.i
    }

    /// Energy relative to the level midpoint for splitting `de`: −ΔE·𝒟.
    pub fn energy(&self, de: f64) -> f64 {
        -de * self.d
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.d - other.d)
            .abs()
            .max((self.r - other.r).abs())
            .max((self.i - other.i).abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.d, self.r, self.i]
    }

    pub fn from_array(x: [f64; 3]) -> Self {
        Self {
            d: x[0],
            r: x[1],
            i: x[2],
        }
    }

    fn density_matrix(&self) -> Matrix2<Complex<f64>> {
        let c = |re, im| Complex::new(re, im);
        Matrix2::new(
            c(0.5 + self.d, 0.0),
            c(self.r, self.i),
            c(self.r, -self.i),
            c(0.5 - self.d, 0.0),
        )
    }

    fn from_density_matrix(rho: &Matrix2<Complex<f64>>) -> Self {
        let pop = 0.5 * (rho[(0, 0)].re - rho[(1, 1)].re);
        Self {
            d: pop,
            r: rho[(0, 1)].re,
            i: rho[(0, 1)].im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalizationOutcome {
    pub state: BlochState,
    /// Heat released into the bath, ΔE·(𝒟_f − 𝒟_i).
    pub heat_to_bath: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalizationMode {
    #[default]
    Exact,
    LinearOrder,
}

/// Affine action of one thermalization leg:
/// 𝒟 ↦ 𝒟 + pop_m1·(𝒟 − d_eq), (ℛ, ℐ) ↦ coherence·(ℛ, ℐ).
///
/// `pop_m1` is the population multiplier minus one, kept separate so that
/// small population changes are not lost to cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LegMap {
    pub pop_m1: f64,
    pub coherence: f64,
    pub d_eq: f64,
}

impl LegMap {
    pub fn new(rates: &RatePair, dt: f64, mode: ThermalizationMode) -> Result<Self, ModelError> {
        check("dt", dt, ">= 0", |v| v >= 0.0)?;
        let x = rates.total * dt;
        match mode {
            ThermalizationMode::Exact => {
                let Some(d_eq) = rates.equilibrium_d() else {
                    return Ok(Self {
                        pop_m1: 0.0,
                        coherence: 1.0,
                        d_eq: 0.0,
                    });
                };
                let pop_m1 = (-x).exp_m1();
                Ok(Self {
                    pop_m1,
                    coherence: (-0.5 * x).exp(),
                    d_eq,
                })
            }
            ThermalizationMode::LinearOrder => {
                if x > LINEAR_MAP_LIMIT {
                    return Err(ModelError::LinearMapMisuse {
                        value: x,
                        limit: LINEAR_MAP_LIMIT,
                    });
                }
                Ok(Self {
                    pop_m1: -x,
                    coherence: 1.0 - 0.5 * x,
                    d_eq: rates.equilibrium_d().unwrap_or(0.0),
                })
            }
        }
    }

    pub fn population_step(&self, d: f64) -> f64 {
        self.pop_m1 * (d - self.d_eq)
    }

    pub fn offset(&self) -> f64 {
        -self.pop_m1 * self.d_eq
    }

    fn apply(&self, s: &BlochState, de: f64) -> ThermalizationOutcome {
        let step = self.population_step(s.d);
        ThermalizationOutcome {
            state: BlochState {
                d: s.d + step,
                r: self.coherence * s.r,
                i: self.coherence * s.i,
            },
            heat_to_bath: de * step,
        }
    }
}

/// Sudden ramp: rotates (𝒟, ℛ), leaves ℐ untouched.
pub fn apply_ramp(s: &BlochState, rot: &RampRotation) -> BlochState {
    let (d, r) = rot.apply(s.d, s.r);
    BlochState { d, r, i: s.i }
}

/// Exact relaxation over `dt` at splitting `de`:
/// 𝒟 relaxes to Γ↓/Γ_Σ − 1/2 at rate Γ_Σ, coherences decay at Γ_Σ/2.
/// With Γ_Σ = 0 the state is unchanged.
pub fn thermalize_exact(
    s: &BlochState,
    rates: &RatePair,
    de: f64,
    dt: f64,
) -> Result<ThermalizationOutcome, ModelError> {
    Ok(LegMap::new(rates, dt, ThermalizationMode::Exact)?.apply(s, de))
}

/// First-order-in-δt thermalization; only accepted for Γ_Σ·δt ≤ 0.1.
pub fn thermalize_linear(
    s: &BlochState,
    rates: &RatePair,
    de: f64,
    dt: f64,
) -> Result<ThermalizationOutcome, ModelError> {
    Ok(LegMap::new(rates, dt, ThermalizationMode::LinearOrder)?.apply(s, de))
}

pub fn thermalize(
    s: &BlochState,
    rates: &RatePair,
    de: f64,
    dt: f64,
    mode: ThermalizationMode,
) -> Result<ThermalizationOutcome, ModelError> {
    Ok(LegMap::new(rates, dt, mode)?.apply(s, de))
}

/// Diagonal-only thermalization step for the classical TLS.
/// Returns the new 𝒟 and the heat released into the bath.
pub fn classical_step(
    pop_d: f64,
    rates: &RatePair,
    de: f64,
    dt: f64,
    mode: ThermalizationMode,
) -> Result<(f64, f64), ModelError> {
    check("pop_d", pop_d, "within [-1/2, 1/2]", |v| v.abs() <= 0.5)?;
    let step = LegMap::new(rates, dt, mode)?.population_step(pop_d);
    Ok((pop_d + step, de * step))
}

/// Reference RK4 integration of the Lindblad equation
/// dρ/dt = Γ↓ 𝒟[σ₋]ρ + Γ↑ 𝒟[σ₊]ρ in the instantaneous eigenbasis.
///
/// Independent of the closed-form maps above; used to check them.
pub fn lindblad_integrate(
    s: &BlochState,
    rates: &RatePair,
    dt: f64,
    steps: u64,
) -> Result<BlochState, ModelError> {
    check("dt", dt, ">= 0", |v| v >= 0.0)?;
    let required = (RK4_STEPS_PER_UNIT * rates.total * dt).ceil() as u64;
    if steps < required.max(1) {
        return Err(ModelError::InsufficientSteps {
            required: required.max(1),
            given: steps,
        });
    }
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    // basis order (g, e)
    let lower = Matrix2::new(zero, one, zero, zero);
    let raise = lower.adjoint();
    let channels = [(rates.down, lower), (rates.up, raise)];

    let rhs = |rho: &Matrix2<Complex<f64>>| {
        let mut out = Matrix2::zeros();
        for (rate, l) in &channels {
            let ldl = l.adjoint() * l;
            let term = l * rho * l.adjoint() - (ldl * rho + rho * ldl) * Complex::new(0.5, 0.0);
            out += term * Complex::new(*rate, 0.0);
        }
        out
    };

    let h = dt / steps as f64;
    let half = Complex::new(0.5 * h, 0.0);
    let full = Complex::new(h, 0.0);
    let sixth = Complex::new(h / 6.0, 0.0);
    let two = Complex::new(2.0, 0.0);
    let mut rho = s.density_matrix();
    for _ in 0..steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&(rho + k1 * half));
        let k3 = rhs(&(rho + k2 * half));
        let k4 = rhs(&(rho + k3 * full));
        rho += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    Ok(BlochState::from_density_matrix(&rho))
}
