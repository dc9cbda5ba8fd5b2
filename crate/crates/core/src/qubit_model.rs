//! Qubit Hamiltonian `H = −E₀(Δσx + qσz)`, its eigenbasis, and the
//! bath-induced transition rates.
//!
//! Units are natural throughout: ħ = k_B = 1, energies and rates share the
//! reference energy unit chosen by the caller.

use serde::{Deserialize, Serialize};

use crate::error::{check, ModelError};

/// Operating point of the qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitParams {
    e0: f64,
    delta: f64,
    q: f64,
}

impl QubitParams {
    pub fn new(e0: f64, delta: f64, q: f64) -> Result<Self, ModelError> {
        check("e0", e0, "> 0", |v| v > 0.0)?;
        check("delta", delta, "> 0", |v| v > 0.0)?;
        check("q", q, "finite", |_| true)?;
        Ok(Self { e0, delta, q })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q/Δ`, the only combination the eigenvectors depend on.
    pub fn ratio(&self) -> f64 {
        self.q / self.delta
    }

    /// ΔE = 2E₀√(q² + Δ²).
    pub fn level_splitting(&self) -> f64 {
        2.0 * self.e0 * self.q.hypot(self.delta)
    }

    /// η(q) = (q/Δ)/√(1 + (q/Δ)²).
    pub fn eta(&self) -> f64 {
        let x = self.ratio();
        x / x.hypot(1.0)
    }

    /// √(1 − η²) = 1/√(1 + (q/Δ)²), evaluated without cancellation near |η| = 1.
    pub fn eta_complement(&self) -> f64 {
        1.0 / self.ratio().hypot(1.0)
    }

    /// Noise matrix element Δ²/(q² + Δ²).
    pub fn coupling_factor(&self) -> f64 {
        let c = self.eta_complement();
        c * c
    }

    /// Same eigenbasis, splitting rescaled to `de` by adjusting E₀.
    pub fn with_splitting(&self, de: f64) -> Result<Self, ModelError> {
        check("level splitting", de, "> 0", |v| v > 0.0)?;
        Self::new(de / (2.0 * self.q.hypot(self.delta)), self.delta, self.q)
    }
}

pub fn level_splitting(p: &QubitParams) -> f64 {
    p.level_splitting()
}

pub fn eta(p: &QubitParams) -> f64 {
    p.eta()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathLabel {
    Cold,
    Hot,
}

/// How a bath's relaxation rate Γ↓ is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RateModel {
    /// Γ↓ fixed, independent of the operating point.
    Direct { gamma_down: f64 },
    /// Golden-rule emission through an LC resonator of angular frequency
    /// `omega_res` (= ΔE_B in natural units) and quality factor `quality`.
    Resonator {
        kappa: f64,
        quality: f64,
        omega_res: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathSpec {
    label: BathLabel,
    beta: f64,
    rate_model: RateModel,
}

impl BathSpec {
    pub fn new(label: BathLabel, beta: f64, rate_model: RateModel) -> Result<Self, ModelError> {
        check("beta", beta, "> 0", |v| v > 0.0)?;
        match rate_model {
            RateModel::Direct { gamma_down } => {
                check("gamma_down", gamma_down, ">= 0", |v| v >= 0.0)?;
            }
            RateModel::Resonator {
                kappa,
                quality,
                omega_res,
            } => {
                check("kappa", kappa, "> 0", |v| v > 0.0)?;
                check("quality", quality, ">= 1", |v| v >= 1.0)?;
                check("omega_res", omega_res, "> 0", |v| v > 0.0)?;
            }
        }
        Ok(Self {
            label,
            beta,
            rate_model,
        })
    }

    pub fn direct(label: BathLabel, beta: f64, gamma_down: f64) -> Result<Self, ModelError> {
        Self::new(label, beta, RateModel::Direct { gamma_down })
    }

    pub fn resonator(
        label: BathLabel,
        beta: f64,
        kappa: f64,
        quality: f64,
        omega_res: f64,
    ) -> Result<Self, ModelError> {
        Self::new(
            label,
            beta,
            RateModel::Resonator {
                kappa,
                quality,
                omega_res,
            },
        )
    }

    pub fn label(&self) -> BathLabel {
        self.label
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rate_model(&self) -> RateModel {
        self.rate_model
    }

    /// Γ↓ and Γ↑ of this bath for a qubit held at `p`.
    pub fn rates_at(&self, p: &QubitParams) -> Result<RatePair, ModelError> {
        let down = match self.rate_model {
            RateModel::Direct { gamma_down } => gamma_down,
            RateModel::Resonator { .. } => resonator_rate_down(self, p)?,
        };
        detailed_balance_rates(down, self.beta, p.level_splitting())
    }
}

/// Relaxation and excitation rates of one bath at one splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub down: f64,
    pub up: f64,
    pub total: f64,
}

impl RatePair {
    /// Builds a pair without imposing detailed balance. Used by callers that
    /// supply rates measured elsewhere.
    pub fn new(down: f64, up: f64) -> Result<Self, ModelError> {
        check("gamma_down", down, ">= 0", |v| v >= 0.0)?;
        check("gamma_up", up, ">= 0", |v| v >= 0.0)?;
        Ok(Self {
            down,
            up,
            total: down + up,
        })
    }

    /// Equilibrium value of 𝒟 = ρ_gg − 1/2, or `None` when Γ_Σ = 0.
    pub fn equilibrium_d(&self) -> Option<f64> {
        (self.total > 0.0).then(|| self.down / self.total - 0.5)
    }
}

/// Γ↑ = e^{−βΔE}Γ↓. `beta = 0` is the infinite-temperature limit.
pub fn detailed_balance_rates(gamma_down: f64, beta: f64, de: f64) -> Result<RatePair, ModelError> {
    check("gamma_down", gamma_down, ">= 0", |v| v >= 0.0)?;
    check("beta", beta, ">= 0", |v| v >= 0.0)?;
    check("level splitting", de, "> 0", |v| v > 0.0)?;
    let up = (-beta * de).exp() * gamma_down;
    Ok(RatePair {
        down: gamma_down,
        up,
        total: gamma_down + up,
    })
}

/// Band-pass factor [1 + Q²(ΔE/ΔE_B − ΔE_B/ΔE)²]⁻¹ of a resonator.
pub fn lorentzian_filter(de: f64, de_res: f64, quality: f64) -> f64 {
    let detuning = de / de_res - de_res / de;
    1.0 / (1.0 + quality * quality * detuning * detuning)
}

/// Golden-rule emission rate into a resonator-filtered bath:
/// κ · Δ²/(q²+Δ²) · ΔE/(1 − e^{−βΔE}) · Lorentzian(ΔE; ΔE_B, Q).
pub fn resonator_rate_down(bath: &BathSpec, p: &QubitParams) -> Result<f64, ModelError> {
    let RateModel::Resonator {
        kappa,
        quality,
        omega_res,
    } = bath.rate_model
    else {
        return Err(ModelError::NotResonator);
    };
    let de = check("level splitting", p.level_splitting(), "> 0", |v| v > 0.0)?;
    let thermal = de / -(-bath.beta * de).exp_m1();
    Ok(kappa * p.coupling_factor() * thermal * lorentzian_filter(de, omega_res, quality))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampDirection {
    Compress,
    Expand,
}

/// Sudden change of eigenbasis acting on (𝒟, ℛ).
///
/// Stored as the rotation `[[c, −s], [s, c]]`; `s` is the sine of the angle
/// between the ground-state Bloch directions before and after the ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampRotation {
    pub cos: f64,
    pub sin: f64,
}

impl RampRotation {
    pub const IDENTITY: Self = Self { cos: 1.0, sin: 0.0 };

    /// Basis change for a sudden jump from operating point `from` to `to`.
    pub fn between(from: &QubitParams, to: &QubitParams) -> Self {
        let (s0, c0) = (from.eta(), from.eta_complement());
        let (s1, c1) = (to.eta(), to.eta_complement());
        let sin = s1 * c0 - c1 * s0;
        if sin == 0.0 {
            return Self::IDENTITY;
        }
        Self {
            cos: c1 * c0 + s1 * s0,
            sin,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            cos: self.cos,
            sin: -self.sin,
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.cos, -self.sin], [self.sin, self.cos]]
    }

    pub fn apply(&self, d: f64, r: f64) -> (f64, f64) {
        (self.cos * d - self.sin * r, self.sin * d + self.cos * r)
    }
}

/// Ramp between q = 0 and q = q_M with η_M = η(q_M).
pub fn ramp_rotation(eta_m: f64, direction: RampDirection) -> Result<RampRotation, ModelError> {
    check("eta_m", eta_m, "within [-1, 1]", |v| v.abs() <= 1.0)?;
    let compress = RampRotation {
        cos: (1.0 - eta_m * eta_m).sqrt(),
        sin: eta_m,
    };
    Ok(match direction {
        RampDirection::Compress => compress,
        RampDirection::Expand => compress.inverse(),
    })
}
