//! Four-leg Otto cycle, its limit cycle, and the resulting heats and powers.
//!
//! Legs: a → b thermalize with the cold bath at ΔE_C, b → c sudden
//! compression, c → d thermalize with the hot bath at ΔE_H, d → a′ sudden
//! expansion. One period lasts 2δt. Heat is positive into a bath, work is
//! positive into the system.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::dynamics::{apply_ramp, thermalize, BlochState, LegMap, ThermalizationMode};
use crate::error::CycleError;
use crate::qubit_model::{BathSpec, QubitParams, RampRotation, RatePair};

/// Spectral radius at or above which a cycle map is treated as non-contractive.
pub const CONTRACTION_LIMIT: f64 = 1.0 - 1e-12;

/// Relative tolerance on successive Richardson estimates in [`sudden_limit_powers`].
pub const EXTRAPOLATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Only q is switched; the eigenbasis jumps and coherence is created.
    CoherentSudden,
    /// q and Δ switched together at fixed q/Δ; the eigenbasis never moves.
    IncoherentScaled,
    /// Classical two-state system driven by rate equations.
    Classical,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [
        Protocol::CoherentSudden,
        Protocol::IncoherentScaled,
        Protocol::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::CoherentSudden => "coherent_sudden",
            Protocol::IncoherentScaled => "incoherent_scaled",
            Protocol::Classical => "classical",
        }
    }

    /// Whether the state is restricted to diagonal density matrices.
    pub fn is_diagonal(self) -> bool {
        !matches!(self, Protocol::CoherentSudden)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    qubit_low: QubitParams,
    qubit_high: QubitParams,
    cold: BathSpec,
    hot: BathSpec,
    dt: f64,
    protocol: Protocol,
    mode: ThermalizationMode,
    rates_cold: RatePair,
    rates_hot: RatePair,
}

impl CycleSpec {
    /// The cold bath acts at `qubit_low`, the hot bath at `qubit_high`.
    pub fn new(
        qubit_low: QubitParams,
        qubit_high: QubitParams,
        cold: BathSpec,
        hot: BathSpec,
        dt: f64,
        protocol: Protocol,
        mode: ThermalizationMode,
    ) -> Result<Self, CycleError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CycleError::InvalidSpec(format!("dt must be > 0, got {dt}")));
        }
        if protocol == Protocol::IncoherentScaled {
            let (a, b) = (qubit_low.ratio(), qubit_high.ratio());
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(CycleError::InvalidSpec(format!(
                    "incoherent_scaled needs equal q/Δ at both operating points, got {a} and {b}"
                )));
            }
        }
        let rates_cold = cold.rates_at(&qubit_low)?;
        let rates_hot = hot.rates_at(&qubit_high)?;
        Ok(Self {
            qubit_low,
            qubit_high,
            cold,
            hot,
            dt,
            protocol,
            mode,
            rates_cold,
            rates_hot,
        })
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self, CycleError> {
        Self::new(
            self.qubit_low,
            self.qubit_high,
            self.cold,
            self.hot,
            dt,
            self.protocol,
            self.mode,
        )
    }

    pub fn with_protocol(&self, protocol: Protocol) -> Result<Self, CycleError> {
        Self::new(
            self.qubit_low,
            self.qubit_high,
            self.cold,
            self.hot,
            self.dt,
            protocol,
            self.mode,
        )
    }

    pub fn with_mode(&self, mode: ThermalizationMode) -> Result<Self, CycleError> {
        Self::new(
            self.qubit_low,
            self.qubit_high,
            self.cold,
            self.hot,
            self.dt,
            self.protocol,
            mode,
        )
    }

    /// Exchanges the roles of the two baths together with their operating points.
    pub fn swapped(&self) -> Result<Self, CycleError> {
        Self::new(
            self.qubit_high,
            self.qubit_low,
            self.hot,
            self.cold,
            self.dt,
            self.protocol,
            self.mode,
        )
    }

    pub fn qubit_low(&self) -> &QubitParams {
        &self.qubit_low
    }

    pub fn qubit_high(&self) -> &QubitParams {
        &self.qubit_high
    }

    pub fn cold(&self) -> &BathSpec {
        &self.cold
    }

    pub fn hot(&self) -> &BathSpec {
        &self.hot
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn mode(&self) -> ThermalizationMode {
        self.mode
    }

    pub fn rates_cold(&self) -> &RatePair {
        &self.rates_cold
    }

    pub fn rates_hot(&self) -> &RatePair {
        &self.rates_hot
    }

    pub fn de_cold(&self) -> f64 {
        self.qubit_low.level_splitting()
    }

    pub fn de_hot(&self) -> f64 {
        self.qubit_high.level_splitting()
    }

    /// Basis change applied by the compression leg.
    pub fn compression(&self) -> RampRotation {
        if self.protocol.is_diagonal() {
            RampRotation::IDENTITY
        } else {
            RampRotation::between(&self.qubit_low, &self.qubit_high)
        }
    }

    pub fn max_total_rate(&self) -> f64 {
        self.rates_cold.total.max(self.rates_hot.total)
    }

    fn leg_maps(&self) -> Result<(LegMap, LegMap), CycleError> {
        Ok((
            LegMap::new(&self.rates_cold, self.dt, self.mode)?,
            LegMap::new(&self.rates_hot, self.dt, self.mode)?,
        ))
    }
}

/// One full period as an affine map x ↦ Mx + v on x = (𝒟, ℛ, ℐ) at corner a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCycleMap {
    pub m: Matrix3<f64>,
    pub v: Vector3<f64>,
}

impl AffineCycleMap {
    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.m * x + self.v
    }

    pub fn spectral_radius(&self) -> f64 {
        self.m
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Solves (I − M)x = v.
    pub fn fixed_point(&self) -> Result<Vector3<f64>, CycleError> {
        let system = Matrix3::identity() - self.m;
        let x = system
            .lu()
            .solve(&self.v)
            .ok_or(CycleError::SingularSolve)?;
        if x.iter().all(|c| c.is_finite()) {
            Ok(x)
        } else {
            Err(CycleError::SingularSolve)
        }
    }
}

fn leg_matrix(leg: &LegMap, diagonal: bool) -> (Matrix3<f64>, Vector3<f64>) {
    let coherence = if diagonal { 0.0 } else { leg.coherence };
    (
        Matrix3::from_diagonal(&Vector3::new(1.0 + leg.pop_m1, coherence, coherence)),
        Vector3::new(leg.offset(), 0.0, 0.0),
    )
}

fn rotation_matrix(rot: &RampRotation) -> Matrix3<f64> {
    Matrix3::new(
        rot.cos, -rot.sin, 0.0, //
        rot.sin, rot.cos, 0.0, //
        0.0, 0.0, 1.0,
    )
}

/// Composes cold thermalization, compression, hot thermalization and expansion.
pub fn compose_cycle_map(spec: &CycleSpec) -> Result<AffineCycleMap, CycleError> {
    let (cold, hot) = spec.leg_maps()?;
    let diagonal = spec.protocol.is_diagonal();
    let (tc, vc) = leg_matrix(&cold, diagonal);
    let (th, vh) = leg_matrix(&hot, diagonal);
    let compress = rotation_matrix(&spec.compression());
    let expand = compress.transpose();
    Ok(AffineCycleMap {
        m: expand * th * compress * tc,
        v: expand * (th * (compress * vc) + vh),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corners {
    pub a: BlochState,
    pub b: BlochState,
    pub c: BlochState,
    pub d: BlochState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleResult {
    pub corners: Corners,
    /// Heat per cycle into the cold and hot baths.
    pub q_cold: f64,
    pub q_hot: f64,
    /// Work per cycle done on the system by the two sudden legs.
    pub w_compress: f64,
    pub w_expand: f64,
    pub p_cold: f64,
    pub p_hot: f64,
    /// −P_C/(P_C + P_H), only when net work is done on the system.
    pub cop: Option<f64>,
    pub spectral_radius: f64,
    /// Largest heat one leg can exchange, ΔE_max(1 − e^{−Γ_Σ,max δt}).
    pub heat_scale: f64,
    /// Cycles needed to reach the fixed point; `None` for the direct solve.
    pub cycles_to_converge: Option<usize>,
}

impl LimitCycleResult {
    /// |W − Q| relative to the largest single term of the energy balance,
    /// floored at [`heat_scale`](Self::heat_scale) so that near-equilibrium
    /// round-off does not dominate.
    pub fn first_law_residual(&self) -> f64 {
        let w = self.w_compress + self.w_expand;
        let q = self.q_cold + self.q_hot;
        let scale = [self.w_compress, self.w_expand, self.q_cold, self.q_hot]
            .iter()
            .fold(self.heat_scale, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            0.0
        } else {
            (w - q).abs() / scale
        }
    }
}

/// Runs the four legs once from corner `a`; returns the filled result and a′.
fn replay(
    spec: &CycleSpec,
    legs: &(LegMap, LegMap),
    a: BlochState,
    spectral_radius: f64,
) -> Result<(LimitCycleResult, BlochState), CycleError> {
    let (de_c, de_h) = (spec.de_cold(), spec.de_hot());
    let compress = spec.compression();
    let (b, q_cold, c, d, q_hot, a_next);
    if spec.protocol.is_diagonal() {
        let step_c = legs.0.population_step(a.d);
        b = BlochState::diagonal(a.d + step_c);
        q_cold = de_c * step_c;
        c = b;
        let step_h = legs.1.population_step(c.d);
        d = BlochState::diagonal(c.d + step_h);
        q_hot = de_h * step_h;
        a_next = d;
    } else {
        let cold = thermalize(&a, &spec.rates_cold, de_c, spec.dt, spec.mode)?;
        b = cold.state;
        q_cold = cold.heat_to_bath;
        c = apply_ramp(&b, &compress);
        let hot = thermalize(&c, &spec.rates_hot, de_h, spec.dt, spec.mode)?;
        d = hot.state;
        q_hot = hot.heat_to_bath;
        a_next = apply_ramp(&d, &compress.inverse());
    }
    let w_compress = c.energy(de_h) - b.energy(de_c);
    let w_expand = a_next.energy(de_c) - d.energy(de_h);
    let period = 2.0 * spec.dt;
    let (p_cold, p_hot) = (q_cold / period, q_hot / period);
    let total = p_cold + p_hot;
    let result = LimitCycleResult {
        corners: Corners { a, b, c, d },
        q_cold,
        q_hot,
        w_compress,
        w_expand,
        p_cold,
        p_hot,
        cop: (total > 0.0).then(|| -p_cold / total),
        spectral_radius,
        heat_scale: de_c.max(de_h) * -(-spec.max_total_rate() * spec.dt).exp_m1(),
        cycles_to_converge: None,
    };
    Ok((result, a_next))
}

fn contractive_map(spec: &CycleSpec) -> Result<(AffineCycleMap, f64), CycleError> {
    let map = compose_cycle_map(spec)?;
    let spectral_radius = map.spectral_radius();
    if spectral_radius.is_nan() || spectral_radius >= CONTRACTION_LIMIT {
        return Err(CycleError::NonContractive { spectral_radius });
    }
    Ok((map, spectral_radius))
}

fn initial_state(spec: &CycleSpec, s: BlochState) -> BlochState {
    if spec.protocol.is_diagonal() {
        BlochState::diagonal(s.d)
    } else {
        s
    }
}

/// Fixed point solved for the deviation from the cold-bath equilibrium.
///
/// With x = state − (d_eq^C, 0, 0) the cold leg is linear and the affine
/// term is Rᵀ(I − T_H)(s_H − R s_C), which vanishes exactly when both baths
/// share one equilibrium and the basis does not move.
fn corner_a(
    spec: &CycleSpec,
    map: &AffineCycleMap,
    legs: &(LegMap, LegMap),
) -> Result<BlochState, CycleError> {
    let (e_c, e_h) = (legs.0.d_eq, legs.1.d_eq);
    let rot = spec.compression();
    let hot_coherence = if spec.protocol.is_diagonal() {
        0.0
    } else {
        legs.1.coherence
    };
    let w = Vector3::new(
        -legs.1.pop_m1 * (e_h - rot.cos * e_c),
        (1.0 - hot_coherence) * -(rot.sin * e_c),
        0.0,
    );
    let v = rotation_matrix(&rot).transpose() * w;
    let x = AffineCycleMap { m: map.m, v }.fixed_point()?;
    Ok(BlochState::new(e_c + x[0], x[1], x[2])?)
}

/// Periodic steady state, found as the fixed point of the composed cycle map.
pub fn solve_limit_cycle(spec: &CycleSpec) -> Result<LimitCycleResult, CycleError> {
    let (map, spectral_radius) = contractive_map(spec)?;
    let legs = spec.leg_maps()?;
    let a = corner_a(spec, &map, &legs)?;
    Ok(replay(spec, &legs, a, spectral_radius)?.0)
}

/// Absolute distance to the fixed point below which a transient counts as converged.
pub const TRANSIENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransientRun {
    /// One result per simulated cycle, each starting from that cycle's corner a.
    pub snapshots: Vec<LimitCycleResult>,
    /// Euclidean distance of corner a to the fixed point after each cycle.
    pub distances: Vec<f64>,
    pub fixed_point: BlochState,
    pub cycles_to_converge: Option<usize>,
}

/// Iterates the cycle from `initial` for `n_cycles` periods.
pub fn run_transient(
    spec: &CycleSpec,
    initial: BlochState,
    n_cycles: usize,
) -> Result<TransientRun, CycleError> {
    if n_cycles == 0 {
        return Err(CycleError::InvalidSpec("n_cycles must be >= 1".into()));
    }
    let (map, spectral_radius) = contractive_map(spec)?;
    let fixed = map.fixed_point()?;
    let fixed_point = BlochState::from_array(fixed.into());
    let legs = spec.leg_maps()?;
    let mut state = initial_state(spec, initial);
    let mut snapshots = Vec::with_capacity(n_cycles);
    let mut distances = Vec::with_capacity(n_cycles);
    for _ in 0..n_cycles {
        let (snapshot, next) = replay(spec, &legs, state, spectral_radius)?;
        snapshots.push(snapshot);
        distances.push((Vector3::from(next.to_array()) - fixed).norm());
        state = next;
    }
    let cycles_to_converge = distances
        .iter()
        .position(|&d| d <= TRANSIENT_TOLERANCE)
        .map(|k| k + 1);
    for s in &mut snapshots {
        s.cycles_to_converge = cycles_to_converge;
    }
    Ok(TransientRun {
        snapshots,
        distances,
        fixed_point,
        cycles_to_converge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuddenLimit {
    pub p_cold: f64,
    pub p_hot: f64,
}

/// Powers extrapolated to δt → 0 from solves at δt, δt/2 and δt/4.
///
/// Two Richardson levels: the first removes the O(δt) term, the second the
/// O(δt²) term.
pub fn sudden_limit_powers(spec: &CycleSpec) -> Result<SuddenLimit, CycleError> {
    let h = spec.dt;
    let mut powers = [(0.0, 0.0); 3];
    for (k, p) in powers.iter_mut().enumerate() {
        let r = solve_limit_cycle(&spec.with_dt(h / f64::from(1u32 << k))?)?;
        *p = (r.p_cold, r.p_hot);
    }
    let floor = 1e-12 * spec.de_cold().max(spec.de_hot()) * spec.max_total_rate();
    let extrapolate = |p0: f64, p1: f64, p2: f64| -> Result<f64, CycleError> {
        let first = 2.0 * p1 - p0;
        let second = 2.0 * p2 - p1;
        if (second - first).abs() > EXTRAPOLATION_TOLERANCE * first.abs().max(second.abs()) + floor
        {
            return Err(CycleError::NonConvergent { first, second });
        }
        Ok((4.0 * second - first) / 3.0)
    };
    Ok(SuddenLimit {
        p_cold: extrapolate(powers[0].0, powers[1].0, powers[2].0)?,
        p_hot: extrapolate(powers[0].1, powers[1].1, powers[2].1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit_model::BathLabel;

    fn spec(
        protocol: Protocol,
        q_m: f64,
        dt: f64,
        beta: (f64, f64),
        down: (f64, f64),
    ) -> CycleSpec {
        let low = QubitParams::new(0.5, 1.0, 0.0).unwrap();
        let high = QubitParams::new(1.0, 1.0, q_m).unwrap();
        let high = if protocol == Protocol::CoherentSudden {
            high
        } else {
            QubitParams::new(1.0, 1.0, 0.0).unwrap()
        };
        CycleSpec::new(
            low,
            high,
            BathSpec::direct(BathLabel::Cold, beta.0, down.0).unwrap(),
            BathSpec::direct(BathLabel::Hot, beta.1, down.1).unwrap(),
            dt,
            protocol,
            ThermalizationMode::Exact,
        )
        .unwrap()
    }

    #[test]
    fn vanishing_dt_and_ramp_give_identity() {
        let s = spec(
            Protocol::CoherentSudden,
            0.0,
            1e-300,
            (1.0, 1.0),
            (1.0, 1.0),
        );
        let map = compose_cycle_map(&s).unwrap();
        assert!((map.m - Matrix3::identity()).abs().max() < 1e-15);
        assert!(map.v.abs().max() < 1e-15);
    }

    #[test]
    fn classical_map_has_no_coherence_couplings() {
        let s = spec(Protocol::Classical, 0.0, 0.3, (1.0, 0.5), (1.0, 2.0));
        let map = compose_cycle_map(&s).unwrap();
        for (i, j) in [
            (0, 1),
            (0, 2),
            (1, 0),
            (2, 0),
            (1, 1),
            (2, 2),
            (1, 2),
            (2, 1),
        ] {
            assert_eq!(map.m[(i, j)], 0.0);
        }
        assert_eq!((map.v[1], map.v[2]), (0.0, 0.0));
    }

    #[test]
    fn coherent_map_matches_hand_product() {
        let s = spec(Protocol::CoherentSudden, 1e3, 0.01, (1.0, 0.5), (1.0, 1.0));
        let map = compose_cycle_map(&s).unwrap();
        let rot = s.compression();
        let (c, sn) = (rot.cos, rot.sin);
        let (sc, sh) = (s.rates_cold().total, s.rates_hot().total);
        let (ec, hc) = ((-sc * 0.01).exp(), (-sc * 0.005).exp());
        let (eh, hh) = ((-sh * 0.01).exp(), (-sh * 0.005).exp());
        let oc = s.rates_cold().equilibrium_d().unwrap() * (1.0 - ec);
        let oh = s.rates_hot().equilibrium_d().unwrap() * (1.0 - eh);
        // Rᵀ·diag(eh, hh)·R·diag(ec, hc) multiplied out by hand
        let expected = Matrix3::new(
            c * c * eh * ec + sn * sn * hh * ec,
            c * sn * hc * (hh - eh),
            0.0,
            c * sn * ec * (hh - eh),
            sn * sn * eh * hc + c * c * hh * hc,
            0.0,
            0.0,
            0.0,
            hh * hc,
        );
        assert!((map.m - expected).abs().max() < 1e-15, "{}", map.m);
        let u = eh * c * oc + oh;
        let w = hh * sn * oc;
        assert!((map.v[0] - (c * u + sn * w)).abs() < 1e-16);
        assert!((map.v[1] - (-sn * u + c * w)).abs() < 1e-16);
        assert_eq!(map.v[2], 0.0);
        assert!(map.spectral_radius() < 1.0);
    }

    #[test]
    fn equilibrium_has_zero_power() {
        let s = spec(Protocol::Classical, 0.0, 0.01, (1.0, 1.0), (1.0, 1.0));
        let low = *s.qubit_low();
        let s = CycleSpec::new(
            low,
            low,
            *s.cold(),
            *s.hot(),
            0.01,
            Protocol::Classical,
            ThermalizationMode::Exact,
        )
        .unwrap();
        let r = solve_limit_cycle(&s).unwrap();
        let gibbs = s.rates_cold().equilibrium_d().unwrap();
        assert!((r.corners.a.d - gibbs).abs() < 1e-14);
        assert!(r.p_cold.abs() < 1e-12 && r.p_hot.abs() < 1e-12);
        assert_eq!(r.cop, None);
    }

    #[test]
    fn classical_power_example() {
        // closed form: ½·1·1/(Σ_C+Σ_H)·(e⁻² − e⁻¹)·1 with Σ_C = 1+e⁻¹, Σ_H = 1+e⁻²
        let s = spec(Protocol::Classical, 0.0, 1e-4, (1.0, 1.0), (1.0, 1.0));
        let r = solve_limit_cycle(&s).unwrap();
        let (x1, x2) = ((-1f64).exp(), (-2f64).exp());
        let expected = 0.5 / (2.0 + x1 + x2) * (x2 - x1);
        assert!((expected + 0.04645).abs() < 1e-4);
        assert!((r.p_cold - expected).abs() < 1e-6 * expected.abs());
    }

    #[test]
    fn coherent_sudden_heats_both_baths() {
        let s = spec(Protocol::CoherentSudden, 1e3, 1e-4, (1.0, 1.0), (1.0, 1.0));
        let r = solve_limit_cycle(&s).unwrap();
        assert!(r.p_cold > 0.0 && r.p_hot > 0.0);
        assert!(r.corners.a.i.abs() < 1e-12);
        assert!(r.first_law_residual() < 1e-12);
    }

    #[test]
    fn non_contractive_spec_is_rejected() {
        let s = spec(Protocol::CoherentSudden, 3.0, 0.1, (1.0, 1.0), (0.0, 0.0));
        assert!(matches!(
            solve_limit_cycle(&s),
            Err(CycleError::NonContractive { .. })
        ));
        assert!(matches!(
            run_transient(&s, BlochState::default(), 3),
            Err(CycleError::NonContractive { .. })
        ));
    }

    #[test]
    fn incoherent_requires_constant_ratio() {
        let low = QubitParams::new(0.5, 1.0, 0.0).unwrap();
        let high = QubitParams::new(1.0, 1.0, 1.0).unwrap();
        let bath = BathSpec::direct(BathLabel::Cold, 1.0, 1.0).unwrap();
        let err = CycleSpec::new(
            low,
            high,
            bath,
            bath,
            0.1,
            Protocol::IncoherentScaled,
            ThermalizationMode::Exact,
        );
        assert!(matches!(err, Err(CycleError::InvalidSpec(_))));
        let scaled = QubitParams::new(1.0, 2.0, 2.0).unwrap();
        let low = QubitParams::new(0.5, 1.0, 1.0).unwrap();
        assert!(CycleSpec::new(
            low,
            scaled,
            bath,
            bath,
            0.1,
            Protocol::IncoherentScaled,
            ThermalizationMode::Exact
        )
        .is_ok());
    }

    #[test]
    fn linear_mode_guard_surfaces() {
        let s = spec(Protocol::Classical, 0.0, 0.5, (1.0, 1.0), (1.0, 1.0))
            .with_mode(ThermalizationMode::LinearOrder)
            .unwrap();
        assert!(matches!(solve_limit_cycle(&s), Err(CycleError::Model(_))));
    }

    #[test]
    fn transient_from_fixed_point_is_stationary() {
        let s = spec(Protocol::CoherentSudden, 2.0, 0.05, (1.0, 0.4), (1.0, 0.6));
        let fixed = solve_limit_cycle(&s).unwrap().corners.a;
        let run = run_transient(&s, fixed, 20).unwrap();
        for snap in &run.snapshots {
            assert!(snap.corners.a.max_abs_diff(&fixed) < 1e-14);
        }
        assert_eq!(run.cycles_to_converge, Some(1));
    }

    #[test]
    fn transient_rate_matches_spectral_radius() {
        let s = spec(Protocol::CoherentSudden, 2.0, 0.05, (1.0, 0.4), (1.0, 0.6));
        let run = run_transient(&s, BlochState::new(-0.3, 0.2, 0.1).unwrap(), 400).unwrap();
        let rho = run.snapshots[0].spectral_radius;
        let (k, m) = (100, 100);
        let observed = (run.distances[k + m] / run.distances[k]).powf(1.0 / m as f64);
        assert!((observed / rho - 1.0).abs() < 0.05, "{observed} vs {rho}");
    }

    #[test]
    fn classical_transient_is_monotone() {
        let s = spec(Protocol::Classical, 0.0, 0.05, (1.0, 0.4), (1.0, 0.6));
        let run = run_transient(&s, BlochState::diagonal(0.5), 300).unwrap();
        let target = run.fixed_point.d;
        let gaps: Vec<f64> = run
            .snapshots
            .iter()
            .map(|r| r.corners.a.d - target)
            .collect();
        assert!(gaps.iter().all(|g| *g >= -1e-15));
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-16));
        // scalar iteration oracle
        let (legs_c, legs_h) = s.leg_maps().unwrap();
        let mut d = 0.5;
        for _ in 0..300 {
            d += legs_c.population_step(d);
            d += legs_h.population_step(d);
        }
        assert!((d - target).abs() < 1e-12);
    }

    #[test]
    fn sudden_limit_incoherent_equals_classical() {
        let c = spec(Protocol::Classical, 0.0, 1e-3, (1.0, 0.7), (0.8, 1.4));
        let i = c.with_protocol(Protocol::IncoherentScaled).unwrap();
        assert_eq!(
            sudden_limit_powers(&c).unwrap(),
            sudden_limit_powers(&i).unwrap()
        );
    }

    #[test]
    fn extrapolation_rejects_coarse_start() {
        let s = spec(Protocol::CoherentSudden, 1e3, 2.0, (1.0, 1.0), (1.0, 1.0));
        assert!(matches!(
            sudden_limit_powers(&s),
            Err(CycleError::NonConvergent { .. })
        ));
    }
}
