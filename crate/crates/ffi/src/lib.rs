//! C ABI for the sudden-otto refrigerator model.
//!
//! Cycle specifications live behind an opaque handle created by
//! [`so_spec_new`] or [`so_spec_from_json`] and released with
//! [`so_spec_free`]. Every fallible call returns an [`SoStatus`]; the message
//! of the most recent failure on the calling thread is available through
//! [`so_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sudden_otto::analytics::{
    classical_sudden_power, coherent_correction_gamma, coherent_sudden_power, otto_cop,
    SuddenLimitInputs,
};
use sudden_otto::cli::config::RunConfig;
use sudden_otto::{
    solve_limit_cycle, sudden_limit_powers, BathLabel, BathSpec, CycleError, CycleSpec, ModelError,
    Protocol, QubitParams, RateModel, ThermalizationMode,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonContractive = 3,
    SingularSolve = 4,
    NonConvergent = 5,
    ParseError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoProtocol {
    CoherentSudden = 0,
    IncoherentScaled = 1,
    Classical = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoThermalization {
    Exact = 0,
    LinearOrder = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoRateKind {
    Direct = 0,
    Resonator = 1,
}

/// Operating point of H = E₀(q σ_z + Δ σ_x).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SoQubit {
    pub e0: f64,
    pub delta: f64,
    pub q: f64,
}

/// Bath description. `gamma_down` is read for direct baths; `kappa`,
/// `quality` and `omega_res` for resonator baths.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SoBath {
    pub beta: f64,
    pub kind: SoRateKind,
    pub gamma_down: f64,
    pub kappa: f64,
    pub quality: f64,
    pub omega_res: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SoSpecParams {
    pub qubit_low: SoQubit,
    pub qubit_high: SoQubit,
    pub cold: SoBath,
    pub hot: SoBath,
    pub dt: f64,
    pub protocol: SoProtocol,
    pub thermalization: SoThermalization,
}

/// Bloch components (𝒟, ℛ, ℐ) of one corner.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SoState {
    pub d: f64,
    pub r: f64,
    pub i: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SoLimitCycle {
    pub a: SoState,
    pub b: SoState,
    pub c: SoState,
    pub d: SoState,
    pub q_cold: f64,
    pub q_hot: f64,
    pub w_compress: f64,
    pub w_expand: f64,
    pub p_cold: f64,
    pub p_hot: f64,
    /// Valid only when `has_cop` is non-zero.
    pub cop: f64,
    pub has_cop: i32,
    pub spectral_radius: f64,
    pub first_law_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SoPowers {
    pub p_cold: f64,
    pub p_hot: f64,
}

/// Opaque cycle specification.
pub struct SoCycleSpec {
    inner: CycleSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(SoStatus, String);

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure(SoStatus::InvalidArgument, e.to_string())
    }
}

impl From<CycleError> for Failure {
    fn from(e: CycleError) -> Self {
        let status = match e {
            CycleError::Model(_) | CycleError::InvalidSpec(_) => SoStatus::InvalidArgument,
            CycleError::NonContractive { .. } => SoStatus::NonContractive,
            CycleError::SingularSolve => SoStatus::SingularSolve,
            CycleError::NonConvergent { .. } => SoStatus::NonConvergent,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SoStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SoStatus::Panic
        }
    }
}

fn bath(label: BathLabel, b: &SoBath) -> Result<BathSpec, Failure> {
    let model = match b.kind {
        SoRateKind::Direct => RateModel::Direct {
            gamma_down: b.gamma_down,
        },
        SoRateKind::Resonator => RateModel::Resonator {
            kappa: b.kappa,
            quality: b.quality,
            omega_res: b.omega_res,
        },
    };
    Ok(BathSpec::new(label, b.beta, model)?)
}

fn qubit(q: &SoQubit) -> Result<QubitParams, Failure> {
    Ok(QubitParams::new(q.e0, q.delta, q.q)?)
}

fn build(p: &SoSpecParams) -> Result<CycleSpec, Failure> {
    let protocol = match p.protocol {
        SoProtocol::CoherentSudden => Protocol::CoherentSudden,
        SoProtocol::IncoherentScaled => Protocol::IncoherentScaled,
        SoProtocol::Classical => Protocol::Classical,
    };
    let mode = match p.thermalization {
        SoThermalization::Exact => ThermalizationMode::Exact,
        SoThermalization::LinearOrder => ThermalizationMode::LinearOrder,
    };
    Ok(CycleSpec::new(
        qubit(&p.qubit_low)?,
        qubit(&p.qubit_high)?,
        bath(BathLabel::Cold, &p.cold)?,
        bath(BathLabel::Hot, &p.hot)?,
        p.dt,
        protocol,
        mode,
    )?)
}

fn boxed(spec: CycleSpec, out: *mut *mut SoCycleSpec) {
    let handle = Box::into_raw(Box::new(SoCycleSpec { inner: spec }));
    // SAFETY: callers check `out` for null before building the spec.
    unsafe { *out = handle };
}

fn spec_ref<'a>(spec: *const SoCycleSpec) -> Result<&'a CycleSpec, Failure> {
    // SAFETY: a non-null handle was produced by `boxed` and not yet freed.
    unsafe { spec.as_ref() }
        .map(|s| &s.inner)
        .ok_or_else(|| null("spec"))
}

fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: `out` is non-null and points to caller-owned storage for T.
    unsafe { out.write(value) };
    Ok(())
}

/// Builds a cycle specification. On success `*out` receives a handle that
/// must be released with [`so_spec_free`].
///
/// # Safety
/// `params` must point to a valid `SoSpecParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_spec_new(
    params: *const SoSpecParams,
    out: *mut *mut SoCycleSpec,
) -> SoStatus {
    guard(|| {
        let p = unsafe { params.as_ref() }.ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        boxed(build(p)?, out);
        Ok(())
    })
}

/// Builds a cycle specification from a JSON run configuration (the CLI's
/// `--config` format; sweep and output fields are accepted and ignored).
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_spec_from_json(
    json: *const c_char,
    out: *mut *mut SoCycleSpec,
) -> SoStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(SoStatus::ParseError, e.to_string()))?;
        let config = RunConfig::from_json(text, "<json>")
            .map_err(|e| Failure(SoStatus::ParseError, e.to_string()))?;
        let spec = config
            .build_spec()
            .map_err(|e| Failure(SoStatus::InvalidArgument, e.to_string()))?;
        boxed(spec, out);
        Ok(())
    })
}

/// Copy of `spec` with a different half-period δt.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_spec_with_dt(
    spec: *const SoCycleSpec,
    dt: f64,
    out: *mut *mut SoCycleSpec,
) -> SoStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        boxed(s.with_dt(dt)?, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `spec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn so_spec_free(spec: *mut SoCycleSpec) {
    if !spec.is_null() {
        drop(unsafe { Box::from_raw(spec) });
    }
}

/// Level splittings ΔE_C and ΔE_H of the two operating points.
///
/// # Safety
/// `spec` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_spec_splittings(
    spec: *const SoCycleSpec,
    de_cold: *mut f64,
    de_hot: *mut f64,
) -> SoStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        write(de_cold, s.de_cold())?;
        write(de_hot, s.de_hot())
    })
}

fn state(s: sudden_otto::BlochState) -> SoState {
    SoState {
        d: s.d,
        r: s.r,
        i: s.i,
    }
}

/// Solves the periodic steady state.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_solve_limit_cycle(
    spec: *const SoCycleSpec,
    out: *mut SoLimitCycle,
) -> SoStatus {
    guard(|| {
        let r = solve_limit_cycle(spec_ref(spec)?)?;
        write(
            out,
            SoLimitCycle {
                a: state(r.corners.a),
                b: state(r.corners.b),
                c: state(r.corners.c),
                d: state(r.corners.d),
                q_cold: r.q_cold,
                q_hot: r.q_hot,
                w_compress: r.w_compress,
                w_expand: r.w_expand,
                p_cold: r.p_cold,
                p_hot: r.p_hot,
                cop: r.cop.unwrap_or(f64::NAN),
                has_cop: i32::from(r.cop.is_some()),
                spectral_radius: r.spectral_radius,
                first_law_residual: r.first_law_residual(),
            },
        )
    })
}

/// Powers extrapolated to δt → 0 from solves at the spec's δt, δt/2, δt/4.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_sudden_limit(spec: *const SoCycleSpec, out: *mut SoPowers) -> SoStatus {
    guard(|| {
        let p = sudden_limit_powers(spec_ref(spec)?)?;
        write(
            out,
            SoPowers {
                p_cold: p.p_cold,
                p_hot: p.p_hot,
            },
        )
    })
}

/// Closed-form coherent sudden-limit powers at η_M → 1 and their first-order
/// coefficients in Δ/q_M, evaluated with the spec's rates.
///
/// # Safety
/// `spec` must be a live handle; `leading` and `slope` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_coherent_closed_form(
    spec: *const SoCycleSpec,
    leading: *mut SoPowers,
    slope: *mut SoPowers,
) -> SoStatus {
    guard(|| {
        let inp = SuddenLimitInputs::from_spec(spec_ref(spec)?);
        let p = coherent_sudden_power(&inp);
        let g = coherent_correction_gamma(&inp);
        write(
            leading,
            SoPowers {
                p_cold: p.p_cold,
                p_hot: p.p_hot,
            },
        )?;
        write(
            slope,
            SoPowers {
                p_cold: g.p_cold,
                p_hot: g.p_hot,
            },
        )
    })
}

/// Closed-form classical sudden-limit powers with the spec's rates.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_classical_closed_form(
    spec: *const SoCycleSpec,
    out: *mut SoPowers,
) -> SoStatus {
    guard(|| {
        let p = classical_sudden_power(&SuddenLimitInputs::from_spec(spec_ref(spec)?));
        write(
            out,
            SoPowers {
                p_cold: p.p_cold,
                p_hot: p.p_hot,
            },
        )
    })
}

/// Ideal Otto coefficient of performance ΔE_C/(ΔE_H − ΔE_C).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_otto_cop(de_cold: f64, de_hot: f64, out: *mut f64) -> SoStatus {
    guard(|| write(out, otto_cop(de_cold, de_hot)?))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn so_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn so_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
