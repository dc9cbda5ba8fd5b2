//! The four subcommands. Each turns a validated [`RunConfig`] into a [`Table`].

use rayon::prelude::*;

use super::config::{grid_points, parameter_dimension, RunConfig};
use super::output::{Cell, Column, Table};
use super::units::Dimension;
use super::CliError;
use crate::analytics::{
    classical_sudden_power, coherent_correction_gamma, coherent_two_term_power, otto_cop,
    PowerPair, SuddenLimitInputs, COHERENT_EXPANSION_RANGE,
};
use crate::cycle::{solve_limit_cycle, sudden_limit_powers, CycleSpec, Protocol};
use crate::qubit_model::{lorentzian_filter, BathLabel, BathSpec, QubitParams, RateModel};

/// Largest relative first-law residual allowed in an emitted row.
pub const FIRST_LAW_TOLERANCE: f64 = 1e-12;

/// Γ_Σ·δt used for the sudden-limit extrapolation columns.
pub const SUDDEN_RATE_DT: f64 = 1e-4;

const RESULT_COLUMNS: &[(&str, Dimension)] = &[
    ("protocol", Dimension::Dimensionless),
    ("dt", Dimension::Time),
    ("de_cold", Dimension::Energy),
    ("de_hot", Dimension::Energy),
    ("p_cold", Dimension::Power),
    ("p_hot", Dimension::Power),
    ("cop", Dimension::Dimensionless),
    ("cop_otto", Dimension::Dimensionless),
    ("spectral_radius", Dimension::Dimensionless),
    ("q_cold", Dimension::Energy),
    ("q_hot", Dimension::Energy),
    ("w_compress", Dimension::Energy),
    ("w_expand", Dimension::Energy),
    ("first_law_residual", Dimension::Dimensionless),
    ("a_d", Dimension::Dimensionless),
    ("a_r", Dimension::Dimensionless),
    ("a_i", Dimension::Dimensionless),
    ("b_d", Dimension::Dimensionless),
    ("b_r", Dimension::Dimensionless),
    ("b_i", Dimension::Dimensionless),
    ("c_d", Dimension::Dimensionless),
    ("c_r", Dimension::Dimensionless),
    ("c_i", Dimension::Dimensionless),
    ("d_d", Dimension::Dimensionless),
    ("d_r", Dimension::Dimensionless),
    ("d_i", Dimension::Dimensionless),
    ("sudden_p_cold", Dimension::Power),
    ("sudden_p_hot", Dimension::Power),
    ("closed_form", Dimension::Dimensionless),
    ("closed_p_cold", Dimension::Power),
    ("closed_p_hot", Dimension::Power),
    ("dev_p_cold", Dimension::Dimensionless),
    ("dev_p_hot", Dimension::Dimensionless),
    ("gamma_cold", Dimension::Power),
    ("gamma_hot", Dimension::Power),
    ("error", Dimension::Dimensionless),
];

fn result_columns() -> Vec<Column> {
    RESULT_COLUMNS
        .iter()
        .map(|&(n, d)| Column::new(n, d))
        .collect()
}

fn relative_deviation(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        (value - reference).abs()
    } else {
        ((value - reference) / reference).abs()
    }
}

fn describe(spec: &CycleSpec) -> String {
    format!(
        "protocol={} dt={} de_cold={} de_hot={} gamma_sum_cold={} gamma_sum_hot={}",
        spec.protocol().name(),
        spec.dt(),
        spec.de_cold(),
        spec.de_hot(),
        spec.rates_cold().total,
        spec.rates_hot().total
    )
}

/// Closed-form sudden-limit comparator for a spec, if one applies.
fn comparator(spec: &CycleSpec) -> Option<(&'static str, PowerPair, Option<PowerPair>)> {
    let inp = SuddenLimitInputs::from_spec(spec);
    if spec.protocol().is_diagonal() {
        return Some(("classical", classical_sudden_power(&inp), None));
    }
    let (low, high) = (spec.qubit_low(), spec.qubit_high());
    if low.q() != 0.0 || high.q() == 0.0 {
        return None;
    }
    let x = (high.delta() / high.q()).abs();
    (x <= COHERENT_EXPANSION_RANGE).then(|| {
        (
            "coherent_two_term",
            coherent_two_term_power(&inp, x),
            Some(coherent_correction_gamma(&inp)),
        )
    })
}

/// One result row for a built spec.
fn result_cells(spec: &CycleSpec) -> Result<Vec<Cell>, CliError> {
    let run = |e| CliError::Run {
        context: describe(spec),
        source: e,
    };
    let r = solve_limit_cycle(spec).map_err(run)?;
    let residual = r.first_law_residual();
    if residual.is_nan() || residual > FIRST_LAW_TOLERANCE {
        return Err(CliError::FirstLaw(residual));
    }
    let sigma = spec.max_total_rate();
    let sudden = if sigma > 0.0 {
        let dt0 = spec.dt().min(SUDDEN_RATE_DT / sigma);
        spec.with_dt(dt0).and_then(|s| sudden_limit_powers(&s)).ok()
    } else {
        None
    };
    let closed = comparator(spec);
    let dev = |num: Option<f64>, cf: Option<f64>| -> Cell {
        match (num, cf) {
            (Some(n), Some(c)) => relative_deviation(n, c).into(),
            _ => Cell::Empty,
        }
    };
    let mut cells: Vec<Cell> = vec![
        spec.protocol().name().into(),
        spec.dt().into(),
        spec.de_cold().into(),
        spec.de_hot().into(),
        r.p_cold.into(),
        r.p_hot.into(),
        r.cop.into(),
        otto_cop(spec.de_cold(), spec.de_hot()).ok().into(),
        r.spectral_radius.into(),
        r.q_cold.into(),
        r.q_hot.into(),
        r.w_compress.into(),
        r.w_expand.into(),
        residual.into(),
    ];
    for s in [r.corners.a, r.corners.b, r.corners.c, r.corners.d] {
        cells.extend([s.d.into(), s.r.into(), s.i.into()]);
    }
    let s_cold = sudden.map(|s| s.p_cold);
    let s_hot = sudden.map(|s| s.p_hot);
    let c_cold = closed.map(|c| c.1.p_cold);
    let c_hot = closed.map(|c| c.1.p_hot);
    let gamma = closed.and_then(|c| c.2);
    cells.extend([
        s_cold.into(),
        s_hot.into(),
        closed.map_or(Cell::Empty, |c| c.0.into()),
        c_cold.into(),
        c_hot.into(),
        dev(s_cold, c_cold),
        dev(s_hot, c_hot),
        gamma.map(|g| g.p_cold).into(),
        gamma.map(|g| g.p_hot).into(),
        Cell::Empty,
    ]);
    Ok(cells)
}

fn error_cells(width: usize, e: &CliError) -> Vec<Cell> {
    let mut cells = vec![Cell::Empty; width];
    cells[width - 1] = Cell::Text(e.to_string());
    cells
}

pub fn simulate(config: &RunConfig) -> Result<Table, CliError> {
    if !config.sweep.is_empty() {
        return Err(CliError::Usage(
            "simulate takes no sweep axes; use the sweep subcommand".into(),
        ));
    }
    let mut table = Table::new(result_columns());
    table.push(result_cells(&config.build_spec()?)?);
    Ok(table)
}

pub fn sweep(config: &RunConfig) -> Result<Table, CliError> {
    if config.sweep.is_empty() {
        return Err(CliError::Usage("sweep needs 1 or 2 sweep axes".into()));
    }
    let axes: Vec<Vec<f64>> = config
        .sweep
        .iter()
        .map(|a| grid_points(a.min, a.max, a.points, a.spacing))
        .collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut columns: Vec<Column> = config
        .sweep
        .iter()
        .map(|a| Column::new(&a.parameter, parameter_dimension(&a.parameter)))
        .collect();
    columns.extend(result_columns());
    let width = RESULT_COLUMNS.len();
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|values| {
            let outcome = values
                .iter()
                .zip(&config.sweep)
                .try_fold(config.clone(), |c, (&v, axis)| {
                    c.with_parameter(&axis.parameter, v)
                })
                .and_then(|c| c.build_spec())
                .and_then(|spec| result_cells(&spec));
            let mut row: Vec<Cell> = values.iter().map(|&v| v.into()).collect();
            row.extend(outcome.unwrap_or_else(|e| error_cells(width, &e)));
            row
        })
        .collect();
    let mut table = Table::new(columns);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// Cross-coupling condition Q ≥ 10·ΔE_C/(ΔE_H − ΔE_C).
pub fn quality_threshold(de_cold: f64, de_hot: f64) -> f64 {
    10.0 * de_cold / (de_hot - de_cold).abs()
}

pub fn rates(config: &RunConfig) -> Result<Table, CliError> {
    let spec = config.build_spec()?;
    let (de_c, de_h) = (spec.de_cold(), spec.de_hot());
    let baths: Vec<(&str, &BathSpec, &QubitParams, f64)> = [
        ("cold", spec.cold(), spec.qubit_low(), de_h),
        ("hot", spec.hot(), spec.qubit_high(), de_c),
    ]
    .into_iter()
    .filter(|b| matches!(b.1.rate_model(), RateModel::Resonator { .. }))
    .collect();
    if baths.is_empty() {
        return Err(CliError::Usage(
            "rates needs at least one bath with a resonator rate model".into(),
        ));
    }
    let mut table = Table::new(
        [
            ("bath", Dimension::Dimensionless),
            ("de", Dimension::Energy),
            ("gamma_down", Dimension::Rate),
            ("gamma_up", Dimension::Rate),
            ("gamma_total", Dimension::Rate),
            ("lorentzian", Dimension::Dimensionless),
            ("matrix_element", Dimension::Dimensionless),
            ("power_scale", Dimension::Power),
            ("cross_leak", Dimension::Dimensionless),
            ("quality", Dimension::Dimensionless),
            ("quality_threshold", Dimension::Dimensionless),
            ("condition_met", Dimension::Dimensionless),
        ]
        .iter()
        .map(|&(n, d)| Column::new(n, d))
        .collect(),
    );
    let threshold = quality_threshold(de_c, de_h);
    for (name, bath, qubit, other_de) in baths {
        let RateModel::Resonator {
            quality, omega_res, ..
        } = bath.rate_model()
        else {
            unreachable!()
        };
        let grid = match &config.rate_grid {
            Some(g) => grid_points(g.min, g.max, g.points, g.spacing),
            None => vec![de_c, de_h, omega_res],
        };
        let leak = lorentzian_filter(other_de, omega_res, quality);
        for de in grid {
            let q = qubit.with_splitting(de)?;
            let r = bath.rates_at(&q)?;
            table.push(vec![
                name.into(),
                de.into(),
                r.down.into(),
                r.up.into(),
                r.total.into(),
                lorentzian_filter(de, omega_res, quality).into(),
                q.coupling_factor().into(),
                (r.down * de).into(),
                leak.into(),
                quality.into(),
                threshold.into(),
                (quality >= threshold).into(),
            ]);
        }
    }
    Ok(table)
}

/// Specs for all three protocols sharing the configuration's rates and temperatures.
///
/// The coherent run uses the configured operating points. The diagonal runs
/// keep the low point's eigenbasis, move to ΔE_H by rescaling, and use
/// direct baths carrying the configured Γ↓ at each operating point, so both
/// see exactly the same rate pairs.
pub fn comparison_specs(config: &RunConfig) -> Result<Vec<CycleSpec>, CliError> {
    let base = config.build_spec()?;
    let coherent = base.with_protocol(Protocol::CoherentSudden)?;
    let low = *base.qubit_low();
    let high = low.with_splitting(base.de_hot())?;
    let cold = BathSpec::direct(BathLabel::Cold, base.cold().beta(), base.rates_cold().down)?;
    let hot = BathSpec::direct(BathLabel::Hot, base.hot().beta(), base.rates_hot().down)?;
    let diagonal = |p| CycleSpec::new(low, high, cold, hot, base.dt(), p, base.mode());
    Ok(vec![
        coherent,
        diagonal(Protocol::IncoherentScaled)?,
        diagonal(Protocol::Classical)?,
    ])
}

pub fn compare(config: &RunConfig) -> Result<Table, CliError> {
    if !config.sweep.is_empty() {
        return Err(CliError::Usage("compare takes no sweep axes".into()));
    }
    let mut columns = result_columns();
    columns.push(Column::new("cools_cold", Dimension::Dimensionless));
    let mut table = Table::new(columns);
    for spec in comparison_specs(config)? {
        let mut row = result_cells(&spec)?;
        let Cell::Num(p_cold) = row[4] else {
            unreachable!()
        };
        row.push((p_cold < 0.0).into());
        table.push(row);
    }
    Ok(table)
}
