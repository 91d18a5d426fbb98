//! J2 sweeps at fixed J1: one ground state and concurrence report per grid
//! point, the mean-concurrence maximum refined by golden-section search, and
//! the zero crossings of the signed concurrences refined by bisection.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::eigensolver::{ground_state, Method, SolverOptions};
use crate::entanglement::ConcurrenceReport;
use crate::error::{Error, Result};
use crate::hamiltonian::CouplingParams;
use crate::output::Format;

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_TOL: f64 = 1e-10;
/// Golden-section search stops once the bracket is narrower than this.
pub const ARGMAX_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub j1: f64,
    pub j2_min: f64,
    pub j2_max: f64,
    pub steps: usize,
    pub method: Method,
    pub seed: u64,
    /// Interpret `j2_min`/`j2_max` as bounds on `J2 / J1`.
    pub ratio: bool,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 4,
            j1: 1.0,
            j2_min: 0.0,
            j2_max: 4.0,
            steps: 81,
            method: Method::Auto,
            seed: 42,
            ratio: false,
            output_format: Format::Csv,
            output_path: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        crate::basis::check_size(self.n)?;
        let bad = |msg: &str| Err(Error::InvalidSweep(msg.to_owned()));
        if !(self.j1.is_finite() && self.j1 >= 0.0) {
            return bad("J1 must be finite and >= 0");
        }
        if self.ratio && self.j1 <= 0.0 {
            return bad("ratio mode needs J1 > 0");
        }
        if !(self.j2_min.is_finite() && self.j2_max.is_finite()) || self.j2_min < 0.0 || self.j2_min >= self.j2_max {
            return bad("need 0 <= j2_min < j2_max");
        }
        if self.steps < 2 {
            return bad("steps must be >= 2");
        }
        if self.j1 == 0.0 && self.j2_min == 0.0 {
            return bad("J1 = J2 = 0 at the first grid point");
        }
        Ok(())
    }

    /// Absolute J2 values of the grid, ascending, endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        let scale = if self.ratio { self.j1 } else { 1.0 };
        let (lo, hi) = (self.j2_min * scale, self.j2_max * scale);
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { hi } else { lo + (hi - lo) * (i as f64 / last) })
            .collect()
    }

    fn solver(&self, index: usize) -> SolverOptions {
        SolverOptions { method: self.method, seed: self.seed.wrapping_add(index as u64), ..Default::default() }
    }
}

/// One output row. Concurrence fields are `None` on degenerate points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub j2: f64,
    pub c12_signed: Option<f64>,
    pub c23_signed: Option<f64>,
    pub c12: Option<f64>,
    pub c23: Option<f64>,
    pub c_mean_signed: Option<f64>,
    pub c_mean: Option<f64>,
    pub e_gs: f64,
    pub gap: f64,
    pub energy_relation_residual: Option<f64>,
    pub degenerate: bool,
}

impl SweepRow {
    fn from_report(j2: f64, r: &ConcurrenceReport) -> Self {
        Self {
            j2,
            c12_signed: Some(r.c12_signed),
            c23_signed: Some(r.c23_signed),
            c12: Some(r.c12),
            c23: Some(r.c23),
            c_mean_signed: Some(r.c_mean_signed),
            c_mean: Some(r.c_mean),
            e_gs: r.energy,
            gap: r.gap,
            energy_relation_residual: Some(r.energy_relation_residual),
            degenerate: false,
        }
    }

    fn degenerate(j2: f64, energy: f64, gap: f64) -> Self {
        Self {
            j2,
            c12_signed: None,
            c23_signed: None,
            c12: None,
            c23: None,
            c_mean_signed: None,
            c_mean: None,
            e_gs: energy,
            gap,
            energy_relation_residual: None,
            degenerate: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub j1: f64,
    pub seed: u64,
    pub method: Method,
    pub rows: Vec<SweepRow>,
    /// J2 of the largest signed mean concurrence, refined.
    pub argmax_cmean: Option<f64>,
    /// Zero crossings of the signed `(C12, C23)`, if inside the sweep range.
    pub thresholds: (Option<f64>, Option<f64>),
}

/// Concurrence report at one point; `Ok(None)` for a degenerate ground state.
pub fn evaluate(params: &CouplingParams, opts: &SolverOptions) -> Result<(f64, f64, Option<ConcurrenceReport>)> {
    let gs = ground_state(params, opts)?;
    if !gs.converged {
        return Err(Error::NotConverged { iterations: 0, residual: gs.residual });
    }
    if gs.is_degenerate() {
        return Ok((gs.energy, gs.gap, None));
    }
    Ok((gs.energy, gs.gap, Some(ConcurrenceReport::from_ground_state(&gs)?)))
}

fn solve_row(config: &SweepConfig, index: usize, j2: f64) -> Result<SweepRow> {
    let params = CouplingParams::new(config.n, config.j1, j2)?;
    let (energy, gap, report) = evaluate(&params, &config.solver(index))?;
    Ok(match report {
        Some(r) => SweepRow::from_report(j2, &r),
        None => SweepRow::degenerate(j2, energy, gap),
    })
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = config.grid();

    #[cfg(feature = "parallel")]
    let rows: Vec<SweepRow> = {
        use rayon::prelude::*;
        grid.par_iter().enumerate().map(|(i, &j2)| solve_row(config, i, j2)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepRow> = grid.iter().enumerate().map(|(i, &j2)| solve_row(config, i, j2)).collect::<Result<_>>()?;

    let opts = config.solver(0);
    let argmax_cmean = refine_argmax(config, &rows, &opts)?;
    let thresholds = (
        first_crossing(config, &rows, Which::C12, &opts)?,
        first_crossing(config, &rows, Which::C23, &opts)?,
    );
    Ok(SweepResult { n: config.n, j1: config.j1, seed: config.seed, method: config.method, rows, argmax_cmean, thresholds })
}

/// Which signed concurrence to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    C12,
    C23,
}

impl std::str::FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "c12" => Ok(Which::C12),
            "c23" => Ok(Which::C23),
            other => Err(format!("unknown concurrence '{other}'")),
        }
    }
}

impl Which {
    fn pick(&self, report: &ConcurrenceReport) -> f64 {
        match self {
            Which::C12 => report.c12_signed,
            Which::C23 => report.c23_signed,
        }
    }

    fn of_row(&self, row: &SweepRow) -> Option<f64> {
        match self {
            Which::C12 => row.c12_signed,
            Which::C23 => row.c23_signed,
        }
    }
}

fn signed_at(n: usize, j1: f64, j2: f64, which: Which, opts: &SolverOptions) -> Result<f64> {
    let params = CouplingParams::new(n, j1, j2)?;
    match evaluate(&params, opts)? {
        (_, gap, None) => Err(Error::DegenerateGroundState { gap }),
        (_, _, Some(r)) => Ok(which.pick(&r)),
    }
}

fn mean_at(n: usize, j1: f64, j2: f64, opts: &SolverOptions) -> Result<f64> {
    let params = CouplingParams::new(n, j1, j2)?;
    match evaluate(&params, opts)? {
        (_, gap, None) => Err(Error::DegenerateGroundState { gap }),
        (_, _, Some(r)) => Ok(r.c_mean_signed),
    }
}

/// Root of the signed concurrence in `bracket` by bisection.
pub fn find_threshold(n: usize, j1: f64, which: Which, bracket: (f64, f64), opts: &SolverOptions) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let mut f_lo = signed_at(n, j1, lo, which, opts)?;
    let f_hi = signed_at(n, j1, hi, which, opts)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = signed_at(n, j1, mid, which, opts)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn first_crossing(config: &SweepConfig, rows: &[SweepRow], which: Which, opts: &SolverOptions) -> Result<Option<f64>> {
    let valid: Vec<(f64, f64)> = rows.iter().filter_map(|r| which.of_row(r).map(|c| (r.j2, c))).collect();
    for w in valid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            return Ok(Some(a));
        }
        if fa.signum() != fb.signum() {
            return find_threshold(config.n, config.j1, which, (a, b), opts).map(Some);
        }
    }
    Ok(None)
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn refine_argmax(config: &SweepConfig, rows: &[SweepRow], opts: &SolverOptions) -> Result<Option<f64>> {
    let valid: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.c_mean_signed.map(|c| (r.j2, c))).collect();
    let Some(best) = (0..valid.len()).max_by(|&a, &b| valid[a].1.total_cmp(&valid[b].1)) else {
        return Ok(None);
    };
    let lo = valid[best.saturating_sub(1)].0;
    let hi = valid[(best + 1).min(valid.len() - 1)].0;
    if lo >= hi {
        return Ok(Some(valid[best].0));
    }
    golden_section_max(lo, hi, ARGMAX_TOL, |j2| mean_at(config.n, config.j1, j2, opts)).map(Some)
}
