//! Built-in self-check: runs the library's numerical invariants for a list
//! of ring sizes and reports the largest deviation seen for each.

use std::fmt;

use crate::analytic;
use crate::basis::{flip_bits, translate_bits, Sector};
use crate::eigensolver::{full_spectrum, ground_state, Method, SolverOptions, FULL_SPECTRUM_MAX_SITES};
use crate::entanglement::{feynman_hellmann_check, signed_concurrence, wootters_concurrence, ConcurrenceReport};
use crate::error::Result;
use crate::hamiltonian::{dense_matrix, swap_expectation, CouplingParams};
use crate::oracle::{full_space_eigenvalues, ORACLE_MAX_SITES};

/// J2 values (with J1 = 1) every check is run on.
pub const VERIFY_GRID: [f64; 9] = [0.0, 0.25, 0.5, 0.8, 1.0, 1.3, 2.0, 2.7, 4.0];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn find(&self, name: &str, n: usize) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && c.n == n)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} N={:<2} {:<34} max dev {:.3e} (tol {:.0e})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.n,
                c.name,
                c.max_deviation,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

struct Tracker {
    n: usize,
    checks: Vec<Check>,
}

impl Tracker {
    fn record(&mut self, name: &'static str, tolerance: f64, deviations: impl IntoIterator<Item = f64>) {
        let max_deviation = deviations.into_iter().fold(0.0, |m: f64, d| if d.is_nan() { f64::INFINITY } else { m.max(d) });
        self.checks.push(Check { name, n: self.n, max_deviation, tolerance });
    }
}

fn max_multiset_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn symmetry_deviation(params: &CouplingParams, map: impl Fn(u32) -> u32, target: impl Fn(usize) -> usize) -> Result<f64> {
    let n = params.n;
    let mut worst = 0.0f64;
    for r in 0..=n {
        let s = Sector::enumerate(n, r)?;
        let t = Sector::enumerate(n, target(r))?;
        let m = dense_matrix(params, &s)?;
        let mt = dense_matrix(params, &t)?;
        let image: Vec<usize> = s.bit_patterns().iter().map(|&b| t.rank(map(b)).expect("image in sector")).collect();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                worst = worst.max((m[(i, j)] - mt[(image[i], image[j])]).abs());
            }
        }
    }
    Ok(worst)
}

/// Runs every check for each ring size in `sizes`.
pub fn verify(sizes: &[usize], opts: &SolverOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for &n in sizes {
        crate::basis::check_size(n)?;
        let mut t = Tracker { n, checks: Vec::new() };
        let points: Vec<CouplingParams> =
            VERIFY_GRID.iter().map(|&j2| CouplingParams::new(n, 1.0, j2)).collect::<Result<_>>()?;
        let solved = points.iter().map(|p| ground_state(p, opts)).collect::<Result<Vec<_>>>()?;
        let reports = solved.iter().map(ConcurrenceReport::from_ground_state).collect::<Result<Vec<_>>>()?;

        if n == 4 {
            let mut spec = Vec::new();
            let mut energy = Vec::new();
            let mut conc = Vec::new();
            let mut fh = Vec::new();
            for (p, r) in points.iter().zip(&reports) {
                let numeric = full_spectrum(p)?.eigenvalues;
                spec.push(max_multiset_deviation(&numeric, &analytic::full_spectrum4(p.j1, p.j2)?.values()));
                energy.push((r.energy - analytic::ground_energy4(p.j1, p.j2)?).abs());
                conc.push((r.c12_signed - analytic::c12_analytic(p.j1, p.j2)?).abs());
                conc.push((r.c23_signed - analytic::c23_analytic(p.j1, p.j2)?).abs());
                conc.push((r.c_mean_signed - analytic::c_mean_analytic(p.j1, p.j2)?).abs());
                let s12 = -r.c12_signed;
                fh.push((2.0 * s12 - analytic::d_ground_energy4_d_j1(p.j1, p.j2)?).abs());
            }
            t.record("analytic spectrum", 1e-10, spec);
            t.record("analytic ground energy", 1e-10, energy);
            t.record("analytic concurrences", 1e-10, conc);
            t.record("analytic dE/dJ1", 1e-10, fh);
        }

        t.record("energy relation residual", 1e-9, reports.iter().map(|r| r.energy_relation_residual.abs()));

        let mut wootters = Vec::new();
        let mut pair_sym = Vec::new();
        for gs in &solved {
            for a in 1..=n {
                let b = a % n + 1;
                let swap = signed_concurrence(gs, a, b)?.max(0.0);
                wootters.push((swap - wootters_concurrence(gs, a, b)?).abs());
            }
            let s12 = swap_expectation(&gs.sector, &gs.coefficients, 1, 2)?;
            let s34 = swap_expectation(&gs.sector, &gs.coefficients, 3, 4)?;
            pair_sym.push((s12 - s34).abs());
        }
        t.record("wootters oracle equivalence", 1e-9, wootters);
        t.record("<S12> = <S34>", 1e-9, pair_sym);

        let fh_points = [0.5, 1.0, 1.5];
        let mut fh = Vec::new();
        for j2 in fh_points {
            fh.push(feynman_hellmann_check(&CouplingParams::new(n, 1.0, j2)?, 1e-5, opts)?.deviation);
        }
        t.record("feynman-hellmann", 1e-6, fh);

        let probe = CouplingParams::new(n, 0.7, 1.3)?;
        if n <= 10 {
            t.record("spin-flip symmetry", 1e-12, [symmetry_deviation(&probe, |b| flip_bits(b, n), |r| n - r)?]);
            t.record("pair-swap symmetry", 1e-12, [symmetry_deviation(&probe, |b| translate_bits(b, n, 2), |r| r)?]);
        }

        let mut solvers = Vec::new();
        for p in &points {
            let d = ground_state(p, &SolverOptions { method: Method::Dense, ..*opts })?.energy;
            let l = ground_state(p, &SolverOptions { method: Method::Lanczos, ..*opts })?.energy;
            solvers.push((d - l).abs());
        }
        t.record("dense vs lanczos energy", 1e-9, solvers);

        if n <= ORACLE_MAX_SITES {
            let mut brute = Vec::new();
            for (p, gs) in points.iter().zip(&solved) {
                brute.push((full_space_eigenvalues(p)?[0] - gs.energy).abs());
            }
            t.record("full-space brute force energy", 1e-10, brute);
        }

        if n <= FULL_SPECTRUM_MAX_SITES.min(10) {
            let mut lowest = Vec::new();
            for (p, gs) in points.iter().zip(&solved) {
                // positive when some other sector dips below half filling
                let global = full_spectrum(p)?.eigenvalues[0];
                lowest.push((gs.energy - global).max(0.0));
            }
            t.record("ground state in r = N/2", 1e-10, lowest);
        }

        report.checks.extend(t.checks);
    }
    Ok(report)
}
