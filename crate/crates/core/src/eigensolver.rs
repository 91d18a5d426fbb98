//! Ground states and spectra of sector Hamiltonians.
//!
//! Small sectors are diagonalized densely; larger ones go through the
//! matrix-free Lanczos in [`crate::lanczos`]. The ground state of the even
//! antiferromagnetic ring sits in the zero-magnetization sector `r = N/2`,
//! which is where [`ground_state`] looks unless asked to scan every sector.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::basis::Sector;
use crate::error::{Error, Result};
use crate::hamiltonian::{CouplingParams, SectorHamiltonian, DENSE_CAP};
use crate::lanczos::{self, LanczosOptions};

/// Relative gap below which a ground state counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Residual bound `||H v - E v|| <= RESIDUAL_BOUND * max(1, |E|)`.
pub const RESIDUAL_BOUND: f64 = 1e-9;
/// Sectors up to this dimension use the dense path under [`Method::Auto`].
pub const AUTO_DENSE_MAX: usize = 600;
/// Largest ring for [`full_spectrum`] (`2^12 = 4096` states).
pub const FULL_SPECTRUM_MAX_SITES: usize = 12;

const LANCZOS_MEMORY_BUDGET: usize = 2 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Lanczos,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dense" => Ok(Method::Dense),
            "lanczos" => Ok(Method::Lanczos),
            "auto" => Ok(Method::Auto),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Lanczos => "lanczos",
            Method::Auto => "auto",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub method: Method,
    pub seed: u64,
    /// Scan all sectors instead of only `r = N/2`.
    pub all_sectors: bool,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { method: Method::Auto, seed: 42, all_sectors: false, max_iter: 5000 }
    }
}

/// Lowest eigenpair of the searched space.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub params: CouplingParams,
    pub sector: Sector,
    pub energy: f64,
    /// `E1 - E0` within the searched space; infinite for a one-state space.
    pub gap: f64,
    /// Normalized amplitudes over `sector`'s basis.
    pub coefficients: Vec<f64>,
    /// Method actually used (never `Auto`).
    pub method: Method,
    pub converged: bool,
    pub residual: f64,
}

impl GroundState {
    pub fn sector_r(&self) -> usize {
        self.sector.r()
    }

    pub fn is_degenerate(&self) -> bool {
        self.gap < DEGENERACY_TOL * self.energy.abs().max(1.0)
    }
}

/// Fixes the overall sign so the largest-magnitude amplitude is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual_of(h: &SectorHamiltonian<'_>, v: &[f64], e: f64) -> Result<f64> {
    let hv = h.apply(v)?;
    Ok(hv.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt())
}

/// Sorted eigenvalues of one sector.
pub fn sector_eigenvalues(params: &CouplingParams, sector: &Sector) -> Result<Vec<f64>> {
    let m = SectorHamiltonian::new(params, sector)?.dense(DENSE_CAP)?;
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Dense ground state of one sector.
pub fn dense_ground(params: &CouplingParams, sector: &Sector) -> Result<GroundState> {
    let h = SectorHamiltonian::new(params, sector)?;
    let m = h.dense(DENSE_CAP)?;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energy = eig.eigenvalues[order[0]];
    let gap = order.get(1).map_or(f64::INFINITY, |&i| (eig.eigenvalues[i] - energy).max(0.0));
    let mut v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    fix_sign(&mut v);
    let residual = residual_of(&h, &v, energy)?;
    Ok(GroundState {
        params: *params,
        sector: sector.clone(),
        energy,
        gap,
        converged: residual <= RESIDUAL_BOUND * energy.abs().max(1.0),
        coefficients: v,
        method: Method::Dense,
        residual,
    })
}

/// Matrix-free Lanczos ground state of one sector, deterministic in `seed`.
pub fn lanczos_ground(params: &CouplingParams, sector: &Sector, seed: u64) -> Result<GroundState> {
    lanczos_ground_with(params, sector, &SolverOptions { method: Method::Lanczos, seed, ..Default::default() })
}

fn lanczos_ground_with(params: &CouplingParams, sector: &Sector, opts: &SolverOptions) -> Result<GroundState> {
    let h = SectorHamiltonian::new(params, sector)?;
    let lopts = LanczosOptions { seed: opts.seed, max_iter: opts.max_iter, ..Default::default() }
        .with_memory_budget(sector.dim(), LANCZOS_MEMORY_BUDGET);
    let res = lanczos::lowest_eigenpair(sector.dim(), |v, out| h.apply_into(v, out), &lopts)?;
    let mut v = res.vector;
    fix_sign(&mut v);
    let gap = res.next_value.map_or(f64::INFINITY, |e1| (e1 - res.value).max(0.0));
    Ok(GroundState {
        params: *params,
        sector: sector.clone(),
        energy: res.value,
        gap,
        coefficients: v,
        method: Method::Lanczos,
        converged: res.residual <= RESIDUAL_BOUND * res.value.abs().max(1.0),
        residual: res.residual,
    })
}

/// Ground state of one sector with the requested method.
pub fn sector_ground(params: &CouplingParams, sector: &Sector, opts: &SolverOptions) -> Result<GroundState> {
    let use_dense = match opts.method {
        Method::Dense => true,
        Method::Lanczos => sector.dim() < 2,
        Method::Auto => sector.dim() <= AUTO_DENSE_MAX,
    };
    if use_dense {
        dense_ground(params, sector)
    } else {
        lanczos_ground_with(params, sector, opts)
    }
}

/// Ground state of the ring.
///
/// Searches `r = N/2` by default; with `all_sectors` every sector is solved
/// and the lowest one kept (sectors `r > N/2` mirror `N - r` and are skipped).
/// The gap then spans sectors as well.
pub fn ground_state(params: &CouplingParams, opts: &SolverOptions) -> Result<GroundState> {
    let n = params.n;
    if !opts.all_sectors {
        let sector = Sector::half_filling(n)?;
        return sector_ground(params, &sector, opts);
    }
    let mut solved = Vec::with_capacity(n / 2 + 1);
    for r in 0..=n / 2 {
        solved.push(sector_ground(params, &Sector::enumerate(n, r)?, opts)?);
    }
    let best = (0..solved.len())
        .min_by(|&a, &b| solved[a].energy.total_cmp(&solved[b].energy))
        .expect("at least one sector");
    let mut gs = solved.swap_remove(best);
    // every sector below half filling has a spin-flipped twin
    let mut next = if gs.sector_r() == n / 2 { gs.energy + gs.gap } else { gs.energy };
    for other in &solved {
        next = next.min(other.energy);
    }
    gs.gap = (next - gs.energy).max(0.0);
    Ok(gs)
}

/// Full multiset of eigenvalues, assembled sector by sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub sector_breakdown: BTreeMap<usize, Vec<f64>>,
}

pub fn full_spectrum(params: &CouplingParams) -> Result<SpectrumReport> {
    let n = params.n;
    if n > FULL_SPECTRUM_MAX_SITES {
        return Err(Error::TooLargeForDense { dim: 1 << n, cap: DENSE_CAP });
    }
    let mut sector_breakdown = BTreeMap::new();
    let mut eigenvalues = Vec::with_capacity(1 << n);
    for r in 0..=n {
        let values = sector_eigenvalues(params, &Sector::enumerate(n, r)?)?;
        eigenvalues.extend_from_slice(&values);
        sector_breakdown.insert(r, values);
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectrumReport { eigenvalues, sector_breakdown })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, j1: f64, j2: f64) -> CouplingParams {
        CouplingParams::new(n, j1, j2).unwrap()
    }

    #[test]
    fn four_site_ground_energies() {
        let o = SolverOptions::default();
        assert!((ground_state(&params(4, 1.0, 1.0), &o).unwrap().energy + 2.0).abs() < 1e-12);
        assert!((ground_state(&params(4, 1.0, 0.0), &o).unwrap().energy + 2.0).abs() < 1e-12);
        let e = ground_state(&params(4, 1.0, 2.0), &o).unwrap().energy;
        assert!((e + 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ground_state_invariants() {
        for (n, j1, j2) in [(4, 1.0, 0.2), (6, 0.5, 1.0), (8, 1.0, 3.0), (10, 1.0, 1.0)] {
            for method in [Method::Dense, Method::Lanczos] {
                let gs = ground_state(&params(n, j1, j2), &SolverOptions { method, ..Default::default() }).unwrap();
                let norm: f64 = gs.coefficients.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-12);
                assert!(gs.converged);
                assert!(gs.residual <= RESIDUAL_BOUND * gs.energy.abs().max(1.0));
                assert!(gs.gap >= 0.0);
                assert!(!gs.is_degenerate());
                assert_eq!(gs.sector_r(), n / 2);
                assert_eq!(gs.method, method);
            }
        }
    }

    #[test]
    fn lanczos_matches_dense_n8() {
        let p = params(8, 1.0, 1.0);
        let dense_min = full_spectrum(&p).unwrap().eigenvalues[0];
        let sector = Sector::half_filling(8).unwrap();
        for seed in [1, 42, 12345] {
            let gs = lanczos_ground(&p, &sector, seed).unwrap();
            assert!((gs.energy - dense_min).abs() < 1e-9);
        }
        let a = lanczos_ground(&p, &sector, 3).unwrap().energy;
        let b = lanczos_ground(&p, &sector, 4).unwrap().energy;
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn lanczos_on_four_site_sector() {
        let p = params(4, 1.3, 0.4);
        let gs = lanczos_ground(&p, &Sector::half_filling(4).unwrap(), 42).unwrap();
        let exact = -2.0 * (1.3f64 * 1.3 + 0.4 * 0.4 - 1.3 * 0.4).sqrt();
        assert!((gs.energy - exact).abs() < 1e-12);
    }

    #[test]
    fn lanczos_is_deterministic() {
        let p = params(12, 1.0, 0.7);
        let s = Sector::half_filling(12).unwrap();
        let a = lanczos_ground(&p, &s, 9).unwrap();
        let b = lanczos_ground(&p, &s, 9).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.coefficients, b.coefficients);
    }

    #[test]
    fn half_filling_holds_the_ground_state() {
        for n in [4, 6, 8, 10] {
            for (j1, j2) in [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.3, 2.0), (0.0, 1.0)] {
                let p = params(n, j1, j2);
                let spec = full_spectrum(&p).unwrap();
                let half = spec.sector_breakdown[&(n / 2)][0];
                for (r, values) in &spec.sector_breakdown {
                    if *r != n / 2 {
                        assert!(half <= values[0] + 1e-12, "n={n} r={r}");
                    }
                }
                let all = ground_state(&p, &SolverOptions { all_sectors: true, ..Default::default() }).unwrap();
                assert!((all.energy - half).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_counts_and_trace() {
        for n in [4, 6, 8] {
            let p = params(n, 0.9, 1.6);
            let s = full_spectrum(&p).unwrap();
            assert_eq!(s.eigenvalues.len(), 1 << n);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let sum: f64 = s.eigenvalues.iter().sum();
            let expected = (1u64 << (n - 1)) as f64 * p.total_coupling();
            assert!((sum - expected).abs() < 1e-9);
        }
        assert!(full_spectrum(&params(14, 1.0, 1.0)).is_err());
    }

    #[test]
    fn spectrum_symmetric_under_coupling_exchange() {
        for n in [4, 6, 8] {
            let p = params(n, 0.4, 1.7);
            let a = full_spectrum(&p).unwrap().eigenvalues;
            let b = full_spectrum(&p.exchanged().unwrap()).unwrap().eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn decoupled_four_site_spectrum_has_six_zeros() {
        let s = full_spectrum(&params(4, 1.0, 0.0)).unwrap();
        let zeros = s.eigenvalues.iter().filter(|e| e.abs() < 1e-10).count();
        assert_eq!(zeros, 6);
    }

    #[test]
    fn method_parse() {
        assert_eq!("dense".parse::<Method>().unwrap(), Method::Dense);
        assert_eq!("auto".parse::<Method>().unwrap(), Method::Auto);
        assert!("qr".parse::<Method>().is_err());
    }
}
