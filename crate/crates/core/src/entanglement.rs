//! Pairwise entanglement of ring ground states.
//!
//! For an SU(2)-invariant non-degenerate ground state the concurrence of a
//! bond is `-<S_ab>`, taken here without the `max(0, .)` ("signed") and with
//! it ("clipped"). The Wootters route builds the 4x4 reduced state of the
//! pair directly from the sector amplitudes and works for any vector; the
//! swap shortcut is only exposed through [`GroundState`]s.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::basis::Sector;
use crate::eigensolver::{ground_state, GroundState, SolverOptions};
use crate::error::{Error, Result};
use crate::hamiltonian::{are_adjacent, check_sites, swap_expectation, BondKind, BondList, CouplingParams};

/// Maximum spread tolerated between bonds of the same coupling class.
pub const BOND_CLASS_TOL: f64 = 1e-9;

fn require_unique(gs: &GroundState) -> Result<()> {
    if gs.is_degenerate() {
        return Err(Error::DegenerateGroundState { gap: gs.gap });
    }
    Ok(())
}

/// `-<S_ab>` on a non-degenerate ground state, for nearest-neighbour sites.
pub fn signed_concurrence(gs: &GroundState, site_a: usize, site_b: usize) -> Result<f64> {
    require_unique(gs)?;
    check_sites(gs.params.n, site_a, site_b)?;
    if !are_adjacent(gs.params.n, site_a, site_b) {
        return Err(Error::NotAdjacent { a: site_a, b: site_b });
    }
    Ok(-swap_expectation(&gs.sector, &gs.coefficients, site_a, site_b)?)
}

/// `max(0, signed_concurrence)`.
pub fn clipped_concurrence(gs: &GroundState, site_a: usize, site_b: usize) -> Result<f64> {
    Ok(signed_concurrence(gs, site_a, site_b)?.max(0.0))
}

/// Reduced density matrix of sites `a`, `b` (1-based) in the basis
/// `|s_a s_b>` = `|00>, |01>, |10>, |11>`, obtained by summing over every
/// configuration of the other `N - 2` spins.
pub fn reduced_density_matrix(sector: &Sector, v: &[f64], site_a: usize, site_b: usize) -> Result<Matrix4<f64>> {
    check_sites(sector.n(), site_a, site_b)?;
    if v.len() != sector.dim() {
        return Err(Error::DimensionMismatch { expected: sector.dim(), got: v.len() });
    }
    let (ba, bb) = (site_a - 1, site_b - 1);
    let clear = !((1u32 << ba) | (1u32 << bb));
    let mut rho = Matrix4::zeros();
    for (i, &bits) in sector.bit_patterns().iter().enumerate() {
        let (sa, sb) = ((bits >> ba & 1) as usize, (bits >> bb & 1) as usize);
        let row = 2 * sa + sb;
        let env = bits & clear;
        for col in 0..4 {
            let (ta, tb) = ((col >> 1) as u32, (col & 1) as u32);
            if (ta + tb) as usize != sa + sb {
                continue;
            }
            let other = env | (ta << ba) | (tb << bb);
            let j = sector.rank(other).expect("same popcount stays in sector");
            rho[(row, col)] += v[i] * v[j];
        }
    }
    Ok(rho)
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)` of a real two-qubit
/// density matrix.
///
/// The `l_i` are the square roots of the eigenvalues of `rho * rho~`, with
/// `rho~ = (sy x sy) rho* (sy x sy)`. For real `rho` they equal the absolute
/// eigenvalues of the symmetric matrix `sqrt(rho) (sy x sy) sqrt(rho)`.
pub fn two_qubit_concurrence(rho: &Matrix4<f64>) -> f64 {
    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1)
    #[rustfmt::skip]
    let yy = Matrix4::new(
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
    );
    let sym = (rho + rho.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let roots = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.transpose();
    let a = sqrt_rho * yy * sqrt_rho;
    let a = (a + a.transpose()) * 0.5;
    let mut l: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().map(|x| x.abs()).collect();
    l.sort_by(|x, y| y.total_cmp(x));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Concurrence of sites `a`, `b` for any normalized sector vector.
pub fn wootters_concurrence_of(sector: &Sector, v: &[f64], site_a: usize, site_b: usize) -> Result<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    Ok(two_qubit_concurrence(&reduced_density_matrix(sector, v, site_a, site_b)?))
}

pub fn wootters_concurrence(gs: &GroundState, site_a: usize, site_b: usize) -> Result<f64> {
    wootters_concurrence_of(&gs.sector, &gs.coefficients, site_a, site_b)
}

/// Mean of the nearest-neighbour concurrences over all `N` ring bonds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanConcurrence {
    pub signed: f64,
    pub clipped: f64,
    /// Signed concurrence shared by the J1 bonds.
    pub c12_signed: f64,
    /// Signed concurrence shared by the J2 bonds.
    pub c23_signed: f64,
    /// Largest deviation inside a bond class.
    pub class_spread: f64,
}

pub fn mean_concurrence(gs: &GroundState) -> Result<MeanConcurrence> {
    require_unique(gs)?;
    let bonds = BondList::new(&gs.params);
    let mut values = Vec::with_capacity(bonds.len());
    for b in bonds.iter() {
        values.push((b.kind, signed_concurrence(gs, b.a, b.b)?));
    }
    let class = |kind: BondKind| -> (f64, f64) {
        let vs: Vec<f64> = values.iter().filter(|(k, _)| *k == kind).map(|(_, c)| *c).collect();
        let lo = vs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (vs[0], hi - lo)
    };
    let (c12, spread12) = class(BondKind::Intra);
    let (c23, spread23) = class(BondKind::Inter);
    let class_spread = spread12.max(spread23);
    if class_spread > BOND_CLASS_TOL {
        return Err(Error::BondClassMismatch(class_spread));
    }
    let count = values.len() as f64;
    Ok(MeanConcurrence {
        signed: values.iter().map(|(_, c)| c).sum::<f64>() / count,
        clipped: values.iter().map(|(_, c)| c.max(0.0)).sum::<f64>() / count,
        c12_signed: c12,
        c23_signed: c23,
        class_spread,
    })
}

/// Entanglement summary of one parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub params: CouplingParams,
    pub c12_signed: f64,
    pub c23_signed: f64,
    pub c12: f64,
    pub c23: f64,
    pub c_mean_signed: f64,
    pub c_mean: f64,
    pub energy: f64,
    pub energy_relation_residual: f64,
    pub gap: f64,
}

impl ConcurrenceReport {
    pub fn from_ground_state(gs: &GroundState) -> Result<Self> {
        let mean = mean_concurrence(gs)?;
        let mut report = Self {
            params: gs.params,
            c12_signed: mean.c12_signed,
            c23_signed: mean.c23_signed,
            c12: mean.c12_signed.max(0.0),
            c23: mean.c23_signed.max(0.0),
            c_mean_signed: mean.signed,
            c_mean: mean.clipped,
            energy: gs.energy,
            energy_relation_residual: 0.0,
            gap: gs.gap,
        };
        report.energy_relation_residual = energy_relation_residual(gs, &report);
        Ok(report)
    }
}

/// `E/N + (J1 C12 + J2 C23) / 2` with signed concurrences; zero for an
/// exact eigenstate whose bond classes are uniform.
pub fn energy_relation_residual(gs: &GroundState, report: &ConcurrenceReport) -> f64 {
    let p = &gs.params;
    gs.energy / p.n as f64 + 0.5 * (p.j1 * report.c12_signed + p.j2 * report.c23_signed)
}

/// Central-difference `dE/dJ1` against the summed J1-bond swap expectations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeynmanHellmann {
    pub finite_difference: f64,
    pub swap_sum: f64,
    pub deviation: f64,
}

pub fn feynman_hellmann_check(params: &CouplingParams, h: f64, opts: &SolverOptions) -> Result<FeynmanHellmann> {
    if !(1e-7..=1e-3).contains(&h) || params.j1 - h < 0.0 {
        return Err(Error::InvalidStep(h));
    }
    let solve = |p: &CouplingParams| -> Result<GroundState> {
        let gs = ground_state(p, opts)?;
        require_unique(&gs)?;
        Ok(gs)
    };
    let plus = solve(&params.with_j1(params.j1 + h)?)?;
    let minus = solve(&params.with_j1(params.j1 - h)?)?;
    let centre = solve(params)?;
    let finite_difference = (plus.energy - minus.energy) / (2.0 * h);
    let mut swap_sum = 0.0;
    for b in BondList::new(params).of_kind(BondKind::Intra) {
        swap_sum += swap_expectation(&centre.sector, &centre.coefficients, b.a, b.b)?;
    }
    Ok(FeynmanHellmann { finite_difference, swap_sum, deviation: (finite_difference - swap_sum).abs() })
}
