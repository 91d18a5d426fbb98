//! Full-space reference Hamiltonian built from Pauli tensor products.
//!
//! Shares nothing with the sector machinery: each swap term is assembled as
//! `(1 + X_a X_b + Y_a Y_b + Z_a Z_b) / 2` from Kronecker products of
//! single-site 2x2 matrices. Only meant for small rings.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hamiltonian::{BondList, CouplingParams};

/// Largest ring the brute-force oracle accepts.
pub const ORACLE_MAX_SITES: usize = 10;

fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// `i * sigma_y`, real: `Y_a Y_b = -(iY)_a (iY)_b`.
fn i_pauli_y() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `op` on 1-based sites `a` and `b`, identity elsewhere. Site 1 is the
/// fastest-varying tensor index, matching bit 0 of a basis pattern.
fn two_site(n: usize, a: usize, b: usize, op: &DMatrix<f64>) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(2, 2);
    let mut full = DMatrix::<f64>::identity(1, 1);
    for site in (1..=n).rev() {
        let factor = if site == a || site == b { op } else { &id };
        full = full.kronecker(factor);
    }
    full
}

/// Full `2^N x 2^N` Hamiltonian.
pub fn full_hamiltonian(params: &CouplingParams) -> Result<DMatrix<f64>> {
    let n = params.n;
    if n > ORACLE_MAX_SITES {
        return Err(Error::TooLargeForDense { dim: 1 << n, cap: 1 << ORACLE_MAX_SITES });
    }
    let dim = 1usize << n;
    let (x, y, z) = (pauli_x(), i_pauli_y(), pauli_z());
    let mut h = DMatrix::zeros(dim, dim);
    for bond in BondList::new(params).iter() {
        let swap = (DMatrix::identity(dim, dim) + two_site(n, bond.a, bond.b, &x) - two_site(n, bond.a, bond.b, &y)
            + two_site(n, bond.a, bond.b, &z))
            * 0.5;
        h += swap * bond.coupling;
    }
    Ok(h)
}

/// Sorted eigenvalues of the full Hamiltonian.
pub fn full_space_eigenvalues(params: &CouplingParams) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = full_hamiltonian(params)?.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn full_space_ground_energy(params: &CouplingParams) -> Result<f64> {
    Ok(full_space_eigenvalues(params)?[0])
}
