//! Lowest eigenpair of a real symmetric operator given only as a matvec.
//!
//! Lanczos with full (two-pass) Gram-Schmidt reorthogonalization. When the
//! stored Krylov basis hits its size cap the iteration restarts from the
//! current Ritz vector. A zero `beta` ends the current Krylov space; if the
//! Ritz pair is not yet accurate the run restarts from a perturbed vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    pub seed: u64,
    /// Total matvec budget across restarts.
    pub max_iter: usize,
    /// Largest number of stored Krylov vectors before an explicit restart.
    pub max_basis: usize,
    /// Ritz-value stagnation threshold, relative to `max(1, |E|)`.
    pub ritz_tol: f64,
    /// Residual threshold `||H x - E x||`, relative to `max(1, |E|)`.
    pub residual_tol: f64,
    pub max_breakdown_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            max_iter: 5000,
            max_basis: 300,
            ritz_tol: 1e-12,
            residual_tol: 1e-10,
            max_breakdown_restarts: 3,
        }
    }
}

impl LanczosOptions {
    /// Caps the stored basis so it fits in roughly `bytes` of memory.
    pub fn with_memory_budget(mut self, dim: usize, bytes: usize) -> Self {
        let fit = bytes / (dim.max(1) * std::mem::size_of::<f64>());
        self.max_basis = self.max_basis.min(fit.max(8));
        self
    }
}

#[derive(Clone, Debug)]
pub struct LanczosResult {
    pub value: f64,
    /// Second-lowest Ritz value of the last Krylov space, if it had one.
    pub next_value: Option<f64>,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub restarts: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(a: &mut [f64], s: f64) {
    a.iter_mut().for_each(|x| *x *= s);
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
    let n = norm(&v);
    scale(&mut v, 1.0 / n);
    v
}

/// Eigenpairs of the tridiagonal matrix with diagonal `alpha` and
/// off-diagonal `beta`, sorted ascending.
fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m, m, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Runs Lanczos for the lowest eigenpair of the `dim`-dimensional operator `matvec`.
pub fn lowest_eigenpair<F>(dim: usize, mut matvec: F, opts: &LanczosOptions) -> Result<LanczosResult>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start = random_unit(dim, &mut rng);
    let mut total_iter = 0usize;
    let mut restarts = 0usize;
    let mut breakdowns = 0usize;
    let mut last_residual;
    let mut work = vec![0.0; dim];

    if dim == 1 {
        matvec(&start, &mut work)?;
        return Ok(LanczosResult {
            value: work[0] / start[0],
            next_value: None,
            vector: vec![1.0],
            residual: 0.0,
            iterations: 1,
            restarts: 0,
        });
    }

    let max_basis = opts.max_basis.clamp(2, dim.max(2));
    loop {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut prev_ritz = f64::INFINITY;
        let mut prev_next = f64::INFINITY;
        let mut ground_done = false;
        let mut extra = 0usize;

        let outcome = loop {
            let j = alpha.len();
            let v = &basis[j];
            matvec(v, &mut work)?;
            total_iter += 1;
            let a = dot(v, &work);
            alpha.push(a);
            axpy(-a, v, &mut work);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut work);
            }
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &work);
                    axpy(-c, q, &mut work);
                }
            }
            let b = norm(&work);

            let (values, vectors) = tridiagonal_eigen(&alpha, &beta);
            let theta = values[0];
            let scale_e = theta.abs().max(1.0);
            let est_residual = b * vectors[(j, 0)].abs();
            let next = values.get(1).copied();
            let breakdown = b <= 1e-13 * scale_e;

            let stagnated = (theta - prev_ritz).abs() < opts.ritz_tol * scale_e;
            if !ground_done && ((stagnated && est_residual < opts.residual_tol * scale_e) || breakdown) {
                ground_done = true;
            }
            let next_stable = match next {
                Some(nv) => (nv - prev_next).abs() < 1e-10 * nv.abs().max(1.0),
                None => true,
            };
            prev_ritz = theta;
            prev_next = next.unwrap_or(f64::INFINITY);
            if ground_done {
                extra += 1;
            }

            let full = basis.len() >= max_basis || basis.len() >= dim;
            let out_of_budget = total_iter >= opts.max_iter;
            if (ground_done && (next_stable || extra > 200)) || breakdown || full || out_of_budget {
                break (vectors.column(0).into_owned(), next, breakdown);
            }
            scale(&mut work, 1.0 / b);
            beta.push(b);
            basis.push(work.clone());
        };

        let (coeffs, next, breakdown) = outcome;
        let mut x = vec![0.0; dim];
        for (c, q) in coeffs.iter().zip(&basis) {
            axpy(*c, q, &mut x);
        }
        let nx = norm(&x);
        scale(&mut x, 1.0 / nx);

        matvec(&x, &mut work)?;
        total_iter += 1;
        let rayleigh = dot(&x, &work);
        axpy(-rayleigh, &x, &mut work);
        let residual = norm(&work);
        last_residual = residual;
        let scale_e = rayleigh.abs().max(1.0);

        if residual <= opts.residual_tol * scale_e {
            return Ok(LanczosResult {
                value: rayleigh,
                next_value: next,
                vector: x,
                residual,
                iterations: total_iter,
                restarts,
            });
        }
        if total_iter >= opts.max_iter {
            break;
        }
        restarts += 1;
        if breakdown {
            breakdowns += 1;
            if breakdowns > opts.max_breakdown_restarts {
                break;
            }
            // perturb the Ritz vector so the new Krylov space can grow past
            // the invariant subspace that caused the breakdown
            let noise = random_unit(dim, &mut rng);
            axpy(1e-3, &noise, &mut x);
            let nx = norm(&x);
            scale(&mut x, 1.0 / nx);
        }
        start = x;
    }
    Err(Error::NotConverged { iterations: total_iter, residual: last_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_op(m: &DMatrix<f64>) -> impl FnMut(&[f64], &mut [f64]) -> Result<()> + '_ {
        move |v, out| {
            for i in 0..m.nrows() {
                out[i] = (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum();
            }
            Ok(())
        }
    }

    #[test]
    fn diagonal_operator() {
        let d: Vec<f64> = (0..50).map(|i| (i as f64) * 0.5 - 3.0).collect();
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        let r = lowest_eigenpair(50, dense_op(&m), &LanczosOptions::default()).unwrap();
        assert!((r.value + 3.0).abs() < 1e-12);
        assert!((r.next_value.unwrap() + 2.5).abs() < 1e-9);
        assert!(r.vector[0].abs() > 1.0 - 1e-10);
    }

    #[test]
    fn matches_dense_on_random_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 80;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let m = &a + a.transpose();
        let exact = SymmetricEigen::new(m.clone()).eigenvalues.min();
        let r = lowest_eigenpair(n, dense_op(&m), &LanczosOptions::default()).unwrap();
        assert!((r.value - exact).abs() < 1e-10);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn small_basis_cap_forces_restarts() {
        let d: Vec<f64> = (0..200).map(|i| ((i * 37) % 200) as f64 / 10.0).collect();
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        let opts = LanczosOptions { max_basis: 12, ..Default::default() };
        let r = lowest_eigenpair(200, dense_op(&m), &opts).unwrap();
        assert!(r.value.abs() < 1e-10);
        assert!(r.restarts > 0);
    }

    #[test]
    fn seeds_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 40;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>());
        let m = &a * a.transpose();
        let r1 = lowest_eigenpair(n, dense_op(&m), &LanczosOptions { seed: 1, ..Default::default() }).unwrap();
        let r2 = lowest_eigenpair(n, dense_op(&m), &LanczosOptions { seed: 99, ..Default::default() }).unwrap();
        assert!((r1.value - r2.value).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let d: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        let opts = LanczosOptions { max_iter: 3, max_basis: 3, ..Default::default() };
        assert!(matches!(lowest_eigenpair(100, dense_op(&m), &opts), Err(Error::NotConverged { .. })));
    }
}
