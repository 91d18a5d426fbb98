//! Dimerized Heisenberg ring in swap-operator form,
//! `H = sum_i J1 S(2i-1, 2i) + J2 S(2i, 2i+1)` with periodic wrap.
//!
//! Each swap term keeps an aligned pair in place with weight `+J` and moves an
//! anti-aligned pair's amplitude to the bit-exchanged configuration. All
//! matrix elements are real.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{check_size, Sector};
use crate::error::{Error, Result};

/// Default dimension cap for dense materialization.
pub const DENSE_CAP: usize = 4096;

/// Ring size and the two exchange constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub n: usize,
    pub j1: f64,
    pub j2: f64,
}

impl CouplingParams {
    pub fn new(n: usize, j1: f64, j2: f64) -> Result<Self> {
        check_size(n)?;
        check_couplings(j1, j2)?;
        Ok(Self { n, j1, j2 })
    }

    /// Same ring with both couplings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.j1 * factor, self.j2 * factor)
    }

    /// Same ring with J1 and J2 exchanged.
    pub fn exchanged(&self) -> Result<Self> {
        Self::new(self.n, self.j2, self.j1)
    }

    pub fn with_j1(&self, j1: f64) -> Result<Self> {
        Self::new(self.n, j1, self.j2)
    }

    pub fn with_j2(&self, j2: f64) -> Result<Self> {
        Self::new(self.n, self.j1, j2)
    }

    /// Sum of couplings over all ring bonds.
    pub fn total_coupling(&self) -> f64 {
        (self.n / 2) as f64 * (self.j1 + self.j2)
    }
}

pub(crate) fn check_couplings(j1: f64, j2: f64) -> Result<()> {
    let ok = j1.is_finite() && j2.is_finite() && j1 >= 0.0 && j2 >= 0.0 && (j1 > 0.0 || j2 > 0.0);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidCouplings { j1, j2 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BondKind {
    /// Bond (2i-1, 2i), coupling J1.
    Intra,
    /// Bond (2i, 2i+1), coupling J2.
    Inter,
}

/// Nearest-neighbour bond between 1-based sites `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub coupling: f64,
    pub kind: BondKind,
}

impl Bond {
    #[inline]
    fn mask(&self) -> u32 {
        (1 << (self.a - 1)) | (1 << (self.b - 1))
    }
}

/// The `n` ring bonds in order (1,2), (2,3), ..., (n,1).
#[derive(Clone, Debug, PartialEq)]
pub struct BondList {
    pub bonds: Vec<Bond>,
}

impl BondList {
    pub fn new(params: &CouplingParams) -> Self {
        let n = params.n;
        let bonds = (1..=n)
            .map(|a| {
                let b = a % n + 1;
                if a % 2 == 1 {
                    Bond { a, b, coupling: params.j1, kind: BondKind::Intra }
                } else {
                    Bond { a, b, coupling: params.j2, kind: BondKind::Inter }
                }
            })
            .collect();
        Self { bonds }
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Bond> {
        self.bonds.iter()
    }

    pub fn of_kind(&self, kind: BondKind) -> impl Iterator<Item = &Bond> {
        self.bonds.iter().filter(move |b| b.kind == kind)
    }
}

/// Checks a 1-based site pair on an `n`-site ring.
pub(crate) fn check_sites(n: usize, a: usize, b: usize) -> Result<()> {
    if a == 0 || b == 0 || a > n || b > n || a == b {
        return Err(Error::InvalidSites { n, a, b });
    }
    Ok(())
}

/// Whether two 1-based sites are nearest neighbours on the `n`-site ring.
pub fn are_adjacent(n: usize, a: usize, b: usize) -> bool {
    let d = a.abs_diff(b);
    d == 1 || d == n - 1
}

/// Matrix-free Hamiltonian restricted to one magnetization sector.
#[derive(Clone, Debug)]
pub struct SectorHamiltonian<'a> {
    params: CouplingParams,
    sector: &'a Sector,
    // (mask, coupling) per bond
    terms: Vec<(u32, f64)>,
}

impl<'a> SectorHamiltonian<'a> {
    pub fn new(params: &CouplingParams, sector: &'a Sector) -> Result<Self> {
        if sector.n() != params.n {
            return Err(Error::InvalidSize(sector.n()));
        }
        let terms = BondList::new(params).iter().map(|b| (b.mask(), b.coupling)).collect();
        Ok(Self { params: *params, sector, terms })
    }

    pub fn params(&self) -> &CouplingParams {
        &self.params
    }

    pub fn sector(&self) -> &Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }

    /// `(H v)_i` for a single row, gathered from the rows connected to `i`.
    #[inline]
    fn row(&self, bits: u32, own: f64, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &(mask, j) in &self.terms {
            let pair = bits & mask;
            if pair == 0 || pair == mask {
                acc += j * own;
            } else {
                acc += j * v[self.sector.rank_unchecked(bits ^ mask)];
            }
        }
        acc
    }

    /// Writes `H v` into `out`. Deterministic regardless of threading since
    /// every output entry is accumulated by a single task in bond order.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        if out.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: out.len() });
        }
        let states = self.sector.bit_patterns();

        #[cfg(feature = "parallel")]
        if dim >= PARALLEL_MIN_DIM {
            use rayon::prelude::*;
            out.par_iter_mut()
                .with_min_len(4096)
                .enumerate()
                .for_each(|(i, o)| *o = self.row(states[i], v[i], v));
            return Ok(());
        }

        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(states[i], v[i], v);
        }
        Ok(())
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Dense sector matrix, assembled entry by entry from the bond terms.
    pub fn dense(&self, cap: usize) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        if dim > cap {
            return Err(Error::TooLargeForDense { dim, cap });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (col, &bits) in self.sector.bit_patterns().iter().enumerate() {
            for &(mask, j) in &self.terms {
                let pair = bits & mask;
                let row = if pair == 0 || pair == mask { col } else { self.sector.rank_unchecked(bits ^ mask) };
                m[(row, col)] += j;
            }
        }
        Ok(m)
    }
}

#[cfg(feature = "parallel")]
const PARALLEL_MIN_DIM: usize = 1 << 15;

/// `H v` within `sector`.
pub fn apply(params: &CouplingParams, sector: &Sector, v: &[f64]) -> Result<Vec<f64>> {
    SectorHamiltonian::new(params, sector)?.apply(v)
}

/// Dense sector matrix with the default cap.
pub fn dense_matrix(params: &CouplingParams, sector: &Sector) -> Result<DMatrix<f64>> {
    SectorHamiltonian::new(params, sector)?.dense(DENSE_CAP)
}

/// `<v| S(a, b) |v>` for a normalized sector vector and 1-based sites.
pub fn swap_expectation(sector: &Sector, v: &[f64], site_a: usize, site_b: usize) -> Result<f64> {
    check_sites(sector.n(), site_a, site_b)?;
    if v.len() != sector.dim() {
        return Err(Error::DimensionMismatch { expected: sector.dim(), got: v.len() });
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let mask: u32 = (1 << (site_a - 1)) | (1 << (site_b - 1));
    let mut acc = 0.0;
    for (i, &bits) in sector.bit_patterns().iter().enumerate() {
        let pair = bits & mask;
        if pair == 0 || pair == mask {
            acc += v[i] * v[i];
        } else {
            acc += v[i] * v[sector.rank_unchecked(bits ^ mask)];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisState, SymmetrizedBasis4};

    fn unit(dim: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    }

    #[test]
    fn rejects_bad_couplings() {
        assert!(CouplingParams::new(4, -1.0, 1.0).is_err());
        assert!(CouplingParams::new(4, 0.0, 0.0).is_err());
        assert!(CouplingParams::new(4, f64::NAN, 1.0).is_err());
        assert!(CouplingParams::new(6, 0.0, 1.0).is_ok());
        assert!(CouplingParams::new(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn bond_list_alternates() {
        let p = CouplingParams::new(4, 1.5, 0.5).unwrap();
        let bonds: Vec<_> = BondList::new(&p).iter().map(|b| (b.a, b.b, b.coupling)).collect();
        assert_eq!(bonds, vec![(1, 2, 1.5), (2, 3, 0.5), (3, 4, 1.5), (4, 1, 0.5)]);

        let p6 = CouplingParams::new(6, 1.0, 2.0).unwrap();
        let l6 = BondList::new(&p6);
        assert_eq!(l6.len(), 6);
        assert_eq!(l6.of_kind(BondKind::Intra).count(), 3);
        assert_eq!(l6.of_kind(BondKind::Inter).count(), 3);

        let p8 = CouplingParams::new(8, 1.0, 2.0).unwrap();
        let last = *BondList::new(&p8).bonds.last().unwrap();
        assert_eq!((last.a, last.b, last.coupling, last.kind), (8, 1, 2.0, BondKind::Inter));
    }

    #[test]
    fn every_site_in_two_bonds() {
        for n in [4, 6, 8, 12] {
            let l = BondList::new(&CouplingParams::new(n, 1.0, 1.0).unwrap());
            for site in 1..=n {
                assert_eq!(l.iter().filter(|b| b.a == site || b.b == site).count(), 2);
            }
        }
    }

    #[test]
    fn ferromagnetic_state_energy() {
        let p = CouplingParams::new(4, 1.3, 0.4).unwrap();
        let s = Sector::enumerate(4, 0).unwrap();
        let out = apply(&p, &s, &[1.0]).unwrap();
        assert!((out[0] - 2.0 * (1.3 + 0.4)).abs() < 1e-15);
    }

    #[test]
    fn r2_minus_block_eigenvectors() {
        let (j1, j2) = (0.7, 1.9);
        let p = CouplingParams::new(4, j1, j2).unwrap();
        let s = Sector::enumerate(4, 2).unwrap();
        let b = SymmetrizedBasis4::build(2).unwrap();
        for (vec, e) in b.minus_block.iter().zip([2.0 * j1, 2.0 * j2, 0.0]) {
            let v = vec.to_coefficients(&s);
            let hv = apply(&p, &s, &v).unwrap();
            for (x, y) in hv.iter().zip(&v) {
                assert!((x - e * y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn r2_plus_block_projection() {
        let (j1, j2) = (1.1, 0.3);
        let p = CouplingParams::new(4, j1, j2).unwrap();
        let s = Sector::enumerate(4, 2).unwrap();
        let m = dense_matrix(&p, &s).unwrap();
        let b = SymmetrizedBasis4::build(2).unwrap();
        let vs: Vec<_> = b.plus_block.iter().map(|x| nalgebra::DVector::from_vec(x.to_coefficients(&s))).collect();
        let expected = [[2.0 * j1, 0.0, 2.0 * j2], [0.0, 2.0 * j2, 2.0 * j1], [2.0 * j2, 2.0 * j1, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                let e = vs[i].dot(&(&m * &vs[j]));
                assert!((e - expected[i][j]).abs() < 1e-14, "({i},{j}) {e}");
            }
        }
    }

    #[test]
    fn dense_is_symmetric_and_matches_apply() {
        for (n, j1, j2) in [(4, 1.0, 0.3), (6, 0.2, 1.7), (8, 1.0, 1.0), (10, 2.5, 0.9)] {
            let p = CouplingParams::new(n, j1, j2).unwrap();
            for r in 0..=n {
                let s = Sector::enumerate(n, r).unwrap();
                let h = SectorHamiltonian::new(&p, &s).unwrap();
                let m = h.dense(DENSE_CAP).unwrap();
                assert_eq!(m, m.transpose());
                for i in 0..s.dim() {
                    let col = h.apply(&unit(s.dim(), i)).unwrap();
                    for (k, c) in col.iter().enumerate() {
                        assert_eq!(*c, m[(k, i)]);
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_half_dimension_per_bond() {
        // Brute force tr(S_ab) over the full space: the diagonal element is 1
        // exactly when the two bits agree, which happens for half the states.
        for n in [4, 6, 8] {
            let mut aligned = 0usize;
            for bits in 0u32..(1 << n) {
                if (bits & 1) == (bits >> 1 & 1) {
                    aligned += 1;
                }
            }
            assert_eq!(aligned, 1 << (n - 1));
            let p = CouplingParams::new(n, 0.8, 1.3).unwrap();
            let trace: f64 = (0..=n).map(|r| dense_matrix(&p, &Sector::enumerate(n, r).unwrap()).unwrap().trace()).sum();
            let expected = aligned as f64 * p.total_coupling();
            assert!((trace - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let p = CouplingParams::new(16, 1.0, 1.0).unwrap();
        let s = Sector::enumerate(16, 8).unwrap();
        assert_eq!(dense_matrix(&p, &s).unwrap_err(), Error::TooLargeForDense { dim: 12870, cap: DENSE_CAP });
        let s7 = Sector::enumerate(14, 7).unwrap();
        assert!(dense_matrix(&CouplingParams::new(14, 1.0, 1.0).unwrap(), &s7).is_ok());
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let p = CouplingParams::new(4, 1.0, 1.0).unwrap();
        let s = Sector::enumerate(4, 2).unwrap();
        assert_eq!(apply(&p, &s, &[1.0; 5]).unwrap_err(), Error::DimensionMismatch { expected: 6, got: 5 });
    }

    #[test]
    fn swap_expectation_basics() {
        let s = Sector::enumerate(4, 1).unwrap();
        // singlet on bond (1,2): (|1000> - |0100>)/sqrt(2)
        let mut v = vec![0.0; s.dim()];
        let a = std::f64::consts::FRAC_1_SQRT_2;
        v[s.index_of(BasisState::from_label("1000").unwrap()).unwrap()] = a;
        v[s.index_of(BasisState::from_label("0100").unwrap()).unwrap()] = -a;
        assert!((swap_expectation(&s, &v, 1, 2).unwrap() + 1.0).abs() < 1e-15);

        let mut w = vec![0.0; s.dim()];
        w[s.index_of(BasisState::from_label("0010").unwrap()).unwrap()] = 1.0;
        assert_eq!(swap_expectation(&s, &w, 1, 2).unwrap(), 1.0);

        assert!(matches!(swap_expectation(&s, &[0.6; 4], 1, 2), Err(Error::NotNormalized(_))));
        assert!(matches!(swap_expectation(&s, &w, 1, 1), Err(Error::InvalidSites { .. })));
        assert!(matches!(swap_expectation(&s, &w, 0, 1), Err(Error::InvalidSites { .. })));
    }

    fn check_matrix_invariance(n: usize, map: impl Fn(u32) -> u32, p: &CouplingParams, target: impl Fn(usize) -> usize) {
        for r in 0..=n {
            let s = Sector::enumerate(n, r).unwrap();
            let t = Sector::enumerate(n, target(r)).unwrap();
            let m = dense_matrix(p, &s).unwrap();
            let mt = dense_matrix(p, &t).unwrap();
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    let fi = t.rank(map(s.bit_patterns()[i])).unwrap();
                    let fj = t.rank(map(s.bit_patterns()[j])).unwrap();
                    // diagonal sums run over bonds in a different order
                    assert!((m[(i, j)] - mt[(fi, fj)]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spin_flip_commutes() {
        for n in [4, 6, 8] {
            let p = CouplingParams::new(n, 0.6, 1.4).unwrap();
            check_matrix_invariance(n, |b| crate::basis::flip_bits(b, n), &p, |r| n - r);
        }
    }

    #[test]
    fn pair_swap_commutes() {
        for n in [4, 6, 8] {
            let p = CouplingParams::new(n, 0.6, 1.4).unwrap();
            check_matrix_invariance(n, |b| crate::basis::translate_bits(b, n, 2), &p, |r| r);
        }
    }

    #[test]
    fn isotropic_point_is_one_site_translation_invariant() {
        for n in [4, 6, 8] {
            let p = CouplingParams::new(n, 1.0, 1.0).unwrap();
            check_matrix_invariance(n, |b| crate::basis::translate_bits(b, n, 1), &p, |r| r);
        }
    }

    #[test]
    fn adjacency() {
        assert!(are_adjacent(6, 1, 2));
        assert!(are_adjacent(6, 6, 1));
        assert!(!are_adjacent(6, 1, 3));
    }
}
