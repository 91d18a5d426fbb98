//! Closed forms for the four-site ring.
//!
//! Every eigenvalue, both nearest-neighbour concurrences (signed, i.e.
//! without the `max(0, .)`), their mean, and the two entanglement
//! thresholds. All concurrences depend on `J2 / J1` only; the `J2 -> inf`
//! limit is the `J1 = 0` point.

use crate::error::Result;
use crate::hamiltonian::check_couplings;

/// `sqrt(J1^2 + J2^2 - J1 J2)`, the scale shared by all four-site formulas.
fn radical(j1: f64, j2: f64) -> f64 {
    (j1 * j1 + j2 * j2 - j1 * j2).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// `2(J1 + J2)`: ferromagnetic multiplet.
    Ferro,
    Zero,
    TwoJ1,
    TwoJ2,
    /// `+2 sqrt(J1^2 + J2^2 - J1 J2)`.
    PlusRoot,
    /// `-2 sqrt(J1^2 + J2^2 - J1 J2)`, the ground state.
    MinusRoot,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub level: Level,
    pub value: f64,
    pub multiplicity: usize,
}

/// The sixteen four-site eigenvalues grouped by closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum4 {
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum4 {
    /// Sorted multiset of all sixteen values.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> =
            self.entries.iter().flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity)).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|e| e.value * e.multiplicity as f64).sum()
    }

    pub fn count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// `E_GS = -2 sqrt(J1^2 + J2^2 - J1 J2)`.
pub fn ground_energy4(j1: f64, j2: f64) -> Result<f64> {
    check_couplings(j1, j2)?;
    Ok(-2.0 * radical(j1, j2))
}

/// All sixteen eigenvalues.
///
/// Per sector `r <= 2`: r=0 gives the ferromagnetic level; r=1 gives
/// `2(J1+J2), 0, 2J1, 2J2`; r=2 gives `2J1, 2J2, 0, 2(J1+J2)` and the pair
/// `+-2 sqrt(.)`. Sectors r=3, 4 mirror r=1, 0 under the global spin flip.
pub fn full_spectrum4(j1: f64, j2: f64) -> Result<Spectrum4> {
    check_couplings(j1, j2)?;
    let root = 2.0 * radical(j1, j2);
    let e = |level, value, multiplicity| SpectrumEntry { level, value, multiplicity };
    Ok(Spectrum4 {
        entries: vec![
            // r=0, r=4, two from r=1 and r=3, one from r=2
            e(Level::Ferro, 2.0 * (j1 + j2), 5),
            e(Level::Zero, 0.0, 3),
            e(Level::TwoJ1, 2.0 * j1, 3),
            e(Level::TwoJ2, 2.0 * j2, 3),
            e(Level::PlusRoot, root, 1),
            e(Level::MinusRoot, -root, 1),
        ],
    })
}

/// Signed concurrence of the J1 bond, `(2 J1 - J2) / (2 sqrt(.))`.
pub fn c12_analytic(j1: f64, j2: f64) -> Result<f64> {
    check_couplings(j1, j2)?;
    Ok((2.0 * j1 - j2) / (2.0 * radical(j1, j2)))
}

/// Signed concurrence of the J2 bond; `c12` with the couplings exchanged.
pub fn c23_analytic(j1: f64, j2: f64) -> Result<f64> {
    check_couplings(j1, j2)?;
    Ok((2.0 * j2 - j1) / (2.0 * radical(j1, j2)))
}

/// Mean signed concurrence over the four bonds, `(J1 + J2) / (4 sqrt(.))`.
pub fn c_mean_analytic(j1: f64, j2: f64) -> Result<f64> {
    check_couplings(j1, j2)?;
    Ok((j1 + j2) / (4.0 * radical(j1, j2)))
}

/// `dE_GS / dJ1 = (J2 - 2 J1) / sqrt(.)`.
pub fn d_ground_energy4_d_j1(j1: f64, j2: f64) -> Result<f64> {
    check_couplings(j1, j2)?;
    Ok((j2 - 2.0 * j1) / radical(j1, j2))
}

/// Couplings `J2` where the signed concurrences cross zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds4 {
    /// `C23 <= 0` for `J2 <= j2_low`.
    pub j2_low: f64,
    /// `C12 <= 0` for `J2 >= j2_high`.
    pub j2_high: f64,
}

impl Thresholds4 {
    pub fn new(j1: f64) -> Self {
        Self { j2_low: j1 / 2.0, j2_high: 2.0 * j1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-14;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < TOL
    }

    #[test]
    fn ground_energy_values() {
        assert!(close(ground_energy4(1.0, 1.0).unwrap(), -2.0));
        assert!(close(ground_energy4(1.0, 0.0).unwrap(), -2.0));
        assert!(close(ground_energy4(1.0, 2.0).unwrap(), -2.0 * 3f64.sqrt()));
        assert!(ground_energy4(-1.0, 2.0).is_err());
        assert!(ground_energy4(0.0, 0.0).is_err());
    }

    #[test]
    fn concurrence_special_values() {
        assert!(close(c12_analytic(1.0, 0.0).unwrap(), 1.0));
        assert!(close(c12_analytic(1.0, 1.0).unwrap(), 0.5));
        assert!(close(c12_analytic(1.0, 2.0).unwrap(), 0.0));
        assert!(close(c23_analytic(1.0, 0.5).unwrap(), 0.0));
        assert!(close(c23_analytic(1.0, 1.0).unwrap(), 0.5));
        assert!(close(c23_analytic(0.0, 1.0).unwrap(), 1.0));
        assert!(close(c_mean_analytic(1.0, 0.0).unwrap(), 0.25));
        assert!(close(c_mean_analytic(1.0, 1.0).unwrap(), 0.5));
        assert!(close(c_mean_analytic(0.0, 1.0).unwrap(), 0.25));
    }

    #[test]
    fn spectrum_shape() {
        let s = full_spectrum4(1.0, 1.0).unwrap();
        assert_eq!(s.count(), 16);
        assert!(close(s.trace(), 32.0));
        let v = s.values();
        assert_eq!(v.len(), 16);
        assert!(close(v[0], -2.0));
        assert_eq!(v.iter().filter(|x| close(**x, 4.0)).count(), 5);
        // 2J1, 2J2 and the +root level all equal 2 at the isotropic point
        assert_eq!(v.iter().filter(|x| close(**x, 2.0)).count(), 7);
        assert_eq!(v.iter().filter(|x| close(**x, 0.0)).count(), 3);

        let d = full_spectrum4(1.0, 0.0).unwrap().values();
        assert_eq!(d.iter().filter(|x| close(**x, 0.0)).count(), 6);
    }

    #[test]
    fn trace_is_sixteen_times_coupling_sum() {
        // 2^(N-1) per bond, two J1 and two J2 bonds
        for (j1, j2) in [(1.0, 0.0), (0.3, 2.2), (1.7, 1.1)] {
            let s = full_spectrum4(j1, j2).unwrap();
            assert!((s.trace() - 16.0 * (j1 + j2)).abs() < 1e-12);
        }
    }

    #[test]
    fn thresholds() {
        let t = Thresholds4::new(1.0);
        assert_eq!((t.j2_low, t.j2_high), (0.5, 2.0));
        assert_eq!(t.j2_low, t.j2_high / 4.0);
    }
}
