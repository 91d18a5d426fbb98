//! Computational basis of an N-site spin-1/2 ring.
//!
//! Site `k` (1-based, as in the ring labels) is stored in bit `k - 1`; a set
//! bit marks a reversed spin. Basis states inside a [`Sector`] are ordered by
//! ascending integer value of their bit pattern.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ring. `binomial(24, 12)` is about 2.7M amplitudes.
pub const MAX_SITES: usize = 24;

/// Checks that `n` is an even ring size in `4..=MAX_SITES`.
pub fn check_size(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) || n > MAX_SITES {
        return Err(Error::InvalidSize(n));
    }
    Ok(())
}

/// A computational-basis configuration of `n` spins.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    bits: u32,
    n: u8,
}

impl BasisState {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_size(n)?;
        if u64::from(bits) >= 1u64 << n {
            return Err(Error::InvalidSector { n, r: bits.count_ones() as usize });
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Parses a ket label such as `"1000"`, where the first character is site 1.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.len();
        check_size(n)?;
        let mut bits = 0u32;
        for (i, c) in label.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::InvalidSize(n)),
            }
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Ket label with site 1 first.
    pub fn label(&self) -> String {
        (0..self.n()).map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn reversed(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Whether the spin on 1-based `site` is reversed.
    #[inline]
    pub fn is_reversed(&self, site: usize) -> bool {
        self.bits >> (site - 1) & 1 == 1
    }

    /// Global spin flip: complements all `n` bits.
    pub fn spin_flip(&self) -> Self {
        Self { bits: flip_bits(self.bits, self.n()), n: self.n }
    }

    /// Translation by two sites: the spin on site `i` moves to site `i + 2 (mod n)`.
    ///
    /// For `n = 4` this exchanges the dimers (1,2) and (3,4).
    pub fn pair_swap(&self) -> Self {
        Self { bits: translate_bits(self.bits, self.n(), 2), n: self.n }
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.label())
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub(crate) fn flip_bits(bits: u32, n: usize) -> u32 {
    !bits & full_mask(n)
}

/// Cyclic shift of a bit pattern towards higher sites by `shift`.
#[inline]
pub(crate) fn translate_bits(bits: u32, n: usize, shift: usize) -> u32 {
    let shift = shift % n;
    if shift == 0 {
        return bits;
    }
    ((bits << shift) | (bits >> (n - shift))) & full_mask(n)
}

/// Pascal triangle up to `MAX_SITES`.
#[derive(Clone)]
struct Binomials {
    table: Vec<[u64; MAX_SITES + 1]>,
}

impl Binomials {
    fn new() -> Self {
        let mut table = vec![[0u64; MAX_SITES + 1]; MAX_SITES + 1];
        for n in 0..=MAX_SITES {
            table[n][0] = 1;
            for k in 1..=n {
                table[n][k] = table[n - 1][k - 1] + if k < n { table[n - 1][k] } else { 0 };
            }
        }
        Self { table }
    }

    #[inline]
    fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.table[n][k]
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    Binomials::new().get(n, k)
}

/// Fixed-magnetization subspace: all states with exactly `r` reversed spins.
#[derive(Clone)]
pub struct Sector {
    n: usize,
    r: usize,
    states: Vec<u32>,
    binomials: Binomials,
}

impl fmt::Debug for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sector").field("n", &self.n).field("r", &self.r).field("dim", &self.dim()).finish()
    }
}

impl Sector {
    /// Enumerates all `binomial(n, r)` states with `r` set bits in ascending order.
    pub fn enumerate(n: usize, r: usize) -> Result<Self> {
        check_size(n)?;
        if r > n {
            return Err(Error::InvalidSector { n, r });
        }
        let binomials = Binomials::new();
        let dim = binomials.get(n, r) as usize;
        let mut states = Vec::with_capacity(dim);
        if r == 0 {
            states.push(0);
        } else {
            // Gosper's hack walks same-popcount patterns in increasing order.
            let limit = 1u64 << n;
            let mut v = (1u64 << r) - 1;
            while v < limit {
                states.push(v as u32);
                let t = v | (v - 1);
                v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            }
        }
        debug_assert_eq!(states.len(), dim);
        Ok(Self { n, r, states, binomials })
    }

    /// The zero-magnetization sector `r = n / 2`.
    pub fn half_filling(n: usize) -> Result<Self> {
        Self::enumerate(n, n / 2)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Raw bit patterns in basis order.
    #[inline]
    pub fn bit_patterns(&self) -> &[u32] {
        &self.states
    }

    pub fn state(&self, index: usize) -> BasisState {
        BasisState { bits: self.states[index], n: self.n as u8 }
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        self.states.iter().map(move |&bits| BasisState { bits, n: self.n as u8 })
    }

    /// Position of a bit pattern in the basis, computed from the
    /// combinatorial number system without a lookup table.
    #[inline]
    pub fn rank(&self, bits: u32) -> Option<usize> {
        if bits.count_ones() as usize != self.r || u64::from(bits) >> self.n != 0 {
            return None;
        }
        Some(self.rank_unchecked(bits))
    }

    /// Rank of a pattern already known to belong to this sector.
    #[inline]
    pub(crate) fn rank_unchecked(&self, mut bits: u32) -> usize {
        let mut rank = 0u64;
        let mut k = 1;
        while bits != 0 {
            let pos = bits.trailing_zeros() as usize;
            rank += self.binomials.get(pos, k);
            k += 1;
            bits &= bits - 1;
        }
        rank as usize
    }

    pub fn index_of(&self, state: BasisState) -> Option<usize> {
        if state.n() != self.n {
            return None;
        }
        self.rank(state.bits)
    }
}

/// Normalized two-term superposition `(|first> + sign |second>) / sqrt(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairVector {
    pub first: BasisState,
    pub second: BasisState,
    pub sign: f64,
}

impl PairVector {
    /// Coefficients of this vector over the basis of `sector`.
    pub fn to_coefficients(&self, sector: &Sector) -> Vec<f64> {
        let mut v = vec![0.0; sector.dim()];
        let a = std::f64::consts::FRAC_1_SQRT_2;
        v[sector.index_of(self.first).expect("state in sector")] += a;
        v[sector.index_of(self.second).expect("state in sector")] += self.sign * a;
        v
    }
}

/// N = 4 sector basis adapted to the dimer-exchange symmetry.
#[derive(Clone, Debug)]
pub struct SymmetrizedBasis4 {
    pub sector_r: usize,
    /// Symmetric combinations; pair-swap eigenvalue +1.
    pub plus_block: Vec<PairVector>,
    /// Antisymmetric combinations. Each is a pair-swap eigenvector, but
    /// `|0101> - |1010>` has eigenvalue +1 since both states are swap
    /// invariant. At r=2 the block sign is the spin-flip eigenvalue.
    pub minus_block: Vec<PairVector>,
}

impl SymmetrizedBasis4 {
    pub fn build(r: usize) -> Result<Self> {
        let pairs: &[(&str, &str)] = match r {
            1 => &[("1000", "0010"), ("0100", "0001")],
            2 => &[("1100", "0011"), ("1001", "0110"), ("0101", "1010")],
            _ => return Err(Error::InvalidSymmetrizedSector(r)),
        };
        let block = |sign: f64| -> Result<Vec<PairVector>> {
            pairs
                .iter()
                .map(|(a, b)| {
                    Ok(PairVector { first: BasisState::from_label(a)?, second: BasisState::from_label(b)?, sign })
                })
                .collect()
        };
        Ok(Self { sector_r: r, plus_block: block(1.0)?, minus_block: block(-1.0)? })
    }

    pub fn dim(&self) -> usize {
        self.plus_block.len() + self.minus_block.len()
    }
}
