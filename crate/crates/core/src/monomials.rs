//! Monomial calculus on the A₂ smoothing chart.
//!
//! A monomial `z₁^i₁ z₂^i₂ dz₁^m₁ dz₂^m₂` is described by its full type
//! ([`FType`]). The cyclic group Z₃ acts with weights (1, 2), and the
//! invariant monomials of order `i` and degree `m` split into blocks
//! `B(k, i, m)` of `m + 1` members each. The rational chart map
//! `u₁ = z₁²/z₂`, `u₂ = z₂²/z₁` sends the u-block with parameter
//! `k' = (i + m + k)/3` into the span of the z-block with parameter `k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::linalg_exact::RationalMatrix;
use crate::{Error, Result};

/// Coordinate system a monomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// Coordinates on the smoothing chart C².
    Z,
    /// Coordinates on the resolution chart U¹.
    U,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::Z => "z",
            Frame::U => "u",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exponents `(i₁, i₂, m₁, m₂)` of a possibly meromorphic monomial
/// differential. Function exponents may be negative; differential
/// exponents may not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FType {
    pub i1: i64,
    pub i2: i64,
    pub m1: u32,
    pub m2: u32,
    pub frame: Frame,
}

impl FType {
    pub const fn z(i1: i64, i2: i64, m1: u32, m2: u32) -> Self {
        FType {
            i1,
            i2,
            m1,
            m2,
            frame: Frame::Z,
        }
    }

    pub const fn u(i1: i64, i2: i64, m1: u32, m2: u32) -> Self {
        FType {
            i1,
            i2,
            m1,
            m2,
            frame: Frame::U,
        }
    }

    /// `i₁ + i₂`.
    pub fn order(&self) -> i64 {
        self.i1 + self.i2
    }

    /// `m₁ + m₂`.
    pub fn degree(&self) -> u32 {
        self.m1 + self.m2
    }

    pub fn is_holomorphic(&self) -> bool {
        self.i1 >= 0 && self.i2 >= 0
    }

    pub fn exponents(&self) -> [i64; 4] {
        [self.i1, self.i2, self.m1 as i64, self.m2 as i64]
    }
}

impl fmt::Display for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})_{}",
            self.i1, self.i2, self.m1, self.m2, self.frame
        )
    }
}

/// Residue of a z-monomial under the weight-(1, 2) Z₃ action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight(u8);

impl Weight {
    pub fn residue(self) -> u8 {
        self.0
    }

    pub fn is_invariant(self) -> bool {
        self.0 == 0
    }
}

/// `(i₁ + 2i₂ + m₁ + 2m₂) mod 3`. Only defined on the smoothing chart.
pub fn weight(f: &FType) -> Result<Weight> {
    if f.frame != Frame::Z {
        return Err(Error::WrongFrame {
            expected: "z",
            got: f.to_string(),
        });
    }
    let w = f.i1 + 2 * f.i2 + f.m1 as i64 + 2 * f.m2 as i64;
    Ok(Weight(w.rem_euclid(3) as u8))
}

/// Index `(k, i, m)` of a block collection. Construction enforces
/// `m ≥ 1` and `k ≡ -(m+i) mod 3`; `k` outside `[0, m+i]` is allowed and
/// simply has no holomorphic z-members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex {
    k: i64,
    i: u32,
    m: u32,
}

impl BlockIndex {
    pub fn new(k: i64, i: u32, m: u32) -> Result<Self> {
        if m == 0 || (k + i as i64 + m as i64).rem_euclid(3) != 0 {
            return Err(Error::InvalidBlock { k, i, m });
        }
        Ok(BlockIndex { k, i, m })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `k' = (i + m + k)/3`, the parameter of the matching u-block.
    pub fn k_prime(&self) -> i64 {
        (self.i as i64 + self.m as i64 + self.k).div_euclid(3)
    }

    /// True when `0 ≤ k ≤ m + i`.
    pub fn in_range(&self) -> bool {
        self.k >= 0 && self.k <= self.m as i64 + self.i as i64
    }
}

impl fmt::Display for BlockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, i={}, m={})", self.k, self.i, self.m)
    }
}

/// All blocks of degree `m` with `0 ≤ i ≤ i_max` and `0 ≤ k ≤ m + i`,
/// ordered by `i` then `k`.
pub fn valid_blocks(m: u32, i_max: u32) -> impl Iterator<Item = BlockIndex> {
    (0..=i_max).flat_map(move |i| blocks_of_order(m, i))
}

/// Blocks of degree `m` and order `i` with `0 ≤ k ≤ m + i`, by increasing `k`.
pub fn blocks_of_order(m: u32, i: u32) -> impl Iterator<Item = BlockIndex> {
    let top = (m + i) as i64;
    let first = (-top).rem_euclid(3);
    (first..=top)
        .step_by(3)
        .map(move |k| BlockIndex { k, i, m })
}

fn collection(shift: i64, i: u32, m: u32, frame: Frame) -> Vec<FType> {
    let (i, m_i) = (i as i64, m as i64);
    (0..=m)
        .map(|l| {
            let li = l as i64;
            FType {
                i1: shift - m_i + li,
                i2: i + m_i - shift - li,
                m1: m - l,
                m2: l,
                frame,
            }
        })
        .collect()
}

/// `{(k−m+l, i+m−k−l, m−l, l)_z}` for `l = 0..=m`.
pub fn block_z(b: BlockIndex) -> Vec<FType> {
    collection(b.k, b.i, b.m, Frame::Z)
}

/// `{(k'−m+l, i+m−k'−l, m−l, l)_u}` for `l = 0..=m`.
pub fn block_u(b: BlockIndex) -> Vec<FType> {
    collection(b.k_prime(), b.i, b.m, Frame::U)
}

/// Number of holomorphic members of [`block_z`].
pub fn h_z(b: BlockIndex) -> u32 {
    if !b.in_range() {
        return 0;
    }
    let (k, i, m) = (b.k, b.i as i64, b.m as i64);
    (m + 1).min(k + 1).min(i + 1).min(m - k + i + 1) as u32
}

/// Number of holomorphic members of [`block_u`].
pub fn h_u(b: BlockIndex) -> u32 {
    let (k, i, m) = (b.k, b.i as i64, b.m as i64);
    let count = (m + 1)
        .min((k + i + m).div_euclid(3) + 1)
        .min(i + 1)
        .min((2 * (i + m) - k).div_euclid(3) + 1);
    count.max(0) as u32
}

/// Integer table `c[q][l]` defined by
/// `(2x − y)^q (−x + 2y)^(m−q) = Σ_l c[q][l] x^(m−l) y^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackCoeffs {
    m: u32,
    rows: Vec<Vec<BigInt>>,
}

impl PullbackCoeffs {
    pub fn new(m: u32) -> Self {
        let rows = (0..=m)
            .into_par_iter()
            .map(|q| {
                // Homogeneous polynomials in (x, y), indexed by the power of y.
                let mut poly = vec![BigInt::from(1)];
                for _ in 0..q {
                    poly = mul_linear(&poly, 2, -1);
                }
                for _ in q..m {
                    poly = mul_linear(&poly, -1, 2);
                }
                poly
            })
            .collect();
        PullbackCoeffs { m, rows }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn get(&self, q: u32, l: u32) -> &BigInt {
        &self.rows[q as usize][l as usize]
    }

    pub fn row(&self, q: u32) -> &[BigInt] {
        &self.rows[q as usize]
    }

    /// Overwrites one entry. Used to check that verification catches a
    /// corrupt table.
    pub fn set(&mut self, q: u32, l: u32, value: BigInt) {
        self.rows[q as usize][l as usize] = value;
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let entries = self
            .rows
            .iter()
            .flatten()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let n = self.m as usize + 1;
        RationalMatrix::new(n, n, entries).expect("square coefficient table")
    }
}

/// Multiplies a homogeneous polynomial by `(a·x + b·y)`.
fn mul_linear(poly: &[BigInt], a: i64, b: i64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); poly.len() + 1];
    for (l, c) in poly.iter().enumerate() {
        out[l] += c * a;
        out[l + 1] += c * b;
    }
    out
}

/// The `(m+1)×(m+1)` matrix `[c_ql]`, rows indexed by `q`.
pub fn pullback_coeffs(m: u32) -> RationalMatrix {
    PullbackCoeffs::new(m).to_matrix()
}

/// Pulls a u-monomial back to the smoothing chart.
///
/// For `(p, i−p, q, m−q)_u` returns the `m + 1` terms
/// `c[q][l] · (3(p+q)−(i+2m)+l, −3(p+q)+2(i+m)−l, m−l, l)_z`, ordered by `l`.
/// Zero coefficients are kept so the output always has length `m + 1`.
pub fn pullback_monomial(f: &FType) -> Result<Vec<(BigInt, FType)>> {
    let coeffs = PullbackCoeffs::new(f.degree());
    pullback_with(f, &coeffs)
}

/// [`pullback_monomial`] with a caller-supplied coefficient table.
pub fn pullback_with(f: &FType, coeffs: &PullbackCoeffs) -> Result<Vec<(BigInt, FType)>> {
    if f.frame != Frame::U {
        return Err(Error::WrongFrame {
            expected: "u",
            got: f.to_string(),
        });
    }
    let m = f.degree();
    if m == 0 {
        return Err(Error::DegreeZero(f.to_string()));
    }
    if coeffs.degree() != m {
        return Err(Error::CoeffDegreeMismatch {
            table: coeffs.degree(),
            block: m,
        });
    }
    let (p, q, i, m_i) = (f.i1, f.m1, f.order(), m as i64);
    let base = 3 * (p + q as i64);
    Ok((0..=m)
        .map(|l| {
            let li = l as i64;
            let term = FType::z(
                base - (i + 2 * m_i) + li,
                -base + 2 * (i + m_i) - li,
                m - l,
                l,
            );
            (coeffs.get(q, l).clone(), term)
        })
        .collect())
}
