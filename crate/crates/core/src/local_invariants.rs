//! Local invariants of A_n germs.
//!
//! For A₂ the quotient `H⁰(X̃∖E, S^mΩ¹) / H⁰(X̃, S^mΩ¹)` has dimension
//!
//! ```text
//! Q(m) = Σ_{i=0}^{2m} Σ_{0≤k≤m+i, k≡−(m+i) mod 3} h_z(k,i,m) − dim G(k,i,m)
//! ```
//!
//! where `G(k,i,m)` is the intersection of the pulled-back holomorphic
//! u-block with the holomorphic z-block. `dim G` is available in closed form
//! ([`dim_g_closed`]) and by exact rank computation ([`dim_g_oracle`]).
//! `h⁰ = lim Q(m)/m³`, and `h¹ = −s₂/3! − h⁰`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg_exact::{intersect_rowspan_coords, RationalMatrix};
use crate::monomials::{
    block_u, block_z, blocks_of_order, h_u, h_z, pullback_with, valid_blocks, BlockIndex,
    PullbackCoeffs,
};
use crate::{Error, Result};

/// Period of `Q(m)` as a quasi-polynomial in `m`. Finite differences taken
/// with this step see an exact cubic.
pub const QUASI_PERIOD: u32 = 6;

/// A_n germ data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    n: u32,
    h0: Option<BigRational>,
}

impl SingularityClass {
    /// The A_n germ, with its `h⁰` constant attached when known (n = 1, 2).
    pub fn a(n: u32) -> Result<Self> {
        let h0 = match n {
            0 => return Err(Error::InvalidArgument("A_n requires n ≥ 1".to_string())),
            1 => Some(ratio(11, 108)),
            2 => Some(ratio(29, 216)),
            _ => None,
        };
        Ok(SingularityClass { n, h0 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Euler number of a chain of `n` rational curves.
    pub fn euler_exceptional(&self) -> i64 {
        self.n as i64 + 1
    }

    pub fn group_order(&self) -> i64 {
        self.n as i64 + 1
    }

    pub fn h0(&self) -> Option<&BigRational> {
        self.h0.as_ref()
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.n)
    }
}

impl FromStr for SingularityClass {
    type Err = Error;

    /// Parses `a2`, `A2`, `a_2`.
    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix(['a', 'A'])
            .map(|rest| rest.trim_start_matches('_'))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("expected A_n singularity, got {s:?}"))
            })?;
        let n = digits
            .parse::<u32>()
            .map_err(|_| Error::InvalidArgument(format!("expected A_n singularity, got {s:?}")))?;
        SingularityClass::a(n)
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// How `dim G` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed")]
    ClosedForm,
    #[serde(rename = "oracle")]
    RankOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::RankOracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::ClosedForm),
            "oracle" => Ok(Method::RankOracle),
            other => Err(Error::InvalidArgument(format!(
                "unknown method {other:?} (expected closed or oracle)"
            ))),
        }
    }
}

/// One exact value `Q(m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSample {
    pub m: u32,
    pub q: u64,
    pub method: Method,
}

/// `max(h_z + h_u − (m+1), 0)`.
pub fn dim_g_closed(b: BlockIndex) -> u32 {
    (h_z(b) + h_u(b)).saturating_sub(b.m() + 1)
}

/// `dim G` by exact rank computation on the pulled-back u-block.
pub fn dim_g_oracle(b: BlockIndex) -> u32 {
    dim_g_oracle_with(b, &PullbackCoeffs::new(b.m())).expect("table matches block degree")
}

/// [`dim_g_oracle`] with a caller-supplied coefficient table.
///
/// Row `l_u` of the block matrix is the coefficient vector, over the
/// members of `block_z(b)`, of the pullback of the `l_u`-th member of
/// `block_u(b)`. Rows are restricted to holomorphic u-members and the
/// result is the dimension of their span inside the coordinate subspace of
/// holomorphic z-members.
pub fn dim_g_oracle_with(b: BlockIndex, coeffs: &PullbackCoeffs) -> Result<u32> {
    let z_members = block_z(b);
    let n = z_members.len();
    let mut rows = Vec::new();
    for u in block_u(b).iter().filter(|u| u.is_holomorphic()) {
        let mut row = vec![BigInt::zero(); n];
        for (c, term) in pullback_with(u, coeffs)? {
            // Every term lands in the z-block; its position is its dz₂ exponent.
            let l = term.m2 as usize;
            debug_assert_eq!(z_members[l], term);
            row[l] += c;
        }
        rows.push(row);
    }
    let holo_cols: BTreeSet<usize> = z_members
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_holomorphic())
        .map(|(l, _)| l)
        .collect();
    let m = RationalMatrix::from_integer_rows(n, &rows)?;
    Ok(intersect_rowspan_coords(&m, &holo_cols)? as u32)
}

/// `min(m+1 − h_u, h_z)`, equal to `h_z − dim G`.
pub fn block_defect(b: BlockIndex) -> u32 {
    (b.m() + 1 - h_u(b)).min(h_z(b))
}

/// `Q(m)` summed over `0 ≤ i ≤ 2m`.
pub fn q_of_m(m: u32, method: Method) -> Result<QSample> {
    q_of_m_with(m, method, 2 * m, None)
}

/// `Q(m)` by the rank oracle with a caller-supplied coefficient table.
pub fn q_of_m_oracle_with(m: u32, coeffs: &PullbackCoeffs) -> Result<QSample> {
    q_of_m_with(m, Method::RankOracle, 2 * m, Some(coeffs))
}

fn q_of_m_with(
    m: u32,
    method: Method,
    i_max: u32,
    coeffs: Option<&PullbackCoeffs>,
) -> Result<QSample> {
    if m == 0 {
        return Err(Error::InvalidArgument("Q(m) requires m ≥ 1".to_string()));
    }
    let q = match method {
        Method::ClosedForm => (0..=i_max)
            .into_par_iter()
            .map(|i| {
                blocks_of_order(m, i)
                    .map(|b| block_defect(b) as u64)
                    .sum::<u64>()
            })
            .sum(),
        Method::RankOracle => {
            let owned;
            let coeffs = match coeffs {
                Some(c) => c,
                None => {
                    owned = PullbackCoeffs::new(m);
                    &owned
                }
            };
            let blocks: Vec<BlockIndex> = valid_blocks(m, i_max).collect();
            blocks
                .par_iter()
                .map(|&b| -> Result<u64> {
                    let dim_g = dim_g_oracle_with(b, coeffs)?;
                    Ok(h_z(b).saturating_sub(dim_g) as u64)
                })
                .collect::<Result<Vec<u64>>>()?
                .into_iter()
                .sum()
        }
    };
    Ok(QSample { m, q, method })
}

/// Cubic leading coefficient of `Q` from a third finite difference with
/// stride `step` starting at `m0`:
/// `[Q(m0+3s) − 3Q(m0+2s) + 3Q(m0+s) − Q(m0)] / (6 s³)`.
///
/// Exact for any quasi-polynomial whose period divides `step`; use
/// [`QUASI_PERIOD`] for `Q(m)`.
pub fn leading_coeff(samples: &[QSample], m0: u32, step: u32) -> Result<BigRational> {
    if m0 == 0 || step == 0 {
        return Err(Error::InvalidArgument(
            "leading coefficient needs m0 ≥ 1 and step ≥ 1".to_string(),
        ));
    }
    let lookup = |m: u32| -> Result<&QSample> {
        samples
            .iter()
            .find(|s| s.m == m)
            .ok_or(Error::MissingSample(m))
    };
    let picked = [
        lookup(m0)?,
        lookup(m0 + step)?,
        lookup(m0 + 2 * step)?,
        lookup(m0 + 3 * step)?,
    ];
    if let Some(other) = picked.iter().find(|s| s.method != picked[0].method) {
        return Err(Error::MixedMethods(
            picked[0].method.to_string(),
            other.method.to_string(),
        ));
    }
    let v: Vec<BigInt> = picked.iter().map(|s| BigInt::from(s.q)).collect();
    let diff = &v[3] - &v[2] * 3 + &v[1] * 3 - &v[0];
    let s = BigInt::from(step);
    Ok(BigRational::new(diff, BigInt::from(6) * &s * &s * &s))
}

/// Large-`m` density of [`block_defect`] at `i = x·m`, `k = y·m`.
pub fn defect_density(x: f64, y: f64) -> f64 {
    let hu = 1f64
        .min((x + y + 1.0) / 3.0)
        .min(x)
        .min((2.0 * x + 2.0 - y) / 3.0);
    let hz = 1f64.min(y).min(x).min(1.0 + x - y);
    (1.0 - hu).min(hz)
}

/// Midpoint-rule estimate of
/// `(1/3) ∫₀² ∫₀^{1+x} defect_density(x, y) dy dx`, the continuum limit of
/// `Q(m)/m³`.
///
/// The grid is uniform on `[0, 2] × [0, 3]` with `samples_per_axis` points
/// per axis; points with `y > 1 + x` are outside the domain. The density
/// vanishes on the slanted edge so the cut costs no accuracy.
pub fn limit_integral(samples_per_axis: u32) -> Result<f64> {
    if samples_per_axis < 100 {
        return Err(Error::InvalidArgument(format!(
            "limit integral needs at least 100 samples per axis, got {samples_per_axis}"
        )));
    }
    let n = samples_per_axis as usize;
    let hx = 2.0 / n as f64;
    let hy = 3.0 / n as f64;
    // Per-row sums are collected then added in order, so the result does
    // not depend on the thread count.
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|ix| {
            let x = (ix as f64 + 0.5) * hx;
            (0..n)
                .map(|iy| (iy as f64 + 0.5) * hy)
                .filter(|&y| y <= 1.0 + x)
                .map(|y| defect_density(x, y))
                .sum::<f64>()
        })
        .collect();
    Ok(rows.iter().sum::<f64>() * hx * hy / 3.0)
}

/// Local second Segre number `−(e(E) − 1/|G|)`.
pub fn s2_local(s: &SingularityClass) -> BigRational {
    -(BigRational::from_integer(s.euler_exceptional().into()) - ratio(1, s.group_order()))
}

/// `h¹ = −s₂/3! − h⁰`.
pub fn h1_of(s: &SingularityClass) -> Result<BigRational> {
    let h0 = s.h0().ok_or(Error::UnsupportedSingularity(s.n()))?;
    Ok(-s2_local(s) / BigRational::from_integer(6.into()) - h0)
}

/// `−s₂/(2·3!)`, the per-point share of the Segre-sum criterion.
pub fn segre_share(s: &SingularityClass) -> BigRational {
    -s2_local(s) / BigRational::from_integer(12.into())
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(k: i64, i: u32, m: u32) -> BlockIndex {
        BlockIndex::new(k, i, m).unwrap()
    }

    #[test]
    fn singularity_parsing() {
        assert_eq!("a2".parse::<SingularityClass>().unwrap().n(), 2);
        assert_eq!("A_5".parse::<SingularityClass>().unwrap().n(), 5);
        assert!("d4".parse::<SingularityClass>().is_err());
        assert!("a0".parse::<SingularityClass>().is_err());
        let a3 = SingularityClass::a(3).unwrap();
        assert_eq!(a3.euler_exceptional(), 4);
        assert_eq!(a3.group_order(), 4);
        assert!(a3.h0().is_none());
    }

    #[test]
    fn dim_g_closed_examples() {
        assert_eq!(dim_g_closed(b(1, 1, 1)), 2);
        assert_eq!(dim_g_closed(b(1, 3, 2)), 2);
        assert_eq!(dim_g_closed(b(0, 0, 3)), 0);
    }

    #[test]
    fn dim_g_oracle_examples() {
        assert_eq!(dim_g_oracle(b(1, 1, 1)), 2);
        assert_eq!(dim_g_oracle(b(0, 0, 3)), dim_g_closed(b(0, 0, 3)));
        assert_eq!(dim_g_oracle(b(1, 3, 2)), 2);
    }

    #[test]
    fn block_defect_examples() {
        assert_eq!(block_defect(b(1, 1, 1)), 0);
        assert_eq!(block_defect(b(1, 0, 2)), 1);
        for m in 1..=10 {
            for blk in valid_blocks(m, 3 * m).filter(|x| x.i() >= 2 * m) {
                assert_eq!(block_defect(blk), 0, "{blk}");
            }
        }
    }

    #[test]
    fn defect_identity() {
        for m in 1..=20 {
            for blk in valid_blocks(m, 3 * m) {
                assert_eq!(block_defect(blk), h_z(blk) - dim_g_closed(blk), "{blk}");
            }
        }
    }

    #[test]
    fn small_q_values() {
        for method in [Method::ClosedForm, Method::RankOracle] {
            assert_eq!(q_of_m(1, method).unwrap().q, 0);
            assert_eq!(q_of_m(2, method).unwrap().q, 3);
        }
        assert!(q_of_m(0, Method::ClosedForm).is_err());
    }

    #[test]
    fn tail_beyond_twice_degree_vanishes() {
        for m in 1..=15 {
            let short = q_of_m_with(m, Method::ClosedForm, 2 * m, None).unwrap();
            let long = q_of_m_with(m, Method::ClosedForm, 3 * m, None).unwrap();
            assert_eq!(short.q, long.q, "m={m}");
        }
        for m in 1..=6 {
            let long = q_of_m_with(m, Method::RankOracle, 3 * m, None).unwrap();
            assert_eq!(long.q, q_of_m(m, Method::ClosedForm).unwrap().q, "m={m}");
        }
    }

    #[test]
    fn leading_coeff_of_exact_cubic() {
        let c = ratio(7, 3);
        let samples: Vec<QSample> = (1..=40u32)
            .map(|m| QSample {
                m,
                q: (BigRational::from_integer((m as i64).pow(3).into())
                    * &c
                    * BigRational::from_integer(3.into()))
                .to_integer()
                .to_u64()
                .unwrap(),
                method: Method::ClosedForm,
            })
            .collect();
        // samples hold 3·c·m³ = 7m³
        assert_eq!(leading_coeff(&samples, 5, 3).unwrap(), ratio(7, 1));
        assert_eq!(leading_coeff(&samples, 2, 6).unwrap(), ratio(7, 1));
        let constant: Vec<QSample> = (1..=20)
            .map(|m| QSample {
                m,
                q: 42,
                method: Method::ClosedForm,
            })
            .collect();
        assert!(leading_coeff(&constant, 1, 3).unwrap().is_zero());
    }

    #[test]
    fn leading_coeff_errors() {
        let samples: Vec<QSample> = (1..=10)
            .map(|m| QSample {
                m,
                q: 0,
                method: Method::ClosedForm,
            })
            .collect();
        assert!(matches!(
            leading_coeff(&samples, 2, 3),
            Err(Error::MissingSample(11))
        ));
        let mut mixed = samples.clone();
        mixed[3].method = Method::RankOracle;
        assert!(matches!(
            leading_coeff(&mixed, 1, 1),
            Err(Error::MixedMethods(_, _))
        ));
    }

    #[test]
    fn density_boundary_and_sign() {
        assert_eq!(defect_density(2.0, 1.0), 0.0);
        for ix in 0..=40 {
            for iy in 0..=60 {
                let (x, y) = (ix as f64 / 20.0, iy as f64 / 20.0);
                if y <= 1.0 + x {
                    assert!(defect_density(x, y) >= 0.0, "({x}, {y})");
                }
            }
        }
        assert!(limit_integral(99).is_err());
    }

    #[test]
    fn germ_invariants() {
        let a1 = SingularityClass::a(1).unwrap();
        let a2 = SingularityClass::a(2).unwrap();
        let a5 = SingularityClass::a(5).unwrap();
        assert_eq!(s2_local(&a2), ratio(-8, 3));
        assert_eq!(s2_local(&a1), ratio(-3, 2));
        assert_eq!(s2_local(&a5), ratio(-35, 6));
        assert_eq!(h1_of(&a2).unwrap(), ratio(67, 216));
        assert_eq!(h1_of(&a1).unwrap(), ratio(4, 27));
        assert_eq!(segre_share(&a2), ratio(48, 216));
        assert!(matches!(h1_of(&a5), Err(Error::UnsupportedSingularity(5))));
        for s in [&a1, &a2] {
            assert!(s.h0().unwrap() <= &h1_of(s).unwrap());
            assert_eq!(
                h1_of(s).unwrap() + s.h0().unwrap(),
                -s2_local(s) / BigRational::from_integer(6.into())
            );
        }
    }
}
