//! Bigness criteria for minimal resolutions of degree-`d` surfaces in P³
//! with `ℓ` singular points of one A_n type.
//!
//! Two sufficient conditions are evaluated:
//!
//! - [`Criterion::LocalH1`]: `ℓ · h¹(x) > −s₂(X̃)/3!`.
//! - [`Criterion::SegreSum`]: `ℓ · (−s₂(x)/2) > −s₂(X̃)`.
//!
//! Both are strict. Exact equality is reported as [`Verdict::Boundary`] and
//! anything below as [`Verdict::Inconclusive`]; neither condition is used to
//! certify non-bigness.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::local_invariants::{h1_of, s2_local, SingularityClass};
use crate::{Error, Result};

/// `s₂ = c₁² − c₂ = −4d² + 10d` for a smooth degree-`d` surface in P³.
pub fn s2_smooth_hypersurface(d: u32) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be ≥ 1".to_string()));
    }
    let d = BigInt::from(d);
    Ok(BigRational::from_integer(
        -BigInt::from(4) * &d * &d + BigInt::from(10) * &d,
    ))
}

/// Number of A₂ points on the degree-`d` surfaces built from dessins
/// d'enfants (Labs):
///
/// ```text
/// d(d−1)/2 · ⌊d/3⌋ + c(d)/3 · (⌊(d−1)/2⌋ − ⌊d/3⌋),
/// c(d) = d(d−3)        if 3 | d
///        d(d−3) + 2    otherwise
/// ```
pub fn labs_count_a2(d: u32) -> Result<u64> {
    if d < 4 {
        return Err(Error::InvalidArgument(format!(
            "the A2 construction count needs d ≥ 4, got {d}"
        )));
    }
    let di = BigInt::from(d);
    let third = BigInt::from(d / 3);
    let half = BigInt::from((d - 1) / 2);
    let c = if d.is_multiple_of(3) {
        &di * (&di - 3)
    } else {
        &di * (&di - 3) + 2
    };
    let value = BigRational::new(&di * (&di - 1) * &third, BigInt::from(2))
        + BigRational::new(c * (half - &third), BigInt::from(3));
    if !value.is_integer() || value.is_negative() {
        return Err(Error::FormulaInterpretation {
            d,
            value: value.to_string(),
        });
    }
    value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::FormulaInterpretation {
            d,
            value: value.to_string(),
        })
}

/// Least non-negative integer `ℓ` with `ℓ · per_point > threshold`.
fn least_strictly_above(threshold: &BigRational, per_point: &BigRational) -> u64 {
    debug_assert!(per_point.is_positive());
    let bound = threshold / per_point;
    if bound.is_negative() {
        return 0;
    }
    let least: BigInt = bound.floor().to_integer() + 1;
    least.to_u64().expect("threshold fits in u64")
}

/// `−s₂(X̃)/3!`, the cubic growth that local `h¹` contributions must beat.
fn local_h1_target(d: u32) -> Result<BigRational> {
    Ok(-s2_smooth_hypersurface(d)? / BigRational::from_integer(6.into()))
}

/// Least `ℓ` with `ℓ · h¹(x) > −s₂(X̃)/3!`.
pub fn required_thm1(d: u32, sing: &SingularityClass) -> Result<u64> {
    let h1 = h1_of(sing)?;
    Ok(least_strictly_above(&local_h1_target(d)?, &h1))
}

/// Least `ℓ` with `ℓ · (−s₂(x)/2) > −s₂(X̃)`.
pub fn required_segre(d: u32, sing: &SingularityClass) -> Result<u64> {
    let per_point = -s2_local(sing) / BigRational::from_integer(2.into());
    Ok(least_strictly_above(
        &-s2_smooth_hypersurface(d)?,
        &per_point,
    ))
}

/// Which sufficient condition a verdict refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    /// `Σ h¹(x) > −s₂(X̃)/3!`.
    #[serde(rename = "thm1")]
    LocalH1,
    /// `−Σ s₂(x)/2 > −s₂(X̃)`.
    #[serde(rename = "segre")]
    SegreSum,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::LocalH1 => "thm1",
            Criterion::SegreSum => "segre",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Criterion::LocalH1),
            "segre" => Ok(Criterion::SegreSum),
            other => Err(Error::InvalidArgument(format!(
                "unknown criterion {other:?} (expected thm1 or segre)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Big,
    Boundary,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Big => "Big",
            Verdict::Boundary => "Boundary",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

fn verdict(have: &BigRational, need: &BigRational) -> Verdict {
    match have.cmp(need) {
        std::cmp::Ordering::Greater => Verdict::Big,
        std::cmp::Ordering::Equal => Verdict::Boundary,
        std::cmp::Ordering::Less => Verdict::Inconclusive,
    }
}

/// A degree-`d` surface with `available` singular points of type `sing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceBudget {
    pub d: u32,
    pub sing: SingularityClass,
    pub available: u64,
    pub s2_resolution: BigRational,
}

impl HypersurfaceBudget {
    pub fn new(d: u32, sing: SingularityClass, available: u64) -> Result<Self> {
        if d < 4 {
            return Err(Error::InvalidArgument(format!(
                "hypersurface budgets need d ≥ 4, got {d}"
            )));
        }
        Ok(HypersurfaceBudget {
            d,
            s2_resolution: s2_smooth_hypersurface(d)?,
            sing,
            available,
        })
    }

    /// A₂ budget with the construction count from [`labs_count_a2`].
    pub fn labs_a2(d: u32) -> Result<Self> {
        Self::new(d, SingularityClass::a(2)?, labs_count_a2(d)?)
    }

    pub fn verdict(&self, criterion: Criterion) -> Result<Verdict> {
        let l = BigRational::from_integer(self.available.into());
        match criterion {
            Criterion::LocalH1 => {
                let h1 = h1_of(&self.sing)?;
                Ok(verdict(
                    &(l * h1),
                    &(-&self.s2_resolution / BigRational::from_integer(6.into())),
                ))
            }
            Criterion::SegreSum => {
                let per_point = -s2_local(&self.sing) / BigRational::from_integer(2.into());
                Ok(verdict(&(l * per_point), &-&self.s2_resolution))
            }
        }
    }
}

/// Per-degree outcome of both criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub d: u32,
    pub available: u64,
    pub required_thm1: u64,
    pub required_segre: u64,
    pub verdict_thm1: Verdict,
    pub verdict_segre: Verdict,
}

impl DegreeReport {
    pub fn verdict(&self, criterion: Criterion) -> Verdict {
        match criterion {
            Criterion::LocalH1 => self.verdict_thm1,
            Criterion::SegreSum => self.verdict_segre,
        }
    }

    pub fn required(&self, criterion: Criterion) -> u64 {
        match criterion {
            Criterion::LocalH1 => self.required_thm1,
            Criterion::SegreSum => self.required_segre,
        }
    }
}

/// Where the number of available singular points per degree comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountSource {
    /// [`labs_count_a2`]; A₂ only.
    Labs,
    /// User-supplied `d → available`.
    Table(BTreeMap<u32, u64>),
}

impl CountSource {
    /// Reads a `d,available` CSV table.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            d: u32,
            available: u64,
        }
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.iter().ne(["d", "available"]) {
            return Err(Error::InvalidArgument(format!(
                "count table header must be d,available, found {}",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut table = BTreeMap::new();
        for row in rdr.deserialize::<Row>() {
            let row = row?;
            if let Some(prev) = table.insert(row.d, row.available) {
                if prev != row.available {
                    return Err(Error::InvalidArgument(format!(
                        "count table lists d={} twice with different values",
                        row.d
                    )));
                }
            }
        }
        Ok(CountSource::Table(table))
    }

    fn available(&self, d: u32, sing: &SingularityClass) -> Result<u64> {
        match self {
            CountSource::Labs if sing.n() != 2 => Err(Error::LabsRequiresA2(sing.n())),
            CountSource::Labs => labs_count_a2(d),
            CountSource::Table(t) => t.get(&d).copied().ok_or(Error::MissingDegrees(vec![d])),
        }
    }
}

/// Builds one [`DegreeReport`] per degree in `d_min..=d_max`.
pub fn degree_report(
    d_min: u32,
    d_max: u32,
    sing: &SingularityClass,
    source: &CountSource,
) -> Result<Vec<DegreeReport>> {
    if d_min < 4 || d_max < d_min {
        return Err(Error::InvalidArgument(format!(
            "degree range must satisfy 4 ≤ d_min ≤ d_max, got {d_min}..={d_max}"
        )));
    }
    if let CountSource::Table(t) = source {
        let missing: Vec<u32> = (d_min..=d_max).filter(|d| !t.contains_key(d)).collect();
        if !missing.is_empty() {
            return Err(Error::MissingDegrees(missing));
        }
    }
    (d_min..=d_max)
        .into_par_iter()
        .map(|d| {
            let budget = HypersurfaceBudget::new(d, sing.clone(), source.available(d, sing)?)?;
            Ok(DegreeReport {
                d,
                available: budget.available,
                required_thm1: required_thm1(d, sing)?,
                required_segre: required_segre(d, sing)?,
                verdict_thm1: budget.verdict(Criterion::LocalH1)?,
                verdict_segre: budget.verdict(Criterion::SegreSum)?,
            })
        })
        .collect()
}

/// Smallest degree with a [`Verdict::Big`] under `criterion`.
pub fn first_big(reports: &[DegreeReport], criterion: Criterion) -> Option<u32> {
    reports
        .iter()
        .find(|r| r.verdict(criterion) == Verdict::Big)
        .map(|r| r.d)
}
