use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use symdiff_core::criterion::{degree_report, first_big, CountSource, Criterion, DegreeReport};
use symdiff_core::local_invariants::{
    dim_g_closed, dim_g_oracle_with, h1_of, leading_coeff, q_of_m, s2_local, segre_share, to_f64,
    Method, QSample, SingularityClass,
};
use symdiff_core::monomials::{
    pullback_monomial, valid_blocks, weight, BlockIndex, FType, PullbackCoeffs,
};
use symdiff_core::sweep_cache::QCache;

use crate::output::{formula, json, monomial_text, ratio_text, Format, Rat};
use crate::Failure;

/// Largest degree the oracle sweep runs without `--allow-expensive`.
pub const ORACLE_COST_GUARD: u32 = 40;
/// Largest pullback degree whose coefficients fit a JSON integer.
pub const PULLBACK_MAX_DEGREE: u32 = 39;

#[derive(Serialize)]
struct InvariantsReport {
    singularity: String,
    n: u32,
    euler_exceptional: i64,
    group_order: i64,
    s2: Rat,
    h0: Rat,
    h1: Rat,
    segre_share: Rat,
}

pub fn invariants(sing: &SingularityClass, format: Format) -> Result<String, Failure> {
    let s2 = s2_local(sing);
    let h1 = h1_of(sing)?;
    let h0 = sing.h0().expect("h1 implies h0").clone();
    let share = segre_share(sing);
    let rows: [(&str, &BigRational); 4] = [
        ("s2", &s2),
        ("h0", &h0),
        ("h1", &h1),
        ("segre_share", &share),
    ];
    Ok(match format {
        Format::Json => json(&InvariantsReport {
            singularity: sing.to_string(),
            n: sing.n(),
            euler_exceptional: sing.euler_exceptional(),
            group_order: sing.group_order(),
            s2: (&s2).into(),
            h0: (&h0).into(),
            h1: (&h1).into(),
            segre_share: (&share).into(),
        }),
        Format::Csv => {
            let mut out = String::from("quantity,num,den,decimal\n");
            for (name, r) in rows {
                let _ = writeln!(out, "{name},{},{},{}", r.numer(), r.denom(), to_f64(r));
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "{sing} germ: e(E) = {}, |G| = {}\n",
                sing.euler_exceptional(),
                sing.group_order()
            );
            let labels = ["s2(x,X)", "h0(x)", "h1(x)", "-s2/(2*3!)"];
            for (label, (_, r)) in labels.iter().zip(rows) {
                let _ = writeln!(
                    out,
                    "  {label:<12} = {:<10} ({:.8})",
                    ratio_text(r),
                    to_f64(r)
                );
            }
            out
        }
    })
}

pub struct H0Args {
    pub m_max: u32,
    pub step: u32,
    pub method: Method,
    pub cache: Option<PathBuf>,
    pub revalidate: bool,
    pub allow_expensive: bool,
}

#[derive(Serialize)]
struct H0Row {
    m: u32,
    q: u64,
    q_over_m3: f64,
}

#[derive(Serialize)]
struct H0Estimate {
    m0: u32,
    step: u32,
    value: Rat,
    target: Rat,
    abs_gap: f64,
}

#[derive(Serialize)]
struct H0Report {
    method: Method,
    m_max: u32,
    step: u32,
    rows: Vec<H0Row>,
    estimate: Option<H0Estimate>,
}

pub fn h0(args: &H0Args, format: Format) -> Result<String, Failure> {
    if args.m_max < 12 {
        return Err(Failure::Unsupported(format!(
            "--m-max must be at least 12, got {}",
            args.m_max
        )));
    }
    if args.step == 0 {
        return Err(Failure::Unsupported("--step must be at least 1".into()));
    }
    if args.method == Method::RankOracle && args.m_max > ORACLE_COST_GUARD && !args.allow_expensive
    {
        return Err(Failure::Unsupported(format!(
            "the rank oracle is limited to --m-max {ORACLE_COST_GUARD} \
             (pass --allow-expensive to override)"
        )));
    }

    let mut cache = args.cache.as_ref().map(QCache::open).transpose()?;
    let pending: Vec<u32> = (1..=args.m_max)
        .filter(|&m| {
            args.revalidate || cache.as_ref().and_then(|c| c.get(m, args.method)).is_none()
        })
        .collect();
    let computed: Vec<QSample> = pending
        .par_iter()
        .map(|&m| q_of_m(m, args.method))
        .collect::<Result<_, _>>()?;
    let mut samples: Vec<QSample> = (1..=args.m_max)
        .filter_map(|m| cache.as_ref().and_then(|c| c.get(m, args.method)))
        .filter(|s| !pending.contains(&s.m))
        .chain(computed.iter().copied())
        .collect();
    samples.sort_by_key(|s| s.m);
    if let Some(cache) = cache.as_mut() {
        for s in &computed {
            cache.record(*s)?;
        }
    }

    let target = BigRational::new(29.into(), 216.into());
    let span = 3 * args.step;
    let estimate = if args.m_max > span {
        let m0 = args.m_max - span;
        let value = leading_coeff(&samples, m0, args.step)?;
        let gap = (&value - &target).abs();
        Some(H0Estimate {
            m0,
            step: args.step,
            value: (&value).into(),
            target: (&target).into(),
            abs_gap: to_f64(&gap),
        })
    } else {
        None
    };

    let rows: Vec<H0Row> = samples
        .iter()
        .map(|s| H0Row {
            m: s.m,
            q: s.q,
            q_over_m3: s.q as f64 / (s.m as f64).powi(3),
        })
        .collect();

    Ok(match format {
        Format::Json => json(&H0Report {
            method: args.method,
            m_max: args.m_max,
            step: args.step,
            rows,
            estimate,
        }),
        Format::Csv => {
            let mut out = String::from("m,q,method\n");
            for s in &samples {
                let _ = writeln!(out, "{},{},{}", s.m, s.q, s.method);
            }
            out
        }
        Format::Table => {
            let mut out = format!("{:>6} {:>14} {:>12}\n", "m", "Q(m)", "Q(m)/m^3");
            for r in &rows {
                let _ = writeln!(out, "{:>6} {:>14} {:>12.8}", r.m, r.q, r.q_over_m3);
            }
            match &estimate {
                Some(e) => {
                    let _ = writeln!(
                        out,
                        "leading coefficient (stride {}, m0 = {}): {}/{} = {:.8}, |gap to 29/216| = {:.3e}",
                        e.step, e.m0, e.value.num, e.value.den, e.value.decimal, e.abs_gap
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "leading coefficient: n/a (needs --m-max > {span} at stride {})",
                        args.step
                    );
                }
            }
            out
        }
    })
}

#[derive(Serialize)]
struct BlockCheck {
    k: i64,
    i: u32,
    m: u32,
    closed: u32,
    oracle: u32,
}

#[derive(Serialize)]
struct VerifyReport {
    m_max: u32,
    blocks_checked: usize,
    passed: bool,
    mismatches: Vec<BlockCheck>,
}

/// Zeroes row `q` of the degree-`m` coefficient table before verifying.
#[derive(Clone, Copy, Debug)]
pub struct Fault {
    pub m: u32,
    pub q: u32,
}

/// Returns the rendered report and whether every block agreed.
pub fn verify_dimg(
    m_max: u32,
    fault: Option<Fault>,
    format: Format,
) -> Result<(String, bool), Failure> {
    if !(1..=20).contains(&m_max) {
        return Err(Failure::Unsupported(format!(
            "--m-max must be between 1 and 20, got {m_max}"
        )));
    }
    let checks: Vec<BlockCheck> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut coeffs = PullbackCoeffs::new(m);
            if let Some(f) = fault.filter(|f| f.m == m && f.q <= m) {
                for l in 0..=m {
                    coeffs.set(f.q, l, BigInt::from(0));
                }
            }
            let blocks: Vec<BlockIndex> = valid_blocks(m, 2 * m).collect();
            blocks
                .par_iter()
                .map(|&b| {
                    Ok(BlockCheck {
                        k: b.k(),
                        i: b.i(),
                        m: b.m(),
                        closed: dim_g_closed(b),
                        oracle: dim_g_oracle_with(b, &coeffs)?,
                    })
                })
                .collect::<Result<Vec<_>, symdiff_core::Error>>()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let total = checks.len();
    let passed = checks.iter().all(|c| c.closed == c.oracle);

    let out = match format {
        Format::Csv => {
            let mut out = String::from("k,i,m,closed,oracle\n");
            for c in &checks {
                let _ = writeln!(out, "{},{},{},{},{}", c.k, c.i, c.m, c.closed, c.oracle);
            }
            out
        }
        Format::Json => json(&VerifyReport {
            m_max,
            blocks_checked: total,
            passed,
            mismatches: checks
                .into_iter()
                .filter(|c| c.closed != c.oracle)
                .collect(),
        }),
        Format::Table => {
            let mut out = String::new();
            for c in checks.iter().filter(|c| c.closed != c.oracle) {
                let _ = writeln!(
                    out,
                    "mismatch at block (k={}, i={}, m={}): closed {} vs oracle {}",
                    c.k, c.i, c.m, c.closed, c.oracle
                );
            }
            if passed {
                let _ = writeln!(out, "all {total} blocks agree (m ≤ {m_max})");
            } else {
                let bad = checks.iter().filter(|c| c.closed != c.oracle).count();
                let _ = writeln!(out, "{bad} of {total} blocks disagree (m ≤ {m_max})");
            }
            out
        }
    };
    Ok((out, passed))
}

pub struct DegreesArgs {
    pub d_min: u32,
    pub d_max: u32,
    pub sing: SingularityClass,
    pub criterion: Criterion,
    pub counts_file: Option<PathBuf>,
}

pub fn degrees(args: &DegreesArgs, format: Format) -> Result<String, Failure> {
    let source = match &args.counts_file {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| {
                Failure::Unsupported(format!("cannot open {}: {e}", path.display()))
            })?;
            CountSource::from_csv(file)?
        }
        None => CountSource::Labs,
    };
    let reports = degree_report(args.d_min, args.d_max, &args.sing, &source)?;
    Ok(match format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut out = String::from(
                "d,available,required_thm1,required_segre,verdict_thm1,verdict_segre\n",
            );
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.d,
                    r.available,
                    r.required_thm1,
                    r.required_segre,
                    r.verdict_thm1,
                    r.verdict_segre
                );
            }
            out
        }
        Format::Table => degrees_table(args, &source, &reports),
    })
}

fn degrees_table(args: &DegreesArgs, source: &CountSource, reports: &[DegreeReport]) -> String {
    let c = args.criterion;
    let mut out = format!(
        "{} points, criterion {c}, counts from {}\n{:>4} {:>10} {:>13} {:>14}  {}\n",
        args.sing,
        match source {
            CountSource::Labs => "the A2 construction formula",
            CountSource::Table(_) => "user table",
        },
        "d",
        "available",
        "req_thm1",
        "req_segre",
        "verdict"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:>4} {:>10} {:>13} {:>14}  {}",
            r.d,
            r.available,
            r.required_thm1,
            r.required_segre,
            r.verdict(c)
        );
    }
    match first_big(reports, c) {
        Some(d) => {
            let _ = writeln!(out, "first Big degree ({c}): {d}");
        }
        None => {
            let _ = writeln!(out, "no Big degree ({c}) in range");
        }
    }
    if c == Criterion::SegreSum && args.sing.n() == 2 && matches!(source, CountSource::Labs) {
        if let Some(r14) = reports.iter().find(|r| r.d == 14) {
            let _ = writeln!(
                out,
                "note: at d=14 the criterion needs {1} points of type {2}; the construction \
                 formula provides {0}",
                r14.available, r14.required_segre, args.sing
            );
        }
    }
    out
}

#[derive(Serialize)]
struct TermOut {
    coeff: i64,
    ftype: [i64; 4],
    frame: &'static str,
    weight: u8,
    holomorphic: bool,
}

pub fn parse_ftype(s: &str) -> Result<FType, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected i1,i2,m1,m2, got {s:?}"));
    }
    let int = |p: &str| {
        p.parse::<i64>()
            .map_err(|_| format!("not an integer: {p:?}"))
    };
    let nat = |p: &str| {
        p.parse::<u32>()
            .map_err(|_| format!("differential exponent must be a non-negative integer: {p:?}"))
    };
    Ok(FType::u(
        int(parts[0])?,
        int(parts[1])?,
        nat(parts[2])?,
        nat(parts[3])?,
    ))
}

pub fn pullback(f: &FType, format: Format) -> Result<String, Failure> {
    if f.degree() > PULLBACK_MAX_DEGREE {
        return Err(Failure::Unsupported(format!(
            "degree {} exceeds the supported maximum {PULLBACK_MAX_DEGREE}",
            f.degree()
        )));
    }
    let terms = pullback_monomial(f)?;
    let rows: Vec<TermOut> = terms
        .iter()
        .map(|(c, t)| {
            Ok(TermOut {
                coeff: c.to_i64().expect("|c| ≤ 3^39"),
                ftype: t.exponents(),
                frame: t.frame.as_str(),
                weight: weight(t)?.residue(),
                holomorphic: t.is_holomorphic(),
            })
        })
        .collect::<Result<_, symdiff_core::Error>>()?;
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("coeff,i1,i2,m1,m2,frame,weight,holomorphic\n");
            for r in &rows {
                let [a, b, c, d] = r.ftype;
                let _ = writeln!(
                    out,
                    "{},{a},{b},{c},{d},{},{},{}",
                    r.coeff, r.frame, r.weight, r.holomorphic
                );
            }
            out
        }
        Format::Table => {
            let mut out = format!("{} ↦ {}\n", monomial_text(f), formula(&terms));
            for r in &rows {
                let [a, b, c, d] = r.ftype;
                let _ = writeln!(
                    out,
                    "  {:>8} · ({a},{b},{c},{d})_z  weight {}  {}",
                    r.coeff,
                    r.weight,
                    if r.holomorphic {
                        "holomorphic"
                    } else {
                        "meromorphic"
                    }
                );
            }
            out
        }
    })
}
