use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use symdiff_core::monomials::FType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Exact rational with a decimal convenience field. Numerator and
/// denominator are strings so no integer width is assumed by readers.
#[derive(Debug, Serialize)]
pub struct Rat {
    pub num: String,
    pub den: String,
    pub decimal: f64,
}

impl From<&BigRational> for Rat {
    fn from(r: &BigRational) -> Self {
        Rat {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn ratio_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

fn power(base: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}{}", superscript(e)),
    }
}

/// `z₁^a z₂^b dz₁^c dz₂^d` in compact notation, e.g. `z₁z₂⁻¹dz₁`.
pub fn monomial_text(f: &FType) -> String {
    let (x, y) = match f.frame {
        symdiff_core::monomials::Frame::Z => ("z₁", "z₂"),
        symdiff_core::monomials::Frame::U => ("u₁", "u₂"),
    };
    let body = [
        power(x, f.i1),
        power(y, f.i2),
        power(&format!("d{x}"), f.m1 as i64),
        power(&format!("d{y}"), f.m2 as i64),
    ]
    .concat();
    if body.is_empty() {
        "1".to_string()
    } else {
        body
    }
}

/// Sum of terms as a formula, skipping zero coefficients.
pub fn formula(terms: &[(BigInt, FType)]) -> String {
    let mut out = String::new();
    for (c, f) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let sign = if c.is_negative() { "−" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('−');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = c.abs();
        if !mag.is_one() {
            let _ = write!(out, "{mag}·");
        }
        out.push_str(&monomial_text(f));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_rendering() {
        let terms = vec![
            (BigInt::from(2), FType::z(1, -1, 1, 0)),
            (BigInt::from(-1), FType::z(2, -2, 0, 1)),
        ];
        assert_eq!(formula(&terms), "2·z₁z₂⁻¹dz₁ − z₁²z₂⁻²dz₂");
        let terms = vec![
            (BigInt::from(-1), FType::z(-2, 2, 1, 0)),
            (BigInt::from(2), FType::z(-1, 1, 0, 1)),
        ];
        assert_eq!(formula(&terms), "−z₁⁻²z₂²dz₁ + 2·z₁⁻¹z₂dz₂");
        assert_eq!(formula(&[]), "0");
    }

    #[test]
    fn rational_fields() {
        let r = BigRational::new((-8).into(), 3.into());
        let j = Rat::from(&r);
        assert_eq!((j.num.as_str(), j.den.as_str()), ("-8", "3"));
        assert_eq!(ratio_text(&r), "-8/3");
        assert_eq!(ratio_text(&BigRational::from_integer(5.into())), "5");
    }
}
