//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn count(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical rendering: `num` for integers, `num/den` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical rendering. Non-canonical spellings (`2/4`, `3/1`,
/// negative denominators, `-0`) are rejected so that files stay reviewable.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        if t.is_empty() || t.starts_with('+') {
            return Err(Error::Parse(format!("bad integer `{t}` in `{s}`")));
        }
        t.parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer `{t}` in `{s}`: {e}")))
    };
    let value = match s.split_once('/') {
        None => Rational::from_integer(parse_int(s)?),
        Some((n, d)) => {
            let (n, d) = (parse_int(n)?, parse_int(d)?);
            if !d.is_positive() {
                return Err(Error::Parse(format!("denominator must be positive in `{s}`")));
            }
            Rational::new_raw(n, d)
        }
    };
    let reduced = value.reduced();
    if format_rational(&reduced) != s {
        return Err(Error::Parse(format!(
            "`{s}` is not in lowest terms (expected `{}`)",
            format_rational(&reduced)
        )));
    }
    Ok(reduced)
}

/// Decimal annotation with six significant digits. Display only; nothing
/// downstream may compare these strings.
pub fn approx(r: &Rational) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.5e}")
    }
}

/// `ceil(log2 n)` for `n >= 1`; zero for `n <= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// `floor(log2 n)` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    debug_assert!(n > 0);
    u64::BITS - 1 - n.leading_zeros()
}
