//! Exact rational helpers: parsing, formatting, and exact sign tests for
//! sums of logarithms of rationals.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a/b`, integers, and decimals with an optional exponent
/// (`0.25`, `-3`, `1e-3`, `2.5E2`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_integer(num.trim()).ok_or_else(bad)?;
        let den: BigInt = parse_integer(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a comma-separated list such as `1/4,3/4`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// `n` for integers and `n/d` otherwise.
pub fn to_string(q: &Rational) -> String {
    q.to_string()
}

/// Always `n/d`, including integers (`3/1`).
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Overflowing magnitudes: fall back to log-space reconstruction.
        let ln = ln_rational(q);
        if q.is_negative() {
            -ln.exp()
        } else {
            ln.exp()
        }
    })
}

/// Natural log of |q| computed without overflowing f64 for large operands.
pub fn ln_rational(q: &Rational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Exact sign of `Σ coeffs[i] · ln(bases[i])` for positive rational bases.
pub fn log_sum_sign(coeffs: &[Rational], bases: &[Rational]) -> Ordering {
    debug_assert_eq!(coeffs.len(), bases.len());
    let mut approx = 0.0;
    let mut magnitude = 0.0;
    for (q, b) in coeffs.iter().zip(bases) {
        if q.is_zero() {
            continue;
        }
        let term = to_f64(q) * ln_rational(b);
        approx += term;
        magnitude += term.abs();
    }
    if magnitude == 0.0 {
        return Ordering::Equal;
    }
    if approx.abs() > 1e-9 * magnitude + 1e-300 {
        return approx.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
    }
    exact_log_sum_sign(coeffs, bases, approx)
}

/// Above this total exponent the exact comparison is too costly and the
/// float estimate is returned as is.
const EXACT_EXPONENT_LIMIT: usize = 200_000;

fn exact_log_sum_sign(coeffs: &[Rational], bases: &[Rational], approx: f64) -> Ordering {
    let scale = Rational::from_integer(lcm_of_denominators(coeffs));
    let exps: Vec<BigInt> = coeffs.iter().map(|q| (q * &scale).to_integer()).collect();
    let total = exps.iter().try_fold(0usize, |acc, e| e.abs().to_usize().and_then(|e| acc.checked_add(e)));
    if total.is_none_or(|t| t > EXACT_EXPONENT_LIMIT) {
        return approx.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
    }
    let mut upper = Rational::one();
    let mut lower = Rational::one();
    for (e, b) in exps.iter().zip(bases) {
        if e.is_zero() {
            continue;
        }
        let exp = e.abs().to_usize().expect("checked above");
        let p = num_traits::pow(b.clone(), exp);
        if e.sign() == Sign::Plus {
            upper *= p;
        } else {
            lower *= p;
        }
    }
    upper.cmp(&lower)
}

/// Writes `n` as `s² · d` with `d` free of the small square factors found by
/// trial division; returns `(s, d)`.
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "split_square needs a positive integer");
    let mut rest = n.clone();
    let mut root = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            root *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        root *= r;
        rest = BigInt::one();
    }
    (root, rest)
}

pub fn positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn min_max<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<(Rational, Rational)> {
    let mut it = values.into_iter();
    let first = it.next()?.clone();
    Some(it.fold((first.clone(), first), |(lo, hi), v| {
        (if v < &lo { v.clone() } else { lo }, if v > &hi { v.clone() } else { hi })
    }))
}

/// Exact rational from a finite float (binary expansion, no rounding).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}
