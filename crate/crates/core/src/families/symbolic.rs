//! Closed-form endpoint expressions: rationals, logarithm quotients and
//! quadratic surds, each with a canonical text form and a decimal value.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// `a + b·√d` with `d` a square-free positive integer (or 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadSurd {
    /// `√q` for a positive rational `q`.
    pub fn sqrt(q: &Rational) -> Self {
        assert!(q.is_positive(), "square root of a nonpositive rational");
        // √(n/m) = √(n·m)/m
        let (root, rest) = rational::split_square(&(q.numer() * q.denom()));
        let coeff = Rational::new(root, q.denom().clone());
        if rest.is_one() {
            Self { a: coeff, b: Rational::zero(), d: BigInt::one() }
        } else {
            Self { a: Rational::zero(), b: coeff, d: rest }
        }
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        Self { a: &self.a + q, ..self.clone() }
    }

    pub fn div_rational(&self, q: &Rational) -> Self {
        Self { a: &self.a / q, b: &self.b / q, d: self.d.clone() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let d = rational::to_f64(&Rational::from_integer(self.d.clone()));
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * d.sqrt()
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let den = self.a.denom().lcm(self.b.denom());
        let p = (&self.b * Rational::from_integer(den.clone())).to_integer();
        let q = (&self.a * Rational::from_integer(den.clone())).to_integer();
        let mut num = match p.to_string().as_str() {
            "1" => String::new(),
            "-1" => "-".to_string(),
            s => s.to_string(),
        };
        num.push_str(&format!("√{}", self.d));
        if q.is_positive() {
            num.push_str(&format!("+{q}"));
        } else if q.is_negative() {
            num.push_str(&format!("{q}"));
        }
        match (den.is_one(), q.is_zero()) {
            (true, _) => write!(f, "{num}"),
            (false, true) => write!(f, "{num}/{den}"),
            (false, false) => write!(f, "({num})/{den}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Rational(Rational),
    /// `ln(arg) / div`
    LnQuotient { arg: Rational, div: Rational },
    /// `1 + ln(num) / ln(den)`
    OnePlusLnRatio { num: Rational, den: Rational },
    Surd(QuadSurd),
    /// No tidy closed form; the text documents how the value was formed.
    Opaque { text: String, value: f64 },
}

impl Expr {
    pub fn to_f64(&self) -> f64 {
        match self {
            Expr::Rational(q) => rational::to_f64(q),
            Expr::LnQuotient { arg, div } => rational::ln_rational(arg) / rational::to_f64(div),
            Expr::OnePlusLnRatio { num, den } => 1.0 + rational::ln_rational(num) / rational::ln_rational(den),
            Expr::Surd(s) => s.to_f64(),
            Expr::Opaque { value, .. } => *value,
        }
    }

    pub fn zero() -> Self {
        Expr::Rational(Rational::zero())
    }
}

/// Wraps non-integers in parentheses so they read unambiguously inside
/// larger expressions.
pub fn operand(q: &Rational) -> String {
    if q.is_integer() && !q.is_negative() {
        q.to_string()
    } else {
        format!("({q})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(q) => write!(f, "{q}"),
            Expr::LnQuotient { arg, div } => {
                if div.is_one() {
                    write!(f, "ln({arg})")
                } else {
                    write!(f, "ln({arg})/{}", operand(div))
                }
            }
            Expr::OnePlusLnRatio { num, den } => write!(f, "1+ln({num})/ln({den})"),
            Expr::Surd(s) => write!(f, "{s}"),
            Expr::Opaque { text, .. } => write!(f, "{text}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn surd_text_forms() {
        let s = QuadSurd::sqrt(&ratio(4, 3)).add_rational(&int(-1)).div_rational(&int(100));
        assert_eq!(s.to_string(), "(2√3-3)/300");
        assert!((s.to_f64() - (2.0 * 3f64.sqrt() - 3.0) / 300.0).abs() < 1e-17);
        assert_eq!(QuadSurd::sqrt(&int(2)).to_string(), "√2");
        assert_eq!(QuadSurd::sqrt(&ratio(9, 4)).to_string(), "3/2");
        assert_eq!(QuadSurd::sqrt(&ratio(1, 2)).to_string(), "√2/2");
    }

    #[test]
    fn log_text_forms() {
        let e = Expr::LnQuotient { arg: ratio(4, 3), div: int(100) };
        assert_eq!(e.to_string(), "ln(4/3)/100");
        assert!((e.to_f64() - (4f64 / 3.0).ln() / 100.0).abs() < 1e-17);
        let e = Expr::OnePlusLnRatio { num: ratio(3, 4), den: int(101) };
        assert_eq!(e.to_string(), "1+ln(3/4)/ln(101)");
        assert!((e.to_f64() - (1.0 + 0.75f64.ln() / 101f64.ln())).abs() < 1e-15);
    }
}
