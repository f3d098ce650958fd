//! Affine forms `u + v*t` in one rational parameter.
//!
//! Quantities that depend linearly on the boundary parameter (called `t` for
//! the global boundary coefficient, `b` for the crepant value) are carried
//! symbolically as an `AffineForm` and only evaluated at the very end, so
//! intermediate arithmetic stays exact. The parameter symbol is context: a
//! form does not know whether it is in `t` or `b`, and callers must not mix
//! the two.

use crate::rat::{fmt_rat, parse_rat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    #[serde(with = "crate::affine::rat_str")]
    pub constant: Rat,
    #[serde(with = "crate::affine::rat_str")]
    pub slope: Rat,
}

/// Serde helper: rationals as canonical `p/q` strings.
pub mod rat_str {
    use crate::rat::{fmt_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Result of solving `f = 0` for the parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSolution {
    Root(Rat),
    /// `f` is identically zero.
    AllValues,
    /// `f` is a nonzero constant.
    NoSolution,
}

impl AffineForm {
    pub fn new(constant: Rat, slope: Rat) -> Self {
        AffineForm { constant, slope }
    }

    pub fn constant_form(c: Rat) -> Self {
        AffineForm::new(c, Rat::zero())
    }

    pub fn zero() -> Self {
        AffineForm::constant_form(Rat::zero())
    }

    /// The identity form `0 + 1*t`.
    pub fn param() -> Self {
        AffineForm::new(Rat::zero(), crate::rat::one())
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// Exact evaluation at `p`.
    pub fn eval(&self, p: &Rat) -> Rat {
        &self.constant + &self.slope * p
    }

    /// Solve `self = 0` for the parameter.
    pub fn solve_zero(&self) -> ZeroSolution {
        if self.slope.is_zero() {
            if self.constant.is_zero() {
                ZeroSolution::AllValues
            } else {
                ZeroSolution::NoSolution
            }
        } else {
            ZeroSolution::Root(-&self.constant / &self.slope)
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        AffineForm::new(&self.constant * c, &self.slope * c)
    }

    pub fn fmt_with(&self, sym: &str) -> String {
        if self.slope.is_zero() {
            return fmt_rat(&self.constant);
        }
        let slope_abs = crate::rat::abs(&self.slope);
        let slope_part = if slope_abs == crate::rat::one() {
            sym.to_string()
        } else {
            format!("{}*{}", fmt_rat(&slope_abs), sym)
        };
        let sign = if self.slope < Rat::zero() { "-" } else { "+" };
        if self.constant.is_zero() {
            if sign == "-" {
                format!("-{slope_part}")
            } else {
                slope_part
            }
        } else {
            format!("{} {} {}", fmt_rat(&self.constant), sign, slope_part)
        }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("t"))
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant + &rhs.constant, &self.slope + &rhs.slope)
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant - &rhs.constant, &self.slope - &rhs.slope)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        AffineForm::new(-&self.constant, -&self.slope)
    }
}

impl Mul<&Rat> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, rhs: &Rat) -> AffineForm {
        self.scale(rhs)
    }
}

/// `c + s*t` literal from small integers: `af(c_num, c_den, s_num, s_den)`.
pub fn af(cn: i64, cd: i64, sn: i64, sd: i64) -> AffineForm {
    AffineForm::new(crate::rat::rat(cn, cd), crate::rat::rat(sn, sd))
}

/// Parse `c`, `s*t`, `c + s*t`, `c - s*t` (symbol `t` or `b`).
pub fn parse_affine(s: &str) -> Result<AffineForm, String> {
    let cleaned = s.replace(' ', "");
    if cleaned.is_empty() {
        return Err("empty affine form".into());
    }
    // Split at the last top-level +/- that is not a leading sign.
    let bytes = cleaned.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
            split = Some(i);
            break;
        }
    }
    let (head, tail) = match split {
        Some(i) => (&cleaned[..i], &cleaned[i..]),
        None => ("", cleaned.as_str()),
    };
    let parse_term = |term: &str| -> Result<(bool, Rat), String> {
        // Returns (is_slope_term, value).
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1i64, b),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        let (is_slope, num) = if let Some(stripped) = body
            .strip_suffix('t')
            .or_else(|| body.strip_suffix('b'))
        {
            let stripped = stripped.strip_suffix('*').unwrap_or(stripped);
            (true, if stripped.is_empty() { "1" } else { stripped })
        } else {
            (false, body)
        };
        let v = parse_rat(num)?;
        Ok((is_slope, if sign < 0 { -v } else { v }))
    };
    let mut constant = Rat::zero();
    let mut slope = Rat::zero();
    for term in [head, tail] {
        if term.is_empty() {
            continue;
        }
        let (is_slope, v) = parse_term(term)?;
        if is_slope {
            slope = slope + v;
        } else {
            constant = constant + v;
        }
    }
    Ok(AffineForm::new(constant, slope))
}
