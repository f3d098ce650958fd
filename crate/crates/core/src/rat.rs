//! Exact rational scalars.
//!
//! Every scalar quantity in this crate (boundary coefficients, discrepancies,
//! intersection numbers, degrees) is a `Rat`: an arbitrary-precision rational
//! kept in lowest terms with a positive denominator. There is no floating
//! point anywhere in the crate.
//!
//! Textual form is `p/q`, with `/q` omitted when the denominator is 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// `p/q` as a `Rat`. Panics on zero denominator.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a `Rat`.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Render in the canonical `p/q` / `p` form.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the canonical form. Accepts `p` and `p/q` with optional sign on `p`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in rational `{s}`"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in rational `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// `true` iff `x` is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Floor of `x` as a `BigInt`.
pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of `x` as a `BigInt`.
pub fn ceil_int(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// Convert to `i64`, panicking when out of range. Catalog-scale values only.
pub fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x.clone()).expect("value out of i64 range")
}

/// `|x|`.
pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-2, -4), rat(1, 2));
        assert_eq!(rat(2, -4), rat(-1, 2));
        assert_eq!(fmt_rat(&rat(0, 5)), "0");
        assert_eq!(fmt_rat(&rat(-6, 8)), "-3/4");
        assert_eq!(fmt_rat(&int(7)), "7");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-3/4", "19/21", "25/28"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&x), s);
        }
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }
}
