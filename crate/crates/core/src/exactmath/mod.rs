//! Exact-arithmetic substrate: rationals, multivariate polynomials over Q,
//! factored rational functions in one variable, and integer matrix normal
//! forms.
//!
//! Every criterion downstream is an exact equality or inequality, so no
//! floating point appears anywhere; coefficients are `BigRational` and matrix
//! entries are `BigInt`.

mod factored;
mod matrix;
mod poly;

pub use factored::FactoredRational;
pub use matrix::{
    abelian_group_from_relations, row_lattice_membership, smith_normal_form,
    AbelianGroupPresentation, IntMatrix, LatticeMembership, SnfResult,
};
pub use poly::{Poly2, RingKind, SubstitutionError};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Parse an exact rational from `"a/b"` or `"a"` form.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator: {num:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid rational denominator: {den:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational: {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

/// Render a rational as `"a/b"`, or `"a"` when the denominator is 1.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact floor of a rational, as an integer.
pub fn rational_floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

/// `q - floor(q)`, always in `[0, 1)`.
pub fn fractional(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Reduced numerator/denominator with the denominator positive.
pub fn numer_denom(q: &BigRational) -> (BigInt, BigInt) {
    // BigRational::new already reduces and keeps the denominator positive.
    (q.numer().clone(), q.denom().clone())
}

/// Integer power of a nonzero rational; negative exponents invert.
pub fn rational_pow(q: &BigRational, k: i64) -> BigRational {
    assert!(!q.is_zero() || k >= 0, "negative power of zero");
    let exp: i32 = k.unsigned_abs().try_into().expect("desk-scale exponent");
    let p = q.pow(exp);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Sign-aware gcd: `gcd_big(a, b) >= 0`, with `gcd_big(0, 0) = 0`.
pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    num::Integer::gcd(a, b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["1/2", "-3", "0", "7/3", "-11/4"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(rational_string(&q), s);
        }
        assert_eq!(rational_string(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_and_fraction() {
        let q = rat(-1, 2);
        assert_eq!(rational_floor(&q), big(-1));
        assert_eq!(fractional(&q), rat(1, 2));
        assert_eq!(fractional(&rat_int(3)), rat_int(0));
    }

    #[test]
    fn pow_negative() {
        assert_eq!(rational_pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(rational_pow(&rat(5, 1), 0), rat_int(1));
    }
}
