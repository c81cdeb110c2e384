//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Q) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(r: &Q) -> bool {
    r.denom().is_one()
}

/// Integer value if it fits in an `i64`.
pub fn as_i64(r: &Q) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Exact `r^k` for integer `k` (negative allowed when `r != 0`).
pub fn powi(r: &Q, k: i64) -> Option<Q> {
    if k >= 0 {
        Some(num_traits::pow(r.clone(), k as usize))
    } else if r.is_zero() {
        None
    } else {
        Some(num_traits::pow(r.recip(), (-k) as usize))
    }
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `r^e` for a positive rational base when the result is rational.
pub fn pow_exact(r: &Q, e: &Q) -> Option<Q> {
    if let Some(k) = as_i64(e) {
        return powi(r, k);
    }
    if !r.is_positive() {
        return None;
    }
    let den = e.denom().to_u32()?;
    let num = e.numer().to_i64()?;
    let rn = int_root(r.numer(), den)?;
    let rd = int_root(r.denom(), den)?;
    powi(&Q::new(rn, rd), num)
}

/// Splits `e` into `floor(e)` and the fractional part in `[0, 1)`.
pub fn split_floor(e: &Q) -> (Q, Q) {
    let f = e.floor();
    let frac = e - &f;
    (f, frac)
}

pub fn parse_q(s: &str) -> Option<Q> {
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().ok()?;
        Some(Q::from_integer(n))
    }
}

pub fn fmt_q(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roots() {
        assert_eq!(pow_exact(&q(4, 9), &q(1, 2)), Some(q(2, 3)));
        assert_eq!(pow_exact(&q(8, 1), &q(-2, 3)), Some(q(1, 4)));
        assert_eq!(pow_exact(&q(2, 1), &q(1, 2)), None);
        assert_eq!(pow_exact(&q(-2, 1), &q(3, 1)), Some(q(-8, 1)));
    }

    #[test]
    fn floor_split() {
        let (f, r) = split_floor(&q(-3, 2));
        assert_eq!(f, qi(-2));
        assert_eq!(r, q(1, 2));
    }
}
