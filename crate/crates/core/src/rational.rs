//! Exact rational helpers: parsing, formatting, powers and directed-rounded roots.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: BigInt = b.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s}")));
            }
            Q::new(n, d)
        }
        None => Q::from_integer(t.parse().map_err(|_| Error::Parse(s.to_string()))?),
    };
    Ok(parsed)
}

/// Always `numer/denom`, the form used in JSON files.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn pow(x: &Q, p: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..p {
        r *= x;
    }
    r
}

/// `floor(x * 10^digits) / 10^digits` printed with `digits` decimals.
pub fn decimal_down(x: &Q, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (x * Q::from_integer(scale.clone())).floor().to_integer();
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let ip = &a / &scale;
    let fp = &a % &scale;
    let mut s = format!("{}.{:0>width$}", ip, fp.to_string(), width = digits);
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Fraction followed by a 12-digit decimal rounded toward minus infinity.
pub fn show(x: &Q) -> String {
    format!("{} (~{})", x, decimal_down(x, 12))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact n-th root when `x` is a perfect n-th power of a rational.
pub fn exact_root(x: &Q, n: u32) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let a = x.numer().nth_root(n);
    let b = x.denom().nth_root(n);
    let r = Q::new(a, b);
    if pow(&r, n) == *x {
        Some(r)
    } else {
        None
    }
}

/// Bounds `lo <= x^(1/n) <= hi` with `hi - lo <= 2^-bits`; exact roots give `lo == hi`.
pub fn root_bounds(x: &Q, n: u32, bits: u32) -> (Q, Q) {
    assert!(!x.is_negative() && n >= 1);
    if let Some(r) = exact_root(x, n) {
        return (r.clone(), r);
    }
    let shift = BigInt::one() << (bits as usize * n as usize);
    let scaled = (x * Q::from_integer(shift)).floor().to_integer();
    let r = scaled.nth_root(n);
    let den = BigInt::one() << bits as usize;
    (
        Q::new(r.clone(), den.clone()),
        Q::new(r + BigInt::one(), den),
    )
}

/// Lower and upper bounds on `(sum_j t_j^(1/p))^p` for nonnegative rationals `t_j`.
pub fn root_sum_pow_bounds(terms: &[Q], p: u32, bits: u32) -> (Q, Q) {
    if p == 1 {
        let s: Q = terms.iter().fold(Q::zero(), |a, b| a + b);
        return (s.clone(), s);
    }
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    for t in terms {
        let (l, h) = root_bounds(t, p, bits);
        lo += l;
        hi += h;
    }
    (pow(&lo, p), pow(&hi, p))
}

/// `#[serde(with = "serde_q")]`: rationals as `"n/d"` strings.
pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_q("3").unwrap(), int(3));
        assert_eq!(parse_q(" -4/8 ").unwrap(), q(-1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(&int(1)), "1/1");
    }

    #[test]
    fn decimals_round_down() {
        assert_eq!(decimal_down(&q(1, 3), 12), "0.333333333333");
        assert_eq!(decimal_down(&q(2, 3), 12), "0.666666666666");
        assert_eq!(decimal_down(&q(-1, 3), 3), "-0.334");
        assert_eq!(decimal_down(&int(5), 2), "5.00");
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&q(1, 4), 2), Some(q(1, 2)));
        assert_eq!(exact_root(&q(1, 2), 2), None);
        let (lo, hi) = root_bounds(&int(2), 2, 40);
        assert!(pow(&lo, 2) <= int(2) && pow(&hi, 2) >= int(2));
        assert!(&hi - &lo <= q(1, 1 << 30));
        let (lo, hi) = root_sum_pow_bounds(&[q(1, 4), q(1, 9)], 2, 30);
        let exact = pow(&(q(1, 2) + q(1, 3)), 2);
        assert!(lo <= exact && exact <= hi);
    }
}
