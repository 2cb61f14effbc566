//! Arbitrary-precision rational scalars and vectors.
//!
//! `Rat` is `num_rational::BigRational`: always stored in lowest terms with a
//! positive denominator, which is exactly the representation every result in
//! this crate relies on.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;
pub type RatVec = Vec<Rat>;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

pub fn rvec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&n| rat_int(n)).collect()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(num, den))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"p/q"`, omitting the denominator when it is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| Rat::from_integer(x.clone()) * y)
        .sum()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(t: &Rat, a: &[Rat]) -> RatVec {
    a.iter().map(|x| t * x).collect()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.denom().is_one())
}

pub fn to_int_vec(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.denom().is_one().then(|| x.numer().clone()))
        .collect()
}

pub fn from_int_vec(v: &[BigInt]) -> RatVec {
    v.iter().map(|n| Rat::from_integer(n.clone())).collect()
}

pub fn floor_big(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_big(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Smallest rational `s/scale` (scale fixed) with `s/scale >= sqrt(x)`, for
/// `x >= 0`. Used to turn irrational flatness bounds into valid rational
/// over-approximations.
pub fn sqrt_upper(x: &Rat, scale: u64) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let scale = BigInt::from(scale);
    // ceil(scale * sqrt(x)) = smallest s with s^2 >= scale^2 * x.
    let target_num = x.numer() * &scale * &scale;
    let target_den = x.denom().clone();
    // integer sqrt of ceil(target_num / target_den)
    let q = num_integer::Integer::div_ceil(&target_num, &target_den);
    let mut s = q.sqrt();
    while &s * &s < q {
        s += 1;
    }
    // s^2 >= q >= scale^2 x, so (s/scale)^2 >= x.
    Rat::new(s, scale)
}

/// L1 norm of an integer vector.
pub fn l1_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

pub fn parse_rat_vec(parts: &[&str]) -> Result<RatVec> {
    parts.iter().map(|p| parse_rat(p)).collect()
}
