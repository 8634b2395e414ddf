//! Scalar helpers on top of `num-rational`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `lcm(1, 2, ..., n)`.
pub fn lcm_range(n: u64) -> Result<BigInt, ExactError> {
    if n == 0 {
        return Err(ExactError::Domain("lcm_range needs n >= 1".into()));
    }
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc = acc.lcm(&BigInt::from(k));
    }
    Ok(acc)
}

/// `lcm(1..n)` for every `n` in `0..=upto`, with the convention `d_0 = 1`.
pub fn lcm_prefix(upto: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for k in 1..=upto {
        acc = acc.lcm(&BigInt::from(k));
        out.push(acc.clone());
    }
    out
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Exact `floor(log2 |x|)` for nonzero `x`.
pub fn floor_log2(x: &Rational) -> i64 {
    debug_assert!(!x.is_zero());
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after at most one correction
    if !ge_pow2(n, d, e) {
        e -= 1;
    }
    e
}

/// `n / d >= 2^e`
fn ge_pow2(n: &BigUint, d: &BigUint, e: i64) -> bool {
    if e >= 0 {
        *n >= d << (e as usize)
    } else {
        (n << ((-e) as usize)) >= *d
    }
}

/// `x * 2^k` exactly.
pub fn mul_pow2(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(x.numer() << (k as usize), x.denom().clone())
    } else {
        Rational::new(x.numer().clone(), x.denom() << ((-k) as usize))
    }
}

/// Largest dyadic `m / 2^s` with `s = bits - floor_log2(x)` not above `x`.
pub fn round_down_rel(x: &Rational, bits: u32) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = bits as i64 - floor_log2(x);
    let scaled = mul_pow2(x, shift);
    mul_pow2(&from_big(floor(&scaled)), -shift)
}

pub fn round_up_rel(x: &Rational, bits: u32) -> Rational {
    -round_down_rel(&-x, bits)
}

/// Round down onto the grid `2^-bits`.
pub fn round_down_abs(x: &Rational, bits: i64) -> Rational {
    mul_pow2(&from_big(floor(&mul_pow2(x, bits))), -bits)
}

pub fn round_up_abs(x: &Rational, bits: i64) -> Rational {
    mul_pow2(&from_big(ceil(&mul_pow2(x, bits))), -bits)
}

pub fn pow(x: &Rational, e: u64) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn pow_int(x: &BigInt, e: u64) -> BigInt {
    num_traits::pow(x.clone(), e as usize)
}

pub fn big_pow(base: u64, e: u64) -> BigInt {
    pow_int(&BigInt::from(base), e)
}

/// Parses `"7"`, `"-3/4"` or `"0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip: BigInt = if ip.is_empty() || ip == "-" {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let fnum: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = big_pow(10, fp.len() as u64);
        let frac = Rational::new(fnum, scale);
        let whole = from_big(ip.abs()) + frac;
        return Ok(if neg { -whole } else { whole });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(from_big(n))
}

/// Decimal string of `x` with `digits` digits after the point, truncated
/// toward negative infinity. Used for human-readable report columns only.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let scale = big_pow(10, digits as u64);
    let v = floor(&(x * from_big(scale)));
    let neg = v.sign() == Sign::Minus;
    let mag = v.abs().to_string();
    let mag = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (ip, fp) = mag.split_at(mag.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Lossy conversion for descriptive (never certified) statistics.
pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let e = floor_log2(x);
    let m = mul_pow2(x, 60 - e);
    let m = floor(&m).to_f64().unwrap_or(0.0);
    m * 2f64.powi((e - 60) as i32)
}

/// Integer square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_range_small_values() {
        assert_eq!(lcm_range(1).unwrap(), BigInt::from(1));
        assert_eq!(lcm_range(4).unwrap(), BigInt::from(12));
        assert_eq!(lcm_range(10).unwrap(), BigInt::from(2520));
        assert!(lcm_range(0).is_err());
    }

    #[test]
    fn lcm_prefix_matches_lcm_range() {
        let p = lcm_prefix(30);
        for n in 1..=30u64 {
            assert_eq!(p[n as usize], lcm_range(n).unwrap());
        }
        assert_eq!(p[0], BigInt::from(1));
    }

    #[test]
    fn floor_log2_exact() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&int(7)), 2);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(floor_log2(&rat(-1, 4)), -2);
        assert_eq!(floor_log2(&rat(5, 8)), -1);
    }

    #[test]
    fn relative_rounding_brackets() {
        let x = rat(1, 3);
        let lo = round_down_rel(&x, 20);
        let hi = round_up_rel(&x, 20);
        assert!(lo < x && x < hi);
        assert!(&hi - &lo <= rat(1, 1 << 20));
        assert_eq!(round_down_rel(&int(12), 5), int(12));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("42").unwrap(), int(42));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&rat(-1, 3), 2), "-0.34");
        assert_eq!(to_decimal(&int(7), 0), "7");
    }
}
