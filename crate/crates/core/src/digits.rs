//! Certified base-`b` digits, pattern repetition counts and the rational
//! approximations `p_n / q_n` read off a repeated block.
//!
//! A digit at position `i` is certified when the whole enclosure lies in one
//! cell `[k b^-i, (k+1) b^-i)`. Exact rationals with a terminating expansion
//! are written with trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constants::{family_constants, ConstantsConfig, ConstantsError, Verdict};
use crate::dioph::{eval_certified, DiophError};
use crate::exact::interval::ln_rational;
use crate::exact::rational::{floor, from_big, int, mul_pow2, to_f64};
use crate::exact::{IntervalReal, Rational};
use crate::gfun::GFunctionSystem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DigitsError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("extend expansion: need digit {need}, certified {have}")]
    Extend { need: usize, have: usize },
    #[error("internal certificate failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Dioph(#[from] DiophError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitString {
    pub base: u32,
    pub integer_part: BigInt,
    /// `a_1 a_2 ...` of the fractional part
    pub digits: Vec<u32>,
    pub certified_len: usize,
    /// working precision of the enclosure that certified the digits
    pub bits: u32,
}

impl DigitString {
    /// Digit `a_i`, 1-based, if certified.
    pub fn digit(&self, i: usize) -> Option<u32> {
        (i >= 1 && i <= self.certified_len).then(|| self.digits[i - 1])
    }

    pub fn to_digit_string(&self) -> String {
        self.digits[..self.certified_len]
            .iter()
            .map(|&d| std::char::from_digit(d, 36).map(String::from).unwrap_or_else(|| format!("({d})")))
            .collect()
    }

    /// The integer with base-`b` digits `a_from .. a_{to-1}` (1-based).
    fn block_value(&self, from: usize, to: usize) -> BigInt {
        let b = BigInt::from(self.base);
        self.digits[from - 1..to - 1].iter().fold(BigInt::zero(), |acc, &d| acc * &b + d)
    }
}

fn to_base(mut x: BigInt, base: u32, len: usize) -> Vec<u32> {
    let b = BigInt::from(base);
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        let (q, r) = x.div_rem(&b);
        *slot = r.to_u32().expect("digit < base");
        x = q;
    }
    out
}

/// Digits certified by a single enclosure.
pub fn digits_of_interval(x: &IntervalReal, base: u32, count: usize) -> DigitString {
    let scale = from_big(num_traits::pow(BigInt::from(base), count));
    let lo = floor(&(x.lo() * &scale));
    let hi = floor(&(x.hi() * &scale));
    let bc = num_traits::pow(BigInt::from(base), count);
    let (ip, rest) = lo.div_mod_floor(&bc);
    let (ip_hi, rest_hi) = hi.div_mod_floor(&bc);
    let digits = to_base(rest, base, count);
    let certified_len = if ip != ip_hi {
        0
    } else {
        let dh = to_base(rest_hi, base, count);
        digits.iter().zip(&dh).take_while(|(a, b)| a == b).count()
    };
    // an undetermined integer part certifies nothing
    DigitString { base, integer_part: ip, digits, certified_len, bits: 0 }
}

/// Expands a value given by a certified producer `bits -> enclosure`,
/// doubling the precision up to `max_bits`. The returned string may be
/// shorter than `count` only when the cap was reached.
pub fn expand_digits<F>(value: F, base: u32, count: usize, bits: u32, max_bits: u32) -> Result<DigitString, DigitsError>
where
    F: Fn(u32) -> Result<IntervalReal, DigitsError>,
{
    if base < 2 {
        return Err(DigitsError::Precondition("base must be >= 2".into()));
    }
    let need = (count as f64 * (base as f64).log2()).ceil() as u32 + 16;
    let mut b = bits.max(need);
    loop {
        let x = value(b)?;
        let mut ds = digits_of_interval(&x, base, count);
        ds.bits = b;
        if ds.certified_len >= count || b >= max_bits {
            return Ok(ds);
        }
        b = b.saturating_mul(2).min(max_bits.max(b + 1));
    }
}

/// Producer for `F_j(z)` with enclosure width `2^-bits`.
pub fn gfun_value(sys: &GFunctionSystem, j: usize, z: Rational) -> impl Fn(u32) -> Result<IntervalReal, DigitsError> + '_ {
    move |bits| Ok(eval_certified(sys, j, &z, &mul_pow2(&Rational::one(), -(bits as i64)))?)
}

/// `N_b(xi, t, n)`: the number of times `a_n .. a_{n+t-1}` repeats from
/// position `n`. Fails when the first mismatch lies beyond the certified
/// digits.
pub fn repetition_count(ds: &DigitString, t: usize, n: usize) -> Result<usize, DigitsError> {
    if t == 0 || n == 0 {
        return Err(DigitsError::Precondition("need t >= 1 and n >= 1".into()));
    }
    let get = |i: usize| ds.digit(i).ok_or(DigitsError::Extend { need: i, have: ds.certified_len });
    for i in n..n + t {
        get(i)?;
    }
    let mut l = 1;
    loop {
        let start = n + l * t;
        for i in 0..t {
            if get(start + i)? != get(n + i)? {
                return Ok(l);
            }
        }
        l += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Convergent {
    pub n: usize,
    pub t: usize,
    pub count: usize,
    pub p_n: BigInt,
    pub q_n: BigInt,
    /// `(b-1) / b^(n + t N)`
    pub block_bound: Rational,
    pub block_ok: Verdict,
    /// `b^(1 - n - t N)`, what `n + tN - 1` shared digits give
    pub match_bound: Rational,
    pub match_ok: Verdict,
}

/// `q_n = b^(n-1)(b^t - 1)`,
/// `p_n = (b^t - 1) floor(b^(n-1) xi) + sum_{i<t} a_{n+i} b^(t-1-i)`, and the
/// two distance bounds checked against the enclosure `xi`.
pub fn theorem2_convergent(ds: &DigitString, xi: &IntervalReal, t: usize, n: usize) -> Result<Theorem2Convergent, DigitsError> {
    let count = repetition_count(ds, t, n)?;
    let b = BigInt::from(ds.base);
    let bn1 = num_traits::pow(b.clone(), n - 1);
    let bt1: BigInt = num_traits::pow(b.clone(), t) - 1;
    let fl: BigInt = &ds.integer_part * &bn1 + ds.block_value(1, n);
    let p_n: BigInt = &bt1 * fl + ds.block_value(n, n + t);
    let q_n: BigInt = bn1 * &bt1;
    let e = n + t * count;
    let block_bound = Rational::new(&b - 1, num_traits::pow(b.clone(), e));
    let match_bound = Rational::new(BigInt::one(), num_traits::pow(b, e - 1));
    let dist = (xi - &IntervalReal::point(Rational::new(p_n.clone(), q_n.clone()))).abs();
    let cmp = |bound: &Rational| {
        if dist.hi() <= bound {
            Verdict::Holds
        } else if dist.lo() > bound {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    };
    let block_ok = cmp(&block_bound);
    let match_ok = cmp(&match_bound);
    if match_ok == Verdict::Fails {
        return Err(DigitsError::Internal(format!("shared-digit bound fails at n = {n}, t = {t}")));
    }
    Ok(Theorem2Convergent { n, t, count, p_n, q_n, block_bound, block_ok, match_bound, match_ok })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepetitionProfile {
    pub t: usize,
    /// `N_b(xi, t, n)` for `n = 1 ..= values.len()`
    pub values: Vec<usize>,
    /// `max N / n` over the window
    pub max_ratio: Rational,
    pub argmax: usize,
    /// descriptive only: max over `m` in the window of `mu` with
    /// `|xi - n/b^m| = b^(-m(1+mu))` at the nearest `n`
    pub empirical_vb: f64,
}

pub fn repetition_profile(ds: &DigitString, xi: &IntervalReal, t: usize, window: usize) -> Result<RepetitionProfile, DigitsError> {
    if window == 0 {
        return Err(DigitsError::Precondition("empty window".into()));
    }
    let values = (1..=window).map(|n| repetition_count(ds, t, n)).collect::<Result<Vec<_>, _>>()?;
    let (argmax, max_ratio) = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, Rational::new(BigInt::from(v), BigInt::from(i + 1))))
        .fold((0, Rational::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
    let mut vb = f64::NEG_INFINITY;
    let lb = (ds.base as f64).ln();
    let mid = (xi.lo() + xi.hi()) / int(2);
    for m in 1..=window {
        let y = &mid * from_big(num_traits::pow(BigInt::from(ds.base), m));
        let f = &y - from_big(floor(&y));
        let delta = to_f64(&f.clone().min(Rational::one() - f));
        if delta > 0.0 {
            vb = vb.max(-delta.ln() / (m as f64 * lb) - 1.0);
        }
    }
    Ok(RepetitionProfile { t, values, max_ratio, argmax, empirical_vb: vb })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Report {
    pub system: String,
    pub a: BigInt,
    pub b: u32,
    pub s: u32,
    pub t: usize,
    pub eps: Rational,
    pub digits: DigitString,
    pub profile: RepetitionProfile,
    /// `max N/n <= eps/t` on the window
    pub empirical_ok: bool,
    /// `b^s > (c_1|a|)^(c_2)`
    pub hyp_b: Verdict,
    /// `b^s > (|a|+1)^(2 c_4 / eps)`
    pub hyp_eps: Verdict,
    /// `log` of the two thresholds on `b^s`
    pub log_threshold_b: IntervalReal,
    pub log_threshold_eps: IntervalReal,
}

/// Window statistics of `N_b(F(a/b^s), t, n)` against `eps/t`, and whether
/// the hypotheses on `b^s` hold.
#[allow(clippy::too_many_arguments)]
pub fn theorem2_bound_check(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: u32,
    s: u32,
    t: usize,
    eps: &Rational,
    window: usize,
    cfg: &ConstantsConfig,
) -> Result<Theorem2Report, DigitsError> {
    if a.is_zero() || b < 2 || s == 0 || t == 0 || !eps.is_positive() {
        return Err(DigitsError::Precondition("need a != 0, b >= 2, s >= 1, t >= 1, eps > 0".into()));
    }
    let bs = num_traits::pow(BigInt::from(b), s as usize);
    let z = Rational::new(a.clone(), bs.clone());
    if sys.c() * z.abs() >= Rational::one() {
        return Err(DigitsError::Precondition("C|a|/b^s >= 1".into()));
    }
    let j = sys.principal();
    let count = window + 8 * t + 64;
    let value = gfun_value(sys, j, z);
    let mut ds = expand_digits(&value, b, count, cfg.bits, cfg.max_bits)?;
    let profile = loop {
        let xi = value(ds.bits)?;
        match repetition_profile(&ds, &xi, t, window) {
            Err(DigitsError::Extend { need, .. }) if ds.certified_len >= need - 1 && need <= 64 * count => {
                ds = expand_digits(&value, b, 2 * need, cfg.bits, cfg.max_bits)?;
            }
            r => break r?,
        }
    };
    let empirical_ok = profile.max_ratio <= eps / int(t as i64);

    let bits = cfg.bits;
    let fc = family_constants(sys, &int(0), cfg)?;
    let lbs = ln_rational(&from_big(bs), bits).map_err(ConstantsError::from)?;
    let la = ln_rational(&from_big(a.abs()), bits).map_err(ConstantsError::from)?;
    let la1 = ln_rational(&from_big(a.abs() + 1), bits).map_err(ConstantsError::from)?;
    let log_threshold_b = (&fc.c1.ln(bits) + &la).scale(&int(fc.c2 as i64));
    let log_threshold_eps = &la1.scale(&(int(2) / eps)) * &fc.c4;
    let gt = |thr: &IntervalReal| {
        if thr.certainly_lt(&lbs) {
            Verdict::Holds
        } else if lbs.certainly_le(thr) {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    };
    Ok(Theorem2Report {
        system: sys.name(),
        a: a.clone(),
        b,
        s,
        t,
        eps: eps.clone(),
        hyp_b: gt(&log_threshold_b),
        hyp_eps: gt(&log_threshold_eps),
        digits: ds,
        profile,
        empirical_ok,
        log_threshold_b,
        log_threshold_eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn exact(x: Rational) -> impl Fn(u32) -> Result<IntervalReal, DigitsError> {
        move |_| Ok(IntervalReal::point(x.clone()))
    }

    fn from_str(s: &str, base: u32) -> DigitString {
        let digits: Vec<u32> = s.chars().map(|c| c.to_digit(36).unwrap()).collect();
        DigitString { base, integer_part: BigInt::zero(), certified_len: digits.len(), digits, bits: 0 }
    }

    #[test]
    fn terminating_expansions_end_in_zeros() {
        let ds = expand_digits(exact(rat(1, 4)), 10, 3, 32, 64).unwrap();
        assert_eq!(ds.to_digit_string(), "250");
        let ds = expand_digits(exact(rat(1, 3)), 3, 5, 32, 64).unwrap();
        assert_eq!(ds.to_digit_string(), "10000");
    }

    #[test]
    fn negative_values_use_floor() {
        let ds = expand_digits(exact(rat(-3, 10)), 10, 2, 32, 64).unwrap();
        assert_eq!(ds.integer_part, BigInt::from(-1));
        assert_eq!(ds.to_digit_string(), "70");
    }

    #[test]
    fn long_division_agrees() {
        for (num, den) in [(1i64, 7i64), (22, 7), (5, 13), (1, 97)] {
            let ds = expand_digits(exact(rat(num, den)), 10, 40, 32, 64).unwrap();
            let mut r = num % den;
            let mut s = String::new();
            for _ in 0..40 {
                r *= 10;
                s.push(char::from(b'0' + (r / den) as u8));
                r %= den;
            }
            assert_eq!(ds.to_digit_string(), s);
            assert_eq!(ds.integer_part, BigInt::from(num / den));
        }
    }

    #[test]
    fn straddling_cell_is_not_certified() {
        let x = IntervalReal::new(rat(99, 1000), rat(101, 1000)).unwrap();
        let ds = digits_of_interval(&x, 10, 3);
        assert_eq!(ds.certified_len, 0);
        let x = IntervalReal::new(rat(1234, 10000), rat(1236, 10000)).unwrap();
        assert_eq!(digits_of_interval(&x, 10, 4).certified_len, 3);
    }

    #[test]
    fn repetition_examples() {
        assert_eq!(repetition_count(&from_str("11123", 10), 1, 1).unwrap(), 3);
        let d = from_str("123123124", 10);
        assert_eq!(repetition_count(&d, 3, 1).unwrap(), 2);
        // 231|231|24...
        assert_eq!(repetition_count(&d, 3, 2).unwrap(), 2);
        assert!(matches!(repetition_count(&from_str("1111", 10), 1, 1), Err(DigitsError::Extend { .. })));
    }

    #[test]
    fn convergent_example() {
        let xi = rat(11123, 100000);
        let ds = expand_digits(exact(xi.clone()), 10, 10, 32, 64).unwrap();
        let c = theorem2_convergent(&ds, &IntervalReal::point(xi), 1, 1).unwrap();
        assert_eq!(c.count, 3);
        assert_eq!(c.q_n, BigInt::from(9));
        assert_eq!(c.p_n, BigInt::from(1));
        assert_eq!(c.block_bound, rat(9, 10000));
        assert_eq!(c.block_ok, Verdict::Holds);
    }

    #[test]
    fn li2_tenth_digits_and_convergents() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let v = gfun_value(&s, 2, rat(1, 10));
        let ds = expand_digits(&v, 10, 60, 64, 4096).unwrap();
        assert!(ds.to_digit_string().starts_with("10261779109939"));
        let ds2 = expand_digits(&v, 10, 60, 2 * ds.bits, 8192).unwrap();
        assert_eq!(ds.digits, ds2.digits);
        let xi = v(ds.bits).unwrap();
        // n = 10, t = 1: pattern "0" then 9s; the printed bound is exceeded
        let c = theorem2_convergent(&ds, &xi, 1, 10).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.block_ok, Verdict::Fails);
        assert_eq!(c.match_ok, Verdict::Holds);
        let c = theorem2_convergent(&ds, &xi, 2, 20).unwrap();
        assert_eq!(c.match_ok, Verdict::Holds);
    }

    #[test]
    fn bound_check_reports_unmet_hypotheses() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let cfg = ConstantsConfig { bits: 128, ..Default::default() };
        let r = theorem2_bound_check(&s, &BigInt::one(), 10, 1, 1, &rat(1, 1), 100, &cfg).unwrap();
        assert_eq!(r.hyp_b, Verdict::Fails);
        assert_eq!(r.hyp_eps, Verdict::Fails);
        assert!(r.profile.values.iter().all(|&v| v >= 1));
        assert!(r.empirical_ok);
        let eps = &r.profile.max_ratio * int(1);
        let r2 = theorem2_bound_check(&s, &BigInt::one(), 10, 1, 1, &eps, 100, &cfg).unwrap();
        assert!(r2.empirical_ok);
    }
}
