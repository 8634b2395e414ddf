//! Intervals with exact rational endpoints, and enclosures of `exp`, `log`
//! and square roots built from integer fixed-point series with explicit
//! error accounting. No floating point is involved anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{
    ceil, floor, floor_log2, from_big, int, mul_pow2, round_down_abs, round_down_rel,
    round_up_abs, round_up_rel, to_decimal, Rational,
};
use super::ExactError;

/// Closed interval `[lo, hi]` enclosing a real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalReal {
    lo: Rational,
    hi: Rational,
}

impl IntervalReal {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(IntervalReal { lo, hi })
    }

    fn ordered(a: Rational, b: Rational) -> Self {
        if a <= b {
            IntervalReal { lo: a, hi: b }
        } else {
            IntervalReal { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        IntervalReal { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &IntervalReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &IntervalReal) -> Option<IntervalReal> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(IntervalReal { lo, hi })
    }

    /// Every point is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified `self < other`.
    pub fn certainly_lt(&self, other: &IntervalReal) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &IntervalReal) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt_rat(&self, x: &Rational) -> bool {
        &self.hi < x
    }

    pub fn certainly_gt_rat(&self, x: &Rational) -> bool {
        &self.lo > x
    }

    pub fn certainly_ge_rat(&self, x: &Rational) -> bool {
        &self.lo >= x
    }

    pub fn abs(&self) -> IntervalReal {
        if self.lo.is_negative() && self.hi.is_positive() {
            IntervalReal { lo: Rational::zero(), hi: (-&self.lo).max(self.hi.clone()) }
        } else if self.hi.is_positive() || self.hi.is_zero() && !self.lo.is_negative() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn scale(&self, c: &Rational) -> IntervalReal {
        IntervalReal::ordered(&self.lo * c, &self.hi * c)
    }

    pub fn recip(&self) -> Result<IntervalReal, ExactError> {
        if self.contains_zero() {
            return Err(ExactError::Domain("reciprocal of an interval containing 0".into()));
        }
        Ok(IntervalReal::ordered(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &IntervalReal) -> Result<IntervalReal, ExactError> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: u32) -> IntervalReal {
        let mut acc = IntervalReal::point(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Outward rounding of both endpoints to `bits` significant bits.
    pub fn round_rel(&self, bits: u32) -> IntervalReal {
        IntervalReal { lo: round_down_rel(&self.lo, bits), hi: round_up_rel(&self.hi, bits) }
    }

    /// Outward rounding of both endpoints onto the grid `2^-bits`.
    pub fn round_abs(&self, bits: i64) -> IntervalReal {
        IntervalReal { lo: round_down_abs(&self.lo, bits), hi: round_up_abs(&self.hi, bits) }
    }

    /// `floor` of every point, when it is the same integer.
    pub fn floor(&self) -> Option<BigInt> {
        let a = floor(&self.lo);
        (a == floor(&self.hi)).then_some(a)
    }

    /// Nearest integer to every point, ties broken toward the even integer;
    /// `None` when the interval does not determine it.
    pub fn round_half_even(&self) -> Option<BigInt> {
        let a = round_half_even(&self.lo);
        (a == round_half_even(&self.hi)).then_some(a)
    }

    pub fn exp(&self, bits: u32) -> IntervalReal {
        IntervalReal { lo: exp_rational(&self.lo, bits).lo, hi: exp_rational(&self.hi, bits).hi }
    }

    pub fn ln(&self, bits: u32) -> Result<IntervalReal, ExactError> {
        if !self.is_positive() {
            return Err(ExactError::Domain("logarithm of a non-positive interval".into()));
        }
        Ok(IntervalReal { lo: ln_rational(&self.lo, bits)?.lo, hi: ln_rational(&self.hi, bits)?.hi })
    }

    pub fn sqrt(&self, bits: u32) -> Result<IntervalReal, ExactError> {
        if self.lo.is_negative() {
            return Err(ExactError::Domain("square root of a negative number".into()));
        }
        Ok(IntervalReal { lo: sqrt_rational(&self.lo, bits).lo, hi: sqrt_rational(&self.hi, bits).hi })
    }

    /// `self^e` for a positive interval and rational exponent.
    pub fn powr(&self, e: &Rational, bits: u32) -> Result<IntervalReal, ExactError> {
        if e.is_zero() {
            return Ok(IntervalReal::point(Rational::one()));
        }
        Ok(self.ln(bits)?.scale(e).exp(bits))
    }

    /// Endpoints as decimals with `digits` fractional digits, rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        let ulp = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
        let up = ceil(&(&self.hi / &ulp));
        (to_decimal(&self.lo, digits), to_decimal(&(from_big(up) * ulp), digits))
    }
}

fn round_half_even(x: &Rational) -> BigInt {
    let f = floor(x);
    let frac = x - from_big(f.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal => {
            if f.is_even() {
                f
            } else {
                f + 1
            }
        }
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &IntervalReal {
    type Output = IntervalReal;
    fn add(self, rhs: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &IntervalReal {
    type Output = IntervalReal;
    fn sub(self, rhs: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &IntervalReal {
    type Output = IntervalReal;
    fn mul(self, rhs: &IntervalReal) -> IntervalReal {
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        IntervalReal { lo, hi }
    }
}

impl Neg for &IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        IntervalReal { lo: -&self.hi, hi: -&self.lo }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntervalReal {
            type Output = IntervalReal;
            fn $m(self, rhs: IntervalReal) -> IntervalReal {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Number of bits needed for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    // log2(10) < 3.3220
    digits.saturating_mul(3322) / 1000 + 1
}

fn bitlen(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Fixed-point value `v / 2^w` with an absolute error of at most `err / 2^w`.
struct Fixed {
    v: BigInt,
    err: BigInt,
    w: u32,
}

impl Fixed {
    fn interval(&self) -> IntervalReal {
        let lo = mul_pow2(&from_big(&self.v - &self.err), -(self.w as i64));
        let hi = mul_pow2(&from_big(&self.v + &self.err), -(self.w as i64));
        IntervalReal { lo, hi }
    }
}

/// `atanh(t)` for `|t| <= 1/3`.
fn atanh_fixed(t: &Rational, w: u32) -> Fixed {
    let (tn, td) = (t.numer(), t.denom());
    let t2n = tn * tn;
    let t2d = td * td;
    let mut pw: BigInt = (tn << w as usize) / td;
    let mut e_pw = BigInt::one();
    let mut sum = pw.clone();
    let mut err = BigInt::one();
    let mut i: u64 = 0;
    while pw.abs() > BigInt::one() {
        i += 1;
        pw = &pw * &t2n / &t2d;
        e_pw += 1;
        let term = &pw / BigInt::from(2 * i + 1);
        sum += term;
        err += &e_pw + 1;
    }
    // remaining tail: sum over i' > i of |t|^(2i'+1) / (2i'+1) <= (|pw| + e_pw) t^2 / (1 - t^2)
    err += (pw.abs() + &e_pw) / 8 + 1;
    Fixed { v: sum, err, w }
}

/// `exp(x)` for `|x| <= 1/2`.
fn exp_small_fixed(x: &Rational, w: u32) -> Fixed {
    let (xn, xd) = (x.numer(), x.denom());
    let mut term: BigInt = BigInt::one() << w as usize;
    let mut e_term = BigInt::zero();
    let mut sum = term.clone();
    let mut err = BigInt::zero();
    let mut i: u64 = 0;
    while term.abs() > BigInt::one() {
        i += 1;
        term = &term * xn / (xd * BigInt::from(i));
        e_term += 1;
        sum += &term;
        err += &e_term;
    }
    // tail ratio is at most |x| / (i + 1) <= 1/4
    err += term.abs() + &e_term + 1;
    Fixed { v: sum, err, w }
}

fn ln2_cache() -> &'static Mutex<BTreeMap<u32, IntervalReal>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, IntervalReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Enclosure of `log 2` with about `bits` bits of absolute accuracy.
pub fn ln2(bits: u32) -> IntervalReal {
    if let Ok(cache) = ln2_cache().lock() {
        if let Some((_, v)) = cache.range(bits..).next() {
            return v.clone();
        }
    }
    let w = bits + 16;
    // log 2 = 2 atanh(1/3)
    let f = atanh_fixed(&Rational::new(1.into(), 3.into()), w);
    let v = f.interval().scale(&int(2));
    if let Ok(mut cache) = ln2_cache().lock() {
        cache.insert(bits, v.clone());
    }
    v
}

/// Enclosure of `e`.
pub fn e_const(bits: u32) -> IntervalReal {
    exp_rational(&Rational::one(), bits)
}

/// `exp(x)` to about `bits` significant bits.
pub fn exp_rational(x: &Rational, bits: u32) -> IntervalReal {
    if x.is_zero() {
        return IntervalReal::point(Rational::one());
    }
    if x.is_negative() {
        let r = exp_rational(&-x, bits);
        return IntervalReal { lo: r.hi.recip(), hi: r.lo.recip() }.round_rel(bits + 4);
    }
    // x / 2^s <= 1/2
    let s = (floor_log2(x) + 2).max(0) as u32;
    let w = bits + s + 16;
    let r = mul_pow2(x, -(s as i64));
    let rl = round_down_abs(&r, w as i64);
    let rh = round_up_abs(&r, w as i64);
    let mut acc = IntervalReal { lo: exp_small_fixed(&rl, w).interval().lo, hi: exp_small_fixed(&rh, w).interval().hi };
    for _ in 0..s {
        acc = (&acc * &acc).round_rel(w);
    }
    acc.round_rel(bits + 4)
}

/// `log(x)` for rational `x > 0`, to about `bits` bits of absolute accuracy
/// (relative to `max(1, |log x|)`).
pub fn ln_rational(x: &Rational, bits: u32) -> Result<IntervalReal, ExactError> {
    if !x.is_positive() {
        return Err(ExactError::Domain(format!("logarithm of non-positive {x}")));
    }
    if x.is_one() {
        return Ok(IntervalReal::point(Rational::zero()));
    }
    let k = floor_log2(x);
    let w = bits + bitlen(k.unsigned_abs() as usize) + 16;
    let y = mul_pow2(x, -k); // 1 <= y < 2
    let mut yl = round_down_abs(&y, w as i64);
    let yh = round_up_abs(&y, w as i64);
    if yl < Rational::one() {
        yl = Rational::one();
    }
    let at = |v: &Rational| {
        let t = (v - Rational::one()) / (v + Rational::one());
        atanh_fixed(&t, w).interval().scale(&int(2))
    };
    let (ll, lh) = (at(&yl), at(&yh));
    let frac = IntervalReal { lo: ll.lo, hi: lh.hi };
    let whole = ln2(w).scale(&int(k));
    Ok((&whole + &frac).round_rel(w))
}

/// `sqrt(x)` for rational `x >= 0` to `bits` significant bits; exact squares
/// give a point interval.
pub fn sqrt_rational(x: &Rational, bits: u32) -> IntervalReal {
    if x.is_zero() {
        return IntervalReal::point(Rational::zero());
    }
    let nd = x.numer() * x.denom();
    let have = nd.bits() as i64;
    let k = ((2 * bits as i64 + 4 - have) / 2 + 1).max(0) as usize;
    let scaled = &nd << (2 * k);
    let s = scaled.sqrt();
    let den = x.denom() << k;
    if &s * &s == scaled {
        return IntervalReal::point(Rational::new(s, den));
    }
    IntervalReal { lo: Rational::new(s.clone(), den.clone()), hi: Rational::new(s + 1, den) }
}

/// A real number that can produce enclosures of any requested width.
pub trait CertifiedReal {
    fn enclose(&self, width: &Rational) -> Result<IntervalReal, ExactError>;
}

impl CertifiedReal for Rational {
    fn enclose(&self, _width: &Rational) -> Result<IntervalReal, ExactError> {
        Ok(IntervalReal::point(self.clone()))
    }
}

/// `sum_{n >= 0} ratio^n`.
#[derive(Clone, Debug)]
pub struct GeometricSeries {
    pub ratio: Rational,
}

impl CertifiedReal for GeometricSeries {
    fn enclose(&self, width: &Rational) -> Result<IntervalReal, ExactError> {
        let one = Rational::one();
        let r = self.ratio.clone();
        let z = r.abs();
        series_with_geometric_tail(|n| num_traits::pow(r.clone(), n), &one, &z, width)
    }
}

/// Enclosure of `x` of width at most `width`, checked.
pub fn interval_refine<P: CertifiedReal + ?Sized>(
    x: &P,
    width: &Rational,
) -> Result<IntervalReal, ExactError> {
    if !width.is_positive() {
        return Err(ExactError::Domain("refinement width must be positive".into()));
    }
    let iv = x.enclose(width)?;
    if iv.width() > *width {
        return Err(ExactError::Internal(format!(
            "producer returned width {} above the requested {}",
            iv.width(),
            width
        )));
    }
    Ok(iv)
}

/// Encloses `sum_{n >= 0} term(n)` where `|term(n)| <= c^(n+1) |z|^n`
/// (`term` already includes `z^n`). The tail past `M` is bounded by the
/// geometric majorant `c^(M+2) |z|^(M+1) / (1 - c|z|)`.
pub fn series_with_geometric_tail<F>(
    term: F,
    c: &Rational,
    z_abs: &Rational,
    width: &Rational,
) -> Result<IntervalReal, ExactError>
where
    F: Fn(usize) -> Rational,
{
    let cz = c * z_abs;
    if cz >= Rational::one() {
        return Err(ExactError::NoTailBound);
    }
    if !width.is_positive() {
        return Err(ExactError::Domain("width must be positive".into()));
    }
    if z_abs.is_zero() {
        return Ok(IntervalReal::point(term(0)));
    }
    let target = width / int(4);
    let one_minus = Rational::one() - &cz;
    // tail after including n = 0..=m
    let mut m = 0usize;
    let mut tail = c * c * z_abs / &one_minus;
    while tail > target {
        m += 1;
        tail *= &cz;
    }
    let mut sum = Rational::zero();
    for n in 0..=m {
        sum += term(n);
    }
    // the exact partial sum keeps refinements nested; only the final
    // outward rounding lands on the (nested) dyadic grids
    let w_final = (-floor_log2(&(width / int(8)))).max(0) + 1;
    let lo = &sum - &tail;
    let hi = &sum + &tail;
    Ok(IntervalReal { lo, hi }.round_abs(w_final))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn tiny(bits: u32) -> Rational {
        mul_pow2(&Rational::one(), -(bits as i64))
    }

    #[test]
    fn ln2_known_digits() {
        let l = ln2(200);
        // log 2 = 0.693147180559945309417232121458176568...
        let lo = crate::exact::rational::parse_rational("0.693147180559945309417232121458176568").unwrap();
        let hi = crate::exact::rational::parse_rational("0.693147180559945309417232121458176569").unwrap();
        assert!(l.lo() >= &lo && l.hi() <= &hi, "{l}");
        assert!(l.width() < tiny(190));
    }

    #[test]
    fn e_known_digits() {
        let e = e_const(200);
        let lo = crate::exact::rational::parse_rational("2.718281828459045235360287471352662497").unwrap();
        let hi = crate::exact::rational::parse_rational("2.718281828459045235360287471352662498").unwrap();
        assert!(e.lo() >= &lo && e.hi() <= &hi, "{e}");
    }

    #[test]
    fn exp_and_ln_invert() {
        for x in [rat(66, 1), rat(-7, 3), rat(1, 1000), rat(2002, 1)] {
            let ex = exp_rational(&x, 150);
            let back = ex.ln(150).unwrap();
            assert!(back.contains(&x), "x = {x}: {back}");
            assert!(back.width() < tiny(100));
        }
    }

    #[test]
    fn ln_of_power_of_two() {
        let l = ln_rational(&int(1024), 120).unwrap();
        assert!(l.contains_interval(&ln2(130).scale(&int(10))) || l.intersects(&ln2(130).scale(&int(10))));
        assert!(ln_rational(&int(0), 10).is_err());
        assert_eq!(ln_rational(&int(1), 10).unwrap(), IntervalReal::point(int(0)));
    }

    #[test]
    fn sqrt_bounds() {
        let s = sqrt_rational(&int(2), 100);
        assert!(s.lo() * s.lo() < int(2) && s.hi() * s.hi() > int(2));
        assert!(s.width() < tiny(95));
        assert!(sqrt_rational(&rat(9, 4), 50).is_point());
    }

    #[test]
    fn refine_constant_is_exact() {
        let third = rat(1, 3);
        let iv = interval_refine(&third, &rat(1, 1_000_000)).unwrap();
        assert_eq!(iv, IntervalReal::point(third));
    }

    #[test]
    fn refine_geometric() {
        let g = GeometricSeries { ratio: rat(1, 2) };
        let w = rat(1, 1000);
        let iv = interval_refine(&g, &w).unwrap();
        assert!(iv.contains(&int(2)));
        assert!(iv.width() <= w);
        let finer = interval_refine(&g, &rat(1, 2000)).unwrap();
        assert!(iv.contains_interval(&finer));
        assert!(matches!(
            interval_refine(&GeometricSeries { ratio: int(1) }, &w),
            Err(ExactError::NoTailBound)
        ));
    }

    #[test]
    fn li2_at_tenth_nests_under_doubling() {
        // Li2(1/10) = sum z^n / n^2
        let z = rat(1, 10);
        let term = |n: usize| {
            if n == 0 {
                int(0)
            } else {
                num_traits::pow(z.clone(), n) / int((n * n) as i64)
            }
        };
        let w = mul_pow2(&Rational::one(), -67); // < 1e-20
        let a = series_with_geometric_tail(term, &int(1), &z, &w).unwrap();
        let w2 = &w * &w;
        let b = series_with_geometric_tail(term, &int(1), &z, &w2).unwrap();
        assert!(a.contains_interval(&b));
        // Li2(0.1) = 0.10261779...
        assert!(a.contains(&rat(1026177911, 10_000_000_000)) || a.lo() > &rat(10261779, 100_000_000));
        assert!(a.hi() < &rat(10261780, 100_000_000));
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(IntervalReal::point(rat(5, 2)).round_half_even(), Some(BigInt::from(2)));
        assert_eq!(IntervalReal::point(rat(7, 2)).round_half_even(), Some(BigInt::from(4)));
        assert_eq!(IntervalReal::point(rat(-5, 2)).round_half_even(), Some(BigInt::from(-2)));
        assert_eq!(IntervalReal::new(rat(1, 3), rat(2, 3)).unwrap().round_half_even(), None);
    }

    proptest::proptest! {
        #[test]
        fn interval_ops_enclose_samples(a in -100i64..100, b in 1i64..20, c in -100i64..100, d in 1i64..20) {
            let x = rat(a, b);
            let y = rat(c, d);
            let ix = IntervalReal::new(&x - rat(1, 7), &x + rat(1, 9)).unwrap();
            let iy = IntervalReal::new(&y - rat(1, 5), y.clone()).unwrap();
            proptest::prop_assert!((&ix + &iy).contains(&(&x + &y)));
            proptest::prop_assert!((&ix - &iy).contains(&(&x - &y)));
            proptest::prop_assert!((&ix * &iy).contains(&(&x * &y)));
            proptest::prop_assert!(ix.abs().contains(&x.abs()));
        }

        #[test]
        fn geometric_refinement_nests(num in 1i64..9, k in 4u32..40) {
            let g = GeometricSeries { ratio: rat(num, 10) };
            let w = mul_pow2(&Rational::one(), -(k as i64));
            let coarse = interval_refine(&g, &w).unwrap();
            let fine = interval_refine(&g, &(&w / int(2))).unwrap();
            proptest::prop_assert!(coarse.contains_interval(&fine));
        }
    }
}
