//! Height and remainder bounds for the iterated approximants, and the
//! explicit constants `chi, c_1, ..., c_8`, `x, y, h, beta` of the
//! parameter choice, with the feasibility condition on `(a, b)` evaluated
//! as a certified interval inequality.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::derivation::IteratedFamily;
use crate::exact::interval::{digits_to_bits, ln2, ln_rational};
use crate::exact::rational::{from_big, int, rat};
use crate::exact::{ExactError, IntervalReal, PowerProduct, Rational};
use crate::gfun::{Family, GFunctionSystem};
use crate::pade::{siegel_log_core, PadeApproximant, PadeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstantsError {
    #[error("verified range {have} insufficient, need {need}")]
    VerifiedRange { have: usize, need: usize },
    #[error("C|z| >= 1: no remainder bound")]
    Divergent,
    #[error("hypothesis (3) fails: x <= N + 1")]
    Hypothesis3,
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("indeterminate at precision cap: {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// Compares `lhs < rhs`, escalating precision from `bits` to `max_bits`.
fn decide_lt<F>(mut f: F, bits: u32, max_bits: u32) -> Verdict
where
    F: FnMut(u32) -> Option<(IntervalReal, IntervalReal)>,
{
    let mut b = bits;
    loop {
        let Some((l, r)) = f(b) else { return Verdict::Indeterminate };
        if l.certainly_lt(&r) {
            return Verdict::Holds;
        }
        if r.certainly_le(&l) {
            return Verdict::Fails;
        }
        if b >= max_bits {
            return Verdict::Indeterminate;
        }
        b = (b * 2).min(max_bits);
    }
}

/// Precision settings and the unspecified effective constants.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantsConfig {
    pub h0: Rational,
    pub h1: Rational,
    pub h2: Rational,
    pub bits: u32,
    pub max_bits: u32,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            h0: int(1),
            h1: int(1),
            h2: int(1),
            bits: digits_to_bits(128),
            max_bits: digits_to_bits(1024),
        }
    }
}

fn ensure_range(sys: &GFunctionSystem, need: usize) -> Result<(), ConstantsError> {
    if sys.verified_range() < need {
        sys.verify_growth(need);
    }
    let have = sys.verified_range();
    if have < need {
        return Err(ConstantsError::VerifiedRange { have, need });
    }
    Ok(())
}

/// Exact rational upper bound
/// `2^(2q+(d-1)k+1) H(D)^k (q (CD)^(p+h+1))^(Nh/(q+1-Nh))` on `H(Q_k)`.
pub fn bound_height_qk(approx: &PadeApproximant, sys: &GFunctionSystem, k: usize) -> Result<Rational, ConstantsError> {
    let (p, q, h) = (approx.p, approx.q, approx.h);
    ensure_range(sys, p + h)?;
    let core = siegel_log_core(sys, p, q, h, 96)?.exp(96);
    let pre = num_traits::pow(int(2), 2 * q + (sys.d() - 1) * k + 1) * num_traits::pow(sys.dpoly_height(), k);
    Ok(pre * core.hi())
}

/// `H(Q_k)(q+k(d-1)+1) max(1,C)^(q+k(d-1)) (C|z|)^(p+h+1-k) / (1 - C|z|)`,
/// exact, with the computed `H(Q_k)`.
pub fn bound_remainder(fam: &IteratedFamily, sys: &GFunctionSystem, k: usize, z: &Rational) -> Result<Rational, ConstantsError> {
    if k > fam.k_max {
        return Err(ConstantsError::Precondition(format!("k = {k} beyond family k_max = {}", fam.k_max)));
    }
    let c = sys.c();
    let cz = c * z.abs();
    if cz >= Rational::one() {
        return Err(ConstantsError::Divergent);
    }
    let (p, q, h) = (fam.base.p, fam.base.q, fam.base.h);
    let deg = q + k * (sys.d() - 1);
    let e = (p + h + 1).saturating_sub(k);
    let cmax = c.clone().max(Rational::one());
    Ok(fam.qk[k].height() * int(deg as i64 + 1) * num_traits::pow(cmax, deg) * num_traits::pow(cz.clone(), e)
        / (Rational::one() - cz))
}

/// Constants that depend only on the system (and `t` for `c_3, c_5`).
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConstants {
    pub chi: PowerProduct,
    pub c1: PowerProduct,
    pub c2: usize,
    pub y: Rational,
    pub c5: Rational,
    pub c3: Rational,
    pub c6: PowerProduct,
    pub c7: IntervalReal,
    pub c8: IntervalReal,
    pub c4: IntervalReal,
    pub closed_form_c4: Option<ClosedFormC4>,
}

/// Comparison with the closed form printed for `Li_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormC4 {
    pub value: IntervalReal,
    /// `|c4 - closed form| / closed form`
    pub rel_diff: IntervalReal,
    /// relative difference not certified below 1%
    pub discrepancy: bool,
    /// the recomputed `c_4` is certified below `10^5.78`
    pub below_10_578: bool,
}

/// `1201779/48 + 1185019/(3 log 2) + 396 log 2`
pub fn closed_form_c4_li2(bits: u32) -> IntervalReal {
    let l2 = ln2(bits);
    let a = IntervalReal::point(rat(1201779, 48));
    let b = l2.scale(&int(3)).recip().expect("log 2 > 0").scale(&int(1185019));
    &(&a + &b) + &l2.scale(&int(396))
}

/// `log(10^5.78) = 5.78 log 10`
fn ln_10_578(bits: u32) -> IntervalReal {
    ln_rational(&int(10), bits).expect("10 > 0").scale(&rat(578, 100))
}

fn cd_ge1(sys: &GFunctionSystem) -> (PowerProduct, Rational) {
    let c = sys.c().clone().max(Rational::one());
    let cd = PowerProduct::from_rational(&c).unwrap_or_default().mul(sys.dgrowth());
    (cd, c)
}

pub fn family_constants(sys: &GFunctionSystem, t: &Rational, cfg: &ConstantsConfig) -> Result<FamilyConstants, ConstantsError> {
    if t.is_negative() {
        return Err(ConstantsError::Precondition("t must be >= 0".into()));
    }
    let n = sys.n() as i64;
    let d = sys.d() as i64;
    let bits = cfg.bits;
    let (cd, c) = cd_ge1(sys);
    let hd = PowerProduct::from_rational(&sys.dpoly_height())?;
    let cpp = PowerProduct::from_rational(&c)?;
    let chi = PowerProduct::from_int(4).mul(&hd).mul(&cd.pow(&int(8 * n * d + 1))).mul(&cpp);
    let c2 = 3 * (sys.n() + 2);
    let y = rat(1, 4 * (d + 1));
    let c5 = [cfg.h0.clone(), cfg.h1.clone(), cfg.h2.clone(), int(8 * n * n * d * d * d), t * int(4)]
        .into_iter()
        .max()
        .unwrap_or_default();
    let c3 = &c5 / int(3);
    let c6 = sys
        .dgrowth()
        .pow(&(int(1) + rat(d, (n + 2) * (d + 1))))
        .mul(&PowerProduct::from_int(2).pow(&rat(8 * n + 1, 4 * n + 8)))
        .mul(&hd.pow(&rat(1, 4 * (n + 2) * (d + 1))))
        .mul(&cd.pow(&rat(4 * n * (n + 3) * (d + 1), n + 2)));
    let l2 = ln2(bits);
    let c7 = chi.ln(bits).scale(&int(6 * (n + 2) * (n + 2)));
    let ln_2c6 = &c6.ln(bits) + &l2;
    let c8 = &ln_2c6.div(&l2)? * &c7;
    let c4 = &c8 + &c6.ln(bits).div(&l2)?;
    let closed_form_c4 = match sys.family() {
        Family::Polylog { s: 2 } => {
            let value = closed_form_c4_li2(bits);
            let rel_diff = (&c4 - &value).abs().div(&value)?;
            Some(ClosedFormC4 {
                discrepancy: !rel_diff.certainly_lt_rat(&rat(1, 100)),
                below_10_578: c4.ln(bits)?.certainly_lt(&ln_10_578(bits)),
                value,
                rel_diff,
            })
        }
        _ => None,
    };
    Ok(FamilyConstants { c1: chi.clone(), chi, c2, y, c5, c3, c6, c7, c8, c4, closed_form_c4 })
}

/// Everything computed for one `(a, b, t, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantsReport {
    pub system: String,
    pub a: BigInt,
    pub b: BigInt,
    pub t: Rational,
    pub m: u64,
    pub family: FamilyConstants,
    pub x: IntervalReal,
    pub h: u64,
    pub p: u64,
    pub q: u64,
    /// `b^(t/h)`; absent when `h = 0`
    pub beta: Option<IntervalReal>,
    /// `b > (c_1 |a|)^(c_2)`
    pub hyp3: Verdict,
    pub eqhyp: Verdict,
    pub config: ConstantsConfig,
}

/// `log(chi |a|)`
fn ln_chi_a(fc: &FamilyConstants, a: &BigInt, bits: u32) -> Result<IntervalReal, ConstantsError> {
    Ok(&fc.chi.ln(bits) + &ln_rational(&from_big(a.abs()), bits)?)
}

/// `x = log b / (3 log(chi |a|))`
pub fn x_value(fc: &FamilyConstants, a: &BigInt, b: &BigInt, bits: u32) -> Result<IntervalReal, ConstantsError> {
    let lb = ln_rational(&from_big(b.clone()), bits)?;
    Ok(lb.div(&ln_chi_a(fc, a, bits)?.scale(&int(3)))?)
}

fn floor_certified<F>(f: F, cfg: &ConstantsConfig, what: &str) -> Result<BigInt, ConstantsError>
where
    F: Fn(u32) -> Result<IntervalReal, ConstantsError>,
{
    let mut bits = cfg.bits;
    loop {
        if let Some(v) = f(bits)?.floor() {
            return Ok(v);
        }
        if bits >= cfg.max_bits {
            return Err(ConstantsError::Indeterminate(what.to_string()));
        }
        bits = (bits * 2).min(cfg.max_bits);
    }
}

pub fn compute_constants(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    t: &Rational,
    m: u64,
    cfg: &ConstantsConfig,
) -> Result<ConstantsReport, ConstantsError> {
    if a.is_zero() || *b < BigInt::from(2) || m < 1 {
        return Err(ConstantsError::Precondition("need a != 0, b >= 2, m >= 1".into()));
    }
    let fc = family_constants(sys, t, cfg)?;
    let n1 = int(sys.n() as i64 + 1);
    let bits = cfg.bits;
    let x = x_value(&fc, a, b, bits)?;
    // x - N - 1 must be certified positive
    let mut bb = bits;
    loop {
        let xs = x_value(&fc, a, b, bb)?;
        if xs.certainly_gt_rat(&n1) {
            break;
        }
        if xs.hi() <= &n1 || bb >= cfg.max_bits {
            return Err(ConstantsError::Hypothesis3);
        }
        bb = (bb * 2).min(cfg.max_bits);
    }
    let mm = int(m as i64);
    let h = floor_certified(
        |bits| {
            let xv = x_value(&fc, a, b, bits)?;
            Ok(IntervalReal::point(mm.clone()).div(&(&xv - &IntervalReal::point(n1.clone())))?)
        },
        cfg,
        "h = floor(m / (x - N - 1))",
    )?;
    let h = h.to_u64().ok_or_else(|| ConstantsError::Precondition("h out of range".into()))?;
    let hr = int(h as i64);
    let p = floor_certified(|bits| Ok(x_value(&fc, a, b, bits)?.scale(&hr)), cfg, "p = floor(x h)")?;
    let q = (&(int(sys.n() as i64) + &fc.y) * &hr).floor().to_integer();
    let beta = (h > 0)
        .then(|| ln_rational(&from_big(b.clone()), bits).map(|l| l.scale(&(t / &hr)).exp(bits)))
        .transpose()?;
    let c2 = int(fc.c2 as i64);
    let hyp3 = decide_lt(
        |bits| {
            let lhs = ln_chi_a(&fc, a, bits).ok()?.scale(&c2);
            let rhs = ln_rational(&from_big(b.clone()), bits).ok()?;
            Some((lhs, rhs))
        },
        bits,
        cfg.max_bits,
    );
    let eqhyp = if h == 0 {
        Verdict::Fails
    } else {
        check_eqhyp(sys, a, b, &fc.y, t, h, cfg, &|bits| x_value(&fc, a, b, bits))?
    };
    Ok(ConstantsReport {
        system: sys.name(),
        a: a.clone(),
        b: b.clone(),
        t: t.clone(),
        m,
        family: fc,
        x,
        h,
        p: p.to_u64().unwrap_or(u64::MAX),
        q: q.to_u64().unwrap_or(u64::MAX),
        beta,
        hyp3,
        eqhyp,
        config: cfg.clone(),
    })
}

/// Log of the left side of the feasibility condition
/// `2^(2(N+y)+(d-1)y) H(D)^y (CD)^((x+1)N/y) C^(N+dy) (Ca/b)^(x+1-y) (bD)^(x+dy) beta`.
#[allow(clippy::too_many_arguments)]
pub fn eqhyp_log_lhs(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    x: &IntervalReal,
    y: &Rational,
    t: &Rational,
    h: u64,
    bits: u32,
) -> Result<IntervalReal, ConstantsError> {
    let n = int(sys.n() as i64);
    let d = int(sys.d() as i64);
    let (cd, c) = cd_ge1(sys);
    let one = IntervalReal::point(Rational::one());
    let pt = |r: Rational| IntervalReal::point(r);
    let l2 = ln2(bits);
    let lh = ln_rational(&sys.dpoly_height(), bits)?;
    let lcd = cd.ln(bits);
    let lc = ln_rational(&c, bits)?;
    let la = ln_rational(&from_big(a.abs()), bits)?;
    let lb = ln_rational(&from_big(b.clone()), bits)?;
    let ld = sys.dgrowth().ln(bits);
    let e2 = int(2) * (&n + y) + (&d - int(1)) * y;
    let mut acc = l2.scale(&e2);
    acc = &acc + &lh.scale(y);
    acc = &acc + &(&(x + &one) * &lcd).scale(&(&n / y));
    acc = &acc + &lc.scale(&(&n + &d * y));
    acc = &acc + &(&(x + &pt(Rational::one() - y)) * &(&(&lc + &la) - &lb));
    acc = &acc + &(&(x + &pt(&d * y)) * &(&lb + &ld));
    acc = &acc + &lb.scale(&(t / int(h as i64)));
    Ok(acc)
}

/// Certified check that the feasibility condition's left side is `< 1/2`.
#[allow(clippy::too_many_arguments)]
pub fn check_eqhyp(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    y: &Rational,
    t: &Rational,
    h: u64,
    cfg: &ConstantsConfig,
    x_at: &dyn Fn(u32) -> Result<IntervalReal, ConstantsError>,
) -> Result<Verdict, ConstantsError> {
    if *y < rat(1, 8 * sys.d() as i64) {
        return Err(ConstantsError::Precondition("y < 1/(8d)".into()));
    }
    if h == 0 {
        return Err(ConstantsError::Precondition("h must be >= 1".into()));
    }
    Ok(decide_lt(
        |bits| {
            let x = x_at(bits).ok()?;
            let lhs = eqhyp_log_lhs(sys, a, b, &x, y, t, h, bits).ok()?;
            Some((lhs, ln2(bits).scale(&int(-1))))
        },
        cfg.bits,
        cfg.max_bits,
    ))
}

/// `log` of the Theorem 1 lower bound `1 / (B b^m (|a|+1)^(c_4 m))`, as an
/// enclosure given `c_4`.
pub fn theorem1_log_rhs(c4: &IntervalReal, a: &BigInt, b: &BigInt, big_b: &BigInt, m: u64, bits: u32) -> Result<IntervalReal, ConstantsError> {
    let mr = int(m as i64);
    let lb = ln_rational(&from_big(b.clone()), bits)?.scale(&mr);
    let lbb = ln_rational(&from_big(big_b.clone()), bits)?;
    let la1 = ln_rational(&from_big(a.abs() + 1), bits)?;
    let s = &(&lb + &lbb) + &(&la1 * c4).scale(&mr);
    Ok(s.scale(&int(-1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::iterate;
    use crate::pade::build;

    fn li2() -> GFunctionSystem {
        GFunctionSystem::polylog(2).unwrap()
    }

    #[test]
    fn li2_family_constants_match_the_remark() {
        let cfg = ConstantsConfig { bits: 200, ..Default::default() };
        let fc = family_constants(&li2(), &int(0), &cfg).unwrap();
        assert_eq!(fc.c1.to_string(), "4*e^66");
        assert_eq!(fc.c2, 12);
        assert_eq!(fc.y, rat(1, 12));
        assert_eq!(fc.c5, int(256));
        // log c6 = 187/3 + (17/16) log 2
        assert_eq!(fc.c6.e_exponent(), &rat(187, 3));
        assert_eq!(fc.c6.factors().get(&BigInt::from(2)), Some(&rat(17, 16)));
        // c7 = 6336 + 192 log 2
        let c7 = &IntervalReal::point(int(6336)) + &ln2(200).scale(&int(192));
        assert!(fc.c7.intersects(&c7));
        assert!(fc.c7.width() < rat(1, 1 << 40));
        let pc = fc.closed_form_c4.unwrap();
        assert!(pc.below_10_578);
        assert!(!pc.discrepancy);
        // the chain reproduces the closed form exactly
        assert!(pc.rel_diff.hi() < &rat(1, 1_000_000_000_000));
        // c4 ~ 595184.5
        assert!(fc.c4.certainly_gt_rat(&int(595_000)) && fc.c4.certainly_lt_rat(&int(596_000)));
    }

    #[test]
    fn closed_forms_for_n2_d2() {
        let fc = family_constants(&li2(), &int(100), &ConstantsConfig::default()).unwrap();
        assert_eq!(fc.c2, 12);
        assert_eq!(fc.y, rat(1, 12));
        assert_eq!(fc.c5, int(400));
        assert_eq!(fc.c3, rat(400, 3));
    }

    #[test]
    fn small_b_fails_hypothesis_three() {
        let r = compute_constants(&li2(), &BigInt::one(), &BigInt::from(10), &int(0), 100, &ConstantsConfig::default());
        assert_eq!(r.unwrap_err(), ConstantsError::Hypothesis3);
    }

    fn e_pow_ceil(k: i64) -> BigInt {
        let e = crate::exact::interval::exp_rational(&int(k), 64);
        crate::exact::rational::ceil(e.hi())
    }

    #[test]
    fn li2_threshold_scale_satisfies_eqhyp() {
        let b = e_pow_ceil(809);
        let cfg = ConstantsConfig::default();
        let r = compute_constants(&li2(), &BigInt::one(), &b, &int(0), 100, &cfg).unwrap();
        assert_eq!(r.hyp3, Verdict::Holds);
        assert_eq!(r.eqhyp, Verdict::Holds);
        assert!(r.h >= 90);
        assert!(r.p >= r.q + 100);
    }

    #[test]
    fn desk_scale_eqhyp_fails() {
        let s = li2();
        let cfg = ConstantsConfig::default();
        let fc = family_constants(&s, &int(0), &cfg).unwrap();
        let (a, b) = (BigInt::one(), BigInt::from(2));
        let v = check_eqhyp(&s, &a, &b, &fc.y, &int(0), 1, &cfg, &|bits| x_value(&fc, &a, &b, bits)).unwrap();
        assert_eq!(v, Verdict::Fails);
        assert!(matches!(
            check_eqhyp(&s, &a, &b, &rat(1, 17), &int(0), 1, &cfg, &|bits| x_value(&fc, &a, &b, bits)),
            Err(ConstantsError::Precondition(_))
        ));
    }

    #[test]
    fn eqhyp_monotone_in_b() {
        let s = li2();
        let cfg = ConstantsConfig::default();
        let mut seen_true = false;
        for k in [780, 800, 809, 820, 900, 1200] {
            let b = e_pow_ceil(k);
            let v = match compute_constants(&s, &BigInt::one(), &b, &int(0), 200, &cfg) {
                Ok(r) => r.eqhyp,
                Err(ConstantsError::Hypothesis3) => Verdict::Fails,
                Err(e) => panic!("{e}"),
            };
            if seen_true {
                assert_eq!(v, Verdict::Holds, "flipped back at e^{k}");
            }
            seen_true |= v.holds();
        }
        assert!(seen_true);
    }

    #[test]
    fn height_bound_dominates() {
        let s = li2();
        let a = build(&s, 8, 6, 3).unwrap();
        let f = iterate(&a, &s, 2).unwrap();
        for k in 0..=2 {
            assert!(f.qk[k].height() <= bound_height_qk(&a, &s, k).unwrap());
        }
        // H(D) = 1: no H(D)^k growth
        let b1 = bound_height_qk(&a, &s, 1).unwrap();
        let b0 = bound_height_qk(&a, &s, 0).unwrap();
        assert_eq!(b1 / b0, int(2));
    }

    #[test]
    fn height_bound_needs_verified_range() {
        let s = li2();
        let a = build(&s, 70, 6, 3).unwrap();
        assert!(matches!(bound_height_qk(&a, &s, 0), Err(ConstantsError::VerifiedRange { need: 73, .. })));
    }

    #[test]
    fn remainder_bound_basics() {
        let s = GFunctionSystem::log1m().unwrap();
        let a = crate::pade::assemble(&s, 1, 1, 1, &[BigInt::from(2), BigInt::from(-1)]).unwrap();
        let f = iterate(&a, &s, 1).unwrap();
        assert_eq!(bound_remainder(&f, &s, 0, &int(0)).unwrap(), int(0));
        // H(Q) = 2, deg + 1 = 2: 2 * 2 * (1/3)^3 / (2/3)
        assert_eq!(bound_remainder(&f, &s, 0, &rat(1, 3)).unwrap(), rat(2, 9));
        // k = 1 uses exponent p + h + 1 - k = 2
        assert_eq!(bound_remainder(&f, &s, 1, &rat(1, 3)).unwrap(), int(1) * int(2) * rat(1, 9) / rat(2, 3));
        assert_eq!(bound_remainder(&f, &s, 0, &int(1)), Err(ConstantsError::Divergent));
    }
}
