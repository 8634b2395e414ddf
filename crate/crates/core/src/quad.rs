//! Square roots of rationals: periodic continued fractions, the Pell-type
//! bound for convergents, the map to an instance of `sqrt(1 - z)` at `a/b`,
//! and scans of `|sqrt(d) - n/D^m|` for `D` a convergent numerator or
//! denominator.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::constants::{family_constants, ConstantsConfig, ConstantsError, Verdict};
use crate::dioph::{eval_certified, DiophError};
use crate::exact::interval::{ln_rational, sqrt_rational};
use crate::exact::rational::{from_big, int, isqrt, mul_pow2, rat, to_f64};
use crate::exact::{IntervalReal, Rational};
use crate::gfun::GFunctionSystem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("sqrt(d) is rational")]
    RationalRoot,
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("internal certificate failure: {0}")]
    Internal(String),
    #[error("indeterminate at precision cap: {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Dioph(#[from] DiophError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadConvergent {
    /// index in the convergent sequence, from 0
    pub index: usize,
    pub alpha: BigInt,
    pub beta: BigInt,
    /// `v alpha^2 - u beta^2` for `d = u/v` in lowest terms
    pub pell_value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub u: BigInt,
    pub v: BigInt,
    /// partial quotients before the period, starting with `a_0`
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    pub convergents: Vec<QuadConvergent>,
}

impl CfExpansion {
    /// `a_k` from the detected period.
    pub fn partial_quotient(&self, k: usize) -> BigInt {
        if k < self.preperiod.len() {
            self.preperiod[k].clone()
        } else {
            self.period[(k - self.preperiod.len()) % self.period.len()].clone()
        }
    }
}

fn lowest_terms(d: &Rational) -> Result<(BigInt, BigInt), QuadError> {
    if !d.is_positive() {
        return Err(QuadError::Precondition("d must be positive".into()));
    }
    let (u, v) = (d.numer().clone(), d.denom().clone());
    let uv = &u * &v;
    let s = isqrt(&uv);
    if &s * &s == uv {
        return Err(QuadError::RationalRoot);
    }
    Ok((u, v))
}

/// Continued fraction of `sqrt(u/v) = sqrt(uv)/v` by the surd recurrence on
/// `(P + sqrt(D))/Q`, `D = uv`, with the first `count` convergents.
pub fn cf_sqrt(d: &Rational, count: usize) -> Result<CfExpansion, QuadError> {
    let (u, v) = lowest_terms(d)?;
    let dd = &u * &v;
    let s = isqrt(&dd);
    let (mut p, mut q) = (BigInt::zero(), v.clone());
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    let (start, len) = loop {
        if let Some(&k) = seen.get(&(p.clone(), q.clone())) {
            break (k, quotients.len() - k);
        }
        seen.insert((p.clone(), q.clone()), quotients.len());
        // q > 0 throughout, so floor((p + sqrt D)/q) = floor((p + s)/q)
        let a = (&p + &s).div_floor(&q);
        let p1 = &a * &q - &p;
        let num = &dd - &p1 * &p1;
        if !num.is_multiple_of(&q) {
            return Err(QuadError::Internal("surd recurrence lost integrality".into()));
        }
        let q1 = num / &q;
        quotients.push(a);
        p = p1;
        q = q1;
    };
    let preperiod = quotients[..start].to_vec();
    let period = quotients[start..start + len].to_vec();
    let mut exp = CfExpansion { u: u.clone(), v: v.clone(), preperiod, period, convergents: Vec::with_capacity(count) };
    let (mut a0, mut a1) = (BigInt::one(), BigInt::zero());
    let (mut b0, mut b1) = (BigInt::zero(), BigInt::one());
    for k in 0..count {
        let a = exp.partial_quotient(k);
        let alpha = &a * &a0 + &a1;
        let beta = &a * &b0 + &b1;
        a1 = std::mem::replace(&mut a0, alpha.clone());
        b1 = std::mem::replace(&mut b0, beta.clone());
        let pell_value = &v * &alpha * &alpha - &u * &beta * &beta;
        exp.convergents.push(QuadConvergent { index: k, alpha, beta, pell_value });
    }
    Ok(exp)
}

/// Convergents with `beta <= beta_max`.
pub fn convergents_up_to(d: &Rational, beta_max: &BigInt) -> Result<Vec<QuadConvergent>, QuadError> {
    let mut count = 16;
    loop {
        let e = cf_sqrt(d, count)?;
        if e.convergents.last().is_some_and(|c| &c.beta > beta_max) {
            return Ok(e.convergents.into_iter().take_while(|c| &c.beta <= beta_max).collect());
        }
        count *= 2;
    }
}

/// `|alpha/beta - sqrt(d)| < 1/beta^2`, decided exactly.
pub fn is_close_convergent(conv: &QuadConvergent, d: &Rational) -> bool {
    let x = Rational::new(conv.alpha.clone(), conv.beta.clone());
    let e = Rational::new(BigInt::one(), &conv.beta * &conv.beta);
    let lo = &x - &e;
    let hi = &x + &e;
    (lo.is_negative() || &lo * &lo < *d) && *d < &hi * &hi
}

/// Result of the Pell-type bound check.
#[derive(Clone, Debug, PartialEq)]
pub struct PellCheck {
    /// `alpha^2 - d beta^2`
    pub value: Rational,
    /// enclosure of `2 sqrt(d) + 1`
    pub bound: IntervalReal,
    pub holds: bool,
}

/// `|alpha^2 - d beta^2| <= 2 sqrt(d) + 1`, decided exactly by squaring.
pub fn pell_bound_check(conv: &QuadConvergent, d: &Rational) -> PellCheck {
    let value = Rational::new(conv.pell_value.clone(), d.denom().clone());
    let excess = value.abs() - Rational::one();
    let holds = !excess.is_positive() || &excess * &excess <= d * int(4);
    let bound = sqrt_rational(d, 128).scale(&int(2)) + IntervalReal::point(int(1));
    PellCheck { value, bound, holds }
}

/// The instance of `sqrt(1 - z)` at `a/b` with value `(beta/alpha) sqrt(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub a: BigInt,
    pub b: BigInt,
    /// `b > (c_1|a|)^(c_2)` for the `(1 - z)^(1/2)` system
    pub hyp_b: Verdict,
    /// `log N_d = (c_2/2) log(c_1 c(d))`, `c(d) = 2 sqrt(d) + 1`
    pub log_nd: IntervalReal,
    /// `f(a/b) alpha/beta` and `sqrt(d)` overlap
    pub identity_holds: bool,
    /// `f(a/b)` came from the series (otherwise from the closed form)
    pub via_series: bool,
    pub f_value: IntervalReal,
}

pub fn reduce_to_theorem1(conv: &QuadConvergent, d: &Rational, cfg: &ConstantsConfig) -> Result<Reduction, QuadError> {
    let (u, v) = lowest_terms(d)?;
    let a = &v * &conv.alpha * &conv.alpha - &u * &conv.beta * &conv.beta;
    let b = &v * &conv.alpha * &conv.alpha;
    if a.is_zero() {
        return Err(QuadError::Internal("alpha^2 = d beta^2 with sqrt(d) irrational".into()));
    }
    let sys = GFunctionSystem::binom_power(&rat(1, 2)).map_err(DiophError::from)?;
    let bits = cfg.bits;
    let fc = family_constants(&sys, &int(0), cfg)?;
    let lc1 = fc.c1.ln(bits);
    let lb = ln_rational(&from_big(b.clone()), bits).map_err(ConstantsError::from)?;
    let la = ln_rational(&from_big(a.abs()), bits).map_err(ConstantsError::from)?;
    let lhs = (&lc1 + &la).scale(&int(fc.c2 as i64));
    let hyp_b = if lhs.certainly_lt(&lb) {
        Verdict::Holds
    } else if lb.certainly_le(&lhs) {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    };
    let cd = sqrt_rational(d, bits).scale(&int(2)) + IntervalReal::point(int(1));
    let log_nd = (&lc1 + &cd.ln(bits).map_err(ConstantsError::from)?).scale(&rat(fc.c2 as i64, 2));

    let z = Rational::new(a.clone(), b.clone());
    let width = mul_pow2(&Rational::one(), -(bits as i64));
    let via_series = sys.c() * z.abs() <= rat(1, 2);
    let f_value = if via_series {
        eval_certified(&sys, 1, &z, &width)?
    } else {
        sqrt_rational(&(Rational::one() - &z), bits)
    };
    let lhs_id = f_value.scale(&Rational::new(conv.alpha.clone(), conv.beta.clone()));
    let root = sqrt_rational(d, bits);
    let identity_holds = !(lhs_id.hi() < root.lo() || root.hi() < lhs_id.lo());
    Ok(Reduction { a, b, hyp_b, log_nd, identity_holds, via_series, f_value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub m: u32,
    pub n: BigInt,
    /// `|sqrt(d) - n/D^m|`
    pub distance: IntervalReal,
    /// `-log(distance) / log(D^m)`, descriptive
    pub exponent: f64,
    /// `distance^(-1/m) / D`: the smallest `eta` with `distance >= (eta D)^-m`
    pub eta: f64,
    /// `distance >= 1/(2 D^m)`
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub d: Rational,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub denominator: Denominator,
    pub rows: Vec<ScanRow>,
    /// max of `eta` over the rows: an empirical fit, not a certified constant
    pub eta_fit: f64,
}

/// Nearest `n` to `sqrt(d) D^m` and the resulting distance for each `m`.
pub fn theorem5_scan(
    d: &Rational,
    conv: &QuadConvergent,
    m_range: std::ops::RangeInclusive<u32>,
    den: Denominator,
    cfg: &ConstantsConfig,
) -> Result<ScanReport, QuadError> {
    lowest_terms(d)?;
    let base = match den {
        Denominator::Alpha => conv.alpha.clone(),
        Denominator::Beta => conv.beta.clone(),
    };
    if base < BigInt::from(2) {
        return Err(QuadError::Precondition("denominator base must be >= 2".into()));
    }
    let lbase = to_f64_log2(&from_big(base.clone()));
    let mut rows = Vec::new();
    for m in m_range {
        let dm = num_traits::pow(base.clone(), m as usize);
        let dmr = from_big(dm.clone());
        let mut bits = cfg.bits.max(dm.bits() as u32 * 2 + 64);
        let (n, distance) = loop {
            let root = sqrt_rational(d, bits);
            if let Some(n) = root.scale(&dmr).round_half_even() {
                let dist = (&root - &IntervalReal::point(Rational::new(n.clone(), dm.clone()))).abs();
                if dist.lo().is_positive() {
                    break (n, dist);
                }
            }
            if bits >= cfg.max_bits.max(dm.bits() as u32 * 4 + 256) {
                return Err(QuadError::Indeterminate(format!("nearest n at m = {m}")));
            }
            bits *= 2;
        };
        let ld = to_f64_log2(distance.lo());
        let exponent = -ld / (m as f64 * lbase);
        let eta = (-ld / m as f64 - lbase).exp2();
        let trivial = distance.certainly_ge_rat(&Rational::new(BigInt::one(), 2 * &dm));
        rows.push(ScanRow { m, n, distance, exponent, eta, trivial });
    }
    let eta_fit = rows.iter().map(|r| r.eta).fold(0.0, f64::max);
    Ok(ScanReport { d: d.clone(), alpha: conv.alpha.clone(), beta: conv.beta.clone(), denominator: den, rows, eta_fit })
}

/// `log2 x` for a positive rational of any size.
fn to_f64_log2(x: &Rational) -> f64 {
    let e = crate::exact::rational::floor_log2(x);
    let m = mul_pow2(x, -e);
    e as f64 + to_f64(&m).log2()
}

/// `sqrt(d)` to `digits` decimal places, for reports.
pub fn sqrt_decimal(d: &Rational, digits: usize) -> String {
    let bits = (digits as f64 * 3.33) as u32 + 16;
    crate::exact::rational::to_decimal(sqrt_rational(d, bits).lo(), digits)
}
