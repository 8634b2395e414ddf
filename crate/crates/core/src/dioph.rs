//! Certified evaluation of `F_j(a/b)` and verification of lower bounds for
//! `|F_j(a/b) - n/(B b^m)|`.
//!
//! Two routes are offered. The theorem route compares the distance with
//! `1/(B b^m (|a|+1)^(c_4 m))` and requires `b > (c_1|a|)^(c_2)`. The
//! property route builds an approximant at small `(p, q, h)`, forms the
//! integer `xi`, checks the remainder condition exactly and replays the
//! resulting inequalities on certified intervals. It is meant for instances
//! far below the theorem's scale and does not claim the theorem's
//! hypotheses.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::constants::{family_constants, theorem1_log_rhs, ConstantsConfig, ConstantsError, FamilyConstants, Verdict};
use crate::derivation::{combination, find_nonvanishing_index, iterate, DerivationError, IteratedFamily};
use crate::exact::interval::{ln_rational, series_with_geometric_tail};
use crate::exact::rational::{floor_log2, from_big, int, mul_pow2};
use crate::exact::{ExactError, IntervalReal, Rational};
use crate::gfun::{GFunctionSystem, GfunError};
use crate::pade::{build, check_params, PadeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiophError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("C|z| >= 1: series does not converge with a certified tail")]
    Divergent,
    #[error("hypothesis b > (c_1|a|)^(c_2) is {0}; use property mode below that scale")]
    HypothesisUnmet(&'static str),
    #[error("indeterminate at precision cap: {0}")]
    Indeterminate(String),
    #[error("internal certificate failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Gfun(#[from] GfunError),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Interval of width at most `width` containing `F_j(z)`.
pub fn eval_certified(sys: &GFunctionSystem, j: usize, z: &Rational, width: &Rational) -> Result<IntervalReal, DiophError> {
    if j == 0 || j > sys.n() {
        return Err(DiophError::Precondition(format!("function index {j} out of range 1..={}", sys.n())));
    }
    let za = z.abs();
    if sys.c() * &za >= Rational::one() {
        return Err(DiophError::Divergent);
    }
    let cache: RefCell<Vec<Rational>> = RefCell::new(Vec::new());
    let coeff = |n: usize| -> Rational {
        let mut c = cache.borrow_mut();
        if n >= c.len() {
            let len = (2 * n).max(32);
            *c = sys.coefficients(j, len).expect("index checked above");
        }
        c[n].clone()
    };
    let term = |n: usize| {
        let f = coeff(n);
        if f.is_zero() {
            f
        } else {
            f * num_traits::pow(z.clone(), n)
        }
    };
    series_with_geometric_tail(term, sys.c(), &za, width).map_err(|e| match e {
        ExactError::NoTailBound => DiophError::Divergent,
        e => e.into(),
    })
}

/// The integer `xi = d_{p+(d-1)k} b^{p+(d-1)k} (n Q_k(a/b) - B b^m P_{j,k}(a/b))`
/// with its ingredients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiWitness {
    pub k: usize,
    /// `p + (d-1)k`
    pub deg_p: usize,
    /// `q + (d-1)k`
    pub deg_q: usize,
    /// `d_{p+(d-1)k}`
    pub denom: BigInt,
    /// `P_{j,k}(a/b) = U / (d b^(p+(d-1)k))`
    pub u: BigInt,
    /// `Q_k(a/b) = V / b^(q+(d-1)k)`
    pub v: BigInt,
    pub xi: BigInt,
    pub divisible_by_bm: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn construct_xi(
    fam: &IteratedFamily,
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    big_b: &BigInt,
    m: u32,
    n: &BigInt,
    j: usize,
) -> Result<XiWitness, DiophError> {
    let (p, q) = (fam.base.p, fam.base.q);
    if p < q + m as usize {
        return Err(DiophError::Precondition(format!("need p >= q + m, have p = {p}, q = {q}, m = {m}")));
    }
    if *b < BigInt::one() || *big_b < BigInt::one() {
        return Err(DiophError::Precondition("need b, B >= 1".into()));
    }
    let k = find_nonvanishing_index(fam, sys, a, b, n, big_b, m, j)?;
    let dm1 = sys.d() - 1;
    let deg_p = p + dm1 * k;
    let deg_q = q + dm1 * k;
    let denom = sys.denominator(deg_p);
    let z = Rational::new(a.clone(), b.clone());
    let bp = num_traits::pow(b.clone(), deg_p);
    let bq = num_traits::pow(b.clone(), deg_q);
    let bm = num_traits::pow(b.clone(), m as usize);
    let u_r = from_big(&denom * &bp) * fam.pk[k][j - 1].eval(&z);
    let v_r = from_big(bq) * fam.qk[k].eval(&z);
    if !u_r.is_integer() || !v_r.is_integer() {
        return Err(DiophError::Internal(format!("U or V not an integer at k = {k}")));
    }
    let (u, v) = (u_r.to_integer(), v_r.to_integer());
    let xi = n * &denom * num_traits::pow(b.clone(), p - q) * &v - big_b * &bm * &u;
    // the same number straight from the rational combination
    let bbm = from_big(big_b * &bm);
    let direct = from_big(&denom * &bp) * combination(fam, k, j, &z, n, &bbm);
    if direct != from_big(xi.clone()) {
        return Err(DiophError::Internal(format!("two computations of xi disagree at k = {k}")));
    }
    if xi.is_zero() {
        return Err(DiophError::Internal(format!("xi = 0 at the nonvanishing index k = {k}")));
    }
    let divisible_by_bm = xi.is_multiple_of(&bm);
    Ok(XiWitness { k, deg_p, deg_q, denom, u, v, xi, divisible_by_bm })
}

/// Property-mode replay at one `(p, q, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainReplay {
    pub p: usize,
    pub q: usize,
    pub h: usize,
    pub witness: XiWitness,
    /// `Q_k(a/b)`, exact
    pub q_value: Rational,
    /// `|R_{j,k}(a/b)|`
    pub remainder: IntervalReal,
    /// `1 / (2 d b^(p+(d-1)k) B)`
    pub remainder_threshold: Rational,
    pub remainder_small: Verdict,
    /// minimum over the remainder enclosure of
    /// `|Q_k||n - B b^m F| - (b^m/(d b^(p+(d-1)k)) - B b^m |R|)`
    pub xi_chain_slack: Rational,
    pub xi_chain: Verdict,
    /// `1 / (2 d b^(p+(d-1)k) B |Q_k(a/b)|)`
    pub distance_lower: Option<Rational>,
    pub distance_certified: Verdict,
}

impl ChainReplay {
    pub fn all_hold(&self) -> bool {
        self.witness.divisible_by_bm
            && self.remainder_small.holds()
            && self.xi_chain.holds()
            && self.distance_certified.holds()
    }
}

/// Minimum of `|c - y| + |y| - c1` for `y` in `[lo, hi]` (convex, piecewise
/// linear, so attained at an endpoint or a kink).
fn min_slack(c: &Rational, c1: &Rational, lo: &Rational, hi: &Rational) -> Rational {
    let g = |y: &Rational| (c - y).abs() + y.abs() - c1;
    let mut pts = vec![lo.clone(), hi.clone()];
    for k in [Rational::zero(), c.clone()] {
        if &k > lo && &k < hi {
            pts.push(k);
        }
    }
    pts.iter().map(g).min().expect("nonempty")
}

/// Replays the `xi` argument at `(p, q, h)`: builds and iterates the
/// approximant, forms `xi`, checks `|R_{j,k}(a/b)| < 1/(2 d b^(p+(d-1)k) B)`
/// and certifies the resulting lower bound on the distance.
#[allow(clippy::too_many_arguments)]
pub fn replay_chain(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    big_b: &BigInt,
    m: u32,
    n: &BigInt,
    j: usize,
    (p, q, h): (usize, usize, usize),
    cfg: &ConstantsConfig,
) -> Result<ChainReplay, DiophError> {
    let base = build(sys, p, q, h)?;
    let fam = iterate(&base, sys, base_k_max(sys, q, h))?;
    let w = construct_xi(&fam, sys, a, b, big_b, m, n, j)?;
    let z = Rational::new(a.clone(), b.clone());
    let qv = fam.qk[w.k].eval(&z);
    let pv = fam.pk[w.k][j - 1].eval(&z);
    let bm = from_big(num_traits::pow(b.clone(), m as usize));
    let bbm = from_big(big_b.clone()) * &bm;
    let den = from_big(&w.denom * num_traits::pow(b.clone(), w.deg_p));
    let threshold = Rational::one() / (int(2) * &den * from_big(big_b.clone()));
    let c = from_big(w.xi.clone()) / &den;
    let c1 = &bm / &den;
    let nr = from_big(n.clone());

    let scale = qv.abs() + Rational::one();
    let mut bits = 8u32;
    loop {
        let width = mul_pow2(&threshold, -(bits as i64)) / &scale;
        let f = eval_certified(sys, j, &z, &width)?;
        let r = &f.scale(&qv) - &IntervalReal::point(pv.clone());
        let ra = r.abs();
        let small = if ra.certainly_lt_rat(&threshold) {
            Verdict::Holds
        } else if ra.certainly_ge_rat(&threshold) {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        };
        if small == Verdict::Indeterminate && bits < cfg.max_bits {
            bits = (bits * 2).min(cfg.max_bits);
            continue;
        }
        // X = Q (n - B b^m F) computed directly must meet c - Y
        let y = r.scale(&bbm);
        let x = (&IntervalReal::point(nr.clone()) - &f.scale(&bbm)).scale(&qv);
        let cy = &IntervalReal::point(c.clone()) - &y;
        if x.hi() < cy.lo() || cy.hi() < x.lo() {
            return Err(DiophError::Internal("Q(n - B b^m F) + B b^m R differs from xi / (d b^p)".into()));
        }
        let slack = min_slack(&c, &c1, y.lo(), y.hi());
        let xi_chain = if slack >= Rational::zero() { Verdict::Holds } else { Verdict::Indeterminate };
        let (distance_lower, distance_certified) = if small.holds() {
            if qv.is_zero() {
                return Err(DiophError::Internal("Q_k(a/b) = 0 although the remainder is small".into()));
            }
            let lower = &threshold / qv.abs();
            let v = certify_distance_ge(sys, j, &z, &nr, &bbm, &lower, cfg)?;
            (Some(lower), v)
        } else {
            (None, Verdict::Indeterminate)
        };
        return Ok(ChainReplay {
            p,
            q,
            h,
            witness: w,
            q_value: qv,
            remainder: ra,
            remainder_threshold: threshold,
            remainder_small: small,
            xi_chain_slack: slack,
            xi_chain,
            distance_lower,
            distance_certified,
        });
    }
}

/// `k_max = l_0 + N`, the range the index search may need.
fn base_k_max(sys: &GFunctionSystem, q: usize, h: usize) -> usize {
    crate::derivation::ell0(sys.n(), sys.d(), q, h) + sys.n()
}

/// `|F_j(z) - n/(B b^m)| >= lower`, certified with escalation.
fn certify_distance_ge(
    sys: &GFunctionSystem,
    j: usize,
    z: &Rational,
    n: &Rational,
    bbm: &Rational,
    lower: &Rational,
    cfg: &ConstantsConfig,
) -> Result<Verdict, DiophError> {
    let target = n / bbm;
    let mut bits = 4u32;
    loop {
        let f = eval_certified(sys, j, z, &mul_pow2(lower, -(bits as i64)))?;
        let d = (&f - &IntervalReal::point(target.clone())).abs();
        if d.certainly_ge_rat(lower) {
            return Ok(Verdict::Holds);
        }
        if d.certainly_lt_rat(lower) {
            return Ok(Verdict::Fails);
        }
        if bits >= cfg.max_bits {
            return Ok(Verdict::Indeterminate);
        }
        bits = (bits * 2).min(cfg.max_bits);
    }
}

/// Searches `h = 1, 2, ...` with `q = N h`, `p = q + m` for a point where the
/// remainder condition holds, then replays the chain there.
#[allow(clippy::too_many_arguments)]
pub fn search_chain(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    big_b: &BigInt,
    m: u32,
    n: &BigInt,
    j: usize,
    max_ph: usize,
    cfg: &ConstantsConfig,
) -> Result<Option<ChainReplay>, DiophError> {
    let nn = sys.n();
    let mut last = None;
    for h in 1.. {
        let q = nn * h;
        let p = q + m as usize;
        if p + h > max_ph {
            break;
        }
        if check_params(nn, p, q, h).is_err() {
            continue;
        }
        let r = replay_chain(sys, a, b, big_b, m, n, j, (p, q, h), cfg)?;
        if r.remainder_small.holds() {
            return Ok(Some(r));
        }
        last = Some(r);
    }
    Ok(last)
}

/// Options for [`verify_theorem1`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub constants: ConstantsConfig,
    /// `t` with `B <= b^t`; the least integer is used when absent
    pub t: Option<Rational>,
    /// replay the proof at small `(p, q, h)` and skip the `b` threshold
    pub property_mode: bool,
    /// fixed `(p, q, h)` for property mode; searched when absent
    pub params: Option<(usize, usize, usize)>,
    /// largest `p + h` tried by the property-mode search
    pub max_ph: usize,
    /// also check the form `>= 1/b^(m(1+eps))`
    pub eps: Option<Rational>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            constants: ConstantsConfig::default(),
            t: None,
            property_mode: false,
            params: None,
            max_ph: 72,
            eps: None,
        }
    }
}

/// The `eps` form: preconditions and the certified comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryCheck {
    pub eps: Rational,
    /// `m >= 2t/eps`
    pub m_ok: bool,
    /// `b > (|a|+1)^(2 c_4/eps)`
    pub b_ok: Verdict,
    /// `-m (1+eps) log b`
    pub log_bound: IntervalReal,
    pub holds: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub system: String,
    /// the instance was mapped through `z -> -z` to make `a > 0`
    pub reflected: bool,
    pub j: usize,
    pub a: BigInt,
    pub b: BigInt,
    pub big_b: BigInt,
    pub m: u32,
    pub n: BigInt,
    /// `n` was chosen as the nearest integer to `B b^m F_j(a/b)`
    pub n_is_nearest: bool,
    pub t: Rational,
    pub family: FamilyConstants,
    /// `b > (c_1|a|)^(c_2)`
    pub hyp_b: Verdict,
    /// `m >= c_3 log b / log(|a|+1)`
    pub hyp_m: Verdict,
    /// `|F_j(a/b) - n/(B b^m)|`
    pub lhs: IntervalReal,
    /// `log(1/(B b^m (|a|+1)^(c_4 m)))`
    pub log_rhs: IntervalReal,
    pub holds: Verdict,
    pub reason: Option<String>,
    pub proof_path: Option<ChainReplay>,
    pub corollary: Option<CorollaryCheck>,
}

/// Least integer `t >= 0` with `B <= b^t`.
pub fn least_t(b: &BigInt, big_b: &BigInt) -> u64 {
    let mut t = 0u64;
    let mut pw = BigInt::one();
    while &pw < big_b {
        pw *= b;
        t += 1;
    }
    t
}

/// Nearest integer to `B b^m F_j(a/b)`, ties toward the even integer.
pub fn nearest_n(
    sys: &GFunctionSystem,
    j: usize,
    z: &Rational,
    bbm: &Rational,
    cfg: &ConstantsConfig,
) -> Result<BigInt, DiophError> {
    let mut bits = cfg.bits;
    loop {
        let f = eval_certified(sys, j, z, &(mul_pow2(&Rational::one(), -(bits as i64)) / bbm))?;
        if let Some(n) = f.scale(bbm).round_half_even() {
            return Ok(n);
        }
        if bits >= cfg.max_bits {
            return Err(DiophError::Indeterminate("nearest integer to B b^m F".into()));
        }
        bits = (bits * 2).min(cfg.max_bits);
    }
}

/// Certified `log x >= l` (Holds), `log x < l` (Fails) for an enclosure of
/// `x` and of `l`.
fn log_ge(x: &IntervalReal, l: &IntervalReal, bits: u32) -> Result<Verdict, DiophError> {
    if x.lo().is_positive() {
        // cheap power-of-two bound first
        let e = floor_log2(x.lo());
        let lo2 = crate::exact::interval::ln2(bits).scale(&int(e));
        if lo2.lo() >= l.hi() || ln_rational(x.lo(), bits)?.lo() >= l.hi() {
            return Ok(Verdict::Holds);
        }
    }
    if x.hi().is_positive() {
        if ln_rational(x.hi(), bits)?.hi() < l.lo() {
            return Ok(Verdict::Fails);
        }
    } else {
        return Ok(Verdict::Fails);
    }
    Ok(Verdict::Indeterminate)
}

fn ln_big(x: &BigInt, bits: u32) -> Result<IntervalReal, DiophError> {
    Ok(ln_rational(&from_big(x.clone()), bits)?)
}

/// Verifies `|F_j(a/b) - n/(B b^m)| >= 1/(B b^m (|a|+1)^(c_4 m))` on one
/// instance. `n = None` picks the nearest integer. `j = None` uses the
/// principal function.
#[allow(clippy::too_many_arguments)]
pub fn verify_theorem1(
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    big_b: &BigInt,
    m: u32,
    n: Option<&BigInt>,
    j: Option<usize>,
    config: &VerifyConfig,
) -> Result<VerifyReport, DiophError> {
    if a.is_zero() || *b < BigInt::from(2) || *big_b < BigInt::one() || m == 0 {
        return Err(DiophError::Precondition("need a != 0, b >= 2, B >= 1, m >= 1".into()));
    }
    let cfg = &config.constants;
    let reflected = a.is_negative();
    let owned;
    let sys = if reflected {
        owned = sys.reflected();
        &owned
    } else {
        sys
    };
    let a = a.abs();
    let j = j.unwrap_or_else(|| sys.principal());
    if j == 0 || j > sys.n() {
        return Err(DiophError::Precondition(format!("function index {j} out of range")));
    }
    let t = match &config.t {
        Some(t) => t.clone(),
        None => int(least_t(b, big_b) as i64),
    };
    let bits = cfg.bits;
    let fc = family_constants(sys, &t, cfg)?;
    let lb = ln_big(b, bits)?;
    let la = ln_big(&a, bits)?;
    let la1 = ln_big(&(&a + 1), bits)?;
    let lhs3 = (&fc.c1.ln(bits) + &la).scale(&int(fc.c2 as i64));
    let hyp_b = separated(&lhs3, &lb);
    let hyp_m = {
        let need = lb.scale(&fc.c3).div(&la1)?;
        let mr = IntervalReal::point(int(m as i64));
        if need.certainly_le(&mr) {
            Verdict::Holds
        } else if mr.certainly_lt(&need) {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    };
    // B <= b^t
    if let Some(ti) = t.is_integer().then(|| t.to_integer()) {
        let ti: u64 = ti.try_into().map_err(|_| DiophError::Precondition("t out of range".into()))?;
        if num_traits::pow(b.clone(), ti as usize) < *big_b {
            return Err(DiophError::Precondition("B > b^t".into()));
        }
    } else if ln_big(big_b, bits)?.certainly_gt_rat(lb.scale(&t).hi()) {
        return Err(DiophError::Precondition("B > b^t".into()));
    }
    if !config.property_mode && hyp_b != Verdict::Holds {
        return Err(DiophError::HypothesisUnmet(if hyp_b == Verdict::Fails { "false" } else { "undecided" }));
    }
    let z = Rational::new(a.clone(), b.clone());
    let bm = num_traits::pow(b.clone(), m as usize);
    let bbm = from_big(big_b * &bm);
    let (n, n_is_nearest) = match n {
        Some(n) => (n.clone(), false),
        None => (nearest_n(sys, j, &z, &bbm, cfg)?, true),
    };
    let log_rhs = theorem1_log_rhs(&fc.c4, &a, b, big_b, m as u64, bits)?;
    let target = from_big(n.clone()) / &bbm;
    let cor_bound = config.eps.as_ref().map(|e| lb.scale(&(-(int(m as i64)) * (Rational::one() + e))));

    let mut wbits = bits;
    let (lhs, holds, cor_holds) = loop {
        let width = mul_pow2(&Rational::one(), -(wbits as i64)) / &bbm;
        let f = eval_certified(sys, j, &z, &width)?;
        let lhs = (&f - &IntervalReal::point(target.clone())).abs();
        let v = log_ge(&lhs, &log_rhs, bits)?;
        let cv = match &cor_bound {
            Some(cb) => Some(log_ge(&lhs, cb, bits)?),
            None => None,
        };
        let done = v != Verdict::Indeterminate && cv != Some(Verdict::Indeterminate);
        if done || wbits >= cfg.max_bits {
            break (lhs, v, cv);
        }
        wbits = (wbits * 2).min(cfg.max_bits);
    };
    let reason = match holds {
        Verdict::Holds => None,
        Verdict::Fails => Some("distance certified below the bound".into()),
        Verdict::Indeterminate => Some(format!("distance not separated from the bound at {} bits", cfg.max_bits)),
    };
    let corollary = match (&config.eps, cor_bound, cor_holds) {
        (Some(eps), Some(log_bound), Some(holds)) => {
            let m_ok = int(m as i64) * eps >= int(2) * &t;
            let need = la1.scale(&(int(2) / eps));
            let b_ok = separated(&(&need * &fc.c4), &lb);
            Some(CorollaryCheck { eps: eps.clone(), m_ok, b_ok, log_bound, holds })
        }
        _ => None,
    };
    let proof_path = if config.property_mode {
        match config.params {
            Some(pqh) => Some(replay_chain(sys, &a, b, big_b, m, &n, j, pqh, cfg)?),
            None => search_chain(sys, &a, b, big_b, m, &n, j, config.max_ph, cfg)?,
        }
    } else {
        None
    };
    Ok(VerifyReport {
        system: sys.name(),
        reflected,
        j,
        a,
        b: b.clone(),
        big_b: big_b.clone(),
        m,
        n,
        n_is_nearest,
        t,
        family: fc,
        hyp_b,
        hyp_m,
        lhs,
        log_rhs,
        holds,
        reason,
        proof_path,
        corollary,
    })
}

/// `l < r` as a verdict.
fn separated(l: &IntervalReal, r: &IntervalReal) -> Verdict {
    if l.certainly_lt(r) {
        Verdict::Holds
    } else if r.certainly_le(l) {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::interval::ln_rational;
    use crate::exact::rational::rat;
    use crate::pade::assemble;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn eval_at_zero_is_exact() {
        let s = GFunctionSystem::binom_power(&rat(1, 2)).unwrap();
        let v = eval_certified(&s, 1, &Rational::zero(), &rat(1, 10)).unwrap();
        assert_eq!(v, IntervalReal::point(int(1)));
    }

    #[test]
    fn eval_log1m_third() {
        let s = GFunctionSystem::log1m().unwrap();
        let w = Rational::new(BigInt::one(), num_traits::pow(big(10), 20));
        let v = eval_certified(&s, 1, &rat(1, 3), &w).unwrap();
        assert!(v.width() <= w, "{} {}", v, v.width());
        // log(1 - 1/3) from an independent evaluation
        let l = ln_rational(&rat(2, 3), 200).unwrap();
        assert!(v.lo() <= l.hi() && l.lo() <= v.hi(), "{v} vs {l}");
        let fine = eval_certified(&s, 1, &rat(1, 3), &(&w / int(10))).unwrap();
        assert!(v.contains_interval(&fine));
    }

    #[test]
    fn eval_diverges_at_radius() {
        let s = GFunctionSystem::log1m().unwrap();
        assert_eq!(eval_certified(&s, 1, &int(1), &rat(1, 10)), Err(DiophError::Divergent));
    }

    #[test]
    fn xi_for_small_log1m_instance() {
        let s = GFunctionSystem::log1m().unwrap();
        let base = build(&s, 3, 1, 1).unwrap();
        let fam = iterate(&base, &s, base_k_max(&s, 1, 1)).unwrap();
        for n in [-7i64, 0, 1, 3, 12345] {
            let w = construct_xi(&fam, &s, &big(1), &big(10), &big(1), 2, &big(n), 1).unwrap();
            assert!(w.divisible_by_bm);
            assert!(w.xi.abs() >= big(100));
        }
        let err = construct_xi(&fam, &s, &big(1), &big(10), &big(1), 3, &big(0), 1).unwrap_err();
        assert!(matches!(err, DiophError::Precondition(_)));
    }

    #[test]
    fn xi_exact_values_log1m() {
        // Q = 2 - z, P = -2z at (p, q, h) = (1, 1, 1); with m = 0 allowed by p >= q
        let s = GFunctionSystem::log1m().unwrap();
        let base = assemble(&s, 1, 1, 1, &[big(2), big(-1)]).unwrap();
        let fam = iterate(&base, &s, 1).unwrap();
        let w = construct_xi(&fam, &s, &big(1), &big(10), &big(1), 0, &big(0), 1).unwrap();
        // k = 0: xi = d_1 * 10 * (0 - P(1/10)) = 10 * 2/10 = 2
        assert_eq!(w.k, 0);
        assert_eq!(w.xi, big(2));
        assert_eq!(w.v, big(19));
        assert_eq!(w.u, big(-2));
    }

    #[test]
    fn slack_is_exact_in_tight_case() {
        // c = c1 and y of the same sign: |c - y| + |y| - c1 = 0
        let c = rat(1, 1);
        assert_eq!(min_slack(&c, &c, &rat(1, 100), &rat(2, 100)), Rational::zero());
        assert_eq!(min_slack(&c, &c, &rat(-2, 100), &rat(-1, 100)), rat(2, 100));
    }

    #[test]
    fn far_n_holds_trivially() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let cfg = VerifyConfig { property_mode: true, ..Default::default() };
        let r = verify_theorem1(&s, &big(1), &big(10), &big(1), 1, Some(&big(50)), None, &cfg).unwrap();
        assert_eq!(r.holds, Verdict::Holds);
        assert!(r.lhs.certainly_ge_rat(&int(1)));
        assert_eq!(r.hyp_b, Verdict::Fails);
    }

    #[test]
    fn desk_scale_without_property_mode_is_refused() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let r = verify_theorem1(&s, &big(1), &big(10), &big(1), 3, None, None, &VerifyConfig::default());
        assert_eq!(r.unwrap_err(), DiophError::HypothesisUnmet("false"));
    }

    #[test]
    fn property_mode_replay_log1m() {
        let s = GFunctionSystem::log1m().unwrap();
        let cfg = VerifyConfig { property_mode: true, ..Default::default() };
        let r = verify_theorem1(&s, &big(1), &big(1000), &big(1), 4, None, None, &cfg).unwrap();
        assert!(r.n_is_nearest);
        assert_eq!(r.holds, Verdict::Holds);
        let c = r.proof_path.unwrap();
        assert!(c.all_hold(), "{c:?}");
        assert!(c.p >= c.q + 4);
    }

    #[test]
    fn property_mode_replay_li2_and_negative_a() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let cfg = VerifyConfig { property_mode: true, ..Default::default() };
        for a in [1i64, -1, 3] {
            let r = verify_theorem1(&s, &big(a), &big(100000), &big(7), 3, None, None, &cfg).unwrap();
            assert_eq!(r.reflected, a < 0);
            let c = r.proof_path.expect("search found parameters");
            assert!(c.all_hold(), "a = {a}: {c:?}");
        }
    }

    #[test]
    fn theorem_scale_instance_holds() {
        // b > e^809 is the Li_2 threshold for a = 1
        let s = GFunctionSystem::polylog(2).unwrap();
        let b = crate::exact::rational::ceil(crate::exact::interval::exp_rational(&int(810), 64).hi());
        let cfg = VerifyConfig::default();
        let r = verify_theorem1(&s, &big(1), &b, &big(1), 2, None, None, &cfg).unwrap();
        assert_eq!(r.hyp_b, Verdict::Holds);
        assert_eq!(r.holds, Verdict::Holds);
    }

    #[test]
    fn rhs_decreases_in_m() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let cfg = VerifyConfig { property_mode: true, ..Default::default() };
        let mut prev: Option<IntervalReal> = None;
        for m in 1..5 {
            let r = verify_theorem1(&s, &big(1), &big(10), &big(1), m, Some(&big(0)), None, &cfg).unwrap();
            if let Some(p) = prev {
                assert!(r.log_rhs.certainly_lt(&p));
            }
            prev = Some(r.log_rhs);
        }
    }

    #[test]
    fn corollary_form_reports_preconditions() {
        let s = GFunctionSystem::log1m().unwrap();
        let cfg = VerifyConfig { property_mode: true, eps: Some(rat(1, 2)), ..Default::default() };
        let r = verify_theorem1(&s, &big(1), &big(1000), &big(1), 4, None, None, &cfg).unwrap();
        let c = r.corollary.unwrap();
        assert!(c.m_ok);
        assert_eq!(c.b_ok, Verdict::Fails);
    }
}
