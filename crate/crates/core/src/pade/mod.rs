//! Padé type approximants of type II `[q; p, ..., p; p+h+1]`: the integer
//! linear system for `Q`, a small kernel vector, and exact order
//! certificates for the remainders `Q F_j - P_j`.

pub mod kernel;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::interval::ln_rational;
use crate::exact::rational::{from_big, int};
use crate::exact::{ExactError, IntervalReal, Poly, Rational, SeriesTrunc};
use crate::gfun::{GFunctionSystem, GfunError};
pub use kernel::{small_kernel_vector, IntMatrix};

/// Largest `p + h` accepted by the coefficient and denominator oracles.
pub const MAX_ORACLE_INDEX: usize = 20_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PadeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("p + h = {0} exceeds denominator oracle feasibility")]
    Infeasible(usize),
    #[error("kernel is zero-dimensional")]
    EmptyKernel,
    #[error("kernel vector invalid: {0}")]
    KernelInvalid(String),
    #[error(transparent)]
    Gfun(#[from] GfunError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Checks `p >= q >= N h >= 0` and `q + 1 > N h`.
pub fn check_params(n: usize, p: usize, q: usize, h: usize) -> Result<(), PadeError> {
    let nh = n * h;
    if !(p >= q && q >= nh) {
        return Err(PadeError::InvalidParams(format!("need p >= q >= N h, got p={p} q={q} N h={nh}")));
    }
    if p + h > MAX_ORACLE_INDEX {
        return Err(PadeError::Infeasible(p + h));
    }
    Ok(())
}

/// The `(N h) x (q+1)` integer system: row `(j, n)` for `n = p+1..=p+h`
/// holds `d_{p+h} f_{j, n-k}`, `k = 0..=q`.
pub fn constraint_matrix(sys: &GFunctionSystem, p: usize, q: usize, h: usize) -> Result<IntMatrix, PadeError> {
    check_params(sys.n(), p, q, h)?;
    let dph = from_big(sys.denominator(p + h));
    let mut m = IntMatrix::zero(sys.n() * h, q + 1);
    for j in 1..=sys.n() {
        let f = sys.coefficients(j, p + h + 1)?;
        for (r, n) in (p + 1..=p + h).enumerate() {
            let row = (j - 1) * h + r;
            for k in 0..=q.min(n) {
                let e = &dph * &f[n - k];
                if !e.is_integer() {
                    return Err(PadeError::KernelInvalid(format!("d_(p+h) f_({j},{}) is not an integer", n - k)));
                }
                m.set(row, k, e.to_integer());
            }
        }
    }
    Ok(m)
}

/// The Siegel-lemma height bound `1 + (q (C D)^(p+h+1))^(N h / (q + 1 - N h))`
/// and whether a kernel vector's max-norm is certified below it.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelCheck {
    /// enclosure of `log((q (CD)^(p+h+1))^(Nh/(q+1-Nh)))`; the bound is `1 + exp` of this
    pub log_core: IntervalReal,
    pub bound: IntervalReal,
    pub max_norm: BigInt,
    pub within: bool,
}

/// Enclosure of `log((q (CD)^(p+h+1))^(Nh/(q+1-Nh)))`.
pub fn siegel_log_core(sys: &GFunctionSystem, p: usize, q: usize, h: usize, bits: u32) -> Result<IntervalReal, PadeError> {
    let nh = sys.n() * h;
    if nh == 0 {
        return Ok(IntervalReal::point(Rational::zero()));
    }
    let expo = Rational::new(nh.into(), (q + 1 - nh).into());
    let lq = ln_rational(&int(q as i64), bits)?;
    let lcd = sys.cd().ln(bits).scale(&int((p + h + 1) as i64));
    Ok((&lq + &lcd).scale(&expo))
}

pub fn siegel_check(
    sys: &GFunctionSystem,
    p: usize,
    q: usize,
    h: usize,
    v: &[BigInt],
) -> Result<SiegelCheck, PadeError> {
    let max_norm = v.iter().map(|x| x.abs()).max().unwrap_or_default();
    let mut bits = 128;
    loop {
        let log_core = siegel_log_core(sys, p, q, h, bits)?;
        let bound = &log_core.exp(bits) + &IntervalReal::point(Rational::one());
        let mn = from_big(max_norm.clone());
        let decided = if bound.certainly_ge_rat(&mn) {
            Some(true)
        } else if bound.certainly_lt_rat(&mn) {
            Some(false)
        } else {
            None
        };
        if decided.is_some() || bits >= 2048 {
            return Ok(SiegelCheck { log_core, bound, max_norm, within: decided.unwrap_or(false) });
        }
        bits *= 2;
    }
}

/// `(Q; P_1, ..., P_N)` with certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    pub system: String,
    pub p: usize,
    pub q: usize,
    pub h: usize,
    /// kernel vector `v_0..v_q`
    pub v: Vec<BigInt>,
    pub q_poly: Poly,
    pub p_polys: Vec<Poly>,
    /// per `j`: certified lower bound on `ord_0(Q F_j - P_j)`
    pub order_certificates: Vec<usize>,
    pub height_q: Rational,
    pub siegel: SiegelCheck,
}

impl PadeApproximant {
    pub fn n(&self) -> usize {
        self.p_polys.len()
    }

    /// `P_0 = Q`, `P_1`, ..., `P_N`.
    pub fn columns(&self) -> Vec<Poly> {
        let mut c = vec![self.q_poly.clone()];
        c.extend(self.p_polys.iter().cloned());
        c
    }
}

/// Remainder `Q F_j - P_j` as a truncated series of the given order.
pub fn remainder_series(
    sys: &GFunctionSystem,
    qp: &Poly,
    pj: &Poly,
    j: usize,
    order: usize,
) -> Result<SeriesTrunc, PadeError> {
    let f = sys.coefficients(j, order)?;
    let qc = qp.coeffs();
    let out: Vec<Rational> = (0..order)
        .map(|n| {
            let mut s = Rational::zero();
            for (k, v) in qc.iter().enumerate().take(n + 1) {
                if !v.is_zero() {
                    s += v * &f[n - k];
                }
            }
            s - pj.coeff(n)
        })
        .collect();
    Ok(SeriesTrunc::new(out))
}

/// Builds `Q = sum v_k z^k` and `P_j` from a kernel vector and certifies the
/// vanishing orders exactly.
pub fn assemble(
    sys: &GFunctionSystem,
    p: usize,
    q: usize,
    h: usize,
    v: &[BigInt],
) -> Result<PadeApproximant, PadeError> {
    check_params(sys.n(), p, q, h)?;
    if v.len() != q + 1 || v.iter().all(Zero::is_zero) {
        return Err(PadeError::KernelInvalid("wrong length or zero vector".into()));
    }
    let q_poly = Poly::from_bigints(v);
    let vr: Vec<Rational> = v.iter().map(|x| from_big(x.clone())).collect();
    let mut p_polys = Vec::with_capacity(sys.n());
    let mut certs = Vec::with_capacity(sys.n());
    let dp = from_big(sys.denominator(p));
    // one coefficient past the target so the certificate can exceed it
    let order = p + h + 2;
    for j in 1..=sys.n() {
        let f = sys.coefficients(j, p + 1)?;
        let u: Vec<Rational> = (0..=p)
            .map(|n| (0..=n.min(q)).map(|k| &f[n - k] * &vr[k]).sum())
            .collect();
        let pj = Poly::new(u);
        if !pj.scale(&dp).is_integral() {
            return Err(PadeError::KernelInvalid(format!("d_p P_{j} is not integral")));
        }
        let r = remainder_series(sys, &q_poly, &pj, j, order)?;
        let val = r.valuation_lower_bound();
        if val < p + h + 1 {
            return Err(PadeError::KernelInvalid(format!(
                "ord_0(Q F_{j} - P_{j}) = {val} < p+h+1 = {}",
                p + h + 1
            )));
        }
        p_polys.push(pj);
        certs.push(val);
    }
    let siegel = siegel_check(sys, p, q, h, v)?;
    Ok(PadeApproximant {
        system: sys.name(),
        p,
        q,
        h,
        v: v.to_vec(),
        height_q: q_poly.height(),
        q_poly,
        p_polys,
        order_certificates: certs,
        siegel,
    })
}

/// Full construction: system, kernel, assembly, certificates.
pub fn build(sys: &GFunctionSystem, p: usize, q: usize, h: usize) -> Result<PadeApproximant, PadeError> {
    let m = constraint_matrix(sys, p, q, h)?;
    if q < m.rows() {
        return Err(PadeError::InvalidParams(format!("need q + 1 > N h, got q={q} N h={}", m.rows())));
    }
    let v = small_kernel_vector(&m).ok_or(PadeError::EmptyKernel)?;
    if !m.mul_vec(&v).iter().all(Zero::is_zero) {
        return Err(PadeError::KernelInvalid("M v != 0".into()));
    }
    assemble(sys, p, q, h, &v)
}

/// All `(q, h)` with `p >= q >= N h`, `h >= h_min`.
pub fn feasible_qh(n: usize, p: usize, h_min: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for h in h_min..=p / n.max(1) {
        for q in n * h..=p {
            out.push((q, h));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn log1m_system_and_kernel() {
        let s = GFunctionSystem::log1m().unwrap();
        let m = constraint_matrix(&s, 1, 1, 1).unwrap();
        // f = -1/n, d_2 = 2
        assert_eq!(m, IntMatrix::from_i64(&[&[-1, -2]], 2));
        let a = build(&s, 1, 1, 1).unwrap();
        assert_eq!(a.v, big(&[2, -1]));
        assert_eq!(a.q_poly, Poly::from_ints(&[2, -1]));
        assert_eq!(a.p_polys[0], Poly::from_ints(&[0, -2]));
        assert_eq!(a.order_certificates, vec![3]);
        let r = remainder_series(&s, &a.q_poly, &a.p_polys[0], 1, 6).unwrap();
        assert_eq!(r.coeff(3), &rat(-1, 6));
        assert!(a.siegel.within);
    }

    #[test]
    fn polylog2_system_and_kernel() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let m = constraint_matrix(&s, 2, 2, 1).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[12, 18, 36], &[4, 9, 36]], 3));
        let a = build(&s, 2, 2, 1).unwrap();
        assert_eq!(a.q_poly, Poly::from_ints(&[9, -8, 1]));
        assert!(a.order_certificates.iter().all(|&o| o >= 4));
    }

    #[test]
    fn h_zero_gives_truncations() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let m = constraint_matrix(&s, 3, 2, 0).unwrap();
        assert_eq!(m.rows(), 0);
        assert_eq!(m.cols(), 3);
        let a = build(&s, 3, 2, 0).unwrap();
        assert_eq!(a.q_poly, Poly::one());
        for j in 1..=2 {
            let trunc = Poly::new(s.coefficients(j, 4).unwrap());
            assert_eq!(a.p_polys[j - 1], trunc);
            assert!(a.order_certificates[j - 1] >= 4);
        }
    }

    #[test]
    fn parameter_checks() {
        let s = GFunctionSystem::polylog(2).unwrap();
        assert!(matches!(constraint_matrix(&s, 2, 3, 1), Err(PadeError::InvalidParams(_))));
        assert!(matches!(constraint_matrix(&s, 5, 3, 2), Err(PadeError::InvalidParams(_))));
        assert!(matches!(constraint_matrix(&s, MAX_ORACLE_INDEX, 2, 1), Err(PadeError::Infeasible(_))));
        assert!(matches!(
            assemble(&s, 2, 2, 1, &big(&[1, 0, 0])),
            Err(PadeError::KernelInvalid(_))
        ));
    }

    #[test]
    fn entries_bounded_by_growth() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let m = constraint_matrix(&s, 10, 8, 3).unwrap();
        let bound = s.cd().ln(64).scale(&int(14));
        let mx = from_big(m.max_abs());
        let l = ln_rational(&mx, 64).unwrap();
        assert!(l.certainly_le(&bound));
    }

    #[test]
    fn scaling_preserves_certificates() {
        let s = GFunctionSystem::log1m().unwrap();
        let a = build(&s, 4, 3, 2).unwrap();
        let scaled: Vec<BigInt> = a.v.iter().map(|x| x * -3).collect();
        let b = assemble(&s, 4, 3, 2, &scaled).unwrap();
        assert_eq!(b.q_poly, a.q_poly.scale(&int(-3)));
        assert_eq!(b.p_polys[0], a.p_polys[0].scale(&int(-3)));
        assert_eq!(b.order_certificates, a.order_certificates);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn built_approximants_are_certified(sysi in 0usize..3, p in 1usize..9, hq in 0usize..40) {
            let s = [GFunctionSystem::log1m(), GFunctionSystem::polylog(2), GFunctionSystem::from_name("sqrt1m")][sysi]
                .clone()
                .unwrap();
            let grid = feasible_qh(s.n(), p, 0);
            let (q, h) = grid[hq % grid.len()];
            let a = build(&s, p, q, h).unwrap();
            let dp = from_big(s.denominator(p));
            proptest::prop_assert!(a.q_poly.is_integral());
            for (j, pj) in a.p_polys.iter().enumerate() {
                proptest::prop_assert!(pj.scale(&dp).is_integral());
                proptest::prop_assert!(a.order_certificates[j] >= p + h + 1);
            }
            if a.siegel.within {
                // H(Q) <= 2 (q (CD)^(p+h+1))^(Nh/(q+1-Nh)) since that quantity is >= 1
                let two_core = a.siegel.log_core.exp(64).scale(&int(2));
                proptest::prop_assert!(two_core.certainly_ge_rat(&a.height_q) || a.height_q <= int(2));
            }
        }
    }
}
