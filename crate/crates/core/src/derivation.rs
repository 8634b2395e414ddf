//! Iterated approximants `P_k = D^k (d/dz - A)^k P / k!`, their
//! certificates, the determinant `Delta_N` and the index search used to
//! build a nonzero integer from them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::rational::{from_big, int};
use crate::exact::{Poly, PolyMatrix, Rational};
use crate::gfun::GFunctionSystem;
use crate::pade::{remainder_series, PadeApproximant, PadeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DerivationError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("Q_k cross-check mismatch at k = {0}")]
    CrossCheck(usize),
    #[error("Delta_N is not divisible by z^{required} (order {found})")]
    Divisibility { required: usize, found: usize },
    #[error("rank deficiency: no k <= {0} gives a nonzero combination")]
    RankDeficiency(usize),
    #[error("a/b is a root of the denominator polynomial")]
    RootOfD,
    #[error(transparent)]
    Pade(#[from] PadeError),
}

/// Per-`k` certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterCert {
    pub k: usize,
    pub deg_q: Option<usize>,
    pub deg_q_ok: bool,
    pub deg_p: Vec<Option<usize>>,
    pub deg_p_ok: bool,
    pub q_integral: bool,
    /// `d_{p+(d-1)k} P_{j,k}` integral for every `j`
    pub p_integral: bool,
    /// certified lower bounds on `ord_0(Q_k F_j - P_{j,k})`
    pub orders: Vec<usize>,
    /// `p + h + 1 - k`
    pub order_target: usize,
    pub order_ok: bool,
    /// `h >= k d`, where the Padé property is guaranteed
    pub pade_applicable: bool,
    /// `Q_k` from the recurrence equals `D^k Q^(k) / k!`
    pub eq7_match: bool,
}

impl IterCert {
    pub fn all_ok(&self) -> bool {
        self.deg_q_ok && self.deg_p_ok && self.q_integral && self.p_integral && self.order_ok && self.eq7_match
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IteratedFamily {
    pub base: PadeApproximant,
    pub k_max: usize,
    pub d: usize,
    pub qk: Vec<Poly>,
    /// `pk[k][j-1] = P_{j,k}`
    pub pk: Vec<Vec<Poly>>,
    pub certs: Vec<IterCert>,
}

impl IteratedFamily {
    /// Column `k`: `(Q_k, P_{1,k}, ..., P_{N,k})`.
    pub fn column(&self, k: usize) -> Vec<Poly> {
        let mut c = vec![self.qk[k].clone()];
        c.extend(self.pk[k].iter().cloned());
        c
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// `l_0 = q - N (h + 1) + d N (N + 1) / 2`
    pub fn ell0(&self) -> usize {
        ell0(self.n(), self.d, self.base.q, self.base.h)
    }
}

pub fn ell0(n: usize, d: usize, q: usize, h: usize) -> usize {
    // q >= N h and d N (N+1)/2 >= N, so this never goes negative
    q + d * n * (n + 1) / 2 - n * (h + 1)
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Runs the cleared recurrence `S_{k+1} = D S_k' - k D' S_k - (D A) S_k`
/// with `P_k = S_k / k!` for `k = 0..=k_max`, cross-checks `Q_k` and fills in
/// certificates.
pub fn iterate(base: &PadeApproximant, sys: &GFunctionSystem, k_max: usize) -> Result<IteratedFamily, DerivationError> {
    let n = sys.n();
    if base.n() != n {
        return Err(DerivationError::Precondition("approximant and system sizes differ".into()));
    }
    let (p, q, h, d) = (base.p, base.q, base.h, sys.d());
    let dpoly = sys.dpoly();
    let ddpoly = dpoly.derivative();
    let da = sys.cleared_matrix();

    let mut s = base.columns();
    let mut qk = Vec::with_capacity(k_max + 1);
    let mut pk = Vec::with_capacity(k_max + 1);
    let mut certs = Vec::with_capacity(k_max + 1);
    let mut dk = Poly::one();
    for k in 0..=k_max {
        if k > 0 {
            let kk = int(k as i64 - 1);
            let mixed = da.mul_vec(&s);
            s = s
                .iter()
                .zip(&mixed)
                .map(|(si, mi)| &(&(dpoly * &si.derivative()) - &(&ddpoly * si).scale(&kk)) - mi)
                .collect();
            dk = &dk * dpoly;
        }
        let inv = factorial(k).recip();
        let col: Vec<Poly> = s.iter().map(|x| x.scale(&inv)).collect();
        let eq7 = &dk * &base.q_poly.divided_derivative(k);
        if eq7 != col[0] {
            return Err(DerivationError::CrossCheck(k));
        }
        let cert = certify(sys, &col, k, p, q, h, d)?;
        qk.push(col[0].clone());
        pk.push(col[1..].to_vec());
        certs.push(cert);
    }
    Ok(IteratedFamily { base: base.clone(), k_max, d, qk, pk, certs })
}

#[allow(clippy::too_many_arguments)]
fn certify(
    sys: &GFunctionSystem,
    col: &[Poly],
    k: usize,
    p: usize,
    q: usize,
    h: usize,
    d: usize,
) -> Result<IterCert, DerivationError> {
    let shift = (d - 1) * k;
    let deg_q = col[0].degree();
    let deg_p: Vec<Option<usize>> = col[1..].iter().map(Poly::degree).collect();
    let dpk = from_big(sys.denominator(p + shift));
    let target = (p + h + 1).saturating_sub(k);
    let mut orders = Vec::with_capacity(col.len() - 1);
    for (j, pj) in col[1..].iter().enumerate() {
        let r = remainder_series(sys, &col[0], pj, j + 1, target + 1)?;
        orders.push(r.valuation_lower_bound());
    }
    Ok(IterCert {
        k,
        deg_q_ok: deg_q.is_none_or(|g| g <= q + shift),
        deg_q,
        deg_p_ok: deg_p.iter().all(|g| g.is_none_or(|g| g <= p + shift)),
        deg_p,
        q_integral: col[0].is_integral(),
        p_integral: col[1..].iter().all(|x| x.scale(&dpk).is_integral()),
        order_ok: orders.iter().all(|&o| o >= target),
        orders,
        order_target: target,
        pade_applicable: h >= k * d,
        eq7_match: true,
    })
}

/// `Delta_N` and its factorization `z^required * DeltaTilde`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEstimateCheck {
    pub delta: Poly,
    /// `N (p + h + 1) - N (N + 1) / 2`
    pub required_order: usize,
    /// exact `ord_0(Delta_N)` (`None` when `Delta_N = 0`)
    pub vanish_order: Option<usize>,
    /// `Delta_N / z^required_order`
    pub delta_tilde: Poly,
    pub ell0: usize,
    pub deg_ok: bool,
    pub nonzero: bool,
}

pub fn zero_estimate_check(fam: &IteratedFamily, sys: &GFunctionSystem) -> Result<ZeroEstimateCheck, DerivationError> {
    let n = sys.n();
    if fam.k_max < n {
        return Err(DerivationError::Precondition(format!("family has k <= {}, need k <= N = {n}", fam.k_max)));
    }
    let cols: Vec<Vec<Poly>> = (0..=n).map(|k| fam.column(k)).collect();
    let delta = PolyMatrix::from_columns(&cols).determinant().map_err(PadeError::from)?;
    let (p, h) = (fam.base.p, fam.base.h);
    let required = n * (p + h + 1) - n * (n + 1) / 2;
    let ell0 = fam.ell0();
    if delta.is_zero() {
        return Ok(ZeroEstimateCheck {
            delta,
            required_order: required,
            vanish_order: None,
            delta_tilde: Poly::zero(),
            ell0,
            deg_ok: true,
            nonzero: false,
        });
    }
    let found = delta.ord0().unwrap_or(0);
    if found < required {
        return Err(DerivationError::Divisibility { required, found });
    }
    let tilde = delta.shift_down(required).map_err(PadeError::from)?;
    Ok(ZeroEstimateCheck {
        deg_ok: tilde.degree().is_none_or(|g| g <= ell0),
        delta_tilde: tilde,
        delta,
        required_order: required,
        vanish_order: Some(found),
        ell0,
        nonzero: true,
    })
}

/// `n Q_k(a/b) - B b^m P_{j,k}(a/b)`
pub fn combination(fam: &IteratedFamily, k: usize, j: usize, z: &Rational, n: &BigInt, bbm: &Rational) -> Rational {
    from_big(n.clone()) * fam.qk[k].eval(z) - bbm * fam.pk[k][j - 1].eval(z)
}

/// Smallest `k <= l_0 + N` with `n Q_k(a/b) - B b^m P_{j,k}(a/b) != 0`.
#[allow(clippy::too_many_arguments)]
pub fn find_nonvanishing_index(
    fam: &IteratedFamily,
    sys: &GFunctionSystem,
    a: &BigInt,
    b: &BigInt,
    n: &BigInt,
    big_b: &BigInt,
    m: u32,
    j: usize,
) -> Result<usize, DerivationError> {
    if a.is_zero() || b.is_zero() {
        return Err(DerivationError::Precondition("need a, b nonzero".into()));
    }
    if j == 0 || j > sys.n() {
        return Err(DerivationError::Precondition(format!("function index {j} out of range")));
    }
    let z = Rational::new(a.clone(), b.clone());
    if sys.dpoly().eval(&z).is_zero() {
        return Err(DerivationError::RootOfD);
    }
    let limit = fam.ell0() + sys.n();
    if fam.k_max < limit {
        return Err(DerivationError::Precondition(format!(
            "family has k <= {}, need k <= l_0 + N = {limit}",
            fam.k_max
        )));
    }
    let bbm = from_big(big_b * num_traits::pow(b.clone(), m as usize));
    (0..=limit)
        .find(|&k| !combination(fam, k, j, &z, n, &bbm).is_zero())
        .ok_or(DerivationError::RankDeficiency(limit))
}
