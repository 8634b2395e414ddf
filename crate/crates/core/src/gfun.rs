//! Catalog of concrete G-function systems `Y' = A(z) Y` with
//! `Y = (1, F_1, ..., F_N)`: Taylor coefficient and denominator oracles,
//! the denominator polynomial, the degree bound `d` and growth constants.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::exact::interval::ln_rational;
use crate::exact::rational::{from_big, int, lcm_prefix, parse_rational, Rational};
use crate::exact::series::{poly_times_series, SeriesTrunc};
use crate::exact::{ExactError, IntervalReal, Poly, PolyMatrix, PowerProduct, RatFun, RatFunMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfunError {
    #[error("unknown system {0:?}")]
    Unknown(String),
    #[error("polynomial, F in Q(z): exponent {0} is an integer")]
    Polynomial(Rational),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("function index {j} out of range 1..={n}")]
    Index { j: usize, n: usize },
    #[error("system invariant violated: {0}")]
    Invariant(String),
    #[error("system file: {0}")]
    File(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The built-in families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `(1, Li_1, ..., Li_s)`
    Polylog { s: u32 },
    /// `(1, log(1 - z))`
    Log1m,
    /// `(1, (1 - z)^alpha)` for a non-integer rational `alpha`
    BinomPower { alpha: Rational },
}

impl Family {
    fn label(&self) -> String {
        match self {
            Family::Polylog { s } => format!("polylog{s}"),
            Family::Log1m => "log1m".to_string(),
            Family::BinomPower { alpha } => format!("binom({alpha})"),
        }
    }
}

/// Outcome of [`GFunctionSystem::verify_growth`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub n_max: usize,
    pub c_ok: bool,
    pub d_ok: bool,
    pub first_violation: Option<usize>,
    /// indices whose `d_n` comparison stayed undecided at the precision cap
    pub undecided: Vec<usize>,
}

#[derive(Debug)]
pub struct GFunctionSystem {
    family: Family,
    reflected: bool,
    n: usize,
    a: RatFunMatrix,
    da: PolyMatrix,
    dpoly: Poly,
    d: usize,
    c: Rational,
    dgrowth: PowerProduct,
    verified_range: AtomicUsize,
}

impl Clone for GFunctionSystem {
    fn clone(&self) -> Self {
        GFunctionSystem {
            family: self.family.clone(),
            reflected: self.reflected,
            n: self.n,
            a: self.a.clone(),
            da: self.da.clone(),
            dpoly: self.dpoly.clone(),
            d: self.d,
            c: self.c.clone(),
            dgrowth: self.dgrowth.clone(),
            verified_range: AtomicUsize::new(self.verified_range()),
        }
    }
}

fn one_minus_z() -> Poly {
    Poly::from_ints(&[1, -1])
}

/// Builds a built-in system. `name` is one of `polylog`, `log1m`,
/// `binom_power`; `s` is the polylogarithm order and `alpha` the exponent.
pub fn builtin(name: &str, s: Option<u32>, alpha: Option<&Rational>) -> Result<GFunctionSystem, GfunError> {
    match name {
        "polylog" => GFunctionSystem::polylog(
            s.ok_or_else(|| GfunError::InvalidParams("polylog needs an order s".into()))?,
        ),
        "log1m" => GFunctionSystem::log1m(),
        "binom_power" => GFunctionSystem::binom_power(
            alpha.ok_or_else(|| GfunError::InvalidParams("binom_power needs alpha".into()))?,
        ),
        other => Err(GfunError::Unknown(other.to_string())),
    }
}

impl GFunctionSystem {
    pub fn polylog(s: u32) -> Result<Self, GfunError> {
        if s == 0 {
            return Err(GfunError::InvalidParams("polylog order must be >= 1".into()));
        }
        let dim = s as usize + 1;
        let mut a = RatFunMatrix::zero(dim);
        a.set(1, 0, RatFun::new(Poly::one(), one_minus_z())?);
        for j in 2..dim {
            a.set(j, j - 1, RatFun::new(Poly::one(), Poly::from_ints(&[0, 1]))?);
        }
        let dpoly = if s == 1 { one_minus_z() } else { Poly::from_ints(&[0, 1, -1]) };
        let d = if s == 1 { 1 } else { 2 };
        Self::assemble(
            Family::Polylog { s },
            a,
            dpoly,
            d,
            Rational::one(),
            PowerProduct::e_pow(int(s as i64)),
        )
    }

    pub fn log1m() -> Result<Self, GfunError> {
        let mut a = RatFunMatrix::zero(2);
        a.set(1, 0, RatFun::new(Poly::from_ints(&[-1]), one_minus_z())?);
        Self::assemble(Family::Log1m, a, one_minus_z(), 1, Rational::one(), PowerProduct::e_pow(int(1)))
    }

    pub fn binom_power(alpha: &Rational) -> Result<Self, GfunError> {
        if alpha.is_integer() {
            return Err(GfunError::Polynomial(alpha.clone()));
        }
        let v = alpha.denom().clone();
        let mut a = RatFunMatrix::zero(2);
        a.set(1, 1, RatFun::new(Poly::constant(-alpha), one_minus_z())?);
        let dpoly = one_minus_z().scale(&from_big(v.clone()));
        // |binom(alpha, n)| <= max(1, |alpha|)^n
        let c = alpha.abs().max(Rational::one());
        // d_n divides v^n * prod_{p | v} p^{v_p(n!)} and v_p(n!) <= n / (p - 1)
        let mut dg = PowerProduct::int_pow(&v, &Rational::one())?;
        for p in prime_divisors(&v) {
            let e = Rational::new(BigInt::one(), &p - BigInt::one());
            dg = dg.mul(&PowerProduct::int_pow(&p, &e)?);
        }
        Self::assemble(Family::BinomPower { alpha: alpha.clone() }, a, dpoly, 1, c, dg)
    }

    /// Parses names like `polylog2`, `log1m`, `binom:1/2` or `sqrt1m`.
    pub fn from_name(name: &str) -> Result<Self, GfunError> {
        let name = name.trim();
        if let Some(rest) = name.strip_prefix("polylog") {
            let s: u32 = rest.parse().map_err(|_| GfunError::Unknown(name.to_string()))?;
            return Self::polylog(s);
        }
        if let Some(rest) = name.strip_prefix("binom:") {
            return Self::binom_power(&parse_rational(rest)?);
        }
        match name {
            "log1m" => Self::log1m(),
            "sqrt1m" => Self::binom_power(&Rational::new(1.into(), 2.into())),
            _ => Err(GfunError::Unknown(name.to_string())),
        }
    }

    /// Loads a structured-text (TOML) system definition; see [`SystemFile`].
    pub fn from_file(path: &Path) -> Result<Self, GfunError> {
        let text = std::fs::read_to_string(path).map_err(|e| GfunError::File(format!("{}: {e}", path.display())))?;
        SystemFile::parse(&text)?.build()
    }

    /// A file path when it exists on disk, otherwise a built-in name.
    pub fn resolve(spec: &str) -> Result<Self, GfunError> {
        let p = Path::new(spec);
        if p.is_file() {
            Self::from_file(p)
        } else {
            Self::from_name(spec)
        }
    }

    fn assemble(
        family: Family,
        a: RatFunMatrix,
        dpoly: Poly,
        d: usize,
        c: Rational,
        dgrowth: PowerProduct,
    ) -> Result<Self, GfunError> {
        let da = a.clear_denominators(&dpoly)?;
        let sys = GFunctionSystem {
            n: a.dim() - 1,
            family,
            reflected: false,
            a,
            da,
            dpoly,
            d,
            c,
            dgrowth,
            verified_range: AtomicUsize::new(0),
        };
        sys.check_invariants()?;
        Ok(sys)
    }

    fn check_invariants(&self) -> Result<(), GfunError> {
        let bad = |m: &str| Err(GfunError::Invariant(m.to_string()));
        if self.d < 1 {
            return bad("degree bound d must be >= 1");
        }
        if !self.a.row_is_zero(0) {
            return bad("row 0 of A must vanish");
        }
        if !self.dpoly.is_integral() || self.dpoly.is_zero() {
            return bad("denominator polynomial must be a nonzero integer polynomial");
        }
        if self.dpoly.degree().unwrap_or(0) > self.d {
            return bad("deg D exceeds d");
        }
        for i in 0..=self.n {
            for j in 0..=self.n {
                let e = self.da.get(i, j);
                if !e.is_integral() {
                    return bad("D*A must have integer entries");
                }
                if e.degree().is_some_and(|k| k + 1 > self.d) {
                    return bad("deg(D*A) exceeds d - 1");
                }
            }
        }
        Ok(())
    }

    /// The system satisfied by `Y(-z)`: coefficients pick up `(-1)^n`,
    /// `A(z)` becomes `-A(-z)` and `D(z)` becomes `D(-z)`.
    pub fn reflected(&self) -> Self {
        let a = self.a.reflect();
        let dpoly = self.dpoly.negate_variable();
        let mut da = PolyMatrix::zero(self.n + 1, self.n + 1);
        for i in 0..=self.n {
            for j in 0..=self.n {
                da.set(i, j, -&self.da.get(i, j).negate_variable());
            }
        }
        GFunctionSystem {
            family: self.family.clone(),
            reflected: !self.reflected,
            n: self.n,
            a,
            da,
            dpoly,
            d: self.d,
            c: self.c.clone(),
            dgrowth: self.dgrowth.clone(),
            verified_range: AtomicUsize::new(self.verified_range()),
        }
    }

    /// Replaces the growth constants (e.g. from a system file).
    pub fn with_growth(mut self, c: Option<Rational>, dgrowth: Option<PowerProduct>) -> Self {
        if let Some(c) = c {
            self.c = c;
        }
        if let Some(dg) = dgrowth {
            self.dgrowth = dg;
        }
        self.verified_range = AtomicUsize::new(0);
        self
    }

    pub fn name(&self) -> String {
        let base = self.family.label();
        if self.reflected {
            format!("{base}(-z)")
        } else {
            base
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    /// Number of non-constant functions.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &RatFunMatrix {
        &self.a
    }

    /// `D(z) A(z)` with polynomial entries.
    pub fn cleared_matrix(&self) -> &PolyMatrix {
        &self.da
    }

    pub fn dpoly(&self) -> &Poly {
        &self.dpoly
    }

    /// `H(D)`
    pub fn dpoly_height(&self) -> Rational {
        self.dpoly.height()
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn dgrowth(&self) -> &PowerProduct {
        &self.dgrowth
    }

    /// `C * D` as a power product.
    pub fn cd(&self) -> PowerProduct {
        PowerProduct::from_rational(&self.c)
            .unwrap_or_default()
            .mul(&self.dgrowth)
    }

    pub fn verified_range(&self) -> usize {
        self.verified_range.load(Ordering::Acquire)
    }

    /// Index of the function the Diophantine statements are about: `Li_s`
    /// for polylogarithms, `F_1` otherwise.
    pub fn principal(&self) -> usize {
        match self.family {
            Family::Polylog { s } => s as usize,
            _ => 1,
        }
    }

    fn check_index(&self, j: usize) -> Result<(), GfunError> {
        if j == 0 || j > self.n {
            return Err(GfunError::Index { j, n: self.n });
        }
        Ok(())
    }

    /// Taylor coefficient `f_{j,n}`.
    pub fn coefficient(&self, j: usize, n: usize) -> Result<Rational, GfunError> {
        self.check_index(j)?;
        Ok(self.coefficients(j, n + 1)?.pop().unwrap_or_default())
    }

    /// `f_{j,0}, ..., f_{j,len-1}`.
    pub fn coefficients(&self, j: usize, len: usize) -> Result<Vec<Rational>, GfunError> {
        self.check_index(j)?;
        let mut out: Vec<Rational> = match &self.family {
            Family::Polylog { .. } => (0..len)
                .map(|n| {
                    if n == 0 {
                        Rational::zero()
                    } else {
                        Rational::new(BigInt::one(), num_traits::pow(BigInt::from(n), j))
                    }
                })
                .collect(),
            Family::Log1m => (0..len)
                .map(|n| if n == 0 { Rational::zero() } else { Rational::new((-1).into(), n.into()) })
                .collect(),
            Family::BinomPower { alpha } => {
                let mut v = Vec::with_capacity(len);
                let mut c = Rational::one();
                for n in 0..len {
                    v.push(c.clone());
                    c = c * (Rational::from_integer(n.into()) - alpha) / Rational::from_integer((n + 1).into());
                }
                v
            }
        };
        if self.reflected {
            for (n, c) in out.iter_mut().enumerate() {
                if n % 2 == 1 {
                    *c = -&*c;
                }
            }
        }
        Ok(out)
    }

    /// Truncated series of `F_j` to the given order.
    pub fn series(&self, j: usize, order: usize) -> Result<SeriesTrunc, GfunError> {
        Ok(SeriesTrunc::new(self.coefficients(j, order)?))
    }

    /// `d_0, ..., d_upto`: `d_n f_{j,m}` is an integer for all `m <= n`.
    pub fn denominators(&self, upto: usize) -> Vec<BigInt> {
        match &self.family {
            Family::Polylog { s } => lcm_prefix(upto)
                .into_iter()
                .map(|l| num_traits::pow(l, *s as usize))
                .collect(),
            Family::Log1m => lcm_prefix(upto),
            Family::BinomPower { .. } => {
                let mut out = Vec::with_capacity(upto + 1);
                let mut acc = BigInt::one();
                let coeffs = self.coefficients(1, upto + 1).unwrap_or_default();
                for c in coeffs {
                    acc = acc.lcm(c.denom());
                    out.push(acc.clone());
                }
                out
            }
        }
    }

    pub fn denominator(&self, n: usize) -> BigInt {
        self.denominators(n).pop().unwrap_or_else(BigInt::one)
    }

    /// Checks `|f_{j,n}| <= C^(n+1)` and `d_n <= D^(n+1)` for `n <= n_max`;
    /// on success the verified range grows to `n_max`.
    pub fn verify_growth(&self, n_max: usize) -> GrowthReport {
        let mut c_ok = true;
        let mut first_violation: Option<usize> = None;
        let note = |n: usize, fv: &mut Option<usize>| {
            if fv.is_none_or(|v| n < v) {
                *fv = Some(n);
            }
        };
        for j in 1..=self.n {
            let coeffs = self.coefficients(j, n_max + 1).unwrap_or_default();
            let mut cp = self.c.clone();
            for (n, f) in coeffs.iter().enumerate() {
                if f.abs() > cp {
                    c_ok = false;
                    note(n, &mut first_violation);
                    break;
                }
                cp *= &self.c;
            }
        }
        let dens = self.denominators(n_max);
        let mut d_ok = true;
        let mut undecided = Vec::new();
        match self.dgrowth.rational_value() {
            Some(dg) => {
                let mut pw = dg.clone();
                for (n, dn) in dens.iter().enumerate() {
                    if from_big(dn.clone()) > pw {
                        d_ok = false;
                        note(n, &mut first_violation);
                        break;
                    }
                    pw *= &dg;
                }
            }
            None => {
                let mut cache: Option<(BigInt, IntervalReal)> = None;
                'scan: for (n, dn) in dens.iter().enumerate() {
                    let mut bits = 64u32;
                    loop {
                        let ln_dn = match &cache {
                            Some((v, l)) if v == dn && bits == 64 => l.clone(),
                            _ => {
                                let l = ln_rational(&from_big(dn.clone()), bits)
                                    .unwrap_or_else(|_| IntervalReal::point(Rational::zero()));
                                if bits == 64 {
                                    cache = Some((dn.clone(), l.clone()));
                                }
                                l
                            }
                        };
                        let rhs = self.dgrowth.ln(bits).scale(&int(n as i64 + 1));
                        if ln_dn.certainly_le(&rhs) {
                            break;
                        }
                        if rhs.certainly_lt(&ln_dn) {
                            d_ok = false;
                            note(n, &mut first_violation);
                            break 'scan;
                        }
                        if bits >= 4096 {
                            undecided.push(n);
                            break;
                        }
                        bits *= 2;
                    }
                }
            }
        }
        if !undecided.is_empty() {
            d_ok = false;
        }
        let good_upto = match first_violation {
            None if undecided.is_empty() => Some(n_max),
            None => undecided[0].checked_sub(1),
            Some(v) => v.checked_sub(1),
        };
        if let Some(g) = good_upto {
            self.verified_range.fetch_max(g, Ordering::AcqRel);
        }
        GrowthReport { n_max, c_ok, d_ok, first_violation, undecided }
    }

    /// Exact check of `D Y' = (D A) Y` on the truncated series vector up to
    /// `order` coefficients.
    pub fn verify_differential_system(&self, order: usize) -> Result<bool, GfunError> {
        let mut y: Vec<SeriesTrunc> = vec![SeriesTrunc::new(
            (0..order + 1).map(|i| if i == 0 { Rational::one() } else { Rational::zero() }).collect(),
        )];
        for j in 1..=self.n {
            y.push(self.series(j, order + 1)?);
        }
        for i in 0..=self.n {
            let lhs = poly_times_series(&self.dpoly, &y[i].derivative());
            let mut rhs = SeriesTrunc::new(vec![Rational::zero(); order]);
            for (j, yj) in y.iter().enumerate() {
                rhs = &rhs + &poly_times_series(self.da.get(i, j), &yj.truncate(order));
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            out.push(p.clone());
            while m.is_multiple_of(&p) {
                m /= &p;
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
    out
}

/// Structured-text system definition:
///
/// ```toml
/// name = "polylog"          # polylog | log1m | binom_power
/// [params]
/// s = 2                     # polylog order
/// alpha = "1/2"             # binom_power exponent
/// [overrides]               # optional
/// C = "1"
/// Dgrowth = "e^2"
/// reflect = false           # use F(-z)
/// ```
#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct SystemFile {
    pub name: String,
    #[serde(default)]
    pub params: SystemParams,
    #[serde(default)]
    pub overrides: SystemOverrides,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct SystemParams {
    pub s: Option<u32>,
    pub alpha: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct SystemOverrides {
    #[serde(rename = "C")]
    pub c: Option<String>,
    #[serde(rename = "Dgrowth")]
    pub dgrowth: Option<String>,
    #[serde(default)]
    pub reflect: bool,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, GfunError> {
        toml::from_str(text).map_err(|e| GfunError::File(e.to_string()))
    }

    pub fn build(&self) -> Result<GFunctionSystem, GfunError> {
        let alpha = self.params.alpha.as_deref().map(parse_rational).transpose()?;
        let sys = builtin(&self.name, self.params.s, alpha.as_ref())?;
        let c = self.overrides.c.as_deref().map(parse_rational).transpose()?;
        if c.as_ref().is_some_and(|c| !c.is_positive()) {
            return Err(GfunError::InvalidParams("C must be positive".into()));
        }
        let dg = self.overrides.dgrowth.as_deref().map(PowerProduct::parse).transpose()?;
        let sys = if c.is_some() || dg.is_some() { sys.with_growth(c, dg) } else { sys };
        Ok(if self.overrides.reflect { sys.reflected() } else { sys })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn polylog2_matches_displayed_system() {
        let s = GFunctionSystem::polylog(2).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.d(), 2);
        assert_eq!(s.c(), &int(1));
        assert_eq!(s.dpoly(), &Poly::from_ints(&[0, 1, -1]));
        assert_eq!(s.dpoly_height(), int(1));
        let a = s.matrix();
        assert_eq!(a.get(1, 0), &RatFun::new(Poly::one(), one_minus_z()).unwrap());
        assert_eq!(a.get(2, 1), &RatFun::new(Poly::one(), Poly::from_ints(&[0, 1])).unwrap());
        for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 0), (2, 2)] {
            assert!(a.get(i, j).is_zero());
        }
        assert_eq!(s.dgrowth(), &PowerProduct::e_pow(int(2)));
    }

    #[test]
    fn coefficient_examples() {
        let p = GFunctionSystem::polylog(2).unwrap();
        assert_eq!(p.coefficient(2, 3).unwrap(), rat(1, 9));
        assert_eq!(p.coefficient(1, 0).unwrap(), int(0));
        let l = GFunctionSystem::log1m().unwrap();
        assert_eq!(l.coefficient(1, 5).unwrap(), rat(-1, 5));
        assert!(l.coefficient(2, 1).is_err());
        assert!(l.coefficient(0, 1).is_err());
        assert_eq!(p.denominator(4), BigInt::from(144));
    }

    #[test]
    fn log1m_derivative_relation() {
        let l = GFunctionSystem::log1m().unwrap();
        assert_eq!(l.d(), 1);
        assert_eq!(l.cleared_matrix().get(1, 0), &Poly::from_ints(&[-1]));
        assert!(l.verify_differential_system(30).unwrap());
    }

    #[test]
    fn builtins_satisfy_their_differential_systems() {
        for name in ["polylog1", "polylog2", "polylog3", "log1m", "sqrt1m", "binom:2/3", "binom:-5/2"] {
            let s = GFunctionSystem::from_name(name).unwrap();
            assert!(s.verify_differential_system(25).unwrap(), "{name}");
            assert!(s.reflected().verify_differential_system(25).unwrap(), "{name} reflected");
            assert!(s.matrix().row_is_zero(0));
        }
    }

    #[test]
    fn integer_exponent_rejected() {
        assert_eq!(GFunctionSystem::binom_power(&int(3)).unwrap_err(), GfunError::Polynomial(int(3)));
        assert!(matches!(GFunctionSystem::from_name("bessel"), Err(GfunError::Unknown(_))));
        assert!(builtin("polylog", None, None).is_err());
    }

    #[test]
    fn binom_half_denominators_and_growth() {
        let s = GFunctionSystem::from_name("sqrt1m").unwrap();
        assert_eq!(s.coefficients(1, 4).unwrap(), vec![int(1), rat(-1, 2), rat(-1, 8), rat(-1, 16)]);
        let d: Vec<i64> = s.denominators(5).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 8, 16, 128, 256]);
        assert_eq!(s.dgrowth().rational_value(), Some(int(4)));
        assert_eq!(s.dpoly(), &Poly::from_ints(&[2, -2]));
        let r = s.verify_growth(200);
        assert!(r.c_ok && r.d_ok, "{r:?}");
    }

    #[test]
    fn denominators_divide_successors_and_clear_coefficients() {
        for name in ["polylog2", "log1m", "binom:1/3"] {
            let s = GFunctionSystem::from_name(name).unwrap();
            let dens = s.denominators(40);
            for w in dens.windows(2) {
                assert!(w[1].is_multiple_of(&w[0]));
            }
            for j in 1..=s.n() {
                let c = s.coefficients(j, 41).unwrap();
                for n in 0..=40 {
                    for m in 0..=n {
                        assert!((&c[m] * from_big(dens[n].clone())).is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn polylog2_growth_on_range() {
        let s = GFunctionSystem::polylog(2).unwrap();
        let r = s.verify_growth(25);
        assert!(r.c_ok && r.d_ok, "{r:?}");
        assert_eq!(s.verified_range(), 25);
        // psi(73) = 75.09... > 74, so lcm(1..73)^2 > e^148
        let r = s.verify_growth(1000);
        assert!(r.c_ok);
        assert!(!r.d_ok);
        assert_eq!(r.first_violation, Some(73));
        assert_eq!(s.verified_range(), 72);
        s.verify_growth(10);
        assert_eq!(s.verified_range(), 72);
    }

    #[test]
    fn too_small_growth_override_is_reported() {
        let s = GFunctionSystem::polylog(2).unwrap().with_growth(None, Some(PowerProduct::from_int(2)));
        let r = s.verify_growth(30);
        assert!(!r.d_ok);
        // lcm(1..n)^2 <= 2^(n+1) first fails at n = 2 (4 vs 8 ok), n = 3 (36 > 16)
        assert_eq!(r.first_violation, Some(3));
        assert_eq!(s.verified_range(), 2);
    }

    #[test]
    fn reflected_coefficients_alternate() {
        let s = GFunctionSystem::log1m().unwrap().reflected();
        assert_eq!(s.coefficient(1, 1).unwrap(), int(1));
        assert_eq!(s.coefficient(1, 2).unwrap(), rat(-1, 2));
        assert_eq!(s.dpoly(), &Poly::from_ints(&[1, 1]));
        assert_eq!(s.name(), "log1m(-z)");
    }

    #[test]
    fn system_file_round() {
        let f = SystemFile::parse(
            "name = \"polylog\"\n[params]\ns = 2\n[overrides]\nDgrowth = \"e^3\"\n",
        )
        .unwrap();
        let s = f.build().unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.dgrowth(), &PowerProduct::e_pow(int(3)));
        let g = SystemFile::parse("name = \"binom_power\"\n[params]\nalpha = \"1/2\"\n").unwrap();
        assert_eq!(g.build().unwrap().name(), "binom(1/2)");
        assert!(SystemFile::parse("name = 3").is_err());
    }
}
