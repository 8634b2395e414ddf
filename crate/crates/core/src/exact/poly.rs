//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{from_big, Rational};
use super::ExactError;

/// `coeffs[i]` is the coefficient of `z^i`; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(from_big).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of vanishing at `z = 0`; `None` for the zero polynomial.
    pub fn ord0(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// H(P): maximum modulus of the coefficients.
    pub fn height(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.denom().is_one().then(|| c.numer().clone()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `P^{(k)} / k!`, which has integer coefficients whenever `P` does.
    pub fn divided_derivative(&self, k: usize) -> Poly {
        let Some(deg) = self.degree() else {
            return Poly::zero();
        };
        if k > deg {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(deg + 1 - k);
        // binom(i, k) for i = k, k+1, ...
        let mut binom = BigInt::one();
        for i in k..=deg {
            if i > k {
                binom = binom * BigInt::from(i) / BigInt::from(i - k);
            }
            out.push(&self.coeffs[i] * Rational::from_integer(binom.clone()));
        }
        Poly::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// `P(-z)`.
    pub fn negate_variable(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `P * z^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    /// `P / z^k`; fails unless `z^k` divides `P`.
    pub fn shift_down(&self, k: usize) -> Result<Poly, ExactError> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(ExactError::Domain(format!("z^{k} does not divide the polynomial")));
        }
        Ok(Poly::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// Keeps the coefficients of `z^0 .. z^(len-1)`.
    pub fn truncate(&self, len: usize) -> Poly {
        Poly::new(self.coeffs.iter().take(len).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ExactError> {
        let Some(dd) = divisor.degree() else {
            return Err(ExactError::Domain("division by the zero polynomial".into()));
        };
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient; fails on a nonzero remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, ExactError> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(ExactError::Domain("polynomial division is not exact".into()));
        }
        Ok(q)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `min(1 + deg A, 1 + deg B) * H(A) * H(B)`, an upper bound for `H(A*B)`.
pub fn product_height_bound(a: &Poly, b: &Poly) -> Result<Rational, ExactError> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Err(ExactError::Domain(
            "product height bound is undefined for the zero polynomial".into(),
        ));
    };
    let factor = Rational::from_integer(BigInt::from(da.min(db) + 1));
    Ok(factor * a.height() * b.height())
}

/// `H(P)`; the zero polynomial has height 0.
pub fn poly_height(p: &Poly) -> Rational {
    p.height()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{mag}*z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use proptest::prelude::*;

    fn z_one_minus_z() -> Poly {
        Poly::from_ints(&[0, 1, -1])
    }

    #[test]
    fn height_examples() {
        assert_eq!(poly_height(&Poly::zero()), int(0));
        assert_eq!(poly_height(&Poly::from_ints(&[9, -8, 1])), int(9));
        assert_eq!(poly_height(&z_one_minus_z()), int(1));
    }

    #[test]
    fn product_height_examples() {
        let a = Poly::from_ints(&[1, 1]);
        let b = Poly::from_ints(&[1, -1]);
        assert_eq!(product_height_bound(&a, &b).unwrap(), int(2));
        assert_eq!((&a * &b).height(), int(1));

        let c = Poly::from_ints(&[2, -1]);
        assert_eq!(product_height_bound(&c, &c).unwrap(), int(8));
        assert_eq!(&c * &c, Poly::from_ints(&[4, -4, 1]));

        let d = z_one_minus_z();
        assert_eq!(product_height_bound(&d, &d).unwrap(), int(3));
        assert_eq!(&d * &d, Poly::from_ints(&[0, 0, 1, -2, 1]));
        assert_eq!((&d * &d).height(), int(2));

        assert!(product_height_bound(&Poly::zero(), &d).is_err());
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
        assert_eq!(Poly::new(vec![int(1), int(0), int(0)]).degree(), Some(0));
    }

    #[test]
    fn divided_derivative_is_binomial() {
        // (z^4)^{(2)} / 2! = 6 z^2
        let p = Poly::monomial(int(1), 4);
        assert_eq!(p.divided_derivative(2), Poly::monomial(int(6), 2));
        let q = Poly::from_ints(&[3, 5, 7, 11]);
        let mut d = q.clone();
        for k in 1..=3u32 {
            d = d.derivative();
            let fact: i64 = (1..=k as i64).product();
            assert_eq!(q.divided_derivative(k as usize), d.scale(&rat(1, fact)));
        }
        assert!(q.divided_derivative(4).is_zero());
    }

    #[test]
    fn division_and_shifts() {
        let p = Poly::from_ints(&[0, 0, 1, -2, 1]);
        let d = z_one_minus_z();
        assert_eq!(p.exact_div(&d).unwrap(), d);
        assert_eq!(p.shift_down(2).unwrap(), Poly::from_ints(&[1, -2, 1]));
        assert!(p.shift_down(3).is_err());
        assert!(Poly::from_ints(&[1, 1]).exact_div(&d).is_err());
        assert_eq!(p.ord0(), Some(2));
        assert_eq!(Poly::from_ints(&[1, 2, 3]).negate_variable(), Poly::from_ints(&[1, -2, 3]));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[9, -8, 1]).to_string(), "9 - 8*z + z^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-50i64..50, 1i64..6), 0..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in arb_poly(6), b in arb_poly(6), c in arb_poly(6)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn degree_adds(a in arb_poly(8), b in arb_poly(8)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }

        #[test]
        fn product_height_bound_dominates(
            a in prop::collection::vec(-20i64..20, 1..51),
            b in prop::collection::vec(-20i64..20, 1..51),
        ) {
            let a = Poly::from_ints(&a);
            let b = Poly::from_ints(&b);
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert!(product_height_bound(&a, &b).unwrap() >= (&a * &b).height());
        }

        #[test]
        fn eval_is_ring_morphism(a in arb_poly(5), b in arb_poly(5), zn in -9i64..9, zd in 1i64..9) {
            let z = rat(zn, zd);
            prop_assert_eq!((&a * &b).eval(&z), a.eval(&z) * b.eval(&z));
            prop_assert_eq!((&a + &b).eval(&z), a.eval(&z) + b.eval(&z));
        }
    }
}
