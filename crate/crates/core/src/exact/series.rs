//! Truncated power series `sum_{i < order} c_i z^i + O(z^order)`.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::poly::Poly;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTrunc {
    coeffs: Vec<Rational>,
}

impl SeriesTrunc {
    /// Coefficients of `z^0 .. z^(order-1)`; the length is the truncation order.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        SeriesTrunc { coeffs }
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        SeriesTrunc::new((0..order).map(|i| p.coeff(i)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// Index of the first nonzero coefficient, or `order()` when every known
    /// coefficient vanishes (a certified lower bound for the valuation).
    pub fn valuation_lower_bound(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn derivative(&self) -> SeriesTrunc {
        SeriesTrunc::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn truncate(&self, order: usize) -> SeriesTrunc {
        SeriesTrunc::new(self.coeffs.iter().take(order).cloned().collect())
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

impl Add for &SeriesTrunc {
    type Output = SeriesTrunc;
    fn add(self, rhs: &SeriesTrunc) -> SeriesTrunc {
        let n = self.order().min(rhs.order());
        SeriesTrunc::new((0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect())
    }
}

impl Sub for &SeriesTrunc {
    type Output = SeriesTrunc;
    fn sub(self, rhs: &SeriesTrunc) -> SeriesTrunc {
        let n = self.order().min(rhs.order());
        SeriesTrunc::new((0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect())
    }
}

/// The product is known to the smaller of the two orders.
impl Mul for &SeriesTrunc {
    type Output = SeriesTrunc;
    fn mul(self, rhs: &SeriesTrunc) -> SeriesTrunc {
        let n = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        SeriesTrunc::new(out)
    }
}

/// A polynomial times a series is known to the series' order.
pub fn poly_times_series(p: &Poly, s: &SeriesTrunc) -> SeriesTrunc {
    let n = s.order();
    let mut out = vec![Rational::zero(); n];
    for (i, a) in p.coeffs().iter().enumerate().take(n) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in s.coeffs.iter().take(n - i).enumerate() {
            out[i + j] += a * b;
        }
    }
    SeriesTrunc::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn product_truncates_to_min_order() {
        let a = SeriesTrunc::new(vec![int(1), int(1), int(1), int(1)]);
        let b = SeriesTrunc::new(vec![int(1), int(-1)]);
        let c = &a * &b;
        assert_eq!(c.order(), 2);
        assert_eq!(c.coeffs(), &[int(1), int(0)]);
    }

    #[test]
    fn geometric_inverse() {
        // (1 - z) * sum z^n = 1 + O(z^6)
        let g = SeriesTrunc::new(vec![int(1); 6]);
        let p = Poly::from_ints(&[1, -1]);
        let prod = poly_times_series(&p, &g);
        assert_eq!(prod.valuation_lower_bound(), 0);
        assert!(prod.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn valuation_of_log_remainder() {
        // (2 - z) log(1-z) + 2z = -z^3/6 + ...
        let log = SeriesTrunc::new((0..8).map(|n| if n == 0 { int(0) } else { rat(-1, n) }).collect());
        let q = Poly::from_ints(&[2, -1]);
        let r = &poly_times_series(&q, &log) - &SeriesTrunc::from_poly(&Poly::from_ints(&[0, -2]), 8);
        assert_eq!(r.valuation_lower_bound(), 3);
        assert_eq!(r.coeff(3), &rat(-1, 6));
    }
}
