//! Positive reals of the form `e^r * prod p_i^(s_i)` with rational `r, s_i`
//! and integer bases. Growth constants such as `D = e^2` or `chi = 4 e^66`
//! live here so their exponents stay exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{ln_rational, IntervalReal};
use super::rational::{from_big, parse_rational, Rational};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct {
    e_exp: Rational,
    /// base (>= 2) -> exponent; bases are primes whenever trial division
    /// could split them
    factors: BTreeMap<BigInt, Rational>,
}

const TRIAL_LIMIT: u64 = 100_000;

fn factor_into(n: &BigInt, exp: &Rational, out: &mut BTreeMap<BigInt, Rational>) {
    let mut n = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut k = 0i64;
        while n.is_multiple_of(&bp) {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            *out.entry(bp).or_insert_with(Rational::zero) += exp * Rational::from_integer(k.into());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert_with(Rational::zero) += exp.clone();
    }
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    pub fn from_rational(r: &Rational) -> Result<Self, ExactError> {
        if !r.is_positive() {
            return Err(ExactError::Domain(format!("power product needs a positive base, got {r}")));
        }
        let mut f = BTreeMap::new();
        factor_into(r.numer(), &Rational::one(), &mut f);
        factor_into(r.denom(), &-Rational::one(), &mut f);
        Ok(PowerProduct { e_exp: Rational::zero(), factors: f }.normalized())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into())).unwrap_or_default()
    }

    /// `e^r`
    pub fn e_pow(r: Rational) -> Self {
        PowerProduct { e_exp: r, factors: BTreeMap::new() }
    }

    /// `base^exp` for a positive integer base.
    pub fn int_pow(base: &BigInt, exp: &Rational) -> Result<Self, ExactError> {
        if !base.is_positive() {
            return Err(ExactError::Domain("power product base must be positive".into()));
        }
        let mut f = BTreeMap::new();
        factor_into(base, exp, &mut f);
        Ok(PowerProduct { e_exp: Rational::zero(), factors: f }.normalized())
    }

    fn normalized(mut self) -> Self {
        self.factors.retain(|_, e| !e.is_zero());
        self
    }

    pub fn e_exponent(&self) -> &Rational {
        &self.e_exp
    }

    pub fn factors(&self) -> &BTreeMap<BigInt, Rational> {
        &self.factors
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut f = self.factors.clone();
        for (b, e) in &other.factors {
            *f.entry(b.clone()).or_insert_with(Rational::zero) += e;
        }
        PowerProduct { e_exp: &self.e_exp + &other.e_exp, factors: f }.normalized()
    }

    pub fn pow(&self, r: &Rational) -> PowerProduct {
        PowerProduct {
            e_exp: &self.e_exp * r,
            factors: self.factors.iter().map(|(b, e)| (b.clone(), e * r)).collect(),
        }
        .normalized()
    }

    pub fn recip(&self) -> PowerProduct {
        self.pow(&-Rational::one())
    }

    /// The rational number `prod p_i^(s_i)` when every `s_i` is an integer
    /// (the `e` part is ignored).
    pub fn rational_factor(&self) -> Option<Rational> {
        let mut acc = Rational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i64()?;
            let bb = from_big(b.clone());
            let p = num_traits::pow(bb, k.unsigned_abs() as usize);
            acc *= if k < 0 { p.recip() } else { p };
        }
        Some(acc)
    }

    /// Exact value when the number is rational.
    pub fn rational_value(&self) -> Option<Rational> {
        if !self.e_exp.is_zero() {
            return None;
        }
        self.rational_factor()
    }

    /// Enclosure of the natural logarithm.
    pub fn ln(&self, bits: u32) -> IntervalReal {
        let mut acc = IntervalReal::point(self.e_exp.clone());
        for (b, e) in &self.factors {
            // bases are >= 2, so the logarithm is defined
            if let Ok(l) = ln_rational(&from_big(b.clone()), bits + 8) {
                acc = &acc + &l.scale(e);
            }
        }
        acc
    }

    pub fn enclosure(&self, bits: u32) -> IntervalReal {
        match self.rational_value() {
            Some(r) => IntervalReal::point(r),
            None => self.ln(bits + 8).exp(bits),
        }
    }

    /// Parses products like `4*e^66`, `e^2`, `3*3^(1/2)` or `7/2`.
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        let mut acc = PowerProduct::one();
        for raw in s.split('*') {
            let part = raw.trim();
            if part.is_empty() {
                return Err(ExactError::Parse(format!("empty factor in {s:?}")));
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim().trim_start_matches('(').trim_end_matches(')');
                    (b.trim(), parse_rational(e)?)
                }
                None => (part, Rational::one()),
            };
            let f = if base == "e" {
                PowerProduct::e_pow(exp)
            } else {
                let r = parse_rational(base)?;
                PowerProduct::from_rational(&r)?.pow(&exp)
            };
            acc = acc.mul(&f);
        }
        Ok(acc)
    }
}

fn fmt_exp(e: &Rational) -> String {
    if e.is_integer() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rational_factor() {
            Some(r) if r.is_one() => {}
            Some(r) => parts.push(r.to_string()),
            None => {
                for (b, e) in &self.factors {
                    if e.is_one() {
                        parts.push(b.to_string());
                    } else {
                        parts.push(format!("{b}^{}", fmt_exp(e)));
                    }
                }
            }
        }
        if !self.e_exp.is_zero() {
            parts.push(format!("e^{}", fmt_exp(&self.e_exp)));
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn chi_for_dilogarithm() {
        // 4 * (e^2)^33
        let d = PowerProduct::e_pow(int(2));
        let chi = PowerProduct::from_int(4).mul(&d.pow(&int(33)));
        assert_eq!(chi.rational_factor(), Some(int(4)));
        assert_eq!(chi.e_exponent(), &int(66));
        assert_eq!(chi.to_string(), "4*e^66");
    }

    #[test]
    fn parse_and_display() {
        let p = PowerProduct::parse("3*3^(1/2)").unwrap();
        assert_eq!(p.factors().get(&BigInt::from(3)), Some(&rat(3, 2)));
        assert_eq!(p.rational_value(), None);
        assert_eq!(p.to_string(), "3^(3/2)");
        assert_eq!(PowerProduct::parse("e^2").unwrap(), PowerProduct::e_pow(int(2)));
        assert_eq!(PowerProduct::parse("4").unwrap().rational_value(), Some(int(4)));
        assert_eq!(PowerProduct::parse("2*2").unwrap().rational_value(), Some(int(4)));
        assert!(PowerProduct::parse("0").is_err());
        assert!(PowerProduct::parse("2**3").is_err());
    }

    #[test]
    fn enclosure_of_irrational_power() {
        let p = PowerProduct::parse("2^(1/2)").unwrap();
        let iv = p.enclosure(100);
        assert!(iv.lo() * iv.lo() < int(2) && iv.hi() * iv.hi() > int(2));
        let e2 = PowerProduct::e_pow(int(2)).enclosure(80);
        // e^2 = 7.389056098930650227...
        assert!(e2.contains(&rat(7389056098930650227, 1_000_000_000_000_000_000)) || e2.lo() > &rat(7389056098, 1_000_000_000));
        assert!(e2.hi() < &rat(7389056099, 1_000_000_000));
    }
}
