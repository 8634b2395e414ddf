//! Matrices of rational functions and of polynomials.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use super::ExactError;

/// A rational function `num / den` with a nonzero denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::Domain("rational function with zero denominator".into()));
        }
        Ok(RatFun { num, den })
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Square matrix of rational functions; rows and columns indexed `0..dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunMatrix {
    dim: usize,
    entries: Vec<RatFun>,
}

impl RatFunMatrix {
    pub fn zero(dim: usize) -> Self {
        RatFunMatrix { dim, entries: vec![RatFun::zero(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: RatFun) {
        self.entries[i * self.dim + j] = f;
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.dim).all(|j| self.get(i, j).is_zero())
    }

    /// `D(z) * A(z)` as a polynomial matrix; fails if some entry's
    /// denominator does not divide `D * num`.
    pub fn clear_denominators(&self, dpoly: &Poly) -> Result<PolyMatrix, ExactError> {
        let mut out = PolyMatrix::zero(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                let cleared = (dpoly * &e.num).exact_div(&e.den).map_err(|_| {
                    ExactError::Domain(format!(
                        "denominator polynomial does not clear entry ({i},{j})"
                    ))
                })?;
                out.set(i, j, cleared);
            }
        }
        Ok(out)
    }

    /// Entry-wise `z -> -z` substitution followed by negation: the matrix of
    /// the system satisfied by `Y(-z)`.
    pub fn reflect(&self) -> RatFunMatrix {
        RatFunMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|e| RatFun { num: -&e.num.negate_variable(), den: e.den.negate_variable() })
                .collect(),
        }
    }
}

/// Dense matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_columns(cols: &[Vec<Poly>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        let mut m = PolyMatrix::zero(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Poly::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    /// Determinant by cofactor expansion along the first row, skipping zero
    /// entries. Dimensions here stay tiny (N + 1 <= 5).
    pub fn determinant(&self) -> Result<Poly, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::Domain("determinant of a non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.minor_det(0, &idx))
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> Poly {
        if cols.is_empty() {
            return Poly::one();
        }
        let mut acc = Poly::zero();
        for (pos, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.minor_det(row + 1, &rest);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn rational_determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}
