//! Small integer kernel vectors: a saturated kernel basis from unimodular
//! row reduction of `[M^T | I]`, LLL reduction of that basis, then a
//! max-norm search over basis vectors and pairwise sums/differences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = IntMatrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]], cols: usize) -> Self {
        let r: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&r, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

/// Basis of the integer kernel `{v in Z^cols : M v = 0}`. The basis spans
/// the full lattice (not just a finite-index sublattice).
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = m.cols;
    let r = m.rows;
    // augmented rows: [column k of M | e_k]
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|k| {
            let mut row: Vec<BigInt> = (0..r).map(|i| m.get(i, k).clone()).collect();
            row.extend((0..n).map(|t| if t == k { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut top = 0;
    for c in 0..r {
        loop {
            // smallest nonzero pivot among rows top..
            let piv = (top..n)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(pi) = piv else { break };
            a.swap(top, pi);
            let mut done = true;
            for i in top + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].div_floor(&a[top][c]);
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[top]) {
                    *x -= &f * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                top += 1;
                break;
            }
        }
        if top == n {
            break;
        }
    }
    a.into_iter()
        .skip(top)
        .filter(|row| row[..r].iter().all(Zero::is_zero))
        .map(|row| row[r..].to_vec())
        .collect()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let mut bstar: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<Rational> = b[i].iter().map(|x| Rational::from_integer(x.clone())).collect();
        let mut v = bi.clone();
        for j in 0..i {
            let num: Rational = bi.iter().zip(&bstar[j]).map(|(x, y)| x * y).sum();
            mu[i][j] = &num / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        let nn: Rational = v.iter().map(|x| x * x).sum();
        norms.push(nn);
        bstar.push(v);
    }
    (mu, norms)
}

/// Exact LLL reduction with `delta = 3/4`. Input vectors must be linearly
/// independent.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = Rational::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b[..=k]);
            let q = round_nearest(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b[..=k]);
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

fn round_nearest(x: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom();
    num.div_floor(&(x.denom() * &two))
}

fn max_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Divides by the content and makes the first nonzero entry positive.
fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g > BigInt::one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

/// Ordering used to pick among candidates: max-norm, then earliest first
/// nonzero entry, then lexicographic on absolute values, then on signed
/// values.
pub fn candidate_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    let lead = |v: &[BigInt]| v.iter().position(|x| !x.is_zero()).unwrap_or(v.len());
    max_norm(a)
        .cmp(&max_norm(b))
        .then(lead(a).cmp(&lead(b)))
        .then_with(|| {
            let abs = |v: &[BigInt]| v.iter().map(|x| x.abs()).collect::<Vec<_>>();
            abs(a).cmp(&abs(b))
        })
        .then_with(|| a.cmp(b))
}

/// A nonzero integer kernel vector of small max-norm, or `None` when the
/// kernel is trivial.
pub fn small_kernel_vector(m: &IntMatrix) -> Option<Vec<BigInt>> {
    let basis = kernel_basis(m);
    if basis.is_empty() {
        return None;
    }
    let red = lll_reduce(basis);
    let mut cands: Vec<Vec<BigInt>> = red.clone();
    for i in 0..red.len() {
        for j in i + 1..red.len() {
            cands.push(red[i].iter().zip(&red[j]).map(|(x, y)| x + y).collect());
            cands.push(red[i].iter().zip(&red[j]).map(|(x, y)| x - y).collect());
        }
    }
    cands
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(normalize)
        .min_by(|a, b| candidate_cmp(a, b))
}
