//! Small dense exact linear algebra: Gaussian elimination over rationals,
//! affine forms and quadratic forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum()).collect()
}

fn check_square(a: &[Vec<Rational>], rhs_len: usize) -> Result<usize> {
    let n = a.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: row.len() });
    }
    if rhs_len != n {
        return Err(Error::DimensionMismatch { expected: n, got: rhs_len });
    }
    Ok(n)
}

/// Solves `a · X = rhs` for every column of `rhs` at once.
///
/// `rhs` is `n × k`. Pivoting only looks for a nonzero entry; magnitude does
/// not matter over exact arithmetic.
pub fn solve_linear_multi(a: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Result<Matrix> {
    let n = check_square(a, rhs.len())?;
    let k = rhs.first().map_or(0, Vec::len);
    if let Some(row) = rhs.iter().find(|row| row.len() != k) {
        return Err(Error::DimensionMismatch { expected: k, got: row.len() });
    }

    // augmented rows [a | rhs]
    let mut m: Matrix = a.iter().zip(rhs).map(|(ar, br)| ar.iter().chain(br).cloned().collect()).collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularSystem { step: col })?;
        m.swap(col, pivot);
        let inv = m[col][col].recip()?;
        for v in m[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&prow).skip(col) {
                *v -= &factor * p;
            }
        }
    }

    let x: Matrix = m.into_iter().map(|row| row[n..].to_vec()).collect();
    debug_assert!((0..k).all(|j| {
        let col: Vec<Rational> = x.iter().map(|r| r[j].clone()).collect();
        mat_vec(a, &col).iter().zip(rhs).all(|(l, r)| *l == r[j])
    }));
    Ok(x)
}

/// Exact solution of `a · x = b`.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    check_square(a, b.len())?;
    let rhs: Matrix = b.iter().map(|v| vec![v.clone()]).collect();
    let x = solve_linear_multi(a, &rhs)?;
    let x: Vec<Rational> = x.into_iter().map(|mut r| r.remove(0)).collect();
    if mat_vec(a, &x).as_slice() != b {
        // unreachable over exact arithmetic
        return Err(Error::SingularSystem { step: a.len() });
    }
    Ok(x)
}

/// `v ↦ coeffs · v + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineForm {
    pub fn constant(dim: usize, value: Rational) -> Self {
        AffineForm { coeffs: vec![Rational::zero(); dim], constant: value }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, v: &[Rational]) -> Rational {
        self.coeffs.iter().zip(v).map(|(c, x)| c * x).sum::<Rational>() + &self.constant
    }

    pub fn scale(&self, s: &Rational) -> Self {
        AffineForm { coeffs: self.coeffs.iter().map(|c| c * s).collect(), constant: &self.constant * s }
    }

    pub fn add(&self, other: &Self) -> Self {
        AffineForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product of two affine forms as a quadratic form.
    pub fn mul(&self, other: &Self) -> QuadraticForm {
        let n = self.dim();
        let half = Rational::frac(1, 2);
        let q = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (&self.coeffs[i] * &other.coeffs[j] + &self.coeffs[j] * &other.coeffs[i]) * &half)
                    .collect()
            })
            .collect();
        let l = (0..n).map(|i| &self.constant * &other.coeffs[i] + &other.constant * &self.coeffs[i]).collect();
        QuadraticForm { q, l, k: &self.constant * &other.constant }
    }
}

/// `v ↦ vᵀQv + Lᵀv + k` with `Q` symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    q: Matrix,
    l: Vec<Rational>,
    k: Rational,
}

impl QuadraticForm {
    /// Builds a form, symmetrizing `q` as `(q + qᵀ)/2` so the represented
    /// function is unchanged.
    pub fn new(q: Matrix, l: Vec<Rational>, k: Rational) -> Result<Self> {
        let n = l.len();
        check_square(&q, n)?;
        let half = Rational::frac(1, 2);
        let sym = (0..n).map(|i| (0..n).map(|j| (&q[i][j] + &q[j][i]) * &half).collect()).collect();
        Ok(QuadraticForm { q: sym, l, k })
    }

    pub fn zero(dim: usize) -> Self {
        QuadraticForm {
            q: vec![vec![Rational::zero(); dim]; dim],
            l: vec![Rational::zero(); dim],
            k: Rational::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn l(&self) -> &[Rational] {
        &self.l
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    fn check_dim(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    pub fn eval(&self, v: &[Rational]) -> Result<Rational> {
        self.check_dim(v)?;
        let qv = mat_vec(&self.q, v);
        let quad: Rational = v.iter().zip(&qv).map(|(a, b)| a * b).sum();
        let lin: Rational = self.l.iter().zip(v).map(|(a, b)| a * b).sum();
        Ok(quad + lin + &self.k)
    }

    /// `2Qv + L`.
    pub fn grad(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_dim(v)?;
        let two = Rational::integer(2);
        Ok(mat_vec(&self.q, v).into_iter().zip(&self.l).map(|(qv, l)| qv * &two + l).collect())
    }

    /// Second derivative along coordinate `i`, i.e. `2·Q[i][i]`.
    pub fn curvature(&self, i: usize) -> Rational {
        &self.q[i][i] * Rational::integer(2)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Rational::one())
    }

    /// `self + s·other`.
    pub fn combine(&self, other: &Self, s: &Rational) -> Self {
        let n = self.dim();
        QuadraticForm {
            q: (0..n).map(|i| (0..n).map(|j| &self.q[i][j] + s * &other.q[i][j]).collect()).collect(),
            l: self.l.iter().zip(&other.l).map(|(a, b)| a + s * b).collect(),
            k: &self.k + s * &other.k,
        }
    }

    /// Restriction to the coordinates in `keep` with every other coordinate
    /// pinned to the matching entry of `point`.
    pub fn restrict(&self, keep: &[usize], point: &[Rational]) -> Result<Self> {
        self.check_dim(point)?;
        let n = self.dim();
        if let Some(&bad) = keep.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad + 1 });
        }
        let fixed: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let two = Rational::integer(2);
        let q = keep.iter().map(|&i| keep.iter().map(|&j| self.q[i][j].clone()).collect()).collect();
        let l = keep
            .iter()
            .map(|&i| {
                let cross: Rational = fixed.iter().map(|&j| &self.q[i][j] * &point[j]).sum();
                &self.l[i] + cross * &two
            })
            .collect();
        let mut pinned = point.to_vec();
        for &i in keep {
            pinned[i] = Rational::zero();
        }
        let k = self.eval(&pinned)?;
        Ok(QuadraticForm { q, l, k })
    }

    pub fn to_f64(&self) -> FloatQuadratic {
        FloatQuadratic {
            q: self.q.iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect(),
            l: self.l.iter().map(Rational::to_f64).collect(),
            k: self.k.to_f64(),
        }
    }
}

/// Double-precision copy of a [`QuadraticForm`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloatQuadratic {
    pub q: Vec<Vec<f64>>,
    pub l: Vec<f64>,
    pub k: f64,
}

impl FloatQuadratic {
    pub fn eval(&self, v: &[f64]) -> f64 {
        let mut acc = self.k;
        for (i, vi) in v.iter().enumerate() {
            acc += self.l[i] * vi;
            for (j, vj) in v.iter().enumerate() {
                acc += self.q[i][j] * vi * vj;
            }
        }
        acc
    }
}

/// Gaussian elimination with partial pivoting in double precision.
pub fn solve_linear_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .filter(|&r| a[r][col] != 0.0)
            .ok_or(Error::SingularSystem { step: col })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for (k, row) in tail.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (dst, src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            b[col + 1 + k] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}
