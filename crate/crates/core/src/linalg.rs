//! Dense complex linear algebra.
//!
//! Everything here works on small dense matrices (total dimensions stay in
//! the low thousands), stored row-major. Tensor products place party 0 in the
//! most significant slot, so `|a⟩⊗|b⟩` has index `a·d_b + b`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;
/// Sweep cap for the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity required on entry to the eigensolver.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("vector must have at least one entry".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("vector has non-finite entries".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![ZERO; dim])
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = ONE;
        v
    }

    /// Column `index` of [`dft_matrix`]`(dim)`, the Fourier-basis ket.
    pub fn fourier(dim: usize, index: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        Self(
            (0..dim)
                .map(|l| C64::from_polar(scale, 2.0 * PI * ((index * l) % dim) as f64 / dim as f64))
                .collect(),
        )
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    /// `self - s·other`, in place.
    pub fn sub_scaled(&mut self, s: C64, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= s * b;
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            out.extend(other.0.iter().map(|b| a * b));
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies by a unit phase so the first coordinate with modulus above
    /// `tol` becomes real and positive.
    pub fn fix_phase(&self, tol: f64) -> Self {
        match self.0.iter().find(|z| z.norm() > tol) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension("matrix must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        Self::new(
            rows.len(),
            cols,
            rows.iter()
                .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
                .collect(),
        )
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Rank-one projector `|v⟩⟨v|`.
    pub fn outer(v: &ComplexVector) -> Self {
        let n = v.dim();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.dim());
        if let Some(bad) = columns.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: bad.dim(),
            });
        }
        Self::new(rows, columns.len(), {
            let mut data = vec![ZERO; rows * columns.len()];
            for (c, col) in columns.iter().enumerate() {
                for r in 0..rows {
                    data[r * columns.len() + c] = col[r];
                }
            }
            data
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut data = vec![ZERO; n * m];
        data.par_chunks_mut(m).enumerate().for_each(|(r, row)| {
            for i in 0..k {
                let a = self.data[r * k + i];
                if a == ZERO {
                    continue;
                }
                for (out, b) in row.iter_mut().zip(&other.data[i * m..(i + 1) * m]) {
                    *out += a * b;
                }
            }
        });
        Ok(Self {
            rows: n,
            cols: m,
            data,
        })
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(ComplexVector(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^H|` entrywise; infinite for non-square matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |U^H U - 1|` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        match self.adjoint().matmul(self) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.cols)),
            Err(_) => f64::INFINITY,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Local dimensions `d_1..d_n`, one per party.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("at least one party is required".into()));
        }
        if let Some(p) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDimension(format!(
                "party {} has dimension 0",
                party_label(p)
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDimension("total dimension overflows".into()))?;
        Ok(Self(dims))
    }

    pub fn uniform(parties: usize, dim: usize) -> Result<Self> {
        Self::new(vec![dim; parties])
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, party: usize) -> usize {
        self.0[party]
    }

    /// Total Hilbert-space dimension `D = Π d_j`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Stride of `party` in a flattened index.
    pub fn stride(&self, party: usize) -> usize {
        self.0[party + 1..].iter().product()
    }

    /// Mixed-radix digits of a flat index, party 0 first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Dimensions with the listed parties removed, order preserved.
    pub fn without(&self, party: usize) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != party)
            .map(|(_, &d)| d)
            .collect()
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Display label of a 0-based party index: A, B, C, ...
pub fn party_label(party: usize) -> String {
    if party < 26 {
        char::from(b'A' + party as u8).to_string()
    } else {
        format!("P{}", party + 1)
    }
}

/// Unitary DFT with `F[l][n] = exp(+2πi·n·l/d)/√d`; column `n` is the Fourier ket of `|n⟩`.
pub fn dft_matrix(d: usize) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension("DFT dimension must be positive".into()));
    }
    let scale = 1.0 / (d as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d, d, |l, n| {
        C64::from_polar(scale, 2.0 * PI * ((n * l) % d) as f64 / d as f64)
    }))
}

/// Kronecker product, left factor most significant.
pub trait Kron {
    fn kron(&self, other: &Self) -> Self;
}

impl Kron for ComplexVector {
    fn kron(&self, other: &Self) -> Self {
        ComplexVector::kron(self, other)
    }
}

impl Kron for ComplexMatrix {
    fn kron(&self, other: &Self) -> Self {
        ComplexMatrix::kron(self, other)
    }
}

pub fn tensor<T: Kron>(a: &T, b: &T) -> T {
    a.kron(b)
}

/// Tensor product of a nonempty list of vectors.
pub fn tensor_all(factors: &[ComplexVector]) -> ComplexVector {
    let mut iter = factors.iter();
    let first = iter.next().expect("tensor_all needs at least one factor").clone();
    iter.fold(first, |acc, f| acc.kron(f))
}

/// Gram matrix `G[i][j] = ⟨v_i|v_j⟩`.
pub fn gram(vectors: &[ComplexVector]) -> Result<ComplexMatrix> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::InvalidDimension("gram of an empty list".into()));
    }
    let dim = vectors[0].dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let mut data = vec![ZERO; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, out) in row.iter_mut().enumerate().skip(i) {
            *out = vectors[i].inner(&vectors[j]);
        }
    });
    for i in 0..n {
        for j in 0..i {
            data[i * n + j] = data[j * n + i].conj();
        }
    }
    ComplexMatrix::new(n, n, data)
}

/// `max |G - 1|` for the Gram matrix of `vectors`.
pub fn gram_deviation(vectors: &[ComplexVector]) -> Result<f64> {
    Ok(gram(vectors)?.max_abs_diff(&ComplexMatrix::identity(vectors.len())))
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
}

/// Cyclic Jacobi diagonalization.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::ContractViolation(format!(
            "eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let herm = a.hermiticity_residual();
    if herm > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let n = a.rows();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut m = ComplexMatrix::from_fn(n, n, |r, c| 0.5 * (a[(r, c)] + a[(c, r)].conj()));
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += m[(r, c)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= stop {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase e^{iφ} = apq/|apq|; after the diagonal phase the pair
                // is real symmetric and a plain Jacobi rotation zeroes it.
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // Columns: M <- M J, V <- V J with
                // J[:,p] = c e_p - s e^{-iφ} e_q, J[:,q] = s e_p + c e^{-iφ} e_q.
                for k in 0..n {
                    let x = m[(k, p)];
                    let y = m[(k, q)];
                    m[(k, p)] = c * x - s * ph_conj * y;
                    m[(k, q)] = s * x + c * ph_conj * y;
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = c * x - s * ph_conj * y;
                    v[(k, q)] = s * x + c * ph_conj * y;
                }
                // Rows: M <- J^H M.
                for k in 0..n {
                    let x = m[(p, k)];
                    let y = m[(q, k)];
                    m[(p, k)] = c * x - s * phase * y;
                    m[(q, k)] = s * x + c * phase * y;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a)?.values)
}

/// Partial transpose on the parties in `subset`.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &DimVector,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    let total = dims.total();
    if rho.rows() != total || rho.cols() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: rho.rows(),
        });
    }
    let mut mask = vec![false; dims.parties()];
    for &p in subset {
        if p >= dims.parties() {
            return Err(Error::InvalidDimension(format!(
                "party index {p} out of range for {} parties",
                dims.parties()
            )));
        }
        mask[p] = true;
    }
    let chosen = mask.iter().filter(|&&b| b).count();
    if chosen == 0 || chosen == dims.parties() {
        return Err(Error::DegenerateCut);
    }
    let strides: Vec<usize> = (0..dims.parties()).map(|p| dims.stride(p)).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for r in 0..total {
        let rd = dims.digits(r);
        for c in 0..total {
            let cd = dims.digits(c);
            let (mut r2, mut c2) = (0, 0);
            for p in 0..dims.parties() {
                let (x, y) = if mask[p] { (cd[p], rd[p]) } else { (rd[p], cd[p]) };
                r2 += x * strides[p];
                c2 += y * strides[p];
            }
            out[(r2, c2)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Incrementally built orthonormal basis of a span.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    tol: f64,
    basis: Vec<ComplexVector>,
}

impl SpanBasis {
    pub fn new(dim: usize, tol: f64) -> Self {
        Self {
            dim,
            tol,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.basis
    }

    /// Component of `v` orthogonal to the current span (two Gram-Schmidt passes).
    pub fn residual(&self, v: &ComplexVector) -> ComplexVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.basis {
                let c = q.inner(&r);
                r.sub_scaled(c, q);
            }
        }
        r
    }

    /// Adds `v` if its residual exceeds `tol·‖v‖`; returns whether the rank grew.
    pub fn insert(&mut self, v: &ComplexVector) -> bool {
        let n = v.norm();
        if n == 0.0 || self.basis.len() == self.dim {
            return false;
        }
        let r = self.residual(v);
        let rn = r.norm();
        if rn <= self.tol * n {
            return false;
        }
        self.basis.push(r.scale(C64::new(1.0 / rn, 0.0)));
        true
    }

    /// Removes the most recently inserted direction.
    pub fn pop(&mut self) {
        self.basis.pop();
    }

    pub fn contains(&self, v: &ComplexVector) -> bool {
        let n = v.norm();
        n == 0.0 || self.residual(v).norm() <= self.tol * n
    }
}

/// Dimension of the span. Residuals at or below `tol` relative to the
/// vector's own norm are treated as dependent; zero vectors add nothing.
pub fn span_dimension(vectors: &[ComplexVector], tol: f64) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let dim = first.dim();
    let mut span = SpanBasis::new(dim, tol);
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        span.insert(v);
    }
    Ok(span.rank())
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in
/// `C^ambient_dim`, each vector phase-fixed (first nonzero coordinate real
/// positive). Deterministic: at each step the computational basis vector with
/// the largest residual (lowest index on ties) is orthonormalized in.
pub fn orthogonal_complement_basis(
    vectors: &[ComplexVector],
    ambient_dim: usize,
    tol: f64,
) -> Result<Vec<ComplexVector>> {
    if ambient_dim == 0 {
        return Err(Error::InvalidDimension("ambient dimension must be positive".into()));
    }
    let mut span = SpanBasis::new(ambient_dim, tol);
    for v in vectors {
        if v.dim() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
        span.insert(v);
    }
    let seeded = span.rank();
    let mut out = Vec::with_capacity(ambient_dim - seeded);
    let mut used = vec![false; ambient_dim];
    while span.rank() < ambient_dim {
        let mut best: Option<(usize, f64, ComplexVector)> = None;
        for (k, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            let r = span.residual(&ComplexVector::basis(ambient_dim, k));
            let rn = r.norm();
            if best.as_ref().is_none_or(|(_, b, _)| rn > b + 1e-12) {
                best = Some((k, rn, r));
            }
        }
        let Some((k, rn, r)) = best else { break };
        used[k] = true;
        if rn <= tol {
            break;
        }
        let q = r.scale(C64::new(1.0 / rn, 0.0));
        // Re-orthogonalize once more through the span to keep the basis tight.
        let q = span
            .residual(&q)
            .normalized()
            .expect("residual of a unit vector above tolerance is nonzero");
        span.basis.push(q.clone());
        out.push(q.fix_phase(1e-12));
    }
    Ok(out)
}
