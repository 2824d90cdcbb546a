//! Dense complex matrices and the handful of operations the rest of the
//! crate needs: Kronecker products, partial traces and transposes, trace
//! products and a Jacobi eigensolver for Hermitian operators.
//!
//! Storage is row-major. For bipartite operators subsystem A is always the
//! left (slow) tensor factor, so the composite index of `(i, k)` is
//! `i * dim_b + k`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Max entrywise deviation from the conjugate transpose tolerated for a
/// "Hermitian" input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// An operator is positive semidefinite iff its smallest eigenvalue is at
/// least `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below
/// `JACOBI_TOL * max(1, ‖A‖_F)`.
pub const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Build from row-major entries. Fails unless `entries.len() == dim²`.
    pub fn from_vec(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows are not square".into()));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    /// Rank-one projector |v⟩⟨v| (no normalization is applied).
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn conjugate(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on unequal dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation from the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix add on unequal dims");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix sub on unequal dims");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix mul on unequal dims");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli matrices σ₁, σ₂, σ₃ (index 1..=3); index 0 is the identity.
pub fn pauli(index: usize) -> Matrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let rows = match index {
        0 => vec![vec![one, z], vec![z, one]],
        1 => vec![vec![z, one], vec![one, z]],
        2 => vec![vec![z, -i], vec![i, z]],
        3 => vec![vec![one, z], vec![z, -one]],
        _ => panic!("pauli index {index} out of range"),
    };
    Matrix::from_rows(rows).expect("square")
}

/// Kronecker product a ⊗ b.
pub fn tensor(a: &Matrix, b: &Matrix) -> Matrix {
    let (da, db) = (a.dim, b.dim);
    let n = da * db;
    let mut out = Matrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tr[a·b] without forming the product.
pub fn trace_product(a: &Matrix, b: &Matrix) -> Result<C64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "trace_product of {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let n = a.dim;
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.data[i * n + j] * b.data[j * n + i];
        }
    }
    Ok(acc)
}

fn check_bipartite(m: &Matrix, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || m.dim != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "matrix of dim {} is not {dim_a}x{dim_b} bipartite",
            m.dim
        )));
    }
    Ok(())
}

/// Trace out one factor of a bipartite operator, returning the operator on
/// the `keep` subsystem.
pub fn partial_trace(m: &Matrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<Matrix> {
    check_bipartite(m, dim_a, dim_b)?;
    Ok(match keep {
        Subsystem::A => Matrix::from_fn(dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::B => Matrix::from_fn(dim_b, |k, l| {
            (0..dim_a).map(|i| m[(i * dim_b + k, i * dim_b + l)]).sum()
        }),
    })
}

/// Transpose the indices of one factor of a bipartite operator.
pub fn partial_transpose(
    m: &Matrix,
    dim_a: usize,
    dim_b: usize,
    side: Subsystem,
) -> Result<Matrix> {
    check_bipartite(m, dim_a, dim_b)?;
    let mut out = Matrix::zeros(m.dim);
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    let src = match side {
                        Subsystem::A => (j * dim_b + k, i * dim_b + l),
                        Subsystem::B => (i * dim_b + l, j * dim_b + k),
                    };
                    out[(i * dim_b + k, j * dim_b + l)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Tr[(a ⊗ b)·rho] evaluated directly from the entries, without building
/// the Kronecker product.
pub fn expectation_product(a: &Matrix, b: &Matrix, rho: &Matrix) -> Result<C64> {
    let (da, db) = (a.dim, b.dim);
    check_bipartite(rho, da, db)?;
    let mut acc = c(0.0, 0.0);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == c(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    // (a⊗b)_{(i,k),(j,l)} · rho_{(j,l),(i,k)}
                    acc += aij * b[(k, l)] * rho[(j * db + l, i * db + k)];
                }
            }
        }
    }
    Ok(acc)
}

fn off_diagonal_mass(w: &Matrix) -> f64 {
    let n = w.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Cyclic complex Jacobi: each pivot (p, q) is first rotated to a real
/// off-diagonal entry by a diagonal phase, then annihilated by a real plane
/// rotation. Sweeps repeat until the off-diagonal Frobenius mass is below
/// [`JACOBI_TOL`] relative to `max(1, ‖A‖_F)`.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim;
    let mut w = m.hermitian_part();
    let threshold = JACOBI_TOL * w.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&w);
        if off < threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut w, p, q);
            }
        }
    }

    let mut vals: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn jacobi_rotate(w: &mut Matrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // G = diag(.., 1 at p, conj(phase) at q, ..) · R(c, s); W ← G† W G
    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = -phase.conj() * sn;
    let g_qq = phase.conj() * cs;

    let n = w.dim;
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * g_pp + wkq * g_qp;
        w[(k, q)] = wkp * g_pq + wkq * g_qq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = g_pp.conj() * wpk + g_qp.conj() * wqk;
        w[(q, k)] = g_pq.conj() * wpk + g_qq.conj() * wqk;
    }
    w[(p, q)] = c(0.0, 0.0);
    w[(q, p)] = c(0.0, 0.0);
    w[(p, p)].im = 0.0;
    w[(q, q)].im = 0.0;
}

pub fn min_eigenvalue(m: &Matrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

pub fn is_psd(m: &Matrix) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -PSD_TOL)
}

/// Tolerance on Hermiticity, unit trace and positivity of a state.
pub const STATE_TOL: f64 = 1e-10;

/// A validated bipartite state on C^{dim_a} ⊗ C^{dim_b}.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: Matrix,
}

impl DensityMatrix {
    pub fn new(matrix: Matrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        check_bipartite(&matrix, dim_a, dim_b)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let lam = min_eigenvalue(&matrix)?;
        if lam < -STATE_TOL {
            return Err(Error::NotPositive {
                location: "density matrix".into(),
                min_eigenvalue: lam,
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            matrix,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Reduced state on `keep`.
    pub fn reduced(&self, keep: Subsystem) -> Matrix {
        partial_trace(&self.matrix, self.dim_a, self.dim_b, keep).expect("dims checked")
    }

    pub fn partial_transpose(&self, side: Subsystem) -> Matrix {
        partial_transpose(&self.matrix, self.dim_a, self.dim_b, side).expect("dims checked")
    }

    /// Tr[(a ⊗ b)ρ]
    pub fn expectation_product(&self, a: &Matrix, b: &Matrix) -> Result<C64> {
        expectation_product(a, b, &self.matrix)
    }

    /// Tr[op·ρ]
    pub fn expectation(&self, op: &Matrix) -> Result<C64> {
        trace_product(op, &self.matrix)
    }
}
