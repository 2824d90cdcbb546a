//! Orthonormal Hermitian traceless operator bases.
//!
//! Both measurement constructions start from d²−1 operators F with
//! Tr[F_a F_b] = δ_ab. Only the generalized Gell-Mann family is provided,
//! but any validated [`OperatorBasis`] can be supplied to the builders.

use crate::error::{Error, Result};
use crate::linalg::{c, trace_product, Matrix};

const BASIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    ops: Vec<Matrix>,
}

impl OperatorBasis {
    /// Wrap a user-supplied operator list after checking size, Hermiticity,
    /// tracelessness and Hilbert-Schmidt orthonormality at 1e-12.
    pub fn new(dim: usize, ops: Vec<Matrix>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "basis dimension {dim} < 2"
            )));
        }
        if ops.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} operators for d={dim}, got {}",
                dim * dim - 1,
                ops.len()
            )));
        }
        if let Some(k) = ops.iter().position(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator {k} is not {dim}x{dim}"
            )));
        }
        let basis = Self { dim, ops };
        let dev = basis.orthonormality_deviation();
        if dev > BASIS_TOL {
            return Err(Error::Validation(format!(
                "basis is not orthonormal (deviation {dev:e})"
            )));
        }
        for (k, f) in basis.ops.iter().enumerate() {
            if f.hermitian_deviation() > BASIS_TOL || f.trace().norm() > BASIS_TOL {
                return Err(Error::Validation(format!(
                    "operator {k} is not Hermitian and traceless"
                )));
            }
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Σ over the basis.
    pub fn sum(&self) -> Matrix {
        self.ops
            .iter()
            .fold(Matrix::zeros(self.dim), |acc, f| &acc + f)
    }

    /// Gram matrix G_ab = Tr[F_a F_b].
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.ops
            .iter()
            .map(|a| {
                self.ops
                    .iter()
                    .map(|b| trace_product(a, b).expect("equal dims").re)
                    .collect()
            })
            .collect()
    }

    /// Max |Tr[F_a F_b] − δ_ab| over all pairs (complex modulus).
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for (a, fa) in self.ops.iter().enumerate() {
            for (b, fb) in self.ops.iter().enumerate() {
                let tp = trace_product(fa, fb).expect("equal dims");
                let target = if a == b { 1.0 } else { 0.0 };
                dev = dev.max((tp - c(target, 0.0)).norm());
            }
        }
        dev
    }
}

/// Generalized Gell-Mann operators normalized to Tr[F²] = 1.
///
/// Ordering: the symmetric block (|i⟩⟨j|+|j⟩⟨i|)/√2, then the antisymmetric
/// block −i(|i⟩⟨j|−|j⟩⟨i|)/√2, each over i<j in lexicographic order, then
/// the diagonal block diag(1,…,1,−k,0,…,0)/√(k(k+1)) for k = 1..d−1.
/// For d = 2 this is (σ₁, σ₂, σ₃)/√2.
pub fn gellmann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "Gell-Mann basis needs d >= 2, got {d}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();

    let mut ops = Vec::with_capacity(d * d - 1);
    for &(i, j) in &pairs {
        let mut m = Matrix::zeros(d);
        m[(i, j)] = c(s, 0.0);
        m[(j, i)] = c(s, 0.0);
        ops.push(m);
    }
    for &(i, j) in &pairs {
        let mut m = Matrix::zeros(d);
        m[(i, j)] = c(0.0, -s);
        m[(j, i)] = c(0.0, s);
        ops.push(m);
    }
    for k in 1..d {
        let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..k].fill(norm);
        diag[k] = -(k as f64) * norm;
        ops.push(Matrix::from_real_diag(&diag));
    }
    Ok(OperatorBasis { dim: d, ops })
}

/// A flat basis regrouped into d+1 blocks of d−1 operators, F_{n,b}.
///
/// Indices are zero-based here; operator (n, b) sits at flat position
/// `b * (d − 1) + n`.
#[derive(Debug, Clone)]
pub struct MumFrame {
    dim: usize,
    ops: Vec<Matrix>,
}

impl MumFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.dim + 1
    }

    pub fn per_setting(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, n: usize, b: usize) -> &Matrix {
        assert!(
            n < self.dim - 1 && b <= self.dim,
            "F_(n={n},b={b}) out of range"
        );
        &self.ops[b * (self.dim - 1) + n]
    }

    /// F^{(b)} = Σ_n F_{n,b}
    pub fn setting_sum(&self, b: usize) -> Matrix {
        (0..self.per_setting()).fold(Matrix::zeros(self.dim), |acc, n| &acc + self.get(n, b))
    }

    pub fn flatten(self) -> OperatorBasis {
        OperatorBasis {
            dim: self.dim,
            ops: self.ops,
        }
    }
}

/// Regroup a d²−1 element basis onto the (n, b) grid, b-major.
pub fn relabel_for_mum(basis: OperatorBasis, d: usize) -> Result<MumFrame> {
    if basis.dim != d || basis.len() != d * d - 1 {
        return Err(Error::DimensionMismatch(format!(
            "basis of {} operators on C^{} cannot be regrouped for d={d}",
            basis.len(),
            basis.dim
        )));
    }
    Ok(MumFrame {
        dim: d,
        ops: basis.ops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn qubit_basis_is_scaled_paulis() {
        let basis = gellmann_basis(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (k, f) in basis.ops().iter().enumerate() {
            assert!(f.max_abs_diff(&pauli(k + 1).scale(s)) < 1e-15);
        }
    }

    #[test]
    fn qutrit_basis_is_orthonormal() {
        let basis = gellmann_basis(3).unwrap();
        assert_eq!(basis.len(), 8);
        assert!(basis.orthonormality_deviation() < 1e-14);
    }

    #[test]
    fn gram_is_identity_for_small_dims() {
        for d in 2..=6 {
            let basis = gellmann_basis(d).unwrap();
            let gram = basis.gram();
            let squares: f64 = (0..basis.len()).map(|a| gram[a][a]).sum();
            assert!((squares - (d * d - 1) as f64).abs() < 1e-12);
            for (a, row) in gram.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    let target = if a == b { 1.0 } else { 0.0 };
                    assert!((v - target).abs() < 1e-12, "d={d} ({a},{b}) = {v}");
                }
            }
        }
    }

    #[test]
    fn basis_elements_are_traceless_and_hermitian() {
        for d in 2..=6 {
            for f in gellmann_basis(d).unwrap().ops() {
                assert!(f.trace().norm() < 1e-15);
                assert_eq!(f.hermitian_deviation(), 0.0);
            }
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(gellmann_basis(1).is_err());
        assert!(gellmann_basis(0).is_err());
    }

    #[test]
    fn custom_basis_is_validated() {
        let good = gellmann_basis(2).unwrap().ops().to_vec();
        assert!(OperatorBasis::new(2, good.clone()).is_ok());
        let mut bad = good.clone();
        bad[0] = bad[0].scale(2.0);
        assert!(OperatorBasis::new(2, bad).is_err());
        assert!(OperatorBasis::new(2, good[..2].to_vec()).is_err());
    }

    #[test]
    fn relabel_counts() {
        let f2 = relabel_for_mum(gellmann_basis(2).unwrap(), 2).unwrap();
        assert_eq!((f2.per_setting(), f2.settings()), (1, 3));
        let f3 = relabel_for_mum(gellmann_basis(3).unwrap(), 3).unwrap();
        assert_eq!((f3.per_setting(), f3.settings()), (2, 4));
        assert!(relabel_for_mum(gellmann_basis(3).unwrap(), 2).is_err());
    }

    #[test]
    fn relabel_is_b_major_and_round_trips() {
        for d in 2..=5 {
            let basis = gellmann_basis(d).unwrap();
            let original = basis.ops().to_vec();
            let frame = relabel_for_mum(basis, d).unwrap();
            for b in 0..=d {
                for n in 0..d - 1 {
                    assert_eq!(frame.get(n, b), &original[b * (d - 1) + n]);
                }
            }
            assert_eq!(frame.flatten().ops(), &original[..]);
        }
    }
}
