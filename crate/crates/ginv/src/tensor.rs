//! Dense tensor storage and the Einstein-product algebra.
//!
//! A tensor here always carries a fixed split of its modes into row modes
//! `(M_1, ..., M_p)` and column modes `(N_1, ..., N_s)`. Under the row-major
//! lexicographic linearization of both groups, every tensor corresponds to a
//! unique `(M_1*...*M_p) x (N_1*...*N_s)` matrix, and the Einstein product
//! `*_s` corresponds to the ordinary matrix product. All heavy numerics in
//! this crate ride on that bijection.

use crate::error::{GinvError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Ordered row-mode and column-mode extents of a tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorShape {
    row_modes: Vec<usize>,
    col_modes: Vec<usize>,
}

impl TensorShape {
    /// Either mode list may be empty (a "vector"-like tensor) but not both.
    /// Every extent must be at least 1.
    pub fn new(row_modes: Vec<usize>, col_modes: Vec<usize>) -> Result<Self> {
        if row_modes.is_empty() && col_modes.is_empty() {
            return Err(GinvError::ShapeMismatch(
                "row and column mode lists cannot both be empty".into(),
            ));
        }
        if row_modes.iter().chain(col_modes.iter()).any(|&m| m == 0) {
            return Err(GinvError::ShapeMismatch(
                "all mode extents must be positive".into(),
            ));
        }
        Ok(Self {
            row_modes,
            col_modes,
        })
    }

    pub fn row_modes(&self) -> &[usize] {
        &self.row_modes
    }

    pub fn col_modes(&self) -> &[usize] {
        &self.col_modes
    }

    /// Product of the row-mode extents: the matricized row dimension.
    pub fn row_count(&self) -> usize {
        self.row_modes.iter().product()
    }

    /// Product of the column-mode extents: the matricized column dimension.
    pub fn col_count(&self) -> usize {
        self.col_modes.iter().product()
    }

    pub fn is_square(&self) -> bool {
        self.row_modes == self.col_modes
    }

    /// Shape of the conjugate transpose: modes swapped.
    pub fn transposed(&self) -> Self {
        Self {
            row_modes: self.col_modes.clone(),
            col_modes: self.row_modes.clone(),
        }
    }
}

/// Row-major mixed-radix encoding of a multi-index (first mode slowest).
fn linearize(index: &[usize], extents: &[usize]) -> usize {
    debug_assert_eq!(index.len(), extents.len());
    index.iter().zip(extents).fold(0, |acc, (&i, &e)| {
        debug_assert!(i < e);
        acc * e + i
    })
}

/// Dense complex tensor with a fixed row/column mode split.
///
/// Entries are stored in row-major lexicographic order over the concatenated
/// multi-index `(i_1..i_p, j_1..j_s)`, which makes `entries` exactly the
/// row-major storage of the matricization.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: TensorShape,
    entries: Vec<Complex64>,
}

impl DenseTensor {
    pub fn new(shape: TensorShape, entries: Vec<Complex64>) -> Result<Self> {
        let expected = shape.row_count() * shape.col_count();
        if entries.len() != expected {
            return Err(GinvError::ShapeMismatch(format!(
                "entry count {} does not match shape ({} x {})",
                entries.len(),
                shape.row_count(),
                shape.col_count()
            )));
        }
        Ok(Self { shape, entries })
    }

    pub fn zeros(shape: TensorShape) -> Self {
        let n = shape.row_count() * shape.col_count();
        Self {
            shape,
            entries: vec![Complex64::ZERO; n],
        }
    }

    /// Identity tensor over the given square mode list.
    pub fn identity(modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(GinvError::ShapeMismatch(
                "identity needs nonempty modes".into(),
            ));
        }
        let shape = TensorShape::new(modes.to_vec(), modes.to_vec())?;
        let n = shape.row_count();
        let mut t = Self::zeros(shape);
        for i in 0..n {
            t.entries[i * n + i] = Complex64::ONE;
        }
        Ok(t)
    }

    pub fn from_real(shape: TensorShape, entries: &[f64]) -> Result<Self> {
        let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(shape, complex)
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry at a full multi-index `(i_1..i_p, j_1..j_s)`, 0-based.
    pub fn get(&self, row_index: &[usize], col_index: &[usize]) -> Complex64 {
        let r = linearize(row_index, &self.shape.row_modes);
        let c = linearize(col_index, &self.shape.col_modes);
        self.entries[r * self.shape.col_count() + c]
    }

    pub fn set(&mut self, row_index: &[usize], col_index: &[usize], value: Complex64) {
        let r = linearize(row_index, &self.shape.row_modes);
        let c = linearize(col_index, &self.shape.col_modes);
        let cols = self.shape.col_count();
        self.entries[r * cols + c] = value;
    }

    /// Entrywise sum. Shapes must match exactly.
    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.shape != other.shape {
            return Err(GinvError::ShapeMismatch(format!(
                "add: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DenseTensor {
            shape: self.shape.clone(),
            entries,
        })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.shape != other.shape {
            return Err(GinvError::ShapeMismatch(format!(
                "sub: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DenseTensor {
            shape: self.shape.clone(),
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseTensor {
        DenseTensor {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Einstein product: contracts this tensor's column modes against the
    /// other's row modes. Matricizes, multiplies, dematricizes.
    pub fn einstein_product(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.shape.col_modes != other.shape.row_modes {
            return Err(GinvError::ShapeMismatch(format!(
                "einstein product: contracted modes {:?} vs {:?}",
                self.shape.col_modes, other.shape.row_modes
            )));
        }
        let product = self.matricize() * other.matricize();
        let shape = TensorShape::new(self.shape.row_modes.clone(), other.shape.col_modes.clone())?;
        Ok(DenseTensor::dematricize(&product, shape).expect("product dims match by construction"))
    }

    /// Conjugate transpose: swaps the mode split and conjugates entries.
    pub fn conj_transpose(&self) -> DenseTensor {
        let m = self.matricize().adjoint();
        DenseTensor::dematricize(&m, self.shape.transposed()).expect("adjoint dims match")
    }

    /// `k`-th Einstein power of a square tensor; the 0-th power is the identity.
    pub fn power(&self, k: usize) -> Result<DenseTensor> {
        if !self.shape.is_square() {
            return Err(GinvError::NotSquare(
                self.shape.row_modes.clone(),
                self.shape.col_modes.clone(),
            ));
        }
        let mut acc = DenseTensor::identity(&self.shape.row_modes)?;
        for _ in 0..k {
            acc = acc.einstein_product(self)?;
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Count of entries with magnitude strictly greater than `tol`.
    pub fn nnz(&self, tol: f64) -> usize {
        self.entries.iter().filter(|e| e.norm() > tol).count()
    }

    /// The matricization bijection: same entry multiset, row-major layout.
    pub fn matricize(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(
            self.shape.row_count(),
            self.shape.col_count(),
            self.entries.iter().copied(),
        )
    }

    /// Inverse of [`matricize`](Self::matricize) for a given target shape.
    pub fn dematricize(matrix: &DMatrix<Complex64>, shape: TensorShape) -> Result<DenseTensor> {
        if matrix.nrows() != shape.row_count() || matrix.ncols() != shape.col_count() {
            return Err(GinvError::ShapeMismatch(format!(
                "dematricize: matrix is {}x{}, shape wants {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                shape.row_count(),
                shape.col_count()
            )));
        }
        let mut entries = Vec::with_capacity(matrix.nrows() * matrix.ncols());
        for r in 0..matrix.nrows() {
            for c in 0..matrix.ncols() {
                entries.push(matrix[(r, c)]);
            }
        }
        Ok(DenseTensor { shape, entries })
    }

    /// Relative Frobenius distance test: `||A - B||_F <= tol * max(1, ||A||_F)`.
    pub fn approx_eq(&self, other: &DenseTensor, tol: f64) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let diff: f64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        diff <= tol * self.frobenius_norm().max(1.0)
    }
}
