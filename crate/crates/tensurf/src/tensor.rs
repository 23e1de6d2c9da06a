//! Dense small-tensor kernels for surface indices (dimension 2 or 3) and
//! ambient indices (dimension 3 or 4): index raising, contractions,
//! permutation symbols and determinants.
//!
//! All sizes are fixed and small. The alternating symbols are stored as
//! explicit arrays rather than recomputed from permutation parity, and every
//! kernel rejects NaN/Inf input so downstream residuals stay meaningful.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{GeomError, Result};

/// Largest ambient dimension handled by the crate.
pub const MAX_AMBIENT_DIM: usize = 4;
/// Largest surface dimension handled by the crate.
pub const MAX_SURFACE_DIM: usize = 3;

/// Two-index alternating symbol e_{αβ}.
pub const ALT2: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// Three-index alternating symbol e_{ijk}.
pub const ALT3: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
    [[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
    [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
];

/// Four-index alternating symbol e_{ijkl}, stored fully expanded.
pub static ALT4: [[[[f64; 4]; 4]; 4]; 4] = build_alt4();

const fn build_alt4() -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut e = [[[[0.0f64; 4]; 4]; 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            let mut k = 0;
            while k < 4 {
                let mut l = 0;
                while l < 4 {
                    if i != j && i != k && i != l && j != k && j != l && k != l {
                        let idx = [i, j, k, l];
                        let mut sign = 1.0;
                        let mut a = 0;
                        while a < 4 {
                            let mut b = a + 1;
                            while b < 4 {
                                if idx[a] > idx[b] {
                                    sign = -sign;
                                }
                                b += 1;
                            }
                            a += 1;
                        }
                        e[i][j][k][l] = sign;
                    }
                    l += 1;
                }
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    e
}

/// Ambient Euclidean vector with 3 or 4 Cartesian components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector {
    data: [f64; MAX_AMBIENT_DIM],
    dim: usize,
}

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_AMBIENT_DIM).contains(&dim), "vector dim {dim} out of range");
        Self { data: [0.0; MAX_AMBIENT_DIM], dim }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Self { data: [x, y, z, 0.0], dim: 3 }
    }

    pub fn new4(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self { data: [x, y, z, w], dim: 4 }
    }

    pub fn from_slice(values: &[f64]) -> Self {
        assert!(!values.is_empty() && values.len() <= MAX_AMBIENT_DIM);
        let mut data = [0.0; MAX_AMBIENT_DIM];
        data[..values.len()].copy_from_slice(values);
        Self { data, dim: values.len() }
    }

    /// Standard basis vector e_axis.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[axis] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.dim]
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            acc += self.data[i] * other.data[i];
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::NonFinite(format!("normalizing vector of norm {n}")));
        }
        Ok(*self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    /// Cross product, 3-component vectors only; higher dimensions go through
    /// [`generalized_cross`].
    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim, 3);
        debug_assert_eq!(other.dim, 3);
        let mut w = Vector::zeros(3);
        for i in 0..3 {
            let mut acc = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    acc += ALT3[i][j][k] * self.data[j] * other.data[k];
                }
            }
            w.data[i] = acc;
        }
        w
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.data[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.dim);
        &mut self.data[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] += rhs.data[i];
        }
        out
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] -= rhs.data[i];
        }
        out
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] *= s;
        }
        out
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self * -1.0
    }
}

/// Square matrix over surface indices, dimension 2 or 3.
///
/// Index placement (covariant S_αβ / B_αβ versus mixed B^α_β) is a property
/// of the value, documented at each use site: rows always carry the first
/// index, columns the second, and for mixed tensors the row is the upper
/// index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix {
    data: [[f64; MAX_SURFACE_DIM]; MAX_SURFACE_DIM],
    dim: usize,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_SURFACE_DIM).contains(&dim), "matrix dim {dim} out of range");
        Self { data: [[0.0; MAX_SURFACE_DIM]; MAX_SURFACE_DIM], dim }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i][i] = 1.0;
        }
        m
    }

    pub fn from_rows2(rows: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.data[i][j] = rows[i][j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.data[i][j].is_finite()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i][i]).sum()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i][j] = self.data[j][i];
            }
        }
        out
    }

    /// Largest absolute deviation from symmetry, ‖A − Aᵀ‖∞.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                dev = dev.max((self.data[i][j] - self.data[j][i]).abs());
            }
        }
        dev
    }

    pub fn norm_inf(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.dim {
            let row: f64 = (0..self.dim).map(|j| self.data[i][j].abs()).sum();
            best = best.max(row);
        }
        best
    }

    pub fn max_abs(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                best = best.max(self.data[i][j].abs());
            }
        }
        best
    }

    pub fn det(&self) -> f64 {
        let a = &self.data;
        match self.dim {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            3 => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
            _ => unreachable!(),
        }
    }

    /// Inverse by adjugate; fails on non-finite input or vanishing determinant.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_finite() {
            return Err(GeomError::NonFinite("matrix inverse".into()));
        }
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return Err(GeomError::NonFinite(format!("matrix inverse with det {det}")));
        }
        let a = &self.data;
        let mut out = Matrix::zeros(self.dim);
        match self.dim {
            1 => out.data[0][0] = 1.0 / det,
            2 => {
                out.data[0][0] = a[1][1] / det;
                out.data[0][1] = -a[0][1] / det;
                out.data[1][0] = -a[1][0] / det;
                out.data[1][1] = a[0][0] / det;
            }
            3 => {
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        out.data[i][j] =
                            (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    /// Condition estimate ‖A‖∞ ‖A⁻¹‖∞; infinity for exactly singular input.
    pub fn condition_estimate(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_inf() * inv.norm_inf(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = 0.0;
                for k in 0..self.dim {
                    acc += self.data[i][k] * other.data[k][j];
                }
                out.data[i][j] = acc;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i][j]
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i][j] -= rhs.data[i][j];
            }
        }
        out
    }
}

impl Mul<f64> for Matrix {
    type Output = Matrix;
    fn mul(self, s: f64) -> Matrix {
        let mut out = self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i][j] *= s;
            }
        }
        out
    }
}

/// Surface Levi-Civita symbols ε scaled by the metric volume factor.
///
/// ε_{αβ} = √det(S) e_{αβ} and ε^{αβ} = e_{αβ} / √det(S); the plain
/// alternating arrays are exposed through [`PermutationSymbols::alt`].
#[derive(Clone, Copy, Debug)]
pub struct PermutationSymbols {
    dim: usize,
    sqrt_det_metric: f64,
}

impl PermutationSymbols {
    pub fn new(dim: usize, sqrt_det_metric: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(GeomError::DimensionMismatch(format!(
                "permutation symbols for dimension {dim}"
            )));
        }
        if !(sqrt_det_metric.is_finite() && sqrt_det_metric > 0.0) {
            return Err(GeomError::NonFinite(format!(
                "sqrt of metric determinant {sqrt_det_metric}"
            )));
        }
        Ok(Self { dim, sqrt_det_metric })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sqrt_det_metric(&self) -> f64 {
        self.sqrt_det_metric
    }

    /// Bare alternating symbol e for the stored dimension.
    pub fn alt(&self, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.dim);
        match self.dim {
            2 => ALT2[indices[0]][indices[1]],
            3 => ALT3[indices[0]][indices[1]][indices[2]],
            _ => unreachable!(),
        }
    }

    /// Covariant symbol ε_{α...} = √det(S) e_{α...}.
    pub fn lower(&self, indices: &[usize]) -> f64 {
        self.sqrt_det_metric * self.alt(indices)
    }

    /// Contravariant symbol ε^{α...} = e_{α...} / √det(S).
    pub fn upper(&self, indices: &[usize]) -> f64 {
        self.alt(indices) / self.sqrt_det_metric
    }

    /// Product ε^{αβ} ε_{γδ} with the metric factors cancelled
    /// algebraically, so the result equals the second-order delta system
    /// exactly. Two-dimensional symbols only.
    pub fn delta_system_product(&self, a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
        if self.dim != 2 {
            return Err(GeomError::UnsupportedDimension { required: 2, actual: self.dim });
        }
        Ok(self.alt(&[a, b]) * self.alt(&[c, d]))
    }
}

/// Raise the first index of a covariant 2-tensor with the inverse metric:
/// result^α_β = S^{αγ} B_{γβ}.
pub fn raise_first_index(tensor: &Matrix, metric_inv: &Matrix) -> Result<Matrix> {
    if tensor.dim() != metric_inv.dim() {
        return Err(GeomError::DimensionMismatch(format!(
            "raise_first_index: tensor dim {} vs metric dim {}",
            tensor.dim(),
            metric_inv.dim()
        )));
    }
    if !tensor.is_finite() || !metric_inv.is_finite() {
        return Err(GeomError::NonFinite("raise_first_index input".into()));
    }
    Ok(metric_inv.matmul(tensor))
}

/// Second-order delta system δ^{αβ}_{γδ} = e^{αβ} e_{γδ} for surface
/// dimension 2 (the metric factors cancel). Indices are zero-based.
pub fn delta_system(a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
    for (name, idx) in [("α", a), ("β", b), ("γ", c), ("δ", d)] {
        if idx >= 2 {
            return Err(GeomError::IndexOutOfRange(format!(
                "delta_system index {name} = {idx}, expected 0 or 1"
            )));
        }
    }
    Ok(ALT2[a][b] * ALT2[c][d])
}

/// Determinant of a mixed 2×2 tensor through the delta-system contraction
/// A = ½ δ^{γδ}_{αβ} A^α_γ A^β_δ.
pub fn det2_via_delta(tensor: &Matrix) -> Result<f64> {
    if tensor.dim() != 2 {
        return Err(GeomError::UnsupportedDimension { required: 2, actual: tensor.dim() });
    }
    if !tensor.is_finite() {
        return Err(GeomError::NonFinite("det2_via_delta input".into()));
    }
    let mut acc = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    acc += ALT2[c][d] * ALT2[a][b] * tensor[(a, c)] * tensor[(b, d)];
                }
            }
        }
    }
    Ok(0.5 * acc)
}

/// Levi-Civita generalized cross product of n−1 vectors in n dimensions:
/// w_i = e_{i j₁…j_{n−1}} v₁^{j₁} ⋯ v_{n−1}^{j_{n−1}}.
///
/// The result is orthogonal to every input and its norm is the (n−1)-volume
/// of the parallelepiped the inputs span.
pub fn generalized_cross(vectors: &[Vector]) -> Result<Vector> {
    if vectors.is_empty() {
        return Err(GeomError::DimensionMismatch("generalized_cross with no inputs".into()));
    }
    let n = vectors[0].dim();
    if !(3..=MAX_AMBIENT_DIM).contains(&n) {
        return Err(GeomError::DimensionMismatch(format!(
            "generalized_cross in ambient dimension {n}"
        )));
    }
    if vectors.len() != n - 1 {
        return Err(GeomError::DimensionMismatch(format!(
            "generalized_cross needs {} vectors in dimension {n}, got {}",
            n - 1,
            vectors.len()
        )));
    }
    for v in vectors {
        if v.dim() != n {
            return Err(GeomError::DimensionMismatch(
                "generalized_cross inputs of mixed dimension".into(),
            ));
        }
        if !v.is_finite() {
            return Err(GeomError::NonFinite("generalized_cross input".into()));
        }
    }
    match n {
        3 => Ok(vectors[0].cross(&vectors[1])),
        4 => {
            let (v1, v2, v3) = (&vectors[0], &vectors[1], &vectors[2]);
            let mut w = Vector::zeros(4);
            for i in 0..4 {
                let mut acc = 0.0;
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            let e = ALT4[i][j][k][l];
                            if e != 0.0 {
                                acc += e * v1[j] * v2[k] * v3[l];
                            }
                        }
                    }
                }
                w[i] = acc;
            }
            Ok(w)
        }
        _ => unreachable!(),
    }
}
