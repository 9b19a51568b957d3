//! Dense complex linear algebra used by every other module.
//!
//! Operators are `nalgebra` dynamic matrices over `Complex<f64>`. Real data is
//! carried with a zero imaginary part; there is no separate real code path.
//!
//! The tensor product `H ⊗ K` is the Kronecker model: for `f ∈ C^m` and
//! `g ∈ C^n`, `f ⊗ g` is the vector of length `m·n` whose entry at
//! `i·n + j` is `f[i]·g[j]` (row-major pairing). [`kron`] uses the same
//! pairing, so `kron(Q, T)·(f ⊗ g) = (Q f) ⊗ (T g)` holds entrywise.

use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FrameError, Result};

pub type Scalar = Complex64;
pub type OperatorMatrix = DMatrix<Scalar>;
pub type VectorH = DVector<Scalar>;

/// Orthonormality tolerance for stored subspace bases.
pub const TOL_ORTHO: f64 = 1e-12;
/// Relative reconstruction tolerance for eigendecompositions.
pub const TOL_EIG: f64 = 1e-10;
/// Relative Frobenius asymmetry accepted as Hermitian.
pub const TOL_HERMITIAN: f64 = 1e-10;
/// Default relative threshold below which a matrix counts as singular.
pub const TOL_COND: f64 = 1e-12;

const MAX_EIG_SWEEPS: usize = 10_000;

/// Default rank threshold for [`orthonormalize`]: `ambient_dim · 2⁻⁵²`,
/// applied relative to the largest singular value.
pub fn default_rank_tol(ambient_dim: usize) -> f64 {
    ambient_dim.max(1) as f64 * f64::EPSILON
}

pub fn identity(n: usize) -> OperatorMatrix {
    OperatorMatrix::identity(n, n)
}

pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> OperatorMatrix {
    assert_eq!(data.len(), rows * cols, "row-major data length");
    OperatorMatrix::from_fn(rows, cols, |i, j| Scalar::new(data[i * cols + j], 0.0))
}

pub fn real_vector(data: &[f64]) -> VectorH {
    VectorH::from_iterator(data.len(), data.iter().map(|&x| Scalar::new(x, 0.0)))
}

pub fn is_finite_matrix(m: &OperatorMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `‖a − b‖_F / max(‖b‖_F, floor)`, the relative Frobenius distance used by
/// all identity checks. `floor` guards the zero-reference case.
pub fn relative_distance(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    let scale = b.norm().max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

/// Frobenius distance from the identity, normalised by `√dim`.
pub fn identity_residual(a: &OperatorMatrix) -> f64 {
    let n = a.nrows();
    (a - identity(n)).norm() / (n as f64).sqrt()
}

/// `‖UᴴU − I‖_F`.
pub fn unitarity_residual(u: &OperatorMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.ncols())).norm()
}

/// Orthonormal basis of a closed subspace: the columns of an
/// `ambient_dim × sub_dim` matrix with `BᴴB = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: OperatorMatrix,
}

impl SubspaceBasis {
    /// Accepts a matrix whose columns are already orthonormal within
    /// [`TOL_ORTHO`]. Use [`orthonormalize`] for arbitrary spanning sets.
    pub fn from_orthonormal(columns: OperatorMatrix) -> Result<Self> {
        if columns.ncols() == 0 || columns.nrows() == 0 {
            return Err(FrameError::ZeroSubspace);
        }
        if columns.ncols() > columns.nrows() {
            return Err(FrameError::NotOrthonormal {
                residual: f64::INFINITY,
            });
        }
        if !is_finite_matrix(&columns) {
            return Err(FrameError::NonFinite);
        }
        let residual = gram_residual(&columns);
        if residual > TOL_ORTHO {
            return Err(FrameError::NotOrthonormal { residual });
        }
        Ok(Self { columns })
    }

    /// The whole ambient space, spanned by the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            columns: identity(ambient_dim),
        }
    }

    /// The line through the standard basis vector `e_index`.
    pub fn standard_axis(ambient_dim: usize, index: usize) -> Self {
        let mut columns = OperatorMatrix::zeros(ambient_dim, 1);
        columns[(index, 0)] = Scalar::new(1.0, 0.0);
        Self { columns }
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn sub_dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &OperatorMatrix {
        &self.columns
    }

    pub fn into_columns(self) -> OperatorMatrix {
        self.columns
    }

    /// Orthogonal projection `P = B·Bᴴ` onto the subspace.
    pub fn projection(&self) -> OperatorMatrix {
        &self.columns * self.columns.adjoint()
    }

    /// Basis of `V ⊗ W`: Kronecker products of basis columns, ordered
    /// row-major over (column of `self`, column of `other`).
    pub fn tensor(&self, other: &SubspaceBasis) -> SubspaceBasis {
        SubspaceBasis {
            columns: kron(&self.columns, &other.columns),
        }
    }
}

fn gram_residual(columns: &OperatorMatrix) -> f64 {
    (columns.adjoint() * columns - identity(columns.ncols())).norm()
}

/// Orthonormal basis for the span of `spanning`.
///
/// The rank is decided from an SVD: singular values `σ > tol_rank · σ_max`
/// are kept. The retained left singular vectors are re-orthogonalised with
/// two Gram–Schmidt passes, then each column's phase is fixed so that its
/// first largest-magnitude entry is real and positive (bases come out
/// reproducible, although subspace equality is still decided on projections).
pub fn orthonormalize(spanning: &[VectorH], tol_rank: f64) -> Result<SubspaceBasis> {
    let first = spanning.first().ok_or(FrameError::ZeroSubspace)?;
    let dim = first.len();
    if dim == 0 {
        return Err(FrameError::ZeroSubspace);
    }
    for v in spanning {
        if v.len() != dim {
            return Err(FrameError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let m = OperatorMatrix::from_columns(spanning);
    orthonormalize_columns(&m, tol_rank)
}

/// [`orthonormalize`] for a matrix whose columns form the spanning set.
pub fn orthonormalize_columns(m: &OperatorMatrix, tol_rank: f64) -> Result<SubspaceBasis> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Err(FrameError::ZeroSubspace);
    }
    if !is_finite_matrix(m) {
        return Err(FrameError::NonFinite);
    }
    let svd = SVD::new(m.clone(), true, false);
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    if sigma_max <= 0.0 {
        return Err(FrameError::ZeroSubspace);
    }
    let u = svd.u.expect("left singular vectors requested");
    let mut keep: Vec<usize> = (0..sigma.len())
        .filter(|&k| sigma[k] > tol_rank * sigma_max)
        .collect();
    if keep.is_empty() {
        return Err(FrameError::ZeroSubspace);
    }
    keep.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));

    let mut cols: Vec<VectorH> = keep.iter().map(|&k| u.column(k).into_owned()).collect();
    for _ in 0..2 {
        gram_schmidt_in_place(&mut cols);
    }
    for c in cols.iter_mut() {
        fix_phase(c);
    }
    Ok(SubspaceBasis {
        columns: OperatorMatrix::from_columns(&cols),
    })
}

fn gram_schmidt_in_place(cols: &mut [VectorH]) {
    for k in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(k);
        let v = &mut rest[0];
        for q in done.iter() {
            let coeff = q.dotc(v);
            v.axpy(-coeff, q, Scalar::new(1.0, 0.0));
        }
        let norm = v.norm();
        *v /= Scalar::new(norm, 0.0);
    }
}

fn fix_phase(v: &mut VectorH) {
    let max = v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if max == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)) {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Eigendecomposition of a Hermitian operator with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: OperatorMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// `‖A·Q − Q·diag(λ)‖_F / ‖A‖_F` against the matrix that was decomposed.
    pub fn reconstruction_residual(&self, a: &OperatorMatrix) -> f64 {
        let q = &self.eigenvectors;
        let mut qd = q.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            qd.column_mut(k).scale_mut(lambda);
        }
        (a * q - qd).norm() / a.norm().max(f64::MIN_POSITIVE)
    }
}

pub fn hermitian_asymmetry(a: &OperatorMatrix) -> f64 {
    (a - a.adjoint()).norm() / a.norm().max(f64::MIN_POSITIVE)
}

pub fn hermitian_eig(a: &OperatorMatrix) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(FrameError::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    if !is_finite_matrix(a) {
        return Err(FrameError::NonFinite);
    }
    let asymmetry = hermitian_asymmetry(a);
    if asymmetry > TOL_HERMITIAN {
        return Err(FrameError::NotHermitian { asymmetry });
    }
    let sym = (a + a.adjoint()) * Scalar::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_EIG_SWEEPS)
        .expect("symmetric QR iteration converges on finite Hermitian input");

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = OperatorMatrix::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Kronecker product: entry `(i·p + k, j·q + l)` is `Q[i,j]·T[k,l]` for a
/// `p × q` right factor.
pub fn kron(left: &OperatorMatrix, right: &OperatorMatrix) -> OperatorMatrix {
    let (p, q) = right.shape();
    let mut out = OperatorMatrix::zeros(left.nrows() * p, left.ncols() * q);
    for i in 0..left.nrows() {
        for j in 0..left.ncols() {
            let a = left[(i, j)];
            if a == Scalar::new(0.0, 0.0) {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = a * right[(k, l)];
                }
            }
        }
    }
    out
}

/// `f ⊗ g` in the row-major Kronecker model.
pub fn tensor_vector(f: &VectorH, g: &VectorH) -> VectorH {
    let n = g.len();
    VectorH::from_fn(f.len() * n, |idx, _| f[idx / n] * g[idx % n])
}

pub fn singular_values(a: &OperatorMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.singular_values().iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm (largest singular value).
pub fn operator_norm(a: &OperatorMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a)[0]
}

/// Inverse of a square operator. Fails with [`FrameError::Singular`] when
/// `σ_min ≤ tol_cond · σ_max`.
pub fn invert(a: &OperatorMatrix, tol_cond: f64) -> Result<OperatorMatrix> {
    if !a.is_square() {
        return Err(FrameError::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    if !is_finite_matrix(a) {
        return Err(FrameError::NonFinite);
    }
    let s = singular_values(a);
    let sigma_max = s[0];
    let sigma_min = *s.last().unwrap();
    if sigma_max == 0.0 || sigma_min <= tol_cond * sigma_max {
        return Err(FrameError::Singular {
            sigma_min,
            sigma_max,
        });
    }
    a.clone().try_inverse().ok_or(FrameError::Singular {
        sigma_min,
        sigma_max,
    })
}

/// Condition number `σ_max / σ_min` (infinite for singular input).
pub fn condition_number(a: &OperatorMatrix) -> f64 {
    let s = singular_values(a);
    let min = *s.last().unwrap_or(&0.0);
    if min == 0.0 {
        f64::INFINITY
    } else {
        s[0] / min
    }
}
