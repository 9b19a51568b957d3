//! Seeded random systems, operators and vectors.
//!
//! Everything takes an explicit RNG so callers control streams; the `seed`
//! conveniences use [`ChaCha20Rng`], which is portable across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{FrameError, Result};
use crate::fusion::{frame_bounds, FusionSystem, WeightedSubspace};
use crate::linalg::{
    default_rank_tol, orthonormalize_columns, OperatorMatrix, Scalar, SubspaceBasis, VectorH,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSystemParams {
    pub dim: usize,
    pub n_subspaces: usize,
    pub max_subdim: usize,
    pub weight_range: (f64, f64),
}

impl RandomSystemParams {
    /// `dim + 1` members of dimension up to `dim`, weights in `[0.5, 2]`.
    pub fn frame_defaults(dim: usize) -> Self {
        Self {
            dim,
            n_subspaces: dim + 1,
            max_subdim: dim,
            weight_range: (0.5, 2.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(FrameError::BadParameters("dim must be positive".into()));
        }
        if self.n_subspaces == 0 {
            return Err(FrameError::BadParameters(
                "need at least one subspace".into(),
            ));
        }
        if self.max_subdim == 0 || self.max_subdim > self.dim {
            return Err(FrameError::BadParameters(format!(
                "max_subdim must lie in [1, {}], got {}",
                self.dim, self.max_subdim
            )));
        }
        let (lo, hi) = self.weight_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(FrameError::BadParameters(format!(
                "weight range must satisfy 0 < low <= high, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// The generator behind every seeded entry point.
pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Scalar::new(re, im)
}

/// Matrix of independent standard complex Gaussians, filled column-major.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            m[(r, c)] = gaussian_scalar(rng);
        }
    }
    m
}

pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> VectorH {
    VectorH::from_fn(dim, |_, _| gaussian_scalar(rng))
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> VectorH {
    loop {
        let v = random_vector(dim, rng);
        let n = v.norm();
        if n > 1e-8 {
            return v.unscale(n);
        }
    }
}

/// A uniformly oriented `k`-dimensional subspace of `C^dim`.
pub fn random_subspace<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> SubspaceBasis {
    loop {
        let g = gaussian_matrix(dim, k, rng);
        if let Ok(b) = orthonormalize_columns(&g, default_rank_tol(dim)) {
            if b.sub_dim() == k {
                return b;
            }
        }
    }
}

/// Haar-like unitary: the orthonormalised columns of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> OperatorMatrix {
    random_subspace(dim, dim, rng).into_columns()
}

/// `U · diag(σ) · Vᴴ` with singular values drawn from `[1, max_cond]`, so the
/// condition number never exceeds `max_cond`.
pub fn random_invertible<R: Rng + ?Sized>(
    dim: usize,
    max_cond: f64,
    rng: &mut R,
) -> OperatorMatrix {
    let u = random_unitary(dim, rng);
    let v = random_unitary(dim, rng);
    let sigma = OperatorMatrix::from_diagonal(&VectorH::from_fn(dim, |_, _| {
        Scalar::new(rng.random_range(1.0..=max_cond), 0.0)
    }));
    u * sigma * v.adjoint()
}

pub fn random_fusion_system(params: &RandomSystemParams, seed: u64) -> Result<FusionSystem> {
    random_fusion_system_with(params, &mut rng_from_seed(seed))
}

/// Subspace dimensions uniform in `[1, max_subdim]`, bases from
/// orthonormalised Gaussian matrices, weights uniform in the range.
pub fn random_fusion_system_with<R: Rng + ?Sized>(
    params: &RandomSystemParams,
    rng: &mut R,
) -> Result<FusionSystem> {
    params.validate()?;
    let (lo, hi) = params.weight_range;
    let mut members = Vec::with_capacity(params.n_subspaces);
    for _ in 0..params.n_subspaces {
        let k = rng.random_range(1..=params.max_subdim);
        let basis = random_subspace(params.dim, k, rng);
        let weight = if lo == hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        };
        members.push(WeightedSubspace::new(basis, weight)?);
    }
    FusionSystem::new(params.dim, members)
}

/// Smallest accepted `A/B` for [`random_frame`] draws.
pub const MIN_BOUND_RATIO: f64 = 1e-3;
const FRAME_ATTEMPTS: usize = 64;

/// Draws systems until one is a frame with `A/B ≥ MIN_BOUND_RATIO`.
///
/// # Panics
/// If `params` is invalid or no acceptable frame appears within a fixed
/// number of attempts (parameters that cannot cover `C^dim`).
pub fn random_frame<R: Rng + ?Sized>(params: &RandomSystemParams, rng: &mut R) -> FusionSystem {
    for _ in 0..FRAME_ATTEMPTS {
        let sys = random_fusion_system_with(params, rng).expect("valid parameters");
        let b = frame_bounds(&sys);
        if b.is_frame && b.lower >= MIN_BOUND_RATIO * b.upper {
            return sys;
        }
    }
    panic!("no well-conditioned frame found for {params:?}");
}

/// A system whose subspaces all lie in a random hyperplane of `C^dim`, hence
/// never a frame. Requires `dim ≥ 2`.
pub fn random_non_frame<R: Rng + ?Sized>(
    dim: usize,
    n_subspaces: usize,
    rng: &mut R,
) -> Result<FusionSystem> {
    if dim < 2 || n_subspaces == 0 {
        return Err(FrameError::BadParameters(
            "a hyperplane system needs dim >= 2 and at least one subspace".into(),
        ));
    }
    let u = random_unitary(dim, rng);
    let plane = u.columns(0, dim - 1).into_owned();
    let mut members = Vec::with_capacity(n_subspaces);
    for _ in 0..n_subspaces {
        let k = rng.random_range(1..=dim - 1);
        let inner = random_subspace(dim - 1, k, rng);
        let basis = SubspaceBasis::from_orthonormal(&plane * inner.columns())?;
        members.push(WeightedSubspace::new(basis, rng.random_range(0.5..=2.0))?);
    }
    FusionSystem::new(dim, members)
}

/// An alternative dual of a frame other than the canonical one: each
/// canonical dual subspace `S⁻¹V_i` is enlarged by a random direction
/// whenever there is room. Weights are unchanged.
///
/// Enlarging keeps the dual identity because `P_{V′_i}` fixes the range of
/// `S⁻¹P_{V_i}` whenever `V′_i ⊇ S⁻¹V_i`.
pub fn enlarged_dual<R: Rng + ?Sized>(
    canonical: &FusionSystem,
    rng: &mut R,
) -> Result<FusionSystem> {
    let dim = canonical.ambient_dim();
    let mut members = Vec::with_capacity(canonical.len());
    for m in canonical.members() {
        let basis = m.basis();
        let basis = if basis.sub_dim() < dim {
            let mut cols = basis
                .columns()
                .clone()
                .insert_column(basis.sub_dim(), Scalar::new(0.0, 0.0));
            cols.set_column(basis.sub_dim(), &random_vector(dim, rng));
            orthonormalize_columns(&cols, default_rank_tol(dim))?
        } else {
            basis.clone()
        };
        members.push(WeightedSubspace::new(basis, m.weight())?);
    }
    FusionSystem::new(dim, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{canonical_dual, frame_operator, is_alternative_dual};
    use crate::linalg::{condition_number, hermitian_eig, unitarity_residual};

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = RandomSystemParams {
            dim: 2,
            n_subspaces: 2,
            max_subdim: 1,
            weight_range: (1.0, 1.0),
        };
        let a = random_fusion_system(&p, 7).unwrap();
        let b = random_fusion_system(&p, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.members().iter().all(|m| m.weight() == 1.0));
    }

    #[test]
    fn frame_operator_is_psd() {
        let p = RandomSystemParams {
            dim: 4,
            n_subspaces: 3,
            max_subdim: 2,
            weight_range: (0.5, 2.0),
        };
        let sys = random_fusion_system(&p, 1).unwrap();
        let spec = hermitian_eig(&frame_operator(&sys)).unwrap();
        assert!(spec.min() >= -1e-12);
        for m in sys.members() {
            assert!((1..=2).contains(&m.basis().sub_dim()));
            assert!((0.5..=2.0).contains(&m.weight()));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = RandomSystemParams::frame_defaults(3);
        p.max_subdim = 0;
        assert!(matches!(
            random_fusion_system(&p, 0),
            Err(FrameError::BadParameters(_))
        ));
        p.max_subdim = 4;
        assert!(random_fusion_system(&p, 0).is_err());
        p.max_subdim = 2;
        p.weight_range = (0.0, 1.0);
        assert!(random_fusion_system(&p, 0).is_err());
        p.weight_range = (2.0, 1.0);
        assert!(random_fusion_system(&p, 0).is_err());
    }

    #[test]
    fn hyperplane_systems_are_not_frames() {
        let mut rng = rng_from_seed(3);
        for dim in 2..6 {
            let sys = random_non_frame(dim, dim + 2, &mut rng).unwrap();
            assert!(!frame_bounds(&sys).is_frame);
        }
    }

    #[test]
    fn unitaries_and_invertibles() {
        let mut rng = rng_from_seed(11);
        let u = random_unitary(5, &mut rng);
        assert!(unitarity_residual(&u) < 1e-12);
        let t = random_invertible(4, 3.0, &mut rng);
        assert!(condition_number(&t) <= 3.0 + 1e-9);
    }

    #[test]
    fn enlarged_duals_are_alternative_duals() {
        let mut rng = rng_from_seed(5);
        for dim in 2..6 {
            let sys = random_frame(&RandomSystemParams::frame_defaults(dim), &mut rng);
            let dual = canonical_dual(&sys).unwrap();
            let alt = enlarged_dual(&dual, &mut rng).unwrap();
            assert!(is_alternative_dual(&sys, &alt).unwrap().holds);
        }
    }
}
