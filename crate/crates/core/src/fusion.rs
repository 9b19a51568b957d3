//! Weighted subspace systems on a single space `H` and the operators built
//! from them.
//!
//! A [`FusionSystem`] is an ordered list of `(V_i, v_i)` pairs; list position
//! is the index. The frame operator is `S = Σ v_i² P_{V_i}`; its extremal
//! eigenvalues are reported as the optimal bounds. Duals are stored as
//! re-orthonormalised bases, so subspaces are compared by projection matrix.

use crate::error::{FrameError, Result};
use crate::linalg::{
    default_rank_tol, hermitian_eig, identity_residual, invert, operator_norm,
    orthonormalize_columns, OperatorMatrix, Scalar, SubspaceBasis, VectorH,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSubspace {
    basis: SubspaceBasis,
    weight: f64,
}

impl WeightedSubspace {
    pub fn new(basis: SubspaceBasis, weight: f64) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(FrameError::InvalidWeight(weight));
        }
        Ok(Self { basis, weight })
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn projection(&self) -> OperatorMatrix {
        self.basis.projection()
    }
}

/// `{(V_i, v_i)}` on a space of dimension `ambient_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionSystem {
    ambient_dim: usize,
    members: Vec<WeightedSubspace>,
}

impl FusionSystem {
    pub fn new(ambient_dim: usize, members: Vec<WeightedSubspace>) -> Result<Self> {
        if members.is_empty() {
            return Err(FrameError::EmptySystem);
        }
        if ambient_dim == 0 {
            return Err(FrameError::BadParameters(
                "ambient dimension is zero".into(),
            ));
        }
        for m in &members {
            if m.basis.ambient_dim() != ambient_dim {
                return Err(FrameError::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.basis.ambient_dim(),
                });
            }
        }
        Ok(Self {
            ambient_dim,
            members,
        })
    }

    /// Builds a system from `(basis, weight)` pairs, taking the ambient
    /// dimension from the first basis.
    pub fn from_pairs(pairs: Vec<(SubspaceBasis, f64)>) -> Result<Self> {
        let dim = pairs
            .first()
            .map(|(b, _)| b.ambient_dim())
            .ok_or(FrameError::EmptySystem)?;
        let members = pairs
            .into_iter()
            .map(|(b, w)| WeightedSubspace::new(b, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, members)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[WeightedSubspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn projections(&self) -> Vec<OperatorMatrix> {
        self.members.iter().map(|m| m.projection()).collect()
    }

    /// Same subspaces with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|m| WeightedSubspace::new(m.basis.clone(), m.weight * factor))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, members)
    }
}

/// `{f_i}` with `f_i ∈ V_i`, one part per member of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFamily {
    parts: Vec<VectorH>,
}

impl CoefficientFamily {
    /// Checks arity, dimensions and that each part lies in its subspace.
    pub fn new(sys: &FusionSystem, parts: Vec<VectorH>) -> Result<Self> {
        Self::with_tolerance(sys, parts, Tolerances::default().membership)
    }

    pub fn with_tolerance(sys: &FusionSystem, parts: Vec<VectorH>, tol: f64) -> Result<Self> {
        if parts.len() != sys.len() {
            return Err(FrameError::ArityMismatch {
                expected: sys.len(),
                found: parts.len(),
            });
        }
        for (index, (part, member)) in parts.iter().zip(sys.members()).enumerate() {
            if part.len() != sys.ambient_dim() {
                return Err(FrameError::DimensionMismatch {
                    expected: sys.ambient_dim(),
                    found: part.len(),
                });
            }
            let residual = (member.projection() * part - part).norm();
            if residual > tol * part.norm().max(1.0) {
                return Err(FrameError::NotInSubspace { index, residual });
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[VectorH] {
        &self.parts
    }

    /// `Σ ⟨f_i, g_i⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CoefficientFamily) -> Scalar {
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.dotc(b))
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.parts.iter().map(|p| p.norm_squared()).sum()
    }
}

/// Optimal frame constants of a system: the extremal eigenvalues of `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub is_tight: bool,
}

impl FrameBounds {
    /// Classifies `(lower, upper)`; `upper` doubles as `‖S‖`.
    pub fn classify(lower: f64, upper: f64, tol: &Tolerances) -> Self {
        let lower = lower.max(0.0);
        let is_frame = lower > tol.frame * upper;
        let is_tight = is_frame && (upper - lower) <= tol.tight * upper;
        Self {
            lower,
            upper,
            is_frame,
            is_tight,
        }
    }
}

/// Outcome of an operator identity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    pub fn new(residual: f64, tolerance: f64) -> Self {
        Self {
            holds: residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

pub fn projection(basis: &SubspaceBasis) -> OperatorMatrix {
    basis.projection()
}

fn check_vector_dim(sys: &FusionSystem, f: &VectorH) -> Result<()> {
    if f.len() != sys.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: sys.ambient_dim(),
            found: f.len(),
        });
    }
    Ok(())
}

/// `f ↦ {v_i P_{V_i} f}`.
pub fn analysis(sys: &FusionSystem, f: &VectorH) -> Result<CoefficientFamily> {
    check_vector_dim(sys, f)?;
    let parts = sys
        .members()
        .iter()
        .map(|m| m.projection() * f * Scalar::new(m.weight(), 0.0))
        .collect();
    Ok(CoefficientFamily { parts })
}

/// `{f_i} ↦ Σ v_i f_i`.
pub fn synthesis(sys: &FusionSystem, coeffs: &CoefficientFamily) -> Result<VectorH> {
    if coeffs.parts.len() != sys.len() {
        return Err(FrameError::ArityMismatch {
            expected: sys.len(),
            found: coeffs.parts.len(),
        });
    }
    let mut out = VectorH::zeros(sys.ambient_dim());
    for (part, m) in coeffs.parts.iter().zip(sys.members()) {
        check_vector_dim(sys, part)?;
        out.axpy(Scalar::new(m.weight(), 0.0), part, Scalar::new(1.0, 0.0));
    }
    Ok(out)
}

/// `S = Σ v_i² P_{V_i}`.
pub fn frame_operator(sys: &FusionSystem) -> OperatorMatrix {
    let n = sys.ambient_dim();
    sys.members()
        .iter()
        .fold(OperatorMatrix::zeros(n, n), |acc, m| {
            acc + m.projection() * Scalar::new(m.weight() * m.weight(), 0.0)
        })
}

/// `Σ v_i² ‖P_{V_i} f‖²`, the middle term of the frame inequality.
pub fn frame_energy(sys: &FusionSystem, f: &VectorH) -> Result<f64> {
    check_vector_dim(sys, f)?;
    Ok(sys
        .members()
        .iter()
        .map(|m| m.weight() * m.weight() * (m.projection() * f).norm_squared())
        .sum())
}

pub fn frame_bounds(sys: &FusionSystem) -> FrameBounds {
    frame_bounds_with(sys, &Tolerances::default())
}

pub fn frame_bounds_with(sys: &FusionSystem, tol: &Tolerances) -> FrameBounds {
    operator_bounds(&frame_operator(sys), tol)
}

/// Optimal bounds of a frame operator given directly as a matrix.
pub fn operator_bounds(s: &OperatorMatrix, tol: &Tolerances) -> FrameBounds {
    let spectrum = hermitian_eig(s).expect("frame operators are Hermitian by construction");
    FrameBounds::classify(spectrum.min(), spectrum.max(), tol)
}

/// Violation of `B⁻¹ I ≤ S⁻¹ ≤ A⁻¹ I`, measured on the spectrum of `S⁻¹`
/// relative to `A⁻¹`. Zero when the ordering holds exactly.
pub fn inverse_order_violation(sys: &FusionSystem) -> Result<f64> {
    let tol = Tolerances::default();
    let s = frame_operator(sys);
    let bounds = operator_bounds(&s, &tol);
    if !bounds.is_frame {
        return Err(FrameError::NotAFrame {
            lower: bounds.lower,
        });
    }
    let s_inv = invert(&s, tol.cond)?;
    let herm = (&s_inv + s_inv.adjoint()) * Scalar::new(0.5, 0.0);
    let spectrum = hermitian_eig(&herm)?;
    let inv_a = 1.0 / bounds.lower;
    let inv_b = 1.0 / bounds.upper;
    let below = (inv_b - spectrum.min()).max(0.0);
    let above = (spectrum.max() - inv_a).max(0.0);
    Ok(below.max(above) / inv_a)
}

/// `S⁻¹` for a system that is a frame.
pub fn inverse_frame_operator(sys: &FusionSystem, tol: &Tolerances) -> Result<OperatorMatrix> {
    let s = frame_operator(sys);
    let bounds = operator_bounds(&s, tol);
    if !bounds.is_frame {
        return Err(FrameError::NotAFrame {
            lower: bounds.lower,
        });
    }
    invert(&s, tol.cond)
}

/// `{(S⁻¹ V_i, v_i)}`.
pub fn canonical_dual(sys: &FusionSystem) -> Result<FusionSystem> {
    let s_inv = inverse_frame_operator(sys, &Tolerances::default())?;
    map_subspaces(sys, &s_inv)
}

/// Applies an invertible operator to every subspace, keeping weights.
pub(crate) fn map_subspaces(sys: &FusionSystem, op: &OperatorMatrix) -> Result<FusionSystem> {
    let tol_rank = default_rank_tol(sys.ambient_dim());
    let members = sys
        .members()
        .iter()
        .map(|m| {
            let basis = orthonormalize_columns(&(op * m.basis().columns()), tol_rank)?;
            WeightedSubspace::new(basis, m.weight())
        })
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::new(sys.ambient_dim(), members)
}

/// `Σ v_i v′_i P_{V′_i} S⁻¹ P_{V_i}` for an index-aligned candidate.
pub fn dual_synthesis_operator(sys: &FusionSystem, cand: &FusionSystem) -> Result<OperatorMatrix> {
    if cand.ambient_dim() != sys.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: sys.ambient_dim(),
            found: cand.ambient_dim(),
        });
    }
    if cand.len() != sys.len() {
        return Err(FrameError::ArityMismatch {
            expected: sys.len(),
            found: cand.len(),
        });
    }
    let s_inv = inverse_frame_operator(sys, &Tolerances::default())?;
    let n = sys.ambient_dim();
    let mut acc = OperatorMatrix::zeros(n, n);
    for (m, c) in sys.members().iter().zip(cand.members()) {
        let term = c.projection() * &s_inv * m.projection();
        acc += term * Scalar::new(m.weight() * c.weight(), 0.0);
    }
    Ok(acc)
}

/// `Σ v_i² P_{S⁻¹V_i} S⁻¹ P_{V_i} f`.
pub fn reconstruct_canonical(sys: &FusionSystem, f: &VectorH) -> Result<VectorH> {
    check_vector_dim(sys, f)?;
    let dual = canonical_dual(sys)?;
    Ok(dual_synthesis_operator(sys, &dual)? * f)
}

/// Reconstruction through an arbitrary index-aligned dual candidate.
pub fn reconstruct_with_dual(
    sys: &FusionSystem,
    cand: &FusionSystem,
    f: &VectorH,
) -> Result<VectorH> {
    check_vector_dim(sys, f)?;
    Ok(dual_synthesis_operator(sys, cand)? * f)
}

/// Tests `Σ v_i v′_i P_{V′_i} S⁻¹ P_{V_i} = I`; the residual is the
/// Frobenius distance to `I` divided by `√dim`.
pub fn is_alternative_dual(sys: &FusionSystem, cand: &FusionSystem) -> Result<IdentityCheck> {
    let op = dual_synthesis_operator(sys, cand)?;
    Ok(IdentityCheck::new(
        identity_residual(&op),
        Tolerances::default().dual,
    ))
}

/// Tests `Σ ops = I` for a finite family (unconditional convergence is
/// automatic for finite sums).
pub fn check_resolution_of_identity(ops: &[OperatorMatrix]) -> Result<IdentityCheck> {
    let first = ops
        .first()
        .ok_or_else(|| FrameError::BadParameters("empty operator family".into()))?;
    let n = first.nrows();
    let mut acc = OperatorMatrix::zeros(n, n);
    for op in ops {
        if op.nrows() != n || op.ncols() != n {
            return Err(FrameError::DimensionMismatch {
                expected: n,
                found: if op.nrows() != n {
                    op.nrows()
                } else {
                    op.ncols()
                },
            });
        }
        acc += op;
    }
    Ok(IdentityCheck::new(
        identity_residual(&acc),
        Tolerances::default().roi,
    ))
}

/// Orthonormal basis of `T·V` for an invertible `T`.
pub fn transport_subspace(t: &OperatorMatrix, basis: &SubspaceBasis) -> Result<SubspaceBasis> {
    if !t.is_square() || t.nrows() != basis.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: basis.ambient_dim(),
            found: t.nrows(),
        });
    }
    invert(t, Tolerances::default().cond)?;
    orthonormalize_columns(
        &(t * basis.columns()),
        default_rank_tol(basis.ambient_dim()),
    )
}

/// Frobenius distance between the projections onto two subspaces.
pub fn projection_distance(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    (a.projection() - b.projection()).norm()
}

/// Largest per-member projection distance between two index-aligned systems.
pub fn max_member_distance(a: &FusionSystem, b: &FusionSystem) -> Result<f64> {
    if a.len() != b.len() {
        return Err(FrameError::ArityMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.members()
        .iter()
        .zip(b.members())
        .map(|(x, y)| projection_distance(x.basis(), y.basis()))
        .fold(0.0, f64::max))
}

/// `‖S‖ · ‖S⁻¹‖` squared, the distortion factor in the canonical-dual bounds.
pub fn dual_distortion(s: &OperatorMatrix, s_inv: &OperatorMatrix) -> f64 {
    let a = operator_norm(s);
    let b = operator_norm(s_inv);
    a * a * b * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{standard_parseval, two_lines};
    use crate::linalg::{identity, real_matrix, real_vector};
    use approx::assert_abs_diff_eq;

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn projection_examples() {
        let e1 = SubspaceBasis::standard_axis(2, 0);
        assert_eq!(projection(&e1), real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let diag = SubspaceBasis::from_orthonormal(real_matrix(2, 1, &[R, R])).unwrap();
        assert!((projection(&diag) - real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5])).norm() < 1e-15);
        assert_eq!(projection(&SubspaceBasis::full(3)), identity(3));
    }

    #[test]
    fn analysis_examples() {
        let p = standard_parseval(2);
        let c = analysis(&p, &real_vector(&[3.0, 4.0])).unwrap();
        assert_eq!(c.parts()[0], real_vector(&[3.0, 0.0]));
        assert_eq!(c.parts()[1], real_vector(&[0.0, 4.0]));

        let v = two_lines();
        let c = analysis(&v, &real_vector(&[1.0, 0.0])).unwrap();
        assert!((&c.parts()[0] - real_vector(&[1.0, 0.0])).norm() < 1e-15);
        assert!((&c.parts()[1] - real_vector(&[0.5, 0.5])).norm() < 1e-15);

        let z = analysis(&v, &VectorH::zeros(2)).unwrap();
        assert!(z.parts().iter().all(|p| p.norm() == 0.0));
        assert!(analysis(&v, &VectorH::zeros(3)).is_err());
    }

    #[test]
    fn synthesis_examples() {
        let p = standard_parseval(2);
        let c =
            CoefficientFamily::new(&p, vec![real_vector(&[3.0, 0.0]), real_vector(&[0.0, 4.0])])
                .unwrap();
        assert_eq!(synthesis(&p, &c).unwrap(), real_vector(&[3.0, 4.0]));

        let v = two_lines();
        let c =
            CoefficientFamily::new(&v, vec![real_vector(&[1.0, 0.0]), real_vector(&[0.5, 0.5])])
                .unwrap();
        let out = synthesis(&v, &c).unwrap();
        assert!((out - real_vector(&[1.5, 0.5])).norm() < 1e-15);

        let z = CoefficientFamily::new(&v, vec![VectorH::zeros(2), VectorH::zeros(2)]).unwrap();
        assert_eq!(synthesis(&v, &z).unwrap(), VectorH::zeros(2));
    }

    #[test]
    fn coefficient_membership_enforced() {
        let v = two_lines();
        let err =
            CoefficientFamily::new(&v, vec![real_vector(&[0.0, 1.0]), real_vector(&[0.5, 0.5])])
                .unwrap_err();
        assert!(matches!(err, FrameError::NotInSubspace { index: 0, .. }));
        assert!(matches!(
            CoefficientFamily::new(&v, vec![real_vector(&[1.0, 0.0])]),
            Err(FrameError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn frame_operator_examples() {
        assert!((frame_operator(&standard_parseval(3)) - identity(3)).norm() < 1e-15);
        let s = frame_operator(&two_lines());
        assert!((s - real_matrix(2, 2, &[1.5, 0.5, 0.5, 0.5])).norm() < 1e-15);
        let single = FusionSystem::from_pairs(vec![(SubspaceBasis::full(2), 3.0)]).unwrap();
        assert!((frame_operator(&single) - identity(2) * Scalar::new(9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn frame_bounds_examples() {
        let p = frame_bounds(&standard_parseval(2));
        assert_abs_diff_eq!(p.lower, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.upper, 1.0, epsilon = 1e-15);
        assert!(p.is_frame && p.is_tight);

        let v = frame_bounds(&two_lines());
        assert_abs_diff_eq!(v.lower, 1.0 - R, epsilon = 1e-14);
        assert_abs_diff_eq!(v.upper, 1.0 + R, epsilon = 1e-14);
        assert!(v.is_frame && !v.is_tight);

        let e1 = SubspaceBasis::standard_axis(2, 0);
        let degenerate = FusionSystem::from_pairs(vec![(e1.clone(), 1.0), (e1, 1.0)]).unwrap();
        let d = frame_bounds(&degenerate);
        assert_abs_diff_eq!(d.lower, 0.0, epsilon = 1e-15);
        assert!(!d.is_frame && !d.is_tight);
    }

    #[test]
    fn inverse_order_holds_for_two_lines() {
        assert!(inverse_order_violation(&two_lines()).unwrap() <= 1e-12);
    }

    #[test]
    fn canonical_dual_examples() {
        let p = standard_parseval(2);
        assert!(max_member_distance(&canonical_dual(&p).unwrap(), &p).unwrap() < 1e-14);

        // S⁻¹ e1 = (1, −1), S⁻¹ (1,1)/√2 = (0, 2)/√2
        let dual = canonical_dual(&two_lines()).unwrap();
        let expected = FusionSystem::from_pairs(vec![
            (
                SubspaceBasis::from_orthonormal(real_matrix(2, 1, &[R, -R])).unwrap(),
                1.0,
            ),
            (SubspaceBasis::standard_axis(2, 1), 1.0),
        ])
        .unwrap();
        assert!(max_member_distance(&dual, &expected).unwrap() < 1e-14);
        assert_eq!(dual.weights(), vec![1.0, 1.0]);

        let e1 = SubspaceBasis::standard_axis(2, 0);
        let degenerate = FusionSystem::from_pairs(vec![(e1.clone(), 1.0), (e1, 1.0)]).unwrap();
        assert!(matches!(
            canonical_dual(&degenerate),
            Err(FrameError::NotAFrame { .. })
        ));
    }

    #[test]
    fn reconstruction_examples() {
        let v = two_lines();
        let e1 = real_vector(&[1.0, 0.0]);
        let out = reconstruct_canonical(&v, &e1).unwrap();
        assert!((out - &e1).norm() < 1e-14);
        // Hand-computed terms: [[1,0],[−1,0]] + [[0,0],[1,1]] = I.
        let dual = canonical_dual(&v).unwrap();
        let op = dual_synthesis_operator(&v, &dual).unwrap();
        assert!((op - identity(2)).norm() < 1e-14);

        let f = real_vector(&[0.25, -7.0, 3.5]);
        let p = standard_parseval(3);
        assert!((reconstruct_canonical(&p, &f).unwrap() - &f).norm() < 1e-14);
        assert_eq!(
            reconstruct_canonical(&v, &VectorH::zeros(2))
                .unwrap()
                .norm(),
            0.0
        );
    }

    #[test]
    fn alternative_dual_examples() {
        let v = two_lines();
        let dual = canonical_dual(&v).unwrap();
        assert!(is_alternative_dual(&v, &dual).unwrap().holds);

        let p = standard_parseval(2);
        assert!(is_alternative_dual(&p, &p).unwrap().holds);

        let e1 = SubspaceBasis::standard_axis(2, 0);
        let bad = FusionSystem::from_pairs(vec![(e1.clone(), 1.0), (e1, 1.0)]).unwrap();
        let check = is_alternative_dual(&v, &bad).unwrap();
        assert!(!check.holds);

        let short = FusionSystem::from_pairs(vec![(SubspaceBasis::full(2), 1.0)]).unwrap();
        assert!(matches!(
            is_alternative_dual(&v, &short),
            Err(FrameError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn enlarged_dual_subspaces_are_still_duals() {
        // P' S⁻¹ P_i = S⁻¹ P_i whenever S⁻¹V_i ⊂ V'_i; the whole space works.
        let v = two_lines();
        let full = FusionSystem::from_pairs(vec![
            (SubspaceBasis::full(2), 1.0),
            (SubspaceBasis::full(2), 1.0),
        ])
        .unwrap();
        assert!(is_alternative_dual(&v, &full).unwrap().holds);
    }

    #[test]
    fn resolution_of_identity_examples() {
        let e1 = SubspaceBasis::standard_axis(2, 0).projection();
        let e2 = SubspaceBasis::standard_axis(2, 1).projection();
        assert!(check_resolution_of_identity(&[e1, e2]).unwrap().holds);

        let v = two_lines();
        let s_inv = inverse_frame_operator(&v, &Tolerances::default()).unwrap();
        let ops: Vec<_> = v
            .members()
            .iter()
            .map(|m| &s_inv * m.projection() * Scalar::new(m.weight().powi(2), 0.0))
            .collect();
        assert!(check_resolution_of_identity(&ops).unwrap().holds);

        let twice = check_resolution_of_identity(&[identity(2), identity(2)]).unwrap();
        assert!(!twice.holds);
        assert_abs_diff_eq!(twice.residual, 1.0, epsilon = 1e-15);

        assert!(matches!(
            check_resolution_of_identity(&[identity(2), identity(3)]),
            Err(FrameError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transport_subspace_examples() {
        let e1 = SubspaceBasis::standard_axis(2, 0);
        let same = transport_subspace(&identity(2), &e1).unwrap();
        assert!(projection_distance(&same, &e1) < 1e-12);

        let rot = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let moved = transport_subspace(&rot, &e1).unwrap();
        assert!(projection_distance(&moved, &SubspaceBasis::standard_axis(2, 1)) < 1e-14);
        // P_{TV} T = T P_V for unitary T
        let lhs = moved.projection() * &rot;
        let rhs = &rot * e1.projection();
        assert!((lhs - rhs).norm() < 1e-10);

        let singular = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            transport_subspace(&singular, &e1),
            Err(FrameError::Singular { .. })
        ));
    }

    #[test]
    fn weight_validation() {
        let b = SubspaceBasis::full(2);
        assert!(matches!(
            WeightedSubspace::new(b.clone(), 0.0),
            Err(FrameError::InvalidWeight(_))
        ));
        assert!(WeightedSubspace::new(b.clone(), -1.0).is_err());
        assert!(WeightedSubspace::new(b, f64::NAN).is_err());
        assert_eq!(
            FusionSystem::new(2, vec![]).unwrap_err(),
            FrameError::EmptySystem
        );
    }

    #[test]
    fn weight_scaling_scales_bounds_quadratically() {
        let v = two_lines();
        let base = frame_bounds(&v);
        let scaled = frame_bounds(&v.scale_weights(3.0).unwrap());
        assert_abs_diff_eq!(scaled.lower, 9.0 * base.lower, epsilon = 1e-13);
        assert_abs_diff_eq!(scaled.upper, 9.0 * base.upper, epsilon = 1e-13);
        assert_eq!(scaled.is_tight, base.is_tight);
    }
}
