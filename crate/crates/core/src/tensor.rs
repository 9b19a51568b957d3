//! Fusion systems on `H ⊗ K` built from a system on each factor.
//!
//! Member `(i, j)` of `V ⊗ W` is `(V_i ⊗ W_j, v_i·w_j)`. Members are stored
//! row-major over `(i, j)` and `pair_index` records the provenance of each.
//! Everything here works on the Kronecker model described in [`crate::linalg`].

use crate::error::{FrameError, Result};
use crate::fusion::{
    canonical_dual, dual_synthesis_operator, frame_bounds, frame_operator, inverse_frame_operator,
    transport_subspace, FrameBounds, FusionSystem, IdentityCheck, WeightedSubspace,
};
use crate::linalg::{
    identity_residual, invert, kron, operator_norm, relative_distance, unitarity_residual,
    OperatorMatrix, Scalar, VectorH,
};
use crate::tolerance::Tolerances;

/// Relative tolerance for `S_{V⊗W} = S_V ⊗ S_W`.
pub const FACTORIZATION_TOL: f64 = 1e-10;
/// Relative tolerance for `S_{V⊗W}⁻¹ = S_V⁻¹ ⊗ S_W⁻¹`.
pub const INVERSE_FACTORIZATION_TOL: f64 = 1e-9;
/// Additive slack on the bounded side of the dual lower-bound inequality.
pub const DUAL_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TensorSystem {
    base: FusionSystem,
    pair_index: Vec<(usize, usize)>,
    left: FusionSystem,
    right: FusionSystem,
}

impl TensorSystem {
    /// The system on `H ⊗ K` as an ordinary fusion system.
    pub fn base(&self) -> &FusionSystem {
        &self.base
    }

    pub fn left(&self) -> &FusionSystem {
        &self.left
    }

    pub fn right(&self) -> &FusionSystem {
        &self.right
    }

    pub fn pair_index(&self) -> &[(usize, usize)] {
        &self.pair_index
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    /// Position of member `(i, j)` in `base`.
    pub fn position(&self, i: usize, j: usize) -> usize {
        i * self.right.len() + j
    }
}

/// `V ⊗ W = {(V_i ⊗ W_j, v_i w_j)}`.
pub fn tensor_system(left: &FusionSystem, right: &FusionSystem) -> TensorSystem {
    let mut members = Vec::with_capacity(left.len() * right.len());
    let mut pair_index = Vec::with_capacity(left.len() * right.len());
    for (i, v) in left.members().iter().enumerate() {
        for (j, w) in right.members().iter().enumerate() {
            let basis = v.basis().tensor(w.basis());
            members.push(
                WeightedSubspace::new(basis, v.weight() * w.weight())
                    .expect("product of positive weights is positive"),
            );
            pair_index.push((i, j));
        }
    }
    let base = FusionSystem::new(left.ambient_dim() * right.ambient_dim(), members)
        .expect("tensor members share the product dimension");
    TensorSystem {
        base,
        pair_index,
        left: left.clone(),
        right: right.clone(),
    }
}

/// Optimal bounds of the tensor system, computed from `S_{V⊗W}` itself.
pub fn tensor_frame_bounds(ts: &TensorSystem) -> FrameBounds {
    frame_bounds(&ts.base)
}

/// Largest `‖P_{V_i⊗W_j} − P_{V_i} ⊗ P_{W_j}‖_F` over all members.
pub fn projection_factorization_residual(ts: &TensorSystem) -> f64 {
    ts.pair_index
        .iter()
        .zip(ts.base.members())
        .map(|(&(i, j), m)| {
            let expected = kron(
                &ts.left.members()[i].projection(),
                &ts.right.members()[j].projection(),
            );
            (m.projection() - expected).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCheck {
    pub holds: bool,
    /// `‖S_{V⊗W} − S_V ⊗ S_W‖_F / ‖S_{V⊗W}‖_F`.
    pub forward: f64,
    /// Relative inverse residual, present when both factors are frames.
    pub inverse: Option<f64>,
}

pub fn check_operator_factorization(ts: &TensorSystem) -> FactorizationCheck {
    let tol = Tolerances::default();
    let s = frame_operator(&ts.base);
    let s_left = frame_operator(&ts.left);
    let s_right = frame_operator(&ts.right);
    let forward = relative_distance(&kron(&s_left, &s_right), &s);

    let inverse = match (
        invert(&s, tol.cond),
        invert(&s_left, tol.cond),
        invert(&s_right, tol.cond),
    ) {
        (Ok(s_inv), Ok(l_inv), Ok(r_inv)) => Some(relative_distance(&kron(&l_inv, &r_inv), &s_inv)),
        _ => None,
    };
    let holds =
        forward <= FACTORIZATION_TOL && inverse.map_or(true, |r| r <= INVERSE_FACTORIZATION_TOL);
    FactorizationCheck {
        holds,
        forward,
        inverse,
    }
}

fn require_unitary(t: &OperatorMatrix, tol: &Tolerances) -> Result<()> {
    let residual = unitarity_residual(t);
    if residual > tol.unitary {
        return Err(FrameError::NotUnitary { residual });
    }
    Ok(())
}

fn transport_factor(t: &OperatorMatrix, sys: &FusionSystem) -> Result<FusionSystem> {
    let members = sys
        .members()
        .iter()
        .map(|m| WeightedSubspace::new(transport_subspace(t, m.basis())?, m.weight()))
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::new(sys.ambient_dim(), members)
}

/// `{((T1 ⊗ T2)(V_i ⊗ W_j), v_i w_j)}` for unitary `T1`, `T2`, realised as
/// `(T1 V_i) ⊗ (T2 W_j)`.
pub fn transport_tensor_system(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    ts: &TensorSystem,
) -> Result<TensorSystem> {
    let tol = Tolerances::default();
    require_unitary(t1, &tol)?;
    require_unitary(t2, &tol)?;
    transport_unchecked(t1, t2, ts)
}

fn transport_unchecked(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    ts: &TensorSystem,
) -> Result<TensorSystem> {
    if t1.nrows() != ts.left.ambient_dim() || t2.nrows() != ts.right.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            expected: ts.left.ambient_dim() * ts.right.ambient_dim(),
            found: t1.nrows() * t2.nrows(),
        });
    }
    let left = transport_factor(t1, &ts.left)?;
    let right = transport_factor(t2, &ts.right)?;
    Ok(tensor_system(&left, &right))
}

/// The two-sided bound a transported frame must satisfy:
/// `AC / (‖T‖²‖T⁻¹‖²) ≤ A' ≤ B' ≤ BD · ‖T‖²‖T⁻¹‖²` with `T = T1 ⊗ T2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSandwich {
    pub floor: f64,
    pub ceiling: f64,
    pub bounds: FrameBounds,
    pub holds: bool,
}

/// Evaluates the transport sandwich for an already transported system.
pub fn transport_sandwich(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    original: &TensorSystem,
    transported: &TensorSystem,
    slack: f64,
) -> Result<TransportSandwich> {
    let tol = Tolerances::default();
    let vb = frame_bounds(&original.left);
    let wb = frame_bounds(&original.right);
    if !vb.is_frame || !wb.is_frame {
        return Err(FrameError::NotAFrame {
            lower: vb.lower.min(wb.lower),
        });
    }
    let t = kron(t1, t2);
    let t_inv = invert(&t, tol.cond)?;
    let distortion = operator_norm(&t).powi(2) * operator_norm(&t_inv).powi(2);
    let floor = vb.lower * wb.lower / distortion;
    let ceiling = vb.upper * wb.upper * distortion;
    let bounds = tensor_frame_bounds(transported);
    let holds = bounds.is_frame && bounds.lower >= floor - slack && bounds.upper <= ceiling + slack;
    Ok(TransportSandwich {
        floor,
        ceiling,
        bounds,
        holds,
    })
}

/// Transport under arbitrary invertible operators.
///
/// Experimental: the sandwich inequality is reported, not enforced, since the
/// upper-bound argument relies on `P_{TV} T = T P_V`, which needs unitarity.
pub fn transport_tensor_system_general(
    t1: &OperatorMatrix,
    t2: &OperatorMatrix,
    ts: &TensorSystem,
) -> Result<(TensorSystem, TransportSandwich)> {
    let transported = transport_unchecked(t1, t2, ts)?;
    let sandwich = transport_sandwich(t1, t2, ts, &transported, 1e-8)?;
    Ok((transported, sandwich))
}

/// `{T_i ⊗ U_j}` for families on each factor, row-major over `(i, j)`.
pub fn kron_family(left: &[OperatorMatrix], right: &[OperatorMatrix]) -> Vec<OperatorMatrix> {
    left.iter()
        .flat_map(|t| right.iter().map(move |u| kron(t, u)))
        .collect()
}

/// The family `{v_i² w_j² (T_i ⊗ U_j)}` with `T_i = P_{V_i} S_V⁻¹` and
/// `U_j = P_{W_j} S_W⁻¹`.
#[derive(Debug, Clone)]
pub struct RoiFamily {
    pub ops: Vec<OperatorMatrix>,
    /// `v_i² w_j²`, aligned with `ops`.
    pub scalars: Vec<f64>,
    /// Factor split `(a, b)` with `a·b = 1`; always `(1, 1)` here.
    pub split_constants: (f64, f64),
    pub left_bounds: FrameBounds,
    pub right_bounds: FrameBounds,
}

impl RoiFamily {
    /// `Σ scalars[k] · ops[k]`.
    pub fn sum(&self) -> OperatorMatrix {
        let n = self.ops[0].nrows();
        self.ops
            .iter()
            .zip(&self.scalars)
            .fold(OperatorMatrix::zeros(n, n), |acc, (op, &c)| {
                acc + op * Scalar::new(c, 0.0)
            })
    }

    pub fn identity_check(&self) -> IdentityCheck {
        IdentityCheck::new(identity_residual(&self.sum()), Tolerances::default().roi)
    }

    /// `Σ v_i² w_j² ‖(T_i ⊗ U_j) x‖²`.
    pub fn energy(&self, x: &VectorH) -> f64 {
        self.ops
            .iter()
            .zip(&self.scalars)
            .map(|(op, &c)| c * (op * x).norm_squared())
            .sum()
    }

    /// `(AC/(B²D²)·a²b², BD/(A²C²)·a²b²)`: the energy bounds relative to
    /// `‖f ⊗ g‖²` on pure tensors.
    pub fn energy_bounds(&self) -> (f64, f64) {
        let (a, b) = self.split_constants;
        let ab2 = (a * b).powi(2);
        let (lo_v, hi_v) = (self.left_bounds.lower, self.left_bounds.upper);
        let (lo_w, hi_w) = (self.right_bounds.lower, self.right_bounds.upper);
        (
            lo_v * lo_w / (hi_v * hi_v * hi_w * hi_w) * ab2,
            hi_v * hi_w / (lo_v * lo_v * lo_w * lo_w) * ab2,
        )
    }
}

pub fn roi_tensor(left: &FusionSystem, right: &FusionSystem) -> Result<RoiFamily> {
    let tol = Tolerances::default();
    let v_inv = inverse_frame_operator(left, &tol)?;
    let w_inv = inverse_frame_operator(right, &tol)?;
    let t: Vec<_> = left
        .members()
        .iter()
        .map(|m| m.projection() * &v_inv)
        .collect();
    let u: Vec<_> = right
        .members()
        .iter()
        .map(|m| m.projection() * &w_inv)
        .collect();
    let ops = kron_family(&t, &u);
    let scalars = left
        .weights()
        .iter()
        .flat_map(|&v| right.weights().into_iter().map(move |w| (v * w).powi(2)))
        .collect();
    Ok(RoiFamily {
        ops,
        scalars,
        split_constants: (1.0, 1.0),
        left_bounds: frame_bounds(left),
        right_bounds: frame_bounds(right),
    })
}

fn require_frame(ts: &TensorSystem) -> Result<FrameBounds> {
    let bounds = tensor_frame_bounds(ts);
    if !bounds.is_frame {
        return Err(FrameError::NotAFrame {
            lower: bounds.lower,
        });
    }
    Ok(bounds)
}

/// `{(S_{V⊗W}⁻¹ (V_i ⊗ W_j), v_i w_j)}`, realised as the tensor product of
/// the factor canonical duals.
pub fn canonical_dual_tensor(ts: &TensorSystem) -> Result<TensorSystem> {
    require_frame(ts)?;
    let left = canonical_dual(&ts.left)?;
    let right = canonical_dual(&ts.right)?;
    Ok(tensor_system(&left, &right))
}

/// Tests `Σ v_i w_j v′_i w′_j P_{V′_i⊗W′_j} S_{V⊗W}⁻¹ P_{V_i⊗W_j} = I`.
pub fn is_alternative_dual_tensor(ts: &TensorSystem, cand: &TensorSystem) -> Result<IdentityCheck> {
    if cand.len() != ts.len() {
        return Err(FrameError::ArityMismatch {
            expected: ts.len(),
            found: cand.len(),
        });
    }
    require_frame(ts)?;
    let op = dual_synthesis_operator(&ts.base, &cand.base)?;
    Ok(IdentityCheck::new(
        identity_residual(&op),
        Tolerances::default().dual,
    ))
}

/// Bounds of an alternative dual on `H ⊗ K` together with the guaranteed
/// lower bound `1 / (D₁ D₂ ‖S_{V⊗W}⁻¹‖²)`, where `D₁`, `D₂` are the factor
/// upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualFrameCheck {
    pub bounds: FrameBounds,
    pub guaranteed_lower: f64,
    pub holds: bool,
}

pub fn alt_dual_frame_check(ts: &TensorSystem, cand: &TensorSystem) -> Result<DualFrameCheck> {
    let dual = is_alternative_dual_tensor(ts, cand)?;
    if !dual.holds {
        return Err(FrameError::NotADual {
            residual: dual.residual,
        });
    }
    let tol = Tolerances::default();
    let d1 = frame_bounds(&ts.left).upper;
    let d2 = frame_bounds(&ts.right).upper;
    let s_inv = inverse_frame_operator(&ts.base, &tol)?;
    let guaranteed_lower = 1.0 / (d1 * d2 * operator_norm(&s_inv).powi(2));
    let bounds = tensor_frame_bounds(cand);
    Ok(DualFrameCheck {
        bounds,
        guaranteed_lower,
        holds: bounds.is_frame && bounds.lower >= guaranteed_lower - DUAL_BOUND_SLACK,
    })
}
