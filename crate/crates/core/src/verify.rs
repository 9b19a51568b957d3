//! Randomised verification campaign: one check routine per identity or
//! inequality, run over seeded instances and summarised in a report.
//!
//! # Streams
//! Trial `t` of the check at position `c` in [`CheckId::ALL`] draws from
//! `ChaCha20Rng::seed_from_u64(seed)` with stream `(c << 32) | t`. Trials are
//! therefore independent of each other, of thread scheduling and of which
//! other checks are selected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::file::FrameFileV1;
use crate::fusion::{
    analysis, canonical_dual, check_resolution_of_identity, dual_distortion,
    dual_synthesis_operator, frame_bounds, frame_operator, inverse_frame_operator,
    inverse_order_violation, is_alternative_dual, max_member_distance, operator_bounds,
    reconstruct_canonical, synthesis, transport_subspace, FusionSystem,
};
use crate::linalg::{
    hermitian_asymmetry, hermitian_eig, identity, identity_residual, invert, kron, operator_norm,
    relative_distance, tensor_vector, OperatorMatrix, Scalar, SubspaceBasis, VectorH,
};
use crate::random::{
    enlarged_dual, gaussian_matrix, random_frame, random_invertible, random_non_frame,
    random_subspace, random_unit_vector, random_unitary, random_vector, RandomSystemParams,
};
use crate::tensor::{
    alt_dual_frame_check, canonical_dual_tensor, check_operator_factorization,
    is_alternative_dual_tensor, kron_family, projection_factorization_residual, roi_tensor,
    tensor_frame_bounds, tensor_system, transport_sandwich, transport_tensor_system, TensorSystem,
    FACTORIZATION_TOL, INVERSE_FACTORIZATION_TOL,
};
use crate::tolerance::Tolerances;

pub const REPORT_VERSION: &str = "fusion-frame-report/1";
/// Additive slack on the bounded side of every inequality check.
pub const INEQUALITY_SLACK: f64 = 1e-8;
/// Largest per-factor dimension accepted by [`CheckSpec::validate`].
pub const MAX_FACTOR_DIM: usize = 64;

const ENERGY_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    ProjectionTransport,
    FrameInequality,
    OperatorOrder,
    CanonicalDualBounds,
    CanonicalReconstruction,
    AlternativeDual,
    ResolutionOfIdentity,
    KroneckerLaws,
    TensorFrameInequality,
    ProjectionFactorization,
    TensorFrameIff,
    OperatorFactorization,
    UnitaryTransportBounds,
    TransportedOperator,
    RoiComposition,
    TensorRoi,
    RoiEnergyBounds,
    TensorDualBounds,
    TensorAlternativeDual,
    TensorReconstruction,
    DualComposition,
    DualLowerBound,
}

impl CheckId {
    pub const ALL: [CheckId; 22] = [
        CheckId::ProjectionTransport,
        CheckId::FrameInequality,
        CheckId::OperatorOrder,
        CheckId::CanonicalDualBounds,
        CheckId::CanonicalReconstruction,
        CheckId::AlternativeDual,
        CheckId::ResolutionOfIdentity,
        CheckId::KroneckerLaws,
        CheckId::TensorFrameInequality,
        CheckId::ProjectionFactorization,
        CheckId::TensorFrameIff,
        CheckId::OperatorFactorization,
        CheckId::UnitaryTransportBounds,
        CheckId::TransportedOperator,
        CheckId::RoiComposition,
        CheckId::TensorRoi,
        CheckId::RoiEnergyBounds,
        CheckId::TensorDualBounds,
        CheckId::TensorAlternativeDual,
        CheckId::TensorReconstruction,
        CheckId::DualComposition,
        CheckId::DualLowerBound,
    ];

    /// The external identifier used on the command line and in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::ProjectionTransport => "T2.1",
            CheckId::FrameInequality => "D2.3",
            CheckId::OperatorOrder => "N2.5",
            CheckId::CanonicalDualBounds => "T2.7",
            CheckId::CanonicalReconstruction => "N2.8",
            CheckId::AlternativeDual => "D2.9",
            CheckId::ResolutionOfIdentity => "D2.10",
            CheckId::KroneckerLaws => "T2.13",
            CheckId::TensorFrameInequality => "D3.1",
            CheckId::ProjectionFactorization => "N3.3",
            CheckId::TensorFrameIff => "T3.4",
            CheckId::OperatorFactorization => "T3.5",
            CheckId::UnitaryTransportBounds => "T3.7",
            CheckId::TransportedOperator => "T3.8",
            CheckId::RoiComposition => "P3.10",
            CheckId::TensorRoi => "N3.11",
            CheckId::RoiEnergyBounds => "T3.12",
            CheckId::TensorDualBounds => "T4.1",
            CheckId::TensorAlternativeDual => "D4.2",
            CheckId::TensorReconstruction => "N4.3",
            CheckId::DualComposition => "T4.4",
            CheckId::DualLowerBound => "T4.5",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckId::ProjectionTransport
            | CheckId::OperatorOrder
            | CheckId::ProjectionFactorization => 1e-10,
            CheckId::OperatorFactorization => FACTORIZATION_TOL,
            CheckId::KroneckerLaws | CheckId::TensorFrameIff | CheckId::TransportedOperator => 1e-9,
            _ => 1e-8,
        }
    }

    fn ordinal(self) -> u64 {
        CheckId::ALL
            .iter()
            .position(|&c| c == self)
            .expect("listed") as u64
    }

    fn routine(self) -> fn(&mut Trial) -> Result<Outcome> {
        match self {
            CheckId::ProjectionTransport => projection_transport,
            CheckId::FrameInequality => frame_inequality,
            CheckId::OperatorOrder => operator_order,
            CheckId::CanonicalDualBounds => canonical_dual_bounds,
            CheckId::CanonicalReconstruction => canonical_reconstruction,
            CheckId::AlternativeDual => alternative_dual,
            CheckId::ResolutionOfIdentity => resolution_of_identity,
            CheckId::KroneckerLaws => kronecker_laws,
            CheckId::TensorFrameInequality => tensor_frame_inequality,
            CheckId::ProjectionFactorization => projection_factorization,
            CheckId::TensorFrameIff => tensor_frame_iff,
            CheckId::OperatorFactorization => operator_factorization,
            CheckId::UnitaryTransportBounds => unitary_transport_bounds,
            CheckId::TransportedOperator => transported_operator,
            CheckId::RoiComposition => roi_composition,
            CheckId::TensorRoi => tensor_roi,
            CheckId::RoiEnergyBounds => roi_energy_bounds,
            CheckId::TensorDualBounds => tensor_dual_bounds,
            CheckId::TensorAlternativeDual => tensor_alternative_dual,
            CheckId::TensorReconstruction => tensor_reconstruction,
            CheckId::DualComposition => dual_composition,
            CheckId::DualLowerBound => dual_lower_bound,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check id {0:?}")]
pub struct UnknownCheck(pub String);

impl FromStr for CheckId {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCheck(s.to_string()))
    }
}

/// Parses `ALL` or a comma-separated list of ids; duplicates are dropped and
/// the result follows [`CheckId::ALL`] order.
pub fn parse_check_list(list: &str) -> std::result::Result<Vec<CheckId>, UnknownCheck> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut ids = list
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<std::result::Result<Vec<CheckId>, _>>()?;
    ids.sort();
    ids.dedup();
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub checks: Vec<CheckId>,
    pub trials: usize,
    pub seed: u64,
    /// Inclusive range for `dim H`.
    pub dims_h: (usize, usize),
    /// Inclusive range for `dim K`.
    pub dims_k: (usize, usize),
    pub tolerance_overrides: BTreeMap<CheckId, f64>,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self {
            checks: CheckId::ALL.to_vec(),
            trials: 25,
            seed: 1,
            dims_h: (2, 6),
            dims_k: (2, 6),
            tolerance_overrides: BTreeMap::new(),
        }
    }
}

impl CheckSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(FrameError::BadParameters("trials must be positive".into()));
        }
        for (name, (lo, hi)) in [("H", self.dims_h), ("K", self.dims_k)] {
            if lo < 2 || lo > hi || hi > MAX_FACTOR_DIM {
                return Err(FrameError::BadParameters(format!(
                    "dim {name} range must satisfy 2 <= low <= high <= {MAX_FACTOR_DIM}, got {lo}..{hi}"
                )));
            }
        }
        for (id, tol) in &self.tolerance_overrides {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(FrameError::BadParameters(format!(
                    "tolerance for {id} must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, id: CheckId) -> f64 {
        self.tolerance_overrides
            .get(&id)
            .copied()
            .unwrap_or_else(|| id.default_tolerance())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessInstance {
    pub label: String,
    pub system: FrameFileV1,
}

/// Everything needed to replay one failing trial: the stream coordinates
/// regenerate it bit for bit, and the systems allow standalone inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub stream: u64,
    pub dim_h: usize,
    pub dim_k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub notes: Vec<String>,
    pub instances: Vec<WitnessInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub theorem_id: String,
    pub trials: usize,
    pub passes: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.passes == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.theorem_id.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        crate::file::to_canonical_json(self)
    }
}

/// Result of one trial. `residual` is compared with the check tolerance;
/// `gates` records structural conditions (e.g. "the transported system is a
/// frame") that have no natural residual.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Outcome {
    residual: f64,
    gates: bool,
}

impl Outcome {
    fn residual(residual: f64) -> Self {
        Self {
            residual,
            gates: true,
        }
    }

    fn gated(residual: f64, gates: bool) -> Self {
        Self { residual, gates }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub passed: bool,
    pub residual: Option<f64>,
    pub witness: Witness,
}

/// Generation state for one trial.
struct Trial {
    rng: ChaCha20Rng,
    dim_h: usize,
    dim_k: usize,
    notes: Vec<String>,
    instances: Vec<WitnessInstance>,
}

impl Trial {
    fn frame(&mut self, label: &str, dim: usize) -> FusionSystem {
        let sys = random_frame(&RandomSystemParams::frame_defaults(dim), &mut self.rng);
        self.record(label, &sys);
        sys
    }

    fn record(&mut self, label: &str, sys: &FusionSystem) {
        self.instances.push(WitnessInstance {
            label: label.to_string(),
            system: FrameFileV1::from_system(sys),
        });
    }

    fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    fn frame_pair(&mut self) -> (FusionSystem, FusionSystem) {
        let (m, n) = (self.dim_h, self.dim_k);
        (self.frame("V", m), self.frame("W", n))
    }
}

pub fn stream_id(id: CheckId, trial: usize) -> u64 {
    (id.ordinal() << 32) | trial as u64
}

/// Runs a single trial; deterministic in `(spec.seed, id, trial)` and the
/// dimension ranges.
pub fn run_trial(spec: &CheckSpec, id: CheckId, trial: usize) -> TrialResult {
    let stream = stream_id(id, trial);
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);
    let dim_h = rng.random_range(spec.dims_h.0..=spec.dims_h.1);
    let dim_k = rng.random_range(spec.dims_k.0..=spec.dims_k.1);
    let mut state = Trial {
        rng,
        dim_h,
        dim_k,
        notes: Vec::new(),
        instances: Vec::new(),
    };
    let tol = spec.tolerance(id);
    let outcome = (id.routine())(&mut state);
    let (passed, residual, error) = match outcome {
        Ok(o) => (
            o.gates && o.residual.is_finite() && o.residual <= tol,
            Some(o.residual),
            None,
        ),
        Err(e) => (false, None, Some(e.to_string())),
    };
    TrialResult {
        trial,
        passed,
        residual: residual.filter(|r| r.is_finite()),
        witness: Witness {
            trial,
            stream,
            dim_h,
            dim_k,
            residual: residual.filter(|r| r.is_finite()),
            error,
            notes: state.notes,
            instances: state.instances,
        },
    }
}

fn run_check(spec: &CheckSpec, id: CheckId) -> CheckRecord {
    let results: Vec<TrialResult> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, id, t))
        .collect();
    let passes = results.iter().filter(|r| r.passed).count();
    let worst_residual = results
        .iter()
        .filter_map(|r| r.residual)
        .fold(0.0, f64::max);
    let witness = results.into_iter().find(|r| !r.passed).map(|r| r.witness);
    CheckRecord {
        theorem_id: id.as_str().to_string(),
        trials: spec.trials,
        passes,
        worst_residual,
        tolerance: spec.tolerance(id),
        witness,
    }
}

/// Runs every selected check. Trials execute on the current rayon pool;
/// records are merged in trial order so the report does not depend on
/// scheduling.
pub fn run_checks(spec: &CheckSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let checks = spec.checks.iter().map(|&id| run_check(spec, id)).collect();
    Ok(VerificationReport {
        version: REPORT_VERSION.to_string(),
        seed: spec.seed,
        checks,
    })
}

fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

/// `Σ w_i² ‖P_i f‖²` with precomputed projections.
fn energy(projections: &[OperatorMatrix], weights: &[f64], f: &VectorH) -> f64 {
    projections
        .iter()
        .zip(weights)
        .map(|(p, w)| w * w * (p * f).norm_squared())
        .sum()
}

/// How far `value` falls outside `[lo, hi]`.
fn outside(value: f64, lo: f64, hi: f64) -> f64 {
    (lo - value).max(value - hi).max(0.0)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn sorted_products(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn random_pure_tensor(t: &mut Trial) -> (VectorH, VectorH) {
    let f = random_unit_vector(t.dim_h, &mut t.rng);
    let g = random_unit_vector(t.dim_k, &mut t.rng);
    (f, g)
}

/// `P_{UV} U = U P_V` for unitary `U`, and `P_V Tᴴ = P_V Tᴴ P_{TV}` for
/// invertible `T`.
fn projection_transport(t: &mut Trial) -> Result<Outcome> {
    let n = t.dim_h;
    let k = t.rng.random_range(1..=n);
    let v = random_subspace(n, k, &mut t.rng);
    let u = random_unitary(n, &mut t.rng);
    let uv = transport_subspace(&u, &v)?;
    let unitary = (uv.projection() * &u - &u * v.projection()).norm();

    let g = random_invertible(n, 10.0, &mut t.rng);
    let gv = transport_subspace(&g, &v)?;
    let lhs = v.projection() * g.adjoint();
    let general = (&lhs - &lhs * gv.projection()).norm() / operator_norm(&g);
    Ok(Outcome::residual(unitary.max(general)))
}

/// `A ≤ Σ v_i² ‖P_i f‖² ≤ B` on random unit vectors, with equality at the
/// extremal eigenvectors.
fn frame_inequality(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let s = frame_operator(&sys);
    let spectrum = hermitian_eig(&s)?;
    let bounds = frame_bounds(&sys);
    let projections = sys.projections();
    let weights = sys.weights();

    let mut worst_violation: f64 = 0.0;
    for _ in 0..ENERGY_SAMPLES {
        let f = random_unit_vector(t.dim_h, &mut t.rng);
        let e = energy(&projections, &weights, &f);
        worst_violation = worst_violation.max(outside(e, bounds.lower, bounds.upper));
    }
    let n = t.dim_h;
    let low_vec = spectrum.eigenvectors.column(0).into_owned();
    let high_vec = spectrum.eigenvectors.column(n - 1).into_owned();
    let attained = (energy(&projections, &weights, &low_vec) - bounds.lower)
        .abs()
        .max((energy(&projections, &weights, &high_vec) - bounds.upper).abs());
    if worst_violation > 1e-9 {
        t.note(format!("energy left [A, B] by {worst_violation:e}"));
    }
    Ok(Outcome::gated(
        worst_violation.max(attained),
        bounds.is_frame && worst_violation <= 1e-9,
    ))
}

/// `S` is Hermitian, equals `T_V* T_V`, and `B⁻¹ ≤ S⁻¹ ≤ A⁻¹`.
fn operator_order(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let n = t.dim_h;
    let s = frame_operator(&sys);
    let asym = hermitian_asymmetry(&s) / s.norm();

    let mut composed = OperatorMatrix::zeros(n, n);
    for k in 0..n {
        let e = identity(n).column(k).into_owned();
        let image = synthesis(&sys, &analysis(&sys, &e)?)?;
        composed.set_column(k, &image);
    }
    let composition = relative_distance(&composed, &s);
    let order = inverse_order_violation(&sys)?;
    let lowest = hermitian_eig(&s)?.min();
    Ok(Outcome::gated(
        asym.max(composition).max(order),
        lowest >= -1e-12 * s.norm(),
    ))
}

/// Canonical dual bounds lie in `[A/κ, B·κ]` with `κ = ‖S‖²‖S⁻¹‖²`.
fn canonical_dual_bounds(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let tol = Tolerances::default();
    let s = frame_operator(&sys);
    let s_inv = inverse_frame_operator(&sys, &tol)?;
    let bounds = operator_bounds(&s, &tol);
    let kappa = dual_distortion(&s, &s_inv);
    let dual = frame_bounds(&canonical_dual(&sys)?);
    let violation = outside(dual.lower, bounds.lower / kappa, f64::INFINITY).max(outside(
        dual.upper,
        0.0,
        bounds.upper * kappa,
    ));
    Ok(Outcome::gated(violation, dual.is_frame))
}

/// `Σ v_i² P_{S⁻¹V_i} S⁻¹ P_{V_i} = I`, also applied to a random vector.
fn canonical_reconstruction(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let dual = canonical_dual(&sys)?;
    let op_residual = identity_residual(&dual_synthesis_operator(&sys, &dual)?);
    let f = random_vector(t.dim_h, &mut t.rng);
    let back = reconstruct_canonical(&sys, &f)?;
    let vec_residual = (back - &f).norm() / f.norm();
    Ok(Outcome::residual(op_residual.max(vec_residual)))
}

/// The canonical dual, and an enlarged non-canonical dual, satisfy the
/// alternative-dual identity.
fn alternative_dual(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let dual = canonical_dual(&sys)?;
    let enlarged = enlarged_dual(&dual, &mut t.rng)?;
    t.record("enlarged dual", &enlarged);
    let a = is_alternative_dual(&sys, &dual)?.residual;
    let b = is_alternative_dual(&sys, &enlarged)?.residual;
    Ok(Outcome::residual(a.max(b)))
}

/// `{v_i² S⁻¹ P_{V_i}}` and the coordinate projections both resolve `I`.
fn resolution_of_identity(t: &mut Trial) -> Result<Outcome> {
    let sys = t.frame("V", t.dim_h);
    let s_inv = inverse_frame_operator(&sys, &Tolerances::default())?;
    let family: Vec<_> = sys
        .members()
        .iter()
        .map(|m| &s_inv * m.projection() * c(m.weight().powi(2)))
        .collect();
    let axes: Vec<_> = (0..t.dim_h)
        .map(|k| SubspaceBasis::standard_axis(t.dim_h, k).projection())
        .collect();
    let a = check_resolution_of_identity(&family)?.residual;
    let b = check_resolution_of_identity(&axes)?.residual;
    Ok(Outcome::residual(a.max(b)))
}

/// Mixed product, adjoint, inverse and norm laws for `kron`, plus the action
/// on pure tensors and the inner-product factorisation.
fn kronecker_laws(t: &mut Trial) -> Result<Outcome> {
    let (m, n) = (t.dim_h, t.dim_k);
    let q = gaussian_matrix(m, m, &mut t.rng);
    let q2 = gaussian_matrix(m, m, &mut t.rng);
    let r = gaussian_matrix(n, n, &mut t.rng);
    let r2 = gaussian_matrix(n, n, &mut t.rng);

    let mixed = relative_distance(
        &(kron(&q, &r) * kron(&q2, &r2)),
        &kron(&(&q * &q2), &(&r * &r2)),
    );
    let adjoint = relative_distance(&kron(&q, &r).adjoint(), &kron(&q.adjoint(), &r.adjoint()));

    let cond_tol = Tolerances::default().cond;
    let qr = kron(&q, &r);
    let inverse_rel = relative_distance(
        &invert(&qr, cond_tol)?,
        &kron(&invert(&q, cond_tol)?, &invert(&r, cond_tol)?),
    );
    // Inversion error grows with conditioning, so normalise by it.
    let cond = operator_norm(&qr) * operator_norm(&invert(&qr, cond_tol)?);
    let inverse = inverse_rel / cond.max(1.0);

    let norm = relative_gap(operator_norm(&qr), operator_norm(&q) * operator_norm(&r));

    let (f, g) = (random_vector(m, &mut t.rng), random_vector(n, &mut t.rng));
    let (f2, g2) = (random_vector(m, &mut t.rng), random_vector(n, &mut t.rng));
    let fg = tensor_vector(&f, &g);
    let action = (&qr * &fg - tensor_vector(&(&q * &f), &(&r * &g))).norm() / (&qr * &fg).norm();
    let inner = (tensor_vector(&f2, &g2).dotc(&fg) - f2.dotc(&f) * g2.dotc(&g)).norm()
        / (f.norm() * g.norm() * f2.norm() * g2.norm());
    let vec_norm = relative_gap(fg.norm(), f.norm() * g.norm());

    Ok(Outcome::residual(
        [mixed, adjoint, inverse, norm, action, inner, vec_norm]
            .into_iter()
            .fold(0.0, f64::max),
    ))
}

/// `AC ≤ energy(f ⊗ g) ≤ BD` for unit `f`, `g`; the energy also factors as
/// the product of the factor energies.
fn tensor_frame_inequality(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let (vb, wb) = (frame_bounds(&v), frame_bounds(&w));
    let (lo, hi) = (vb.lower * wb.lower, vb.upper * wb.upper);
    let (pv, pw, pt) = (v.projections(), w.projections(), ts.base().projections());
    let (wv, ww, wt) = (v.weights(), w.weights(), ts.base().weights());

    let mut violation: f64 = 0.0;
    let mut factor_gap: f64 = 0.0;
    for _ in 0..ENERGY_SAMPLES {
        let (f, g) = random_pure_tensor(t);
        let e = energy(&pt, &wt, &tensor_vector(&f, &g));
        violation = violation.max(outside(e, lo, hi));
        factor_gap = factor_gap.max(relative_gap(e, energy(&pv, &wv, &f) * energy(&pw, &ww, &g)));
    }
    Ok(Outcome::residual(violation.max(factor_gap)))
}

fn projection_factorization(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    Ok(Outcome::residual(projection_factorization_residual(
        &tensor_system(&v, &w),
    )))
}

/// Frame pairs: tensor bounds are the products of factor bounds and the
/// spectrum is the product multiset. Non-frame factors on either side give
/// a non-frame tensor system.
fn tensor_frame_iff(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let tb = tensor_frame_bounds(&ts);
    let (vb, wb) = (frame_bounds(&v), frame_bounds(&w));
    let lower = relative_gap(tb.lower, vb.lower * wb.lower);
    let upper = relative_gap(tb.upper, vb.upper * wb.upper);

    let spectrum = hermitian_eig(&frame_operator(ts.base()))?.eigenvalues;
    let products = sorted_products(
        &hermitian_eig(&frame_operator(&v))?.eigenvalues,
        &hermitian_eig(&frame_operator(&w))?.eigenvalues,
    );
    let spectral = spectrum
        .iter()
        .zip(&products)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / tb.upper;

    let vn = random_non_frame(t.dim_h, t.dim_h + 1, &mut t.rng)?;
    let wn = random_non_frame(t.dim_k, t.dim_k + 1, &mut t.rng)?;
    t.record("V (non-frame)", &vn);
    t.record("W (non-frame)", &wn);
    let left_fails = !tensor_frame_bounds(&tensor_system(&vn, &w)).is_frame;
    let right_fails = !tensor_frame_bounds(&tensor_system(&v, &wn)).is_frame;
    if !(left_fails && right_fails) {
        t.note("a non-frame factor produced a tensor frame".into());
    }
    Ok(Outcome::gated(
        lower.max(upper).max(spectral),
        tb.is_frame && left_fails && right_fails,
    ))
}

/// `S_{V⊗W} = S_V ⊗ S_W`, and the same for inverses. The residual is the
/// forward identity; the inverse identity is a gate at its own tolerance.
fn operator_factorization(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let check = check_operator_factorization(&tensor_system(&v, &w));
    let inverse = check.inverse.unwrap_or(f64::INFINITY);
    if inverse > INVERSE_FACTORIZATION_TOL {
        t.note(format!("inverse factorization residual {inverse:e}"));
    }
    Ok(Outcome::gated(
        check.forward,
        inverse <= INVERSE_FACTORIZATION_TOL,
    ))
}

fn random_unitary_pair(t: &mut Trial) -> (OperatorMatrix, OperatorMatrix) {
    let u1 = random_unitary(t.dim_h, &mut t.rng);
    let u2 = random_unitary(t.dim_k, &mut t.rng);
    (u1, u2)
}

/// Bounds of the unitarily transported system obey the transport sandwich.
fn unitary_transport_bounds(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let (u1, u2) = random_unitary_pair(t);
    let moved = transport_tensor_system(&u1, &u2, &ts)?;
    let sandwich = transport_sandwich(&u1, &u2, &ts, &moved, INEQUALITY_SLACK)?;
    let violation = outside(sandwich.bounds.lower, sandwich.floor, f64::INFINITY).max(outside(
        sandwich.bounds.upper,
        0.0,
        sandwich.ceiling,
    ));
    Ok(Outcome::gated(violation, sandwich.bounds.is_frame))
}

/// The transported frame operator is `T S T⁻¹` with `T = U1 ⊗ U2`, and the
/// optimal bounds are unchanged.
fn transported_operator(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let (u1, u2) = random_unitary_pair(t);
    let moved = transport_tensor_system(&u1, &u2, &ts)?;
    let big = kron(&u1, &u2);
    let expected = &big * frame_operator(ts.base()) * invert(&big, Tolerances::default().cond)?;
    let conj = relative_distance(&frame_operator(moved.base()), &expected);
    let (before, after) = (tensor_frame_bounds(&ts), tensor_frame_bounds(&moved));
    let preserved =
        relative_gap(after.lower, before.lower).max(relative_gap(after.upper, before.upper));
    Ok(Outcome::residual(conj.max(preserved)))
}

/// Factor resolutions `{v_i² P_{S⁻¹V_i} S⁻¹ P_{V_i}}` and `{w_j² S_W⁻¹ P_{W_j}}`
/// compose through `kron` into a resolution on `H ⊗ K`.
fn roi_composition(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let tol = Tolerances::default();
    let v_inv = inverse_frame_operator(&v, &tol)?;
    let w_inv = inverse_frame_operator(&w, &tol)?;
    let v_dual = canonical_dual(&v)?;
    let left: Vec<_> = v
        .members()
        .iter()
        .zip(v_dual.members())
        .map(|(m, d)| d.projection() * &v_inv * m.projection() * c(m.weight().powi(2)))
        .collect();
    let right: Vec<_> = w
        .members()
        .iter()
        .map(|m| &w_inv * m.projection() * c(m.weight().powi(2)))
        .collect();
    let factors = check_resolution_of_identity(&left)?
        .residual
        .max(check_resolution_of_identity(&right)?.residual);
    let composed = check_resolution_of_identity(&kron_family(&left, &right))?.residual;
    Ok(Outcome::residual(factors.max(composed)))
}

/// `{v_i² w_j² S_{V⊗W}⁻¹ P_{V_i⊗W_j}}` resolves `I` on `H ⊗ K`.
fn tensor_roi(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let s_inv = inverse_frame_operator(ts.base(), &Tolerances::default())?;
    let family: Vec<_> = ts
        .base()
        .members()
        .iter()
        .map(|m| &s_inv * m.projection() * c(m.weight().powi(2)))
        .collect();
    Ok(Outcome::residual(
        check_resolution_of_identity(&family)?.residual,
    ))
}

/// The family `{T_i ⊗ U_j}` sums to `I`, equals `P_{V_i⊗W_j} S_{V⊗W}⁻¹`
/// termwise, and its energy on unit pure tensors obeys the two-sided bound.
fn roi_energy_bounds(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let roi = roi_tensor(&v, &w)?;
    let sum = roi.identity_check().residual;

    let s_inv = inverse_frame_operator(ts.base(), &Tolerances::default())?;
    let termwise = roi
        .ops
        .iter()
        .zip(ts.base().members())
        .map(|(op, m)| relative_distance(op, &(m.projection() * &s_inv)))
        .fold(0.0, f64::max);

    let (lo, hi) = roi.energy_bounds();
    let mut violation: f64 = 0.0;
    for _ in 0..ENERGY_SAMPLES {
        let (f, g) = random_pure_tensor(t);
        violation = violation.max(outside(roi.energy(&tensor_vector(&f, &g)), lo, hi));
    }
    Ok(Outcome::residual(sum.max(termwise).max(violation)))
}

/// The canonical dual on `H ⊗ K` has bounds in `[AC/κ, BD·κ]`,
/// `κ = ‖S_{V⊗W}‖²‖S_{V⊗W}⁻¹‖²`.
fn tensor_dual_bounds(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let s = frame_operator(ts.base());
    let s_inv = inverse_frame_operator(ts.base(), &Tolerances::default())?;
    let kappa = dual_distortion(&s, &s_inv);
    let (vb, wb) = (frame_bounds(&v), frame_bounds(&w));
    let dual = tensor_frame_bounds(&canonical_dual_tensor(&ts)?);
    let violation = outside(dual.lower, vb.lower * wb.lower / kappa, f64::INFINITY).max(outside(
        dual.upper,
        0.0,
        vb.upper * wb.upper * kappa,
    ));
    Ok(Outcome::gated(violation, dual.is_frame))
}

/// A collapsed system with every member on one line, used as a candidate
/// that must fail the dual identity.
fn collapsed(ts: &TensorSystem) -> Result<FusionSystem> {
    let line = ts.base().members()[0]
        .basis()
        .columns()
        .column(0)
        .into_owned();
    let basis = SubspaceBasis::from_orthonormal(OperatorMatrix::from_columns(&[line]))?;
    FusionSystem::from_pairs(
        ts.base()
            .members()
            .iter()
            .map(|m| (basis.clone(), m.weight()))
            .collect(),
    )
}

/// The canonical dual tensor passes the dual identity on `H ⊗ K`; a
/// collapsed candidate fails it.
fn tensor_alternative_dual(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let dual = canonical_dual_tensor(&ts)?;
    let residual = is_alternative_dual_tensor(&ts, &dual)?.residual;
    let bad = collapsed(&ts)?;
    let rejected = !is_alternative_dual(ts.base(), &bad)?.holds;
    Ok(Outcome::gated(residual, rejected))
}

/// Reconstruction on `H ⊗ K` through the canonical dual, which must coincide
/// with the canonical dual computed directly on the tensor system.
fn tensor_reconstruction(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let dual = canonical_dual_tensor(&ts)?;
    let residual = identity_residual(&dual_synthesis_operator(ts.base(), dual.base())?);
    let distance = max_member_distance(dual.base(), &canonical_dual(ts.base())?)?;
    if distance > 1e-9 {
        t.note(format!("dual routes differ by {distance:e}"));
    }
    Ok(Outcome::gated(residual, distance <= 1e-9))
}

fn factor_duals(
    t: &mut Trial,
    v: &FusionSystem,
    w: &FusionSystem,
) -> Result<[(FusionSystem, FusionSystem); 2]> {
    let (vd, wd) = (canonical_dual(v)?, canonical_dual(w)?);
    let ve = enlarged_dual(&vd, &mut t.rng)?;
    let we = enlarged_dual(&wd, &mut t.rng)?;
    t.record("V' (enlarged)", &ve);
    t.record("W' (enlarged)", &we);
    Ok([(vd, wd), (ve, we)])
}

/// Alternative duals on each factor tensor into an alternative dual on
/// `H ⊗ K`, for canonical and enlarged factor duals.
fn dual_composition(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let mut worst: f64 = 0.0;
    for (vd, wd) in factor_duals(t, &v, &w)? {
        worst = worst
            .max(is_alternative_dual(&v, &vd)?.residual)
            .max(is_alternative_dual(&w, &wd)?.residual)
            .max(is_alternative_dual_tensor(&ts, &tensor_system(&vd, &wd))?.residual);
    }
    Ok(Outcome::residual(worst))
}

/// Every alternative dual on `H ⊗ K` has lower bound at least
/// `1 / (D₁ D₂ ‖S_{V⊗W}⁻¹‖²)`.
fn dual_lower_bound(t: &mut Trial) -> Result<Outcome> {
    let (v, w) = t.frame_pair();
    let ts = tensor_system(&v, &w);
    let mut violation: f64 = 0.0;
    let mut frames = true;
    for (vd, wd) in factor_duals(t, &v, &w)? {
        let check = alt_dual_frame_check(&ts, &tensor_system(&vd, &wd))?;
        violation = violation.max(outside(
            check.bounds.lower,
            check.guaranteed_lower,
            f64::INFINITY,
        ));
        frames &= check.bounds.is_frame;
    }
    Ok(Outcome::gated(violation, frames))
}
