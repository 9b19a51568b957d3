use crate::linalg::TOL_COND;

/// Numerical thresholds shared by the frame and tensor modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `is_frame` requires `λ_min(S) > frame · ‖S‖`.
    pub frame: f64,
    /// `is_tight` requires `(B − A) ≤ tight · B`.
    pub tight: f64,
    /// Normalised residual accepted for alternative-dual identities.
    pub dual: f64,
    /// Normalised residual accepted for resolutions of the identity.
    pub roi: f64,
    /// Relative singular-value floor used when inverting.
    pub cond: f64,
    /// Distance from a subspace accepted for coefficient membership.
    pub membership: f64,
    /// `‖TᴴT − I‖_F` accepted as unitary.
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            frame: 1e-10,
            tight: 1e-9,
            dual: 1e-8,
            roi: 1e-8,
            cond: TOL_COND,
            membership: 1e-10,
            unitary: 1e-10,
        }
    }
}
