//! Small hand-checkable systems used by tests, examples and the CLI.

use crate::fusion::FusionSystem;
use crate::linalg::{real_matrix, SubspaceBasis};

/// The standard basis lines of `C^dim`, unit weights. `S = I`.
pub fn standard_parseval(dim: usize) -> FusionSystem {
    FusionSystem::from_pairs(
        (0..dim)
            .map(|k| (SubspaceBasis::standard_axis(dim, k), 1.0))
            .collect(),
    )
    .expect("standard axes form a valid system")
}

/// `span{e1}` and `span{(e1 + e2)/√2}` in `C²`, unit weights.
///
/// `S = [[1.5, 0.5], [0.5, 0.5]]`, `S⁻¹ = [[1, −1], [−1, 3]]`, optimal
/// bounds `1 ∓ 1/√2`.
pub fn two_lines() -> FusionSystem {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let diagonal = SubspaceBasis::from_orthonormal(real_matrix(2, 1, &[r, r]))
        .expect("unit diagonal is orthonormal");
    FusionSystem::from_pairs(vec![
        (SubspaceBasis::standard_axis(2, 0), 1.0),
        (diagonal, 1.0),
    ])
    .expect("valid system")
}

/// Two copies of `span{e1}` in `C²`: `e2` is annihilated, so not a frame.
pub fn repeated_axis() -> FusionSystem {
    let e1 = SubspaceBasis::standard_axis(2, 0);
    FusionSystem::from_pairs(vec![(e1.clone(), 1.0), (e1, 1.0)]).expect("valid system")
}
