use std::fs;
use std::path::Path;

use fusion_core::file::{save_system, to_canonical_json, Entry, FrameFileV1};
use fusion_core::fusion::{
    canonical_dual, frame_bounds, frame_operator, inverse_frame_operator, is_alternative_dual,
    reconstruct_canonical, reconstruct_with_dual,
};
use fusion_core::linalg::{invert, operator_norm};
use fusion_core::random::{random_fusion_system, RandomSystemParams};
use fusion_core::tensor::{
    canonical_dual_tensor, check_operator_factorization, is_alternative_dual_tensor,
    tensor_frame_bounds, tensor_system, FACTORIZATION_TOL, INVERSE_FACTORIZATION_TOL,
};
use fusion_core::verify::{parse_check_list, run_checks};
use fusion_core::{CheckSpec, FrameBounds, FusionSystem, Tolerances, VectorH};
use serde::Serialize;

use crate::error::CliError;
use crate::{CheckArgs, DualArgs, GenerateArgs, ReconstructArgs, TensorArgs, VerifyArgs};

/// Largest ambient dimension `tensor` will build.
pub const MAX_TENSOR_DIM: usize = 4096;
/// Relative tolerance for tensor bounds matching the factor products.
const PRODUCT_BOUND_TOL: f64 = 1e-9;
const THREADS_VAR: &str = "FUSION_FRAME_THREADS";

fn read_system(path: &Path) -> Result<FusionSystem, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    FrameFileV1::parse(&text)
        .and_then(|f| f.to_system())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pair(b: &FrameBounds) -> [f64; 2] {
    [b.lower, b.upper]
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let params = RandomSystemParams {
        dim: args.dim,
        n_subspaces: args.subspaces,
        max_subdim: args.max_subdim,
        weight_range: args.weights,
    };
    let sys =
        random_fusion_system(&params, args.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(args.out.as_deref(), &save_system(&sys))
}

#[derive(Serialize)]
struct CheckReport {
    format_version: &'static str,
    ambient_dim: usize,
    subspaces: usize,
    is_frame: bool,
    is_tight: bool,
    lower: f64,
    upper: f64,
    norm_s: f64,
    norm_s_inv: Option<f64>,
}

pub fn check(args: &CheckArgs) -> Result<(), CliError> {
    let sys = read_system(&args.input)?;
    let tol = Tolerances::default();
    let s = frame_operator(&sys);
    let bounds = frame_bounds(&sys);
    let norm_s_inv = if bounds.is_frame {
        invert(&s, tol.cond).ok().map(|inv| operator_norm(&inv))
    } else {
        None
    };
    let report = CheckReport {
        format_version: "fusion-frame-check/1",
        ambient_dim: sys.ambient_dim(),
        subspaces: sys.len(),
        is_frame: bounds.is_frame,
        is_tight: bounds.is_tight,
        lower: bounds.lower,
        upper: bounds.upper,
        norm_s: operator_norm(&s),
        norm_s_inv,
    };
    if args.json {
        print!("{}", to_canonical_json(&report));
    } else {
        println!("ambient_dim: {}", report.ambient_dim);
        println!("subspaces:   {}", report.subspaces);
        println!("is_frame:    {}", report.is_frame);
        println!("is_tight:    {}", report.is_tight);
        println!("lower (A):   {}", report.lower);
        println!("upper (B):   {}", report.upper);
        println!("‖S‖:         {}", report.norm_s);
        match report.norm_s_inv {
            Some(n) => println!("‖S⁻¹‖:       {n}"),
            None => println!("‖S⁻¹‖:       undefined (S is not invertible)"),
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TensorReport {
    format_version: &'static str,
    ambient_dim: usize,
    members: usize,
    left_bounds: [f64; 2],
    right_bounds: [f64; 2],
    tensor_bounds: [f64; 2],
    product_bounds: [f64; 2],
    /// Largest gap between tensor and product bounds, relative to the
    /// product upper bound.
    product_bound_residual: f64,
    product_bound_holds: bool,
    is_frame: bool,
    factorization_residual: f64,
    inverse_factorization_residual: Option<f64>,
    factorization_holds: bool,
}

pub fn tensor(args: &TensorArgs) -> Result<(), CliError> {
    let left = read_system(&args.left)?;
    let right = read_system(&args.right)?;
    let dim = left.ambient_dim().saturating_mul(right.ambient_dim());
    if dim > MAX_TENSOR_DIM {
        return Err(CliError::Usage(format!(
            "tensor dimension {dim} exceeds the limit of {MAX_TENSOR_DIM}"
        )));
    }
    let ts = tensor_system(&left, &right);
    let (lb, rb, tb) = (
        frame_bounds(&left),
        frame_bounds(&right),
        tensor_frame_bounds(&ts),
    );
    let product = [lb.lower * rb.lower, lb.upper * rb.upper];
    let residual = (tb.lower - product[0])
        .abs()
        .max((tb.upper - product[1]).abs())
        / product[1];
    let fact = check_operator_factorization(&ts);
    let report = TensorReport {
        format_version: "fusion-frame-tensor/1",
        ambient_dim: dim,
        members: ts.len(),
        left_bounds: pair(&lb),
        right_bounds: pair(&rb),
        tensor_bounds: pair(&tb),
        product_bounds: product,
        product_bound_residual: residual,
        product_bound_holds: residual <= PRODUCT_BOUND_TOL,
        is_frame: tb.is_frame,
        factorization_residual: fact.forward,
        inverse_factorization_residual: fact.inverse,
        factorization_holds: fact.forward <= FACTORIZATION_TOL
            && fact.inverse.is_none_or(|r| r <= INVERSE_FACTORIZATION_TOL),
    };
    let report = to_canonical_json(&report);
    let file = save_system(ts.base());
    match &args.out {
        Some(path) => {
            write_file(path, &file)?;
            print!("{report}");
        }
        None => {
            print!("{file}");
            eprint!("{report}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DualReport {
    format_version: &'static str,
    mode: &'static str,
    members: usize,
    weights: Vec<f64>,
    subspace_dims: Vec<usize>,
    bounds: [f64; 2],
    alternative_dual_residual: f64,
    is_alternative_dual: bool,
}

pub fn dual(args: &DualArgs) -> Result<(), CliError> {
    let sys = read_system(&args.input)?;
    let (dual, check, mode) = match &args.right {
        None => {
            let dual = canonical_dual(&sys)?;
            let check = is_alternative_dual(&sys, &dual)?;
            (dual, check, "single")
        }
        Some(right) => {
            let right = read_system(right)?;
            let dim = sys.ambient_dim().saturating_mul(right.ambient_dim());
            if dim > MAX_TENSOR_DIM {
                return Err(CliError::Usage(format!(
                    "tensor dimension {dim} exceeds the limit of {MAX_TENSOR_DIM}"
                )));
            }
            let ts = tensor_system(&sys, &right);
            let dual = canonical_dual_tensor(&ts)?;
            let check = is_alternative_dual_tensor(&ts, &dual)?;
            (dual.base().clone(), check, "tensor")
        }
    };
    let report = DualReport {
        format_version: "fusion-frame-dual/1",
        mode,
        members: dual.len(),
        weights: dual.weights(),
        subspace_dims: dual.members().iter().map(|m| m.basis().sub_dim()).collect(),
        bounds: pair(&frame_bounds(&dual)),
        alternative_dual_residual: check.residual,
        is_alternative_dual: check.holds,
    };
    let report = to_canonical_json(&report);
    let file = save_system(&dual);
    if let Some(path) = &args.out {
        write_file(path, &file)?;
    }
    if args.emit_basis {
        print!("{file}");
        eprint!("{report}");
    } else {
        print!("{report}");
    }
    Ok(())
}

/// `LO-HI` or `LO..HI`.
fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad dimension range {s:?}, expected LO-HI"));
    let (lo, hi) = s
        .split_once("..")
        .or_else(|| s.split_once('-'))
        .unwrap_or((s, s));
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn parse_dims(s: &str) -> Result<((usize, usize), (usize, usize)), CliError> {
    match s.split_once(',') {
        Some((h, k)) => Ok((parse_range(h)?, parse_range(k)?)),
        None => {
            let r = parse_range(s)?;
            Ok((r, r))
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {raw:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let checks = parse_check_list(&args.theorems).map_err(|e| CliError::Usage(e.to_string()))?;
    let (dims_h, dims_k) = parse_dims(&args.dims)?;
    let spec = CheckSpec {
        checks,
        trials: args.trials,
        seed: args.seed,
        dims_h,
        dims_k,
        ..CheckSpec::default()
    };
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let pool = thread_pool()?;
    let report = pool
        .install(|| run_checks(&spec))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(args.out.as_deref(), &report.to_json())?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(
            report.failing_ids().into_iter().map(String::from).collect(),
        ))
    }
}

fn parse_vector(text: &str) -> Result<VectorH, CliError> {
    let entries: Vec<Entry> = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("--vector must be a JSON array: {e}")))?;
    let values = entries
        .iter()
        .map(|e| e.to_scalar().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorH::from_vec(values))
}

#[derive(Serialize)]
struct ReconstructReport {
    format_version: &'static str,
    dual: &'static str,
    reconstructed: Vec<[f64; 2]>,
    error: f64,
    /// `relative` for non-zero inputs; `absolute` for the zero vector.
    error_kind: &'static str,
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<(), CliError> {
    let sys = read_system(&args.input)?;
    let f = parse_vector(&args.vector)?;
    if f.len() != sys.ambient_dim() {
        return Err(CliError::Mismatch(format!(
            "vector has length {}, system lives in dimension {}",
            f.len(),
            sys.ambient_dim()
        )));
    }
    inverse_frame_operator(&sys, &Tolerances::default())?;
    let (back, source) = match &args.dual {
        None => (reconstruct_canonical(&sys, &f)?, "canonical"),
        Some(path) => {
            let cand = read_system(path)?;
            (reconstruct_with_dual(&sys, &cand, &f)?, "file")
        }
    };
    let diff = (&back - &f).norm();
    let norm = f.norm();
    let (error, error_kind) = if norm > 0.0 {
        (diff / norm, "relative")
    } else {
        (diff, "absolute")
    };
    let report = ReconstructReport {
        format_version: "fusion-frame-reconstruct/1",
        dual: source,
        reconstructed: back.iter().map(|z| [z.re, z.im]).collect(),
        error,
        error_kind,
    };
    print!("{}", to_canonical_json(&report));
    Ok(())
}
