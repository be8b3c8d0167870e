//! Numerical tolerances shared by the library and every test suite.
//!
//! Single source of truth: tests must reference these constants instead of
//! re-declaring magic numbers.

/// Relative residual allowed for a Hermitian positive-definite solve.
pub const HPD_RESIDUAL: f64 = 1e-10;

/// Per-entry residual allowed for `invert_hpd(M) * M` against the identity.
pub const INVERSE_RESIDUAL: f64 = 1e-9;

/// Max per-entry defect |M - M†| for inputs declared Hermitian.
pub const HERMITIAN_DEFECT: f64 = 1e-12;

/// Per-entry slack for the diagonal-pair identities (A† = AB and friends).
pub const AB_IDENTITY: f64 = 1e-15;

/// Imaginary residue dropped when realizing the real autocorrelation matrix.
pub const REALIZE_RESIDUE: f64 = 1e-12;

/// Imaginary residue allowed in the algebraic form of the real extraction.
pub const EXTRACT_RESIDUE: f64 = 1e-14;

/// Output equivalence between the real-only and widely linear equalizers.
pub const EQUIV_OUTPUT: f64 = 1e-9;

/// Equivalence between post- and pre-processed real receiver inputs.
pub const EQUIV_PREPROCESS: f64 = 1e-12;

/// Agreement between the two average-MMSE evaluation routes.
pub const MMSE_DUAL_PATH: f64 = 1e-12;

/// Slack for the average-MMSE decomposition identity (LE minus gap = ROE).
pub const MMSE_DECOMP: f64 = 1e-9;

/// Soft values closer than this to the slicer threshold are treated as ties.
pub const SLICER_GUARD: f64 = 1e-9;

/// 1-norm condition estimate above which direct inversion is refused.
pub const COND_LIMIT: f64 = 1e12;
