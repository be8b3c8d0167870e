//! Block MMSE equalizers under known CSI: the classical linear equalizer,
//! the widely linear equalizer, and the real-only equalizer, plus
//! hard-decision slicing.

use crate::error::{Error, Result};
use crate::linalg::{
    cond_estimate, invert_hpd, lu_invert, solve_hpd, CMat, CVec, RVec,
};
use crate::tol;
use crate::transforms::{AbPair, RealizedChannel};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualizerKind {
    Le,
    Wle,
    Roe,
}

impl std::fmt::Display for EqualizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EqualizerKind::Le => write!(f, "LE"),
            EqualizerKind::Wle => write!(f, "WLE"),
            EqualizerKind::Roe => write!(f, "ROE"),
        }
    }
}

/// Soft equalizer output: real for the real-only equalizer, complex for the
/// other two.
#[derive(Debug, Clone)]
pub enum SoftOutput {
    Real(RVec),
    Complex(CVec),
}

#[derive(Debug, Clone)]
pub struct EqualizerResult {
    pub soft: SoftOutput,
    pub decisions: RVec,
    pub kind: EqualizerKind,
}

/// Binary hard decision; an exact zero resolves to +1 by convention.
pub fn hard_decision(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Informative component of a complex soft value: real part on even indices,
/// imaginary part on odd ones.
pub fn informative_component(n: usize, z: Complex64) -> f64 {
    if n % 2 == 0 {
        z.re
    } else {
        z.im
    }
}

/// Hard binary decisions on the informative components.
pub fn slice(soft: &SoftOutput) -> RVec {
    match soft {
        SoftOutput::Real(v) => v.iter().copied().map(hard_decision).collect(),
        SoftOutput::Complex(v) => v
            .iter()
            .enumerate()
            .map(|(n, z)| hard_decision(informative_component(n, *z)))
            .collect(),
    }
}

/// Multi-level slicing: nearest point of the given PAM alphabet. Binary
/// slicing is the special case of a `{−A, +A}` alphabet.
pub fn slice_levels(soft: &SoftOutput, alphabet: &[f64]) -> RVec {
    let nearest = |x: f64| -> f64 {
        let mut best = alphabet[0];
        let mut dist = (x - best).abs();
        for &l in &alphabet[1..] {
            let d = (x - l).abs();
            // ties resolve toward the larger level, matching hard_decision at zero
            if d < dist || (d == dist && l > best) {
                best = l;
                dist = d;
            }
        }
        best
    };
    match soft {
        SoftOutput::Real(v) => v.iter().map(|&x| nearest(x)).collect(),
        SoftOutput::Complex(v) => v
            .iter()
            .enumerate()
            .map(|(n, z)| nearest(informative_component(n, *z)))
            .collect(),
    }
}

/// Classical MMSE linear equalizer `[Γ + σ²I]⁻¹ y` (unit symbol energy).
pub fn le_equalize(y: &[Complex64], gamma: &CMat, sigma2: f64) -> Result<EqualizerResult> {
    let shifted = gamma.add_scaled_identity(Complex64::new(sigma2, 0.0))?;
    let soft = solve_hpd(&shifted, y)?;
    let soft = SoftOutput::Complex(soft);
    let decisions = slice(&soft);
    Ok(EqualizerResult {
        soft,
        decisions,
        kind: EqualizerKind::Le,
    })
}

/// Widely linear coefficients: `C = [BΓᵀB + Γ + σ²I]⁻¹` and `D = C·B`.
#[derive(Debug, Clone)]
pub struct WleCoefficients {
    pub c: CMat,
    pub d: CMat,
}

pub fn wle_coefficients(gamma: &CMat, sigma2: f64, ab: &AbPair) -> Result<WleCoefficients> {
    let n = ab.len();
    if !gamma.is_square() || gamma.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "autocorrelation {}x{} against pair of {}",
            gamma.rows(),
            gamma.cols(),
            n
        )));
    }
    let b = ab.b();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // BΓᵀB + Γ, entrywise: Γᵀ_{ij} = Γ_{ji}
            m[(i, j)] = b[i] * gamma[(j, i)] * b[j] + gamma[(i, j)];
        }
        m[(i, i)] += sigma2;
    }
    let c = invert_hpd(&m)?;
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[(i, j)] = c[(i, j)] * b[j];
        }
    }
    Ok(WleCoefficients { c, d })
}

/// Independent derivation of `D` from the orthogonality conditions,
/// `D = [I − C(Γ + σ²I)]B[Γᵀ]⁻¹`. Requires `Γ` itself to be invertible and
/// is gated on its condition estimate; used as a cross-check of `D = C·B`.
pub fn wle_d_independent(gamma: &CMat, sigma2: f64, ab: &AbPair) -> Result<CMat> {
    let coeffs = wle_coefficients(gamma, sigma2, ab)?;
    let n = gamma.rows();
    let gamma_t = gamma.transpose();
    let gamma_t_inv = lu_invert(&gamma_t)?;
    let cond = cond_estimate(&gamma_t, &gamma_t_inv);
    if cond > tol::COND_LIMIT {
        return Err(Error::IllConditioned { cond });
    }
    let shifted = gamma.add_scaled_identity(Complex64::new(sigma2, 0.0))?;
    let mut bracket = CMat::identity(n).sub(&coeffs.c.matmul(&shifted)?)?;
    // post-multiply by diagonal B
    for i in 0..n {
        for j in 0..n {
            bracket[(i, j)] *= ab.b()[j];
        }
    }
    bracket.matmul(&gamma_t_inv)
}

/// Widely linear equalizer output `C y + D y*`.
pub fn wle_equalize(y: &[Complex64], coeffs: &WleCoefficients) -> Result<EqualizerResult> {
    if y.len() != coeffs.c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "input of {} against coefficients of {}",
            y.len(),
            coeffs.c.cols()
        )));
    }
    let direct = coeffs.c.mul_vec(y)?;
    let conj: CVec = y.iter().map(|z| z.conj()).collect();
    let conjugate_branch = coeffs.d.mul_vec(&conj)?;
    let soft: CVec = direct
        .into_iter()
        .zip(conjugate_branch)
        .map(|(a, b)| a + b)
        .collect();
    let soft = SoftOutput::Complex(soft);
    let decisions = slice(&soft);
    Ok(EqualizerResult {
        soft,
        decisions,
        kind: EqualizerKind::Wle,
    })
}

/// Real-only equalizer `[Γ_a + (σ²/2)I]⁻¹ y_a`, a purely real solve.
pub fn roe_equalize(
    y_a: &[f64],
    realized: &RealizedChannel,
    sigma2: f64,
) -> Result<EqualizerResult> {
    let shifted = realized.gamma_a.add_scaled_identity(sigma2 / 2.0)?;
    let soft = solve_hpd(&shifted, y_a)?;
    let soft = SoftOutput::Real(soft);
    let decisions = slice(&soft);
    Ok(EqualizerResult {
        soft,
        decisions,
        kind: EqualizerKind::Roe,
    })
}
