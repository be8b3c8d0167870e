//! Diagonal-transform algebra connecting the complex matched-filter domain
//! to the real-only receiver: the extraction of informative real components,
//! the realized autocorrelation `Γ_a`, and the pre-processing path that
//! filters real/imaginary parts of the raw receive vector directly.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, RMat, RVec};
use crate::signal::{ChannelModel, ReceivedFrame};
use crate::tol;
use num_complex::Complex64;

/// The diagonal pair `A = diag[1/2, −j/2, …]`, `B = diag[1, −1, …]` stored as
/// their diagonals. `A` halves and rotates odd entries onto the real axis;
/// `B` flips the sign of odd entries under conjugation-parity algebra.
#[derive(Debug, Clone)]
pub struct AbPair {
    a: CVec,
    b: RVec,
}

/// Builds the pair for an even frame length.
pub fn make_ab(two_nu: usize) -> Result<AbPair> {
    if two_nu < 2 || two_nu % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "diagonal pair needs an even size >= 2, got {two_nu}"
        )));
    }
    let a = (0..two_nu)
        .map(|n| {
            if n % 2 == 0 {
                Complex64::new(0.5, 0.0)
            } else {
                Complex64::new(0.0, -0.5)
            }
        })
        .collect();
    let b = (0..two_nu)
        .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    Ok(AbPair { a, b })
}

impl AbPair {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Applies `2A` to a complex vector, i.e. rotates each entry so the
    /// informative component lands on the real axis.
    pub fn two_a_mul(&self, v: &[Complex64]) -> Result<CVec> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of {} against pair of {}",
                v.len(),
                self.len()
            )));
        }
        Ok(v.iter()
            .zip(&self.a)
            .map(|(x, a)| 2.0 * a * x)
            .collect())
    }
}

/// Informative real components of the matched-filter output: real part on
/// even indices, imaginary part on odd indices.
pub fn extract_real(y: &[Complex64], ab: &AbPair) -> Result<RVec> {
    if y.len() != ab.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of {} against pair of {}",
            y.len(),
            ab.len()
        )));
    }
    Ok(y.iter()
        .enumerate()
        .map(|(n, v)| if n % 2 == 0 { v.re } else { v.im })
        .collect())
}

/// Algebraic form of the same extraction, `A(y + B y*)`, kept as an
/// independent route for cross-checks. Errors if the imaginary residue
/// survives past tolerance.
pub fn extract_real_algebraic(y: &[Complex64], ab: &AbPair) -> Result<RVec> {
    if y.len() != ab.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of {} against pair of {}",
            y.len(),
            ab.len()
        )));
    }
    let mut out = Vec::with_capacity(y.len());
    let mut residue = 0.0f64;
    for ((v, a), b) in y.iter().zip(&ab.a).zip(&ab.b) {
        let z = a * (v + b * v.conj());
        residue = residue.max(z.im.abs());
        out.push(z.re);
    }
    if residue > tol::EXTRACT_RESIDUE {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: tol::EXTRACT_RESIDUE,
        });
    }
    Ok(out)
}

/// Real-domain view of the channel autocorrelation: `Γ_a = Γ̂ + Γ̄` with the
/// two Hermitian halves kept in complex form.
///
/// `Γ_a` itself is genuinely real and is stored as a real matrix after its
/// imaginary residue is asserted away. The halves `Γ̂ = 2AΓA†` and
/// `Γ̄ = 2(AB)Γᵀ(AB)†` have complex off-diagonal entries for complex
/// channels; truncating them to their real parts would silently break the
/// average-MMSE decomposition, so they stay complex.
#[derive(Debug, Clone)]
pub struct RealizedChannel {
    pub gamma_a: RMat,
    pub gamma_hat: CMat,
    pub gamma_bar: CMat,
}

/// Realizes `Γ_a = 2A(Γ + BΓᵀB)A†` along with its two summands.
pub fn realize_gamma(gamma: &CMat, ab: &AbPair) -> Result<RealizedChannel> {
    let n = ab.len();
    if !gamma.is_square() || gamma.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "autocorrelation {}x{} against pair of {}",
            gamma.rows(),
            gamma.cols(),
            n
        )));
    }
    let defect = gamma.hermitian_defect();
    if defect > tol::HERMITIAN_DEFECT {
        return Err(Error::NotHermitian { defect });
    }
    let a = ab.a();
    let b = ab.b();
    let mut hat = CMat::zeros(n, n);
    let mut bar = CMat::zeros(n, n);
    let mut gamma_a = RMat::zeros(n, n);
    let mut residue = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let h = 2.0 * a[i] * gamma[(i, j)] * a[j].conj();
            // (AB) Γᵀ (AB)† entrywise: Γᵀ_{ij} = Γ_{ji}
            let v = 2.0 * (a[i] * b[i]) * gamma[(j, i)] * (a[j].conj() * b[j]);
            hat[(i, j)] = h;
            bar[(i, j)] = v;
            let s = h + v;
            residue = residue.max(s.im.abs());
            gamma_a[(i, j)] = s.re;
        }
    }
    if residue > tol::REALIZE_RESIDUE {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: tol::REALIZE_RESIDUE,
        });
    }
    Ok(RealizedChannel {
        gamma_a,
        gamma_hat: hat,
        gamma_bar: bar,
    })
}

/// Realizes only `Γ_a`, skipping the two Hermitian halves. This is the lean
/// path the real-only receiver itself needs; `realize_gamma` additionally
/// materializes the halves for MMSE analysis.
pub fn realize_gamma_a(gamma: &CMat, ab: &AbPair) -> Result<RMat> {
    let n = ab.len();
    if !gamma.is_square() || gamma.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "autocorrelation {}x{} against pair of {}",
            gamma.rows(),
            gamma.cols(),
            n
        )));
    }
    let a = ab.a();
    let b = ab.b();
    let mut gamma_a = RMat::zeros(n, n);
    let mut residue = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let inner = gamma[(i, j)] + b[i] * gamma[(j, i)] * b[j];
            let s = 2.0 * a[i] * inner * a[j].conj();
            residue = residue.max(s.im.abs());
            gamma_a[(i, j)] = s.re;
        }
    }
    if residue > tol::REALIZE_RESIDUE {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: tol::REALIZE_RESIDUE,
        });
    }
    Ok(gamma_a)
}

/// Tall channel matrix `H` (one shifted tap vector per transmitted symbol)
/// and the real/imaginary split of `Ĥ = 2HA†`.
#[derive(Debug, Clone)]
pub struct StackedChannel {
    pub h: CMat,
    pub h_hat_re: RMat,
    pub h_hat_im: RMat,
}

/// Builds the `(2ν+L_b) × 2ν` stacked channel for one frame length.
pub fn build_stacked(ch: &ChannelModel, ab: &AbPair, two_nu: usize) -> Result<StackedChannel> {
    if two_nu != ab.len() {
        return Err(Error::DimensionMismatch(format!(
            "frame length {} against pair of {}",
            two_nu,
            ab.len()
        )));
    }
    let lb = ch.l_b();
    let rows = two_nu + lb;
    let mut h = CMat::zeros(rows, two_nu);
    for n in 0..two_nu {
        for (k, tap) in ch.taps.iter().enumerate() {
            h[(n + k, n)] = *tap;
        }
    }
    let mut h_hat_re = RMat::zeros(rows, two_nu);
    let mut h_hat_im = RMat::zeros(rows, two_nu);
    for r in 0..rows {
        for n in 0..two_nu {
            let v = 2.0 * h[(r, n)] * ab.a()[n].conj();
            h_hat_re[(r, n)] = v.re;
            h_hat_im[(r, n)] = v.im;
        }
    }
    Ok(StackedChannel {
        h,
        h_hat_re,
        h_hat_im,
    })
}

/// Pre-processing route: matched filtering with real coefficients applied to
/// the real and imaginary parts of the raw receive vector,
/// `y_b = Ĥ_Rᵀ r_R + Ĥ_Iᵀ r_I`.
pub fn preprocess_real(rf: &ReceivedFrame, sc: &StackedChannel) -> Result<RVec> {
    if rf.r.len() != sc.h_hat_re.rows() {
        return Err(Error::DimensionMismatch(format!(
            "received vector of {} against stacked channel of {} rows",
            rf.r.len(),
            sc.h_hat_re.rows()
        )));
    }
    let r_re: RVec = rf.r.iter().map(|z| z.re).collect();
    let r_im: RVec = rf.r.iter().map(|z| z.im).collect();
    let mut out = sc.h_hat_re.tr_mul_vec(&r_re)?;
    let other = sc.h_hat_im.tr_mul_vec(&r_im)?;
    for (o, v) in out.iter_mut().zip(other) {
        *o += v;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vec_max_abs, vec_sub, CMat};
    use crate::signal::{build_gamma, generate_frame, matched_filter, random_channel, transmit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diag_values_match_definition() {
        let ab = make_ab(4).unwrap();
        assert_eq!(
            ab.a(),
            &[c(0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0), c(0.0, -0.5)]
        );
        assert_eq!(ab.b(), &[1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn diagonal_pair_identities() {
        // A† = AB, A⁻¹ = 4AB, A = BAB, B = B⁻¹, B² = I, all entrywise.
        for two_nu in [2usize, 4, 6] {
            let ab = make_ab(two_nu).unwrap();
            for n in 0..two_nu {
                let a = ab.a()[n];
                let b = ab.b()[n];
                assert!((a.conj() - a * b).norm() <= tol::AB_IDENTITY);
                assert!((1.0 / a - 4.0 * a * b).norm() <= tol::AB_IDENTITY);
                assert!((a - b * a * b).norm() <= tol::AB_IDENTITY);
                assert!((b - 1.0 / b).abs() <= tol::AB_IDENTITY);
                assert!((b * b - 1.0).abs() <= tol::AB_IDENTITY);
            }
        }
    }

    #[test]
    fn rejects_odd_sizes() {
        assert!(make_ab(3).is_err());
        assert!(make_ab(0).is_err());
    }

    #[test]
    fn extraction_picks_informative_components() {
        let ab = make_ab(2).unwrap();
        let ya = extract_real(&[c(1.0, 2.0), c(3.0, -4.0)], &ab).unwrap();
        assert_eq!(ya, vec![1.0, -4.0]);
    }

    #[test]
    fn extraction_of_real_vector_zeroes_odd_slots() {
        let ab = make_ab(4).unwrap();
        let y = vec![c(1.0, 0.0), c(2.0, 0.0), c(-3.0, 0.0), c(4.0, 0.0)];
        assert_eq!(extract_real(&y, &ab).unwrap(), vec![1.0, 0.0, -3.0, 0.0]);
    }

    #[test]
    fn stacking_and_algebraic_forms_agree() {
        let two_nu = 32;
        let ab = make_ab(two_nu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y: Vec<Complex64> = (0..two_nu)
            .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let stacked = extract_real(&y, &ab).unwrap();
        let algebraic = extract_real_algebraic(&y, &ab).unwrap();
        assert!(vec_max_abs(&vec_sub(&stacked, &algebraic)) <= tol::EXTRACT_RESIDUE);
    }

    #[test]
    fn realize_identity_gives_identity() {
        let ab = make_ab(6).unwrap();
        let rc = realize_gamma(&CMat::identity(6), &ab).unwrap();
        assert!(rc.gamma_a.max_abs_diff(&RMat::identity(6)) < 1e-15);
    }

    #[test]
    fn hat_diagonal_is_half_of_gamma_diagonal() {
        let ch = crate::signal::ChannelModel::new(vec![c(1.0, 0.0), c(0.5, 0.0)], 0.0).unwrap();
        let g = build_gamma(&ch, 8);
        let ab = make_ab(8).unwrap();
        let rc = realize_gamma(&g, &ab).unwrap();
        for i in 0..8 {
            assert!((rc.gamma_hat[(i, i)] - g[(i, i)] * 0.5).norm() < 1e-15);
        }
    }

    #[test]
    fn realized_matrix_is_symmetric_with_small_residue() {
        let ch = random_channel(3, 1.0, 21).unwrap();
        let g = build_gamma(&ch, 16);
        let ab = make_ab(16).unwrap();
        let rc = realize_gamma(&g, &ab).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert!((rc.gamma_a[(i, j)] - rc.gamma_a[(j, i)]).abs() < 1e-13);
            }
        }
        // summands stay Hermitian and sum back to the realized matrix
        assert!(rc.gamma_hat.hermitian_defect() < 1e-13);
        assert!(rc.gamma_bar.hermitian_defect() < 1e-13);
        let sum = rc.gamma_hat.add(&rc.gamma_bar).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert!((sum[(i, j)].re - rc.gamma_a[(i, j)]).abs() < 1e-13);
                assert!(sum[(i, j)].im.abs() <= tol::REALIZE_RESIDUE);
            }
        }
    }

    #[test]
    fn net_products_match_single_expression() {
        // Γ̂ + Γ̄ equals 2A(Γ + BΓᵀB)A† computed as one product chain.
        let ch = random_channel(3, 1.0, 31).unwrap();
        let g = build_gamma(&ch, 10);
        let ab = make_ab(10).unwrap();
        let rc = realize_gamma(&g, &ab).unwrap();
        let n = 10;
        let mut direct = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let inner = g[(i, j)] + ab.b()[i] * g[(j, i)] * ab.b()[j];
                direct[(i, j)] = 2.0 * ab.a()[i] * inner * ab.a()[j].conj();
            }
        }
        let sum = rc.gamma_hat.add(&rc.gamma_bar).unwrap();
        assert!(sum.max_abs_diff(&direct) < 1e-14);
    }

    #[test]
    fn lean_and_full_realizations_agree() {
        let ch = random_channel(3, 1.0, 33).unwrap();
        let g = build_gamma(&ch, 12);
        let ab = make_ab(12).unwrap();
        let full = realize_gamma(&g, &ab).unwrap();
        let lean = realize_gamma_a(&g, &ab).unwrap();
        assert!(full.gamma_a.max_abs_diff(&lean) < 1e-14);
    }

    #[test]
    fn stacked_identity_channel_is_identity() {
        let ch = crate::signal::ChannelModel::new(vec![c(1.0, 0.0)], 0.0).unwrap();
        let ab = make_ab(2).unwrap();
        let sc = build_stacked(&ch, &ab, 2).unwrap();
        assert!(sc.h.max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn stacked_columns_are_shifted_taps() {
        let ch = crate::signal::ChannelModel::new(vec![c(1.0, 0.0), c(0.5, 0.0)], 0.0).unwrap();
        let ab = make_ab(2).unwrap();
        let sc = build_stacked(&ch, &ab, 2).unwrap();
        assert_eq!(sc.h.rows(), 3);
        assert_eq!(sc.h.cols(), 2);
        let want = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        assert!(sc.h.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn stacked_channel_reproduces_gamma() {
        let ch = random_channel(3, 1.0, 8).unwrap();
        let ab = make_ab(12).unwrap();
        let sc = build_stacked(&ch, &ab, 12).unwrap();
        let g = sc.h.conj_transpose().matmul(&sc.h).unwrap();
        assert!(g.max_abs_diff(&build_gamma(&ch, 12)) <= 1e-12);
    }

    #[test]
    fn preprocess_identity_channel_recovers_amplitudes() {
        let frame = generate_frame(8, 2, 4).unwrap();
        let ch = crate::signal::ChannelModel::new(vec![c(1.0, 0.0)], 0.0).unwrap();
        let ab = make_ab(8).unwrap();
        let sc = build_stacked(&ch, &ab, 8).unwrap();
        let rf = transmit(&frame, &ch, 0);
        let yb = preprocess_real(&rf, &sc).unwrap();
        assert!(vec_max_abs(&vec_sub(&yb, &frame.amplitudes)) < 1e-14);
    }

    #[test]
    fn preprocess_equals_postprocessed_matched_filter() {
        // The two receiver front ends agree on every tested triple, noisy or not.
        for (seed, sigma2) in [(1u64, 0.0), (2, 0.1), (3, 1.0)] {
            let two_nu = 32;
            let ch = random_channel(3, 1.0, 100 + seed)
                .unwrap()
                .with_sigma2(sigma2);
            let frame = generate_frame(two_nu, 2, 200 + seed).unwrap();
            let ab = make_ab(two_nu).unwrap();
            let sc = build_stacked(&ch, &ab, two_nu).unwrap();
            let rf = transmit(&frame, &ch, 300 + seed);
            let ya = extract_real(&matched_filter(&rf, &ch).unwrap(), &ab).unwrap();
            let yb = preprocess_real(&rf, &sc).unwrap();
            assert!(vec_max_abs(&vec_sub(&ya, &yb)) <= tol::EQUIV_PREPROCESS);
        }
    }

    #[test]
    fn preprocess_noiseless_equals_gamma_a_times_amplitudes() {
        let two_nu = 16;
        let ch = random_channel(3, 1.0, 44).unwrap();
        let frame = generate_frame(two_nu, 2, 45).unwrap();
        let ab = make_ab(two_nu).unwrap();
        let sc = build_stacked(&ch, &ab, two_nu).unwrap();
        let rf = transmit(&frame, &ch, 0);
        let yb = preprocess_real(&rf, &sc).unwrap();
        let rc = realize_gamma(&build_gamma(&ch, two_nu), &ab).unwrap();
        let want = rc.gamma_a.mul_vec(&frame.amplitudes).unwrap();
        assert!(vec_max_abs(&vec_sub(&yb, &want)) <= 1e-12);
    }
}
