//! End-to-end equivalence checks tying the modules together: one simulated
//! realization bundles everything the three equalizers need, and the
//! residual functions quantify how far the implementation drifts from the
//! exact identities it is supposed to satisfy.

use crate::equalizers::{
    le_equalize, roe_equalize, slice, wle_coefficients, wle_equalize, SoftOutput,
};
use crate::error::Result;
use crate::linalg::{CMat, CVec, RVec};
use crate::runner::child_seed;
use crate::signal::{
    build_gamma, generate_frame, matched_filter, transmit, ChannelModel, OqamFrame, ReceivedFrame,
};
use crate::tol;
use crate::transforms::{
    build_stacked, extract_real, make_ab, preprocess_real, realize_gamma, AbPair, RealizedChannel,
};

/// One simulated frame through one channel, with every derived object the
/// block equalizers consume.
pub struct Realization {
    pub channel: ChannelModel,
    pub frame: OqamFrame,
    pub received: ReceivedFrame,
    pub y: CVec,
    pub y_a: RVec,
    pub ab: AbPair,
    pub gamma: CMat,
    pub realized: RealizedChannel,
}

impl Realization {
    /// Simulates a frame of the given length over `channel` (its `sigma2`
    /// sets the noise). Frame content and noise derive from child seeds.
    pub fn simulate(channel: &ChannelModel, two_nu: usize, seed: u64) -> Result<Self> {
        let frame = generate_frame(two_nu, 2, child_seed(seed, 0))?;
        let received = transmit(&frame, channel, child_seed(seed, 1));
        let y = matched_filter(&received, channel)?;
        let ab = make_ab(two_nu)?;
        let y_a = extract_real(&y, &ab)?;
        let gamma = build_gamma(channel, two_nu);
        let realized = realize_gamma(&gamma, &ab)?;
        Ok(Realization {
            channel: channel.clone(),
            frame,
            received,
            y,
            y_a,
            ab,
            gamma,
            realized,
        })
    }

    pub fn two_nu(&self) -> usize {
        self.frame.len()
    }
}

/// Max deviation between the real-only output and the rotated widely linear
/// output, `‖x̂_ROE − 2A·x̂_WLE‖∞`, including any stray imaginary content of
/// the rotated output.
pub fn equivalence_residual(real: &Realization) -> Result<f64> {
    let sigma2 = real.channel.sigma2;
    let roe = roe_equalize(&real.y_a, &real.realized, sigma2)?;
    let coeffs = wle_coefficients(&real.gamma, sigma2, &real.ab)?;
    let wle = wle_equalize(&real.y, &coeffs)?;
    let wle_soft = match &wle.soft {
        SoftOutput::Complex(v) => v,
        _ => unreachable!("widely linear output is complex"),
    };
    let rotated = real.ab.two_a_mul(wle_soft)?;
    let roe_soft = match &roe.soft {
        SoftOutput::Real(v) => v,
        _ => unreachable!("real-only output is real"),
    };
    let mut worst = 0.0f64;
    for (r, z) in roe_soft.iter().zip(&rotated) {
        worst = worst.max((r - z.re).abs()).max(z.im.abs());
    }
    Ok(worst)
}

/// Max deviation between the post-processed matched-filter input `y_a` and
/// the pre-processed real input `y_b`.
pub fn preprocess_residual(real: &Realization) -> Result<f64> {
    let sc = build_stacked(&real.channel, &real.ab, real.two_nu())?;
    let y_b = preprocess_real(&real.received, &sc)?;
    let mut worst = 0.0f64;
    for (a, b) in real.y_a.iter().zip(&y_b) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Decision-level comparison of the three block equalizers on one
/// realization.
pub struct DecisionCompare {
    pub bits: u64,
    /// ROE-vs-WLE decision mismatches outside the slicer guard band.
    pub mismatches: u64,
    /// Symbols whose soft value fell inside the guard band (excluded).
    pub guarded: u64,
    pub errors_le: u64,
    pub errors_wle: u64,
    pub errors_roe: u64,
}

pub fn compare_block_decisions(real: &Realization) -> Result<DecisionCompare> {
    let sigma2 = real.channel.sigma2;
    let le = le_equalize(&real.y, &real.gamma, sigma2)?;
    let coeffs = wle_coefficients(&real.gamma, sigma2, &real.ab)?;
    let wle = wle_equalize(&real.y, &coeffs)?;
    let roe = roe_equalize(&real.y_a, &real.realized, sigma2)?;
    let roe_soft = match &roe.soft {
        SoftOutput::Real(v) => v.clone(),
        _ => unreachable!(),
    };
    let wle_decisions = slice(&wle.soft);
    let mut out = DecisionCompare {
        bits: real.two_nu() as u64,
        mismatches: 0,
        guarded: 0,
        errors_le: 0,
        errors_wle: 0,
        errors_roe: 0,
    };
    for n in 0..real.two_nu() {
        let truth = real.frame.amplitudes[n];
        if le.decisions[n] != truth {
            out.errors_le += 1;
        }
        if wle_decisions[n] != truth {
            out.errors_wle += 1;
        }
        if roe.decisions[n] != truth {
            out.errors_roe += 1;
        }
        if roe_soft[n].abs() < tol::SLICER_GUARD {
            out.guarded += 1;
        } else if roe.decisions[n] != wle_decisions[n] {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::random_channel;

    #[test]
    fn residuals_are_tiny_on_random_realizations() {
        for seed in 0..5u64 {
            let ch = random_channel(3, 1.0, 1000 + seed).unwrap().with_sigma2(0.1);
            let real = Realization::simulate(&ch, 32, seed).unwrap();
            assert!(equivalence_residual(&real).unwrap() <= tol::EQUIV_OUTPUT);
            assert!(preprocess_residual(&real).unwrap() <= tol::EQUIV_PREPROCESS);
        }
    }

    #[test]
    fn decision_compare_counts_errors_against_truth() {
        let ch = random_channel(3, 1.0, 77).unwrap().with_sigma2(1.0);
        let real = Realization::simulate(&ch, 64, 3).unwrap();
        let cmp = compare_block_decisions(&real).unwrap();
        assert_eq!(cmp.bits, 64);
        assert_eq!(cmp.mismatches, 0);
        // recount one tracker independently
        let roe = roe_equalize(&real.y_a, &real.realized, real.channel.sigma2).unwrap();
        let recount = roe
            .decisions
            .iter()
            .zip(&real.frame.amplitudes)
            .filter(|(d, a)| d != a)
            .count() as u64;
        assert_eq!(cmp.errors_roe, recount);
    }
}
