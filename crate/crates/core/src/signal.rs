//! Signal chain: OQAM frame generation, multipath channel, matched filter,
//! and the channel autocorrelation matrix.
//!
//! Everything is a pure function of its inputs plus an explicit seed, so
//! Monte Carlo trials reproduce bit-for-bit and parallelize by handing
//! disjoint seeds to workers.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, RVec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// One frame of offset-QAM symbols: real PAM amplitudes `a(n)` and their
/// complex mapping `x(n)` (real on even indices, imaginary on odd).
#[derive(Debug, Clone)]
pub struct OqamFrame {
    pub amplitudes: RVec,
    pub symbols: CVec,
    pub order: usize,
}

/// PAM levels `±A, ±3A, …, ±(N−1)A` scaled so the average symbol energy is 1.
pub fn pam_alphabet(order: usize) -> Result<RVec> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "modulation order must be a power of two >= 2, got {order}"
        )));
    }
    let sum_sq: f64 = (1..order).step_by(2).map(|i| (i * i) as f64).sum();
    let a = (order as f64 / (2.0 * sum_sq)).sqrt();
    let mut levels = Vec::with_capacity(order);
    for i in (1..order).step_by(2) {
        levels.push(-(i as f64) * a);
        levels.push(i as f64 * a);
    }
    levels.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(levels)
}

/// The constellation rule: even-indexed symbols carry the amplitude on the
/// real axis, odd-indexed ones on the imaginary axis.
pub fn symbol_from_amplitude(n: usize, amp: f64) -> Complex64 {
    if n % 2 == 0 {
        Complex64::new(amp, 0.0)
    } else {
        Complex64::new(0.0, amp)
    }
}

impl OqamFrame {
    /// Builds a frame from explicit amplitudes, validating them against the
    /// N-PAM alphabet.
    pub fn from_amplitudes(amplitudes: RVec, order: usize) -> Result<Self> {
        let two_nu = amplitudes.len();
        if two_nu < 2 || two_nu % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "frame length must be even and >= 2, got {two_nu}"
            )));
        }
        let alphabet = pam_alphabet(order)?;
        for (n, a) in amplitudes.iter().enumerate() {
            if !alphabet.iter().any(|l| (l - a).abs() < 1e-9) {
                return Err(Error::InvalidParameter(format!(
                    "amplitude {a} at index {n} is not a {order}-PAM level"
                )));
            }
        }
        let symbols = amplitudes
            .iter()
            .enumerate()
            .map(|(n, &a)| symbol_from_amplitude(n, a))
            .collect();
        Ok(OqamFrame {
            amplitudes,
            symbols,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Draws a frame of i.i.d. equally likely symbols.
pub fn generate_frame(two_nu: usize, order: usize, seed: u64) -> Result<OqamFrame> {
    let alphabet = pam_alphabet(order)?;
    if two_nu < 2 || two_nu % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "frame length must be even and >= 2, got {two_nu}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amplitudes: RVec = (0..two_nu)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect();
    OqamFrame::from_amplitudes(amplitudes, order)
}

/// Discrete-time multipath channel: taps `h(0..=L_b)` and the noise power
/// `sigma2` injected at the sampler output.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    pub taps: CVec,
    pub sigma2: f64,
    gamma: CVec, // gamma(0..=L_b); negative lags by conjugate symmetry
}

impl ChannelModel {
    pub fn new(taps: CVec, sigma2: f64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter("channel needs at least one tap".into()));
        }
        if !(sigma2 >= 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise power must be finite and >= 0, got {sigma2}"
            )));
        }
        let lb = taps.len() - 1;
        let gamma = (0..=lb)
            .map(|k| {
                let mut g = Complex64::new(0.0, 0.0);
                for n in k..=lb {
                    g += taps[n] * taps[n - k].conj();
                }
                g
            })
            .collect();
        Ok(ChannelModel { taps, sigma2, gamma })
    }

    /// Channel memory: taps − 1.
    pub fn l_b(&self) -> usize {
        self.taps.len() - 1
    }

    /// Autocorrelation `gamma(k) = Σ h(n) h*(n−k)`, conjugate-symmetric in k.
    pub fn gamma(&self, k: i64) -> Complex64 {
        let a = k.unsigned_abs() as usize;
        if a > self.l_b() {
            Complex64::new(0.0, 0.0)
        } else if k >= 0 {
            self.gamma[a]
        } else {
            self.gamma[a].conj()
        }
    }

    /// Scales the taps to unit energy.
    pub fn normalized(mut self) -> Self {
        let e: f64 = self.taps.iter().map(|h| h.norm_sqr()).sum();
        let s = 1.0 / e.sqrt();
        for h in self.taps.iter_mut() {
            *h *= s;
        }
        for g in self.gamma.iter_mut() {
            *g *= s * s;
        }
        self
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }
}

/// Sampled receive vector `r(0..2ν+L_b)` for one frame.
#[derive(Debug, Clone)]
pub struct ReceivedFrame {
    pub r: CVec,
    pub seed: u64,
}

/// Runs a frame through the channel and adds circularly symmetric complex
/// Gaussian noise of total power `sigma2` (split evenly re/im).
pub fn transmit(frame: &OqamFrame, ch: &ChannelModel, seed: u64) -> ReceivedFrame {
    let two_nu = frame.len();
    let lb = ch.l_b();
    let mut r = vec![Complex64::new(0.0, 0.0); two_nu + lb];
    for (n, slot) in r.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        let k_lo = n.saturating_sub(two_nu - 1);
        for k in k_lo..=lb.min(n) {
            s += ch.taps[k] * frame.symbols[n - k];
        }
        *slot = s;
    }
    if ch.sigma2 > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = (ch.sigma2 / 2.0).sqrt();
        for slot in r.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *slot += Complex64::new(s * re, s * im);
        }
    }
    ReceivedFrame { r, seed }
}

/// Channel matched filter `h*(−n)` applied to the receive vector, producing
/// `y(n) = Σ_k h*(k) r(n+k)` for `0 <= n < 2ν`.
pub fn matched_filter(rf: &ReceivedFrame, ch: &ChannelModel) -> Result<CVec> {
    let lb = ch.l_b();
    if rf.r.len() <= lb {
        return Err(Error::DimensionMismatch(format!(
            "received vector of {} too short for channel memory {}",
            rf.r.len(),
            lb
        )));
    }
    let two_nu = rf.r.len() - lb;
    Ok((0..two_nu)
        .map(|n| {
            let mut y = Complex64::new(0.0, 0.0);
            for (k, h) in ch.taps.iter().enumerate() {
                y += h.conj() * rf.r[n + k];
            }
            y
        })
        .collect())
}

/// Banded Hermitian Toeplitz autocorrelation matrix with entry
/// `(i, k) = gamma(i − k)`.
pub fn build_gamma(ch: &ChannelModel, two_nu: usize) -> CMat {
    let mut m = CMat::zeros(two_nu, two_nu);
    for i in 0..two_nu {
        for j in 0..two_nu {
            m[(i, j)] = ch.gamma(i as i64 - j as i64);
        }
    }
    m
}

/// Unnormalized exponentially decaying taps: `h(k) = g(k) e^{−k/decay}` with
/// `g(k)` i.i.d. standard complex Gaussian.
pub fn random_channel_raw(taps: usize, decay: f64, rng: &mut ChaCha8Rng) -> CVec {
    (0..taps)
        .map(|k| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let g = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            g * (-(k as f64) / decay).exp()
        })
        .collect()
}

/// Random adjacently located exponentially decaying channel, normalized to
/// unit energy. Noise power starts at zero; set it with `with_sigma2`.
pub fn random_channel(taps: usize, decay: f64, seed: u64) -> Result<ChannelModel> {
    if taps < 1 {
        return Err(Error::InvalidParameter("need at least one tap".into()));
    }
    if !(decay > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "decay must be positive, got {decay}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taps = random_channel_raw(taps, decay, &mut rng);
    Ok(ChannelModel::new(taps, 0.0)?.normalized())
}
