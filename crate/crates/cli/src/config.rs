//! Run configuration: one flat, human-readable key-value document (TOML).
//! Every field has a default, unknown keys are rejected by name, and the
//! effective configuration round-trips losslessly.

use oqam_eq::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Random,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Base seed; every trial derives an independent child seed from it.
    pub seed: u64,
    pub out_dir: String,
    /// Frame length in OQAM symbols (the block equalizer dimension).
    pub two_nu: usize,
    /// Channel taps (memory + 1).
    pub taps: usize,
    /// Exponential decay constant of the random channel profile.
    pub decay: f64,
    pub channel: ChannelKind,
    /// SNR grid in dB for the sweep and BER commands.
    pub snr_db: Vec<f64>,
    /// Channel draws per grid point (verify and mmse-sweep ensembles).
    pub channels: usize,
    /// Per-point bit budget for block BER: run at least `min_bits`, keep
    /// extending until every equalizer has `target_errors` errors, stop at
    /// `max_bits`.
    pub min_bits: u64,
    pub max_bits: u64,
    pub target_errors: u64,
    pub ber_batch_frames: usize,
    /// Frame lengths covered by the timing command.
    pub frame_lens: Vec<usize>,
    /// Repetitions per timing measurement (the median is reported).
    pub timing_reps: usize,
    pub pilots: usize,
    pub payload: usize,
    /// Seeded channel draws for the adaptive study.
    pub nlms_runs: usize,
    pub nlms_snr_db: f64,
    /// Adaptive filter length parameter.
    pub m: usize,
    pub mu: f64,
    pub delta_roe: f64,
    pub delta_wle: f64,
    pub delta_le: f64,
    /// Trailing window for the reported convergence curves.
    pub smoothing_window: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            out_dir: "out".into(),
            two_nu: 64,
            taps: 3,
            decay: 1.0,
            channel: ChannelKind::Random,
            snr_db: vec![0.0, 3.0, 6.0, 9.0, 12.0],
            channels: 50,
            min_bits: 200_000,
            max_bits: 2_000_000,
            target_errors: 100,
            ber_batch_frames: 1000,
            frame_lens: vec![128, 256, 512, 1024, 2048],
            timing_reps: 3,
            pilots: 1500,
            payload: 1500,
            nlms_runs: 100,
            nlms_snr_db: 10.0,
            m: 3,
            mu: 1.0,
            delta_roe: 2.0,
            delta_wle: 2.0,
            delta_le: 16.0,
            smoothing_window: 50,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(Error::InvalidParameter("snr_db grid must be non-empty".into()));
        }
        if self.channels == 0 || self.nlms_runs == 0 || self.timing_reps == 0 {
            return Err(Error::InvalidParameter("trial counts must be >= 1".into()));
        }
        if self.two_nu < 2 || self.two_nu % 2 != 0 || self.two_nu > 4096 {
            return Err(Error::InvalidParameter(format!(
                "two_nu must be even, >= 2 and <= 4096, got {}",
                self.two_nu
            )));
        }
        if self.taps < 1 {
            return Err(Error::InvalidParameter("taps must be >= 1".into()));
        }
        if self.frame_lens.iter().any(|&l| l < 2 || l % 2 != 0 || l > 4096) {
            return Err(Error::InvalidParameter(
                "frame_lens entries must be even and within 2..=4096".into(),
            ));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// FNV-1a hash of the effective configuration, stamped into every CSV.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.to_toml().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}
