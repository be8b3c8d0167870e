//! The five experiment commands behind the CLI: theorem verification, the
//! average-MMSE sweep, block Monte Carlo BER, the wall-clock solve
//! comparison, and the adaptive NLMS study.
//!
//! Every command is a pure function of (config, seed): trials derive child
//! seeds by index, parallel maps collect in index order, and aggregation is
//! sequential, so simulation CSVs reproduce byte-for-byte. The timing
//! command's measured columns are the one exception; wall-clock values are
//! inherently run-to-run noise.

use crate::config::{ChannelKind, RunConfig};
use num_complex::Complex64;
use oqam_eq::equalizers::{
    hard_decision, informative_component, wle_coefficients, EqualizerKind, WleCoefficients,
};
use oqam_eq::error::{Error, Result};
use oqam_eq::linalg::{cholesky, vec_conj, Cholesky};
use oqam_eq::mmse::{mmse_le, mmse_report, mmse_roe, rho_direct};
use oqam_eq::nlms::{equalize_payload, train, NlmsConfig};
use oqam_eq::runner::{child_seed, map_trials};
use oqam_eq::signal::{
    build_gamma, generate_frame, matched_filter, random_channel, transmit, ChannelModel,
};
use oqam_eq::tol;
use oqam_eq::transforms::{extract_real, make_ab, realize_gamma, realize_gamma_a};
use oqam_eq::verify::{equivalence_residual, preprocess_residual, Realization};
use std::fmt::Write as _;
use std::time::Instant;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rendered results of one command: named CSV files plus a report body.
pub struct CommandOutput {
    pub files: Vec<(String, String)>,
    pub report: String,
    pub ok: bool,
}

fn csv_header(cfg: &RunConfig, columns: &str) -> String {
    format!(
        "# config_hash={:016x} seed={} version={}\n{columns}\n",
        cfg.hash(),
        cfg.seed,
        VERSION
    )
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn make_channel(cfg: &RunConfig, seed: u64, sigma2: f64) -> Result<ChannelModel> {
    match cfg.channel {
        ChannelKind::Identity => {
            Ok(ChannelModel::new(vec![Complex64::new(1.0, 0.0)], sigma2)?)
        }
        ChannelKind::Random => {
            Ok(random_channel(cfg.taps, cfg.decay, seed)?.with_sigma2(sigma2))
        }
    }
}

pub fn snr_db_to_sigma2(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct VerifyResults {
    pub equivalence_worst: f64,
    pub preprocess_worst_noisy: f64,
    pub preprocess_worst_clean: f64,
    /// Worst (most positive) `mmse_roe − mmse_le` over the grid.
    pub ordering_worst_gap: f64,
    pub decomposition_worst: f64,
    pub decomposition_checked: usize,
    pub decomposition_gated: usize,
    pub identity_le_gap: f64,
    pub identity_roe_gap: f64,
    pub rho_noiseless: f64,
    pub ok: bool,
}

pub fn run_verify(cfg: &RunConfig) -> Result<(VerifyResults, CommandOutput)> {
    let two_nu = cfg.two_nu;
    let equiv_sigma2 = [0.01, 0.1, 1.0];

    // Output equivalence and preprocess equivalence over one channel ensemble.
    let ensemble_seed = child_seed(cfg.seed, 0xE0);
    let per_channel = map_trials(cfg.channels, ensemble_seed, |i, seed| -> Result<(f64, f64, f64)> {
        let mut worst_equiv = 0.0f64;
        let mut worst_pre_noisy = 0.0f64;
        let mut worst_pre_clean = 0.0f64;
        for (k, &s2) in equiv_sigma2.iter().enumerate() {
            let ch = make_channel(cfg, child_seed(seed, 0), s2)?;
            let real = Realization::simulate(&ch, two_nu, child_seed(seed, 1 + k as u64))?;
            worst_equiv = worst_equiv.max(equivalence_residual(&real)?);
            worst_pre_noisy = worst_pre_noisy.max(preprocess_residual(&real)?);
        }
        let ch = make_channel(cfg, child_seed(seed, 0), 0.0)?;
        let clean = Realization::simulate(&ch, two_nu, child_seed(seed, 9))?;
        worst_pre_clean = worst_pre_clean.max(preprocess_residual(&clean)?);
        let _ = i;
        Ok((worst_equiv, worst_pre_noisy, worst_pre_clean))
    });
    let mut equivalence_worst = 0.0f64;
    let mut preprocess_worst_noisy = 0.0f64;
    let mut preprocess_worst_clean = 0.0f64;
    for r in per_channel {
        let (e, pn, pc) = r?;
        equivalence_worst = equivalence_worst.max(e);
        preprocess_worst_noisy = preprocess_worst_noisy.max(pn);
        preprocess_worst_clean = preprocess_worst_clean.max(pc);
    }

    // MMSE ordering and decomposition over a log-spaced noise grid.
    let grid: Vec<f64> = (0..7)
        .map(|k| 10f64.powf(-2.0 + 2.5 * k as f64 / 6.0))
        .collect();
    let mmse_seed = child_seed(cfg.seed, 0xE1);
    let per_channel = map_trials(cfg.channels, mmse_seed, |_, seed| -> Result<(f64, f64, usize, usize)> {
        let ch = make_channel(cfg, seed, 0.0)?;
        let gamma = build_gamma(&ch, two_nu);
        let ab = make_ab(two_nu)?;
        let realized = realize_gamma(&gamma, &ab)?;
        let mut worst_gap = f64::NEG_INFINITY;
        let mut worst_decomp = 0.0f64;
        let mut checked = 0usize;
        let mut gated = 0usize;
        for &s2 in &grid {
            let le = mmse_le(&gamma, s2, two_nu)?;
            let roe = mmse_roe(&realized, s2, two_nu)?;
            worst_gap = worst_gap.max(roe - le);
            match rho_direct(&realized, s2, two_nu) {
                Ok(rho) => {
                    worst_decomp = worst_decomp.max((le - rho - roe).abs());
                    checked += 1;
                }
                Err(Error::IllConditioned { .. }) => gated += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((worst_gap, worst_decomp, checked, gated))
    });
    let mut ordering_worst_gap = f64::NEG_INFINITY;
    let mut decomposition_worst = 0.0f64;
    let mut decomposition_checked = 0usize;
    let mut decomposition_gated = 0usize;
    for r in per_channel {
        let (g, d, c, x) = r?;
        ordering_worst_gap = ordering_worst_gap.max(g);
        decomposition_worst = decomposition_worst.max(d);
        decomposition_checked += c;
        decomposition_gated += x;
    }

    // Identity-channel closed forms and the zero-noise gap.
    let ident = ChannelModel::new(vec![Complex64::new(1.0, 0.0)], 0.0)?;
    let gamma_i = build_gamma(&ident, two_nu);
    let ab_i = make_ab(two_nu)?;
    let realized_i = realize_gamma(&gamma_i, &ab_i)?;
    let identity_le_gap = (mmse_le(&gamma_i, 1.0, two_nu)? - 0.5).abs();
    let identity_roe_gap = (mmse_roe(&realized_i, 1.0, two_nu)? - 1.0 / 3.0).abs();
    let sample_ch = make_channel(cfg, child_seed(cfg.seed, 0xE2), 0.0)?;
    let sample_realized = realize_gamma(&build_gamma(&sample_ch, two_nu), &ab_i)?;
    let rho_noiseless = rho_direct(&sample_realized, 0.0, two_nu)?;

    let checks = [
        equivalence_worst < tol::EQUIV_OUTPUT,
        preprocess_worst_noisy < tol::EQUIV_PREPROCESS,
        preprocess_worst_clean < tol::EQUIV_PREPROCESS,
        ordering_worst_gap <= 1e-12,
        decomposition_worst <= tol::MMSE_DECOMP,
        identity_le_gap <= 1e-12,
        identity_roe_gap <= 1e-12,
        rho_noiseless == 0.0,
    ];
    let ok = checks.iter().all(|&c| c);

    let results = VerifyResults {
        equivalence_worst,
        preprocess_worst_noisy,
        preprocess_worst_clean,
        ordering_worst_gap,
        decomposition_worst,
        decomposition_checked,
        decomposition_gated,
        identity_le_gap,
        identity_roe_gap,
        rho_noiseless,
        ok,
    };

    let mut report = String::new();
    let _ = writeln!(
        report,
        "verify: {} channels, frame length {}, seed {}",
        cfg.channels, two_nu, cfg.seed
    );
    let _ = writeln!(
        report,
        "output equivalence (ROE vs 2A*WLE)   worst {:.3e}  limit {:.1e}  {}",
        results.equivalence_worst,
        tol::EQUIV_OUTPUT,
        status(checks[0])
    );
    let _ = writeln!(
        report,
        "preprocess equivalence, noisy        worst {:.3e}  limit {:.1e}  {}",
        results.preprocess_worst_noisy,
        tol::EQUIV_PREPROCESS,
        status(checks[1])
    );
    let _ = writeln!(
        report,
        "preprocess equivalence, noiseless    worst {:.3e}  limit {:.1e}  {}",
        results.preprocess_worst_clean,
        tol::EQUIV_PREPROCESS,
        status(checks[2])
    );
    let _ = writeln!(
        report,
        "mmse ordering (roe - le)             worst {:.3e}  limit 1.0e-12  {}",
        results.ordering_worst_gap,
        status(checks[3])
    );
    let _ = writeln!(
        report,
        "mmse decomposition |le - rho - roe|  worst {:.3e}  limit {:.1e}  {} ({} checked, {} gated)",
        results.decomposition_worst,
        tol::MMSE_DECOMP,
        status(checks[4]),
        results.decomposition_checked,
        results.decomposition_gated
    );
    let _ = writeln!(
        report,
        "identity-channel closed forms        le gap {:.3e}, roe gap {:.3e}  {}",
        results.identity_le_gap,
        results.identity_roe_gap,
        status(checks[5] && checks[6])
    );
    let _ = writeln!(
        report,
        "gap term at zero noise               {:.3e}  {}",
        results.rho_noiseless,
        status(checks[7])
    );
    let _ = writeln!(report, "verify: {}", status(ok));

    Ok((
        results,
        CommandOutput {
            files: vec![],
            report,
            ok,
        },
    ))
}

// ---------------------------------------------------------------------------
// mmse-sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MmsePoint {
    pub snr_db: f64,
    pub channel_id: u64,
    pub mmse_le: f64,
    pub mmse_roe: f64,
    pub rho: f64,
}

pub fn run_mmse_sweep(cfg: &RunConfig) -> Result<(Vec<MmsePoint>, CommandOutput)> {
    let two_nu = cfg.two_nu;
    let channels = match cfg.channel {
        ChannelKind::Identity => 1,
        ChannelKind::Random => cfg.channels,
    };
    let ab = make_ab(two_nu)?;
    let chan_seed = child_seed(cfg.seed, 0x33);
    let combos = cfg.snr_db.len() * channels;
    let points = map_trials(combos, 0, |idx, _| -> Result<MmsePoint> {
        let s = idx / channels;
        let c = idx % channels;
        let snr_db = cfg.snr_db[s];
        let sigma2 = snr_db_to_sigma2(snr_db);
        let ch = make_channel(cfg, child_seed(chan_seed, c as u64), sigma2)?;
        let gamma = build_gamma(&ch, two_nu);
        let realized = realize_gamma(&gamma, &ab)?;
        let report = mmse_report(&gamma, &realized, sigma2, two_nu)?;
        Ok(MmsePoint {
            snr_db,
            channel_id: c as u64,
            mmse_le: report.mmse_le,
            mmse_roe: report.mmse_roe,
            rho: report.rho,
        })
    });
    let points: Result<Vec<MmsePoint>> = points.into_iter().collect();
    let points = points?;

    let mut csv = csv_header(cfg, "snr_db,mmse_le,mmse_roe,rho,channel_id");
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{:.9e},{:.9e},{:.9e},{}",
            p.snr_db, p.mmse_le, p.mmse_roe, p.rho, p.channel_id
        );
    }

    let ordering_ok = points.iter().all(|p| p.mmse_roe <= p.mmse_le + 1e-12);
    let mut report = String::new();
    let _ = writeln!(
        report,
        "mmse-sweep: {} channels x {} SNR points, frame length {}",
        channels,
        cfg.snr_db.len(),
        two_nu
    );
    for (s, &snr) in cfg.snr_db.iter().enumerate() {
        let rows: Vec<&MmsePoint> = points
            .iter()
            .skip(s * channels)
            .take(channels)
            .collect();
        let mean_le = rows.iter().map(|p| p.mmse_le).sum::<f64>() / rows.len() as f64;
        let mean_roe = rows.iter().map(|p| p.mmse_roe).sum::<f64>() / rows.len() as f64;
        let _ = writeln!(
            report,
            "snr {snr:>6.2} dB   mean mmse_le {mean_le:.6e}   mean mmse_roe {mean_roe:.6e}"
        );
    }
    let _ = writeln!(
        report,
        "ordering mmse_roe <= mmse_le on every row: {}",
        status(ordering_ok)
    );

    Ok((
        points,
        CommandOutput {
            files: vec![("mmse_sweep.csv".into(), csv)],
            report,
            ok: ordering_ok,
        },
    ))
}

// ---------------------------------------------------------------------------
// ber-block
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct BerPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub errors_le: u64,
    pub errors_wle: u64,
    pub errors_roe: u64,
    pub mismatches: u64,
    pub guarded: u64,
}

impl BerPoint {
    pub fn ber_le(&self) -> f64 {
        self.errors_le as f64 / self.bits as f64
    }
    pub fn ber_wle(&self) -> f64 {
        self.errors_wle as f64 / self.bits as f64
    }
    pub fn ber_roe(&self) -> f64 {
        self.errors_roe as f64 / self.bits as f64
    }
}

struct ChannelCtx {
    ch: ChannelModel,
    coeffs: WleCoefficients,
    chol_le: Cholesky<Complex64>,
    chol_roe: Cholesky<f64>,
}

#[derive(Default, Clone, Copy)]
struct FrameCounts {
    bits: u64,
    e_le: u64,
    e_wle: u64,
    e_roe: u64,
    mismatches: u64,
    guarded: u64,
}

pub fn run_ber_block(cfg: &RunConfig) -> Result<(Vec<BerPoint>, CommandOutput)> {
    let two_nu = cfg.two_nu;
    let ab = make_ab(two_nu)?;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for (s, &snr_db) in cfg.snr_db.iter().enumerate() {
        let sigma2 = snr_db_to_sigma2(snr_db);
        let point_seed = child_seed(cfg.seed, 0xB000 + s as u64);
        let chan_seed = child_seed(point_seed, 0);
        let frame_seed = child_seed(point_seed, 1);

        let ctxs = map_trials(cfg.channels, chan_seed, |_, seed| -> Result<ChannelCtx> {
            let ch = make_channel(cfg, seed, sigma2)?;
            let gamma = build_gamma(&ch, two_nu);
            let realized = realize_gamma_a(&gamma, &ab)?;
            let coeffs = wle_coefficients(&gamma, sigma2, &ab)?;
            let shifted_le = gamma.add_scaled_identity(Complex64::new(sigma2, 0.0))?;
            let shifted_roe = realized.add_scaled_identity(sigma2 / 2.0)?;
            Ok(ChannelCtx {
                ch,
                coeffs,
                chol_le: cholesky(&shifted_le)?,
                chol_roe: cholesky(&shifted_roe)?,
            })
        });
        let ctxs: Result<Vec<ChannelCtx>> = ctxs.into_iter().collect();
        let ctxs = ctxs?;

        let mut totals = FrameCounts::default();
        let mut frames: u64 = 0;
        loop {
            let batch = cfg.ber_batch_frames;
            let start = frames;
            let counts = map_trials(batch, 0, |i, _| -> Result<FrameCounts> {
                let abs = start + i as u64;
                let seed = child_seed(frame_seed, abs);
                let ctx = &ctxs[(abs % cfg.channels as u64) as usize];
                let frame = generate_frame(two_nu, 2, child_seed(seed, 0))?;
                let rf = transmit(&frame, &ctx.ch, child_seed(seed, 1));
                let y = matched_filter(&rf, &ctx.ch)?;
                let y_a = extract_real(&y, &ab)?;
                let le_soft = ctx.chol_le.solve(&y)?;
                let wle_soft: Vec<Complex64> = ctx
                    .coeffs
                    .c
                    .mul_vec(&y)?
                    .into_iter()
                    .zip(ctx.coeffs.d.mul_vec(&vec_conj(&y))?)
                    .map(|(a, b)| a + b)
                    .collect();
                let roe_soft = ctx.chol_roe.solve(&y_a)?;
                let mut fc = FrameCounts {
                    bits: two_nu as u64,
                    ..Default::default()
                };
                for n in 0..two_nu {
                    let truth = frame.amplitudes[n];
                    let d_le = hard_decision(informative_component(n, le_soft[n]));
                    let d_wle = hard_decision(informative_component(n, wle_soft[n]));
                    let d_roe = hard_decision(roe_soft[n]);
                    if d_le != truth {
                        fc.e_le += 1;
                    }
                    if d_wle != truth {
                        fc.e_wle += 1;
                    }
                    if d_roe != truth {
                        fc.e_roe += 1;
                    }
                    if roe_soft[n].abs() < tol::SLICER_GUARD {
                        fc.guarded += 1;
                    } else if d_roe != d_wle {
                        fc.mismatches += 1;
                    }
                }
                Ok(fc)
            });
            for c in counts {
                let c = c?;
                totals.bits += c.bits;
                totals.e_le += c.e_le;
                totals.e_wle += c.e_wle;
                totals.e_roe += c.e_roe;
                totals.mismatches += c.mismatches;
                totals.guarded += c.guarded;
            }
            frames += batch as u64;
            let enough_errors = totals.e_le.min(totals.e_wle).min(totals.e_roe)
                >= cfg.target_errors;
            if (totals.bits >= cfg.min_bits && enough_errors) || totals.bits >= cfg.max_bits {
                break;
            }
        }
        points.push(BerPoint {
            snr_db,
            frames,
            bits: totals.bits,
            errors_le: totals.e_le,
            errors_wle: totals.e_wle,
            errors_roe: totals.e_roe,
            mismatches: totals.mismatches,
            guarded: totals.guarded,
        });
    }

    let mut csv = csv_header(
        cfg,
        "snr_db,ber_le,ber_wle,ber_roe,trials,bits,bit_errors_le,bit_errors_wle,bit_errors_roe,mismatches_roe_wle,guarded_ties",
    );
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{:.6e},{:.6e},{:.6e},{},{},{},{},{},{},{}",
            p.snr_db,
            p.ber_le(),
            p.ber_wle(),
            p.ber_roe(),
            p.frames,
            p.bits,
            p.errors_le,
            p.errors_wle,
            p.errors_roe,
            p.mismatches,
            p.guarded
        );
    }

    let identity_ok = points.iter().all(|p| p.mismatches == 0);
    let dominance_ok = points.iter().all(|p| {
        let n = p.bits as f64;
        let (pl, pr) = (p.ber_le(), p.ber_roe());
        let sigma = ((pl * (1.0 - pl) + pr * (1.0 - pr)) / n).sqrt();
        pr <= pl + 2.0 * sigma
    });
    let mut report = String::new();
    let _ = writeln!(report, "ber-block: frame length {}, {} channels per point", two_nu, cfg.channels);
    for p in &points {
        let _ = writeln!(
            report,
            "snr {:>6.2} dB   ber le {:.4e}   wle {:.4e}   roe {:.4e}   ({} bits, {} mismatches, {} guarded)",
            p.snr_db,
            p.ber_le(),
            p.ber_wle(),
            p.ber_roe(),
            p.bits,
            p.mismatches,
            p.guarded
        );
    }
    let _ = writeln!(
        report,
        "roe and wle decisions identical outside guard band: {}",
        status(identity_ok)
    );
    let _ = writeln!(
        report,
        "roe ber <= le ber within 2 sigma at every point: {}",
        status(dominance_ok)
    );

    Ok((
        points,
        CommandOutput {
            files: vec![("ber_block.csv".into(), csv)],
            report,
            ok: identity_ok && dominance_ok,
        },
    ))
}

// ---------------------------------------------------------------------------
// timing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct TimingPoint {
    pub frame_len: usize,
    pub t_wle_us: f64,
    pub t_roe_us: f64,
}

impl TimingPoint {
    pub fn savings_pct(&self) -> f64 {
        100.0 * (self.t_wle_us - self.t_roe_us) / self.t_wle_us
    }
    pub fn savings_abs_us(&self) -> f64 {
        self.t_wle_us - self.t_roe_us
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Times the full block solve of both receivers over the configured frame
/// lengths: the widely linear path builds its coefficient matrices via a
/// complex HPD inversion and applies them; the real-only path builds the
/// realized matrix and runs one real HPD factor-and-solve. Signal
/// generation stays outside the timed regions, and measurements run on the
/// calling thread only.
pub fn run_timing(cfg: &RunConfig) -> Result<(Vec<TimingPoint>, CommandOutput)> {
    let sigma2 = 0.1; // fixed mid-grid noise level; the solve cost is SNR-independent
    let mut points = Vec::with_capacity(cfg.frame_lens.len());
    for (i, &frame_len) in cfg.frame_lens.iter().enumerate() {
        let ch = make_channel(cfg, child_seed(cfg.seed, 0x71 + i as u64), sigma2)?;
        let real = Realization::simulate(&ch, frame_len, child_seed(cfg.seed, 0x72 + i as u64))?;
        let mut t_wle = Vec::with_capacity(cfg.timing_reps);
        let mut t_roe = Vec::with_capacity(cfg.timing_reps);
        for _ in 0..cfg.timing_reps {
            let start = Instant::now();
            let coeffs = wle_coefficients(&real.gamma, sigma2, &real.ab)?;
            let direct = coeffs.c.mul_vec(&real.y)?;
            let conj_branch = coeffs.d.mul_vec(&vec_conj(&real.y))?;
            let soft: Vec<Complex64> = direct
                .into_iter()
                .zip(conj_branch)
                .map(|(a, b)| a + b)
                .collect();
            std::hint::black_box(&soft);
            t_wle.push(start.elapsed().as_secs_f64() * 1e6);

            let start = Instant::now();
            let gamma_a = realize_gamma_a(&real.gamma, &real.ab)?;
            let shifted = gamma_a.add_scaled_identity(sigma2 / 2.0)?;
            let soft = cholesky(&shifted)?.solve(&real.y_a)?;
            std::hint::black_box(&soft);
            t_roe.push(start.elapsed().as_secs_f64() * 1e6);
        }
        points.push(TimingPoint {
            frame_len,
            t_wle_us: median(t_wle),
            t_roe_us: median(t_roe),
        });
    }

    let mut csv = csv_header(cfg, "frame_len,t_wle_us,t_roe_us,savings_pct");
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{:.3},{:.3},{:.2}",
            p.frame_len,
            p.t_wle_us,
            p.t_roe_us,
            p.savings_pct()
        );
    }

    let faster_ok = points.iter().all(|p| p.t_roe_us < p.t_wle_us);
    let monotone_ok = points
        .windows(2)
        .all(|w| w[1].savings_abs_us() >= w[0].savings_abs_us());
    let mut report = String::new();
    let _ = writeln!(
        report,
        "timing: median of {} reps per frame length, single thread",
        cfg.timing_reps
    );
    for p in &points {
        let _ = writeln!(
            report,
            "frame {:>5}   wle {:>12.1} us   roe {:>12.1} us   savings {:>6.2}% ({:.1} us)",
            p.frame_len,
            p.t_wle_us,
            p.t_roe_us,
            p.savings_pct(),
            p.savings_abs_us()
        );
    }
    let _ = writeln!(report, "roe faster at every frame length: {}", status(faster_ok));
    let _ = writeln!(
        report,
        "absolute savings non-decreasing with frame length: {}",
        status(monotone_ok)
    );

    Ok((
        points,
        CommandOutput {
            files: vec![("timing.csv".into(), csv)],
            report,
            ok: faster_ok && monotone_ok,
        },
    ))
}

// ---------------------------------------------------------------------------
// nlms
// ---------------------------------------------------------------------------

/// Per-equalizer values in a fixed (le, wle, roe) order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ByKind<T> {
    pub le: T,
    pub wle: T,
    pub roe: T,
}

const KINDS: [EqualizerKind; 3] = [EqualizerKind::Le, EqualizerKind::Wle, EqualizerKind::Roe];

#[derive(Debug, Clone)]
pub struct NlmsResults {
    pub runs: usize,
    /// Runs where the steady-state MSE satisfies roe <= wle.
    pub ordering_roe_wle: usize,
    /// Runs additionally satisfying wle <= le.
    pub ordering_full: usize,
    pub steady_mean: ByKind<f64>,
    /// Pooled payload BER at the convergence-study SNR.
    pub payload_ber: ByKind<f64>,
    /// Smoothed ensemble-mean squared error per training step.
    pub curve: Vec<ByKind<f64>>,
    pub ber_points: Vec<NlmsBerPoint>,
}

#[derive(Debug, Clone, Copy)]
pub struct NlmsBerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub bits: u64,
    pub errors: ByKind<u64>,
}

struct NlmsRun {
    steady: ByKind<f64>,
    payload_errors: ByKind<u64>,
    payload_bits: u64,
    curves: ByKind<Vec<f64>>,
}

fn delta_for(cfg: &RunConfig, kind: EqualizerKind) -> f64 {
    match kind {
        EqualizerKind::Le => cfg.delta_le,
        EqualizerKind::Wle => cfg.delta_wle,
        EqualizerKind::Roe => cfg.delta_roe,
    }
}

fn by_kind_mut<T>(b: &mut ByKind<T>, kind: EqualizerKind) -> &mut T {
    match kind {
        EqualizerKind::Le => &mut b.le,
        EqualizerKind::Wle => &mut b.wle,
        EqualizerKind::Roe => &mut b.roe,
    }
}

fn nlms_single_run(cfg: &RunConfig, sigma2: f64, seed: u64, keep_curve: bool) -> Result<NlmsRun> {
    let l_b = cfg.taps.saturating_sub(1).max(1);
    let total = cfg.pilots + cfg.payload;
    let ch = random_channel(cfg.taps, cfg.decay, child_seed(seed, 0))?.with_sigma2(sigma2);
    let frame = generate_frame(total, 2, child_seed(seed, 1))?;
    let rf = transmit(&frame, &ch, child_seed(seed, 2));
    let mut run = NlmsRun {
        steady: ByKind::default(),
        payload_errors: ByKind::default(),
        payload_bits: cfg.payload as u64,
        curves: ByKind::default(),
    };
    for kind in KINDS {
        let nlms_cfg = NlmsConfig::new(kind, cfg.m, l_b, cfg.mu, delta_for(cfg, kind))?;
        let (state, errs) = train(&nlms_cfg, &frame, &rf.r, cfg.pilots)?;
        let tail = &errs[errs.len().saturating_sub(200)..];
        *by_kind_mut(&mut run.steady, kind) = tail.iter().sum::<f64>() / tail.len() as f64;
        let decisions = equalize_payload(&state, &nlms_cfg, &rf.r, cfg.pilots, cfg.payload);
        let errors = decisions
            .iter()
            .zip(&frame.amplitudes[cfg.pilots..total])
            .filter(|(d, a)| d != a)
            .count() as u64;
        *by_kind_mut(&mut run.payload_errors, kind) = errors;
        if keep_curve {
            *by_kind_mut(&mut run.curves, kind) = errs;
        }
    }
    Ok(run)
}

fn smooth(xs: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    for (i, x) in xs.iter().enumerate() {
        acc += x;
        if i >= w {
            acc -= xs[i - w];
        }
        out.push(acc / (i + 1).min(w) as f64);
    }
    out
}

pub fn run_nlms(cfg: &RunConfig) -> Result<(NlmsResults, CommandOutput)> {
    // Convergence study at the configured SNR.
    let sigma2 = snr_db_to_sigma2(cfg.nlms_snr_db);
    let conv_seed = child_seed(cfg.seed, 0xA0);
    let runs = map_trials(cfg.nlms_runs, conv_seed, |_, seed| {
        nlms_single_run(cfg, sigma2, seed, true)
    });
    let runs: Result<Vec<NlmsRun>> = runs.into_iter().collect();
    let runs = runs?;

    let mut ordering_roe_wle = 0usize;
    let mut ordering_full = 0usize;
    let mut steady_sum = ByKind::<f64>::default();
    let mut payload_errors = ByKind::<u64>::default();
    let mut payload_bits = 0u64;
    let mut mean_curve = vec![ByKind::<f64>::default(); cfg.pilots];
    for run in &runs {
        if run.steady.roe <= run.steady.wle {
            ordering_roe_wle += 1;
            if run.steady.wle <= run.steady.le {
                ordering_full += 1;
            }
        }
        steady_sum.le += run.steady.le;
        steady_sum.wle += run.steady.wle;
        steady_sum.roe += run.steady.roe;
        payload_errors.le += run.payload_errors.le;
        payload_errors.wle += run.payload_errors.wle;
        payload_errors.roe += run.payload_errors.roe;
        payload_bits += run.payload_bits;
        for (m, (l, (w, r))) in mean_curve.iter_mut().zip(
            run.curves
                .le
                .iter()
                .zip(run.curves.wle.iter().zip(run.curves.roe.iter())),
        ) {
            m.le += l;
            m.wle += w;
            m.roe += r;
        }
    }
    let n = runs.len() as f64;
    let steady_mean = ByKind {
        le: steady_sum.le / n,
        wle: steady_sum.wle / n,
        roe: steady_sum.roe / n,
    };
    let payload_ber = ByKind {
        le: payload_errors.le as f64 / payload_bits as f64,
        wle: payload_errors.wle as f64 / payload_bits as f64,
        roe: payload_errors.roe as f64 / payload_bits as f64,
    };
    let le_raw: Vec<f64> = mean_curve.iter().map(|b| b.le / n).collect();
    let wle_raw: Vec<f64> = mean_curve.iter().map(|b| b.wle / n).collect();
    let roe_raw: Vec<f64> = mean_curve.iter().map(|b| b.roe / n).collect();
    let (le_s, wle_s, roe_s) = (
        smooth(&le_raw, cfg.smoothing_window),
        smooth(&wle_raw, cfg.smoothing_window),
        smooth(&roe_raw, cfg.smoothing_window),
    );
    let curve: Vec<ByKind<f64>> = (0..cfg.pilots)
        .map(|i| ByKind {
            le: le_s[i],
            wle: wle_s[i],
            roe: roe_s[i],
        })
        .collect();

    // Payload BER over the SNR grid.
    let ber_seed = child_seed(cfg.seed, 0xA1);
    let mut ber_points = Vec::with_capacity(cfg.snr_db.len());
    for (s, &snr_db) in cfg.snr_db.iter().enumerate() {
        let s2 = snr_db_to_sigma2(snr_db);
        let point_seed = child_seed(ber_seed, s as u64);
        let runs = map_trials(cfg.nlms_runs, point_seed, |_, seed| {
            nlms_single_run(cfg, s2, seed, false)
        });
        let mut errors = ByKind::<u64>::default();
        let mut bits = 0u64;
        for run in runs {
            let run = run?;
            errors.le += run.payload_errors.le;
            errors.wle += run.payload_errors.wle;
            errors.roe += run.payload_errors.roe;
            bits += run.payload_bits;
        }
        ber_points.push(NlmsBerPoint {
            snr_db,
            trials: cfg.nlms_runs as u64,
            bits,
            errors,
        });
    }

    let results = NlmsResults {
        runs: runs.len(),
        ordering_roe_wle,
        ordering_full,
        steady_mean,
        payload_ber,
        curve,
        ber_points,
    };

    let mut conv_csv = csv_header(cfg, "step,mse_le,mse_wle,mse_roe");
    for (i, b) in results.curve.iter().enumerate() {
        let _ = writeln!(conv_csv, "{},{:.6e},{:.6e},{:.6e}", i, b.le, b.wle, b.roe);
    }
    let mut ber_csv = csv_header(
        cfg,
        "snr_db,ber_le,ber_wle,ber_roe,trials,bits,bit_errors_le,bit_errors_wle,bit_errors_roe",
    );
    for p in &results.ber_points {
        let _ = writeln!(
            ber_csv,
            "{},{:.6e},{:.6e},{:.6e},{},{},{},{},{}",
            p.snr_db,
            p.errors.le as f64 / p.bits as f64,
            p.errors.wle as f64 / p.bits as f64,
            p.errors.roe as f64 / p.bits as f64,
            p.trials,
            p.bits,
            p.errors.le,
            p.errors.wle,
            p.errors.roe
        );
    }

    let ordering_ok = results.ordering_roe_wle * 100 >= results.runs * 80;
    let ber_ok = results.payload_ber.roe <= results.payload_ber.wle;
    let mut report = String::new();
    let _ = writeln!(
        report,
        "nlms: {} runs, {} pilots + {} payload, m = {}, snr {} dB",
        results.runs, cfg.pilots, cfg.payload, cfg.m, cfg.nlms_snr_db
    );
    let _ = writeln!(
        report,
        "steady-state mse   le {:.4e}   wle {:.4e}   roe {:.4e}",
        results.steady_mean.le, results.steady_mean.wle, results.steady_mean.roe
    );
    let _ = writeln!(
        report,
        "steady-state ordering roe <= wle in {}/{} runs ({})",
        results.ordering_roe_wle,
        results.runs,
        status(ordering_ok)
    );
    let _ = writeln!(
        report,
        "full ordering roe <= wle <= le in {}/{} runs",
        results.ordering_full, results.runs
    );
    let _ = writeln!(
        report,
        "payload ber        le {:.4e}   wle {:.4e}   roe {:.4e}   (roe <= wle: {})",
        results.payload_ber.le,
        results.payload_ber.wle,
        results.payload_ber.roe,
        status(ber_ok)
    );

    Ok((
        results,
        CommandOutput {
            files: vec![
                ("nlms_convergence.csv".into(), conv_csv),
                ("nlms_ber.csv".into(), ber_csv),
            ],
            report,
            ok: ordering_ok && ber_ok,
        },
    ))
}
