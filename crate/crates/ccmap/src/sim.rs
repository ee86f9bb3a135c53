//! Seeded Monte Carlo harness: logical-failure curves over rate grids
//! and crossing-point threshold estimation.
//!
//! Every trial draws its RNG from (master seed, size index, rate index,
//! trial index), so counts are identical for any worker count.

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::colex::{build_hexagonal, build_square_octagon, Colex, ColexError};
use crate::decode::{DecoderContext, ErasureMapMode};
use crate::noise::{induced_marginals, sample, Channel, ChannelSample, NoiseError};
use crate::syndrome::measure;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid lattice: {0}")]
    Lattice(#[from] ColexError),
    #[error("invalid channel: {0}")]
    Channel(#[from] NoiseError),
    #[error("config needs at least one trial, one rate and one size")]
    EmptyConfig,
    #[error("decoder inconsistency in trial {trial} (size {size}, rate {rate}): {message}")]
    Decoder {
        size: usize,
        rate: f64,
        trial: u64,
        message: String,
    },
    #[error("no curve crossing inside the scanned window")]
    NoCrossing,
    #[error("threshold estimation needs at least two sizes on a shared rate grid")]
    BadCurves,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeFamily {
    SquareOctagon,
    Hexagonal,
}

impl LatticeFamily {
    pub fn build(self, size: usize) -> Result<Colex, ColexError> {
        match self {
            LatticeFamily::SquareOctagon => build_square_octagon(size),
            LatticeFamily::Hexagonal => build_hexagonal(size),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::SquareOctagon => "square-octagon",
            LatticeFamily::Hexagonal => "hexagonal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "square-octagon" => Some(LatticeFamily::SquareOctagon),
            "hexagonal" => Some(LatticeFamily::Hexagonal),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    Erasure,
}

impl ChannelKind {
    pub fn at(self, rate: f64) -> Channel {
        match self {
            ChannelKind::BitFlip => Channel::BitFlip(rate),
            ChannelKind::PhaseFlip => Channel::PhaseFlip(rate),
            ChannelKind::Erasure => Channel::Erasure(rate),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bitflip",
            ChannelKind::PhaseFlip => "phaseflip",
            ChannelKind::Erasure => "erasure",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bitflip" => Some(ChannelKind::BitFlip),
            "phaseflip" => Some(ChannelKind::PhaseFlip),
            "erasure" => Some(ChannelKind::Erasure),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub family: LatticeFamily,
    pub sizes: Vec<usize>,
    pub channel: ChannelKind,
    pub rates: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// 0 uses the default rayon pool size.
    pub workers: usize,
    /// Weight matchings by the induced marginals (Pauli channels only).
    pub weighted: bool,
    /// Use the union erasure map on every instance.
    pub naive_erasure: bool,
}

#[derive(Clone, Debug)]
pub struct SimPoint {
    pub family: LatticeFamily,
    pub size: usize,
    pub channel: ChannelKind,
    pub rate: f64,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub wall_secs: f64,
}

/// 95% Wilson score interval.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial substream keyed by (seed, size index, rate index, trial).
pub fn trial_rng(seed: u64, size_idx: u64, rate_idx: u64, trial: u64) -> ChaCha8Rng {
    let mut s = splitmix(seed);
    s = splitmix(s ^ size_idx);
    s = splitmix(s ^ rate_idx.wrapping_mul(0x517cc1b727220a95));
    s = splitmix(s ^ trial.wrapping_mul(0x2545f4914f6cdd1d));
    ChaCha8Rng::seed_from_u64(s)
}

fn run_trial(
    ctx: &DecoderContext,
    channel: Channel,
    erasure_mode: ErasureMapMode,
    rng: &mut ChaCha8Rng,
) -> Result<bool, String> {
    let n = ctx.n_qubits();
    let drawn = sample(channel, n, rng).map_err(|e| e.to_string())?;
    let (error, correction) = match drawn {
        ChannelSample::Pauli(error) => {
            let s = measure(&ctx.colex, &error);
            let corr = ctx.decode_color(&s).map_err(|e| e.to_string())?;
            (error, corr)
        }
        ChannelSample::Erasure(draw) => {
            let s = measure(&ctx.colex, &draw.error);
            let corr = ctx
                .decode_erasure(&draw.erased, &s, erasure_mode)
                .map_err(|e| e.to_string())?;
            (draw.error, corr)
        }
    };
    let success = ctx.classify(&error, &correction).map_err(|e| e.to_string())?;
    Ok(!success)
}

/// Run the full grid; points come back ordered by (size, rate).
pub fn run(config: &SimConfig) -> Result<Vec<SimPoint>, SimError> {
    if config.trials == 0 || config.rates.is_empty() || config.sizes.is_empty() {
        return Err(SimError::EmptyConfig);
    }
    for &r in &config.rates {
        config.channel.at(r).check()?;
    }
    let erasure_mode = if config.naive_erasure {
        ErasureMapMode::Naive
    } else {
        ErasureMapMode::Improved
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("thread pool");

    let mut points = Vec::new();
    for (size_idx, &size) in config.sizes.iter().enumerate() {
        let colex = config.family.build(size)?;
        let color = colex.default_contract_color();
        let base_ctx = if config.weighted {
            None
        } else {
            Some(DecoderContext::new(colex.clone(), color))
        };
        for (rate_idx, &rate) in config.rates.iter().enumerate() {
            let channel = config.channel.at(rate);
            let weighted_ctx = if config.weighted && config.channel != ChannelKind::Erasure {
                let surface =
                    crate::contraction::contract(&colex, color).expect("validated lattice");
                let labeling = crate::colex::label_faces(&colex, color);
                let model = induced_marginals(&surface, &labeling, channel)?;
                Some(DecoderContext::with_weights(colex.clone(), color, &model))
            } else if config.weighted {
                Some(DecoderContext::new(colex.clone(), color))
            } else {
                None
            };
            let ctx = weighted_ctx.as_ref().or(base_ctx.as_ref()).unwrap();

            let start = Instant::now();
            let outcome: Result<u64, (u64, String)> = pool.install(|| {
                (0..config.trials)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng =
                            trial_rng(config.seed, size_idx as u64, rate_idx as u64, t);
                        match run_trial(ctx, channel, erasure_mode, &mut rng) {
                            Ok(failed) => Ok(failed as u64),
                            Err(msg) => Err((t, msg)),
                        }
                    })
                    .try_reduce(|| 0, |a, b| Ok(a + b))
            });
            let failures = outcome.map_err(|(trial, message)| SimError::Decoder {
                size,
                rate,
                trial,
                message,
            })?;
            let (ci_lo, ci_hi) = wilson_interval(failures, config.trials);
            points.push(SimPoint {
                family: config.family,
                size,
                channel: config.channel,
                rate,
                trials: config.trials,
                failures,
                failure_rate: failures as f64 / config.trials as f64,
                ci_lo,
                ci_hi,
                seed: config.seed,
                wall_secs: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(points)
}

#[derive(Clone, Debug)]
pub struct ThresholdEstimate {
    pub estimate: f64,
    pub uncertainty: f64,
    /// Per size pair: (smaller L, larger L, crossing rate).
    pub pair_crossings: Vec<(usize, usize, f64)>,
}

/// Crossing-point estimate from linearly interpolated failure curves of
/// at least two sizes sharing a rate grid. The estimate is the mean of
/// the pairwise crossings; the uncertainty combines their spread with
/// the crossing shift under the Wilson bands, in quadrature.
pub fn estimate_threshold(points: &[SimPoint]) -> Result<ThresholdEstimate, SimError> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(SimError::BadCurves);
    }
    let curve = |size: usize| -> Vec<&SimPoint> {
        let mut c: Vec<&SimPoint> = points.iter().filter(|p| p.size == size).collect();
        c.sort_by(|a, b| a.rate.partial_cmp(&b.rate).unwrap());
        c
    };
    let grid: Vec<f64> = curve(sizes[0]).iter().map(|p| p.rate).collect();
    if grid.len() < 2 {
        return Err(SimError::BadCurves);
    }
    for &s in &sizes[1..] {
        let rates: Vec<f64> = curve(s).iter().map(|p| p.rate).collect();
        if rates.len() != grid.len()
            || rates.iter().zip(&grid).any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(SimError::BadCurves);
        }
    }
    let grid_step = grid[1] - grid[0];

    // sign-change crossings of a difference curve, linearly interpolated
    let crossings = |d: &[f64]| -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..d.len() - 1 {
            if d[i] == 0.0 {
                out.push(grid[i]);
            } else if d[i] * d[i + 1] < 0.0 {
                let t = d[i] / (d[i] - d[i + 1]);
                out.push(grid[i] + t * (grid[i + 1] - grid[i]));
            }
        }
        if *d.last().unwrap() == 0.0 {
            out.push(*grid.last().unwrap());
        }
        out
    };
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;

    let mut pair_crossings = Vec::new();
    let mut ci_terms = Vec::new();
    for a in 0..sizes.len() {
        for b in (a + 1)..sizes.len() {
            let (small, large) = (curve(sizes[a]), curve(sizes[b]));
            let d: Vec<f64> = small
                .iter()
                .zip(&large)
                .map(|(s, l)| s.failure_rate - l.failure_rate)
                .collect();
            let found = crossings(&d);
            if found.is_empty() {
                continue;
            }
            pair_crossings.push((sizes[a], sizes[b], mean(&found)));

            // crossing shift when the curves move to their band edges
            let d_hi: Vec<f64> = small
                .iter()
                .zip(&large)
                .map(|(s, l)| s.ci_hi - l.ci_lo)
                .collect();
            let d_lo: Vec<f64> = small
                .iter()
                .zip(&large)
                .map(|(s, l)| s.ci_lo - l.ci_hi)
                .collect();
            let (hi, lo) = (crossings(&d_hi), crossings(&d_lo));
            if !hi.is_empty() && !lo.is_empty() {
                ci_terms.push((mean(&hi) - mean(&lo)).abs() / 2.0);
            } else {
                ci_terms.push(grid_step);
            }
        }
    }
    if pair_crossings.is_empty() {
        return Err(SimError::NoCrossing);
    }
    let values: Vec<f64> = pair_crossings.iter().map(|&(_, _, c)| c).collect();
    let estimate = mean(&values);
    let spread = if values.len() > 1 {
        (values.iter().map(|v| (v - estimate).powi(2)).sum::<f64>() / (values.len() - 1) as f64)
            .sqrt()
    } else {
        0.0
    };
    let ci = mean(&ci_terms);
    Ok(ThresholdEstimate {
        estimate,
        uncertainty: (spread * spread + ci * ci).sqrt(),
        pair_crossings,
    })
}
