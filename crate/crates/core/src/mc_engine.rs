//! Seeded Monte Carlo for double and triple coincidences.
//!
//! Trials are split into `streams` contiguous blocks. Block `i` draws from
//! ChaCha20 seeded with `seed` on stream `i`, so the result depends only on
//! `(seed, trials, streams)` and never on thread scheduling. Block results
//! are reduced in block order.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::{
    aspect_probabilities, entangled_first_principles, triple_closed_form, triple_setup,
    TripleSettings,
};
use crate::optics::{malus_probability, PolarizerSetting};
use crate::sources::{sample_disentangled_pair, EnsembleParams, PairSample, SourceModel};

/// Identifies the generator in output metadata.
pub const RNG_ALGORITHM: &str = "chacha20/rand_chacha-0.9;stream=block-index";

/// Stream reserved for accidental-coincidence injection.
const ACCIDENTAL_STREAM: u64 = u64::MAX;
/// Stream count used by [`estimate_detection_rate`].
pub const DEFAULT_STREAMS: usize = 8;

/// Phase-matching window of 0.58°, in radians; `eprsim rate` uses it when
/// `--phase-window` is absent.
pub const DEFAULT_PHASE_WINDOW: f64 = 0.58 * PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Acceptance half-width on |φ₃ − φ₂|; `f64::INFINITY` disables the cut.
    pub phase_window: f64,
    /// Per-trial probability of an extra uncorrelated coincidence.
    pub accidental_rate: f64,
    pub streams: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1,
            phase_window: f64::INFINITY,
            accidental_rate: 0.0,
            streams: DEFAULT_STREAMS,
        }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            ..Default::default()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if self.streams == 0 {
            return Err(Error::InvalidArgument("streams must be positive".into()));
        }
        if self.phase_window.is_nan() || self.phase_window < 0.0 {
            return Err(Error::InvalidArgument("phase window must be >= 0".into()));
        }
        if !(0.0..1.0).contains(&self.accidental_rate) {
            return Err(Error::InvalidArgument(
                "accidental rate must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Double-coincidence channel counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoincidenceCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub n_trials: u64,
    /// Accidental coincidences included in the channel counts.
    pub n_accidental: u64,
}

impl CoincidenceCounts {
    pub fn from_channels(channels: [u64; 4], n_trials: u64) -> Self {
        Self {
            n_pp: channels[0],
            n_pm: channels[1],
            n_mp: channels[2],
            n_mm: channels[3],
            n_trials,
            n_accidental: 0,
        }
    }

    pub fn channels(&self) -> [u64; 4] {
        [self.n_pp, self.n_pm, self.n_mp, self.n_mm]
    }

    pub fn detected(&self) -> u64 {
        self.channels().iter().sum()
    }

    /// Accidentals guaranteed to sit in every channel after
    /// [`inject_accidentals`]: `⌊n_accidental / 4⌋`.
    pub fn accidental_floor(&self) -> u64 {
        self.n_accidental / 4
    }

    fn merge(self, other: Self) -> Self {
        Self {
            n_pp: self.n_pp + other.n_pp,
            n_pm: self.n_pm + other.n_pm,
            n_mp: self.n_mp + other.n_mp,
            n_mm: self.n_mm + other.n_mm,
            n_trials: self.n_trials + other.n_trials,
            n_accidental: self.n_accidental + other.n_accidental,
        }
    }
}

/// Maps an angle difference onto `(−π, π]`.
pub fn wrap_phase(d: f64) -> f64 {
    let r = d.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Phase-matching acceptance: `|wrap(φ₃ − φ₂)| < window`.
pub fn phase_accept(phi2: f64, phi3: f64, window: f64) -> bool {
    wrap_phase(phi3 - phi2).abs() < window
}

fn block_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn block_sizes(trials: u64, streams: usize) -> Vec<u64> {
    let s = streams as u64;
    let (base, extra) = (trials / s, trials % s);
    (0..s).map(|i| base + u64::from(i < extra)).collect()
}

/// Runs `f(rng, block_trials)` on every block in parallel and returns the
/// per-block results in block order.
fn run_blocks<T, F>(cfg: &McConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha20Rng, u64) -> T + Sync,
{
    block_sizes(cfg.trials, cfg.streams)
        .into_par_iter()
        .enumerate()
        .map(|(i, n)| {
            let mut rng = block_rng(cfg.seed, i as u64);
            f(&mut rng, n)
        })
        .collect()
}

fn sample_channel<R: Rng + ?Sized>(rng: &mut R, probs: &[f64; 4]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate().take(3) {
        acc += p;
        if u < acc {
            return i;
        }
    }
    3
}

fn ensemble_params(model: &SourceModel) -> Option<EnsembleParams> {
    match model {
        SourceModel::DisentangledEnsemble(p) => Some(*p),
        SourceModel::EntangledPair(_) => None,
    }
}

/// Double-coincidence counting at polarizers `a` (photon 2) and `b` (photon 3).
///
/// Entangled pairs draw a joint outcome from the Born probabilities. Ensemble
/// pairs are first subjected to the phase window (rejected trials still count
/// towards `n_trials`), then each photon exits its polarizing beam splitter
/// independently with Malus probability. Accidentals are injected afterwards
/// when `cfg.accidental_rate > 0`.
pub fn run_double_coincidence(
    model: &SourceModel,
    a: &PolarizerSetting,
    b: &PolarizerSetting,
    cfg: &McConfig,
) -> Result<CoincidenceCounts> {
    cfg.validate()?;
    let blocks: Vec<[u64; 4]> = match ensemble_params(model) {
        None => {
            let probs = aspect_probabilities(model, a, b)?.as_array();
            run_blocks(cfg, |rng, n| {
                let mut ch = [0u64; 4];
                for _ in 0..n {
                    ch[sample_channel(rng, &probs)] += 1;
                }
                ch
            })
        }
        Some(params) => run_blocks(cfg, |rng, n| {
            let mut ch = [0u64; 4];
            for _ in 0..n {
                let pair = sample_disentangled_pair(rng, &params);
                if !phase_accept(pair.axis.phi2, pair.axis.phi3, cfg.phase_window) {
                    continue;
                }
                let plus2 = rng.random::<f64>() < malus_probability(pair.axis2(), a);
                let plus3 = rng.random::<f64>() < malus_probability(pair.axis3(), b);
                let idx = match (plus2, plus3) {
                    (true, true) => 0,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 3,
                };
                ch[idx] += 1;
            }
            ch
        }),
    };
    let counts = blocks
        .into_iter()
        .zip(block_sizes(cfg.trials, cfg.streams))
        .map(|(ch, n)| CoincidenceCounts::from_channels(ch, n))
        .fold(CoincidenceCounts::default(), CoincidenceCounts::merge);
    if cfg.accidental_rate > 0.0 {
        let mut rng = block_rng(cfg.seed, ACCIDENTAL_STREAM);
        inject_accidentals(&counts, cfg.accidental_rate, &mut rng)
    } else {
        Ok(counts)
    }
}

/// Adds `Binomial(n_trials, rate)` uncorrelated coincidences.
///
/// The events are shared out equally over the four channels; the remainder
/// (fewer than four events) goes to distinct channels chosen at random.
pub fn inject_accidentals<R: RngCore + ?Sized>(
    counts: &CoincidenceCounts,
    rate: f64,
    rng: &mut R,
) -> Result<CoincidenceCounts> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::InvalidArgument(
            "accidental rate must lie in [0, 1)".into(),
        ));
    }
    if rate == 0.0 {
        return Ok(*counts);
    }
    let dist = Binomial::new(counts.n_trials, rate)
        .map_err(|e| Error::InvalidArgument(format!("binomial: {e}")))?;
    let extra = dist.sample(rng);
    let mut ch = counts.channels();
    for c in ch.iter_mut() {
        *c += extra / 4;
    }
    let mut order = [0usize, 1, 2, 3];
    // Partial Fisher-Yates: the first `remainder` entries are distinct channels.
    let remainder = (extra % 4) as usize;
    for i in 0..remainder {
        let j = rng.random_range(i..4);
        order.swap(i, j);
        ch[order[i]] += 1;
    }
    Ok(CoincidenceCounts {
        n_accidental: counts.n_accidental + extra,
        ..CoincidenceCounts::from_channels(ch, counts.n_trials)
    })
}

/// Triple-coincidence estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleEstimate {
    pub value: f64,
    pub std_err: f64,
    pub trials: u64,
    /// Trials that passed the phase window (all of them for entangled pairs).
    pub accepted: u64,
    /// The closed-form value for the same model and settings, if defined.
    pub analytic: Option<f64>,
}

impl TripleEstimate {
    pub fn deviation(&self) -> Option<f64> {
        self.analytic.map(|a| self.value - a)
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }
}

/// Monte Carlo estimate of a triple-coincidence expectation.
///
/// Entangled: each trial is a Bernoulli draw with the Born probability of the
/// measured projection; the estimate is the hit fraction. Ensemble: each
/// accepted trial contributes the Born probability of the measured state
/// against `ρ¹ ⊗ |s₂⟩⟨s₂| ⊗ |s₃⟩⟨s₃|` (averaged, not sampled). Accidental
/// injection does not apply to triple coincidences.
pub fn run_triple_coincidence(
    model: &SourceModel,
    settings: &TripleSettings,
    cfg: &McConfig,
) -> Result<TripleEstimate> {
    cfg.validate()?;
    let analytic = triple_closed_form(model, settings).ok();
    let physical = settings.born_equivalent();
    let moments = match ensemble_params(model) {
        None => {
            let p = entangled_first_principles(model, &physical)?;
            run_blocks(cfg, |rng, n| {
                let hits = (0..n).filter(|_| rng.random::<f64>() < p).count() as f64;
                Moments { n, sum: hits, sum_sq: hits }
            })
        }
        Some(params) => {
            let setup = triple_setup(&physical)?;
            let results: Vec<Result<Moments>> = run_blocks(cfg, |rng, n| {
                let mut m = Moments::default();
                for _ in 0..n {
                    let pair: PairSample = sample_disentangled_pair(rng, &params);
                    if !phase_accept(pair.axis.phi2, pair.axis.phi3, cfg.phase_window) {
                        continue;
                    }
                    let amp = setup
                        .measured
                        .product_overlap(&[&setup.alice, &pair.state2, &pair.state3])?;
                    m.push(amp.norm_sqr());
                }
                Ok(m)
            });
            results.into_iter().collect::<Result<Vec<_>>>()?
        }
    };
    let m = moments.into_iter().fold(Moments::default(), Moments::merge);
    if m.n == 0 {
        return Err(Error::InvalidArgument(
            "no trial passed the phase window".into(),
        ));
    }
    let n = m.n as f64;
    let mean = m.sum / n;
    let var = (m.sum_sq / n - mean * mean).max(0.0);
    Ok(TripleEstimate {
        value: mean,
        std_err: (var / n).sqrt(),
        trials: cfg.trials,
        accepted: m.n,
        analytic,
    })
}

/// Fraction of ensemble pairs passing the phase window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    pub std_err: f64,
    pub accepted: u64,
    pub trials: u64,
}

/// Acceptance rate under independent uniform phases: `min(window/π, 1)`.
pub fn detection_rate_analytic(window: f64) -> f64 {
    (window / PI).clamp(0.0, 1.0)
}

/// Monte Carlo phase-matching acceptance rate with an explicit configuration
/// (`cfg.phase_window` is the window; accidentals are ignored).
pub fn detection_rate(cfg: &McConfig) -> Result<RateEstimate> {
    cfg.validate()?;
    let window = cfg.phase_window;
    let accepted: u64 = run_blocks(cfg, |rng, n| {
        let mut k = 0u64;
        for _ in 0..n {
            let phi2 = rng.random::<f64>() * TAU;
            let phi3 = rng.random::<f64>() * TAU;
            k += u64::from(phase_accept(phi2, phi3, window));
        }
        k
    })
    .into_iter()
    .sum();
    let rate = accepted as f64 / cfg.trials as f64;
    Ok(RateEstimate {
        rate,
        std_err: (rate * (1.0 - rate) / cfg.trials as f64).sqrt(),
        accepted,
        trials: cfg.trials,
    })
}

pub fn estimate_detection_rate(window: f64, trials: u64, seed: u64) -> Result<RateEstimate> {
    detection_rate(&McConfig {
        phase_window: window,
        ..McConfig::new(trials, seed)
    })
}
