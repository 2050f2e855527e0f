//! Seeded Monte Carlo of the block protocol and of the two memory-swap
//! scheduling protocols.
//!
//! Randomness is counter based: trial `i` of a run with seed `s` draws from
//! ChaCha8 keyed by `s` on stream `i`. Any partition of trials over workers
//! therefore sees identical sample streams, and all aggregation is integer
//! addition, so results are bit-identical for every worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{any_success, derived_probabilities, effective_swap_prob, link_success_prob};
use crate::params::{ChannelParams, HardwareParams, LossModel, RepeaterConfig};

/// Below this many trials the binomial error bars are not trustworthy.
pub const MIN_RELIABLE_TRIALS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl SimConfig {
    pub fn new(seed: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        Ok(SimConfig {
            seed,
            trials,
            workers: None,
        })
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }
}

/// Independent random stream of one trial.
#[derive(Clone)]
pub struct TrialStreams {
    base: ChaCha8Rng,
}

impl TrialStreams {
    pub fn new(seed: u64) -> Self {
        TrialStreams {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(trial);
        rng.set_word_pos(0);
        rng
    }
}

/// Runs `trial` for every index and sums the per-trial accumulators.
fn run_trials<A, F>(sim: &SimConfig, trial: F) -> Result<A>
where
    A: Default + Send + MergeAdd,
    F: Fn(&mut ChaCha8Rng, &mut A) + Sync,
{
    let streams = TrialStreams::new(sim.seed);
    let work = || {
        (0..sim.trials)
            .into_par_iter()
            .fold(A::default, |mut acc, i| {
                let mut rng = streams.stream(i);
                trial(&mut rng, &mut acc);
                acc
            })
            .reduce(A::default, |mut a, b| {
                a.merge(b);
                a
            })
    };
    match sim.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid("workers", e.to_string()))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

trait MergeAdd {
    fn merge(&mut self, other: Self);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkOutcome {
    /// 1-based slot of the first heralded attempt.
    pub first_slot: Option<u64>,
    /// 1-based slot of the last heralded attempt.
    pub last_slot: Option<u64>,
}

impl LinkOutcome {
    pub fn succeeded(&self) -> bool {
        self.first_slot.is_some()
    }
}

/// Draws M·m Bernoulli(p_attempt) heralding attempts for one elementary link.
pub fn sample_link<R: Rng>(rng: &mut R, p_attempt: f64, channels: u32, m: u64) -> LinkOutcome {
    let mut out = LinkOutcome::default();
    for slot in 1..=m {
        // Later channels in a slot cannot change either marker once one heralds.
        if (0..channels).any(|_| rng.random::<f64>() < p_attempt) {
            out.first_slot.get_or_insert(slot);
            out.last_slot = Some(slot);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockOutcome {
    /// One entry per elementary link, left to right.
    pub links: Vec<LinkOutcome>,
    /// One entry per repeater station.
    pub swaps: Vec<bool>,
    pub delivered: bool,
}

/// One m·τ block of the whole chain with swap success probability `q_eff`.
pub fn simulate_block<R: Rng>(
    rng: &mut R,
    p_attempt: f64,
    channels: u32,
    cfg: &RepeaterConfig,
    q_eff: f64,
) -> BlockOutcome {
    let links: Vec<LinkOutcome> = (0..cfg.links())
        .map(|_| sample_link(rng, p_attempt, channels, cfg.m))
        .collect();
    let swaps: Vec<bool> = (0..cfg.n).map(|_| rng.random::<f64>() < q_eff).collect();
    let delivered = links.iter().all(LinkOutcome::succeeded) && swaps.iter().all(|&s| s);
    BlockOutcome {
        links,
        swaps,
        delivered,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Delivered ebits per second.
    pub rate: f64,
    pub std_error: f64,
    /// Fraction of blocks that delivered an ebit.
    pub fraction: f64,
    pub fraction_std_error: f64,
    pub delivered: u64,
    pub trials: u64,
    pub low_trial_count: bool,
}

impl RateEstimate {
    fn from_counts(delivered: u64, trials: u64, block_s: f64) -> Self {
        let fraction = delivered as f64 / trials as f64;
        let fraction_std_error = (fraction * (1.0 - fraction) / trials as f64).sqrt();
        let low_trial_count = trials < MIN_RELIABLE_TRIALS;
        if low_trial_count {
            log::warn!("{trials} trials give unreliable error bars (< {MIN_RELIABLE_TRIALS})");
        }
        RateEstimate {
            rate: fraction / block_s,
            std_error: fraction_std_error / block_s,
            fraction,
            fraction_std_error,
            delivered,
            trials,
            low_trial_count,
        }
    }

    /// (estimate − reference)/std_error; infinite when the estimate has no spread
    /// but misses the reference.
    pub fn z_score(&self, reference_rate: f64) -> f64 {
        let diff = self.rate - reference_rate;
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

#[derive(Default)]
struct Count(u64);

impl MergeAdd for Count {
    fn merge(&mut self, other: Self) {
        self.0 += other.0;
    }
}

/// Monte Carlo estimate of the end-to-end rate.
pub fn simulate_rate(
    ch: &ChannelParams,
    hw: &HardwareParams,
    cfg: &RepeaterConfig,
    model: LossModel,
    sim: &SimConfig,
) -> Result<RateEstimate> {
    let d = derived_probabilities(ch, hw, cfg, model);
    let count: Count = run_trials(sim, |rng, acc: &mut Count| {
        if simulate_block(rng, d.p_attempt, hw.channels, cfg, d.q_eff).delivered {
            acc.0 += 1;
        }
    })?;
    Ok(RateEstimate::from_counts(count.0, sim.trials, cfg.m as f64 * hw.tau_s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapProtocol {
    /// Swap the first heralded memory on each side; Y = |X_L − X_R|.
    FirstSuccess,
    /// Swap the most recently heralded memories at block end; Y = X_L + X_R.
    LeastWaitEndOfBlock,
}

impl std::fmt::Display for SwapProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            SwapProtocol::FirstSuccess => "first-success",
            SwapProtocol::LeastWaitEndOfBlock => "least-wait-end-of-block",
        })
    }
}

/// Wait markers (X_L, X_R) of the station between `left` and `right`.
///
/// First-success markers are 1-based slot indices; end-of-block markers count
/// slots after the last herald, in [0, m−1].
pub fn wait_markers(protocol: SwapProtocol, left: &LinkOutcome, right: &LinkOutcome, m: u64) -> Option<(u64, u64)> {
    match protocol {
        SwapProtocol::FirstSuccess => Some((left.first_slot?, right.first_slot?)),
        SwapProtocol::LeastWaitEndOfBlock => Some((m - left.last_slot?, m - right.last_slot?)),
    }
}

pub fn wait_time(protocol: SwapProtocol, x_left: u64, x_right: u64) -> u64 {
    match protocol {
        SwapProtocol::FirstSuccess => x_left.abs_diff(x_right),
        SwapProtocol::LeastWaitEndOfBlock => x_left + x_right,
    }
}

/// E|X₁ − X₂| for i.i.d. geometric X on {1, 2, ...} with success probability p.
pub fn delta1(p: f64) -> f64 {
    2.0 * (1.0 - p) / ((2.0 - p) * p)
}

/// The double series 2p² Σ_j (1−p)^{2j} Σ_{s≤j} s/(1−p)^s, truncated at `terms`.
pub fn delta1_series(p: f64, terms: u32) -> f64 {
    let r = 1.0 - p;
    // h_j = (1−p)^j Σ_{s≤j} s/(1−p)^s stays bounded where the raw inner sum overflows.
    let (mut total, mut h, mut rj) = (0.0, 0.0, 1.0);
    for j in 1..=terms {
        h = r * h + f64::from(j);
        rj *= r;
        total += rj * h;
    }
    2.0 * p * p * total
}

/// E[X | X ≤ m] for X geometric on {1, 2, ...} with success probability p.
pub fn truncated_first_success_mean(p: f64, m: u64) -> f64 {
    let r = 1.0 - p;
    let tail = r.powf(m as f64);
    1.0 / p - m as f64 * tail / (1.0 - tail)
}

/// E|X_L − X_R| for i.i.d. first-success slots conditioned on heralding within m slots.
pub fn truncated_abs_difference_mean(p: f64, m: u64) -> f64 {
    let r = 1.0 - p;
    let norm = 1.0 - r.powf(m as f64);
    // Σ_l w_l (l·W_{l−1} − K_{l−1}) with running prefix sums W, K.
    let (mut w_prefix, mut k_prefix, mut total) = (0.0, 0.0, 0.0);
    let mut w = p / norm;
    for l in 1..=m {
        let lf = l as f64;
        total += w * (lf * w_prefix - k_prefix);
        w_prefix += w;
        k_prefix += lf * w;
        w *= r;
    }
    2.0 * total
}

/// Mean slots waited by the latest heralded memory at block end, given at least
/// one herald among M·m attempts with per-attempt probability p.
pub fn last_success_mean(p: f64, channels: u32, m: u64) -> f64 {
    let r_m = (1.0 - p).powi(channels as i32);
    let r_mm = (1.0 - p).powf(channels as f64 * m as f64);
    r_m / (1.0 - r_m) - m as f64 * r_mm / (1.0 - r_mm)
}

/// Same quantity by summing the pmf (1−(1−p)^M)(1−p)^{kM} over k ∈ [0, m−1].
pub fn last_success_mean_by_summation(p: f64, channels: u32, m: u64) -> f64 {
    let slot = any_success(p, f64::from(channels));
    let r_m = (1.0 - p).powi(channels as i32);
    let (mut num, mut den, mut w) = (0.0, 0.0, slot);
    for k in 0..m {
        num += k as f64 * w;
        den += w;
        w *= r_m;
    }
    num / den
}

/// Mean and standard error of |X₁ − X₂| for untruncated geometric draws.
pub fn sample_geometric_abs_difference(p: f64, sim: &SimConfig) -> Result<(f64, f64)> {
    let geo = Geometric::new(p).map_err(|e| Error::invalid("p", e.to_string()))?;
    #[derive(Default)]
    struct Moments(u64, u128);
    impl MergeAdd for Moments {
        fn merge(&mut self, other: Self) {
            self.0 += other.0;
            self.1 += other.1;
        }
    }
    let m: Moments = run_trials(sim, |rng, acc: &mut Moments| {
        let y = geo.sample(rng).abs_diff(geo.sample(rng));
        acc.0 += y;
        acc.1 += u128::from(y) * u128::from(y);
    })?;
    Ok(mean_and_error(m.0, m.1, sim.trials))
}

fn mean_and_error(sum: u64, sum_sq: u128, count: u64) -> (f64, f64) {
    let n = count as f64;
    let mean = sum as f64 / n;
    let var = if count > 1 {
        ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaitTimeStats {
    pub protocol: SwapProtocol,
    pub trials: u64,
    /// Blocks in which every link heralded; only these contribute samples.
    pub blocks_sampled: u64,
    /// Station samples, blocks_sampled · n.
    pub samples: u64,
    pub mean_x_left: f64,
    pub mean_x_right: f64,
    pub mean_y: f64,
    pub std_error_y: f64,
    /// Sample mean of Y per station, left to right.
    pub per_node_mean_y: Vec<f64>,
    /// Count of samples with Y = index.
    pub y_histogram: Vec<u64>,
    /// Per-slot heralding probability 1 − (1 − p)^M.
    pub p_slot: f64,
    /// E|X_L − X_R| for untruncated geometric markers at `p_slot`.
    pub delta1_analytic: f64,
    /// Exact mean of one marker under the protocol, truncated at m slots.
    pub mean_x_analytic: f64,
    /// Exact E[Y] under the protocol, truncated at m slots.
    pub mean_y_analytic: f64,
    /// ⟨S⟩ = n·Δ₁.
    pub s_mean: f64,
}

#[derive(Default)]
struct WaitAcc {
    blocks: u64,
    sum_xl: u64,
    sum_xr: u64,
    sum_y: u64,
    sum_y_sq: u128,
    per_node: Vec<u64>,
    hist: Vec<u64>,
}

impl MergeAdd for WaitAcc {
    fn merge(&mut self, other: Self) {
        self.blocks += other.blocks;
        self.sum_xl += other.sum_xl;
        self.sum_xr += other.sum_xr;
        self.sum_y += other.sum_y;
        self.sum_y_sq += other.sum_y_sq;
        add_into(&mut self.per_node, &other.per_node);
        add_into(&mut self.hist, &other.hist);
    }
}

fn add_into(dst: &mut Vec<u64>, src: &[u64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

/// Wait-time statistics of a chain whose attempts herald with `p_attempt`.
pub fn simulate_wait_times_at(
    p_attempt: f64,
    channels: u32,
    cfg: &RepeaterConfig,
    protocol: SwapProtocol,
    sim: &SimConfig,
) -> Result<WaitTimeStats> {
    let nodes = cfg.n as usize;
    let m = cfg.m;
    let acc: WaitAcc = run_trials(sim, |rng, acc: &mut WaitAcc| {
        let links: Vec<LinkOutcome> = (0..cfg.links())
            .map(|_| sample_link(rng, p_attempt, channels, m))
            .collect();
        if !links.iter().all(LinkOutcome::succeeded) {
            return;
        }
        acc.blocks += 1;
        if acc.per_node.len() < nodes {
            acc.per_node.resize(nodes, 0);
        }
        for (i, pair) in links.windows(2).enumerate() {
            let (xl, xr) = wait_markers(protocol, &pair[0], &pair[1], m).expect("links heralded");
            let y = wait_time(protocol, xl, xr);
            acc.sum_xl += xl;
            acc.sum_xr += xr;
            acc.sum_y += y;
            acc.sum_y_sq += u128::from(y) * u128::from(y);
            acc.per_node[i] += y;
            let y = y as usize;
            if acc.hist.len() <= y {
                acc.hist.resize(y + 1, 0);
            }
            acc.hist[y] += 1;
        }
    })?;

    let samples = acc.blocks * cfg.n as u64;
    if samples == 0 {
        return Err(Error::EmptyStats { trials: sim.trials });
    }
    let (mean_y, std_error_y) = mean_and_error(acc.sum_y, acc.sum_y_sq, samples);
    let p_slot = any_success(p_attempt, f64::from(channels));
    let d1 = delta1(p_slot);
    let (mean_x_analytic, mean_y_analytic) = match protocol {
        SwapProtocol::FirstSuccess => (
            truncated_first_success_mean(p_slot, m),
            truncated_abs_difference_mean(p_slot, m),
        ),
        SwapProtocol::LeastWaitEndOfBlock => {
            let x = last_success_mean(p_attempt, channels, m);
            (x, 2.0 * x)
        }
    };
    Ok(WaitTimeStats {
        protocol,
        trials: sim.trials,
        blocks_sampled: acc.blocks,
        samples,
        mean_x_left: acc.sum_xl as f64 / samples as f64,
        mean_x_right: acc.sum_xr as f64 / samples as f64,
        mean_y,
        std_error_y,
        per_node_mean_y: acc.per_node.iter().map(|&s| s as f64 / acc.blocks as f64).collect(),
        y_histogram: acc.hist,
        p_slot,
        delta1_analytic: d1,
        mean_x_analytic,
        mean_y_analytic,
        s_mean: f64::from(cfg.n) * d1,
    })
}

pub fn simulate_wait_times(
    ch: &ChannelParams,
    hw: &HardwareParams,
    cfg: &RepeaterConfig,
    protocol: SwapProtocol,
    sim: &SimConfig,
) -> Result<WaitTimeStats> {
    let p_attempt = link_success_prob(ch, hw, cfg).p_attempt;
    simulate_wait_times_at(p_attempt, hw.channels, cfg, protocol, sim)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRate {
    pub protocol: SwapProtocol,
    /// Rate with every station charged λ_mem^{⟨Y⟩}; a lower bound by Jensen.
    pub analytic_lb: f64,
    /// ⟨Y⟩ used by the analytic branch.
    pub mean_y: f64,
    pub monte_carlo: RateEstimate,
}

/// Mean wait entering the Jensen bound: Δ₁ at the per-slot probability for
/// first-success, twice the truncated last-success mean for end-of-block.
pub fn protocol_mean_wait(p_attempt: f64, channels: u32, m: u64, protocol: SwapProtocol) -> f64 {
    match protocol {
        SwapProtocol::FirstSuccess => delta1(any_success(p_attempt, f64::from(channels))),
        SwapProtocol::LeastWaitEndOfBlock => 2.0 * last_success_mean(p_attempt, channels, m),
    }
}

/// Rate under wait-dependent memory decay, analytically (Jensen) and by simulation.
///
/// In the simulation each station's swap succeeds with q·λ_t^{log₂ m}·λ_mem^{Y}
/// using the Y actually realized in that block.
pub fn rate_with_protocol_decoherence(
    ch: &ChannelParams,
    hw: &HardwareParams,
    cfg: &RepeaterConfig,
    protocol: SwapProtocol,
    sim: &SimConfig,
) -> Result<ProtocolRate> {
    let d = link_success_prob(ch, hw, cfg);
    let q_switch = effective_swap_prob(hw, cfg.m, LossModel::SwitchLoss);
    let block_s = cfg.m as f64 * hw.tau_s;

    let mean_y = protocol_mean_wait(d.p_attempt, hw.channels, cfg.m, protocol);
    let q_node = q_switch * hw.lambda_mem.powf(mean_y);
    let analytic_lb = crate::model::rate_from_parts(d.p_link, q_node, cfg, hw.tau_s);

    let count: Count = run_trials(sim, |rng, acc: &mut Count| {
        let links: Vec<LinkOutcome> = (0..cfg.links())
            .map(|_| sample_link(rng, d.p_attempt, hw.channels, cfg.m))
            .collect();
        if !links.iter().all(LinkOutcome::succeeded) {
            return;
        }
        let swapped = links.windows(2).all(|pair| {
            let (xl, xr) = wait_markers(protocol, &pair[0], &pair[1], cfg.m).expect("links heralded");
            let y = wait_time(protocol, xl, xr);
            rng.random::<f64>() < q_switch * hw.lambda_mem.powf(y as f64)
        });
        if swapped {
            acc.0 += 1;
        }
    })?;
    Ok(ProtocolRate {
        protocol,
        analytic_lb,
        mean_y,
        monte_carlo: RateEstimate::from_counts(count.0, sim.trials, block_s),
    })
}
