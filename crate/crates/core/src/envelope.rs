//! Integer-optimized rate-vs-distance envelope R(L) = max over (n, m) of the
//! exact rate, fixed-m envelopes, PLOB crossover and scaling-law fits.
//!
//! For fixed n, ln R is (n+1)·ln(1 − e^{−cm}) − b·ln m + n·m·ln λ_mem + const
//! with b ≥ 1, and m·d/dm of it is strictly decreasing, so R is unimodal in
//! m. [`SearchStrategy::Unimodal`] exploits this with a binary search on the
//! sign of R(m+1) − R(m); [`SearchStrategy::Exhaustive`] scans the grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::optimal_params;
use crate::error::{Error, Result};
use crate::model::{end_to_end_rate, plob_rate};
use crate::params::{ChannelParams, HardwareParams, LossModel, RepeaterConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub length_km: f64,
    pub rate: f64,
    pub n_opt: u32,
    pub m_opt: u64,
    pub plob: f64,
    pub beats_plob: bool,
    /// The argmax sits on the search boundary; the window may be too small.
    pub cap_hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub n_max: u32,
    pub m_max: u64,
}

impl SearchCaps {
    pub const FLOOR: u32 = 50;

    /// max(50, ⌈4n*⌉) × max(50, ⌈4m*⌉) around the continuous optimum.
    ///
    /// When the closed-form optimum is undefined for this hardware the
    /// lossless-switch optimum locates the basin instead.
    pub fn heuristic(ch: &ChannelParams, hw: &HardwareParams) -> Self {
        let opt = optimal_params(ch, hw).or_else(|_| {
            let ideal = HardwareParams {
                lambda_t: 1.0,
                lambda_mem: 1.0,
                ..*hw
            };
            optimal_params(ch, &ideal)
        });
        let floor = f64::from(Self::FLOOR);
        match opt {
            Ok(o) => SearchCaps {
                n_max: (4.0 * o.n_star).ceil().max(floor).min(f64::from(u32::MAX / 2)) as u32,
                m_max: (4.0 * o.m_star).ceil().max(floor).min(1e15) as u64,
            },
            Err(_) => SearchCaps {
                n_max: Self::FLOOR,
                m_max: u64::from(Self::FLOOR),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    /// Every n; binary search over m for each n.
    #[default]
    Unimodal,
    /// Every (n, m) pair in the window.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnvelopeOptions {
    /// `None` selects [`SearchCaps::heuristic`] per distance.
    pub caps: Option<SearchCaps>,
    pub strategy: SearchStrategy,
}

/// Strict improvement test with the tie-break order: smaller n, then smaller m.
fn better(candidate: (f64, u32, u64), incumbent: (f64, u32, u64)) -> bool {
    match candidate.0.total_cmp(&incumbent.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => (candidate.1, candidate.2) < (incumbent.1, incumbent.2),
    }
}

fn rate_at(ch: &ChannelParams, hw: &HardwareParams, n: u32, m: u64, model: LossModel) -> f64 {
    end_to_end_rate(ch, hw, &RepeaterConfig { n, m }, model)
}

/// Smallest m in [1, m_max] maximizing the rate at fixed n.
pub fn best_block_length(
    ch: &ChannelParams,
    hw: &HardwareParams,
    n: u32,
    m_max: u64,
    model: LossModel,
    strategy: SearchStrategy,
) -> (u64, f64) {
    match strategy {
        SearchStrategy::Exhaustive => {
            let mut best = (rate_at(ch, hw, n, 1, model), 1);
            for m in 2..=m_max {
                let r = rate_at(ch, hw, n, m, model);
                if r > best.0 {
                    best = (r, m);
                }
            }
            (best.1, best.0)
        }
        SearchStrategy::Unimodal => {
            // First m whose successor does not improve on it.
            let (mut lo, mut hi) = (1u64, m_max.max(1));
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if rate_at(ch, hw, n, mid + 1, model) <= rate_at(ch, hw, n, mid, model) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            (lo, rate_at(ch, hw, n, lo, model))
        }
    }
}

fn finish(ch: &ChannelParams, hw: &HardwareParams, best: (f64, u32, u64), caps: SearchCaps) -> EnvelopePoint {
    let plob = plob_rate(ch, hw);
    EnvelopePoint {
        length_km: ch.length_km,
        rate: best.0,
        n_opt: best.1,
        m_opt: best.2,
        plob,
        beats_plob: best.0 > plob,
        cap_hit: best.1 == caps.n_max || best.2 == caps.m_max,
    }
}

/// Maximum of the exact rate over n ∈ [0, n_max], m ∈ [1, m_max] at `ch.length_km`.
pub fn exact_envelope(
    ch: &ChannelParams,
    hw: &HardwareParams,
    model: LossModel,
    opts: &EnvelopeOptions,
) -> EnvelopePoint {
    let caps = opts.caps.unwrap_or_else(|| SearchCaps::heuristic(ch, hw));
    let mut best = (f64::NEG_INFINITY, 0u32, 1u64);
    for n in 0..=caps.n_max {
        let (m, r) = best_block_length(ch, hw, n, caps.m_max, model, opts.strategy);
        if better((r, n, m), best) {
            best = (r, n, m);
        }
    }
    let point = finish(ch, hw, best, caps);
    if point.cap_hit {
        log::warn!(
            "envelope argmax (n = {}, m = {}) at L = {} km touches the search cap {:?}",
            point.n_opt,
            point.m_opt,
            ch.length_km,
            caps
        );
    }
    point
}

/// Envelope with the block length pinned to `m`, n optimized in [0, n_max].
pub fn fixed_m_point(ch: &ChannelParams, hw: &HardwareParams, m: u64, n_max: u32, model: LossModel) -> EnvelopePoint {
    let mut best = (f64::NEG_INFINITY, 0u32, m);
    for n in 0..=n_max {
        let r = rate_at(ch, hw, n, m, model);
        if better((r, n, m), best) {
            best = (r, n, m);
        }
    }
    let caps = SearchCaps { n_max, m_max: u64::MAX };
    finish(ch, hw, best, caps)
}

pub fn fixed_m_envelope(
    ch: &ChannelParams,
    hw: &HardwareParams,
    m: u64,
    lengths_km: &[f64],
    model: LossModel,
    n_max: Option<u32>,
) -> Result<Vec<EnvelopePoint>> {
    if m == 0 {
        return Err(Error::invalid("m", "block length must be at least 1"));
    }
    Ok(lengths_km
        .par_iter()
        .map(|&l| {
            let ch = ch.at_length(l);
            let n_max = n_max.unwrap_or_else(|| SearchCaps::heuristic(&ch, hw).n_max);
            fixed_m_point(&ch, hw, m, n_max, model)
        })
        .collect())
}

/// Exact envelope at every length; order of the output follows `lengths_km`.
pub fn envelope_sweep(
    ch: &ChannelParams,
    hw: &HardwareParams,
    lengths_km: &[f64],
    model: LossModel,
    opts: &EnvelopeOptions,
) -> Vec<EnvelopePoint> {
    lengths_km
        .par_iter()
        .map(|&l| exact_envelope(&ch.at_length(l), hw, model, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingModel {
    /// ln R against √(αL).
    SqrtExponent,
    /// ln R against αL.
    LinearExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub model: ScalingModel,
}

/// Ordinary least squares of `ys` on `xs`; returns (slope, intercept, r²).
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need matching samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 1e-300 * n) {
        return Err(Error::DegenerateFit("abscissae have zero spread".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r_squared))
}

/// Fits ln(rate) to the chosen exponent law over `points`.
pub fn fit_scaling(points: &[EnvelopePoint], alpha_db: f64, model: ScalingModel) -> Result<ScalingFit> {
    if points.len() < 5 {
        return Err(Error::DegenerateFit(format!(
            "need at least 5 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !(p.rate > 0.0) || !p.rate.is_finite()) {
        return Err(Error::DegenerateFit(format!(
            "nonpositive rate {} at L = {} km",
            p.rate, p.length_km
        )));
    }
    let alpha = crate::params::to_natural_loss(alpha_db)?;
    let xs: Vec<f64> = points
        .iter()
        .map(|p| match model {
            ScalingModel::SqrtExponent => (alpha * p.length_km).sqrt(),
            ScalingModel::LinearExponent => alpha * p.length_km,
        })
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| p.rate.ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys)?;
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        model,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverWindow {
    pub start_km: f64,
    pub stop_km: f64,
    pub step_km: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance_km: f64,
}

impl Default for CrossoverWindow {
    fn default() -> Self {
        CrossoverWindow {
            start_km: 1.0,
            stop_km: 1000.0,
            step_km: 1.0,
            tolerance_km: 0.1,
        }
    }
}

/// Shortest distance at which the optimized repeater chain beats the PLOB rate.
pub fn crossover_distance(
    ch: &ChannelParams,
    hw: &HardwareParams,
    model: LossModel,
    window: &CrossoverWindow,
    opts: &EnvelopeOptions,
) -> Option<f64> {
    let beats = |l: f64| exact_envelope(&ch.at_length(l), hw, model, opts).beats_plob;
    let steps = ((window.stop_km - window.start_km) / window.step_km).floor() as u64;
    let mut prev: Option<f64> = None;
    for i in 0..=steps {
        let l = window.start_km + i as f64 * window.step_km;
        if beats(l) {
            let Some(mut lo) = prev else {
                return Some(l);
            };
            let mut hi = l;
            while hi - lo > window.tolerance_km {
                let mid = 0.5 * (lo + hi);
                if beats(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        prev = Some(l);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{subexp_upper_bound, upper_bound_coefficient};
    use crate::params::presets;

    fn small_caps() -> EnvelopeOptions {
        EnvelopeOptions {
            caps: Some(SearchCaps { n_max: 12, m_max: 400 }),
            strategy: SearchStrategy::Unimodal,
        }
    }

    #[test]
    fn unimodal_search_matches_exhaustive() {
        let hws = [
            presets::hardware(1),
            presets::hardware(50),
            presets::hardware(1).with_switch_loss_db(1.0).unwrap(),
            presets::hardware(4).with_memory_survival(0.995).unwrap(),
        ];
        for hw in hws {
            for model in [LossModel::Ideal, LossModel::SwitchLoss, LossModel::WorstDecoherence] {
                for l in [5.0, 120.0, 333.0] {
                    let ch = presets::fiber(l);
                    let fast = exact_envelope(&ch, &hw, model, &small_caps());
                    let slow = exact_envelope(
                        &ch,
                        &hw,
                        model,
                        &EnvelopeOptions {
                            strategy: SearchStrategy::Exhaustive,
                            ..small_caps()
                        },
                    );
                    assert_eq!(fast, slow, "{hw:?} {model:?} L = {l}");
                }
            }
        }
    }

    #[test]
    fn short_distance_prefers_no_repeater() {
        let hw = presets::hardware(1);
        let p = exact_envelope(&presets::fiber(0.5), &hw, LossModel::Ideal, &EnvelopeOptions::default());
        assert_eq!(p.n_opt, 0);
        assert_eq!(
            p.rate,
            end_to_end_rate(
                &presets::fiber(0.5),
                &hw,
                &RepeaterConfig { n: p.n_opt, m: p.m_opt },
                LossModel::Ideal
            )
        );
    }

    #[test]
    fn ties_resolve_to_fewest_repeaters() {
        // q = 0 makes every n ≥ 1 worthless; all m > 1 only lengthen the block.
        let hw = presets::hardware(1).with_q(0.0).unwrap();
        let p = exact_envelope(&presets::fiber(0.0), &hw, LossModel::Ideal, &small_caps());
        assert_eq!((p.n_opt, p.m_opt), (0, 1));
    }

    #[test]
    fn cap_hit_is_flagged() {
        let opts = EnvelopeOptions {
            caps: Some(SearchCaps { n_max: 1, m_max: 2 }),
            strategy: SearchStrategy::Unimodal,
        };
        let hw = presets::hardware(1).with_q(1.0).unwrap();
        let p = exact_envelope(
            &presets::fiber(400.0),
            &HardwareParams { mu: 1.0, ..hw },
            LossModel::Ideal,
            &opts,
        );
        assert!(p.cap_hit);
        let p = exact_envelope(&presets::fiber(400.0), &presets::hardware(1), LossModel::Ideal, &opts);
        assert_eq!((p.n_opt, p.m_opt), (0, 1));
        assert!(!p.cap_hit);
    }

    #[test]
    fn fixed_m_envelope_is_dominated() {
        let ch = presets::fiber(250.0);
        let hw = presets::hardware(50);
        let joint = exact_envelope(&ch, &hw, LossModel::Ideal, &EnvelopeOptions::default());
        for m in [1, 2, 5, 13, 40] {
            let p = fixed_m_point(&ch, &hw, m, 50, LossModel::Ideal);
            assert!(p.rate <= joint.rate);
            assert_eq!(p.m_opt, m);
        }
    }

    #[test]
    fn fit_recovers_generating_law() {
        let hw = presets::hardware(1);
        let pts: Vec<EnvelopePoint> = (1..=10)
            .map(|i| {
                let ch = presets::fiber(50.0 * f64::from(i));
                EnvelopePoint {
                    length_km: ch.length_km,
                    rate: subexp_upper_bound(&ch, &hw),
                    n_opt: 0,
                    m_opt: 1,
                    plob: 0.0,
                    beats_plob: true,
                    cap_hit: false,
                }
            })
            .collect();
        let fit = fit_scaling(&pts, presets::ALPHA_DB, ScalingModel::SqrtExponent).unwrap();
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!((fit.slope + upper_bound_coefficient(0.255)).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let p = EnvelopePoint {
            length_km: 100.0,
            rate: 1.0,
            n_opt: 0,
            m_opt: 1,
            plob: 0.0,
            beats_plob: true,
            cap_hit: false,
        };
        assert!(fit_scaling(&[p, p], 0.15, ScalingModel::SqrtExponent).is_err());
        assert!(fit_scaling(&[p; 6], 0.15, ScalingModel::SqrtExponent).is_err());
        let mut zero = [p; 6];
        for (i, z) in zero.iter_mut().enumerate() {
            z.length_km = 10.0 * (i as f64 + 1.0);
        }
        zero[3].rate = 0.0;
        assert!(fit_scaling(&zero, 0.15, ScalingModel::SqrtExponent).is_err());
    }

    #[test]
    fn dead_swaps_never_cross() {
        let hw = presets::hardware(1).with_q(0.0).unwrap();
        let win = CrossoverWindow {
            stop_km: 200.0,
            ..CrossoverWindow::default()
        };
        assert_eq!(
            crossover_distance(
                &presets::fiber(0.0),
                &hw,
                LossModel::Ideal,
                &win,
                &EnvelopeOptions::default()
            ),
            None
        );
    }

    #[test]
    fn ideal_hardware_crosses() {
        let hw = HardwareParams::new(50e-9, 1, 1.0, 1.0).unwrap();
        let l = crossover_distance(
            &presets::fiber(0.0),
            &hw,
            LossModel::Ideal,
            &CrossoverWindow::default(),
            &EnvelopeOptions::default(),
        )
        .expect("perfect swaps must beat direct transmission");
        let opts = EnvelopeOptions::default();
        assert!(exact_envelope(&presets::fiber(l), &hw, LossModel::Ideal, &opts).beats_plob);
        assert!(!exact_envelope(&presets::fiber(l - 0.1), &hw, LossModel::Ideal, &opts).beats_plob);
    }
}
