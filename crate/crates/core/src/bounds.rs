//! Closed-form and transcendental bounds on the optimized rate-vs-distance
//! envelope.
//!
//! Every unadorned logarithm below is natural; base-2 logarithms only enter
//! through the switch-tree depth log₂ m, which is why `log2(λ_t)` shows up
//! as a coefficient. All rates are in ebits per second.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::any_success;
use crate::params::{ChannelParams, HardwareParams};
use crate::roots::{relative_residual, Bisection};

/// 1 − 1/e, the worst-case heralding probability of a block of Mm attempts
/// at p = 1/(Mm).
pub const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;

/// Decay coefficient 2√(ln(1/q)) of the upper bound.
pub fn upper_bound_coefficient(q: f64) -> f64 {
    2.0 * (1.0 / q).ln().sqrt()
}

/// Decay coefficient 2√(ln(1/(q(1−1/e)))) of the lower bound.
pub fn lower_bound_coefficient(q: f64) -> f64 {
    2.0 * (1.0 / (q * ONE_MINUS_INV_E)).ln().sqrt()
}

fn prefactor(hw: &HardwareParams) -> f64 {
    hw.m_mu() / (hw.q * hw.tau_s)
}

/// Subexponential upper bound (Mμ/qτ)·exp(−2√(ln 1/q)·√(αL)).
///
/// Switch and memory losses are ignored. Requires q > 0.
pub fn subexp_upper_bound(ch: &ChannelParams, hw: &HardwareParams) -> f64 {
    prefactor(hw) * (-upper_bound_coefficient(hw.q) * ch.alpha_l().sqrt()).exp()
}

/// Subexponential lower bound: the upper bound with q → q(1−1/e) inside the root.
pub fn subexp_lower_bound(ch: &ChannelParams, hw: &HardwareParams) -> f64 {
    prefactor(hw) * (-lower_bound_coefficient(hw.q) * ch.alpha_l().sqrt()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// Coefficient of the exponential term, −log₂ λ_t.
    pub c_exp: f64,
    /// Coefficient of the subexponential term.
    pub c_sub: f64,
    /// Scaling constant of the optimal repeater count, n* + 1 = c₀√(αL).
    /// `None` when c₀² is not positive.
    pub c0: Option<f64>,
    /// (Mμ)^{log₂λ_t + 1}/(qτ), ebits/s.
    pub prefactor: f64,
}

/// The two logarithms every lossy bound is built from.
#[derive(Debug, Clone, Copy)]
struct LogTerms {
    /// log₂ λ_t
    a: f64,
    /// ln(Mμ)
    l: f64,
    /// ln(q(1−1/e))
    k: f64,
}

impl LogTerms {
    fn new(hw: &HardwareParams) -> Result<Self> {
        if !(hw.mu > 0.0) || !(hw.q > 0.0) {
            return Err(Error::BoundInapplicable(format!(
                "bounds need mu > 0 and q > 0 (mu = {}, q = {})",
                hw.mu, hw.q
            )));
        }
        Ok(LogTerms {
            a: hw.lambda_t.log2(),
            l: hw.m_mu().ln(),
            k: (hw.q * ONE_MINUS_INV_E).ln(),
        })
    }

    /// ln(Mμ)·log₂λ_t − ln(q(1−1/e)), the denominator of c₀².
    fn denominator(&self) -> f64 {
        self.l * self.a - self.k
    }
}

/// c_sub² in its compact form: ln[((Mμ)^{1+log₂λ_t}/(q(1−1/e)))^{log₂λ_t}] − ln(q(1−1/e)).
pub fn c_sub_squared_compact(hw: &HardwareParams) -> Result<f64> {
    let t = LogTerms::new(hw)?;
    Ok(t.a * ((1.0 + t.a) * t.l - t.k) - t.k)
}

/// c_sub² in its expanded form: log₂λ_t·{ln(Mμ)log₂λ_t + ln(Mμ) − ln(q(1−1/e))} − ln(q(1−1/e)).
pub fn c_sub_squared_expanded(hw: &HardwareParams) -> Result<f64> {
    let t = LogTerms::new(hw)?;
    Ok(t.a * (t.l * t.a + t.l - t.k) - t.k)
}

pub fn lossy_constants(hw: &HardwareParams) -> Result<BoundConstants> {
    let t = LogTerms::new(hw)?;
    let c_sub_sq = c_sub_squared_compact(hw)?;
    if !(c_sub_sq >= 0.0) {
        return Err(Error::BoundInapplicable(format!(
            "c_sub^2 = {c_sub_sq} is negative for lambda_t = {}, M*mu = {}",
            hw.lambda_t,
            hw.m_mu()
        )));
    }
    let c0_sq = (t.a + 1.0) / t.denominator();
    Ok(BoundConstants {
        c_exp: -t.a,
        c_sub: c_sub_sq.sqrt(),
        c0: (c0_sq > 0.0 && c0_sq.is_finite()).then(|| c0_sq.sqrt()),
        prefactor: hw.m_mu().powf(t.a + 1.0) / (hw.q * hw.tau_s),
    })
}

/// Lower bound with lossy switches, prefactor·exp(−c_exp·αL − 2c_sub·√(αL)).
pub fn lossy_lower_bound(ch: &ChannelParams, hw: &HardwareParams) -> Result<(f64, BoundConstants)> {
    let c = lossy_constants(hw)?;
    let al = ch.alpha_l();
    let rate = c.prefactor * (-c.c_exp * al - 2.0 * c.c_sub * al.sqrt()).exp();
    Ok((rate, c))
}

/// Sizes of the two competing terms in the lossy bound's exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyRegime {
    pub exponential_term: f64,
    pub subexponential_term: f64,
    pub subexponential_dominates: bool,
}

pub fn lossy_regime(ch: &ChannelParams, c: &BoundConstants) -> LossyRegime {
    let al = ch.alpha_l();
    let exponential_term = c.c_exp * al;
    let subexponential_term = 2.0 * c.c_sub * al.sqrt();
    LossyRegime {
        exponential_term,
        subexponential_term,
        subexponential_dominates: subexponential_term > exponential_term,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalParams {
    pub n_star: f64,
    pub m_star: f64,
    pub n_int: i64,
    pub m_int: i64,
    /// False inside the forbidden region where fewer than one repeater is optimal.
    pub feasible: bool,
}

/// Continuous optimal repeater count and block length that attain the lossy lower bound.
pub fn optimal_params(ch: &ChannelParams, hw: &HardwareParams) -> Result<OptimalParams> {
    let t = LogTerms::new(hw)?;
    let denom = t.denominator();
    if !(denom > 0.0) {
        return Err(Error::BoundInapplicable(format!(
            "ln(M*mu)*log2(lambda_t) - ln(q(1-1/e)) = {denom} is not positive"
        )));
    }
    let c0_sq = (t.a + 1.0) / denom;
    if !(c0_sq > 0.0) {
        return Err(Error::BoundInapplicable(format!(
            "c0^2 = {c0_sq} is not positive (lambda_t = {})",
            hw.lambda_t
        )));
    }
    let al = ch.alpha_l();
    let n_star = c0_sq.sqrt() * al.sqrt() - 1.0;
    let m_star = (al / (n_star + 1.0)).exp() / hw.m_mu();
    let n_int = n_star.floor() as i64;
    let m_int = m_star.floor() as i64;
    Ok(OptimalParams {
        n_star,
        m_star,
        n_int,
        m_int,
        feasible: n_int >= 1 && m_int >= 1,
    })
}

/// How the `log₂ 2λ_t` term of the decoherence equation is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Log2TermReading {
    /// log₂(2λ_t) = 1 + log₂λ_t; reduces to the lossy bound at λ_mem = 1.
    #[default]
    LogOfProduct,
    /// (log₂ 2)·λ_t = λ_t, kept for comparison only.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceBoundSolution {
    /// Root of the stationarity equation; plays the role of n + 1.
    pub v0: f64,
    pub rate_lb: f64,
    /// |LHS − RHS| / max(|LHS|, |RHS|) at `v0`.
    pub residual: f64,
    /// More than one positive root was seen; `v0` is the smallest.
    pub multiple_roots: bool,
}

struct DecoherenceEquation {
    alpha_l: f64,
    /// ln(λ_mem)/(Mμ)
    mem: f64,
    /// Coefficient standing for log₂(2λ_t).
    b: f64,
    denom: f64,
}

impl DecoherenceEquation {
    fn memory_term(&self, v: f64) -> f64 {
        if self.mem == 0.0 {
            0.0
        } else {
            (self.alpha_l / v).exp() * self.mem
        }
    }

    fn lhs(&self, v: f64) -> f64 {
        -self.alpha_l * (self.memory_term(v) - self.b)
    }

    fn rhs(&self, v: f64) -> f64 {
        v * v * self.denom
    }

    fn residual_fn(&self, v: f64) -> f64 {
        self.rhs(v) - self.lhs(v)
    }
}

/// Lower bound with lossy switches and worst-case memory decoherence
/// (every qubit charged λ_mem^m).
pub fn decoherence_lower_bound(ch: &ChannelParams, hw: &HardwareParams) -> Result<DecoherenceBoundSolution> {
    decoherence_lower_bound_with(ch, hw, Log2TermReading::default(), &Bisection::default())
}

pub fn decoherence_lower_bound_with(
    ch: &ChannelParams,
    hw: &HardwareParams,
    reading: Log2TermReading,
    solver: &Bisection,
) -> Result<DecoherenceBoundSolution> {
    let t = LogTerms::new(hw)?;
    if !(t.denominator() > 0.0) {
        return Err(Error::BoundInapplicable(format!(
            "decoherence bound needs ln(M*mu)*log2(lambda_t) > ln(q(1-1/e)); got denominator {}",
            t.denominator()
        )));
    }
    let alpha_l = ch.alpha_l();
    let eq = DecoherenceEquation {
        alpha_l,
        mem: hw.lambda_mem.ln() / hw.m_mu(),
        b: match reading {
            Log2TermReading::LogOfProduct => 1.0 + t.a,
            Log2TermReading::Literal => hw.lambda_t,
        },
        denom: t.denominator(),
    };

    // Start from the decoherence-free root and scan the doubling sequence
    // guess·2^k, |k| ≤ max_expansions, for every sign change.
    let guess = {
        let g = (alpha_l * eq.b.abs() / eq.denom.abs()).sqrt();
        if g.is_finite() && g > 0.0 {
            g
        } else {
            1.0
        }
    };
    let span = solver.max_expansions as i32;
    let grid: Vec<f64> = (-span..=span).map(|k| guess * 2f64.powi(k)).collect();
    let f = |v: f64| eq.residual_fn(v);
    let roots = solver.all_roots_on_grid(f, &grid)?;
    let Some(&v0) = roots.first() else {
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        return Err(Error::RootNotFound {
            reason: "decoherence equation has no positive root".into(),
            lo,
            hi,
            f_lo: f(lo),
            f_hi: f(hi),
        });
    };
    let multiple_roots = roots.len() > 1;
    if multiple_roots {
        log::warn!(
            "decoherence equation has {} positive roots at alpha*L = {alpha_l}; using the smallest",
            roots.len()
        );
    }

    let exponent = -alpha_l * t.a * (1.0 / v0 - 1.0) - alpha_l / v0 + v0 * (t.k - t.a * t.l) + eq.memory_term(v0);
    let prefactor = hw.m_mu().powf(t.a + 1.0) / (hw.q * hw.tau_s);
    Ok(DecoherenceBoundSolution {
        v0,
        rate_lb: prefactor * exponent.exp(),
        residual: relative_residual(eq.lhs(v0), eq.rhs(v0)),
        multiple_roots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialExponents {
    /// Decay exponent s of the m = 1 envelope (1/qτ)·e^{−sαL}.
    pub s_exact: f64,
    pub z_root: f64,
    /// Upper-bound exponent ln(1/q)/ln(μM); `None` when μM ≤ 1.
    pub u_ub: Option<f64>,
    pub residual: f64,
}

/// Both sides of the stationarity condition for the spatial-only exponent.
pub fn spatial_equation_sides(hw: &HardwareParams, z: f64) -> (f64, f64) {
    let m = f64::from(hw.channels);
    let heralded = any_success(hw.mu * z, m);
    let lhs = heralded * (hw.q * heralded).ln();
    let rhs = hw.m_mu() * z * z.ln() * ((m - 1.0) * (-hw.mu * z).ln_1p()).exp();
    (lhs, rhs)
}

/// s(z) = ln[q(1 − (1−μz)^M)]/ln z.
pub fn spatial_exponent_at(hw: &HardwareParams, z: f64) -> f64 {
    let heralded = any_success(hw.mu * z, f64::from(hw.channels));
    (hw.q * heralded).ln() / z.ln()
}

pub const Z_MIN: f64 = 1e-15;
pub const Z_MAX: f64 = 1.0 - 1e-15;

/// Exponent of the purely spatially multiplexed (m = 1) envelope.
///
/// The root z is the stationary point of s(z) on (0, 1); when several
/// exist the one with the smallest exponent is returned.
pub fn spatial_exponent_exact(hw: &HardwareParams) -> Result<SpatialExponents> {
    spatial_exponent_exact_with(hw, &Bisection::default())
}

pub fn spatial_exponent_exact_with(hw: &HardwareParams, solver: &Bisection) -> Result<SpatialExponents> {
    if !(hw.mu > 0.0) || !(hw.q > 0.0) {
        return Err(Error::BoundInapplicable(
            "spatial exponent needs mu > 0 and q > 0".into(),
        ));
    }
    let u_ub = (hw.m_mu() > 1.0).then(|| (1.0 / hw.q).ln() / hw.m_mu().ln());

    let mut grid: Vec<f64> = (0..=600)
        .map(|i| 10f64.powf(-15.0 + 15.0 * f64::from(i) / 600.0))
        .filter(|&z| z < 1.0)
        .collect();
    grid.extend((1..=15).map(|k| 1.0 - 10f64.powi(-k)));
    grid.push(Z_MAX);
    grid.retain(|&z| (Z_MIN..=Z_MAX).contains(&z));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let g = |z: f64| {
        let (lhs, rhs) = spatial_equation_sides(hw, z);
        lhs - rhs
    };
    let roots = solver.all_roots_on_grid(g, &grid)?;
    let best = roots
        .into_iter()
        .map(|z| (z, spatial_exponent_at(hw, z)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let Some((z_root, s_exact)) = best else {
        return Err(Error::RootNotFound {
            reason: format!(
                "no stationary point of s(z) on (0, 1) for q*M*mu = {}",
                hw.q * hw.m_mu()
            ),
            lo: Z_MIN,
            hi: Z_MAX,
            f_lo: g(Z_MIN),
            f_hi: g(Z_MAX),
        });
    };
    let (lhs, rhs) = spatial_equation_sides(hw, z_root);
    Ok(SpatialExponents {
        s_exact,
        z_root,
        u_ub,
        residual: relative_residual(lhs, rhs),
    })
}

/// Corner A(m, n) of the two-part envelope of R_{m,n}: (x, rate) with x = e^{−αL}.
pub fn family_point_a(hw: &HardwareParams, m: u64, n: u32) -> (f64, f64) {
    let x = (hw.m_mu() * m as f64).powi(-(n as i32 + 1));
    (x, hw.q.powi(n as i32) / (m as f64 * hw.tau_s))
}

/// B(m, n): the exact rate curve directly below A(m, n).
pub fn family_point_b(hw: &HardwareParams, m: u64, n: u32) -> (f64, f64) {
    let (x, y) = family_point_a(hw, m, n);
    let mm = f64::from(hw.channels) * m as f64;
    let heralded = 1.0 - (1.0 - 1.0 / mm).powf(mm);
    (x, y * heralded.powi(n as i32 + 1))
}

/// B′(m, n): B(m, n) with the block heralding probability replaced by 1 − 1/e.
pub fn family_point_b_prime(hw: &HardwareParams, m: u64, n: u32) -> (f64, f64) {
    let (x, y) = family_point_a(hw, m, n);
    (x, y * ONE_MINUS_INV_E.powi(n as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::presets;
    use approx::assert_relative_eq;

    #[test]
    fn bound_coefficients() {
        assert_relative_eq!(
            upper_bound_coefficient(0.255),
            2.337_940_746_745_914_4,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lower_bound_coefficient(0.255),
            2.701_974_743_931_403,
            max_relative = 1e-14
        );
    }

    #[test]
    fn bounds_at_zero_length() {
        let hw = presets::hardware(7);
        let ch = presets::fiber(0.0);
        let pre = hw.m_mu() / (hw.q * hw.tau_s);
        assert_eq!(subexp_upper_bound(&ch, &hw), pre);
        assert_eq!(subexp_lower_bound(&ch, &hw), pre);
    }

    #[test]
    fn perfect_swaps_give_flat_upper_bound() {
        let hw = presets::hardware(2).with_q(1.0).unwrap();
        for l in [0.0, 100.0, 900.0] {
            assert_relative_eq!(subexp_upper_bound(&presets::fiber(l), &hw), hw.m_mu() / hw.tau_s);
        }
    }

    #[test]
    fn lower_below_upper() {
        let hw = presets::hardware(1);
        for l in [1.0, 10.0, 250.0, 1000.0] {
            let ch = presets::fiber(l);
            assert!(subexp_lower_bound(&ch, &hw) < subexp_upper_bound(&ch, &hw));
        }
    }

    #[test]
    fn lossless_switch_constants() {
        let c = lossy_constants(&presets::hardware(1)).unwrap();
        assert_eq!(c.c_exp, 0.0);
        assert_relative_eq!(
            c.c_sub,
            (1.0 / (0.255 * ONE_MINUS_INV_E)).ln().sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(c.c0.unwrap(), 0.740_199_368_810_523_3, max_relative = 1e-14);
    }

    #[test]
    fn two_db_switch_exponent() {
        let hw = presets::hardware(1).with_switch_loss_db(2.0).unwrap();
        let c = lossy_constants(&hw).unwrap();
        assert_relative_eq!(c.c_exp, 0.664_385_618_977_472_5, max_relative = 1e-14);
    }

    #[test]
    fn c_sub_forms_agree() {
        let hw = presets::hardware(100).with_switch_transmissivity(0.8).unwrap();
        let a = c_sub_squared_compact(&hw).unwrap();
        let b = c_sub_squared_expanded(&hw).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn negative_c_sub_is_inapplicable() {
        // Very lossy switches with huge Mμ drive c_sub² negative.
        let hw = HardwareParams::new(1e-9, 1_000_000, 1.0, 0.9)
            .unwrap()
            .with_switch_transmissivity(0.8)
            .unwrap();
        assert!(c_sub_squared_compact(&hw).unwrap() < 0.0);
        assert!(matches!(
            lossy_lower_bound(&presets::fiber(100.0), &hw),
            Err(Error::BoundInapplicable(_))
        ));
    }

    #[test]
    fn optimal_params_reference() {
        let o = optimal_params(&presets::fiber(400.0), &presets::hardware(50)).unwrap();
        assert_relative_eq!(o.n_star, 1.751_263_458_104_479, max_relative = 1e-12);
        assert_relative_eq!(o.m_star, 7.488_437_364_294_146, max_relative = 1e-12);
        assert_eq!((o.n_int, o.m_int), (1, 7));
        assert!(o.feasible);
        assert_relative_eq!(
            o.m_star,
            (13.815_510_557_964_274 / (o.n_star + 1.0)).exp() / (50.0 * 0.405)
        );
    }

    #[test]
    fn short_links_are_forbidden() {
        let o = optimal_params(&presets::fiber(50.0), &presets::hardware(1)).unwrap();
        assert!(o.n_star < 1.0);
        assert!(!o.feasible);
    }

    #[test]
    fn optimal_params_rejects_nonpositive_denominator() {
        let hw = HardwareParams::new(1e-9, 1000, 0.9, 0.9)
            .unwrap()
            .with_switch_transmissivity(0.3)
            .unwrap();
        assert!(matches!(
            optimal_params(&presets::fiber(100.0), &hw),
            Err(Error::BoundInapplicable(_))
        ));
    }

    #[test]
    fn decoherence_free_limit_matches_lossy_bound() {
        for (m_ch, lt) in [(1u32, 1.0), (1, 0.9), (50, 1.0), (100, 0.8)] {
            let hw = presets::hardware(m_ch).with_switch_transmissivity(lt).unwrap();
            for l in [50.0, 200.0, 700.0] {
                let ch = presets::fiber(l);
                let sol = decoherence_lower_bound(&ch, &hw).unwrap();
                let opt = optimal_params(&ch, &hw).unwrap();
                assert_relative_eq!(sol.v0, opt.n_star + 1.0, max_relative = 1e-10);
                let (lossy, _) = lossy_lower_bound(&ch, &hw).unwrap();
                assert_relative_eq!(sol.rate_lb, lossy, max_relative = 1e-9);
                assert!(sol.residual < 1e-10);
            }
        }
    }

    #[test]
    fn decoherence_lowers_the_bound() {
        let hw = presets::hardware(1);
        let leaky = hw.with_memory_survival(0.999).unwrap();
        for l in [10.0, 100.0, 300.0, 600.0] {
            let ch = presets::fiber(l);
            let clean = decoherence_lower_bound(&ch, &hw).unwrap();
            let sol = decoherence_lower_bound(&ch, &leaky).unwrap();
            assert!(sol.rate_lb < clean.rate_lb, "L = {l}");
            assert!(sol.residual < 1e-10);
            assert!(sol.v0 > clean.v0);
            assert!(!sol.multiple_roots);
        }
    }

    #[test]
    fn literal_reading_differs() {
        let hw = presets::hardware(1).with_switch_transmissivity(0.8).unwrap();
        let ch = presets::fiber(200.0);
        let a = decoherence_lower_bound_with(&ch, &hw, Log2TermReading::LogOfProduct, &Bisection::default()).unwrap();
        let b = decoherence_lower_bound_with(&ch, &hw, Log2TermReading::Literal, &Bisection::default()).unwrap();
        assert!((a.v0 - b.v0).abs() > 1e-3);
    }

    #[test]
    fn spatial_exponent_reference() {
        let hw = presets::hardware(1000);
        let s = spatial_exponent_exact(&hw).unwrap();
        assert_relative_eq!(s.u_ub.unwrap(), 0.227_601_172_132_350_9, max_relative = 1e-13);
        assert!(s.z_root > 0.0 && s.z_root < 1.0);
        assert!(s.residual < 1e-10);
        assert!(s.s_exact < 1.0);
        // z minimizes s(z).
        for dz in [0.9, 0.99, 1.01, 1.1] {
            let z = (s.z_root * dz).min(Z_MAX);
            assert!(spatial_exponent_at(&hw, z) >= s.s_exact - 1e-12);
        }
    }

    #[test]
    fn spatial_exponent_undefined_without_gain() {
        let hw = presets::hardware(1);
        let err = spatial_exponent_exact(&hw).unwrap_err();
        assert!(matches!(err, Error::RootNotFound { .. }));
    }

    #[test]
    fn family_points() {
        let hw = presets::hardware(1);
        let (x, y) = family_point_a(&hw, 1, 0);
        assert_relative_eq!(x, 2.469_135_802_469_136, max_relative = 1e-15);
        assert_relative_eq!(y, 2e7, max_relative = 1e-15);
        for (m, n) in [(1, 0), (3, 2), (40, 5)] {
            let a = family_point_a(&hw, m, n);
            let b = family_point_b(&hw, m, n);
            let bp = family_point_b_prime(&hw, m, n);
            assert_eq!(a.0, bp.0);
            assert!(bp.1 < a.1);
            assert!(bp.1 <= b.1);
        }
    }
}
