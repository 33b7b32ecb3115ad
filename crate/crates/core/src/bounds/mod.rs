//! Headline bound calculators: concentration tails, transport-variance
//! consequences, noisy-circuit limits, cut-depth limits, annealing-time
//! limits, regular-graph thresholds and error-mitigation concentration.

use serde::Serialize;

use crate::entropy::LogBase;
use crate::error::{Error, Result};
use crate::transport::ContinuousParams;


/// Gaussian concentration profile P(|O − ⟨O⟩| ≥ a·n) ≤ K·exp(−c·a²·n/ℓ₀²).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussianProfile {
    pub k: f64,
    pub c: f64,
    pub ell0: f64,
}

impl GaussianProfile {
    pub fn new(k: f64, c: f64, ell0: f64) -> Result<Self> {
        if k <= 0.0 || c <= 0.0 || ell0 <= 0.0 {
            return Err(Error::validation("profile constants must be positive"));
        }
        Ok(GaussianProfile { k, c, ell0 })
    }

    /// Product-measure profile: P(|O − ⟨O⟩| ≥ r) ≤ 2·exp(−2r²/(n‖O‖_L²)).
    pub fn product_state(lipschitz: f64) -> Result<Self> {
        GaussianProfile::new(2.0, 2.0, lipschitz)
    }
}

/// Serializable record of one computed bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub id: String,
    pub inputs: serde_json::Value,
    pub value: f64,
    pub log_base: LogBase,
    /// Probability bound ≥ 1 or non-positive lower bound.
    pub vacuous: bool,
    pub pass: Option<bool>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn probability(id: &str, inputs: serde_json::Value, value: f64) -> Self {
        BoundReport {
            id: id.into(),
            inputs,
            value,
            log_base: LogBase::Nats,
            vacuous: value >= 1.0,
            pass: None,
            notes: Vec::new(),
        }
    }

    pub fn lower_bound(id: &str, inputs: serde_json::Value, value: f64) -> Self {
        BoundReport {
            id: id.into(),
            inputs,
            value,
            log_base: LogBase::Nats,
            vacuous: !(value > 0.0),
            pass: None,
            notes: Vec::new(),
        }
    }
}

/// Chebyshev tail from a Poincaré constant:
/// P(|O − ⟨O⟩| ≥ r) ≤ min(1, C·n·‖O‖_L²/r²).
pub fn chebyshev_tail(c: f64, n: usize, lipschitz: f64, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::validation("deviation r must be positive"));
    }
    if c < 0.0 || lipschitz < 0.0 {
        return Err(Error::validation("constant and Lipschitz norm must be ≥ 0"));
    }
    Ok((c * n as f64 * lipschitz * lipschitz / (r * r)).min(1.0))
}

/// Transport-variance inequality: W1(ρ₁, ρ₂) ≤ √(C·n)·(‖X₁−I‖_σ + ‖X₂−I‖_σ).
pub fn transport_variance_bound(c: f64, n: usize, kms1: f64, kms2: f64) -> Result<f64> {
    if c < 0.0 || kms1 < 0.0 || kms2 < 0.0 {
        return Err(Error::validation("inputs must be ≥ 0"));
    }
    Ok((c * n as f64).sqrt() * (kms1 + kms2))
}

/// Concentration transferred from σ to ρ through a Rényi divergence:
/// exp(((α−1)/α)·(D_α − c·a²·n/ℓ² + ln K)), clipped at 1.
pub fn transfer_concentration(
    d_alpha: f64,
    alpha: f64,
    profile: &GaussianProfile,
    a: f64,
    n: usize,
    ell: f64,
) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::validation("α must be > 1"));
    }
    if ell <= 0.0 {
        return Err(Error::validation("dressed Lipschitz constant must be positive"));
    }
    if d_alpha < 0.0 {
        return Err(Error::validation("divergence must be ≥ 0"));
    }
    let factor = if alpha.is_finite() { (alpha - 1.0) / alpha } else { 1.0 };
    let exponent = d_alpha - profile.c * a * a * n as f64 / (ell * ell) + profile.k.ln();
    Ok((factor * exponent).exp().min(1.0))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailBound {
    /// Deviation (or energy) level the probability refers to.
    pub level: f64,
    pub probability: f64,
}

/// Concentration of noisy depth-L circuit outputs around zero for traceless
/// observables: deviation ((1−p)^{2L}+ε)^{1/2}·‖H‖_L·n with tail e^{−εn/2}.
pub fn depol_tail(p: f64, layers: u32, eps: f64, n: usize, lipschitz: f64) -> Result<TailBound> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation("p must lie in [0,1]"));
    }
    if eps <= 0.0 || lipschitz < 0.0 {
        return Err(Error::validation("need ε > 0 and ‖H‖_L ≥ 0"));
    }
    let survival = (1.0 - p).powi(2 * layers as i32);
    Ok(TailBound {
        level: (survival + eps).sqrt() * lipschitz * n as f64,
        probability: (-eps * n as f64 / 2.0).exp().min(1.0),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdvantageDepth {
    /// log(1/a_c)/(2p), in layers.
    pub value: f64,
    pub min_depth: u32,
}

/// Depth beyond which (1−p)^{2L} drops below the target contraction a_c.
pub fn advantage_depth(a_c: f64, p: f64) -> Result<AdvantageDepth> {
    if !(a_c > 0.0 && a_c <= 1.0) || !(p > 0.0 && p < 1.0) {
        return Err(Error::validation("need a_c ∈ (0,1] and p ∈ (0,1)"));
    }
    let value = (1.0 / a_c).ln() / (2.0 * p);
    Ok(AdvantageDepth {
        value,
        min_depth: value.ceil() as u32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CircuitKind {
    /// Brickwork-style low-depth circuit; depth counted in 2-local layers.
    LowDepth,
    /// Transverse-mixer ansatz over a degree-D graph; depth counted in rounds.
    Qaoa,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DepthBound {
    pub kind: CircuitKind,
    pub value: f64,
    pub log_base: LogBase,
    pub vacuous: bool,
}

/// Minimum depth needed to beat the symmetric-output obstruction on n-vertex
/// instances: L ≥ ½·log₂(n/576), or P ≥ ln(n/576)/(2·ln(D+1)).
pub fn maxcut_depth_bounds(n: usize, d: usize, kind: CircuitKind) -> Result<DepthBound> {
    if n < 1 {
        return Err(Error::validation("n must be ≥ 1"));
    }
    let ratio = n as f64 / 576.0;
    let (value, log_base) = match kind {
        CircuitKind::LowDepth => (0.5 * ratio.log2(), LogBase::Bits),
        CircuitKind::Qaoa => {
            if d < 3 {
                return Err(Error::validation("ansatz bound needs degree D ≥ 3"));
            }
            (ratio.ln() / (2.0 * ((d + 1) as f64).ln()), LogBase::Nats)
        }
    };
    Ok(DepthBound {
        kind,
        value,
        log_base,
        vacuous: !(value > 0.0),
    })
}

/// Largest instance size a depth-independent noisy circuit can still cut
/// near-optimally: n ≤ 3·2^{2/p+8}.
pub fn maxcut_noisy_max_n(p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::validation("p must be positive"));
    }
    Ok(3.0 * 2f64.powf(2.0 / p + 8.0))
}

/// Goemans–Williamson approximation ratio, consumed as a constant.
pub const GW_RATIO: f64 = 0.878;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ApproxThreshold {
    pub ratio: f64,
    /// True when the ratio falls below the classical benchmark.
    pub below_gw: bool,
}

/// Best approximation ratio reachable by symmetric-output circuits on
/// D-regular bipartite expanders: 5/6 + √(D−1)/(3D).
pub fn approx_threshold(d: usize) -> Result<ApproxThreshold> {
    if d < 2 {
        return Err(Error::validation("degree must be ≥ 2"));
    }
    let df = d as f64;
    let ratio = 5.0 / 6.0 + (df - 1.0).sqrt() / (3.0 * df);
    Ok(ApproxThreshold {
        ratio,
        below_gw: ratio < GW_RATIO,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TimeBound {
    /// Lower bound on the evolution time, when the logarithm is defined.
    pub value: Option<f64>,
    pub vacuous: bool,
}

fn log_time_bound(arg: f64, v: f64) -> TimeBound {
    if arg <= 0.0 {
        return TimeBound {
            value: None,
            vacuous: true,
        };
    }
    let value = arg.ln() / v;
    TimeBound {
        value: Some(value),
        vacuous: !(value > 0.0),
    }
}

/// Annealing-time lower bound T ≥ (1/v)·ln(√n/(12c₁) − c₀/c₁) for preparing
/// near-optimal cut states on bounded-degree instances.
pub fn anneal_time_lower(n: usize, params: &ContinuousParams) -> Result<TimeBound> {
    let (c0, c1) = crate::transport::continuous_c0_c1(params)?;
    Ok(log_time_bound(
        (n as f64).sqrt() / (12.0 * c1) - c0 / c1,
        params.velocity(),
    ))
}

/// GHZ preparation-time lower bound t ≥ (1/v)·ln(n/(8c₁) − c₀/c₁).
pub fn ghz_time_lower(n: usize, params: &ContinuousParams) -> Result<TimeBound> {
    let (c0, c1) = crate::transport::continuous_c0_c1(params)?;
    Ok(log_time_bound(n as f64 / (8.0 * c1) - c0 / c1, params.velocity()))
}

/// Lieb-Robinson bound (2M/(2D−1))·k₀^{δ−1}·e^{vt−k₀} on the trace distance
/// between full and restricted evolutions, valid for k₀ ≥ 2δ−1.
pub fn lr_bound(params: &ContinuousParams, k0: usize, t: f64) -> Result<f64> {
    params.validate()?;
    if (k0 as f64) < 2.0 * params.delta - 1.0 {
        return Err(Error::precondition("need dist(A, V∖B) ≥ 2δ−1"));
    }
    if t < 0.0 {
        return Err(Error::validation("time must be ≥ 0"));
    }
    let k = k0 as f64;
    Ok(2.0 * params.m / (2.0 * params.deg - 1.0)
        * k.powf(params.delta - 1.0)
        * (params.velocity() * t - k).exp())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegularGraphThreshold {
    /// Energy threshold (((1−2q)²D/2 + (2/π)√D)² − εD²)/(2D²)·n.
    pub threshold: f64,
    /// The ε = 0 reference value of the same expression.
    pub threshold_eps0: f64,
    /// Mean energy of the product fixed point: (1−2q)²·n·D/2.
    pub mean: f64,
    /// Classical spin-glass benchmark energy −(2/π)·√D·n.
    pub classical_benchmark: f64,
    /// Probability of exceeding the threshold: e^{−εn/2}.
    pub tail: f64,
}

/// Energy threshold unreachable by noisy circuits on random D-regular graphs.
pub fn regular_graph_threshold(
    q: f64,
    d: usize,
    n: usize,
    eps: f64,
) -> Result<RegularGraphThreshold> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::validation("q must lie in (0,1)"));
    }
    if d < 3 {
        return Err(Error::validation("degree must be ≥ 3"));
    }
    if eps < 0.0 {
        return Err(Error::validation("ε must be ≥ 0"));
    }
    let df = d as f64;
    let nf = n as f64;
    let base = (1.0 - 2.0 * q).powi(2) * df / 2.0 + 2.0 / std::f64::consts::PI * df.sqrt();
    let at = |e: f64| (base * base - e * df * df) / (2.0 * df * df) * nf;
    Ok(RegularGraphThreshold {
        threshold: at(eps),
        threshold_eps0: at(0.0),
        mean: (1.0 - 2.0 * q).powi(2) * nf * df / 2.0,
        classical_benchmark: -2.0 / std::f64::consts::PI * df.sqrt() * nf,
        tail: (-eps * nf / 2.0).exp().min(1.0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MitigationBound {
    /// Whether the per-copy divergence budget was met.
    pub applicable: bool,
    /// Σᵢ D₂ budget c(r²−ε)n/ℓ₀².
    pub budget: f64,
    pub total_d2: f64,
    /// Deviation level r·L_f·n.
    pub level: f64,
    /// exp(−c·ε·n/ℓ₀²); None when not applicable.
    pub probability: Option<f64>,
    pub notes: Vec<String>,
}

/// Concentration of an m-copy error-mitigation estimator around its value on
/// the noise fixed point, given per-copy order-2 divergences to that fixed
/// point. `k_of_m` is the union-bound constant of the collective profile
/// (min-of-m energy estimator: K(m) = m, L_f = 1).
#[allow(clippy::too_many_arguments)]
pub fn mitigation_concentration(
    m: usize,
    k_of_m: f64,
    l_f: f64,
    ell0: f64,
    c: f64,
    r: f64,
    eps: f64,
    n: usize,
    d2_per_copy: &[f64],
) -> Result<MitigationBound> {
    if m == 0 || d2_per_copy.len() != m {
        return Err(Error::validation("need one D₂ value per copy"));
    }
    if l_f <= 0.0 || ell0 <= 0.0 || c <= 0.0 || k_of_m <= 0.0 {
        return Err(Error::validation("profile constants must be positive"));
    }
    if r <= 0.0 || eps <= 0.0 {
        return Err(Error::validation("need r > 0 and ε > 0"));
    }
    if d2_per_copy.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::validation("divergences must be finite and ≥ 0"));
    }
    let nf = n as f64;
    let budget = c * (r * r - eps) * nf / (ell0 * ell0);
    let total_d2: f64 = d2_per_copy.iter().sum();
    let mut notes = vec![
        "divergence budget uses the quadratic form c(r²−ε)n/ℓ₀²; a linear \
         variant c(r−ε)n/ℓ₀ appears elsewhere and is not used"
            .to_string(),
    ];
    let applicable = total_d2 <= budget + 1e-12;
    if !applicable {
        notes.push(format!(
            "total D₂ = {total_d2:.6} exceeds budget {budget:.6}; bound not applicable"
        ));
    }
    Ok(MitigationBound {
        applicable,
        budget,
        total_d2,
        level: r * l_f * nf,
        probability: applicable.then(|| (-c * eps * nf / (ell0 * ell0)).exp().min(1.0)),
        notes,
    })
}

/// Tail for noisy-annealer outputs falling below
/// tr[τ_q^{⊗n}H] − 2^{−1/2}·(h(T)+ε)^{1/2}·‖H‖_L·n, with probability e^{−εn/2}.
pub fn noisy_annealer_tail(
    q: f64,
    t_total: f64,
    eps: f64,
    n: usize,
    lipschitz: f64,
    mean_energy: f64,
) -> Result<TailBound> {
    if eps <= 0.0 || lipschitz < 0.0 {
        return Err(Error::validation("need ε > 0 and ‖H‖_L ≥ 0"));
    }
    let h = crate::entropy::h_of_t(q, t_total)?;
    let nf = n as f64;
    Ok(TailBound {
        level: mean_energy - (h + eps).sqrt() / std::f64::consts::SQRT_2 * lipschitz * nf,
        probability: (-eps * nf / 2.0).exp().min(1.0),
    })
}
