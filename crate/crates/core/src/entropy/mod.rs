//! Sandwiched Rényi divergences, contraction rates, layered and
//! continuous-time entropy-decay ledgers, and purity bounds.

use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::numerics::{
    matrix_power, op_norm, sandwich_superoperator, superoperator_matrix, support_projector,
    trace_product_re, CMat, CVec,
};
use crate::quantum::{DensityMatrix, PiecewiseLinear};

#[cfg(test)]
mod tests;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogBase {
    Nats,
    Bits,
}

/// A divergence value; +∞ encodes a support violation. Stored in nats.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DivergenceValue {
    pub value: f64,
    /// Order α > 1; `f64::INFINITY` for the max-divergence.
    pub alpha: f64,
    pub log_base: LogBase,
}

impl DivergenceValue {
    pub fn in_bits(&self) -> f64 {
        match self.log_base {
            LogBase::Bits => self.value,
            LogBase::Nats => self.value / std::f64::consts::LN_2,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Mass of ρ outside the support of σ.
fn mass_outside_support(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let p = support_projector(&sigma.mat)?;
    let dim = rho.dim();
    let complement = crate::numerics::eye(dim) - p;
    Ok(trace_product_re(&complement, &rho.mat).max(0.0))
}

/// Sandwiched Rényi divergence
/// D_α(ρ‖σ) = (1/(α−1))·ln tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α], in nats.
pub fn renyi_divergence(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
) -> Result<DivergenceValue> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::validation("α must be finite and > 1"));
    }
    if rho.shape != sigma.shape {
        return Err(Error::validation("states live on different registers"));
    }
    if mass_outside_support(rho, sigma)? > TOL.support_mass {
        return Ok(DivergenceValue {
            value: f64::INFINITY,
            alpha,
            log_base: LogBase::Nats,
        });
    }
    let exponent = (1.0 - alpha) / (2.0 * alpha);
    let dressing = matrix_power(&sigma.mat, exponent)?;
    let inner = crate::numerics::hermitize(&(&dressing * &rho.mat * &dressing));
    let powered = matrix_power(&inner, alpha)?;
    let tr = powered.trace().re.max(0.0);
    let value = (tr.ln() / (alpha - 1.0)).max(0.0);
    Ok(DivergenceValue {
        value,
        alpha,
        log_base: LogBase::Nats,
    })
}

/// D_∞(ρ‖σ) = ln ‖σ^{−1/2} ρ σ^{−1/2}‖∞, in nats.
pub fn max_divergence(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    if rho.shape != sigma.shape {
        return Err(Error::validation("states live on different registers"));
    }
    if mass_outside_support(rho, sigma)? > TOL.support_mass {
        return Ok(DivergenceValue {
            value: f64::INFINITY,
            alpha: f64::INFINITY,
            log_base: LogBase::Nats,
        });
    }
    let inv_root = matrix_power(&sigma.mat, -0.5)?;
    let value = op_norm(&(&inv_root * &rho.mat * &inv_root)).ln().max(0.0);
    Ok(DivergenceValue {
        value,
        alpha: f64::INFINITY,
        log_base: LogBase::Nats,
    })
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::validation("q must lie strictly inside (0,1)"));
    }
    Ok(())
}

/// z(β, q) = 2cos(2β) + sin²(β)/(q(1−q)); always ≥ 2.
pub fn z_mixer(beta: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(2.0 * (2.0 * beta).cos() + beta.sin().powi(2) / (q * (1.0 - q)))
}

/// Max-divergence cost of one transversal X-rotation layer against τ_q^{⊗n}:
/// n·ln((z + √(z²−4))/2). Evaluated through w = z − 2 = sin²β·(1−2q)²/(q(1−q)),
/// which stays exact where the direct z² − 4 would cancel catastrophically.
pub fn mixer_layer_dinf(beta: f64, q: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    let w = beta.sin().powi(2) * (1.0 - 2.0 * q).powi(2) / (q * (1.0 - q));
    let disc = (w * (w + 4.0)).sqrt();
    Ok(n as f64 * ((2.0 + w + disc) / 2.0).ln().max(0.0))
}

/// D₂(|+⟩⟨+|^{⊗n} ‖ τ_q^{⊗n}) = n·ln((1 + 2√(q−q²))/(4(q−q²))), in nats.
pub fn d2_plus_state(q: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    let qq = q * (1.0 - q);
    Ok(n as f64 * ((1.0 + 2.0 * qq.sqrt()) / (4.0 * qq)).ln())
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub layer: usize,
    pub factor: f64,
    pub penalty: f64,
    pub running: f64,
}

/// Layer-by-layer decay bound: D_m ≤ (1−q_α)·D_{m−1} + penalty_m.
#[derive(Debug, Clone, Serialize)]
pub struct DecayLedger {
    pub d_init: f64,
    pub q_alpha: f64,
    pub entries: Vec<LedgerEntry>,
    pub bound: f64,
}

pub fn generic_decay_bound(d_init: f64, q_alpha: f64, penalties: &[f64]) -> Result<DecayLedger> {
    if !(q_alpha > 0.0 && q_alpha <= 1.0) {
        return Err(Error::validation("q_α must lie in (0, 1]"));
    }
    if d_init < 0.0 || penalties.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::validation("divergences and penalties must be ≥ 0"));
    }
    let factor = 1.0 - q_alpha;
    let mut running = d_init;
    let mut entries = Vec::with_capacity(penalties.len());
    for (layer, &penalty) in penalties.iter().enumerate() {
        running = factor * running + penalty;
        entries.push(LedgerEntry {
            layer: layer + 1,
            factor,
            penalty,
            running,
        });
    }
    Ok(DecayLedger {
        d_init,
        q_alpha,
        bound: running,
        entries,
    })
}

/// Entropy ledger for a depth-P transverse-mixer ansatz under per-layer noise
/// with fixed point τ_q: diagonal phase layers cost nothing, each mixer layer
/// adds its max-divergence penalty, the initial divergence is that of |+⟩^{⊗n}.
pub fn qaoa_entropy_bound(beta: &[f64], q: f64, p_alpha: f64, n: usize) -> Result<DecayLedger> {
    let d_init = d2_plus_state(q, n)?;
    let mut penalties = Vec::with_capacity(2 * beta.len());
    for &b in beta {
        penalties.push(0.0); // diagonal phase layer commutes with τ_q^{⊗n}
        penalties.push(mixer_layer_dinf(b, q, n)?);
    }
    generic_decay_bound(d_init, p_alpha, &penalties)
}

#[derive(Debug, Clone, Serialize)]
pub enum RateKind {
    /// Per-layer contraction constant q_α ∈ (0, 1].
    Discrete(f64),
    /// Continuous rate r_α > 0.
    Continuous(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionRate {
    pub alpha: f64,
    pub kind: RateKind,
    pub provenance: String,
}

/// Continuous order-2 rate r₂ = 2λ·(1 − 1/‖σ⁻¹‖)/ln‖σ⁻¹‖ for a primitive
/// Lindbladian with full-rank fixed point σ and spectral gap λ.
pub fn r2_rate(sigma: &CMat, gap: f64) -> Result<ContractionRate> {
    let spec = crate::numerics::eig_hermitian(sigma)?;
    let min = spec.eigenvalues[0];
    if min <= TOL.pinv_cutoff {
        return Err(Error::precondition("fixed point must be full rank"));
    }
    if gap <= 0.0 {
        return Err(Error::validation("spectral gap must be positive"));
    }
    let s = 1.0 / min;
    let r2 = 2.0 * gap * (1.0 - 1.0 / s) / s.ln();
    Ok(ContractionRate {
        alpha: 2.0,
        kind: RateKind::Continuous(r2),
        provenance: "local-fixed-point-rate".into(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SdpiResult {
    /// Largest mixing parameter for which the weighted 2→2 norm stays ≤ 1.
    pub p_star: f64,
    /// Per-layer order-2 contraction factor (1−p*)^{(s−1)/(s·ln s)}.
    pub factor: f64,
    /// Certificate: the norm evaluated at p_star.
    pub norm_at_p_star: f64,
}

fn vec_of(m: &CMat) -> CVec {
    // Column stacking, matching the superoperator convention.
    let (r, c) = (m.nrows(), m.ncols());
    CVec::from_iterator(r * c, (0..c).flat_map(|j| (0..r).map(move |i| m[(i, j)])))
}

/// Largest p such that ‖Γ_σ^{−1/2} ∘ 𝒩 ∘ 𝒟_{p,σ}^{−1} ∘ Γ_σ^{1/2}‖_{2→2} ≤ 1,
/// where 𝒟_{p,σ}(X) = (1−p)X + p·tr[X]σ; found by bisection.
pub fn sdpi_max_p(kraus: &[CMat], sigma: &CMat) -> Result<SdpiResult> {
    let d = sigma.nrows();
    crate::numerics::check_kraus(kraus, d)?;
    let spec = crate::numerics::eig_hermitian(sigma)?;
    if spec.eigenvalues[0] <= TOL.pinv_cutoff {
        return Err(Error::precondition("σ must be full rank"));
    }
    // Check 𝒩(σ) = σ.
    let mut ns = CMat::zeros(d, d);
    for k in kraus {
        ns += k * sigma * k.adjoint();
    }
    if op_norm(&(&ns - sigma)) > 1e-10 {
        return Err(Error::precondition("channel does not fix σ"));
    }
    let s_norm = 1.0 / spec.eigenvalues[0];
    let quarter = matrix_power(sigma, 0.25)?;
    let quarter_inv = matrix_power(sigma, -0.25)?;
    let gamma_half = sandwich_superoperator(&quarter, &quarter);
    let gamma_half_inv = sandwich_superoperator(&quarter_inv, &quarter_inv);
    let n_mat = superoperator_matrix(kraus)?;
    let sigma_vec = vec_of(sigma);
    let id_vec = vec_of(&crate::numerics::eye(d));
    let norm_at = |p: f64| -> f64 {
        // 𝒟^{−1}(X) = (X − p·tr[X]σ)/(1−p) as a matrix on vec(X).
        let mut d_inv = CMat::identity(d * d, d * d);
        for i in 0..d * d {
            for j in 0..d * d {
                d_inv[(i, j)] -= sigma_vec[i] * id_vec[j].conj() * crate::numerics::cr(p);
            }
        }
        d_inv /= crate::numerics::cr(1.0 - p);
        let m = &gamma_half_inv * &n_mat * d_inv * &gamma_half;
        op_norm(&m)
    };
    if norm_at(0.0) > 1.0 + 1e-8 {
        return Ok(SdpiResult {
            p_star: 0.0,
            factor: 1.0,
            norm_at_p_star: norm_at(0.0),
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-9);
    if norm_at(hi) <= 1.0 + 1e-8 {
        lo = hi;
    } else {
        while hi - lo > TOL.bisection {
            let mid = 0.5 * (lo + hi);
            if norm_at(mid) <= 1.0 + 1e-8 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let exponent = (s_norm - 1.0) / (s_norm * s_norm.ln());
    Ok(SdpiResult {
        p_star: lo,
        factor: (1.0 - lo).powf(exponent),
        norm_at_p_star: norm_at(lo),
    })
}

/// ∫₀^T e^{rt}·|f(t/T)| dt, exactly on each linear piece of f.
pub fn schedule_integral(f: &PiecewiseLinear, t_total: f64, rate: f64) -> Result<f64> {
    if t_total < 0.0 {
        return Err(Error::validation("T must be ≥ 0"));
    }
    // Work in normalized time: T·∫₀¹ e^{cs}|f(s)| ds with c = r·T.
    let c = rate * t_total;
    let antiderivative = |a: f64, b: f64, s: f64| -> f64 {
        // ∫ e^{cs}(a + b·s) ds
        if c.abs() < 1e-14 {
            a * s + 0.5 * b * s * s
        } else {
            (c * s).exp() * ((a + b * s) / c - b / (c * c))
        }
    };
    let mut total = 0.0;
    let xs = &f.xs;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0].clamp(0.0, 1.0), w[1].clamp(0.0, 1.0));
        if x1 <= x0 {
            continue;
        }
        let (y0, y1) = (f.eval(x0), f.eval(x1));
        let b = (y1 - y0) / (x1 - x0);
        let a = y0 - b * x0;
        // Split at a sign change so |f| stays a single linear function.
        let mut cuts = vec![x0, x1];
        if y0 * y1 < 0.0 {
            cuts.insert(1, x0 - y0 / b);
        }
        for seg in cuts.windows(2) {
            let sign = if f.eval(0.5 * (seg[0] + seg[1])) >= 0.0 { 1.0 } else { -1.0 };
            total += sign * (antiderivative(a, b, seg[1]) - antiderivative(a, b, seg[0]));
        }
    }
    // Pieces may not span [0,1]; f.eval clamps, so extend with constants.
    let first = xs[0].clamp(0.0, 1.0);
    if first > 0.0 {
        let y = f.eval(0.0);
        total += y.abs() * (antiderivative(1.0, 0.0, first) - antiderivative(1.0, 0.0, 0.0));
    }
    let last = xs[xs.len() - 1].clamp(0.0, 1.0);
    if last < 1.0 {
        let y = f.eval(1.0);
        total += y.abs() * (antiderivative(1.0, 0.0, 1.0) - antiderivative(1.0, 0.0, last));
    }
    Ok(t_total * total)
}

/// Commutator norm ‖τ_q^{−1/2} [τ_q, X] τ_q^{−1/2}‖∞ = |1−2q|/√(q(1−q)).
pub fn mixing_commutator_norm(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 - 2.0 * q).abs() / (q * (1.0 - q)).sqrt())
}

/// Continuous-time decay bound for a driven dissipative evolution with local
/// fixed point τ_q and transversal driving envelope f:
/// D_α(T) ≤ e^{−r_αT}·D_init + n·e^{−r_αT}·κ(q)·∫₀^T e^{r_αt}|f(t/T)|dt.
pub fn annealer_entropy_bound(
    d_init: f64,
    q: f64,
    t_total: f64,
    r_alpha: f64,
    f: &PiecewiseLinear,
    n: usize,
) -> Result<f64> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::validation("q must lie in (0, 1/2]"));
    }
    if t_total <= 0.0 || r_alpha <= 0.0 {
        return Err(Error::validation("need T > 0 and r_α > 0"));
    }
    let kappa = mixing_commutator_norm(q)?;
    let integral = schedule_integral(f, t_total, r_alpha)?;
    Ok((-r_alpha * t_total).exp() * (d_init + n as f64 * kappa * integral))
}

/// Per-site divergence bound h(T) for the linear-ramp schedule (nats):
/// h(T) = e^{−r₂T}·ln((1+2√(q−q²))/(4(q−q²)))
///        + κ(q)·(1 − e^{−r₂T}r₂T − e^{−r₂T})/(r₂²T).
pub fn h_of_t(q: f64, t_total: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::validation("q must lie in (0, 1/2]"));
    }
    if t_total <= 0.0 {
        return Err(Error::validation("T must be positive"));
    }
    let r2 = 2.0 * (1.0 - q) / (1.0 / q).ln();
    let decay = (-r2 * t_total).exp();
    let d0 = d2_plus_state(q, 1)?;
    let kappa = mixing_commutator_norm(q)?;
    Ok(decay * d0 + kappa * (1.0 - decay * r2 * t_total - decay) / (r2 * r2 * t_total))
}

/// tr[ρ^k].
pub fn moment(rho: &DensityMatrix, k: u32) -> f64 {
    let spec = crate::numerics::eig_hermitian(&rho.mat).expect("validated state");
    spec.eigenvalues
        .iter()
        .map(|&l| l.max(0.0).powi(k as i32))
        .sum()
}

/// Distillation success bound 2^{−εn} with ε read off from
/// D₂(ρ‖τ_q^{⊗n}) ≤ (1 − ε − log₂(2(1−q)))·n; clamped to 1 when vacuous.
pub fn purity_bound_from_entropy(d2_to_tau_nats: f64, q: f64, n: usize) -> Result<f64> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::validation("q must lie in (0, 1/2]"));
    }
    if d2_to_tau_nats < 0.0 {
        return Err(Error::validation("divergence must be ≥ 0"));
    }
    let d2_bits = d2_to_tau_nats / std::f64::consts::LN_2;
    let eps = 1.0 - (2.0 * (1.0 - q)).log2() - d2_bits / n as f64;
    Ok(2f64.powf(-eps * n as f64).min(1.0))
}

/// Unital purity decay tr[𝒩_V(ρ)²] ≤ exp(−ln2·(1 − factor^L)·n), where
/// `factor` is the per-layer order-2 contraction (depolarizing: (1−p)²).
pub fn purity_decay_unital(factor: f64, layers: u32, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&factor) {
        return Err(Error::validation("contraction factor must lie in [0,1]"));
    }
    let ln2 = std::f64::consts::LN_2;
    Ok((-ln2 * (1.0 - factor.powi(layers as i32)) * n as f64).exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnealPurityThreshold {
    /// Required h(T) value, in bits.
    pub threshold_bits: f64,
    /// First grid time meeting the requirement, if any.
    pub first_t: Option<f64>,
}

/// Threshold h(T) ≤ 1 − log₂(2(1−q)) − ε for exponentially small distillation
/// success, searched over a time grid (h is checked to decrease on the grid).
pub fn annealer_purity_threshold(
    q: f64,
    eps: f64,
    t_grid: &[f64],
) -> Result<AnnealPurityThreshold> {
    if eps <= 0.0 {
        return Err(Error::validation("ε must be positive"));
    }
    let threshold = 1.0 - (2.0 * (1.0 - q)).log2() - eps;
    if threshold <= 0.0 {
        return Err(Error::precondition(
            "requirement is non-positive: no annealing time can meet it",
        ));
    }
    let mut first_t = None;
    let mut prev: Option<f64> = None;
    for &t in t_grid {
        let h_bits = h_of_t(q, t)? / std::f64::consts::LN_2;
        if let Some(p) = prev {
            if h_bits > p + 1e-12 {
                return Err(Error::precondition(
                    "h(T) is not decreasing on the supplied grid",
                ));
            }
        }
        prev = Some(h_bits);
        if first_t.is_none() && h_bits <= threshold {
            first_t = Some(t);
        }
    }
    Ok(AnnealPurityThreshold {
        threshold_bits: threshold,
        first_t,
    })
}
