//! Lipschitz constants, variances, KMS norms, light-cones, Poincaré constants
//! and the symmetric concentration check built on top of them.

use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::maxcut::{hamming, Graph};
use crate::numerics::{
    cr, eig_hermitian, eye, matrix_power, op_norm, replace_site, trace_product_re, CMat,
};
use crate::quantum::{CircuitArchitecture, DensityMatrix, Layer, MeasuredDistribution, Observable};

mod w1;

pub use w1::{w1_classical, w1_quantum_bounds, W1Classical, W1Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LipschitzMode {
    ExactClassical,
    SurrogateQuantum,
    /// Bisection bracket (lower, upper) on the true constant.
    CertifiedQuantum { bracket: (f64, f64) },
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub mode: LipschitzMode,
    pub per_vertex: Vec<f64>,
}

/// Exact Lipschitz constant of a diagonal observable under the Hamming metric:
/// the maximum change of the diagonal function over a single-site substitution.
pub fn lipschitz_classical(o: &Observable) -> Result<LipschitzEstimate> {
    if !o.diagonal {
        return Err(Error::validation(
            "observable is not diagonal; use lipschitz_quantum_bound",
        ));
    }
    let n = o.shape.n;
    let d = o.shape.d;
    let dim = o.shape.dim();
    let f = |x: usize| o.mat[(x, x)].re;
    let mut per_vertex = vec![0.0f64; n];
    for v in 0..n {
        // stride of site v in the mixed-radix index
        let stride = d.pow((n - 1 - v) as u32);
        let mut worst = 0.0f64;
        for x in 0..dim {
            let digit = (x / stride) % d;
            let base = x - digit * stride;
            for alt in 0..d {
                if alt == digit {
                    continue;
                }
                worst = worst.max((f(x) - f(base + alt * stride)).abs());
            }
        }
        per_vertex[v] = worst;
    }
    let value = per_vertex.iter().cloned().fold(0.0, f64::max);
    Ok(LipschitzEstimate {
        value,
        mode: LipschitzMode::ExactClassical,
        per_vertex,
    })
}

/// Partial-trace surrogate ∂̃_v = 2‖O − I_v ⊗ tr_v O / d‖∞, an upper bound on
/// the per-vertex Lipschitz contribution; value = max_v ∂̃_v.
pub fn lipschitz_quantum_bound(o: &Observable) -> Result<LipschitzEstimate> {
    let dims = o.shape.dims();
    let d = o.shape.d;
    let unit = eye(d) * cr(1.0 / d as f64);
    let mut per_vertex = Vec::with_capacity(o.shape.n);
    for v in 0..o.shape.n {
        let averaged = replace_site(&o.mat, &unit, &dims, v)?;
        per_vertex.push(2.0 * op_norm(&(&o.mat - averaged)));
    }
    let value = per_vertex.iter().cloned().fold(0.0, f64::max);
    Ok(LipschitzEstimate {
        value,
        mode: LipschitzMode::SurrogateQuantum,
        per_vertex,
    })
}

/// Bracket the per-vertex constant ∂_v O = 2·min_B ‖O − I_v ⊗ B‖∞ by bisecting
/// the feasibility of "‖O − I_v⊗B‖∞ ≤ c for some B" with alternating
/// projections. Returns (lower, upper) in the same 2·min units as the surrogate.
pub fn lipschitz_certified_bracket(o: &Observable, v: usize) -> Result<(f64, f64)> {
    let dims = o.shape.dims();
    let d = o.shape.d;
    if v >= o.shape.n {
        return Err(Error::validation("vertex out of range"));
    }
    let unit = eye(d) * cr(1.0 / d as f64);
    let surrogate = op_norm(&(&o.mat - replace_site(&o.mat, &unit, &dims, v)?));
    let feasible = |c: f64| -> Result<bool> {
        // Alternate between {X : ‖O − X‖∞ ≤ c} and {I_v ⊗ B}.
        let mut x = o.mat.clone();
        let mut resid = f64::INFINITY;
        for _ in 0..200 {
            let b_point = replace_site(&x, &unit, &dims, v)?;
            let new_resid = op_norm(&(&o.mat - &b_point));
            if new_resid <= c + 1e-9 {
                return Ok(true);
            }
            if (resid - new_resid).abs() < 1e-12 {
                break;
            }
            resid = new_resid;
            // Frobenius projection of B-point onto the ∞-norm ball around O:
            // clip the eigenvalues of the (Hermitian) difference at ±c.
            let diff = b_point - &o.mat;
            let spec = eig_hermitian(&diff)?;
            x = &o.mat + spec.apply(|l| l.clamp(-c, c));
        }
        Ok(false)
    };
    let (mut lo, mut hi) = (0.0f64, surrogate);
    while hi - lo > TOL.bisection {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((2.0 * lo, 2.0 * hi))
}

/// Var_ρ(O) = tr[ρO²] − tr[ρO]².
pub fn variance(rho: &DensityMatrix, o: &Observable) -> Result<f64> {
    if rho.shape != o.shape {
        return Err(Error::validation("state/observable register mismatch"));
    }
    let o2 = &o.mat * &o.mat;
    let second = trace_product_re(&o2, &rho.mat);
    let first = o.expectation(rho);
    Ok((second - first * first).max(0.0))
}

/// KMS norm ‖H‖_σ = tr[H† σ^{1/2} H σ^{1/2}]^{1/2}.
pub fn kms_norm(sigma: &DensityMatrix, h: &CMat) -> Result<f64> {
    let root = matrix_power(&sigma.mat, 0.5)?;
    let val = trace_product_re(&(h.adjoint() * &root), &(h * root));
    Ok(val.max(0.0).sqrt())
}

/// Forward-reachability light-cone data for a layered architecture.
#[derive(Debug, Clone, Serialize)]
pub struct LightCone {
    /// I_v for every output vertex.
    pub per_vertex: Vec<Vec<usize>>,
    pub i_max: usize,
    /// Per layer ℓ: (|E_ℓ|, max_e |I(e, L−ℓ)|) over that layer's gate supports
    /// (graph layers contribute one element per graph edge).
    pub layer_tables: Vec<(usize, usize)>,
}

fn grow_set(set: &mut Vec<bool>, layer: &Layer) {
    match layer {
        Layer::Gates(gates) => {
            for g in gates {
                if g.support.iter().any(|&v| set[v]) {
                    for &v in &g.support {
                        set[v] = true;
                    }
                }
            }
        }
        Layer::GraphUnitary { graph, .. } => {
            let mut add = Vec::new();
            for &(a, b) in &graph.edges {
                if set[a] {
                    add.push(b);
                }
                if set[b] {
                    add.push(a);
                }
            }
            for v in add {
                set[v] = true;
            }
        }
    }
}

fn grow_through<'a>(
    n: usize,
    seed: &[usize],
    layers: impl Iterator<Item = &'a Layer>,
) -> Vec<usize> {
    let mut set = vec![false; n];
    for &v in seed {
        set[v] = true;
    }
    for layer in layers {
        grow_set(&mut set, layer);
    }
    (0..n).filter(|&v| set[v]).collect()
}

pub fn light_cone(arch: &CircuitArchitecture) -> LightCone {
    let n = arch.shape.n;
    let per_vertex: Vec<Vec<usize>> = (0..n)
        .map(|v| grow_through(n, &[v], arch.layers.iter().rev()))
        .collect();
    let i_max = per_vertex.iter().map(|s| s.len()).max().unwrap_or(0);
    let layer_tables = arch
        .layers
        .iter()
        .enumerate()
        .map(|(l, layer)| {
            let elements: Vec<Vec<usize>> = match layer {
                Layer::Gates(gates) => gates.iter().map(|g| g.support.clone()).collect(),
                Layer::GraphUnitary { graph, .. } =>
                    graph.edges.iter().map(|&(a, b)| vec![a, b]).collect(),
            };
            let rest = &arch.layers[l + 1..];
            let max_cone = elements
                .iter()
                .map(|e| grow_through(n, e, rest.iter()).len())
                .max()
                .unwrap_or(0);
            (elements.len(), max_cone)
        })
        .collect();
    LightCone {
        per_vertex,
        i_max,
        layer_tables,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PoincareSetting {
    Noiseless,
    Noisy,
    Continuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoincareConstant {
    pub value: f64,
    pub setting: PoincareSetting,
    pub provenance: String,
}

/// Noiseless shallow circuit: C ≤ 4·I_max².
pub fn poincare_noiseless(arch: &CircuitArchitecture) -> PoincareConstant {
    let lc = light_cone(arch);
    PoincareConstant {
        value: 4.0 * (lc.i_max as f64).powi(2),
        setting: PoincareSetting::Noiseless,
        provenance: "noiseless-light-cone".into(),
    }
}

/// Noise-interleaved circuit:
/// C ≤ 4(I_max² + (max_ℓ|E_ℓ|/n)·Σ_ℓ max_e |I(e, L−ℓ)|²).
pub fn poincare_noisy(arch: &CircuitArchitecture) -> PoincareConstant {
    let lc = light_cone(arch);
    let n = arch.shape.n as f64;
    let max_layer = lc.layer_tables.iter().map(|&(sz, _)| sz).max().unwrap_or(0) as f64;
    let cone_sum: f64 = lc
        .layer_tables
        .iter()
        .map(|&(_, cone)| (cone as f64).powi(2))
        .sum();
    PoincareConstant {
        value: 4.0 * ((lc.i_max as f64).powi(2) + max_layer / n * cone_sum),
        setting: PoincareSetting::Noisy,
        provenance: "noisy-light-cone".into(),
    }
}

/// Geometry of a continuous-time local evolution: spatial dimension δ, sphere
/// constant M (|S_e(k)| ≤ M k^{δ−1}), maximum degree D and coupling bound b.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContinuousParams {
    pub m: f64,
    pub delta: f64,
    pub deg: f64,
    pub b: f64,
}

impl ContinuousParams {
    /// Lieb-Robinson velocity v = e·b·(2D−1).
    pub fn velocity(&self) -> f64 {
        std::f64::consts::E * self.b * (2.0 * self.deg - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m <= 0.0 || self.delta < 1.0 || self.deg < 1.0 || self.b < 0.0 {
            return Err(Error::validation("need M > 0, δ ≥ 1, D ≥ 1, b ≥ 0"));
        }
        Ok(())
    }
}

/// Exact-sum continuous-time constant
/// C_t ≤ 4(2(i₀−1) + (4M/(2D−1)) Σ_{i≥i₀} d(i)^{δ−1} e^{vt−d(i)})², where d(i)
/// are graph distances from a root vertex sorted ascending and i₀ is the first
/// index with d(i) ≥ 2δ−1.
pub fn poincare_continuous_exact(
    params: &ContinuousParams,
    t: f64,
    distances: &[f64],
) -> Result<PoincareConstant> {
    params.validate()?;
    if distances.is_empty() {
        return Err(Error::validation("distance table required in exact mode"));
    }
    if distances.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::validation("distance table must be sorted ascending"));
    }
    let v = params.velocity();
    let threshold = 2.0 * params.delta - 1.0;
    let i0 = distances
        .iter()
        .position(|&d| d >= threshold)
        .map(|p| p + 1)
        .unwrap_or(distances.len() + 1);
    let mut sum = 0.0;
    for &d in &distances[i0 - 1..] {
        sum += d.powf(params.delta - 1.0) * (v * t - d).exp();
    }
    let inner = 2.0 * (i0 as f64 - 1.0)
        + 4.0 * params.m / (2.0 * params.deg - 1.0) * sum;
    Ok(PoincareConstant {
        value: 4.0 * inner * inner,
        setting: PoincareSetting::Continuous,
        provenance: "continuous-exact-sum".into(),
    })
}

/// (c₀, c₁) coefficients of the simplified continuous bound:
/// c₀ = 64Mδ^δ, c₁ = (64M/(2D−1))·Li_{−2(δ−1)}(e^{−1}).
pub fn continuous_c0_c1(params: &ContinuousParams) -> Result<(f64, f64)> {
    params.validate()?;
    let k = 2.0 * (params.delta - 1.0);
    if k.fract() != 0.0 || k < 0.0 {
        return Err(Error::validation("δ must make 2(δ−1) a natural number"));
    }
    let c0 = 64.0 * params.m * params.delta.powf(params.delta);
    let c1 =
        64.0 * params.m / (2.0 * params.deg - 1.0) * polylog_neg(k as u32, (-1.0f64).exp())?;
    Ok((c0, c1))
}

/// Simplified continuous-time constant C_t ≤ (c₀ + c₁ e^{vt})².
pub fn poincare_continuous_simple(params: &ContinuousParams, t: f64) -> Result<PoincareConstant> {
    let (c0, c1) = continuous_c0_c1(params)?;
    let inner = c0 + c1 * (params.velocity() * t).exp();
    Ok(PoincareConstant {
        value: inner * inner,
        setting: PoincareSetting::Continuous,
        provenance: "continuous-simplified".into(),
    })
}

/// Li_{−k}(z) = Σ_{m≥1} m^k z^m for 0 < z < 1, summed to series tolerance.
pub fn polylog_neg(k: u32, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain("polylog argument must lie in (0,1)"));
    }
    let mut sum = 0.0;
    let mut m = 1u64;
    loop {
        let term = (m as f64).powi(k as i32) * z.powi(m as i32);
        sum += term;
        if term < TOL.series_term && m > 1 {
            break;
        }
        m += 1;
        if m > 10_000_000 {
            return Err(Error::Convergence("polylog series did not converge".into()));
        }
    }
    Ok(sum)
}

/// Sorted distance table d(i) from a BFS rooted at `root`.
pub fn graph_distance_table(g: &Graph, root: usize) -> Result<Vec<f64>> {
    if root >= g.n {
        return Err(Error::validation("root out of range"));
    }
    let mut dist = vec![usize::MAX; g.n];
    dist[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist.iter().any(|&d| d == usize::MAX) {
        return Err(Error::precondition("graph is not connected"));
    }
    let mut out: Vec<f64> = dist.into_iter().map(|d| d as f64).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricConcentrationReport {
    pub d_h: u32,
    pub rhs: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub pass: bool,
}

/// Check d_H(A,B) ≤ √(C·n)·(μ(A)^{−1/2} + μ(B)^{−1/2}).
pub fn symmetric_concentration_check(
    mu: &MeasuredDistribution,
    a: &[u64],
    b: &[u64],
    c: &PoincareConstant,
) -> Result<SymmetricConcentrationReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("A and B must be non-empty"));
    }
    let mu_a = mu.mass(a);
    let mu_b = mu.mass(b);
    if mu_a <= 0.0 || mu_b <= 0.0 {
        return Err(Error::domain("zero-probability set makes the bound vacuous"));
    }
    let d_h = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| hamming(x, y)))
        .min()
        .unwrap();
    let n = mu.shape.n as f64;
    let rhs = (c.value * n).sqrt() * (mu_a.powf(-0.5) + mu_b.powf(-0.5));
    Ok(SymmetricConcentrationReport {
        d_h,
        rhs,
        mu_a,
        mu_b,
        pass: (d_h as f64) <= rhs + 1e-9,
    })
}
