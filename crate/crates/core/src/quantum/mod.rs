//! States, observables, circuits, noise models, discrete-layer simulation,
//! Lindblad integration, measurement distributions and propagation-bound
//! discrepancy experiments.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::config::{dim_cap, TOL};
use crate::error::{Error, Result};
use crate::maxcut::Graph;
use crate::numerics::{
    self, apply_kraus, c, check_hermitian, cr, embed_operator, eig_hermitian, eye, hermitize,
    kron, paulis, CMat, CVec,
};

mod lindblad;
mod lr;
pub mod serial;

pub use lindblad::{simulate_lindblad, AnnealSchedule, LindbladResult, PiecewiseLinear};
pub use lr::{lr_discrepancy, LrTerm};

/// An n-qudit register with uniform local dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RegisterShape {
    pub n: usize,
    pub d: usize,
}

impl RegisterShape {
    pub fn qubits(n: usize) -> Self {
        RegisterShape { n, d: 2 }
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.d; self.n]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.d < 2 {
            return Err(Error::validation("register needs n ≥ 1, d ≥ 2"));
        }
        let cap = dim_cap();
        let dim = (self.d as f64).powi(self.n as i32);
        if dim > cap as f64 {
            return Err(Error::Size(format!(
                "register dimension {dim} exceeds cap {cap}"
            )));
        }
        Ok(())
    }
}

/// A validated density matrix on a register.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub shape: RegisterShape,
    pub mat: CMat,
}

impl DensityMatrix {
    pub fn new(shape: RegisterShape, mat: CMat) -> Result<Self> {
        shape.validate()?;
        if mat.nrows() != shape.dim() || mat.ncols() != shape.dim() {
            return Err(Error::validation("state dimension mismatch"));
        }
        check_hermitian(&mat)?;
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TOL.trace {
            return Err(Error::validation(format!("state trace {tr} ≠ 1")));
        }
        let spec = eig_hermitian(&mat)?;
        if spec.eigenvalues[0] < -TOL.positivity {
            return Err(Error::validation(format!(
                "state has negative eigenvalue {:.3e}",
                spec.eigenvalues[0]
            )));
        }
        Ok(DensityMatrix { shape, mat })
    }

    /// Construct without validation (for internal, provably valid states).
    pub(crate) fn unchecked(shape: RegisterShape, mat: CMat) -> Self {
        DensityMatrix { shape, mat }
    }

    /// Pure state from an amplitude vector (normalized internally).
    pub fn pure(shape: RegisterShape, amps: &CVec) -> Result<Self> {
        shape.validate()?;
        if amps.len() != shape.dim() {
            return Err(Error::validation("amplitude vector dimension mismatch"));
        }
        let n2 = amps.norm_squared();
        if n2 <= 0.0 {
            return Err(Error::validation("zero amplitude vector"));
        }
        Ok(DensityMatrix {
            shape,
            mat: amps * amps.adjoint() * cr(1.0 / n2),
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn purity(&self) -> f64 {
        numerics::trace_product_re(&self.mat, &self.mat)
    }

    /// Marginal on the given (ascending) site subset.
    pub fn marginal(&self, keep: &[usize]) -> Result<CMat> {
        numerics::partial_trace(&self.mat, &self.shape.dims(), keep)
    }
}

/// A Hermitian observable; `diagonal` marks computational-basis diagonality.
#[derive(Debug, Clone)]
pub struct Observable {
    pub shape: RegisterShape,
    pub mat: CMat,
    pub diagonal: bool,
}

impl Observable {
    pub fn new(shape: RegisterShape, mat: CMat) -> Result<Self> {
        shape.validate()?;
        if mat.nrows() != shape.dim() || mat.ncols() != shape.dim() {
            return Err(Error::validation("observable dimension mismatch"));
        }
        check_hermitian(&mat)?;
        let mut diagonal = true;
        'outer: for i in 0..mat.nrows() {
            for j in 0..mat.ncols() {
                if i != j && mat[(i, j)].norm() > TOL.diagonality {
                    diagonal = false;
                    break 'outer;
                }
            }
        }
        Ok(Observable { shape, mat, diagonal })
    }

    /// Diagonal observable from a real function on basis states.
    pub fn from_diagonal_fn(shape: RegisterShape, f: impl Fn(u64) -> f64) -> Result<Self> {
        shape.validate()?;
        let dim = shape.dim();
        let mat = CMat::from_diagonal(&CVec::from_iterator(
            dim,
            (0..dim).map(|x| cr(f(x as u64))),
        ));
        Observable::new(shape, mat)
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        numerics::trace_product_re(&self.mat, &rho.mat)
    }
}

/// One gate inside a gate layer.
#[derive(Debug, Clone)]
pub struct Gate {
    pub support: Vec<usize>,
    pub op: GateOp,
}

#[derive(Debug, Clone)]
pub enum GateOp {
    Unitary(CMat),
    Kraus(Vec<CMat>),
}

/// A circuit layer: disjoint local gates, or a graph-generated global unitary.
#[derive(Debug, Clone)]
pub enum Layer {
    Gates(Vec<Gate>),
    GraphUnitary {
        graph: Graph,
        unitary: CMat,
        diagonal: bool,
    },
}

/// Layered circuit over a register (the gate-support structure drives
/// light-cone computations; the operators drive simulation).
#[derive(Debug, Clone)]
pub struct CircuitArchitecture {
    pub shape: RegisterShape,
    pub layers: Vec<Layer>,
}

impl CircuitArchitecture {
    pub fn new(shape: RegisterShape, layers: Vec<Layer>) -> Result<Self> {
        shape.validate()?;
        for layer in &layers {
            match layer {
                Layer::Gates(gates) => {
                    let mut seen = vec![false; shape.n];
                    for g in gates {
                        for &v in &g.support {
                            if v >= shape.n {
                                return Err(Error::validation("gate support out of range"));
                            }
                            if seen[v] {
                                return Err(Error::validation(
                                    "gate supports within a layer must be disjoint",
                                ));
                            }
                            seen[v] = true;
                        }
                    }
                }
                Layer::GraphUnitary { graph, unitary, .. } => {
                    if graph.n != shape.n {
                        return Err(Error::validation("graph size does not match register"));
                    }
                    if unitary.nrows() != shape.dim() {
                        return Err(Error::validation("graph unitary dimension mismatch"));
                    }
                }
            }
        }
        Ok(CircuitArchitecture { shape, layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// Per-qudit noise channel with its fixed point.
#[derive(Debug, Clone)]
pub enum NoiseModel {
    /// ρ ↦ (1−p)ρ + p·I/2.
    Depolarizing { p: f64 },
    /// ρ ↦ (1−p)ρ + p·τ_q·tr ρ.
    GeneralizedDepolarizing { p: f64, q: f64 },
    /// Arbitrary single-qudit channel with a declared fixed point.
    Custom { kraus: Vec<CMat>, fixed_point: CMat },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Depolarizing { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::validation("depolarizing p must be in [0,1]"));
                }
            }
            NoiseModel::GeneralizedDepolarizing { p, q } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::validation("mixing p must be in [0,1]"));
                }
                if !(*q > 0.0 && *q < 1.0) {
                    return Err(Error::validation("q must be in (0,1)"));
                }
            }
            NoiseModel::Custom { kraus, fixed_point } => {
                let d = fixed_point.nrows();
                numerics::check_kraus(kraus, d)?;
            }
        }
        Ok(())
    }

    pub fn fixed_point(&self) -> CMat {
        match self {
            NoiseModel::Depolarizing { .. } => eye(2) * cr(0.5),
            NoiseModel::GeneralizedDepolarizing { q, .. } => tau_q_matrix(*q),
            NoiseModel::Custom { fixed_point, .. } => fixed_point.clone(),
        }
    }

    pub fn kraus(&self) -> Vec<CMat> {
        match self {
            NoiseModel::Depolarizing { p } => depolarizing_kraus(*p),
            NoiseModel::GeneralizedDepolarizing { p, q } => {
                generalized_depolarizing_kraus(*p, *q)
            }
            NoiseModel::Custom { kraus, .. } => kraus.clone(),
        }
    }

    /// Known per-application order-2 contraction factor (1 − p₂), if any.
    /// Depolarizing: (1−p)². Generalized depolarizing: (1−p)^κ with
    /// κ = (‖σ⁻¹‖−1)/(‖σ⁻¹‖·ln‖σ⁻¹‖).
    pub fn d2_contraction_factor(&self) -> Option<f64> {
        match self {
            NoiseModel::Depolarizing { p } => Some((1.0 - p) * (1.0 - p)),
            NoiseModel::GeneralizedDepolarizing { p, q } => {
                let s_inv = 1.0 / q.min(1.0 - *q);
                let kappa = (s_inv - 1.0) / (s_inv * s_inv.ln());
                Some((1.0 - p).powf(kappa))
            }
            NoiseModel::Custom { .. } => None,
        }
    }
}

/// τ_q = q|0⟩⟨0| + (1−q)|1⟩⟨1| as a raw 2×2 matrix.
pub fn tau_q_matrix(q: f64) -> CMat {
    CMat::from_diagonal(&CVec::from_vec(vec![cr(q), cr(1.0 - q)]))
}

/// τ_q^{⊗n} as a validated state.
pub fn product_state_tau(q: f64, n: usize) -> Result<DensityMatrix> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::validation("q must lie strictly inside (0,1)"));
    }
    let shape = RegisterShape::qubits(n);
    shape.validate()?;
    let mut mat = eye(1);
    for _ in 0..n {
        mat = kron(&mat, &tau_q_matrix(q));
    }
    Ok(DensityMatrix::unchecked(shape, mat))
}

/// Kraus set of the qubit depolarizing channel ρ ↦ (1−p)ρ + p·I/2.
pub fn depolarizing_kraus(p: f64) -> Vec<CMat> {
    let [i2, x, y, z] = paulis();
    vec![
        i2 * cr((1.0 - 3.0 * p / 4.0).sqrt()),
        x * cr((p / 4.0).sqrt()),
        y * cr((p / 4.0).sqrt()),
        z * cr((p / 4.0).sqrt()),
    ]
}

/// Kraus set of ρ ↦ (1−p)ρ + p·τ_q·tr ρ.
pub fn generalized_depolarizing_kraus(p: f64, q: f64) -> Vec<CMat> {
    let mut kraus = vec![eye(2) * cr((1.0 - p).sqrt())];
    // Replacer part: Σ_{k,j} √(p·s_k) |k⟩⟨j| with s = (q, 1−q).
    for (k, s) in [(0usize, q), (1usize, 1.0 - q)] {
        for j in 0..2usize {
            let mut m = CMat::zeros(2, 2);
            m[(k, j)] = cr((p * s).sqrt());
            kraus.push(m);
        }
    }
    kraus
}

/// QAOA ansatz parameters over a graph.
#[derive(Debug, Clone)]
pub struct QAOAConfig {
    pub depth: usize,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub graph: Graph,
}

/// Single-qubit rotation e^{−iβX}.
pub fn rx(beta: f64) -> CMat {
    let [i2, x, ..] = paulis();
    i2 * cr(beta.cos()) + x * c(0.0, -beta.sin())
}

/// 2P alternating layers: diagonal e^{iγ_k H_I}, then single-qubit e^{iβ_k H_X}
/// rotations (H_X = −Σ X_i, so each gate is e^{−iβ_k X}).
pub fn build_qaoa_circuit(cfg: &QAOAConfig) -> Result<CircuitArchitecture> {
    if cfg.gamma.len() != cfg.depth || cfg.beta.len() != cfg.depth {
        return Err(Error::validation("gamma/beta length must equal depth"));
    }
    let n = cfg.graph.n;
    let shape = RegisterShape::qubits(n);
    shape.validate()?;
    let h_i = crate::maxcut::maxcut_hamiltonian(&cfg.graph)?;
    let mut layers = Vec::with_capacity(2 * cfg.depth);
    for k in 0..cfg.depth {
        let gamma = cfg.gamma[k];
        let diag_u = CMat::from_diagonal(&CVec::from_iterator(
            shape.dim(),
            (0..shape.dim()).map(|x| {
                let e = h_i.mat[(x, x)].re;
                Complex64::from_polar(1.0, gamma * e)
            }),
        ));
        layers.push(Layer::GraphUnitary {
            graph: cfg.graph.clone(),
            unitary: diag_u,
            diagonal: true,
        });
        let mixer = rx(cfg.beta[k]);
        layers.push(Layer::Gates(
            (0..n)
                .map(|v| Gate {
                    support: vec![v],
                    op: GateOp::Unitary(mixer.clone()),
                })
                .collect(),
        ));
    }
    CircuitArchitecture::new(shape, layers)
}

/// Result of a layered simulation: final state plus the state after every layer.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub final_state: DensityMatrix,
    pub trajectory: Vec<DensityMatrix>,
}

/// Apply the circuit layer by layer; after each unitary layer (and optionally
/// before the first) the single-qudit noise channel acts on every qudit.
pub fn simulate_circuit(
    circuit: &CircuitArchitecture,
    noise: Option<&NoiseModel>,
    rho0: &DensityMatrix,
    noise_before_first: bool,
) -> Result<SimulationResult> {
    if rho0.shape != circuit.shape {
        return Err(Error::validation("state does not match circuit register"));
    }
    if let Some(nm) = noise {
        nm.validate()?;
    }
    let dims = circuit.shape.dims();
    let noise_kraus = noise.map(|nm| nm.kraus());
    let apply_noise = |mat: &CMat| -> Result<CMat> {
        let mut out = mat.clone();
        if let Some(kraus) = &noise_kraus {
            for v in 0..circuit.shape.n {
                out = apply_kraus(&out, kraus, &dims, &[v])?;
            }
        }
        Ok(out)
    };

    let mut state = rho0.mat.clone();
    if noise_before_first {
        state = apply_noise(&state)?;
    }
    let mut trajectory = Vec::with_capacity(circuit.layers.len());
    for layer in &circuit.layers {
        match layer {
            Layer::Gates(gates) => {
                for g in gates {
                    match &g.op {
                        GateOp::Unitary(u) => {
                            let uf = embed_operator(u, &dims, &g.support)?;
                            state = &uf * state * uf.adjoint();
                        }
                        GateOp::Kraus(kraus) => {
                            state = apply_kraus(&state, kraus, &dims, &g.support)?;
                        }
                    }
                }
            }
            Layer::GraphUnitary { unitary, .. } => {
                state = unitary * state * unitary.adjoint();
            }
        }
        state = apply_noise(&state)?;
        state = hermitize(&state);
        trajectory.push(DensityMatrix::new(circuit.shape, state.clone())?);
    }
    let final_state = trajectory
        .last()
        .cloned()
        .unwrap_or_else(|| rho0.clone());
    Ok(SimulationResult {
        final_state,
        trajectory,
    })
}

/// Computational-basis measurement distribution over basis indices.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MeasuredDistribution {
    pub shape: RegisterShape,
    pub probabilities: BTreeMap<u64, f64>,
}

impl MeasuredDistribution {
    pub fn from_map(shape: RegisterShape, probabilities: BTreeMap<u64, f64>) -> Result<Self> {
        let total: f64 = probabilities.values().sum();
        if (total - 1.0).abs() > TOL.trace * 10.0 {
            return Err(Error::validation(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if probabilities.values().any(|&p| p < -TOL.positivity) {
            return Err(Error::validation("negative probability"));
        }
        Ok(MeasuredDistribution {
            shape,
            probabilities,
        })
    }

    pub fn prob(&self, x: u64) -> f64 {
        *self.probabilities.get(&x).unwrap_or(&0.0)
    }

    /// Total mass of a set of outcomes.
    pub fn mass(&self, set: &[u64]) -> f64 {
        set.iter().map(|&x| self.prob(x)).sum()
    }
}

/// Diagonal of ρ as a probability distribution (tiny negatives clipped).
pub fn measure_distribution(rho: &DensityMatrix) -> Result<MeasuredDistribution> {
    let mut probabilities = BTreeMap::new();
    for x in 0..rho.dim() {
        let p = rho.mat[(x, x)].re;
        if p < -TOL.positivity {
            return Err(Error::validation(format!(
                "diagonal entry {p:.3e} below positivity tolerance"
            )));
        }
        if p > 0.0 {
            probabilities.insert(x as u64, p);
        }
    }
    MeasuredDistribution::from_map(rho.shape, probabilities)
}

/// |+⟩^{⊗n}.
pub fn plus_state(n: usize) -> Result<DensityMatrix> {
    let shape = RegisterShape::qubits(n);
    shape.validate()?;
    let dim = shape.dim();
    let amp = cr(1.0 / (dim as f64).sqrt());
    DensityMatrix::pure(shape, &CVec::from_element(dim, amp))
}

/// (|0…0⟩ + |1…1⟩)/√2.
pub fn ghz_state(n: usize) -> Result<DensityMatrix> {
    let shape = RegisterShape::qubits(n);
    shape.validate()?;
    let dim = shape.dim();
    let mut amps = CVec::zeros(dim);
    amps[0] = cr(1.0);
    amps[dim - 1] = cr(1.0);
    DensityMatrix::pure(shape, &amps)
}

/// Brickwork circuit of Haar-random two-qubit gates; layer ℓ pairs qubits
/// starting from offset ℓ mod 2.
pub fn random_brickwork(n: usize, layers: usize, seed: u64) -> Result<CircuitArchitecture> {
    let shape = RegisterShape::qubits(n);
    shape.validate()?;
    let mut rng = crate::randutil::rng(seed);
    let mut out = Vec::with_capacity(layers);
    for l in 0..layers {
        let offset = l % 2;
        let mut gates = Vec::new();
        let mut v = offset;
        while v + 1 < n {
            gates.push(Gate {
                support: vec![v, v + 1],
                op: GateOp::Unitary(crate::randutil::haar_unitary(&mut rng, 4)),
            });
            v += 2;
        }
        out.push(Layer::Gates(gates));
    }
    CircuitArchitecture::new(shape, out)
}
