//! Centralized numerical tolerances and the global dimension cap.

/// Default cap on the total Hilbert-space dimension (12 qubits).
pub const DEFAULT_DIM_CAP: usize = 1 << 12;

/// Environment variable overriding the dimension cap.
pub const DIM_CAP_ENV: &str = "QTB_DIM_CAP";

/// All numerical tolerances used across the library, in one place.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max-norm deviation allowed from exact Hermiticity.
    pub hermiticity: f64,
    /// Relative Frobenius residual allowed for eigendecomposition reconstruction.
    pub eig_residual: f64,
    /// Eigenvalues below this are treated as zero for negative/fractional powers.
    pub pinv_cutoff: f64,
    /// Allowed trace deviation for states and channel applications.
    pub trace: f64,
    /// Allowed negativity of state eigenvalues.
    pub positivity: f64,
    /// Allowed deviation of Σ K†K from identity for Kraus sets.
    pub kraus: f64,
    /// Mass of ρ outside supp(σ) above which a divergence is +∞.
    pub support_mass: f64,
    /// Entries below this count as zero when testing diagonality.
    pub diagonality: f64,
    /// Allowed trace drift over a full Lindblad integration.
    pub lindblad_trace_drift: f64,
    /// Required agreement between primal and dual optimal-transport values.
    pub transport_duality: f64,
    /// Relative tolerance for adaptive quadrature.
    pub quadrature_rel: f64,
    /// Absolute tolerance for bisection searches (contraction coefficients).
    pub bisection: f64,
    /// Smallest term kept when summing series (polylogarithms).
    pub series_term: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            eig_residual: 1e-10,
            pinv_cutoff: 1e-12,
            trace: 1e-10,
            positivity: 1e-10,
            kraus: 1e-10,
            support_mass: 1e-10,
            diagonality: 1e-14,
            lindblad_trace_drift: 1e-8,
            transport_duality: 1e-8,
            quadrature_rel: 1e-10,
            bisection: 1e-6,
            series_term: 1e-15,
        }
    }
}

/// The library-wide default tolerance set.
pub const TOL: Tolerances = Tolerances {
    hermiticity: 1e-12,
    eig_residual: 1e-10,
    pinv_cutoff: 1e-12,
    trace: 1e-10,
    positivity: 1e-10,
    kraus: 1e-10,
    support_mass: 1e-10,
    diagonality: 1e-14,
    lindblad_trace_drift: 1e-8,
    transport_duality: 1e-8,
    quadrature_rel: 1e-10,
    bisection: 1e-6,
    series_term: 1e-15,
};

/// Current dimension cap: `QTB_DIM_CAP` if set and parseable, else the default.
pub fn dim_cap() -> usize {
    std::env::var(DIM_CAP_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(DEFAULT_DIM_CAP)
}
