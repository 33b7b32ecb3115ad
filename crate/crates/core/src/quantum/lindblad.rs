//! Fixed-step fourth-order integration of a time-dependent Lindblad equation
//! with per-qubit generalized-depolarizing dissipation.

use num_complex::Complex64;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::numerics::{cr, embed_operator, hermitize, paulis, replace_site, CMat};

use super::{tau_q_matrix, DensityMatrix, Observable};

/// Piecewise-linear table for a real function on [0,1].
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PiecewiseLinear {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::validation("table needs ≥ 2 matching samples"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("table abscissae must be increasing"));
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::validation("table values must be finite"));
        }
        Ok(PiecewiseLinear { xs, ys })
    }

    pub fn constant(v: f64) -> Self {
        PiecewiseLinear {
            xs: vec![0.0, 1.0],
            ys: vec![v, v],
        }
    }

    /// f(t) = 1 − t, the linear annealing ramp.
    pub fn linear_ramp_down() -> Self {
        PiecewiseLinear {
            xs: vec![0.0, 1.0],
            ys: vec![1.0, 0.0],
        }
    }

    pub fn linear_ramp_up() -> Self {
        PiecewiseLinear {
            xs: vec![0.0, 1.0],
            ys: vec![0.0, 1.0],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], *self.xs.last().unwrap());
        let i = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.ys[i],
            Err(i) => i.clamp(1, self.xs.len() - 1),
        };
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn max_abs(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, y| m.max(y.abs()))
    }

    pub fn is_constant(&self) -> bool {
        self.ys.windows(2).all(|w| w[0] == w[1])
    }
}

/// Annealing run: H(t) = f(t/T)·H_X + g(t/T)·H_I with per-qubit dissipation
/// toward τ_q at the given rate (unit spectral gap when rate = 1).
#[derive(Debug, Clone)]
pub struct AnnealSchedule {
    pub t_total: f64,
    pub f: PiecewiseLinear,
    pub g: PiecewiseLinear,
    pub q: f64,
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct LindbladResult {
    pub final_state: DensityMatrix,
    /// Sampled (time, state) trajectory including the final time.
    pub samples: Vec<(f64, DensityMatrix)>,
}

/// Clip integrator round-off: eigenvalues in (−1e-8, 0) go to 0, trace is
/// renormalized. Larger negatives indicate a genuinely unphysical state.
fn repair_positivity(rho: &CMat) -> Result<CMat> {
    let spec = crate::numerics::eig_hermitian(&hermitize(rho))?;
    if spec.eigenvalues[0] < -1e-8 {
        return Err(Error::StepSize(format!(
            "state eigenvalue {:.3e} is too negative; reduce dt",
            spec.eigenvalues[0]
        )));
    }
    let clipped = spec.apply(|l| l.max(0.0));
    let tr = clipped.trace().re;
    Ok(clipped * cr(1.0 / tr))
}

/// Integrate dρ/dt = −i[H(t), ρ] + rate·Σ_i (τ_q ⊗ tr_i ρ − ρ) with classical
/// fourth-order steps; dt ≤ T/100 required, trace drift ≤ 1e-8 enforced.
pub fn simulate_lindblad(
    schedule: &AnnealSchedule,
    h_ising: &Observable,
    rho0: &DensityMatrix,
    dt: f64,
) -> Result<LindbladResult> {
    let t_total = schedule.t_total;
    if t_total < 0.0 {
        return Err(Error::validation("total time must be ≥ 0"));
    }
    if rho0.shape != h_ising.shape {
        return Err(Error::validation("state does not match Hamiltonian register"));
    }
    if !h_ising.diagonal {
        return Err(Error::validation("interaction Hamiltonian must be diagonal"));
    }
    if t_total == 0.0 {
        return Ok(LindbladResult {
            final_state: rho0.clone(),
            samples: vec![(0.0, rho0.clone())],
        });
    }
    if dt <= 0.0 || dt > t_total / 100.0 {
        return Err(Error::validation(format!(
            "dt must satisfy 0 < dt ≤ T/100 = {:.3e}",
            t_total / 100.0
        )));
    }
    let shape = rho0.shape;
    let dims = shape.dims();
    let n = shape.n;
    let tau = tau_q_matrix(schedule.q);
    let x = paulis()[1].clone();
    // H_X = −Σ X_i.
    let mut h_x = CMat::zeros(shape.dim(), shape.dim());
    for v in 0..n {
        h_x -= embed_operator(&x, &dims, &[v])?;
    }
    let h_i = &h_ising.mat;

    let generator = |t: f64, rho: &CMat| -> Result<CMat> {
        let ft = schedule.f.eval(t / t_total);
        let gt = schedule.g.eval(t / t_total);
        let h = &h_x * cr(ft) + h_i * cr(gt);
        let comm = &h * rho - rho * &h;
        let mut out = comm * Complex64::new(0.0, -1.0);
        if schedule.rate != 0.0 {
            for v in 0..n {
                let rep = replace_site(rho, &tau, &dims, v)?;
                out += (rep - rho) * cr(schedule.rate);
            }
        }
        Ok(out)
    };

    let steps = (t_total / dt).ceil() as usize;
    let dt = t_total / steps as f64;
    let sample_every = (steps / 20).max(1);
    let mut rho = rho0.mat.clone();
    let mut samples = vec![(0.0, rho0.clone())];
    for s in 0..steps {
        let t = s as f64 * dt;
        let k1 = generator(t, &rho)?;
        let k2 = generator(t + dt / 2.0, &(&rho + &k1 * cr(dt / 2.0)))?;
        let k3 = generator(t + dt / 2.0, &(&rho + &k2 * cr(dt / 2.0)))?;
        let k4 = generator(t + dt, &(&rho + &k3 * cr(dt)))?;
        rho += (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(dt / 6.0);
        let drift = (rho.trace().re - 1.0).abs();
        if drift > 1e-6 {
            return Err(Error::StepSize(format!(
                "trace drift {drift:.3e} at t = {:.4}; reduce dt (currently {dt:.3e})",
                t + dt
            )));
        }
        if (s + 1) % sample_every == 0 || s + 1 == steps {
            let state = DensityMatrix::new(shape, repair_positivity(&rho)?)?;
            samples.push(((s + 1) as f64 * dt, state));
        }
    }
    let final_trace_drift = (rho.trace().re - 1.0).abs();
    if final_trace_drift > TOL.lindblad_trace_drift {
        return Err(Error::StepSize(format!(
            "final trace drift {final_trace_drift:.3e} exceeds {:.0e}; reduce dt",
            TOL.lindblad_trace_drift
        )));
    }
    let final_state = samples.last().unwrap().1.clone();
    Ok(LindbladResult {
        final_state,
        samples,
    })
}
