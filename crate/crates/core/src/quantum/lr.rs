//! Locality discrepancy experiments: compare the marginal of a full
//! time-dependent evolution against an evolution restricted to a sub-region.

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, embed_operator, op_norm, partial_trace, trace_norm, CMat};

use super::{DensityMatrix, PiecewiseLinear};

/// One two-site interaction term with a time-dependent coupling α_e(s),
/// tabulated over normalized time s = t/t_final.
#[derive(Debug, Clone)]
pub struct LrTerm {
    pub edge: (usize, usize),
    pub h: CMat,
    pub coupling: PiecewiseLinear,
}

fn hamiltonian_at(terms: &[LrTerm], dims: &[usize], s: f64, restrict: Option<&[usize]>) -> Result<CMat> {
    let total: usize = dims.iter().product();
    let mut h = CMat::zeros(total, total);
    for term in terms {
        if let Some(b) = restrict {
            if !b.contains(&term.edge.0) || !b.contains(&term.edge.1) {
                continue;
            }
        }
        let alpha = term.coupling.eval(s);
        if alpha == 0.0 {
            continue;
        }
        let embedded = embed_operator(&term.h, dims, &[term.edge.0, term.edge.1])?;
        h += embedded * crate::numerics::cr(alpha);
    }
    Ok(h)
}

fn propagator(terms: &[LrTerm], dims: &[usize], t: f64, restrict: Option<&[usize]>) -> Result<CMat> {
    let all_constant = terms.iter().all(|term| term.coupling.is_constant());
    if all_constant {
        let h = hamiltonian_at(terms, dims, 0.0, restrict)?;
        let spec = eig_hermitian(&h)?;
        return Ok(spec.apply_complex(|l| num_complex::Complex64::from_polar(1.0, -l * t)));
    }
    // Midpoint-exponential stepping for time-dependent couplings.
    let steps = ((t / 0.02).ceil() as usize).max(10);
    let dt = t / steps as f64;
    let total: usize = dims.iter().product();
    let mut u = CMat::identity(total, total);
    for s in 0..steps {
        let mid = (s as f64 + 0.5) * dt / t;
        let h = hamiltonian_at(terms, dims, mid, restrict)?;
        let spec = eig_hermitian(&h)?;
        let step = spec.apply_complex(|l| num_complex::Complex64::from_polar(1.0, -l * dt));
        u = step * u;
    }
    Ok(u)
}

/// ‖tr_{A^c}(U_V(t) ρ U_V†(t) − U_B(t) ρ U_B†(t))‖₁ where U_B keeps only the
/// interaction terms fully inside B. Requires ‖H_e‖∞ ≤ ½ and A ⊆ B.
pub fn lr_discrepancy(
    terms: &[LrTerm],
    a: &[usize],
    b: &[usize],
    t: f64,
    rho: &DensityMatrix,
) -> Result<f64> {
    let n = rho.shape.n;
    let dims = rho.shape.dims();
    for term in terms {
        if term.edge.0 >= n || term.edge.1 >= n || term.edge.0 == term.edge.1 {
            return Err(Error::validation("interaction edge out of range"));
        }
        if term.h.nrows() != dims[term.edge.0] * dims[term.edge.1] {
            return Err(Error::validation("interaction term dimension mismatch"));
        }
        let norm = op_norm(&term.h);
        if norm > 0.5 + 1e-9 {
            return Err(Error::precondition(format!(
                "interaction term norm {norm:.4} exceeds 1/2"
            )));
        }
    }
    if a.iter().any(|v| !b.contains(v)) || b.iter().any(|&v| v >= n) {
        return Err(Error::validation("need A ⊆ B ⊆ V"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let u_full = propagator(terms, &dims, t, None)?;
    let u_restricted = propagator(terms, &dims, t, Some(b))?;
    let rho_full = &u_full * &rho.mat * u_full.adjoint();
    let rho_restricted = &u_restricted * &rho.mat * u_restricted.adjoint();
    let diff = rho_full - rho_restricted;
    let marginal = partial_trace(&diff, &dims, a)?;
    Ok(trace_norm(&marginal))
}
