//! Dense complex linear algebra: Hermitian eigendecompositions, matrix
//! functions, partial traces, Kraus application and superoperator matrices.
//!
//! Everything is double precision and dense; system sizes are capped by
//! [`crate::config::dim_cap`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::TOL;
use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Identity matrix of the given dimension.
pub fn eye(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Max-norm of A − A†.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

pub fn check_hermitian(a: &CMat) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::validation("matrix is not square"));
    }
    let defect = hermiticity_defect(a);
    if defect > TOL.hermiticity {
        return Err(Error::validation(format!(
            "matrix is not Hermitian: max |A - A†| = {defect:.3e} > {:.0e}",
            TOL.hermiticity
        )));
    }
    Ok(())
}

/// (A + A†)/2 — removes round-off level anti-Hermitian parts.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()) * cr(0.5)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V·diag(f(λ))·V†.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMat {
        self.apply_complex(|x| cr(f(x)))
    }

    /// V·diag(g(λ))·V† for complex-valued g (e.g. phases).
    pub fn apply_complex(&self, g: impl Fn(f64) -> Complex64) -> CMat {
        let v = &self.eigenvectors;
        let d = CMat::from_diagonal(&CVec::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&x| g(x)),
        ));
        v * d * v.adjoint()
    }
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(a: &CMat) -> Result<Spectrum> {
    check_hermitian(a)?;
    let sym = hermitize(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..sym.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| sym.eigenvalues[i].partial_cmp(&sym.eigenvalues[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let dim = eigenvalues.len();
    let mut eigenvectors = CMat::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &sym.eigenvectors.column(i));
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// V·diag(f(λ))·V† with a domain check: f must be finite on the spectrum.
pub fn matrix_function(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let spec = eig_hermitian(a)?;
    for &l in &spec.eigenvalues {
        let y = f(l);
        if !y.is_finite() {
            return Err(Error::domain(format!(
                "function undefined at eigenvalue {l:.6e}"
            )));
        }
    }
    Ok(spec.apply(f))
}

/// A^p with the pseudo-inverse convention: for negative or fractional powers,
/// eigenvalues below the cutoff map to 0.
pub fn matrix_power(a: &CMat, p: f64) -> Result<CMat> {
    let spec = eig_hermitian(a)?;
    let needs_cutoff = p < 0.0 || p.fract() != 0.0;
    let cutoff = TOL.pinv_cutoff;
    let mapped = |l: f64| -> Result<f64> {
        if needs_cutoff && l.abs() <= cutoff {
            return Ok(0.0);
        }
        // Fractional powers of slightly negative eigenvalues (round-off from a
        // PSD matrix) are clipped to 0; genuinely negative ones are a domain error.
        let l = if l < 0.0 && p.fract() != 0.0 {
            if l > -1e-9 {
                return Ok(0.0);
            }
            return Err(Error::domain(format!(
                "fractional power of negative eigenvalue {l:.3e}"
            )));
        } else {
            l
        };
        let y = l.powf(p);
        if !y.is_finite() {
            return Err(Error::domain(format!(
                "power {p} undefined at eigenvalue {l:.3e}"
            )));
        }
        Ok(y)
    };
    for &l in &spec.eigenvalues {
        mapped(l)?;
    }
    Ok(spec.apply(|l| mapped(l).unwrap()))
}

/// Projector onto the support (eigenvalues > pseudo-inverse cutoff) of a PSD matrix.
pub fn support_projector(a: &CMat) -> Result<CMat> {
    matrix_function(a, |l| if l > TOL.pinv_cutoff { 1.0 } else { 0.0 })
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(ms: &[CMat]) -> CMat {
    let mut out = eye(1);
    for m in ms {
        out = kron(&out, m);
    }
    out
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    a.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMat) -> f64 {
    a.clone().singular_values().iter().sum()
}

pub fn frob_norm(a: &CMat) -> f64 {
    a.norm()
}

pub fn trace(a: &CMat) -> Complex64 {
    a.trace()
}

/// Real part of tr[A·B]; the arguments need not commute.
pub fn trace_product_re(a: &CMat, b: &CMat) -> f64 {
    let mut s = Complex64::ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s.re
}

/// Mixed-radix strides for a site-dimension list (site 0 most significant).
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// For each index of the sub-register `sites`, its contribution to the full index.
pub(crate) fn subindex_contributions(dims: &[usize], sites: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let sub_dims: Vec<usize> = sites.iter().map(|&s| dims[s]).collect();
    let total: usize = sub_dims.iter().product();
    let sub_strides = strides(&sub_dims);
    (0..total)
        .map(|idx| {
            sites
                .iter()
                .enumerate()
                .map(|(pos, &site)| (idx / sub_strides[pos]) % sub_dims[pos] * st[site])
                .sum()
        })
        .collect()
}

/// Partial trace over the complement of `keep` (ascending site indices).
pub fn partial_trace(a: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if a.nrows() != total || a.ncols() != total {
        return Err(Error::validation(format!(
            "matrix dim {} does not match register dim {total}",
            a.nrows()
        )));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&s| s >= dims.len()) {
        return Err(Error::validation("keep subset out of range"));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
    let keep_contrib = subindex_contributions(dims, &keep);
    let traced_contrib = subindex_contributions(dims, &traced);
    let dk = keep_contrib.len();
    let mut out = CMat::zeros(dk, dk);
    for (rk, &rc) in keep_contrib.iter().enumerate() {
        for (ck, &cc) in keep_contrib.iter().enumerate() {
            let mut s = Complex64::ZERO;
            for &tc in &traced_contrib {
                s += a[(rc + tc, cc + tc)];
            }
            out[(rk, ck)] = s;
        }
    }
    Ok(out)
}

/// Embed an operator acting on `support` into the full register (identity elsewhere).
pub fn embed_operator(op: &CMat, dims: &[usize], support: &[usize]) -> Result<CMat> {
    let sub_dim: usize = support.iter().map(|&s| dims[s]).product();
    if op.nrows() != sub_dim || op.ncols() != sub_dim {
        return Err(Error::validation(format!(
            "operator dim {} does not match support dim {sub_dim}",
            op.nrows()
        )));
    }
    if support.iter().any(|&s| s >= dims.len()) {
        return Err(Error::validation("support out of range"));
    }
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != support.len() {
        return Err(Error::validation("support sites must be distinct"));
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|s| !support.contains(s)).collect();
    let sup_contrib = subindex_contributions(dims, support);
    let rest_contrib = subindex_contributions(dims, &rest);
    let total: usize = dims.iter().product();
    let mut out = CMat::zeros(total, total);
    for (a, &ac) in sup_contrib.iter().enumerate() {
        for (b, &bc) in sup_contrib.iter().enumerate() {
            let v = op[(a, b)];
            if v == Complex64::ZERO {
                continue;
            }
            for &tc in &rest_contrib {
                out[(ac + tc, bc + tc)] = v;
            }
        }
    }
    Ok(out)
}

/// τ ⊗ tr_site(a), with τ slotted back in at `site`'s position.
pub fn replace_site(a: &CMat, tau: &CMat, dims: &[usize], site: usize) -> Result<CMat> {
    if site >= dims.len() || tau.nrows() != dims[site] || tau.ncols() != dims[site] {
        return Err(Error::validation("replace_site: bad site or τ dimension"));
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|&s| s != site).collect();
    let reduced = partial_trace(a, dims, &rest)?;
    let site_contrib = subindex_contributions(dims, &[site]);
    let rest_contrib = subindex_contributions(dims, &rest);
    let total: usize = dims.iter().product();
    let mut out = CMat::zeros(total, total);
    for (sr, &src) in site_contrib.iter().enumerate() {
        for (sc, &scc) in site_contrib.iter().enumerate() {
            let tv = tau[(sr, sc)];
            if tv == Complex64::ZERO {
                continue;
            }
            for (rr, &rrc) in rest_contrib.iter().enumerate() {
                for (rc, &rcc) in rest_contrib.iter().enumerate() {
                    out[(src + rrc, scc + rcc)] += tv * reduced[(rr, rc)];
                }
            }
        }
    }
    Ok(out)
}

/// Check Σ K†K = I within the Kraus tolerance.
pub fn check_kraus(kraus: &[CMat], dim: usize) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::validation("empty Kraus set"));
    }
    let mut s = CMat::zeros(dim, dim);
    for k in kraus {
        if k.nrows() != dim || k.ncols() != dim {
            return Err(Error::validation("Kraus operator dimension mismatch"));
        }
        s += k.adjoint() * k;
    }
    let defect = (&s - eye(dim)).norm();
    if defect > TOL.kraus * (dim as f64).sqrt().max(1.0) {
        return Err(Error::validation(format!(
            "Kraus set not trace preserving: ‖ΣK†K − I‖ = {defect:.3e}"
        )));
    }
    Ok(())
}

/// Apply a channel given by Kraus operators on `support` to a full-register matrix.
pub fn apply_kraus(rho: &CMat, kraus: &[CMat], dims: &[usize], support: &[usize]) -> Result<CMat> {
    let sub_dim: usize = support.iter().map(|&s| dims[s]).product();
    check_kraus(kraus, sub_dim)?;
    let mut out = CMat::zeros(rho.nrows(), rho.ncols());
    for k in kraus {
        let kf = embed_operator(k, dims, support)?;
        out += &kf * rho * kf.adjoint();
    }
    Ok(out)
}

/// Matrix representation of X ↦ Σ K X K† on column-stacked vectorizations.
pub fn superoperator_matrix(kraus: &[CMat]) -> Result<CMat> {
    let dim = kraus
        .first()
        .map(|k| k.nrows())
        .ok_or_else(|| Error::validation("empty Kraus set"))?;
    let mut m = CMat::zeros(dim * dim, dim * dim);
    for k in kraus {
        if k.nrows() != dim || k.ncols() != dim {
            return Err(Error::validation("Kraus operator dimension mismatch"));
        }
        m += kron(&k.map(|z| z.conj()), k);
    }
    Ok(m)
}

/// Matrix of X ↦ A·X·B on column-stacked vectorizations.
pub fn sandwich_superoperator(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}

/// σ-weighted superoperator Γ^{-1/2} ∘ N ∘ Γ^{1/2}, with Γ^{s}(X) = σ^{s/2} X σ^{s/2}.
/// Requires σ full rank.
pub fn weighted_superoperator(kraus: &[CMat], sigma: &CMat) -> Result<CMat> {
    let spec = eig_hermitian(sigma)?;
    if spec.eigenvalues.iter().any(|&l| l <= TOL.pinv_cutoff) {
        return Err(Error::domain(
            "weighting state is rank deficient; the weighted basis is undefined",
        ));
    }
    let q = matrix_power(sigma, 0.25)?;
    let qi = matrix_power(sigma, -0.25)?;
    let n = superoperator_matrix(kraus)?;
    Ok(sandwich_superoperator(&qi, &qi) * n * sandwich_superoperator(&q, &q))
}

/// Single-qubit Pauli matrices (I, X, Y, Z).
pub fn paulis() -> [CMat; 4] {
    let i2 = eye(2);
    let x = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    let y = CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]);
    let z = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
    [i2, x, y, z]
}
