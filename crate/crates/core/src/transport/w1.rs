//! Classical W1 over the Hamming metric (exact, via successive shortest
//! paths) and two-sided bounds on the quantum W1 distance.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::maxcut::hamming;
use crate::numerics::{
    cr, eye, matrix_function, partial_trace, replace_site, trace_norm, trace_product_re, CMat,
};
use crate::quantum::{measure_distribution, DensityMatrix, MeasuredDistribution, Observable};

use super::{lipschitz_classical, lipschitz_quantum_bound};

#[derive(Debug, Clone, Serialize)]
pub struct W1Classical {
    pub value: f64,
    /// (source point, sink point, mass) triples, cost = Hamming distance.
    pub coupling: Vec<(u64, u64, f64)>,
    /// 1-Lipschitz dual potential on the union support.
    pub potential: Vec<(u64, f64)>,
    /// Sink-side potential used to extend the dual function off-support:
    /// f(z) = min_j (d_H(z, y_j) + φ_j).
    pub sink_potential: Vec<(u64, f64)>,
    pub dual_value: f64,
}

/// Exact Hamming-metric optimal transport between two distributions on the
/// same register, with a primal coupling and a certifying dual potential.
pub fn w1_classical(mu: &MeasuredDistribution, nu: &MeasuredDistribution) -> Result<W1Classical> {
    if mu.shape != nu.shape {
        return Err(Error::validation("distributions live on different registers"));
    }
    if mu.probabilities.len() > 4096 || nu.probabilities.len() > 4096 {
        return Err(Error::Size("supports capped at 4096 points".into()));
    }
    // Mass shared between the supports can stay in place at zero cost.
    let mut coupling = Vec::new();
    let mut supply: Vec<(u64, f64)> = Vec::new();
    let mut demand: Vec<(u64, f64)> = Vec::new();
    for (&x, &p) in &mu.probabilities {
        let q = nu.prob(x);
        let keep = p.min(q);
        if keep > 0.0 {
            coupling.push((x, x, keep));
        }
        if p - keep > 1e-15 {
            supply.push((x, p - keep));
        }
    }
    for (&y, &q) in &nu.probabilities {
        let rem = q - mu.prob(y).min(q);
        if rem > 1e-15 {
            demand.push((y, rem));
        }
    }

    if supply.is_empty() || demand.is_empty() {
        let potential: Vec<(u64, f64)> = mu
            .probabilities
            .keys()
            .chain(nu.probabilities.keys())
            .map(|&x| (x, 0.0))
            .collect();
        return Ok(W1Classical {
            value: 0.0,
            coupling,
            potential,
            sink_potential: nu.probabilities.keys().map(|&y| (y, 0.0)).collect(),
            dual_value: 0.0,
        });
    }

    let ns = supply.len();
    let nt = demand.len();
    let cost =
        |i: usize, j: usize| -> f64 { hamming(supply[i].0, demand[j].0) as f64 };
    let mut remaining_supply: Vec<f64> = supply.iter().map(|&(_, m)| m).collect();
    let mut remaining_demand: Vec<f64> = demand.iter().map(|&(_, m)| m).collect();
    let mut flow = vec![std::collections::BTreeMap::<usize, f64>::new(); ns];
    // Node potentials keeping residual reduced costs non-negative.
    let mut pu = vec![0.0f64; ns];
    let mut pv = vec![0.0f64; nt];

    let total: f64 = remaining_supply.iter().sum();
    let mut moved = 0.0;
    let max_iters = 10 * (ns + nt) + 1000;
    let mut iters = 0;
    while moved < total - 1e-12 {
        iters += 1;
        if iters > max_iters {
            return Err(Error::Convergence(
                "augmentation stalled on residual float mass".into(),
            ));
        }
        // Dense Dijkstra on the residual bipartite graph.
        let nn = ns + nt;
        let mut dist = vec![f64::INFINITY; nn];
        let mut parent = vec![usize::MAX; nn];
        let mut done = vec![false; nn];
        for i in 0..ns {
            if remaining_supply[i] > 1e-12 {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for k in 0..nn {
                if !done[k] && dist[k] < best {
                    best = dist[k];
                    u = k;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < ns {
                for j in 0..nt {
                    let rc = cost(u, j) + pu[u] - pv[j];
                    if dist[u] + rc < dist[ns + j] - 1e-15 {
                        dist[ns + j] = dist[u] + rc;
                        parent[ns + j] = u;
                    }
                }
            } else {
                let j = u - ns;
                for i in 0..ns {
                    if flow[i].get(&j).copied().unwrap_or(0.0) > 1e-15 {
                        let rc = -cost(i, j) - pu[i] + pv[j];
                        if dist[u] + rc < dist[i] - 1e-15 {
                            dist[i] = dist[u] + rc;
                            parent[i] = u;
                        }
                    }
                }
            }
        }
        // Cheapest reachable sink with remaining demand.
        let t = (0..nt)
            .filter(|&j| remaining_demand[j] > 1e-12 && dist[ns + j].is_finite())
            .min_by(|&a, &b| dist[ns + a].partial_cmp(&dist[ns + b]).unwrap())
            .ok_or_else(|| Error::Convergence("no augmenting path found".into()))?;
        // Walk back to a source, recording the path and its bottleneck.
        let mut path = vec![ns + t];
        let mut node = ns + t;
        while parent[node] != usize::MAX {
            node = parent[node];
            path.push(node);
        }
        let start = *path.last().unwrap();
        let mut bottleneck = remaining_supply[start].min(remaining_demand[t]);
        for w in path.windows(2) {
            // Residual sink→source arcs are limited by the flow they undo.
            if w[1] >= ns && w[0] < ns {
                let f = flow[w[0]].get(&(w[1] - ns)).copied().unwrap_or(0.0);
                bottleneck = bottleneck.min(f);
            }
        }
        // Apply the augmentation (path is stored sink-first).
        for w in path.windows(2) {
            let (a, b) = (w[1], w[0]);
            if a < ns && b >= ns {
                *flow[a].entry(b - ns).or_insert(0.0) += bottleneck;
            } else if a >= ns && b < ns {
                let e = flow[b].get_mut(&(a - ns)).unwrap();
                *e -= bottleneck;
            }
        }
        remaining_supply[start] -= bottleneck;
        remaining_demand[t] -= bottleneck;
        moved += bottleneck;
        for i in 0..ns {
            if dist[i].is_finite() {
                pu[i] += dist[i];
            }
        }
        for j in 0..nt {
            if dist[ns + j].is_finite() {
                pv[j] += dist[ns + j];
            }
        }
    }

    let mut value = 0.0;
    for (i, fr) in flow.iter().enumerate() {
        for (&j, &f) in fr {
            if f > 1e-15 {
                value += f * cost(i, j);
                coupling.push((supply[i].0, demand[j].0, f));
            }
        }
    }
    // Dual certificate: extend the sink potentials φ_j = −p_j by c-transform,
    // which is 1-Lipschitz by construction.
    let sink_potential: Vec<(u64, f64)> = demand
        .iter()
        .zip(&pv)
        .map(|(&(y, _), &p)| (y, -p))
        .collect();
    let f_of = |z: u64| -> f64 {
        sink_potential
            .iter()
            .map(|&(y, phi)| hamming(z, y) as f64 + phi)
            .fold(f64::INFINITY, f64::min)
    };
    let mut dual_value = 0.0;
    for (&x, &p) in &mu.probabilities {
        dual_value += p * f_of(x);
    }
    for (&y, &q) in &nu.probabilities {
        dual_value -= q * f_of(y);
    }
    if (dual_value - value).abs() > TOL.transport_duality {
        return Err(Error::Convergence(format!(
            "duality gap {:.3e} exceeds tolerance",
            (dual_value - value).abs()
        )));
    }
    let potential: Vec<(u64, f64)> = mu
        .probabilities
        .keys()
        .chain(nu.probabilities.keys())
        .map(|&x| (x, f_of(x)))
        .collect();
    Ok(W1Classical {
        value,
        coupling,
        potential,
        sink_potential,
        dual_value,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct W1Result {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub classical_exact: Option<f64>,
}

fn sign_operator(m: &CMat) -> Result<CMat> {
    matrix_function(m, |l| {
        if l > 1e-13 {
            1.0
        } else if l < -1e-13 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Interval [lower, upper] for the quantum W1 distance: witness maximization
/// below, telescoping marginal decomposition above.
pub fn w1_quantum_bounds(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    orderings: usize,
    seed: u64,
) -> Result<W1Result> {
    if rho.shape != sigma.shape {
        return Err(Error::validation("states live on different registers"));
    }
    let n = rho.shape.n;
    let d = rho.shape.d;
    let dims = rho.shape.dims();
    let delta = &rho.mat - &sigma.mat;

    // Upper bound: ½ Σ_i ‖marginal chain difference‖₁ along a site ordering;
    // each term collapses to a reduced-space norm since ‖I⊗B‖₁ = d^k‖B‖₁.
    let unit = eye(d) * cr(1.0 / d as f64);
    let telescope = |order: &[usize]| -> Result<f64> {
        let mut cur = delta.clone();
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut total = 0.0;
        for &site in order {
            let pos = remaining.iter().position(|&s| s == site).unwrap();
            let dims_rem = vec![d; remaining.len()];
            let averaged = replace_site(&cur, &unit, &dims_rem, pos)?;
            total += trace_norm(&(&cur - averaged));
            if remaining.len() > 1 {
                let keep: Vec<usize> =
                    (0..remaining.len()).filter(|&k| k != pos).collect();
                cur = partial_trace(&cur, &dims_rem, &keep)?;
            }
            remaining.remove(pos);
        }
        Ok(0.5 * total)
    };
    let natural: Vec<usize> = (0..n).collect();
    let mut upper = telescope(&natural)?;
    let mut rng = crate::randutil::rng(seed);
    let mut order = natural.clone();
    for _ in 0..orderings {
        order.shuffle(&mut rng);
        upper = upper.min(telescope(&order)?);
    }

    // Lower bound: sign-operator witnesses on one- and two-site marginals,
    // scaled by their (surrogate) Lipschitz constants.
    let mut lower = 0.0f64;
    let mut consider = |w: &CMat| -> Result<()> {
        let obs = Observable::new(rho.shape, w.clone())?;
        let lip = if obs.diagonal {
            lipschitz_classical(&obs)?.value
        } else {
            lipschitz_quantum_bound(&obs)?.value
        };
        if lip > 1e-12 {
            lower = lower.max(trace_product_re(w, &delta) / lip);
        }
        Ok(())
    };
    for v in 0..n {
        let m = partial_trace(&delta, &dims, &[v])?;
        let s = sign_operator(&m)?;
        let w = crate::numerics::embed_operator(&s, &dims, &[v])?;
        consider(&w)?;
    }
    for v in 0..n {
        for w_site in (v + 1)..n {
            let m = partial_trace(&delta, &dims, &[v, w_site])?;
            let s = sign_operator(&m)?;
            let emb = crate::numerics::embed_operator(&s, &dims, &[v, w_site])?;
            consider(&emb)?;
        }
    }

    // Diagonal witness from the classical dual potential of the measured
    // distributions (qubit registers only — Hamming metric on bits).
    let mut classical_exact = None;
    if d == 2 {
        let pm = measure_distribution(rho)?;
        let pn = measure_distribution(sigma)?;
        let cw = w1_classical(&pm, &pn)?;
        if !cw.sink_potential.is_empty() {
            let f_of = |z: u64| -> f64 {
                cw.sink_potential
                    .iter()
                    .map(|&(y, phi)| hamming(z, y) as f64 + phi)
                    .fold(f64::INFINITY, f64::min)
            };
            let obs = Observable::from_diagonal_fn(rho.shape, f_of)?;
            let lip = lipschitz_classical(&obs)?.value.max(1.0);
            lower = lower.max(trace_product_re(&obs.mat, &delta) / lip);
        }
        let diag = |m: &CMat| {
            (0..m.nrows()).all(|i| {
                (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() <= TOL.diagonality)
            })
        };
        if diag(&rho.mat) && diag(&sigma.mat) {
            classical_exact = Some(cw.value);
        }
    }

    if lower > upper + 1e-9 {
        return Err(Error::Convergence(format!(
            "W1 bounds crossed: lower {lower:.6e} > upper {upper:.6e}"
        )));
    }
    Ok(W1Result {
        lower,
        upper,
        gap: upper - lower,
        classical_exact,
    })
}
