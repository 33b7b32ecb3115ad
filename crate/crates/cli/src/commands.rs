use clap::Subcommand;
use serde_json::{json, Value};

use qtb_core::bounds;
use qtb_core::entropy;
use qtb_core::maxcut;
use qtb_core::quantum;
use qtb_core::transport;

use crate::report::Report;

/// Mixer angles for the depth-17 ansatz used by the entropy-decay figure.
pub const BETA_P17: [f64; 17] = [
    0.6375, 0.5197, 0.4697, 0.4499, 0.4255, 0.4054, 0.3832, 0.3603, 0.3358, 0.3092, 0.2807,
    0.2501, 0.2171, 0.1816, 0.1426, 0.1001, 0.0536,
];

#[derive(Subcommand, Clone)]
pub enum BoundCmd {
    /// Largest instance a noisy constant-depth circuit can cut near-optimally.
    MaxcutNoisy {
        #[arg(long)]
        p: f64,
    },
    /// Minimum transverse-mixer rounds for near-optimal cuts on degree-D graphs.
    QaoaDepth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Minimum 2-local depth for near-optimal cuts.
    LowDepth {
        #[arg(long)]
        n: usize,
    },
    /// Symmetric-circuit approximation-ratio ceiling vs the classical 0.878.
    ApproxThreshold {
        #[arg(long)]
        degree: usize,
    },
    /// Chebyshev tail from a Poincaré constant.
    Chebyshev {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lip: f64,
        #[arg(long)]
        r: f64,
    },
    /// Deviation level and tail for noisy depth-L circuit outputs.
    DepolTail {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        layers: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lip: f64,
    },
    /// Depth at which the noise contraction reaches a target factor.
    AdvantageDepth {
        #[arg(long)]
        a_c: f64,
        #[arg(long)]
        p: f64,
    },
    /// Annealing-time lower bound on bounded-degree instances.
    AnnealTime {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        degree: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// GHZ preparation-time lower bound.
    GhzTime {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        degree: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// Energy threshold and tail on random regular graphs.
    RegularThreshold {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Per-site divergence bound h(T) for the linear-ramp annealer.
    HOfT {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        t: f64,
    },
    /// Energy level and tail for noisy-annealer outputs.
    NoisyAnnealerTail {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lip: f64,
        #[arg(long)]
        mean: f64,
    },
    /// Propagation bound for truncated continuous-time evolutions.
    Lr {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        degree: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long)]
        k0: usize,
        #[arg(long)]
        t: f64,
    },
    /// Purity decay of unital-noise circuit outputs.
    PurityUnital {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        layers: u32,
        #[arg(long)]
        n: usize,
    },
}

fn continuous_params(m: f64, delta: f64, degree: f64, b: f64) -> transport::ContinuousParams {
    transport::ContinuousParams {
        m,
        delta,
        deg: degree,
        b,
    }
}

impl BoundCmd {
    pub fn run(&self) -> anyhow::Result<Report> {
        Ok(match self {
            BoundCmd::MaxcutNoisy { p } => {
                let n = bounds::maxcut_noisy_max_n(*p)?;
                Report::scalar(
                    "noisy-maxcut-size-limit",
                    json!({ "p": p }),
                    json!({ "max_n": n, "formula": "3*2^(2/p+8)" }),
                )
            }
            BoundCmd::QaoaDepth { n, degree } => {
                let b = bounds::maxcut_depth_bounds(*n, *degree, bounds::CircuitKind::Qaoa)?;
                // Smallest n forcing more than one round: value ≥ 1 ⟺ n ≥ 576(D+1)².
                let min_n_two_rounds = 576 * (degree + 1) * (degree + 1);
                Report::scalar(
                    "qaoa-depth-lower-bound",
                    json!({ "n": n, "degree": degree }),
                    json!({
                        "rounds": b.value,
                        "vacuous": b.vacuous,
                        "log_base": "nats",
                        "min_n_for_one_round": min_n_two_rounds,
                    }),
                )
            }
            BoundCmd::LowDepth { n } => {
                let b = bounds::maxcut_depth_bounds(*n, 3, bounds::CircuitKind::LowDepth)?;
                Report::scalar(
                    "lowdepth-lower-bound",
                    json!({ "n": n }),
                    json!({ "layers": b.value, "vacuous": b.vacuous, "log_base": "bits" }),
                )
            }
            BoundCmd::ApproxThreshold { degree } => {
                let t = bounds::approx_threshold(*degree)?;
                Report::scalar(
                    "symmetric-approximation-ceiling",
                    json!({ "degree": degree }),
                    json!({ "ratio": t.ratio, "below_gw": t.below_gw, "gw": bounds::GW_RATIO }),
                )
            }
            BoundCmd::Chebyshev { c, n, lip, r } => {
                let v = bounds::chebyshev_tail(*c, *n, *lip, *r)?;
                Report::scalar(
                    "poincare-chebyshev-tail",
                    json!({ "c": c, "n": n, "lip": lip, "r": r }),
                    json!({ "probability": v, "vacuous": v >= 1.0 }),
                )
            }
            BoundCmd::DepolTail { p, layers, eps, n, lip } => {
                let t = bounds::depol_tail(*p, *layers, *eps, *n, *lip)?;
                Report::scalar(
                    "depolarizing-concentration",
                    json!({ "p": p, "layers": layers, "eps": eps, "n": n, "lip": lip }),
                    json!({ "level": t.level, "probability": t.probability }),
                )
            }
            BoundCmd::AdvantageDepth { a_c, p } => {
                let d = bounds::advantage_depth(*a_c, *p)?;
                Report::scalar(
                    "advantage-depth",
                    json!({ "a_c": a_c, "p": p }),
                    json!({ "value": d.value, "min_depth": d.min_depth }),
                )
            }
            BoundCmd::AnnealTime { n, m, delta, degree, b } => {
                let params = continuous_params(*m, *delta, *degree, *b);
                let t = bounds::anneal_time_lower(*n, &params)?;
                Report::scalar(
                    "anneal-time-lower-bound",
                    json!({ "n": n, "m": m, "delta": delta, "degree": degree, "b": b }),
                    json!({ "t_lower": t.value, "vacuous": t.vacuous }),
                )
            }
            BoundCmd::GhzTime { n, m, delta, degree, b } => {
                let params = continuous_params(*m, *delta, *degree, *b);
                let t = bounds::ghz_time_lower(*n, &params)?;
                Report::scalar(
                    "ghz-time-lower-bound",
                    json!({ "n": n, "m": m, "delta": delta, "degree": degree, "b": b }),
                    json!({ "t_lower": t.value, "vacuous": t.vacuous }),
                )
            }
            BoundCmd::RegularThreshold { q, degree, n, eps } => {
                let r = bounds::regular_graph_threshold(*q, *degree, *n, *eps)?;
                Report::scalar(
                    "regular-graph-threshold",
                    json!({ "q": q, "degree": degree, "n": n, "eps": eps }),
                    json!({
                        "threshold": r.threshold,
                        "threshold_eps0": r.threshold_eps0,
                        "mean": r.mean,
                        "classical_benchmark": r.classical_benchmark,
                        "tail": r.tail,
                    }),
                )
            }
            BoundCmd::HOfT { q, t } => {
                let h = entropy::h_of_t(*q, *t)?;
                Report::scalar(
                    "annealer-divergence-density",
                    json!({ "q": q, "t": t }),
                    json!({ "h": h, "log_base": "nats" }),
                )
            }
            BoundCmd::NoisyAnnealerTail { q, t, eps, n, lip, mean } => {
                let b = bounds::noisy_annealer_tail(*q, *t, *eps, *n, *lip, *mean)?;
                Report::scalar(
                    "noisy-annealer-energy-tail",
                    json!({ "q": q, "t": t, "eps": eps, "n": n, "lip": lip, "mean": mean }),
                    json!({ "level": b.level, "probability": b.probability }),
                )
            }
            BoundCmd::Lr { m, delta, degree, b, k0, t } => {
                let params = continuous_params(*m, *delta, *degree, *b);
                let v = bounds::lr_bound(&params, *k0, *t)?;
                Report::scalar(
                    "propagation-bound",
                    json!({ "m": m, "delta": delta, "degree": degree, "b": b, "k0": k0, "t": t }),
                    json!({ "value": v, "velocity": params.velocity() }),
                )
            }
            BoundCmd::PurityUnital { p, layers, n } => {
                let factor = (1.0 - p) * (1.0 - p);
                let v = entropy::purity_decay_unital(factor, *layers, *n)?;
                Report::scalar(
                    "unital-purity-decay",
                    json!({ "p": p, "layers": layers, "n": n }),
                    json!({ "purity_bound": v }),
                )
            }
        })
    }
}

#[derive(Subcommand, Clone)]
pub enum VerifyCmd {
    /// Variance vs Poincaré bound on random shallow circuits.
    Poincare {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        observables: usize,
    },
    /// Primal/dual agreement and triangle inequality for the classical W1.
    W1 {
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 5)]
        bits: usize,
    },
    /// Order-2 divergence decay under depolarizing noise.
    DepolDecay {
        #[arg(long, default_value_t = 10)]
        circuits: usize,
    },
    /// Purity decay of noisy circuit outputs.
    Purity {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        max_layers: usize,
    },
    /// Exact annealer divergence against the closed-form density bound.
    AnnealerEntropy {
        #[arg(long, default_value_t = 0.4)]
        q: f64,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
    },
}

impl VerifyCmd {
    pub fn run(&self, seed: u64) -> anyhow::Result<Report> {
        Ok(match self {
            VerifyCmd::Poincare { n, depth, observables } => {
                let arch = quantum::random_brickwork(*n, *depth, seed)?;
                let c = transport::poincare_noiseless(&arch).value;
                let sigma =
                    quantum::simulate_circuit(&arch, None, &quantum::plus_state(*n)?, false)?
                        .final_state;
                let mut rng = qtb_core::randutil::rng(seed.wrapping_add(1));
                let mut checked = 0usize;
                let mut violations = 0usize;
                let mut worst = 0.0f64;
                for _ in 0..*observables {
                    let o = quantum::Observable::new(
                        sigma.shape,
                        qtb_core::randutil::random_hermitian(&mut rng, sigma.dim()),
                    )?;
                    let lip = transport::lipschitz_quantum_bound(&o)?.value;
                    let var = transport::variance(&sigma, &o)?;
                    let bound = c * *n as f64 * lip * lip;
                    if var > bound + 1e-9 {
                        violations += 1;
                    }
                    worst = worst.max(var / bound.max(1e-300));
                    checked += 1;
                }
                Report::scalar(
                    "verify-poincare",
                    json!({ "n": n, "depth": depth, "observables": observables, "seed": seed }),
                    json!({
                        "poincare_constant": c,
                        "checked": checked,
                        "violations": violations,
                        "worst_ratio": worst,
                        "pass": violations == 0,
                    }),
                )
            }
            VerifyCmd::W1 { pairs, bits } => {
                let mut rng = qtb_core::randutil::rng(seed);
                let shape = quantum::RegisterShape::qubits(*bits);
                let mut worst_gap = 0.0f64;
                let random_dist = |rng: &mut rand_chacha::ChaCha8Rng| {
                    use rand::Rng;
                    let dim = 1u64 << *bits;
                    let mut map = std::collections::BTreeMap::new();
                    let mut total = 0.0;
                    for x in 0..dim {
                        let w: f64 = rng.gen::<f64>();
                        map.insert(x, w);
                        total += w;
                    }
                    for v in map.values_mut() {
                        *v /= total;
                    }
                    quantum::MeasuredDistribution::from_map(shape, map).unwrap()
                };
                for _ in 0..*pairs {
                    let mu = random_dist(&mut rng);
                    let nu = random_dist(&mut rng);
                    let sol = transport::w1_classical(&mu, &nu)?;
                    worst_gap = worst_gap.max((sol.value - sol.dual_value).abs());
                }
                Report::scalar(
                    "verify-w1-duality",
                    json!({ "pairs": pairs, "bits": bits, "seed": seed }),
                    json!({ "worst_gap": worst_gap, "pass": worst_gap <= 1e-8 }),
                )
            }
            VerifyCmd::DepolDecay { circuits } => {
                let mut rng = qtb_core::randutil::rng(seed);
                let mut violations = 0usize;
                let mut checked = 0usize;
                for i in 0..*circuits {
                    use rand::Rng;
                    let n = 4 + (i % 2);
                    let layers = 1 + (i % 3);
                    let p = if rng.gen::<bool>() { 0.1 } else { 0.3 };
                    let arch = quantum::random_brickwork(n, layers, seed.wrapping_add(i as u64))?;
                    let noise = quantum::NoiseModel::Depolarizing { p };
                    let dim = 1usize << n;
                    let rho0 = quantum::DensityMatrix::new(
                        quantum::RegisterShape::qubits(n),
                        qtb_core::randutil::random_pure_density(&mut rng, dim),
                    )?;
                    let out = quantum::simulate_circuit(&arch, Some(&noise), &rho0, false)?;
                    let maxmix = quantum::DensityMatrix::new(
                        rho0.shape,
                        qtb_core::numerics::eye(dim) * qtb_core::numerics::cr(1.0 / dim as f64),
                    )?;
                    let before = entropy::renyi_divergence(&rho0, &maxmix, 2.0)?.value;
                    let after =
                        entropy::renyi_divergence(&out.final_state, &maxmix, 2.0)?.value;
                    let factor = (1.0 - p).powi(2 * layers as i32);
                    if after > factor * before + 1e-9 {
                        violations += 1;
                    }
                    checked += 1;
                }
                let mut report = Report::scalar(
                    "verify-depolarizing-decay",
                    json!({ "circuits": circuits, "seed": seed }),
                    json!({ "checked": checked, "violations": violations, "pass": violations == 0 }),
                );
                report.notes.push(
                    "inputs are Haar-random pure states; low-weight product inputs can \
                     exceed the per-layer factor at depth 1"
                        .into(),
                );
                report
            }
            VerifyCmd::Purity { n, p, max_layers } => {
                let mut rng = qtb_core::randutil::rng(seed);
                let mut violations = 0usize;
                let mut rows = Vec::new();
                for layers in 1..=*max_layers {
                    let arch = quantum::random_brickwork(*n, layers, seed.wrapping_add(layers as u64))?;
                    let noise = quantum::NoiseModel::Depolarizing { p: *p };
                    let rho0 = quantum::DensityMatrix::new(
                        quantum::RegisterShape::qubits(*n),
                        qtb_core::randutil::random_pure_density(&mut rng, 1usize << *n),
                    )?;
                    let rho = quantum::simulate_circuit(&arch, Some(&noise), &rho0, false)?
                        .final_state;
                    let bound =
                        entropy::purity_decay_unital((1.0 - p) * (1.0 - p), layers as u32, *n)?;
                    let purity = rho.purity();
                    if purity > bound + 1e-9 {
                        violations += 1;
                    }
                    rows.push(vec![layers as f64, purity, bound]);
                }
                let mut report = Report::table(
                    "verify-purity-decay",
                    json!({ "n": n, "p": p, "max_layers": max_layers, "seed": seed }),
                    vec!["layers".into(), "purity".into(), "bound".into()],
                    rows,
                );
                report.results = json!({ "violations": violations, "pass": violations == 0 });
                report.notes.push(
                    "inputs are Haar-random pure states; low-weight product inputs can \
                     exceed the bound at depth 1"
                        .into(),
                );
                report
            }
            VerifyCmd::AnnealerEntropy { q, t } => {
                let n = 3usize;
                let g = maxcut::Graph::cycle(n);
                let h = maxcut::maxcut_hamiltonian(&g)?;
                let schedule = quantum::AnnealSchedule {
                    t_total: *t,
                    f: quantum::PiecewiseLinear::linear_ramp_down(),
                    g: quantum::PiecewiseLinear::linear_ramp_up(),
                    q: *q,
                    rate: 1.0,
                };
                let run =
                    quantum::simulate_lindblad(&schedule, &h, &quantum::plus_state(n)?, t / 200.0)?;
                let tau = quantum::product_state_tau(*q, n)?;
                let exact = entropy::renyi_divergence(&run.final_state, &tau, 2.0)?.value;
                let bound = n as f64 * entropy::h_of_t(*q, *t)?;
                Report::scalar(
                    "verify-annealer-entropy",
                    json!({ "q": q, "t": t, "n": n }),
                    json!({ "exact_d2": exact, "bound": bound, "pass": exact <= bound + 1e-9 }),
                )
            }
        })
    }
}

#[derive(Subcommand, Clone)]
pub enum FigureCmd {
    /// Relative-entropy density of the depth-17 ansatz vs noise contraction,
    /// with the regular-graph divergence threshold for reference.
    QaoaEntropy {
        /// Comma-separated local fixed-point parameters.
        #[arg(long, default_value = "0.35,0.4,0.45,0.5", value_delimiter = ',')]
        q: Vec<f64>,
        /// Contraction grid start:stop:step.
        #[arg(long, default_value = "0:0.5:0.01")]
        contraction_grid: String,
        #[arg(long, default_value_t = 50)]
        degree: usize,
    },
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        anyhow::bail!("grid must be start:stop:step, got `{spec}`");
    }
    let start: f64 = parts[0].parse()?;
    let stop: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if step <= 0.0 || stop < start {
        anyhow::bail!("grid needs step > 0 and stop ≥ start");
    }
    let count = ((stop - start) / step).round() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

impl FigureCmd {
    pub fn run(&self) -> anyhow::Result<Report> {
        match self {
            FigureCmd::QaoaEntropy { q, contraction_grid, degree } => {
                let grid = parse_grid(contraction_grid)?;
                let mut rows = Vec::new();
                for &qv in q {
                    let threshold =
                        bounds::regular_graph_threshold(qv, *degree, 1, 0.0)?.threshold_eps0;
                    for &p_alpha in &grid {
                        if p_alpha >= 1.0 {
                            continue;
                        }
                        // Per-qubit divergence density; n = 1 since the ledger
                        // scales linearly in n.
                        let ledger = entropy::qaoa_entropy_bound(
                            &BETA_P17,
                            qv,
                            p_alpha.max(1e-12),
                            1,
                        )?;
                        rows.push(vec![qv, p_alpha, ledger.bound, threshold]);
                    }
                }
                Ok(Report::table(
                    "figure-qaoa-entropy",
                    json!({
                        "q": q,
                        "contraction_grid": contraction_grid,
                        "degree": degree,
                        "beta": BETA_P17,
                        "log_base": "nats",
                    }),
                    vec![
                        "q".into(),
                        "contraction".into(),
                        "entropy_density".into(),
                        "threshold_density".into(),
                    ],
                    rows,
                ))
            }
        }
    }
}

/// One-line catalog of every command for `qtb list`.
pub fn catalog() -> String {
    let entries = [
        ("bound maxcut-noisy", "noisy-maxcut-size-limit: n ≤ 3·2^(2/p+8)"),
        ("bound qaoa-depth", "qaoa-depth-lower-bound: rounds ≥ ln(n/576)/(2·ln(D+1))"),
        ("bound low-depth", "lowdepth-lower-bound: layers ≥ ½·log₂(n/576)"),
        ("bound approx-threshold", "symmetric-approximation-ceiling: 5/6 + √(D−1)/(3D)"),
        ("bound chebyshev", "poincare-chebyshev-tail: C·n·L²/r²"),
        ("bound depol-tail", "depolarizing-concentration: ((1−p)^{2L}+ε)^{1/2}·L·n, e^{−εn/2}"),
        ("bound advantage-depth", "advantage-depth: ln(1/a_c)/(2p)"),
        ("bound anneal-time", "anneal-time-lower-bound: (1/v)·ln(√n/(12c₁) − c₀/c₁)"),
        ("bound ghz-time", "ghz-time-lower-bound: (1/v)·ln(n/(8c₁) − c₀/c₁)"),
        ("bound regular-threshold", "regular-graph-threshold: ((1−2q)²D/2 + (2/π)√D)²/(2D²)·n"),
        ("bound h-of-t", "annealer-divergence-density: closed-form h(T)"),
        ("bound noisy-annealer-tail", "noisy-annealer-energy-tail: mean − √((h+ε)/2)·L·n"),
        ("bound lr", "propagation-bound: (2M/(2D−1))·k₀^{δ−1}·e^{vt−k₀}"),
        ("bound purity-unital", "unital-purity-decay: exp(−ln2·(1−(1−p)^{2L})·n)"),
        ("verify poincare", "variance vs Poincaré bound on random shallow circuits"),
        ("verify w1", "classical W1 primal/dual agreement"),
        ("verify depol-decay", "order-2 divergence decay under depolarizing noise"),
        ("verify purity", "purity decay vs simulation"),
        ("verify annealer-entropy", "exact annealer divergence vs density bound"),
        ("figure qaoa-entropy", "entropy density vs contraction with graph threshold"),
    ];
    let mut out = String::new();
    for (cmd, desc) in entries {
        out.push_str(&format!("{cmd:28} {desc}\n"));
    }
    out
}

/// Batch dispatch for `qtb run --config`: command names mirror the CLI paths.
pub fn dispatch_named(command: &str, params: &Value, seed: u64) -> anyhow::Result<Report> {
    let f =
        |key: &str| -> anyhow::Result<f64> {
            params.get(key).and_then(Value::as_f64).ok_or_else(|| {
                anyhow::anyhow!("missing or non-numeric parameter: {key}")
            })
        };
    let f_or = |key: &str, default: f64| params.get(key).and_then(Value::as_f64).unwrap_or(default);
    let u = |key: &str| -> anyhow::Result<usize> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| anyhow::anyhow!("missing or non-integer parameter: {key}"))
    };
    match command {
        "bound/maxcut-noisy" => BoundCmd::MaxcutNoisy { p: f("p")? }.run(),
        "bound/qaoa-depth" => BoundCmd::QaoaDepth {
            n: u("n")?,
            degree: u("degree")?,
        }
        .run(),
        "bound/low-depth" => BoundCmd::LowDepth { n: u("n")? }.run(),
        "bound/approx-threshold" => BoundCmd::ApproxThreshold { degree: u("degree")? }.run(),
        "bound/chebyshev" => BoundCmd::Chebyshev {
            c: f("c")?,
            n: u("n")?,
            lip: f("lip")?,
            r: f("r")?,
        }
        .run(),
        "bound/h-of-t" => BoundCmd::HOfT { q: f("q")?, t: f("t")? }.run(),
        "bound/regular-threshold" => BoundCmd::RegularThreshold {
            q: f("q")?,
            degree: u("degree")?,
            n: u("n")?,
            eps: f_or("eps", 0.0),
        }
        .run(),
        "verify/poincare" => VerifyCmd::Poincare {
            n: u("n").unwrap_or(6),
            depth: u("depth").unwrap_or(2),
            observables: u("observables").unwrap_or(10),
        }
        .run(seed),
        "verify/w1" => VerifyCmd::W1 {
            pairs: u("pairs").unwrap_or(20),
            bits: u("bits").unwrap_or(5),
        }
        .run(seed),
        "verify/annealer-entropy" => VerifyCmd::AnnealerEntropy {
            q: f_or("q", 0.4),
            t: f_or("t", 2.0),
        }
        .run(seed),
        "figure/qaoa-entropy" => FigureCmd::QaoaEntropy {
            q: params
                .get("q")
                .and_then(Value::as_array)
                .map(|a| a.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_else(|| vec![0.35, 0.4, 0.45, 0.5]),
            contraction_grid: params
                .get("contraction_grid")
                .and_then(Value::as_str)
                .unwrap_or("0:0.5:0.01")
                .to_string(),
            degree: u("degree").unwrap_or(50),
        }
        .run(),
        other => anyhow::bail!("unknown command id: {other}"),
    }
}
