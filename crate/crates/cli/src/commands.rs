//! Subcommand implementations. Every command is deterministic given
//! (config, seed): outputs are byte-identical across repeated runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use hgfrft_core::filtering::{bandpass, FrequencyRegion};
use hgfrft_core::graph::{Graph, ShiftKind};
use hgfrft_core::io::{self, fmt_f64};
use hgfrft_core::linalg::CVector;
use hgfrft_core::sampling::{
    self, build_plan, grid_search, recover, recovery_error, GridSpec, GridStage, PlanFile,
    SamplingPlan, DEFAULT_FINE_STEP,
};
use hgfrft_core::signals::{
    self, chirp_field, energy_compactness, gaussian_noise_vector, heat_time_iteration,
    peak_to_energy, synthesize_bandlimited, ChirpSpec,
};
use hgfrft_core::transform::{
    hgfrft, inverse_hgfrft, partial_g, partial_h, JointSignal, JointSpectrum, OperatorFactory,
};

use crate::config::{config_error, ExperimentConfig, ExperimentParams};
use crate::CliError;

/// Resolved run environment: parsed config plus output directory and seed
/// (flags take precedence over config values).
pub struct CmdEnv {
    pub config: Option<ExperimentConfig>,
    pub out: PathBuf,
    pub seed: u64,
}

impl CmdEnv {
    fn config(&self) -> Result<&ExperimentConfig, CliError> {
        self.config
            .as_ref()
            .ok_or_else(|| config_error("this command requires --config"))
    }

    fn out_file(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn params(cfg: &ExperimentConfig) -> Result<&ExperimentParams, CliError> {
    cfg.experiment
        .as_ref()
        .ok_or_else(|| config_error("config is missing the experiment section"))
}

fn kind_mismatch(expected: &str) -> CliError {
    config_error(format!(
        "experiment kind does not match the `{expected}` command"
    ))
}

fn orders_or(cfg: &ExperimentConfig, default: (f64, f64)) -> (f64, f64) {
    (
        cfg.alpha.unwrap_or(default.0),
        cfg.beta.unwrap_or(default.1),
    )
}

fn read_vector(path: &Path, expected_len: usize) -> Result<CVector, CliError> {
    let mat = io::read_matrix_csv(path)?;
    let v: Vec<Complex64> = if mat.ncols() == 1 {
        mat.column(0).iter().copied().collect()
    } else if mat.nrows() == 1 {
        mat.row(0).iter().copied().collect()
    } else {
        return Err(config_error(format!(
            "{} must be a single row or column, got {}x{}",
            path.display(),
            mat.nrows(),
            mat.ncols()
        )));
    };
    if v.len() != expected_len {
        return Err(config_error(format!(
            "{} has {} entries, expected {expected_len}",
            path.display(),
            v.len()
        )));
    }
    Ok(CVector::from_column_slice(&v))
}

// ── transform-family commands ───────────────────────────────────────

pub fn cmd_transform(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Transform { signal } = params(cfg)? else {
        return Err(kind_mismatch("transform"));
    };
    let (fh, fg) = cfg.factories()?;
    let (alpha, beta) = cfg.orders()?;
    let sig = io::read_signal(signal)?;
    let spec = hgfrft(&sig, &fh.at_order(alpha)?, &fg.at_order(beta)?)?;
    let out = env.out_file("spectrum.csv");
    io::write_spectrum(&out, &spec)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_inverse(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Inverse { spectrum } = params(cfg)? else {
        return Err(kind_mismatch("inverse"));
    };
    let (fh, fg) = cfg.factories()?;
    let spec = io::read_spectrum(spectrum)?;
    let sig = inverse_hgfrft(
        &spec,
        &fh.at_order(-spec.alpha())?,
        &fg.at_order(-spec.beta())?,
    )?;
    let out = env.out_file("signal.csv");
    io::write_signal(&out, &sig)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_partial_h(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::PartialH { signal } = params(cfg)? else {
        return Err(kind_mismatch("partial-h"));
    };
    let fh = cfg.hilbert_factory()?;
    let (alpha, _) = orders_or(cfg, (1.0, 0.0));
    let sig = io::read_signal(signal)?;
    let out_sig = partial_h(&sig, &fh.at_order(alpha)?)?;
    let out = env.out_file("partial_h.csv");
    io::write_spectrum(
        &out,
        &JointSpectrum::from_parts(out_sig.matrix().clone(), alpha, 0.0),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_partial_g(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::PartialG { signal } = params(cfg)? else {
        return Err(kind_mismatch("partial-g"));
    };
    let fg = cfg.graph_factory()?;
    let (_, beta) = orders_or(cfg, (0.0, 1.0));
    let sig = io::read_signal(signal)?;
    let out_sig = partial_g(&sig, &fg.at_order(beta)?)?;
    let out = env.out_file("partial_g.csv");
    io::write_spectrum(
        &out,
        &JointSpectrum::from_parts(out_sig.matrix().clone(), 0.0, beta),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_filter_bandpass(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::FilterBandpass { signal, region } = params(cfg)? else {
        return Err(kind_mismatch("filter-bandpass"));
    };
    let (fh, fg) = cfg.factories()?;
    let (alpha, beta) = cfg.orders()?;
    let sig = io::read_signal(signal)?;
    let filtered = bandpass(&sig, region, &fh.at_order(alpha)?, &fg.at_order(beta)?)?;
    let out = env.out_file("bandpass.csv");
    io::write_signal(&out, &filtered)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_convolve(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Convolve { g, f } = params(cfg)? else {
        return Err(kind_mismatch("convolve"));
    };
    let (fh, fg) = cfg.factories()?;
    let (alpha, beta) = cfg.orders()?;
    let sig_g = io::read_signal(g)?;
    let sig_f = io::read_signal(f)?;
    let conv = hgfrft_core::filtering::convolve(
        &sig_g,
        &sig_f,
        &fh.at_order(alpha)?,
        &fg.at_order(beta)?,
    )?;
    let out = env.out_file("convolution.csv");
    io::write_signal(&out, &conv)?;
    println!("wrote {}", out.display());
    Ok(())
}

// ── sampling commands ───────────────────────────────────────────────

pub fn cmd_sample_greedy(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::SampleGreedy {
        support,
        samples,
        signal,
    } = params(cfg)?
    else {
        return Err(kind_mismatch("sample-greedy"));
    };
    let (fh, fg) = cfg.factories()?;
    let (alpha, beta) = cfg.orders()?;
    let num_samples = samples.unwrap_or(support.len());
    let plan = build_plan(
        &fh.at_order(alpha)?,
        &fg.at_order(beta)?,
        support,
        num_samples,
    )?;
    let plan_path = env.out_file("plan.json");
    write_json(&plan_path, &plan.to_file())?;
    println!("wrote {}", plan_path.display());
    if let Some(signal_path) = signal {
        let sig = io::read_signal(signal_path)?;
        let values = sampling::sample(&sig, &plan.w)?;
        let samples_path = env.out_file("samples.csv");
        io::write_matrix_csv(
            &samples_path,
            &hgfrft_core::linalg::CMatrix::from_fn(values.len(), 1, |i, _| values[i]),
        )?;
        println!("wrote {}", samples_path.display());
    }
    Ok(())
}

pub fn cmd_recover(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Recover { plan, samples } = params(cfg)? else {
        return Err(kind_mismatch("recover"));
    };
    let (fh, fg) = cfg.factories()?;
    let text = std::fs::read_to_string(plan)
        .map_err(|e| config_error(format!("cannot read plan {}: {e}", plan.display())))?;
    let plan_file: PlanFile = serde_json::from_str(&text)
        .map_err(|e| config_error(format!("invalid plan {}: {e}", plan.display())))?;
    let full = SamplingPlan::from_file(
        &plan_file,
        &fh.at_order(plan_file.alpha)?,
        &fg.at_order(plan_file.beta)?,
    )?;
    let values = read_vector(samples, full.w.len())?;
    let values: Vec<Complex64> = values.iter().copied().collect();
    let rec = recover(&values, &full)?;
    let out = env.out_file("recovered.csv");
    io::write_signal(&out, &rec)?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Flag overrides for `grid-search`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridSearchFlags {
    pub samples: Option<usize>,
    pub alpha_range: Option<(f64, f64)>,
    pub beta_range: Option<(f64, f64)>,
    pub coarse_step: Option<f64>,
    pub fine_step: Option<f64>,
}

#[derive(Serialize)]
struct GridOptimum {
    alpha: f64,
    beta: f64,
    error: f64,
}

pub fn cmd_grid_search(env: &CmdEnv, flags: &GridSearchFlags) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::GridSearch {
        signal,
        support_size,
        noise_sigma,
        samples,
        alpha_range,
        beta_range,
        coarse_step,
        fine_step,
    } = params(cfg)?
    else {
        return Err(kind_mismatch("grid-search"));
    };
    let (fh, fg) = cfg.factories()?;
    let sig = io::read_signal(signal)?;
    let defaults = GridSpec::default();
    let spec = GridSpec {
        alpha_range: flags
            .alpha_range
            .or(*alpha_range)
            .unwrap_or(defaults.alpha_range),
        beta_range: flags
            .beta_range
            .or(*beta_range)
            .unwrap_or(defaults.beta_range),
        step: flags.coarse_step.or(*coarse_step).unwrap_or(defaults.step),
    };
    let fine = flags.fine_step.or(*fine_step).unwrap_or(DEFAULT_FINE_STEP);
    let num_samples = flags.samples.or(*samples).unwrap_or(*support_size);
    let sigma = noise_sigma.unwrap_or(0.01);
    let noise = gaussian_noise_vector(num_samples, sigma, env.seed)?;

    let result = grid_search(&sig, &fh, &fg, &noise, *support_size, &spec, fine)?;

    let grid_path = env.out_file("grid.csv");
    let mut text = String::from("alpha,beta,error,stage\n");
    for p in &result.evaluations {
        let stage = match p.stage {
            GridStage::Coarse => "coarse",
            GridStage::Fine => "fine",
        };
        text.push_str(&format!(
            "{},{},{},{stage}\n",
            fmt_f64(p.alpha),
            fmt_f64(p.beta),
            fmt_f64(p.error)
        ));
    }
    std::fs::write(&grid_path, text).map_err(hgfrft_core::Error::from)?;

    let opt_path = env.out_file("optimum.json");
    write_json(
        &opt_path,
        &GridOptimum {
            alpha: result.alpha,
            beta: result.beta,
            error: result.error,
        },
    )?;
    println!(
        "optimum alpha={} beta={} error={}",
        fmt_f64(result.alpha),
        fmt_f64(result.beta),
        fmt_f64(result.error)
    );
    Ok(())
}

// ── demo commands ───────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct PlanOutcome {
    w: Vec<usize>,
    error: f64,
}

#[derive(Serialize, Deserialize)]
struct ProductDemoReport {
    alpha: f64,
    beta: f64,
    support: Vec<[usize; 2]>,
    product_vertices: usize,
    product_edges: usize,
    signal_norm: f64,
    fractional: PlanOutcome,
    unit: PlanOutcome,
}

/// Self-contained product-graph experiment: path-4 Hilbert side, ring-4
/// graph side, bandlimited chirp-like signal from the first three joint
/// basis vectors, greedy sampling at the fractional orders and at (1, 1).
pub fn cmd_product_demo(env: &CmdEnv) -> Result<(), CliError> {
    let default_cfg = ExperimentConfig::default();
    let cfg = env.config.as_ref().unwrap_or(&default_cfg);
    if let Some(p) = &cfg.experiment {
        if !matches!(p, ExperimentParams::ProductDemo {}) {
            return Err(kind_mismatch("product-demo"));
        }
    }
    let shift = cfg.graph_shift();
    let (alpha, beta) = orders_or(cfg, (0.7, 0.5));

    let path4 = Graph::path(4)?;
    let ring4 = Graph::cycle(4, false)?;
    let product = path4.cartesian_product(&ring4)?;
    let fh = OperatorFactory::gft(&path4, shift)?;
    let fg = OperatorFactory::gft(&ring4, shift)?;
    let op_h = fh.at_order(alpha)?;
    let op_g = fg.at_order(beta)?;

    let mut coeffs = BTreeMap::new();
    coeffs.insert(0usize, Complex64::new(1.0, 0.0));
    coeffs.insert(1, Complex64::new(0.5, 0.0));
    coeffs.insert(2, Complex64::new(2.0, 0.0));
    let signal = synthesize_bandlimited(&coeffs, &op_h, &op_g)?;
    let support = FrequencyRegion::from_flat([0, 1, 2], 4);

    let run = |oh: &_, og: &_| -> Result<(SamplingPlan, JointSignal, f64), CliError> {
        let plan = build_plan(oh, og, &support, 3)?;
        let values = sampling::sample(&signal, &plan.w)?;
        let rec = recover(&values, &plan)?;
        let err = recovery_error(&rec, &signal)?;
        Ok((plan, rec, err))
    };
    let (plan_frac, rec_frac, err_frac) = run(&op_h, &op_g)?;
    let (plan_unit, rec_unit, err_unit) = run(&fh.at_order(1.0)?, &fg.at_order(1.0)?)?;

    io::write_signal(&env.out_file("signal.csv"), &signal)?;
    io::write_signal(&env.out_file("recovered_fractional.csv"), &rec_frac)?;
    io::write_signal(&env.out_file("recovered_unit.csv"), &rec_unit)?;
    let report = ProductDemoReport {
        alpha,
        beta,
        support: support.iter().map(|(i, j)| [i, j]).collect(),
        product_vertices: product.n(),
        product_edges: product.edges().len(),
        signal_norm: signal.norm(),
        fractional: PlanOutcome {
            w: plan_frac.w,
            error: err_frac,
        },
        unit: PlanOutcome {
            w: plan_unit.w,
            error: err_unit,
        },
    };
    let report_path = env.out_file("report.json");
    write_json(&report_path, &report)?;
    println!(
        "fractional error {} vs unit error {}",
        fmt_f64(err_frac),
        fmt_f64(err_unit)
    );
    Ok(())
}

#[derive(Serialize)]
struct ChirpReport {
    vertex: usize,
    best_alpha: f64,
    best_ratio: f64,
    ratio_at_one: f64,
}

/// Chirp concentration sweep: transform one vertex's chirp across a grid of
/// fractional orders and report the peak-to-energy ratio of each spectrum.
pub fn cmd_chirp_demo(env: &CmdEnv) -> Result<(), CliError> {
    let default_cfg = ExperimentConfig::default();
    let cfg = env.config.as_ref().unwrap_or(&default_cfg);
    let (chirp, vertices, vertex, alpha_range, alpha_step) = match &cfg.experiment {
        Some(ExperimentParams::ChirpDemo {
            chirp,
            vertices,
            vertex,
            alpha_range,
            alpha_step,
        }) => (
            chirp.unwrap_or_default(),
            vertices.unwrap_or(48),
            vertex.unwrap_or(16),
            alpha_range.unwrap_or((0.05, 1.95)),
            alpha_step.unwrap_or(0.05),
        ),
        None => (ChirpSpec::default(), 48, 16, (0.05, 1.95), 0.05),
        Some(_) => return Err(kind_mismatch("chirp-demo")),
    };
    if vertex >= vertices {
        return Err(config_error(format!(
            "vertex {vertex} out of range for {vertices} vertices"
        )));
    }
    if alpha_step.is_nan() || alpha_step <= 0.0 {
        return Err(config_error("alpha_step must be positive"));
    }

    let field = chirp_field(&chirp, vertices)?;
    let column = JointSignal::new(hgfrft_core::linalg::CMatrix::from_fn(
        chirp.samples,
        1,
        |i, _| field.matrix()[(i, vertex)],
    ));
    let fh = OperatorFactory::dft(chirp.samples)?;

    let steps = ((alpha_range.1 - alpha_range.0) / alpha_step).round() as i64;
    let mut rows = String::from("alpha,ratio\n");
    let mut best = (alpha_range.0, f64::MIN);
    for k in 0..=steps.max(0) {
        let alpha = alpha_range.0 + k as f64 * alpha_step;
        let transformed = partial_h(&column, &fh.at_order(alpha)?)?;
        let spectrum: Vec<Complex64> = transformed.matrix().column(0).iter().copied().collect();
        let ratio = peak_to_energy(&spectrum);
        rows.push_str(&format!("{},{}\n", fmt_f64(alpha), fmt_f64(ratio)));
        if ratio > best.1 {
            best = (alpha, ratio);
        }
    }
    let at_one = partial_h(&column, &fh.at_order(1.0)?)?;
    let ratio_at_one = peak_to_energy(
        &at_one
            .matrix()
            .column(0)
            .iter()
            .copied()
            .collect::<Vec<_>>(),
    );

    let conc_path = env.out_file("concentration.csv");
    std::fs::write(&conc_path, rows).map_err(hgfrft_core::Error::from)?;
    io::write_spectrum(
        &env.out_file("spectrum_unit.csv"),
        &JointSpectrum::from_parts(at_one.matrix().clone(), 1.0, 0.0),
    )?;
    let best_spec = partial_h(&column, &fh.at_order(best.0)?)?;
    io::write_spectrum(
        &env.out_file("spectrum_best.csv"),
        &JointSpectrum::from_parts(best_spec.matrix().clone(), best.0, 0.0),
    )?;
    write_json(
        &env.out_file("chirp.json"),
        &ChirpReport {
            vertex,
            best_alpha: best.0,
            best_ratio: best.1,
            ratio_at_one,
        },
    )?;
    println!(
        "best alpha {} ratio {} (ratio at order 1: {})",
        fmt_f64(best.0),
        fmt_f64(best.1),
        fmt_f64(ratio_at_one)
    );
    Ok(())
}

// ── diffusion commands ──────────────────────────────────────────────

struct DiffusionSetup {
    fh: OperatorFactory,
    fg: OperatorFactory,
    f1: CVector,
    lambda: Vec<f64>,
    omega: Vec<f64>,
    alpha: f64,
    beta: f64,
}

fn diffusion_inputs(
    env: &CmdEnv,
    initial: &Option<PathBuf>,
    impulse_at: &Option<usize>,
) -> Result<DiffusionSetup, CliError> {
    let cfg = env.config()?;
    // The evolution is driven by the Laplacian, so the graph basis is pinned
    // to it regardless of the configured shift.
    let graph = cfg.require_graph()?;
    let fg = OperatorFactory::gft(&graph, ShiftKind::Laplacian)?;
    let fh = cfg.hilbert_factory()?;
    let omega = fh
        .frequencies()
        .ok_or_else(|| config_error("heat/wave require a DFT hilbert side (set m)"))?;
    let lambda: Vec<f64> = fg
        .shift_eigenvalues()
        .expect("gft factory carries its shift spectrum")
        .iter()
        .map(|z| z.re)
        .collect();
    let n = graph.n();
    let f1 = match initial {
        Some(path) => read_vector(path, n)?,
        None => {
            let at = impulse_at.unwrap_or(0);
            if at >= n {
                return Err(config_error(format!(
                    "impulse_at {at} out of range for {n} vertices"
                )));
            }
            CVector::from_fn(n, |i, _| {
                if i == at {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
    };
    let (alpha, beta) = orders_or(cfg, (1.0, 1.0));
    Ok(DiffusionSetup {
        fh,
        fg,
        f1,
        lambda,
        omega,
        alpha,
        beta,
    })
}

/// Joint input spectrum for the diffusion solutions:
/// `Y[k, l] = (G^{-beta} f1)[l] * H^{alpha}[k, 0]`.
fn diffusion_input_spectrum(
    fh: &OperatorFactory,
    fg: &OperatorFactory,
    f1: &CVector,
    alpha: f64,
    beta: f64,
) -> Result<JointSpectrum, CliError> {
    let g_side = fg.at_order(-beta)?.mat() * f1;
    let h_col = fh.at_order(alpha)?.mat().column(0).into_owned();
    let coeff =
        hgfrft_core::linalg::CMatrix::from_fn(fh.dim(), fg.dim(), |k, l| g_side[l] * h_col[k]);
    Ok(JointSpectrum::from_parts(coeff, alpha, beta))
}

pub fn cmd_heat(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Heat {
        s,
        t_horizon,
        initial,
        impulse_at,
    } = params(cfg)?
    else {
        return Err(kind_mismatch("heat"));
    };
    let setup = diffusion_inputs(env, initial, impulse_at)?;
    let y = diffusion_input_spectrum(&setup.fh, &setup.fg, &setup.f1, setup.alpha, setup.beta)?;
    let solution =
        signals::heat_spectral_solution(&y, &setup.lambda, &setup.omega, *s, *t_horizon)?;
    if !signals::heat_is_stable(&setup.lambda, *s) {
        eprintln!("warning: |1 - s*lambda| exceeds 1 for some mode; diffusion grows");
    }
    let out = env.out_file("heat_spectrum.csv");
    io::write_spectrum(&out, &solution)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_wave(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Wave {
        s,
        t_horizon,
        initial,
        impulse_at,
    } = params(cfg)?
    else {
        return Err(kind_mismatch("wave"));
    };
    let setup = diffusion_inputs(env, initial, impulse_at)?;
    let y = diffusion_input_spectrum(&setup.fh, &setup.fg, &setup.f1, setup.alpha, setup.beta)?;
    let solution =
        signals::wave_spectral_solution(&y, &setup.lambda, &setup.omega, *s, *t_horizon)?;
    let out = env.out_file("wave_spectrum.csv");
    io::write_spectrum(&out, &solution)?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_compactness(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    let ExperimentParams::Compactness {
        signal,
        s,
        impulse_at,
        percentile_step,
    } = params(cfg)?
    else {
        return Err(kind_mismatch("compactness"));
    };
    let (fh, fg) = cfg.factories()?;
    let (alpha, beta) = orders_or(cfg, (1.0, 1.0));
    let sig = match signal {
        Some(path) => io::read_signal(path)?,
        None => {
            // Self-contained default: a heat-diffusion history from an
            // impulse, one row per step.
            let graph = cfg.require_graph()?;
            let laplacian = graph.shift_matrix(ShiftKind::Laplacian)?;
            let at = impulse_at.unwrap_or(0);
            if at >= graph.n() {
                return Err(config_error(format!(
                    "impulse_at {at} out of range for {} vertices",
                    graph.n()
                )));
            }
            let f1 = CVector::from_fn(graph.n(), |i, _| {
                if i == at {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            heat_time_iteration(&laplacian, &f1, s.unwrap_or(0.1), fh.dim())?
        }
    };
    let spec = hgfrft(&sig, &fh.at_order(alpha)?, &fg.at_order(beta)?)?;
    let step = percentile_step.unwrap_or(5.0);
    if step.is_nan() || step <= 0.0 {
        return Err(config_error("percentile_step must be positive"));
    }
    let count = (100.0 / step).floor() as usize;
    let percentiles: Vec<f64> = (0..=count).map(|k| (k as f64 * step).min(100.0)).collect();
    let curve = energy_compactness(&spec, &percentiles)?;
    let mut text = String::from("percentile,error\n");
    for (p, e) in curve {
        text.push_str(&format!("{},{}\n", fmt_f64(p), fmt_f64(e)));
    }
    let out = env.out_file("compactness.csv");
    std::fs::write(&out, text).map_err(hgfrft_core::Error::from)?;
    println!("wrote {}", out.display());
    Ok(())
}

#[derive(Serialize)]
struct GraphReport {
    n: usize,
    directed: bool,
    edge_count: usize,
    connected: bool,
}

pub fn cmd_gen_graph(env: &CmdEnv) -> Result<(), CliError> {
    let cfg = env.config()?;
    if let Some(p) = &cfg.experiment {
        if !matches!(p, ExperimentParams::GenGraph {}) {
            return Err(kind_mismatch("gen-graph"));
        }
    }
    let graph = cfg.require_graph()?;
    let csv_path = env.out_file("graph.csv");
    std::fs::write(&csv_path, graph.to_edge_list_string()).map_err(hgfrft_core::Error::from)?;
    write_json(
        &env.out_file("graph.json"),
        &GraphReport {
            n: graph.n(),
            directed: graph.directed(),
            edge_count: graph.edges().len(),
            connected: graph.is_connected(),
        },
    )?;
    println!("wrote {}", csv_path.display());
    Ok(())
}

// ── helpers ─────────────────────────────────────────────────────────

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(hgfrft_core::Error::from)?;
    std::fs::write(path, text + "\n").map_err(hgfrft_core::Error::from)?;
    Ok(())
}
