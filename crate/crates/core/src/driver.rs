//! Run orchestration: scenario construction from a [`SimConfig`], the
//! resolution sweeps and the longitudinal-ablation study, the iteration cost
//! model, and assembly of per-run reports and output files.

use crate::beam::{potential_exponential, BeamParams, VERTEX_PAIRS};
use crate::config::SimConfig;
use crate::dirac::{project_x, EnergySign, Polarization};
use crate::error::DriverError;
use crate::grid::{dft_forward, ComplexField2D, GridSpec, MomentumOffset};
use crate::output;
use crate::perturb::{accumulate, EngineOutput, ExecMode, Scenario, XiMode};
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

type C64 = Complex64;

/// Final-grid amplitudes projected onto the transverse-polarization basis
/// (positive-energy block), row-major `a * n_b + b`.
#[derive(Debug, Clone)]
pub struct XBasisPattern {
    pub n_a: usize,
    pub n_b: usize,
    pub kx0: f64,
    pub ky0: f64,
    pub dkx: f64,
    pub dky: f64,
    pub up: Vec<C64>,
    pub down: Vec<C64>,
}

impl XBasisPattern {
    pub fn k_x_at(&self, a: usize) -> f64 {
        self.kx0 + a as f64 * self.dkx
    }

    pub fn k_y_at(&self, b: usize) -> f64 {
        self.ky0 + b as f64 * self.dky
    }

    pub fn prob_up(&self, a: usize, b: usize) -> f64 {
        self.up[a * self.n_b + b].norm_sqr()
    }

    pub fn prob_down(&self, a: usize, b: usize) -> f64 {
        self.down[a * self.n_b + b].norm_sqr()
    }

    fn from_engine(out: &EngineOutput) -> Self {
        let g = &out.amplitudes;
        let mut up = Vec::with_capacity(g.n_a * g.n_b);
        let mut down = Vec::with_capacity(g.n_a * g.n_b);
        for a in 0..g.n_a {
            for b in 0..g.n_b {
                let (c0, c1) = g.pair(EnergySign::Positive, a, b);
                let (u, d) = project_x(c0, c1);
                up.push(u);
                down.push(d);
            }
        }
        XBasisPattern {
            n_a: g.n_a,
            n_b: g.n_b,
            kx0: g.offset.kappa_x,
            ky0: g.offset.kappa_y,
            dkx: g.dkx,
            dky: g.dky,
            up,
            down,
        }
    }
}

/// Summary of one run. `max_*` are the normalized-transform probabilities;
/// `max_*_unnormalized` carry the extra `(n_x n_y)^2` amplitude factor of the
/// unnormalized-transform convention used by the reference tabulation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub n_x: usize,
    pub n_y: usize,
    pub x_w_lambda: f64,
    pub y_w_lambda: f64,
    pub max_up: f64,
    pub max_down: f64,
    pub max_up_unnormalized: f64,
    pub max_down_unnormalized: f64,
    pub argmax_up: (usize, usize),
    pub argmax_down: (usize, usize),
    pub flip_ratio: f64,
    pub iterations: u64,
    pub expected_iterations: u64,
    pub wall_time_s: f64,
    pub per_contribution_us: f64,
    pub guard_activations: u64,
    pub gamma_prime_positive_total: f64,
    pub gamma_prime_negative_total: f64,
}

/// Conversion factor from normalized-transform probabilities to the
/// unnormalized-transform convention: `(n_x n_y)^2` per amplitude, squared.
pub fn unnormalized_scale(n_x: usize, n_y: usize) -> f64 {
    ((n_x * n_y) as f64).powi(4)
}

pub fn build_scenario(cfg: &SimConfig) -> Result<Scenario, DriverError> {
    cfg.validate()?;
    let beam = BeamParams::new(
        cfg.g0,
        cfg.k_l,
        cfg.eps,
        cfg.t_pulse,
        cfg.include_longitudinal,
    );
    let lambda = beam.wavelength();
    let (xw, yw) = (cfg.x_w_lambda * lambda, cfg.y_w_lambda * lambda);
    let spec = GridSpec::new(cfg.n_x, cfg.n_y, -xw / 2.0, -yw / 2.0, xw, yw)?;
    Ok(Scenario::new(
        spec,
        beam,
        cfg.k0,
        cfg.compute_negative_final,
    ))
}

/// Total index-tuple count `4 (4 n_D)^{n_p} (prod dims)^{n_p + n_I}` for
/// `n_p` interaction vertices, `n_I` extra state grids, and `n_D` Dirac
/// solution labels per momentum.
pub fn count_iterations(n_d: u64, n_p: u32, n_i: u32, dims: &[usize]) -> u64 {
    let grid: u64 = dims.iter().map(|&n| n as u64).product();
    4 * (4 * n_d).pow(n_p) * grid.pow(n_p + n_i)
}

/// Loop-iteration count of one run after fixing the initial and final energy
/// signs and the photon-index pairing: `2^7 n_x^2 n_y^2` (doubled when the
/// negative-energy final block is requested).
pub fn scenario_count(cfg: &SimConfig) -> u64 {
    let base = 128 * (cfg.n_x as u64).pow(2) * (cfg.n_y as u64).pow(2);
    if cfg.compute_negative_final {
        2 * base
    } else {
        base
    }
}

#[derive(Debug)]
pub struct SimOutcome {
    pub pattern: XBasisPattern,
    pub engine: EngineOutput,
    pub report: RunReport,
}

/// Runs the full second-order calculation for one config, without touching
/// the filesystem.
pub fn simulate(cfg: &SimConfig) -> Result<SimOutcome, DriverError> {
    let scenario = build_scenario(cfg)?;
    let fields = crate::beam::build_vertex_fields(scenario.spec, &scenario.beam)?;
    let exec = if cfg.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel {
            workers: cfg.workers,
        }
    };
    let start = Instant::now();
    let engine = accumulate(&scenario, &fields, exec, XiMode::ClosedForm);
    let wall = start.elapsed().as_secs_f64();
    let pattern = XBasisPattern::from_engine(&engine);

    let mut max_up = 0.0f64;
    let mut max_down = 0.0f64;
    let mut argmax_up = (0, 0);
    let mut argmax_down = (0, 0);
    for a in 0..pattern.n_a {
        for b in 0..pattern.n_b {
            let pu = pattern.prob_up(a, b);
            let pd = pattern.prob_down(a, b);
            if pu > max_up {
                max_up = pu;
                argmax_up = (a, b);
            }
            if pd > max_down {
                max_down = pd;
                argmax_down = (a, b);
            }
        }
    }
    let scale = unnormalized_scale(cfg.n_x, cfg.n_y);
    let expected = scenario_count(cfg);
    let report = RunReport {
        n_x: cfg.n_x,
        n_y: cfg.n_y,
        x_w_lambda: cfg.x_w_lambda,
        y_w_lambda: cfg.y_w_lambda,
        max_up,
        max_down,
        max_up_unnormalized: max_up * scale,
        max_down_unnormalized: max_down * scale,
        argmax_up,
        argmax_down,
        flip_ratio: max_down / max_up,
        iterations: engine.contributions,
        expected_iterations: expected,
        wall_time_s: wall,
        per_contribution_us: wall * 1e6 / engine.contributions as f64,
        guard_activations: engine.guard_activations,
        gamma_prime_positive_total: engine.gamma_pos_total,
        gamma_prime_negative_total: engine.gamma_neg_total,
    };
    debug_assert_eq!(report.iterations, report.expected_iterations);
    Ok(SimOutcome {
        pattern,
        engine,
        report,
    })
}

fn write_run_outputs(dir: &Path, cfg: &SimConfig, outcome: &SimOutcome) -> Result<(), DriverError> {
    std::fs::create_dir_all(dir).map_err(|source| DriverError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    output::write_text(&dir.join("config.resolved"), &cfg.resolved_text())?;
    output::write_pattern_csv(&dir.join("pattern_up.csv"), &outcome.pattern, true)?;
    output::write_pattern_csv(&dir.join("pattern_down.csv"), &outcome.pattern, false)?;
    output::write_pattern_bin(&dir.join("pattern.bin"), &outcome.pattern)?;
    output::write_json(&dir.join("report.json"), &outcome.report)?;
    let p = &outcome.pattern;
    let (rows, cols) = (p.n_a, p.n_b);
    let up: Vec<f64> = (0..rows * cols).map(|i| p.up[i].norm_sqr()).collect();
    let down: Vec<f64> = (0..rows * cols).map(|i| p.down[i].norm_sqr()).collect();
    output::write_ppm(&dir.join("heat_up_linear.ppm"), &up, rows, cols, 0.0)?;
    output::write_ppm(&dir.join("heat_up_log.ppm"), &up, rows, cols, 1e-12)?;
    output::write_ppm(&dir.join("heat_down_linear.ppm"), &down, rows, cols, 0.0)?;
    output::write_ppm(&dir.join("heat_down_log.ppm"), &down, rows, cols, 1e-12)?;
    Ok(())
}

/// One simulation plus its full output directory.
pub fn run(cfg: &SimConfig) -> Result<SimOutcome, DriverError> {
    let outcome = simulate(cfg)?;
    write_run_outputs(&cfg.out_dir, cfg, &outcome)?;
    Ok(outcome)
}

/// Rectangular momentum window, used to compare runs of different resolution
/// on the region they share.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Window {
    pub kx_min: f64,
    pub kx_max: f64,
    pub ky_min: f64,
    pub ky_max: f64,
}

/// The full final-grid extent of a config (the reference sweep window).
pub fn final_window(cfg: &SimConfig) -> Result<Window, DriverError> {
    let scenario = build_scenario(cfg)?;
    let g = &scenario.spec;
    let eps = 1e-9; // absorb roundoff at the window edge
    Ok(Window {
        kx_min: scenario.kappa_pp.kappa_x - eps,
        kx_max: scenario.kappa_pp.kappa_x + 2.0 * g.momentum_width_x() + eps,
        ky_min: scenario.kappa_pp.kappa_y - eps,
        ky_max: scenario.kappa_pp.kappa_y + 2.0 * g.momentum_width_y() + eps,
    })
}

impl Window {
    pub fn contains(&self, kx: f64, ky: f64) -> bool {
        kx >= self.kx_min && kx <= self.kx_max && ky >= self.ky_min && ky <= self.ky_max
    }
}

/// Per-spin maxima restricted to a momentum window.
pub fn window_max(pattern: &XBasisPattern, window: &Window) -> (f64, f64) {
    let mut up = 0.0f64;
    let mut down = 0.0f64;
    for a in 0..pattern.n_a {
        for b in 0..pattern.n_b {
            if window.contains(pattern.k_x_at(a), pattern.k_y_at(b)) {
                up = up.max(pattern.prob_up(a, b));
                down = down.max(pattern.prob_down(a, b));
            }
        }
    }
    (up, down)
}

/// Peak-normalized bin-wise deviation of two patterns over a shared window,
/// sampling `other` at the nearest momentum bin of `reference`. Returns the
/// maximum deviation (in units of the window peak) per spin.
pub fn shape_deviation(
    reference: &XBasisPattern,
    other: &XBasisPattern,
    window: &Window,
) -> (f64, f64) {
    let (ref_up, ref_down) = window_max(reference, window);
    let (oth_up, oth_down) = window_max(other, window);
    let mut dev_up = 0.0f64;
    let mut dev_down = 0.0f64;
    for a in 0..reference.n_a {
        for b in 0..reference.n_b {
            let (kx, ky) = (reference.k_x_at(a), reference.k_y_at(b));
            if !window.contains(kx, ky) {
                continue;
            }
            let oa = ((kx - other.kx0) / other.dkx).round();
            let ob = ((ky - other.ky0) / other.dky).round();
            if oa < 0.0 || ob < 0.0 || oa as usize >= other.n_a || ob as usize >= other.n_b {
                continue;
            }
            let (oa, ob) = (oa as usize, ob as usize);
            dev_up = dev_up
                .max((reference.prob_up(a, b) / ref_up - other.prob_up(oa, ob) / oth_up).abs());
            dev_down = dev_down.max(
                (reference.prob_down(a, b) / ref_down - other.prob_down(oa, ob) / oth_down).abs(),
            );
        }
    }
    (dev_up, dev_down)
}

/// One sweep entry: the run report plus maxima restricted to the shared
/// reference window.
#[derive(Debug, Serialize)]
pub struct SweepRun {
    pub report: RunReport,
    pub window_max_up: f64,
    pub window_max_down: f64,
    pub window_max_up_unnormalized: f64,
    pub window_max_down_unnormalized: f64,
}

fn sweep_entry(cfg: &SimConfig, window: &Window) -> Result<(SweepRun, XBasisPattern), DriverError> {
    let outcome = run(cfg)?;
    let (wu, wd) = window_max(&outcome.pattern, window);
    let scale = unnormalized_scale(cfg.n_x, cfg.n_y);
    Ok((
        SweepRun {
            report: outcome.report,
            window_max_up: wu,
            window_max_down: wd,
            window_max_up_unnormalized: wu * scale,
            window_max_down_unnormalized: wd * scale,
        },
        outcome.pattern,
    ))
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub window: Window,
    pub runs: Vec<SweepRun>,
    /// peak-normalized bin-wise deviation of each run against the first,
    /// over the shared window, per spin
    pub shape_deviation_up: Vec<f64>,
    pub shape_deviation_down: Vec<f64>,
}

fn run_sweep(
    base: &SimConfig,
    label: &str,
    configs: Vec<SimConfig>,
) -> Result<SweepReport, DriverError> {
    let window = final_window(base)?;
    let mut runs = Vec::new();
    let mut patterns = Vec::new();
    for cfg in &configs {
        let (entry, pattern) = sweep_entry(cfg, &window)?;
        runs.push(entry);
        patterns.push(pattern);
    }
    let mut dev_up = Vec::new();
    let mut dev_down = Vec::new();
    for p in &patterns {
        let (du, dd) = shape_deviation(&patterns[0], p, &window);
        dev_up.push(du);
        dev_down.push(dd);
    }
    let report = SweepReport {
        label: label.to_string(),
        window,
        runs,
        shape_deviation_up: dev_up,
        shape_deviation_down: dev_down,
    };
    std::fs::create_dir_all(&base.out_dir).map_err(|source| DriverError::Io {
        path: base.out_dir.clone(),
        source,
    })?;
    output::write_json(&base.out_dir.join(format!("{label}.json")), &report)?;
    Ok(report)
}

/// Quadruples the transverse grid resolution at a fixed box: n_y in
/// {15, 31, 63, 127}, y_w unchanged.
pub fn sweep_y_position(base: &SimConfig) -> Result<SweepReport, DriverError> {
    let configs = [15usize, 31, 63, 127]
        .into_iter()
        .map(|ny| {
            let mut cfg = base.clone();
            cfg.n_y = ny;
            cfg.out_dir = base.out_dir.join(format!("ny_{ny}"));
            cfg
        })
        .collect();
    run_sweep(base, "sweep_y_position", configs)
}

/// Refines the transverse momentum grid: n_y = 2^g - 1 paired with
/// y_w = 10 lambda 2^{g-3}, keeping the momentum box approximately fixed.
pub fn sweep_y_momentum(base: &SimConfig) -> Result<SweepReport, DriverError> {
    let configs = (4u32..=7)
        .map(|g| {
            let mut cfg = base.clone();
            cfg.n_y = (1usize << g) - 1;
            cfg.y_w_lambda = 10.0 * f64::powi(2.0, g as i32 - 3);
            cfg.out_dir = base
                .out_dir
                .join(format!("ny_{}_yw_{}", cfg.n_y, cfg.y_w_lambda));
            cfg
        })
        .collect();
    run_sweep(base, "sweep_y_momentum", configs)
}

/// One panel of the longitudinal-resolution triangle.
#[derive(Debug, Serialize)]
pub struct TrianglePanel {
    pub row: u32,
    pub col: u32,
    pub n_x: usize,
    pub x_w_lambda: f64,
    pub report: RunReport,
}

/// Varies n_x = 2^g - 1 (rows, g in 4..=7) against the box width
/// x_w = 10 lambda 2^{g-6+c} (columns c, rightmost c = 3), covering the
/// lower-right triangle where the position-space spacing stays resolvable.
/// Results vary strongly across panels; they are reported, not asserted.
pub fn sweep_x(base: &SimConfig) -> Result<Vec<TrianglePanel>, DriverError> {
    let mut panels = Vec::new();
    for g in 4u32..=7 {
        for c in (7 - g)..=3 {
            let mut cfg = base.clone();
            cfg.n_x = (1usize << g) - 1;
            cfg.x_w_lambda = 10.0 * f64::powi(2.0, g as i32 - 6 + c as i32);
            cfg.out_dir = base
                .out_dir
                .join(format!("nx_{}_xw_{}", cfg.n_x, cfg.x_w_lambda));
            let outcome = run(&cfg)?;
            panels.push(TrianglePanel {
                row: g,
                col: c,
                n_x: cfg.n_x,
                x_w_lambda: cfg.x_w_lambda,
                report: outcome.report,
            });
        }
    }
    std::fs::create_dir_all(&base.out_dir).map_err(|source| DriverError::Io {
        path: base.out_dir.clone(),
        source,
    })?;
    output::write_json(&base.out_dir.join("sweep_x.json"), &panels)?;
    Ok(panels)
}

#[derive(Debug, Serialize)]
pub struct AblationReport {
    pub with_longitudinal: RunReport,
    pub without_longitudinal: RunReport,
    pub rel_diff_up: f64,
    pub rel_diff_down: f64,
}

/// Repeats the run with the longitudinal field component zeroed and reports
/// the relative change of both spin maxima.
pub fn ablate_longitudinal(base: &SimConfig) -> Result<AblationReport, DriverError> {
    let mut with_cfg = base.clone();
    with_cfg.include_longitudinal = true;
    with_cfg.out_dir = base.out_dir.join("with_longitudinal");
    let mut without_cfg = base.clone();
    without_cfg.include_longitudinal = false;
    without_cfg.out_dir = base.out_dir.join("without_longitudinal");
    let with_run = run(&with_cfg)?;
    let without_run = run(&without_cfg)?;
    let report = AblationReport {
        rel_diff_up: (with_run.report.max_up - without_run.report.max_up).abs()
            / with_run.report.max_up,
        rel_diff_down: (with_run.report.max_down - without_run.report.max_down).abs()
            / with_run.report.max_down,
        with_longitudinal: with_run.report,
        without_longitudinal: without_run.report,
    };
    std::fs::create_dir_all(&base.out_dir).map_err(|source| DriverError::Io {
        path: base.out_dir.clone(),
        source,
    })?;
    output::write_json(&base.out_dir.join("ablation.json"), &report)?;
    Ok(report)
}

/// Writes illustration dumps of the beam: the physical field on a wide
/// 1024x128 display grid (position space and its transform on a symmetric
/// momentum frame) and the vertex tables on the run grid.
pub fn field_dump(cfg: &SimConfig) -> Result<(), DriverError> {
    let beam = BeamParams::new(
        cfg.g0,
        cfg.k_l,
        cfg.eps,
        cfg.t_pulse,
        cfg.include_longitudinal,
    );
    let lambda = beam.wavelength();
    let dir = cfg.out_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|source| DriverError::Io {
        path: dir.clone(),
        source,
    })?;

    // wide display grid over [-20 lambda, 20 lambda]^2
    let (n_x, n_y) = (1024usize, 128usize);
    let width = 40.0 * lambda;
    let spec = GridSpec::new_any_parity(n_x, n_y, -width / 2.0, -width / 2.0, width, width)?;
    let symmetric = MomentumOffset::new(
        -spec.momentum_width_x() / 2.0,
        -spec.momentum_width_y() / 2.0,
    );
    for j in Polarization::BOTH {
        // physical field: sum of the two admissible exponential components
        let field = ComplexField2D::from_position_fn(spec, |x, y| {
            VERTEX_PAIRS
                .iter()
                .map(|&(d, o)| potential_exponential(j, d, o, x, y, &beam, true))
                .sum()
        });
        let name = match j {
            Polarization::X => "ax",
            Polarization::Y => "ay",
        };
        let re: Vec<f64> = field.values.iter().map(|c| c.re).collect();
        output::write_field_csv(
            &dir.join(format!("position_{name}_re.csv")),
            "m,n,x,y,re",
            |m, n| (spec.x_at(m), spec.y_at(n)),
            |m, n| field.values[[m, n]].re,
            n_x,
            n_y,
        )?;
        output::write_signed_ppm(&dir.join(format!("position_{name}_re.ppm")), &re, n_x, n_y)?;

        let transformed = dft_forward(&field, symmetric)?;
        let mag: Vec<f64> = transformed.values.iter().map(|c| c.norm()).collect();
        output::write_field_csv(
            &dir.join(format!("momentum_{name}_abs.csv")),
            "a,b,k_x,k_y,abs",
            |a, b| (symmetric.k_x_at(&spec, a), symmetric.k_y_at(&spec, b)),
            |a, b| transformed.values[[a, b]].norm(),
            n_x,
            n_y,
        )?;
        output::write_ppm(
            &dir.join(format!("momentum_{name}_abs.ppm")),
            &mag,
            n_x,
            n_y,
            0.0,
        )?;
    }

    // vertex tables on the run grid with the peak-centered offset
    let scenario = build_scenario(cfg)?;
    let fields = crate::beam::build_vertex_fields(scenario.spec, &scenario.beam)?;
    for (pair, &(d, o)) in VERTEX_PAIRS.iter().enumerate() {
        for j in Polarization::BOTH {
            let name = match j {
                Polarization::X => "ax",
                Polarization::Y => "ay",
            };
            let table = &fields.tables[pair][j.index()];
            output::write_field_csv(
                &dir.join(format!("vertex_{name}_d{d:+}_o{o:+}.csv")),
                "a,b,k_x,k_y,abs",
                |a, b| {
                    (
                        fields.offset.k_x_at(&scenario.spec, a),
                        fields.offset.k_y_at(&scenario.spec, b),
                    )
                },
                |a, b| table.values[[a, b]].norm(),
                cfg.n_x,
                cfg.n_y,
            )?;
        }
    }
    Ok(())
}
