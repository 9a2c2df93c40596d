//! The four experiments and the output writer.

use std::f64::consts::PI;
use std::path::PathBuf;

use chronon_core::dynamics::{
    evolve, init_packet, position_series, zb_decomposition, PacketMode, PacketSpec, SpinorMomentumField,
};
use chronon_core::gamma::{
    build_dirac_set, calibrate_orbital_sign, coordinate_rep, deformation_factor, extract_generators,
    rotation_covariance_check, solve_normalization, spin_spectrum, verify_clifford, verify_lorentz_algebra,
    Deformation, CLOSURE_TOL, EXACT_TOL,
};
use chronon_core::grid::GridSpec1D;
use chronon_core::series::{amplitude_at, measure_oscillation, sliding_average, TimeSeries};
use chronon_core::snyder::{
    coordinate_commutator_residual_2d, gaussian_1d, gaussian_2d, heisenberg_residual_1d, is_boundary_safe,
    refinement_is_monotone, RefinementPoint, COMMUTATOR_2D_TOL, HEISENBERG_TOL, RESIDUAL_FLOOR,
};
use chronon_core::PhysicalParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RunConfig};
use crate::plot::{render_line_plot, PlotSeries};
use crate::report::{fmt_num, Report, Status};
use crate::table::{Cell, Table};
use crate::RunError;

/// Tolerance for the a = 0 (canonical) Snyder residuals.
pub const CANONICAL_TOL: f64 = 1e-8;
/// Relative tolerance on the measured Zitterbewegung frequency.
pub const FREQUENCY_TOL: f64 = 0.01;
/// Required ratio of mixed to positive-only oscillation amplitude.
pub const DICHOTOMY_FACTOR: f64 = 1e6;
/// Relative tolerance on the one-Compton-time attenuation.
pub const ATTENUATION_TOL: f64 = 0.05;
/// Required suppression for a window of one full ZB period.
pub const PERIOD_SUPPRESSION: f64 = 100.0;
/// Relative tolerance of the averaged drift slope against ⟨c²pH⁻¹⟩.
pub const DRIFT_TOL: f64 = 1e-4;
/// Relative drift allowed in the norm over the long evolution.
pub const NORM_TOL: f64 = 1e-12;
/// Relative drift allowed in ⟨H⟩ over the long evolution.
pub const ENERGY_TOL: f64 = 1e-10;
/// Length of the conservation run, in Compton times.
pub const CONSERVATION_SPAN: f64 = 1000.0;
/// Center of the 2-D Gaussian test function.
pub const CENTER_2D: (f64, f64) = (1.0, -0.5);
/// Half-range of random momentum components, in units of mc.
pub const MOMENTUM_RANGE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

impl RunOutput {
    fn artifact(&mut self, name: &str, contents: String) {
        self.artifacts.push(Artifact {
            name: name.to_string(),
            contents,
        });
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.artifacts.iter().find(|a| a.name == name).map(|a| a.contents.as_str())
    }
}

/// Noise floor for oscillation detection: far below any physical ZB amplitude.
pub fn oscillation_noise_floor(params: &PhysicalParams) -> f64 {
    1e-9 * params.compton_wavelength() / 2.0
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    match cfg.command {
        Command::VerifyAlgebra => run_verify_algebra(cfg),
        Command::Snyder => run_snyder(cfg),
        Command::Zitterbewegung => run_zitterbewegung(cfg),
        Command::Averaging => run_averaging(cfg),
        Command::All => {
            let mut all = RunOutput::default();
            for run in [run_verify_algebra, run_snyder, run_zitterbewegung, run_averaging] {
                let out = run(cfg)?;
                all.report.extend(out.report);
                all.artifacts.extend(out.artifacts);
            }
            Ok(all)
        }
    }
}

fn spin_half_text(eigs: &[f64], hbar: f64) -> String {
    let minus = eigs.iter().filter(|&&e| (e + hbar / 2.0).abs() <= EXACT_TOL * hbar).count();
    let plus = eigs.iter().filter(|&&e| (e - hbar / 2.0).abs() <= EXACT_TOL * hbar).count();
    if minus == 2 && plus == 2 {
        "{−ℏ/2 ×2, +ℏ/2 ×2}".to_string()
    } else {
        let parts: Vec<String> = eigs.iter().map(|e| fmt_num(e / hbar)).collect();
        format!("{{{}}}ℏ", parts.join(", "))
    }
}

pub fn run_verify_algebra(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let p = cfg.params;
    let set = build_dirac_set(&p);
    let mut out = RunOutput::default();
    let r = &mut out.report;
    r.section("verify-algebra");

    for rel in verify_clifford(&set).relations {
        r.check(&rel.name, fmt_num(rel.residual), format!("≤ {}", fmt_num(rel.tolerance)), rel.passed());
    }

    let pc = p.m * p.c;
    let factor = deformation_factor(&p, pc, Deformation::Space);
    let expected = 1.0 + (p.a * pc / p.hbar).powi(2);
    let name = if p.a == 0.0 {
        "deformation factor (undeformed limit)"
    } else {
        "Compton deformation factor"
    };
    r.check(name, fmt_num(factor), fmt_num(expected), (factor - expected).abs() <= EXACT_TOL * expected);

    if p.a == 0.0 {
        for name in ["normalization", "spin spectrum", "Lorentz closure"] {
            r.skip(name, "undeformed limit");
        }
    } else {
        let fit = solve_normalization(&set, &p);
        r.check(
            "κ (spatial normalization)",
            format!("{}", fmt_num(fit.kappa.re)),
            "1/2",
            (fit.kappa - 0.5).norm() <= 1e-8,
        );
        r.check(
            "κ_t (temporal normalization)",
            format!("{}i", fmt_num(fit.kappa_t.im)),
            "±i/2",
            fit.kappa_t.re.abs() <= 1e-8 && (fit.kappa_t.im.abs() - 0.5).abs() <= 1e-8,
        );
        r.check(
            "normalization residual",
            fmt_num(fit.residual()),
            format!("≤ {}", fmt_num(CLOSURE_TOL)),
            fit.fits(),
        );
        let gens = extract_generators(&coordinate_rep(&set, &p, fit.kappa, fit.kappa_t));
        let spec = spin_spectrum(&gens)?;
        for (axis, eigs) in ["x", "y", "z"].iter().zip(&spec.eigenvalues) {
            let ok = spec.is_spin_half(p.hbar);
            r.check(
                format!("spin spectrum L{axis}"),
                spin_half_text(eigs, p.hbar),
                "{−ℏ/2 ×2, +ℏ/2 ×2}",
                ok,
            );
        }
        let boost = gens.m[0].distance(&set.gamma[1].scale_real(p.hbar / 2.0));
        r.info("boost generator Mx − (ℏ/2)γ¹", fmt_num(boost));
        let lorentz = verify_lorentz_algebra(&gens, p.hbar);
        for rel in &lorentz.report.relations {
            r.check(&rel.name, fmt_num(rel.residual), format!("≤ {}", fmt_num(rel.tolerance)), rel.passed());
        }
    }

    let sign = calibrate_orbital_sign(&set, &p);
    r.info("orbital action sign", sign.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst_total: f64 = 0.0;
    let mut worst_orbital_mismatch: f64 = 0.0;
    let mut min_orbital = f64::INFINITY;
    for _ in 0..cfg.momenta {
        let mom: [f64; 3] = std::array::from_fn(|_| rng.random_range(-MOMENTUM_RANGE..MOMENTUM_RANGE) * pc);
        for axis in 0..3 {
            let res = rotation_covariance_check(&set, &p, mom, axis);
            worst_total = worst_total.max(res.total / (p.hbar * p.c * pc));
            let perp = (0..3).filter(|&k| k != axis).map(|k| mom[k] * mom[k]).sum::<f64>().sqrt();
            let predicted = 2.0 * p.hbar * p.c * perp;
            worst_orbital_mismatch = worst_orbital_mismatch.max((res.orbital - predicted).abs() / (p.hbar * p.c * pc));
            if perp > 1e-3 * pc {
                min_orbital = min_orbital.min(res.orbital / (p.hbar * p.c * pc));
            }
        }
    }
    if cfg.momenta > 0 {
        r.check(
            format!("rotation covariance, {} momenta × 3 axes", cfg.momenta),
            fmt_num(worst_total),
            format!("≤ {} (units ℏc·mc)", fmt_num(EXACT_TOL)),
            worst_total <= EXACT_TOL,
        );
        r.check(
            "orbital-only residual vs 2ℏc|p⊥|",
            fmt_num(worst_orbital_mismatch),
            format!("≤ {}", fmt_num(EXACT_TOL)),
            worst_orbital_mismatch <= EXACT_TOL,
        );
        if min_orbital.is_finite() {
            r.check(
                "orbital-only residual (transverse momenta), minimum",
                fmt_num(min_orbital),
                "> 0",
                min_orbital > EXACT_TOL,
            );
        }
    } else {
        r.skip("rotation covariance", "no momenta requested");
    }
    Ok(out)
}

struct SnyderRow {
    check: &'static str,
    n: usize,
    residual: f64,
    safe: bool,
}

fn study_grids(base: &GridSpec1D) -> Vec<GridSpec1D> {
    [4, 2, 1]
        .iter()
        .filter_map(|&d| GridSpec1D::new(base.n() / d, base.p_max()).ok())
        .collect()
}

fn refinement_line(r: &mut Report, check: &str, rows: &[&SnyderRow]) {
    let pts: Vec<RefinementPoint> = rows
        .iter()
        .filter(|row| row.safe)
        .map(|row| RefinementPoint {
            n: row.n,
            residual: row.residual,
        })
        .collect();
    let name = format!("{check} grid refinement");
    let trail = pts.iter().map(|p| fmt_num(p.residual)).collect::<Vec<_>>().join(" → ");
    if pts.len() < 2 {
        r.line(name, "fewer than two resolved grids", "", Status::Info);
    } else {
        r.check(
            name,
            trail,
            format!("≥ 4× drop per doubling until {}", fmt_num(RESIDUAL_FLOOR)),
            refinement_is_monotone(&pts, RESIDUAL_FLOOR),
        );
    }
}

pub fn run_snyder(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let p = cfg.params;
    let canonical = p.a == 0.0;
    let mut rows = Vec::new();
    let mut lz_sign = None;

    for g in study_grids(&cfg.grid) {
        let f = gaussian_1d(&g, 0.0, 1.0);
        rows.push(SnyderRow {
            check: if canonical { "canonical-limit-1d" } else { "heisenberg-1d" },
            n: g.n(),
            residual: heisenberg_residual_1d(&g, &p, &f)?,
            safe: is_boundary_safe(&g, 0.0, 1.0),
        });
    }
    for g in study_grids(&cfg.grid_2d) {
        // Off-center so that L̂z f ≠ 0 and the bracket is actually probed.
        let (cx, cy) = CENTER_2D;
        let f = gaussian_2d(&g, (cx, cy), 1.0);
        let res = coordinate_commutator_residual_2d(&g, &p, &f)?;
        let safe = is_boundary_safe(&g, cx, 1.0) && is_boundary_safe(&g, cy, 1.0);
        if safe {
            lz_sign = Some(res.lz_sign);
        }
        rows.push(SnyderRow {
            check: if canonical { "canonical-limit-2d-xy" } else { "coordinate-2d-xy" },
            n: g.n(),
            residual: res.r_xy,
            safe,
        });
        rows.push(SnyderRow {
            check: if canonical { "canonical-limit-2d-mixed" } else { "mixed-2d" },
            n: g.n(),
            residual: res.r_mixed,
            safe,
        });
    }

    let mut out = RunOutput::default();
    let r = &mut out.report;
    r.section("snyder");
    let mut table = Table::new(&["check", "n", "a", "residual"]);
    for row in &rows {
        let tol = if canonical {
            CANONICAL_TOL
        } else if row.check == "heisenberg-1d" {
            HEISENBERG_TOL
        } else {
            COMMUTATOR_2D_TOL
        };
        let name = format!("{}, n={}, a={}", row.check, row.n, fmt_num(p.a));
        if row.safe {
            r.check(name, fmt_num(row.residual), format!("≤ {}", fmt_num(tol)), row.residual <= tol);
        } else {
            r.line(name, fmt_num(row.residual), "below minimum resolution", Status::Info);
        }
        table.push(vec![
            Cell::Text(row.check.to_string()),
            Cell::Int(row.n as u64),
            Cell::Num(p.a),
            Cell::Num(row.residual),
        ]);
    }
    let mut checks: Vec<&'static str> = Vec::new();
    for row in &rows {
        if !checks.contains(&row.check) {
            checks.push(row.check);
        }
    }
    for check in &checks {
        let these: Vec<&SnyderRow> = rows.iter().filter(|row| row.check == *check).collect();
        refinement_line(r, check, &these);
    }
    if let Some(s) = lz_sign.filter(|_| !canonical) {
        r.info("L̂z sign minimizing the 2-D bracket", if s > 0.0 { "+" } else { "-" });
    }
    out.artifact("snyder.csv", table.to_csv());

    if cfg.emit_plots {
        let curves: Vec<(&str, Vec<f64>, Vec<f64>)> = checks
            .iter()
            .map(|check| {
                let (xs, ys) = rows
                    .iter()
                    .filter(|row| row.check == *check)
                    .map(|row| ((row.n as f64).log2(), row.residual.max(1e-300).log10()))
                    .unzip();
                (*check, xs, ys)
            })
            .collect();
        let series: Vec<PlotSeries> = curves
            .iter()
            .map(|(label, xs, ys)| PlotSeries { label, xs, ys })
            .collect();
        out.artifact(
            "snyder.svg",
            render_line_plot("Snyder commutator residuals", "log2 n", "log10 residual", &series),
        );
    }
    Ok(out)
}

fn packet(cfg: &RunConfig, mode: PacketMode) -> Result<SpinorMomentumField, RunError> {
    let spec = PacketSpec {
        p0: cfg.packet.p0,
        sigma_p: cfg.packet.sigma_p,
        mode,
        spinor_seed: cfg.packet.spinor_seed,
    };
    Ok(init_packet(&cfg.packet_grid, &cfg.params, &spec)?)
}

fn oscillation_text(detected: bool, omega: f64, amplitude: f64) -> String {
    if detected {
        format!("ω = {}, amplitude = {}", fmt_num(omega), fmt_num(amplitude))
    } else {
        "no oscillation detected".to_string()
    }
}

fn series_csv(columns: &[(&str, &TimeSeries)], dt: f64) -> String {
    let base = columns[0].1;
    let mut header = vec!["t"];
    header.extend(columns.iter().map(|(name, _)| *name));
    let mut table = Table::new(&header);
    for (k, &t) in base.times().iter().enumerate() {
        let mut row = vec![Cell::Num(t)];
        for (_, s) in columns {
            let offset = ((s.times()[0] - base.times()[0]) / dt).round() as isize;
            let idx = k as isize - offset;
            row.push(if idx >= 0 && (idx as usize) < s.len() {
                Cell::Num(s.values()[idx as usize])
            } else {
                Cell::Text(String::new())
            });
        }
        table.push(row);
    }
    table.to_csv()
}

pub fn run_zitterbewegung(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let p = cfg.params;
    let mode = cfg.packet.mode;
    let field = packet(cfg, mode)?;
    let twin = packet(cfg, PacketMode::Positive)?;
    let (t_max, n) = (cfg.time.t_max, cfg.time.n_samples);
    let series = position_series(&field, t_max, n)?;
    let twin_series = position_series(&twin, t_max, n)?;
    let floor = oscillation_noise_floor(&p);
    let osc = measure_oscillation(&series, floor)?;
    let twin_osc = measure_oscillation(&twin_series, floor)?;

    let mut out = RunOutput::default();
    let r = &mut out.report;
    r.section("zitterbewegung");
    let bound = p.compton_wavelength() / 2.0;
    let label = format!("{mode} packet");
    if mode == PacketMode::Mixed {
        let omega0 = 2.0 * p.energy(cfg.packet.p0) / p.hbar;
        r.check(
            "ZB frequency",
            oscillation_text(osc.detected, osc.omega, osc.amplitude),
            format!("ω = {} ± 1%", fmt_num(omega0)),
            osc.detected && (osc.omega - omega0).abs() <= FREQUENCY_TOL * omega0,
        );
        r.check(
            "ZB amplitude",
            fmt_num(osc.amplitude),
            format!("≤ ℏ/(2mc) = {}", fmt_num(bound)),
            osc.detected && osc.amplitude <= bound,
        );
        r.check(
            "positive-energy twin",
            oscillation_text(twin_osc.detected, twin_osc.omega, twin_osc.amplitude),
            "no oscillation detected",
            !twin_osc.detected,
        );
        if osc.detected {
            let residual = amplitude_at(&twin_series, osc.omega);
            let ratio = osc.amplitude / residual;
            r.check(
                "mixed/positive amplitude ratio",
                fmt_num(ratio),
                format!("≥ {}", fmt_num(DICHOTOMY_FACTOR)),
                ratio >= DICHOTOMY_FACTOR,
            );
        }
    } else {
        r.check(
            format!("oscillation, {label}"),
            oscillation_text(osc.detected, osc.omega, osc.amplitude),
            "no oscillation detected",
            !osc.detected,
        );
    }

    let zb = zb_decomposition(&field, 0.0)?;
    r.info("drift velocity ⟨c²pH⁻¹⟩", fmt_num(zb.drift_rate));
    let late = evolve(&field, CONSERVATION_SPAN * p.compton_time());
    let norm_drift = (late.norm() - field.norm()).abs() / field.norm();
    let e0 = field.expect_energy();
    let energy_drift = (late.expect_energy() - e0).abs() / e0.abs().max(p.rest_energy());
    r.check(
        "norm drift over 1000 Compton times",
        fmt_num(norm_drift),
        format!("≤ {}", fmt_num(NORM_TOL)),
        norm_drift <= NORM_TOL,
    );
    r.check(
        "⟨H⟩ drift over 1000 Compton times",
        fmt_num(energy_drift),
        format!("≤ {}", fmt_num(ENERGY_TOL)),
        energy_drift <= ENERGY_TOL,
    );

    let col = format!("x_{mode}");
    out.artifact(
        "zitterbewegung.csv",
        series_csv(&[(&col, &series), ("x_positive", &twin_series)], series.spacing()),
    );
    if cfg.emit_plots {
        out.artifact(
            "zitterbewegung.svg",
            render_line_plot(
                "Position expectation",
                "t",
                "<x>",
                &[
                    PlotSeries { label: &label, xs: series.times(), ys: series.values() },
                    PlotSeries { label: "positive packet", xs: twin_series.times(), ys: twin_series.values() },
                ],
            ),
        );
    }
    Ok(out)
}

pub fn run_averaging(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let p = cfg.params;
    let field = packet(cfg, PacketMode::Mixed)?;
    let series = position_series(&field, cfg.time.t_max, cfg.time.n_samples)?;
    let dt = series.spacing();
    let omega = 2.0 * p.energy(cfg.packet.p0) / p.hbar;
    let compton_window = cfg.time.window;
    let period_window = PI * p.hbar / p.energy(cfg.packet.p0);
    for w in [compton_window, period_window] {
        if w < 2.0 * dt {
            return Err(RunError::Config(format!(
                "averaging window {} is shorter than two sample spacings ({})",
                fmt_num(w),
                fmt_num(2.0 * dt)
            )));
        }
    }
    let short = sliding_average(&series, compton_window)?;
    let full = sliding_average(&series, period_window)?;

    let ratio_on_own_span = |avg: &TimeSeries| {
        let times = avg.times();
        let raw = series.restricted(times[0], times[times.len() - 1]);
        amplitude_at(avg, omega) / amplitude_at(&raw, omega)
    };

    let mut out = RunOutput::default();
    let r = &mut out.report;
    r.section("averaging");
    let x = omega * compton_window / 2.0;
    let predicted = x.sin() / x;
    let attenuation = ratio_on_own_span(&short);
    r.check(
        format!("attenuation, window {}", fmt_num(compton_window)),
        fmt_num(attenuation),
        format!("{} ± 5%", fmt_num(predicted)),
        (attenuation - predicted).abs() <= ATTENUATION_TOL * predicted.abs(),
    );
    // Two half-width top-hats make a triangular kernel of the same width.
    let triangular = sliding_average(&sliding_average(&series, compton_window / 2.0)?, compton_window / 2.0);
    match triangular {
        Ok(tri) => r.info(
            "window-shape sensitivity (triangular kernel, same width)",
            format!("{} vs top-hat {}", fmt_num(ratio_on_own_span(&tri)), fmt_num(attenuation)),
        ),
        Err(_) => r.skip("window-shape sensitivity", "window too short to split"),
    }
    let suppression = 1.0 / ratio_on_own_span(&full);
    r.check(
        "suppression, one ZB period window",
        fmt_num(suppression),
        format!("≥ {}", fmt_num(PERIOD_SUPPRESSION)),
        suppression >= PERIOD_SUPPRESSION,
    );
    let drift = zb_decomposition(&field, 0.0)?.drift_rate;
    let (_, slope) = full.linear_fit();
    let name = "averaged drift slope vs ⟨c²pH⁻¹⟩";
    if cfg.packet.p0 == 0.0 {
        r.info(name, format!("{} vs {} (packet at rest)", fmt_num(slope), fmt_num(drift)));
    } else {
        r.check(
            name,
            fmt_num(slope),
            format!("{} (rel. {})", fmt_num(drift), fmt_num(DRIFT_TOL)),
            (slope - drift).abs() <= DRIFT_TOL * drift.abs(),
        );
    }

    out.artifact(
        "averaging.csv",
        series_csv(&[("x_raw", &series), ("x_avg_window", &short), ("x_avg_period", &full)], dt),
    );
    if cfg.emit_plots {
        out.artifact(
            "averaging.svg",
            render_line_plot(
                "Sliding average of the position expectation",
                "t",
                "<x>",
                &[
                    PlotSeries { label: "raw", xs: series.times(), ys: series.values() },
                    PlotSeries { label: "window", xs: short.times(), ys: short.values() },
                    PlotSeries { label: "one ZB period", xs: full.times(), ys: full.values() },
                ],
            ),
        );
    }
    Ok(out)
}

/// Writes report.txt, every artifact and manifest.txt into the output
/// directory. Returns the paths written.
pub fn write_outputs(cfg: &RunConfig, out: &RunOutput) -> Result<Vec<PathBuf>, RunError> {
    let dir = &cfg.output_dir;
    let io = |path: &PathBuf| {
        let path = path.clone();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut files: Vec<(String, String)> = vec![("report.txt".into(), out.report.to_string())];
    files.extend(out.artifacts.iter().map(|a| (a.name.clone(), a.contents.clone())));
    let mut names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
    names.push("manifest.txt".into());
    files.push(("manifest.txt".into(), cfg.manifest(&names)));
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(&name);
        std::fs::write(&path, contents).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}
