//! Implementations of the subcommands: resolve flags against config files and
//! defaults, build the requested dataset, re-validate it, and emit it.

use crate::config::{resolve_tol, ConfigMap};
use crate::output::{
    check_report_ranges, emit, parse_format, screen_csv, screen_json, sweep_csv, sweep_json,
    trajectory_csv, trajectory_json, EvolveMeta, OutputFormat, ScreenMeta, SweepMeta, SweepRow,
};
use crate::{CliError, EvolveArgs, FigureArgs, ReportArgs, ScreenArgs, SweepArgs, ValidateChannelArgs};
use duality_core::channels::{ChannelModel, EvolutionMethod, EvolutionSpec};
use duality_core::duality::{
    distinguishability, report, screen_intensity, visibility, PathLengths, ScreenGeometry,
};
use duality_core::linspace;
use duality_core::state::{
    from_pure, psi1, psi2, psi_mixed, validate, werner, CoherencePolarizationMatrix,
};
use std::path::PathBuf;

const SWEEP_DEFAULT_SAMPLES: usize = 201;
const EVOLVE_DEFAULT_STEPS: usize = 200;
const EVOLVE_DEFAULT_N: usize = 1024;
const SCREEN_DEFAULT_K: f64 = 1e6;
const SCREEN_DEFAULT_D: f64 = 1e-3;
const SCREEN_DEFAULT_L: f64 = 1.0;
const SCREEN_DEFAULT_SAMPLES: usize = 10_000;

/// Builtin state names accepted by `--builtin`.
fn build_builtin(
    name: &str,
    a: Option<f64>,
    b: Option<f64>,
    eta: Option<f64>,
) -> Result<CoherencePolarizationMatrix, CliError> {
    let need = |flag: &str, v: Option<f64>| {
        v.ok_or_else(|| CliError::usage(format!("builtin '{name}' requires --{flag}")))
    };
    let reject = |flag: &str, v: Option<f64>| {
        if v.is_some() {
            Err(CliError::usage(format!(
                "builtin '{name}' does not take --{flag}"
            )))
        } else {
            Ok(())
        }
    };
    match name {
        "psi1" => {
            reject("b", b)?;
            reject("eta", eta)?;
            Ok(from_pure(&psi1(need("a", a)?)?)?)
        }
        "psi2" => {
            reject("eta", eta)?;
            Ok(from_pure(&psi2(need("a", a)?, need("b", b)?)?)?)
        }
        "werner" => {
            reject("a", a)?;
            reject("b", b)?;
            Ok(werner(need("eta", eta)?)?)
        }
        "psi-mixed" => {
            reject("a", a)?;
            reject("b", b)?;
            reject("eta", eta)?;
            Ok(from_pure(&psi_mixed())?)
        }
        "mixed-identity" => {
            reject("a", a)?;
            reject("b", b)?;
            reject("eta", eta)?;
            Ok(CoherencePolarizationMatrix::maximally_mixed())
        }
        other => Err(CliError::usage(format!(
            "unknown builtin state '{other}' \
             (expected psi1, psi2, werner, psi-mixed or mixed-identity)"
        ))),
    }
}

/// Resolve a state source into (state, label). File states are validated;
/// a failing state prints its ValidationReport to stderr and exits with 2.
#[allow(clippy::too_many_arguments)]
fn load_state(
    builtin: Option<String>,
    file: Option<PathBuf>,
    a: Option<f64>,
    b: Option<f64>,
    eta: Option<f64>,
    tol: f64,
    default_builtin: Option<&str>,
) -> Result<(CoherencePolarizationMatrix, String), CliError> {
    match (builtin, file) {
        (Some(_), Some(_)) => Err(CliError::usage(
            "--builtin and --file are mutually exclusive".into(),
        )),
        (Some(name), None) => {
            let rho = build_builtin(&name, a, b, eta)?;
            Ok((rho, name))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::usage(format!("cannot read {}: {e}", path.display()))
            })?;
            let (rho, label) = duality_core::io::state_from_json(&text)?;
            let label = label.unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let report = validate(&rho, tol)?;
            if !report.is_valid {
                eprintln!(
                    "{}",
                    serde_json::to_string(&report).expect("report serializes")
                );
                return Err(CliError::validation(format!(
                    "state '{label}' failed validation"
                )));
            }
            Ok((rho, label))
        }
        (None, None) => match default_builtin {
            Some(name) => {
                let rho = build_builtin(name, a, b, eta)?;
                Ok((rho, name.to_owned()))
            }
            None => Err(CliError::usage(
                "a state source is required: --builtin NAME or --file PATH".into(),
            )),
        },
    }
}

pub fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let allowed = [
        "builtin", "file", "a", "b", "eta", "out", "format", "tol", "seed",
    ];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let tol = resolve_tol(args.tol, &cfg)?;
    let builtin = args.builtin.or(cfg.string("builtin")?);
    let file = args.file.or(cfg.string("file")?.map(PathBuf::from));
    let a = args.a.or(cfg.f64("a")?);
    let b = args.b.or(cfg.f64("b")?);
    let eta = args.eta.or(cfg.f64("eta")?);
    let format = match args.format.or(cfg.string("format")?) {
        Some(s) => parse_format(&s)?,
        None => OutputFormat::Json,
    };
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));

    let (rho, label) = load_state(builtin, file, a, b, eta, tol, None)?;
    let rep = report(&rho, tol)?;
    check_report_ranges(&rep, tol)?;

    let content = match format {
        OutputFormat::Json => {
            let mut s = duality_core::io::report_to_json(&rep, Some(&label));
            s.push('\n');
            s
        }
        OutputFormat::Csv => format!(
            "{}\n{}\n",
            duality_core::io::REPORT_CSV_HEADER,
            duality_core::io::report_csv_row(&rep, Some(&label))
        ),
    };
    emit(out.as_ref(), &content)
}

/// Shared by `sweep` and the figure 2-4 aliases.
pub fn run_sweep(
    family: &str,
    b_fixed: Option<f64>,
    samples: usize,
    tol: f64,
    format: OutputFormat,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::usage(format!(
            "sweep needs at least 2 samples, got {samples}"
        )));
    }
    let param = match family {
        "psi1" | "psi2" => "a",
        "werner" => "eta",
        other => {
            return Err(CliError::usage(format!(
                "unknown sweep family '{other}' (expected psi1, psi2 or werner)"
            )))
        }
    };
    if family == "psi2" && b_fixed.is_none() {
        return Err(CliError::usage("sweep over psi2 requires --b".into()));
    }
    if family != "psi2" && b_fixed.is_some() {
        return Err(CliError::usage(format!(
            "--b does not apply to the {family} family"
        )));
    }

    let grid = linspace(0.0, 1.0, samples);
    let mut rows = Vec::with_capacity(samples);
    for &x in &grid {
        let rho = match family {
            "psi1" => from_pure(&psi1(x)?)?,
            "psi2" => from_pure(&psi2(x, b_fixed.unwrap())?)?,
            _ => werner(x)?,
        };
        let v = visibility(&rho);
        let d = distinguishability(&rho)?;
        if !(-tol..=1.0 + tol).contains(&v) || !(-tol..=1.0 + tol).contains(&d) {
            return Err(CliError::usage(format!(
                "internal error: sweep row at {param} = {x} violates range invariants"
            )));
        }
        rows.push(SweepRow {
            a: (param == "a").then_some(x),
            eta: (param == "eta").then_some(x),
            V: v,
            D: d,
            D2_plus_V2: d * d + v * v,
        });
    }

    let meta = SweepMeta {
        family: family.to_owned(),
        param,
        start: 0.0,
        stop: 1.0,
        samples,
        b: b_fixed,
    };
    let content = match format {
        OutputFormat::Csv => sweep_csv(&meta, &rows),
        OutputFormat::Json => sweep_json(&meta, &rows),
    };
    emit(out, &content)
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let allowed = ["builtin", "b", "samples", "out", "format", "tol", "seed", "config"];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let tol = resolve_tol(args.tol, &cfg)?;
    let family = args
        .builtin
        .or(cfg.string("builtin")?)
        .ok_or_else(|| CliError::usage("sweep requires --builtin <psi1|psi2|werner>".into()))?;
    let b = args.b.or(cfg.f64("b")?);
    let samples = args
        .samples
        .or(cfg.usize("samples")?)
        .unwrap_or(SWEEP_DEFAULT_SAMPLES);
    let format = match args.format.or(cfg.string("format")?) {
        Some(s) => parse_format(&s)?,
        None => OutputFormat::Csv,
    };
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));
    run_sweep(&family, b, samples, tol, format, out.as_ref())
}

/// Shared by `evolve` and the figure 5-6 aliases.
pub struct EvolveParams {
    pub model: ChannelModel,
    pub gamma: f64,
    pub t_max: f64,
    pub steps: usize,
    pub method: EvolutionMethod,
    pub n: usize,
    pub initial: CoherencePolarizationMatrix,
    pub initial_label: String,
    pub tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

pub fn run_evolve(p: EvolveParams) -> Result<(), CliError> {
    if p.steps < 2 {
        return Err(CliError::usage(format!(
            "evolve needs at least 2 grid points, got {}",
            p.steps
        )));
    }
    let spec = EvolutionSpec {
        model: p.model,
        gamma_rate: p.gamma,
        t_grid: linspace(0.0, p.t_max, p.steps),
        method: p.method,
        n_steps: if p.method == EvolutionMethod::Iterated {
            p.n
        } else {
            0
        },
    };
    let points = duality_core::channels::trajectory(&p.initial, &spec, p.tol)?;
    for (_, rep) in &points {
        check_report_ranges(rep, p.tol)?;
    }

    let meta = EvolveMeta {
        model: p.model.name().to_owned(),
        gamma: p.gamma,
        method: p.method.name().to_owned(),
        n: spec.n_steps,
        initial: p.initial_label,
        t_max: p.t_max,
        steps: p.steps,
        tol: p.tol,
    };
    let content = match p.format {
        OutputFormat::Csv => trajectory_csv(&meta, &points),
        OutputFormat::Json => trajectory_json(&meta, &points),
    };
    emit(p.out.as_ref(), &content)
}

fn parse_model(s: &str) -> Result<ChannelModel, CliError> {
    match s {
        "dephasing" => Ok(ChannelModel::Dephasing),
        "scattering" => Ok(ChannelModel::Scattering),
        other => Err(CliError::usage(format!(
            "unknown model '{other}' (expected dephasing or scattering)"
        ))),
    }
}

fn parse_method(s: &str) -> Result<EvolutionMethod, CliError> {
    match s {
        "closed" => Ok(EvolutionMethod::ClosedForm),
        "iterated" => Ok(EvolutionMethod::Iterated),
        other => Err(CliError::usage(format!(
            "unknown method '{other}' (expected closed or iterated)"
        ))),
    }
}

pub fn cmd_evolve(args: EvolveArgs) -> Result<(), CliError> {
    let allowed = [
        "builtin", "file", "a", "b", "eta", "model", "gamma", "t-max", "steps", "method", "n",
        "out", "format", "tol", "seed",
    ];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let tol = resolve_tol(args.tol, &cfg)?;
    let model = parse_model(
        &args
            .model
            .or(cfg.string("model")?)
            .ok_or_else(|| CliError::usage("evolve requires --model <dephasing|scattering>".into()))?,
    )?;
    let gamma = args.gamma.or(cfg.f64("gamma")?).unwrap_or(1.0);
    if gamma.is_nan() || gamma < 0.0 {
        return Err(CliError::usage(format!("gamma must be >= 0, got {gamma}")));
    }
    let t_max = args
        .t_max
        .or(cfg.f64("t-max")?)
        .unwrap_or_else(|| if gamma > 0.0 { 5.0 / gamma } else { 5.0 });
    let steps = args
        .steps
        .or(cfg.usize("steps")?)
        .unwrap_or(EVOLVE_DEFAULT_STEPS);
    let method = match args.method.or(cfg.string("method")?) {
        Some(s) => parse_method(&s)?,
        None => EvolutionMethod::ClosedForm,
    };
    let n = args.n.or(cfg.usize("n")?).unwrap_or(EVOLVE_DEFAULT_N);
    let format = match args.format.or(cfg.string("format")?) {
        Some(s) => parse_format(&s)?,
        None => OutputFormat::Csv,
    };
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));

    let builtin = args.builtin.or(cfg.string("builtin")?);
    let file = args.file.or(cfg.string("file")?.map(PathBuf::from));
    let a = args.a.or(cfg.f64("a")?);
    let b = args.b.or(cfg.f64("b")?);
    let eta = args.eta.or(cfg.f64("eta")?);
    let (initial, initial_label) =
        load_state(builtin, file, a, b, eta, tol, Some("psi-mixed"))?;

    run_evolve(EvolveParams {
        model,
        gamma,
        t_max,
        steps,
        method,
        n,
        initial,
        initial_label,
        tol,
        format,
        out,
    })
}

pub fn cmd_screen(args: ScreenArgs) -> Result<(), CliError> {
    let allowed = [
        "builtin", "file", "a", "b", "eta", "k", "d", "L", "x-min", "x-max", "samples", "out",
        "format", "tol", "seed",
    ];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let tol = resolve_tol(args.tol, &cfg)?;
    let k = args.k.or(cfg.f64("k")?).unwrap_or(SCREEN_DEFAULT_K);
    let d = args.d.or(cfg.f64("d")?).unwrap_or(SCREEN_DEFAULT_D);
    let big_l = args.big_l.or(cfg.f64("L")?).unwrap_or(SCREEN_DEFAULT_L);
    // default window: three fringes centered on the axis
    let fringe = 2.0 * std::f64::consts::PI * big_l / (k * d);
    let x_min = args.x_min.or(cfg.f64("x-min")?).unwrap_or(-1.5 * fringe);
    let x_max = args.x_max.or(cfg.f64("x-max")?).unwrap_or(1.5 * fringe);
    let samples = args
        .samples
        .or(cfg.usize("samples")?)
        .unwrap_or(SCREEN_DEFAULT_SAMPLES);
    let format = match args.format.or(cfg.string("format")?) {
        Some(s) => parse_format(&s)?,
        None => OutputFormat::Csv,
    };
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));

    let builtin = args.builtin.or(cfg.string("builtin")?);
    let file = args.file.or(cfg.string("file")?.map(PathBuf::from));
    let a = args.a.or(cfg.f64("a")?);
    let b = args.b.or(cfg.f64("b")?);
    let eta = args.eta.or(cfg.f64("eta")?);
    let (rho, label) = load_state(builtin, file, a, b, eta, tol, None)?;

    if samples < 2 || !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
        return Err(CliError::usage(format!(
            "scan range is empty: [{x_min}, {x_max}] with {samples} samples"
        )));
    }

    let step = (x_max - x_min) / (samples - 1) as f64;
    let mut rows = Vec::with_capacity(samples);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..samples {
        let x = x_min + step * i as f64;
        let geometry = ScreenGeometry {
            wavenumber: k,
            paths: PathLengths::FarField {
                slit_separation: d,
                screen_distance: big_l,
                screen_coordinate: x,
            },
        };
        let intensity = screen_intensity(&rho, &geometry)?;
        if intensity < -tol {
            return Err(CliError::usage(format!(
                "internal error: negative intensity {intensity} at x = {x}"
            )));
        }
        lo = lo.min(intensity);
        hi = hi.max(intensity);
        rows.push((x, intensity));
    }
    let visibility_numeric = (hi - lo) / (hi + lo);
    let visibility_analytic = visibility(&rho);

    let meta = ScreenMeta {
        state: label,
        k,
        d,
        big_l,
        x_min,
        x_max,
        samples,
        tol,
    };
    let content = match format {
        OutputFormat::Csv => screen_csv(&meta, &rows, visibility_numeric, visibility_analytic),
        OutputFormat::Json => screen_json(&meta, &rows, visibility_numeric, visibility_analytic),
    };
    emit(out.as_ref(), &content)
}

pub fn cmd_validate_channel(args: ValidateChannelArgs) -> Result<(), CliError> {
    let allowed = ["model", "p", "out", "config"];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let model = parse_model(
        &args
            .model
            .or(cfg.string("model")?)
            .ok_or_else(|| {
                CliError::usage("validate-channel requires --model <dephasing|scattering>".into())
            })?,
    )?;
    let p = args
        .p
        .or(cfg.f64("p")?)
        .ok_or_else(|| CliError::usage("validate-channel requires --p <probability>".into()))?;
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));

    let channel = model.channel(p)?;
    let defect = channel.completeness_defect();
    let content = format!(
        "model={} p={} completeness_defect={}\n",
        model.name(),
        duality_core::io::fmt_f64(p),
        duality_core::io::fmt_f64(defect)
    );
    emit(out.as_ref(), &content)?;
    if defect < 1e-12 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "completeness defect {defect:e} is not below 1e-12"
        )))
    }
}

/// The figure aliases expand to fixed sweep/evolve invocations; only output
/// destination, format and tolerance can be overridden.
pub fn cmd_figure(number: u8, args: FigureArgs) -> Result<(), CliError> {
    let allowed = ["out", "format", "tol", "seed", "config"];
    let cfg = ConfigMap::load(args.config.as_deref(), &allowed)?;
    let tol = resolve_tol(args.tol, &cfg)?;
    let format = match args.format.or(cfg.string("format")?) {
        Some(s) => parse_format(&s)?,
        None => OutputFormat::Csv,
    };
    let out = args.out.or(cfg.string("out")?.map(PathBuf::from));

    match number {
        2 => run_sweep("psi1", None, SWEEP_DEFAULT_SAMPLES, tol, format, out.as_ref()),
        3 => run_sweep(
            "psi2",
            Some(std::f64::consts::FRAC_1_SQRT_2),
            SWEEP_DEFAULT_SAMPLES,
            tol,
            format,
            out.as_ref(),
        ),
        4 => run_sweep("werner", None, SWEEP_DEFAULT_SAMPLES, tol, format, out.as_ref()),
        5 | 6 => run_evolve(EvolveParams {
            model: if number == 5 {
                ChannelModel::Dephasing
            } else {
                ChannelModel::Scattering
            },
            gamma: 1.0,
            t_max: 5.0,
            steps: EVOLVE_DEFAULT_STEPS,
            method: EvolutionMethod::ClosedForm,
            n: EVOLVE_DEFAULT_N,
            initial: from_pure(&psi_mixed())?,
            initial_label: "psi-mixed".to_owned(),
            tol,
            format,
            out,
        }),
        _ => unreachable!("figure aliases are 2..=6"),
    }
}
