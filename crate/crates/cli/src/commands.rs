//! Subcommand definitions and runners.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dunkl_calculus::heaviside::{MAX_ORACLE_ORDER, ROOT_TOLERANCE};
use dunkl_calculus::scalar::format_rational;
use dunkl_calculus::{
    appell_sequence, dunkl_conv_smallk, indicatrix_zeros, mp_defect, mp_sample, oracle_solve,
    poly_roots, solve_nonlocal_cauchy, tilde_conv, translate, translation_property_check,
    BigRational, CauchyProblem, Complex64, Error as CoreError, Functional, Indicatrix,
    KernelSeries, ParityGrid, RealScalar, TildeProblem, TranslationKernel,
};
use serde_json::json;

use crate::config::{
    functional, param, polynomial, sample_expression, values, ConfigScalar, GridSpec, Mode,
    Number, PhiSpec, ProblemConfig,
};
use crate::error::{exit, CliError};
use crate::expr::parse_expression;
use crate::output::{format_float, grid_csv, pair, write_file, Report};

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Nonlocal Cauchy problems for the Dunkl operator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Problem config (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Grid half-size n (2n+1 nodes)
    #[arg(long = "grid-n", global = true, value_name = "INT")]
    pub grid_n: Option<usize>,
    /// Grid half-width
    #[arg(long, global = true, value_name = "FLOAT")]
    pub xmax: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
}

/// Overrides for the config fields shared by the subcommands.
#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Deformation parameter, "p/q" or decimal
    #[arg(long)]
    pub k: Option<String>,
    /// Functional preset: dirac0, dirac1, sym1, int01, dirac:A, sym:C, mean:A:B
    #[arg(long)]
    pub phi: Option<String>,
    /// Expression in x
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Real,
    Imag,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve P(D_k) u = f with Phi{D_k^j u} = alpha_j; writes solution.csv and report.json
    Solve,
    /// Dunkl-Appell polynomials A_0..A_n as JSON
    Appell {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Tabulate the indicatrix along an axis; writes indicatrix.csv
    Indicatrix {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 10.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Axis::Imag)]
        axis: Axis,
    },
    /// Zeros of the indicatrix in a disc, with residuals, as JSON
    Eigenvalues {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Generalized translation of f by y; writes translate.csv, prints defects
    Translate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
        y: f64,
        /// Second shift for the symmetry check
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.25)]
        z: f64,
    },
    /// Mean-periodicity defect of f
    Mpcheck {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Evenly spaced sample count (default: every grid node in the window)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Convolution f * g for 0 <= k < 1; writes conv.csv, prints defects
    Conv {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
}

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Solve => run_solve(g),
        Command::Appell { problem, n } => run_appell(g, problem, *n),
        Command::Indicatrix {
            problem,
            lambda_max,
            steps,
            axis,
        } => run_indicatrix(g, problem, *lambda_max, *steps, *axis),
        Command::Eigenvalues {
            problem,
            radius,
            tol,
        } => run_eigenvalues(g, problem, *radius, *tol),
        Command::Translate { problem, y, z } => run_translate(g, problem, *y, *z),
        Command::Mpcheck { problem, samples } => run_mpcheck(g, problem, *samples),
        Command::Conv { problem, g: expr } => run_conv(g, problem, expr),
    }
}

fn out_dir(g: &GlobalArgs) -> &Path {
    g.out.as_deref().unwrap_or(Path::new("."))
}

fn apply_grid_flags(cfg: &mut ProblemConfig, g: &GlobalArgs) {
    if let Some(n) = g.grid_n {
        cfg.grid.n = n;
    }
    if let Some(xmax) = g.xmax {
        cfg.grid.xmax = xmax;
    }
}

/// The config file (if any) with flag overrides applied.
fn resolve(g: &GlobalArgs, args: &ProblemArgs, f_default: &str) -> Result<ProblemConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => ProblemConfig::load(path)?,
        None => ProblemConfig {
            k: args
                .k
                .clone()
                .map(Number::Text)
                .ok_or_else(|| CliError::Input("--k or --config is required".into()))?,
            p: Vec::new(),
            phi: PhiSpec::Named(
                args.phi
                    .clone()
                    .ok_or_else(|| CliError::Input("--phi or --config is required".into()))?,
            ),
            alpha: Vec::new(),
            f: f_default.into(),
            grid: GridSpec::default(),
            mode: None,
        },
    };
    if let Some(k) = &args.k {
        cfg.k = Number::Text(k.clone());
    }
    if let Some(phi) = &args.phi {
        cfg.phi = PhiSpec::Named(phi.clone());
    }
    if let Some(f) = &args.f {
        cfg.f = f.clone();
    }
    apply_grid_flags(&mut cfg, g);
    Ok(cfg)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json serializes"));
}

fn cauchy_problem<R: ConfigScalar + RealScalar, T: ConfigScalar>(
    cfg: &ProblemConfig,
    f: ParityGrid,
) -> Result<CauchyProblem, CliError> {
    Ok(CauchyProblem::new(
        &param::<R>(&cfg.k)?,
        &functional::<T>(&cfg.phi)?,
        &polynomial::<T>(&cfg.p)?,
        &values::<T>(&cfg.alpha)?,
        f,
    )?)
}

fn indicatrix_for<R: ConfigScalar + RealScalar, T: ConfigScalar>(
    cfg: &ProblemConfig,
) -> Result<Indicatrix, CliError> {
    let k = param::<R>(&cfg.k)?;
    Ok(Indicatrix::new(&KernelSeries::new(&k), &functional::<T>(&cfg.phi)?))
}

fn indicatrix(cfg: &ProblemConfig, mode: Mode) -> Result<Indicatrix, CliError> {
    match mode {
        Mode::Exact => indicatrix_for::<BigRational, BigRational>(cfg),
        Mode::Float => indicatrix_for::<f64, Complex64>(cfg),
    }
}

fn run_solve(g: &GlobalArgs) -> Result<i32, CliError> {
    let path = g
        .config
        .as_ref()
        .ok_or_else(|| CliError::Input("solve needs --config".into()))?;
    let mut cfg = ProblemConfig::load(path)?;
    apply_grid_flags(&mut cfg, g);
    cfg.validate_polynomial()?;
    let mode = cfg.resolve_mode(g.mode)?;
    let f = cfg.rhs_grid()?;
    let cp = match mode {
        Mode::Exact => cauchy_problem::<BigRational, BigRational>(&cfg, f)?,
        Mode::Float => cauchy_problem::<f64, Complex64>(&cfg, f)?,
    };
    let out = out_dir(g);

    match solve_nonlocal_cauchy(&cp) {
        Ok((u, solution)) => {
            let mut report = Report::from(&solution);
            if cp.order() <= MAX_ORACLE_ORDER {
                match oracle_solve(&cp) {
                    Ok(oracle) => {
                        let diff = u.distance(&oracle);
                        if diff > 1e-5 * (1.0 + u.sup_norm()) {
                            report
                                .warnings
                                .push(format!("oracle disagreement {diff:.3e} exceeds 1e-5 (1 + sup|u|)"));
                        }
                        report.oracle_diff_sup = Some(diff);
                    }
                    Err(e) => report.warnings.push(format!("oracle: {e}")),
                }
            }
            write_file(out, "solution.csv", &grid_csv(&u, ["x", "u_re", "u_im"]))?;
            write_file(out, "report.json", &report.to_json())?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(exit::SUCCESS)
        }
        Err(e) => {
            let report = failure_report(&cp, &e);
            write_file(out, "report.json", &report.to_json())?;
            let e = CliError::Core(e);
            eprintln!("error: {e}");
            Ok(e.exit_code())
        }
    }
}

/// Report for a failed solve: the factorization and the failure.
fn failure_report(cp: &CauchyProblem, error: &CoreError) -> Report {
    let mut report = Report::default();
    if let Ok(roots) = poly_roots(cp.polynomial(), ROOT_TOLERANCE) {
        for (mu, kappa) in roots {
            let e = cp.indicatrix().eval(mu, 0).unwrap_or(Complex64::new(f64::NAN, 0.0));
            report.roots.push(pair(mu));
            report.multiplicities.push(kappa);
            report.indicatrix_at_roots.push(pair(e));
        }
    }
    if let CoreError::Residual { residual, .. } = error {
        report.residual_sup = Some(*residual);
    }
    report.warnings.push(error.to_string());
    if let CoreError::Resonance { roots } = error {
        for mu in roots {
            report
                .warnings
                .push(format!("resonant root {mu}: |E_k| = {:.3e}", cp.indicatrix().eval(*mu, 0).map_or(f64::NAN, |e| e.norm())));
        }
        if cp.order() <= MAX_ORACLE_ORDER {
            match oracle_solve(cp) {
                Ok(_) => report.warnings.push("oracle: boundary system solved".into()),
                Err(e) => report.warnings.push(format!("oracle: {e}")),
            }
        }
    }
    report
}

fn run_appell(g: &GlobalArgs, args: &ProblemArgs, n: usize) -> Result<i32, CliError> {
    let cfg = resolve(g, args, "0")?;
    let mode = cfg.resolve_mode(g.mode)?;
    let polynomials: Vec<serde_json::Value> = match mode {
        Mode::Exact => {
            let k = param::<BigRational>(&cfg.k)?;
            let phi: Functional<BigRational> = functional(&cfg.phi)?;
            appell_sequence(n, &k, &phi)?
                .iter()
                .map(|p| json!(p.coeffs().iter().map(format_rational).collect::<Vec<_>>()))
                .collect()
        }
        Mode::Float => {
            let k = param::<f64>(&cfg.k)?;
            let phi: Functional<f64> = functional(&cfg.phi)?;
            appell_sequence(n, &k, &phi)?
                .iter()
                .map(|p| json!(p.coeffs()))
                .collect()
        }
    };
    print_json(&json!({
        "mode": mode_name(mode),
        "polynomials": polynomials,
    }));
    Ok(exit::SUCCESS)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn run_indicatrix(
    g: &GlobalArgs,
    args: &ProblemArgs,
    lambda_max: f64,
    steps: usize,
    axis: Axis,
) -> Result<i32, CliError> {
    if steps == 0 || !(lambda_max > 0.0) {
        return Err(CliError::Input("--steps and --lambda-max must be positive".into()));
    }
    let cfg = resolve(g, args, "0")?;
    let ind = indicatrix(&cfg, cfg.resolve_mode(g.mode)?)?;
    let mut csv = String::from("lambda_re,lambda_im,e_re,e_im\n");
    for i in 0..=steps {
        let t = lambda_max * (2.0 * i as f64 / steps as f64 - 1.0);
        let lambda = match axis {
            Axis::Real => Complex64::new(t, 0.0),
            Axis::Imag => Complex64::new(0.0, t),
        };
        let e = ind.eval(lambda, 0)?;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_float(lambda.re),
            format_float(lambda.im),
            format_float(e.re),
            format_float(e.im)
        ));
    }
    write_file(out_dir(g), "indicatrix.csv", &csv)?;
    Ok(exit::SUCCESS)
}

fn run_eigenvalues(g: &GlobalArgs, args: &ProblemArgs, radius: f64, tol: f64) -> Result<i32, CliError> {
    let cfg = resolve(g, args, "0")?;
    let ind = indicatrix(&cfg, cfg.resolve_mode(g.mode)?)?;
    let zeros = indicatrix_zeros(&ind, radius, tol)?;
    let residuals = zeros
        .iter()
        .map(|&z| Ok(ind.eval(z, 0)?.norm()))
        .collect::<Result<Vec<f64>, CoreError>>()?;
    print_json(&json!({
        "radius": radius,
        "zeros": zeros.iter().copied().map(pair).collect::<Vec<_>>(),
        "residuals": residuals,
    }));
    Ok(exit::SUCCESS)
}

fn float_k(cfg: &ProblemConfig) -> Result<f64, CliError> {
    Ok(param::<f64>(&cfg.k)?.to_f64())
}

fn run_translate(g: &GlobalArgs, args: &ProblemArgs, y: f64, z: f64) -> Result<i32, CliError> {
    let cfg = resolve(g, args, "")?;
    let f = cfg.rhs_grid()?;
    let tk = TranslationKernel::with_default_nodes(float_k(&cfg)?)?;
    let shifted = translate(&f, y, &tk)?;
    let defects = translation_property_check(&f, y, z, &tk)?;
    write_file(out_dir(g), "translate.csv", &grid_csv(&shifted, ["x", "v_re", "v_im"]))?;
    print_json(&json!({
        "y": y,
        "z": z,
        "defects": {
            "symmetry": defects.symmetry,
            "commutation": defects.commutation,
            "intertwining": defects.intertwining,
        },
        "max": defects.max(),
    }));
    Ok(exit::SUCCESS)
}

fn run_mpcheck(g: &GlobalArgs, args: &ProblemArgs, samples: Option<usize>) -> Result<i32, CliError> {
    let cfg = resolve(g, args, "")?;
    let f = cfg.rhs_grid()?;
    let phi: Functional<Complex64> = functional(&cfg.phi)?;
    let tk = TranslationKernel::with_default_nodes(float_k(&cfg)?)?;
    let reach = (f.xmax() - phi.radius()).max(0.0);
    let xs = match samples {
        Some(count) => mp_sample(&f, &phi, count),
        None => (0..=f.n())
            .map(|i| f.node(i))
            .filter(|x| *x <= reach)
            .flat_map(|x| if x == 0.0 { vec![x] } else { vec![-x, x] })
            .collect(),
    };
    let defect = mp_defect(&f, &phi, &tk, &xs)?;
    print_json(&json!({
        "defect": defect,
        "samples": xs.len(),
        "window": reach,
    }));
    Ok(exit::SUCCESS)
}

fn run_conv(g: &GlobalArgs, args: &ProblemArgs, g_src: &str) -> Result<i32, CliError> {
    let cfg = resolve(g, args, "")?;
    let f = cfg.rhs_grid()?;
    let g_expr = parse_expression(g_src).map_err(CliError::Syntax)?;
    let g_grid = sample_expression(&g_expr, cfg.grid.xmax, cfg.grid.n)?;
    let k = float_k(&cfg)?;
    let phi: Functional<Complex64> = functional(&cfg.phi)?;
    let conv = |a: &ParityGrid, b: &ParityGrid| -> Result<ParityGrid, CliError> {
        if k == 0.0 {
            Ok(tilde_conv(a, b, &TildeProblem::new(0.0, &phi)?)?)
        } else if k < 1.0 {
            Ok(dunkl_conv_smallk(a, b, k, &phi)?)
        } else {
            Err(CliError::Input(format!("conv needs 0 <= k < 1, got {k}")))
        }
    };
    let w = conv(&f, &g_grid)?;
    let swapped = conv(&g_grid, &f)?;
    write_file(out_dir(g), "conv.csv", &grid_csv(&w, ["x", "w_re", "w_im"]))?;
    print_json(&json!({
        "phi_defect": phi.apply_grid(&w)?.norm(),
        "commutativity": w.distance(&swapped),
    }));
    Ok(exit::SUCCESS)
}
