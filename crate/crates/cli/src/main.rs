use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antieigen::centre::{cos_from_distance, real_centre_of_mass, total_centre_of_mass, total_cos_from_distance};
use antieigen::document::{format_complex, format_sig, parse_theta, MatrixDocument, RandomCampaign};
use antieigen::functionals::epsilon_star;
use antieigen::sphere::{minimize_mu_theta, total_antieigenvalue};
use antieigen::sweep::sweep;
use antieigen::verify::{summarize, VerificationReport, Verifier};
use antieigen::{ComplexMatrix, Error, OptimizerConfig, Theta};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Antieigenvalues, total antieigenvalues and centres of mass of complex matrices.
///
/// Angles are in radians. Exit status: 0 success, 1 failed verification,
/// 2 input error, 3 optimizer did not converge.
#[derive(Debug, Parser)]
#[command(name = "antieigen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Angle θ in radians
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = theta_arg)]
    theta: Option<Theta>,

    /// Agreement tolerance for `verify` and `example`
    #[arg(long, global = true, default_value_t = 1e-5)]
    tol: f64,

    /// Random restarts per minimization
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,

    /// Seed for the restart generator
    #[arg(long, global = true, env = "ANTIEIGEN_SEED", default_value_t = 0)]
    seed: u64,

    /// θ samples for `sweep` (default 360) or outer θ grid for `verify` (default 720)
    #[arg(long, global = true)]
    resolution: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComMode {
    Real,
    Total,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// μ_θ(T), its witness and the centre of mass at one angle (θ defaults to 0)
    Compute { matrix: PathBuf },
    /// μ_θ(T) on θ = 2πk/resolution, one row per angle
    Sweep { matrix: PathBuf },
    /// Real centre of mass of e^{iθ}I with respect to T, or total centre of I
    Com { matrix: PathBuf, mode: ComMode },
    /// Check the identities on a matrix file or a random campaign
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        matrix: Option<PathBuf>,
        /// Campaign spec, e.g. "n=3 count=20 seed=7 [ensemble=normal] [scale=1]"
        #[arg(long)]
        random: Option<String>,
    },
    /// Recompute the worked example T = diag(2−3i, 3+2i)
    Example,
}

fn theta_arg(s: &str) -> Result<Theta, String> {
    parse_theta(s).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoAdmissibleVector => EXIT_NOT_CONVERGED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: format!("write failed: {e}") }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: EXIT_INPUT, message: format!("write failed: {e}") }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("--tol must be positive, got {}", cli.tol)).into());
    }
    let cfg = OptimizerConfig { restarts: cli.restarts, seed: cli.seed, ..OptimizerConfig::default() };
    cfg.validate()?;
    let theta = cli.theta.unwrap_or(Theta::ZERO);
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Compute { matrix } => compute(&mut out, cli.format, &load(matrix)?, theta, &cfg),
        Command::Sweep { matrix } => {
            let t = load(matrix)?;
            let count = cli.resolution.unwrap_or(360);
            cmd_sweep(&mut out, cli.format, &t, count, &cfg)
        }
        Command::Com { matrix, mode } => {
            if *mode == ComMode::Real && cli.theta.is_none() {
                return Err(Error::InvalidArgument("com real requires --theta".into()).into());
            }
            com(&mut out, cli.format, &load(matrix)?, *mode, theta)
        }
        Command::Verify { matrix, random } => {
            let mut verifier = Verifier::new(cfg);
            if let Some(r) = cli.resolution {
                if r < 2 {
                    return Err(Error::InvalidArgument("--resolution must be at least 2".into()).into());
                }
                verifier.theta_grid = r;
            }
            match (matrix, random) {
                (Some(path), _) => verify_matrix(&mut out, cli.format, &load(path)?, &verifier, cli.tol),
                (None, Some(spec)) => verify_random(&mut out, cli.format, spec, &verifier, cli.tol),
                (None, None) => unreachable!("clap requires one of the two"),
            }
        }
        Command::Example => example(&mut out, cli.format, &cfg, cli.tol),
    }
}

fn load(path: &Path) -> Result<ComplexMatrix, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure { code: EXIT_INPUT, message: format!("cannot read {}: {e}", path.display()) })?;
    let doc = MatrixDocument::parse_bytes(&bytes)
        .map_err(|e| Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) })?;
    Ok(doc.to_matrix()?)
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize)]
struct ComputeOutput {
    theta: f64,
    mu_theta: f64,
    witness: Vec<[f64; 2]>,
    residual_norm: f64,
    converged: bool,
    near_kernel: bool,
    restarts_used: usize,
    epsilon_star_at_witness: f64,
    centre_of_mass: f64,
    centre_of_mass_distance: f64,
}

fn compute(
    out: &mut impl Write,
    format: Format,
    t: &ComplexMatrix,
    theta: Theta,
    cfg: &OptimizerConfig,
) -> Result<u8, Failure> {
    let r = minimize_mu_theta(t, theta, cfg)?;
    let eps = epsilon_star(t, theta, &r.witness)?;
    let centre = real_centre_of_mass(&ComplexMatrix::scalar(t.dim(), theta.unit()), t)?;
    let o = ComputeOutput {
        theta: theta.radians(),
        mu_theta: r.value,
        witness: pairs(r.witness.as_slice()),
        residual_norm: r.residual_norm,
        converged: r.converged,
        near_kernel: r.near_kernel,
        restarts_used: r.restarts_used,
        epsilon_star_at_witness: eps,
        centre_of_mass: centre.epsilon0,
        centre_of_mass_distance: centre.distance,
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("finite values"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "theta",
                "mu_theta",
                "witness",
                "residual_norm",
                "converged",
                "epsilon_star_at_witness",
                "centre_of_mass",
                "centre_of_mass_distance",
            ])?;
            w.write_record([
                o.theta.to_string(),
                o.mu_theta.to_string(),
                antieigen::document::format_vector_exact(r.witness.as_slice()),
                o.residual_norm.to_string(),
                o.converged.to_string(),
                o.epsilon_star_at_witness.to_string(),
                o.centre_of_mass.to_string(),
                o.centre_of_mass_distance.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            let witness: Vec<String> = r.witness.as_slice().iter().map(|&z| format_complex(z)).collect();
            writeln!(out, "theta                    {}", format_sig(o.theta))?;
            writeln!(out, "mu_theta                 {}", format_sig(o.mu_theta))?;
            writeln!(out, "witness                  [{}]", witness.join(", "))?;
            writeln!(out, "residual_norm            {:.3e}", o.residual_norm)?;
            writeln!(out, "converged                {}", o.converged)?;
            if o.near_kernel {
                writeln!(
                    out,
                    "note                     witness is close to the kernel of T; the infimum is likely not attained"
                )?;
            }
            writeln!(out, "epsilon_star_at_witness  {}", format_sig(o.epsilon_star_at_witness))?;
            writeln!(out, "centre_of_mass           {}", format_sig(o.centre_of_mass))?;
            writeln!(out, "centre_of_mass_distance  {}", format_sig(o.centre_of_mass_distance))?;
        }
    }
    if !r.converged {
        eprintln!("error: optimizer did not converge (residual {:.3e})", r.residual_norm);
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn cmd_sweep(
    out: &mut impl Write,
    format: Format,
    t: &ComplexMatrix,
    count: usize,
    cfg: &OptimizerConfig,
) -> Result<u8, Failure> {
    let rows = sweep(t, count, cfg)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("finite values"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{:>14} {:>14} {:>14} {:>14}  witness", "theta", "mu_theta", "eps_star", "distance")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>14} {:>14} {:>14} {:>14}  {}",
                    format_sig(r.theta),
                    format_sig(r.mu_theta),
                    format_sig(r.epsilon_star_at_witness),
                    format_sig(r.centre_of_mass_distance),
                    r.witness_params
                )?;
            }
        }
    }
    let stalled = rows.iter().filter(|r| !r.converged).count();
    if stalled > 0 {
        eprintln!("error: optimizer did not converge on {stalled} of {} angles", rows.len());
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

#[derive(Serialize)]
struct ComOutput {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    centre: [f64; 2],
    distance: f64,
    cosine: f64,
}

fn com(out: &mut impl Write, format: Format, t: &ComplexMatrix, mode: ComMode, theta: Theta) -> Result<u8, Failure> {
    let n = t.dim();
    let o = match mode {
        ComMode::Real => {
            let c = real_centre_of_mass(&ComplexMatrix::scalar(n, theta.unit()), t)?;
            ComOutput {
                mode: "real",
                theta: Some(theta.radians()),
                centre: [c.epsilon0, 0.0],
                distance: c.distance,
                cosine: cos_from_distance(t, theta)?,
            }
        }
        ComMode::Total => {
            let c = total_centre_of_mass(&ComplexMatrix::identity(n), t)?;
            ComOutput {
                mode: "total",
                theta: None,
                centre: [c.lambda0.re, c.lambda0.im],
                distance: c.distance,
                cosine: total_cos_from_distance(t)?,
            }
        }
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("finite values"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["mode", "theta", "centre_re", "centre_im", "distance", "cosine"])?;
            let theta = o.theta.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                o.mode.to_string(),
                theta,
                o.centre[0].to_string(),
                o.centre[1].to_string(),
                o.distance.to_string(),
                o.cosine.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            let centre = match mode {
                ComMode::Real => format_sig(o.centre[0]),
                ComMode::Total => format_complex(Complex64::new(o.centre[0], o.centre[1])),
            };
            writeln!(out, "mode      {}", o.mode)?;
            if let Some(x) = o.theta {
                writeln!(out, "theta     {}", format_sig(x))?;
            }
            writeln!(out, "centre    {centre}")?;
            writeln!(out, "distance  {}", format_sig(o.distance))?;
            writeln!(out, "cosine    {}", format_sig(o.cosine))?;
        }
    }
    Ok(0)
}

fn write_reports(
    out: &mut impl Write,
    format: Format,
    rows: &[(Option<usize>, &VerificationReport)],
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                #[serde(skip_serializing_if = "Option::is_none")]
                index: Option<usize>,
                #[serde(flatten)]
                report: &'a VerificationReport,
            }
            let rows: Vec<Row> = rows.iter().map(|&(index, report)| Row { index, report }).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("finite values"))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["index", "identity", "lhs", "rhs", "gap", "tolerance", "pass", "mode", "notes"])?;
            for &(index, r) in rows {
                w.write_record([
                    index.map(|i| i.to_string()).unwrap_or_default(),
                    r.identity.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.gap.to_string(),
                    r.tolerance.to_string(),
                    r.pass.to_string(),
                    format!("{:?}", r.mode).to_lowercase(),
                    r.notes.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:>5} {:<15} {:>16} {:>16} {:>10} {:>8}  {:<6} notes",
                "#", "identity", "lhs", "rhs", "gap", "tol", "status"
            )?;
            for &(index, r) in rows {
                let status = match (r.pass, r.acceptable()) {
                    (true, _) => "pass",
                    (false, true) => "differ",
                    (false, false) => "FAIL",
                };
                writeln!(
                    out,
                    "{:>5} {:<15} {:>16} {:>16} {:>10.2e} {:>8.0e}  {:<6} {}",
                    index.map(|i| i.to_string()).unwrap_or_default(),
                    r.identity.name(),
                    format_sig(r.lhs),
                    format_sig(r.rhs),
                    r.gap,
                    r.tolerance,
                    status,
                    r.notes
                )?;
            }
            let all: Vec<VerificationReport> = rows.iter().map(|(_, r)| (*r).clone()).collect();
            writeln!(out)?;
            for (identity, pass, total) in summarize(&all) {
                writeln!(out, "{:<15} {pass}/{total} within tolerance", identity.name())?;
            }
        }
    }
    Ok(())
}

fn verdict(reports: &[&VerificationReport]) -> u8 {
    let failed = reports.iter().filter(|r| !r.acceptable()).count();
    if failed > 0 {
        eprintln!("error: {failed} asserted identities outside tolerance");
        EXIT_VERIFY_FAILED
    } else {
        0
    }
}

fn verify_matrix(
    out: &mut impl Write,
    format: Format,
    t: &ComplexMatrix,
    v: &Verifier,
    tol: f64,
) -> Result<u8, Failure> {
    let reports = v.verify_all(t, tol, v.cfg.seed)?;
    let rows: Vec<(Option<usize>, &VerificationReport)> = reports.iter().map(|r| (None, r)).collect();
    write_reports(out, format, &rows)?;
    Ok(verdict(&reports.iter().collect::<Vec<_>>()))
}

fn verify_random(out: &mut impl Write, format: Format, spec: &str, v: &Verifier, tol: f64) -> Result<u8, Failure> {
    let campaign = RandomCampaign::parse(spec)?;
    let entries = v.run_campaign(&campaign.specs(), tol)?;
    let rows: Vec<(Option<usize>, &VerificationReport)> = entries.iter().map(|e| (Some(e.index), &e.report)).collect();
    write_reports(out, format, &rows)?;
    Ok(verdict(&entries.iter().map(|e| &e.report).collect::<Vec<_>>()))
}

#[derive(Serialize)]
struct ExampleRow {
    quantity: &'static str,
    expected: f64,
    computed: f64,
    gap: f64,
}

fn example(out: &mut impl Write, format: Format, cfg: &OptimizerConfig, tol: f64) -> Result<u8, Failure> {
    let t = ComplexMatrix::from_diag(&[Complex64::new(2.0, -3.0), Complex64::new(3.0, 2.0)])?;
    let s13 = 13f64.sqrt();
    let quarter = Theta::new(FRAC_PI_4)?;
    let total = total_antieigenvalue(&t, cfg)?;
    let mu0 = minimize_mu_theta(&t, Theta::ZERO, cfg)?;
    let mu_q = minimize_mu_theta(&t, quarter, cfg)?;
    let centre = total_centre_of_mass(&ComplexMatrix::identity(2), &t)?;
    let real0 = real_centre_of_mass(&ComplexMatrix::identity(2), &t)?;
    let real_q = real_centre_of_mass(&ComplexMatrix::scalar(2, quarter.unit()), &t)?;
    let eps_q = epsilon_star(&t, quarter, &mu_q.witness)?;
    let tz = t.mul_vec(antieigen::UnitVector::basis(2, 0).as_vector())?.norm();

    let row = |quantity, expected: f64, computed: f64| ExampleRow {
        quantity,
        expected,
        computed,
        gap: (expected - computed).abs(),
    };
    let rows = vec![
        row("|cos|T", 1.0 / SQRT_2, total.value),
        row("mu_0(T)", 2.0 / s13, mu0.value),
        row("mu_pi/4(T)", -1.0 / 26f64.sqrt(), mu_q.value),
        row("total centre re", 5.0 / 26.0, centre.lambda0.re),
        row("total centre im", 1.0 / 26.0, centre.lambda0.im),
        row("total distance", 1.0 / SQRT_2, centre.distance),
        row("real centre theta=0", 2.0 / 13.0, real0.epsilon0),
        row("real distance theta=0", 3.0 / s13, real0.distance),
        row("eps* at pi/4 witness", -1.0 / (13.0 * SQRT_2), eps_q),
        row("real centre theta=pi/4", 0.0, real_q.epsilon0),
        row("|Tz|, z = e1", s13, tz),
    ];
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("finite values"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "T = diag(2-3i, 3+2i)")?;
            writeln!(out, "{:<24} {:>16} {:>16} {:>10}", "quantity", "expected", "computed", "gap")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<24} {:>16} {:>16} {:>10.2e}",
                    r.quantity,
                    format_sig(r.expected),
                    format_sig(r.computed),
                    r.gap
                )?;
            }
        }
    }
    let worst = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    if worst > tol {
        eprintln!("error: largest gap {worst:.3e} exceeds tolerance {tol:e}");
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(0)
}
