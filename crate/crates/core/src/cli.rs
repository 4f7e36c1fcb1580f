//! Command-line front end. The `nlwe` binary is a thin wrapper over [`run`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bound_ent::{be_state, ppt_report, separability_report, summarize};
use crate::circuit::{Circuit, COMMUTATION_TOL};
use crate::config::Tolerances;
use crate::ensembles::{local_factor_census, Preset};
use crate::error::{Error, Result};
use crate::io;
use crate::lemma::{lemma_check, survey, weyl_operator, OperatorFamily};
use crate::linalg::party_label;
use crate::report::{Check, VerificationReport};
use crate::state::ProductBasis;
use crate::upb::{extract_upb, is_unextendible, parse_excluded};

/// Exit status when a requested check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for errors (bad input, failed precondition).
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nlwe", version, about = "Control-DFT product bases, UPBs and bound-entangled states")]
pub struct Cli {
    /// Worker threads for internal parallelism (default: sequential).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the product basis of a preset circuit.
    Generate {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a basis file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated subset of orth,product,exclusivity,commutation,census.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Extract a UPB from a preset, or check a UPB file.
    Upb(UpbArgs),
    /// Build the mixed state on the complement of a UPB.
    Bestate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ppt: bool,
        #[arg(long)]
        separability: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measurement-constraint survey or single-operator check.
    Lemma {
        #[arg(long, required_unless_present = "kraus")]
        dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, conflicts_with = "dim")]
        kraus: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct UpbArgs {
    #[command(subcommand)]
    pub action: Option<UpbAction>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Excluded Fourier index per party, e.g. `all=0` or `A=1,D=0`.
    #[arg(long)]
    pub excluded_index: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum UpbAction {
    /// Exhaustive unextendibility check of a UPB file.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Parses `args` (including the program name) and runs the command, writing
/// human output to `out` and errors to standard error. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return EXIT_ERROR;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error[threads]: {e}");
            return EXIT_ERROR;
        }
    };
    let mut buf = Vec::new();
    let outcome = pool.install(|| dispatch(&cli.command, &mut buf));
    if out.write_all(&buf).and_then(|_| out.flush()).is_err() {
        return EXIT_ERROR;
    }
    match outcome {
        Ok(true) => 0,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e);
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Result<bool> {
    let tol = Tolerances::from_env();
    match command {
        Command::Generate { preset, out: path } => {
            let preset: Preset = preset.parse()?;
            let circuit = preset.circuit()?;
            let basis = circuit.generate_basis()?;
            let text = io::basis_to_string(&basis, Some(&circuit))?;
            match path {
                Some(p) => {
                    write_file(p, &text)?;
                    writeln!(out, "wrote {} states over {} to {}", basis.len(), basis.dims(), p.display())?;
                }
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
        Command::Verify { input, checks, json } => {
            let (basis, circuit) = io::basis_from_str(&read(input)?)?;
            let requested = match checks {
                Some(c) => c.iter().map(|s| s.trim().to_string()).collect(),
                None => {
                    let mut c = vec!["orth".to_string(), "product".into(), "census".into()];
                    if circuit.is_some() {
                        c.extend(["exclusivity".to_string(), "commutation".into()]);
                    }
                    c
                }
            };
            let report = verify_basis(&basis, circuit.as_ref(), &requested, &tol)?;
            write!(out, "{report}")?;
            if let Some(p) = json {
                write_file(p, &io::report_to_string(&report)?)?;
            }
            Ok(report.passed())
        }
        Command::Upb(args) => match &args.action {
            Some(UpbAction::Check { input }) => {
                let upb = io::upb_from_str(&read(input)?)?;
                let report = is_unextendible(&upb, tol.rank)?;
                write_search_summary(out, &report)?;
                write!(out, "{report}")?;
                Ok(report.passed())
            }
            None => {
                let name = args
                    .preset
                    .as_deref()
                    .ok_or_else(|| Error::Malformed("upb needs --preset or the `check` action".into()))?;
                let preset: Preset = name.parse()?;
                let circuit = preset.circuit()?;
                let defaults = preset.default_excluded(circuit.dims());
                let excluded = match &args.excluded_index {
                    Some(text) => parse_excluded(text, circuit.dims(), &defaults)?,
                    None => defaults,
                };
                let upb = extract_upb(&circuit, &excluded)?;
                writeln!(out, "UPB with {} states over {} (stopper #{}):", upb.len(), upb.dims(), upb.stopper_index() + 1)?;
                for s in upb.states() {
                    writeln!(out, "  {s}")?;
                }
                let report = is_unextendible(&upb, tol.rank)?;
                write_search_summary(out, &report)?;
                write!(out, "{report}")?;
                if let Some(p) = &args.out {
                    write_file(p, &io::upb_to_string(&upb)?)?;
                }
                Ok(report.passed())
            }
        },
        Command::Bestate {
            input,
            ppt,
            separability,
            out: path,
        } => {
            let upb = io::upb_from_str(&read(input)?)?;
            let rho = be_state(&upb, &tol)?;
            let (trace, rank, min_eig, annihilation) = summarize(&rho, upb.states(), tol.rank_count)?;
            writeln!(
                out,
                "state on the complement of {} members, D = {}: trace {trace:.12}, rank {rank}, min eigenvalue {min_eig:.3e}, max member weight {annihilation:.3e}",
                upb.len(),
                upb.dims().total()
            )?;
            let mut report = VerificationReport::new();
            if *ppt {
                let r = ppt_report(&rho, tol.eigen_sign)?;
                writeln!(out, "{:<12}  {:>22}  pass", "cut", "min PT eigenvalue")?;
                for c in &r.checks {
                    writeln!(
                        out,
                        "{:<12}  {:>22.15e}  {}",
                        c.name.trim_start_matches("ppt[").trim_end_matches(']'),
                        c.residual.unwrap_or(f64::NAN),
                        if c.passed { "yes" } else { "no" }
                    )?;
                }
                report.extend(r);
            }
            if *separability {
                let r = separability_report(&upb, tol.rank)?;
                write!(out, "{r}")?;
                report.extend(r);
            }
            if let Some(p) = path {
                write_file(p, &io::density_to_string(&rho)?)?;
            }
            Ok(report.passed())
        }
        Command::Lemma {
            dim,
            seed,
            samples,
            kraus,
        } => {
            let report = match (kraus, dim) {
                (Some(path), _) => {
                    let k = io::kraus_from_str(&read(path)?)?;
                    let outcome = lemma_check(&k, tol.rank)?;
                    let mut r = VerificationReport::new();
                    r.push(
                        Check::new(
                            "lemma-implication",
                            !outcome.constraints_hold || outcome.isotropy_residual <= 1e-8,
                        )
                        .with_residual(outcome.isotropy_residual)
                        .with_detail(format!("constraints hold: {}", outcome.constraints_hold)),
                    );
                    r
                }
                (None, Some(d)) => lemma_survey(*d, *seed, *samples, tol.rank)?,
                (None, None) => return Err(Error::Malformed("lemma needs --dim or --kraus".into())),
            };
            write!(out, "{report}")?;
            Ok(report.passed())
        }
    }
}

fn write_search_summary(out: &mut dyn Write, report: &VerificationReport) -> Result<()> {
    if let Some(c) = report.get("unextendible") {
        writeln!(out, "{}", c.detail.split("; assignment").next().unwrap_or(&c.detail).replacen("; ", ", ", 1))?;
    }
    Ok(())
}

/// Weyl operators, scaled random unitaries and Gaussian operators in dimension `d`.
pub fn lemma_survey(d: usize, seed: u64, samples: usize, tol: f64) -> Result<VerificationReport> {
    if d == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    let mut report = VerificationReport::new();
    let mut weyl_worst = 0.0_f64;
    let mut weyl_ok = true;
    for a in 0..d {
        for b in 0..d {
            let o = lemma_check(&weyl_operator(d, a, b), tol)?;
            weyl_ok &= o.constraints_hold;
            weyl_worst = weyl_worst.max(o.isotropy_residual);
        }
    }
    report.push(
        Check::new("weyl", weyl_ok && weyl_worst <= 1e-10)
            .with_residual(weyl_worst)
            .with_detail(format!("{} operators X^a Z^b", d * d)),
    );
    let unitary = survey(d, OperatorFamily::ScaledUnitary, seed, samples, tol, 1e-10)?;
    report.push(
        Check::new(
            "scaled-unitary",
            unitary.constraint_passing == unitary.samples && unitary.violations == 0,
        )
        .with_residual(unitary.max_passing_residual)
        .with_detail(format!("{}/{} satisfy the constraints", unitary.constraint_passing, unitary.samples)),
    );
    let gaussian = survey(d, OperatorFamily::Gaussian, seed, samples, tol, 1e-8)?;
    report.push(
        Check::new("gaussian-implication", gaussian.violations == 0)
            .with_residual(gaussian.max_passing_residual)
            .with_detail(format!(
                "{}/{} satisfy the constraints; every such sample must be isotropic",
                gaussian.constraint_passing, gaussian.samples
            )),
    );
    Ok(report)
}

/// Runs the named checks (`orth`, `product`, `exclusivity`, `commutation`,
/// `census`) on a basis and the circuit recorded with it.
pub fn verify_basis(
    basis: &ProductBasis,
    circuit: Option<&Circuit>,
    checks: &[String],
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let _ = tol;
    let mut report = VerificationReport::new();
    for name in checks {
        match name.as_str() {
            "orth" => {
                let dev = if basis.is_empty() { 0.0 } else { basis.gram_deviation()? };
                report.push(
                    Check::new("orth", dev <= 1e-10)
                        .with_residual(dev)
                        .with_detail(format!("max |G - 1| over {} states", basis.len())),
                );
            }
            "product" => {
                let worst = basis
                    .states()
                    .iter()
                    .map(|s| (s.render().norm() - 1.0).abs())
                    .fold(0.0, f64::max);
                report.push(
                    Check::new("product", worst <= 1e-10)
                        .with_residual(worst)
                        .with_detail("every state is a tensor of normalized local factors"),
                );
            }
            "exclusivity" | "commutation" => {
                let Some(c) = circuit else {
                    report.push(Check::new(name.clone(), false).with_detail("no circuit recorded in the basis file"));
                    continue;
                };
                let sub = if name == "exclusivity" {
                    c.validate_exclusivity()
                } else {
                    c.check_commutation(COMMUTATION_TOL)
                };
                let failing: Vec<String> = sub.failures().map(|f| f.name.clone()).collect();
                let mut check = Check::new(name.clone(), sub.passed()).with_detail(if failing.is_empty() {
                    format!("{} gate pairs", sub.checks.len())
                } else {
                    format!("failing: {}", failing.join(" "))
                });
                if let Some(r) = sub.max_residual() {
                    check = check.with_residual(r);
                }
                report.push(check);
            }
            "census" => {
                let mut ok = true;
                let mut parts = Vec::new();
                for p in 0..basis.dims().parties() {
                    let census = local_factor_census(basis, p);
                    ok &= census.len() <= 2 * basis.dims().get(p);
                    parts.push(format!("{}:{}", party_label(p), census.len()));
                }
                report.push(
                    Check::new("census", ok)
                        .with_detail(format!("distinct local factors per party {}", parts.join(" "))),
                );
            }
            other => return Err(Error::Malformed(format!("unknown check '{other}'"))),
        }
    }
    Ok(report)
}
