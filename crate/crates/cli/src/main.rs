use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bessel_tr::bessel::UTable;
use bessel_tr::formal::format_rational;
use bessel_tr::series::{free_energy, partition_function, PSeries};
use bessel_tr::tr::{SpectralCurve, TrEngine};
use bessel_tr::verify::{run_target, Target, VerifyConfig};
use bessel_tr::wave::{principal_specialize, wave_function, OneVarSeries};
use bessel_tr::Report;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

/// Exact topological recursion and partition function of the Bessel curve.
#[derive(Parser, Debug)]
#[command(name = "bessel-tr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients U_{g,n}(mu) from the closed recursion.
    UTable {
        #[arg(long, default_value_t = 6)]
        chi_max: u32,
        #[arg(long)]
        g_max: Option<u32>,
    },
    /// Correlation differentials from the residue recursion.
    Omega {
        #[arg(long, default_value_t = 6)]
        chi_max: u32,
        #[arg(long)]
        g_max: Option<u32>,
        #[arg(long, value_enum, default_value_t = Curve::Bessel)]
        curve: Curve,
    },
    /// Z = exp F through weighted degree N.
    Partition {
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// F through weighted degree N.
    FreeEnergy {
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Wave function coefficients in hbar/z, by principal specialisation of Z.
    Wave {
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Run verification targets; exits 1 if any fails.
    Verify {
        /// Comma-separated list of targets.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<Target>,
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        chi_max: u32,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Curve {
    Bessel,
    Airy,
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every requested check passed.
fn run(cli: &Cli) -> CliResult<bool> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let ok = match &cli.command {
        Command::UTable { chi_max, g_max } => {
            write_u_table(&mut out, cli.format, *chi_max, *g_max)?;
            true
        }
        Command::Omega { chi_max, g_max, curve } => {
            write_omega(&mut out, cli.format, *chi_max, *g_max, *curve)?;
            true
        }
        Command::Partition { order } => {
            write_series(&mut out, cli.format, &partition_function(&UTable::new(), *order))?;
            true
        }
        Command::FreeEnergy { order } => {
            write_series(&mut out, cli.format, &free_energy(&UTable::new(), *order))?;
            true
        }
        Command::Wave { order } => {
            let z = partition_function(&UTable::new(), *order);
            let psi = principal_specialize(&z);
            if psi != wave_function(*order as usize) {
                return Err("specialised partition function disagrees with the closed form".into());
            }
            write_wave(&mut out, cli.format, &psi)?;
            true
        }
        Command::Verify { targets, order, chi_max, m_max } => {
            let cfg = VerifyConfig { order: *order, chi_max: *chi_max, m_max: *m_max };
            let reports = verify(targets, &cfg)?;
            write_reports(&mut out, cli.format, &reports)?;
            reports.iter().all(Report::passed)
        }
    };
    out.flush()?;
    Ok(ok)
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("BESSEL_TR_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("BESSEL_TR_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err("BESSEL_TR_THREADS must be at least 1".into());
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn verify(targets: &[Target], cfg: &VerifyConfig) -> CliResult<Vec<Report>> {
    let mut unique: Vec<Target> = Vec::new();
    for t in targets {
        if !unique.contains(t) {
            unique.push(*t);
        }
    }
    let table = UTable::new();
    // collect keeps the requested order regardless of scheduling
    Ok(thread_pool()?.install(|| unique.par_iter().map(|t| run_target(*t, &table, cfg)).collect()))
}

fn mu_string(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(u32::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn write_u_table(out: &mut dyn Write, format: Format, chi_max: u32, g_max: Option<u32>) -> CliResult<()> {
    let entries = UTable::new().entries(chi_max, g_max);
    match format {
        Format::Json => {
            for e in &entries {
                writeln!(out, "{}", serde_json::to_string(e)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["g", "mu", "value"])?;
            for e in &entries {
                w.write_record([e.g.to_string(), mu_string(e.mu.parts()), format_rational(&e.value)])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for e in &entries {
                writeln!(
                    out,
                    "U_{{{},{}}}{} = {}",
                    e.g,
                    e.mu.len(),
                    mu_string(e.mu.parts()),
                    format_rational(&e.value)
                )?;
            }
        }
    }
    Ok(())
}

fn write_omega(out: &mut dyn Write, format: Format, chi_max: u32, g_max: Option<u32>, curve: Curve) -> CliResult<()> {
    let curve = match curve {
        Curve::Bessel => SpectralCurve::bessel(),
        Curve::Airy => SpectralCurve::airy(),
    };
    let engine = TrEngine::new(curve);
    let mut records = Vec::new();
    for omega in engine.omega_up_to(chi_max)? {
        if g_max.is_some_and(|g| omega.g > g) {
            continue;
        }
        records.extend(omega.records()?);
    }
    match format {
        Format::Json => {
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["g", "n", "mu", "value"])?;
            for r in &records {
                w.write_record([r.g.to_string(), r.n.to_string(), mu_string(&r.mu), r.value.clone()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &records {
                writeln!(out, "omega_{{{},{}}}{} = {}", r.g, r.n, mu_string(&r.mu), r.value)?;
            }
        }
    }
    Ok(())
}

fn write_series(out: &mut dyn Write, format: Format, s: &PSeries) -> CliResult<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(s)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["degree", "monomial", "coeff"])?;
            for (m, c) in s.terms() {
                w.write_record([m.degree().to_string(), m.to_string(), format_rational(c)])?;
            }
            w.flush()?;
        }
        Format::Text => writeln!(out, "{s}")?,
    }
    Ok(())
}

fn write_wave(out: &mut dyn Write, format: Format, psi: &OneVarSeries) -> CliResult<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(psi)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["d", "coeff"])?;
            for (d, c) in psi.coeffs().iter().enumerate() {
                w.write_record([d.to_string(), format_rational(c)])?;
            }
            w.flush()?;
        }
        Format::Text => {
            let terms: Vec<String> = psi
                .coeffs()
                .iter()
                .enumerate()
                .map(|(d, c)| match d {
                    0 => format_rational(c),
                    1 => format!("{} (hbar/z)", format_rational(c)),
                    _ => format!("{} (hbar/z)^{d}", format_rational(c)),
                })
                .collect();
            writeln!(out, "{}", terms.join(" + "))?;
        }
    }
    Ok(())
}

fn write_reports(out: &mut dyn Write, format: Format, reports: &[Report]) -> CliResult<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(reports)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "order", "reliable_order", "status", "residual_terms"])?;
            for r in reports {
                let status = if r.passed() { "pass" } else { "fail" };
                w.write_record([
                    r.check.clone(),
                    r.order.to_string(),
                    r.reliable_order.to_string(),
                    status.to_string(),
                    r.residual_terms.len().to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {} (order {}, reliable through {})", r.check, r.order, r.reliable_order)?;
                for t in &r.residual_terms {
                    writeln!(out, "    {} {}: {}", t.source, t.term, t.value)?;
                }
            }
        }
    }
    Ok(())
}
