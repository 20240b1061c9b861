//! `bicert`: build β, count descent sets, find witnesses, and emit or check
//! certificates.
//!
//! Exit codes: 0 pass, 1 a verdict failed, 2 usage or config error,
//! 3 an enumeration budget was exhausted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bicert_core::avoidance::{build_beta, kernel_generator};
use bicert_core::certify::{
    emit_certificate, run_pipeline, verify_certificate, Format, PipelineConfig, RecheckLevel, Status,
};
use bicert_core::extension::BetaMap;
use bicert_core::fpcore::{Budget, PrimeModulus};
use bicert_core::localcount::{
    find_obstruction_witness, unramified_check, CountReport, SymplecticSpace, WitnessOutcome,
};
use bicert_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "bicert", version, about = "Exact checks for bicyclic obstruction examples over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build β: Λ²(F_p^{r1}) -> F_p^{2 r1 - 3} whose kernel avoids pure wedges.
    BuildBeta(Common),
    /// Count E_v and C_v and compare with the closed forms.
    Count(Common),
    /// Search for a class pairing non-constantly with E_v.
    Witness(Common),
    /// Run the whole pipeline and write a certificate.
    Certify(Common),
    /// Check a JSON certificate.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Level {
    Structural,
    Full,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML file with any of the flag names as keys; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    r1: Option<usize>,
    /// Even dimension of the symplectic model.
    #[arg(long)]
    r: Option<usize>,
    /// β as text: "p rows cols" then row-major entries.
    #[arg(long)]
    beta: Option<PathBuf>,
    /// Largest enumeration allowed, in items.
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    oracle_seed: Option<u64>,
    #[arg(long)]
    witness_cap: Option<usize>,
    /// Enumeration partitions (threads); results do not depend on it.
    #[arg(long)]
    partitions: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Record wall time in the certificate (breaks byte-identity).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    certificate: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    level: Level,
    #[arg(long)]
    partitions: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    p: Option<u64>,
    r1: Option<usize>,
    r: Option<usize>,
    beta: Option<PathBuf>,
    budget: Option<u64>,
    seed: Option<u64>,
    oracle_seed: Option<u64>,
    witness_cap: Option<usize>,
    partitions: Option<usize>,
    out: Option<PathBuf>,
    format: Option<OutFormat>,
    timing: Option<bool>,
}

struct Resolved {
    cfg: PipelineConfig,
    out: Option<PathBuf>,
    format: OutFormat,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn resolve(c: &Common) -> Result<Resolved, Error> {
    let file: FileConfig = match &c.config {
        Some(path) => toml::from_str(&read(path)?).map_err(|e| Error::InvalidConfig(e.to_string()))?,
        None => FileConfig::default(),
    };
    // relative β paths in a config file are relative to that file
    let file_beta = file.beta.map(|b| match c.config.as_ref().and_then(|p| p.parent()) {
        Some(dir) if b.is_relative() => dir.join(b),
        _ => b,
    });
    let beta = match c.beta.clone().or(file_beta) {
        Some(path) => Some(BetaMap::parse_text(&read(&path)?)?),
        None => None,
    };
    let d = PipelineConfig::default();
    let p = c
        .p
        .or(file.p)
        .or(beta.as_ref().map(|b| b.modulus().as_u64()))
        .unwrap_or(d.p);
    let r1 = c.r1.or(file.r1).or(beta.as_ref().map(|b| b.r1())).unwrap_or(d.r1);
    let cfg = PipelineConfig {
        p,
        r1,
        r: c.r.or(file.r).unwrap_or(d.r),
        budget: c.budget.or(file.budget.map(u128::from)).unwrap_or(d.budget),
        witness_cap: c.witness_cap.or(file.witness_cap).unwrap_or(d.witness_cap),
        seed: c.seed.or(file.seed).unwrap_or(d.seed),
        oracle_seed: c.oracle_seed.or(file.oracle_seed).unwrap_or(d.oracle_seed),
        oracle_sample_budget: d.oracle_sample_budget,
        beta,
        partitions: c.partitions.or(file.partitions).unwrap_or(d.partitions),
        record_timing: c.timing || file.timing.unwrap_or(false),
    };
    Ok(Resolved {
        cfg,
        out: c.out.clone().or(file.out),
        format: c.format.or(file.format).unwrap_or(OutFormat::Json),
    })
}

fn write_out(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(Error::from)
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable");
    s.push(b'\n');
    s
}

/// The configured β, building one when none was supplied.
fn beta_for(cfg: &PipelineConfig) -> Result<BetaMap, Error> {
    let p = cfg.validate()?;
    match &cfg.beta {
        Some(b) => Ok(b.clone()),
        None => Ok(build_beta(p, cfg.r1, Budget(cfg.budget), cfg.search_options())?.beta),
    }
}

fn cmd_build_beta(c: &Common) -> Result<ExitCode, Error> {
    let r = resolve(c)?;
    let p = PrimeModulus::new(r.cfg.p)?;
    let built = build_beta(p, r.cfg.r1, Budget(r.cfg.budget), r.cfg.search_options())?;
    let bytes = match r.format {
        OutFormat::Text => built.beta.to_text().into_bytes(),
        OutFormat::Json => json(&serde_json::json!({
            "p": p.as_u64(),
            "r1": built.beta.r1(),
            "r2": built.beta.r2(),
            "rows": built.beta.matrix().to_rows(),
            "kernel_generator": kernel_generator(&built.beta).map(|g| g.coords().to_vec()),
            "grassmannian_points": built.grassmannian_points.to_string(),
            "projective_bound": built.projective_bound.to_string(),
            "strategy": built.strategy,
            "search_steps": built.search_steps,
        })),
    };
    write_out(&r.out, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(c: &Common) -> Result<ExitCode, Error> {
    let r = resolve(c)?;
    let beta = beta_for(&r.cfg)?;
    let s = SymplecticSpace::standard(beta.modulus(), r.cfg.r)?;
    let rep = CountReport::compute(&beta, &s, Budget(r.cfg.budget), r.cfg.partitions)?;
    let bytes = match r.format {
        OutFormat::Json => json(&rep),
        OutFormat::Text => format!(
            "#E_v = {} (v_p {}, Ax-Katz bound {})\n#C_v = {} (v_p {}, closed form {})\nC(r) = {}\n",
            rep.count_ev, rep.val_ev, rep.axkatz_bound, rep.count_cv, rep.val_cv, rep.closed_xi, rep.closed_climit
        )
        .into_bytes(),
    };
    write_out(&r.out, &bytes)?;
    let ok = rep.count_cv == rep.closed_xi && rep.axkatz_holds();
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_witness(c: &Common) -> Result<ExitCode, Error> {
    let r = resolve(c)?;
    let beta = beta_for(&r.cfg)?;
    let budget = Budget(r.cfg.budget);
    let s = SymplecticSpace::standard(beta.modulus(), r.cfg.r)?;
    let outcome = find_obstruction_witness(&beta, &s, budget, r.cfg.partitions)?;
    let bytes = match &outcome {
        WitnessOutcome::Found(w) => {
            let unramified = unramified_check(&w.b, &beta, budget, r.cfg.partitions)?;
            match r.format {
                OutFormat::Json => json(&serde_json::json!({
                    "status": "found",
                    "b": w.b.coeffs(),
                    "xi": w.xi.to_rows(),
                    "value": w.value,
                    "method": w.method,
                    "unramified": unramified,
                })),
                OutFormat::Text => format!(
                    "b = {:?}\nxi = {:?}\nW(b, xi) = {}/p\nunramified: {unramified}\n",
                    w.b.coeffs(),
                    w.xi.to_rows(),
                    w.value
                )
                .into_bytes(),
            }
        }
        WitnessOutcome::Exhausted => match r.format {
            OutFormat::Json => json(&serde_json::json!({ "status": "exhausted" })),
            OutFormat::Text => b"exhausted: E_v = C_v\n".to_vec(),
        },
    };
    write_out(&r.out, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(c: &Common) -> Result<ExitCode, Error> {
    let r = resolve(c)?;
    let cert = run_pipeline(&r.cfg)?;
    let format = match r.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    write_out(&r.out, &emit_certificate(&cert, format)?)?;
    Ok(match cert.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Incomplete => ExitCode::from(3),
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode, Error> {
    let bytes = std::fs::read(&a.certificate).map_err(|e| Error::Io(format!("{}: {e}", a.certificate.display())))?;
    let level = match a.level {
        Level::Structural => RecheckLevel::Structural,
        Level::Full => RecheckLevel::Full,
    };
    let parts = a
        .partitions
        .unwrap_or_else(bicert_core::fpcore::enumerate::default_partitions);
    let report = verify_certificate(&bytes, level, parts)?;
    if report.passed() {
        println!("verify ({:?}): pass", report.level);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verify ({:?}): fail", report.level);
        for p in &report.problems {
            println!("  {p}");
        }
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::BuildBeta(c) => cmd_build_beta(c),
        Command::Count(c) => cmd_count(c),
        Command::Witness(c) => cmd_witness(c),
        Command::Certify(c) => cmd_certify(c),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bicert: {e}");
            if e.is_budget() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
