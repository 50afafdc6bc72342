//! Command-line driver: certify the built-in example metrics, verify
//! user-supplied coefficient functions, and print Berger verdicts.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 usage/config
//! errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use g2hol::algebra::registry;
use g2hol::berger::{berger_verdict, BergerVerdict};
use g2hol::coframe::{build_case, builtin_examples, CaseConfig, CaseId};
use g2hol::holonomy::{certify_built, CertifyConfig, HolonomyCertificate, Tolerances};

#[derive(Parser)]
#[command(
    name = "g2hol",
    version,
    about = "Split-G2 holonomy metrics: construction and certification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the certification battery on the built-in example metrics.
    Examples(ExamplesArgs),
    /// Certify user-supplied slot functions from a JSON case config.
    Verify(VerifyArgs),
    /// Berger-criterion verdict for a named subalgebra.
    Berger(BergerArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Sample points for constraint and signature checks.
    #[arg(long)]
    points: Option<usize>,
    /// Seed of the point generator (reports are byte-stable per seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for independent cases.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the JSON report here instead of only printing the summary.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Max allowed constraint residual.
    #[arg(long)]
    tolerance_pde: Option<f64>,
    /// Max allowed connection-form membership residual.
    #[arg(long)]
    tolerance_theta: Option<f64>,
    /// Max allowed curvature membership residual.
    #[arg(long)]
    tolerance_membership: Option<f64>,
    /// Relative singular-value cutoff for span dimensions.
    #[arg(long)]
    tolerance_span: Option<f64>,
    /// Max allowed transport-log membership residual.
    #[arg(long)]
    tolerance_transport: Option<f64>,
    /// Required spectral gap between retained and discarded singular values.
    #[arg(long)]
    min_gap: Option<f64>,
}

impl TolArgs {
    fn apply(&self, tol: &mut Tolerances) {
        if let Some(x) = self.tolerance_pde {
            tol.pde = x;
        }
        if let Some(x) = self.tolerance_theta {
            tol.theta = x;
        }
        if let Some(x) = self.tolerance_membership {
            tol.membership = x;
        }
        if let Some(x) = self.tolerance_span {
            tol.span_rel = x;
        }
        if let Some(x) = self.tolerance_transport {
            tol.transport = x;
        }
        if let Some(x) = self.min_gap {
            tol.gap_min = x;
        }
    }
}

#[derive(Args)]
struct ExamplesArgs {
    /// Restrict to one case (1a, 1b, 1c, 1d, 2a, 2b, 2c, 2d).
    #[arg(long)]
    case: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON config: {"case": "...", "slots": {...}, "domain": {"lo","hi"}, "points", "seed"}.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct BergerArgs {
    /// Registry name (gl2_m12, sl2_m12, co2_m12, d_m12, rdiag10_m11,
    /// rdiag10_m12, m11, m12, h_III, g2star, p1, so43) or a parametric
    /// family like "r_Ca(1)", "rdiag1mu(-3/2)".
    #[arg(long)]
    algebra: String,
    /// Write the JSON verdict here as well.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ExamplesReport {
    seed: u64,
    points: usize,
    tolerances: Tolerances,
    certificates: Vec<HolonomyCertificate>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Examples(args) => cmd_examples(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Berger(args) => cmd_berger(args),
    };
    match code {
        Ok(c) => c,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn make_config(run: &RunArgs, base: CertifyConfig) -> CertifyConfig {
    let mut cfg = base;
    if let Some(p) = run.points {
        cfg.points = p.max(1);
    }
    if let Some(s) = run.seed {
        cfg.seed = s;
    }
    run.tol.apply(&mut cfg.tol);
    cfg
}

fn print_table(certs: &[HolonomyCertificate]) {
    let header = format!(
        "{:<5} {:<13} {:>6} {:>6} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}  verdict",
        "case", "algebra", "expect", "spanR", "spanTot", "gap", "pde", "theta", "curv", "transport"
    );
    println!("{header}");
    for c in certs {
        println!(
            "{:<5} {:<13} {:>6} {:>6} {:>8} {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e}  {}",
            c.case,
            c.expected_algebra,
            c.expected_dim,
            c.span_dim_r,
            c.span_dim_total,
            c.gap,
            c.pde_residual,
            c.theta_residual,
            c.curvature_residual,
            c.transport_residual,
            c.verdict
        );
    }
}

fn write_out(path: &Option<PathBuf>, json: &str) -> anyhow::Result<()> {
    if let Some(p) = path {
        std::fs::write(p, json)?;
    }
    Ok(())
}

fn cmd_examples(args: ExamplesArgs) -> anyhow::Result<ExitCode> {
    let cfg = make_config(&args.run, CertifyConfig::default());
    let selected: Vec<(CaseId, BTreeMap<String, String>)> = match &args.case {
        None => builtin_examples(),
        Some(name) => {
            let id = CaseId::parse(name)
                .ok_or_else(|| anyhow::anyhow!("unknown case `{name}` (expected 1a..2d)"))?;
            builtin_examples()
                .into_iter()
                .filter(|(c, _)| *c == id)
                .collect()
        }
    };

    // order-stable parallel map over the selected cases
    let jobs = args.run.jobs.clamp(1, selected.len().max(1));
    let chunk_size = selected.len().div_ceil(jobs);
    let mut certs: Vec<Option<HolonomyCertificate>> = vec![None; selected.len()];
    let results = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (chunk_idx, chunk) in selected.chunks(chunk_size).enumerate() {
            let handle = scope.spawn(move || {
                let mut out = Vec::new();
                for (off, (case, slots)) in chunk.iter().enumerate() {
                    let res = build_case(*case, slots)
                        .map_err(anyhow::Error::from)
                        .and_then(|built| Ok(certify_built(&built, &cfg)?));
                    out.push((chunk_idx * chunk_size + off, res));
                }
                out
            });
            handles.push(handle);
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<_>>()
    });
    for (idx, res) in results {
        certs[idx] = Some(res?);
    }
    let certs: Vec<HolonomyCertificate> = certs.into_iter().map(Option::unwrap).collect();

    print_table(&certs);
    let all_pass = certs.iter().all(|c| c.verdict == "pass");
    let report = ExamplesReport {
        seed: cfg.seed,
        points: cfg.points,
        tolerances: cfg.tol,
        certificates: certs,
    };
    let json = serde_json::to_string_pretty(&report)? + "\n";
    write_out(&args.run.out, &json)?;
    if all_pass {
        println!("all cases pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verification failure: see table above");
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", args.config.display()))?;
    let file: CaseConfig = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("config parse error: {e}"))?;
    let case_id = CaseId::parse(&file.case)
        .ok_or_else(|| anyhow::anyhow!("unknown case `{}` (expected 1a..2d)", file.case))?;

    let mut base = CertifyConfig::default();
    if let Some(d) = file.domain {
        base.domain = d;
    }
    if let Some(p) = file.points {
        base.points = p.max(1);
    }
    if let Some(s) = file.seed {
        base.seed = s;
    }
    let cfg = make_config(&args.run, base);

    // config errors (bad expressions, forbidden variables) are exit code 2
    let built = build_case(case_id, &file.slots).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cert = certify_built(&built, &cfg)?;

    print_table(std::slice::from_ref(&cert));
    let json = serde_json::to_string_pretty(&cert)? + "\n";
    write_out(&args.run.out, &json)?;
    if args.run.out.is_none() {
        print!("{json}");
    }
    if cert.verdict == "pass" {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_berger(args: BergerArgs) -> anyhow::Result<ExitCode> {
    let algebra = registry()
        .get(&args.algebra)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let verdict: BergerVerdict = berger_verdict(&algebra);
    let json = serde_json::to_string_pretty(&verdict)? + "\n";
    print!("{json}");
    write_out(&args.out, &json)?;
    if verdict.berger_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
