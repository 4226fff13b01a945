use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eisen_core::eisenstein::{EisensteinTable, Recurrence};
use eisen_core::gekeler::{phi_by_division, valuation_profile};
use eisen_core::irreducibility::{dumas_check, newton_polygon, verify_certificate};
use eisen_core::poly::RationalPoly;
use eisen_core::replicate::{
    check_conjecture_on, check_lemma_ineq, check_lemma_valsum, check_min_valuation_on,
    check_theorem_main_on, gekeler_scan_on, selftest_with, CheckReport, SelftestConfig,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "eisen", version, about = "Exact Eisenstein series and Gekeler polynomial checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for per-weight checks (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Write the Eisenstein table used by the command as CSV `k,a,b,w`.
    #[arg(long, global = true, value_name = "PATH")]
    table_dump: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dual recurrence, q-expansion and phi-route cross-checks.
    Selftest,
    /// Coefficients w_{a,k} of G_k/pi^k in the G4/G6 basis.
    Wk {
        #[arg(long)]
        k: u32,
    },
    /// The polynomial phi_k and its 2-adic valuation profile.
    Phi {
        #[arg(long)]
        k: u32,
    },
    /// Lemma-level checks over a weight range.
    Check {
        #[arg(long, value_enum)]
        lemma: Lemma,
        /// Largest weight (default depends on the check).
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Dumas certificates at 2 for phi_{12*2^l}, 0 <= l <= L.
    Theorem {
        #[arg(long, default_value_t = 5)]
        ell_max: u32,
    },
    /// Irreducibility verdicts for every phi_k with k <= N.
    Scan {
        #[arg(long, default_value_t = 446)]
        k_max: u32,
    },
    /// Newton polygon and Dumas check of a polynomial file.
    Newton {
        /// One `num/den` coefficient per line, constant term first.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Re-check a certificate (or a report's certificates) from JSON.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Lemma {
    Valsum,
    Ineq,
    Min,
    Conjecture,
}

impl Lemma {
    fn default_k_max(self) -> u32 {
        match self {
            Lemma::Valsum => 1024,
            Lemma::Ineq => 512,
            Lemma::Min | Lemma::Conjecture => 500,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

impl GlobalOpts {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

/// Rendered output and whether every check passed.
struct Outcome {
    body: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli).and_then(|outcome| {
        emit(&cli.global, &outcome.body)?;
        Ok(outcome.ok)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(opts: &GlobalOpts, body: &str) -> Result<()> {
    match &opts.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn table(opts: &GlobalOpts, k_max: u32) -> Result<EisensteinTable> {
    let table = EisensteinTable::build(k_max.max(6), Recurrence::Rademacher)?;
    if let Some(path) = &opts.table_dump {
        dump_table(&table, path)?;
    }
    Ok(table)
}

fn dump_table(table: &EisensteinTable, path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = io::BufWriter::new(file);
    table.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn report_outcome(report: &CheckReport, format: Format) -> Outcome {
    let body = match format {
        Format::Json => report.to_json_string() + "\n",
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Outcome {
        body,
        ok: report.passed(),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.global;
    let format = opts.format();
    let started = Instant::now();
    match &cli.command {
        Command::Selftest => {
            let config = SelftestConfig::default();
            let t = table(opts, config.table_k_max())?;
            Ok(report_outcome(&selftest_with(&t, &config, started), format))
        }
        Command::Wk { k } => run_wk(opts, *k, format),
        Command::Phi { k } => run_phi(opts, *k, format),
        Command::Check { lemma, k_max } => {
            let k_max = k_max.unwrap_or(lemma.default_k_max());
            let report = match lemma {
                Lemma::Valsum => check_lemma_valsum(k_max),
                Lemma::Ineq => check_lemma_ineq(k_max),
                Lemma::Min => check_min_valuation_on(&table(opts, k_max)?, k_max, started),
                Lemma::Conjecture => check_conjecture_on(&table(opts, k_max)?, k_max, started),
            };
            Ok(report_outcome(&report, format))
        }
        Command::Theorem { ell_max } => {
            if *ell_max > 10 {
                bail!("--ell-max {ell_max} is beyond the supported range 0..=10");
            }
            let t = table(opts, 12 << ell_max)?;
            Ok(report_outcome(&check_theorem_main_on(&t, *ell_max, started), format))
        }
        Command::Scan { k_max } => {
            let t = table(opts, *k_max)?;
            Ok(report_outcome(&gekeler_scan_on(&t, *k_max, started), format))
        }
        Command::Newton { poly, p } => run_newton(poly, *p, format),
        Command::Verify { cert } => run_verify(cert, format),
    }
}

fn run_wk(opts: &GlobalOpts, k: u32, format: Format) -> Result<Outcome> {
    if k < 4 || k % 2 == 1 {
        bail!("--k must be an even integer >= 4, got {k}");
    }
    let t = table(opts, k)?;
    let w = t.get(k)?;
    let body = match format {
        Format::Json => {
            let entries: Vec<_> = w
                .iter()
                .map(|(a, b, c)| json!({ "a": a, "b": b, "w": c.to_ratio_string() }))
                .collect();
            serde_json::to_string_pretty(&json!({
                "k": k,
                "provenance": t.provenance(k).map(|p| p.to_string()),
                "coefficients": entries,
            }))? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("k,a,b,w\n");
            for (a, b, c) in w.iter() {
                s.push_str(&format!("{k},{a},{b},{}\n", c.to_ratio_string()));
            }
            s
        }
        Format::Text => {
            let mut s = format!("G_{k}/pi^{k} = sum of w * (G4/pi^4)^a (G6/pi^6)^b\n");
            for (a, b, c) in w.iter() {
                s.push_str(&format!("  a = {a:>3}  b = {b:>3}  w = {c}\n"));
            }
            s
        }
    };
    Ok(Outcome { body, ok: true })
}

fn run_phi(opts: &GlobalOpts, k: u32, format: Format) -> Result<Outcome> {
    if k < 4 || k % 2 == 1 {
        bail!("--k must be an even integer >= 4, got {k}");
    }
    let t = table(opts, k)?;
    let phi = phi_by_division(k, &t)?;
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&phi.to_json(2)?)? + "\n",
        Format::Csv => {
            let profile = valuation_profile(&phi, 2)?;
            let mut s = String::from("r,t,nu2\n");
            for (r, c) in phi.coefficients().iter().enumerate() {
                let nu = profile.get(r).map(|v| v.to_string()).unwrap_or_default();
                s.push_str(&format!("{r},{},{nu}\n", c.to_ratio_string()));
            }
            s
        }
        Format::Text => {
            let (delta, epsilon) = phi.elliptic_exponents();
            let profile = valuation_profile(&phi, 2)?;
            let nus: Vec<String> = profile.iter().map(|v| v.to_string()).collect();
            format!(
                "phi_{k} = {}\ndegree {}, delta {delta}, epsilon {epsilon}\nnu_2(t_0..t_(m-1)) = [{}]\n",
                phi.poly(),
                phi.degree(),
                nus.join(", ")
            )
        }
    };
    Ok(Outcome { body, ok: true })
}

fn run_newton(path: &Path, p: u64, format: Format) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = RationalPoly::parse_lines(&text)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| f.to_string());
    let cert = dumas_check(&f, p)?.with_label(label);
    let polygon = newton_polygon(&f, p).ok();
    let body = match format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "certificate": cert, "newton_polygon": polygon }))?
                + "\n"
        }
        Format::Csv => {
            let mut s = String::from("r,nu_p\n");
            for (r, v) in cert.valuations.iter().enumerate() {
                s.push_str(&format!("{r},{v}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!("f = {f}\nprime {p}\n");
            match &polygon {
                Some(np) => {
                    let vs: Vec<String> = np.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
                    s.push_str(&format!("Newton polygon vertices: {}\n", vs.join(" ")));
                    for seg in &np.segments {
                        s.push_str(&format!(
                            "  slope {}/{} length {}\n",
                            seg.slope_num, seg.slope_den, seg.length
                        ));
                    }
                }
                None => s.push_str("Newton polygon: undefined (zero constant term)\n"),
            }
            let verdict = serde_json::to_value(cert.verdict)?;
            s.push_str(&format!("Dumas verdict: {}", verdict.as_str().unwrap_or("?")));
            if let Some(reason) = &cert.reason {
                s.push_str(&format!(" ({reason})"));
            }
            s.push('\n');
            s
        }
    };
    Ok(Outcome { body, ok: true })
}

fn run_verify(path: &Path, format: Format) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let certs: Vec<serde_json::Value> = match value.get("certificates") {
        Some(serde_json::Value::Array(list)) => list.clone(),
        _ => match value.get("certificate") {
            Some(c) => vec![c.clone()],
            None => vec![value],
        },
    };
    let results: Vec<(String, std::result::Result<(), String>)> = certs
        .iter()
        .map(|c| {
            let label = c["poly"]["label"].as_str().unwrap_or("?").to_string();
            (label, verify_certificate(c).map_err(|e| e.to_string()))
        })
        .collect();
    let ok = !results.is_empty() && results.iter().all(|(_, r)| r.is_ok());
    let body = match format {
        Format::Json => {
            let list: Vec<_> = results
                .iter()
                .map(|(label, r)| json!({ "label": label, "valid": r.is_ok(), "error": r.as_ref().err() }))
                .collect();
            serde_json::to_string_pretty(&json!({ "valid": ok, "certificates": list }))? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("label,valid\n");
            for (label, r) in &results {
                s.push_str(&format!("{label},{}\n", r.is_ok()));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (label, r) in &results {
                match r {
                    Ok(()) => s.push_str(&format!("{label}: valid\n")),
                    Err(e) => s.push_str(&format!("{label}: INVALID ({e})\n")),
                }
            }
            s.push_str(if ok { "all certificates valid\n" } else { "verification FAILED\n" });
            s
        }
    };
    Ok(Outcome { body, ok })
}
