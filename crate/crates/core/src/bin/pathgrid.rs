use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pathgrid::constructions::{alpha_formula, ConstructionKind};
use pathgrid::grid::DEFAULT_SIZE_CAP;
use pathgrid::report::{self, TableKind, DEFAULT_MAX_SIZE, DEFAULT_SEED, DEFAULT_TOL};
use pathgrid::search::{
    brute_force_f, f_value_theorem, max_independent_set, random_subset, FSearchOptions,
    SearchBudget,
};
use pathgrid::signed::{self, Parity};
use pathgrid::spectral::{self, multiset_distance, SpectrumReport, Tolerances};
use pathgrid::{Error, PathPower};

#[derive(Parser)]
#[command(name = "pathgrid", version, about = "Induced-degree experiments on powers of paths")]
struct Cli {
    /// Refuse to build graphs or matrices with more vertices than this.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u64,
    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// RNG seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Vk,
    Vkc,
    Xk,
    Xkc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Odd3,
    Even,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Bounds,
    Beta,
    Alpha,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit one of the vertex-set constructions as JSON ranks.
    Construct {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
    },
    /// Write a signed matrix in MatrixMarket format.
    Matrix {
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Half the path length for the even family; must be 1 for odd3.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    Spectrum {
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Use the Kronecker composition instead of a dense solve.
        #[arg(long)]
        compose: bool,
        /// With --compose, also run the dense solve and report the distance.
        #[arg(long)]
        dense: bool,
    },
    /// Smallest positive root of g_n.
    Beta {
        #[arg(long)]
        n: u32,
    },
    Alpha {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Confirm the formula with an exact search.
        #[arg(long)]
        brute: bool,
    },
    F {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Subset size is alpha + s.
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        max_subsets: Option<u64>,
        #[arg(long)]
        max_seconds: Option<f64>,
    },
    /// Draw a seeded random subset of size alpha + 1.
    Sample {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
    },
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: u64,
    },
    ExportTable {
        #[arg(long, value_enum)]
        kind: TableArg,
        #[arg(long, default_value = "2..7", value_parser = parse_range)]
        m_range: (u32, u32),
        #[arg(long, default_value = "1..4", value_parser = parse_range)]
        k_range: (u32, u32),
        #[arg(long, default_value = "1..10", value_parser = parse_range)]
        n_range: (u32, u32),
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed {s:?}: {e}"))
}

/// `a..b` (inclusive) or a single value.
fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let a: u32 = a.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::SizeCap { .. }
            | Error::InvalidVertex(_)
            | Error::RankOutOfRange { .. }
            | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn text(&self, s: &str) -> Result<(), Failure> {
        let mut w = self.writer()?;
        w.write_all(s.as_bytes())?;
        if !s.ends_with('\n') {
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    fn json(&self, v: &Value) -> Result<(), Failure> {
        self.text(&serde_json::to_string_pretty(v).expect("serializable"))
    }
}

fn parity(p: ParityArg) -> Parity {
    match p {
        ParityArg::Odd3 => Parity::Odd3,
        ParityArg::Even => Parity::Even,
    }
}

fn spectrum_json(s: &SpectrumReport) -> Value {
    json!({
        "eigenvalues": s.eigenvalues,
        "min_positive": s.min_positive,
        "zero_multiplicity": s.zero_multiplicity,
    })
}

fn check_size(m: u32, k: u32, cap: u64) -> Result<(), Failure> {
    if m < 2 || k < 1 {
        return Err(Failure::Usage(format!("need m >= 2 and k >= 1, got m={m} k={k}")));
    }
    match (m as u64).checked_pow(k) {
        Some(v) if v <= cap => Ok(()),
        _ => Err(Error::SizeCap { m, k, cap }.into()),
    }
}

fn json_only(format: Format, cmd: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("{cmd} has no CSV output")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let out = Output { path: cli.out.clone() };
    let cap = cli.size_cap;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    match cli.cmd {
        Cmd::Construct { kind, m, k } => {
            let kind = match kind {
                KindArg::Vk => ConstructionKind::Vk,
                KindArg::Vkc => ConstructionKind::VkComplement,
                KindArg::Xk => ConstructionKind::Xk,
                KindArg::Xkc => ConstructionKind::XkComplement,
            };
            check_size(m, k, cap)?;
            let set = report::construct(kind, m, k, cap)?;
            match cli.format {
                Format::Json => out.json(&serde_json::to_value(&set).expect("serializable"))?,
                Format::Csv => {
                    let g = set.graph();
                    let mut s = String::from("rank,coords\n");
                    for r in set.iter() {
                        let c: Vec<String> = g.unrank(r)?.coords().iter().map(u32::to_string).collect();
                        s.push_str(&format!("{r},{}\n", c.join(" ")));
                    }
                    out.text(&s)?;
                }
            }
        }
        Cmd::Matrix { parity: p, n, k } => {
            json_only(cli.format, "matrix")?;
            let a = signed::build(parity(p), n, k, cap)?;
            let mut w = out.writer()?;
            a.write_matrix_market(&mut w)?;
            w.flush()?;
        }
        Cmd::Spectrum { parity: p, n, k, compose, dense } => {
            let p = parity(p);
            check_size(p.path_len(n), k, cap)?;
            let tol = Tolerances {
                group: cli.tol.unwrap_or(DEFAULT_TOL),
                ..Tolerances::default()
            };
            let s = if compose {
                spectral::composed_spectrum(p, n, k, &tol)?
            } else {
                spectral::dense_spectrum(&signed::build(p, n, k, cap)?, &tol)?
            };
            if cli.format == Format::Csv {
                let mut t = String::from("index,eigenvalue\n");
                for (i, l) in s.eigenvalues.iter().enumerate() {
                    t.push_str(&format!("{i},{l}\n"));
                }
                return out.text(&t).map(|_| true);
            }
            let mut v = spectrum_json(&s);
            if compose && dense {
                let d = spectral::dense_spectrum(&signed::build(p, n, k, cap)?, &tol)?;
                let dist = multiset_distance(&s.eigenvalues, &d.eigenvalues);
                v["dense"] = spectrum_json(&d);
                v["multiset_distance"] = json!(dist);
            }
            out.json(&v)?;
        }
        Cmd::Beta { n } => {
            json_only(cli.format, "beta")?;
            let tol = cli.tol.unwrap_or(1e-12);
            let b = spectral::beta(n, tol)?;
            out.json(&json!({ "n": n, "beta": b, "tol": tol }))?;
        }
        Cmd::Alpha { m, k, brute } => {
            json_only(cli.format, "alpha")?;
            if m < 2 || k < 1 {
                return Err(Failure::Usage(format!("need m >= 2 and k >= 1, got m={m} k={k}")));
            }
            if (m as u128).checked_pow(k).is_none() {
                return Err(Failure::Usage("m^k overflows".into()));
            }
            let formula = alpha_formula(m, k);
            let mut v = json!({ "m": m, "k": k, "alpha": formula.to_string() });
            if brute {
                check_size(m, k, cap)?;
                let r = max_independent_set(&PathPower::with_cap(m, k, cap)?, &SearchBudget::default())?;
                v["search"] = json!({
                    "size": r.size,
                    "proven_optimal": r.proven_optimal,
                    "witness": r.witness.ranks(),
                    "nodes": r.nodes,
                });
                out.json(&v)?;
                return Ok(r.proven_optimal && r.size as u128 == formula);
            }
            out.json(&v)?;
        }
        Cmd::F { m, k, s, brute, workers, max_subsets, max_seconds } => {
            json_only(cli.format, "f")?;
            if !brute {
                if s != 1 {
                    return Err(Failure::Usage("closed-form values exist only for s = 1; use --brute".into()));
                }
                let t = f_value_theorem(m, k)?;
                out.json(&json!({
                    "m": m, "k": k, "value": t.value, "kind": t.kind,
                    "witness": Value::Null, "subsets_examined": 0,
                }))?;
                return Ok(true);
            }
            check_size(m, k, cap)?;
            if workers == 0 {
                return Err(Failure::Usage("--workers must be >= 1".into()));
            }
            let mut budget = SearchBudget { workers, ..SearchBudget::default() };
            if let Some(n) = max_subsets {
                budget.max_subsets = n;
            }
            if let Some(t) = max_seconds {
                if t.is_nan() || t <= 0.0 {
                    return Err(Failure::Usage("--max-seconds must be positive".into()));
                }
                budget.max_seconds = t;
            }
            let g = PathPower::with_cap(m, k, cap)?;
            let r = brute_force_f(&g, s, &budget, &FSearchOptions::default())?;
            out.json(&json!({
                "m": m, "k": k, "s": s,
                "value": r.value,
                "kind": r.kind,
                "witness": r.witness.as_ref().map(|w| w.ranks()),
                "subset_size": r.subset_size,
                "alpha": r.alpha,
                "subsets_examined": r.subsets_examined,
            }))?;
        }
        Cmd::Sample { m, k } => {
            json_only(cli.format, "sample")?;
            check_size(m, k, cap)?;
            let g = PathPower::with_cap(m, k, cap)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let set = random_subset(&g, pathgrid::search::alpha_plus_one(&g), &mut rng)?;
            let d = set.induced_max_degree()?;
            out.json(&json!({ "m": m, "k": k, "seed": seed, "ranks": set.ranks(), "max_degree": d }))?;
        }
        Cmd::VerifyAll { max_size } => {
            json_only(cli.format, "verify-all")?;
            let r = report::run_verify_all(max_size, cli.tol.unwrap_or(DEFAULT_TOL), seed);
            for c in &r.checks {
                eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            out.json(&serde_json::to_value(&r).expect("serializable"))?;
            return Ok(r.passed);
        }
        Cmd::ExportTable { kind, m_range, k_range, n_range } => {
            let kind = match kind {
                TableArg::Bounds => TableKind::Bounds,
                TableArg::Beta => TableKind::Beta,
                TableArg::Alpha => TableKind::Alpha,
            };
            let t = report::export_table(
                kind,
                m_range.0..=m_range.1,
                k_range.0..=k_range.1,
                n_range.0..=n_range.1,
                cli.tol.unwrap_or(1e-12),
            )?;
            match cli.format {
                Format::Csv => out.text(&t.to_csv())?,
                Format::Json => out.json(&serde_json::to_value(&t).expect("serializable"))?,
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
