use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use hdl::config::{parse_list, Experiment, InstanceConfig};
use hdl::{oracles, Instance};

#[derive(Parser)]
#[command(name = "hdl", version, about = "Higher-level Deligne-Lusztig characters of GL_n over finite chain rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance config (`key = value` lines or JSON); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ring key, e.g. `mixed:p3:e1:r3:a1`.
    #[arg(long)]
    ring: Option<String>,
    /// Torus partition, e.g. `1,1` (split) or `2` (elliptic).
    #[arg(long)]
    torus: Option<String>,
    /// `all`, `generic`, `sample:N` or explicit exponents `e1,e2;...`.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// Enumeration guard.
    #[arg(long)]
    guard: Option<u64>,
    /// Directory for the CSV and JSON reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Genericity flags of every selected character.
    Classify(Common),
    /// Build ρ̂_θ and check its dimension and that of the induced character.
    Build(Common),
    /// Build, then check dimensions, regular semisimple values, irreducibility and Ω.
    Verify(Common),
    /// Regular fractions over F_{q^m}, m = 1..=max-m (split torus).
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        max_m: u32,
    },
    /// The orbit Ω(χ) of each selected character.
    Orbit(Common),
    /// Distinct induced characters over one regular orbit.
    Hill(Common),
    /// Compare optimised paths against brute-force oracles.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Comma-separated oracle names, or `all`.
        #[arg(long, default_value = "all")]
        name: String,
        /// Random elements for the induction oracle.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Characters per oracle.
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Run the experiments listed in the config file.
    Run(Common),
}

fn load(common: &Common, experiments: Option<Vec<Experiment>>) -> Result<InstanceConfig> {
    let mut c = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            InstanceConfig::parse(&text)?
        }
        None => InstanceConfig::default(),
    };
    if let Some(r) = &common.ring {
        c.ring = r.clone();
    }
    if let Some(t) = &common.torus {
        c.torus = parse_list(t)?;
        c.n = 0;
    }
    if let Some(t) = &common.theta {
        c.theta = t.parse()?;
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    if let Some(t) = common.threads {
        c.threads = t;
    }
    if let Some(g) = common.guard {
        c.guard = g;
        c.oracle_guard = c.oracle_guard.min(g);
    }
    if let Some(e) = experiments {
        c.experiments = e;
    }
    c.finish()
}

fn run_experiments(common: &Common, config: InstanceConfig) -> Result<bool> {
    let start = Instant::now();
    let report = hdl::run(&config)?;
    for e in &report.experiments {
        println!("{} {:<9} {} [{}]", if e.passed { "PASS" } else { "FAIL" }, e.name, e.summary, report.instance);
    }
    if let Some(dir) = &common.out {
        for p in report.write(dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    eprintln!("elapsed {:.2?}", start.elapsed());
    Ok(report.passed())
}

fn run_oracles(common: &Common, config: InstanceConfig, names: &str, samples: usize, limit: usize) -> Result<bool> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build()?;
    let results = pool.install(|| {
        let inst = Instance::new(config)?;
        oracles::run(&inst, &parse_list::<String>(names)?, samples, limit)
    })?;
    for r in &results {
        println!("{} {:<14} {} [{}]", if r.passed { "PASS" } else { "FAIL" }, r.oracle, r.detail, r.instance);
    }
    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("oracles.json");
        std::fs::write(&path, serde_json::to_string_pretty(&results)? + "\n")?;
        eprintln!("wrote {}", path.display());
    }
    eprintln!("elapsed {:.2?}", start.elapsed());
    Ok(!results.is_empty() && results.iter().all(|r| r.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    use Experiment::*;
    let outcome = match &cli.command {
        Command::Classify(c) => load(c, Some(vec![Classify])).and_then(|cfg| run_experiments(c, cfg)),
        Command::Build(c) => load(c, Some(vec![Build, Dim])).and_then(|cfg| run_experiments(c, cfg)),
        Command::Verify(c) => load(c, Some(vec![Build, Dim, Rss, Irred, Omega])).and_then(|cfg| run_experiments(c, cfg)),
        Command::Density { common, max_m } => load(common, Some(vec![Density])).and_then(|mut cfg| {
            cfg.density_max_m = *max_m;
            run_experiments(common, cfg)
        }),
        Command::Orbit(c) => load(c, Some(vec![Omega])).and_then(|cfg| run_experiments(c, cfg)),
        Command::Hill(c) => load(c, Some(vec![Hill])).and_then(|cfg| run_experiments(c, cfg)),
        Command::Oracle { common, name, samples, limit } => {
            load(common, Some(vec![])).and_then(|cfg| run_oracles(common, cfg, name, *samples, *limit))
        }
        Command::Run(c) => load(c, None).and_then(|cfg| run_experiments(c, cfg)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
