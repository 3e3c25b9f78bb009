mod problem;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use splitlp::extend::{code_of, reduce_up_to_isomorphism, run_extension_search, ExtendError};
use splitlp::groups::{group_order, stochastic_automorphism_search};
use splitlp::interp::{configuration_from, parse, Command, ExecOptions, Interpreter};
use splitlp::lpcert::{
    certificate_to_text, parse_certificate, parse_system, system_to_text, verify_farkas, RetryPolicy,
};
use splitlp::rules::{Fact, FactDatabase};

#[derive(Parser)]
#[command(name = "splitlp", version, about = "Split linear programming proofs about binary linear codes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a proof script.
    Run {
        script: PathBuf,
        /// Fact database, read before and updated after the run.
        #[arg(long)]
        facts: Option<PathBuf>,
        /// Directory receiving one system and one certificate file per LP step.
        #[arg(long)]
        certs: Option<PathBuf>,
        /// Seed for randomized steps.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop before the next command once this many seconds have passed.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Largest denominator tried when rationalizing multipliers.
        #[arg(long)]
        max_denominator: Option<u64>,
        #[arg(long)]
        continue_on_error: bool,
    },
    /// Re-verify every certificate in a directory without solving.
    Check { certs: PathBuf },
    /// Stochastic automorphism search on a configuration file.
    SearchAut {
        config: PathBuf,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isomorph-free extension search.
    Extend {
        problem: PathBuf,
        /// Print a generator matrix for every surviving extension.
        #[arg(long)]
        codes: bool,
        /// Merge surviving extensions up to isomorphism.
        #[arg(long)]
        classes: bool,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect or extend a fact database.
    Facts {
        #[command(subcommand)]
        action: FactsCmd,
    },
}

#[derive(Subcommand)]
enum FactsCmd {
    List {
        db: PathBuf,
    },
    /// Append a line such as `FACT no [25,8,10] BY axiom`.
    Add {
        db: PathBuf,
        fact: String,
    },
}

fn load_db(path: &Path) -> Result<FactDatabase> {
    if !path.exists() {
        return Ok(FactDatabase::new());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FactDatabase::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn run(
    script: &Path,
    facts: Option<&Path>,
    certs: Option<&Path>,
    seed: u64,
    time_limit: Option<f64>,
    max_denominator: Option<u64>,
    continue_on_error: bool,
) -> Result<bool> {
    let start = Instant::now();
    let parsed = parse(&read(script)?).map_err(|e| anyhow!("{}:{e}", script.display()))?;
    let db = match facts {
        Some(p) => load_db(p)?,
        None => FactDatabase::new(),
    };
    let mut retry = RetryPolicy::default();
    if let Some(q) = max_denominator {
        retry = retry.with_max_denominator(q);
    }
    let mut interp = Interpreter::new(db, ExecOptions { retry, ..ExecOptions::default() });
    let limit = time_limit.map(Duration::from_secs_f64);
    let mut timed_out = false;
    let mut timings = Vec::new();
    for cmd in &parsed.commands {
        if limit.is_some_and(|l| start.elapsed() > l) {
            timed_out = true;
            break;
        }
        let t = Instant::now();
        let ok = interp.step(cmd);
        if !matches!(cmd, Command::Comment(_)) {
            timings.push((t.elapsed(), cmd.to_string()));
        }
        if !ok && !continue_on_error {
            break;
        }
    }
    let report = interp.report();
    print!("{report}");
    println!("SEED {seed}");
    for (t, cmd) in &timings {
        println!("TIME {:.3}s {cmd}", t.as_secs_f64());
    }
    println!("TIME {:.3}s total", start.elapsed().as_secs_f64());
    if timed_out {
        println!("STOPPED time limit reached");
    }
    if let Some(dir) = certs {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for c in &report.certificates {
            let stem = dir.join(format!("cert-{}", c.id));
            fs::write(stem.with_extension("system"), system_to_text(&c.system))?;
            fs::write(stem.with_extension("cert"), certificate_to_text(&c.id.to_string(), &c.certificate))?;
        }
    }
    if let Some(p) = facts {
        fs::write(p, report.database.to_text()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report.success() && !timed_out)
}

fn check(dir: &Path) -> Result<bool> {
    let mut certs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cert"))
        .collect();
    certs.sort();
    if certs.is_empty() {
        bail!("no certificates in {}", dir.display());
    }
    let mut all = true;
    for path in &certs {
        let system =
            parse_system(&read(&path.with_extension("system"))?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let (id, cert) = parse_certificate(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let ok = verify_farkas(&system, &cert).unwrap_or(false);
        all &= ok;
        println!(
            "{} {id} rows={} vars={}",
            if ok { "VERIFIED" } else { "REJECTED" },
            system.rows.len(),
            system.num_vars()
        );
    }
    println!("CHECKED {} certificates", certs.len());
    Ok(all)
}

fn search_aut(path: &Path, iters: usize, restarts: usize, seed: u64) -> Result<bool> {
    let script = parse(&read(path)?).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    let cfg = script
        .commands
        .iter()
        .find_map(|c| match c {
            Command::Config(c) => Some(c),
            _ => None,
        })
        .ok_or_else(|| anyhow!("{} has no config command", path.display()))?;
    let cfg = configuration_from(cfg)?;
    let found = stochastic_automorphism_search(&cfg, iters, restarts, seed);
    for g in &found {
        println!("automorphism {g};");
    }
    let order = group_order(&found, cfg.n()).map_err(|e| anyhow!("{e}"))?;
    println!("(* {} automorphisms found; they generate a group of order {order} *);", found.len());
    Ok(!found.is_empty())
}

fn extend(path: &Path, codes: bool, classes: bool, iters: usize, restarts: usize, seed: u64) -> Result<bool> {
    let problem = problem::parse_problem(&read(path)?)?;
    let (level, transcript) = match run_extension_search(&problem) {
        Ok(x) => x,
        Err(ExtendError::Capacity { level, cap, transcript }) => {
            print!("{transcript}");
            bail!("level {level} exceeded {cap} sequences");
        }
        Err(e) => return Err(e.into()),
    };
    print!("{transcript}");
    let found: Vec<_> = level.sequences.iter().map(|s| code_of(&problem, s)).collect();
    if codes {
        for (i, c) in found.iter().enumerate() {
            println!("CODE {i}");
            for r in c.generators().rows() {
                println!("  {r}");
            }
        }
    }
    if classes {
        let reduced = reduce_up_to_isomorphism(&found, iters, restarts, seed)?;
        for (i, r, g) in &reduced.merges {
            println!("ISOMORPHIC {i} {r} {g}");
        }
        println!("CLASSES at most {}", reduced.representatives.len());
    }
    Ok(true)
}

fn facts(action: FactsCmd) -> Result<bool> {
    match action {
        FactsCmd::List { db } => {
            let db = load_db(&db)?;
            for (i, f) in db.facts.iter().enumerate() {
                println!("{i}: {f}");
            }
        }
        FactsCmd::Add { db: path, fact } => {
            let mut db = load_db(&path)?;
            let fact: Fact = fact.parse().map_err(|e| anyhow!("{e}"))?;
            let i = db.add(fact).map_err(|e| anyhow!("{e}"))?;
            fs::write(&path, db.to_text())?;
            println!("{i}: {}", db.facts[i]);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Run { script, facts, certs, seed, time_limit, max_denominator, continue_on_error } => {
            run(&script, facts.as_deref(), certs.as_deref(), seed, time_limit, max_denominator, continue_on_error)
        }
        Cmd::Check { certs } => check(&certs),
        Cmd::SearchAut { config, iters, restarts, seed } => search_aut(&config, iters, restarts, seed),
        Cmd::Extend { problem, codes, classes, iters, restarts, seed } => {
            extend(&problem, codes, classes, iters, restarts, seed)
        }
        Cmd::Facts { action } => facts(action),
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
