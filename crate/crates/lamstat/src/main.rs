use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lamstat::report::{run_experiment, Config, Experiment, OutputFormat};
use lamstat::Error;

/// Exact λ-ring statistics: random matrices, character L-functions and hypersurfaces.
#[derive(Parser, Debug)]
#[command(name = "lamstat", version)]
struct Cli {
    /// Configuration file (`key=value` lines or a JSON object); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory holding oracle fixtures.
    #[arg(long, global = true)]
    fixtures_dir: Option<PathBuf>,
    /// Directory receiving the report file.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (0 keeps the default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-n and limiting moment generating functions of compact groups.
    Randmat(RandmatArgs),
    /// Statistics of Kummer character L-functions over F_q[x].
    Chars(CharsArgs),
    /// Point-count statistics of smooth hypersurfaces in projective space.
    Hypersurf(HypersurfArgs),
    /// Exact identities between plethystic operations.
    Identities(IdentitiesArgs),
    /// Congruences between L-function limits and random matrix series.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct RandmatArgs {
    /// One of sym, sym-std, u, o, so, sp.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trunc: Option<usize>,
    /// Coefficients to report, such as `2,1` or `1,1|1,1`.
    #[arg(long, num_args = 1..)]
    tau: Vec<String>,
    #[arg(long)]
    mc_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct CharsArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    dmin: Option<usize>,
    #[arg(long)]
    dmax: Option<usize>,
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    witt: Option<usize>,
    /// empirical, limit or compare.
    #[arg(long)]
    mode: Option<String>,
    /// json, csv or table.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct HypersurfArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    i: Option<usize>,
    /// Hypersurfaces of dimension n in P^{n+1}.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dmin: Option<usize>,
    #[arg(long)]
    dmax: Option<usize>,
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    witt: Option<usize>,
    /// geo or vanishing.
    #[arg(long)]
    mode: Option<String>,
    /// plus or minus.
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    witt: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    trunc: Option<usize>,
    /// Ghost indices used to fit the bound; as many again are held out.
    #[arg(long)]
    witt: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_format(cfg: &mut Config, out: Option<String>) -> lamstat::Result<()> {
    if let Some(s) = out {
        cfg.format = OutputFormat::parse(&s)?;
    }
    Ok(())
}

fn build_config(cli: Cli) -> lamstat::Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if cli.fixtures_dir.is_some() {
        cfg.fixtures_dir = cli.fixtures_dir;
    }
    if cli.out_dir.is_some() {
        cfg.out_dir = cli.out_dir;
    }
    set(&mut cfg.threads, cli.threads);
    match cli.command {
        Command::Randmat(a) => {
            if cli.config.is_none() {
                cfg.trunc_degree = 6;
            }
            cfg.experiment = Experiment::Randmat;
            set(&mut cfg.group, a.group);
            set(&mut cfg.n, a.n);
            set(&mut cfg.trunc_degree, a.trunc);
            if !a.tau.is_empty() {
                cfg.tau = a.tau;
            }
            set(&mut cfg.mc_samples, a.mc_samples);
            set(&mut cfg.seed, a.seed);
            set_format(&mut cfg, a.out)?;
        }
        Command::Chars(a) => {
            cfg.experiment = Experiment::Chars;
            set(&mut cfg.q, a.q);
            set(&mut cfg.ell, a.ell);
            set(&mut cfg.i, a.i);
            set(&mut cfg.dmin, a.dmin);
            set(&mut cfg.dmax, a.dmax);
            set(&mut cfg.trunc_degree, a.trunc);
            set(&mut cfg.witt_len, a.witt);
            set(&mut cfg.mode, a.mode);
            set_format(&mut cfg, a.out)?;
        }
        Command::Hypersurf(a) => {
            if cli.config.is_none() {
                cfg.q = 2;
                cfg.n = 1;
                cfg.mode = "geo".into();
            }
            cfg.experiment = Experiment::Hypersurf;
            set(&mut cfg.q, a.q);
            set(&mut cfg.i, a.i);
            set(&mut cfg.n, a.n);
            set(&mut cfg.dmin, a.dmin);
            set(&mut cfg.dmax, a.dmax);
            set(&mut cfg.trunc_degree, a.trunc);
            set(&mut cfg.witt_len, a.witt);
            set(&mut cfg.mode, a.mode);
            set(&mut cfg.sign, a.sign);
            set_format(&mut cfg, a.out)?;
        }
        Command::Identities(a) => {
            cfg.experiment = Experiment::Identities;
            set(&mut cfg.q, a.q);
            set(&mut cfg.trunc_degree, a.trunc);
            set(&mut cfg.witt_len, a.witt);
            set_format(&mut cfg, a.out)?;
        }
        Command::Compare(a) => {
            cfg.experiment = Experiment::Compare;
            set(&mut cfg.trunc_degree, a.trunc);
            set(&mut cfg.witt_len, a.witt);
            set_format(&mut cfg, a.out)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|cfg| {
        let report = run_experiment(&cfg)?;
        print!("{}", report.render(cfg.format)?);
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
