mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Format, RatArg};

#[derive(Parser, Debug)]
#[command(name = "darboux-lab", version, about = "Exact certificates separating Riemann and Lebesgue integration")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Fat-cover parameter, 0 < ell < 1.
    #[arg(long, global = true)]
    ell: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Read the experiment from a TOML document instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct KindArg {
    /// F, G, typewriter or kurtz.
    #[arg(long)]
    kind: String,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// fat (A_k of the fat cover) or unit (the interval (0, 1)).
    #[arg(long, default_value = "fat")]
    source: String,
    #[arg(long)]
    k: Option<u64>,
    /// forward or inverse.
    #[arg(long)]
    direction: Option<String>,
    /// Widen by the truncation slack to bound the untruncated transform.
    #[arg(long)]
    untruncated: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cauchy modulus N for an L¹ tolerance.
    Cauchy {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long)]
        eps: String,
    },
    /// Enclosure of the L¹ distance from term k to the limit.
    Defect {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        probe_m: u64,
    },
    /// Pointwise behaviour at a rational probe (optionally shifted by q·√2).
    Pointwise {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long)]
        x: String,
        /// Coefficient of √2 added to x (G only).
        #[arg(long)]
        sqrt2: Option<String>,
        #[arg(long, default_value_t = 64)]
        jmax: u64,
    },
    /// Measure of {|f_j| >= eps} for j = 1..jmax.
    Inmeasure {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 64)]
        jmax: u64,
    },
    /// Check |f_j| <= g for j = 1..jmax.
    Dominate {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long, default_value_t = 16)]
        jmax: u64,
        /// one, zero, or a constant p/q.
        #[arg(long, default_value = "one")]
        g: String,
        /// ae or everywhere.
        #[arg(long, default_value = "ae")]
        mode: String,
        /// Use j·f_j instead of f_j.
        #[arg(long)]
        scaled: bool,
    },
    /// Upper and lower Darboux sums on a partition.
    Darboux {
        /// fat, rationals or term.
        #[arg(long, default_value = "fat")]
        function: String,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        j: Option<u64>,
        /// uniform:n, random:n[:seed], or a comma-separated list of breakpoints.
        #[arg(long, default_value = "uniform:16")]
        partition: String,
        /// Truncation depth for the fat cover.
        #[arg(short = 'K', long = "depth")]
        depth: Option<u64>,
        /// Override a point value, e.g. 1/3=0 (repeatable; fat only).
        #[arg(long)]
        edit: Vec<String>,
    },
    /// Certified lower bound on the Riemann gap.
    Gap {
        #[arg(long, default_value = "fat")]
        function: String,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        j: Option<u64>,
        #[arg(short = 'K', long = "depth")]
        depth: Option<u64>,
    },
    /// Certified Fourier transform values of an indicator.
    Ft {
        #[command(flatten)]
        source: SourceArgs,
        /// Frequencies, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        freq: Vec<String>,
        /// Working precision in bits.
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Bracket ‖χ‖₂² by ∫_{-R}^{R} |F|² plus a tail bound.
    Plancherel {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "R")]
        r: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Partial integrals of |F|² over increasing radii.
    L2profile {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// L² profile of F_k alongside the Riemann gap of G.
    FourierDefect {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        gap_depth: Option<u64>,
        #[arg(long = "R", value_delimiter = ',')]
        r: Vec<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Dump the j-th term of a family, optionally evaluated at x.
    Term {
        #[command(flatten)]
        kind: KindArg,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        x: Option<String>,
    },
}

fn rat(s: String) -> Option<RatArg> {
    Some(RatArg::Str(s))
}

fn rats(v: Vec<String>) -> Option<Vec<RatArg>> {
    if v.is_empty() {
        None
    } else {
        Some(v.into_iter().map(RatArg::Str).collect())
    }
}

impl SourceArgs {
    fn fill(self, c: &mut ExperimentConfig) {
        c.source = Some(self.source);
        c.k = self.k;
        c.direction = self.direction;
        c.untruncated = Some(self.untruncated);
    }
}

fn to_config(cmd: Command) -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    match cmd {
        Command::Cauchy { kind, eps } => {
            c.command = "cauchy".into();
            c.kind = Some(kind.kind);
            c.eps = rat(eps);
        }
        Command::Defect { kind, k, probe_m } => {
            c.command = "defect".into();
            c.kind = Some(kind.kind);
            c.k = Some(k);
            c.probe_m = Some(probe_m);
        }
        Command::Pointwise { kind, x, sqrt2, jmax } => {
            c.command = "pointwise".into();
            c.kind = Some(kind.kind);
            c.x = rat(x);
            c.sqrt2 = sqrt2.map(RatArg::Str);
            c.jmax = Some(jmax);
        }
        Command::Inmeasure { kind, eps, jmax } => {
            c.command = "inmeasure".into();
            c.kind = Some(kind.kind);
            c.eps = rat(eps);
            c.jmax = Some(jmax);
        }
        Command::Dominate { kind, jmax, g, mode, scaled } => {
            c.command = "dominate".into();
            c.kind = Some(kind.kind);
            c.jmax = Some(jmax);
            c.g = Some(g);
            c.mode = Some(mode);
            c.scaled = Some(scaled);
        }
        Command::Darboux { function, kind, j, partition, depth, edit } => {
            c.command = "darboux".into();
            c.function = Some(function);
            c.kind = kind;
            c.j = j;
            c.partition = Some(partition);
            c.depth = depth;
            c.edit = if edit.is_empty() { None } else { Some(edit) };
        }
        Command::Gap { function, kind, j, depth } => {
            c.command = "gap".into();
            c.function = Some(function);
            c.kind = kind;
            c.j = j;
            c.depth = depth;
        }
        Command::Ft { source, freq, prec } => {
            c.command = "ft".into();
            source.fill(&mut c);
            c.freq = rats(freq);
            c.prec = prec;
        }
        Command::Plancherel { source, r, n } => {
            c.command = "plancherel".into();
            source.fill(&mut c);
            c.radii = Some(vec![RatArg::Str(r)]);
            c.n = n;
        }
        Command::L2profile { source, r, n } => {
            c.command = "l2profile".into();
            source.fill(&mut c);
            c.radii = rats(r);
            c.n = n;
        }
        Command::FourierDefect { source, gap_depth, r, n } => {
            c.command = "fourier-defect".into();
            source.fill(&mut c);
            c.gap_depth = gap_depth;
            c.radii = rats(r);
            c.n = n;
        }
        Command::Term { kind, j, x } => {
            c.command = "term".into();
            c.kind = Some(kind.kind);
            c.j = Some(j);
            c.x = x.map(RatArg::Str);
        }
    }
    c
}

fn build_config(cli: Cli) -> anyhow::Result<ExperimentConfig> {
    let mut c = match (cli.config, cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
            ExperimentConfig::from_toml(&text)?
        }
        (None, Some(cmd)) => to_config(cmd),
        (Some(_), Some(_)) => anyhow::bail!("--config and a subcommand are mutually exclusive"),
        (None, None) => anyhow::bail!("a subcommand or --config is required (see --help)"),
    };
    // Global flags override the document.
    if cli.out.is_some() {
        c.out = cli.out;
    }
    if cli.format.is_some() {
        c.format = cli.format;
    }
    if let Some(ell) = cli.ell {
        c.ell = Some(RatArg::Str(ell));
    }
    if cli.seed.is_some() {
        c.seed = cli.seed;
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = build_config(cli).and_then(|c| {
        let outcome = run::run(&c)?;
        output::emit(&c, &outcome)?;
        Ok(outcome)
    });
    match outcome {
        Ok(o) if o.certified_failure => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
