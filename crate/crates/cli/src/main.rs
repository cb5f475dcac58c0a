mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use serde::Serialize;
use surfconf_core::groupring::{mu, zeta, AlgebraElement, Word};
use surfconf_core::moriyama::{delta, HClass};
use surfconf_core::surface::{Limits, SurfaceSpace};
use surfconf_core::verifier::{standard_tasks, Task, Tier, Verifier};
use surfconf_core::weights::weight_report;

use report::{write_json, write_record, write_verdicts, Format, VerdictRecord};

#[derive(Parser, Debug)]
#[command(name = "surfconf", version, about = "Exact homology computations for configuration spaces of surfaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Directory for cached kernel bases
    #[arg(long, global = true, env = "SURFCONF_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Ceiling on the ambient dimension of any single computation
    #[arg(long, global = true, default_value_t = Limits::default().max_dim)]
    max_dim: usize,

    /// Ceiling on the number of spanning vectors
    #[arg(long, global = true, default_value_t = Limits::default().max_span)]
    max_span: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,

    #[arg(long, global = true, value_enum, default_value_t = TierArg::Fast)]
    tier: TierArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TierArg {
    Fast,
    Slow,
    All,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Fast => Tier::Fast,
            TierArg::Slow => Tier::Slow,
            TierArg::All => Tier::All,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of H_n(U_2g), rank of the kernel and of the surface quotient
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
    },
    /// Image of a word, of mu or of zeta under Delta^n
    Delta {
        #[arg(long, conflicts_with_all = ["mu", "zeta"], required_unless_present_any = ["mu", "zeta"])]
        word: Option<String>,
        #[arg(long, conflicts_with = "zeta")]
        mu: bool,
        #[arg(long)]
        zeta: bool,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
    },
    /// Kernel of iota, or with --k the kernel of gr_k Delta^n
    Kernel {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
    },
    /// Rank of the weight filtration piece of H^{⊗n}
    Weights {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        #[arg(long)]
        g: usize,
    },
    /// Run exact checks and print verdicts
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<i64>,
    },
    /// Pairing matrix between the independent family and its dual classes
    Pairing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "C", alias = "c")]
    C,
    Vanishing,
    Mu,
    Independence,
    Pairing,
    Cyclic,
    All,
}

/// Settings shared by every subcommand.
#[derive(Debug)]
struct RunConfig {
    cache_dir: Option<PathBuf>,
    limits: Limits,
    format: Format,
    tier: Tier,
}

impl RunConfig {
    fn from_opts(o: &GlobalOpts) -> Result<Self> {
        if o.max_dim == 0 || o.max_span == 0 {
            bail!("--max-dim and --max-span must be positive");
        }
        let cache_dir = o.cache_dir.clone().filter(|d| match writable(d) {
            Ok(()) => true,
            Err(e) => {
                warn!("cache directory {} is not writable ({e}); caching disabled", d.display());
                false
            }
        });
        Ok(Self {
            cache_dir,
            limits: Limits { max_dim: o.max_dim, max_span: o.max_span },
            format: if o.json { Format::Json } else { o.format },
            tier: o.tier.into(),
        })
    }

    fn verifier(&self) -> Verifier {
        Verifier::new(self.limits, self.cache_dir.clone())
    }

    fn space(&self, n: usize, g: usize) -> Result<SurfaceSpace> {
        Ok(SurfaceSpace::load_or_build(n, g, &self.limits, self.cache_dir.as_deref())?)
    }
}

fn writable(dir: &PathBuf) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(format!(".probe{}", std::process::id()));
    fs::write(&probe, b"")?;
    fs::remove_file(probe)
}

#[derive(Serialize)]
struct DeltaRecord {
    n: usize,
    g: usize,
    input: String,
    hclass: String,
    hclass_terms: usize,
    surface: String,
    surface_terms: usize,
    surface_zero: bool,
}

#[derive(Serialize)]
struct GradedKernelRecord {
    k: usize,
    n: usize,
    g: usize,
    tensor_dim: usize,
    labute_quotient_dim: usize,
    kernel_dim: usize,
}

#[derive(Serialize)]
struct KernelRecord {
    n: usize,
    g: usize,
    ambient_dim: usize,
    kernel_rank: usize,
}

fn cmd_basis(cfg: &RunConfig, n: usize, g: usize, out: &mut dyn Write) -> Result<()> {
    let s = cfg.space(n, g)?;
    write_record(out, &s.report(), cfg.format)
}

fn cmd_delta(cfg: &RunConfig, word: Option<&str>, use_mu: bool, use_zeta: bool, n: usize, g: usize, out: &mut dyn Write) -> Result<()> {
    let (input, x) = if use_mu {
        ("mu".to_string(), mu(g)?.with_cap(n.max(2)).with_cap(n))
    } else if use_zeta {
        ("zeta".to_string(), zeta(g, n)?)
    } else {
        let text = word.context("one of --word, --mu, --zeta is required")?;
        let w = Word::parse(text, g)?;
        let cap = n.max(w.len());
        (w.to_string(), AlgebraElement::word(w, cap)?.with_cap(n))
    };
    let labels: Vec<u8> = (1..=n as u8).collect();
    let h = delta(&x, &labels, g)?;
    let space = cfg.space(n, g)?;
    let coords = space.to_surface(&h)?.coords;
    let surface = HClass::from_vector(&coords, space.basis(), &labels, g)?;
    let rec = DeltaRecord {
        n,
        g,
        input,
        hclass: h.to_string(),
        hclass_terms: h.len(),
        surface: surface.to_string(),
        surface_terms: surface.len(),
        surface_zero: surface.is_zero(),
    };
    write_record(out, &rec, cfg.format)
}

fn cmd_kernel(cfg: &RunConfig, k: Option<usize>, n: usize, g: usize, out: &mut dyn Write) -> Result<()> {
    match k {
        Some(k) => {
            let gk = cfg.verifier().graded_kernel(k, n, g)?;
            let rec = GradedKernelRecord {
                k,
                n,
                g,
                tensor_dim: gk.tensor.dim(),
                labute_quotient_dim: gk.quotient_dim(),
                kernel_dim: gk.image()?.rank(),
            };
            write_record(out, &rec, cfg.format)
        }
        None => {
            let s = cfg.space(n, g)?;
            write_record(out, &KernelRecord { n, g, ambient_dim: s.ambient_dim(), kernel_rank: s.kernel().rank() }, cfg.format)
        }
    }
}

fn need<T>(value: Option<T>, flag: &str, theorem: TheoremArg) -> Result<T> {
    value.with_context(|| format!("verify {theorem:?} needs --{flag}"))
}

fn tasks_for(cfg: &RunConfig, theorem: TheoremArg, k: Option<usize>, n: Option<usize>, g: Option<usize>, w: Option<i64>) -> Result<Vec<Task>> {
    use TheoremArg as T;
    let t = theorem;
    Ok(match t {
        T::All => standard_tasks(cfg.tier),
        T::A => vec![Task::A { n: need(n, "n", t)?, g: need(g, "g", t)? }],
        T::C => {
            let (n, g) = (need(n, "n", t)?, need(g, "g", t)?);
            match k {
                Some(k) => vec![Task::C { k, n, g }],
                None => (1..=n).map(|k| Task::C { k, n, g }).collect(),
            }
        }
        T::Vanishing => vec![Task::Vanishing { n: need(n, "n", t)?, g: need(g, "g", t)? }],
        T::Mu => vec![Task::MuTilde { n: need(n, "n", t)?, g: need(g, "g", t)? }],
        T::Independence => vec![Task::Independence { n: need(n, "n", t)?, g: need(g, "g", t)? }],
        T::Pairing => vec![Task::Pairing { n: need(n, "n", t)?, g: need(g, "g", t)? }],
        T::Cyclic => vec![Task::Cyclic { k: need(k, "k", t)?, w: need(w, "w", t)?, g: need(g, "g", t)? }],
    })
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let cfg = RunConfig::from_opts(&cli.global)?;
    match cli.command {
        Command::Basis { n, g } => cmd_basis(&cfg, n, g, out)?,
        Command::Delta { word, mu, zeta, n, g } => cmd_delta(&cfg, word.as_deref(), mu, zeta, n, g, out)?,
        Command::Kernel { k, n, g } => cmd_kernel(&cfg, k, n, g, out)?,
        Command::Weights { n, w, g } => write_record(out, &weight_report(n, w, g)?, cfg.format)?,
        Command::Verify { theorem, k, n, g, w } => {
            let tasks = tasks_for(&cfg, theorem, k, n, g, w)?;
            let verdicts = cfg.verifier().run_all(&tasks)?;
            let refuted = verdicts.iter().any(|v| v.is_refuted());
            let records: Vec<VerdictRecord> = verdicts.into_iter().map(Into::into).collect();
            write_verdicts(out, &records, cfg.format)?;
            return Ok(!refuted);
        }
        Command::Pairing { n, g } => {
            let v = cfg.verifier().run(Task::Pairing { n, g })?;
            let ok = !v.is_refuted();
            match (&v.pairing, cfg.format) {
                (Some(p), Format::Json) => write_json(out, p)?,
                _ => write_verdicts(out, &[v.into()], cfg.format)?,
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
