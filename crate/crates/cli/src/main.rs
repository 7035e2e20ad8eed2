use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use quivergr::degeneration::{build_poset, generic_isoclass};
use quivergr::ffalg::PrimeField;
use quivergr::lab::{Conjecture, Lab, PrincipalConfig};
use quivergr::modrep::{Catalog, Isoclass};
use quivergr::pluecker::{ideal, Scope};
use quivergr::pointcount::{brute_force_count, count_points, BRUTE_FORCE_BUDGET};
use quivergr::quiver::Quiver;

#[derive(Parser, Debug)]
#[command(
    name = "quivergr",
    version,
    about = "Principal quiver Grassmannians of Dynkin quivers over prime fields"
)]
struct Cli {
    /// Quiver in the `vertices:` / `arrow:` text format.
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,
    /// TOML experiment file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Multiplicities of P_1, P_2, ... (default: all 1).
    #[arg(long, global = true, value_delimiter = ',')]
    proj: Option<Vec<u32>>,
    /// Multiplicities of I_1, I_2, ... (default: all 1).
    #[arg(long, global = true, value_delimiter = ',')]
    inj: Option<Vec<u32>>,
    /// Field for Hom dimensions, decompositions and relations.
    #[arg(long, global = true)]
    prime: Option<u32>,
    /// Interpolation primes (default: the first D + 3 primes).
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u32>>,
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the indecomposables with their dimension vectors.
    Catalog {
        /// Also print the matrices of each model.
        #[arg(long)]
        matrices: bool,
    },
    /// Degeneration poset of Rep_d as JSON, or DOT with --dot.
    Poset {
        #[arg(long)]
        dot: bool,
    },
    /// Plücker and incidence relations of Gr_{dim P}(M).
    Relations {
        /// Isoclass such as "U(1,2) + 2*S(2)" (default: the generic one).
        #[arg(long)]
        isoclass: Option<String>,
        #[arg(long, value_enum, default_value_t = ScopeArg::Paths)]
        scope: ScopeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Hilbert function of the relation ideal for all m with entries <= bound.
    Hilbert {
        #[arg(long)]
        isoclass: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = ScopeArg::Paths)]
        scope: ScopeArg,
    },
    /// Number of F_p-points of Gr_{dim P}(M) at each prime.
    Count {
        #[arg(long)]
        isoclass: Option<String>,
        /// Use direct enumeration instead of the tree recursion.
        #[arg(long)]
        brute: bool,
    },
    /// Counting-polynomial classification of one isoclass, or of the whole poset.
    Classify {
        #[arg(long)]
        isoclass: Option<String>,
    },
    /// Check one of the conjectures A to E on the configured poset.
    Conjecture { which: String },
    /// Classify everything, check all conjectures, write JSON and DOT.
    Report,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ScopeArg {
    Arrows,
    Paths,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Text,
    M2,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    /// Path to a quiver file, relative to the config file.
    quiver: Option<PathBuf>,
    quiver_text: Option<String>,
    proj: Option<Vec<u32>>,
    inj: Option<Vec<u32>>,
    primes: Option<Vec<u32>>,
    hom_prime: Option<u32>,
    max_nodes: Option<usize>,
    jobs: Option<usize>,
    groebner_vars: Option<usize>,
    hilbert_bound: Option<u32>,
    out: Option<PathBuf>,
}

struct Setup {
    cfg: PrincipalConfig,
    jobs: Option<usize>,
    out: Option<PathBuf>,
}

fn setup(cli: &Cli) -> Result<Setup> {
    let (file, base) = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: ConfigFile =
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            (
                file,
                path.parent().map(Path::to_path_buf).unwrap_or_default(),
            )
        }
        None => (ConfigFile::default(), PathBuf::new()),
    };
    let quiver_text = match (&cli.quiver, &file.quiver, &file.quiver_text) {
        (Some(p), _, _) => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        (None, Some(p), _) => {
            let p = base.join(p);
            fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?
        }
        (None, None, Some(t)) => t.clone(),
        (None, None, None) => bail!("no quiver given: use --quiver FILE or a config file"),
    };
    let quiver = Arc::new(Quiver::parse(&quiver_text)?);
    let n = quiver.n_vertices();
    let proj = cli.proj.clone().or(file.proj).unwrap_or_else(|| vec![1; n]);
    let inj = cli.inj.clone().or(file.inj).unwrap_or_else(|| vec![1; n]);
    let mut cfg = PrincipalConfig::new(quiver, proj, inj)?;
    cfg.primes = cli.primes.clone().or(file.primes);
    if let Some(p) = cli.prime.or(file.hom_prime) {
        cfg.hom_prime = p;
    }
    if let Some(m) = cli.max_nodes.or(file.max_nodes) {
        cfg.max_nodes = m;
    }
    if let Some(g) = file.groebner_vars {
        cfg.groebner_vars = g;
    }
    if let Some(b) = file.hilbert_bound {
        cfg.hilbert_bound = b;
    }
    let out = cli.out.clone().or(file.out.map(|o| base.join(o)));
    Ok(Setup {
        cfg,
        jobs: cli.jobs.or(file.jobs),
        out,
    })
}

fn hom_catalog(cfg: &PrincipalConfig) -> Result<Catalog> {
    Ok(Catalog::new(
        cfg.quiver.clone(),
        PrimeField::new(cfg.hom_prime as u64)?,
    )?)
}

fn isoclass(cat: &Catalog, cfg: &PrincipalConfig, text: Option<&str>) -> Result<Isoclass> {
    let iso = match text {
        Some(t) => cat.parse_isoclass(t)?,
        None => generic_isoclass(cat, &cfg.d())?,
    };
    if cat.dim_of(&iso) != cfg.d() {
        bail!(
            "{} has dimension vector {}, expected {}",
            cat.format(&iso),
            cat.dim_of(&iso),
            cfg.d()
        );
    }
    Ok(iso)
}

/// Writes `content` to `out/name`, or prints it when no directory is set.
fn emit(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}

fn scope(s: ScopeArg) -> Scope {
    match s {
        ScopeArg::Arrows => Scope::Arrows,
        ScopeArg::Paths => Scope::Paths,
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let Setup { cfg, jobs, out } = setup(&cli)?;
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()?;
    }
    match &cli.command {
        Command::Catalog { matrices } => {
            let cat = hom_catalog(&cfg)?;
            let mut s = String::new();
            for (x, l) in cat.labels().iter().enumerate() {
                s.push_str(&format!("{}\t{}\n", l.name, l.root));
                if *matrices {
                    s.push_str(&cat.matrices_text(&Isoclass::single(cat.len(), x))?);
                }
            }
            emit(&out, "catalog.txt", &s)?;
        }
        Command::Poset { dot } => {
            let poset = build_poset(Arc::new(hom_catalog(&cfg)?), &cfg.d(), cfg.max_nodes)?;
            if *dot || out.is_some() {
                emit(&out, "poset.dot", &poset.dot_export())?;
            }
            if !*dot {
                emit(
                    &out,
                    "poset.json",
                    &serde_json::to_string_pretty(&poset.to_json())?,
                )?;
            }
        }
        Command::Relations {
            isoclass: text,
            scope: sc,
            format,
        } => {
            let cat = hom_catalog(&cfg)?;
            let iso = isoclass(&cat, &cfg, text.as_deref())?;
            let id = ideal(&cat.realize(&iso)?, &cfg.e(), scope(*sc))?;
            match format {
                Format::Text => emit(&out, "relations.txt", &id.export_text())?,
                Format::M2 => emit(&out, "relations.m2", &id.export_macaulay2())?,
            }
        }
        Command::Hilbert {
            isoclass: text,
            bound,
            scope: sc,
        } => {
            let lab_cfg = PrincipalConfig {
                hilbert_bound: *bound,
                ..cfg.clone()
            };
            let cat = hom_catalog(&lab_cfg)?;
            let iso = isoclass(&cat, &lab_cfg, text.as_deref())?;
            let id = ideal(&cat.realize(&iso)?, &lab_cfg.e(), scope(*sc))?;
            let opts = quivergr::groebner::GroebnerOptions {
                bound: Some(vec![*bound; lab_cfg.quiver.n_vertices()]),
                ..Default::default()
            };
            let gb = quivergr::groebner::buchberger(id.ring().ring(), id.generators(), &opts)?;
            let mut s = String::new();
            for entry in gb.hilbert_table(*bound)? {
                let m: Vec<String> = entry.m.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("({})\t{}\n", m.join(","), entry.dim));
            }
            emit(&out, "hilbert.txt", &s)?;
        }
        Command::Count {
            isoclass: text,
            brute,
        } => {
            let cat = hom_catalog(&cfg)?;
            let iso = isoclass(&cat, &cfg, text.as_deref())?;
            let primes = cfg.primes.clone().unwrap_or_else(|| vec![cfg.hom_prime]);
            let mut s = String::new();
            for p in primes {
                let local = Catalog::new(cfg.quiver.clone(), PrimeField::new(p as u64)?)?;
                let m = local.realize(&iso)?;
                let n = if *brute {
                    brute_force_count(&m, &cfg.e(), BRUTE_FORCE_BUDGET)?
                } else {
                    count_points(&m, &cfg.e())?
                };
                s.push_str(&format!("{p}\t{n}\n"));
            }
            emit(&out, "counts.txt", &s)?;
        }
        Command::Classify {
            isoclass: Some(text),
        } => {
            let cat = hom_catalog(&cfg)?;
            let iso = isoclass(&cat, &cfg, Some(text))?;
            let lab = Lab::new(cfg.clone())?;
            let cl = lab.classify_isoclass(&iso)?;
            emit(
                &out,
                "classification.json",
                &serde_json::to_string_pretty(&cl.record(&cat.format(&iso)))?,
            )?;
        }
        Command::Classify { isoclass: None } => {
            let lab = Lab::new(cfg.clone())?;
            let report = lab.classify_all()?;
            emit(&out, "report.json", &report.to_json())?;
        }
        Command::Conjecture { which } => {
            let which: Conjecture = which.parse()?;
            let lab = Lab::new(cfg.clone())?;
            let report = lab.classify_all()?;
            let verdict = lab.check(&report, which)?;
            emit(
                &out,
                &format!("conjecture_{which}.json"),
                &serde_json::to_string_pretty(&verdict)?,
            )?;
        }
        Command::Report => {
            let lab = Lab::new(cfg.clone())?;
            let mut report = lab.classify_all()?;
            for which in [
                Conjecture::A,
                Conjecture::B,
                Conjecture::C,
                Conjecture::D,
                Conjecture::E,
            ] {
                let v = lab.check(&report, which)?;
                report.verdicts.push(v);
            }
            emit(&out, "report.json", &report.to_json())?;
            if out.is_some() {
                emit(&out, "gamma.dot", &lab.report_dot(&report))?;
            }
        }
    }
    Ok(())
}
