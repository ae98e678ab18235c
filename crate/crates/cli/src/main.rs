//! `latcheck`: subgroup lattices, chain invariants and claim verification
//! from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latcheck_core::export::{analysis_json, chain_links, lattice_json, to_dot, ChainLink};
use latcheck_core::catalog::{catalog, tier};
use latcheck_core::harness::{claim, render};
use latcheck_core::invariants::modular_elements;
use latcheck_core::{
    invariant_report, run_suite, verify_group, Cache, CacheOutcome, CatalogEntry, GroupOptions, GroupSpec,
    HarnessOptions, InvariantReport, LatticeOptions, Status, Suite, SubgroupLattice, SuiteReport, Tier,
};

const CACHE_ENV: &str = "LATCHECK_CACHE";

#[derive(Parser)]
#[command(name = "latcheck", version, about = "Subgroup lattices of finite groups and their chain invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print minmaxl, chiefl, modl and related facts for one group.
    Analyze(AnalyzeArgs),
    /// Check the catalogued claims on one group or on a catalog tier.
    Verify(VerifyArgs),
    /// Write the lattice as a DOT Hasse diagram or a JSON dump.
    Export(ExportArgs),
    /// Inspect the built-in group catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    spec: String,
    #[arg(long)]
    json: bool,
    /// Include witness chains.
    #[arg(long)]
    witness: bool,
    /// Lattice cache directory; overrides LATCHECK_CACHE.
    #[arg(long, value_name = "P")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    spec: Option<String>,
    /// Run over the built-in catalog instead of a single group.
    #[arg(long)]
    catalog: bool,
    #[arg(long, default_value = "all", value_name = "S")]
    suite: Suite,
    /// Catalog slice; only meaningful with --catalog.
    #[arg(long, default_value = "core", value_name = "T")]
    tier: Tier,
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    /// Wall-clock budget for the whole run; unfinished claims are skipped-budget.
    #[arg(long, value_name = "N")]
    budget_mins: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true, value_name = "CLAIM")]
    inject_fail: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    spec: String,
    #[arg(long)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "F")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Verify(args) => verify(args),
        Command::Export(args) => export(args),
        Command::Catalog {
            action: CatalogAction::List,
        } => catalog_list(),
    };
    match result {
        Ok((text, code)) => {
            let mut out = io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                _ => code,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

type Output = Result<(String, ExitCode)>;

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| dirs::cache_dir().map(|d| d.join("latcheck")))
}

fn load_lattice(spec: &GroupSpec, dir: Option<PathBuf>) -> Result<SubgroupLattice> {
    let gopts = GroupOptions::default();
    let lopts = LatticeOptions::default();
    let Some(dir) = cache_dir(dir) else {
        let g = spec.build(gopts)?;
        return Ok(SubgroupLattice::enumerate(Arc::new(g), lopts)?);
    };
    let cache = Cache::new(dir);
    let (lat, outcome) = cache.load_or_compute(spec, gopts, lopts)?;
    match outcome {
        CacheOutcome::Hit => log::info!("cache hit {}", cache.path_for(spec).display()),
        CacheOutcome::Miss => log::info!("cache miss for {spec}"),
        CacheOutcome::Discarded => log::info!("recomputed {spec} after discarding its record"),
    }
    Ok(lat)
}

fn parse_spec(text: &str) -> Result<GroupSpec> {
    GroupSpec::parse(text).with_context(|| format!("invalid group spec {text:?}"))
}

fn analyze(args: AnalyzeArgs) -> Output {
    let spec = parse_spec(&args.spec)?;
    let lat = load_lattice(&spec, args.cache_dir)?;
    let report = invariant_report(&spec.to_string(), &lat)?;
    let text = if args.json {
        let json = analysis_json(&report, &lat, args.witness);
        serde_json::to_string_pretty(&json)? + "\n"
    } else {
        analysis_text(&report, &lat, args.witness)
    };
    Ok((text, ExitCode::SUCCESS))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn link_text(link: &ChainLink) -> String {
    if link.generators.is_empty() {
        format!("{}<e>", link.order)
    } else {
        format!("{}<{}>", link.order, link.generators.join(", "))
    }
}

fn analysis_text(r: &InvariantReport, lat: &SubgroupLattice, witness: bool) -> String {
    let mut out = format!("{}\n", r.spec);
    let rows = [
        ("order", r.order.to_string()),
        ("subgroups", r.subgroups.to_string()),
        ("minmaxl", r.minmaxl.to_string()),
        ("chiefl", r.chiefl.to_string()),
        ("modl", r.modl.to_string()),
        ("modular", r.modular_count.to_string()),
        ("solvable", yes_no(r.solvable).into()),
        ("supersolvable", yes_no(r.supersolvable).into()),
        ("graded", yes_no(r.graded).into()),
    ];
    for (k, v) in rows {
        out.push_str(&format!("  {k:<14}{v}\n"));
    }
    if witness {
        let w = &r.witnesses;
        for (name, chain) in [("minmaxl", &w.minmaxl), ("chiefl", &w.chiefl), ("modl", &w.modl)] {
            let links: Vec<String> = chain_links(lat, chain).iter().map(link_text).collect();
            out.push_str(&format!("  {name} chain: {}\n", links.join(" < ")));
        }
    }
    out
}

fn verify(args: VerifyArgs) -> Output {
    if let Some(id) = &args.inject_fail {
        if claim(id).is_none() {
            bail!("unknown claim {id:?}");
        }
    }
    let opts = HarnessOptions {
        suite: args.suite,
        deadline: args
            .budget_mins
            .map(|m| Instant::now() + Duration::from_secs_f64(m.max(0.0) * 60.0)),
        inject_fail: args.inject_fail,
        jobs: args.jobs,
        ..HarnessOptions::default()
    };
    let report = match args.spec {
        Some(text) => {
            let spec = parse_spec(&text)?;
            let tier = catalog().into_iter().find(|e| e.spec == spec).map(|e| e.tier);
            SuiteReport {
                groups: vec![verify_group(&spec, tier, &opts)],
            }
        }
        None => {
            let entries: Vec<CatalogEntry> = tier(args.tier);
            run_suite(&entries, &opts)?
        }
    };
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        let mut text: String = report.groups.iter().map(render).collect();
        text += &format!(
            "{} pass, {} fail, {} skipped-precondition, {} skipped-budget\n",
            report.count(Status::Pass),
            report.count(Status::Fail),
            report.count(Status::SkippedPrecondition),
            report.count(Status::SkippedBudget),
        );
        text
    };
    let code = if report.failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
    Ok((text, code))
}

fn export(args: ExportArgs) -> Output {
    let spec = parse_spec(&args.spec)?;
    let lat = load_lattice(&spec, None)?;
    let modular = modular_elements(&lat);
    let text = match args.format {
        Format::Dot => to_dot(&lat, Some(&modular)),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&lattice_json(&spec.to_string(), &lat, Some(&modular)))?;
            s.push('\n');
            s
        }
    };
    match args.out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok((String::new(), ExitCode::SUCCESS))
        }
        None => Ok((text, ExitCode::SUCCESS)),
    }
}

fn catalog_list() -> Output {
    let mut text = String::new();
    for e in catalog() {
        let label = e.label.map(|l| format!("  {l}")).unwrap_or_default();
        text += &format!("{:<9}{:>6}  {}{label}\n", e.tier.as_str(), e.expected_order, e.text());
    }
    Ok((text, ExitCode::SUCCESS))
}
