//! The `pbd` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{affine_space, projective_plane, steiner_triple_system, transversal_design};
use crate::closure::{
    dimension, dimension_at_least, strong_dimension, strong_dimension_at_least, span, strong_span, CertificateKind,
    DimensionCertificate, SearchMode, DEFAULT_BUDGET, DEFAULT_SAMPLES,
};
use crate::constructions::{
    add_point_fill, break_blocks_gdd, break_blocks_pbd, delete_point, truncate, wfc, ConstructionError, FillPolicy,
    Generators, Provider, Weights,
};
use crate::designs::{
    admissibility, params, pbd_as_gdd, solve_overlap, verify_gdd, verify_pbd, GroupDesign, PBDesign, Point,
};
use crate::format::DesignFile;
use crate::pipeline::{execute, plan, DimensionPolicy, Limits, Mode, PipelineError, PlanRequest, Registry, Stored};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_MISSING: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "pbd", version, about = "Build and verify pairwise balanced and group divisible designs")]
struct Cli {
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for verification and closure search.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file, `-` for stdout.
    #[arg(long, short, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct Sources {
    /// Directory of ingredient designs.
    #[arg(long, env = "PBD_REGISTRY")]
    registry: Option<PathBuf>,
    /// Generator families: `all`, `none`, or a list from trivial,sts,pg,ag,td,complete,delete.
    #[arg(long, default_value = "all")]
    generators: Generators,
}

impl Sources {
    fn provider(&self) -> Result<Provider, CliError> {
        let registry = match &self.registry {
            Some(dir) => Registry::load_dir(dir).map_err(pipeline_error)?,
            None => Registry::new(),
        };
        Ok(Provider::new(registry, self.generators))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fill {
    Single,
    Registry,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Weak,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print alpha, beta and gamma of a block-size set.
    Params {
        #[arg(value_parser = parse_sizes)]
        sizes: BTreeSet<usize>,
    },
    /// Check the necessary conditions for a PBD(v, K).
    Admissible {
        v: u64,
        #[arg(value_parser = parse_sizes)]
        sizes: BTreeSet<usize>,
    },
    /// Build a design.
    Build {
        #[command(subcommand)]
        what: Build,
    },
    /// Verify a design file.
    Verify { file: String },
    /// Dimension (or strong dimension, for gdd files) of a design.
    Dimension {
        file: String,
        /// Prove or refute "dimension >= d" instead of computing it.
        #[arg(long)]
        at_least: Option<usize>,
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Draw this many random subsets instead of searching exhaustively.
        #[arg(long, requires = "at_least")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on subset closures per exhaustive level.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Smallest subspace containing the points.
    Span { file: String, points: Vec<Point> },
    /// Smallest strong subspace containing the points.
    StrongSpan { file: String, points: Vec<Point> },
    /// Weighting construction over a master design.
    Inflate {
        master: String,
        /// One weight for every point, or a comma list.
        #[arg(long)]
        weights: String,
        #[arg(long, value_parser = parse_sizes)]
        sizes: BTreeSet<usize>,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        output: Output,
    },
    /// Replace blocks by PBDs with block sizes in L.
    Break {
        file: String,
        #[arg(long, value_parser = parse_sizes)]
        sizes: BTreeSet<usize>,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        output: Output,
    },
    /// Keep only the first m points of a group.
    Truncate {
        file: String,
        #[arg(long)]
        group: usize,
        #[arg(long)]
        keep: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Delete a point; the blocks through it become groups.
    DeletePoint {
        file: String,
        x: Point,
        #[command(flatten)]
        output: Output,
    },
    /// Add a point and close every group with it.
    AddPoint {
        file: String,
        #[arg(long, value_enum, default_value = "single")]
        fill: Fill,
        /// Block sizes for registry fills (default: the design's own).
        #[arg(long, value_parser = parse_sizes)]
        sizes: Option<BTreeSet<usize>>,
        #[command(flatten)]
        sources: Sources,
        #[command(flatten)]
        output: Output,
    },
    /// Write y = nA + x with c <= x <= n.
    SolveOverlap { y: u64, a: u64, c: u64 },
    /// Manage an ingredient directory.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
}

#[derive(Debug, Subcommand)]
enum RegistryAction {
    /// Verify a design and store it under its canonical name.
    Add { file: String, dir: PathBuf },
    /// List the requests a directory answers.
    List { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Build {
    /// Lines of AG_d(q).
    Ag {
        q: u64,
        d: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Lines of PG_2(q).
    Pg {
        q: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Transversal design TD(k, n).
    Td {
        k: usize,
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Steiner triple system on v points.
    Sts {
        v: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The staged construction from AG_d(q).
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Block size (weak mode).
    #[arg(long)]
    k: Option<usize>,
    /// Block sizes (full mode).
    #[arg(long, value_parser = parse_sizes)]
    sizes: Option<BTreeSet<usize>>,
    #[arg(long)]
    d: u32,
    #[arg(long, conflicts_with = "v")]
    y: Option<u64>,
    /// Target point count, alpha y + 1.
    #[arg(long)]
    v: Option<u64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long, default_value_t = Limits::default().max_r)]
    max_r: usize,
    #[arg(long, default_value_t = Limits::default().max_q)]
    max_q: u64,
    #[arg(long, default_value_t = Limits::default().min_x)]
    min_x: u64,
    #[command(flatten)]
    sources: Sources,
    /// Cap on subset closures for exhaustive stage checks.
    #[arg(long, default_value_t = DimensionPolicy::default().budget)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip stage dimension checks (verification still runs).
    #[arg(long)]
    no_dimension: bool,
    /// Write the plan and stage trace as JSON to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::new(EXIT_USAGE, message)
}

fn construction_error(e: ConstructionError) -> CliError {
    let code = match &e {
        ConstructionError::MissingIngredient(_) => EXIT_MISSING,
        ConstructionError::Unverified { .. } | ConstructionError::Design(_) => EXIT_INVALID,
        _ => EXIT_USAGE,
    };
    CliError::new(code, e.to_string())
}

fn pipeline_error(e: PipelineError) -> CliError {
    let code = match &e {
        PipelineError::NoParametersWithinLimits(_) if e.missing_request().is_some() => EXIT_MISSING,
        PipelineError::VerificationFailed { .. } | PipelineError::StageFailed { .. } => EXIT_INVALID,
        _ => EXIT_USAGE,
    };
    CliError::new(code, e.to_string())
}

fn parse_sizes(s: &str) -> Result<BTreeSet<usize>, String> {
    let sizes = s
        .split(',')
        .map(|w| w.trim().parse::<usize>().map_err(|_| format!("bad block size '{w}'")))
        .collect::<Result<BTreeSet<usize>, String>>()?;
    match sizes.iter().find(|&&k| k < 2) {
        Some(k) => Err(format!("block size {k} is below 2")),
        None => Ok(sizes),
    }
}

fn read_text(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn read_design(path: &str) -> Result<DesignFile, CliError> {
    DesignFile::parse(&read_text(path)?).map_err(|e| CliError::new(EXIT_INVALID, format!("{path}: {e}")))
}

fn read_gdd(path: &str) -> Result<GroupDesign, CliError> {
    Ok(match read_design(path)? {
        DesignFile::Gdd(g) => g,
        DesignFile::Pbd(d) => pbd_as_gdd(&d),
    })
}

fn read_pbd(path: &str) -> Result<PBDesign, CliError> {
    match read_design(path)? {
        DesignFile::Pbd(d) => Ok(d),
        DesignFile::Gdd(_) => Err(usage(format!("{path}: expected a pbd file"))),
    }
}

fn write_out(out: &str, text: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| usage(format!("stdout: {e}")))
    } else {
        fs::write(out, text).map_err(|e| usage(format!("{out}: {e}")))
    }
}

struct Ctx {
    json: bool,
}

impl Ctx {
    fn design(&self, output: &Output, design: DesignFile) -> Result<i32, CliError> {
        let text = if self.json {
            design.to_json() + "\n"
        } else {
            design.to_text()
        };
        write_out(&output.out, &text)?;
        Ok(EXIT_OK)
    }

    fn print(&self, text: String, value: serde_json::Value) -> Result<(), CliError> {
        let line = if self.json { value.to_string() } else { text };
        write_out("-", &(line + "\n"))
    }
}

fn certificate_exit(c: &DimensionCertificate) -> i32 {
    match c.kind {
        CertificateKind::Exact | CertificateKind::Certified => EXIT_OK,
        CertificateKind::Refuted => EXIT_REFUTED,
        CertificateKind::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn run_command(cli: Cli) -> Result<i32, CliError> {
    let ctx = Ctx { json: cli.json };
    match cli.command {
        Command::Params { sizes } => {
            let p = params(&sizes).map_err(|e| usage(e.to_string()))?;
            ctx.print(
                format!("alpha={} beta={} gamma={}", p.alpha, p.beta, p.gamma),
                json!(p),
            )?;
            Ok(EXIT_OK)
        }
        Command::Admissible { v, sizes } => {
            let a = admissibility(v, &sizes).map_err(|e| usage(e.to_string()))?;
            let p = a.params;
            let mut failures = Vec::new();
            if !a.local {
                failures.push(format!("local: v - 1 = {} is not 0 mod alpha = {}", (v - 1) % p.alpha, p.alpha));
            }
            if !a.global {
                failures.push(format!(
                    "global: v(v - 1) = {} is not 0 mod beta = {}",
                    (v as u128 * (v as u128 - 1)) % p.beta as u128,
                    p.beta
                ));
            }
            let text = if failures.is_empty() {
                "yes".to_string()
            } else {
                format!("no ({})", failures.join("; "))
            };
            ctx.print(text, json!(a))?;
            Ok(EXIT_OK)
        }
        Command::Build { what } => build(&ctx, what),
        Command::Verify { file } => {
            let report = match read_design(&file)? {
                DesignFile::Pbd(d) => verify_pbd(&d),
                DesignFile::Gdd(g) => verify_gdd(&g),
            };
            let mut text = report.summary();
            for v in report.violations.iter().take(10) {
                text.push_str(&format!("\n  {}: {}", v.kind.name(), v.witness));
            }
            ctx.print(text, json!(report))?;
            Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Dimension {
            file,
            at_least,
            exhaustive: _,
            sample,
            seed,
            budget,
        } => {
            let design = read_design(&file)?;
            let report = match &design {
                DesignFile::Pbd(d) => verify_pbd(d),
                DesignFile::Gdd(g) => verify_gdd(g),
            };
            if !report.valid {
                return Err(CliError::new(EXIT_INVALID, format!("{file}: {}", report.summary())));
            }
            let mode = match sample {
                Some(samples) => SearchMode::Sample { samples, seed },
                None => SearchMode::Exhaustive { budget },
            };
            let cert = match (&design, at_least) {
                (DesignFile::Pbd(d), None) => dimension(d, budget),
                (DesignFile::Pbd(d), Some(k)) => dimension_at_least(d, k, mode),
                (DesignFile::Gdd(g), None) => strong_dimension(g, budget),
                (DesignFile::Gdd(g), Some(k)) => strong_dimension_at_least(g, k, mode),
            };
            ctx.print(cert.to_string(), json!(cert))?;
            Ok(certificate_exit(&cert))
        }
        Command::Span { file, points } => {
            let d = read_pbd(&file)?;
            let s = span(&d, &points).map_err(|e| usage(e.to_string()))?;
            print_points(&ctx, &s)
        }
        Command::StrongSpan { file, points } => {
            let g = read_gdd(&file)?;
            let s = strong_span(&g, &points).map_err(|e| usage(e.to_string()))?;
            print_points(&ctx, &s)
        }
        Command::Inflate {
            master,
            weights,
            sizes,
            sources,
            output,
        } => {
            let g = read_gdd(&master)?;
            let w = parse_weights(&weights, g.v())?;
            let mut provider = sources.provider()?;
            let out = wfc(&g, &w, &sizes, &mut provider).map_err(construction_error)?;
            ctx.design(&output, out.into())
        }
        Command::Break {
            file,
            sizes,
            sources,
            output,
        } => {
            let mut provider = sources.provider()?;
            let out: DesignFile = match read_design(&file)? {
                DesignFile::Pbd(d) => break_blocks_pbd(&d, &sizes, &mut provider)
                    .map_err(construction_error)?
                    .into(),
                DesignFile::Gdd(g) => break_blocks_gdd(&g, &sizes, &mut provider)
                    .map_err(construction_error)?
                    .into(),
            };
            ctx.design(&output, out)
        }
        Command::Truncate {
            file,
            group,
            keep,
            output,
        } => {
            let g = read_gdd(&file)?;
            let out = truncate(&g, group, keep).map_err(construction_error)?;
            ctx.design(&output, out.into())
        }
        Command::DeletePoint { file, x, output } => {
            let d = read_pbd(&file)?;
            let out = delete_point(&d, x).map_err(construction_error)?;
            ctx.design(&output, out.into())
        }
        Command::AddPoint {
            file,
            fill,
            sizes,
            sources,
            output,
        } => {
            let g = read_gdd(&file)?;
            let policy = match fill {
                Fill::Single => FillPolicy::Single,
                Fill::Registry => FillPolicy::Pbd(sizes.unwrap_or_else(|| g.sizes())),
            };
            let mut provider = sources.provider()?;
            let out = add_point_fill(&g, &policy, &mut provider).map_err(construction_error)?;
            ctx.design(&output, out.into())
        }
        Command::SolveOverlap { y, a, c } => {
            let o = solve_overlap(y, a, c).map_err(|e| usage(e.to_string()))?;
            ctx.print(format!("n={} x={}", o.n, o.x), json!(o))?;
            Ok(EXIT_OK)
        }
        Command::Registry { action } => match action {
            RegistryAction::Add { file, dir } => {
                let stored = Stored::from(read_design(&file)?);
                let path = Registry::store(&dir, &stored).map_err(pipeline_error)?;
                ctx.print(path.display().to_string(), json!({ "path": path }))?;
                Ok(EXIT_OK)
            }
            RegistryAction::List { dir } => {
                let reg = Registry::load_dir(&dir).map_err(pipeline_error)?;
                let names: Vec<String> = reg.requests().map(ToString::to_string).collect();
                ctx.print(names.join("\n"), json!(names))?;
                Ok(EXIT_OK)
            }
        },
    }
}

fn print_points(ctx: &Ctx, pts: &[Point]) -> Result<i32, CliError> {
    let words: Vec<String> = pts.iter().map(Point::to_string).collect();
    ctx.print(words.join(" "), json!(pts))?;
    Ok(EXIT_OK)
}

fn parse_weights(s: &str, v: usize) -> Result<Weights, CliError> {
    let list = s
        .split(',')
        .map(|w| w.trim().parse::<usize>())
        .collect::<Result<Vec<usize>, _>>()
        .map_err(|_| usage(format!("bad weights '{s}'")))?;
    match list.len() {
        1 => Ok(Weights::uniform(v, list[0])),
        n if n == v => Ok(Weights::from_vec(list)),
        n => Err(usage(format!("expected 1 or {v} weights, got {n}"))),
    }
}

fn build(ctx: &Ctx, what: Build) -> Result<i32, CliError> {
    let algebra = |e: crate::algebra::AlgebraError| usage(e.to_string());
    match what {
        Build::Ag { q, d, output } => ctx.design(&output, affine_space(q, d).map_err(algebra)?.into()),
        Build::Pg { q, output } => ctx.design(&output, projective_plane(q).map_err(algebra)?.into()),
        Build::Td { k, n, output } => ctx.design(&output, transversal_design(k, n).map_err(algebra)?.into()),
        Build::Sts { v, output } => ctx.design(&output, steiner_triple_system(v).map_err(algebra)?.into()),
        Build::Pipeline(args) => build_pipeline(ctx, args),
    }
}

fn build_pipeline(ctx: &Ctx, args: PipelineArgs) -> Result<i32, CliError> {
    let mode = match (args.mode, args.k, args.sizes) {
        (ModeArg::Weak, Some(k), None) => Mode::Weak(k),
        (ModeArg::Full, None, Some(sizes)) => Mode::Full(sizes),
        (ModeArg::Weak, _, _) => return Err(usage("weak mode takes --k (and no --sizes)")),
        (ModeArg::Full, _, _) => return Err(usage("full mode takes --sizes (and no --k)")),
    };
    let mut req = PlanRequest::new(mode, args.d);
    req.y = args.y;
    if let Some(v) = args.v {
        let alpha = params(&req.mode.sizes()).map_err(|e| usage(e.to_string()))?.alpha;
        if v == 0 || (v - 1) % alpha != 0 {
            return Err(pipeline_error(PipelineError::BadV { v, alpha }));
        }
        req.y = Some((v - 1) / alpha);
    }
    req.r = args.r;
    req.q = args.q;
    req.n = args.n;
    req.x = args.x;
    req.limits = Limits {
        max_r: args.max_r,
        max_q: args.max_q,
        min_x: args.min_x,
    };
    let policy = DimensionPolicy {
        enabled: !args.no_dimension,
        budget: args.budget,
        samples: args.samples,
        seed: args.seed,
    };
    let mut provider = args.sources.provider()?;
    let pl = plan(&req, &mut provider).map_err(pipeline_error)?;
    let out = execute(&pl, &mut provider, policy).map_err(pipeline_error)?;

    let report = json!({ "plan": pl, "trace": out.trace });
    if let Some(path) = &args.report {
        fs::write(path, serde_json::to_string_pretty(&report).expect("reports serialize") + "\n")
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if ctx.json {
        let mut full = report;
        full["design"] = json!(DesignFile::Pbd(out.design));
        write_out(&args.output.out, &(full.to_string() + "\n"))?;
        return Ok(EXIT_OK);
    }
    let mut err = io::stderr().lock();
    let _ = writeln!(err, "plan: {pl}");
    for s in &out.trace.stages {
        let _ = writeln!(err, "{}: {} ({})", s.stage, s.output, s.verification);
        for c in &s.dimension {
            let _ = writeln!(err, "  {c}");
        }
        if let Some(note) = &s.note {
            let _ = writeln!(err, "  note: {note}");
        }
    }
    ctx.design(&args.output, out.design.into())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("pbd: {e}");
            return EXIT_USAGE;
        }
    }
    match run_command(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pbd: {}", e.message);
            e.code
        }
    }
}
