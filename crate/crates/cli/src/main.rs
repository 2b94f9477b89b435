mod input;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use altan_core::generators::DEFAULT_CAP;
use altan_core::graph::AltanPair;
use altan_core::kernel::{iterated_nullities, special_vector, ExcessReport, KernelError, Parity};
use altan_core::linalg::nullity;
use altan_core::patch::{altan_of_patch, face_census, parity_check, PatchError};
use altan_core::planar_code::write_planar_code;
use altan_core::survey::{
    convex_summary, emit_convex_summary, emit_table, family_instances, find_extremal, run_ingested_survey,
    run_survey, ExtremalPredicate, SurveyError, SurveyFamily, SurveyOptions, SurveyRecord, TableFormat,
};
use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::{load, Instance};

/// Exit status for a failed theorem or identity check.
const VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "altan", version, about = "Altan nullity surveys for graphs and benzenoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate parent and altan nullities over a family.
    Survey(SurveyArgs),
    /// Smallest instances matching an excess or nullity-jump predicate.
    Extremal(ExtremalArgs),
    /// Build iterated altans and dump them as JSON or DOT.
    Altan(AltanArgs),
    /// Nullities of the inputs and of their iterated altans.
    Nullity(NullityArgs),
    /// Check every theorem and identity on the inputs.
    Verify(VerifyArgs),
    /// Survey patches read from a planar_code, JSON or boundary-code file.
    Ingest(IngestArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Compute altan nullity for odd attachment sets as well.
    #[arg(long)]
    no_shortcut: bool,
}

impl RunArgs {
    fn options(&self, cap: usize) -> SurveyOptions {
        SurveyOptions {
            workers: self.workers as usize,
            no_shortcut: self.no_shortcut,
            cap,
            ..SurveyOptions::default()
        }
    }
}

#[derive(Debug, Args)]
struct SurveyArgs {
    #[arg(long, value_parser = parse_family)]
    family: SurveyFamily,
    /// Hexagon count `N` or range `A-B`.
    #[arg(long, value_parser = parse_range)]
    eps: RangeInclusive<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    /// Largest hexagon count the generators accept.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Convex family: cumulative counts up to every multiple of STEP and up
    /// to the top of `--eps`.
    #[arg(long, default_value_t = 10)]
    step: usize,
    /// Write the generated instances (bec or planar-code) instead of surveying.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    #[arg(long, env = "ALTAN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    #[arg(long, value_parser = parse_family)]
    family: SurveyFamily,
    #[arg(long, value_parser = parse_range)]
    eps: RangeInclusive<usize>,
    /// Match this excess nullity.
    #[arg(long, conflicts_with = "jump", required_unless_present = "jump")]
    excess: Option<i64>,
    /// Match a nullity jump `P:A` (parent P, altan A).
    #[arg(long, value_parser = parse_jump)]
    jump: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct AltanArgs {
    /// Input file, `-` for standard input.
    input: PathBuf,
    /// Number of altan steps.
    #[arg(long, default_value_t = 1)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
}

#[derive(Debug, Args)]
struct NullityArgs {
    input: PathBuf,
    /// Also report nullities of altan^2 .. altan^kmax.
    #[arg(long, default_value_t = 1)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Iterated-altan depth for the stability check.
    #[arg(long, default_value_t = 2)]
    kmax: usize,
}

#[derive(Debug, Args)]
struct IngestArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Markdown,
    Json,
}

impl From<OutFormat> for TableFormat {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => TableFormat::Csv,
            OutFormat::Markdown => TableFormat::Markdown,
            OutFormat::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Bec,
    PlanarCode,
}

fn parse_family(s: &str) -> Result<SurveyFamily, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = |_| format!("expected N or A-B, got {s:?}");
    let (a, b) = match s.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?),
        None => {
            let n = s.trim().parse().map_err(bad)?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        return Err(format!("empty or zero-based range {s:?}"));
    }
    Ok(a..=b)
}

fn parse_jump(s: &str) -> Result<(usize, usize), String> {
    let (p, a) = s.split_once(':').ok_or_else(|| format!("expected P:A, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((n(p)?, n(a)?))
}

/// A theorem or identity failed; reported with exit status 3.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn lift(e: SurveyError) -> anyhow::Error {
    match e {
        SurveyError::Violation { instance, detail, dump } => {
            anyhow!(Violation(format!("theorem violation at {instance}: {detail}\n{dump}")))
        }
        other => other.into(),
    }
}

fn write_records(records: &[SurveyRecord], format: OutFormat) -> Result<String> {
    Ok(match format {
        OutFormat::Json => serde_json::to_string_pretty(records)? + "\n",
        OutFormat::Csv | OutFormat::Markdown => {
            let mut out = String::from("id,faces,h,parent_nullity,altan_nullity,excess,bay\n");
            for r in records {
                let faces: Vec<String> = r.faces.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                let bay = r.bay.map_or(String::new(), |b| b.to_string());
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.id,
                    faces.join(" "),
                    r.h,
                    r.parent_nullity,
                    r.altan_nullity,
                    r.excess,
                    bay
                ));
            }
            out
        }
    })
}

fn survey(args: SurveyArgs) -> Result<Vec<u8>> {
    let opts = args.run.options(args.cap);
    if let Some(emit) = args.emit {
        let mut instances = Vec::new();
        for eps in args.eps.clone() {
            if args.family == SurveyFamily::Catafused && eps == 1 {
                continue;
            }
            instances.extend(family_instances(args.family, eps, opts.cap).map_err(lift)?);
        }
        return Ok(match emit {
            Emit::Bec => instances.iter().map(|(id, _)| format!("{id}\n")).collect::<String>().into_bytes(),
            Emit::PlanarCode => write_planar_code(instances.iter().map(|(_, p)| p.rotation())),
        });
    }
    // cumulative convex rows need every size from one hexagon up
    let sizes = if args.family == SurveyFamily::Convex {
        1..=*args.eps.end()
    } else {
        args.eps.clone()
    };
    let result = run_survey(args.family, sizes, &opts, args.cache_dir.as_ref()).map_err(lift)?;
    if result.cache_hits > 0 {
        log::info!("{} sizes served from cache", result.cache_hits);
    }
    if args.family == SurveyFamily::Convex {
        let step = args.step.max(1);
        let top = *args.eps.end();
        let mut thresholds: Vec<usize> = (1..=top / step).map(|k| k * step).collect();
        if thresholds.last() != Some(&top) {
            thresholds.push(top);
        }
        let rows = convex_summary(&result.records, &thresholds);
        return Ok(emit_convex_summary(&rows, args.format.into())?.into_bytes());
    }
    Ok(emit_table(&result.table, args.format.into())?.into_bytes())
}

fn extremal(args: ExtremalArgs) -> Result<String> {
    let predicate = match (args.excess, args.jump) {
        (Some(e), _) => ExtremalPredicate::Excess(e),
        (None, Some((parent, altan))) => ExtremalPredicate::Jump { parent, altan },
        (None, None) => bail!("give --excess or --jump"),
    };
    let found = find_extremal(args.family, predicate, args.eps, &args.run.options(args.cap)).map_err(lift)?;
    if found.is_empty() {
        log::info!("no instance matches in the given range");
    }
    write_records(&found, args.format)
}

fn altan(args: AltanArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let mut pairs = Vec::new();
    for inst in &loaded.instances {
        pairs.push(inst.pair()?.iterated_altan(args.kmax)?);
    }
    Ok(match args.format {
        GraphFormat::Json => {
            let docs: Vec<_> = pairs.iter().map(AltanPair::to_document).collect();
            if docs.len() == 1 {
                serde_json::to_string_pretty(&docs[0])? + "\n"
            } else {
                serde_json::to_string_pretty(&docs)? + "\n"
            }
        }
        GraphFormat::Dot => pairs.iter().map(|p| p.graph.to_dot(None)).collect(),
    })
}

#[derive(Serialize)]
struct NullityRow<'a> {
    id: &'a str,
    order: usize,
    h: usize,
    parent_nullity: usize,
    /// Nullities of altan^1 .. altan^kmax.
    altan_nullities: Vec<usize>,
    excess: i64,
}

fn nullity_cmd(args: NullityArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let mut rows = Vec::new();
    for inst in &loaded.instances {
        let pair = inst.pair()?;
        let parent = nullity(&pair.graph);
        let altans = iterated_nullities(&pair, args.kmax.max(1))?;
        rows.push(NullityRow {
            id: inst.id(),
            order: pair.graph.order(),
            h: pair.h(),
            parent_nullity: parent,
            excess: altans[0] as i64 - parent as i64,
            altan_nullities: altans,
        });
    }
    Ok(match args.format {
        OutFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
        OutFormat::Csv | OutFormat::Markdown => {
            let mut out = String::from("id,order,h,parent_nullity,altan_nullities,excess\n");
            for r in &rows {
                let etas: Vec<String> = r.altan_nullities.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.id,
                    r.order,
                    r.h,
                    r.parent_nullity,
                    etas.join(" "),
                    r.excess
                ));
            }
            out
        }
    })
}

fn verify_instance(inst: &Instance, kmax: usize) -> Result<Vec<String>> {
    let pair = inst.pair()?;
    let fail = |what: String| -> anyhow::Error { anyhow!(Violation(format!("{}: {what}", inst.id()))) };
    let mut passed = Vec::new();
    let parent = nullity(&pair.graph);
    let altans = iterated_nullities(&pair, kmax.max(1))?;
    let report = ExcessReport {
        parent_nullity: parent,
        altan_nullity: altans[0],
        excess: altans[0] as i64 - parent as i64,
        h_parity: Parity::of(pair.h()),
    };
    report.check_window().map_err(|e| fail(e.to_string()))?;
    passed.push(format!("window {parent} -> {}", altans[0]));
    if altans.iter().any(|&e| e != altans[0]) {
        return Err(fail(format!("iterated nullities {altans:?}")));
    }
    passed.push(format!("stable to altan^{}", altans.len()));
    if pair.h() % 2 == 0 {
        match special_vector(&pair.altan()?) {
            Ok(_) => passed.push("special vector".into()),
            Err(KernelError::NotAKernelVector) => return Err(fail("special vector is not in the kernel".into())),
            Err(e) => return Err(e.into()),
        }
    }
    if let Instance::Patch { patch, .. } = inst {
        let altan = altan_of_patch(patch)?;
        face_census(patch, &altan).map_err(|e| fail(e.to_string()))?;
        passed.push("face census".into());
        if patch.bounded_faces().all(|f| f.len() == 6) {
            let profile = patch.boundary_profile();
            if !profile.satisfies_bay_identity() {
                return Err(fail(format!("n22 = {}, b = {}", profile.n22, profile.b)));
            }
            passed.push(format!("bay number {}", profile.b));
        }
        match parity_check(patch) {
            Ok(true) => passed.push("parity".into()),
            Ok(false) => return Err(fail("parity chain broken".into())),
            Err(PatchError::NotBipartite) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(passed)
}

fn verify(args: VerifyArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let mut out = String::new();
    for inst in &loaded.instances {
        let passed = verify_instance(inst, args.kmax)?;
        out.push_str(&format!("{}: ok ({})\n", inst.id(), passed.join(", ")));
    }
    out.push_str(&format!("{} instances verified\n", loaded.instances.len()));
    Ok(out)
}

fn ingest(args: IngestArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let mut patches = Vec::new();
    for inst in loaded.instances {
        match inst {
            Instance::Patch { id, patch } => patches.push((id, patch)),
            Instance::Pair { id, .. } => bail!("{id}: ingest takes plane patches, not bare graphs"),
        }
    }
    if loaded.skipped > 0 {
        eprintln!("{} records skipped (not patches)", loaded.skipped);
    }
    let result = run_ingested_survey(&patches, &args.run.options(DEFAULT_CAP)).map_err(lift)?;
    Ok(emit_table(&result.table, args.format.into())?)
}

fn run(cli: Cli) -> Result<Vec<u8>> {
    let text = match cli.command {
        Command::Survey(a) => return survey(a),
        Command::Extremal(a) => extremal(a),
        Command::Altan(a) => altan(a),
        Command::Nullity(a) => nullity_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Ingest(a) => ingest(a),
    };
    text.map(String::into_bytes)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(out) => {
            use std::io::Write;
            let _ = std::io::stdout().write_all(&out);
            ExitCode::SUCCESS
        }
        Err(e) if e.downcast_ref::<Violation>().is_some() => {
            eprintln!("{e}");
            ExitCode::from(VIOLATION)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
