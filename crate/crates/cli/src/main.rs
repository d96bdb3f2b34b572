use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use pseudoresolve::census::{census_links, census_match, vertex_links};
use pseudoresolve::complex::validate;
use pseudoresolve::cubes::{explore_component, oriented_order_complex};
use pseudoresolve::io::{
    digest, export_cubes, export_off, to_json, verify_export, write_atomic, CensusSummary, ComplexFile, CubeExport,
    PrescriptionFile, RunOptions, RunReport, Timing,
};
use pseudoresolve::pipeline::{finish, DEFAULT_MAX_STATES};
use pseudoresolve::{ensure_good, Error, PseudoManifold, Resolver, UserLabeling};

const EXIT_SCHEMA: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_INVARIANT: u8 = 5;

#[derive(Parser)]
#[command(name = "pseudoresolve", version, about = "Resolve singularities of oriented simplicial pseudo-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pseudo-manifold conditions and orientability.
    Validate { input: PathBuf },
    /// Find or build a good labeling; prints the labeled complex.
    Label {
        input: PathBuf,
        /// JSON array of vertex colors.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build the resolved manifold over one component and check it.
    Resolve {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed_flag: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Write the cube list of M as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write an OFF mesh of M (surfaces only).
        #[arg(long)]
        export_off: Option<PathBuf>,
        /// Resolve the components of several seed flags instead.
        #[arg(long, value_delimiter = ',', conflicts_with = "seed_flag")]
        all_from: Vec<u32>,
        /// Add the vertex-link census of M to the report.
        #[arg(long)]
        census: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-run all checks on an exported cube list.
    Verify { export: PathBuf },
    /// Match the vertex links of a manifold against prescribed spheres.
    Census {
        manifold: PathBuf,
        prescription: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema { .. } | Error::Io(_) => EXIT_SCHEMA,
        Error::CapExceeded(_) => EXIT_CAP,
        Error::NotBipartite { .. }
        | Error::UnbalancedColors { .. }
        | Error::DiamondViolation { .. }
        | Error::PairingBroken { .. }
        | Error::NonOrientableQuotient { .. }
        | Error::InconsistentDegree(_) => EXIT_INVARIANT,
        _ => EXIT_VALIDATION,
    }
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => write_atomic(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<(ComplexFile, Vec<u8>)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::schema("", "input is not UTF-8"))?;
    Ok((ComplexFile::parse(&text)?, bytes))
}

fn validate_cmd(input: &Path) -> anyhow::Result<ExitCode> {
    let (file, _) = load(input)?;
    let (complex, orientation) = file.complex()?;
    let report = match validate(&complex) {
        Ok(r) => r,
        Err(e) => {
            print!("{}", to_json(&json!({ "valid": false, "error": e.to_string() })));
            return Ok(ExitCode::from(exit_code(&e)));
        }
    };
    let oriented = match orientation {
        Some(o) => PseudoManifold::with_orientation(complex, o),
        None => PseudoManifold::new(complex),
    };
    let (valid, error, code) = match &oriented {
        Ok(_) => (true, None, 0),
        Err(e) => (false, Some(e.to_string()), exit_code(e)),
    };
    print!("{}", to_json(&json!({ "valid": valid, "orientable": valid, "error": error, "report": report })));
    Ok(ExitCode::from(code))
}

fn label_cmd(input: &Path, coloring: Option<&Path>, output: Option<&Path>) -> anyhow::Result<ExitCode> {
    let (file, _) = load(input)?;
    let mut parsed = file.to_input()?;
    if let Some(c) = coloring {
        let text = fs::read_to_string(c).with_context(|| format!("reading {}", c.display()))?;
        parsed.labeling = UserLabeling::Coloring(pseudoresolve::io::from_json(&text)?);
    }
    let lc = ensure_good(&parsed.pm, &parsed.labeling)?;
    let mut out = ComplexFile::from_labeled(&lc);
    if let UserLabeling::Coloring(c) = parsed.labeling {
        out.coloring = Some(c);
    }
    emit(&out.emit(), output)?;
    eprintln!("provenance: {:?}", lc.provenance());
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy)]
struct ResolveArgs<'a> {
    seed_flag: u32,
    max_states: usize,
    export: Option<&'a Path>,
    export_off: Option<&'a Path>,
    census: bool,
}

fn resolve_one(file: &ComplexFile, bytes: &[u8], args: &ResolveArgs) -> anyhow::Result<Result<RunReport, Error>> {
    let start = Instant::now();
    let input = file.to_input()?;
    let lc = ensure_good(&input.pm, &input.labeling)?;
    let mut resolver = Resolver::new(lc)?;
    let label_ms = start.elapsed().as_secs_f64() * 1e3;
    let seed = resolver.initial_state(args.seed_flag)?;
    let t = Instant::now();
    let component = match explore_component(&mut resolver, seed, args.max_states) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    let explore_ms = t.elapsed().as_secs_f64() * 1e3;
    let t = Instant::now();
    let res = finish(input.pm.clone(), resolver, component)?;
    let census = if args.census {
        let m = oriented_order_complex(&res.quotient, &res.cube_signs)?;
        Some(CensusSummary::from_result(&census_links(&vertex_links(&m), &[])))
    } else {
        None
    };
    let checks_ms = t.elapsed().as_secs_f64() * 1e3;
    if let Some(p) = args.export {
        write_atomic(p, &to_json(&export_cubes(&res)))?;
    }
    if let Some(p) = args.export_off {
        write_atomic(p, &export_off(&res, &input.pm, input.coordinates.as_deref())?)?;
    }
    let timing = Timing { label_ms, explore_ms, checks_ms, total_ms: start.elapsed().as_secs_f64() * 1e3 };
    let options = RunOptions { seed_flag: args.seed_flag, max_states: args.max_states };
    Ok(Ok(RunReport::new(&res, digest(bytes), options, census, timing)))
}

fn report_failure(report: &RunReport) -> Option<u8> {
    let ok = report.manifold.verdict && report.covering.verdict;
    (!ok).then_some(EXIT_INVARIANT)
}

fn cap_message(e: &Error) -> String {
    match e {
        Error::CapExceeded(p) => to_json(&json!({
            "error": "cap_exceeded",
            "cap": p.cap,
            "states_discovered": p.states.len(),
            "states_expanded": p.expanded,
        })),
        e => to_json(&json!({ "error": e.to_string() })),
    }
}

fn resolve_cmd(input: &Path, args: ResolveArgs, all_from: &[u32], output: Option<&Path>) -> anyhow::Result<ExitCode> {
    let (file, bytes) = load(input)?;
    if all_from.is_empty() {
        return match resolve_one(&file, &bytes, &args)? {
            Ok(report) => {
                emit(&to_json(&report), output)?;
                Ok(ExitCode::from(report_failure(&report).unwrap_or(0)))
            }
            Err(e) => {
                eprint!("{}", cap_message(&e));
                Ok(ExitCode::from(exit_code(&e)))
            }
        };
    }
    let mut reports = Vec::new();
    let mut code = 0;
    for &seed in all_from {
        let one = ResolveArgs { seed_flag: seed, export: None, export_off: None, ..args };
        match resolve_one(&file, &bytes, &one)? {
            Ok(r) => {
                code = code.max(report_failure(&r).unwrap_or(0));
                reports.push(serde_json::to_value(&r)?);
            }
            Err(e) => {
                code = code.max(exit_code(&e));
                reports.push(serde_json::from_str(&cap_message(&e))?);
            }
        }
    }
    emit(&to_json(&reports), output)?;
    Ok(ExitCode::from(code))
}

fn verify_cmd(path: &Path) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let export: CubeExport = pseudoresolve::io::from_json(&text)?;
    let recomputed = verify_export(&export)?;
    let agree = recomputed == export.verdicts;
    let pass = recomputed.manifold && recomputed.orientable && recomputed.covering && recomputed.r > 0;
    print!("{}", to_json(&json!({ "agree": agree, "pass": pass, "recorded": export.verdicts, "recomputed": recomputed })));
    Ok(if agree && pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVARIANT) })
}

fn census_cmd(manifold: &Path, prescription: &Path, output: Option<&Path>) -> anyhow::Result<ExitCode> {
    let (file, _) = load(manifold)?;
    let m = file.to_input()?.pm;
    let text = fs::read_to_string(prescription).with_context(|| format!("reading {}", prescription.display()))?;
    let ys = PrescriptionFile::parse(&text)?.spheres()?;
    let report = census_match(&m, &ys)?;
    emit(&to_json(&report), output)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { input } => validate_cmd(&input),
        Command::Label { input, coloring, output } => label_cmd(&input, coloring.as_deref(), output.as_deref()),
        Command::Resolve { input, seed_flag, max_states, export, export_off, all_from, census, output } => {
            let args = ResolveArgs { seed_flag, max_states, export: export.as_deref(), export_off: export_off.as_deref(), census };
            resolve_cmd(&input, args, &all_from, output.as_deref())
        }
        Command::Verify { export } => verify_cmd(&export),
        Command::Census { manifold, prescription, output } => census_cmd(&manifold, &prescription, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(e) => ExitCode::from(exit_code(e)),
                None => ExitCode::from(EXIT_SCHEMA),
            }
        }
    }
}
