use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pseudothick::complex::{barycentric_subdivision, relative_barycentric_subdivision, spine, spine_boundary_check};
use pseudothick::geometry::sample_general_position_map;
use pseudothick::homology::homology_groups;
use pseudothick::io::{complex_from_json, complex_to_json, map_to_json, to_json};
use pseudothick::pipeline::{
    close_stage, embed_report, embed_spine, run_pipeline, PipelineConfig, StageError, DEFAULT_BUDGET,
    DEFAULT_DENOM_BOUND,
};
use pseudothick::pseudomanifold::{
    check_isolated_singularities, check_pseudomanifold, classify_link, full_report, orient, PseudomanifoldReport,
};
use pseudothick::{fixtures, Complex, Error, Rational, Vertex};

#[derive(Parser)]
#[command(name = "pseudothick", version, about = "Thicken 2-complexes into 3-pseudomanifolds and close them up")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Complex JSON file, `-` for stdin, or `fixture:NAME`.
    input: String,
}

#[derive(Args)]
struct Embedding {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest denominator of a sampled coordinate.
    #[arg(long, default_value_t = DEFAULT_DENOM_BOUND)]
    denom_bound: u32,
}

#[derive(Args)]
struct Closing {
    /// Largest closed-up complex, in simplices, that is built explicitly.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Skip the global construction and verify links only.
    #[arg(long)]
    local_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input is a well-formed complex.
    Validate(Input),
    /// Barycentric subdivision, or relative to a subcomplex.
    Subdivide {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rel: Option<String>,
    },
    /// Spine of the barycentric subdivision, with the neighbourhood boundary check.
    Spine(Input),
    /// Generic map into R^(2d-1); for 2-complexes also the spine neighbourhood.
    Embed {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        embedding: Embedding,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pseudomanifold, isolated-singularity and orientability report.
    Check(Input),
    /// Orientation of the top simplices, or an odd cycle.
    Orient(Input),
    /// Integer homology; `--rel boundary` or `--rel FILE` for relative homology.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rel: Option<String>,
    },
    /// Build and verify P(X).
    Thicken {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        embedding: Embedding,
        /// Also write the boundary surface and link curves as OFF files.
        #[arg(long)]
        export_off: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Close up a pseudomanifold with boundary by reflection.
    Close {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        closing: Closing,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Link class of every vertex.
    Links(Input),
    /// The whole pipeline: embed, thicken, verify, close up.
    Run {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        embedding: Embedding,
        #[command(flatten)]
        closing: Closing,
        #[arg(long)]
        export_off: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult = Result<Outcome, StageError>;

/// Printed output, and whether every verification passed.
struct Outcome {
    text: String,
    passed: bool,
    failures: Vec<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true, failures: Vec::new() }
    }
}

fn at(stage: &'static str) -> impl Fn(Error) -> StageError {
    move |e| StageError::new(stage, e)
}

fn read_text(src: &str) -> Result<String, Error> {
    if src == "-" {
        return Ok(std::io::read_to_string(std::io::stdin())?);
    }
    Ok(std::fs::read_to_string(src)?)
}

fn load(src: &str) -> Result<Complex, StageError> {
    if let Some(name) = src.strip_prefix("fixture:") {
        return fixtures::fixture(name).ok_or_else(|| {
            StageError::new(
                "input",
                Error::Parse(format!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", "))),
            )
        });
    }
    let text = read_text(src).map_err(at("input"))?;
    complex_from_json(&text).map_err(at("input"))
}

fn write_files(out: &Path, files: &[(String, String)]) -> Result<(), StageError> {
    std::fs::create_dir_all(out).map_err(|e| StageError::new("output", e.into()))?;
    for (name, text) in files {
        std::fs::write(out.join(name), text).map_err(|e| StageError::new("output", e.into()))?;
    }
    Ok(())
}

/// Vertices of a pseudomanifold whose links are neither spheres nor discs.
fn cone_points(x: &Complex) -> Result<BTreeSet<Vertex>, Error> {
    let mut r = check_pseudomanifold(x)?;
    if !r.facet_degrees_ok {
        return Ok(BTreeSet::new());
    }
    check_isolated_singularities(x, &mut r)?;
    Ok(singular_vertices(&r))
}

fn singular_vertices(report: &PseudomanifoldReport) -> BTreeSet<Vertex> {
    let d = report.dim.max(1) as usize;
    report
        .vertex_links
        .iter()
        .filter(|(_, c)| !c.is_sphere(d - 1) && !c.is_disc(d - 1))
        .map(|(v, _)| pseudothick::complex::vertex(v))
        .collect()
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Validate(i) => {
            let x = load(&i.input)?;
            Ok(Outcome::ok(to_json(&json!({
                "valid": true,
                "dim": x.dim(),
                "f_vector": x.f_vector(),
                "maximal_simplices": x.maximal_simplices().len(),
                "connected": x.is_connected(),
                "flag": x.is_flag(),
            }))))
        }
        Command::Subdivide { input, rel } => {
            let x = load(&input.input)?;
            let sub = match rel {
                None => barycentric_subdivision(&x),
                Some(r) => relative_barycentric_subdivision(&x, &load(&r)?).map_err(at("subdivide"))?,
            };
            Ok(Outcome::ok(complex_to_json(&sub.child)))
        }
        Command::Spine(i) => {
            let x = load(&i.input)?;
            let (_, k) = spine(&x).map_err(at("spine"))?;
            let check = spine_boundary_check(&x);
            Ok(Outcome {
                text: to_json(&json!({
                    "spine": serde_json::from_str::<serde_json::Value>(&complex_to_json(&k)).expect("own output"),
                    "spine_f_vector": k.f_vector(),
                    "boundary_is_union_of_links": check.is_ok(),
                    "boundary_check_error": check.as_ref().err().map(|e| e.to_string()),
                })),
                passed: check.is_ok(),
                failures: check.err().map(|e| e.to_string()).into_iter().collect(),
            })
        }
        Command::Embed { input, embedding, out } => {
            let x = load(&input.input)?;
            let d = x.dim();
            if d < 1 {
                return Err(StageError::new("embed", Error::Dimension { what: "nothing to embed", found: d }));
            }
            let n = (2 * d - 1) as usize;
            let m = sample_general_position_map::<Rational>(&x, n, embedding.seed, embedding.denom_bound)
                .map_err(at("embed"))?;
            let mut files = vec![("embedding.json".to_string(), map_to_json(&m))];
            let mut passed = true;
            let mut failures = Vec::new();
            if d == 2 {
                let cfg =
                    PipelineConfig { seed: embedding.seed, denom_bound: embedding.denom_bound, ..Default::default() };
                let se = embed_spine(&x, &cfg)?;
                let rep = embed_report(&se);
                if !(rep.spine_injective && rep.neighborhood_injective) {
                    passed = false;
                    failures.push("spine neighbourhood embedding is not injective".to_string());
                }
                files.push(("embed_report.json".to_string(), to_json(&rep)));
            }
            match out {
                Some(dir) => {
                    write_files(&dir, &files)?;
                    let last = files.last().expect("embedding").1.clone();
                    Ok(Outcome { text: last, passed, failures })
                }
                None => Ok(Outcome { text: files.remove(0).1, passed, failures }),
            }
        }
        Command::Check(i) => {
            let x = load(&i.input)?;
            let pre = check_pseudomanifold(&x).map_err(at("check"))?;
            let report = if pre.facet_degrees_ok {
                let mut r = pre.clone();
                check_isolated_singularities(&x, &mut r).map_err(at("check"))?;
                full_report(&x, &singular_vertices(&r)).map_err(at("check"))?.0
            } else {
                pre
            };
            let passed = report.facet_degrees_ok && report.is_pure;
            let failures =
                if passed { vec![] } else { vec![format!("facet degree check failed at {:?}", report.degree_witness)] };
            Ok(Outcome { text: to_json(&report), passed, failures })
        }
        Command::Orient(i) => {
            let x = load(&i.input)?;
            let cones = cone_points(&x).unwrap_or_default();
            match orient(&x, &cones).map_err(at("orient"))? {
                Ok(o) => Ok(Outcome::ok(to_json(&json!({ "orientable": true, "orientation": o })))),
                Err(c) => Ok(Outcome {
                    text: to_json(&json!({ "orientable": false, "odd_cycle": c })),
                    passed: false,
                    failures: vec![format!("odd cycle of length {}", c.cycle.len())],
                }),
            }
        }
        Command::Homology { input, rel } => {
            let x = load(&input.input)?;
            let rel = match rel.as_deref() {
                None => None,
                Some("boundary") => Some(check_pseudomanifold(&x).map_err(at("homology"))?.boundary),
                Some(file) => Some(load(file)?),
            };
            let h = homology_groups(&x, rel.as_ref()).map_err(at("homology"))?;
            Ok(Outcome::ok(to_json(&h)))
        }
        Command::Links(i) => {
            let x = load(&i.input)?;
            let idx = x.index();
            let mut links = serde_json::Map::new();
            for v in x.vertices() {
                let c = classify_link(&idx.vertex_link(&v)).map_err(at("links"))?;
                links.insert(v.to_string(), serde_json::to_value(c).expect("plain enum"));
            }
            Ok(Outcome::ok(to_json(&links)))
        }
        Command::Close { input, closing, out } => {
            let p = load(&input.input)?;
            let cones = cone_points(&p).map_err(at("close"))?;
            let cfg = PipelineConfig { budget: closing.budget, local_only: closing.local_only, ..Default::default() };
            let mut warnings = Vec::new();
            let (stage, q) = close_stage(&p, &cones, &cfg, &mut warnings)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let passed = stage.passed();
            let report = to_json(&json!({ "close": stage, "warnings": warnings }));
            let mut files = vec![("close_report.json".to_string(), report.clone())];
            if let Some(q) = &q {
                files.push(("q.json".to_string(), complex_to_json(q)));
            }
            if let Some(dir) = out {
                write_files(&dir, &files)?;
            }
            let failures = if passed { vec![] } else { vec!["closed-up complex has a non-manifold link".to_string()] };
            Ok(Outcome { text: report, passed, failures })
        }
        Command::Thicken { input, embedding, export_off, out } => {
            let cfg = PipelineConfig {
                seed: embedding.seed,
                denom_bound: embedding.denom_bound,
                export_off,
                thicken_only: true,
                ..Default::default()
            };
            pipeline(&input.input, &cfg, out)
        }
        Command::Run { input, embedding, closing, export_off, out } => {
            let cfg = PipelineConfig {
                seed: embedding.seed,
                denom_bound: embedding.denom_bound,
                budget: closing.budget,
                local_only: closing.local_only,
                export_off,
                thicken_only: false,
            };
            pipeline(&input.input, &cfg, out)
        }
    }
}

fn pipeline(src: &str, cfg: &PipelineConfig, out: Option<PathBuf>) -> CliResult {
    let x = load(src)?;
    let res = run_pipeline(cfg, &x)?;
    for w in &res.report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = out {
        res.write_to(&dir).map_err(at("output"))?;
    }
    Ok(Outcome { text: res.artifacts["report.json"].clone(), passed: res.report.passed, failures: res.report.failures })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            print!("{}", o.text);
            if o.passed {
                ExitCode::SUCCESS
            } else {
                eprint!("{}", to_json(&json!({ "stage": "verify", "error": o.failures.join("; ") })));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprint!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
