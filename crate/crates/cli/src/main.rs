//! Batch front end: reads JSON inputs, runs one computation, prints a report.
//!
//! Exit codes: 0 success (an obstruction found by `lift` is a result), 2 unreadable or
//! malformed input, 3 a violated invariant, 4 a localization that did not stabilize.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mcdeform::cech::{cech_cohomology, CoverFile};
use mcdeform::hochschild::{check_curved_mc, hochschild_cohomology, localize_c1, CocyclicModule, CurvedMC};
use mcdeform::hochschild::deformation_complex;
use mcdeform::io::{AlgebraFile, LiftingProblemFile};
use mcdeform::linalg::format_rational;
use mcdeform::operads::{FreeOperad, Generator, Image, PresentationFile};
use mcdeform::signs::SIGN_CONVENTION_VERSION;
use mcdeform::trees::enumerate_trees;
use mcdeform::Error;
use num_traits::Zero;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "mcdeform", version, about = "Exact Hochschild, operad and lifting computations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild cohomology dimensions HH^0..HH^n.
    Hh {
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Cyclic cohomology dimensions and ranks of the periodicity map S.
    Hc {
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Degree window `lo..hi` over which to invert S.
        #[arg(long, value_parser = parse_window)]
        localize: Option<(usize, usize)>,
    },
    /// Checks that the product alone solves the curved Maurer-Cartan equation.
    McCheck {
        algebra: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Order-by-order lifting of a weight-zero operad map.
    Lift { problem: PathBuf },
    /// Counts (or lists) planar trees with the given input count and vertex arities.
    Trees {
        /// Allowed vertex arity; repeat for several.
        #[arg(long = "arity", conflicts_with = "min_arity")]
        arities: Vec<usize>,
        /// Allow every vertex arity at least this.
        #[arg(long)]
        min_arity: Option<usize>,
        #[arg(long)]
        inputs: usize,
        /// Vertex bound; defaults to the input count.
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// Dimensions of a free operad in each arity.
    OperadDims {
        /// Presentation file; its generators and window are used.
        presentation: Option<PathBuf>,
        /// One binary generator instead of a presentation.
        #[arg(long, conflicts_with = "presentation")]
        binary: bool,
        #[arg(long, default_value_t = 5)]
        max_arity: usize,
    },
    /// Čech cohomology of a cover of a finite space.
    Cech {
        cover: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Cohomology of the cone of the trace form on a traced algebra.
    Defcomplex {
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        top: usize,
    },
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected lo..hi")?;
    Ok((a.parse().map_err(|_| "bad lower bound")?, b.parse().map_err(|_| "bad upper bound")?))
}

enum Failure {
    Parse(String),
    Invariant(String),
    NotStabilized(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            Error::NotStabilized { .. } => Failure::NotStabilized(e.to_string()),
            _ => Failure::Invariant(e.to_string()),
        }
    }
}

/// Result rows plus a structured copy for JSON output.
struct Report {
    command: &'static str,
    inputs: Vec<(String, String)>,
    rows: Vec<Vec<String>>,
    data: Value,
}

struct Inputs(Vec<(String, String)>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        self.0.push((path.display().to_string(), format!("{:x}", Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }
}

fn nums(v: &[usize]) -> Vec<String> {
    v.iter().map(usize::to_string).collect()
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    let mut inputs = Inputs(Vec::new());
    let (command, rows, data) = match cmd {
        Command::Hh { algebra, max_degree } => {
            let alg = AlgebraFile::from_json(&inputs.read(algebra)?)?.algebra()?;
            let dims = hochschild_cohomology(&alg, *max_degree)?;
            ("hh", vec![nums(&dims)], json!({ "dims": dims }))
        }
        Command::Hc { algebra, max_degree, localize } => {
            let alg = AlgebraFile::from_json(&inputs.read(algebra)?)?.algebra()?;
            let top = (*max_degree).max(localize.map_or(0, |w| w.1)) + 1;
            let mixed = CocyclicModule::of_algebra(&alg, top)?.mixed()?;
            let dims = mixed.cohomology(*max_degree)?;
            let mut rows = vec![nums(&dims)];
            let mut s_ranks = Vec::new();
            for n in 0..=max_degree.saturating_sub(2) {
                if n + 2 <= *max_degree {
                    let r = mixed.periodicity_rank(n)?;
                    rows.push(vec![format!("S{n}"), r.to_string()]);
                    let s = mixed.periodicity(n);
                    // cochain-level S on the total complex, as sparse (row, col, value) triples
                    let entries: Vec<Value> = s.entries().map(|(i, j, v)| json!([i, j, format_rational(v)])).collect();
                    s_ranks.push(json!({
                        "from": n,
                        "to": n + 2,
                        "rank": r,
                        "shape": [s.rows(), s.cols()],
                        "entries": entries,
                    }));
                }
            }
            let mut data = json!({ "dims": dims, "periodicity": s_ranks });
            if let Some((lo, hi)) = localize {
                let loc = localize_c1(&mixed, *lo..=*hi)?;
                rows.push(vec!["localized".into(), loc.dims[0].to_string(), loc.dims[1].to_string()]);
                data["localized"] = json!({ "even": loc.dims[0], "odd": loc.dims[1], "from": loc.certificate });
            }
            ("hc", rows, data)
        }
        Command::McCheck { algebra, max_arity, max_weight } => {
            let f = AlgebraFile::from_json(&inputs.read(algebra)?)?;
            let alg = f.product()?;
            let report = check_curved_mc(&CurvedMC::from_algebra(&alg), *max_arity, *max_weight);
            match report.first_failure() {
                None => {
                    let line = format!("OK through (n≤{max_arity}, k≤{max_weight})");
                    ("mc-check", vec![vec![line]], json!({ "ok": true, "max_arity": max_arity, "max_weight": max_weight }))
                }
                Some((n, k)) => {
                    return Err(Failure::Invariant(format!("Maurer-Cartan equation fails at (n={n}, k={k})")));
                }
            }
        }
        Command::Lift { problem } => {
            let file = LiftingProblemFile::from_json(&inputs.read(problem)?)?;
            let p = file.problem()?;
            match p.lift(file.lift_to)? {
                Ok(lift) => {
                    let pres = p.presentation();
                    let images: Vec<Value> = lift
                        .map()
                        .images()
                        .map(|(&(g, k), img)| {
                            json!({
                                "generator": pres.generators()[g].name,
                                "weight": k,
                                "kind": if matches!(img, Image::Cyc(_)) { "cyclic" } else { "noncyclic" },
                                "values": img.values().iter().map(format_rational).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let rows = vec![vec!["lifted".into(), lift.stage().to_string()]];
                    ("lift", rows, json!({ "status": "lifted", "stage": lift.stage(), "images": images }))
                }
                Err(report) => {
                    let data: Value = serde_json::from_str(&report.to_json()).expect("report is JSON");
                    // text output lists the class sparsely as coordinate:value
                    let mut row = vec!["obstructed".into(), report.weight.to_string()];
                    row.extend(
                        report.class.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("{i}:{}", format_rational(c))),
                    );
                    ("lift", vec![row], json!({ "status": "obstructed", "report": data }))
                }
            }
        }
        Command::Trees { arities, min_arity, inputs: n, max_vertices, list } => {
            if arities.is_empty() && min_arity.is_none() {
                return Err(Failure::Parse("give --arity or --min-arity".into()));
            }
            let allowed = |a: usize| arities.contains(&a) || min_arity.is_some_and(|m| a >= m);
            let trees = enumerate_trees(*n, &allowed, max_vertices.unwrap_or(*n));
            let mut rows = vec![vec![trees.len().to_string()]];
            if *list {
                rows.extend(trees.iter().map(|t| vec![t.clone()]));
            }
            let mut data = json!({ "count": trees.len() });
            if *list {
                data["trees"] = json!(trees);
            }
            ("trees", rows, data)
        }
        Command::OperadDims { presentation, binary, max_arity } => {
            let (gens, top, weight) = match presentation {
                Some(path) => {
                    let f: PresentationFile =
                        serde_json::from_str(&inputs.read(path)?).map_err(|e| Failure::Parse(e.to_string()))?;
                    (f.generators, f.window.max_arity, f.window.max_weight)
                }
                None if *binary => (vec![Generator::new("m", 2, false, 0, 0)], *max_arity, 0),
                None => return Err(Failure::Parse("give a presentation file or --binary".into())),
            };
            let op = FreeOperad::new(gens, top, weight)?;
            let dims: Vec<usize> = (0..=top).map(|n| op.dim(n)).collect();
            let cyc: Vec<usize> = (0..=top).map(|n| op.cyc_dim(n)).collect();
            let mut rows = vec![nums(&dims)];
            if cyc.iter().any(|&c| c > 0) {
                rows.push(nums(&cyc));
            }
            ("operad-dims", rows, json!({ "dims": dims, "cyclic_dims": cyc }))
        }
        Command::Cech { cover, max_degree } => {
            let c = CoverFile::from_json(&inputs.read(cover)?)?;
            let dims = cech_cohomology(&c, *max_degree)?;
            ("cech", vec![nums(&dims)], json!({ "dims": dims }))
        }
        Command::Defcomplex { algebra, top } => {
            let f = AlgebraFile::from_json(&inputs.read(algebra)?)?;
            let tr = f.traced()?.ok_or_else(|| Failure::Invariant("the algebra file has no trace".into()))?;
            let h = deformation_complex(&tr, *top)?.homology();
            let rows = vec![h.iter().map(|(d, n)| format!("{d}:{n}")).collect()];
            let data = json!({ "homology": h.iter().map(|(d, n)| json!({ "degree": d, "dim": n })).collect::<Vec<_>>() });
            ("defcomplex", rows, data)
        }
    };
    Ok(Report { command, inputs: inputs.0, rows, data })
}

fn render(r: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            let v = json!({
                "command": r.command,
                "sign_convention_version": SIGN_CONVENTION_VERSION,
                "inputs": r.inputs.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect::<Vec<_>>(),
                "result": r.data,
            });
            out = serde_json::to_string_pretty(&v).expect("serializable");
            out.push('\n');
        }
        Format::Text | Format::Tsv => {
            let sep = if matches!(format, Format::Tsv) { "\t" } else { " " };
            for row in &r.rows {
                let _ = writeln!(out, "{}", row.join(sep));
            }
            for (p, h) in &r.inputs {
                let _ = writeln!(out, "# input{sep}{p}{sep}sha256={h}");
            }
            let _ = writeln!(out, "# sign-conventions{sep}v{SIGN_CONVENTION_VERSION}");
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(r) => {
            print!("{}", render(&r, cli.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Parse(m) => (2, m),
                Failure::Invariant(m) => (3, m),
                Failure::NotStabilized(m) => (4, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
