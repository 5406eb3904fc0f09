use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vfres_core::blowup::{BlowupStep, Direction};
use vfres_core::classify::{classify_configuration, NewtonData};
use vfres_core::driver::{resolve, Caps, ResolveOptions};
use vfres_core::fiber::fiber_points;
use vfres_core::field::mu_omega;
use vfres_core::prepare::stabilize;
use vfres_core::rat::parse_q;
use vfres_core::{Error, Q};

use vfres::exit;
use vfres::input::{emit_input, parse_input, InputDocument, Prepared};
use vfres::off::export_polyhedron;
use vfres::report::{self, analyze, analysis_text, gmap_string, to_json, tree_report, tree_text, Lambda, Rational};
use vfres::stratum::{evaluate, parse_stratum};
use vfres::verify::verify_report;

#[derive(Parser)]
#[command(name = "vfres", version, about = "Newton polyhedra and weighted blow-ups of polynomial vector fields in three variables")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Scale used when printing the last two invariant entries.
    #[arg(long, global = true, value_enum, default_value_t = Lambda::Double)]
    lambda: Lambda,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    X,
    Y,
    Z,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton data, classification and invariant at the origin.
    Analyze { file: PathBuf },
    /// Runs the preparation procedure and prints the coordinate changes.
    Stabilize {
        file: PathBuf,
        /// Write the prepared field as an input document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// One directional chart of a weighted blow-up.
    Blowup {
        file: PathBuf,
        #[arg(long, value_enum)]
        dir: Dir,
        /// `+` or `-`.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Recenter at the chart point z = XI, y = ETA.
        #[arg(long, value_name = "XI,ETA", allow_hyphen_values = true)]
        translate: Option<String>,
        /// Weight to use instead of the main-face weight.
        #[arg(long, value_name = "A,B,C")]
        force_weight: Option<String>,
        /// Write the transformed field as an input document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Builds the resolution tree.
    Resolve {
        file: PathBuf,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Weight for the first blow-up instead of the main-face weight.
        #[arg(long, value_name = "A,B,C")]
        force_weight: Option<String>,
        /// Also write the JSON tree report here.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Re-checks the decrease certificate of a JSON tree report.
    Verify { tree: PathBuf },
    /// Multiplicity of a bad tree given by a stratum file.
    Badtree { stratum: PathBuf },
    /// Writes the clipped Newton polyhedron as OFF.
    Export {
        file: PathBuf,
        #[arg(long)]
        off: PathBuf,
        /// Adds the section at this height.
        #[arg(long, value_name = "V3", allow_hyphen_values = true)]
        derived_at: Option<String>,
        /// Upper corner of the clipping box.
        #[arg(long = "box", value_name = "A,B,C")]
        bbox: Option<String>,
        #[arg(long, default_value_t = report::DEFAULT_PRECISION)]
        precision: usize,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded(_) | Error::IrrationalFiberPoint(_) | Error::NonIsolatedFiber | Error::IrrationalPreparation(_) => {
                exit::UNRESOLVED
            }
            Error::DecreaseViolation(_) => exit::DECREASE,
            _ => exit::VALIDATION,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(exit::FAILURE, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(InputDocument, Prepared), Failure> {
    let doc = parse_input(&read(path)?).map_err(|e| Failure::new(exit::VALIDATION, e.to_string()))?;
    let prep = doc.prepare().map_err(|e| Failure::new(exit::VALIDATION, e.to_string()))?;
    for w in &prep.warnings {
        eprintln!("warning: {w}");
    }
    Ok((doc, prep))
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<Q>, Failure> {
    let v: Option<Vec<Q>> = s.split(',').map(parse_q).collect();
    match v {
        Some(v) if v.len() == n => Ok(v),
        _ => Err(Failure::new(exit::VALIDATION, format!("{what}: expected {n} comma-separated rationals, got {s:?}"))),
    }
}

fn parse_weight(s: &str) -> Result<[i64; 3], Failure> {
    let w: Option<Vec<i64>> = s.split(',').map(|a| a.trim().parse().ok()).collect();
    match w.as_deref() {
        Some(&[a, b, c]) if a >= 0 && b >= 0 && c >= 0 && a + b + c > 0 => Ok([a, b, c]),
        _ => Err(Failure::new(exit::VALIDATION, format!("weight: expected three nonnegative integers, got {s:?}"))),
    }
}

fn emit<T: Serialize>(fmt: Format, v: &T, text: impl FnOnce(&T) -> String) {
    match fmt {
        Format::Json => print!("{}", to_json(v)),
        Format::Text => print!("{}", text(v)),
    }
}

#[derive(Serialize)]
struct StabilizeReport {
    field: String,
    maps: Vec<String>,
    class: Option<report::ClassReport>,
}

#[derive(Serialize)]
struct BlowupReport {
    weight: [i64; 3],
    order: i64,
    step: report::StepReport,
    fiber_points: Vec<FiberJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber_error: Option<String>,
    analysis: report::AnalysisReport,
}

#[derive(Serialize)]
struct FiberJson {
    y: Rational,
    z: Rational,
    generic: bool,
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Analyze { file } => {
            let (doc, prep) = load(&file)?;
            let mut r = analyze(doc.name.clone(), &prep.vf, &prep.divisor, cli.lambda);
            r.relabel = prep.relabel;
            r.warnings = prep.warnings;
            emit(fmt, &r, analysis_text);
            Ok(if r.error.is_some() { exit::VALIDATION } else { exit::OK })
        }
        Cmd::Stabilize { file, emit: out } => {
            let (doc, prep) = load(&file)?;
            let data = NewtonData::from_field(&prep.vf, prep.divisor.clone())?;
            let (sd, maps) = stabilize(&data)?;
            let vf = sd.field();
            let r = StabilizeReport {
                field: report::field_string(&vf),
                maps: maps.iter().map(gmap_string).collect(),
                class: classify_configuration(&sd).ok().map(|c| report::ClassReport::new(&c)),
            };
            if let Some(path) = out {
                let mut d = InputDocument::from_field(doc.name.as_deref(), &vf, &divisor_names(&prep));
                d.incidence_tags = doc.incidence_tags.clone();
                write(&path, &emit_input(&d))?;
            }
            emit(fmt, &r, |r| {
                let mut s = format!("field: {}\n", r.field);
                for m in &r.maps {
                    s.push_str(&format!("map: {m}\n"));
                }
                s
            });
            Ok(exit::OK)
        }
        Cmd::Blowup { file, dir, sign, translate, force_weight, emit: out } => {
            let (doc, prep) = load(&file)?;
            let eps: i8 = match sign.as_str() {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                s => return Err(Failure::new(exit::VALIDATION, format!("sign must be + or -, got {s:?}"))),
            };
            let dir = match dir {
                Dir::X => Direction::X,
                Dir::Y => Direction::Y,
                Dir::Z => Direction::Z,
            };
            let data = NewtonData::from_field(&prep.vf, prep.divisor.clone())?;
            let (sd, omega) = match force_weight {
                Some(w) => (data, parse_weight(&w)?),
                None => {
                    let (sd, _) = stabilize(&data)?;
                    let omega = classify_configuration(&sd)?.disp.omega;
                    (sd, omega)
                }
            };
            let mu = mu_omega(&sd.theta, &omega)?;
            let (xi, eta) = match translate {
                Some(t) => {
                    let v = parse_list(&t, 2, "translate")?;
                    (v[0].clone(), v[1].clone())
                }
                None => (Q::from_integer(0.into()), Q::from_integer(0.into())),
            };
            let step = BlowupStep::new(omega, mu, dir, eps).at(eta, xi);
            let chart = vfres_core::blowup::bl_directional(&sd, &step)?;
            let vf = chart.field();
            let (points, fiber_error) = match fiber_points(&vf, dir, &omega) {
                Ok(p) => (p, None),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            let r = BlowupReport {
                weight: omega,
                order: mu,
                step: report::StepReport::new(&step),
                fiber_points: points.iter().map(|p| FiberJson { y: Rational::new(&p.eta), z: Rational::new(&p.xi), generic: p.generic }).collect(),
                fiber_error,
                analysis: analyze(doc.name.clone(), &vf, &chart.divisor, cli.lambda),
            };
            if let Some(path) = out {
                let mut d = InputDocument::from_field(doc.name.as_deref(), &vf, &[]);
                let mut axes = Vec::new();
                let mut tags = Vec::new();
                for (k, t) in chart.divisor.tags.iter().enumerate() {
                    if let Some(t) = t {
                        axes.push(["x", "y", "z"][k].to_string());
                        tags.push(*t);
                    }
                }
                d.divisor = axes;
                d.incidence_tags = Some(tags);
                write(&path, &emit_input(&d))?;
            }
            emit(fmt, &r, |r| {
                let mut s = format!("weight {:?}, order {}\n", r.weight, r.order);
                for p in &r.fiber_points {
                    s.push_str(&format!("nonelementary fiber point (y, z) = ({}, {}){}\n", p.y.exact, p.z.exact, if p.generic { " generic" } else { "" }));
                }
                if let Some(e) = &r.fiber_error {
                    s.push_str(&format!("fiber: {e}\n"));
                }
                s.push_str(&analysis_text(&r.analysis));
                s
            });
            Ok(exit::OK)
        }
        Cmd::Resolve { file, max_depth, max_nodes, force_weight, tree } => {
            let (doc, prep) = load(&file)?;
            let mut caps = Caps::default();
            if let Some(d) = max_depth.or(doc.options.max_depth) {
                caps.max_depth = d;
            }
            if let Some(n) = max_nodes.or(doc.options.max_nodes) {
                caps.max_nodes = n;
            }
            let forced = match force_weight {
                Some(w) => Some(parse_weight(&w)?),
                None => doc.options.forced_weight,
            };
            let t = resolve(&prep.vf, prep.divisor.clone(), &ResolveOptions { caps, forced_weight: forced })?;
            let r = tree_report(doc.name.clone(), &t, cli.lambda);
            if let Some(path) = tree {
                write(&path, &to_json(&r))?;
            }
            emit(fmt, &r, tree_text);
            Ok(if !r.certificate.ok {
                exit::DECREASE
            } else if !r.resolved {
                exit::UNRESOLVED
            } else {
                exit::OK
            })
        }
        Cmd::Verify { tree } => {
            let t: report::TreeReport =
                serde_json::from_str(&read(&tree)?).map_err(|e| Failure::new(exit::VALIDATION, format!("{}: {e}", tree.display())))?;
            match verify_report(&t) {
                Ok(n) => {
                    println!("ok: {n} decreasing links");
                    Ok(exit::OK)
                }
                Err(vfres::verify::VerifyError::Malformed(m)) => Err(Failure::new(exit::VALIDATION, m)),
                Err(e) => Err(Failure::new(exit::DECREASE, e.to_string())),
            }
        }
        Cmd::Badtree { stratum } => {
            let doc = parse_stratum(&read(&stratum)?).map_err(|e| Failure::new(exit::VALIDATION, e.to_string()))?;
            let r = evaluate(&doc);
            emit(fmt, &r, |r| format!("{r:#?}\n"));
            Ok(match (&r.error, r.matches_expectation) {
                (_, Some(false)) => exit::FAILURE,
                (None, _) | (Some(_), Some(true)) => exit::OK,
                (Some(_), _) if r.decreases == Some(false) => exit::DECREASE,
                _ => exit::VALIDATION,
            })
        }
        Cmd::Export { file, off, derived_at, bbox, precision } => {
            let (_, prep) = load(&file)?;
            let data = NewtonData::from_field(&prep.vf, prep.divisor.clone())?;
            let np = data.polyhedron()?;
            let section = derived_at.map(|s| parse_list(&s, 1, "derived-at")).transpose()?.map(|v| v[0].clone());
            let upper = bbox.map(|s| parse_list(&s, 3, "box")).transpose()?.map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]);
            write(&off, &export_polyhedron(&np, upper, section.as_ref(), precision))?;
            Ok(exit::OK)
        }
    }
}

fn divisor_names(p: &Prepared) -> Vec<&'static str> {
    ["x", "y", "z"].iter().zip(p.divisor.tags.iter()).filter(|(_, t)| t.is_some()).map(|(a, _)| *a).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code as u8)
        }
    }
}
