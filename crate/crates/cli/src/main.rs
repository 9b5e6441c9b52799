use std::fmt::Write as _;
use std::fs;
use std::io::Write as IoWrite;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tropicurv::experiments::DEFAULT_SEED;
use tropicurv::{
    classify_curvature, classify_type, draw_samples, parse_points, run_experiment, side_comparison, Error,
    ExperimentConfig, ExperimentId, ProjectivePoint, Rational, SamplerSpec, Vertex,
};

#[derive(Parser)]
#[command(name = "tropicurv", version, about = "Alexandrov curvature of tropical triangles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature class with per-side evidence.
    Curvature {
        /// Affine coordinates, e.g. "0,0;448,449;452,256" (first coordinate 0 is implicit).
        #[arg(long)]
        points: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Combinatorial type of a plane triangle.
    Type {
        #[arg(long)]
        points: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Distance profile of a vertex along its opposite side, with the
    /// comparison curve.
    Profile {
        #[arg(long)]
        points: String,
        /// a:bc, b:ac or c:ab
        #[arg(long)]
        side: String,
        /// Spacing of the dense numeric sampling; omitted means breakpoints only.
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DataFormat,
    },
    /// Draw triangles from a sampler; one triangle per line.
    Sample {
        #[arg(long)]
        sampler: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, env = "TROPICURV_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Run one of the table experiments.
    Experiment {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, env = "TROPICURV_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        sampler: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DataFormat,
    },
}

const EXIT_PARSE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_CONFIG: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DuplicateVertices | Error::DegenerateSegment) => EXIT_DEGENERATE,
        Some(
            Error::Config(_)
            | Error::InvalidParameter(_)
            | Error::UnknownSystem(_)
            | Error::TriesExhausted { .. }
            | Error::Infeasible
            | Error::LowerDimensional
            | Error::Unbounded,
        ) => EXIT_CONFIG,
        Some(_) => EXIT_PARSE,
        // I/O and serialization failures.
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn triangle(text: &str) -> Result<[ProjectivePoint; 3], Error> {
    let pts = parse_points(text)?;
    if pts.len() < 3 {
        return Err(Error::Parse(format!("need 3 points, got {}", pts.len())));
    }
    Ok([pts[0].clone(), pts[1].clone(), pts[2].clone()])
}

fn emit(out: Option<&PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().write_all(body.as_bytes()) {
            // A closed pipe (e.g. `| head`) is not an error.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Curvature { points, format } => emit(None, &curvature(&points, format)?),
        Command::Type { points, format } => {
            let [a, b, c] = triangle(&points)?;
            let set = classify_type(&a, &b, &c)?;
            let body = match format {
                TextFormat::Text => format!("{set}\n"),
                TextFormat::Json => serde_json::to_string_pretty(&set)? + "\n",
            };
            emit(None, &body)
        }
        Command::Profile {
            points,
            side,
            step,
            out,
            format,
        } => {
            let vertex: Vertex = side.parse()?;
            let step = step.map(|s| s.parse::<Rational>()).transpose()?;
            let body = profile(&points, vertex, step.as_ref(), format)?;
            emit(out.as_ref(), &body)
        }
        Command::Sample {
            sampler,
            n,
            seed,
            format,
        } => {
            let spec: SamplerSpec = sampler.parse()?;
            let draws = draw_samples(&spec, seed, 0, n)?;
            let body = match format {
                TextFormat::Text => draws
                    .iter()
                    .map(|d| match &d.triangle {
                        Some([a, b, c]) => format!("{a};{b};{c}\n"),
                        None => "rejected\n".to_string(),
                    })
                    .collect(),
                TextFormat::Json => {
                    let rows: Vec<_> = draws
                        .iter()
                        .enumerate()
                        .map(|(i, d)| {
                            json!({
                                "index": i,
                                "points": d.triangle.as_ref().map(|t| t.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
                                "tries": d.tries,
                            })
                        })
                        .collect();
                    let doc = json!({ "sampler": spec.to_string(), "seed": seed, "draws": rows });
                    serde_json::to_string_pretty(&doc)? + "\n"
                }
            };
            emit(None, &body)
        }
        Command::Experiment {
            id,
            trials,
            runs,
            seed,
            dim,
            sampler,
            out,
            format,
        } => {
            let id: ExperimentId = id.parse()?;
            let sampler = sampler
                .map(|s| s.parse::<SamplerSpec>())
                .transpose()
                .map_err(|e| Error::Config(e.to_string()))?;
            let cfg = ExperimentConfig {
                id,
                trials,
                runs,
                seed,
                sampler,
                dim,
            };
            let table = run_experiment(&cfg)?;
            let body = match format {
                DataFormat::Csv => table.to_csv(),
                DataFormat::Json => table.to_json() + "\n",
            };
            emit(out.as_ref(), &body)
        }
    }
}

fn curvature(points: &str, format: TextFormat) -> anyhow::Result<String> {
    let [a, b, c] = triangle(points)?;
    let report = classify_curvature(&a, &b, &c)?;
    let mut out = String::new();
    match format {
        TextFormat::Json => {
            let mut doc = serde_json::to_value(&report)?;
            doc["witnesses"] = serde_json::to_value(report.witnesses())?;
            out = serde_json::to_string_pretty(&doc)? + "\n";
        }
        TextFormat::Text => {
            writeln!(out, "class={}", report.class)?;
            let s = &report.side_lengths;
            writeln!(out, "sides: ab={} ac={} bc={}", s.ab, s.ac, s.bc)?;
            for cmp in &report.comparisons {
                writeln!(out, "side {}: signs of f-h {}", cmp.vertex.side_label(), cmp.union_signs)?;
                for p in cmp.pieces.iter().filter(|p| p.signs.plus || p.signs.minus) {
                    let signs: String = [(p.signs.plus, '+'), (p.signs.minus, '-')]
                        .iter()
                        .filter_map(|&(on, ch)| on.then_some(ch))
                        .collect();
                    writeln!(out, "  witness {signs} on [{}, {}]", p.t_lo, p.t_hi)?;
                }
            }
        }
    }
    Ok(out)
}

fn profile(points: &str, vertex: Vertex, step: Option<&Rational>, format: DataFormat) -> anyhow::Result<String> {
    let [a, b, c] = triangle(points)?;
    let cmp = side_comparison(vertex, &a, &b, &c)?;
    let h2 = &cmp.h_squared;
    let knots = cmp.profile.knots();
    let samples = match step {
        None => Vec::new(),
        Some(step) if !step.is_positive() => {
            return Err(Error::InvalidParameter("step must be positive".into()).into());
        }
        Some(step) => {
            let end = cmp.profile.domain_end().clone();
            let mut ts = Vec::new();
            let mut t = Rational::zero();
            while t < end {
                ts.push(t.clone());
                t = &t + step;
            }
            ts.push(end);
            ts.into_iter()
                .map(|t| {
                    let f = cmp.profile.eval(&t)?;
                    Ok((t.to_f64(), f.square().to_f64(), h2.eval(&t).to_f64()))
                })
                .collect::<Result<Vec<_>, Error>>()?
        }
    };
    Ok(match format {
        DataFormat::Json => {
            let doc = json!({
                "side": vertex.side_label(),
                "a": cmp.a, "b": cmp.b, "c": cmp.c,
                "breakpoints": knots.iter().map(|(t, f)| json!({"t": t, "f": f})).collect::<Vec<_>>(),
                "h_squared": h2,
                "samples": samples.iter().map(|(t, f2, h)| json!({"t": t, "f_squared": f2, "h_squared": h})).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        DataFormat::Csv => {
            let mut s = format!("# side {} h^2 = {} t^2 + {} t + {}\n", vertex.side_label(), h2.c2, h2.c1, h2.c0);
            s.push_str("kind,t,f,f_squared,h_squared\n");
            for (t, f) in &knots {
                s.push_str(&format!("breakpoint,{t},{f},{},{}\n", f.square(), h2.eval(t)));
            }
            for (t, f2, h) in &samples {
                s.push_str(&format!("sample,{t},,{f2},{h}\n"));
            }
            s
        }
    })
}
