use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use caylink_cli::report::{self, Algo, Endpoint, Selector};
use caylink_cli::{load_text, Failure, Loaded, Outcome};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "caylink", version, about = "Cayley configuration spaces of 1-dof planar linkages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Elr,
    Qim,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    NestedQuads,
}

#[derive(Subcommand)]
enum Command {
    /// Tree-decomposability, extreme graphs, low Cayley complexity and the 1-path test.
    Check {
        /// Linkage document, or `-` for stdin.
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Interval sets of the Cayley configuration space.
    #[command(group(ArgGroup::new("which").args(["sigma", "minimal_type", "all_types"])))]
    Space {
        file: String,
        #[arg(long, value_enum, default_value = "elr")]
        algo: AlgoArg,
        /// One forward type, such as `+-+` (ELR only).
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Minimal type of the realization at `LF:TYPE` (QIM only).
        #[arg(long, allow_hyphen_values = true)]
        minimal_type: Option<String>,
        /// Every type (the default).
        #[arg(long)]
        all_types: bool,
        /// Run ELR and QIM on the whole space and diff the unions.
        #[arg(long, conflicts_with_all = ["sigma", "minimal_type"])]
        compare: bool,
        /// Keep QIM in double precision.
        #[arg(long)]
        double: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Coordinates of one realization.
    Realize {
        file: String,
        #[arg(long)]
        lf: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        json: bool,
    },
    /// Paths of continuous motion between two realizations.
    Motion {
        file: String,
        /// `LF:TYPE`, or `@file.json` holding `{"points": {"0": [x, y], ...}}`.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Frames per leg.
        #[arg(long)]
        animate: Option<usize>,
        /// Where to write the frames as JSON (default: included in --json output).
        #[arg(long, requires = "animate")]
        frames: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Samples of the Cayley curve, grouped by motion component.
    Curve {
        file: String,
        /// Samples per oriented interval.
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        /// Output file; `.csv` gives CSV, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check that nearby vectors come from the same realization.
        #[arg(long)]
        probe: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// HTTP JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of static files served for other paths.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Writes a generated linkage document.
    Fixture {
        #[arg(long, value_enum, default_value = "nested-quads")]
        family: Family,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1e-5)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_doc(file: &str) -> Outcome<Loaded> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| Failure::Io(format!("{file}: {e}")))?
    };
    load_text(&text).map_err(|e| match e {
        Failure::Parse(m) => Failure::Parse(format!("{file}: {m}")),
        e => e,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn write_out(path: &PathBuf, text: &str) -> Outcome<()> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Outcome<String> {
    match cli.command {
        Command::Check { file, json } => {
            let loaded = match read_doc(&file) {
                Err(Failure::Domain(e @ caylink::Error::NotBaseNonEdge(_))) => {
                    println!("tree-decomposable (G + f): no");
                    return Err(Failure::Domain(e));
                }
                r => r?,
            };
            let rep = report::check(&loaded);
            Ok(if json { to_json(&rep) } else { rep.render() })
        }
        Command::Space { file, algo, sigma, minimal_type, all_types: _, compare, double, json, csv } => {
            let loaded = read_doc(&file)?;
            if compare {
                let c = report::compare(&loaded)?;
                return Ok(if json { to_json(&c) } else { c.render() });
            }
            let algo = match algo {
                AlgoArg::Elr => Algo::Elr,
                AlgoArg::Qim => Algo::Qim,
            };
            let sel = match (sigma, minimal_type) {
                (Some(s), _) => Selector::Sigma(s),
                (_, Some(m)) => {
                    let (lf, sigma) = report::parse_config(&m)?;
                    Selector::MinimalOf { lf, sigma }
                }
                _ => Selector::AllTypes,
            };
            let rep = report::space(&loaded, algo, &sel, double)?;
            Ok(if json {
                to_json(&rep)
            } else if csv {
                rep.csv()
            } else {
                rep.render()
            })
        }
        Command::Realize { file, lf, sigma, json } => {
            let loaded = read_doc(&file)?;
            let rep = report::realize_at(&loaded, lf, &sigma)?;
            if json {
                return Ok(to_json(&rep));
            }
            Ok(rep.points.iter().map(|(v, [x, y])| format!("v{v}: {x} {y}\n")).collect())
        }
        Command::Motion { file, from, to, animate, frames, json } => {
            let loaded = read_doc(&file)?;
            let (a, b) = (Endpoint::parse_arg(&from)?, Endpoint::parse_arg(&to)?);
            let mut rep = report::motion(&loaded, &a, &b, animate)?;
            if let Some(path) = frames {
                write_out(&path, &to_json(&rep.frames.take().unwrap_or_default()))?;
            }
            Ok(if json { to_json(&rep) } else { rep.render() })
        }
        Command::Curve { file, resolution, out, probe, json, csv } => {
            let loaded = read_doc(&file)?;
            let rep = report::curve(&loaded, resolution, probe)?;
            if let Some(path) = out {
                let is_csv = path.extension().is_some_and(|e| e == "csv");
                write_out(&path, &if is_csv { rep.csv() } else { to_json(&rep) })?;
                return Ok(rep.render());
            }
            Ok(if json {
                to_json(&rep)
            } else if csv {
                rep.csv()
            } else {
                rep.render()
            })
        }
        Command::Serve { port, assets } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
            rt.block_on(caylink_cli::server::serve(port, assets)).map_err(|e| Failure::Io(e.to_string()))?;
            Ok(String::new())
        }
        Command::Fixture { family: Family::NestedQuads, k, eps, out } => {
            let (doc, warnings) = report::fixture(k, eps)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let text = doc.to_json() + "\n";
            match out {
                Some(path) => {
                    write_out(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share the exit code of malformed input
            return if e.use_stderr() { ExitCode::from(Failure::Parse(String::new()).exit_code()) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
