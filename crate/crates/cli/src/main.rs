mod report;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ame_core::correspondence;
use ame_core::groups::{self, CodeGate};
use ame_core::invariants::{self, CartanPoint};
use ame_core::io::{self, Ingested};
use ame_core::kempfness::{self, FloatState, FlowOptions};
use ame_core::qecc::CodeSubspace;
use ame_core::{constants, cyclo, Cyclo, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::{CommandReport, SuiteReport};
use suites::Settings;

#[derive(Parser)]
#[command(name = "ame", version, about = "Verify the ((3,3,2))_3 code, the 4-qutrit AME state and their symmetries")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Conductor N of Q(zeta_N) for parsed numbers.
    #[arg(long, global = true, default_value_t = cyclo::DEFAULT_CONDUCTOR)]
    conductor: u32,
    /// Closure cap (default: ten times the expected order).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Criticality tolerance.
    #[arg(long, global = true, default_value_t = kempfness::DEFAULT_CRITICAL_TOL)]
    tol: f64,
    /// Write the JSON report here as well.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run independent checks on separate threads.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only checks whose name contains this text; skip the rest.
        #[arg(long)]
        only: Option<String>,
    },
    /// Map a code to its purification or a state to its reduced code, and back.
    Correspond {
        /// A .state or .code file.
        input: PathBuf,
    },
    /// Group closure, W(C), S(|Phi>) and coset checks
    #[command(subcommand)]
    Group(GroupCommand),
    /// Evaluate and test the degree 6, 9 and 12 invariants
    #[command(subcommand)]
    Invariants(InvariantsCommand),
    /// Floating-point criticality and norm-minimization flow
    #[command(subcommand)]
    Kempfness(KempfnessCommand),
    /// Parse and validate a state, operator list or code file.
    Ingest {
        input: PathBuf,
        /// Re-serialize the validated object to this path.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Close a set of operators from an .ops file.
    Close {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Close R1, R2, R3 and compare with the expected matrices.
    VerifyWeyl,
    /// Close the five |Phi> symmetries and check each element fixes |Phi>.
    VerifyLocalSymmetry,
    /// Check that Q1, Q2, Q3 map to R1, R2, R3 under mu.
    VerifyCosets {
        /// Representatives to check instead of the built-in ones.
        #[arg(long)]
        reps: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InvariantsCommand {
    /// Evaluate I6, I9, I12 and the fingerprint at a,b,c (rationals "p/q").
    Eval {
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<String>,
    },
    /// Randomized identity test of invariance under R1, R2, R3.
    CheckWeyl {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum KempfnessCommand {
    /// Norm minimization over SL^n starting from a state file.
    Flow {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        /// Apply a seeded random g in SL with this spread before flowing.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// Both criticality residuals of a state file.
    Critical {
        #[arg(long)]
        state: PathBuf,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(bool, String), Failure>;

fn emit<T: Serialize>(global: &Global, value: &T, text: String) -> Result<String, Failure> {
    let json = serde_json::to_string_pretty(value).expect("reports serialize");
    if let Some(path) = &global.out {
        fs::write(path, format!("{json}\n"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(match global.format {
        Format::Json => json,
        Format::Text => text,
    })
}

fn command_report<T: Serialize>(global: &Global, name: &str, passed: bool, value: &T) -> Outcome {
    let r = CommandReport::new(name, passed, value);
    let text = r.to_text();
    Ok((passed, emit(global, &r, text)?))
}

fn read_state(path: &Path) -> Result<ame_core::PureState, Failure> {
    match io::ingest(path)? {
        Ingested::State(v) => Ok(v),
        other => Err(Failure::Usage(format!(
            "{}: expected a state, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Suite { name, seed, only } => {
            let jobs = suites::jobs(&name).ok_or_else(|| Failure::Usage(format!("unknown suite {name}")))?;
            let settings = Settings { seed, tol: g.tol, cap: g.cap };
            let report = SuiteReport::new(&name, seed, suites::run(&jobs, &settings, only.as_deref(), g.parallel));
            let text = report.to_text();
            Ok((report.passed, emit(g, &report, text)?))
        }
        Command::Correspond { input } => {
            let r = match io::ingest(&input)? {
                Ingested::Code(code) => correspondence::roundtrip_code(&code)?,
                Ingested::State(v) => correspondence::roundtrip_state(&v)?,
                other => {
                    return Err(Failure::Usage(format!(
                        "correspond takes a state or a code, found {}",
                        other.kind()
                    )))
                }
            };
            command_report(g, "correspond", r.roundtrip_exact, &r)
        }
        Command::Group(cmd) => group(g, cmd),
        Command::Invariants(cmd) => invariants_cmd(g, cmd),
        Command::Kempfness(cmd) => kempfness_cmd(g, cmd),
        Command::Ingest { input, write } => {
            let obj = io::ingest(&input)?;
            let summary = match &obj {
                Ingested::State(v) => format!("state on dims {:?}, conductor {}", v.dims(), v.conductor()),
                Ingested::Operators(ops) => format!("{} operators in canonical form", ops.len()),
                Ingested::Code(c) => format!(
                    "orthonormal code: n = {}, K = {}, D = {}",
                    c.sites(),
                    c.dimension(),
                    c.local_dim()
                ),
            };
            if let Some(path) = write {
                let header = io::header_lines(&io::read_to_string(&input)?);
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                fs::write(&path, obj.to_file_string(&header)?)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            #[derive(Serialize)]
            struct IngestReport<'a> {
                kind: &'a str,
                summary: String,
            }
            command_report(g, "ingest", true, &IngestReport { kind: obj.kind(), summary })
        }
    }
}

fn group(g: &Global, cmd: GroupCommand) -> Outcome {
    #[derive(Serialize)]
    struct OrderReport {
        order: usize,
        expected: Option<usize>,
        cap: usize,
    }
    match cmd {
        GroupCommand::Close { gens } => {
            let ops = match io::ingest(&gens)? {
                Ingested::Operators(ops) => ops,
                other => return Err(Failure::Usage(format!("expected operators, found {}", other.kind()))),
            };
            if let Some(op) = ops.iter().find(|o| o.conductor() != g.conductor) {
                return Err(Failure::Usage(format!(
                    "generator over conductor {}, --conductor is {}",
                    op.conductor(),
                    g.conductor
                )));
            }
            let cap = g.cap.unwrap_or(100_000);
            let group = groups::close_operators(&ops, cap)?;
            command_report(g, "group close", true, &OrderReport { order: group.order(), expected: None, cap })
        }
        GroupCommand::VerifyWeyl => {
            let cap = g.cap.unwrap_or(10 * groups::WEYL_ORDER);
            let w = groups::weyl_group_with_cap(cap)?;
            let r = OrderReport { order: w.order(), expected: Some(groups::WEYL_ORDER), cap };
            command_report(g, "group verify-weyl", w.order() == groups::WEYL_ORDER, &r)
        }
        GroupCommand::VerifyLocalSymmetry => {
            let cap = g.cap.unwrap_or(10 * groups::LOCAL_SYMMETRY_ORDER);
            let s = groups::local_symmetry_group_with_cap(cap)?;
            let r = OrderReport { order: s.order(), expected: Some(groups::LOCAL_SYMMETRY_ORDER), cap };
            command_report(g, "group verify-local-symmetry", s.order() == groups::LOCAL_SYMMETRY_ORDER, &r)
        }
        GroupCommand::VerifyCosets { reps } => {
            let reps = match reps {
                Some(path) => match io::ingest(&path)? {
                    Ingested::Operators(ops) => ops,
                    other => return Err(Failure::Usage(format!("expected operators, found {}", other.kind()))),
                },
                None => constants::coset_representatives().to_vec(),
            };
            let code = CodeSubspace::new(constants::code_basis(), Some(2))?;
            let r = groups::verify_coset_representatives(&reps, &constants::tabulated_weyl_generators(), &code)?;
            command_report(g, "group verify-cosets", r.passed, &r)
        }
    }
}

fn invariants_cmd(g: &Global, cmd: InvariantsCommand) -> Outcome {
    match cmd {
        InvariantsCommand::Eval { point } => {
            if point.len() != 3 {
                return Err(Failure::Usage(format!("--point takes 3 coordinates, got {}", point.len())));
            }
            let coords = point
                .iter()
                .map(|s| cyclo::parse_rational(s).map(|q| Cyclo::from_rational(&q, g.conductor)))
                .collect::<Result<Vec<_>, _>>()?;
            let p = CartanPoint::new(coords[0].clone(), coords[1].clone(), coords[2].clone());
            #[derive(Serialize)]
            struct EvalReport {
                point: CartanPoint,
                invariants: invariants::InvariantTriple,
                fingerprint: Option<invariants::Fingerprint>,
                fingerprint_error: Option<String>,
            }
            let (fingerprint, fingerprint_error) = match invariants::invariant_ratio_fingerprint(&p) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let r = EvalReport { invariants: invariants::eval_invariants(&p), point: p, fingerprint, fingerprint_error };
            command_report(g, "invariants eval", true, &r)
        }
        InvariantsCommand::CheckWeyl { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let reports = constants::tabulated_weyl_generators()
                .into_iter()
                .map(|r| invariants::check_weyl_invariance(&CodeGate::new(r)?, trials, &mut rng))
                .collect::<ame_core::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.invariant);
            command_report(g, "invariants check-weyl", passed, &reports)
        }
    }
}

fn kempfness_cmd(g: &Global, cmd: KempfnessCommand) -> Outcome {
    match cmd {
        KempfnessCommand::Flow { state, seed, iters, perturb, step } => {
            let v = FloatState::from_exact(&read_state(&state)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = if perturb > 0.0 {
                v.apply_local(&kempfness::random_sl(v.dims(), perturb, &mut rng))?
            } else {
                v
            };
            let r = kempfness::norm_minimization_flow(
                &start,
                FlowOptions { max_iters: iters, step, tol: g.tol },
            );
            command_report(g, "kempfness flow", r.converged, &r)
        }
        KempfnessCommand::Critical { state } => {
            let v = FloatState::from_exact(&read_state(&state)?)?;
            let r = kempfness::is_critical(&v, g.tol);
            command_report(g, "kempfness critical", r.critical, &r)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((passed, out)) => {
            println!("{}", out.trim_end());
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
