//! Command-line front end: basis file in; simple permutations,
//! specifications, counts, generating functions, samples or a self-check
//! out.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use permspec_core::builder::{ambiguous_system, ClassInput};
use permspec_core::disambiguate::disambiguate_system;
use permspec_core::engine::{count_grammar, emit_gf_equations, prune_unproductive, Grammar, DEFAULT_MAX_SIZE};
use permspec_core::format::{parse_basis, parse_system, serialize_system};
use permspec_core::ir::{Equation, Mode, System};
use permspec_core::sampler::{SamplerState, DEFAULT_REJECTION_BUDGET};
use permspec_core::simples::{compute_simples, parse_perm_list, SimplesStatus, DEFAULT_SIMPLES_CAP};
use permspec_core::verify::check_class;
use permspec_core::{Error, Perm};

pub const SCHEMA: &str = "permspec/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_SAFETY_VALVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "permspec",
    version,
    about = "Specifications, counting and sampling for permutation classes"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search the simple permutations of the class.
    Simples(ClassArgs),
    /// Print the specification of the class.
    Spec {
        #[command(flatten)]
        class: ClassArgs,
        /// Print the system before disambiguation.
        #[arg(long)]
        ambiguous: bool,
    },
    /// Print the number of members of each size.
    Count {
        #[command(flatten)]
        source: SourceArgs,
        /// Largest size.
        #[arg(short = 'N', long = "max-size", env = "PERMSPEC_N", default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
    /// Print the generating function equations.
    Gf(SourceArgs),
    /// Draw uniform random members.
    Sample(SampleArgs),
    /// Cross-check the specification against brute force.
    Check {
        #[command(flatten)]
        class: ClassArgs,
        /// Largest size checked.
        #[arg(long, default_value_t = 7)]
        max_size: usize,
    },
}

#[derive(Debug, Args, Clone)]
pub struct ClassArgs {
    /// Basis file: one permutation per line, `#` comments.
    #[arg(short, long, value_name = "FILE")]
    pub basis: PathBuf,
    /// Simple permutations of the class; skips the search.
    #[arg(short, long, value_name = "FILE")]
    pub simples: Option<PathBuf>,
    /// Largest size explored by the search.
    #[arg(long, env = "PERMSPEC_CAP", default_value_t = DEFAULT_SIMPLES_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args, Clone)]
pub struct SourceArgs {
    #[command(flatten)]
    pub class: Option<ClassArgsOpt>,
    /// A specification file written by `spec`, instead of a basis.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["basis", "simples"])]
    pub spec: Option<PathBuf>,
}

/// Same as [`ClassArgs`], optional because a specification file may be
/// given instead.
#[derive(Debug, Args, Clone)]
pub struct ClassArgsOpt {
    #[arg(short, long, value_name = "FILE", required_unless_present = "spec")]
    pub basis: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub simples: Option<PathBuf>,
    #[arg(long, env = "PERMSPEC_CAP", default_value_t = DEFAULT_SIMPLES_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args, Clone)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Size of the samples.
    #[arg(short = 'n', long = "size")]
    pub size: Option<usize>,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use a Boltzmann sampler at this value of z.
    #[arg(long, value_name = "Z")]
    pub boltzmann: Option<f64>,
    /// Smallest accepted size for Boltzmann sampling.
    #[arg(long)]
    pub min: Option<usize>,
    /// Largest accepted size for Boltzmann sampling.
    #[arg(long)]
    pub max: Option<usize>,
}

/// What a run produced: the exit code, the main output, and warnings.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: Vec<String>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::SimplesTruncated { .. } => EXIT_TRUNCATED,
            Error::IterationBound(_) => EXIT_SAFETY_VALVE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

struct Ctx {
    json: bool,
    warnings: Vec<String>,
}

impl Ctx {
    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    fn load_basis(&mut self, path: &Path) -> Result<Vec<Perm>, Failure> {
        let (basis, changed) = parse_basis(&read(path)?)?;
        if changed {
            self.warn(format!("basis is not an antichain; using {}", list(&basis)));
        }
        Ok(basis)
    }

    /// The class with its simple permutations, from the file if given and
    /// from the search otherwise.
    fn class(&mut self, basis: &Path, simples: Option<&Path>, cap: usize) -> Result<ClassInput, Failure> {
        let basis = self.load_basis(basis)?;
        match simples {
            Some(path) => {
                self.warn("simple permutations read from file; the search is skipped");
                let simples = parse_perm_list(&read(path)?)?;
                Ok(ClassInput::new(basis, simples)?)
            }
            None => {
                let found = compute_simples(&basis, cap);
                Ok(ClassInput::from_search(basis, &found)?)
            }
        }
    }

    fn specification(&mut self, input: &ClassInput) -> Result<System, Failure> {
        let amb = ambiguous_system(input)?;
        Ok(prune_unproductive(&disambiguate_system(&amb)?))
    }

    fn source(&mut self, args: &SourceArgs) -> Result<System, Failure> {
        if let Some(path) = &args.spec {
            let sys = parse_system(&read(path)?)?;
            if sys.mode != Mode::Disjoint {
                return Err(Error::AmbiguousSystem.into());
            }
            return Ok(sys);
        }
        let class = args
            .class
            .as_ref()
            .ok_or_else(|| invalid("a basis or a specification is required"))?;
        let basis = class
            .basis
            .as_ref()
            .ok_or_else(|| invalid("a basis or a specification is required"))?;
        let input = self.class(basis, class.simples.as_deref(), class.cap)?;
        self.specification(&input)
    }
}

fn list(v: &[Perm]) -> String {
    v.iter().map(Perm::to_string).collect::<Vec<_>>().join(";")
}

fn strings(v: &[Perm]) -> Vec<String> {
    v.iter().map(Perm::to_string).collect()
}

fn envelope(command: &str, body: Value) -> String {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("plain values serialize");
    s.push('\n');
    s
}

fn equation_json(eq: &Equation) -> Value {
    json!({
        "lhs": eq.lhs.to_string(),
        "atom": eq.has_atom,
        "terms": eq.terms.iter().map(|t| json!({
            "root": t.root().to_string(),
            "args": t.args().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn system_json(sys: &System) -> Value {
    json!({
        "mode": sys.mode.to_string(),
        "basis": strings(&sys.basis),
        "simples": strings(&sys.simples),
        "root": sys.root.to_string(),
        "equations": sys.equations.values().map(equation_json).collect::<Vec<_>>(),
    })
}

fn run_simples(ctx: &mut Ctx, args: &ClassArgs) -> Result<(String, i32), Failure> {
    let basis = ctx.load_basis(&args.basis)?;
    let (simples, status, reached) = match &args.simples {
        Some(path) => {
            ctx.warn("simple permutations read from file; the search is skipped");
            let input = ClassInput::new(basis, parse_perm_list(&read(path)?)?)?;
            (input.simples().to_vec(), SimplesStatus::Complete, None)
        }
        None => {
            let r = compute_simples(&basis, args.cap);
            (r.simples, r.status, Some(r.reached))
        }
    };
    let (status_text, code) = match status {
        SimplesStatus::Complete => ("complete".to_string(), EXIT_OK),
        SimplesStatus::Truncated(cap) => {
            ctx.warn(format!(
                "simple permutations still appear at size {cap}; the list is truncated"
            ));
            (format!("truncated at {cap}"), EXIT_TRUNCATED)
        }
    };
    let out = if ctx.json {
        envelope(
            "simples",
            json!({
                "status": if code == EXIT_OK { "complete" } else { "truncated" },
                "cap": args.cap,
                "reached": reached,
                "simples": strings(&simples),
            }),
        )
    } else {
        let mut s = format!("status: {status_text}\n");
        if let Some(r) = reached {
            s += &format!("searched: {r}\n");
        }
        s += &format!("count: {}\n", simples.len());
        for p in &simples {
            s += &format!("{p}\n");
        }
        s
    };
    Ok((out, code))
}

fn run_command(ctx: &mut Ctx, cmd: &Command) -> Result<(String, i32), Failure> {
    match cmd {
        Command::Simples(args) => run_simples(ctx, args),
        Command::Spec { class, ambiguous } => {
            let input = ctx.class(&class.basis, class.simples.as_deref(), class.cap)?;
            let sys = if *ambiguous {
                ambiguous_system(&input)?
            } else {
                ctx.specification(&input)?
            };
            let out = if ctx.json {
                envelope("spec", system_json(&sys))
            } else {
                serialize_system(&sys)
            };
            Ok((out, EXIT_OK))
        }
        Command::Count { source, max_size } => {
            if *max_size == 0 {
                return Err(invalid("the largest size must be at least 1"));
            }
            let sys = ctx.source(source)?;
            let table = count_grammar(Grammar::compile(&sys)?, *max_size);
            let counts = table.root_counts();
            let out = if ctx.json {
                let rows: Vec<Value> = counts
                    .iter()
                    .enumerate()
                    .map(|(i, c)| json!({ "n": i + 1, "count": c.to_string() }))
                    .collect();
                envelope("count", json!({ "counts": rows }))
            } else {
                counts
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{}\t{c}\n", i + 1))
                    .collect()
            };
            Ok((out, EXIT_OK))
        }
        Command::Gf(source) => {
            let sys = ctx.source(source)?;
            let gf = emit_gf_equations(&sys)?;
            let out = if ctx.json {
                let g = gf.grammar();
                let eqs: Vec<Value> = (0..g.len())
                    .map(|i| json!({ "lhs": g.names[i].to_string(), "rhs": gf.rhs(i) }))
                    .collect();
                envelope("gf", json!({ "root": g.names[g.root].to_string(), "equations": eqs }))
            } else {
                gf.to_string()
            };
            Ok((out, EXIT_OK))
        }
        Command::Sample(args) => run_sample(ctx, args),
        Command::Check { class, max_size } => {
            let input = ctx.class(&class.basis, class.simples.as_deref(), class.cap)?;
            let reports = check_class(&input, *max_size)?;
            let passed = reports.iter().all(|r| r.passed());
            let out = if ctx.json {
                let rs: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "name": r.name, "passed": r.passed(), "checked": r.checked,
                            "violations": r.violations,
                        })
                    })
                    .collect();
                envelope(
                    "check",
                    json!({ "max_size": max_size, "passed": passed, "reports": rs }),
                )
            } else {
                let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
                s += if passed {
                    "all checks passed\n"
                } else {
                    "some checks failed\n"
                };
                s
            };
            Ok((out, if passed { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
    }
}

fn run_sample(ctx: &mut Ctx, args: &SampleArgs) -> Result<(String, i32), Failure> {
    let sys = ctx.source(&args.source)?;
    let grammar = Grammar::compile(&sys)?;
    let mut samples = Vec::with_capacity(args.count);
    let method = match args.boltzmann {
        None => {
            let n = args.size.ok_or_else(|| invalid("exact sampling needs --size"))?;
            if args.min.is_some() || args.max.is_some() {
                return Err(invalid("--min and --max only apply to Boltzmann sampling"));
            }
            let table = count_grammar(grammar, n.max(1));
            let mut state = SamplerState::new(&table, args.seed);
            for _ in 0..args.count {
                samples.push(state.sample_exact(n)?);
            }
            json!({ "method": "exact", "size": n })
        }
        Some(z) => {
            let lo = args
                .min
                .or(args.size)
                .ok_or_else(|| invalid("Boltzmann sampling needs --min or --size"))?;
            let hi = args
                .max
                .or(args.size)
                .ok_or_else(|| invalid("Boltzmann sampling needs --max or --size"))?;
            if lo == 0 || lo > hi {
                return Err(invalid(format!("empty size window {lo}..{hi}")));
            }
            let table = count_grammar(grammar, 1);
            let mut state = SamplerState::new(&table, args.seed);
            for _ in 0..args.count {
                samples.push(state.sample_boltzmann(z, lo..=hi, DEFAULT_REJECTION_BUDGET)?);
            }
            json!({ "method": "boltzmann", "z": z, "min": lo, "max": hi })
        }
    };
    let out = if ctx.json {
        let mut body = method;
        body["seed"] = json!(args.seed);
        body["samples"] = json!(strings(&samples));
        envelope("sample", body)
    } else {
        samples.iter().map(|p| format!("{p}\n")).collect()
    };
    Ok((out, EXIT_OK))
}

/// Runs one command. Errors become a message on the error stream and the
/// matching exit code.
pub fn run(cli: &Cli) -> RunOutput {
    let mut ctx = Ctx {
        json: cli.json,
        warnings: Vec::new(),
    };
    let result = run_command(&mut ctx, &cli.command);
    let mut stderr: Vec<String> = ctx.warnings.iter().map(|w| format!("warning: {w}")).collect();
    match result {
        Ok((stdout, code)) => RunOutput { code, stdout, stderr },
        Err(f) => {
            stderr.push(format!("error: {}", f.msg));
            RunOutput {
                code: f.code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}
