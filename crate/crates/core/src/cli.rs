//! The `rcdkit` command line. [`run`] takes the argument vector and output
//! streams and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | property holds, verdict positive, or campaign passed |
//! | 3 | property fails, verdict negative, or campaign failed |
//! | 1 | usage or input error |
//! | 2 | refused: instance too large, or float mode where exactness is required |

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::falsifier::{self, gen_kernel, gen_measure, gen_partition, stream_seed, Campaign, Structure};
use crate::instance::{parse_instance, serialize_instance, Instance, Mode};
use crate::partition::Partition;
use crate::props::{Checker, Property, PropertyVerdict};
use crate::rcd::{self, make_rcd, sigma_of_kernel_in};

#[derive(Debug, Parser)]
#[command(name = "rcdkit", version, about = "Exact analysis of probability kernels on finite state spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Instance document; `-` reads standard input.
    file: String,
    /// Machine-readable JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct PartitionChoice {
    /// Use sigma(R) even when the document carries a partition.
    #[arg(long)]
    sigma: bool,
    /// Blocks as JSON (`[[0],[1,2]]`) or compact (`0|1,2`).
    #[arg(long, value_name = "INDEX-SPEC")]
    partition: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full property profile against sigma(R) or a given partition.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        choice: PartitionChoice,
    },
    /// A single property.
    Check {
        /// One of S, R, SC, SR, P, T, trivial, ac.
        property: Property,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        choice: PartitionChoice,
        /// Check (S) and (R) only on events generated by the partition.
        #[arg(long)]
        restricted: bool,
    },
    /// Conditional distribution of nu given the document's partition.
    MakeRcd {
        #[command(flatten)]
        input: Input,
    },
    /// Decide whether R is a regular conditional distribution for nu.
    IsRcd {
        #[command(flatten)]
        input: Input,
        /// Also require R_x << nu for nu-a.e. x.
        #[arg(long)]
        gcp: bool,
    },
    /// pi = nu R, and the verdict for R against pi.
    Stationarize {
        #[command(flatten)]
        input: Input,
    },
    /// Every partition for which R is exactly an rcd, by exhaustive scan.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = rcd::MAX_ORACLE_N)]
        max_n: usize,
    },
    /// Run a randomized campaign against one law.
    Falsify {
        law: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Succeed only if a counterexample is found.
        #[arg(long)]
        expect_counterexample: bool,
        #[arg(long)]
        json: bool,
    },
    /// Emit a random instance document.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kernel shape for `--kind kernel`.
        #[arg(long, value_enum, default_value_t = GenStructure::Dense)]
        structure: GenStructure,
        /// Accepted for uniformity; documents are always JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Measure,
    Kernel,
    Partition,
    Rcd,
    NearRcd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenStructure {
    Dense,
    Block,
}

enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Positive
        } else {
            Outcome::Negative
        }
    }

    fn code(&self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 3,
        }
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::TooLarge { .. } | Error::FloatModeRefused => 2,
                _ => 1,
            }
        }
    }
}

fn read_input(file: &str) -> Result<Instance> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidArgument(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| Error::InvalidArgument(format!("{file}: {e}")))?
    };
    parse_instance(&text)
}

/// `[[0],[1,2]]` or `0|1,2`.
pub fn parse_partition_spec(spec: &str, n: usize) -> Result<Partition> {
    let spec = spec.trim();
    let lists: Vec<Vec<usize>> = if spec.starts_with('[') {
        serde_json::from_str(spec).map_err(|e| Error::InvalidArgument(format!("partition `{spec}`: {e}")))?
    } else {
        spec.split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|x| {
                        x.trim().parse().map_err(|_| Error::InvalidArgument(format!("partition `{spec}`: bad state `{x}`")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    Partition::from_index_lists(&lists, n)
}

fn choose_partition(inst: &Instance, choice: &PartitionChoice) -> Result<Option<Partition>> {
    if let Some(spec) = &choice.partition {
        return parse_partition_spec(spec, inst.n()).map(Some);
    }
    if choice.sigma {
        return Ok(None);
    }
    Ok(inst.partition.clone())
}

/// Report envelope: payload fields plus mode and, in float mode, epsilon.
fn envelope(mode: &Mode, payload: impl Serialize) -> Value {
    let mut map = Map::new();
    map.insert("mode".into(), json!(mode.name()));
    if let Some(e) = mode.epsilon_string() {
        map.insert("epsilon".into(), json!(e));
    }
    match serde_json::to_value(payload).expect("reports serialize") {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    writeln!(out, "{text}").map_err(|e| Error::InvalidArgument(format!("write: {e}")))
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::InvalidArgument(format!("write: {e}")))
}

fn blocks(p: &Partition) -> String {
    p.to_index_lists()
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn human_verdict(v: &PropertyVerdict) -> String {
    let status = if v.holds { "holds" } else { "fails" };
    match &v.witness {
        Some(w) => format!("{:<8}{status}  {}", v.property.code(), serde_json::to_string(w).expect("witness")),
        None => format!("{:<8}{status}", v.property.code()),
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Analyze { input, choice } => {
            let inst = read_input(&input.file)?;
            let r = inst.require_kernel()?;
            let g = choose_partition(&inst, &choice)?;
            let profile = Checker::for_mode(&inst.mode).profile(r, &inst.nu, g.as_ref(), &inst.mode)?;
            if input.json {
                emit(out, &envelope(&inst.mode, &profile))?;
            } else {
                line(out, format!("mode      {}", inst.mode.name()))?;
                if let Some(e) = inst.mode.epsilon_string() {
                    line(out, format!("epsilon   {e}"))?;
                }
                line(out, format!("sigma(R)  {}", blocks(&profile.sigma)))?;
                line(out, format!("partition {}", blocks(&profile.partition)))?;
                for v in profile.verdicts() {
                    line(out, human_verdict(v))?;
                }
            }
            Ok(Outcome::from_bool(profile.all_hold()))
        }
        Command::Check { property, input, choice, restricted } => {
            let inst = read_input(&input.file)?;
            let r = inst.require_kernel()?;
            let g = match choose_partition(&inst, &choice)? {
                Some(g) => g,
                None => sigma_of_kernel_in(r, &inst.mode)?,
            };
            let verdict = Checker::for_mode(&inst.mode).check(property, r, &inst.nu, &g, restricted)?;
            if input.json {
                let mut value = envelope(&inst.mode, &verdict);
                value["partition"] = json!(g.to_index_lists());
                value["restricted"] = json!(restricted);
                emit(out, &value)?;
            } else {
                line(out, human_verdict(&verdict))?;
            }
            Ok(Outcome::from_bool(verdict.holds))
        }
        Command::MakeRcd { input } => {
            let inst = read_input(&input.file)?;
            let g = inst.require_partition()?;
            let kernel = make_rcd(&inst.nu, g)?;
            let doc = Instance { kernel: Some(kernel), ..inst };
            line(out, serialize_instance(&doc))?;
            Ok(Outcome::Positive)
        }
        Command::IsRcd { input, gcp } => {
            let inst = read_input(&input.file)?;
            let verdict = rcd::decide(inst.require_kernel()?, &inst.nu, &inst.mode, gcp)?;
            let mut value = envelope(&inst.mode, &verdict);
            value["gcp"] = json!(gcp);
            emit(out, &value)?;
            Ok(Outcome::from_bool(verdict.is_rcd))
        }
        Command::Stationarize { input } => {
            let inst = read_input(&input.file)?;
            let r = inst.require_kernel()?;
            let pi = rcd::stationarize(r, &inst.nu)?;
            let verdict = rcd::decide(r, &pi, &inst.mode, false)?;
            let value = envelope(&inst.mode, json!({ "pi": pi.weights(), "verdict": verdict }));
            emit(out, &value)?;
            Ok(Outcome::from_bool(verdict.is_rcd))
        }
        Command::Oracle { input, max_n } => {
            let inst = read_input(&input.file)?;
            inst.require_rational()?;
            let max = max_n.min(rcd::MAX_ORACLE_N);
            if inst.n() > max {
                return Err(Error::TooLarge { n: inst.n(), max });
            }
            let result = rcd::oracle_is_rcd(inst.require_kernel()?, &inst.nu)?;
            emit(out, &envelope(&inst.mode, &result))?;
            Ok(Outcome::from_bool(!result.accepted.is_empty()))
        }
        Command::Falsify { law, trials, seed, n_min, n_max, expect_counterexample, json } => {
            let campaign = Campaign { trials, seed, n_min, n_max, mode: Mode::Rational };
            let report = campaign.run(&law)?;
            let found = !report.counterexamples.is_empty();
            if json {
                emit(out, &serde_json::to_value(&report).expect("reports serialize"))?;
            } else {
                line(out, format!("law        {}  {}", report.law, report.statement))?;
                line(out, format!("trials     {}  (n in [{}, {}])", report.trials, report.n_range[0], report.n_range[1]))?;
                line(out, format!("premise    {} hits ({:.1}%)", report.premise_hits, 100.0 * report.premise_rate))?;
                line(out, format!("violations {}", report.counterexamples.len()))?;
                line(out, format!("seed       {}  generator {}  mode {}", report.seed, report.generator_version, report.mode))?;
                if let Some(ce) = &report.shrunk {
                    line(out, format!("shrunk     n={}  {}", ce.n(), ce.witness))?;
                    line(out, format!("instance   {}", serialize_instance(&ce.instance)))?;
                }
            }
            Ok(Outcome::from_bool(found == expect_counterexample))
        }
        Command::Gen { kind, n, seed, structure, json: _ } => {
            if n == 0 {
                return Err(Error::InvalidArgument("--n must be at least 1".into()));
            }
            if n > falsifier::gen::MAX_UNIFORM_PARTITION_N {
                return Err(Error::TooLarge { n, max: falsifier::gen::MAX_UNIFORM_PARTITION_N });
            }
            let nu = gen_measure(n, stream_seed(seed, 0), true);
            let g = gen_partition(n, stream_seed(seed, 1));
            let kernel_seed = stream_seed(seed, 2);
            let inst = Instance::new(nu.clone());
            let inst = match kind {
                GenKind::Measure => inst,
                GenKind::Partition => inst.with_partition(g)?,
                GenKind::Kernel => match structure {
                    GenStructure::Dense => inst.with_kernel(gen_kernel(n, kernel_seed, &Structure::Dense)?)?,
                    GenStructure::Block => inst
                        .with_kernel(gen_kernel(n, kernel_seed, &Structure::Block(g.clone()))?)?
                        .with_partition(g)?,
                },
                GenKind::Rcd => {
                    let k = gen_kernel(n, kernel_seed, &Structure::Rcd(nu, g.clone()))?;
                    inst.with_kernel(k)?.with_partition(g)?
                }
                GenKind::NearRcd => {
                    let k = gen_kernel(n, kernel_seed, &Structure::NearRcd(nu, g.clone()))?;
                    inst.with_kernel(k)?.with_partition(g)?
                }
            };
            line(out, serialize_instance(&inst))?;
            let _ = writeln!(err, "seed {seed}  generator {}", falsifier::GENERATOR_VERSION);
            Ok(Outcome::Positive)
        }
    }
}
