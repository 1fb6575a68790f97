//! `freeze`: command-line front end over `freeze-core`.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use freeze_core::ara::{ltl_to_ara, parse_automaton, run_exists, AlternatingAutomaton};
use freeze_core::data::all_words;
use freeze_core::ipcant::{parse_machine, CounterSystem};
use freeze_core::ltl::{parse_ltl_file, LtlFile};
use freeze_core::pipeline::{
    ara_to_ipcant, bounded_nonemptiness, encode_tm_run, inclusion_check, oracle_run_exists, parse_tm, refine,
    tm_to_formula, InclusionVerdict, SaturationResult, Verdict, ORACLE_MAX_LENGTH,
};
use freeze_core::{DataWord, Error, ParseError};

const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

/// Largest `m`, in bits, that `bound` prints in full.
const BOUND_MAX_BITS: u64 = 1 << 20;

#[derive(Parser)]
#[command(name = "freeze", version, about = "Safety LTL with freeze, register automata and counter machines")]
struct Cli {
    /// Output style; `json` prints one record per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Bounds {
    /// Step bound for the nonemptiness search.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Largest counter value explored.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    vcap: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and print it in canonical form (.ltl, .ara, .cm or .tm).
    Parse { file: PathBuf },
    /// Translate a formula file into an automaton.
    Ltl2ara {
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile an automaton (.ara or .ltl) into an explicit counter machine.
    Ara2cm {
        automaton: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a finite data word has a run: YES or NO.
    Run {
        /// Automaton file (.ara), or a formula file (.ltl) to translate.
        #[arg(long)]
        automaton: PathBuf,
        /// Word such as "a@0 c@1 b@0".
        #[arg(long)]
        word: String,
    },
    /// Bounded nonemptiness: NONEMPTY, EMPTY or UNKNOWN.
    Sat {
        /// Counter machine file (.cm).
        #[arg(long, conflicts_with = "automaton", required_unless_present = "automaton")]
        machine: Option<PathBuf>,
        /// Automaton or formula file, compiled first.
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Language inclusion of automata: INCLUDED, NOT_INCLUDED or UNKNOWN.
    Include {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Validity of `lhs → rhs` for two formula files.
    Refine {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the bound parameters of a counter machine.
    Bound {
        #[arg(long)]
        machine: PathBuf,
    },
    /// Generate the formula of a Turing machine, optionally with an encoded run.
    Tmgen {
        #[arg(long)]
        machine: PathBuf,
        /// Also print the encoding of this many steps, as a trailing comment.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare run search against the all-models oracle.
    Oracle {
        #[arg(long)]
        automaton: PathBuf,
        /// A single word; without it every word up to `--max-length` is checked.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
    },
}

/// Why a command could not produce a verdict.
enum Failure {
    Usage(String),
    Parse(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge(_) => Failure::Usage(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn parse_error(path: &Path, e: ParseError) -> Failure {
    Failure::Parse(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn is_ltl(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "ltl")
}

fn load_ltl(path: &Path) -> Result<LtlFile, Failure> {
    parse_ltl_file(&read(path)?).map_err(|e| parse_error(path, e))
}

/// Reads an automaton, translating `.ltl` files.
fn load_automaton(path: &Path) -> Result<AlternatingAutomaton, Failure> {
    if is_ltl(path) {
        let f = load_ltl(path)?;
        Ok(ltl_to_ara(&f.formula, &f.alphabet)?)
    } else {
        parse_automaton(&read(path)?).map_err(|e| parse_error(path, e))
    }
}

struct Printer {
    format: Format,
    command: &'static str,
}

impl Printer {
    /// Prints a verdict line; `fields` only appear in JSON records.
    fn verdict(&self, verdict: impl Display, fields: Map<String, Value>) {
        match self.format {
            Format::Text => println!("{verdict}"),
            Format::Json => {
                let mut record = Map::new();
                record.insert("command".into(), json!(self.command));
                record.insert("verdict".into(), json!(verdict.to_string()));
                record.extend(fields);
                println!("{}", Value::Object(record));
            }
        }
    }

    /// Writes an artifact to `output`, or prints it.
    fn artifact(&self, text: &str, output: Option<&Path>) -> Outcome {
        if let Some(path) = output {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        match (self.format, output) {
            (Format::Text, None) => print!("{text}"),
            (Format::Text, Some(_)) => {}
            (Format::Json, out) => {
                let mut record = json!({ "command": self.command, "artifact": text });
                if let Some(path) = out {
                    record["output"] = json!(path.display().to_string());
                }
                println!("{record}");
            }
        }
        Ok(0)
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Nonempty => 0,
        Verdict::Empty => 1,
        Verdict::Unknown => 2,
    }
}

fn inclusion_code(v: InclusionVerdict) -> u8 {
    match v {
        InclusionVerdict::Included => 0,
        InclusionVerdict::NotIncluded => 1,
        InclusionVerdict::Unknown => 2,
    }
}

fn saturation(p: &Printer, r: &SaturationResult) -> Outcome {
    let mut fields = Map::new();
    fields.insert("iterations".into(), json!(r.iterations));
    fields.insert("minimal_configurations".into(), json!(r.last.len()));
    p.verdict(r.verdict, fields);
    Ok(inclusion_code(r.verdict))
}

fn nonemptiness<S: CounterSystem>(p: &Printer, sys: &S, bounds: &Bounds) -> Outcome {
    let cap = usize::try_from(bounds.cap).unwrap_or(usize::MAX);
    let v = bounded_nonemptiness(sys, cap, bounds.vcap);
    let mut fields = Map::new();
    fields.insert("cap".into(), json!(bounds.cap));
    fields.insert("vcap".into(), json!(bounds.vcap));
    fields.insert("bound_log2".into(), json!(sys.bound_log2()));
    p.verdict(v, fields);
    if p.format == Format::Text {
        let log = sys.bound_log2();
        let exponent = if log < 1e6 { format!("{log:.1}") } else { format!("{log:.3e}") };
        println!("explored with cap {} and vcap {}; the run-length bound m is about 2^{exponent}", bounds.cap, bounds.vcap);
    }
    Ok(verdict_code(v))
}

fn execute(format: Format, command: Command) -> Outcome {
    let name = match &command {
        Command::Parse { .. } => "parse",
        Command::Ltl2ara { .. } => "ltl2ara",
        Command::Ara2cm { .. } => "ara2cm",
        Command::Run { .. } => "run",
        Command::Sat { .. } => "sat",
        Command::Include { .. } => "include",
        Command::Refine { .. } => "refine",
        Command::Bound { .. } => "bound",
        Command::Tmgen { .. } => "tmgen",
        Command::Oracle { .. } => "oracle",
    };
    let p = Printer { format, command: name };
    match command {
        Command::Parse { file } => {
            let text = read(&file)?;
            let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("ltl");
            let canonical = match ext {
                "ara" => parse_automaton(&text).map(|a| a.to_string()),
                "cm" => parse_machine(&text).map(|m| m.to_string()),
                "tm" => parse_tm(&text).map(|m| m.to_string()),
                _ => parse_ltl_file(&text).map(|f| f.to_string()),
            }
            .map_err(|e| parse_error(&file, e))?;
            p.artifact(&canonical, None)
        }
        Command::Ltl2ara { formula, output } => {
            let f = load_ltl(&formula)?;
            let a = ltl_to_ara(&f.formula, &f.alphabet)?;
            p.artifact(&a.to_string(), output.as_deref())
        }
        Command::Ara2cm { automaton, output } => {
            let a = load_automaton(&automaton)?;
            let m = ara_to_ipcant(&a)?.materialize()?;
            p.artifact(&m.to_string(), output.as_deref())
        }
        Command::Run { automaton, word } => {
            let a = load_automaton(&automaton)?;
            let w = DataWord::parse(&word, a.alphabet()).map_err(|e| Failure::Parse(format!("word: {e}")))?;
            let yes = run_exists(&a, &w)?;
            p.verdict(if yes { "YES" } else { "NO" }, Map::new());
            Ok(if yes { 0 } else { 1 })
        }
        Command::Sat { machine, automaton, bounds } => match (machine, automaton) {
            (Some(path), _) => {
                let m = parse_machine(&read(&path)?).map_err(|e| parse_error(&path, e))?;
                nonemptiness(&p, &m, &bounds)
            }
            (None, Some(path)) => {
                let m = ara_to_ipcant(&load_automaton(&path)?)?;
                nonemptiness(&p, &m, &bounds)
            }
            (None, None) => Err(Failure::Usage("sat needs --machine or --automaton".into())),
        },
        Command::Include { lhs, rhs, bounds } => {
            let (a1, a2) = (load_automaton(&lhs)?, load_automaton(&rhs)?);
            let cap = usize::try_from(bounds.cap).unwrap_or(usize::MAX);
            saturation(&p, &inclusion_check(&a1, &a2, cap, bounds.vcap)?)
        }
        Command::Refine { lhs, rhs, bounds } => {
            let (f1, f2) = (load_ltl(&lhs)?, load_ltl(&rhs)?);
            if f1.alphabet != f2.alphabet {
                return Err(Error::AlphabetMismatch.into());
            }
            let cap = usize::try_from(bounds.cap).unwrap_or(usize::MAX);
            saturation(&p, &refine(&f1.formula, &f2.formula, &f1.alphabet, cap, bounds.vcap)?)
        }
        Command::Bound { machine } => {
            let m = parse_machine(&read(&machine)?).map_err(|e| parse_error(&machine, e))?;
            if m.bound_log2() > BOUND_MAX_BITS as f64 {
                return Err(Failure::Usage(format!(
                    "m has about 2^{:.0} bits; at most {BOUND_MAX_BITS} are printed",
                    m.bound_log2().log2()
                )));
            }
            let b = m.bound();
            match format {
                Format::Text => {
                    for (i, (a, u)) in b.alpha.iter().zip(&b.u).enumerate() {
                        println!("alpha_{i} = {a}");
                        println!("U_{i} = {u}");
                    }
                    println!("m = {}", b.m);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "command": "bound",
                            "alpha": b.alpha.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "u": b.u.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "m": b.m.to_string(),
                        })
                    );
                }
            }
            Ok(0)
        }
        Command::Tmgen { machine, steps, output } => {
            let m = parse_tm(&read(&machine)?).map_err(|e| parse_error(&machine, e))?;
            let alphabet = m.formula_alphabet();
            let mut text = LtlFile {
                alphabet: alphabet.clone(),
                formula: tm_to_formula(&m),
            }
            .to_string();
            if let Some(k) = steps {
                let w = encode_tm_run(&m, k)?;
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                text.push_str(&format!("# run: {}\n", w.display(&alphabet)));
            }
            p.artifact(&text, output.as_deref())
        }
        Command::Oracle { automaton, word, max_length } => {
            let a = load_automaton(&automaton)?;
            let words = match word {
                Some(text) => {
                    vec![DataWord::parse(&text, a.alphabet()).map_err(|e| Failure::Parse(format!("word: {e}")))?]
                }
                None => {
                    if max_length == 0 || max_length > ORACLE_MAX_LENGTH {
                        return Err(Failure::Usage(format!(
                            "--max-length must be between 1 and {ORACLE_MAX_LENGTH}"
                        )));
                    }
                    (1..=max_length).flat_map(|len| all_words(a.alphabet(), len, len)).collect()
                }
            };
            for w in &words {
                let (x, y) = (run_exists(&a, w)?, oracle_run_exists(&a, w)?);
                if x != y {
                    let mut fields = Map::new();
                    fields.insert("word".into(), json!(w.display(a.alphabet())));
                    fields.insert("run_exists".into(), json!(x));
                    fields.insert("oracle".into(), json!(y));
                    match format {
                        Format::Text => println!(
                            "DISAGREE {}: run search {x}, oracle {y}",
                            w.display(a.alphabet())
                        ),
                        Format::Json => p.verdict("DISAGREE", fields),
                    }
                    return Ok(1);
                }
            }
            let mut fields = Map::new();
            fields.insert("words".into(), json!(words.len()));
            match format {
                Format::Text => println!("AGREE on {} words", words.len()),
                Format::Json => p.verdict("AGREE", fields),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.format, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("freeze: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
