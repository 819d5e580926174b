use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use qp_forms::embed::{
    self, decide, hensel_constants, isotropic_witness, max_isotropic_dim, min_dimension,
    DecisionRecord, EmbedError, Family, TargetSpace, Witness, WitnessOptions,
    DEFAULT_WITNESS_PRECISION, DEFAULT_WITNESS_SEED,
};
use qp_forms::forms::{parse_form, DiagonalForm, FormError, GramForm};
use qp_forms::padic::{PadicError, PrimeContext, DEFAULT_PRECISION};

const USAGE: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qpforms",
    version,
    about = "Quadratic forms over Q_p: classification and embeddings into Euclidean and Lorentzian spaces",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    /// Run one request per line of FILE (blank lines and `#` comments skipped).
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Square class of every diagonal entry.
    Classify(Common),
    /// Dimension, rank, discriminant and Hasse invariant.
    Invariants(Common),
    /// Whether two forms are isometric (two --form, or --form and --gram).
    Equivalent(Common),
    /// Decide whether the form embeds in the target.
    Embed(Common),
    /// Smallest target dimension admitting an embedding.
    MinDim(Common),
    /// Decide and, when possible, construct a verified basis.
    Witness(Common),
    /// Largest totally isotropic subspace of the target.
    IsotropicMax(Common),
    /// Dump the sum-of-squares constants used by the explicit bases.
    Constants(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Odd prime p.
    #[arg(long, short = 'p')]
    prime: u64,

    /// Form in the diagonal DSL, e.g. `diag(1,l,p,lp,0^2)`. Repeat for `equivalent`.
    #[arg(long, short = 'f')]
    form: Vec<String>,

    /// JSON Gram matrix `{"n":..,"m":[[..]]}`.
    #[arg(long, value_name = "PATH")]
    gram: Option<PathBuf>,

    /// `euclid:N`, `lorentz:N`, or a bare family for min-dim.
    #[arg(long, short = 't')]
    target: Option<String>,

    /// Digits of precision (witness verification modulus, or constants).
    #[arg(long)]
    precision: Option<u32>,

    /// Seed for the witness search.
    #[arg(long)]
    seed: Option<u64>,

    /// Attach a witness basis to embed / isotropic-max output.
    #[arg(long)]
    witness: bool,

    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Output {
    Json,
    Text,
}

/// A failed request: exit status plus message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        let code = match e {
            EmbedError::InvalidTarget => USAGE,
            _ => INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn form_failure(src: &str, e: FormError) -> Failure {
    match &e {
        FormError::Parse { pos, .. } => Failure::usage(format!("{e}\n  {src}\n  {}^", " ".repeat(*pos))),
        _ => Failure::usage(e.to_string()),
    }
}

struct Reply {
    json: serde_json::Value,
    text: String,
}

fn context(c: &Common) -> Result<PrimeContext, Failure> {
    let prec = match std::env::var("PADIC_DEFAULT_PRECISION") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map_err(|_| Failure::usage(format!("PADIC_DEFAULT_PRECISION must be an integer, got `{v}`")))?,
        Err(_) => DEFAULT_PRECISION,
    };
    PrimeContext::with_precision(c.prime, prec).map_err(|e| match e {
        PadicError::InvalidPrime(p) => Failure::usage(format!("--prime {p} is not an odd prime")),
        e => Failure::usage(e.to_string()),
    })
}

/// All forms named by `--form` and `--gram`, in that order.
fn forms(c: &Common, ctx: &PrimeContext) -> Result<Vec<DiagonalForm>, Failure> {
    let mut out = Vec::new();
    for src in &c.form {
        out.push(parse_form(src, ctx).map_err(|e| form_failure(src, e))?);
    }
    if let Some(path) = &c.gram {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let g = GramForm::from_json(ctx, &text).map_err(|e| Failure::usage(e.to_string()))?;
        out.push(g.diagonalize());
    }
    Ok(out)
}

fn one_form(c: &Common, ctx: &PrimeContext) -> Result<DiagonalForm, Failure> {
    let mut fs = forms(c, ctx)?;
    if fs.len() != 1 {
        return Err(Failure::usage("expected exactly one of --form or --gram"));
    }
    Ok(fs.remove(0))
}

fn target(c: &Common) -> Result<TargetSpace, Failure> {
    let t = c
        .target
        .as_deref()
        .ok_or_else(|| Failure::usage("--target is required"))?;
    t.parse().map_err(Failure::usage)
}

fn family(c: &Common) -> Result<Family, Failure> {
    let t = c
        .target
        .as_deref()
        .ok_or_else(|| Failure::usage("--target is required"))?;
    let fam = t.split_once(':').map_or(t, |(f, _)| f);
    fam.parse().map_err(Failure::usage)
}

fn witness_options(c: &Common) -> WitnessOptions {
    WitnessOptions {
        precision: c.precision.unwrap_or(DEFAULT_WITNESS_PRECISION),
        seed: c.seed.unwrap_or(DEFAULT_WITNESS_SEED),
        ..WitnessOptions::default()
    }
}

fn text_rows(w: &Witness) -> String {
    w.to_strings()
        .iter()
        .map(|r| format!("  [{}]", r.join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn decision_reply(
    f: &DiagonalForm,
    t: TargetSpace,
    want_witness: bool,
    opts: WitnessOptions,
    min_n: Option<usize>,
) -> Result<Reply, Failure> {
    let d = decide(f, t);
    let w = if want_witness && d.embeds {
        Some(embed::witness_with(f, t, opts)?)
    } else {
        None
    };
    let record = DecisionRecord::new(&d, min_n, w.as_ref(), opts.precision);
    let mut text = format!(
        "{f} {} {t}: {}",
        if d.embeds { "embeds in" } else { "does not embed in" },
        d.reason
    );
    if let Some(n) = min_n {
        text.push_str(&format!("\nminimal n: {n}"));
    }
    if let Some(w) = &w {
        text.push_str(&format!("\nwitness (mod p^{}):\n{}", w.precision, text_rows(w)));
    }
    Ok(Reply {
        json: to_json(&record),
        text,
    })
}

fn run(cmd: &Command) -> Result<Reply, Failure> {
    match cmd {
        Command::Classify(c) => {
            let ctx = context(c)?;
            let f = one_form(c, &ctx)?;
            let classes: Vec<&str> = f.classes().iter().map(|c| c.as_str()).collect();
            let mut text = classes.join(" ");
            if f.zero_count() > 0 {
                text.push_str(&format!("{}0^{}", if text.is_empty() { "" } else { " " }, f.zero_count()));
            }
            Ok(Reply {
                json: json!({
                    "prime": ctx.p(),
                    "form": f.to_dsl(),
                    "classes": classes,
                    "zero_count": f.zero_count(),
                }),
                text,
            })
        }
        Command::Invariants(c) => {
            let ctx = context(c)?;
            let f = one_form(c, &ctx)?;
            let inv = f.invariants();
            let mut json = to_json(&inv);
            json["form"] = json!(f.to_dsl());
            json["zero_count"] = json!(f.zero_count());
            Ok(Reply {
                json,
                text: format!(
                    "dim {} rank {} disc {} hasse {}",
                    inv.dim, inv.rank, inv.disc, inv.hasse
                ),
            })
        }
        Command::Equivalent(c) => {
            let ctx = context(c)?;
            let fs = forms(c, &ctx)?;
            if fs.len() != 2 {
                return Err(Failure::usage("equivalent needs exactly two forms"));
            }
            let eq = fs[0].equivalent(&fs[1]);
            Ok(Reply {
                json: json!({
                    "equivalent": eq,
                    "forms": [fs[0].to_dsl(), fs[1].to_dsl()],
                }),
                text: eq.to_string(),
            })
        }
        Command::Embed(c) => {
            let ctx = context(c)?;
            let f = one_form(c, &ctx)?;
            let t = target(c)?;
            let min_n = min_dimension(&f, t.family);
            decision_reply(&f, t, c.witness, witness_options(c), Some(min_n))
        }
        Command::Witness(c) => {
            let ctx = context(c)?;
            let f = one_form(c, &ctx)?;
            let t = target(c)?;
            decision_reply(&f, t, true, witness_options(c), None)
        }
        Command::MinDim(c) => {
            let ctx = context(c)?;
            let f = one_form(c, &ctx)?;
            let fam = family(c)?;
            let n = min_dimension(&f, fam);
            let t = TargetSpace::new(fam, n)?;
            let mut r = decision_reply(&f, t, c.witness, witness_options(c), Some(n))?;
            r.text = n.to_string();
            Ok(r)
        }
        Command::IsotropicMax(c) => {
            let ctx = context(c)?;
            let t = target(c)?;
            let k = max_isotropic_dim(t, &ctx);
            let mut json = json!({ "target": t.to_string(), "max_isotropic_dim": k });
            let mut text = k.to_string();
            if c.witness {
                let prec = c.precision.unwrap_or(DEFAULT_WITNESS_PRECISION);
                let w = isotropic_witness(&ctx, t, k, prec)?;
                json["witness"] = json!(w.to_strings());
                json["precision"] = json!(prec);
                text.push_str(&format!("\nwitness (mod p^{prec}):\n{}", text_rows(&w)));
            }
            Ok(Reply { json, text })
        }
        Command::Constants(c) => {
            let ctx = context(c)?;
            let prec = c.precision.unwrap_or(ctx.default_precision());
            let k = hensel_constants(&ctx, prec);
            let failures = k.failures(prec);
            if !failures.is_empty() {
                return Err(Failure {
                    code: INTERNAL,
                    message: format!("identities failed: {}", failures.join(", ")),
                });
            }
            let named = k.to_named();
            let text = named
                .iter()
                .map(|n| format!("{} = {}", n.name, n.digits))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Reply {
                json: json!({ "prime": ctx.p(), "precision": prec, "constants": named }),
                text,
            })
        }
    }
}

fn output_format(cmd: &Command) -> Output {
    match cmd {
        Command::Classify(c)
        | Command::Invariants(c)
        | Command::Equivalent(c)
        | Command::Embed(c)
        | Command::MinDim(c)
        | Command::Witness(c)
        | Command::IsotropicMax(c)
        | Command::Constants(c) => c.output,
    }
}

/// Runs one command; returns the exit status, stdout and stderr text.
fn execute(cmd: &Command) -> (u8, String, String) {
    match run(cmd) {
        Ok(r) => {
            let out = match output_format(cmd) {
                Output::Json => r.json.to_string(),
                Output::Text => r.text,
            };
            (0, out, String::new())
        }
        Err(f) => (f.code, String::new(), format!("error: {}", f.message)),
    }
}

fn run_batch(path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return USAGE;
        }
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let results: Vec<(u8, String, String)> = lines
        .par_iter()
        .map(|(i, line)| {
            let Some(mut words) = shlex::split(line) else {
                return (USAGE, String::new(), format!("error: line {}: unbalanced quotes", i + 1));
            };
            words.insert(0, "qpforms".into());
            match Cli::try_parse_from(words) {
                Ok(Cli {
                    command: Some(cmd), ..
                }) => {
                    let (code, out, err) = execute(&cmd);
                    let err = if err.is_empty() { err } else { format!("line {}: {err}", i + 1) };
                    (code, out, err)
                }
                Ok(_) => (USAGE, String::new(), format!("error: line {}: missing command", i + 1)),
                Err(e) => (USAGE, String::new(), format!("line {}: {}", i + 1, e.render())),
            }
        })
        .collect();
    let mut status = 0;
    for (code, out, err) in results {
        if !out.is_empty() {
            println!("{out}");
        }
        if !err.is_empty() {
            eprintln!("{}", err.trim_end());
        }
        status = status.max(code);
    }
    status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match (&cli.batch, &cli.command) {
        (Some(path), _) => run_batch(path),
        (None, Some(cmd)) => {
            let (code, out, err) = execute(cmd);
            if !out.is_empty() {
                println!("{out}");
            }
            if !err.is_empty() {
                eprintln!("{err}");
            }
            code
        }
        (None, None) => {
            eprintln!("error: a command or --batch is required (see --help)");
            USAGE
        }
    };
    ExitCode::from(status)
}
