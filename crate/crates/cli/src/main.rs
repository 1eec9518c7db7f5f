use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spectra_core::enumerate::{classify, classify_saturated, compare_with_fixture, FixtureTable, SearchBounds};
use spectra_core::lattice::ParamVector;
use spectra_core::mc::{middle_convolution, random_irreducible, verify_mc, HtlTuple, SampleBounds};
use spectra_core::rat::read_q;
use spectra_core::spectral::{parse_spectral_type, HtlSymbolData, QuiverData, SpectralType};
use spectra_core::weyl::{reduce_to_fundamental, sigma_membership, Mode};
use spectra_core::Error;

#[derive(Parser)]
#[command(name = "spectra", version, about = "Spectral types, quiver lattices and middle convolution")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form and a per-point summary.
    Parse { st: String },
    /// Quiver and dimension vector as JSON.
    Quiver { st: String },
    /// Index of rigidity.
    Rigidity { st: String },
    /// Shape of the Ξ-fiber over α as JSON.
    Shape { st: String },
    /// Membership of α in Σ_λ.
    CheckDs {
        #[arg(long)]
        st: String,
        /// JSON list of rationals, or an object with "lambda" and optional "alpha".
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long, value_enum, default_value = "dif")]
        mode: ModeArg,
    },
    /// Reflects (α, λ) down to the fundamental set.
    Reduce {
        #[arg(long)]
        st: String,
        #[arg(long)]
        lambda: PathBuf,
    },
    #[command(subcommand)]
    Mc(McCmd),
    /// Fundamental spectral types of a given index, grouped by shape.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        idx: i64,
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Fixture table to compare against; `bundled` picks the built-in one.
        #[arg(long)]
        fixture: Option<String>,
        /// Also search at the margin bounds and report shapes found only there.
        #[arg(long)]
        saturate: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Subcommand)]
enum McCmd {
    /// Middle convolution of a tuple.
    Apply(McArgs),
    /// Runs the convolution twice and checks it against the combinatorial predictions.
    Verify(McArgs),
    /// Draws a random irreducible tuple with its symbol and a usable choice.
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct McArgs {
    /// Tuple JSON; may carry the symbol under "symbol" and a default "choice".
    #[arg(long)]
    tuple: PathBuf,
    /// Symbol JSON (spectral type with eigenvalues), if not in the tuple file.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Block choice, one 1-based index per point, e.g. "1,2,1".
    #[arg(long)]
    choice: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dif,
    Plain,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(if e.is_input_error() { 2 } else { 1 }, e.to_string())
    }
}

type Out = Result<String, Fail>;

fn input(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn read_json(path: &Path) -> Result<Value, Fail> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: invalid JSON: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialise")
}

fn quiver_data(text: &str) -> Result<(SpectralType, QuiverData), Fail> {
    let st = parse_spectral_type(text)?.normalize();
    let qd = st.quiver_of()?;
    Ok((st, qd))
}

fn cmd_parse(text: &str) -> Out {
    let st = parse_spectral_type(text)?;
    let canon = st.canonical();
    let mut lines = vec![canon.to_notation()];
    lines.push(format!("rank {}, {} points", canon.rank(), canon.num_points()));
    for (i, p) in canon.points().iter().enumerate() {
        lines.push(format!(
            "point {i}: {} pole order {}, {} block(s), chains {:?}",
            p.to_notation(),
            p.pole_order(),
            p.num_blocks(),
            p.chains()
        ));
    }
    Ok(lines.join("\n"))
}

fn cmd_quiver(text: &str) -> Out {
    let (st, qd) = quiver_data(text)?;
    let tags: Vec<String> = qd.quiver.vertices().iter().map(|t| t.to_string()).collect();
    Ok(pretty(&json!({
        "spectral_type": st.to_notation_as_is(),
        "quiver": qd.quiver.to_json(),
        "labels": tags,
        "alpha": qd.alpha,
    })))
}

fn cmd_shape(text: &str) -> Out {
    let st = parse_spectral_type(text)?.normalize();
    Ok(pretty(&st.shape()?.to_json()))
}

/// Reads λ (and optionally α) from a parameter file.
fn read_lambda(path: &Path, qd: &QuiverData) -> Result<(ParamVector, Vec<i64>), Fail> {
    let v = read_json(path)?;
    let (list, alpha) = match &v {
        Value::Array(_) => (&v, None),
        Value::Object(m) => {
            (m.get("lambda").ok_or_else(|| input("parameter file: missing \"lambda\""))?, m.get("alpha"))
        }
        _ => return Err(input("parameter file: expected a list or an object")),
    };
    let lambda: ParamVector = list
        .as_array()
        .ok_or_else(|| input("parameter file: \"lambda\" must be a list"))?
        .iter()
        .map(read_q)
        .collect::<Result<_, _>>()?;
    let alpha = match alpha {
        None => qd.alpha.clone(),
        Some(a) => a
            .as_array()
            .and_then(|xs| xs.iter().map(|x| x.as_i64()).collect::<Option<Vec<_>>>())
            .ok_or_else(|| input("parameter file: \"alpha\" must be a list of integers"))?,
    };
    let n = qd.quiver.len();
    if lambda.len() != n || alpha.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: if lambda.len() != n { lambda.len() } else { alpha.len() },
        }
        .into());
    }
    Ok((lambda, alpha))
}

fn cmd_check_ds(text: &str, lambda: &Path, mode: ModeArg) -> Out {
    let (_, qd) = quiver_data(text)?;
    let (l, a) = read_lambda(lambda, &qd)?;
    let mode = match mode {
        ModeArg::Dif => Mode::Dif,
        ModeArg::Plain => Mode::Plain,
    };
    Ok(pretty(&sigma_membership(&qd, &l, &a, mode)?.to_json()))
}

fn cmd_reduce(text: &str, lambda: &Path) -> Out {
    let (_, qd) = quiver_data(text)?;
    let (l, a) = read_lambda(lambda, &qd)?;
    Ok(pretty(&reduce_to_fundamental(&qd, &l, &a)?.to_json(&qd)))
}

fn parse_choice(s: &str) -> Result<Vec<usize>, Fail> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| input(format!("choice: {x:?} is not a block index"))))
        .collect()
}

fn mc_inputs(args: &McArgs) -> Result<(HtlTuple, HtlSymbolData, Vec<usize>), Fail> {
    let tv = read_json(&args.tuple)?;
    let tuple_v = if tv.get("tuple").is_some() { &tv["tuple"] } else { &tv };
    let tuple = HtlTuple::from_json(tuple_v)?;
    let symbol = match (&args.symbol, tv.get("symbol")) {
        (Some(p), _) => HtlSymbolData::from_json(&read_json(p)?)?,
        (None, Some(s)) => HtlSymbolData::from_json(s)?,
        (None, None) => return Err(input("no symbol: pass --symbol or put \"symbol\" in the tuple file")),
    };
    let choice = match (&args.choice, tv.get("choice")) {
        (Some(c), _) => parse_choice(c)?,
        (None, Some(Value::Array(xs))) => xs
            .iter()
            .map(|x| x.as_u64().map(|j| j as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| input("\"choice\" must be a list of block indices"))?,
        _ => return Err(input("no block choice: pass --choice")),
    };
    Ok((tuple, symbol, choice))
}

fn seed_from_env() -> Result<u64, Fail> {
    match std::env::var("SPECTRA_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| input(format!("SPECTRA_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn cmd_mc(cmd: &McCmd) -> Out {
    match cmd {
        McCmd::Apply(args) => {
            let (a, h, choice) = mc_inputs(args)?;
            Ok(pretty(&middle_convolution(&a, &choice, &h)?.to_json()))
        }
        McCmd::Verify(args) => {
            let (a, h, choice) = mc_inputs(args)?;
            Ok(pretty(&verify_mc(&a, &h, &choice, seed_from_env()?)?.to_json()))
        }
        McCmd::Sample { seed } => {
            let s = random_irreducible(*seed, &SampleBounds::default())?;
            Ok(pretty(&json!({ "tuple": s.tuple.to_json(), "symbol": s.symbol.to_json(), "choice": s.choice })))
        }
    }
}

fn cmd_enumerate(
    idx: i64,
    bounds: Option<&Path>,
    fixture: Option<&str>,
    saturate: bool,
    out: &str,
) -> Result<(String, u8), Fail> {
    let b = match bounds {
        Some(p) => SearchBounds::from_json(&read_json(p)?)?,
        None => SearchBounds::default(),
    };
    let table = match fixture {
        None => None,
        Some("bundled") => {
            Some(FixtureTable::bundled(idx).ok_or_else(|| input(format!("no bundled fixture for index {idx}")))?)
        }
        Some(p) => Some(FixtureTable::from_json(&read_json(Path::new(p))?)?),
    };
    let c = if saturate { classify_saturated(idx, &b)? } else { classify(idx, &b)? };
    let mut v = c.to_json();
    let mut code = 0;
    let mut notes = Vec::new();
    if let Some(t) = &table {
        let diff = compare_with_fixture(&c, t)?;
        if !diff.is_empty() {
            code = 1;
            notes.extend(diff.lines());
        }
        v["fixture"] = diff.to_json();
    }
    if c.saturation_extra.as_ref().is_some_and(|x| !x.is_empty()) {
        code = 1;
        notes.push("saturation check found shapes beyond the bounds".to_string());
    }
    let text = pretty(&v);
    if out == "-" {
        emit(&text);
    } else {
        fs::write(out, format!("{text}\n")).map_err(|e| input(format!("{out}: {e}")))?;
    }
    Ok((notes.join("\n"), code))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn run(cli: Cli) -> Result<(String, u8), Fail> {
    let ok = |s: String| (s, 0);
    match &cli.cmd {
        Cmd::Parse { st } => cmd_parse(st).map(ok),
        Cmd::Quiver { st } => cmd_quiver(st).map(ok),
        Cmd::Rigidity { st } => Ok(ok(parse_spectral_type(st)?.rigidity_index()?.to_string())),
        Cmd::Shape { st } => cmd_shape(st).map(ok),
        Cmd::CheckDs { st, lambda, mode } => cmd_check_ds(st, lambda, *mode).map(ok),
        Cmd::Reduce { st, lambda } => cmd_reduce(st, lambda).map(ok),
        Cmd::Mc(m) => cmd_mc(m).map(ok),
        Cmd::Enumerate { idx, bounds, fixture, saturate, out } => {
            let (notes, code) = cmd_enumerate(*idx, bounds.as_deref(), fixture.as_deref(), *saturate, out)?;
            if !notes.is_empty() {
                eprintln!("{notes}");
            }
            Ok((String::new(), code))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, code)) => {
            if !text.is_empty() {
                emit(&text);
            }
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
