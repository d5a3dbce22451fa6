//! `clover`: Milnor numbers, SL-moves, lattices and 4-clover classification
//! from tangle files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clover_core::classify::{classify_4clover, Reason, Verdict};
use clover_core::hset::{hset_generators, symbolic_rows};
use clover_core::io::{int_to_json, lattice_to_json, parse_tangle, series_to_json};
use clover_core::milnor::{FramingCheck, LongitudeExpansion, SequenceKey, TanglePresentation};
use clover_core::slmove::{linking_of, transform, CongruenceReport, SlMoveInput};
use clover_core::verify::Property;
use clover_core::Error;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "clover", version, about = "Milnor invariants of bottom tangles and 4-clover links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Tangle file; repeat for commands that take two.
    #[arg(short = 'i', long = "input", global = true)]
    input: Vec<PathBuf>,
    /// Index sequence, digits when n <= 9 (`1234`) or comma-separated; repeatable.
    #[arg(long = "seq", global = true)]
    seq: Vec<String>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    j: Option<usize>,
    /// Truncation degree of the Magnus expansion.
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print supporting detail: differing values, certificates, symbolic rows.
    #[arg(long, global = true)]
    explain: bool,
    /// Validation applied to longitudes read from files.
    #[arg(long, global = true, value_enum, default_value_t = FramingMode::Framing)]
    framing: FramingMode,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FramingMode {
    Framing,
    Strict,
    Off,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Milnor numbers mu(I).
    Mu,
    /// Residue of mu(I) modulo Delta(I).
    Mubar,
    /// delta^k(I) with --k, otherwise Delta(I).
    Delta,
    /// Apply the string link in the second file to the tangle in the first.
    Slmove,
    /// The affine lattice H(2k+2, j).
    Hset,
    /// Edge-homotopy verdict for two 4-component presentations.
    Classify,
    /// Seeded randomized property suites.
    Verify {
        /// Property to run; repeatable. Runs every suite when absent.
        #[arg(long = "prop")]
        prop: Vec<String>,
        /// Cases per suite; defaults to each suite's own count.
        #[arg(long)]
        cases: Option<usize>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Input(String),
    Inequivalent,
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<Output, Failure>;

/// Rendered output plus the exit status it implies.
struct Output {
    text: String,
    machine: Value,
    status: Option<Failure>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.common.format {
                Format::Text => print!("{}", out.text),
                Format::Machine => println!("{}", serde_json::to_string_pretty(&out.machine).expect("json value")),
            }
            match out.status {
                None => ExitCode::SUCCESS,
                Some(f) => exit_code(&f),
            }
        }
        Err(f) => {
            if let Failure::Input(msg) = &f {
                eprintln!("error: {msg}");
            }
            exit_code(&f)
        }
    }
}

fn exit_code(f: &Failure) -> ExitCode {
    ExitCode::from(match f {
        Failure::Input(_) => 2,
        Failure::Inequivalent => 3,
        Failure::Property => 4,
    })
}

fn run(cli: &Cli) -> Run {
    let c = &cli.common;
    match &cli.command {
        Command::Mu => cmd_mu(c),
        Command::Mubar => cmd_mubar(c),
        Command::Delta => cmd_delta(c),
        Command::Slmove => cmd_slmove(c),
        Command::Hset => cmd_hset(c),
        Command::Classify => cmd_classify(c),
        Command::Verify { prop, cases } => cmd_verify(c, prop, *cases),
    }
}

fn framing(c: &Common) -> FramingCheck {
    match c.framing {
        FramingMode::Framing => FramingCheck::Framing,
        FramingMode::Strict => FramingCheck::Strict,
        FramingMode::Off => FramingCheck::Off,
    }
}

fn read_tangles(c: &Common, count: usize) -> Result<Vec<TanglePresentation>, Failure> {
    if c.input.len() != count {
        return Err(Failure::Input(format!("expected {count} --input file(s), got {}", c.input.len())));
    }
    c.input
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            parse_tangle(&text, framing(c)).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        })
        .collect()
}

fn sequences(c: &Common, n: usize) -> Result<Vec<SequenceKey>, Failure> {
    if c.seq.is_empty() {
        return Err(Failure::Input("at least one --seq is required".into()));
    }
    Ok(c.seq.iter().map(|s| SequenceKey::parse(s, n)).collect::<clover_core::Result<Vec<_>>>()?)
}

fn require(v: Option<usize>, name: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--{name} is required")))
}

/// Expansion deep enough for every requested sequence.
fn expansion_for(t: &TanglePresentation, seqs: &[SequenceKey], c: &Common) -> Result<LongitudeExpansion, Failure> {
    let need = seqs.iter().map(|s| s.len().saturating_sub(1)).max().unwrap_or(1).max(1);
    Ok(t.expansion(c.degree.unwrap_or(need).max(need))?)
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn done(text: String, machine: Value) -> Run {
    Ok(Output { text, machine, status: None })
}

fn cmd_mu(c: &Common) -> Run {
    let t = read_tangles(c, 1)?.remove(0);
    let seqs = sequences(c, t.n())?;
    let e = expansion_for(&t, &seqs, c)?;
    let mut text = String::new();
    let mut values = Vec::new();
    for s in &seqs {
        let v = e.milnor_number(s)?;
        text.push_str(&format!("mu({s}) = {v}\n"));
        values.push(json!({ "seq": s.to_string(), "mu": int_to_json(&v) }));
    }
    done(text, envelope("mu", json!({ "values": values })))
}

fn cmd_mubar(c: &Common) -> Run {
    let t = read_tangles(c, 1)?.remove(0);
    let seqs = sequences(c, t.n())?;
    let e = expansion_for(&t, &seqs, c)?;
    let mut text = String::new();
    let mut values = Vec::new();
    for s in &seqs {
        let m = e.mu_bar(s)?;
        text.push_str(&format!("mubar({s}) = {} mod {}\n", m.residue, m.modulus));
        values.push(json!({
            "seq": s.to_string(),
            "residue": int_to_json(&m.residue),
            "modulus": int_to_json(&m.modulus),
        }));
    }
    done(text, envelope("mubar", json!({ "values": values })))
}

fn cmd_delta(c: &Common) -> Run {
    let t = read_tangles(c, 1)?.remove(0);
    let seqs = sequences(c, t.n())?;
    let e = expansion_for(&t, &seqs, c)?;
    let mut text = String::new();
    let mut values = Vec::new();
    for s in &seqs {
        let (label, g) = match c.k {
            Some(k) => (format!("delta^{k}({s})"), e.delta_k(s, k)?),
            None => (format!("Delta({s})"), e.delta_link(s)?),
        };
        text.push_str(&format!("{label} = {g}\n"));
        values.push(json!({ "seq": s.to_string(), "delta": int_to_json(&g) }));
    }
    let kind = if c.k.is_some() { "delta_k" } else { "Delta" };
    done(text, envelope("delta", json!({ "kind": kind, "k": c.k, "values": values })))
}

fn cmd_slmove(c: &Common) -> Run {
    let mut ts = read_tangles(c, 2)?;
    let u = ts.pop().expect("two tangles");
    let gamma = ts.pop().expect("two tangles");
    let seqs: Vec<SequenceKey> =
        c.seq.iter().map(|s| SequenceKey::parse(s, gamma.n())).collect::<clover_core::Result<_>>()?;
    let need = seqs.iter().map(|s| s.len().saturating_sub(1)).max().unwrap_or(0);
    let q = c.degree.unwrap_or(3).max(need).max(1);
    let m = linking_of(&u)?;
    let series = transform(&SlMoveInput::new(gamma.clone(), u, q)?)?;
    let mut text = format!("degree {q}\n");
    for (j, s) in series.iter().enumerate() {
        text.push_str(&format!("E(lambda'_{}) = {s}\n", j + 1));
    }
    let before = gamma.expansion(q)?;
    let after = LongitudeExpansion::from_series(series.clone())?;
    let mut reports = Vec::new();
    if !seqs.is_empty() {
        let k = require(c.k, "k")?;
        for s in &seqs {
            let r = CongruenceReport::compare(&before, &after, s, k)?;
            text.push_str(&format!("{r}\n"));
            reports.push(json!({
                "seq": s.to_string(),
                "k": k,
                "before": int_to_json(&r.before),
                "after": int_to_json(&r.after),
                "modulus": int_to_json(&r.modulus),
                "holds": r.holds,
            }));
        }
    }
    let mut changes = Vec::new();
    if c.explain {
        text.push_str(&format!("linking matrix of u:\n{m}"));
        let t0 = before.mu_table(q + 1, true)?;
        let t1 = after.mu_table(q + 1, true)?;
        text.push_str("non-repeated mu changed by the move:\n");
        for ((s, a), b) in t0.iter().zip(t1.values()) {
            if a != b {
                text.push_str(&format!("  mu({s}): {a} -> {b}\n"));
                changes.push(json!({ "seq": s.to_string(), "before": int_to_json(a), "after": int_to_json(b) }));
            }
        }
        if changes.is_empty() {
            text.push_str("  none\n");
        }
    }
    let failed = reports.iter().any(|r| r["holds"] == Value::Bool(false));
    let mut body = json!({
        "degree": q,
        "series": series.iter().map(series_to_json).collect::<Vec<_>>(),
        "congruence": reports,
    });
    if c.explain {
        body["changes"] = Value::from(changes);
    }
    Ok(Output {
        text,
        machine: envelope("slmove", body),
        status: failed.then_some(Failure::Property),
    })
}

fn cmd_hset(c: &Common) -> Run {
    let t = read_tangles(c, 1)?.remove(0);
    let k = c.k.unwrap_or(1);
    let j = c.j.unwrap_or(t.n());
    let l = hset_generators(&t, k, j)?;
    let mut text = format!("H({}, {j}) for n = {}, k = {k}\n{}", 2 * k + 2, t.n(), l.table());
    let mut body = json!({ "lattice": lattice_to_json(&l) });
    if c.explain {
        let rows = symbolic_rows(t.n(), k, j, true)?;
        text.push_str("generator rows:\n");
        for r in &rows {
            text.push_str(&format!("  {r}\n"));
        }
        body["symbolic"] = Value::from(rows.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    done(text, envelope("hset", body))
}

fn cmd_classify(c: &Common) -> Run {
    let ts = read_tangles(c, 2)?;
    let result = classify_4clover(&ts[0], &ts[1])?;
    let mut text = format!("{}\n", result.verdict);
    if c.explain {
        text.push_str(&format!("{}\n", result.reason));
    }
    let reason = match &result.reason {
        Reason::CommonPoint(m) => json!({ "kind": "common_point", "coefficients": m.iter().map(int_to_json).collect::<Vec<_>>() }),
        Reason::MuDiffers { seq, left, right } => json!({
            "kind": "mu_differs",
            "seq": seq.to_string(),
            "left": int_to_json(left),
            "right": int_to_json(right),
        }),
        Reason::Disjoint(cert) => json!({
            "kind": "disjoint",
            "row": cert.row,
            "residual": int_to_json(&cert.residual),
            "pivot": cert.pivot.as_ref().map(int_to_json),
        }),
    };
    let status = (result.verdict == Verdict::Inequivalent).then_some(Failure::Inequivalent);
    Ok(Output {
        text,
        machine: envelope("classify", json!({ "verdict": result.verdict.to_string(), "reason": reason })),
        status,
    })
}

fn cmd_verify(c: &Common, names: &[String], cases: Option<usize>) -> Run {
    let props: Vec<Property> = if names.is_empty() {
        Property::ALL.to_vec()
    } else {
        names.iter().map(|s| s.parse()).collect::<clover_core::Result<_>>()?
    };
    let mut text = String::new();
    let mut suites = Vec::new();
    let mut failed = false;
    for p in props {
        let report = p.run(c.seed, cases.unwrap_or(p.default_cases()))?;
        failed |= !report.passed();
        text.push_str(&format!("{report}\n"));
        suites.push(json!({
            "property": report.property,
            "seed": report.seed,
            "cases": report.cases,
            "passed": report.passed(),
            "failures": report.failures,
        }));
    }
    Ok(Output {
        text,
        machine: envelope("verify", json!({ "suites": suites })),
        status: failed.then_some(Failure::Property),
    })
}
