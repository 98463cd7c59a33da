//! The command-line driver. Every subcommand reads JSON (or a `z`-expression)
//! and writes canonical pretty-printed JSON, so outputs are byte-identical
//! across runs and usable as fixtures. Exit codes: 0 on success, 1 when the
//! mathematics says no (with a structured `{"error": ...}` object), 2 for
//! usage mistakes.

use crate::error::Error;
use crate::expr::parse_rational_function;
use crate::jsonio;
use crate::lambert::{
    find_witness, lambert_coefficients, moebius_invert, prime_square_scan, GammaSpec,
};
use crate::rat::{parse_rat, rat_string, Rat};
use crate::recurrence::{berlekamp_massey, LinearRecurrence, RationalFunction};
use crate::refute::{refute, verify_certificate, RefuteOptions};
use serde_json::{json, Map, Value};
use std::io::Write;

const USAGE: &str = "\
usage: lrseq <command> [flags]

sequences and generating functions
  expand         --expr E | --rf F | --recurrence F, --count N
  bm             --prefix \"a1,a2,...\" [--first-index 0|1]
  to-rational    --recurrence F
  from-rational  --expr E | --rf F

structure of zero sets and supports
  zeros          --expr E | --rf F, --bound N
  decompose      --expr E | --rf F [--prime-bound N]
  dominant       --expr E | --rf F

divisor transforms and refutation
  lambert        --gamma F, --count N
  invert         --prefix \"b1,b2,...\"
  witness        --gamma F [--cap N]
  prime-square   --gamma F, --bound N
  refute         --gamma F, --candidate F | --candidate-from-prefix L
                 [--min-prime P] [--witness-cap N] [--progression-cap N]
  verify         --cert F, --gamma F, --candidate F | --candidate-from-prefix L

File arguments accept '-' for standard input. Set LRS_PRECISION_BITS to cap
the isolation precision used by `zeros` and `dominant` (default 4096).";

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run_to<W: Write>(args: &[String], out: &mut W) -> i32 {
    match dispatch(args) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(out, "{}", error_json(&e));
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(
                out,
                "{}",
                jsonio::canonical_pretty(&json!({ "error": "usage", "detail": msg }))
            );
            2
        }
    }
}

fn dispatch(args: &[String]) -> CliResult<String> {
    let Some(cmd) = args.first() else {
        return Err(usage("no command given; run `lrseq help` for the list"));
    };
    if cmd == "help" || cmd == "--help" || cmd == "-h" {
        return Ok(USAGE.to_string());
    }
    let rest = &args[1..];
    let value = match cmd.as_str() {
        "expand" => cmd_expand(rest)?,
        "bm" => cmd_bm(rest)?,
        "to-rational" => cmd_to_rational(rest)?,
        "from-rational" => cmd_from_rational(rest)?,
        "zeros" => cmd_zeros(rest)?,
        "decompose" => cmd_decompose(rest)?,
        "dominant" => cmd_dominant(rest)?,
        "lambert" => cmd_lambert(rest)?,
        "invert" => cmd_invert(rest)?,
        "witness" => cmd_witness(rest)?,
        "prime-square" => cmd_prime_square(rest)?,
        "refute" => cmd_refute(rest)?,
        "verify" => cmd_verify(rest)?,
        other => return Err(usage(format!("unknown command {other:?}"))),
    };
    Ok(jsonio::canonical_pretty(&value))
}

// ---- flag parsing ---------------------------------------------------------

struct Flags {
    entries: Vec<(String, String)>,
}

impl Flags {
    fn parse(rest: &[String], allowed: &[&str]) -> CliResult<Flags> {
        let mut entries = Vec::new();
        let mut it = rest.iter();
        while let Some(arg) = it.next() {
            let Some(name) = arg.strip_prefix("--") else {
                return Err(usage(format!("unexpected argument {arg:?}")));
            };
            if !allowed.contains(&name) {
                return Err(usage(format!("unknown flag --{name} for this command")));
            }
            if entries.iter().any(|(n, _)| n == name) {
                return Err(usage(format!("flag --{name} given twice")));
            }
            let Some(value) = it.next() else {
                return Err(usage(format!("flag --{name} needs a value")));
            };
            entries.push((name.to_string(), value.clone()));
        }
        Ok(Flags { entries })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, name: &str) -> CliResult<&str> {
        self.get(name)
            .ok_or_else(|| usage(format!("missing required flag --{name}")))
    }

    fn u64_opt(&self, name: &str) -> CliResult<Option<u64>> {
        self.get(name)
            .map(|v| {
                v.parse()
                    .map_err(|_| usage(format!("--{name} expects an unsigned integer, got {v:?}")))
            })
            .transpose()
    }

    fn u64_or(&self, name: &str, default: u64) -> CliResult<u64> {
        Ok(self.u64_opt(name)?.unwrap_or(default))
    }

    fn usize_req(&self, name: &str) -> CliResult<usize> {
        let v = self.require(name)?;
        v.parse()
            .map_err(|_| usage(format!("--{name} expects an unsigned integer, got {v:?}")))
    }
}

// ---- input loading --------------------------------------------------------

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    }
}

fn load_json(path: &str) -> CliResult<Value> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(Error::Invalid(format!("malformed JSON in {path}: {e}"))))
}

/// A rational function given either inline (`--expr`) or as JSON (`--rf`).
fn rf_input(flags: &Flags) -> CliResult<RationalFunction> {
    match (flags.get("expr"), flags.get("rf")) {
        (Some(src), None) => Ok(parse_rational_function(src)?),
        (None, Some(path)) => Ok(jsonio::rational_function_from_json(&load_json(path)?)?),
        _ => Err(usage("give the input as exactly one of --expr or --rf")),
    }
}

fn gamma_input(flags: &Flags) -> CliResult<GammaSpec> {
    Ok(jsonio::gamma_from_json(&load_json(flags.require("gamma")?)?)?)
}

fn prefix_input(flags: &Flags) -> CliResult<Vec<Rat>> {
    let raw = flags.require("prefix")?;
    raw.split(',')
        .map(|piece| parse_rat(piece.trim()).map_err(CliError::from))
        .collect()
}

fn candidate_input(flags: &Flags, gamma: &GammaSpec) -> CliResult<LinearRecurrence> {
    match (flags.get("candidate"), flags.get("candidate-from-prefix")) {
        (Some(path), None) => Ok(jsonio::recurrence_from_json(&load_json(path)?)?),
        (None, Some(raw)) => {
            let len: usize = raw.parse().map_err(|_| {
                usage(format!(
                    "--candidate-from-prefix expects a length, got {raw:?}"
                ))
            })?;
            if len == 0 {
                return Err(usage("--candidate-from-prefix needs a positive length"));
            }
            let b = lambert_coefficients(gamma, len);
            berlekamp_massey(&b, 1)?.ok_or_else(|| {
                CliError::Domain(Error::Invalid(
                    "the divisor transform prefix is identically zero; there is no candidate to test"
                        .into(),
                ))
            })
        }
        _ => Err(usage(
            "give the candidate as exactly one of --candidate or --candidate-from-prefix",
        )),
    }
}

fn precision_cap() -> u32 {
    std::env::var("LRS_PRECISION_BITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(4096)
}

// ---- subcommands ----------------------------------------------------------

fn cmd_expand(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["expr", "rf", "recurrence", "count"])?;
    let count = flags.usize_req("count")?;
    let coeffs = if let Some(path) = flags.get("recurrence") {
        if flags.get("expr").is_some() || flags.get("rf").is_some() {
            return Err(usage("give the input as exactly one of --expr, --rf, or --recurrence"));
        }
        let rec = jsonio::recurrence_from_json(&load_json(path)?)?;
        if count == 0 {
            Vec::new()
        } else {
            rec.expand_padded(count as u64 - 1)
        }
    } else {
        rf_input(&flags)?.expand(count)
    };
    Ok(json!({ "coeffs": jsonio::rats_to_json(&coeffs) }))
}

fn cmd_bm(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["prefix", "first-index"])?;
    let prefix = prefix_input(&flags)?;
    let first = flags.u64_or("first-index", 0)?;
    match berlekamp_massey(&prefix, first)? {
        Some(rec) => Ok(jsonio::recurrence_to_json(&rec)),
        None => Ok(Value::Null),
    }
}

fn cmd_to_rational(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["recurrence"])?;
    let rec = jsonio::recurrence_from_json(&load_json(flags.require("recurrence")?)?)?;
    Ok(jsonio::rational_function_to_json(&rec.to_rational()?))
}

fn cmd_from_rational(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["expr", "rf"])?;
    let rf = rf_input(&flags)?;
    Ok(jsonio::recurrence_to_json(&rf.to_recurrence()?))
}

fn cmd_zeros(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["expr", "rf", "bound"])?;
    let rf = rf_input(&flags)?;
    let bound = flags
        .u64_opt("bound")?
        .ok_or_else(|| usage("missing required flag --bound"))?;
    let desc = crate::zeros::zero_set(&rf, bound, precision_cap())?;
    Ok(jsonio::zero_set_to_json(&desc))
}

fn cmd_decompose(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["expr", "rf", "prime-bound"])?;
    let rf = rf_input(&flags)?;
    let bound = flags.u64_or("prime-bound", 1000)?;
    let dec = crate::decompose::proper_power_decompose(&rf, bound)?;
    Ok(jsonio::decomposition_to_json(&dec))
}

fn cmd_dominant(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["expr", "rf"])?;
    let rf = rf_input(&flags)?;
    let analysis = crate::dominant::dominant_analysis(&rf, precision_cap())?;
    Ok(jsonio::dominant_to_json(&analysis))
}

fn cmd_lambert(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["gamma", "count"])?;
    let gamma = gamma_input(&flags)?;
    let count = flags.usize_req("count")?;
    let b = lambert_coefficients(&gamma, count);
    Ok(json!({ "coeffs": jsonio::rats_to_json(&b) }))
}

fn cmd_invert(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["prefix"])?;
    let b = prefix_input(&flags)?;
    let gamma = moebius_invert(&b)?;
    Ok(json!({ "coeffs": jsonio::rats_to_json(&gamma) }))
}

fn cmd_witness(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["gamma", "cap"])?;
    let gamma = gamma_input(&flags)?;
    let cap = flags.u64_or("cap", 256)?;
    let (m, s) = find_witness(&gamma, cap)?;
    Ok(json!({ "m": m, "S": rat_string(&s) }))
}

fn cmd_prime_square(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["gamma", "bound"])?;
    let gamma = gamma_input(&flags)?;
    let bound = flags
        .u64_opt("bound")?
        .ok_or_else(|| usage("missing required flag --bound"))?;
    let scan = prime_square_scan(&gamma, bound)?;
    Ok(jsonio::prime_scan_to_json(&scan))
}

fn refute_options(flags: &Flags) -> CliResult<RefuteOptions> {
    let defaults = RefuteOptions::default();
    Ok(RefuteOptions {
        witness_cap: flags.u64_or("witness-cap", defaults.witness_cap)?,
        prime_floor: flags.u64_or("min-prime", defaults.prime_floor)?,
        progression_cap: flags.u64_opt("progression-cap")?,
        prime_retries: defaults.prime_retries,
    })
}

fn cmd_refute(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(
        rest,
        &[
            "gamma",
            "candidate",
            "candidate-from-prefix",
            "min-prime",
            "witness-cap",
            "progression-cap",
        ],
    )?;
    let gamma = gamma_input(&flags)?;
    let candidate = candidate_input(&flags, &gamma)?;
    let opts = refute_options(&flags)?;
    let cert = refute(&gamma, &candidate, &opts)?;
    Ok(jsonio::certificate_to_json(&cert))
}

fn cmd_verify(rest: &[String]) -> CliResult<Value> {
    let flags = Flags::parse(rest, &["cert", "gamma", "candidate", "candidate-from-prefix"])?;
    let gamma = gamma_input(&flags)?;
    let candidate = candidate_input(&flags, &gamma)?;
    let cert = jsonio::certificate_from_json(&load_json(flags.require("cert")?)?)?;
    verify_certificate(&cert, &gamma, &candidate)?;
    Ok(json!({
        "verified": true,
        "candidate_fingerprint": cert.candidate_fingerprint,
    }))
}

// ---- error rendering ------------------------------------------------------

fn error_json(e: &Error) -> String {
    let mut fields = Map::new();
    let name = match e {
        Error::HypothesisViolated { witness } => {
            fields.insert("witness".into(), json!(witness));
            "hypothesis violated"
        }
        Error::CoprimeSupportClass {
            class,
            modulus,
            bound,
        } => {
            fields.insert("class".into(), json!(class));
            fields.insert("modulus".into(), json!(modulus));
            fields.insert("bound".into(), json!(bound));
            "undecided support class"
        }
        Error::PrecisionExhausted { bits, .. } => {
            fields.insert("bits".into(), json!(bits));
            "precision exhausted"
        }
        Error::SearchCapExceeded { cap, .. } => {
            fields.insert("cap".into(), json!(cap));
            "search cap exceeded"
        }
        Error::NotRefuted(_) => "candidate not refuted",
        Error::CertificateRejected(reason) => {
            fields.insert("reason".into(), json!(reason));
            "certificate rejected"
        }
        Error::Syntax { offset, .. } => {
            fields.insert("offset".into(), json!(offset));
            "syntax error"
        }
        Error::GammaZero(depth) => {
            fields.insert("depth".into(), json!(depth));
            "no recurrent part"
        }
        Error::BoundTooSmall(_) => "bound too small",
        Error::DivisionByZero | Error::ZeroPolyDivision => "division by zero",
        Error::InexactDivision => "inexact division",
        Error::DenominatorVanishesAtZero => "denominator vanishes at zero",
        Error::ZeroProtected => "zero cannot be protected",
        Error::BadReduction { .. } => "bad reduction",
        Error::Overflow(_) => "overflow",
        Error::Invalid(_) => "invalid input",
    };
    fields.insert("error".into(), json!(name));
    fields.insert("detail".into(), json!(e.to_string()));
    jsonio::canonical_pretty(&Value::Object(fields))
}
