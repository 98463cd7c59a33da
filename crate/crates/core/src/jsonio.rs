//! Canonical JSON encodings for the objects the tools exchange.
//!
//! Rationals travel as exact decimal strings ("3/2", "-7"). Structural
//! integers (indices, orders, moduli) are JSON numbers, except inside
//! certificates, which are flat all-string records so they can be archived
//! and diffed byte-for-byte. serde_json's map type keeps keys sorted, so
//! every serialization produced here is deterministic.

use crate::decompose::ProperPowerDecomposition;
use crate::dominant::DominantAnalysis;
use crate::error::{Error, Result};
use crate::lambert::{GammaSpec, PrimeScan};
use crate::poly::Poly;
use crate::rat::{parse_rat, rat_string, Rat};
use crate::recurrence::{LinearRecurrence, RationalFunction};
use crate::refute::RefutationCertificate;
use crate::zeros::ZeroSetDescription;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn canonical_compact(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn canonical_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(rat_string(x))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    let s = v
        .as_str()
        .ok_or_else(|| bad("expected a rational encoded as a string"))?;
    parse_rat(s)
}

pub fn rats_to_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_to_json).collect())
}

fn rats_from_json(v: &Value, what: &str) -> Result<Vec<Rat>> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(format!("{what}: expected an array of rationals")))?;
    arr.iter().map(rat_from_json).collect()
}

/// Coefficients lowest-first; the zero polynomial is the empty array.
pub fn poly_to_json(p: &Poly) -> Value {
    if p.is_zero() {
        return Value::Array(Vec::new());
    }
    let d = p.deg0();
    Value::Array((0..=d).map(|i| rat_to_json(&p.coeff(i))).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    Ok(Poly::from_coeffs(rats_from_json(v, "polynomial")?))
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(format!("{what}: expected a JSON object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| bad(format!("{what}: missing field \"{key}\"")))
}

fn u64_field(m: &Map<String, Value>, key: &str, what: &str) -> Result<u64> {
    field(m, key, what)?
        .as_u64()
        .ok_or_else(|| bad(format!("{what}: field \"{key}\" must be a nonnegative integer")))
}

pub fn recurrence_to_json(rec: &LinearRecurrence) -> Value {
    json!({
        "coeffs": rats_to_json(rec.coeffs()),
        "initial": rats_to_json(rec.initial_terms()),
        "start_index": rec.start_index(),
        "first_index": rec.first_index(),
    })
}

pub fn recurrence_from_json(v: &Value) -> Result<LinearRecurrence> {
    let m = as_obj(v, "recurrence")?;
    LinearRecurrence::new(
        rats_from_json(field(m, "coeffs", "recurrence")?, "recurrence coeffs")?,
        rats_from_json(field(m, "initial", "recurrence")?, "recurrence initial")?,
        u64_field(m, "start_index", "recurrence")?,
        u64_field(m, "first_index", "recurrence")?,
    )
}

pub fn rational_function_to_json(rf: &RationalFunction) -> Value {
    json!({
        "num": poly_to_json(rf.num()),
        "den": poly_to_json(rf.den()),
    })
}

pub fn rational_function_from_json(v: &Value) -> Result<RationalFunction> {
    let m = as_obj(v, "rational function")?;
    RationalFunction::new(
        poly_from_json(field(m, "num", "rational function")?)?,
        poly_from_json(field(m, "den", "rational function")?)?,
    )
}

/// `{"recurrence": {...}}` or `{"support": {"4": "1", ...}}`.
pub fn gamma_to_json(g: &GammaSpec) -> Value {
    match g {
        GammaSpec::Recurrence(rec) => json!({ "recurrence": recurrence_to_json(rec) }),
        GammaSpec::Support(map) => {
            let mut entries = Map::new();
            for (k, v) in map {
                entries.insert(k.to_string(), rat_to_json(v));
            }
            json!({ "support": Value::Object(entries) })
        }
    }
}

pub fn gamma_from_json(v: &Value) -> Result<GammaSpec> {
    let m = as_obj(v, "weight sequence")?;
    match (m.get("recurrence"), m.get("support")) {
        (Some(r), None) => GammaSpec::from_recurrence(recurrence_from_json(r)?),
        (None, Some(s)) => {
            let obj = as_obj(s, "weight support")?;
            let mut map = BTreeMap::new();
            for (k, val) in obj {
                let idx: u64 = k
                    .parse()
                    .map_err(|_| bad(format!("weight support: bad index \"{k}\"")))?;
                map.insert(idx, rat_from_json(val)?);
            }
            GammaSpec::from_support(map)
        }
        _ => Err(bad(
            "weight sequence: expected exactly one of \"recurrence\" or \"support\"",
        )),
    }
}

pub fn zero_set_to_json(d: &ZeroSetDescription) -> Value {
    json!({
        "sporadic": d.sporadic,
        "sporadic_complete": d.sporadic_complete,
        "modulus": d.modulus,
        "zero_residues": d.zero_residues,
        "checked_bound": d.checked_bound,
    })
}

pub fn decomposition_to_json(d: &ProperPowerDecomposition) -> Value {
    let parts: Vec<Value> = d
        .parts
        .iter()
        .map(|(di, h)| json!({ "d": di, "H": rational_function_to_json(h) }))
        .collect();
    json!({
        "P": poly_to_json(&d.finite_part),
        "parts": parts,
    })
}

pub fn dominant_to_json(d: &DominantAnalysis) -> Value {
    json!({
        "group_size": d.group_size,
        "relation_orders": d.relation_orders,
        "modulus_lo": rat_to_json(&d.modulus_lo),
        "modulus_hi": rat_to_json(&d.modulus_hi),
        "bits": d.bits,
    })
}

fn scan_side(values: &[(u64, Rat)], constant: &Option<Rat>, violations: &[u64]) -> Value {
    let vals: Vec<Value> = values
        .iter()
        .map(|(p, v)| json!([p, rat_to_json(v)]))
        .collect();
    json!({
        "values": vals,
        "constant": constant.as_ref().map(rat_to_json).unwrap_or(Value::Null),
        "violations": violations,
    })
}

pub fn prime_scan_to_json(s: &PrimeScan) -> Value {
    json!({
        "bound": s.bound,
        "prime": scan_side(&s.prime_values, &s.prime_constant, &s.prime_violations),
        "square": scan_side(&s.square_values, &s.square_constant, &s.square_violations),
    })
}

/// Flat certificate record: "v" is the integer format version, every other
/// field a decimal string.
pub fn certificate_to_json(c: &RefutationCertificate) -> Value {
    json!({
        "v": 1,
        "m": c.m.to_string(),
        "S": rat_string(&c.s),
        "p": c.p.to_string(),
        "T_gamma": c.t_gamma.to_string(),
        "N0": c.n0.to_string(),
        "T_b": c.t_b.to_string(),
        "T": c.t.to_string(),
        "q": c.q.to_string(),
        "b_mq_modp": c.b_mq_modp.to_string(),
        "b_mq2_modp": c.b_mq2_modp.to_string(),
        "S_modp": c.s_modp.to_string(),
        "candidate_fingerprint": c.candidate_fingerprint.clone(),
    })
}

fn u64_str_field(m: &Map<String, Value>, key: &str) -> Result<u64> {
    let s = field(m, key, "certificate")?
        .as_str()
        .ok_or_else(|| Error::CertificateRejected(format!("field \"{key}\" must be a string")))?;
    s.parse()
        .map_err(|_| Error::CertificateRejected(format!("field \"{key}\" is not a decimal integer")))
}

pub fn certificate_from_json(v: &Value) -> Result<RefutationCertificate> {
    let m = as_obj(v, "certificate")?;
    const KEYS: [&str; 13] = [
        "v", "m", "S", "p", "T_gamma", "N0", "T_b", "T", "q", "b_mq_modp", "b_mq2_modp",
        "S_modp", "candidate_fingerprint",
    ];
    for k in m.keys() {
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::CertificateRejected(format!(
                "unrecognized certificate field \"{k}\""
            )));
        }
    }
    match field(m, "v", "certificate")?.as_u64() {
        Some(1) => {}
        _ => {
            return Err(Error::CertificateRejected(
                "unsupported certificate version".into(),
            ))
        }
    }
    let s = {
        let raw = field(m, "S", "certificate")?
            .as_str()
            .ok_or_else(|| Error::CertificateRejected("field \"S\" must be a string".into()))?;
        parse_rat(raw)
            .map_err(|_| Error::CertificateRejected("field \"S\" is not a rational".into()))?
    };
    let fingerprint = field(m, "candidate_fingerprint", "certificate")?
        .as_str()
        .ok_or_else(|| {
            Error::CertificateRejected("field \"candidate_fingerprint\" must be a string".into())
        })?
        .to_string();
    Ok(RefutationCertificate {
        m: u64_str_field(m, "m")?,
        s,
        p: u64_str_field(m, "p")?,
        t_gamma: u64_str_field(m, "T_gamma")?,
        n0: u64_str_field(m, "N0")?,
        t_b: u64_str_field(m, "T_b")?,
        t: u64_str_field(m, "T")?,
        q: u64_str_field(m, "q")?,
        b_mq_modp: u64_str_field(m, "b_mq_modp")?,
        b_mq2_modp: u64_str_field(m, "b_mq2_modp")?,
        s_modp: u64_str_field(m, "S_modp")?,
        candidate_fingerprint: fingerprint,
    })
}
