//! Refutation certificates: compact, independently checkable evidence that
//! the divisor transform b of a weight sequence γ does **not** eventually
//! satisfy a proposed linear recurrence.
//!
//! The construction picks a divisor-sum witness (m, S) over the from-start
//! part of γ, a prime p protecting every quantity in sight, and a prime
//! q ≡ 1 (mod T) aligned with both the period of γ̄ and the cycle of the
//! candidate's predicted states. Then `b̄(mq²) − b̄(mq) = S̄ ≠ 0 (mod p)`,
//! while any sequence actually obeying the candidate from its start index
//! would repeat: the two probes would agree. The certificate records just
//! enough for a verifier to replay the contradiction with independent
//! algorithms (plain iteration and brute-force orders instead of binary
//! powers and factored descents).

use crate::arith::{divisors, factorize, is_prime, lcm_u64, prime_in_progression};
use crate::error::{Error, Result};
use crate::jsonio;
use crate::lambert::{find_witness, GammaSpec};
use crate::modp::{
    matrix_order, matrix_order_brute, orbit_order, reduce_rat, reduce_recurrence, MatrixFp,
    RecurrenceFp,
};
use crate::rat::Rat;
use crate::recurrence::LinearRecurrence;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct RefuteOptions {
    /// Largest index tried for the divisor-sum witness.
    pub witness_cap: u64,
    /// Smallest prime considered when protecting the rational data.
    pub prime_floor: u64,
    /// Absolute bound on the probe prime q; `None` scales with the period.
    pub progression_cap: Option<u64>,
    /// How many protecting primes to try when group orders overflow
    /// machine range at the first choice.
    pub prime_retries: u32,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions {
            witness_cap: 256,
            prime_floor: 2,
            progression_cap: None,
            prime_retries: 8,
        }
    }
}

/// Everything a verifier needs to replay one refutation.
#[derive(Clone, Debug, PartialEq)]
pub struct RefutationCertificate {
    /// Witness index: the divisor sum of the from-start part at m is S.
    pub m: u64,
    pub s: Rat,
    /// Protecting prime.
    pub p: u64,
    /// Period of the reduced from-start part (order of its companion).
    pub t_gamma: u64,
    /// Index from which the candidate's predicted values repeat.
    pub n0: u64,
    /// Cycle length of the candidate's predicted state orbit.
    pub t_b: u64,
    /// lcm(t_gamma, t_b).
    pub t: u64,
    /// Probe prime, q ≡ 1 (mod t), q ∤ m, mq ≥ n0.
    pub q: u64,
    pub b_mq_modp: u64,
    pub b_mq2_modp: u64,
    pub s_modp: u64,
    /// SHA-256 of the candidate's canonical JSON.
    pub candidate_fingerprint: String,
}

/// SHA-256 (hex) of the canonical JSON encoding of a recurrence. Ties a
/// certificate to the exact candidate it refutes.
pub fn candidate_fingerprint(candidate: &LinearRecurrence) -> String {
    let canon = jsonio::canonical_compact(&jsonio::recurrence_to_json(candidate));
    let mut h = Sha256::new();
    h.update(canon.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128 % p as u128) % p as u128) as u64
}

fn push_denominators(out: &mut Vec<Rat>, vals: &[Rat]) {
    for x in vals {
        if !x.denom().is_one() {
            out.push(Rat::from_integer(x.denom().clone()));
        }
    }
}

/// The rationals whose mod-p behavior the argument leans on: the witness sum
/// and both trailing coefficients must stay nonzero, and every denominator
/// appearing in γ's normalized presentation or the candidate must stay
/// invertible.
fn protection_set(
    gamma_rec: &LinearRecurrence,
    candidate: &LinearRecurrence,
    s: &Rat,
) -> Vec<Rat> {
    let (v, f) = gamma_rec.normalize_from_start();
    let mut out = vec![
        s.clone(),
        v.coeffs().last().expect("recurrences have coefficients").clone(),
        candidate
            .coeffs()
            .last()
            .expect("recurrences have coefficients")
            .clone(),
    ];
    push_denominators(&mut out, v.coeffs());
    push_denominators(&mut out, v.initial_terms());
    push_denominators(&mut out, candidate.coeffs());
    push_denominators(&mut out, candidate.initial_terms());
    let corr: Vec<Rat> = f.iter().map(|(_, x)| x.clone()).collect();
    push_denominators(&mut out, &corr);
    out
}

/// γ reduced mod p: from-start part plus finite correction.
struct ReducedGamma {
    eta: RecurrenceFp,
    corr: BTreeMap<u64, u64>,
}

impl ReducedGamma {
    fn new(gamma_rec: &LinearRecurrence, p: u64) -> Result<ReducedGamma> {
        let (eta, corr) = reduce_recurrence(gamma_rec, p)?;
        Ok(ReducedGamma { eta, corr })
    }

    /// γ̄ at an arbitrary index by binary matrix powers (generator route).
    fn term_pow(&self, n: &BigUint) -> u64 {
        let k = n - BigUint::one();
        let state = self.eta.companion().pow_big(&k).apply(&self.eta.initial);
        let mut val = state[0];
        if let Some(n64) = n.to_u64() {
            if let Some(&c) = self.corr.get(&n64) {
                val = addmod(val, c, self.eta.p);
            }
        }
        val
    }
}

/// γ̄ by a materialized one-period prefix and plain index reduction — the
/// verifier's independent evaluation route. Falls back to matrix powers
/// only when the period is too long to materialize.
struct PlainEval<'a> {
    g: &'a ReducedGamma,
    period: u64,
    prefix: Option<Vec<u64>>,
}

const PLAIN_PREFIX_CAP: u64 = 4_000_000;

impl<'a> PlainEval<'a> {
    fn new(g: &'a ReducedGamma, period: u64) -> PlainEval<'a> {
        let prefix = (period <= PLAIN_PREFIX_CAP).then(|| g.eta.expand(period as usize));
        PlainEval { g, period, prefix }
    }

    fn eval(&self, n: &BigUint) -> u64 {
        let base = match &self.prefix {
            Some(pre) => {
                let idx = ((n - BigUint::one()) % BigUint::from(self.period))
                    .to_u64()
                    .expect("index below the period fits in a machine word");
                pre[idx as usize]
            }
            None => {
                let k = n - BigUint::one();
                self.g.eta.companion().pow_big(&k).apply(&self.g.eta.initial)[0]
            }
        };
        let mut val = base;
        if let Some(n64) = n.to_u64() {
            if let Some(&c) = self.g.corr.get(&n64) {
                val = addmod(val, c, self.g.eta.p);
            }
        }
        val
    }
}

/// True divisor-transform values b̄ over a window of small indices.
fn b_window<E: Fn(&BigUint) -> u64>(
    eval: &E,
    p: u64,
    from: u64,
    len: usize,
) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let n = from + i as u64;
        let mut acc = 0u64;
        for d in divisors(n)? {
            acc = addmod(acc, eval(&BigUint::from(d)), p);
        }
        out.push(acc);
    }
    Ok(out)
}

/// b̄ at mq and mq², using the divisor structure {d·qʲ : d | m, j ≤ 2}
/// (valid for prime q not dividing m).
fn probe_pair<E: Fn(&BigUint) -> u64>(
    eval: &E,
    p: u64,
    m: u64,
    q: u64,
) -> Result<(u64, u64)> {
    let qb = BigUint::from(q);
    let q2 = &qb * &qb;
    let mut bq = 0u64;
    let mut bq2 = 0u64;
    for d in divisors(m)? {
        let db = BigUint::from(d);
        let g0 = eval(&db);
        let g1 = eval(&(&db * &qb));
        let g2 = eval(&(&db * &q2));
        bq = addmod(bq, addmod(g0, g1, p), p);
        bq2 = addmod(bq2, addmod(addmod(g0, g1, p), g2, p), p);
    }
    Ok((bq, bq2))
}

/// Companion matrix of the candidate's coefficients mod p (the claimed
/// shift map on state windows).
fn candidate_matrix(candidate: &LinearRecurrence, p: u64) -> Result<MatrixFp> {
    let r = candidate.order();
    let mut rows = vec![vec![0u64; r]; r];
    for (i, row) in rows.iter_mut().enumerate().take(r.saturating_sub(1)) {
        row[i + 1] = 1;
    }
    for (i, c) in candidate.coeffs().iter().enumerate() {
        rows[r - 1][r - 1 - i] = reduce_rat(c, p)?;
    }
    if rows[r - 1][0] == 0 {
        return Err(Error::BadReduction {
            p,
            what: "candidate trailing coefficient vanishes".into(),
        });
    }
    Ok(MatrixFp::from_rows(rows, p))
}

/// Build a refutation certificate, or report honestly why none can be made:
/// [`Error::NotRefuted`] when γ has no recurrent part (its series is
/// rational), [`Error::SearchCapExceeded`] when the witness or probe search
/// runs out of room.
pub fn refute(
    gamma: &GammaSpec,
    candidate: &LinearRecurrence,
    opts: &RefuteOptions,
) -> Result<RefutationCertificate> {
    if candidate.first_index() != 1 {
        return Err(Error::Invalid(
            "the candidate recurrence must be indexed from 1, like the divisor transform it claims to generate"
                .into(),
        ));
    }
    let (m, s) = match find_witness(gamma, opts.witness_cap) {
        Ok(x) => x,
        Err(Error::GammaZero(_)) => {
            return Err(Error::NotRefuted(
                "the weight sequence has no recurrent part; its series is a finite sum of rational pieces"
                    .into(),
            ))
        }
        Err(e) => return Err(e),
    };
    let gamma_rec = gamma.to_recurrence()?;
    let (_, f) = gamma_rec.normalize_from_start();
    let nf = f.max_index().unwrap_or(0);
    let protect = protection_set(&gamma_rec, candidate, &s);

    let mut floor_p = opts.prime_floor;
    let mut last_overflow = None;
    for _ in 0..opts.prime_retries.max(1) {
        let p = crate::modp::good_prime(&protect, floor_p)?;
        match refute_at_prime(&gamma_rec, candidate, p, m, &s, nf, opts) {
            Ok(cert) => return Ok(cert),
            Err(e @ Error::Overflow(_)) => {
                // group orders at this prime exceed machine range; the next
                // protecting prime usually has tamer cycle structure
                last_overflow = Some(e);
                floor_p = p + 1;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_overflow.expect("retry loop only exits after an overflow"))
}

fn refute_at_prime(
    gamma_rec: &LinearRecurrence,
    candidate: &LinearRecurrence,
    p: u64,
    m: u64,
    s: &Rat,
    nf: u64,
    opts: &RefuteOptions,
) -> Result<RefutationCertificate> {
    let g = ReducedGamma::new(gamma_rec, p)?;
    let t_gamma = matrix_order(&g.eta.companion())?;

    // the candidate's predicted evolution, seeded with true values of b̄
    let n_start = candidate.start_index();
    let a = candidate_matrix(candidate, p)?;
    let eval = |n: &BigUint| g.term_pow(n);
    let seed = b_window(&eval, p, n_start, candidate.order())?;
    let t_b = orbit_order(&a, &seed)?;
    let n0 = n_start; // invertible dynamics: the predicted orbit repeats from its seed

    let t = lcm_u64(t_gamma, t_b)?;
    let floor = [n0.div_ceil(m), 2, nf + 1].into_iter().max().unwrap();
    let cap = opts
        .progression_cap
        .unwrap_or_else(|| floor.saturating_add(t.saturating_mul(4096)).max(1_000_000));
    let q = prime_in_progression(t, floor, m, cap)?;

    let (b_mq, b_mq2) = probe_pair(&eval, p, m, q)?;
    let s_modp = reduce_rat(s, p)?;
    if s_modp == 0 || submod(b_mq2, b_mq, p) != s_modp {
        return Err(Error::Invalid(
            "internal: refutation probes disagree with the witness sum".into(),
        ));
    }
    Ok(RefutationCertificate {
        m,
        s: s.clone(),
        p,
        t_gamma,
        n0,
        t_b,
        t,
        q,
        b_mq_modp: b_mq,
        b_mq2_modp: b_mq2,
        s_modp,
        candidate_fingerprint: candidate_fingerprint(candidate),
    })
}

const VERIFY_BRUTE_CAP: u64 = 1_000_000;

fn reject<T>(reason: &str) -> Result<T> {
    Err(Error::CertificateRejected(reason.into()))
}

/// Check a certificate against the weight sequence and candidate it claims
/// to refute. Every field is recomputed or pinned by an explicit test, using
/// algorithms independent of the generator where feasible (brute-force
/// matrix order, materialized periodic prefix instead of binary powers,
/// divisibility descent on the claimed cycle length). Rejections carry the
/// name of the first failed check.
pub fn verify_certificate(
    cert: &RefutationCertificate,
    gamma: &GammaSpec,
    candidate: &LinearRecurrence,
) -> Result<()> {
    // 1 — the certificate is about this candidate
    if candidate_fingerprint(candidate) != cert.candidate_fingerprint {
        return reject("candidate fingerprint mismatch");
    }
    if candidate.first_index() != 1 {
        return reject("candidate is not indexed from 1");
    }
    // 2 — structural sanity of the numeric fields
    if !is_prime(cert.p) {
        return reject("p is not prime");
    }
    if cert.m == 0
        || cert.t_gamma == 0
        || cert.t_b == 0
        || cert.t == 0
        || cert.b_mq_modp >= cert.p
        || cert.b_mq2_modp >= cert.p
        || cert.s_modp >= cert.p
    {
        return reject("certificate values out of range");
    }
    // 3 — p protects every rational the argument touches
    let gamma_rec = gamma.to_recurrence()?;
    let protect = protection_set(&gamma_rec, candidate, &cert.s);
    let pb = num_bigint::BigInt::from(cert.p);
    for x in &protect {
        if x.is_zero()
            || (x.numer() % &pb).is_zero()
            || (x.denom() % &pb).is_zero()
        {
            return reject("p is not a good prime for the protected values");
        }
    }
    // 4
    if !is_prime(cert.q) {
        return reject("q is not prime");
    }

    let g = ReducedGamma::new(&gamma_rec, cert.p)
        .map_err(|_| Error::CertificateRejected("p is not a good prime for the protected values".into()))?;

    // 5 — period of γ̄'s from-start part, recomputed by plain iteration
    let companion = g.eta.companion();
    let t_gamma = match matrix_order_brute(&companion, VERIFY_BRUTE_CAP) {
        Some(t) => t,
        None => matrix_order(&companion)?,
    };
    if t_gamma != cert.t_gamma {
        return reject("gamma matrix order mismatch");
    }

    // 6 — the claimed cycle data of the candidate's predicted states:
    // t_b fixes the true seed window, no proper divisor does, and the
    // orbit repeats from the seed itself
    let a = candidate_matrix(candidate, cert.p)
        .map_err(|_| Error::CertificateRejected("p is not a good prime for the protected values".into()))?;
    let plain = PlainEval::new(&g, t_gamma);
    let eval = |n: &BigUint| plain.eval(n);
    let n_start = candidate.start_index();
    let seed = b_window(&eval, cert.p, n_start, candidate.order())?;
    if cert.n0 != n_start {
        return reject("eventual period mismatch");
    }
    if a.pow(cert.t_b).apply(&seed) != seed {
        return reject("eventual period mismatch");
    }
    for (l, _) in factorize(cert.t_b)? {
        if a.pow(cert.t_b / l).apply(&seed) == seed {
            return reject("eventual period mismatch");
        }
    }
    // 7
    if lcm_u64(cert.t_gamma, cert.t_b)? != cert.t {
        return reject("lcm mismatch");
    }
    // 8
    if (cert.q - 1) % cert.t != 0 {
        return reject("q is not in the progression");
    }
    // 9
    if cert.m % cert.q == 0 {
        return reject("q divides the witness index");
    }
    // 10
    let mq = cert
        .m
        .checked_mul(cert.q)
        .ok_or_else(|| Error::Overflow("probe index".into()))?;
    if mq < cert.n0 {
        return reject("probe index below the periodic range");
    }
    // 11 — the witness sum, recomputed exactly over the rationals
    let (v, _) = gamma_rec.normalize_from_start();
    let padded = v.expand_padded(cert.m);
    let mut s = Rat::zero();
    for d in divisors(cert.m)? {
        s += &padded[d as usize];
    }
    if s != cert.s {
        return reject("witness sum mismatch");
    }
    // 12
    let s_modp = reduce_rat(&cert.s, cert.p)
        .map_err(|_| Error::CertificateRejected("p is not a good prime for the protected values".into()))?;
    if s_modp != cert.s_modp {
        return reject("witness sum reduction mismatch");
    }
    if cert.s_modp == 0 {
        return reject("witness sum vanishes mod p");
    }
    // 13 — the probes themselves
    let (bq, bq2) = probe_pair(&eval, cert.p, cert.m, cert.q)?;
    if bq != cert.b_mq_modp || bq2 != cert.b_mq2_modp {
        return reject("probe value mismatch");
    }
    // 14 — the contradiction: a true candidate would make this difference 0
    if submod(cert.b_mq2_modp, cert.b_mq_modp, cert.p) != cert.s_modp {
        return reject("probe difference does not match the witness sum");
    }
    Ok(())
}
