//! The acceptance gate for the whole library: nine end-to-end criteria
//! covering the worked two-progression example, the zero-set/dominant-root
//! property suite, transform exactness, refutation round trips, consistency
//! guards, non-stabilization evidence, Pisano cross-checks, certificate
//! fuzzing, and recurrence/rational round trips.
//!
//! Each criterion prints exactly one line:
//!
//! ```text
//! [acceptance] criterion N: PASS — detail
//! ```
//!
//! and the suite fails if any criterion fails. Criteria run inside
//! `catch_unwind` so one failure cannot silence the others.

use lrseq::arith::{divisors, factorize};
use lrseq::cyclotomic::cyclotomic;
use lrseq::decompose::proper_power_decompose;
use lrseq::dominant::dominant_analysis;
use lrseq::error::Error;
use lrseq::expr::parse_rational_function;
use lrseq::lambert::{divisor_transform, lambert_coefficients, moebius_invert, GammaSpec};
use lrseq::modp::{matrix_order, matrix_order_brute, reduce_recurrence};
use lrseq::poly::Poly;
use lrseq::rat::{rat, rat_int, Rat};
use lrseq::recurrence::{berlekamp_massey, LinearRecurrence, RationalFunction};
use lrseq::refute::{refute, verify_certificate, RefutationCertificate, RefuteOptions};
use lrseq::zeros::zero_set;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Criterion = fn() -> Result<String, String>;

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, Criterion); 9] = [
        (1, criterion_1_two_progression_example),
        (2, criterion_2_progressions_imply_relations),
        (3, criterion_3_transform_exactness),
        (4, criterion_4_refutation_roundtrips),
        (5, criterion_5_no_false_positives),
        (6, criterion_6_orders_do_not_stabilize),
        (7, criterion_7_pisano_crosscheck),
        (8, criterion_8_certificate_fuzz),
        (9, criterion_9_recurrence_roundtrip),
    ];
    let mut lines = Vec::new();
    let mut failures = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panicked: {msg}"))
        });
        let line = match outcome {
            Ok(detail) => format!("[acceptance] criterion {n}: PASS — {detail}"),
            Err(detail) => {
                failures += 1;
                format!("[acceptance] criterion {n}: FAIL — {detail}")
            }
        };
        println!("{line}");
        lines.push(line);
    }
    assert!(
        failures == 0,
        "{failures} acceptance criteria failed:\n{}",
        lines.join("\n")
    );
}

fn fail(msg: impl Into<String>) -> Result<String, String> {
    Err(msg.into())
}

// ---- 1: the two-progression worked example --------------------------------

fn criterion_1_two_progression_example() -> Result<String, String> {
    let t0 = Instant::now();
    let f = parse_rational_function("z^4/(1-z^2)+z^9/(1-z^3)")
        .map_err(|e| format!("parse failed: {e}"))?;

    let desc = zero_set(&f, 200, 4096).map_err(|e| format!("zero_set failed: {e}"))?;
    if desc.modulus != 6 || desc.zero_residues != vec![1, 5] {
        return fail(format!(
            "expected progressions {{1,5}} mod 6, got {:?} mod {}",
            desc.zero_residues, desc.modulus
        ));
    }
    if desc.sporadic != vec![0, 2, 3] || !desc.sporadic_complete {
        return fail(format!(
            "expected complete sporadic set {{0,2,3}}, got {:?} (complete: {})",
            desc.sporadic, desc.sporadic_complete
        ));
    }

    let dec = proper_power_decompose(&f, 1000).map_err(|e| format!("decompose failed: {e}"))?;
    let ds: Vec<u64> = dec.parts.iter().map(|(d, _)| *d).collect();
    if ds != vec![2, 3] {
        return fail(format!("expected parts with d in {{2,3}}, got {ds:?}"));
    }
    let back = dec
        .reassemble()
        .map_err(|e| format!("reassembly failed: {e}"))?;
    if back.expand(500) != f.expand(500) {
        return fail("re-expansion of P + sum H_d(z^d) diverges from F within 500 terms");
    }

    let elapsed = t0.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        return fail(format!("pipeline took {elapsed:.2?}, limit is 5 s"));
    }
    Ok(format!(
        "zeros {{1,5}} mod 6 + sporadic {{0,2,3}}, two parts d in {{2,3}}, 500-term reassembly exact, in {elapsed:.2?}"
    ))
}

// ---- 2: progressions of zeros force unit-ratio dominant roots -------------

fn criterion_2_progressions_imply_relations() -> Result<String, String> {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let non_cyclotomic: [&[i64]; 5] = [
        &[1, -2],
        &[1, 3],
        &[1, -1, -1],
        &[1, 1, -1],
        &[1, -2, 2],
    ];

    let mut with_progressions = 0;
    for instance in 0..50 {
        let rf = loop {
            let n_cyc = rng.gen_range(0..=3usize);
            let n_other = rng.gen_range(0..=2usize);
            let (n_cyc, n_other) = if n_cyc + n_other == 0 {
                (1, 0)
            } else {
                (n_cyc, n_other)
            };
            let mut den = Poly::one();
            for _ in 0..n_cyc {
                den = &den * &cyclotomic(rng.gen_range(1..=8)).expect("small cyclotomics");
            }
            for _ in 0..n_other {
                let pick = non_cyclotomic[rng.gen_range(0..non_cyclotomic.len())];
                den = &den * &Poly::from_ints(pick);
            }
            let deg = rng.gen_range(0..=4usize);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
            if coeffs.iter().all(|&c| c == 0) {
                coeffs[0] = 1;
            }
            let rf = RationalFunction::new(Poly::from_ints(&coeffs), den)
                .expect("denominators are units at zero");
            if !rf.is_polynomial() {
                break rf;
            }
        };

        let desc = zero_set(&rf, 300, 4096)
            .map_err(|e| format!("instance {instance}: zero_set failed: {e}"))?;
        if desc.zero_residues.is_empty() {
            continue;
        }
        with_progressions += 1;
        let dom = dominant_analysis(&rf, 4096)
            .map_err(|e| format!("instance {instance}: dominant_analysis failed: {e}"))?;
        if dom.relation_orders.is_empty() {
            return fail(format!(
                "instance {instance} has zero progressions {:?} mod {} but no unit-ratio relations among its dominant roots",
                desc.zero_residues, desc.modulus
            ));
        }
    }

    let elapsed = t0.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        return fail(format!("suite took {elapsed:.2?}, limit is 60 s"));
    }
    Ok(format!(
        "50 instances, {with_progressions} with zero progressions, every one has unit-ratio dominant relations, in {elapsed:.2?}"
    ))
}

// ---- 3: divisor transform and Möbius inversion are exact ------------------

fn criterion_3_transform_exactness() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for case in 0..1000 {
        let gamma: Vec<Rat> = (0..256)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        let b = divisor_transform(&gamma);
        let back = moebius_invert(&b).map_err(|e| format!("case {case}: inversion failed: {e}"))?;
        if back != gamma {
            return fail(format!("case {case}: inversion did not recover the prefix"));
        }
    }

    let fib = GammaSpec::from_recurrence(
        LinearRecurrence::new(vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(1)], 1, 1)
            .unwrap(),
    )
    .unwrap();
    let gamma = fib.prefix(64);
    let b = lambert_coefficients(&fib, 64);
    if b[..6] != [1, 2, 3, 5, 6, 12].map(rat_int) {
        return fail(format!("Fibonacci divisor sums start {:?}", &b[..6]));
    }
    for m in 1..=64usize {
        let mut oracle = Rat::from_integer(0.into());
        for d in 1..=m {
            if m % d == 0 {
                oracle += &gamma[d - 1];
            }
        }
        if oracle != b[m - 1] {
            return fail(format!("Fibonacci divisor sum at {m} disagrees with the brute-force oracle"));
        }
    }
    Ok("1000 random 256-prefixes invert exactly; 64 Fibonacci divisor sums match the brute-force oracle".into())
}

// ---- 4: refutation certificates round-trip --------------------------------

fn all_ones_gamma() -> GammaSpec {
    GammaSpec::from_recurrence(
        LinearRecurrence::new(vec![rat_int(1)], vec![rat_int(1)], 1, 1).unwrap(),
    )
    .unwrap()
}

fn fibonacci_gamma() -> GammaSpec {
    GammaSpec::from_recurrence(
        LinearRecurrence::new(vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(1)], 1, 1)
            .unwrap(),
    )
    .unwrap()
}

fn bm_candidate(gamma: &GammaSpec, len: usize) -> LinearRecurrence {
    berlekamp_massey(&lambert_coefficients(gamma, len), 1)
        .expect("exact arithmetic cannot fail here")
        .expect("divisor transforms of nonzero weights are nonzero")
}

fn criterion_4_refutation_roundtrips() -> Result<String, String> {
    let mut runs = Vec::new();
    let mut final_ones_cert: Option<RefutationCertificate> = None;
    for (name, gamma) in [("all-ones", all_ones_gamma()), ("Fibonacci", fibonacci_gamma())] {
        for len in [16usize, 32, 64] {
            let t0 = Instant::now();
            let cand = bm_candidate(&gamma, len);
            let cert = refute(&gamma, &cand, &RefuteOptions::default())
                .map_err(|e| format!("{name} L={len}: refute failed: {e}"))?;
            verify_certificate(&cert, &gamma, &cand)
                .map_err(|e| format!("{name} L={len}: verifier rejected a fresh certificate: {e}"))?;
            let elapsed = t0.elapsed();
            if elapsed.as_secs_f64() >= 10.0 {
                return fail(format!("{name} L={len} took {elapsed:.2?}, limit is 10 s"));
            }
            runs.push(format!("{name} L={len} {elapsed:.0?}"));
            if name == "all-ones" && len == 64 {
                final_ones_cert = Some(cert);
            }
        }
    }

    // for γ ≡ 1 the probes are divisor counts; re-derive them by enumeration
    let cert = final_ones_cert.expect("the all-ones L=64 run just succeeded");
    if cert.m != 1 {
        return fail(format!("all-ones witness index should be 1, got {}", cert.m));
    }
    let d_q = divisors(cert.q).map_err(|e| e.to_string())?.len() as u64;
    // q² can exceed u64 (q is only bounded by the progression search), so
    // enumerate its divisors in u128 from q's independently computed
    // factorization with doubled exponents
    let fac_q = factorize(cert.q).map_err(|e| e.to_string())?;
    let mut div_q2: Vec<u128> = vec![1];
    for &(p, a) in &fac_q {
        let mut next = Vec::with_capacity(div_q2.len() * (2 * a as usize + 1));
        for d in &div_q2 {
            let mut pk = 1u128;
            for _ in 0..=2 * a {
                next.push(d * pk);
                pk *= p as u128;
            }
        }
        div_q2 = next;
    }
    let d_q2 = div_q2.len() as u64;
    if d_q % cert.p != cert.b_mq_modp || d_q2 % cert.p != cert.b_mq2_modp {
        return fail(format!(
            "certificate probes ({}, {}) disagree with enumerated divisor counts d(q)={d_q}, d(q²)={d_q2} mod {}",
            cert.b_mq_modp, cert.b_mq2_modp, cert.p
        ));
    }
    if (d_q2 - d_q) % cert.p != 1 % cert.p {
        return fail(format!("d(q²) − d(q) = {} mod {}, expected 1", (d_q2 - d_q) % cert.p, cert.p));
    }
    Ok(format!(
        "six certificates accepted ({}); all-ones difference re-derived as d(q²) − d(q) = 1 mod p by divisor enumeration",
        runs.join(", ")
    ))
}

// ---- 5: no false positives on rational Lambert series ---------------------

fn criterion_5_no_false_positives() -> Result<String, String> {
    let delta1 = GammaSpec::from_support([(1, rat_int(1))].into_iter().collect()).unwrap();
    // δ₁'s divisor transform is identically 1, and this IS its recurrence
    let truth = LinearRecurrence::new(vec![rat_int(1)], vec![rat_int(1)], 1, 1).unwrap();
    let b = lambert_coefficients(&delta1, 64);
    if truth.expand_padded(64)[1..] != b[..] {
        return fail("the claimed true recurrence does not generate the transform");
    }
    match refute(&delta1, &truth, &RefuteOptions::default()) {
        Err(Error::NotRefuted(reason)) => Ok(format!(
            "refute declines the true recurrence of δ₁'s transform: \"{reason}\""
        )),
        Ok(_) => fail("refute produced a certificate against a TRUE recurrence"),
        Err(e) => fail(format!("expected a 'not refuted' outcome, got: {e}")),
    }
}

// ---- 6: candidate orders do not stabilize for Fibonacci weights ------------

fn criterion_6_orders_do_not_stabilize() -> Result<String, String> {
    let gamma = fibonacci_gamma();
    let orders: Vec<usize> = [32usize, 64, 128]
        .iter()
        .map(|&len| bm_candidate(&gamma, len).order())
        .collect();
    if orders.windows(2).all(|w| w[0] < w[1]) {
        Ok(format!(
            "minimal recurrence orders at L = 32, 64, 128 are {orders:?}, strictly increasing"
        ))
    } else {
        fail(format!("orders {orders:?} are not strictly increasing"))
    }
}

// ---- 7: Pisano periods -----------------------------------------------------

fn criterion_7_pisano_crosscheck() -> Result<String, String> {
    let fib = LinearRecurrence::new(
        vec![rat_int(1), rat_int(1)],
        vec![rat_int(1), rat_int(1)],
        1,
        1,
    )
    .unwrap();
    for (p, want) in [(2u64, 3u64), (3, 8), (5, 20), (7, 16)] {
        let (eta, _) = reduce_recurrence(&fib, p).map_err(|e| e.to_string())?;
        let fast = matrix_order(&eta.companion()).map_err(|e| e.to_string())?;
        let brute = matrix_order_brute(&eta.companion(), 1_000_000);
        if fast != want || brute != Some(want) {
            return fail(format!(
                "Pisano period mod {p}: descent gives {fast}, iteration gives {brute:?}, expected {want}"
            ));
        }
    }
    Ok("companion orders mod 2,3,5,7 are 3,8,20,16 by both the descent and the iteration oracle".into())
}

// ---- 8: certificate fuzz ----------------------------------------------------

fn criterion_8_certificate_fuzz() -> Result<String, String> {
    let gamma = all_ones_gamma();
    let cand = bm_candidate(&gamma, 16);
    let cert = refute(&gamma, &cand, &RefuteOptions::default())
        .map_err(|e| format!("setup refutation failed: {e}"))?;
    verify_certificate(&cert, &gamma, &cand).map_err(|e| format!("setup verify failed: {e}"))?;

    type Mutation = (&'static str, Box<dyn Fn(&mut RefutationCertificate)>, &'static str);
    let mutations: Vec<Mutation> = vec![
        (
            "fingerprint flipped",
            Box::new(|c| {
                let mut chars: Vec<char> = c.candidate_fingerprint.chars().collect();
                chars[0] = if chars[0] == '0' { '1' } else { '0' };
                c.candidate_fingerprint = chars.into_iter().collect();
            }),
            "candidate fingerprint mismatch",
        ),
        ("m incremented", Box::new(|c| c.m += 1), "witness sum mismatch"),
        ("m zeroed", Box::new(|c| c.m = 0), "certificate values out of range"),
        ("S replaced", Box::new(|c| c.s = rat_int(7)), "witness sum mismatch"),
        (
            "S zeroed",
            Box::new(|c| c.s = rat_int(0)),
            "p is not a good prime for the protected values",
        ),
        ("p doubled", Box::new(|c| c.p *= 2), "p is not prime"),
        ("p squared", Box::new(|c| c.p *= c.p), "p is not prime"),
        (
            "T_gamma incremented",
            Box::new(|c| c.t_gamma += 1),
            "gamma matrix order mismatch",
        ),
        (
            "T_gamma doubled",
            Box::new(|c| c.t_gamma *= 2),
            "gamma matrix order mismatch",
        ),
        (
            "T_gamma zeroed",
            Box::new(|c| c.t_gamma = 0),
            "certificate values out of range",
        ),
        ("N0 shifted", Box::new(|c| c.n0 += 1), "eventual period mismatch"),
        ("T_b incremented", Box::new(|c| c.t_b += 1), "eventual period mismatch"),
        ("T_b doubled", Box::new(|c| c.t_b *= 2), "eventual period mismatch"),
        ("T incremented", Box::new(|c| c.t += 1), "lcm mismatch"),
        ("T doubled", Box::new(|c| c.t *= 2), "lcm mismatch"),
        ("q incremented", Box::new(|c| c.q += 1), "q is not prime"),
        ("q tripled", Box::new(|c| c.q *= 3), "q is not prime"),
        (
            "b(mq) shifted",
            Box::new(|c| c.b_mq_modp = (c.b_mq_modp + 1) % c.p),
            "probe value mismatch",
        ),
        (
            "b(mq²) shifted",
            Box::new(|c| c.b_mq2_modp = (c.b_mq2_modp + 1) % c.p),
            "probe value mismatch",
        ),
        (
            "S̄ shifted",
            Box::new(|c| c.s_modp = (c.s_modp + 1) % c.p),
            "witness sum reduction mismatch",
        ),
    ];
    if mutations.len() != 20 {
        return fail(format!("expected a 20-mutation suite, built {}", mutations.len()));
    }

    for (label, mutate, expected_reason) in &mutations {
        let mut bad = cert.clone();
        mutate(&mut bad);
        match verify_certificate(&bad, &gamma, &cand) {
            Ok(()) => return fail(format!("mutation \"{label}\" was accepted")),
            Err(Error::CertificateRejected(reason)) => {
                if !reason.contains(expected_reason) {
                    return fail(format!(
                        "mutation \"{label}\" rejected as {reason:?}, expected {expected_reason:?}"
                    ));
                }
            }
            Err(other) => {
                return fail(format!(
                    "mutation \"{label}\" produced a non-rejection error: {other}"
                ))
            }
        }
    }
    Ok("all 20 single-field mutations rejected, each with its named reason".into())
}

// ---- 9: recurrence ↔ rational function round trip --------------------------

fn criterion_9_recurrence_roundtrip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for case in 0..100 {
        let order = rng.gen_range(1..=5usize);
        let mut coeffs: Vec<Rat> = (0..order)
            .map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            .collect();
        if coeffs[order - 1] == rat_int(0) {
            coeffs[order - 1] = rat_int(1);
        }
        let first_index = rng.gen_range(0..=1u64);
        let start_index = first_index + rng.gen_range(0..=2u64);
        let initial_len = (start_index + order as u64 - first_index) as usize;
        let initial: Vec<Rat> = (0..initial_len)
            .map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            .collect();
        let rec = LinearRecurrence::new(coeffs, initial, start_index, first_index)
            .map_err(|e| format!("case {case}: construction failed: {e}"))?;

        let rf = rec
            .to_rational()
            .map_err(|e| format!("case {case}: to_rational failed: {e}"))?;
        let back = rf
            .to_recurrence()
            .map_err(|e| format!("case {case}: from_rational failed: {e}"))?;

        let want = rec.expand_padded(199);
        if rf.expand(200) != want || back.expand_padded(199) != want {
            return fail(format!("case {case}: 200-term expansions disagree"));
        }
    }
    Ok("100 random recurrences of order ≤ 5 survive the round trip with 200-term exact agreement".into())
}
