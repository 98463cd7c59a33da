//! Divisor-sum transforms. For a weight sequence γ indexed from 1, the
//! series Σ γ_n z^n/(1-z^n) has ordinary coefficients b_m = Σ_{d|m} γ_d;
//! Möbius inversion recovers γ from b. The witness search feeds the
//! refutation pipeline: it finds a divisor sum of the *from-start part* of
//! γ that provably cannot vanish, so finitely many corrections can never
//! explain it away.

use crate::arith::{divisors, is_prime, moebius};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::recurrence::LinearRecurrence;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A weight sequence γ_1, γ_2, … — either eventually recurrent or finitely
/// supported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaSpec {
    Recurrence(LinearRecurrence),
    Support(BTreeMap<u64, Rat>),
}

impl GammaSpec {
    pub fn from_recurrence(rec: LinearRecurrence) -> Result<Self> {
        if rec.first_index() != 1 {
            return Err(Error::Invalid(
                "weight sequences are indexed from 1".into(),
            ));
        }
        Ok(GammaSpec::Recurrence(rec))
    }

    pub fn from_support(entries: BTreeMap<u64, Rat>) -> Result<Self> {
        if entries.keys().any(|&k| k == 0) {
            return Err(Error::Invalid(
                "weight sequences are indexed from 1".into(),
            ));
        }
        Ok(GammaSpec::Support(
            entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        ))
    }

    /// γ_1 .. γ_count.
    pub fn prefix(&self, count: usize) -> Vec<Rat> {
        match self {
            GammaSpec::Recurrence(rec) => {
                let padded = rec.expand_padded(count as u64);
                padded[1..=count].to_vec()
            }
            GammaSpec::Support(map) => {
                let mut out = vec![Rat::zero(); count];
                for (&k, v) in map.range(1..=count as u64) {
                    out[k as usize - 1] = v.clone();
                }
                out
            }
        }
    }

    pub fn term(&self, n: u64) -> Rat {
        assert!(n >= 1, "weight sequences are indexed from 1");
        match self {
            GammaSpec::Recurrence(rec) => rec
                .expand_padded(n)
                .pop()
                .expect("padded expansion reaches the requested index"),
            GammaSpec::Support(map) => map.get(&n).cloned().unwrap_or_else(Rat::zero),
        }
    }

    /// A recurrence presentation (finite support becomes a zero-tail
    /// relation).
    pub fn to_recurrence(&self) -> Result<LinearRecurrence> {
        match self {
            GammaSpec::Recurrence(rec) => Ok(rec.clone()),
            GammaSpec::Support(map) => {
                let top = map.keys().max().copied().unwrap_or(0);
                let start = top + 1;
                let mut initial = vec![Rat::zero(); start as usize];
                for (&k, v) in map {
                    initial[k as usize - 1] = v.clone();
                }
                LinearRecurrence::new(vec![Rat::from_integer(1.into())], initial, start, 1)
            }
        }
    }
}

/// b_m = Σ_{d|m} γ_d for m = 1..=len(gamma), with gamma[k] holding γ_{k+1}.
pub fn divisor_transform(gamma: &[Rat]) -> Vec<Rat> {
    let n = gamma.len();
    let mut b = vec![Rat::zero(); n];
    for d in 1..=n {
        if gamma[d - 1].is_zero() {
            continue;
        }
        let mut m = d;
        while m <= n {
            b[m - 1] += &gamma[d - 1];
            m += d;
        }
    }
    b
}

/// γ_n = Σ_{d|n} μ(n/d) b_d — the inverse of [`divisor_transform`].
pub fn moebius_invert(b: &[Rat]) -> Result<Vec<Rat>> {
    let n = b.len();
    let mut gamma = vec![Rat::zero(); n];
    for (m, slot) in gamma.iter_mut().enumerate().map(|(i, s)| (i as u64 + 1, s)) {
        let mut acc = Rat::zero();
        for d in divisors(m)? {
            let mu = moebius(m / d)?;
            match mu {
                1 => acc += &b[d as usize - 1],
                -1 => acc -= &b[d as usize - 1],
                _ => {}
            }
        }
        *slot = acc;
    }
    Ok(gamma)
}

/// Coefficients b_1..b_count of Σ γ_n z^n/(1-z^n).
pub fn lambert_coefficients(gamma: &GammaSpec, count: usize) -> Vec<Rat> {
    divisor_transform(&gamma.prefix(count))
}

/// Find the smallest m ≤ cap whose divisor sum over the from-start part η
/// of γ is nonzero. Returns (m, S) with S = Σ_{d|m} η_d ≠ 0.
///
/// Any finitely supported γ has η ≡ 0 and admits no witness
/// ([`Error::GammaZero`]); the same holds when the recurrent part collapses
/// to zero. When η ≢ 0 a witness exists at the first nonzero index of η,
/// so the cap only matters for degenerate presentations.
pub fn find_witness(gamma: &GammaSpec, cap: u64) -> Result<(u64, Rat)> {
    let eta = match gamma {
        GammaSpec::Support(_) => return Err(Error::GammaZero(cap)),
        GammaSpec::Recurrence(rec) => {
            let (v, _) = rec.normalize_from_start();
            if v.initial_terms().iter().all(Zero::is_zero) {
                return Err(Error::GammaZero(cap));
            }
            v
        }
    };
    let padded = eta.expand_padded(cap);
    for m in 1..=cap {
        let mut s = Rat::zero();
        for d in divisors(m)? {
            s += &padded[d as usize];
        }
        if !s.is_zero() {
            return Ok((m, s));
        }
    }
    Err(Error::SearchCapExceeded {
        cap,
        what: "divisor-sum witness".into(),
    })
}

/// Divisor-transform values probed at primes and prime squares, with a
/// constancy report for each probe family.
#[derive(Clone, Debug)]
pub struct PrimeScan {
    pub bound: u64,
    /// (p, b_p) for primes p ≤ bound.
    pub prime_values: Vec<(u64, Rat)>,
    /// Common value of all b_p, when they agree.
    pub prime_constant: Option<Rat>,
    /// Primes whose b_p deviates from the most common value; all scanned
    /// primes when no single value dominates.
    pub prime_violations: Vec<u64>,
    /// (p, b_{p²}) for primes p ≤ bound.
    pub square_values: Vec<(u64, Rat)>,
    pub square_constant: Option<Rat>,
    pub square_violations: Vec<u64>,
}

fn constancy(values: &[(u64, Rat)]) -> (Option<Rat>, Vec<u64>) {
    if values.is_empty() {
        return (None, Vec::new());
    }
    let mut counts: Vec<(Rat, usize)> = Vec::new();
    for (_, v) in values {
        match counts.iter_mut().find(|(w, _)| w == v) {
            Some((_, c)) => *c += 1,
            None => counts.push((v.clone(), 1)),
        }
    }
    if counts.len() == 1 {
        return (Some(counts[0].0.clone()), Vec::new());
    }
    let best = counts.iter().map(|(_, c)| *c).max().unwrap();
    let leaders: Vec<&Rat> = counts
        .iter()
        .filter(|(_, c)| *c == best)
        .map(|(v, _)| v)
        .collect();
    if leaders.len() > 1 {
        // no majority value: every probe is suspect
        return (None, values.iter().map(|(p, _)| *p).collect());
    }
    let mode = leaders[0].clone();
    let bad = values
        .iter()
        .filter(|(_, v)| *v != mode)
        .map(|(p, _)| *p)
        .collect();
    (None, bad)
}

/// Probe b at primes p ≤ bound and at their squares. A rational Lambert
/// series forces both probe families to stabilize, so scattered values are
/// cheap evidence of irrationality (the refutation pipeline turns that
/// evidence into a certificate).
pub fn prime_square_scan(gamma: &GammaSpec, bound: u64) -> Result<PrimeScan> {
    let primes: Vec<u64> = (2..=bound).filter(|&p| is_prime(p)).collect();
    let need = primes.last().map(|&p| p * p).unwrap_or(0);
    let prefix = gamma.prefix(need as usize);
    let b = divisor_transform(&prefix);
    let prime_values: Vec<(u64, Rat)> = primes
        .iter()
        .map(|&p| (p, b[p as usize - 1].clone()))
        .collect();
    let square_values: Vec<(u64, Rat)> = primes
        .iter()
        .map(|&p| (p, b[(p * p) as usize - 1].clone()))
        .collect();
    let (prime_constant, prime_violations) = constancy(&prime_values);
    let (square_constant, square_violations) = constancy(&square_values);
    Ok(PrimeScan {
        bound,
        prime_values,
        prime_constant,
        prime_violations,
        square_values,
        square_constant,
        square_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use proptest::prelude::*;

    fn fib_gamma() -> GammaSpec {
        GammaSpec::from_recurrence(
            LinearRecurrence::new(
                vec![rat_int(1), rat_int(1)],
                vec![rat_int(1), rat_int(1)],
                1,
                1,
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn ones_gamma() -> GammaSpec {
        GammaSpec::from_recurrence(
            LinearRecurrence::new(vec![rat_int(1)], vec![rat_int(1)], 1, 1).unwrap(),
        )
        .unwrap()
    }

    fn delta(n: u64) -> GammaSpec {
        GammaSpec::from_support([(n, rat_int(1))].into_iter().collect()).unwrap()
    }

    #[test]
    fn fibonacci_divisor_transform_head() {
        let b = lambert_coefficients(&fib_gamma(), 6);
        let want: Vec<Rat> = [1, 2, 3, 5, 6, 12].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(b, want);
    }

    #[test]
    fn ones_give_divisor_counts() {
        let b = lambert_coefficients(&ones_gamma(), 12);
        let want: Vec<Rat> = [1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]
            .iter()
            .map(|&x| rat_int(x))
            .collect();
        assert_eq!(b, want);
    }

    #[test]
    fn inversion_roundtrip_on_rationals() {
        let gamma: Vec<Rat> = vec![rat(1, 2), rat_int(-3), rat(7, 5), rat_int(0), rat(2, 3)];
        let b = divisor_transform(&gamma);
        assert_eq!(moebius_invert(&b).unwrap(), gamma);
    }

    #[test]
    fn delta_support_prefix_and_terms() {
        let d4 = delta(4);
        assert_eq!(
            d4.prefix(6),
            vec![
                rat_int(0),
                rat_int(0),
                rat_int(0),
                rat_int(1),
                rat_int(0),
                rat_int(0)
            ]
        );
        assert_eq!(d4.term(4), rat_int(1));
        assert_eq!(d4.term(5), rat_int(0));
        let b = lambert_coefficients(&d4, 12);
        // b_m = 1 exactly when 4 | m
        for (i, v) in b.iter().enumerate() {
            let m = i + 1;
            assert_eq!(*v, rat_int(i64::from(m % 4 == 0)));
        }
    }

    #[test]
    fn support_to_recurrence_expands_identically() {
        let d4 = delta(4);
        let rec = d4.to_recurrence().unwrap();
        assert_eq!(rec.expand(10), d4.prefix(10));
        let empty = GammaSpec::from_support(BTreeMap::new()).unwrap();
        let rec = empty.to_recurrence().unwrap();
        assert!(rec.expand(8).iter().all(Zero::is_zero));
    }

    #[test]
    fn witness_for_ones_is_one() {
        assert_eq!(find_witness(&ones_gamma(), 256).unwrap(), (1, rat_int(1)));
    }

    #[test]
    fn witness_for_fibonacci_is_one() {
        assert_eq!(find_witness(&fib_gamma(), 256).unwrap(), (1, rat_int(1)));
    }

    #[test]
    fn witness_skips_leading_zero() {
        // γ = 0, 1, 0, 1, … from the start: S(1) = 0, S(2) = 1
        let rec = LinearRecurrence::new(
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1)],
            1,
            1,
        )
        .unwrap();
        let g = GammaSpec::from_recurrence(rec).unwrap();
        assert_eq!(find_witness(&g, 256).unwrap(), (2, rat_int(1)));
    }

    #[test]
    fn finitely_supported_gamma_has_no_witness() {
        assert!(matches!(
            find_witness(&delta(1), 256),
            Err(Error::GammaZero(256))
        ));
        // a recurrence presentation that is secretly finite is caught too
        let rec = LinearRecurrence::new(
            vec![rat_int(1)],
            vec![rat_int(5), rat_int(0)],
            2,
            1,
        )
        .unwrap();
        let g = GammaSpec::from_recurrence(rec).unwrap();
        assert!(matches!(find_witness(&g, 64), Err(Error::GammaZero(64))));
    }

    #[test]
    fn witness_correction_does_not_leak_into_sum() {
        // γ = 9, 1, 1, 1, … : from-start part is all ones, correction at 1.
        // The witness sum uses η only: S(1) = 1, not 9.
        let rec = LinearRecurrence::new(
            vec![rat_int(1)],
            vec![rat_int(9), rat_int(1)],
            2,
            1,
        )
        .unwrap();
        let g = GammaSpec::from_recurrence(rec).unwrap();
        assert_eq!(find_witness(&g, 64).unwrap(), (1, rat_int(1)));
    }

    #[test]
    fn prime_scan_fibonacci_never_stabilizes() {
        let scan = prime_square_scan(&fib_gamma(), 20).unwrap();
        assert!(scan.prime_constant.is_none());
        let primes: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19];
        assert_eq!(scan.prime_violations, primes);
        // b_p = 1 + F_p
        assert_eq!(scan.prime_values[0], (2, rat_int(2)));
        assert_eq!(scan.prime_values[1], (3, rat_int(3)));
        assert_eq!(scan.prime_values[2], (5, rat_int(6)));
        assert_eq!(scan.prime_values[3], (7, rat_int(14)));
    }

    #[test]
    fn prime_scan_delta_one_is_constant() {
        let scan = prime_square_scan(&delta(1), 20).unwrap();
        assert_eq!(scan.prime_constant, Some(rat_int(1)));
        assert!(scan.prime_violations.is_empty());
        assert_eq!(scan.square_constant, Some(rat_int(1)));
        assert!(scan.square_violations.is_empty());
    }

    #[test]
    fn prime_scan_delta_four() {
        let scan = prime_square_scan(&delta(4), 20).unwrap();
        assert_eq!(scan.prime_constant, Some(rat_int(0)));
        assert!(scan.prime_violations.is_empty());
        // 4 divides 4 = 2², so the square probe at p = 2 sees the spike
        assert!(scan.square_constant.is_none());
        assert_eq!(scan.square_violations, vec![2]);
    }

    #[test]
    fn rejects_index_zero() {
        assert!(GammaSpec::from_support([(0, rat_int(1))].into_iter().collect()).is_err());
        let rec = LinearRecurrence::new(vec![rat_int(1)], vec![rat_int(1)], 0, 0).unwrap();
        assert!(GammaSpec::from_recurrence(rec).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn moebius_inverts_divisor_transform(
            nums in prop::collection::vec(-9i64..=9, 1..48),
        ) {
            let gamma: Vec<Rat> = nums.iter().map(|&x| rat_int(x)).collect();
            let b = divisor_transform(&gamma);
            prop_assert_eq!(moebius_invert(&b).unwrap(), gamma);
        }

        #[test]
        fn divisor_transform_inverts_moebius(
            nums in prop::collection::vec(-9i64..=9, 1..48),
        ) {
            let b: Vec<Rat> = nums.iter().map(|&x| rat_int(x)).collect();
            let gamma = moebius_invert(&b).unwrap();
            prop_assert_eq!(divisor_transform(&gamma), b);
        }

        #[test]
        fn witness_sum_matches_definition(
            c1 in -3i64..=3, h0 in -3i64..=3, h1 in -3i64..=3,
        ) {
            prop_assume!(c1 != 0);
            let rec = LinearRecurrence::new(
                vec![rat_int(c1), rat_int(1)],
                vec![rat_int(h0), rat_int(h1)],
                1, 1,
            ).unwrap();
            let g = GammaSpec::from_recurrence(rec.clone()).unwrap();
            match find_witness(&g, 256) {
                Ok((m, s)) => {
                    let (eta, _) = rec.normalize_from_start();
                    let padded = eta.expand_padded(m);
                    let mut acc = Rat::zero();
                    for d in divisors(m).unwrap() {
                        acc += &padded[d as usize];
                    }
                    prop_assert_eq!(acc, s.clone());
                    prop_assert!(!s.is_zero());
                }
                Err(Error::GammaZero(_)) => {
                    let (eta, _) = rec.normalize_from_start();
                    prop_assert!(eta.initial_terms().iter().all(Zero::is_zero));
                }
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            }
        }
    }
}
