//! Decomposition of a rational function whose coefficient support lives (up
//! to finitely many exceptions) on proper multiples: the series is split as
//!
//! `F(z) = P(z) + Σ_parts H_d(z^d)`
//!
//! with `P` a polynomial collecting the residue classes that die out, and
//! each part folding an infinite residue class mod M into a substitution
//! through a prime d dividing both the class and the modulus. When the
//! support provably escapes every such fold — a small prime sits in an
//! infinite class, or an infinite class is coprime to the modulus — the
//! decomposition fails with a concrete witness instead of a best effort.

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::recurrence::RationalFunction;
use crate::zeros::ratio_orders;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct ProperPowerDecomposition {
    /// Finite exceptional part (the eventually-zero residue classes).
    pub finite_part: Poly,
    /// For each prime d, the folded series H_d with `H_d(z^d)` summing the
    /// infinite classes attached to d. Sorted by d.
    pub parts: Vec<(u64, RationalFunction)>,
    /// The progression modulus the classes were formed against.
    pub modulus: u64,
}

/// Decompose `rf` as a finite part plus proper-power folds, or report how
/// the support violates the folding hypothesis. Primes up to
/// `prime_check_bound` are tested as potential witnesses first — a witness
/// always beats the coarser coprime-class report.
pub fn proper_power_decompose(
    rf: &RationalFunction,
    prime_check_bound: u64,
) -> Result<ProperPowerDecomposition> {
    let analysis = ratio_orders(rf.den())?;
    let m = analysis.modulus;
    let rec = rf.to_recurrence()?;
    let residues: Vec<u64> = (0..m).collect();
    let sections = rec.sections(m, &residues)?;

    // classify each residue class by its section: identically zero classes
    // and eventually-zero (finite) classes feed the polynomial part
    let mut infinite = vec![false; m as usize];
    let mut finite_terms: BTreeMap<u64, Rat> = BTreeMap::new();
    for (r, sec) in residues.iter().zip(&sections) {
        let window = sec.expand(sec.initial_terms().len());
        let start = sec.start_index() as usize;
        if window[start..].iter().all(Zero::is_zero) {
            for (k, v) in window.iter().enumerate().take(start) {
                if !v.is_zero() {
                    finite_terms.insert(m * k as u64 + r, v.clone());
                }
            }
        } else {
            infinite[*r as usize] = true;
        }
    }

    // witness scan: a prime in an infinite class that no fold can cover
    // (the fold d would divide both the class and the modulus, hence the
    // prime itself — impossible unless the prime divides the modulus)
    let mut scanned_to = 0u64;
    let mut chunk = 64u64.min(prime_check_bound);
    loop {
        let padded = rec.expand_padded(chunk);
        let mut p = scanned_to.max(2);
        while p <= chunk {
            if arith::is_prime(p) && m % p != 0 && infinite[(p % m) as usize] {
                if !padded[p as usize].is_zero() {
                    return Err(Error::HypothesisViolated { witness: p });
                }
            }
            p += 1;
        }
        scanned_to = chunk;
        if chunk == prime_check_bound {
            break;
        }
        chunk = (chunk * 4).min(prime_check_bound);
    }

    // an infinite class coprime to the modulus admits no fold at all
    for (r, &inf) in infinite.iter().enumerate() {
        if inf && arith::gcd_u64(r as u64, m) == 1 {
            return Err(Error::CoprimeSupportClass {
                class: r as u64,
                modulus: m,
                bound: prime_check_bound,
            });
        }
    }

    // fold every infinite class r through d = smallest prime factor of
    // gcd(r, M): z^r G̃_r(z^M) = w^{r/d} G̃_r(w^{M/d}) at w = z^d
    let mut folded: BTreeMap<u64, RationalFunction> = BTreeMap::new();
    for (r, &inf) in infinite.iter().enumerate() {
        if !inf {
            continue;
        }
        let r = r as u64;
        let g = arith::gcd_u64(r, m);
        let d = arith::factorize(g)?[0].0;
        let grf = sections[r as usize].to_rational()?;
        let sub = grf.substitute_power((m / d) as usize)?;
        let shifted = RationalFunction::new(
            sub.num().shift_up((r / d) as usize),
            sub.den().clone(),
        )?;
        let slot = folded
            .entry(d)
            .or_insert_with(RationalFunction::zero);
        *slot = slot.add(&shifted)?;
    }

    let mut fp_coeffs: Vec<(u64, Rat)> = finite_terms.into_iter().collect();
    let finite_part = match fp_coeffs.iter().map(|(i, _)| *i).max() {
        None => Poly::zero(),
        Some(top) => {
            let mut c = vec![Rat::zero(); top as usize + 1];
            for (i, v) in fp_coeffs.drain(..) {
                c[i as usize] = v;
            }
            Poly::from_coeffs(c)
        }
    };
    Ok(ProperPowerDecomposition {
        finite_part,
        parts: folded.into_iter().collect(),
        modulus: m,
    })
}

impl ProperPowerDecomposition {
    /// Reassemble `P(z) + Σ H_d(z^d)` — the decomposition's defining
    /// identity, used for verification.
    pub fn reassemble(&self) -> Result<RationalFunction> {
        let mut acc = RationalFunction::from_poly(self.finite_part.clone());
        for (d, h) in &self.parts {
            acc = acc.add(&h.substitute_power(*d as usize)?)?;
        }
        Ok(acc)
    }
}
