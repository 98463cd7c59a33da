//! Structure of the zero set of a linearly recurrent sequence.
//!
//! The zero set of the Taylor coefficients of a rational function decomposes
//! into finitely many full arithmetic progressions plus a finite sporadic
//! set. The progression modulus is governed by the multiplicative relations
//! among the denominator's roots: whenever two roots have ratio a primitive
//! d-th root of unity, zeros can recur with period d. This module computes
//!
//! * the set of such rotation orders d (through an exact resultant
//!   construction, no numerics involved), and their lcm M;
//! * which residue classes mod M are identically zero;
//! * the sporadic zeros up to a scan bound, together with a certified flag
//!   telling whether the sporadic list is provably complete.

use crate::error::{Error, Result};
use crate::modp::{self, PolyFp};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::recurrence::RationalFunction;
use crate::roots::{minimal_modulus_group, Isolation, RectC};
use crate::{arith, cyclotomic::cyclotomic};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Rotation orders among the roots of a denominator, and their lcm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioAnalysis {
    /// Orders d >= 2 such that some pair of distinct roots has ratio a
    /// primitive d-th root of unity.
    pub orders: BTreeSet<u64>,
    /// lcm of the orders (1 when there are none).
    pub modulus: u64,
    /// The ratio polynomial with the forced diagonal removed; its roots are
    /// exactly the ratios of distinct denominator roots.
    pub ratio_poly: Poly,
}

/// Upper bound on log2 of k! (sum of the bit lengths of 2..=k).
fn factorial_bits(k: usize) -> u64 {
    (2..=k as u64).map(|i| 64 - i.leading_zeros() as u64).sum()
}

fn max_coeff_bits(v: &[num_bigint::BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

/// Ratio polynomial of a squarefree `d` with `d(0) != 0`: the resultant
/// `Res_y(d(y), d(x·y))` in x, with the diagonal factor `(x-1)^{deg d}`
/// divided out exactly. Computed per 62-bit prime by scalar resultants at
/// x = 1..deg+1 followed by interpolation over F_p, then recombined by CRT
/// under a Hadamard-style coefficient bound, so the result is exact. The
/// outcome is a positive integer multiple of the monic-normalized ratio
/// polynomial, which is all the divisibility tests downstream need.
fn ratio_polynomial(dstar: &Poly) -> Result<Poly> {
    let n = dstar.deg0();
    let ints = modp::primitive_ints(dstar);
    let deg = n * n;
    // each coefficient of the 2n x 2n Sylvester determinant expands into
    // (2n)! products of entries bounded by the coefficient height
    let bound_bits = factorial_bits(2 * n) + 2 * n as u64 * max_coeff_bits(&ints) + 16;
    let mut acc = modp::CrtPoly::new(deg + 1);
    let mut below = 1 << 62;
    while acc.modulus_bits() <= bound_bits + 1 {
        let p = modp::crt_prime_below(below);
        below = p;
        if modp::int_mod(&ints[n], p) == 0 {
            continue; // degree must not drop mod p
        }
        let cp = modp::ints_mod(&ints, p);
        // nonzero evaluation points keep deg_y d(x·y) = n, so the Euclidean
        // scalar resultant matches the fixed-layout determinant
        let xs: Vec<u64> = (1..=deg as u64 + 1).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&t| {
                let mut scaled = cp.clone();
                let mut pw = 1u64;
                for c in &mut scaled {
                    *c = arith::mulmod(*c, pw, p);
                    pw = arith::mulmod(pw, t, p);
                }
                modp::resultant_fp(&cp, &scaled, p)
            })
            .collect();
        acc.push(&modp::interpolate_fp(&xs, &ys, p), p);
    }
    let full = modp::ints_to_poly(&acc.lift());
    // remove the forced diagonal: each root pairs with itself at ratio 1
    let mut reduced = full;
    let lin = Poly::from_ints(&[-1, 1]);
    for _ in 0..n {
        reduced = reduced.exact_div(&lin)?;
    }
    Ok(reduced)
}

/// Rotation resultant `G_d(z) = Res_x(Φ_d(x), den(x·z))`: its roots are
/// `μ/ζ` over roots μ of `den` and primitive d-th roots of unity ζ. The gcd
/// with `den` therefore picks out the roots of `den` whose rotation by some
/// primitive d-th root of unity is again a root. Computed modulo primes
/// p ≡ 1 (mod d), where Φ_d splits and the resultant is the product of the
/// rotated images `den(ω^j·z)` over exponents j coprime to d; the images are
/// CRT-combined into the exact integer polynomial (up to the positive
/// constant from clearing denominators, which no caller observes).
pub(crate) fn rotation_resultant(d: u64, den: &Poly) -> Result<Poly> {
    let n = den.deg0();
    let phi_deg = arith::euler_phi(d)? as usize;
    let ints = modp::primitive_ints(den);
    let deg = phi_deg * n;
    // height of a product of φ(d) polynomials of degree n grows by at most
    // a factor (n+1)·height per factor
    let h = max_coeff_bits(&ints);
    let bound_bits = phi_deg as u64 * (h + 64 - (n as u64 + 1).leading_zeros() as u64) + 16;
    let mut acc = modp::CrtPoly::new(deg + 1);
    let mut below = 1 << 62;
    while acc.modulus_bits() <= bound_bits + 1 {
        let p = modp::crt_prime_in_progression(d, below);
        below = p;
        if modp::int_mod(&ints[n], p) == 0 {
            continue;
        }
        let cp = modp::ints_mod(&ints, p);
        let w = modp::root_of_order(d, p)?;
        let mut g = vec![1u64];
        for j in 1..=d {
            if arith::gcd_u64(j, d) != 1 {
                continue;
            }
            let wj = arith::powmod(w, j, p);
            let mut factor = cp.clone();
            let mut pw = 1u64;
            for c in &mut factor {
                *c = arith::mulmod(*c, pw, p);
                pw = arith::mulmod(pw, wj, p);
            }
            g = modp::poly_mul_fp(&g, &factor, p);
        }
        acc.push(&g, p);
    }
    Ok(modp::ints_to_poly(&acc.lift()))
}

/// Rotation orders of the roots of `den` (which must not vanish at 0).
pub fn ratio_orders(den: &Poly) -> Result<RatioAnalysis> {
    if den.is_zero() || den.coeff(0).is_zero() {
        return Err(Error::DenominatorVanishesAtZero);
    }
    let (_, dstar) = den.gcd_squarefree();
    let m = dstar.deg0();
    if m <= 1 {
        return Ok(RatioAnalysis {
            orders: BTreeSet::new(),
            modulus: 1,
            ratio_poly: Poly::one(),
        });
    }
    let rp = ratio_polynomial(&dstar)?;
    let deg = rp.deg0();
    let mut orders = BTreeSet::new();
    // mod-p divisibility is a sound prefilter for exact divisibility by a
    // monic integer polynomial (the exact quotient's coefficients live in
    // the ring generated by the dividend's, so reduction commutes)
    const FILTER_P: u64 = 1_000_003;
    let rp_modp = PolyFp::from_poly(&rp, FILTER_P).ok();
    let mut d = 2u64;
    loop {
        let phi_deg = arith::euler_phi(d)? as usize;
        if phi_deg <= deg {
            let phi = cyclotomic(d)?;
            let cheap_pass = match &rp_modp {
                Some(rpp) => {
                    let phip = PolyFp::from_poly(&phi, FILTER_P)?;
                    rpp.divisible_by_monic(&phip)
                }
                None => true,
            };
            if cheap_pass && phi.divides(&rp) {
                orders.insert(d);
            }
        }
        // φ(d) >= sqrt(d/2), so beyond 2(deg+1)^2 no order can qualify
        if d > 2 * ((deg as u64 + 1) * (deg as u64 + 1)) {
            break;
        }
        d += 1;
    }
    let mut modulus = 1u64;
    for &o in &orders {
        modulus = arith::lcm_u64(modulus, o)?;
    }
    Ok(RatioAnalysis {
        orders,
        modulus,
        ratio_poly: rp,
    })
}

/// Description of the zero set of the coefficient sequence of a rational
/// function: full residue classes mod `modulus` that vanish identically,
/// plus the sporadic zeros found up to `checked_bound`. `sporadic_complete`
/// is set only when a certified growth argument proves no sporadic zero can
/// exist beyond the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSetDescription {
    pub sporadic: Vec<u64>,
    pub sporadic_complete: bool,
    pub modulus: u64,
    pub zero_residues: Vec<u64>,
    pub checked_bound: u64,
}

/// Smallest `n*` (at most `n_limit`) such that the coefficient sequence of
/// `rf` is provably nonzero for every `n >= n*`, or `None` when the
/// certificate's preconditions cannot be established: the certificate needs
/// a squarefree denominator with a unique (hence simple, hence real) root of
/// minimal modulus and enough precision to separate the dominant term.
fn crossover_index(rf: &RationalFunction, max_bits: u32, n_limit: u64) -> Option<u64> {
    let den = rf.den();
    if den.deg0() == 0 {
        return None; // polynomial: the tail is identically zero
    }
    let (g, _) = den.gcd_squarefree();
    if g.deg0() > 0 {
        return None; // repeated poles: simple-pole expansion unavailable
    }
    let mut iso = Isolation::isolate(den, 64).ok()?;
    let group = minimal_modulus_group(&mut iso, max_bits).ok()?;
    if group.len() != 1 {
        return None;
    }
    let idx0 = group[0];
    let k = iso.len();
    // num = q·den + rem; coefficients are u_n = q_n + Σ_i A_i λ_i^n with
    // A_i = -rem(z_i) / (z_i den'(z_i)) and λ_i = 1/z_i
    let (q, rem) = rf.num().divrem(den).ok()?;
    let dprime = den.derivative();
    loop {
        let bits = iso.bits;
        let mut a_lo0 = Rat::zero();
        let mut a_hi: Vec<Rat> = Vec::with_capacity(k);
        let mut lam_lo0 = Rat::zero();
        let mut lam_hi: Vec<Rat> = Vec::with_capacity(k);
        let mut ok = true;
        for i in 0..k {
            let boxi = RectC::from_disc(&iso.discs[i]);
            let denom = boxi.eval_poly(&dprime).mul(&boxi);
            let a = match boxi.eval_poly(&rem).div(&denom) {
                Ok(v) => v,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            let (alo, ahi) = a.abs_bounds(bits + 8);
            let (zlo, zhi) = iso.modulus_interval(i);
            if !zlo.is_positive() {
                ok = false;
                break;
            }
            // λ = 1/z: bounds invert and swap
            let llo = Rat::one() / &zhi;
            let lhi = Rat::one() / &zlo;
            if i == idx0 {
                a_lo0 = alo;
                lam_lo0 = llo;
                a_hi.push(Rat::zero()); // placeholder, unused for the dominant index
                lam_hi.push(Rat::zero());
            } else {
                a_hi.push(ahi);
                lam_hi.push(lhi);
            }
        }
        if ok && a_lo0.is_positive() {
            let sep = (0..k)
                .filter(|&i| i != idx0)
                .all(|i| lam_hi[i] < lam_lo0);
            if sep {
                // search for the crossover point; the ratio of each tail term
                // to the dominant one is < 1, so once the inequality holds it
                // holds for every later n
                let n_min = match q.degree() {
                    None => 0u64,
                    Some(dq) => dq as u64 + 1,
                };
                let mut lhs = &a_lo0 * pow_rat(&lam_lo0, n_min);
                let mut rhs_terms: Vec<Rat> = (0..k)
                    .filter(|&i| i != idx0)
                    .map(|i| &a_hi[i] * pow_rat(&lam_hi[i], n_min))
                    .collect();
                let ratios: Vec<Rat> = (0..k)
                    .filter(|&i| i != idx0)
                    .map(|i| lam_hi[i].clone())
                    .collect();
                let mut n = n_min;
                loop {
                    let rhs: Rat = rhs_terms.iter().fold(Rat::zero(), |s, t| s + t);
                    if lhs > rhs {
                        return Some(n);
                    }
                    if n >= n_limit {
                        return None;
                    }
                    n += 1;
                    lhs *= &lam_lo0;
                    for (t, r) in rhs_terms.iter_mut().zip(&ratios) {
                        *t *= r;
                    }
                }
            }
        }
        let next = bits.checked_mul(2)?;
        if next > max_bits {
            return None;
        }
        iso.refine_to(next).ok()?;
    }
}

fn pow_rat(x: &Rat, n: u64) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Zero-set description of the coefficients of `rf`, scanning indices
/// `0..=bound`. `max_bits` caps the precision used by the completeness
/// certificate; completeness degrades to `false` (never to a wrong answer)
/// when certification fails.
pub fn zero_set(rf: &RationalFunction, bound: u64, max_bits: u32) -> Result<ZeroSetDescription> {
    let analysis = ratio_orders(rf.den())?;
    let m = analysis.modulus;
    if bound < m {
        return Err(Error::BoundTooSmall(format!(
            "scan bound {bound} is below the progression modulus {m}"
        )));
    }
    let rec = rf.to_recurrence()?;

    // identify identically-zero residue classes through their sections
    let residues: Vec<u64> = (0..m).collect();
    let sections = rec.sections(m, &residues)?;
    let mut zero_residues = Vec::new();
    for (r, sec) in residues.iter().zip(&sections) {
        let window = sec.expand(sec.initial_terms().len());
        if window.iter().all(Zero::is_zero) {
            zero_residues.push(*r);
        }
    }

    // sporadic zeros: zeros up to the bound outside the zero classes
    let padded = rec.expand_padded(bound);
    let mut sporadic = Vec::new();
    for (n, v) in padded.iter().enumerate() {
        let n = n as u64;
        if v.is_zero() && !zero_residues.contains(&(n % m)) {
            sporadic.push(n);
        }
    }

    // completeness: prove there is no zero beyond the bound outside the
    // zero classes
    let live_classes: Vec<u64> = (0..m).filter(|r| !zero_residues.contains(r)).collect();
    let sporadic_complete = if live_classes.is_empty() {
        true // the whole sequence is covered by zero classes
    } else if zero_residues.is_empty() {
        // global route: one certificate for the sequence itself
        match crossover_index(rf, max_bits, bound + 1) {
            Some(nstar) => nstar <= bound + 1,
            None => per_class_complete(&rec, m, &live_classes, bound, max_bits),
        }
    } else {
        per_class_complete(&rec, m, &live_classes, bound, max_bits)
    };

    Ok(ZeroSetDescription {
        sporadic,
        sporadic_complete,
        modulus: m,
        zero_residues,
        checked_bound: bound,
    })
}

/// Certify every live residue class separately through its section. Classes
/// are only attempted when the modulus is small; failure of any class means
/// the sporadic list cannot be declared complete.
fn per_class_complete(
    rec: &crate::recurrence::LinearRecurrence,
    m: u64,
    live_classes: &[u64],
    bound: u64,
    max_bits: u32,
) -> bool {
    if m > 24 {
        return false;
    }
    let Ok(sections) = rec.sections(m, live_classes) else {
        return false;
    };
    for (&r, sec) in live_classes.iter().zip(&sections) {
        let Ok(frf) = sec.to_rational() else {
            return false;
        };
        // class index k corresponds to sequence index m·k + r; indices past
        // the scan bound are k > (bound - r)/m
        let k_limit = (bound.saturating_sub(r)) / m + 1;
        match crossover_index(&frf, max_bits, k_limit) {
            Some(kstar) if kstar <= k_limit => {}
            _ => return false,
        }
    }
    true
}
