//! Cyclotomic polynomials Φ_d over the rationals.
//!
//! Computed by the recursive exact division
//! Φ_n = (z^n − 1) / ∏_{d | n, d < n} Φ_d, with a process-wide memo table
//! (shared reads, serialized insertion).

use crate::arith::divisors;
use crate::error::Result;
use crate::poly::Poly;
use crate::rat::Rat;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

static MEMO: OnceLock<RwLock<HashMap<u64, Poly>>> = OnceLock::new();

fn memo() -> &'static RwLock<HashMap<u64, Poly>> {
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The d-th cyclotomic polynomial (monic, integer coefficients).
pub fn cyclotomic(d: u64) -> Result<Poly> {
    assert!(d >= 1, "cyclotomic index must be >= 1");
    if let Some(p) = memo().read().expect("memo poisoned").get(&d) {
        return Ok(p.clone());
    }
    let phi = compute(d)?;
    memo()
        .write()
        .expect("memo poisoned")
        .entry(d)
        .or_insert_with(|| phi.clone());
    Ok(phi)
}

fn compute(d: u64) -> Result<Poly> {
    if d == 1 {
        return Ok(Poly::from_ints(&[-1, 1]));
    }
    // z^d - 1
    let mut c = vec![Rat::zero(); d as usize + 1];
    c[0] = -Rat::one();
    c[d as usize] = Rat::one();
    let mut num = Poly::from_coeffs(c);
    for e in divisors(d)? {
        if e < d {
            num = num.exact_div(&cyclotomic(e)?)?;
        }
    }
    Ok(num)
}
