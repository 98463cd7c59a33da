//! Analysis of the dominant poles of a rational function: the certified
//! group of denominator roots of minimal modulus, and which root-of-unity
//! rotation orders act on that group.
//!
//! The group is computed from certified modulus intervals: membership means
//! the root's interval reaches down to the smallest interval ceiling, and
//! the group is accepted once it separates strictly from every other root.
//! Rotation attribution is exact: for each candidate order d, the roots
//! related to another root by a primitive d-th root of unity are cut out as
//! `gcd(den, G_d)` with `G_d(z) = Res_x(Φ_d(x), den(x·z))`, and each such
//! root is matched to its certified disc — rotation preserves modulus, so a
//! participating root's partner lies in the group automatically.

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::recurrence::RationalFunction;
use crate::roots::{minimal_modulus_group, Isolation};
use crate::zeros::{ratio_orders, rotation_resultant};

#[derive(Clone, Debug)]
pub struct DominantAnalysis {
    /// Number of certified-dominant poles (distinct roots of minimal modulus,
    /// up to the precision guarantee below).
    pub group_size: usize,
    /// Orders d >= 2 such that a dominant root is carried to another root of
    /// the denominator by a primitive d-th root of unity.
    pub relation_orders: Vec<u64>,
    /// Certified band containing the modulus of every group member.
    pub modulus_lo: Rat,
    pub modulus_hi: Rat,
    /// Precision (disc radius <= 2^-bits) at which the analysis settled.
    pub bits: u32,
}

pub fn dominant_analysis(rf: &RationalFunction, max_bits: u32) -> Result<DominantAnalysis> {
    let den = rf.den();
    if den.deg0() == 0 {
        return Err(Error::Invalid(
            "dominant-pole analysis needs a nonconstant denominator".into(),
        ));
    }
    let candidates = ratio_orders(den)?.orders;
    let mut iso = Isolation::isolate(den, 64)?;
    let group = minimal_modulus_group(&mut iso, max_bits)?;
    let mut relation_orders = Vec::new();
    for &d in &candidates {
        let gd = rotation_resultant(d, den)?;
        let cd = crate::modp::poly_gcd_int(den, &gd)?;
        if cd.deg0() == 0 {
            continue;
        }
        let mut cd_iso = Isolation::isolate(&cd, iso.bits)?;
        // every root of cd is a root of den; match each to its disc
        let participating = loop {
            let mut ambiguous = false;
            let mut hit_group = false;
            for cdisc in &cd_iso.discs {
                let hits: Vec<usize> = iso
                    .discs
                    .iter()
                    .enumerate()
                    .filter(|(_, d2)| d2.intersects(cdisc))
                    .map(|(i, _)| i)
                    .collect();
                if hits.len() == 1 {
                    if group.contains(&hits[0]) {
                        hit_group = true;
                    }
                } else {
                    ambiguous = true;
                    break;
                }
            }
            if !ambiguous {
                break hit_group;
            }
            let next = iso.bits.saturating_mul(2);
            if next > max_bits {
                return Err(Error::PrecisionExhausted {
                    bits: max_bits,
                    what: "matching rotation-related roots to pole discs".into(),
                });
            }
            iso.refine_to(next)?;
            cd_iso.refine_to(next)?;
        };
        if participating {
            relation_orders.push(d);
        }
    }
    let ivals: Vec<(Rat, Rat)> = group.iter().map(|&i| iso.modulus_interval(i)).collect();
    let modulus_lo = ivals.iter().map(|x| x.0.clone()).min().unwrap();
    let modulus_hi = ivals.iter().map(|x| x.1.clone()).max().unwrap();
    Ok(DominantAnalysis {
        group_size: group.len(),
        relation_orders,
        modulus_lo,
        modulus_hi,
        bits: iso.bits,
    })
}
