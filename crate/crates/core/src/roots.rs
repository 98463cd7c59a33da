//! Certified isolation of complex polynomial roots in exact arithmetic.
//!
//! Approximations are produced by floating-point Durand–Kerner iteration and
//! then polished by Weierstrass sweeps over exact rationals (rounded to a
//! working dyadic grid so coordinate sizes stay bounded). Certification never
//! trusts the iteration: for approximations `z_1..z_n` of a monic degree-n
//! polynomial, the Weierstrass corrections `W_i = p(z_i) / Π_{j≠i}(z_i - z_j)`
//! give inclusion discs `D(z_i, n·|W_i|)` whose union contains every root,
//! with any connected component of k discs containing exactly k roots
//! (counted with multiplicity). Pairwise disjoint discs therefore isolate one
//! root each. Radii are rounded outward through integer square roots, so the
//! certificate is exact even though the iteration is approximate.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn zero() -> Self {
        CRat {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn from_real(re: Rat) -> Self {
        CRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }

    pub fn neg(&self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }

    pub fn conj(&self) -> CRat {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, s: &Rat) -> CRat {
        CRat::new(&self.re * s, &self.im * s)
    }

    /// Exact division; panics on zero divisor (callers guard).
    pub fn div(&self, o: &CRat) -> CRat {
        let n = o.norm_sqr();
        assert!(!n.is_zero(), "complex division by zero");
        let inv = Rat::one() / n;
        self.mul(&o.conj()).scale(&inv)
    }

    /// Evaluate a real-coefficient polynomial here (Horner).
    pub fn eval_poly(&self, p: &Poly) -> CRat {
        let mut acc = CRat::zero();
        for i in (0..=p.deg0()).rev() {
            acc = acc.mul(self);
            acc.re += p.coeff(i);
        }
        acc
    }

    pub fn round_dyadic(&self, bits: u32) -> CRat {
        CRat::new(dyadic_round(&self.re, bits), dyadic_round(&self.im, bits))
    }
}

/// Round to the nearest multiple of 2^-bits.
pub fn dyadic_round(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::from_integer(scaled.round().to_integer()) / Rat::from_integer(scale)
}

/// Round down to the 2^-bits grid.
pub fn dyadic_floor(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    Rat::new((x.numer() * &scale).div_floor(x.denom()), scale)
}

/// Round up to the 2^-bits grid.
pub fn dyadic_ceil(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    Rat::new((x.numer() * &scale).div_ceil(x.denom()), scale)
}

/// Largest dyadic-grid rational `r = s/2^bits` with `r^2 <= q`. Requires
/// `q >= 0`. The result's denominator is exactly the grid scale no matter
/// how bulky `q`'s representation is, which keeps every quantity derived
/// from certified bounds small.
pub fn sqrt_lower(q: &Rat, bits: u32) -> Rat {
    assert!(!q.is_negative(), "sqrt of negative rational");
    let y: BigInt = (q.numer() << (2 * bits as usize)) / q.denom();
    Rat::new(y.sqrt(), BigInt::one() << bits)
}

/// Smallest dyadic-grid rational `r = s/2^bits` with `r^2 >= q`.
pub fn sqrt_upper(q: &Rat, bits: u32) -> Rat {
    assert!(!q.is_negative(), "sqrt of negative rational");
    let y: BigInt = (q.numer() << (2 * bits as usize)).div_ceil(q.denom());
    let mut s = y.sqrt();
    if &s * &s < y {
        s += 1;
    }
    Rat::new(s, BigInt::one() << bits)
}

/// Closed rectangle of complex values with exact rational corners.
#[derive(Clone, Debug)]
pub struct RectC {
    pub re: (Rat, Rat),
    pub im: (Rat, Rat),
}

fn interval_mul(a: &(Rat, Rat), b: &(Rat, Rat)) -> (Rat, Rat) {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

fn interval_square(a: &(Rat, Rat)) -> (Rat, Rat) {
    let s0 = &a.0 * &a.0;
    let s1 = &a.1 * &a.1;
    if a.0.is_negative() && a.1.is_positive() {
        (Rat::zero(), s0.max(s1))
    } else {
        (s0.clone().min(s1.clone()), s0.max(s1))
    }
}

impl RectC {
    pub fn point(z: &CRat) -> Self {
        RectC {
            re: (z.re.clone(), z.re.clone()),
            im: (z.im.clone(), z.im.clone()),
        }
    }

    pub fn from_disc(d: &Disc) -> Self {
        RectC {
            re: (&d.center.re - &d.radius, &d.center.re + &d.radius),
            im: (&d.center.im - &d.radius, &d.center.im + &d.radius),
        }
    }

    pub fn add(&self, o: &RectC) -> RectC {
        RectC {
            re: (&self.re.0 + &o.re.0, &self.re.1 + &o.re.1),
            im: (&self.im.0 + &o.im.0, &self.im.1 + &o.im.1),
        }
    }

    pub fn sub(&self, o: &RectC) -> RectC {
        RectC {
            re: (&self.re.0 - &o.re.1, &self.re.1 - &o.re.0),
            im: (&self.im.0 - &o.im.1, &self.im.1 - &o.im.0),
        }
    }

    pub fn mul(&self, o: &RectC) -> RectC {
        let rr = interval_mul(&self.re, &o.re);
        let ii = interval_mul(&self.im, &o.im);
        let ri = interval_mul(&self.re, &o.im);
        let ir = interval_mul(&self.im, &o.re);
        RectC {
            re: (&rr.0 - &ii.1, &rr.1 - &ii.0),
            im: (&ri.0 + &ir.0, &ri.1 + &ir.1),
        }
    }

    pub fn conj(&self) -> RectC {
        RectC {
            re: self.re.clone(),
            im: (-self.im.1.clone(), -self.im.0.clone()),
        }
    }

    pub fn scale_interval(&self, s: &(Rat, Rat)) -> RectC {
        RectC {
            re: interval_mul(&self.re, s),
            im: interval_mul(&self.im, s),
        }
    }

    pub fn norm_sqr_bounds(&self) -> (Rat, Rat) {
        let r2 = interval_square(&self.re);
        let i2 = interval_square(&self.im);
        (&r2.0 + &i2.0, &r2.1 + &i2.1)
    }

    /// Certified bounds on |z| over the rectangle.
    pub fn abs_bounds(&self, bits: u32) -> (Rat, Rat) {
        let (nlo, nhi) = self.norm_sqr_bounds();
        (sqrt_lower(&nlo, bits), sqrt_upper(&nhi, bits))
    }

    pub fn contains_zero(&self) -> bool {
        !self.re.0.is_positive()
            && !self.re.1.is_negative()
            && !self.im.0.is_positive()
            && !self.im.1.is_negative()
    }

    /// Division `self / o`. Fails if the divisor rectangle touches zero.
    pub fn div(&self, o: &RectC) -> Result<RectC> {
        let (nlo, nhi) = o.norm_sqr_bounds();
        if !nlo.is_positive() {
            return Err(Error::PrecisionExhausted {
                bits: 0,
                what: "interval division by a box containing zero".into(),
            });
        }
        let inv = (Rat::one() / nhi, Rat::one() / nlo);
        Ok(self.mul(&o.conj()).scale_interval(&inv))
    }

    /// Interval Horner evaluation of a real-coefficient polynomial.
    pub fn eval_poly(&self, p: &Poly) -> RectC {
        let mut acc = RectC::point(&CRat::zero());
        for i in (0..=p.deg0()).rev() {
            acc = acc.mul(self);
            let c = p.coeff(i);
            acc.re.0 += &c;
            acc.re.1 += &c;
        }
        acc
    }

    pub fn intersects(&self, o: &RectC) -> bool {
        self.re.0 <= o.re.1 && o.re.0 <= self.re.1 && self.im.0 <= o.im.1 && o.im.0 <= self.im.1
    }
}

/// A certified inclusion disc: exactly one root of the isolated polynomial
/// lies within `radius` of `center`.
#[derive(Clone, Debug)]
pub struct Disc {
    pub center: CRat,
    pub radius: Rat,
}

impl Disc {
    pub fn contains_point(&self, z: &CRat) -> bool {
        self.center.sub(z).norm_sqr() <= &self.radius * &self.radius
    }

    pub fn intersects(&self, o: &Disc) -> bool {
        let d2 = self.center.sub(&o.center).norm_sqr();
        let s = &self.radius + &o.radius;
        d2 <= &s * &s
    }

    /// Certified bounds on the modulus of the enclosed root.
    pub fn modulus_interval(&self, bits: u32) -> (Rat, Rat) {
        let c = self.center.norm_sqr();
        let lo = &sqrt_lower(&c, bits) - &self.radius;
        let hi = &sqrt_upper(&c, bits) + &self.radius;
        (lo.max(Rat::zero()), hi)
    }
}

/// Isolated roots of (the squarefree part of) a polynomial: one disc per
/// distinct complex root, pairwise disjoint, each of radius at most
/// `2^-bits`.
#[derive(Clone, Debug)]
pub struct Isolation {
    sf: Poly,
    approx: Vec<CRat>,
    work_bits: u32,
    pub discs: Vec<Disc>,
    pub bits: u32,
}

// -- floating-point stage -------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn sub(self, o: C64) -> C64 {
        C64 {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 {
            re: (self.re * o.re + self.im * o.im) / n,
            im: (self.im * o.re - self.re * o.im) / n,
        }
    }
    fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Durand–Kerner in f64 on a monic polynomial; best-effort starting points
/// for the exact stage. `None` when the coefficients overflow f64.
fn dk_f64(monic: &Poly) -> Option<Vec<C64>> {
    let n = monic.deg0();
    let coeffs: Vec<f64> = (0..=n).map(|i| monic.coeff(i).to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / n as f64;
            C64 {
                re: radius * t.cos(),
                im: radius * t.sin(),
            }
        })
        .collect();
    let eval = |x: C64| -> C64 {
        let mut acc = C64 { re: 0.0, im: 0.0 };
        for i in (0..=n).rev() {
            acc = acc.mul(x);
            acc.re += coeffs[i];
        }
        acc
    };
    for _ in 0..400 {
        let mut delta = 0.0f64;
        for k in 0..n {
            let mut denom = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if j != k {
                    denom = denom.mul(z[k].sub(z[j]));
                }
            }
            if denom.abs2() == 0.0 || !denom.abs2().is_finite() {
                return None;
            }
            let w = eval(z[k]).div(denom);
            z[k] = z[k].sub(w);
            delta = delta.max(w.abs2());
        }
        if delta < 1e-28 * radius * radius {
            break;
        }
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return None;
    }
    Some(z)
}

fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

impl Isolation {
    /// Isolate the distinct complex roots of `p` with discs of radius at most
    /// `2^-bits`. Multiple roots are collapsed through the squarefree part.
    pub fn isolate(p: &Poly, bits: u32) -> Result<Isolation> {
        if p.is_zero() {
            return Err(Error::Invalid("cannot isolate roots of the zero polynomial".into()));
        }
        let (_, sf) = p.gcd_squarefree();
        let sf = sf.monic();
        let n = sf.deg0();
        if n == 0 {
            return Ok(Isolation {
                sf,
                approx: vec![],
                work_bits: bits,
                discs: vec![],
                bits,
            });
        }
        let work_bits = 2 * bits + 64;
        // starting approximations: f64 Durand–Kerner, else exact circle points
        let approx: Vec<CRat> = match dk_f64(&sf) {
            Some(zs) => zs
                .into_iter()
                .map(|z| {
                    CRat::new(rat_from_f64(z.re), rat_from_f64(z.im)).round_dyadic(work_bits)
                })
                .collect(),
            None => {
                let mut bound = Rat::one();
                for i in 0..n {
                    let a = sf.coeff(i);
                    let a = if a.is_negative() { -a } else { a };
                    if a > bound {
                        bound = a;
                    }
                }
                bound += Rat::one();
                (0..n)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / n as f64;
                        CRat::new(
                            &bound * rat_from_f64(t.cos()),
                            &bound * rat_from_f64(t.sin()),
                        )
                        .round_dyadic(32)
                    })
                    .collect()
            }
        };
        let mut iso = Isolation {
            sf,
            approx,
            work_bits,
            discs: vec![],
            bits,
        };
        iso.converge(bits)?;
        iso.discs.sort_by(|a, b| {
            (&a.center.re, &a.center.im)
                .partial_cmp(&(&b.center.re, &b.center.im))
                .unwrap()
        });
        Ok(iso)
    }

    /// Weierstrass corrections at the current approximations. `None` if two
    /// approximations collide.
    fn corrections(&self) -> Option<Vec<CRat>> {
        let n = self.approx.len();
        let mut ws = Vec::with_capacity(n);
        for k in 0..n {
            let mut denom = CRat::from_real(Rat::one());
            for j in 0..n {
                if j != k {
                    let d = self.approx[k].sub(&self.approx[j]);
                    if d.is_zero() {
                        return None;
                    }
                    denom = denom.mul(&d);
                }
            }
            let val = self.approx[k].eval_poly(&self.sf);
            ws.push(val.div(&denom));
        }
        Some(ws)
    }

    /// Iterate until certification at `target_bits` succeeds.
    fn converge(&mut self, target_bits: u32) -> Result<()> {
        let n = self.approx.len();
        if n == 0 {
            self.bits = target_bits;
            return Ok(());
        }
        let radius_cap = Rat::new(BigInt::one(), BigInt::one() << target_bits as usize);
        let inflate = Rat::new(
            BigInt::one(),
            BigInt::one() << (2 * target_bits as usize + 16),
        );
        let max_work = 64 * (target_bits + 64);
        let mut stale = 0u32;
        loop {
            match self.corrections() {
                None => {
                    // collided approximations: nudge one of each pair apart
                    let eps = Rat::new(BigInt::one(), BigInt::one() << (self.work_bits / 2) as usize);
                    for k in 0..n {
                        for j in 0..k {
                            if self.approx[k] == self.approx[j] {
                                self.approx[k].re += &eps;
                                self.approx[k].im += &eps * Rat::from_integer((k as i64 + 1).into());
                            }
                        }
                    }
                }
                Some(ws) => {
                    // try to certify with the current centers
                    let radii: Vec<Rat> = ws
                        .iter()
                        .map(|w| {
                            let m = sqrt_upper(&w.norm_sqr(), 2 * target_bits + 16);
                            &(m * Rat::from_integer((n as i64).into())) + &inflate
                        })
                        .collect();
                    let small = radii.iter().all(|r| r <= &radius_cap);
                    if small {
                        let mut disjoint = true;
                        'pairs: for i in 0..n {
                            for j in 0..i {
                                let d2 = self.approx[i].sub(&self.approx[j]).norm_sqr();
                                let s = &radii[i] + &radii[j];
                                if d2 <= &s * &s {
                                    disjoint = false;
                                    break 'pairs;
                                }
                            }
                        }
                        if disjoint {
                            self.discs = self
                                .approx
                                .iter()
                                .zip(&radii)
                                .map(|(c, r)| Disc {
                                    center: c.clone(),
                                    radius: r.clone(),
                                })
                                .collect();
                            self.bits = target_bits;
                            return Ok(());
                        }
                    }
                    // Weierstrass sweep, rounded to the working grid
                    for (k, w) in ws.iter().enumerate() {
                        self.approx[k] = self.approx[k].sub(w).round_dyadic(self.work_bits);
                    }
                }
            }
            stale += 1;
            if stale % 24 == 0 {
                self.work_bits = self.work_bits.saturating_mul(2);
                if self.work_bits > max_work {
                    return Err(Error::PrecisionExhausted {
                        bits: self.work_bits,
                        what: "root isolation did not certify".into(),
                    });
                }
            }
            if stale > 4000 {
                return Err(Error::PrecisionExhausted {
                    bits: self.work_bits,
                    what: "root isolation iteration cap".into(),
                });
            }
        }
    }

    pub fn squarefree_part(&self) -> &Poly {
        &self.sf
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    /// Shrink every disc to radius at most `2^-bits`, keeping disc indices
    /// aligned with the roots they contained before.
    pub fn refine_to(&mut self, bits: u32) -> Result<()> {
        if bits <= self.bits || self.discs.is_empty() {
            self.bits = self.bits.max(bits);
            return Ok(());
        }
        let old = self.discs.clone();
        self.work_bits = self.work_bits.max(2 * bits + 64);
        self.converge(bits)?;
        // re-align: each old disc held exactly one root, and the new discs
        // are tighter enclosures of the same set, so each new disc must meet
        // exactly one old disc — its predecessor.
        let mut order: Vec<usize> = Vec::with_capacity(old.len());
        for o in &old {
            let hits: Vec<usize> = self
                .discs
                .iter()
                .enumerate()
                .filter(|(_, d)| d.intersects(o))
                .map(|(i, _)| i)
                .collect();
            if hits.len() != 1 {
                return Err(Error::PrecisionExhausted {
                    bits,
                    what: "refined root discs did not re-align".into(),
                });
            }
            order.push(hits[0]);
        }
        let mut sorted_flags = order.clone();
        sorted_flags.sort_unstable();
        sorted_flags.dedup();
        if sorted_flags.len() != old.len() {
            return Err(Error::PrecisionExhausted {
                bits,
                what: "refined root discs did not re-align".into(),
            });
        }
        self.discs = order.iter().map(|&i| self.discs[i].clone()).collect();
        Ok(())
    }

    /// Certified modulus interval for root `i` at the current precision.
    pub fn modulus_interval(&self, i: usize) -> (Rat, Rat) {
        self.discs[i].modulus_interval(self.bits + 8)
    }
}

/// Indices of the roots of minimal modulus, certified: the returned group's
/// modulus upper bounds sit strictly below every other root's lower bound.
/// Refines in place, doubling precision up to `max_bits`.
pub fn minimal_modulus_group(iso: &mut Isolation, max_bits: u32) -> Result<Vec<usize>> {
    if iso.is_empty() {
        return Ok(vec![]);
    }
    loop {
        let ivals: Vec<(Rat, Rat)> = (0..iso.len()).map(|i| iso.modulus_interval(i)).collect();
        let min_hi = ivals.iter().map(|(_, hi)| hi).min().unwrap().clone();
        let group: Vec<usize> = (0..iso.len()).filter(|&i| ivals[i].0 <= min_hi).collect();
        if group.len() == iso.len() {
            return Ok(group);
        }
        let g_max_hi = group.iter().map(|&i| &ivals[i].1).max().unwrap();
        let out_min_lo = (0..iso.len())
            .filter(|i| !group.contains(i))
            .map(|i| &ivals[i].0)
            .min()
            .unwrap();
        if g_max_hi < out_min_lo {
            return Ok(group);
        }
        let next = (iso.bits * 2).max(64);
        if next > max_bits {
            return Err(Error::PrecisionExhausted {
                bits: max_bits,
                what: "separating the minimal-modulus root group".into(),
            });
        }
        iso.refine_to(next)?;
    }
}
