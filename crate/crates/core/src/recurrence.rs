//! Linear recurrences with constant rational coefficients, rational
//! generating functions, and the conversions between them.
//!
//! Index conventions, used everywhere downstream:
//!
//! * a sequence starts at `first_index` (0 or 1);
//! * the relation `u_{n+r} = c_1 u_{n+r-1} + … + c_r u_n` is asserted for all
//!   `n >= start_index`, and `initial_terms` covers exactly the indices
//!   `first_index ..= start_index + r - 1`;
//! * `c_r != 0` always. A sequence that is eventually zero is represented by
//!   the order-1 rule `u_{n+1} = u_n` holding on the zero tail, never by a
//!   recurrence with a vanishing trailing coefficient.
//!
//! Generating functions embed a sequence as `Σ_{n >= first_index} u_n z^n`,
//! so expansions of a `RationalFunction` always run from exponent 0 with
//! zeros below `first_index`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A linear recurrence with explicit validity range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearRecurrence {
    coeffs: Vec<Rat>,
    initial: Vec<Rat>,
    start_index: u64,
    first_index: u64,
}

/// Finitely many index-value adjustments laid over a recurrent sequence.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FiniteCorrection {
    entries: BTreeMap<u64, Rat>,
}

/// A reduced rational function `num/den` with `gcd(num, den) = 1` and
/// `den(0) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

/// Companion-matrix view of a from-start recurrence: the state vector at
/// `first_index` is `(u_f, …, u_{f+r-1})`, one application of `matrix` moves
/// the window one step, and the sequence is read off by the first coordinate.
#[derive(Clone, Debug)]
pub struct CompanionForm {
    pub matrix: MatQ,
    pub state: Vec<Rat>,
    pub first_index: u64,
}

/// Small dense exact matrix over Q (row-major).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatQ {
    n: usize,
    e: Vec<Rat>,
}

impl MatQ {
    pub fn identity(n: usize) -> Self {
        let mut e = vec![Rat::zero(); n * n];
        for i in 0..n {
            e[i * n + i] = Rat::one();
        }
        MatQ { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        MatQ {
            n,
            e: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.e[i * self.n + j]
    }

    pub fn mul(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut e = vec![Rat::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.e[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * &other.e[k * n + j];
                    e[i * n + j] += t;
                }
            }
        }
        MatQ { n, e }
    }

    pub fn pow(&self, mut k: u64) -> MatQ {
        let mut base = self.clone();
        let mut acc = MatQ::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.n {
                    s += &self.e[i * self.n + j] * &v[j];
                }
                s
            })
            .collect()
    }

    /// Monic characteristic polynomial by Faddeev–LeVerrier (exact).
    pub fn char_poly(&self) -> Poly {
        let n = self.n;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = self.clone();
        for k in 1..=n {
            let mut tr = Rat::zero();
            for i in 0..n {
                tr += &m.e[i * n + i];
            }
            let c = -tr / Rat::from_integer(k.into());
            coeffs[n - k] = c.clone();
            if k < n {
                // m <- a * (m + c I)
                for i in 0..n {
                    m.e[i * n + i] += &c;
                }
                m = self.mul(&m);
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl FiniteCorrection {
    pub fn new(entries: BTreeMap<u64, Rat>) -> Self {
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        FiniteCorrection { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: u64) -> Rat {
        self.entries.get(&idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn max_index(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.entries.iter()
    }

    /// The correction as a polynomial `Σ f_n z^n`.
    pub fn to_poly(&self) -> Poly {
        match self.max_index() {
            None => Poly::zero(),
            Some(m) => {
                let mut c = vec![Rat::zero(); m as usize + 1];
                for (&i, v) in &self.entries {
                    c[i as usize] = v.clone();
                }
                Poly::from_coeffs(c)
            }
        }
    }
}

impl LinearRecurrence {
    /// Validated constructor. `initial` must cover exactly the indices
    /// `first_index ..= start_index + order - 1`.
    pub fn new(
        coeffs: Vec<Rat>,
        initial: Vec<Rat>,
        start_index: u64,
        first_index: u64,
    ) -> Result<Self> {
        if first_index > 1 {
            return Err(Error::Invalid("first_index must be 0 or 1".into()));
        }
        if start_index < first_index {
            return Err(Error::Invalid("start_index below first_index".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient list".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::Invalid(
                "trailing recurrence coefficient must be nonzero".into(),
            ));
        }
        let need = start_index + coeffs.len() as u64 - first_index;
        if initial.len() as u64 != need {
            return Err(Error::Invalid(format!(
                "initial terms must cover indices {first_index}..={}: expected {need} values, got {}",
                start_index + coeffs.len() as u64 - 1,
                initial.len()
            )));
        }
        Ok(LinearRecurrence {
            coeffs,
            initial,
            start_index,
            first_index,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn initial_terms(&self) -> &[Rat] {
        &self.initial
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }

    pub fn first_index(&self) -> u64 {
        self.first_index
    }

    pub fn is_from_start(&self) -> bool {
        self.start_index == self.first_index
    }

    /// First `count` terms, beginning at `first_index`.
    pub fn expand(&self, count: usize) -> Vec<Rat> {
        let r = self.order();
        let mut out: Vec<Rat> = Vec::with_capacity(count);
        out.extend(self.initial.iter().take(count).cloned());
        while out.len() < count {
            let k = out.len(); // absolute index first_index + k
            let mut s = Rat::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                s += c * &out[k - 1 - i];
            }
            debug_assert!(k >= r);
            out.push(s);
        }
        out
    }

    /// Terms by absolute index `0 ..= upto`, zero-padded below `first_index`.
    pub fn expand_padded(&self, upto: u64) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.first_index as usize];
        let want = (upto + 1).saturating_sub(self.first_index) as usize;
        out.extend(self.expand(want));
        out.truncate(upto as usize + 1);
        out
    }

    /// Rewrite with the relation asserted from `first_index` on: the tail of
    /// the sequence is solved backwards through the recurrence, and whatever
    /// the stored initial terms actually were is preserved as a finite
    /// correction on `first_index ..= start_index - 1`.
    pub fn normalize_from_start(&self) -> (LinearRecurrence, FiniteCorrection) {
        let r = self.order();
        if self.is_from_start() {
            return (self.clone(), FiniteCorrection::default());
        }
        let span = (self.start_index - self.first_index) as usize;
        // v on indices first_index ..= start_index + r - 1; the last r agree
        // with the stored tail
        let mut v = vec![Rat::zero(); span + r];
        for (k, val) in self.initial[span..].iter().enumerate() {
            v[span + k] = val.clone();
        }
        let cr_inv = Rat::one() / self.coeffs.last().unwrap();
        for n in (0..span).rev() {
            // u_n = (u_{n+r} - sum_{i<r} c_i u_{n+r-i}) / c_r
            let mut s = v[n + r].clone();
            for (i, c) in self.coeffs.iter().take(r - 1).enumerate() {
                s -= c * &v[n + r - 1 - i];
            }
            v[n] = s * &cr_inv;
        }
        let mut entries = BTreeMap::new();
        for n in 0..span {
            let diff = &self.initial[n] - &v[n];
            if !diff.is_zero() {
                entries.insert(self.first_index + n as u64, diff);
            }
        }
        let rec = LinearRecurrence {
            coeffs: self.coeffs.clone(),
            initial: v[..r].to_vec(),
            start_index: self.first_index,
            first_index: self.first_index,
        };
        (rec, FiniteCorrection::new(entries))
    }

    /// Companion form of a from-start recurrence.
    pub fn companion(&self) -> CompanionForm {
        assert!(
            self.is_from_start(),
            "companion form needs a from-start recurrence"
        );
        let r = self.order();
        let mut rows = vec![vec![Rat::zero(); r]; r];
        for i in 0..r.saturating_sub(1) {
            rows[i][i + 1] = Rat::one();
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            // last row: u_{n+r} = c_1 u_{n+r-1} + ... + c_r u_n
            rows[r - 1][r - 1 - i] = c.clone();
        }
        CompanionForm {
            matrix: MatQ::from_rows(rows),
            state: self.initial.clone(),
            first_index: self.first_index,
        }
    }

    /// Generating function `Σ_{n >= first_index} u_n z^n` as a reduced
    /// rational function.
    pub fn to_rational(&self) -> Result<RationalFunction> {
        let (v, f) = self.normalize_from_start();
        let r = v.order();
        // D(z) = 1 - c_1 z - ... - c_r z^r
        let mut dc = vec![Rat::one()];
        dc.extend(v.coeffs.iter().map(|c| -c.clone()));
        let den = Poly::from_coeffs(dc);
        let head = Poly::from_coeffs(v.initial.clone());
        let core = den.mul_trunc(&head, r);
        let num = &core.shift_up(v.first_index as usize) + &(&den * &f.to_poly());
        RationalFunction::new(num, den)
    }

    /// Recurrence for the decimated sequence `s_k = u_{m k + r0}` (absolute
    /// indices, zero below `first_index`), emitted with `first_index = 0`.
    pub fn section(&self, m: u64, r0: u64) -> Result<LinearRecurrence> {
        let mut all = self.sections(m, &[r0])?;
        Ok(all.pop().unwrap())
    }

    /// Sections for several residues at once, sharing the characteristic
    /// polynomial of `A^m` and one expansion pass.
    pub fn sections(&self, m: u64, residues: &[u64]) -> Result<Vec<LinearRecurrence>> {
        if m == 0 {
            return Err(Error::Invalid("section step must be >= 1".into()));
        }
        if let Some(&bad) = residues.iter().find(|&&r| r >= m) {
            return Err(Error::Invalid(format!(
                "section residue {bad} not below step {m}"
            )));
        }
        let (v, f) = self.normalize_from_start();
        let comp = v.companion();
        let chi = comp.matrix.pow(m).char_poly();
        let ord = chi.deg0();
        debug_assert_eq!(ord, v.order());
        // s_{k+ord} = -(chi_{ord-1} s_{k+ord-1} + ... + chi_0 s_k)
        let sec_coeffs: Vec<Rat> = (1..=ord).map(|i| -chi.coeff(ord - i)).collect();
        debug_assert!(!sec_coeffs.last().unwrap().is_zero());

        let fi = self.first_index;
        let mut out = Vec::with_capacity(residues.len());
        // widest init window needed across residues
        let mut max_idx = 0u64;
        let mut starts = Vec::with_capacity(residues.len());
        for &r0 in residues {
            // first k with m*k + r0 >= fi
            let k0 = if r0 >= fi { 0 } else { (fi - r0).div_ceil(m) };
            // corrections at indices ≡ r0 (mod m) land at position (idx - r0)/m
            let mut k1 = k0;
            for (&idx, _) in f.iter() {
                if idx >= r0 && (idx - r0) % m == 0 {
                    k1 = k1.max((idx - r0) / m + 1);
                }
            }
            starts.push(k1);
            max_idx = max_idx.max(m * (k1 + ord as u64 - 1) + r0);
        }
        let padded = self.expand_padded(max_idx);
        for (&r0, &k1) in residues.iter().zip(&starts) {
            let initial: Vec<Rat> = (0..k1 + ord as u64)
                .map(|k| padded[(m * k + r0) as usize].clone())
                .collect();
            out.push(LinearRecurrence::new(sec_coeffs.clone(), initial, k1, 0)?);
        }
        Ok(out)
    }
}

impl RationalFunction {
    /// Reduce and normalize so that `gcd(num, den) = 1` and `den(0) = 1`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.deg0() > 0 {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        } else {
            (num, den)
        };
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::DenominatorVanishesAtZero);
        }
        let inv = Rat::one() / d0;
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg0() == 0
    }

    /// Taylor coefficients at exponents `0 .. count-1` (series division,
    /// exact; `den(0) = 1` by construction).
    pub fn expand(&self, count: usize) -> Vec<Rat> {
        let mut out = Vec::with_capacity(count);
        for n in 0..count {
            let mut s = self.num.coeff(n);
            for j in 1..=n.min(self.den.deg0()) {
                let t = &self.den.coeff(j) * &out[n - j];
                s -= t;
            }
            out.push(s);
        }
        out
    }

    pub fn add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalFunction::new(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = &(&self.num * &other.den) - &(&other.num * &self.den);
        RationalFunction::new(num, &self.den * &other.den)
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Substitute `z -> z^k`.
    pub fn substitute_power(&self, k: usize) -> Result<RationalFunction> {
        RationalFunction::new(
            self.num.substitute_power(k),
            self.den.substitute_power(k),
        )
    }

    /// Recurrence satisfied by the Taylor coefficients: order `deg den`
    /// (or the eventually-zero rule for polynomials), asserted from
    /// `max(deg num - deg den + 1, 0)`.
    pub fn to_recurrence(&self) -> Result<LinearRecurrence> {
        if self.is_polynomial() {
            // finite support: order-1 rule u_{n+1} = u_n on the zero tail
            let start = match self.num.degree() {
                None => 0,
                Some(d) => d as u64 + 1,
            };
            let initial = self.expand(start as usize + 1);
            return LinearRecurrence::new(vec![Rat::one()], initial, start, 0);
        }
        let r = self.den.deg0();
        let coeffs: Vec<Rat> = (1..=r).map(|i| -self.den.coeff(i)).collect();
        let start = (self.num.deg0() as i64 - r as i64 + 1).max(0) as u64;
        let initial = self.expand(start as usize + r);
        LinearRecurrence::new(coeffs, initial, start, 0)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Minimal linear recurrence reproducing `prefix` (Berlekamp–Massey over Q).
///
/// Returns `None` for the all-zero prefix. The result's `start_index` marks
/// where the relation is first asserted: a minimal LFSR whose connection
/// polynomial has trailing zero coefficients is stripped to a valid
/// recurrence (nonzero trailing coefficient), with the unexplained head kept
/// as initial terms. `first_index` is passed through to label the indices.
pub fn berlekamp_massey(prefix: &[Rat], first_index: u64) -> Result<Option<LinearRecurrence>> {
    if prefix.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let n = prefix.len();
    // connection polynomial: prefix[k] + sum_{i=1..l} c[i]*prefix[k-i] = 0
    let mut c: Vec<Rat> = vec![Rat::one()];
    let mut b: Vec<Rat> = vec![Rat::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rat::one();
    for k in 0..n {
        let mut d = prefix[k].clone();
        for i in 1..=l {
            if i < c.len() {
                d += &c[i] * &prefix[k - i];
            }
        }
        if d.is_zero() {
            m += 1;
        } else if 2 * l <= k {
            let t = c.clone();
            let f = &d / &bd;
            if c.len() < b.len() + m {
                c.resize(b.len() + m, Rat::zero());
            }
            for (i, bi) in b.iter().enumerate() {
                let s = &f * bi;
                c[i + m] -= s;
            }
            l = k + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            let f = &d / &bd;
            if c.len() < b.len() + m {
                c.resize(b.len() + m, Rat::zero());
            }
            for (i, bi) in b.iter().enumerate() {
                let s = &f * bi;
                c[i + m] -= s;
            }
            m += 1;
        }
    }
    // relation holds for positions k in [l, n); coefficients d_i = -c[i]
    let mut coeffs: Vec<Rat> = (1..=l).map(|i| -c.get(i).cloned().unwrap_or_else(Rat::zero)).collect();
    while coeffs.last().map_or(false, Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        // pure zero tail after a nonzero head
        let last_nonzero = prefix.iter().rposition(|x| !x.is_zero()).unwrap();
        let start = last_nonzero as u64 + 1;
        let initial = prefix[..=last_nonzero + 1].to_vec();
        return Ok(Some(LinearRecurrence::new(
            vec![Rat::one()],
            initial,
            first_index + start,
            first_index,
        )?));
    }
    let s = coeffs.len();
    let start = l - s; // relation base position
    let initial = prefix[..l].to_vec();
    Ok(Some(LinearRecurrence::new(
        coeffs,
        initial,
        first_index + start as u64,
        first_index,
    )?))
}
