//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty vector and `degree()` is `None` for it.
//! Everything here is exact; nothing rounds.

use crate::error::{Error, Result};
use crate::rat::{rat_string, Rat};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(a: Rat) -> Self {
        Poly::from_coeffs(vec![a])
    }

    /// `a * z^k`.
    pub fn monomial(k: usize, a: Rat) -> Self {
        let mut c = vec![Rat::zero(); k];
        c.push(a);
        Poly::from_coeffs(c)
    }

    /// Build from coefficients, lowest degree first; trailing zeros trimmed.
    pub fn from_coeffs(mut c: Vec<Rat>) -> Self {
        while c.last().map_or(false, Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&n| crate::rat::rat_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with the convention `deg 0 = 0` (handy for dimension counts).
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.c.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * Rat::from_integer(k.into()))
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            c: self.c.iter().map(|a| a * k).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = Rat::one() / l;
                self.scale(&inv)
            }
        }
    }

    /// Substitute `z -> z^k`.
    pub fn substitute_power(&self, k: usize) -> Poly {
        assert!(k >= 1, "substitute_power needs k >= 1");
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Poly::from_coeffs(c)
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product truncated to degree `< n` (power-series multiplication).
    pub fn mul_trunc(&self, other: &Poly, n: usize) -> Poly {
        let mut c = vec![Rat::zero(); n.min(self.c.len() + other.c.len())];
        for (i, a) in self.c.iter().enumerate() {
            if i >= n {
                break;
            }
            for (j, b) in other.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }

    /// Quotient and remainder; error on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::ZeroPolyDivision)?;
        if self.is_zero() || self.c.len() < d.c.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut r = self.c.clone();
        let mut q = vec![Rat::zero(); r.len() - dd];
        let lead_inv = Rat::one() / d.leading().unwrap();
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &lead_inv;
            for (j, b) in d.c.iter().enumerate() {
                let t = &f * b;
                r[k - dd + j] -= t;
            }
            q[k - dd] = f;
        }
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    /// Division known to be exact; error if a remainder shows up.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic gcd. `gcd(0,0) = 0`; a nonzero constant input gives `1`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(gcd(p, p'), squarefree part)`, both monic.
    ///
    /// The squarefree part has the same root set with every root simple;
    /// constants give `(1, 1)`.
    pub fn gcd_squarefree(&self) -> (Poly, Poly) {
        if self.is_zero() {
            return (Poly::zero(), Poly::zero());
        }
        let g = self.gcd(&self.derivative());
        let sf = self.exact_div(&g).expect("gcd divides").monic();
        (g, sf)
    }

    /// Resultant of `self` and `other`.
    ///
    /// Dispatch: plain Sylvester determinant when both degrees are at most 8,
    /// subresultant PRS above that.
    pub fn resultant(&self, other: &Poly) -> Rat {
        if self.deg0() <= 8 && other.deg0() <= 8 {
            self.resultant_sylvester(other)
        } else {
            self.resultant_subresultant(other)
        }
    }

    /// Resultant as the determinant of the Sylvester matrix.
    pub fn resultant_sylvester(&self, other: &Poly) -> Rat {
        let (m, n) = match (self.degree(), other.degree()) {
            // conventions for degenerate inputs: empty Sylvester matrix has
            // determinant 1; a zero polynomial against positive degree gives 0
            (None, None) => return Rat::zero(),
            (None, Some(n)) => return if n == 0 { Rat::one() } else { Rat::zero() },
            (Some(m), None) => return if m == 0 { Rat::one() } else { Rat::zero() },
            (Some(m), Some(n)) => (m, n),
        };
        if m == 0 {
            return self.c[0].pow(n as i32);
        }
        if n == 0 {
            return other.c[0].pow(m as i32);
        }
        let size = m + n;
        let mut mat = vec![vec![Rat::zero(); size]; size];
        for row in 0..n {
            for (k, a) in self.c.iter().enumerate() {
                mat[row][row + (m - k)] = a.clone();
            }
        }
        for row in 0..m {
            for (k, b) in other.c.iter().enumerate() {
                mat[n + row][row + (n - k)] = b.clone();
            }
        }
        det_in_place(&mut mat)
    }

    /// Resultant via the subresultant polynomial remainder sequence
    /// (Cohen, Algorithm 3.3.7, run over Q where every division is exact).
    pub fn resultant_subresultant(&self, other: &Poly) -> Rat {
        let (ma, mb) = match (self.degree(), other.degree()) {
            (None, None) => return Rat::zero(),
            (None, Some(n)) => return if n == 0 { Rat::one() } else { Rat::zero() },
            (Some(m), None) => return if m == 0 { Rat::one() } else { Rat::zero() },
            (Some(m), Some(n)) => (m, n),
        };
        if ma == 0 {
            return self.c[0].pow(mb as i32);
        }
        if mb == 0 {
            return other.c[0].pow(ma as i32);
        }
        let mut sign = Rat::one();
        let (mut a, mut b) = if ma >= mb {
            (self.clone(), other.clone())
        } else {
            if ma % 2 == 1 && mb % 2 == 1 {
                sign = -sign;
            }
            (other.clone(), self.clone())
        };
        let mut g = Rat::one();
        let mut h = Rat::one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
            let r = pseudo_rem(&a, &b);
            a = b;
            let divisor = &g * h.pow(delta as i32);
            b = r.scale(&(Rat::one() / divisor));
            g = a.leading().unwrap().clone();
            // h <- g^delta * h^(1-delta)
            h = if delta == 0 {
                h
            } else {
                g.pow(delta as i32) / h.pow(delta as i32 - 1)
            };
            match b.degree() {
                None => return Rat::zero(),
                Some(0) => {
                    let da = a.degree().unwrap() as i32;
                    let lb = b.leading().unwrap().clone();
                    let res = lb.pow(da) / h.pow((da - 1).max(0));
                    return sign * res;
                }
                Some(_) => {}
            }
        }
    }

    /// Interpolate the unique polynomial of degree `< xs.len()` through the
    /// given points (Newton's divided differences). The `xs` must be distinct.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        if n == 0 {
            return Poly::zero();
        }
        // divided-difference coefficients
        let mut dd: Vec<Rat> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let denom = &xs[i] - &xs[i - level];
                assert!(!denom.is_zero(), "interpolation points must be distinct");
                dd[i] = (&dd[i] - &dd[i - 1]) / denom;
            }
        }
        // Horner on the Newton form
        let mut p = Poly::zero();
        for i in (0..n).rev() {
            let lin = Poly::from_coeffs(vec![-xs[i].clone(), Rat::one()]);
            p = &(&p * &lin) + &Poly::constant(dd[i].clone());
        }
        p
    }
}

/// Pseudo-remainder: the remainder of `lc(b)^(δ+1) * a` by `b`, computed
/// without fractions in the quotient steps. δ = deg a − deg b ≥ 0.
fn pseudo_rem(a: &Poly, b: &Poly) -> Poly {
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    debug_assert!(da >= db && db >= 1);
    let lb = b.leading().unwrap().clone();
    let mut r = a.c.clone();
    for k in (db..=da).rev() {
        // r <- lc(b)*r - r[k]*z^(k-db)*b, which zeroes the coefficient at k
        let top = r[k].clone();
        for coef in r.iter_mut() {
            *coef = &*coef * &lb;
        }
        let shift = k - db;
        for (j, bc) in b.c.iter().enumerate() {
            let t = &top * bc;
            r[shift + j] -= t;
        }
    }
    r.truncate(db);
    Poly::from_coeffs(r)
}

/// Determinant by Gaussian elimination with partial pivoting, exact over Q.
fn det_in_place(m: &mut [Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        let inv = Rat::one() / &pivot;
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let f = &m[row][col] * &inv;
            for k in col..n {
                let t = &f * &m[col][k];
                m[row][k] -= t;
            }
        }
    }
    det
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut c = vec![Rat::zero(); self.c.len().max(rhs.c.len())];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in rhs.c.iter().enumerate() {
            c[i] += b;
        }
        Poly::from_coeffs(c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut c = vec![Rat::zero(); self.c.len().max(rhs.c.len())];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in rhs.c.iter().enumerate() {
            c[i] -= b;
        }
        Poly::from_coeffs(c)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (sign, mag) = if a.is_negative() {
                ("-", -a.clone())
            } else {
                ("+", a.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coef = !mag.is_one() || k == 0;
            if show_coef {
                write!(f, "{}", rat_string(&mag))?;
            }
            if k >= 1 {
                if show_coef {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
