//! Dense univariate polynomials over `F_q`.
//!
//! Coefficients are little-endian (`coeffs[i]` multiplies `x^i`) and stored
//! in canonical form: no trailing zeros, the zero polynomial is the empty
//! vector. `degree()` returns `None` for zero as the "minus infinity"
//! sentinel.

use crate::error::{Error, Result};
use crate::fq::Fq;

/// Products of operands whose length is at most this go through the
/// schoolbook convolution; longer ones split with Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    field: Fq,
    coeffs: Vec<u64>,
}

impl FqPoly {
    /// Builds a polynomial from little-endian coefficients, reducing mod q
    /// and trimming trailing zeros.
    pub fn new(field: Fq, coeffs: &[u64]) -> Self {
        let mut c: Vec<u64> = coeffs.iter().map(|&v| field.reduce(v)).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FqPoly { field, coeffs: c }
    }

    pub fn zero(field: Fq) -> Self {
        FqPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    /// Trusts the coefficients to be reduced already; only trims.
    pub fn from_reduced(field: Fq, coeffs: &[u64]) -> Self {
        Self::trimmed(field, coeffs.to_vec())
    }

    pub fn constant(field: Fq, c: u64) -> Self {
        Self::new(field, &[c])
    }

    pub fn one(field: Fq) -> Self {
        Self::constant(field, 1)
    }

    /// The monomial `x`.
    pub fn x(field: Fq) -> Self {
        Self::new(field, &[0, 1])
    }

    pub fn monomial(field: Fq, c: u64, n: usize) -> Self {
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = c;
        Self::new(field, &coeffs)
    }

    #[inline]
    pub fn field(&self) -> Fq {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(self.coeff(i), other.coeff(i)));
        }
        Self::trimmed(self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.sub(self.coeff(i), other.coeff(i)));
        }
        Self::trimmed(self.field, out)
    }

    pub fn neg(&self) -> Self {
        let out = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        FqPoly {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = self.field.reduce(c);
        let out = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self::trimmed(self.field, out)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0u64; k + self.coeffs.len()];
        out[k..].copy_from_slice(&self.coeffs);
        FqPoly {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let out = mul_slices(self.field, &self.coeffs, &other.coeffs);
        Self::trimmed(self.field, out)
    }

    /// Quotient and remainder with `self = q*b + r`, `deg r < deg b`.
    pub fn divmod(&self, b: &Self) -> Result<(Self, Self)> {
        debug_assert_eq!(self.field, b.field);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let f = self.field;
        if b.is_monic() && self.fast_elimination_safe(b) {
            return Ok(self.divmod_monic_fast(b));
        }
        let lead_inv = f.inv(b.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - db];
        for k in (0..quo.len()).rev() {
            let c = f.mul(rem[k + db], lead_inv);
            if c == 0 {
                continue;
            }
            quo[k] = c;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, bc));
            }
        }
        rem.truncate(db);
        Ok((Self::trimmed(f, quo), Self::trimmed(f, rem)))
    }

    /// Every work-array position takes at most `min(quotient len, deg b)`
    /// additions of values below q^2; the fast path requires the total to
    /// stay clear of u64 overflow.
    fn fast_elimination_safe(&self, b: &Self) -> bool {
        let q = self.field.modulus() as u128;
        if q >= 1 << 25 {
            return false;
        }
        let db = b.coeffs.len() - 1;
        let adds = db.min(self.coeffs.len() - db) as u128 + 1;
        adds * (q - 1) * q < u64::MAX as u128
    }

    /// Elimination with the negated divisor, so the work array only ever
    /// grows: for a small modulus the partial values stay far below 2^63 and
    /// no per-term reduction is needed. Entries are only trusted mod q.
    fn divmod_monic_fast(&self, b: &Self) -> (Self, Self) {
        let f = self.field;
        let q = f.modulus();
        let db = b.coeffs.len() - 1;
        let neg: Vec<u64> = b.coeffs[..db].iter().map(|&c| q - c).collect();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - db];
        for k in (0..quo.len()).rev() {
            let c = rem[k + db] % q;
            if c == 0 {
                continue;
            }
            quo[k] = c;
            for (i, &nb) in neg.iter().enumerate() {
                // adds c * (q - b_i), congruent to subtracting c * b_i
                rem[k + i] = rem[k + i].wrapping_add(c.wrapping_mul(nb));
            }
        }
        rem.truncate(db);
        for v in rem.iter_mut() {
            *v %= q;
        }
        (Self::trimmed(f, quo), Self::trimmed(f, rem))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divmod(b)?.1)
    }

    /// Makes the polynomial monic; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            0 | 1 => self.clone(),
            lc => self.scale(self.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Extended GCD: returns `(g, s, t)` with `g` monic and `g = s*a + t*b`.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let lc = r0.leading_coeff();
        if lc > 1 {
            let inv = f.inv(lc).expect("nonzero");
            r0 = r0.scale(inv);
            s0 = s0.scale(inv);
            t0 = t0.scale(inv);
        }
        (r0, s0, t0)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant via the Euclidean remainder sequence. For monic `a` this is
    /// the product of `b` over the roots of `a`.
    pub fn resultant(&self, other: &Self) -> u64 {
        let f = self.field;
        debug_assert!(!self.is_zero());
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = 1u64;
        loop {
            if b.is_zero() {
                return if a.degree() == Some(0) { acc } else { 0 };
            }
            let da = a.degree().expect("a nonzero");
            let db = b.degree().expect("b nonzero");
            if db == 0 {
                return f.mul(acc, f.pow(b.coeff(0), da as u64));
            }
            let r = a.rem(&b).expect("nonzero divisor");
            let dr = r.coeffs.len(); // deg r + 1, or 0 for the zero remainder
            if (da * db) & 1 == 1 {
                acc = f.neg(acc);
            }
            acc = f.mul(acc, f.pow(b.leading_coeff(), (da + 1 - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let x = f.reduce(x);
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `base^e mod m` by repeated squaring.
    pub fn powmod(base: &Self, mut e: u64, m: &Self) -> Result<Self> {
        let mut acc = Self::one(base.field).rem(m)?;
        let mut b = base.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m)?;
            }
            b = b.mul(&b).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Uniform polynomial of degree < `len` (so possibly shorter).
    pub fn random<R: rand::Rng>(field: Fq, len: usize, rng: &mut R) -> Self {
        let coeffs: Vec<u64> = (0..len).map(|_| field.sample(rng)).collect();
        Self::trimmed(field, coeffs)
    }

    /// Uniform monic polynomial of degree exactly `deg`.
    pub fn random_monic<R: rand::Rng>(field: Fq, deg: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<u64> = (0..deg).map(|_| field.sample(rng)).collect();
        coeffs.push(1);
        FqPoly { field, coeffs }
    }

    fn trimmed(field: Fq, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { field, coeffs }
    }
}

fn mul_slices(f: Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD {
        return mul_schoolbook(f, a, b);
    }
    mul_karatsuba(f, a, b)
}

/// For small moduli, products fit u64 and sums of up to 2^14 of them do not
/// overflow, so the inner loop runs without per-term reductions.
fn mul_schoolbook(f: Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    if f.small_modulus() && a.len().min(b.len()) <= (1 << 14) {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = out[i + j].wrapping_add(ai.wrapping_mul(bj));
            }
            // keep partial sums bounded, one pass every few rows would also do
            if i % 512 == 511 {
                for v in out.iter_mut() {
                    *v %= f.modulus();
                }
            }
        }
        for v in out.iter_mut() {
            *v %= f.modulus();
        }
    } else {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
    out
}

fn mul_karatsuba(f: Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let h = a.len().max(b.len()).div_ceil(2);
    if a.len() <= h || b.len() <= h {
        // lopsided split degenerates; fall back to two block products
        let (lo, hi) = if a.len() > h { a.split_at(h) } else { b.split_at(h) };
        let other = if a.len() > h { b } else { a };
        let mut out = vec![0u64; a.len() + b.len() - 1];
        accumulate(f, &mut out, 0, &mul_slices(f, lo, other));
        accumulate(f, &mut out, h, &mul_slices(f, hi, other));
        return out;
    }
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let p0 = mul_slices(f, a0, b0);
    let p2 = mul_slices(f, a1, b1);
    let asum = add_slices(f, a0, a1);
    let bsum = add_slices(f, b0, b1);
    let mut pm = mul_slices(f, &asum, &bsum);
    for (i, &v) in p0.iter().enumerate() {
        pm[i] = f.sub(pm[i], v);
    }
    for (i, &v) in p2.iter().enumerate() {
        pm[i] = f.sub(pm[i], v);
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    accumulate(f, &mut out, 0, &p0);
    accumulate(f, &mut out, h, &pm);
    accumulate(f, &mut out, 2 * h, &p2);
    out
}

fn add_slices(f: Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            f.add(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect()
}

fn accumulate(f: Fq, out: &mut [u64], offset: usize, src: &[u64]) {
    for (i, &v) in src.iter().enumerate() {
        out[offset + i] = f.add(out[offset + i], v);
    }
}

impl std::fmt::Debug for FqPoly {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(w, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(w, " + ")?;
            }
            first = false;
            match i {
                0 => write!(w, "{c}")?,
                1 if c == 1 => write!(w, "x")?,
                1 => write!(w, "{c}*x")?,
                _ if c == 1 => write!(w, "x^{i}")?,
                _ => write!(w, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
