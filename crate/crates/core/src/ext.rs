//! The extension field `L = F_q[z]/f` for a monic irreducible `f` of degree
//! `n`, with a cached-power Frobenius engine.
//!
//! Elements are residue polynomials of degree `< n`. The context caches
//! `xi_i = x^(q^i) mod f` at power-of-two indices (plus `i = n-1`, which
//! realizes the inverse automorphism), so an arbitrary Frobenius power costs
//! O(log n) modular compositions the first time and one composition after
//! memoization. Small powers go through repeated squaring instead, which
//! wins for moderate `log q`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::moduli::irreducible_test;
use crate::poly::FqPoly;

/// How Frobenius powers are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrobeniusBackend {
    /// Repeated squaring for |i| <= 2, modular composition otherwise.
    #[default]
    Auto,
    /// Always raise to the q-th power repeatedly.
    Squaring,
    /// Always compose with the cached `x^(q^i) mod f`.
    ModComp,
}

/// An element of `L`, stored as its residue of degree `< n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    residue: FqPoly,
}

impl ExtElem {
    pub fn residue(&self) -> &FqPoly {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Coefficient of `zeta^i` on the power basis.
    pub fn coeff(&self, i: usize) -> u64 {
        self.residue.coeff(i)
    }
}

impl std::fmt::Debug for ExtElem {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(w, "[{:?}]", self.residue)
    }
}

impl std::fmt::Debug for ExtFieldCtx {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            w,
            "F_{}[z]/({:?})",
            self.fq.modulus(),
            self.modulus
        )
    }
}

pub struct ExtFieldCtx {
    fq: Fq,
    modulus: FqPoly,
    degree: usize,
    backend: FrobeniusBackend,
    /// xi_pow2[j] = x^(q^(2^j)) mod f, for 2^j <= n-1. Entry 0 is the
    /// one-time `x^q mod f` precomputation, filled at construction; higher
    /// entries materialize on first use by self-composition, so the solvers
    /// that never compose pay nothing for them.
    xi_pow2: RwLock<Vec<FqPoly>>,
    /// Memoized xi_i for the composite indices assembled on demand.
    xi_memo: RwLock<HashMap<usize, FqPoly>>,
}

impl ExtFieldCtx {
    pub fn new(fq: Fq, modulus: FqPoly) -> Result<Self> {
        Self::with_backend(fq, modulus, FrobeniusBackend::Auto)
    }

    pub fn with_backend(fq: Fq, modulus: FqPoly, backend: FrobeniusBackend) -> Result<Self> {
        if !modulus.is_monic() || !irreducible_test(&modulus) {
            return Err(Error::NotIrreducible);
        }
        Ok(Self::new_unchecked(fq, modulus, backend))
    }

    /// Skips the irreducibility test; for callers that just ran it (or
    /// obtained the modulus from a source that guarantees it). Field
    /// arithmetic silently misbehaves on a reducible modulus.
    pub fn new_unchecked(fq: Fq, modulus: FqPoly, backend: FrobeniusBackend) -> Self {
        assert!(modulus.is_monic());
        let degree = modulus.degree().expect("monic");
        let mut seed = Vec::new();
        if degree > 1 {
            let xi1 = FqPoly::powmod(&FqPoly::x(fq), fq.modulus(), &modulus)
                .expect("modulus nonzero");
            seed.push(xi1);
        }
        ExtFieldCtx {
            fq,
            modulus,
            degree,
            backend,
            xi_pow2: RwLock::new(seed),
            xi_memo: RwLock::new(HashMap::new()),
        }
    }

    #[inline]
    pub fn fq(&self) -> Fq {
        self.fq
    }

    #[inline]
    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    /// Extension degree n.
    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn backend(&self) -> FrobeniusBackend {
        self.backend
    }

    // ---- element construction ----

    pub fn elem(&self, coeffs: &[u64]) -> ExtElem {
        let residue = FqPoly::new(self.fq, coeffs)
            .rem(&self.modulus)
            .expect("modulus nonzero");
        ExtElem { residue }
    }

    pub fn elem_from_poly(&self, p: &FqPoly) -> ExtElem {
        ExtElem {
            residue: p.rem(&self.modulus).expect("modulus nonzero"),
        }
    }

    /// Wraps coordinates already reduced mod q with length at most n; skips
    /// the modular reduction of [`Self::elem`].
    pub fn elem_from_coords(&self, coords: &[u64]) -> ExtElem {
        debug_assert!(coords.len() <= self.degree);
        debug_assert!(coords.iter().all(|&c| c < self.fq.modulus()));
        ExtElem {
            residue: FqPoly::from_reduced(self.fq, coords),
        }
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            residue: FqPoly::zero(self.fq),
        }
    }

    pub fn one(&self) -> ExtElem {
        self.from_scalar(1)
    }

    pub fn from_scalar(&self, c: u64) -> ExtElem {
        self.elem(&[c])
    }

    /// The class of `z`.
    pub fn zeta(&self) -> ExtElem {
        self.elem(&[0, 1])
    }

    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R) -> ExtElem {
        ExtElem {
            residue: FqPoly::random(self.fq, self.degree, rng),
        }
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            residue: a.residue.add(&b.residue),
        }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            residue: a.residue.sub(&b.residue),
        }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            residue: a.residue.neg(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            residue: a
                .residue
                .mul(&b.residue)
                .rem(&self.modulus)
                .expect("modulus nonzero"),
        }
    }

    pub fn scale(&self, a: &ExtElem, c: u64) -> ExtElem {
        ExtElem {
            residue: a.residue.scale(c),
        }
    }

    /// Inverse through the extended GCD with the field modulus.
    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let (g, _, t) = self.modulus.xgcd(&a.residue);
        debug_assert_eq!(g.degree(), Some(0), "modulus is irreducible");
        Ok(self.elem_from_poly(&t))
    }

    /// `a^q mod f` by repeated squaring.
    pub fn pow_q(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            residue: FqPoly::powmod(&a.residue, self.fq.modulus(), &self.modulus)
                .expect("modulus nonzero"),
        }
    }

    /// `a^e` for a machine-word exponent.
    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    // ---- modular composition and Frobenius powers ----

    /// Brent-Kung modular composition: `F(G) mod H` for the field modulus
    /// `H = f`, via sqrt-size baby steps and a block coefficient product.
    pub fn modcomp(&self, f_in: &FqPoly, g_in: &FqPoly) -> FqPoly {
        modular_composition(f_in, g_in, &self.modulus)
    }

    /// `pi^i(a) = a^(q^i)`; `i` is interpreted modulo n, so negative powers
    /// run the inverse automorphism.
    pub fn frobenius(&self, a: &ExtElem, i: i64) -> ExtElem {
        self.frobenius_with(a, i, self.backend)
    }

    pub fn frobenius_with(&self, a: &ExtElem, i: i64, backend: FrobeniusBackend) -> ExtElem {
        let n = self.degree as i64;
        let e = i.rem_euclid(n) as usize;
        if e == 0 {
            return a.clone();
        }
        let by_squaring = match backend {
            FrobeniusBackend::Squaring => true,
            FrobeniusBackend::ModComp => false,
            FrobeniusBackend::Auto => e <= 2,
        };
        if by_squaring {
            let mut out = a.clone();
            for _ in 0..e {
                out = self.pow_q(&out);
            }
            out
        } else {
            let xi = self.xi(e);
            ExtElem {
                residue: self.modcomp(&a.residue, &xi),
            }
        }
    }

    /// `x^(q^e) mod f` assembled from the power-of-two cache.
    fn xi(&self, e: usize) -> FqPoly {
        debug_assert!(e >= 1 && e < self.degree);
        if e.is_power_of_two() {
            return self.xi_pow2_entry(e.trailing_zeros() as usize);
        }
        if let Some(hit) = self.xi_memo.read().expect("lock").get(&e) {
            return hit.clone();
        }
        let mut acc: Option<FqPoly> = None;
        let mut rest = e;
        while rest > 0 {
            let j = rest.trailing_zeros() as usize;
            let part = self.xi_pow2_entry(j);
            acc = Some(match acc {
                None => part,
                Some(prev) => self.modcomp(&prev, &part),
            });
            rest &= rest - 1;
        }
        let out = acc.expect("e >= 1");
        self.xi_memo
            .write()
            .expect("lock")
            .insert(e, out.clone());
        out
    }

    /// Power-of-two cache entry, extending the table by self-composition on
    /// first use.
    fn xi_pow2_entry(&self, j: usize) -> FqPoly {
        if let Some(hit) = self.xi_pow2.read().expect("lock").get(j) {
            return hit.clone();
        }
        let mut table = self.xi_pow2.write().expect("lock");
        while table.len() <= j {
            let last = table.last().expect("seeded at construction");
            let next = self.modcomp(last, last);
            table.push(next);
        }
        table[j].clone()
    }

    // ---- norms, traces, minimal polynomials ----

    /// `N_{L/F_q}(a)`, computed as `resultant(f, a)`.
    pub fn norm_to_base(&self, a: &ExtElem) -> u64 {
        self.modulus.resultant(&a.residue)
    }

    /// `a^((q^n-1)/(q^d-1))`, the norm into the subfield of degree `d`,
    /// evaluated as the product of the `pi^(d*i)(a)`.
    pub fn norm_to_subfield(&self, a: &ExtElem, d: usize) -> Result<ExtElem> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(Error::OddExtensionDegree);
        }
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut acc = a.clone();
        let mut conj = a.clone();
        for _ in 1..self.degree / d {
            conj = self.frobenius(&conj, d as i64);
            acc = self.mul(&acc, &conj);
        }
        Ok(acc)
    }

    /// `N_{L/F_{q^2}}(a)`; requires even n and nonzero a.
    pub fn norm_to_quadratic(&self, a: &ExtElem) -> Result<ExtElem> {
        if !self.degree.is_multiple_of(2) {
            return Err(Error::OddExtensionDegree);
        }
        let out = self.norm_to_subfield(a, 2)?;
        debug_assert_eq!(self.frobenius(&out, 2), out);
        Ok(out)
    }

    /// `Tr_{F_{q^2}/F_q}(b) = b + pi(b)` for `b` in the quadratic subfield,
    /// extracted as a base-field scalar.
    pub fn trace_quadratic_to_base(&self, b: &ExtElem) -> Result<u64> {
        if self.frobenius(b, 2) != *b {
            return Err(Error::NotInQuadraticSubfield);
        }
        let t = self.add(b, &self.frobenius(b, 1));
        if t.residue.degree().unwrap_or(0) > 0 {
            return Err(Error::Internal("quadratic trace left the base field"));
        }
        Ok(t.residue.coeff(0))
    }

    /// Monic minimal polynomial of `a` over `F_q`, found as the first linear
    /// dependency among `1, a, a^2, ...` by Gaussian elimination.
    ///
    /// For small moduli the row reductions accumulate `c * (q - b[i])` raw
    /// and reduce once per row (overflow-safe: each entry takes at most n+1
    /// additions below q^2).
    pub fn element_minpoly(&self, a: &ExtElem) -> FqPoly {
        let f = self.fq;
        let n = self.degree;
        let q = f.modulus();
        let fast = f.small_modulus() && (n as u128 + 2) * (q as u128) * (q as u128) < u64::MAX as u128;
        let mut basis: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
        let mut cur = self.one();
        for step in 0..=n {
            let mut vec: Vec<u64> = (0..n).map(|i| cur.coeff(i)).collect();
            let mut comb = vec![0u64; n + 1];
            comb[step] = 1;
            for (b, pivot, bc) in &basis {
                let c = vec[*pivot] % q;
                if c == 0 {
                    continue;
                }
                if fast {
                    for i in 0..n {
                        vec[i] = vec[i].wrapping_add(c.wrapping_mul(q - b[i]));
                    }
                    for (i, &x) in bc.iter().enumerate() {
                        comb[i] = comb[i].wrapping_add(c.wrapping_mul(q - x));
                    }
                    vec[*pivot] %= q;
                    debug_assert_eq!(vec[*pivot], 0);
                } else {
                    for i in 0..n {
                        vec[i] = f.sub(vec[i], f.mul(c, b[i]));
                    }
                    for (i, &x) in bc.iter().enumerate() {
                        comb[i] = f.sub(comb[i], f.mul(c, x));
                    }
                }
            }
            if fast {
                for x in vec.iter_mut() {
                    *x %= q;
                }
                for x in comb.iter_mut() {
                    *x %= q;
                }
            }
            if let Some(pivot) = vec.iter().position(|&x| x != 0) {
                let inv = f.inv(vec[pivot]).expect("nonzero");
                for x in vec.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for x in comb.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                basis.push((vec, pivot, comb));
                cur = self.mul(&cur, a);
            } else {
                return FqPoly::new(f, &comb);
            }
        }
        unreachable!("powers of a field element span at most n dimensions")
    }

    /// Horner evaluation of a base polynomial at an extension element.
    pub fn eval_poly(&self, p: &FqPoly, at: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        let Some(d) = p.degree() else {
            return acc;
        };
        for i in (0..=d).rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, &self.from_scalar(p.coeff(i)));
        }
        acc
    }
}

/// `F(G) mod H` by the baby-step/giant-step scheme: precompute `G^j mod H`
/// for `j <= s ~ sqrt(deg F)`, combine coefficient blocks of `F` against the
/// power table, then Horner with `G^s`.
pub fn modular_composition(f_in: &FqPoly, g_in: &FqPoly, h: &FqPoly) -> FqPoly {
    let fq = f_in.field();
    let Some(df) = f_in.degree() else {
        return FqPoly::zero(fq);
    };
    if df == 0 {
        return f_in.rem(h).expect("modulus nonzero");
    }
    let s = ((df + 1) as f64).sqrt().ceil() as usize;
    let mut powers: Vec<FqPoly> = Vec::with_capacity(s + 1);
    powers.push(FqPoly::one(fq));
    let g = g_in.rem(h).expect("modulus nonzero");
    for j in 1..=s {
        powers.push(powers[j - 1].mul(&g).rem(h).expect("modulus nonzero"));
    }
    let n = h.degree().expect("nonzero modulus");
    let blocks = df / s + 1;
    let mut inner: Vec<FqPoly> = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let mut acc = vec![0u64; n.max(1)];
        for j in 0..s {
            let c = f_in.coeff(b * s + j);
            if c == 0 {
                continue;
            }
            for (t, &pc) in powers[j].coeffs().iter().enumerate() {
                acc[t] = fq.add(acc[t], fq.mul(c, pc));
            }
        }
        inner.push(FqPoly::new(fq, &acc));
    }
    let giant = &powers[s];
    let mut acc = inner.pop().expect("at least one block");
    while let Some(block) = inner.pop() {
        acc = acc.mul(giant).rem(h).expect("modulus nonzero").add(&block);
    }
    acc
}
