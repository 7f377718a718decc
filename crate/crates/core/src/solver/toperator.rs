//! The operator `T(U) = tau * U mod F` on skew polynomials of degree below
//! `deg F`, for `F = phi_E` with an irreducible modulus `E`.
//!
//! `T` is F_q-linear but not L-linear: its coefficient-vector action is
//! `v -> M pi(v)` with `M` the companion matrix of `F` read as a commutative
//! polynomial. Powers therefore telescope as `T^r(v) = M pi(M) ...
//! pi^(r-1)(M) pi^r(v)`, which square-and-multiply evaluates in O(log r)
//! matrix products. The inverse chain runs the same recurrence over
//! `N = pi^(-1)(M^(-1))` with inverse Frobenius twists.

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtFieldCtx};
use crate::poly::FqPoly;
use crate::skew::SkewPoly;

/// Dense square matrix over the extension field; only what the T-operator
/// chains need.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct LMat {
    size: usize,
    entries: Vec<ExtElem>,
}

impl LMat {
    fn zeros(l: &ExtFieldCtx, size: usize) -> Self {
        LMat {
            size,
            entries: vec![l.zero(); size * size],
        }
    }

    fn identity(l: &ExtFieldCtx, size: usize) -> Self {
        let mut m = Self::zeros(l, size);
        for i in 0..size {
            m.set(i, i, l.one());
        }
        m
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> &ExtElem {
        &self.entries[r * self.size + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: ExtElem) {
        self.entries[r * self.size + c] = v;
    }

    fn mul(&self, other: &Self, l: &ExtFieldCtx) -> Self {
        let s = self.size;
        let mut out = Self::zeros(l, s);
        for i in 0..s {
            for k in 0..s {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let v = l.add(out.get(i, j), &l.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub(crate) fn mul_vec(&self, v: &[ExtElem], l: &ExtFieldCtx) -> Vec<ExtElem> {
        let s = self.size;
        (0..s)
            .map(|i| {
                let mut acc = l.zero();
                for j in 0..s {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = l.add(&acc, &l.mul(a, &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    fn frobenius(&self, e: i64, l: &ExtFieldCtx) -> Self {
        LMat {
            size: self.size,
            entries: self.entries.iter().map(|x| l.frobenius(x, e)).collect(),
        }
    }

    /// Gauss-Jordan inverse.
    fn inverse(&self, l: &ExtFieldCtx) -> Result<Self> {
        let s = self.size;
        let mut a = self.clone();
        let mut inv = Self::identity(l, s);
        for col in 0..s {
            let pivot = (col..s)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for c in 0..s {
                    let tmp = a.get(pivot, c).clone();
                    a.set(pivot, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                    let tmp = inv.get(pivot, c).clone();
                    inv.set(pivot, c, inv.get(col, c).clone());
                    inv.set(col, c, tmp);
                }
            }
            let pinv = l.inv(a.get(col, col))?;
            for c in 0..s {
                a.set(col, c, l.mul(&pinv, a.get(col, c)));
                inv.set(col, c, l.mul(&pinv, inv.get(col, c)));
            }
            for r in 0..s {
                if r == col {
                    continue;
                }
                let t = a.get(r, col).clone();
                if t.is_zero() {
                    continue;
                }
                for c in 0..s {
                    let v = l.sub(a.get(r, c), &l.mul(&t, a.get(col, c)));
                    a.set(r, c, v);
                    let v = l.sub(inv.get(r, c), &l.mul(&t, inv.get(col, c)));
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }
}

pub enum Direction {
    Forward,
    Inverse,
}

pub struct TOperator<'a> {
    dm: &'a DrinfeldModule,
    /// `phi_E` normalized monic; its degree is `2 deg E`.
    f: SkewPoly,
    m: LMat,
    /// `pi^(-1)(M^(-1))`, the matrix of `T^(-1)`.
    n_inv: LMat,
}

impl<'a> TOperator<'a> {
    /// Requires `E(gamma(x)) != 0`, i.e. `E` distinct from the
    /// characteristic; that keeps the constant coefficient of `F` (and hence
    /// `M`) invertible.
    pub fn build(dm: &'a DrinfeldModule, e: &FqPoly) -> Result<Self> {
        let l = dm.ctx();
        let image = dm.phi_of_poly(e);
        let lead = image
            .coeffs()
            .last()
            .cloned()
            .ok_or(Error::Internal("phi image of a nonzero polynomial is nonzero"))?;
        let f = image.scale(&l.inv(&lead)?, l);
        if f.coeff(0, l).is_zero() {
            return Err(Error::ModulusHitsCharacteristic);
        }
        let delta = f.degree().expect("nonzero");
        debug_assert_eq!(delta, 2 * e.degree().expect("nonzero modulus"));
        // companion matrix: shift below the diagonal, negated coefficients in
        // the last column
        let mut m = LMat::zeros(l, delta);
        for j in 1..delta {
            m.set(j, j - 1, l.one());
        }
        for j in 0..delta {
            m.set(j, delta - 1, l.neg(&f.coeff(j, l)));
        }
        let n_inv = m.inverse(l)?.frobenius(-1, l);
        Ok(TOperator { dm, f, m, n_inv })
    }

    pub fn modulus_skew(&self) -> &SkewPoly {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.degree().expect("nonzero")
    }

    /// `T^r(v)` (forward) or `T^(-r)(v)` (inverse) on a coefficient vector.
    pub fn pow_apply(&self, r: usize, v: &[ExtElem], dir: Direction) -> Vec<ExtElem> {
        let l = self.dm.ctx();
        assert_eq!(v.len(), self.dim());
        if r == 0 {
            return v.to_vec();
        }
        let (base, sign) = match dir {
            Direction::Forward => (&self.m, 1i64),
            Direction::Inverse => (&self.n_inv, -1i64),
        };
        // accumulate P_r = B sigma(B) ... sigma^(r-1)(B) via
        // P_{2k} = P_k sigma^k(P_k), P_{k+1} = P_k sigma^k(B)
        let mut p = base.clone();
        let mut cur = 1usize;
        for bit in (0..usize::BITS - r.leading_zeros() - 1).rev() {
            p = p.mul(&p.frobenius(sign * cur as i64, l), l);
            cur *= 2;
            if r >> bit & 1 == 1 {
                p = p.mul(&base.frobenius(sign * cur as i64, l), l);
                cur += 1;
            }
        }
        debug_assert_eq!(cur, r);
        let twisted: Vec<ExtElem> = v
            .iter()
            .map(|x| l.frobenius(x, sign * r as i64))
            .collect();
        p.mul_vec(&twisted, l)
    }

    pub fn skew_to_vec(&self, u: &SkewPoly) -> Vec<ExtElem> {
        let l = self.dm.ctx();
        (0..self.dim()).map(|i| u.coeff(i, l)).collect()
    }

    pub fn vec_to_skew(&self, v: &[ExtElem]) -> SkewPoly {
        SkewPoly::new(v.to_vec())
    }
}

/// `A mod E` through the operator chains: reduce the characteristic identity
/// `tau^n phi_(-A) = tau^(2n) + phi_B` modulo `F = phi_E`, pull back with
/// `T^(-n)`, and invert the triangular phi system at degree `deg E - 1`.
pub fn trace_mod(dm: &DrinfeldModule, e: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    let l = dm.ctx();
    let n = dm.n();
    let top = TOperator::build(dm, e)?;
    let b_mod = b.rem(e)?;
    let v0 = dm.phi_of_poly(&b_mod).rem_right(top.modulus_skew(), l)?;
    let v0 = top.skew_to_vec(&v0);
    let one = top.skew_to_vec(&SkewPoly::one(l));
    let v1 = top.pow_apply(2 * n, &one, Direction::Forward);
    let w: Vec<ExtElem> = v0
        .iter()
        .zip(&v1)
        .map(|(a, b)| l.add(a, b))
        .collect();
    let phi_minus_a = top.pow_apply(n, &w, Direction::Inverse);
    let image = top.vec_to_skew(&phi_minus_a);
    let k = e.degree().expect("nonzero modulus") - 1;
    let table = dm.build_phi_table(k);
    Ok(dm.invert_phi(&image, &table, k)?.neg())
}
