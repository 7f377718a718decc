//! The twisted polynomial ring `L<tau>` with the commutation rule
//! `tau u = u^q tau`.
//!
//! Coefficients are little-endian in `tau` and kept canonical (no trailing
//! zeros). Multiplication is schoolbook: each coefficient product carries
//! one Frobenius power, fetched through the field context.

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtFieldCtx};

#[derive(Clone, PartialEq, Eq)]
pub struct SkewPoly {
    coeffs: Vec<ExtElem>,
}

impl SkewPoly {
    pub fn new(coeffs: Vec<ExtElem>) -> Self {
        let mut c = coeffs;
        while c.last().is_some_and(ExtElem::is_zero) {
            c.pop();
        }
        SkewPoly { coeffs: c }
    }

    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn from_elem(e: ExtElem) -> Self {
        Self::new(vec![e])
    }

    pub fn one(l: &ExtFieldCtx) -> Self {
        Self::from_elem(l.one())
    }

    /// The generator `tau`.
    pub fn tau(l: &ExtFieldCtx) -> Self {
        Self::new(vec![l.zero(), l.one()])
    }

    /// `tau^k`.
    pub fn tau_power(l: &ExtFieldCtx, k: usize) -> Self {
        let mut coeffs = vec![l.zero(); k + 1];
        coeffs[k] = l.one();
        SkewPoly { coeffs }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize, l: &ExtFieldCtx) -> ExtElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| l.zero())
    }

    pub fn coeffs(&self) -> &[ExtElem] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self, l: &ExtFieldCtx) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| l.add(&self.coeff(i, l), &other.coeff(i, l)))
            .collect();
        Self::new(out)
    }

    pub fn sub(&self, other: &Self, l: &ExtFieldCtx) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let out = (0..len)
            .map(|i| l.sub(&self.coeff(i, l), &other.coeff(i, l)))
            .collect();
        Self::new(out)
    }

    /// Left multiplication by a field element.
    pub fn scale(&self, c: &ExtElem, l: &ExtFieldCtx) -> Self {
        Self::new(self.coeffs.iter().map(|u| l.mul(c, u)).collect())
    }

    /// Twisted product: `(a tau^i)(b tau^j) = a pi^i(b) tau^(i+j)`. The right
    /// factor's coefficient vector is twisted once per row, so the total cost
    /// is one Frobenius application per coefficient pair.
    pub fn mul(&self, other: &Self, l: &ExtFieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let du = self.coeffs.len() - 1;
        let dv = other.coeffs.len() - 1;
        let mut out = vec![l.zero(); du + dv + 1];
        let mut twisted: Vec<ExtElem> = other.coeffs.clone();
        for (i, ui) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for t in twisted.iter_mut() {
                    *t = l.frobenius(t, 1);
                }
            }
            if ui.is_zero() {
                continue;
            }
            for (j, tj) in twisted.iter().enumerate() {
                out[i + j] = l.add(&out[i + j], &l.mul(ui, tj));
            }
        }
        Self::new(out)
    }

    /// Right Euclidean division: the unique `(Q, R)` with `self = Q*v + R`
    /// and `deg R < deg v`.
    pub fn divmod_right(&self, v: &Self, l: &ExtFieldCtx) -> Result<(Self, Self)> {
        let dv = v.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        while rem.last().is_some_and(ExtElem::is_zero) {
            rem.pop();
        }
        if rem.len() <= dv {
            return Ok((Self::zero(), Self::new(rem)));
        }
        let mut quo = vec![l.zero(); rem.len() - dv];
        let v_lead = &v.coeffs[dv];
        while rem.len() > dv {
            let dr = rem.len() - 1;
            let k = dr - dv;
            let lead = l.frobenius(v_lead, k as i64);
            let c = l.mul(&rem[dr], &l.inv(&lead).expect("nonzero leading coefficient"));
            quo[k] = c.clone();
            for (j, vj) in v.coeffs.iter().enumerate() {
                let t = l.mul(&c, &l.frobenius(vj, k as i64));
                rem[k + j] = l.sub(&rem[k + j], &t);
            }
            debug_assert!(rem[dr].is_zero());
            while rem.last().is_some_and(ExtElem::is_zero) {
                rem.pop();
            }
        }
        Ok((Self::new(quo), Self::new(rem)))
    }

    pub fn rem_right(&self, v: &Self, l: &ExtFieldCtx) -> Result<Self> {
        Ok(self.divmod_right(v, l)?.1)
    }

    /// The operator action: `sum u_j pi^j(a)`.
    pub fn apply(&self, a: &ExtElem, l: &ExtFieldCtx) -> ExtElem {
        let mut acc = l.zero();
        let mut conj = a.clone();
        for (j, uj) in self.coeffs.iter().enumerate() {
            if j > 0 {
                conj = l.frobenius(&conj, 1);
            }
            if !uj.is_zero() {
                acc = l.add(&acc, &l.mul(uj, &conj));
            }
        }
        acc
    }
}

/// Evaluates `u` as an operator at all the given points by baby-step /
/// giant-step: commute Frobenius powers left to split `u` into sqrt-size
/// chunks, evaluate the Frobenius grid of the points, take one matrix
/// product over `L`, and recombine with Horner in `tau^s`.
pub fn multipoint_eval(u: &SkewPoly, points: &[ExtElem], l: &ExtFieldCtx) -> Vec<ExtElem> {
    if points.is_empty() {
        return Vec::new();
    }
    let Some(du) = u.degree() else {
        return vec![l.zero(); points.len()];
    };
    // pad the length to the next perfect square s^2
    let len = du + 1;
    let s = (len as f64).sqrt().ceil() as usize;
    let mu = points.len();
    // u = sum_i tau^(s*i) U*_i with ustar[i][r] = pi^(-s*i)(u_(s*i+r))
    let mut ustar = vec![vec![l.zero(); s]; s];
    for (i, row) in ustar.iter_mut().enumerate() {
        for (r, slot) in row.iter_mut().enumerate() {
            let idx = s * i + r;
            if idx <= du {
                let c = &u.coeffs()[idx];
                if !c.is_zero() {
                    *slot = l.frobenius(c, -((s * i) as i64));
                }
            }
        }
    }
    // grid[r][j] = pi^r(alpha_j)
    let mut grid = vec![points.to_vec()];
    for r in 1..s {
        let next: Vec<ExtElem> = grid[r - 1].iter().map(|a| l.frobenius(a, 1)).collect();
        grid.push(next);
    }
    // beta[i][j] = U*_i(alpha_j), an (s x s) by (s x mu) product over L
    let mut beta = vec![vec![l.zero(); mu]; s];
    for (i, brow) in beta.iter_mut().enumerate() {
        for r in 0..s {
            let c = &ustar[i][r];
            if c.is_zero() {
                continue;
            }
            for (j, b) in brow.iter_mut().enumerate() {
                *b = l.add(b, &l.mul(c, &grid[r][j]));
            }
        }
    }
    // Horner: U(alpha_j) = beta_0 + tau^s(beta_1 + tau^s(beta_2 + ...))
    (0..mu)
        .map(|j| {
            let mut acc = beta[s - 1][j].clone();
            for i in (0..s - 1).rev() {
                acc = l.frobenius(&acc, s as i64);
                acc = l.add(&beta[i][j], &acc);
            }
            acc
        })
        .collect()
}

impl std::fmt::Debug for SkewPoly {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(w, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(w, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(w, "{c:?}")?;
            } else {
                write!(w, "{c:?} t^{i}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::poly::FqPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn f625() -> ExtFieldCtx {
        let fq = Fq::new(5).unwrap();
        ExtFieldCtx::new(fq, FqPoly::new(fq, &[2, 4, 4, 0, 1])).unwrap()
    }

    fn random_skew<R: Rng>(l: &ExtFieldCtx, deg: usize, rng: &mut R) -> SkewPoly {
        SkewPoly::new((0..=deg).map(|_| l.random_elem(rng)).collect())
    }

    #[test]
    fn tau_commutation() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        let tau = SkewPoly::tau(&l);
        for _ in 0..50 {
            let u = l.random_elem(&mut rng);
            // tau * u = u^q tau
            let lhs = tau.mul(&SkewPoly::from_elem(u.clone()), &l);
            let rhs = SkewPoly::new(vec![l.zero(), l.pow_q(&u)]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mul_identity() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(62);
        let one = SkewPoly::one(&l);
        for _ in 0..20 {
            let u = random_skew(&l, rng.gen_range(0..5), &mut rng);
            assert_eq!(u.mul(&one, &l), u);
            assert_eq!(one.mul(&u, &l), u);
        }
    }

    #[test]
    fn ring_axioms() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(63);
        for _ in 0..100 {
            let a = random_skew(&l, rng.gen_range(0..4), &mut rng);
            let b = random_skew(&l, rng.gen_range(0..4), &mut rng);
            let c = random_skew(&l, rng.gen_range(0..4), &mut rng);
            assert_eq!(a.mul(&b, &l).mul(&c, &l), a.mul(&b.mul(&c, &l), &l));
            assert_eq!(
                a.mul(&b.add(&c, &l), &l),
                a.mul(&b, &l).add(&a.mul(&c, &l), &l)
            );
        }
    }

    #[test]
    fn square_matches_operator_composition() {
        // (zeta + tau + tau^2)^2 acts as the operator applied twice
        let l = f625();
        let u = SkewPoly::new(vec![l.zeta(), l.one(), l.one()]);
        let sq = u.mul(&u, &l);
        let mut rng = ChaCha12Rng::seed_from_u64(64);
        for _ in 0..10 {
            let a = l.random_elem(&mut rng);
            assert_eq!(sq.apply(&a, &l), u.apply(&u.apply(&a, &l), &l));
        }
    }

    #[test]
    fn division_exact_and_small() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(65);
        for _ in 0..50 {
            let v = random_skew(&l, rng.gen_range(1..4), &mut rng);
            let w = random_skew(&l, rng.gen_range(0..4), &mut rng);
            if v.is_zero() {
                continue;
            }
            // u = w*v is right-divisible by v
            let u = w.mul(&v, &l);
            let (q, r) = u.divmod_right(&v, &l).unwrap();
            assert!(r.is_zero());
            assert_eq!(q, w);
        }
        // deg u < deg v leaves u untouched
        let v = random_skew(&l, 3, &mut rng);
        let u = random_skew(&l, 2, &mut rng);
        let (q, r) = u.divmod_right(&v, &l).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, u);
    }

    #[test]
    fn division_reconstruction() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(66);
        for _ in 0..200 {
            let u = random_skew(&l, rng.gen_range(0..7), &mut rng);
            let v = random_skew(&l, rng.gen_range(0..5), &mut rng);
            if v.is_zero() {
                assert!(u.divmod_right(&v, &l).is_err());
                continue;
            }
            let (q, r) = u.divmod_right(&v, &l).unwrap();
            assert_eq!(q.mul(&v, &l).add(&r, &l), u);
            if let (Some(dr), Some(dv)) = (r.degree(), v.degree()) { assert!(dr < dv) }
        }
    }

    #[test]
    fn apply_examples() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(67);
        let tau = SkewPoly::tau(&l);
        for _ in 0..20 {
            let a = l.random_elem(&mut rng);
            assert_eq!(tau.apply(&a, &l), l.pow_q(&a));
            assert_eq!(SkewPoly::one(&l).apply(&a, &l), a);
        }
    }

    #[test]
    fn apply_is_ring_morphism() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(68);
        for _ in 0..100 {
            let u = random_skew(&l, rng.gen_range(0..4), &mut rng);
            let v = random_skew(&l, rng.gen_range(0..4), &mut rng);
            let a = l.random_elem(&mut rng);
            assert_eq!(
                u.mul(&v, &l).apply(&a, &l),
                u.apply(&v.apply(&a, &l), &l)
            );
        }
    }

    #[test]
    fn apply_is_fq_linear() {
        let l = f625();
        let fq = l.fq();
        let mut rng = ChaCha12Rng::seed_from_u64(69);
        for _ in 0..100 {
            let u = random_skew(&l, rng.gen_range(0..4), &mut rng);
            let a = l.random_elem(&mut rng);
            let b = l.random_elem(&mut rng);
            let lam = fq.sample(&mut rng);
            let mu = fq.sample(&mut rng);
            let lhs = u.apply(
                &l.add(&l.scale(&a, lam), &l.scale(&b, mu)),
                &l,
            );
            let rhs = l.add(
                &l.scale(&u.apply(&a, &l), lam),
                &l.scale(&u.apply(&b, &l), mu),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn multipoint_tau() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(70);
        let a = l.random_elem(&mut rng);
        let b = l.random_elem(&mut rng);
        let got = multipoint_eval(&SkewPoly::tau(&l), &[a.clone(), b.clone()], &l);
        assert_eq!(got, vec![l.pow_q(&a), l.pow_q(&b)]);
    }

    #[test]
    fn multipoint_single_point_is_apply() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        for _ in 0..30 {
            let u = random_skew(&l, rng.gen_range(0..9), &mut rng);
            let a = l.random_elem(&mut rng);
            assert_eq!(
                multipoint_eval(&u, std::slice::from_ref(&a), &l),
                vec![u.apply(&a, &l)]
            );
        }
    }

    #[test]
    fn multipoint_matches_naive() {
        let l = f625();
        let mut rng = ChaCha12Rng::seed_from_u64(72);
        for _ in 0..100 {
            let u = random_skew(&l, rng.gen_range(0..16), &mut rng);
            let points: Vec<ExtElem> = (0..4).map(|_| l.random_elem(&mut rng)).collect();
            let fast = multipoint_eval(&u, &points, &l);
            let slow: Vec<ExtElem> = points.iter().map(|p| u.apply(p, &l)).collect();
            assert_eq!(fast, slow);
        }
    }
}
