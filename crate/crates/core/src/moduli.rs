//! Irreducibility testing, enumeration of small irreducible moduli for the
//! CRT-based solver, and polynomial Chinese remaindering.

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::poly::FqPoly;

/// Rabin irreducibility test for a monic polynomial of degree >= 1:
/// `x^(q^t) = x mod e`, and `gcd(x^(q^(t/r)) - x, e) = 1` for every prime
/// `r | t`.
pub fn irreducible_test(e: &FqPoly) -> bool {
    let t = match e.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(t) => t,
    };
    debug_assert!(e.is_monic());
    let f = e.field();
    let q = f.modulus();
    let x = FqPoly::x(f);
    let prime_divs = prime_divisors(t);
    // h = x^(q^i) mod e, raised one q-power per round
    let mut h = x.clone();
    for i in 1..=t {
        h = FqPoly::powmod(&h, q, e).expect("modulus nonzero");
        if prime_divs.iter().any(|&r| i * r == t) {
            let g = h.sub(&x).gcd(e);
            if g.degree() != Some(0) {
                return false;
            }
        }
    }
    h == x
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Pairwise-distinct monic irreducible moduli whose degree sum stays at or
/// above `floor(n/2) + 1` even after any single modulus is discarded (the
/// solver drops the one equal to the characteristic, when present).
///
/// When the base field is large enough the moduli are the linear polynomials
/// `x - e` for `e = 0, 1, 2, ...`; otherwise all candidates of degree
/// `t = ceil(log_q(n+1))` are sieved by `irreducible_test`, moving to degree
/// `t + 1` in the (theoretically unreachable) event the pool runs dry.
pub fn enumerate_moduli(field: Fq, n: usize) -> Vec<FqPoly> {
    let q = field.modulus();
    let bound = n / 2 + 1;
    let mut out = Vec::new();
    let mut sum = 0usize;
    let mut max_deg = 0usize;
    if q as u128 > bound as u128 {
        // linear branch: q distinct linear moduli exist, enough for the spare
        let mut e = 0u64;
        while sum < bound + max_deg || out.is_empty() {
            out.push(FqPoly::new(field, &[field.neg(e), 1]));
            sum += 1;
            max_deg = 1;
            e += 1;
        }
        return out;
    }
    let mut t = {
        // ceil(log_q(n+1))
        let mut t = 0usize;
        let mut p = 1u128;
        while p < (n + 1) as u128 {
            p *= q as u128;
            t += 1;
        }
        t.max(1)
    };
    loop {
        let total: u128 = (q as u128).pow(t as u32);
        for idx in 0..total {
            let e = monic_from_index(field, t, idx);
            if irreducible_test(&e) {
                sum += t;
                max_deg = max_deg.max(t);
                out.push(e);
                if sum >= bound + max_deg {
                    return out;
                }
            }
        }
        t += 1;
    }
}

/// The `idx`-th monic polynomial of degree `t` in lexicographic coefficient
/// order, little-endian digits of `idx` in base q.
fn monic_from_index(field: Fq, t: usize, mut idx: u128) -> FqPoly {
    let q = field.modulus() as u128;
    let mut coeffs = vec![0u64; t + 1];
    for c in coeffs.iter_mut().take(t) {
        *c = (idx % q) as u64;
        idx /= q;
    }
    coeffs[t] = 1;
    FqPoly::new(field, &coeffs)
}

/// Incremental CRT: the unique `P` with `deg P < sum of moduli degrees` and
/// `P = r_i mod m_i` for each residue pair `(r_i, m_i)`.
pub fn crt_combine(residues: &[(FqPoly, FqPoly)]) -> Result<FqPoly> {
    let (mut acc, mut modulus) = residues
        .first()
        .map(|(r, m)| (r.clone(), m.clone()))
        .ok_or(Error::Internal("crt_combine on empty residue list"))?;
    acc = acc.rem(&modulus)?;
    for (r, m) in &residues[1..] {
        let (g, u, v) = modulus.xgcd(m);
        if g.degree() != Some(0) {
            return Err(Error::NonCoprimeModuli);
        }
        // u*modulus + v*m = 1: glue acc (mod modulus) with r (mod m)
        let combined = modulus
            .mul(&u)
            .mul(r)
            .add(&m.mul(&v).mul(&acc));
        modulus = modulus.mul(m);
        acc = combined.rem(&modulus)?;
    }
    Ok(acc)
}
