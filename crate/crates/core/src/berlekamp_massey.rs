//! Berlekamp-Massey over `F_q`, returning the minimal generator in the
//! characteristic-polynomial convention.
//!
//! For a sequence satisfying `s_{k+v} = c_{v-1} s_{k+v-1} + ... + c_0 s_k`,
//! the returned polynomial is the monic `x^v - c_{v-1} x^{v-1} - ... - c_0`:
//! directly comparable with matrix minimal polynomials.

use crate::fq::Fq;
use crate::poly::FqPoly;

/// Minimal generating polynomial of a linearly recurrent sequence.
///
/// The input must have even length `2N`; the output degree is at most `N`,
/// and the all-zero sequence yields the constant `1`.
pub fn berlekamp_massey(field: Fq, seq: &[u64]) -> FqPoly {
    assert!(seq.len().is_multiple_of(2), "sequence length must be even");
    let f = field;
    // classic LFSR synthesis: connection polynomial c with c[0] = 1
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut delta_prev = 1u64;
    for i in 0..seq.len() {
        let mut delta = 0u64;
        for (j, &cj) in c.iter().enumerate() {
            if j <= i {
                delta = f.add(delta, f.mul(cj, seq[i - j]));
            }
        }
        if delta == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            let scale = f.mul(delta, f.inv(delta_prev).expect("nonzero discrepancy"));
            sub_scaled_shift(f, &mut c, &b, scale, m);
            b = t;
            l = i + 1 - l;
            delta_prev = delta;
            m = 1;
        } else {
            let scale = f.mul(delta, f.inv(delta_prev).expect("nonzero discrepancy"));
            sub_scaled_shift(f, &mut c, &b, scale, m);
            m += 1;
        }
    }
    // reverse c padded to length l+1: x^l * c(1/x), monic since c[0] = 1
    let mut rev = vec![0u64; l + 1];
    for (j, &cj) in c.iter().enumerate().take(l + 1) {
        rev[l - j] = cj;
    }
    FqPoly::new(f, &rev)
}

fn sub_scaled_shift(f: Fq, c: &mut Vec<u64>, b: &[u64], scale: u64, shift: usize) {
    if c.len() < b.len() + shift {
        c.resize(b.len() + shift, 0);
    }
    for (j, &bj) in b.iter().enumerate() {
        c[j + shift] = f.sub(c[j + shift], f.mul(scale, bj));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn fq(q: u64) -> Fq {
        Fq::new(q).unwrap()
    }

    /// `gamma` annihilates `seq` in the characteristic convention.
    fn annihilates(f: Fq, gamma: &FqPoly, seq: &[u64]) -> bool {
        let v = match gamma.degree() {
            None => return seq.iter().all(|&s| s == 0),
            Some(0) => return seq.iter().all(|&s| s == 0),
            Some(v) => v,
        };
        for k in 0..seq.len().saturating_sub(v) {
            let mut acc = 0u64;
            for i in 0..=v {
                acc = f.add(acc, f.mul(gamma.coeff(i), seq[k + i]));
            }
            if acc != 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn zero_sequence() {
        let f = fq(97);
        assert_eq!(berlekamp_massey(f, &[0; 10]), FqPoly::one(f));
    }

    #[test]
    fn fibonacci_mod_97() {
        let f = fq(97);
        let mut seq = vec![1u64, 1];
        while seq.len() < 10 {
            let k = seq.len();
            seq.push(f.add(seq[k - 1], seq[k - 2]));
        }
        // x^2 - x - 1
        assert_eq!(berlekamp_massey(f, &seq), FqPoly::new(f, &[96, 96, 1]));
    }

    #[test]
    fn geometric() {
        let f = fq(97);
        let seq: Vec<u64> = (0..8).map(|i| f.pow(3, i)).collect();
        assert_eq!(berlekamp_massey(f, &seq), FqPoly::new(f, &[94, 1])); // x - 3
    }

    #[test]
    fn delayed_impulse_gives_power_of_x() {
        let f = fq(5);
        // 1,0,0,...: s_{k+1} = 0 for all k, minimal generator x
        assert_eq!(
            berlekamp_massey(f, &[1, 0, 0, 0, 0, 0]),
            FqPoly::x(f)
        );
        // 0,0,1,0,0,...: generator x^3
        assert_eq!(
            berlekamp_massey(f, &[0, 0, 1, 0, 0, 0]),
            FqPoly::monomial(f, 1, 3)
        );
    }

    #[test]
    fn random_lfsr_recovered() {
        let f = fq(97);
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..100 {
            let v = rng.gen_range(1..6usize);
            let gamma = FqPoly::random_monic(f, v, &mut rng);
            let mut seq: Vec<u64> = (0..v).map(|_| f.sample(&mut rng)).collect();
            for k in 0..(4 * v - v) {
                let mut s = 0u64;
                for i in 0..v {
                    // s_{k+v} = -(sum gamma_i s_{k+i}) since gamma is monic
                    s = f.add(s, f.mul(gamma.coeff(i), seq[k + i]));
                }
                seq.push(f.neg(s));
            }
            let got = berlekamp_massey(f, &seq);
            assert!(annihilates(f, &got, &seq));
            assert!(got.degree().unwrap() <= v);
            // monic minimal generator divides the one we built from
            assert!(gamma.rem(&got).unwrap().is_zero());
        }
    }

    #[test]
    fn annihilation_property() {
        let f = fq(5);
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        for _ in 0..100 {
            let seq: Vec<u64> = (0..12).map(|_| f.sample(&mut rng)).collect();
            let gamma = berlekamp_massey(f, &seq);
            assert!(annihilates(f, &gamma, &seq), "{gamma:?} vs {seq:?}");
            assert!(gamma.is_monic());
        }
    }
}
