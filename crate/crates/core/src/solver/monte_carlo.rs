//! The randomized trace solver: project the Frobenius-module orbit of a
//! random point through a random linear form, read off the minimal generator
//! with Berlekamp-Massey, and solve the resulting Hankel system for the
//! trace coefficients. Wrong guesses (unlucky projections, the ambiguous
//! leading coefficient) are caught by operator-identity verification and
//! retried with fresh randomness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::berlekamp_massey::berlekamp_massey;
use crate::drinfeld::{DrinfeldModule, PhiXOperator};
use crate::error::{Error, Result};
use crate::ext::ExtElem;
use crate::fq::Fq;
use crate::matrix::hankel_solve;
use crate::poly::FqPoly;

use super::{finish, Algorithm, CharPolyResult};

/// Operator-identity trials per candidate before a result is accepted: a
/// wrong candidate survives one trial with probability at most 1/q, so this
/// pins the false-accept probability below ~1e-6 at any modulus.
fn verify_trials(q: u64) -> usize {
    let mut t = 1usize;
    let mut bound = q as u128;
    while bound < 1 << 20 {
        bound *= q as u128;
        t += 1;
    }
    t.max(2)
}

/// Default ceiling on full restarts.
pub const DEFAULT_MAX_RETRIES: u32 = 20;

pub fn solve_monte_carlo(
    dm: &DrinfeldModule,
    seed: u64,
    max_retries: u32,
) -> Result<CharPolyResult> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let l = dm.ctx();
    let fq = dm.fq();
    let n = dm.n();
    let half_floor = n / 2;
    let half_ceil = n.div_ceil(2);
    let b = dm.frobenius_norm();
    let trials = verify_trials(fq.modulus());
    // the orbits dominate the cost: run them through the materialized matrix
    // of Phi_x (identical values to iterating the formula)
    let op = dm.phi_x_operator();
    for attempt in 0..max_retries {
        let alpha = l.random_elem(&mut rng);
        let ell: Vec<u64> = (0..n).map(|_| fq.sample(&mut rng)).collect();
        let orbit = op.orbit(&alpha, 2 * n, l);
        let proj: Vec<u64> = orbit.iter().map(|e| project(fq, &ell, e)).collect();
        let gamma = berlekamp_massey(fq, &proj);
        let nu = gamma.degree().unwrap_or(0);
        // the true minimal polynomial has degree in [n/2, n]; anything
        // smaller is a failed projection
        if nu < half_ceil || nu > n {
            continue;
        }
        let candidates: Vec<u64> = if n.is_multiple_of(2) && nu == half_floor {
            let resolved = dm.leading_trace_coefficient()?;
            let (other, _) = dm.leading_trace_candidates()?;
            if other == resolved {
                vec![resolved]
            } else {
                vec![resolved, other]
            }
        } else {
            vec![0]
        };
        'candidate: for &a_nu in &candidates {
            // Phi_A(alpha) = -alpha - Phi_B(alpha), so the truncated trace
            // satisfies sum_{i<nu} a_i Phi_{x^i}(alpha) = r~ with
            // r~ = -alpha - sum_i b_i Phi_{x^i}(alpha) - a_nu Phi_{x^nu}(alpha)
            let mut rt = alpha.clone();
            for (i, &bi) in b.coeffs().iter().enumerate() {
                if bi != 0 {
                    rt = l.add(&rt, &l.scale(&orbit[i], bi));
                }
            }
            rt = l.neg(&rt);
            if a_nu != 0 {
                rt = l.sub(&rt, &l.scale(&orbit[nu], a_nu));
            }
            let rhs: Vec<u64> = op
                .orbit(&rt, nu, l)
                .iter()
                .map(|e| project(fq, &ell, e))
                .collect();
            let sol = match hankel_solve(fq, &proj[..2 * nu - 1], &rhs) {
                Ok(sol) => sol,
                Err(Error::SingularMatrix) => break 'candidate,
                Err(e) => return Err(e),
            };
            // coefficients strictly between floor(n/2) and nu are
            // structurally zero; a violation means a bad projection
            if sol[half_floor.min(nu - 1) + 1..].iter().any(|&c| c != 0) {
                continue;
            }
            let mut coeffs = sol;
            coeffs.push(a_nu);
            let a = FqPoly::new(fq, &coeffs);
            if a.degree().is_some_and(|d| d > half_floor) {
                continue;
            }
            if verify_with_operator(dm, &op, &a, &b, trials, &mut rng) {
                return finish(dm, a, b, Algorithm::MonteCarlo, attempt, Some(nu));
            }
        }
    }
    Err(Error::RetriesExhausted(max_retries))
}

/// The operator-identity check of `verify_charpoly`, with the orbits routed
/// through the already-built matrix.
fn verify_with_operator<R: Rng>(
    dm: &DrinfeldModule,
    op: &PhiXOperator,
    a: &FqPoly,
    b: &FqPoly,
    trials: usize,
    rng: &mut R,
) -> bool {
    let l = dm.ctx();
    let n = dm.n();
    if a.degree().is_some_and(|d| d > n / 2) || b.degree() != Some(n) {
        return false;
    }
    for _ in 0..trials {
        let beta = l.random_elem(rng);
        let orbit = op.orbit(&beta, n + 1, l);
        let mut acc = beta.clone();
        for (i, &ai) in a.coeffs().iter().enumerate() {
            if ai != 0 {
                acc = l.add(&acc, &l.scale(&orbit[i], ai));
            }
        }
        for (i, &bi) in b.coeffs().iter().enumerate() {
            if bi != 0 {
                acc = l.add(&acc, &l.scale(&orbit[i], bi));
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

fn project(fq: Fq, ell: &[u64], e: &ExtElem) -> u64 {
    if fq.small_modulus() && ell.len() <= (1 << 14) {
        let mut acc = 0u64;
        for (j, &c) in ell.iter().enumerate() {
            acc = acc.wrapping_add(c.wrapping_mul(e.coeff(j)));
        }
        acc % fq.modulus()
    } else {
        let mut acc = 0u64;
        for (j, &c) in ell.iter().enumerate() {
            acc = fq.add(acc, fq.mul(c, e.coeff(j)));
        }
        acc
    }
}
