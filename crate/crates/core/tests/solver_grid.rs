//! Cross-algorithm agreement on randomized instances, plus the randomized
//! solver's minimal-polynomial statistics and the frozen resolution of the
//! trace's leading coefficient.

use drinfeld::drinfeld::random_instance;
use drinfeld::moduli::enumerate_moduli;
use drinfeld::solver::{
    phi_x_matrix, solve_deterministic, solve_gekeler, solve_monte_carlo, solve_oracle, trace_mod,
    verify_charpoly, DEFAULT_MAX_RETRIES,
};
use rand::SeedableRng;

#[test]
fn four_way_agreement_small_grid() {
    let mut seed = 1000u64;
    for q in [5u64, 97] {
        for n in 1..=8usize {
            for m in (1..=n).filter(|m| n % m == 0) {
                seed += 1;
                let dm = random_instance(q, n, m, seed).unwrap();
                let oracle = solve_oracle(&dm).unwrap();
                let gek = solve_gekeler(&dm).unwrap();
                let det = solve_deterministic(&dm).unwrap();
                let mc = solve_monte_carlo(&dm, seed, DEFAULT_MAX_RETRIES).unwrap();
                for res in [&gek, &det, &mc] {
                    assert_eq!(res.a, oracle.a, "q={q} n={n} m={m} {:?}", res.algorithm);
                    assert_eq!(res.b, oracle.b, "q={q} n={n} m={m} {:?}", res.algorithm);
                }
                assert!(verify_charpoly(&dm, &oracle.a, &oracle.b, 10));
                assert!(oracle.a.degree().map_or(0, |d| d) <= n / 2);
                assert_eq!(oracle.b.degree(), Some(n));
            }
        }
    }
}

#[test]
fn trace_mod_matches_final_trace_on_every_modulus() {
    let mut seed = 2000u64;
    for q in [5u64, 499] {
        for n in [3usize, 4, 6] {
            seed += 1;
            let dm = random_instance(q, n, 1, seed).unwrap();
            let full = solve_oracle(&dm).unwrap();
            for e in enumerate_moduli(dm.fq(), n) {
                if &e == dm.char_p() {
                    continue;
                }
                let partial = trace_mod(&dm, &e, &full.b).unwrap();
                assert_eq!(partial, full.a.rem(&e).unwrap(), "modulus {e:?}");
            }
        }
    }
}

#[test]
fn monte_carlo_nu_statistics() {
    // nu sits in [ceil(n/2), n] and, for large q, almost always equals the
    // degree of the true minimal polynomial of Phi_x on the first attempt
    let mut first_attempt = 0usize;
    let mut nu_matches = 0usize;
    let mut total = 0usize;
    let mut seed = 3000u64;
    for n in 2..=10usize {
        for rep in 0..4u64 {
            seed += rep + 1;
            let dm = random_instance(499, n, 1, seed).unwrap();
            let res = solve_monte_carlo(&dm, seed ^ 0xabcd, DEFAULT_MAX_RETRIES).unwrap();
            let nu = res.nu.unwrap();
            assert!(nu >= n.div_ceil(2), "nu={nu} below n/2 for n={n}");
            assert!(nu <= n);
            total += 1;
            if res.retries == 0 {
                first_attempt += 1;
                let true_nu = phi_x_matrix(&dm).minpoly().degree().unwrap();
                if nu == true_nu {
                    nu_matches += 1;
                }
            }
        }
    }
    assert!(first_attempt * 10 >= total * 9, "{first_attempt}/{total}");
    assert!(nu_matches * 10 >= first_attempt * 9, "{nu_matches}/{first_attempt}");
}

#[test]
fn leading_coefficient_resolution_regression() {
    // whenever deg A = n/2 the resolved trace-form value must equal the
    // oracle's leading coefficient; this pins the sign convention
    let mut hits = 0usize;
    let mut seed = 4000u64;
    for q in [5u64, 7, 97] {
        for n in [2usize, 4, 6, 8] {
            for m in (1..=n).filter(|m| n % m == 0) {
                seed += 1;
                let dm = random_instance(q, n, m, seed).unwrap();
                let oracle = solve_oracle(&dm).unwrap();
                if oracle.a.degree() == Some(n / 2) {
                    let resolved = dm.leading_trace_coefficient().unwrap();
                    assert_eq!(
                        resolved,
                        oracle.a.coeff(n / 2),
                        "q={q} n={n} m={m} seed={seed}"
                    );
                    hits += 1;
                }
            }
        }
    }
    assert!(hits >= 20, "corpus too thin: {hits} full-degree instances");
}

#[test]
fn projected_orbit_minimal_generator_divides_charpoly() {
    // the minimal generator of a projected orbit divides the minimal
    // polynomial of Phi_x, hence the monic characteristic polynomial
    // 1 + A + B (normalized by lc(B)); generically they coincide
    use drinfeld::berlekamp_massey::berlekamp_massey;
    let dm = drinfeld::drinfeld::example_instance();
    let l = dm.ctx();
    let fq = dm.fq();
    let n = dm.n();
    let matrix = dm.phi_x_matrix();
    let true_min = matrix.minpoly();
    let chi = matrix.charpoly();
    assert!(true_min.degree().unwrap() >= 2);
    assert!(chi.rem(&true_min).unwrap().is_zero());
    let oracle = solve_oracle(&dm).unwrap();
    let one_a_b = drinfeld::FqPoly::one(fq)
        .add(&oracle.a)
        .add(&oracle.b)
        .scale(fq.inv(oracle.b.leading_coeff()).unwrap());
    assert_eq!(one_a_b, chi);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(55);
    let mut exact_hits = 0;
    for _ in 0..20 {
        let alpha = l.random_elem(&mut rng);
        let ell: Vec<u64> = (0..n).map(|_| fq.sample(&mut rng)).collect();
        let seq: Vec<u64> = dm
            .phi_orbit(&alpha, 2 * n)
            .iter()
            .map(|e| {
                let mut acc = 0u64;
                for (j, &c) in ell.iter().enumerate() {
                    acc = fq.add(acc, fq.mul(c, e.coeff(j)));
                }
                acc
            })
            .collect();
        let gamma = berlekamp_massey(fq, &seq);
        assert!(chi.rem(&gamma).unwrap().is_zero(), "{gamma:?} does not divide {chi:?}");
        assert!(true_min.rem(&gamma).unwrap().is_zero());
        if gamma == true_min {
            exact_hits += 1;
        }
    }
    // at q = 5 unfaithful projections are common; some draws must still hit
    assert!(exact_hits >= 1, "no projection recovered the minimal polynomial");
}

#[test]
fn verifier_mutation_sample() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
    let mut rejected = 0usize;
    let mut total = 0usize;
    while total < 60 {
        let q = [5u64, 97][total % 2];
        let n = 2 + total % 5;
        let dm = random_instance(q, n, 1, rng.gen()).unwrap();
        let good = solve_oracle(&dm).unwrap();
        assert!(verify_charpoly(&dm, &good.a, &good.b, 10));
        // mutate one coefficient of A or B
        let fq = dm.fq();
        let mutate_a = rng.gen_bool(0.5);
        let (mut ac, mut bc) = (vec![0u64; n / 2 + 1], vec![0u64; n + 1]);
        for (i, c) in ac.iter_mut().enumerate() {
            *c = good.a.coeff(i);
        }
        for (i, c) in bc.iter_mut().enumerate() {
            *c = good.b.coeff(i);
        }
        let target = if mutate_a { &mut ac } else { &mut bc };
        let pos = rng.gen_range(0..target.len());
        let old = target[pos];
        let new = loop {
            let v = fq.sample(&mut rng);
            if v != old {
                break v;
            }
        };
        target[pos] = new;
        let a = drinfeld::FqPoly::new(fq, &ac);
        let b = drinfeld::FqPoly::new(fq, &bc);
        if !verify_charpoly(&dm, &a, &b, 10) {
            rejected += 1;
        }
        total += 1;
    }
    assert_eq!(rejected, total, "every mutant must be rejected");
}
