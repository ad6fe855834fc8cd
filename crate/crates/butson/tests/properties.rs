//! Cross-module invariants: ring laws under the multiplier maps, codec
//! round trips, equivalence invariance, and the oracle equivalence of the
//! two search methods.

use butson::bent::{eigenspace_search, exhaustive_search, verify_bent};
use butson::cyclotomic::CycElt;
use butson::existence::is_excluded;
use butson::matrix::{ButsonMatrix, MonomialMatrix};
use butson::metrics::{chinese_distance, covering_radius, distance_spectrum, WeightTable};
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn coprime_multipliers(q: usize) -> Vec<usize> {
    (1..q.max(2)).filter(|k| k.gcd(&q) == 1).collect()
}

fn cyc_strategy() -> impl Strategy<Value = CycElt> {
    (1usize..=12).prop_flat_map(|q| {
        prop::collection::vec(-20i64..=20, q)
            .prop_map(move |coeffs| CycElt::from_i64_coeffs(q, &coeffs).unwrap())
    })
}

proptest! {
    #[test]
    fn reduce_canonical_is_idempotent(z in cyc_strategy()) {
        let once = z.reduce_canonical();
        let twice = once.reduce_canonical();
        prop_assert_eq!(once.coeffs(), twice.coeffs());
    }

    #[test]
    fn multiplier_distributes_over_ring_ops(
        q in 2usize..=12,
        a in prop::collection::vec(-9i64..=9, 12),
        b in prop::collection::vec(-9i64..=9, 12),
        k_index in 0usize..8,
    ) {
        let a = CycElt::from_i64_coeffs(q, &a[..q]).unwrap();
        let b = CycElt::from_i64_coeffs(q, &b[..q]).unwrap();
        let ks = coprime_multipliers(q);
        let k = ks[k_index % ks.len()];
        let lhs = a.mul(&b).unwrap().apply_multiplier(k).unwrap();
        let rhs = a.apply_multiplier(k).unwrap().mul(&b.apply_multiplier(k).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let lhs = a.add(&b).unwrap().apply_multiplier(k).unwrap();
        let rhs = a.apply_multiplier(k).unwrap().add(&b.apply_multiplier(k).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
    }

    #[test]
    fn integral_norms_match_embedding(z in cyc_strategy()) {
        if let Some(n) = z.norm_sq().as_integer() {
            let exact = n.to_f64().unwrap();
            let float = z.embed().norm_sqr();
            prop_assert!((exact - float).abs() < 1e-9 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn codec_round_trip(
        n in 1usize..=6,
        q in 1usize..=9,
        seed in prop::collection::vec(0u32..1000, 36),
    ) {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|i| (0..n).map(|j| seed[i * 6 + j] % q as u32).collect())
            .collect();
        let m = ButsonMatrix::new(n, q, rows).unwrap();
        let back = ButsonMatrix::parse(&m.serialize()).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn chinese_distance_is_translation_invariant(
        q in 2usize..=10,
        u in prop::collection::vec(0u32..10, 1..8),
        v in prop::collection::vec(0u32..10, 1..8),
        alpha in 0u32..10,
    ) {
        let n = u.len().min(v.len());
        let tbl = WeightTable::new(q);
        let u: Vec<u32> = u[..n].iter().map(|&e| e % q as u32).collect();
        let v: Vec<u32> = v[..n].iter().map(|&e| e % q as u32).collect();
        let a = alpha % q as u32;
        let us: Vec<u32> = u.iter().map(|&e| (e + a) % q as u32).collect();
        let vs: Vec<u32> = v.iter().map(|&e| (e + a) % q as u32).collect();
        let d1 = chinese_distance(&u, &v, &tbl).unwrap();
        let d2 = chinese_distance(&us, &vs, &tbl).unwrap();
        prop_assert!((d1.value() - d2.value()).abs() < 1e-9);
    }
}

fn random_monomial(n: usize, q: usize, seed: u64) -> MonomialMatrix {
    // small deterministic LCG; quality is irrelevant, variety is enough
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, next() % (i + 1));
    }
    let diag: Vec<u32> = (0..n).map(|_| (next() % q) as u32).collect();
    MonomialMatrix::new(q, perm, diag).unwrap()
}

#[test]
fn butson_verdict_is_equivalence_invariant() {
    let cases = vec![
        ButsonMatrix::fourier(3, 1),
        ButsonMatrix::fourier(4, 1),
        ButsonMatrix::group_invariant(2, 1),
        ButsonMatrix::fourier(2, 2),
        // and one non-Butson matrix to check the negative verdict too
        ButsonMatrix::new(3, 3, vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 2, 2]]).unwrap(),
    ];
    for h in cases {
        let expect = h.verify_butson();
        for seed in 0..8u64 {
            let p = random_monomial(h.n(), h.q(), seed);
            let qm = random_monomial(h.n(), h.q(), seed + 101);
            let moved = h.apply_monomials(&p, &qm).unwrap();
            assert_eq!(moved.verify_butson(), expect, "seed={seed}");
        }
    }
}

#[test]
fn kronecker_of_verified_verifies_up_to_order_16() {
    let f2 = ButsonMatrix::fourier(2, 1);
    let f3 = ButsonMatrix::fourier(3, 1);
    let f4 = ButsonMatrix::fourier(4, 1);
    let f22 = ButsonMatrix::fourier(2, 2);
    let g2 = ButsonMatrix::group_invariant(2, 1);
    let pairs: Vec<(&ButsonMatrix, &ButsonMatrix)> = vec![
        (&f2, &f2),
        (&f2, &g2),
        (&g2, &g2),
        (&f3, &f3),
        (&f4, &f4),
        (&f2, &f22),
        (&f22, &f22),
    ];
    for (a, b) in pairs {
        if a.n() * b.n() <= 16 {
            let k = a.kronecker(b).unwrap();
            assert!(k.verify_butson(), "{}x{} q={}", a.n(), b.n(), a.q());
        }
    }
}

#[test]
fn dephase_is_a_monomial_equivalence() {
    for h in [
        ButsonMatrix::fourier(4, 1),
        ButsonMatrix::group_invariant(3, 1),
    ] {
        let d = h.dephase();
        assert!(d.verify_butson());
        assert!((0..h.n()).all(|i| d.entry(i, 0) == 0 && d.entry(0, i) == 0));
        // the explicit monomial pair realizing the dephasing
        let q = h.q() as u32;
        let p_diag: Vec<u32> = (0..h.n()).map(|i| (q - h.entry(i, 0)) % q).collect();
        let q_diag: Vec<u32> = (0..h.n())
            .map(|j| (h.entry(0, j) + q - h.entry(0, 0)) % q)
            .collect();
        let p = MonomialMatrix::new(h.q(), (0..h.n()).collect(), p_diag).unwrap();
        let qm = MonomialMatrix::new(h.q(), (0..h.n()).collect(), q_diag).unwrap();
        assert_eq!(h.apply_monomials(&p, &qm).unwrap(), d);
    }
}

#[test]
fn full_code_is_translate_closed() {
    for h in [
        ButsonMatrix::fourier(5, 1),
        ButsonMatrix::fourier(2, 2),
        ButsonMatrix::group_invariant(3, 1),
    ] {
        assert!(h.full_code().is_translate_closed());
    }
}

/// Both search methods agree, solution for solution, on every in-repo
/// desk-scale instance and every valid multiplier.
#[test]
fn oracle_equivalence_of_search_methods() {
    let budget = 1u128 << 24;
    let f2 = ButsonMatrix::fourier(2, 1);
    let cases: Vec<(String, ButsonMatrix)> = vec![
        ("F_2".into(), f2.clone()),
        ("F_3".into(), ButsonMatrix::fourier(3, 1)),
        ("F_4".into(), ButsonMatrix::fourier(4, 1)),
        ("F_5".into(), ButsonMatrix::fourier(5, 1)),
        ("F_2xF_2".into(), f2.kronecker(&f2).unwrap()),
    ];
    for (name, h) in cases {
        for k in coprime_multipliers(h.q()) {
            let a = exhaustive_search(&h, k, budget).unwrap();
            let b = eigenspace_search(&h, k, budget).unwrap();
            assert_eq!(a, b, "{name} k={k}");
        }
    }
}

/// Forcing the composition budget to zero pushes the eigenspace method
/// onto its float-eigenvalue fallback targets; the solution set must not
/// change (final acceptance never depends on the float λ).
#[test]
fn eigen_fallback_targets_agree_with_exact_targets() {
    use butson::bent::eigenspace_search_with;
    let f2 = ButsonMatrix::fourier(2, 1);
    let cases = vec![
        (ButsonMatrix::fourier(3, 1), vec![1usize, 2]),
        (ButsonMatrix::fourier(4, 1), vec![1, 3]),
        (f2.kronecker(&f2).unwrap(), vec![1]),
    ];
    for (h, ks) in cases {
        for k in ks {
            let exact_targets = eigenspace_search(&h, k, 1 << 24).unwrap();
            let fallback = eigenspace_search_with(&h, k, 1 << 24, 1).unwrap();
            assert_eq!(exact_targets, fallback, "n={} k={k}", h.n());
        }
    }
}

/// The 9×9 Kronecker square still agrees between the two methods.
#[test]
fn oracle_equivalence_on_f3_square() {
    let f3 = ButsonMatrix::fourier(3, 1);
    let h = f3.kronecker(&f3).unwrap();
    for k in [1usize, 2] {
        let a = exhaustive_search(&h, k, 1 << 24).unwrap();
        let b = eigenspace_search(&h, k, 1 << 24).unwrap();
        assert_eq!(a.len(), b.len(), "k={k}");
        assert_eq!(a, b, "k={k}");
    }
}

/// Finding a trivial-multiplier solution certifies that the existence
/// sieve cannot exclude those parameters.
#[test]
fn found_solutions_are_consistent_with_the_sieve() {
    let cases = vec![
        ButsonMatrix::group_invariant(2, 1),
        ButsonMatrix::fourier(4, 1),
        ButsonMatrix::fourier(2, 1)
            .kronecker(&ButsonMatrix::fourier(2, 1))
            .unwrap(),
    ];
    for h in cases {
        let sols = exhaustive_search(&h, 1, 1 << 24).unwrap();
        if !sols.is_empty() {
            assert!(
                !is_excluded(h.n(), h.q(), 1 << 24).unwrap(),
                "n={} q={}",
                h.n(),
                h.q()
            );
        }
    }
}

#[test]
fn spectrum_containment_is_equivalence_invariant() {
    let h = ButsonMatrix::fourier(4, 1);
    for seed in 0..4u64 {
        let p = random_monomial(4, 4, seed);
        let qm = random_monomial(4, 4, seed + 7);
        let moved = h.apply_monomials(&p, &qm).unwrap();
        let rep = distance_spectrum(&moved);
        assert!(rep.contained, "seed={seed}");
    }
}

#[test]
fn covering_radius_survives_monomial_transforms_on_f3() {
    let h = ButsonMatrix::fourier(3, 1);
    let base = covering_radius(&h.full_code(), 1 << 24).unwrap().value;
    for seed in 0..6u64 {
        let p = random_monomial(3, 3, seed);
        let qm = random_monomial(3, 3, seed + 13);
        let moved = h.apply_monomials(&p, &qm).unwrap();
        let r = covering_radius(&moved.full_code(), 1 << 24).unwrap().value;
        assert_eq!(r, base, "seed={seed}");
    }
}

/// Θ is a homomorphism: the image of a product is the product of the
/// images, on both coordinates.
#[test]
fn theta_map_is_a_homomorphism_on_random_pairs() {
    use butson::autgroup::theta_map;
    let (n, q) = (4usize, 5usize);
    for seed in 0..10u64 {
        let x1 = random_monomial(n, q, seed);
        let x2 = random_monomial(n, q, seed + 31);
        let prod = x1.compose(&x2).unwrap();
        let (a1, a2) = theta_map(&x1, &x1);
        let (b1, b2) = theta_map(&x2, &x2);
        let (c1, c2) = theta_map(&prod, &prod);
        let compose =
            |g: &[usize], h: &[usize]| -> Vec<usize> { (0..g.len()).map(|i| g[h[i]]).collect() };
        assert_eq!(compose(&a1, &b1), c1, "seed={seed}");
        assert_eq!(compose(&a2, &b2), c2, "seed={seed}");
    }
}

/// The eigenspace method is not tied to symmetric matrices: random
/// monomial images of F_4 (no longer symmetric or dephased) still agree
/// with the exhaustive oracle for every valid multiplier.
#[test]
fn oracle_equivalence_on_transformed_matrices() {
    let h = ButsonMatrix::fourier(4, 1);
    for seed in 0..3u64 {
        let p = random_monomial(4, 4, seed + 1);
        let qm = random_monomial(4, 4, seed + 53);
        let moved = h.apply_monomials(&p, &qm).unwrap();
        assert!(moved.verify_butson());
        for k in [1usize, 3] {
            let a = exhaustive_search(&moved, k, 1 << 24).unwrap();
            let b = eigenspace_search(&moved, k, 1 << 24).unwrap();
            assert_eq!(a, b, "seed={seed} k={k}");
        }
    }
}

/// The order-16 Kronecker square of F_4 inherits bent sequences from its
/// factors, so its covering-radius lower bound 2n − 2√n = 24 applies.
#[test]
fn f4_square_has_kronecker_solutions_and_lower_bound_24() {
    use butson::constructions::kronecker_bent;
    use butson::metrics::covering_bounds;
    let f4 = ButsonMatrix::fourier(4, 1);
    let h = f4.kronecker(&f4).unwrap();
    let sols = exhaustive_search(&f4, 1, 1 << 24).unwrap();
    assert!(!sols.is_empty());
    let combined = kronecker_bent(&sols[0], &sols[1], 4).unwrap();
    let lam = verify_bent(&h, &combined.x, 1).unwrap().expect("bent");
    assert_eq!(lam, combined.lambda);
    let (lower, upper) = covering_bounds(16, 4, true, true);
    assert_eq!(lower, Some(24.0));
    assert!((upper.unwrap() - (32.0 - 32f64.sqrt())).abs() < 1e-12);
}

/// Acting with ζ·X on a solution twists λ by ζ^{1−k}; running the check
/// through `verify_bent` on fresh instances guards the exact kernel.
#[test]
fn scaling_law_on_f4_solutions() {
    let h = ButsonMatrix::fourier(4, 1);
    for k in [1usize, 3] {
        for sol in exhaustive_search(&h, k, 1 << 24).unwrap() {
            for s in 0..4u32 {
                let shifted: Vec<u32> = sol.x.iter().map(|&e| (e + s) % 4).collect();
                let lam = verify_bent(&h, &shifted, k)
                    .unwrap()
                    .expect("shifted verifies");
                let twist = s as i64 * (1 - k as i64);
                assert_eq!(lam, sol.lambda.mul_root(twist));
            }
        }
    }
}
