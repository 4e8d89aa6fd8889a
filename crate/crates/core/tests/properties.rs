//! Algebraic invariants over randomly drawn instances.

use std::sync::Arc;

use lrpc_core::bound::{success_bound_exact, to_decimal};
use lrpc_core::lrpc::generate_code;
use lrpc_core::modlin::{sample_free_submodule, solve_linear};
use lrpc_core::{CodeParams, Extension, LocalRing, Mat, ProductRing, RingElem, RingOps, Submodule};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rings() -> Vec<Arc<LocalRing>> {
    vec![
        Arc::new(LocalRing::zmod(2, 3).unwrap()),
        Arc::new(LocalRing::zmod(3, 2).unwrap()),
        Arc::new(LocalRing::gr(2, 2, 2).unwrap()),
        Arc::new(LocalRing::quotient(2, 2, &[0, 0, 1]).unwrap()),
        Arc::new(LocalRing::quotient(3, 1, &[0, 0, 0, 1]).unwrap()),
    ]
}

fn ring_strategy() -> impl Strategy<Value = Arc<LocalRing>> {
    (0..rings().len()).prop_map(|i| rings()[i].clone())
}

fn random_mat(r: &LocalRing, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat<RingElem> {
    Mat::from_fn(rows, cols, |_, _| r.random(rng))
}

fn mat_vec(r: &LocalRing, a: &Mat<RingElem>, x: &[RingElem]) -> Vec<RingElem> {
    (0..a.rows()).map(|i| (0..a.cols()).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[(i, j)], &x[j])))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(r in ring_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (r.random(&mut rng), r.random(&mut rng), r.random(&mut rng));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&a, &r.mul(&b, &c)), r.mul(&r.mul(&a, &b), &c));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
        match r.inv(&a) {
            Some(i) => prop_assert_eq!(r.mul(&a, &i), r.one()),
            None => prop_assert!(!r.is_unit(&a)),
        }
        // non-units form the maximal ideal
        if !r.is_unit(&a) && !r.is_unit(&b) {
            prop_assert!(!r.is_unit(&r.add(&a, &b)));
        }
    }

    #[test]
    fn extension_field_axioms(r in ring_strategy(), m in 2usize..6, seed in any::<u64>()) {
        // integer moduli cannot give even-degree extensions of F_4
        let s = Extension::with_default_modulus(r, m);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (s.random(&mut rng), s.random(&mut rng), s.random(&mut rng));
        prop_assert_eq!(s.mul(&a, &s.mul(&b, &c)), s.mul(&s.mul(&a, &b), &c));
        prop_assert_eq!(s.mul(&a, &s.add(&b, &c)), s.add(&s.mul(&a, &b), &s.mul(&a, &c)));
        if let Some(i) = s.inv(&a) {
            prop_assert_eq!(s.mul(&a, &i), s.one());
        }
        prop_assert_eq!(s.from_vec(&s.vec_rep(&a)).unwrap(), a);
    }

    #[test]
    fn solutions_satisfy_the_system(r in ring_strategy(), k in 1usize..4, n in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&r, k, n, &mut rng);
        let x0: Vec<RingElem> = (0..n).map(|_| r.random(&mut rng)).collect();
        let b = mat_vec(&r, &a, &x0);
        let sol = solve_linear(&r, &a, &b).unwrap();
        let x = sol.particular.clone().expect("b is in the image");
        prop_assert_eq!(mat_vec(&r, &a, &x), b);
        for v in &sol.kernel {
            prop_assert!(mat_vec(&r, &a, v).iter().all(|y| r.is_zero(y)));
        }
    }

    #[test]
    fn submodule_lattice(r in ring_strategy(), n in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..4);
            Submodule::from_mat(r.clone(), random_mat(&r, k, n, rng))
        };
        let (a, b) = (gens(&mut rng), gens(&mut rng));
        let sum = a.sum(&b).unwrap();
        let cap = a.intersect(&b).unwrap();
        prop_assert!(sum.contains_module(&a).unwrap() && sum.contains_module(&b).unwrap());
        prop_assert!(a.contains_module(&cap).unwrap() && b.contains_module(&cap).unwrap());
        for m in [&a, &b, &sum, &cap] {
            let (frk, free) = m.free_module_test();
            prop_assert!(frk <= m.rank());
            prop_assert_eq!(free, frk == m.rank());
        }
        let g = sample_free_submodule(&r, rng.gen_range(0..=n), n, &mut rng).unwrap();
        prop_assert!(a.intersect_with_free(&g).unwrap().equals(&a.intersect(&g).unwrap()).unwrap());
    }

    #[test]
    fn crt_round_trip(n in 2u64..5000, x in 0u64..1_000_000) {
        let r = ProductRing::zmod(n).unwrap();
        prop_assert_eq!(r.to_integer(&r.from_integer(x as i64)).unwrap(), x % n);
        let y = (x * 7 + 3) as i64;
        let prod = r.mul(&r.from_integer(x as i64), &r.from_integer(y));
        prop_assert_eq!(r.to_integer(&prod).unwrap(), ((x as u128 * y as u128) % n as u128) as u64);
    }

    #[test]
    fn bound_is_a_probability_and_decreasing(lambda in 1usize..4, m in 4usize..30, r in 2usize..16) {
        let p = CodeParams::new(r + 4, 4, lambda);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let mut prev = BigRational::from_integer(1.into());
        for t in 0..=p.t_max(m) {
            let b = success_bound_exact(2, p, m, t).unwrap();
            prop_assert!(b >= BigRational::from_integer(0.into()) && b <= prev);
            prev = b;
        }
        let d = to_decimal(&prev, 6);
        prop_assert_eq!(d.len(), 8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn codewords_round_trip(seed in any::<u64>()) {
        let z4 = Arc::new(LocalRing::zmod(2, 2).unwrap());
        let ext = Arc::new(Extension::with_default_modulus(z4, 8).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = generate_code(ext.clone(), CodeParams::new(8, 4, 2).unwrap(), &mut rng).unwrap();
        let msg: Vec<_> = (0..4).map(|_| ext.random(&mut rng)).collect();
        let c = code.encode(&msg).unwrap();
        prop_assert!(code.is_codeword(&c));
        prop_assert_eq!(code.decode(&c).unwrap(), c.clone());
        let back = lrpc_core::LrpcCode::from_json(&code.to_json()).unwrap();
        prop_assert_eq!(back.h(), code.h());
    }
}
