use proptest::prelude::*;
use vaserstein::elem::BlockDecomposition;
use vaserstein::matrix::{psi, Matrix};
use vaserstein::projmod::{chi0_contract_inverse, chi0_form, lambda3};
use vaserstein::ring::{ring_parse, Elem, Ring};
use vaserstein::sample::{rand_kernel_base, rand_pf_one, rand_skew, rand_unit, rand_vec, rand_word, sampler};
use vaserstein::witt::{unit_action, VTriple};

const SPECS: [&str; 6] = ["Z", "Q", "Z/6", "Z/9", "F_7", "Z[x]"];

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop::sample::select(SPECS.to_vec()).prop_map(|s| ring_parse(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(ring in ring_strategy(), x in -50i64..50, y in -50i64..50, z in -50i64..50) {
        let (a, b, c) = (Elem::from_int(&ring, x), Elem::from_int(&ring, y), Elem::from_int(&ring, z));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, Elem::zero(&ring));
        prop_assert_eq!(&a * &Elem::one(&ring), a.clone());
        prop_assert_eq!(Elem::from_int(&ring, x * y), &a * &b);
    }

    #[test]
    fn pfaffian_squares_to_determinant(ring in ring_strategy(), seed in any::<u64>(), half in 1usize..4) {
        let mut rng = sampler(seed);
        let m = rand_skew(&mut rng, &ring, 2 * half);
        let pf = m.pfaffian().unwrap();
        prop_assert_eq!(&pf * &pf, m.determinant().unwrap());
        // Pf(EᵀME) = det(E)·Pf(M) and det E = 1 for words
        let w = rand_word(&mut rng, &BlockDecomposition::fine(&ring, 2 * half), 4);
        prop_assert_eq!(Matrix::congruence(&w.eval(), &m).unwrap().pfaffian().unwrap(), pf);
    }

    #[test]
    fn words_invert(ring in ring_strategy(), seed in any::<u64>(), len in 0usize..8) {
        let mut rng = sampler(seed);
        let w = rand_word(&mut rng, &BlockDecomposition::free(&ring, &[2, 1, 1]), len);
        prop_assert!(w.eval().determinant().unwrap().is_one());
        prop_assert!((&w.eval() * &w.inverse().eval()).is_identity());
        prop_assert!((&w.inverse().inverse().eval() * &w.inverse().eval()).is_identity());
    }

    #[test]
    fn unit_action_is_a_group_action(seed in any::<u64>(), spec in prop::sample::select(vec!["Z", "F_7", "Z/9"])) {
        let ring = ring_parse(spec).unwrap();
        let mut rng = sampler(seed);
        let t = VTriple::free(psi(&ring, 1), rand_pf_one(&mut rng, &ring, 1)).unwrap();
        let (u, v) = (rand_unit(&mut rng, &ring), rand_unit(&mut rng, &ring));
        let lhs = unit_action(&u, &unit_action(&v, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, unit_action(&(&u * &v), &t).unwrap());
        prop_assert_eq!(unit_action(&Elem::one(&ring), &t).unwrap(), t);
    }

    #[test]
    fn lambda3_alternates(seed in any::<u64>(), spec in prop::sample::select(vec!["Z", "F_5", "Z/12"])) {
        let ring = ring_parse(spec).unwrap();
        let mut rng = sampler(seed);
        let (p, t) = rand_kernel_base(&mut rng, &ring);
        let (x, y, z) = (rand_vec(&mut rng, &ring, 4), rand_vec(&mut rng, &ring, 4), rand_vec(&mut rng, &ring, 4));
        let base = lambda3(&p, &t, &x, &y, &z);
        prop_assert_eq!(lambda3(&p, &t, &y, &x, &z), -&base);
        prop_assert_eq!(lambda3(&p, &t, &x, &z, &y), -&base);
        prop_assert!(lambda3(&p, &t, &x, &x, &z).is_zero());
    }

    #[test]
    fn contract_inverse_round_trip(seed in any::<u64>(), spec in prop::sample::select(vec!["Z", "F_7", "Z/10"])) {
        let ring = ring_parse(spec).unwrap();
        let mut rng = sampler(seed);
        let (p, t) = rand_kernel_base(&mut rng, &ring);
        let b = chi0_form(&p, &t).unwrap();
        let a0 = p.pi().vec_mul(&rand_vec(&mut rng, &ring, 3));
        let q = chi0_contract_inverse(&p, &t, &a0).unwrap();
        prop_assert_eq!(p.pi().vec_mul(&b.vec_mul(&q)), a0);
    }
}
