use vaserstein::elem::{
    commutator_factorization, eval_word, invert_word, permutation_word, symplectic_orbit_word,
    symplectic_transvection, whitehead_word, BlockDecomposition, ElemWord, Transvection,
};
use vaserstein::matrix::{psi, Matrix};
use vaserstein::ring::{ring_parse, Elem};
use vaserstein::sample::{rand_pf_one, rand_vec, rand_word, sampler};

#[test]
fn evaluation_examples() {
    let z = ring_parse("Z").unwrap();
    let empty = ElemWord::new(BlockDecomposition::fine(&z, 3));
    assert!(eval_word(&empty).is_identity());
    let mut w = ElemWord::new(BlockDecomposition::fine(&z, 3));
    let mut c = Matrix::zeros(&z, 3, 3);
    c[(0, 1)] = Elem::from_int(&z, 4);
    w.push(0, 1, c.clone()).unwrap();
    assert_eq!(eval_word(&w), &Matrix::identity(&z, 3) + &c);
    let inv = invert_word(&w);
    assert_eq!(inv.factors()[0].coeff, c.neg());
    assert!((&eval_word(&w) * &eval_word(&inv)).is_identity());
}

#[test]
fn words_have_determinant_one_and_invert() {
    let z7 = ring_parse("Z/7").unwrap();
    let mut rng = sampler(21);
    for len in 0..=6 {
        let w = rand_word(&mut rng, &BlockDecomposition::free(&z7, &[1, 2, 2]), len);
        assert!(w.eval().determinant().unwrap().is_one());
        assert!((&w.eval() * &invert_word(&w).eval()).is_identity());
    }
}

#[test]
fn factor_must_respect_blocks() {
    let z = ring_parse("Z").unwrap();
    let mut w = ElemWord::new(BlockDecomposition::free(&z, &[1, 1]));
    let mut c = Matrix::zeros(&z, 2, 2);
    c[(0, 0)] = Elem::one(&z);
    assert!(w.push(0, 1, c).is_err());
}

#[test]
fn whitehead_examples() {
    let z5 = ring_parse("Z/5").unwrap();
    let one = Matrix::identity(&z5, 1);
    let w = whitehead_word(&one, &one).unwrap();
    assert_eq!(w.len(), 5);
    assert_eq!(w.eval(), Matrix::from_ints(&z5, &[&[2, 0], &[0, 3]]));
    let z = ring_parse("Z").unwrap();
    let f = Matrix::from_ints(&z, &[&[1]]);
    let g = Matrix::from_ints(&z, &[&[-2]]);
    assert_eq!(whitehead_word(&f, &g).unwrap().eval(), Matrix::from_ints(&z, &[&[-1, 0], &[0, -1]]));
    let f0 = Matrix::zeros(&z, 2, 1);
    let g = Matrix::from_ints(&z, &[&[5, 7]]);
    assert!(whitehead_word(&f0, &g).unwrap().eval().is_identity());
    // 1 + gf = 3 is not a unit over Z
    assert!(whitehead_word(&Matrix::from_ints(&z, &[&[1]]), &Matrix::from_ints(&z, &[&[2]])).is_err());
}

#[test]
fn commutator_examples() {
    let z = ring_parse("Z").unwrap();
    let blocks = BlockDecomposition::fine(&z, 3);
    let s12 = Matrix::from_ints(&z, &[&[2]]);
    let s23 = Matrix::from_ints(&z, &[&[3]]);
    let w = commutator_factorization(&blocks, (0, 1, &s12), (1, 2, &s23)).unwrap();
    let mut expect = Matrix::identity(&z, 3);
    expect[(0, 2)] = Elem::from_int(&z, 6);
    assert_eq!(w.eval(), expect);
    let zero = Matrix::zeros(&z, 1, 1);
    assert!(commutator_factorization(&blocks, (0, 1, &zero), (1, 2, &s23)).unwrap().eval().is_identity());
    assert!(commutator_factorization(&blocks, (0, 1, &s12), (1, 0, &s23)).is_err());
}

#[test]
fn permutation_examples() {
    let z = ring_parse("Z").unwrap();
    assert!(permutation_word(&z, &[0, 1, 2]).unwrap().is_empty());
    let w = permutation_word(&z, &[1, 2, 0]).unwrap();
    let mut t = Matrix::zeros(&z, 3, 3);
    for (k, p) in [1, 2, 0].into_iter().enumerate() {
        t[(p, k)] = Elem::one(&z);
    }
    assert_eq!(w.eval(), t);
    assert!(permutation_word(&z, &[1, 0, 2]).is_err());
}

#[test]
fn transvections_are_symplectic() {
    let z = ring_parse("Z").unwrap();
    let chi = psi(&z, 2);
    let zero = vec![Elem::zero(&z); 3];
    assert!(symplectic_transvection(&chi, &Transvection::AddToLast(zero)).unwrap().eval().is_identity());
    let e1 = vec![Elem::one(&z), Elem::zero(&z), Elem::zero(&z)];
    let w = symplectic_transvection(&chi, &Transvection::AddToLast(e1)).unwrap();
    assert_eq!(Matrix::congruence(&w.eval(), &chi).unwrap(), chi);

    let z5 = ring_parse("Z/5").unwrap();
    let mut rng = sampler(22);
    for _ in 0..5 {
        let chi = rand_pf_one(&mut rng, &z5, 3);
        let a = rand_vec(&mut rng, &z5, 5);
        let w = symplectic_transvection(&chi, &Transvection::AddFunctional(a)).unwrap();
        assert_eq!(Matrix::congruence(&w.eval(), &chi).unwrap(), chi);
    }
}

fn last_coord_factor(ring: &vaserstein::Ring, t: usize, s: usize, entries: &[(usize, usize, i64)]) -> (usize, usize, Matrix) {
    let mut c = Matrix::zeros(ring, 4, 4);
    for &(i, j, x) in entries {
        c[(i, j)] = Elem::from_int(ring, x);
    }
    (t, s, c)
}

#[test]
fn orbit_words() {
    let z5 = ring_parse("Z/5").unwrap();
    let chi = psi(&z5, 2);
    let empty = ElemWord::new(BlockDecomposition::free(&z5, &[3, 1]));
    assert!(symplectic_orbit_word(&chi, &empty).unwrap().eval().is_identity());
    let z = ring_parse("Z").unwrap();
    let cases = [
        (z5.clone(), vec![last_coord_factor(&z5, 0, 1, &[(0, 3, 2), (2, 3, 1)])]),
        (z.clone(), vec![last_coord_factor(&z, 1, 0, &[(3, 0, 1), (3, 1, -2)]), last_coord_factor(&z, 0, 1, &[(1, 3, 3)])]),
    ];
    let e = |ring: &vaserstein::Ring| {
        let mut e = vec![Elem::zero(ring); 4];
        e[3] = Elem::one(ring);
        e
    };
    for (ring, factors) in cases {
        let chi = psi(&ring, 2);
        let mut w = ElemWord::new(BlockDecomposition::free(&ring, &[3, 1]));
        for (t, s, c) in factors {
            w.push(t, s, c).unwrap();
        }
        let last = e(&ring);
        let p = w.eval().inverse().unwrap().mul_vec(&last);
        let m = symplectic_orbit_word(&chi, &w).unwrap().eval();
        assert_eq!(Matrix::congruence(&m, &chi).unwrap(), chi);
        assert_eq!(m.mul_vec(&p), last);
    }
}

#[test]
fn random_orbit_words() {
    let mut rng = sampler(24);
    for spec in ["Z", "F_7", "Z/9"] {
        let ring = ring_parse(spec).unwrap();
        for half in [2, 3] {
            let chi = rand_pf_one(&mut rng, &ring, half);
            let n = 2 * half;
            let w = rand_word(&mut rng, &BlockDecomposition::fine(&ring, n), 4);
            let mut last = vec![Elem::zero(&ring); n];
            last[n - 1] = Elem::one(&ring);
            let p = w.eval().inverse().unwrap().mul_vec(&last);
            let m = symplectic_orbit_word(&chi, &w).unwrap().eval();
            assert_eq!(Matrix::congruence(&m, &chi).unwrap(), chi);
            assert_eq!(m.mul_vec(&p), last);
        }
    }
}
