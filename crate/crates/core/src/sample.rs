//! Seeded random instances for tests, the self test and benchmarks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elem::{Block, BlockDecomposition, ElemWord};
use crate::matrix::{psi, Matrix};
use crate::projmod::{kernel_module, trivialization_from_row, ProjModule, Trivialization, UmEpi};
use crate::ring::{bezout_witness, Elem, Ring, RingSpec};

pub type Sampler = ChaCha8Rng;

pub fn sampler(seed: u64) -> Sampler {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_int(rng: &mut Sampler, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

fn rand_in(rng: &mut Sampler, ring: &Ring, spec: &RingSpec, vars: usize) -> Elem {
    match spec {
        RingSpec::Integers => Elem::from_int(ring, small_int(rng, 9)),
        RingSpec::Rationals => {
            let den = rng.gen_range(1..=5);
            Elem::fraction(ring, BigInt::from(small_int(rng, 9)), BigInt::from(den)).expect("nonzero denominator")
        }
        RingSpec::IntegersMod(n) | RingSpec::PrimeField(n) => {
            let n = u64::try_from(n).unwrap_or(u64::MAX);
            Elem::from_bigint(ring, BigInt::from(rng.gen_range(0..n)))
        }
        RingSpec::Polynomial { base, .. } => {
            // constant plus a random linear part
            let mut x = rand_in(rng, ring, base, 0);
            for v in 0..vars {
                if rng.gen_bool(0.5) {
                    let c = rand_in(rng, ring, base, 0);
                    x = &x + &(&c * &Elem::var(ring, v).expect("variable index"));
                }
            }
            x
        }
    }
}

pub fn rand_elem(rng: &mut Sampler, ring: &Ring) -> Elem {
    let vars = match &**ring {
        RingSpec::Polynomial { vars, .. } => vars.len(),
        _ => 0,
    };
    rand_in(rng, ring, ring, vars)
}

pub fn rand_vec(rng: &mut Sampler, ring: &Ring, n: usize) -> Vec<Elem> {
    (0..n).map(|_| rand_elem(rng, ring)).collect()
}

pub fn rand_matrix(rng: &mut Sampler, ring: &Ring, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| rand_elem(rng, ring))
}

pub fn rand_skew(rng: &mut Sampler, ring: &Ring, n: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rand_elem(rng, ring);
            m[(j, i)] = -&x;
            m[(i, j)] = x;
        }
    }
    m
}

/// A random elementary word with `len` factors over the given blocks.
pub fn rand_word(rng: &mut Sampler, blocks: &BlockDecomposition, len: usize) -> ElemWord {
    let ring = blocks.ring().clone();
    let mut w = ElemWord::new(blocks.clone());
    if blocks.len() < 2 {
        return w;
    }
    while w.len() < len {
        let t = rng.gen_range(0..blocks.len());
        let s = rng.gen_range(0..blocks.len());
        if t == s {
            continue;
        }
        let local = rand_matrix(rng, &ring, blocks.size(t), blocks.size(s));
        let local = match (&blocks.blocks()[t], &blocks.blocks()[s]) {
            (Block::Projective(pt), Block::Projective(ps)) => &(pt * &local) * ps,
            (Block::Projective(pt), _) => pt * &local,
            (_, Block::Projective(ps)) => &local * ps,
            _ => local,
        };
        if local.is_zero() {
            continue;
        }
        w.push_local(t, s, &local).expect("random factor respects the blocks");
    }
    w
}

/// An invertible skew matrix with Pfaffian 1, of the form Eᵀ ψ E.
pub fn rand_pf_one(rng: &mut Sampler, ring: &Ring, half: usize) -> Matrix {
    let w = rand_word(rng, &BlockDecomposition::fine(ring, 2 * half), 3 * half);
    Matrix::congruence(&w.eval(), &psi(ring, half)).expect("square")
}

/// A unimodular row of length n and a witness b with Σ aᵢbᵢ = 1.
pub fn rand_unimodular(rng: &mut Sampler, ring: &Ring, n: usize) -> (Vec<Elem>, Vec<Elem>) {
    for _ in 0..64 {
        let a = rand_vec(rng, ring, n);
        if let Ok(b) = bezout_witness(&a) {
            return (a, b);
        }
    }
    // fall back to the elementary orbit of the last unit row
    let w = rand_word(rng, &BlockDecomposition::fine(ring, n), 2 * n);
    let last: Vec<Elem> = (0..n).map(|k| if k + 1 == n { Elem::one(ring) } else { Elem::zero(ring) }).collect();
    (w.eval().vec_mul(&last), w.inverse().eval().mul_vec(&last))
}

/// Kernel of a random unimodular row of length 3, with its trivialization.
pub fn rand_kernel_base(rng: &mut Sampler, ring: &Ring) -> (ProjModule, Trivialization) {
    loop {
        let (c, t) = rand_unimodular(rng, ring, 3);
        // skip rows whose kernel is a coordinate plane
        if c.iter().filter(|x| x.is_zero()).count() >= 2 {
            continue;
        }
        if let Ok(pair) = trivialization_from_row(&c, &t) {
            return pair;
        }
    }
}

/// Blocks P₀, R of the ambient of P₀ ⊕ R.
pub fn epi_blocks(base: &ProjModule) -> BlockDecomposition {
    let ring = base.ring();
    let first = if base.is_free_ambient() {
        Block::Free(base.ambient())
    } else {
        Block::Projective(base.pi().clone())
    };
    BlockDecomposition::new(ring, vec![first, Block::Free(1)]).expect("valid blocks")
}

/// A random epimorphism P₀ ⊕ R → R with a section. Free bases use a random
/// unimodular row; other bases move the basepoint by a random elementary word.
pub fn rand_epi(rng: &mut Sampler, base: &ProjModule) -> UmEpi {
    let ring = base.ring().clone();
    if base.is_free_ambient() && rng.gen_bool(0.5) {
        let (a, s) = rand_unimodular(rng, &ring, base.ambient() + 1);
        return UmEpi::new(base.clone(), a, s).expect("unimodular row with witness");
    }
    let w = rand_word(rng, &epi_blocks(base), 4);
    let e = UmEpi::basepoint(base.clone());
    let a = w.eval().vec_mul(&e.a);
    let s = w.inverse().eval().mul_vec(&e.s);
    UmEpi::new(base.clone(), a, s).expect("moved basepoint is an epimorphism")
}

/// Another section of the same epimorphism: s + (π̂ − s·a)x.
pub fn rand_other_section(rng: &mut Sampler, epi: &UmEpi) -> Vec<Elem> {
    let k = kernel_module(epi).expect("valid epimorphism");
    let x = rand_vec(rng, epi.ring(), epi.dim());
    k.pi().mul_vec(&x).iter().zip(&epi.s).map(|(d, s)| s + d).collect()
}

/// A random unit of a finite or integral ring.
pub fn rand_unit(rng: &mut Sampler, ring: &Ring) -> Elem {
    loop {
        let x = rand_elem(rng, ring);
        if x.inverse().is_some() {
            return x;
        }
        if rng.gen_bool(0.2) {
            return [Elem::one(ring), -Elem::one(ring)].choose(rng).expect("nonempty").clone();
        }
    }
}
