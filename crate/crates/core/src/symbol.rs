//! The classical Vaserstein symbol and its generalization to epimorphisms
//! P₀ ⊕ R → R, with checkable witnesses for its basic properties.

use std::sync::Arc;

use crate::elem::{signed_permutation_word, Block, BlockDecomposition, ElemWord};
use crate::error::{dims, precondition, Error, Result};
use crate::matrix::{psi, Matrix};
use crate::projmod::{chi0_form, chi_a_unchecked, kernel_module, lambda3, pair_dot, ProjModule, Trivialization, UmEpi};
use crate::ring::{Elem, Ring};
use crate::witt::{free_embed, xi, VTriple, WittRep};

/// V(a, b) for a unimodular row of length 3 with Bézout witness b.
pub fn classical_vaserstein(a: &[Elem], b: &[Elem]) -> Result<Matrix> {
    if a.len() != 3 || b.len() != 3 {
        return dims("the classical symbol takes rows of length 3");
    }
    if !pair_dot(a, b).is_one() {
        return Err(Error::NotUnimodular);
    }
    let ring = a[0].ring();
    let z = Elem::zero(ring);
    let rows = vec![
        vec![z.clone(), -&a[0], -&a[1], -&a[2]],
        vec![a[0].clone(), z.clone(), -&b[2], b[1].clone()],
        vec![a[1].clone(), b[2].clone(), z.clone(), -&b[0]],
        vec![a[2].clone(), -&b[1], b[0].clone(), z],
    ];
    Matrix::from_rows(ring, rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolResult {
    /// [P₀ ⊕ R², χ₀ ⊥ ψ₂, (i ⊕ 1)ᵀ(χ_a ⊥ ψ₂)(i ⊕ 1)]
    pub triple: VTriple,
    pub embedded: VTriple,
    pub witt: WittRep,
}

impl SymbolResult {
    pub fn pfaffian(&self) -> &Elem {
        self.witt.pfaffian()
    }
}

/// diag(π, 1, 1) with the base complement padded by zeros.
fn stabilized_module(base: &ProjModule) -> Result<ProjModule> {
    let ring = base.ring().clone();
    let m = base.ambient();
    let pi = base.pi().orthogonal_sum(&Matrix::identity(&ring, 2));
    let module = ProjModule::new(pi, base.rank() + 2)?;
    match base.complement() {
        Some((u, v)) => {
            let k = u.cols();
            let mut u2 = Matrix::zeros(&ring, m + 2, k);
            u2.set_block(0, 0, u);
            let mut v2 = Matrix::zeros(&ring, k, m + 2);
            v2.set_block(0, 0, v);
            module.with_complement(u2, v2)
        }
        None => Ok(module),
    }
}

/// The pulled-back form (i ⊕ 1)ᵀ(χ_a ⊥ ψ₂)(i ⊕ 1) on P₀ ⊕ R², where
/// i = (retraction onto ker a, a).
pub fn pulled_back_form(triv: &Trivialization, epi: &UmEpi) -> Result<Matrix> {
    let ring = epi.ring().clone();
    let kernel = kernel_module(epi)?;
    let chi_a = chi_a_unchecked(epi, triv, &kernel);
    let n = epi.dim();
    let mut i1 = Matrix::zeros(&ring, n + 2, n + 1);
    i1.set_block(0, 0, kernel.pi());
    for j in 0..n {
        i1[(n, j)] = epi.a[j].clone();
    }
    i1[(n + 1, n)] = Elem::one(&ring);
    Matrix::congruence(&i1, &chi_a.orthogonal_sum(&psi(&ring, 1)))
}

pub fn generalized_symbol(base: &ProjModule, triv: &Trivialization, epi: &UmEpi) -> Result<SymbolResult> {
    if base.rank() != 2 {
        return precondition("the symbol needs P₀ of rank 2");
    }
    if *base != epi.base {
        return precondition("epimorphism is defined on a different module");
    }
    triv.validate(base)?;
    epi.validate()?;
    let ring = base.ring().clone();
    let g = chi0_form(base, triv)?.orthogonal_sum(&psi(&ring, 1));
    let f = pulled_back_form(triv, epi)?;
    let triple = VTriple::new(stabilized_module(base)?, g, f)?;
    let embedded = if triple.module.is_free_ambient() { triple.clone() } else { free_embed(&triple)? };
    let witt = xi(&embedded)?;
    if !witt.pfaffian().is_one() {
        return Err(Error::Verification(format!("symbol has Pfaffian {}", witt.pfaffian())));
    }
    Ok(SymbolResult { triple, embedded, witt })
}

/// Blocks P₀, R, R of the ambient of P₀ ⊕ R².
fn symbol_blocks(base: &ProjModule) -> Result<BlockDecomposition> {
    let first = if base.is_free_ambient() {
        Block::Free(base.ambient())
    } else {
        Block::Projective(base.pi().clone())
    };
    BlockDecomposition::new(base.ring(), vec![first, Block::Free(1), Block::Free(1)])
}

/// Elementary φ = id − d·e_last on P₀ ⊕ R² with d(x) = λ₃(s ∧ t ∧ x), as the
/// product of its P₀ part and its R part. Checks φᵀ V(a, s) φ = V(a, t).
pub fn section_independence_witness(
    base: &ProjModule,
    triv: &Trivialization,
    epi: &UmEpi,
    t: &[Elem],
) -> Result<ElemWord> {
    triv.validate(base)?;
    let other = epi.with_section(t.to_vec())?;
    let ring = base.ring().clone();
    let n = epi.dim();
    let last = n;
    let e = |k: usize| -> Vec<Elem> { (0..n).map(|i| if i == k { Elem::one(&ring) } else { Elem::zero(&ring) }).collect() };
    let d: Vec<Elem> = (0..n).map(|j| lambda3(base, triv, &epi.s, t, &e(j))).collect();
    let blocks = Arc::new(symbol_blocks(base)?);
    let vs = pulled_back_form(triv, epi)?;
    let vt = pulled_back_form(triv, &other)?;
    let m = base.ambient();
    let word = |sign: &Elem| -> Result<ElemWord> {
        let mut w = ElemWord::with_blocks(&blocks);
        let mut c0 = Matrix::zeros(&ring, n + 1, n + 1);
        for j in 0..m {
            c0[(last, j)] = -&(sign * &d[j]);
        }
        if !c0.is_zero() {
            w.push(2, 0, c0)?;
        }
        let mut cr = Matrix::zeros(&ring, n + 1, n + 1);
        cr[(last, m)] = -&(sign * &d[m]);
        if !cr.is_zero() {
            w.push(2, 1, cr)?;
        }
        Ok(w)
    };
    let one = Elem::one(&ring);
    for sign in [one.clone(), -&one] {
        let w = word(&sign)?;
        if Matrix::congruence(&w.eval(), &vs)? == vt {
            return Ok(w);
        }
    }
    Err(Error::Verification("section change word does not carry V(a, s) to V(a, t)".into()))
}

/// Compares (φ ⊕ 1)ᵀ V(a, s) (φ ⊕ 1) with V(aφ, φ⁻¹s) entrywise.
pub fn elementary_invariance_check(
    base: &ProjModule,
    triv: &Trivialization,
    epi: &UmEpi,
    phi: &ElemWord,
) -> Result<bool> {
    if phi.dim() != epi.dim() {
        return dims("φ must act on the ambient of P₀ ⊕ R");
    }
    triv.validate(base)?;
    let ring = base.ring().clone();
    let p = phi.eval();
    let pinv = phi.inverse().eval();
    let a2 = p.vec_mul(&epi.a);
    let s2 = pinv.mul_vec(&epi.s);
    let moved = UmEpi::new(epi.base.clone(), a2, s2)?;
    let lhs = Matrix::congruence(&p.orthogonal_sum(&Matrix::identity(&ring, 1)), &pulled_back_form(triv, epi)?)?;
    let rhs = pulled_back_form(triv, &moved)?;
    Ok(lhs == rhs)
}

/// The symbol for the trivialization scaled by u, conjugated by
/// diag(I, 1, u), against u times the symbol for the original one.
pub fn scale_check(base: &ProjModule, triv: &Trivialization, epi: &UmEpi, u: &Elem) -> Result<bool> {
    let scaled = triv.scaled(u)?;
    let ring = base.ring().clone();
    let plain = generalized_symbol(base, triv, epi)?;
    let other = generalized_symbol(base, &scaled, epi)?;
    let n = epi.dim() + 1;
    let mut d = Matrix::identity(&ring, n);
    d[(n - 1, n - 1)] = u.clone();
    let g = Matrix::congruence(&d, &other.triple.g)?;
    let f = Matrix::congruence(&d, &other.triple.f)?;
    Ok(g == plain.triple.g.scale(u) && f == plain.triple.f.scale(u))
}

/// The cyclic signed permutation e₁ ↦ e₂ ↦ e₃ ↦ e₄ ↦ −e₁, which lies in E₄.
pub fn cyclic_sigma(ring: &Ring) -> Matrix {
    Matrix::from_ints(ring, &[&[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])
}

/// Data identifying the symbol for w = −e₁∧e₂ on the free R² with the
/// classical one: the isometry D = diag(1, −1, 1, 1) taking χ₀ ⊥ ψ₂ to ψ₄,
/// and an elementary word E = (Gσ)⁻¹, G = diag(1, −1, 1, −1), with
/// Eᵀ(DᵀfD)E = V(a, b).
pub fn coincidence_data(ring: &Ring) -> Result<(Matrix, ElemWord)> {
    let s = |k: i64| Elem::from_int(ring, k);
    let mut d = Matrix::identity(ring, 4);
    d[(1, 1)] = s(-1);
    let mut g = Matrix::identity(ring, 4);
    g[(1, 1)] = s(-1);
    g[(3, 3)] = s(-1);
    let e = signed_permutation_word(&(&g * &cyclic_sigma(ring)).inverse()?)?;
    Ok((d, e))
}

/// Generalized symbol over the free R² with w = −e₁∧e₂ against the
/// classical V(a, b), through [`coincidence_data`].
pub fn coincide_classical_check(a: &[Elem], b: &[Elem]) -> Result<bool> {
    let v = classical_vaserstein(a, b)?;
    let ring = a[0].ring().clone();
    let base = ProjModule::free(&ring, 2);
    let epi = UmEpi::new(base.clone(), a.to_vec(), b.to_vec())?;
    let sym = generalized_symbol(&base, &Trivialization::standard(&ring, -1), &epi)?;
    let (d, e) = coincidence_data(&ring)?;
    let g = Matrix::congruence(&d, &sym.triple.g)?;
    let f = Matrix::congruence(&e.eval(), &Matrix::congruence(&d, &sym.triple.f)?)?;
    Ok(g == psi(&ring, 2) && f == v)
}
