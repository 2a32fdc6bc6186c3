//! Projective modules as images of idempotents, determinant trivializations
//! and the skew forms built from them.
//!
//! Exterior powers use lexicographic index pairs (i < j) and triples.

use crate::error::{dims, precondition, Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjModule {
    pi: Matrix,
    rank: usize,
    /// I − π = U·V with V·U = I_k, when known. Gives a form that is
    /// nondegenerate on the complement, needed for restricted inverses.
    complement: Option<(Matrix, Matrix)>,
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

impl ProjModule {
    /// Checks π² = π and that the characteristic polynomial of π is
    /// t^(m−r)(t−1)^r, which certifies constant rank r.
    pub fn new(pi: Matrix, rank: usize) -> Result<ProjModule> {
        if !pi.is_square() {
            return dims("idempotent must be square");
        }
        if !pi.is_idempotent() {
            return precondition("matrix is not idempotent");
        }
        let m = pi.rows();
        if rank > m {
            return precondition(format!("rank {rank} exceeds ambient dimension {m}"));
        }
        let ring = pi.ring().clone();
        let cp = pi.charpoly()?;
        for (k, c) in cp.iter().enumerate() {
            let expected = if k <= rank {
                let b = Elem::from_int(&ring, binomial(rank, k) as i64);
                if k % 2 == 0 {
                    b
                } else {
                    -b
                }
            } else {
                Elem::zero(&ring)
            };
            if *c != expected {
                return precondition(format!("idempotent does not have constant rank {rank}"));
            }
        }
        Ok(ProjModule { pi, rank, complement: None })
    }

    pub fn free(ring: &Ring, m: usize) -> ProjModule {
        ProjModule {
            pi: Matrix::identity(ring, m),
            rank: m,
            complement: Some((Matrix::zeros(ring, m, 0), Matrix::zeros(ring, 0, m))),
        }
    }

    /// Attaches a factorization I − π = U·V with V·U = I.
    pub fn with_complement(mut self, u: Matrix, v: Matrix) -> Result<ProjModule> {
        let m = self.ambient();
        let q = &Matrix::identity(self.ring(), m) - &self.pi;
        if u.rows() != m || v.cols() != m || u.cols() != v.rows() {
            return dims("complement factors have the wrong shape");
        }
        if u.try_mul(&v)? != q || !v.try_mul(&u)?.is_identity() {
            return precondition("U·V must equal I − π with V·U = I");
        }
        self.complement = Some((u, v));
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        self.pi.ring()
    }
    pub fn ambient(&self) -> usize {
        self.pi.rows()
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn pi(&self) -> &Matrix {
        &self.pi
    }
    pub fn complement(&self) -> Option<&(Matrix, Matrix)> {
        self.complement.as_ref()
    }
    pub fn is_free_ambient(&self) -> bool {
        self.pi.is_identity()
    }

    /// I − π.
    pub fn co_pi(&self) -> Matrix {
        &Matrix::identity(self.ring(), self.ambient()) - &self.pi
    }

    /// ambient form B is compatible with the module: πᵀBπ = B
    pub fn is_form_on(&self, b: &Matrix) -> bool {
        b.rows() == self.ambient()
            && b.is_skew()
            && Matrix::congruence(&self.pi, b).map(|c| c == *b).unwrap_or(false)
    }

    /// The inverse of a form restricted to the module: B⁺ = π C⁻¹ πᵀ with
    /// C = B + N, N vanishing on the module and nondegenerate on the
    /// complement. Satisfies B·B⁺ = πᵀ and B⁺·B = π. Fails with
    /// NotInvertible when B is degenerate on the module.
    pub fn restricted_inverse(&self, b: &Matrix) -> Result<Matrix> {
        if !self.is_form_on(b) {
            return precondition("form is not a skew form on the module");
        }
        let ring = self.ring().clone();
        let m = self.ambient();
        let q = self.co_pi();
        let mut candidates: Vec<Matrix> = Vec::new();
        if let Some((_, v)) = &self.complement {
            candidates.push(&v.transpose() * v);
        }
        // Without a complement basis, try weighted Gram matrices of I − π.
        for signs in 0u32..(1 << m.min(4)) {
            let d = Matrix::from_fn(&ring, m, m, |i, j| {
                if i != j {
                    Elem::zero(&ring)
                } else if i < 4 && signs & (1 << i) != 0 {
                    -Elem::one(&ring)
                } else {
                    Elem::one(&ring)
                }
            });
            candidates.push(&(&q.transpose() * &d) * &q);
        }
        for n in candidates {
            let c = b + &n;
            if let Ok(cinv) = c.inverse() {
                let plus = &(&self.pi * &cinv) * &self.pi.transpose();
                if b * &plus == self.pi.transpose() && &plus * b == self.pi {
                    return Ok(plus);
                }
            }
        }
        if self.complement.is_some() {
            Err(Error::NotInvertible)
        } else {
            Err(Error::Unsupported(
                "cannot certify the restricted inverse without a complement basis".into(),
            ))
        }
    }
}

/// Lexicographic index pairs of Λ²(Rᵐ).
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Lexicographic index triples of Λ³(Rᵐ).
pub fn triples(m: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Coordinates of u ∧ v.
pub fn wedge(u: &[Elem], v: &[Elem]) -> Vec<Elem> {
    pairs(u.len()).into_iter().map(|(i, j)| &(&u[i] * &v[j]) - &(&u[j] * &v[i])).collect()
}

/// Pairs a Λ² covector with a Λ² vector.
pub fn pair_dot(l: &[Elem], w: &[Elem]) -> Elem {
    let ring = l[0].ring().clone();
    l.iter().zip(w).fold(Elem::zero(&ring), |acc, (x, y)| &acc + &(x * y))
}

/// Matrix of Λ²π on lexicographic pairs.
pub fn lambda2(pi: &Matrix) -> Matrix {
    let ps = pairs(pi.rows());
    Matrix::from_fn(pi.ring(), ps.len(), ps.len(), |r, c| {
        let (i, j) = ps[r];
        let (k, l) = ps[c];
        &(&pi[(i, k)] * &pi[(j, l)]) - &(&pi[(i, l)] * &pi[(j, k)])
    })
}

/// a ⌟ w, with a ⌟ (u∧v) = a(u)v − a(v)u.
pub fn contract(a: &[Elem], w: &[Elem]) -> Vec<Elem> {
    let m = a.len();
    let ring = a[0].ring().clone();
    let mut out = vec![Elem::zero(&ring); m];
    for (idx, (i, j)) in pairs(m).into_iter().enumerate() {
        out[j] = &out[j] + &(&w[idx] * &a[i]);
        out[i] = &out[i] - &(&w[idx] * &a[j]);
    }
    out
}

/// A generator w of Λ²P and a functional λ with λ(w) = 1, presenting an
/// isomorphism R ≅ det P and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivialization {
    pub w: Vec<Elem>,
    pub lambda: Vec<Elem>,
}

impl Trivialization {
    /// Checks Λ²π·w = w, λ∘Λ²π = λ and λ(w) = 1.
    pub fn validate(&self, p: &ProjModule) -> Result<()> {
        let n = pairs(p.ambient()).len();
        if self.w.len() != n || self.lambda.len() != n {
            return dims(format!("trivialization needs {n} exterior coordinates"));
        }
        if p.rank() != 2 {
            return precondition("trivializations are only defined for rank 2 here");
        }
        let l2 = lambda2(p.pi());
        if l2.mul_vec(&self.w) != self.w {
            return precondition("w does not lie in Λ²P");
        }
        if l2.vec_mul(&self.lambda) != self.lambda {
            return precondition("λ does not factor through Λ²P");
        }
        if !pair_dot(&self.lambda, &self.w).is_one() {
            return precondition("λ(w) is not 1");
        }
        Ok(())
    }

    /// ±e₁∧e₂ on the free module R².
    pub fn standard(ring: &Ring, sign: i64) -> Trivialization {
        let s = Elem::from_int(ring, sign.signum());
        Trivialization { w: vec![s.clone()], lambda: vec![s] }
    }

    /// The trivialization whose form is u·χ₀: w ↦ u⁻¹w, λ ↦ uλ.
    pub fn scaled(&self, u: &Elem) -> Result<Trivialization> {
        let uinv = u.inverse().ok_or_else(|| Error::Precondition(format!("{u} is not a unit")))?;
        Ok(Trivialization {
            w: self.w.iter().map(|x| &uinv * x).collect(),
            lambda: self.lambda.iter().map(|x| u * x).collect(),
        })
    }
}

/// An epimorphism a: P₀ ⊕ R → R with a section s, in ambient coordinates
/// (the P₀ coordinates first, then the free one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmEpi {
    pub base: ProjModule,
    pub a: Vec<Elem>,
    pub s: Vec<Elem>,
}

impl UmEpi {
    pub fn new(base: ProjModule, a: Vec<Elem>, s: Vec<Elem>) -> Result<UmEpi> {
        let e = UmEpi { base, a, s };
        e.validate()?;
        Ok(e)
    }

    /// Ambient dimension of P₀ ⊕ R.
    pub fn dim(&self) -> usize {
        self.base.ambient() + 1
    }

    pub fn ring(&self) -> &Ring {
        self.base.ring()
    }

    /// diag(π, 1)
    pub fn total_pi(&self) -> Matrix {
        let ring = self.ring();
        self.base.pi().orthogonal_sum(&Matrix::identity(ring, 1))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.a.len() != n || self.s.len() != n {
            return dims(format!("epimorphism and section need {n} coordinates"));
        }
        let pi = self.total_pi();
        if pi.vec_mul(&self.a) != self.a {
            return precondition("a does not factor through P₀ ⊕ R");
        }
        if pi.mul_vec(&self.s) != self.s {
            return precondition("section does not lie in P₀ ⊕ R");
        }
        if !pair_dot(&self.a, &self.s).is_one() {
            return precondition("a(s(1)) is not 1");
        }
        Ok(())
    }

    pub fn with_section(&self, s: Vec<Elem>) -> Result<UmEpi> {
        UmEpi::new(self.base.clone(), self.a.clone(), s)
    }

    /// The basepoint π_R with section e_last.
    pub fn basepoint(base: ProjModule) -> UmEpi {
        let ring = base.ring().clone();
        let n = base.ambient() + 1;
        let e: Vec<Elem> = (0..n).map(|k| if k == n - 1 { Elem::one(&ring) } else { Elem::zero(&ring) }).collect();
        UmEpi { base, a: e.clone(), s: e }
    }
}

/// ker(a) as the image of π̂ − s·a, with its complement basis when the base has one.
pub fn kernel_module(epi: &UmEpi) -> Result<ProjModule> {
    epi.validate()?;
    let ring = epi.ring().clone();
    let pi_hat = epi.total_pi();
    let sa = Matrix::outer(&ring, &epi.s, &epi.a);
    let pk = &pi_hat - &sa;
    // rank(P₀ ⊕ R) − 1
    let rank = epi.base.rank();
    let mut module = ProjModule::new(pk, rank)?;
    if let Some((u0, v0)) = epi.base.complement() {
        let m = epi.base.ambient();
        let k = u0.cols();
        let mut u = Matrix::zeros(&ring, m + 1, k + 1);
        u.set_block(0, 0, u0);
        for i in 0..m + 1 {
            u[(i, k)] = epi.s[i].clone();
        }
        let mut v = Matrix::zeros(&ring, k + 1, m + 1);
        v.set_block(0, 0, v0);
        for j in 0..m + 1 {
            v[(k, j)] = epi.a[j].clone();
        }
        module = module.with_complement(u, v)?;
    }
    // a∘(π̂ − s·a) = 0
    if !module.pi().vec_mul(&epi.a).iter().all(Elem::is_zero) {
        return Err(Error::Verification("kernel idempotent is not killed by a".into()));
    }
    Ok(module)
}

/// Kernel of a unimodular row c (length 3) with section t, together with the
/// trivialization w = c ⌟ (e₁∧e₂∧e₃), λ(x∧y) = det[t, x, y].
pub fn trivialization_from_row(c: &[Elem], t: &[Elem]) -> Result<(ProjModule, Trivialization)> {
    if c.len() != 3 || t.len() != 3 {
        return dims("trivialization_from_row needs rows of length 3");
    }
    let ring = c[0].ring().clone();
    if !pair_dot(c, t).is_one() {
        return precondition("c·t is not 1");
    }
    let pi = &Matrix::identity(&ring, 3) - &Matrix::outer(&ring, t, c);
    let module = ProjModule::new(pi, 2)?
        .with_complement(Matrix::column(&ring, t), Matrix::row_vec(&ring, c))?;
    // pairs (0,1), (0,2), (1,2)
    let w = vec![c[2].clone(), -&c[1], c[0].clone()];
    let lambda = vec![t[2].clone(), -&t[1], t[0].clone()];
    let triv = Trivialization { w, lambda };
    triv.validate(&module)?;
    Ok((module, triv))
}

/// χ₀(x, y) = λ(πx ∧ πy) as an ambient skew matrix, checked nondegenerate on P.
pub fn chi0_form(p: &ProjModule, triv: &Trivialization) -> Result<Matrix> {
    triv.validate(p)?;
    let form = chi0_unchecked(p, triv);
    p.restricted_inverse(&form)?;
    Ok(form)
}

fn chi0_unchecked(p: &ProjModule, triv: &Trivialization) -> Matrix {
    let m = p.ambient();
    let pi = p.pi();
    let ps = pairs(m);
    Matrix::from_fn(p.ring(), m, m, |k, l| {
        ps.iter().enumerate().fold(Elem::zero(p.ring()), |acc, (idx, &(i, j))| {
            let v = &(&pi[(i, k)] * &pi[(j, l)]) - &(&pi[(j, k)] * &pi[(i, l)]);
            &acc + &(&triv.lambda[idx] * &v)
        })
    })
}

/// q′ = −(a0 ⌟ w), the vector with χ₀(q′, p) = a0(p) on P.
pub fn chi0_contract_inverse(p: &ProjModule, triv: &Trivialization, a0: &[Elem]) -> Result<Vec<Elem>> {
    if a0.len() != p.ambient() {
        return dims("covector length differs from the ambient dimension");
    }
    if p.pi().vec_mul(a0) != a0 {
        return precondition("covector does not factor through P");
    }
    Ok(contract(a0, &triv.w).iter().map(|x| -x).collect())
}

/// λ₃ on P₀ ⊕ R: λ(x̄∧ȳ)z_R − λ(x̄∧z̄)y_R + λ(ȳ∧z̄)x_R.
pub fn lambda3(p: &ProjModule, triv: &Trivialization, x: &[Elem], y: &[Elem], z: &[Elem]) -> Elem {
    let m = p.ambient();
    let bar = |v: &[Elem]| p.pi().mul_vec(&v[..m]);
    let (xb, yb, zb) = (bar(x), bar(y), bar(z));
    let l = |u: &[Elem], v: &[Elem]| pair_dot(&triv.lambda, &wedge(u, v));
    &(&(&l(&xb, &yb) * &z[m]) - &(&l(&xb, &zb) * &y[m])) + &(&l(&yb, &zb) * &x[m])
}

/// λ₃ as a covector on lexicographic triples of the ambient of P₀ ⊕ R.
pub fn lambda3_functional(p: &ProjModule, triv: &Trivialization) -> Result<Vec<Elem>> {
    triv.validate(p)?;
    let ring = p.ring().clone();
    let n = p.ambient() + 1;
    let e = |k: usize| -> Vec<Elem> { (0..n).map(|i| if i == k { Elem::one(&ring) } else { Elem::zero(&ring) }).collect() };
    Ok(triples(n).into_iter().map(|(i, j, k)| lambda3(p, triv, &e(i), &e(j), &e(k))).collect())
}

/// χ_a(x, y) = λ₃(x, y, s) on the kernel of a, as an ambient matrix on P₀ ⊕ R.
pub fn chi_a_form(epi: &UmEpi, triv: &Trivialization) -> Result<Matrix> {
    triv.validate(&epi.base)?;
    let kernel = kernel_module(epi)?;
    let form = chi_a_unchecked(epi, triv, &kernel);
    kernel.restricted_inverse(&form)?;
    Ok(form)
}

pub(crate) fn chi_a_unchecked(epi: &UmEpi, triv: &Trivialization, kernel: &ProjModule) -> Matrix {
    let n = epi.dim();
    let pk = kernel.pi();
    let cols: Vec<Vec<Elem>> = (0..n).map(|k| pk.col(k)).collect();
    let mut out = Matrix::zeros(epi.ring(), n, n);
    for k in 0..n {
        for l in k + 1..n {
            let v = lambda3(&epi.base, triv, &cols[k], &cols[l], &epi.s);
            out[(l, k)] = -&v;
            out[(k, l)] = v;
        }
    }
    out
}
