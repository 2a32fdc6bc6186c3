//! Representatives of W'_E(R), triples of skew forms and the group V(R).

use std::collections::BTreeMap;
use std::fmt;

use crate::elem::{column_reduction_word, BlockDecomposition, ElemWord};
use crate::error::{dims, precondition, Error, Result};
use crate::matrix::{hyperbolic_h, psi, sigma, Matrix};
use crate::projmod::ProjModule;
use crate::ring::{Elem, Ring};

/// An invertible skew matrix with unit Pfaffian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittRep {
    m: Matrix,
    pf: Elem,
}

impl WittRep {
    pub fn new(m: Matrix) -> Result<WittRep> {
        if m.rows() % 2 == 1 || !m.is_skew() {
            return precondition("representatives must be skew of even size");
        }
        let pf = m.pfaffian()?;
        if pf.inverse().is_none() {
            return Err(Error::NotInvertible);
        }
        Ok(WittRep { m, pf })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }
    pub fn pfaffian(&self) -> &Elem {
        &self.pf
    }
    pub fn size(&self) -> usize {
        self.m.rows()
    }
    pub fn ring(&self) -> &Ring {
        self.m.ring()
    }
}

/// Certificate for M ⊥ ψ = Eᵀ (N ⊥ ψ) E after s extra hyperbolic planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCert {
    pub level: usize,
    pub word: ElemWord,
}

/// M ⊥ ψ_{2s}.
pub fn stabilize(m: &WittRep, s: usize) -> WittRep {
    WittRep { m: plus_psi(&m.m, s), pf: m.pf.clone() }
}

fn plus_psi(m: &Matrix, half: usize) -> Matrix {
    if half == 0 {
        m.clone()
    } else {
        m.orthogonal_sum(&psi(m.ring(), half))
    }
}

/// σ M⁻¹ σ, which represents the inverse class.
pub fn witt_inverse(m: &WittRep) -> Result<WittRep> {
    let s = sigma(m.ring(), m.size() / 2);
    WittRep::new(&(&s * &m.m.inverse()?) * &s)
}

/// Checks M ⊥ ψ_{2n+2s} = Eᵀ (N ⊥ ψ_{2m+2s}) E entrywise, where M has size 2m
/// and N has size 2n.
pub fn verify_equiv(m: &WittRep, n: &WittRep, cert: &EquivCert) -> Result<bool> {
    let total = m.size() + n.size() + 2 * cert.level;
    if cert.word.dim() != total {
        return dims(format!("certificate word has dimension {}, expected {total}", cert.word.dim()));
    }
    let left = plus_psi(&m.m, n.size() / 2 + cert.level);
    let right = plus_psi(&n.m, m.size() / 2 + cert.level);
    Ok(Matrix::congruence(&cert.word.eval(), &right)? == left)
}

/// A triple (P, g, f) of skew forms, nondegenerate on P, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTriple {
    pub module: ProjModule,
    pub g: Matrix,
    pub f: Matrix,
}

impl VTriple {
    pub fn new(module: ProjModule, g: Matrix, f: Matrix) -> Result<VTriple> {
        for form in [&g, &f] {
            if form.rows() != module.ambient() {
                return dims("form size differs from the module's ambient dimension");
            }
            module.restricted_inverse(form)?;
        }
        Ok(VTriple { module, g, f })
    }

    pub fn free(g: Matrix, f: Matrix) -> Result<VTriple> {
        let module = ProjModule::free(g.ring(), g.rows());
        VTriple::new(module, g, f)
    }

    pub fn ring(&self) -> &Ring {
        self.g.ring()
    }

    fn key(&self) -> (String, String, String) {
        (self.module.pi().to_string(), self.g.to_string(), self.f.to_string())
    }
}

/// Formal integer combination of triples.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VElement {
    pub terms: Vec<(i64, VTriple)>,
}

impl VElement {
    pub fn single(t: VTriple) -> VElement {
        VElement { terms: vec![(1, t)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &VElement) -> VElement {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        VElement { terms }
    }

    pub fn neg(&self) -> VElement {
        VElement { terms: self.terms.iter().map(|(c, t)| (-c, t.clone())).collect() }
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (c, t) in &self.terms {
            let kind = if t.module.is_free_ambient() { "free" } else { "projective" };
            writeln!(f, "{c} * [{kind} rank {}]", t.module.rank())?;
            write!(f, "g:\n{}f:\n{}", t.g, t.f)?;
        }
        Ok(())
    }
}

/// [R^{2m}, ψ_{2m}, M].
pub fn nu(m: &WittRep) -> VElement {
    let g = psi(m.ring(), m.size() / 2);
    let module = ProjModule::free(m.ring(), m.size());
    VElement::single(VTriple { module, g, f: m.m.clone() })
}

/// f ⊥ σ g⁻¹ σ for a triple on a free module; triples on other modules are
/// first embedded with [`free_embed`].
pub fn xi(t: &VTriple) -> Result<WittRep> {
    let t = if t.module.is_free_ambient() { t.clone() } else { free_embed(t)? };
    let n = t.g.rows();
    if n % 2 == 1 {
        return precondition("free triples need even rank");
    }
    let s = sigma(t.ring(), n / 2);
    let ginv = t.g.inverse()?;
    WittRep::new(t.f.orthogonal_sum(&(&(&s * &ginv) * &s)))
}

/// Pfaffian of ξ of the triple.
pub fn triple_pfaffian(t: &VTriple) -> Result<Elem> {
    Ok(xi(t)?.pf)
}

/// [[0, πᵀ], [−π, 0]] on ambient P ⊕ P^∨ coordinates.
pub fn hyperbolic(p: &ProjModule) -> Matrix {
    let ring = p.ring();
    let m = p.ambient();
    let z = Matrix::zeros(ring, m, m);
    Matrix::blocks(&z, &p.pi().transpose(), &p.pi().neg(), &z).expect("square blocks")
}

/// Embeds [P, g, f] as the free triple [P ⊕ P^∨ ⊕ Q ⊕ Q^∨, g ⊥ g⁻¹ ⊥ H_Q,
/// f ⊥ g⁻¹ ⊥ H_Q] with Q the image of I − π, written on R^m ⊕ R^m.
pub fn free_embed(t: &VTriple) -> Result<VTriple> {
    let q = t.module.co_pi();
    let gplus = t.module.restricted_inverse(&t.g)?;
    let qt = q.transpose();
    let nq = q.neg();
    let big_g = Matrix::blocks(&t.g, &qt, &nq, &gplus)?;
    let big_f = Matrix::blocks(&t.f, &qt, &nq, &gplus)?;
    Ok(VTriple { module: ProjModule::free(t.ring(), 2 * t.module.ambient()), g: big_g, f: big_f })
}

fn strict_upper(b: &Matrix) -> Matrix {
    Matrix::from_fn(b.ring(), b.rows(), b.cols(), |i, j| {
        if i < j {
            b[(i, j)].clone()
        } else {
            Elem::zero(b.ring())
        }
    })
}

/// Y with Y − Yᵀ = −B: −½B when 2 is a unit, otherwise minus the strict
/// upper triangle.
fn half_correction(b: &Matrix) -> Matrix {
    let ring = b.ring();
    match Elem::from_int(ring, 2).inverse() {
        Some(h) => b.scale(&-h),
        None => strict_upper(b).neg(),
    }
}

/// Word α on P ⊕ P^∨ (⊕ Q ⊕ Q^∨) with αᵀ(χ ⊥ χ⁻¹ ⊥ H_Q)α = H_P ⊥ H_Q, for a
/// free P with form χ and a free Q of rank `q_rank`.
pub fn hyperbolic_diagonalize(chi: &Matrix, q_rank: usize) -> Result<ElemWord> {
    let ring = chi.ring().clone();
    let k = chi.rows();
    if !chi.is_skew() {
        return precondition("χ must be skew");
    }
    let chi_inv = chi.inverse()?;
    let sizes: Vec<usize> = if q_rank == 0 { vec![k, k] } else { vec![k, k, q_rank, q_rank] };
    let mut w = ElemWord::new(BlockDecomposition::free(&ring, &sizes));
    w.push_local(0, 1, &chi_inv)?;
    w.push_local(1, 0, &half_correction(chi))?;
    let mut source = chi.orthogonal_sum(&chi_inv);
    let mut target = hyperbolic_h(&ring, k);
    if q_rank > 0 {
        source = source.orthogonal_sum(&hyperbolic_h(&ring, q_rank));
        target = target.orthogonal_sum(&hyperbolic_h(&ring, q_rank));
    }
    if Matrix::congruence(&w.eval(), &source)? != target {
        return Err(Error::Verification("hyperbolic diagonalization did not land on H".into()));
    }
    Ok(w)
}

/// The same construction for the embedded form G = [[g, Qᵀ], [−Q, g⁺]] of a
/// triple: a word α on R^m ⊕ R^m with αᵀGα = h_{2m}.
pub fn hyperbolic_diagonalize_embedded(module: &ProjModule, g: &Matrix) -> Result<ElemWord> {
    let ring = g.ring().clone();
    let m = module.ambient();
    let gplus = module.restricted_inverse(g)?;
    let q = module.co_pi();
    let big_g = Matrix::blocks(g, &q.transpose(), &q.neg(), &gplus)?;
    let mut w = ElemWord::new(BlockDecomposition::free(&ring, &[m, m]));
    w.push_local(0, 1, &gplus)?;
    w.push_local(1, 0, &half_correction(g))?;
    if Matrix::congruence(&w.eval(), &big_g)? != hyperbolic_h(&ring, m) {
        return Err(Error::Verification("embedded form did not diagonalize to H".into()));
    }
    Ok(w)
}

/// Elementary φ with φᵀχφ = ψ ⊥ ψ₂ for χ skew invertible of size 2n+2.
/// The word uses one block per coordinate.
pub fn split_off_hyperbolic(chi: &Matrix) -> Result<(ElemWord, Matrix)> {
    let n2 = chi.rows();
    if n2 < 4 || n2 % 2 == 1 || !chi.is_skew() {
        return precondition("split needs a skew form of even size at least 4");
    }
    let ring = chi.ring().clone();
    let last = n2 - 1;
    // d = χ(−, e_last) on the first 2n+1 coordinates
    let d: Vec<Elem> = (0..last).map(|j| chi[(j, last)].clone()).collect();
    let reduce = column_reduction_word(&d)?;
    let mut w = ElemWord::new(BlockDecomposition::fine(&ring, n2));
    for f in reduce.factors() {
        let mut c = Matrix::zeros(&ring, n2, n2);
        c.set_block(0, 0, &f.coeff);
        w.push(f.target, f.source, c)?;
    }
    let chi1 = Matrix::congruence(&w.eval(), chi)?;
    // c = χ′(−, e_{2n+1}) on the first 2n coordinates, cleared by e_j ↦ e_j + c_j e_last
    let pen = last - 1;
    for j in 0..pen {
        let cj = chi1[(j, pen)].clone();
        if !cj.is_zero() {
            let mut c = Matrix::zeros(&ring, n2, n2);
            c[(last, j)] = cj;
            w.push(last, j, c)?;
        }
    }
    let out = Matrix::congruence(&w.eval(), chi)?;
    let rest = out.submatrix(0, 0, pen, pen);
    if out != rest.orthogonal_sum(&psi(&ring, 1)) {
        return Err(Error::Verification("split did not produce ψ ⊥ ψ₂".into()));
    }
    Ok((w, rest))
}

/// (P, u·g, u·f).
pub fn unit_action(u: &Elem, t: &VTriple) -> Result<VTriple> {
    if u.inverse().is_none() {
        return precondition(format!("{u} is not a unit"));
    }
    Ok(VTriple { module: t.module.clone(), g: t.g.scale(u), f: t.f.scale(u) })
}

/// If both forms are block diagonal at an even split point k, returns k.
fn orthogonal_split(t: &VTriple) -> Option<usize> {
    if !t.module.is_free_ambient() {
        return None;
    }
    let n = t.g.rows();
    (2..n).step_by(2).find(|&k| {
        [&t.g, &t.f]
            .iter()
            .all(|m| (0..k).all(|i| (k..n).all(|j| m[(i, j)].is_zero() && m[(j, i)].is_zero())))
    })
}

/// Syntactic simplification with the defining relations of V(R): drops
/// [P, f, f], orients each triple canonically using [P, g, f] = −[P, f, g],
/// splits orthogonal sums on free modules and composes chains
/// [P, f0, f1] + [P, f1, f2] = [P, f0, f2].
pub fn v_reduce(x: &VElement) -> VElement {
    type Key = (String, String, String);
    let mut terms: Vec<(i64, VTriple)> = x.terms.clone();
    loop {
        // orient, merge, drop trivial
        let mut merged: BTreeMap<Key, (i64, VTriple)> = BTreeMap::new();
        let mut queue = terms;
        let mut split_any = false;
        while let Some((c, t)) = queue.pop() {
            if c == 0 || t.g == t.f {
                continue;
            }
            if let Some(k) = orthogonal_split(&t) {
                let n = t.g.rows();
                let ring = t.ring().clone();
                for (start, len) in [(0, k), (k, n - k)] {
                    queue.push((
                        c,
                        VTriple {
                            module: ProjModule::free(&ring, len),
                            g: t.g.submatrix(start, start, len, len),
                            f: t.f.submatrix(start, start, len, len),
                        },
                    ));
                }
                split_any = true;
                continue;
            }
            let (c, t) = if t.g.to_string() > t.f.to_string() {
                (-c, VTriple { module: t.module, g: t.f, f: t.g })
            } else {
                (c, t)
            };
            let key = t.key();
            merged.entry(key).and_modify(|e| e.0 += c).or_insert((c, t));
        }
        terms = merged.into_values().filter(|(c, _)| *c != 0).collect();
        let _ = split_any;

        // one chain step, then renormalize
        let mut changed = false;
        'outer: for a in 0..terms.len() {
            for b in 0..terms.len() {
                if a == b || terms[a].1.module != terms[b].1.module {
                    continue;
                }
                // views (coefficient, from, to); orientation o means stored = o * view
                let va = [(terms[a].0, &terms[a].1.g, &terms[a].1.f, 1), (-terms[a].0, &terms[a].1.f, &terms[a].1.g, -1)];
                let vb = [(terms[b].0, &terms[b].1.g, &terms[b].1.f, 1), (-terms[b].0, &terms[b].1.f, &terms[b].1.g, -1)];
                for &(ca, f0, f1, oa) in &va {
                    for &(cb, f1b, f2, ob) in &vb {
                        if f1 != f1b || ca.signum() != cb.signum() {
                            continue;
                        }
                        let m = ca.signum() * ca.abs().min(cb.abs());
                        let new = VTriple { module: terms[a].1.module.clone(), g: f0.clone(), f: f2.clone() };
                        terms[a].0 -= oa * m;
                        terms[b].0 -= ob * m;
                        terms.push((m, new));
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        if !changed {
            return VElement { terms };
        }
    }
}
