//! Elementary-transvection words over a block decomposition.
//!
//! A factor `I + s` has its coefficient `s` mapping one block into a different
//! one. Words keep their factors so they can serve as certificates.

use std::sync::Arc;

use crate::error::{dims, precondition, Error, Result};
use crate::matrix::{permutation_is_even, Matrix};
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Free(usize),
    /// A projective summand presented by an idempotent on `size` ambient coordinates.
    Projective(Matrix),
}

impl Block {
    pub fn size(&self) -> usize {
        match self {
            Block::Free(n) => *n,
            Block::Projective(pi) => pi.rows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    ring: Ring,
    blocks: Vec<Block>,
    offsets: Vec<usize>,
}

impl BlockDecomposition {
    pub fn new(ring: &Ring, blocks: Vec<Block>) -> Result<BlockDecomposition> {
        let projective = blocks.iter().filter(|b| matches!(b, Block::Projective(_))).count();
        if projective > 1 {
            return precondition("at most one idempotent block is allowed");
        }
        for b in &blocks {
            if let Block::Projective(pi) = b {
                if !pi.is_idempotent() {
                    return precondition("projective block matrix is not idempotent");
                }
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in &blocks {
            offsets.push(acc);
            acc += b.size();
        }
        Ok(BlockDecomposition { ring: ring.clone(), blocks, offsets })
    }

    pub fn free(ring: &Ring, sizes: &[usize]) -> BlockDecomposition {
        BlockDecomposition::new(ring, sizes.iter().map(|&n| Block::Free(n)).collect()).expect("free blocks")
    }

    /// One free block of size 1 per coordinate.
    pub fn fine(ring: &Ring, dim: usize) -> BlockDecomposition {
        BlockDecomposition::free(ring, &vec![1; dim])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
    pub fn len(&self) -> usize {
        self.blocks.len()
    }
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::size).sum()
    }
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }
    pub fn size(&self, i: usize) -> usize {
        self.blocks[i].size()
    }

    /// Ambient projector onto block `i`.
    pub fn projector(&self, i: usize) -> Matrix {
        let mut p = Matrix::zeros(&self.ring, self.dim(), self.dim());
        match &self.blocks[i] {
            Block::Free(n) => {
                for k in 0..*n {
                    p[(self.offsets[i] + k, self.offsets[i] + k)] = Elem::one(&self.ring);
                }
            }
            Block::Projective(pi) => p.set_block(self.offsets[i], self.offsets[i], pi),
        }
        p
    }

    /// Places a block-local coefficient (rows of `target`, columns of `source`)
    /// into ambient coordinates.
    pub fn embed(&self, target: usize, source: usize, local: &Matrix) -> Result<Matrix> {
        if local.rows() != self.size(target) || local.cols() != self.size(source) {
            return dims(format!(
                "coefficient is {}x{}, blocks are {} and {}",
                local.rows(),
                local.cols(),
                self.size(target),
                self.size(source)
            ));
        }
        let mut m = Matrix::zeros(&self.ring, self.dim(), self.dim());
        m.set_block(self.offsets[target], self.offsets[source], local);
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemFactor {
    pub target: usize,
    pub source: usize,
    /// Ambient coefficient, supported on (target rows) x (source columns).
    pub coeff: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemWord {
    blocks: Arc<BlockDecomposition>,
    factors: Vec<ElemFactor>,
}

impl ElemWord {
    pub fn new(blocks: BlockDecomposition) -> ElemWord {
        ElemWord { blocks: Arc::new(blocks), factors: Vec::new() }
    }

    pub fn with_blocks(blocks: &Arc<BlockDecomposition>) -> ElemWord {
        ElemWord { blocks: blocks.clone(), factors: Vec::new() }
    }

    pub fn blocks(&self) -> &Arc<BlockDecomposition> {
        &self.blocks
    }
    pub fn ring(&self) -> &Ring {
        self.blocks.ring()
    }
    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }
    pub fn factors(&self) -> &[ElemFactor] {
        &self.factors
    }
    pub fn len(&self) -> usize {
        self.factors.len()
    }
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Appends `I + coeff` after checking that the ambient coefficient maps
    /// block `source` into block `target`.
    pub fn push(&mut self, target: usize, source: usize, coeff: Matrix) -> Result<()> {
        if target == source || target >= self.blocks.len() || source >= self.blocks.len() {
            return precondition(format!("invalid factor blocks {target} <- {source}"));
        }
        if coeff.rows() != self.dim() || coeff.cols() != self.dim() {
            return dims("factor coefficient does not match the ambient dimension");
        }
        let pt = self.blocks.projector(target);
        let ps = self.blocks.projector(source);
        if (&(&pt * &coeff) * &ps) != coeff {
            return precondition(format!(
                "coefficient does not map block {source} into block {target}"
            ));
        }
        self.factors.push(ElemFactor { target, source, coeff });
        Ok(())
    }

    /// Appends a factor given by its block-local coefficient.
    pub fn push_local(&mut self, target: usize, source: usize, local: &Matrix) -> Result<()> {
        let coeff = self.blocks.embed(target, source, local)?;
        self.push(target, source, coeff)
    }

    pub fn concat(&self, other: &ElemWord) -> Result<ElemWord> {
        if *self.blocks != *other.blocks {
            return dims("words over different block decompositions");
        }
        let mut w = self.clone();
        w.factors.extend(other.factors.iter().cloned());
        Ok(w)
    }

    pub fn factor_matrix(&self, k: usize) -> Matrix {
        let i = Matrix::identity(self.ring(), self.dim());
        &i + &self.factors[k].coeff
    }

    /// Product of the factor matrices, left to right.
    pub fn eval(&self) -> Matrix {
        let mut acc = Matrix::identity(self.ring(), self.dim());
        for f in &self.factors {
            // acc (I + s) = acc + acc s
            acc = &acc + &(&acc * &f.coeff);
        }
        acc
    }

    /// Reversed order with negated coefficients.
    pub fn inverse(&self) -> ElemWord {
        ElemWord {
            blocks: self.blocks.clone(),
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| ElemFactor { target: f.target, source: f.source, coeff: f.coeff.neg() })
                .collect(),
        }
    }
}

pub fn eval_word(w: &ElemWord) -> Matrix {
    w.eval()
}

pub fn invert_word(w: &ElemWord) -> ElemWord {
    w.inverse()
}

/// Five-factor word for (id + gf) ⊕ (id + fg)⁻¹ on M₁ ⊕ M₂, where
/// f: M₁ → M₂ is |M₂|×|M₁| and g: M₂ → M₁ is |M₁|×|M₂|.
pub fn whitehead_word(f: &Matrix, g: &Matrix) -> Result<ElemWord> {
    let (a, b) = (f.cols(), f.rows());
    if g.rows() != a || g.cols() != b {
        return dims("f and g shapes are not transposed to each other");
    }
    let ring = f.ring();
    let one_gf = &Matrix::identity(ring, a) + &(g * f);
    let inv = match one_gf.inverse() {
        Ok(m) => m,
        Err(Error::NotInvertible) => return precondition("id + gf is not invertible"),
        Err(e) => return Err(e),
    };
    let mut w = ElemWord::new(BlockDecomposition::free(ring, &[a, b]));
    w.push_local(0, 1, &g.neg())?;
    w.push_local(1, 0, &f.neg())?;
    w.push_local(0, 1, g)?;
    w.push_local(0, 1, &(&(&inv * g) - g))?;
    w.push_local(1, 0, &(&(&(f * g) * f) + f))?;
    Ok(w)
}

/// Four-factor word φ_{s_ij} φ_{s_jk} φ_{-s_ij} φ_{-s_jk}, which evaluates
/// to φ_{s_ij s_jk}. Coefficients are block-local.
pub fn commutator_factorization(
    blocks: &BlockDecomposition,
    (i, j, s_ij): (usize, usize, &Matrix),
    (j2, k, s_jk): (usize, usize, &Matrix),
) -> Result<ElemWord> {
    if j != j2 || i == j || j == k || i == k {
        return precondition("commutator needs blocks i, j, k distinct and chained");
    }
    let mut w = ElemWord::new(blocks.clone());
    w.push_local(i, j, s_ij)?;
    w.push_local(j, k, s_jk)?;
    w.push_local(i, j, &s_ij.neg())?;
    w.push_local(j, k, &s_jk.neg())?;
    Ok(w)
}

/// Factor I + λ·E_ij on the fine decomposition.
fn unit_factor(w: &mut ElemWord, i: usize, j: usize, lambda: &Elem) -> Result<()> {
    let n = w.dim();
    let mut c = Matrix::zeros(w.ring(), n, n);
    c[(i, j)] = lambda.clone();
    w.push(i, j, c)
}

/// Word for the signed swap e_i ↦ -e_j, e_j ↦ e_i.
fn signed_swap(w: &mut ElemWord, i: usize, j: usize) -> Result<()> {
    let one = Elem::one(w.ring());
    unit_factor(w, i, j, &one)?;
    unit_factor(w, j, i, &-&one)?;
    unit_factor(w, i, j, &one)
}

/// Word (fine decomposition) evaluating to a signed permutation matrix of determinant 1.
pub fn signed_permutation_word(t: &Matrix) -> Result<ElemWord> {
    let n = t.rows();
    let ring = t.ring().clone();
    let mut perm = vec![usize::MAX; n];
    for k in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&i| !t[(i, k)].is_zero()).collect();
        if nz.len() != 1 || !(t[(nz[0], k)].is_one() || (-&t[(nz[0], k)]).is_one()) {
            return precondition("not a signed permutation matrix");
        }
        perm[k] = nz[0];
    }
    if !t.determinant()?.is_one() {
        return precondition("signed permutation has determinant other than 1");
    }
    let mut w = ElemWord::new(BlockDecomposition::fine(&ring, n));
    // perm = τ_1 ∘ … ∘ τ_r; the product of signed swaps realizes it up to signs
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut cycle = vec![s];
        seen[s] = true;
        let mut k = perm[s];
        while k != s {
            seen[k] = true;
            cycle.push(k);
            k = perm[k];
        }
        for idx in (1..cycle.len()).rev() {
            signed_swap(&mut w, cycle[0], cycle[idx])?;
        }
    }
    let s = w.eval();
    let d = &s.transpose() * t;
    let negs: Vec<usize> = (0..n).filter(|&i| !d[(i, i)].is_one()).collect();
    if negs.len() % 2 == 1 {
        return Err(Error::Verification("odd number of sign corrections".into()));
    }
    for pair in negs.chunks(2) {
        // diag(-1, -1) on a coordinate pair is the square of a signed swap
        signed_swap(&mut w, pair[0], pair[1])?;
        signed_swap(&mut w, pair[0], pair[1])?;
    }
    if w.eval() != *t {
        return Err(Error::Verification("signed permutation word does not evaluate to its target".into()));
    }
    Ok(w)
}

/// Word for the permutation matrix sending e_k to e_{perm[k]}; perm must be even.
pub fn permutation_word(ring: &Ring, perm: &[usize]) -> Result<ElemWord> {
    let n = perm.len();
    let mut check = perm.to_vec();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return precondition("not a permutation");
    }
    if !permutation_is_even(perm) {
        return precondition("odd permutation");
    }
    let mut t = Matrix::zeros(ring, n, n);
    for (k, &p) in perm.iter().enumerate() {
        t[(p, k)] = Elem::one(ring);
    }
    if t.is_identity() {
        return Ok(ElemWord::new(BlockDecomposition::fine(ring, n)));
    }
    signed_permutation_word(&t)
}

/// Column operations (fine decomposition) taking a unimodular row to the last
/// unit row vector: row · eval(word) = (0, …, 0, 1).
pub fn column_reduction_word(row: &[Elem]) -> Result<ElemWord> {
    let n = row.len();
    let ring = row.first().ok_or(Error::NotUnimodular)?.ring().clone();
    if n < 2 {
        return precondition("column reduction needs at least two entries");
    }
    let mut w = ElemWord::new(BlockDecomposition::fine(&ring, n));
    let mut d = row.to_vec();
    // col_j += λ col_i is the factor with coefficient λ at (i, j)
    let op = |w: &mut ElemWord, d: &mut Vec<Elem>, j: usize, i: usize, lambda: Elem| -> Result<()> {
        if lambda.is_zero() {
            return Ok(());
        }
        d[j] = &d[j] + &(&lambda * &d[i]);
        unit_factor(w, i, j, &lambda)
    };
    loop {
        let mut sizes = Vec::with_capacity(n);
        for x in &d {
            sizes.push(x.euclid_size().ok_or_else(|| {
                Error::Unsupported(format!("no Euclidean reduction over {}", ring))
            })?);
        }
        let nonzero: Vec<usize> = (0..n).filter(|&k| !d[k].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&k| sizes[k].clone()).unwrap();
        for &k in &nonzero {
            if k != piv {
                let q = d[k].euclid_quotient(&d[piv]).ok_or(Error::NotUnimodular)?;
                op(&mut w, &mut d, k, piv, -q)?;
            }
        }
    }
    let g_pos = (0..n).find(|&k| !d[k].is_zero()).ok_or(Error::NotUnimodular)?;
    let g = d[g_pos].clone();
    let ginv = g.inverse().ok_or(Error::NotUnimodular)?;
    let last = n - 1;
    let one = Elem::one(&ring);
    if g_pos == last {
        if !g.is_one() {
            op(&mut w, &mut d, 0, last, one.clone())?;
            op(&mut w, &mut d, last, 0, &ginv - &one)?;
            op(&mut w, &mut d, 0, last, -&g)?;
        }
    } else {
        op(&mut w, &mut d, last, g_pos, ginv)?;
        op(&mut w, &mut d, g_pos, last, -&g)?;
    }
    let target: Vec<Elem> = (0..n).map(|k| if k == last { one.clone() } else { Elem::zero(&ring) }).collect();
    if w.eval().vec_mul(row) != target {
        return Err(Error::Verification("column reduction missed the unit row".into()));
    }
    Ok(w)
}

#[derive(Clone, Debug)]
pub enum Transvection {
    /// id + p·π_last, with p supported on the first 2n−1 coordinates.
    AddToLast(Vec<Elem>),
    /// id + e_last·a, with a a functional on the first 2n−1 coordinates.
    AddFunctional(Vec<Elem>),
}

fn symplectic(chi: &Matrix, m: &Matrix) -> bool {
    Matrix::congruence(m, chi).map(|c| c == *chi).unwrap_or(false)
}

/// Elementary symplectic correction of a transvection on the free module of
/// rank 2n with skew invertible form χ.
///
/// The word lives on the blocks (2n−1, 1). Its last factor is the transvection
/// itself; the factors before it form the correction, which fixes e_last.
pub fn symplectic_transvection(chi: &Matrix, kind: &Transvection) -> Result<ElemWord> {
    let n2 = chi.rows();
    if !chi.is_skew() || n2 < 2 || n2 % 2 == 1 {
        return precondition("χ must be skew of even size");
    }
    let ring = chi.ring().clone();
    let l = n2 - 1;
    let binv = chi.inverse()?;
    let mut w = ElemWord::new(BlockDecomposition::free(&ring, &[l, 1]));
    let head = |v: &[Elem]| -> Result<Vec<Elem>> {
        match v.len() {
            x if x == l => Ok(v.to_vec()),
            x if x == n2 && v[l].is_zero() => Ok(v[..l].to_vec()),
            _ => precondition("vector must live on the first 2n-1 coordinates"),
        }
    };
    match kind {
        Transvection::AddToLast(p) => {
            let p = head(p)?;
            // d = χ⁻¹ e_last lies in the first 2n−1 coordinates, ν = χ(p, −)
            let d: Vec<Elem> = (0..l).map(|i| binv[(i, l)].clone()).collect();
            let mut p_full = p.clone();
            p_full.push(Elem::zero(&ring));
            let nu = chi.vec_mul(&p_full);
            let nu: Vec<Elem> = nu[..l].iter().map(|x| -x).collect();
            if !(p.iter().all(Elem::is_zero)) {
                let wh = whitehead_word(&Matrix::row_vec(&ring, &nu), &Matrix::column(&ring, &d))?;
                w = wh;
            }
            w.push_local(0, 1, &Matrix::column(&ring, &p))?;
        }
        Transvection::AddFunctional(a) => {
            let a = head(a)?;
            let mut a_full = a.clone();
            a_full.push(Elem::zero(&ring));
            // c = χ(−, e_last); ϑ solves χ(ϑ, −) = a modulo c on the first
            // 2n−1 coordinates, shifted along d = χ⁻¹e_last so that c(ϑ) = 0.
            // The correction is then (id + ϑc) ⊕ 1.
            let c: Vec<Elem> = (0..l).map(|j| chi[(j, l)].clone()).collect();
            let d: Vec<Elem> = (0..l).map(|i| binv[(i, l)].clone()).collect();
            let mut theta = binv.mul_vec(&a_full);
            theta.truncate(l);
            let c_theta = c.iter().zip(&theta).fold(Elem::zero(&ring), |acc, (x, y)| &acc + &(x * y));
            let theta: Vec<Elem> = theta.iter().zip(&d).map(|(t, di)| t - &(&c_theta * di)).collect();
            if !(a.iter().all(Elem::is_zero)) {
                w = whitehead_word(&Matrix::row_vec(&ring, &c), &Matrix::column(&ring, &theta))?;
            }
            w.push_local(1, 0, &Matrix::row_vec(&ring, &a))?;
        }
    }
    w.factors.retain(|f| !f.coeff.is_zero());
    if !symplectic(chi, &w.eval()) {
        return Err(Error::Verification("transvection correction is not symplectic".into()));
    }
    Ok(w)
}

/// Splits every factor of a free-module word into single-entry generators
/// touching the last coordinate, using the commutator identity for entries
/// away from it. The result lives on the blocks (dim−1, 1).
fn last_coordinate_generators(w: &ElemWord) -> Result<ElemWord> {
    if w.blocks().blocks().iter().any(|b| matches!(b, Block::Projective(_))) {
        return Err(Error::Unsupported("orbit words over idempotent blocks".into()));
    }
    let n = w.dim();
    let ring = w.ring().clone();
    let l = n - 1;
    let mut out = ElemWord::new(BlockDecomposition::free(&ring, &[l, 1]));
    let one = Elem::one(&ring);
    let single = |out: &mut ElemWord, i: usize, j: usize, lambda: &Elem| -> Result<()> {
        let mut c = Matrix::zeros(&ring, n, n);
        c[(i, j)] = lambda.clone();
        let (t, s) = (if i == l { 1 } else { 0 }, if j == l { 1 } else { 0 });
        out.push(t, s, c)
    };
    for f in w.factors() {
        // entries within the last row or column form one generator each
        let mut col = Matrix::zeros(&ring, n, n);
        let mut row = Matrix::zeros(&ring, n, n);
        for i in 0..n {
            for j in 0..n {
                let x = &f.coeff[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if i == j {
                    return precondition("factor coefficient touches the diagonal");
                }
                if j == l {
                    col[(i, j)] = x.clone();
                } else if i == l {
                    row[(i, j)] = x.clone();
                }
            }
        }
        // entries in row l and column l of one factor cannot both occur
        // (that would need target = source); emit them in any order
        if !col.is_zero() {
            out.push(0, 1, col)?;
        }
        if !row.is_zero() {
            out.push(1, 0, row)?;
        }
        for i in 0..l {
            for j in 0..l {
                let x = &f.coeff[(i, j)];
                if !x.is_zero() {
                    single(&mut out, i, l, x)?;
                    single(&mut out, l, j, &one)?;
                    single(&mut out, i, l, &-x)?;
                    single(&mut out, l, j, &-&one)?;
                }
            }
        }
    }
    Ok(out)
}

/// Given a word w with eval(w)·p = e_last, produces a word W of symplectic
/// elementary factors (for χ) with eval(W)·p = e_last.
///
/// Works from the right end of w: each generator α is corrected to a
/// symplectic S = Lα with L fixing e_last, and the remaining generators are
/// conjugated by L before recursing.
pub fn symplectic_orbit_word(chi: &Matrix, w: &ElemWord) -> Result<ElemWord> {
    let n = chi.rows();
    if w.dim() != n {
        return dims("word and form sizes differ");
    }
    let ring = chi.ring().clone();
    let l = n - 1;
    let mut e_last = vec![Elem::zero(&ring); n];
    e_last[l] = Elem::one(&ring);
    let p = w.eval().inverse()?.mul_vec(&e_last);

    let mut word = last_coordinate_generators(w)?;
    let mut corrections: Vec<ElemWord> = Vec::new();
    while let Some(alpha) = word.factors.pop() {
        let kind = if alpha.source == 1 {
            Transvection::AddToLast(alpha.coeff.col(l))
        } else {
            Transvection::AddFunctional(alpha.coeff.row(l))
        };
        let s = symplectic_transvection(chi, &kind)?;
        let mut lw = s.clone();
        lw.factors.pop();
        // the correction is γ ⊕ 1, so conjugating a generator by it gives
        // another generator of the same shape
        let lm = lw.eval();
        if (0..l).any(|i| !lm[(i, l)].is_zero() || !lm[(l, i)].is_zero()) {
            return Err(Error::Verification("correction does not fix the last summand".into()));
        }
        let linv = lm.inverse()?;
        for beta in word.factors.iter_mut() {
            beta.coeff = &(&lm * &beta.coeff) * &linv;
        }
        corrections.push(s);
    }
    let mut out = ElemWord::new(BlockDecomposition::free(&ring, &[l, 1]));
    for s in corrections.iter().rev() {
        out.factors.extend(s.factors.iter().cloned());
    }
    let m = out.eval();
    if m.mul_vec(&p) != e_last || !symplectic(chi, &m) {
        return Err(Error::Verification("symplectic orbit word failed its checks".into()));
    }
    Ok(out)
}
