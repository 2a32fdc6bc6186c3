//! Dense matrices over a [`Ring`], with a division-free determinant and the Pfaffian.

use std::collections::HashMap;
use std::fmt;

use crate::error::{dims, precondition, Error, Result};
use crate::ring::{Elem, Ring};

/// Largest skew matrix the Pfaffian DP accepts (per connected component).
pub const PFAFFIAN_MAX: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardForm {
    Psi,
    Sigma,
    H,
    Gamma,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![Elem::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = Elem::one(ring);
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix::from_fn(ring, r, c, |i, j| Elem::from_int(ring, rows[i][j]))
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return dims("ragged rows");
        }
        Ok(Matrix { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Column vector.
    pub fn column(ring: &Ring, v: &[Elem]) -> Matrix {
        Matrix { ring: ring.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Row vector.
    pub fn row_vec(ring: &Ring, v: &[Elem]) -> Matrix {
        Matrix { ring: ring.clone(), rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.ring, self.rows)
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return dims(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut out = Matrix::zeros(&self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Elem, &Elem) -> Elem) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return dims(format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Elem::one(&self.ring))
    }

    /// Copy of the block with the given top-left corner and shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.ring, rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// 2×2 block matrix [[a, b], [c, d]].
    pub fn blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return dims("block shapes disagree");
        }
        let mut m = Matrix::zeros(&a.ring, a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        Ok(m)
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero() && (i + 1..self.rows).all(|j| self[(i, j)] == -&self[(j, i)])
            })
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.try_mul(self).map(|s| s == *self).unwrap_or(false)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            dims(format!("expected a square matrix, got {}x{}", self.rows, self.cols))
        }
    }

    /// Coefficients c₀ = 1, c₁, …, cₙ of det(tI − A) = Σ cₖ tⁿ⁻ᵏ, by Berkowitz's
    /// division-free recursion.
    pub fn charpoly(&self) -> Result<Vec<Elem>> {
        self.require_square()?;
        let ring = &self.ring;
        let n = self.rows;
        let mut c = vec![Elem::one(ring)];
        for k in 1..=n {
            // leading k×k block: [[M, s], [r, a]] with M of size k-1
            let a = &self[(k - 1, k - 1)];
            let mut t = vec![Elem::one(ring), -a];
            // v runs through M^j s
            let mut v: Vec<Elem> = (0..k - 1).map(|i| self[(i, k - 1)].clone()).collect();
            for _ in 0..k - 1 {
                let rv = (0..k - 1).fold(Elem::zero(ring), |acc, i| &acc + &(&self[(k - 1, i)] * &v[i]));
                t.push(-&rv);
                v = (0..k - 1)
                    .map(|i| (0..k - 1).fold(Elem::zero(ring), |acc, j| &acc + &(&self[(i, j)] * &v[j])))
                    .collect();
            }
            let mut next = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let mut s = Elem::zero(ring);
                for (j, cj) in c.iter().enumerate().take(i + 1) {
                    s = &s + &(&t[i - j] * cj);
                }
                next.push(s);
            }
            c = next;
        }
        Ok(c)
    }

    pub fn determinant(&self) -> Result<Elem> {
        let c = self.charpoly()?;
        let cn = c.last().unwrap().clone();
        Ok(if self.rows % 2 == 0 { cn } else { -cn })
    }

    /// Adjugate from the Cayley–Hamilton identity; no division needed.
    pub fn adjugate(&self) -> Result<Matrix> {
        let c = self.charpoly()?;
        let n = self.rows;
        let ring = &self.ring;
        if n == 0 {
            return Ok(Matrix::zeros(ring, 0, 0));
        }
        // Horner: A^{n-1} + c1 A^{n-2} + ... + c_{n-1} I
        let mut acc = Matrix::identity(ring, n);
        for ck in c.iter().take(n).skip(1) {
            acc = self.try_mul(&acc)?.try_add(&Matrix::identity(ring, n).scale(ck))?;
        }
        Ok(if n % 2 == 1 { acc } else { acc.neg() })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let det = self.determinant()?;
        let dinv = det.inverse().ok_or(Error::NotInvertible)?;
        let inv = self.adjugate()?.scale(&dinv);
        if !self.try_mul(&inv)?.is_identity() {
            return Err(Error::Verification("adjugate inverse failed to check".into()));
        }
        Ok(inv)
    }

    /// Pfaffian of a skew-symmetric matrix.
    ///
    /// The support graph is split into connected components first (each
    /// component is relabelled contiguously, tracking the permutation sign),
    /// then each component is evaluated by a DP over matched-vertex subsets.
    pub fn pfaffian(&self) -> Result<Elem> {
        self.require_square()?;
        if self.rows % 2 == 1 {
            return precondition(format!("Pfaffian of odd size {}", self.rows));
        }
        if !self.is_skew() {
            return precondition("Pfaffian of a matrix that is not skew-symmetric");
        }
        let n = self.rows;
        let ring = &self.ring;
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                for w in 0..n {
                    if comp[w] == usize::MAX && !self[(v, w)].is_zero() {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            if members.len() % 2 == 1 {
                return Ok(Elem::zero(ring));
            }
            comps.push(members);
        }
        // Pf(PᵀAP) = det(P) Pf(A): reordering vertices into component order
        // costs the sign of that permutation.
        let order: Vec<usize> = comps.iter().flatten().copied().collect();
        let mut result = if permutation_is_even(&order) { Elem::one(ring) } else { -Elem::one(ring) };
        for members in &comps {
            if members.len() > PFAFFIAN_MAX {
                return Err(Error::SizeLimit(format!(
                    "Pfaffian component of size {} exceeds {PFAFFIAN_MAX}",
                    members.len()
                )));
            }
            let sub = Matrix::from_fn(ring, members.len(), members.len(), |i, j| {
                self[(members[i], members[j])].clone()
            });
            result = &result * &sub.pfaffian_dp();
            if result.is_zero() {
                break;
            }
        }
        Ok(result)
    }

    /// Subset DP: states are sets of already-matched vertices; the lowest
    /// unmatched vertex is always matched next.
    fn pfaffian_dp(&self) -> Elem {
        let n = self.rows;
        let ring = &self.ring;
        if n == 0 {
            return Elem::one(ring);
        }
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut layer: HashMap<u32, Elem> = HashMap::from([(0u32, Elem::one(ring))]);
        for _ in 0..n / 2 {
            let mut next: HashMap<u32, Elem> = HashMap::new();
            let mut keys: Vec<u32> = layer.keys().copied().collect();
            keys.sort_unstable();
            for mask in keys {
                let val = &layer[&mask];
                let i = (!mask).trailing_zeros() as usize;
                let mut between = 0usize;
                for j in i + 1..n {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let a = &self[(i, j)];
                    if !a.is_zero() {
                        let term = val * a;
                        let term = if between % 2 == 0 { term } else { -term };
                        let key = mask | (1 << i) | (1 << j);
                        match next.get_mut(&key) {
                            Some(e) => *e = &*e + &term,
                            None => {
                                next.insert(key, term);
                            }
                        }
                    }
                    between += 1;
                }
            }
            next.retain(|_, v| !v.is_zero());
            layer = next;
        }
        layer.remove(&full).unwrap_or_else(|| Elem::zero(ring))
    }

    /// Orthogonal sum: block-diagonal placement in argument order.
    pub fn orthogonal_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn block_diag(ring: &Ring, parts: &[&Matrix]) -> Matrix {
        parts.iter().fold(Matrix::zeros(ring, 0, 0), |acc, p| acc.orthogonal_sum(p))
    }

    /// GᵀNG.
    pub fn congruence(g: &Matrix, n: &Matrix) -> Result<Matrix> {
        g.transpose().try_mul(n)?.try_mul(g)
    }

    /// Column vector times row vector.
    pub fn outer(ring: &Ring, col: &[Elem], row: &[Elem]) -> Matrix {
        Matrix::from_fn(ring, col.len(), row.len(), |i, j| &col[i] * &row[j])
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Elem::zero(&self.ring), |acc, j| &acc + &(&self[(i, j)] * &v[j])))
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Elem::zero(&self.ring), |acc, i| &acc + &(&v[i] * &self[(i, j)])))
            .collect()
    }
}

pub(crate) fn permutation_is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// ψ, σ, h and γ_u matrices of half-size n.
pub fn standard_form(ring: &Ring, kind: StandardForm, n: usize, u: Option<&Elem>) -> Result<Matrix> {
    if n == 0 {
        return precondition("standard forms need n >= 1");
    }
    let one = Elem::one(ring);
    let mut m = Matrix::zeros(ring, 2 * n, 2 * n);
    match kind {
        StandardForm::Psi => {
            for k in 0..n {
                m[(2 * k, 2 * k + 1)] = one.clone();
                m[(2 * k + 1, 2 * k)] = -&one;
            }
        }
        StandardForm::Sigma => {
            for k in 0..n {
                m[(2 * k, 2 * k + 1)] = one.clone();
                m[(2 * k + 1, 2 * k)] = one.clone();
            }
        }
        StandardForm::H => {
            for k in 0..n {
                m[(k, n + k)] = one.clone();
                m[(n + k, k)] = -&one;
            }
        }
        StandardForm::Gamma => {
            let u = u.ok_or_else(|| Error::Precondition("gamma needs a unit u".into()))?;
            if u.inverse().is_none() {
                return precondition(format!("{u} is not a unit"));
            }
            for k in 0..n {
                m[(2 * k, 2 * k)] = u.clone();
                m[(2 * k + 1, 2 * k + 1)] = one.clone();
            }
        }
    }
    Ok(m)
}

pub fn psi(ring: &Ring, n: usize) -> Matrix {
    standard_form(ring, StandardForm::Psi, n, None).expect("n >= 1")
}

pub fn sigma(ring: &Ring, n: usize) -> Matrix {
    standard_form(ring, StandardForm::Sigma, n, None).expect("n >= 1")
}

pub fn hyperbolic_h(ring: &Ring, n: usize) -> Matrix {
    standard_form(ring, StandardForm::H, n, None).expect("n >= 1")
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product shapes")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum shapes")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference shapes")
    }
}

impl fmt::Display for Matrix {
    /// One row per line, entries separated by ", ".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", row.join(", "))?;
        }
        Ok(())
    }
}
