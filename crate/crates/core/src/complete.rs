//! Completions of epimorphisms (a₀, a_R²) to automorphisms of determinant 1.

use crate::error::{dims, precondition, Error, Result};
use crate::matrix::Matrix;
use crate::projmod::{chi0_contract_inverse, chi0_form, ProjModule, Trivialization, UmEpi};
use crate::ring::Elem;

/// Krusemeyer's completion of (b, c, a²), given qb + rc + ap = 1.
pub fn krusemeyer(b: &Elem, c: &Elem, a: &Elem, q: &Elem, r: &Elem, p: &Elem) -> Result<Matrix> {
    if !(&(&(q * b) + &(r * c)) + &(a * p)).is_one() {
        return precondition("qb + rc + ap is not 1");
    }
    let two = Elem::from_int(b.ring(), 2);
    let rows = vec![
        vec![&-p - &(q * r), q * q, &-c + &(&(&two * a) * q)],
        vec![-&(r * r), &-p + &(q * r), b + &(&(&two * a) * r)],
        vec![b.clone(), c.clone(), a * a],
    ];
    let m = Matrix::from_rows(b.ring(), rows)?;
    if !m.determinant()?.is_one() {
        return Err(Error::Verification("Krusemeyer matrix does not have determinant 1".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    /// Ambient matrix of the automorphism of P₀ ⊕ R, extended by the
    /// identity on the complement of P₀.
    pub matrix: Matrix,
    /// The completed epimorphism (a₀, a_R²).
    pub target: Vec<Elem>,
}

/// The block endomorphism [[φ₀, φ_R], [a₀, a_R²]] of P₀ ⊕ R with
/// φ₀ = −q·χ₀(−, q) − p·id and φ_R(1) = 2a_R·q + χ₀⁻¹(a₀), where s(1) = (q, p).
pub fn generalized_completion(base: &ProjModule, triv: &Trivialization, epi: &UmEpi) -> Result<Completion> {
    if base.rank() != 2 {
        return precondition("completion needs P₀ of rank 2");
    }
    if *base != epi.base {
        return precondition("epimorphism is defined on a different module");
    }
    epi.validate()?;
    let ring = base.ring().clone();
    let m = base.ambient();
    let chi0 = chi0_form(base, triv)?;
    let (q, p) = (&epi.s[..m], &epi.s[m]);
    let (a0, ar) = (&epi.a[..m], &epi.a[m]);
    let c = chi0.mul_vec(q);
    let phi0 = &Matrix::outer(&ring, q, &c).neg() - &base.pi().scale(p);
    let inv = chi0_contract_inverse(base, triv, a0)?;
    let two_ar = &Elem::from_int(&ring, 2) * ar;
    let phi_r: Vec<Elem> = q.iter().zip(&inv).map(|(qi, vi)| &(&two_ar * qi) - vi).collect();

    let mut matrix = Matrix::zeros(&ring, m + 1, m + 1);
    matrix.set_block(0, 0, &(&phi0 + &base.co_pi()));
    for i in 0..m {
        matrix[(i, m)] = phi_r[i].clone();
    }
    for j in 0..m {
        matrix[(m, j)] = a0[j].clone();
    }
    matrix[(m, m)] = ar * ar;
    let mut target = a0.to_vec();
    target.push(ar * ar);

    if !matrix.determinant()?.is_one() {
        return Err(Error::Verification("completion does not have determinant 1".into()));
    }
    if matrix.row(m) != target {
        return Err(Error::Verification("last row of the completion is not (a₀, a_R²)".into()));
    }
    Ok(Completion { matrix, target })
}

/// Writes a row of length 3 and its witness as an epimorphism on R² ⊕ R.
pub fn free_epi(a: &[Elem], s: &[Elem]) -> Result<UmEpi> {
    if a.len() != 3 || s.len() != 3 {
        return dims("free epimorphisms here have length 3");
    }
    UmEpi::new(ProjModule::free(a[0].ring(), 2), a.to_vec(), s.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ring_parse, Ring};

    fn e(ring: &Ring, x: i64) -> Elem {
        Elem::from_int(ring, x)
    }

    #[test]
    fn krusemeyer_examples() {
        let z = ring_parse("Z").unwrap();
        let m = krusemeyer(&e(&z, 2), &e(&z, 3), &e(&z, 5), &e(&z, -1), &e(&z, 1), &e(&z, 0)).unwrap();
        assert_eq!(m, Matrix::from_ints(&z, &[&[1, 1, -13], &[-1, -1, 12], &[2, 3, 25]]));
        let m = krusemeyer(&e(&z, 0), &e(&z, 0), &e(&z, 1), &e(&z, 0), &e(&z, 0), &e(&z, 1)).unwrap();
        assert_eq!(m, Matrix::from_ints(&z, &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]));
        assert!(krusemeyer(&e(&z, 2), &e(&z, 4), &e(&z, 6), &e(&z, 1), &e(&z, 0), &e(&z, 0)).is_err());
    }

    #[test]
    fn free_completion_matches_krusemeyer() {
        let z = ring_parse("Z").unwrap();
        let v = |xs: &[i64]| xs.iter().map(|&x| e(&z, x)).collect::<Vec<_>>();
        let epi = free_epi(&v(&[2, 3, 5]), &v(&[-1, 1, 0])).unwrap();
        let c = generalized_completion(&epi.base, &Trivialization::standard(&z, 1), &epi).unwrap();
        let k = krusemeyer(&e(&z, 2), &e(&z, 3), &e(&z, 5), &e(&z, -1), &e(&z, 1), &e(&z, 0)).unwrap();
        assert_eq!(c.matrix, k);
    }
}
