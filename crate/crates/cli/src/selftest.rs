//! Seeded identity suite behind `vaserstein selftest`. Output is
//! deterministic for a given seed and count.

use rand::Rng;
use vaserstein::complete::{free_epi, generalized_completion, krusemeyer};
use vaserstein::elem::{commutator_factorization, whitehead_word, BlockDecomposition, ElemWord};
use vaserstein::matrix::{hyperbolic_h, psi};
use vaserstein::projmod::{ProjModule, Trivialization};
use vaserstein::sample::{
    epi_blocks, rand_epi, rand_kernel_base, rand_matrix, rand_other_section, rand_pf_one, rand_unimodular, rand_word,
    sampler, Sampler,
};
use vaserstein::symbol::{coincide_classical_check, elementary_invariance_check, generalized_symbol, section_independence_witness};
use vaserstein::witt::{hyperbolic_diagonalize, split_off_hyperbolic};
use vaserstein::{ring_parse, Elem, Matrix, Result, Ring};

type Check = fn(&mut Sampler, &Ring) -> Result<bool>;

fn block_identities(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let sizes = [rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3)];
    let blocks = BlockDecomposition::free(r, &sizes);
    let one = |t: usize, s: usize, c: &Matrix| -> Result<Matrix> {
        let mut w = ElemWord::new(blocks.clone());
        w.push_local(t, s, c)?;
        Ok(w.eval())
    };
    let (s, t) = (rand_matrix(rng, r, sizes[0], sizes[1]), rand_matrix(rng, r, sizes[0], sizes[1]));
    let u = rand_matrix(rng, r, sizes[1], sizes[2]);
    let add = &one(0, 1, &s)? * &one(0, 1, &t)? == one(0, 1, &(&s + &t))?;
    let comm = commutator_factorization(&blocks, (0, 1, &s), (1, 2, &u))?.eval() == one(0, 2, &(&s * &u))?;
    Ok(add && comm)
}

fn whitehead(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let f = rand_matrix(rng, r, b, a);
    // over Z a random id + gf is rarely invertible; fall back to g = 0
    let g = (0..200)
        .map(|_| rand_matrix(rng, r, a, b))
        .find(|g| (&Matrix::identity(r, a) + &(g * &f)).determinant().is_ok_and(|d| d.inverse().is_some()))
        .unwrap_or_else(|| Matrix::zeros(r, a, b));
    let left = &Matrix::identity(r, a) + &(&g * &f);
    let right = (&Matrix::identity(r, b) + &(&f * &g)).inverse()?;
    Ok(whitehead_word(&f, &g)?.eval() == left.orthogonal_sum(&right))
}

fn hyperbolic(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let half = rng.gen_range(1..=2);
    let chi = rand_pf_one(rng, r, half);
    let w = hyperbolic_diagonalize(&chi, 0)?;
    let source = chi.orthogonal_sum(&chi.inverse()?);
    Ok(Matrix::congruence(&w.eval(), &source)? == hyperbolic_h(r, chi.rows()))
}

fn split(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let half = rng.gen_range(2..=3);
    let chi = rand_pf_one(rng, r, half);
    let (w, rest) = split_off_hyperbolic(&chi)?;
    Ok(Matrix::congruence(&w.eval(), &chi)? == rest.orthogonal_sum(&psi(r, 1)))
}

fn base(rng: &mut Sampler, r: &Ring) -> (ProjModule, Trivialization) {
    if rng.gen_bool(0.5) {
        (ProjModule::free(r, 2), Trivialization::standard(r, 1))
    } else {
        rand_kernel_base(rng, r)
    }
}

fn section_change(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let (p, t) = base(rng, r);
    let epi = rand_epi(rng, &p);
    let other = rand_other_section(rng, &epi);
    section_independence_witness(&p, &t, &epi, &other)?;
    Ok(generalized_symbol(&p, &t, &epi)?.witt.pfaffian().is_one())
}

fn invariance(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let (p, t) = base(rng, r);
    let epi = rand_epi(rng, &p);
    let len = rng.gen_range(1..=2);
    let phi = rand_word(rng, &epi_blocks(&p), len);
    elementary_invariance_check(&p, &t, &epi, &phi)
}

fn coincidence(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let (a, b) = rand_unimodular(rng, r, 3);
    coincide_classical_check(&a, &b)
}

fn completion(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let (a, s) = rand_unimodular(rng, r, 3);
    let epi = free_epi(&a, &s)?;
    let c = generalized_completion(&epi.base, &Trivialization::standard(r, 1), &epi)?;
    let k = krusemeyer(&a[0], &a[1], &a[2], &s[0], &s[1], &s[2])?;
    let (p, t) = rand_kernel_base(rng, r);
    generalized_completion(&p, &t, &rand_epi(rng, &p))?;
    Ok(c.matrix == k && k.row(2)[2] == &a[2] * &a[2] && k.determinant()?.is_one())
}

/// Runs every identity `count` times per ring and prints one line each.
/// Returns the number of failed identities.
pub fn run(seed: u64, count: usize) -> usize {
    let suites: [(&str, Check, &[&str]); 9] = [
        ("block identities", block_identities, &["Z", "F_7"]),
        ("whitehead word", whitehead, &["Z", "F_7"]),
        ("hyperbolic diagonalization", hyperbolic, &["F_5", "Z"]),
        ("hyperbolic split", split, &["F_5", "Z/9"]),
        ("section independence", section_change, &["Z/5", "Z/7", "Z"]),
        ("elementary invariance", invariance, &["Z/5", "Z/7", "Z"]),
        ("classical coincidence", coincidence, &["F_5", "F_7", "Z"]),
        ("completion", completion, &["Z", "Z/9", "F_7"]),
        ("unit pfaffian", unit_pfaffian, &["Z", "F_5"]),
    ];
    let mut rng = sampler(seed);
    let mut failed = 0;
    for (name, check, rings) in suites {
        let mut bad = None;
        for spec in rings {
            let r = ring_parse(spec).expect("built-in ring");
            for _ in 0..count {
                match check(&mut rng, &r) {
                    Ok(true) => {}
                    Ok(false) => bad = Some(format!("identity false over {spec}")),
                    Err(e) => bad = Some(format!("{e} over {spec}")),
                }
            }
        }
        match bad {
            None => println!("ok   {name} ({} instances)", count * rings.len()),
            Some(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    failed
}

fn unit_pfaffian(rng: &mut Sampler, r: &Ring) -> Result<bool> {
    let half = rng.gen_range(1..=3);
    let m = rand_pf_one(rng, r, half);
    Ok(m.pfaffian()? == Elem::one(r) && psi(r, half).pfaffian()?.is_one())
}
