//! One PASS/FAIL line per acceptance criterion, with counts and run times.

use std::time::{Duration, Instant};

use vaserstein::complete::{free_epi, generalized_completion, krusemeyer};
use vaserstein::elem::{commutator_factorization, whitehead_word, BlockDecomposition, ElemWord};
use vaserstein::matrix::{hyperbolic_h, psi, Matrix};
use vaserstein::oracle::symbol_map_report;
use vaserstein::projmod::{ProjModule, Trivialization, UmEpi};
use vaserstein::ring::{ring_parse, Elem, Ring};
use vaserstein::sample::{
    epi_blocks, rand_epi, rand_kernel_base, rand_matrix, rand_other_section, rand_skew, rand_unimodular, rand_word,
    sampler, Sampler,
};
use vaserstein::symbol::{coincide_classical_check, elementary_invariance_check, generalized_symbol, section_independence_witness};
use vaserstein::witt::{hyperbolic_diagonalize, split_off_hyperbolic};
use vaserstein::Result;

const SEED: u64 = 0x5eed;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn ring(spec: &str) -> Ring {
    ring_parse(spec).expect("ring spec")
}

fn pfaffian_identities(rng: &mut Sampler) -> Result<Outcome> {
    let mut n = 0;
    for spec in ["Z", "F_5", "Z/9"] {
        let r = ring(spec);
        if !psi(&r, 3).pfaffian()?.is_one() || hyperbolic_h(&r, 2).pfaffian()? != -Elem::one(&r) {
            return outcome(false, format!("standard forms over {spec}"));
        }
        for size in (2..=8).step_by(2) {
            for _ in 0..50 {
                let m = rand_skew(rng, &r, size);
                let other = rand_skew(rng, &r, 2 + size % 4);
                let g = rand_matrix(rng, &r, size, size);
                let pm = m.pfaffian()?;
                let checks = [
                    m.orthogonal_sum(&other).pfaffian()? == &pm * &other.pfaffian()?,
                    Matrix::congruence(&g, &m)?.pfaffian()? == &g.determinant()? * &pm,
                    &pm * &pm == m.determinant()?,
                ];
                if checks.contains(&false) {
                    return outcome(false, format!("failed on {m:?}"));
                }
                n += 1;
            }
        }
    }
    outcome(true, format!("{n} matrices"))
}

fn elementary_identities(rng: &mut Sampler) -> Result<Outcome> {
    let mut n = 0;
    for spec in ["Z", "F_7"] {
        let r = ring(spec);
        for _ in 0..60 {
            let sizes: Vec<usize> = (0..4).map(|_| rand::Rng::gen_range(rng, 1..=3)).collect();
            let blocks = BlockDecomposition::free(&r, &sizes);
            let local = |rng: &mut Sampler, t: usize, s: usize| rand_matrix(rng, &r, sizes[t], sizes[s]);
            let one = |t: usize, s: usize, c: &Matrix| -> Result<Matrix> {
                let mut w = ElemWord::new(blocks.clone());
                w.push_local(t, s, c)?;
                Ok(w.eval())
            };
            // sums, commuting factors, and both commutator forms
            let (s01, t01) = (local(rng, 0, 1), local(rng, 0, 1));
            let sum_ok = &one(0, 1, &s01)? * &one(0, 1, &t01)? == one(0, 1, &(&s01 + &t01))?;
            let s23 = local(rng, 2, 3);
            let commute_ok = &one(0, 1, &s01)? * &one(2, 3, &s23)? == &one(2, 3, &s23)? * &one(0, 1, &s01)?;
            let s12 = local(rng, 1, 2);
            let c = commutator_factorization(&blocks, (0, 1, &s01), (1, 2, &s12))?.eval();
            let c_ok = c == one(0, 2, &(&s01 * &s12))?;
            let s20 = local(rng, 2, 0);
            let mut d = ElemWord::new(blocks.clone());
            d.push_local(0, 1, &s01)?;
            d.push_local(2, 0, &s20)?;
            d.push_local(0, 1, &s01.neg())?;
            d.push_local(2, 0, &s20.neg())?;
            let d_ok = d.eval() == one(2, 1, &(&s20 * &s01).neg())?;
            if !(sum_ok && commute_ok && c_ok && d_ok) {
                return outcome(false, format!("block identities over {spec} with sizes {sizes:?}"));
            }
            n += 4;
        }
        let mut wh = 0;
        while wh < 60 {
            let (a, b) = (rand::Rng::gen_range(rng, 1..=3), rand::Rng::gen_range(rng, 1..=3));
            let f = rand_matrix(rng, &r, b, a);
            let g = if spec == "Z" {
                // rank one g = u vᵀ with vᵀ f u = 0, so id + gf is unipotent
                let mut f = f.clone();
                let mut u = rand_matrix(rng, &r, a, 1);
                u[(0, 0)] = Elem::one(&r);
                let mut v = rand_matrix(rng, &r, 1, b);
                v[(0, 0)] = Elem::one(&r);
                let c = (&(&v * &f) * &u)[(0, 0)].clone();
                f[(0, 0)] = &f[(0, 0)] - &c;
                let g = &u * &v;
                if !check_whitehead(&f, &g)? {
                    return outcome(false, "five-factor identity over Z");
                }
                wh += 1;
                continue;
            } else {
                rand_matrix(rng, &r, a, b)
            };
            if (&Matrix::identity(&r, a) + &(&g * &f)).determinant()?.inverse().is_none() {
                continue;
            }
            if !check_whitehead(&f, &g)? {
                return outcome(false, format!("five-factor identity over {spec}"));
            }
            wh += 1;
        }
        n += wh;
    }
    outcome(true, format!("{n} block instances"))
}

fn check_whitehead(f: &Matrix, g: &Matrix) -> Result<bool> {
    let r = f.ring();
    let (a, b) = (f.cols(), f.rows());
    let left = &Matrix::identity(r, a) + &(g * f);
    let right = (&Matrix::identity(r, b) + &(f * g)).inverse()?;
    Ok(whitehead_word(f, g)?.eval() == left.orthogonal_sum(&right))
}

/// Random bases over Z/5, Z/7 and Z: free, or the kernel of a row.
fn bases(rng: &mut Sampler, count: usize) -> Vec<(ProjModule, Trivialization)> {
    let specs = ["Z/5", "Z/7", "Z"];
    (0..count)
        .map(|k| {
            let r = ring(specs[k % 3]);
            if k % 2 == 0 {
                (ProjModule::free(&r, 2), Trivialization::standard(&r, if k % 4 == 0 { 1 } else { -1 }))
            } else {
                rand_kernel_base(rng, &r)
            }
        })
        .collect()
}

fn section_independence(rng: &mut Sampler, pf_count: &mut (usize, bool)) -> Result<Outcome> {
    let mut n = 0;
    for (base, triv) in bases(rng, 120) {
        let epi = rand_epi(rng, &base);
        let Some(t) = (0..5).map(|_| rand_other_section(rng, &epi)).find(|t| *t != epi.s) else {
            continue;
        };
        section_independence_witness(&base, &triv, &epi, &t)?;
        for e in [epi.clone(), epi.with_section(t)?] {
            pf_count.0 += 1;
            pf_count.1 &= generalized_symbol(&base, &triv, &e)?.witt.pfaffian().is_one();
        }
        n += 1;
    }
    outcome(n >= 100, format!("{n} section pairs"))
}

fn elementary_invariance(rng: &mut Sampler, pf_count: &mut (usize, bool)) -> Result<Outcome> {
    let mut n = 0;
    for (k, (base, triv)) in bases(rng, 120).into_iter().enumerate() {
        let epi = rand_epi(rng, &base);
        let phi = rand_word(rng, &epi_blocks(&base), 1 + k % 2);
        if !elementary_invariance_check(&base, &triv, &epi, &phi)? {
            return outcome(false, format!("word of length {}", phi.len()));
        }
        let moved = UmEpi::new(
            base.clone(),
            phi.eval().vec_mul(&epi.a),
            phi.inverse().eval().mul_vec(&epi.s),
        )?;
        for e in [epi, moved] {
            pf_count.0 += 1;
            pf_count.1 &= generalized_symbol(&base, &triv, &e)?.witt.pfaffian().is_one();
        }
        n += 1;
    }
    outcome(true, format!("{n} words"))
}

fn coincidence(rng: &mut Sampler) -> Result<Outcome> {
    let mut n = 0;
    for (spec, count) in [("F_5", 100), ("F_7", 100), ("Z", 20)] {
        let r = ring(spec);
        for _ in 0..count {
            let (a, b) = rand_unimodular(rng, &r, 3);
            if !coincide_classical_check(&a, &b)? {
                return outcome(false, format!("row {a:?} over {spec}"));
            }
            n += 1;
        }
    }
    outcome(true, format!("{n} rows"))
}

fn completions(rng: &mut Sampler) -> Result<Outcome> {
    let specs = ["Z", "Z/9", "F_7", "Z/15"];
    let mut kr = 0;
    for k in 0..200 {
        let r = ring(specs[k % 4]);
        let (a, s) = rand_unimodular(rng, &r, 3);
        let m = krusemeyer(&a[0], &a[1], &a[2], &s[0], &s[1], &s[2])?;
        if !m.determinant()?.is_one() || m.row(2) != vec![a[0].clone(), a[1].clone(), &a[2] * &a[2]] {
            return outcome(false, "explicit completion");
        }
        kr += 1;
    }
    let mut gen = 0;
    for k in 0..120 {
        let r = ring(specs[k % 4]);
        if k % 2 == 0 {
            let (a, s) = rand_unimodular(rng, &r, 3);
            let epi = free_epi(&a, &s)?;
            let c = generalized_completion(&epi.base, &Trivialization::standard(&r, 1), &epi)?;
            if c.matrix != krusemeyer(&a[0], &a[1], &a[2], &s[0], &s[1], &s[2])? {
                return outcome(false, "free case disagrees with the explicit completion");
            }
        } else {
            let (base, triv) = rand_kernel_base(rng, &r);
            let epi = rand_epi(rng, &base);
            // determinant and last row are verified inside
            generalized_completion(&base, &triv, &epi)?;
        }
        gen += 1;
    }
    outcome(true, format!("{kr} explicit, {gen} generalized"))
}

fn hyperbolic_diagonalization() -> Result<Outcome> {
    let mut n = 0;
    for spec in ["F_5", "Z"] {
        let r = ring(spec);
        let u = Elem::from_int(&r, if spec == "Z" { -1 } else { 2 });
        for chi in [psi(&r, 1), psi(&r, 2), psi(&r, 1).scale(&u)] {
            for q in [0, 2] {
                let w = hyperbolic_diagonalize(&chi, q)?;
                let k = chi.rows();
                let mut source = chi.orthogonal_sum(&chi.inverse()?);
                let mut target = hyperbolic_h(&r, k);
                if q > 0 {
                    source = source.orthogonal_sum(&hyperbolic_h(&r, q));
                    target = target.orthogonal_sum(&hyperbolic_h(&r, q));
                }
                if Matrix::congruence(&w.eval(), &source)? != target {
                    return outcome(false, format!("{chi:?} over {spec}"));
                }
                n += 1;
            }
        }
    }
    outcome(true, format!("{n} forms"))
}

fn oracle(spec: &str, want: &str) -> Result<Outcome> {
    let report = symbol_map_report(&ring(spec))?;
    let ok = match want {
        "bijective" => report.rows.orbits.len() == 1 && report.classes.orbits.len() == 1 && report.verdict() == "bijective",
        _ => report.surjective,
    };
    outcome(ok, format!("{spec}: {} orbit(s) / {} class(es) / {}", report.rows.orbits.len(), report.classes.orbits.len(), report.verdict()))
}

fn all_skew4_pf1(r: &Ring) -> Vec<Matrix> {
    let Some(q) = r.modulus().and_then(|q| u64::try_from(q).ok()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let total = q.pow(6);
    for code in 0..total {
        let mut c = code;
        let mut m = Matrix::zeros(r, 4, 4);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let x = Elem::from_int(r, (c % q) as i64);
            c /= q;
            m[(j, i)] = -&x;
            m[(i, j)] = x;
        }
        if m.pfaffian().map(|p| p.is_one()).unwrap_or(false) {
            out.push(m);
        }
    }
    out
}

fn split(rng: &mut Sampler) -> Result<Outcome> {
    let mut n = 0;
    let mut check = |chi: &Matrix| -> Result<bool> {
        let (w, rest) = split_off_hyperbolic(chi)?;
        n += 1;
        Ok(Matrix::congruence(&w.eval(), chi)? == rest.orthogonal_sum(&psi(chi.ring(), 1)) && rest.pfaffian()?.is_one())
    };
    for spec in ["F_3", "F_5"] {
        for m in all_skew4_pf1(&ring(spec)) {
            if !check(&m)? {
                return outcome(false, format!("{m:?}"));
            }
        }
    }
    let f5 = ring("F_5");
    let mut six = 0;
    while six < 60 {
        let m = rand_skew(rng, &f5, 6);
        if !m.pfaffian()?.is_one() {
            continue;
        }
        if !check(&m)? {
            return outcome(false, format!("{m:?}"));
        }
        six += 1;
    }
    outcome(true, format!("{n} forms, {six} of size 6"))
}

fn main() {
    let mut rng = sampler(SEED);
    let mut pf = (0usize, true);
    let mut failed = 0;
    let mut report = |name: &str, limit: Option<u64>, run: &mut dyn FnMut() -> Result<Outcome>| {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = limit.map_or(true, |s| took <= Duration::from_secs(s));
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        let limit = limit.map(|s| format!(" (limit {s} s)")).unwrap_or_default();
        println!("{} {name}: {detail}; {:.2} s{limit}", if pass { "PASS" } else { "FAIL" }, took.as_secs_f64());
    };
    report("pfaffian identities", Some(10), &mut || pfaffian_identities(&mut rng));
    report("elementary word identities", Some(5), &mut || elementary_identities(&mut rng));
    report("section independence witness", Some(30), &mut || section_independence(&mut rng, &mut pf));
    report("elementary invariance", Some(30), &mut || elementary_invariance(&mut rng, &mut pf));
    report("symbols have pfaffian one", None, &mut || outcome(pf.1 && pf.0 > 0, format!("{} symbols", pf.0)));
    report("classical coincidence", None, &mut || coincidence(&mut rng));
    report("completions", Some(10), &mut || completions(&mut rng));
    report("hyperbolic diagonalization", None, &mut hyperbolic_diagonalization);
    report("oracle F_3", Some(120), &mut || oracle("F_3", "bijective"));
    report("oracle F_5", Some(120), &mut || oracle("F_5", "bijective"));
    report("oracle Z/9", Some(120), &mut || oracle("Z/9", "surjective"));
    report("hyperbolic split", Some(60), &mut || split(&mut rng));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
