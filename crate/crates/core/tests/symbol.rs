use vaserstein::projmod::{ProjModule, Trivialization};
use vaserstein::ring::ring_parse;
use vaserstein::sample::{epi_blocks, rand_epi, rand_kernel_base, rand_other_section, rand_unimodular, rand_unit, rand_word, sampler};
use vaserstein::symbol::{
    coincide_classical_check, elementary_invariance_check, generalized_symbol, scale_check,
    section_independence_witness,
};

fn bases(ring: &vaserstein::Ring, rng: &mut vaserstein::sample::Sampler) -> Vec<(ProjModule, Trivialization)> {
    vec![
        (ProjModule::free(ring, 2), Trivialization::standard(ring, 1)),
        rand_kernel_base(rng, ring),
    ]
}

#[test]
fn symbols_have_pfaffian_one() {
    let mut rng = sampler(11);
    for spec in ["Z/5", "Z/7", "Z", "Z/9"] {
        let ring = ring_parse(spec).unwrap();
        for _ in 0..5 {
            for (base, triv) in bases(&ring, &mut rng) {
                let epi = rand_epi(&mut rng, &base);
                let sym = generalized_symbol(&base, &triv, &epi).unwrap();
                assert!(sym.pfaffian().is_one());
            }
        }
    }
}

#[test]
fn section_change_is_elementary() {
    let mut rng = sampler(12);
    for spec in ["Z/5", "Z/7", "Z"] {
        let ring = ring_parse(spec).unwrap();
        for _ in 0..5 {
            for (base, triv) in bases(&ring, &mut rng) {
                let epi = rand_epi(&mut rng, &base);
                let t = rand_other_section(&mut rng, &epi);
                section_independence_witness(&base, &triv, &epi, &t).unwrap();
            }
        }
    }
}

#[test]
fn same_section_gives_identity_word() {
    let ring = ring_parse("Z/5").unwrap();
    let mut rng = sampler(13);
    let (base, triv) = rand_kernel_base(&mut rng, &ring);
    let epi = rand_epi(&mut rng, &base);
    let w = section_independence_witness(&base, &triv, &epi, &epi.s.clone()).unwrap();
    assert!(w.is_empty());
}

#[test]
fn elementary_invariance() {
    let mut rng = sampler(14);
    for spec in ["Z/5", "Z/7", "Z"] {
        let ring = ring_parse(spec).unwrap();
        for len in [0, 1, 2] {
            for (base, triv) in bases(&ring, &mut rng) {
                let epi = rand_epi(&mut rng, &base);
                let phi = rand_word(&mut rng, &epi_blocks(&base), len);
                assert!(elementary_invariance_check(&base, &triv, &epi, &phi).unwrap());
            }
        }
    }
}

#[test]
fn unit_scaling() {
    let mut rng = sampler(15);
    for spec in ["Z/5", "Z/7", "Z"] {
        let ring = ring_parse(spec).unwrap();
        for _ in 0..4 {
            for (base, triv) in bases(&ring, &mut rng) {
                let epi = rand_epi(&mut rng, &base);
                let u = rand_unit(&mut rng, &ring);
                assert!(scale_check(&base, &triv, &epi, &u).unwrap());
            }
        }
    }
}

#[test]
fn coincides_with_classical_symbol() {
    let mut rng = sampler(16);
    for spec in ["F_5", "F_7", "Z"] {
        let ring = ring_parse(spec).unwrap();
        for _ in 0..10 {
            let (a, b) = rand_unimodular(&mut rng, &ring, 3);
            assert!(coincide_classical_check(&a, &b).unwrap());
        }
    }
}
