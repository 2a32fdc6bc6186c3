use vaserstein::elem::{Block, BlockDecomposition};
use vaserstein::io::{
    parse_cert, parse_epi, parse_matrix, parse_module, parse_symbol, parse_word, write_cert, write_epi, write_matrix,
    write_module, write_symbol, write_word, SymbolRecord,
};
use vaserstein::matrix::Matrix;
use vaserstein::projmod::{ProjModule, Trivialization};
use vaserstein::ring::ring_parse;
use vaserstein::sample::{epi_blocks, rand_epi, rand_kernel_base, rand_matrix, rand_word, sampler};
use vaserstein::symbol::generalized_symbol;
use vaserstein::witt::{xi, EquivCert};

const RINGS: [&str; 5] = ["Z", "Q", "Z/9", "F_5", "Z[x,y]"];

#[test]
fn matrices_round_trip() {
    let mut rng = sampler(61);
    for spec in RINGS {
        let ring = ring_parse(spec).unwrap();
        for (r, c) in [(0, 0), (1, 3), (4, 4), (2, 0)] {
            let m = rand_matrix(&mut rng, &ring, r, c);
            assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        }
    }
}

#[test]
fn words_and_certificates_round_trip() {
    let mut rng = sampler(62);
    for spec in RINGS {
        let ring = ring_parse(spec).unwrap();
        let w = rand_word(&mut rng, &BlockDecomposition::free(&ring, &[1, 2, 1]), 5);
        let back = parse_word(&write_word(&w)).unwrap();
        assert_eq!(back.factors(), w.factors());
        assert_eq!(back.eval(), w.eval());
        let cert = EquivCert { level: 1, word: w };
        let back = parse_cert(&write_cert(&cert)).unwrap();
        assert_eq!(back.level, 1);
        assert_eq!(back.word.eval(), cert.word.eval());
    }
    let z = ring_parse("Z").unwrap();
    let pi = Matrix::from_ints(&z, &[&[3, 3, 0], &[-2, -2, 0], &[0, 0, 1]]);
    let blocks = BlockDecomposition::new(&z, vec![Block::Projective(pi), Block::Free(1)]).unwrap();
    let w = rand_word(&mut rng, &blocks, 3);
    let text = write_word(&w);
    assert!(text.contains("block projective 3"));
    assert_eq!(parse_word(&text).unwrap().eval(), w.eval());
}

#[test]
fn modules_and_epis_round_trip() {
    let mut rng = sampler(63);
    for spec in ["Z", "Z/9", "F_5"] {
        let ring = ring_parse(spec).unwrap();
        let (p, t) = rand_kernel_base(&mut rng, &ring);
        let (p2, t2) = parse_module(&write_module(&p, Some(&t))).unwrap();
        assert_eq!(p2, p);
        assert_eq!(t2, Some(t.clone()));
        let free = ProjModule::free(&ring, 2);
        let (f2, none) = parse_module(&write_module(&free, None)).unwrap();
        assert_eq!(f2, free);
        assert!(none.is_none());
        let epi = rand_epi(&mut rng, &p);
        assert_eq!(parse_epi(&write_epi(&epi), &p).unwrap(), epi);
        let _ = epi_blocks(&p);
        let _ = Trivialization::standard(&ring, 1);
    }
}

#[test]
fn symbols_round_trip() {
    let mut rng = sampler(64);
    let ring = ring_parse("Z/7").unwrap();
    let (p, t) = rand_kernel_base(&mut rng, &ring);
    let epi = rand_epi(&mut rng, &p);
    let s = generalized_symbol(&p, &t, &epi).unwrap();
    let x = xi(&s.triple).unwrap();
    let rec = SymbolRecord { triple: s.triple.clone(), pfaffian: x.pfaffian().clone(), xi: x.matrix().clone() };
    let back = parse_symbol(&write_symbol(&rec)).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn malformed_input_is_rejected() {
    assert!(parse_matrix("vaserstein-matrix v2\nring Z\ndims 1 1\n1\n").is_err());
    assert!(parse_matrix("vaserstein-matrix v1\nring Z\ndims 2 2\n1, 0\n").is_err());
    assert!(parse_matrix("vaserstein-matrix v1\nring Z/1\ndims 1 1\n1\n").is_err());
    assert!(parse_matrix("vaserstein-matrix v1\nring Z\ndims 1 2\n1, x\n").is_err());
    let ok = "vaserstein-matrix v1\n# comment\nring Z\n\ndims 1 2\n1, -4\n";
    assert_eq!(parse_matrix(ok).unwrap(), Matrix::from_ints(&ring_parse("Z").unwrap(), &[&[1, -4]]));
}
