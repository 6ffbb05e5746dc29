use polytc_core::bounds::*;
use polytc_core::tensor::zcl_lower_bound;
use polytc_core::{build_ring, enumerate_genetic_codes, BasisTable, Classifier, GeneticCode, IndexSet};

fn opts() -> BoundOptions {
    BoundOptions::default()
}

#[test]
fn pair_gene_with_power_of_two_dimension() {
    let cl = Classifier::new();
    let code = GeneticCode::parse(7, &[&[2, 7]]).unwrap();
    let r = tc_bounds(&code, 3, &cl, opts()).unwrap();
    assert_eq!((r.lower, r.upper), (12, 13));
    assert_eq!(r.method, Method::PairGeneSharp);
    assert_eq!(r.verification, Verification::Verified);
    assert!(r.is_sharp());
}

#[test]
fn size3_two_fold() {
    let cl = Classifier::new();
    // m = 5, a = 2 even
    let code = GeneticCode::parse(8, &[&[2, 5, 8]]).unwrap();
    let r = tc_bounds(&code, 2, &cl, opts()).unwrap();
    assert_eq!((r.lower, r.upper), (10, 11));
    assert_eq!(r.verification, Verification::Verified);
}

#[test]
fn type_two_four_fold() {
    let cl = Classifier::new();
    let code = GeneticCode::parse(7, &[&[1, 2, 3, 7], &[2, 4, 7]]).unwrap();
    assert!(cl.is_type2(&code));
    let r = tc_bounds(&code, 4, &cl, opts()).unwrap();
    assert_eq!((r.lower, r.upper), (15, 17));
    assert_eq!(r.method, Method::TypeTwo);
}

#[test]
fn trivial_and_invalid_k() {
    let cl = Classifier::new();
    let code = GeneticCode::parse(6, &[&[6]]).unwrap();
    let r = tc_bounds(&code, 1, &cl, opts()).unwrap();
    assert_eq!((r.lower, r.upper), (1, 1));
    assert!(tc_bounds(&code, 0, &cl, opts()).is_err());
}

#[test]
fn vanished_product_falls_back() {
    let cl = Classifier::new();
    let code = GeneticCode::parse(5, &[&[1, 2, 5]]).unwrap();
    let r = tc_bounds(&code, 2, &cl, opts()).unwrap();
    assert_eq!(r.method, Method::Sandwich);
    assert_eq!((r.lower, r.upper), (3, 5));
    assert!(r.caveats.iter().any(|c| c.contains("vanished")));
    // the exhaustive search agrees nothing longer than two exists
    let ring = build_ring(&code).unwrap();
    let z = zcl_lower_bound(&ring, 2, 1_000_000).unwrap();
    assert!(z.exhaustive);
    assert_eq!(z.length, 2);
}

#[test]
fn without_certify_reports_are_unverified() {
    let cl = Classifier::new();
    let code = GeneticCode::parse(7, &[&[3, 7]]).unwrap();
    let r = tc_bounds(&code, 2, &cl, BoundOptions { certify: false, ..opts() }).unwrap();
    assert_eq!(r.verification, Verification::Unverified);
    assert_eq!(r.lower, 8);
}

#[test]
fn type_one_exception_keeps_fallback() {
    let cl = Classifier::new();
    // b = 1, c = 1, d = 2: b = 1 mod 4, c odd, d even
    let code = GeneticCode::parse(7, &[&[1, 2, 3, 7], &[1, 5, 7]]).unwrap();
    let r = tc_bounds(&code, 2, &cl, opts()).unwrap();
    assert!(r.caveats.iter().any(|c| c.contains("Type 1 exception")));
    assert!(r.lower > r.m);
}

#[test]
fn report_invariants_up_to_seven() {
    let cl = Classifier::new();
    for n in 4..=7 {
        for e in enumerate_genetic_codes(n).unwrap() {
            let ring = build_ring(&e.code).unwrap();
            let m = ring.m();
            let mut prev = 0;
            for k in 2..=5 {
                let r = tc_bounds_with_ring(&ring, k, &cl, opts()).unwrap();
                assert!((k - 1) * m < r.lower && r.lower <= r.upper && r.upper == k * m + 1);
                assert!(r.lower >= prev, "{} k={k}", e.code);
                assert_ne!(r.verification, Verification::Unverified);
                prev = r.lower;
            }
        }
    }
}

#[test]
fn psi_exists_for_even_size3() {
    for (n, a, b) in [(7, 2, 1), (8, 2, 3), (8, 4, 1), (9, 2, 2)] {
        let code = GeneticCode::parse(n, &[&[a, a + b, n]]).unwrap();
        let ring = build_ring(&code).unwrap();
        let table = BasisTable::new(&ring);
        let cert = triple_certificate(&code, 2, a, b).unwrap();
        let psi = psi_for_certificate(&ring, &table, &cert, &[]).unwrap().expect("uniform psi");
        assert_eq!(psi.blocks, symmetry_blocks(&ring));
        // psi is uniform on the blocks [1,a], (a,a+b]
        let one = |s: &[usize]| psi.value(&ring, IndexSet::from_indices(s.iter().copied())).unwrap();
        for i in 2..=a {
            assert_eq!(one(&[i]), one(&[1]));
        }
    }
}

#[test]
fn type_two_expansion_matches_direct_evaluation() {
    let cl = Classifier::new();
    let mut checked = 0;
    for e in enumerate_genetic_codes(7).unwrap() {
        let Some(last) = cl.classify(&e.code).templates.iter().find_map(|t| match t {
            polytc_core::Template::TypeTwo { last } => Some(*last),
            _ => None,
        }) else {
            continue;
        };
        let ring = build_ring(&e.code).unwrap();
        let table = BasisTable::new(&ring);
        let cert = type_two_certificate(&e.code, 2, last).unwrap();
        let psi = psi_for_certificate(&ring, &table, &cert, &[]).unwrap().unwrap();
        assert_eq!(type_two_expansion(&ring, &psi, last).unwrap(), Some(true), "{}", e.code);
        checked += 1;
    }
    assert_eq!(checked, 27);
}

#[test]
fn refine_blocks_cuts_after_named_indices() {
    let b = vec![vec![1, 2, 3], vec![4, 5]];
    assert_eq!(refine_blocks(&b, &[1, 4]), vec![vec![1], vec![2, 3], vec![4], vec![5]]);
}
