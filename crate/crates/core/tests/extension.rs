//! Colour-coded extensions: layout, facets, automorphisms and weights.

mod common;

use common::*;
use maniplex::catalog::{vartheta, verify_proper_pair, Seed};
use maniplex::extend::{
    antipodal_colouring, extend_automorphism, extend_weight, extension, facet_flags, tau,
    total_colouring, verify_colouring_invariant, Colouring, ColouringKind,
};
use maniplex::symmetry::generating_set;
use maniplex::{are_isomorphic, automorphism_group, cross_cover, Error, Maniplex};
use proptest::prelude::*;
use rand::Rng;

fn small_seeds() -> Vec<Maniplex> {
    [Seed::Hemicube, Seed::Hemioctahedron, Seed::Hemidodecahedron]
        .iter()
        .map(|&s| maniplex::build_seed(s).unwrap())
        .collect()
}

#[test]
fn total_extension_layout() {
    for m in small_seeds() {
        let c = total_colouring(&m);
        let l = c.num_colours();
        assert_eq!(l, m.facets().num_faces);
        let e = extension(&m, &c).unwrap();
        assert_eq!(e.rank(), 4);
        assert_eq!(e.num_flags(), m.num_flags() << l);
        assert!(e.validate().is_maniplex());
        assert!(!e.is_orientable());
        let facets = e.facets();
        assert_eq!(facets.num_faces, 1 << l);
        let labels = e.facet_labels().unwrap();
        for f in e.flags() {
            // facet F_x has id x
            assert_eq!(facets.face_of[f], labels.label(f) as usize);
            assert_eq!(f >> l, f / (1 << l));
        }
        // every facet is a copy of the base
        for x in [0u32, 1, (1 << l) - 1] {
            let flags = facet_flags(&e, x).unwrap();
            assert!(are_isomorphic(&e.restrict(&flags, 3).unwrap(), &m));
        }
    }
}

#[test]
fn extensions_of_regular_maps_are_regular() {
    for m in small_seeds() {
        let c = total_colouring(&m);
        assert!(verify_colouring_invariant(&m, &c).unwrap());
        let e = extension(&m, &c).unwrap();
        let group = automorphism_group(&e);
        assert_eq!(group.order, e.num_flags(), "{}", m.provenance());
    }
}

#[test]
fn tau_and_extended_automorphisms() {
    let m = hemicube();
    let c = total_colouring(&m);
    let e = extension(&m, &c).unwrap();
    let l = c.num_colours();
    let taus: Vec<_> = (1..=l).map(|j| tau(&e, j).unwrap()).collect();
    for (a, t) in taus.iter().enumerate() {
        assert!(t.is_automorphism_of(&e));
        assert!(t.then(t).is_identity());
        for s in &taus[a + 1..] {
            assert_eq!(t.then(s), s.then(t));
        }
    }
    assert!(tau(&e, 0).is_err());
    assert!(tau(&e, l + 1).is_err());
    let group = automorphism_group(&m);
    for phi in generating_set(&m, &group) {
        let ext = extend_automorphism(&m, &c, &phi).unwrap();
        assert!(ext.is_automorphism_of(&e));
        for f in e.flags() {
            assert_eq!(ext.apply(f) >> l, phi.apply(f >> l));
        }
    }
}

#[test]
fn antipodal_colouring_of_an_extension() {
    let m = hemicube();
    let e = extension(&m, &total_colouring(&m)).unwrap();
    let a = antipodal_colouring(&e).unwrap();
    assert_eq!(a.kind(), ColouringKind::Antipodal);
    assert_eq!(a.num_colours(), 4);
    let labels = e.facet_labels().unwrap();
    let facets = e.facets();
    let mask = (1u32 << labels.bits()) - 1;
    for f in e.flags() {
        let x = labels.label(f);
        let g = facet_flags(&e, !x & mask).unwrap()[0];
        assert_eq!(a.colour(facets.face_of[f]), a.colour(facets.face_of[g]));
    }
    assert!(verify_colouring_invariant(&e, &a).unwrap());
    let e2 = extension(&e, &a).unwrap();
    assert_eq!(e2.num_flags(), 3072);
    assert!(e2.validate().is_maniplex());
    assert_eq!(antipodal_colouring(&m), Err(Error::MissingFacetLabels));
}

#[test]
fn extended_weight_is_sign_twisted() {
    let m = hemicube();
    let w = vartheta(&m).unwrap();
    let c = total_colouring(&m);
    let e = extension(&m, &c).unwrap();
    let we = extend_weight(&m, &c, &w).unwrap();
    we.check_against(&e).unwrap();
    let l = c.num_colours();
    for f in e.flags() {
        let x = (f & ((1 << l) - 1)) as u32;
        let sign_even = x.count_ones().is_multiple_of(2);
        for col in 0..3 {
            let base = w.weight(col, f >> l);
            let expected = if sign_even { base } else { (4 - base) % 4 };
            assert_eq!(we.weight(col, f), expected);
        }
        assert_eq!(we.weight(3, f), 0);
    }
}

#[test]
fn proper_pairs_extend() {
    for m in small_seeds() {
        let w = vartheta(&m).unwrap();
        assert!(verify_proper_pair(&m, &w).unwrap().verdict);
        let c = total_colouring(&m);
        let e = extension(&m, &c).unwrap();
        let we = extend_weight(&m, &c, &w).unwrap();
        let report = verify_proper_pair(&e, &we).unwrap();
        assert!(report.verdict, "{}: {report:?}", m.provenance());
    }
}

#[test]
fn every_facet_of_the_rank_four_cover_is_the_rank_three_cover() {
    let m = hemicube();
    let w = vartheta(&m).unwrap();
    let base_cover = cross_cover(&m, &w).unwrap();
    let c = total_colouring(&m);
    let e = extension(&m, &c).unwrap();
    let we = extend_weight(&m, &c, &w).unwrap();
    for x in 0..(1u32 << c.num_colours()) {
        let flags = facet_flags(&e, x).unwrap();
        let facet = e.restrict(&flags, 3).unwrap();
        let facet_weight = we.restrict(&flags, 3).unwrap();
        let induced = cross_cover(&facet, &facet_weight).unwrap();
        assert!(are_isomorphic(&induced, &base_cover), "facet {x:b}");
    }
}

#[test]
fn label_width_is_capped() {
    // a 25-gon has 25 facets (edges are the components without colour 1)
    let n = 50;
    let zero = (0..n).map(|u| u ^ 1).collect();
    let one = (0..n)
        .map(|u| {
            if u % 2 == 1 {
                (u + 1) % n
            } else {
                (u + n - 1) % n
            }
        })
        .collect();
    let polygon = Maniplex::new(2, vec![zero, one]).unwrap();
    assert!(polygon.validate().is_maniplex());
    let c = total_colouring(&polygon);
    assert_eq!(c.num_colours(), 25);
    assert_eq!(
        extension(&polygon, &c),
        Err(Error::LabelOverflow { bits: 25, cap: 24 })
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_surjective_colouring_gives_a_maniplex(index in 0..2usize, seed in any::<u64>()) {
        let m = small_seeds().swap_remove(index);
        let facets = m.facets().num_faces;
        let mut r = rng(seed);
        let l = r.gen_range(1..=facets);
        // surjective: the first l facets (shuffled) take every colour once
        let mut colours: Vec<usize> = (1..=l).chain((l..facets).map(|_| r.gen_range(1..=l))).collect();
        rand::seq::SliceRandom::shuffle(colours.as_mut_slice(), &mut r);
        let c = Colouring::new(&m, l, colours, ColouringKind::Custom).unwrap();
        let e = extension(&m, &c).unwrap();
        prop_assert!(e.validate().is_maniplex());
        prop_assert_eq!(e.num_flags(), m.num_flags() << l);
        prop_assert_eq!(e.facets().num_faces, 1 << l);
        for j in 1..=l {
            prop_assert!(tau(&e, j).unwrap().is_automorphism_of(&e));
        }
    }
}
