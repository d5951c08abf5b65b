//! Identities that hold on every library diagram, checked against
//! independent oracles where one exists.

mod common;

use common::{disjoint_union, kauffman_jones, kh_f2_oracle, rank_map};
use hopf_kh::cube::build_complex;
use hopf_kh::homalg::{BigradedGroup, Coeff};
use hopf_kh::khovanov::{
    bs_check, exact_triangle_rank_check, jones_polynomial, kh, khr, module_action, shumakovitch_check,
};
use hopf_kh::library::DiagramLibrary;
use hopf_kh::linkdiag::LinkDiagram;

fn library() -> Vec<LinkDiagram> {
    DiagramLibrary::all()
}

#[test]
fn differential_squares_to_zero() {
    for d in library() {
        for reduced in [false, true] {
            let c = build_complex(&d, reduced).unwrap();
            c.check_d_squared().unwrap_or_else(|e| panic!("{:?} reduced={reduced}: {e}", d.name()));
            c.check_homogeneous().unwrap();
        }
    }
}

#[test]
fn euler_characteristic_is_bracket_jones() {
    for d in library() {
        let j = jones_polynomial(&kh(&d, Coeff::Z).unwrap());
        assert_eq!(j, kauffman_jones(&d), "{:?}", d.name());
    }
}

#[test]
fn f2_homology_matches_enhanced_state_oracle() {
    for d in library().into_iter().filter(|d| d.crossing_count() <= 6) {
        let engine = rank_map(&kh(&d, Coeff::F2).unwrap());
        assert_eq!(engine, kh_f2_oracle(&d), "{:?}", d.name());
    }
}

#[test]
fn universal_coefficients_match_direct_field_computation() {
    for d in library() {
        let z = kh(&d, Coeff::Z).unwrap();
        let c = build_complex(&d, false).unwrap();
        for coeff in [Coeff::F2, Coeff::Q] {
            assert_eq!(z.to_field(coeff), c.homology(coeff), "{:?} {coeff}", d.name());
        }
    }
}

#[test]
fn shumakovitch_identity_over_f2() {
    for d in library() {
        assert!(shumakovitch_check(&d).unwrap(), "{:?}", d.name());
    }
}

#[test]
fn mirror_duality_over_q() {
    for d in library() {
        let a = kh(&d, Coeff::Q).unwrap();
        let b = kh(&d.mirror(), Coeff::Q).unwrap();
        assert_eq!(a.negate_gradings(), b, "{:?}", d.name());
    }
}

#[test]
fn reduced_and_unreduced_ranks_fit_the_exact_triangle() {
    for d in library() {
        let q = kh(&d, Coeff::Q).unwrap();
        for c in 0..d.component_count() {
            let r = khr(&d, c, Coeff::Q).unwrap();
            assert!(exact_triangle_rank_check(&q, &r), "{:?} component {c}", d.name());
        }
    }
}

#[test]
fn batson_seed_inequalities() {
    for d in library().into_iter().filter(|d| d.component_count() >= 2) {
        let l = kh(&d, Coeff::F2).unwrap();
        let parts: Vec<BigradedGroup> =
            (0..d.component_count()).map(|i| kh(&d.sublink(&[i]).unwrap(), Coeff::F2).unwrap()).collect();
        let t = 2 * d.total_linking_number();
        let check = bs_check(&l, &parts, t);
        assert!(check.total && check.ell_graded, "{:?}: {check:?}", d.name());
    }
}

#[test]
fn split_union_multiplies_jones() {
    let names = ["unknot", "hopf-plus", "trefoil-left", "figure-eight"];
    for a in names {
        for b in names {
            let (da, db) = (DiagramLibrary::get(a).unwrap(), DiagramLibrary::get(b).unwrap());
            let u = disjoint_union(&da, &db);
            let ju = jones_polynomial(&kh(&u, Coeff::Z).unwrap());
            let ja = jones_polynomial(&kh(&da, Coeff::Z).unwrap());
            let jb = jones_polynomial(&kh(&db, Coeff::Z).unwrap());
            assert_eq!(ju, &ja * &jb, "{a} ⊔ {b}");
        }
    }
}

#[test]
fn reidemeister_variants_agree() {
    let groups = [
        vec!["unknot", "unknot-1", "unknot-2"],
        vec!["unlink-2", "unlink-2-r2"],
        vec!["hopf-plus", "hopf-plus-braid", "hopf-plus-stabilized", "hopf-plus-r2"],
        vec!["hopf-minus", "hopf-minus-braid", "hopf-minus-stabilized", "hopf-minus-r2"],
    ];
    for g in groups {
        let first = kh(&DiagramLibrary::get(g[0]).unwrap(), Coeff::Z).unwrap();
        for name in &g[1..] {
            assert_eq!(kh(&DiagramLibrary::get(name).unwrap(), Coeff::Z).unwrap(), first, "{name}");
        }
    }
}

#[test]
fn module_action_is_a_square_zero_commuting_family() {
    for d in library().into_iter().filter(|d| d.component_count() >= 2) {
        let a = module_action(&d, d.distinguished_component()).unwrap();
        assert!(a.squares_to_zero() && a.commute() && a.is_homogeneous(), "{:?}", d.name());
        assert_eq!(a.dim(), khr(&d, d.distinguished_component(), Coeff::Q).unwrap().total_rank());
    }
}

#[test]
fn trefoil_homology() {
    // left-handed trefoil over Z, computed by hand from its 3-crossing cube
    let d = DiagramLibrary::get("trefoil-left").unwrap();
    let g = kh(&d, Coeff::Z).unwrap();
    let text: Vec<String> = g.iter().map(|((h, q), a)| format!("{h},{q}:{a}")).collect();
    assert_eq!(text, ["-3,-9:Z", "-2,-7:Z/2", "-2,-5:Z", "0,-3:Z", "0,-1:Z"]);
}
