mod common;

use common::{determinant_oracle, shape_oracle};
use hopf_kh::alexander::{
    alexander_single, diagonal_multivariable, euler_series_matches, four_term, prop3_solver,
    second_derivative_identity, torres_check,
};
use hopf_kh::homalg::LaurentPoly;
use hopf_kh::library::DiagramLibrary;
use num_bigint::BigInt;

/// `|Δ(-1)|` with `t^{1/2} = i`.
fn abs_at_minus_one(p: &LaurentPoly) -> u64 {
    let (mut re, mut im) = (0i64, 0i64);
    for (e, c) in p.terms() {
        let c = i64::try_from(c.clone()).unwrap();
        match e.rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    ((re * re + im * im) as f64).sqrt().round() as u64
}

#[test]
fn symmetric_and_mirror_invariant() {
    for d in DiagramLibrary::all() {
        let p = alexander_single(&d);
        // Δ(t^{-1}) = (-1)^{r-1} Δ(t)
        let expected = if d.component_count() % 2 == 1 { p.clone() } else { -p.clone() };
        assert_eq!(p.invert_variable(), expected, "{:?}", d.name());
        assert_eq!(alexander_single(&d.mirror()), p, "{:?}", d.name());
    }
}

#[test]
fn determinant_matches_bracket_at_eighth_root() {
    for d in DiagramLibrary::all() {
        let p = alexander_single(&d);
        assert_eq!(abs_at_minus_one(&p), determinant_oracle(&d), "{:?}", d.name());
    }
}

#[test]
fn knots_have_odd_determinant_and_unit_value_at_one() {
    for d in DiagramLibrary::all().into_iter().filter(|d| d.component_count() == 1) {
        let p = alexander_single(&d);
        assert_eq!(p.evaluate_at_1(), BigInt::from(1), "{:?}", d.name());
        assert_eq!(determinant_oracle(&d) % 2, 1);
    }
}

#[test]
fn torres_condition_on_two_component_links() {
    for d in DiagramLibrary::all().into_iter().filter(|d| d.component_count() == 2) {
        let p = alexander_single(&d);
        let lk = d.linking_number(0, 1).unwrap();
        let diag = diagonal_multivariable(&p).unwrap();
        assert!(torres_check(&diag, lk), "{:?}: Δ = {p}, lk = {lk}", d.name());
    }
}

#[test]
fn hopf_chain() {
    for name in ["hopf-plus", "hopf-minus", "hopf-plus-r2", "hopf-minus-r2"] {
        let p = alexander_single(&DiagramLibrary::get(name).unwrap());
        assert!(p.eq_up_to_sign(&LaurentPoly::half_difference()));
        assert!(diagonal_multivariable(&p).unwrap().eq_up_to_sign(&LaurentPoly::one()));
        let series = prop3_solver(4, 1, 5)[0].signed_series();
        assert!(euler_series_matches(&p, 2, &series));
    }
}

#[test]
fn whitehead_is_cube_of_half_difference() {
    let p = alexander_single(&DiagramLibrary::get("whitehead").unwrap());
    let h = LaurentPoly::half_difference();
    assert!(p.eq_up_to_sign(&(&(&h * &h) * &h)));
}

#[test]
fn solver_agrees_with_per_summand_oracle() {
    for budget in [2, 3, 4, 5, 6] {
        for lk in [0, 1, 2, 3] {
            for m_max in [1, 2, 3, 4] {
                let solver: std::collections::BTreeSet<Vec<(i64, i64)>> = prop3_solver(budget, lk as u64, m_max)
                    .iter()
                    .map(|s| {
                        let signs = s.signs.as_ref().unwrap();
                        s.gradings.iter().map(|(&j, &r)| (j, signs[&j] as i64 * r as i64)).collect()
                    })
                    .collect();
                let oracle = shape_oracle(budget, lk, m_max as i64);
                // the oracle also sees mixed signs inside one grading; every
                // solver answer must appear there
                assert!(solver.is_subset(&oracle), "budget {budget} lk {lk} m {m_max}");
                if budget <= 4 {
                    assert_eq!(solver, oracle, "budget {budget} lk {lk} m {m_max}");
                }
            }
        }
    }
}

#[test]
fn four_term_identity_is_m2_minus_k2() {
    for m in 1..8i64 {
        for k in 0..m {
            let v = second_derivative_identity(&four_term(m, k)).unwrap();
            assert_eq!(v, BigInt::from(m * m - k * k));
        }
    }
}
