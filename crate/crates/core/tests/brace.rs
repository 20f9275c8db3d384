use rayon::prelude::*;
use ybe_core::brace::{
    asym_solution_iso, asymmetric_product, find_brace_isomorphism, ideal_check, orbit_solution, permutation_brace,
    socle_quotient_check, symmetric_vectors, validate_brace, AsymmetricBrace, AsymmetricParams, BraceError,
};
use ybe_core::families::{fixture, permutation_solution, square_table};
use ybe_core::quotients::find_isomorphism;
use ybe_core::{LeftBrace, Perm, Solution};

fn params(n: usize, j: &[usize]) -> AsymmetricParams {
    AsymmetricParams::new(n, j.to_vec()).unwrap()
}

#[test]
fn asymmetric_j_is_rejected() {
    assert_eq!(
        AsymmetricParams::new(3, vec![0, 1, 2]).unwrap_err(),
        BraceError::Asymmetric { i: 1 }
    );
}

#[test]
fn order_eight_products() {
    let b01 = asymmetric_product(&params(2, &[0, 1])).unwrap();
    assert_eq!(b01.brace.order(), 8);
    assert!(b01.nonsingular);
    assert_eq!(b01.brace.socle(), vec![0]);
    let b00 = asymmetric_product(&params(2, &[0, 0])).unwrap();
    assert!(b00.brace.socle().len() > 1);

    let r01 = AsymmetricBrace::new(params(2, &[0, 1])).restricted_solution().unwrap();
    let r10 = AsymmetricBrace::new(params(2, &[1, 0])).restricted_solution().unwrap();
    assert_eq!(r01.table(), square_table(2, 1, &[0, 1]));
    assert!(find_isomorphism(&r01, &fixture("examp1").unwrap()).is_some());
    assert!(find_isomorphism(&r10, &fixture("examp2").unwrap()).is_some());

    let b10 = asymmetric_product(&params(2, &[1, 0])).unwrap();
    assert!(find_brace_isomorphism(&b01.brace, &b10.brace).is_none());
    let id = find_brace_isomorphism(&b01.brace, &b01.brace).unwrap();
    assert_eq!(id.len(), 8);
}

#[test]
fn lambda_matches_closed_form() {
    let s = AsymmetricBrace::new(params(3, &[0, 1, 1]));
    let b = s.to_brace().unwrap();
    for a in 0..b.order() {
        for c in 0..b.order() {
            assert_eq!(b.lambda(a, c), s.lambda(a, c));
        }
    }
    // λ is an action of (B,∘)
    for a in (0..b.order()).step_by(7) {
        for a2 in (0..b.order()).step_by(5) {
            let ab = b.mul(a, a2);
            assert!((0..b.order()).all(|c| b.lambda(ab, c) == b.lambda(a, b.lambda(a2, c))));
        }
    }
}

#[test]
fn restricted_solution_matches_square_family() {
    for n in 2..=5 {
        for j in symmetric_vectors(n) {
            let s = AsymmetricBrace::new(params(n, &j)).restricted_solution().unwrap();
            assert_eq!(s.table(), square_table(n, 1, &j), "n={n} j={j:?}");
        }
    }
}

#[test]
fn socle_trivial_iff_nonsingular() {
    for n in 2..=6 {
        symmetric_vectors(n).into_par_iter().for_each(|j| {
            let p = params(n, &j);
            let soc = AsymmetricBrace::new(p.clone()).socle();
            assert_eq!(soc == vec![0], p.is_nonsingular().unwrap(), "n={n} j={j:?}");
        });
    }
}

#[test]
fn indecomposable_and_irretractable_criteria() {
    for n in 2..=6 {
        for j in symmetric_vectors(n) {
            let p = params(n, &j);
            let s = Solution::from_table(square_table(n, 1, &j)).unwrap();
            assert_eq!(s.is_indecomposable(), p.generates(), "n={n} j={j:?}");
            assert_eq!(s.is_irretractable(), p.rows_distinct(), "n={n} j={j:?}");
        }
    }
}

#[test]
fn small_products_are_braces_with_valid_solutions() {
    for n in [2, 3] {
        for j in symmetric_vectors(n) {
            let b = asymmetric_product(&params(n, &j)).unwrap().brace;
            assert_eq!(b.socle(), AsymmetricBrace::new(params(n, &j)).socle());
            assert!(b.associated_solution().is_ok());
            assert!(socle_quotient_check(&b).unwrap(), "n={n} j={j:?}");
        }
    }
}

#[test]
fn order_1024_sample() {
    for j in [[0, 1, 2, 1], [1, 1, 0, 1]] {
        let b = asymmetric_product(&params(4, &j)).unwrap().brace;
        assert_eq!(b.order(), 1024);
        assert!(b.associated_solution().is_ok());
    }
}

#[test]
#[ignore = "every symmetric j at n = 4; several minutes"]
fn order_1024_exhaustive() {
    for j in symmetric_vectors(4) {
        let b = asymmetric_product(&params(4, &j)).unwrap().brace;
        assert!(b.associated_solution().is_ok(), "j={j:?}");
    }
}

#[test]
fn socle_quotient_examples() {
    let b = asymmetric_product(&params(2, &[0, 1])).unwrap().brace;
    assert!(socle_quotient_check(&b).unwrap());
    let g = permutation_brace(&b.associated_solution().unwrap()).unwrap();
    assert_eq!(g.brace.order(), 8);
    let b = asymmetric_product(&params(3, &[0, 1, 1])).unwrap().brace;
    assert!(socle_quotient_check(&b).unwrap());
    assert!(socle_quotient_check(&LeftBrace::trivial_cyclic(3)).unwrap());
}

#[test]
fn permutation_brace_examples() {
    let trivial = Solution::from_perms(vec![Perm::identity(3); 3]).unwrap();
    assert_eq!(permutation_brace(&trivial).unwrap().brace.order(), 1);

    let cyc = permutation_solution(&Perm::shift(5));
    let g = permutation_brace(&cyc).unwrap();
    assert_eq!(g.brace.order(), 5);
    assert!(g.brace.is_trivial());
    assert!(find_brace_isomorphism(&g.brace, &LeftBrace::trivial_cyclic(5)).is_some());

    let g = permutation_brace(&fixture("examp1").unwrap()).unwrap();
    assert_eq!(g.brace.order(), 8);
    assert_eq!(g.brace.socle(), vec![g.brace.zero()]);
}

#[test]
fn minimal_ideal_statement() {
    for name in ["examp1", "examp2", "nine_r1", "nine_r2", "nine_r3"] {
        let c = ideal_check(&fixture(name).unwrap()).unwrap();
        assert!(c.holds(), "{name}: {c:?}");
    }
}

#[test]
fn ideals_of_the_order_eight_brace() {
    let b = asymmetric_product(&params(2, &[0, 1])).unwrap().brace;
    let star = b.star_ideal().unwrap();
    assert!(b.is_ideal(&star));
    assert!(b.is_ideal(&b.socle()));
    let (q, class) = b.quotient(&star).unwrap();
    assert_eq!(q.order() * star.len(), 8);
    assert_eq!(class.len(), 8);
    assert!(!b.is_ideal(&[0, 1]) || b.ideal_generated_by(&[1]) == vec![0, 1]);
}

#[test]
fn unit_search() {
    assert_eq!(asym_solution_iso(&params(3, &[0, 1, 1]), &params(3, &[0, 1, 1])).unwrap(), Some(1));
    assert_eq!(asym_solution_iso(&params(3, &[0, 1, 1]), &params(3, &[0, 2, 2])).unwrap(), Some(2));
    assert_eq!(asym_solution_iso(&params(2, &[0, 1]), &params(2, &[1, 0])).unwrap(), None);
}

#[test]
fn orbit_solutions() {
    let t = LeftBrace::trivial_cyclic(4);
    let (s, pts) = orbit_solution(&t, 3).unwrap();
    assert_eq!((s.n(), pts), (1, vec![3]));
    let s = AsymmetricBrace::new(params(2, &[0, 1]));
    let b = s.to_brace().unwrap();
    let (o, _) = orbit_solution(&b, s.x(0, 0)).unwrap();
    assert!(o.is_indecomposable());
    assert_eq!(8 % o.n(), 0);
}

#[test]
fn brace_identities() {
    let b = asymmetric_product(&params(3, &[1, 2, 2])).unwrap().brace;
    for a in 0..b.order() {
        for c in 0..b.order() {
            // a∘c⁻¹ = a − λ_{a∘c⁻¹}(c)
            let aci = b.mul(a, b.inv(c));
            assert_eq!(aci, b.sub(a, b.lambda(aci, c)));
        }
    }
}

#[test]
fn tables_round_trip() {
    let b = asymmetric_product(&params(2, &[1, 1])).unwrap().brace;
    let again = validate_brace(b.add_table().to_vec(), b.mul_table().to_vec()).unwrap();
    assert_eq!(again, b);
    assert_eq!(LeftBrace::from_json(&b.to_json()).unwrap(), b);
}
