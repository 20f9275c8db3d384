use ybe_core::families::{
    self, block_form, fixture, p2_solution, square_block_data, square_solution, SquareFamilyParams,
};
use ybe_core::quotients::{find_isomorphism, is_isomorphism, is_simple};

fn square(n: usize, t: usize, j: &[usize]) -> ybe_core::Solution {
    square_solution(&SquareFamilyParams::new(n, t, j.to_vec())).unwrap().0
}

#[test]
fn nine_point_fixtures_are_square_family_members() {
    for (name, j) in [("nine_r1", [0, 1, 1]), ("nine_r2", [1, 0, 0]), ("nine_r3", [1, 2, 2])] {
        let a = fixture(name).unwrap();
        let b = square(3, 1, &j);
        let f = find_isomorphism(&a, &b).unwrap_or_else(|| panic!("{name}"));
        assert!(is_isomorphism(&a, &b, &f));
        assert!(is_simple(&a).unwrap().0, "{name}");
    }
}

#[test]
fn four_point_fixtures() {
    for (name, j) in [("examp1", [0, 1]), ("examp2", [1, 0])] {
        let a = fixture(name).unwrap();
        assert_eq!(a.permutation_group().unwrap().order(), 8);
        assert!(a.is_indecomposable() && a.is_irretractable());
        assert!(find_isomorphism(&a, &square(2, 1, &j)).is_some(), "{name}");
    }
    assert!(find_isomorphism(&fixture("examp1").unwrap(), &fixture("examp2").unwrap()).is_none());
}

#[test]
fn exnonsimple_is_not_simple() {
    let s = fixture("exnonsimple").unwrap();
    assert!(s.is_indecomposable() && s.is_irretractable());
    let (simple, witness) = is_simple(&s).unwrap();
    assert!(!simple);
    assert!(witness.is_some());
}

#[test]
fn prime_square_family_is_simple() {
    let s = p2_solution(5, 1, &[0, 1, 1, 1, 1]).unwrap();
    assert!(is_simple(&s).unwrap().0);
    let s = p2_solution(7, 2, &families::p7_example_j()).unwrap();
    assert!(is_simple(&s).unwrap().0);
    let b = block_form(&families::p7_example_data());
    assert_eq!(b.solution().unwrap().table(), s.table());
    let nine = block_form(&square_block_data(3, 1, &[1, 2, 2]));
    assert!(find_isomorphism(nine.solution().unwrap(), &fixture("nine_r3").unwrap()).is_some());
}
