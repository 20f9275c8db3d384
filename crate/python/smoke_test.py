"""Smoke test for the `ybe` extension module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o target/wheels
    pip install --force-reinstall target/wheels/ybe-*.whl
"""

import json

import ybe


def main():
    e1 = ybe.Solution.fixture("examp1")
    e2 = ybe.Solution.fixture("examp2")
    assert e1.n == 4 and len(e1) == 4
    assert e1.group_order() == 8
    assert e1.is_indecomposable() and e1.is_irretractable() and e1.is_simple()
    assert e1.block_systems() == [[[0, 3], [1, 2]]]
    assert ybe.find_isomorphism(e1, e2) is None
    assert ybe.find_isomorphism(e1, ybe.square_solution(2, 1, [0, 1])) is not None

    again = ybe.Solution.from_json(e1.to_json())
    assert again == e1
    assert e1.relabel([2, 0, 3, 1]).canonical_form() == e1.canonical_form()

    report = ybe.validate([[0, 1], [1, 0]])
    assert report["valid"] is False and report["witness"] is not None

    nine = ybe.p2_solution(3, 1, [0, 1, 1])
    assert nine.is_simple()
    big = ybe.Solution.fixture("exnonsimple")
    assert not big.is_simple() and big.congruence_witness() is not None

    try:
        ybe.rectangular_solution(2, 2)
    except ValueError as e:
        assert "axioms" in str(e)
    else:
        raise AssertionError("rectangular construction should be rejected")

    b = ybe.asymmetric_product(2, [0, 1])
    assert b.order == 8 and b.socle() == [b.zero]
    r = ybe.permutation_brace(e1)
    assert r.order == 8
    assert json.loads(b.to_json())["order"] == 8
    assert b.associated_solution().n == 8

    classes = ybe.census(4, ["indecomposable", "irretractable"])
    assert len(classes) == 2
    assert all(flags["simple"] for _, flags, _ in classes)
    assert len(ybe.census(3)) == 5
    assert len(ybe.enumerate_block_form(3)) == 3

    print("ok", ybe.FIXTURES)


if __name__ == "__main__":
    main()
