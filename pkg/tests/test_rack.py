import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgrack.errors import FormatError
from mgrack.finite_group import s3_presented
from mgrack.rack import (GFamilyOfRacks, Rack, dihedral_quandle, enumerate_racks, example_z3_s3, gfamily_from_rack,
                         gfamily_violation, is_quandle, rack_type, trivial_rack, verify_gfamily_axioms,
                         verify_rack_axioms)


@pytest.mark.parametrize("n", range(1, 8))
def test_dihedral(n):
    R = dihedral_quandle(n)
    assert verify_rack_axioms(R)
    assert is_quandle(R)
    assert rack_type(R) == (1 if n <= 2 else 2)


def test_dihedral3_values():
    R = dihedral_quandle(3)
    assert [[int(R.op[x, y]) for y in range(3)] for x in range(3)] == [[0, 2, 1], [2, 1, 0], [1, 0, 2]]


def test_rack_counts_small():
    # labelled racks on 1, 2, 3 points
    assert [len(enumerate_racks(n)) for n in (1, 2, 3)] == [1, 2, 13]


def test_non_quandle_rack_type():
    swap = Rack([[1, 1], [0, 0]])
    assert verify_rack_axioms(swap)
    assert not is_quandle(swap)
    assert rack_type(swap) == 2


def test_gfamily_from_dihedral3():
    F = gfamily_from_rack(dihedral_quandle(3))
    assert F.group.order == 2
    assert np.array_equal(F.ops[1], dihedral_quandle(3).op)
    assert np.array_equal(F.ops[0], np.repeat(np.arange(3)[:, None], 3, axis=1))
    assert verify_gfamily_axioms(F)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gfamily_from_every_small_rack(n):
    for R in enumerate_racks(n):
        F = gfamily_from_rack(R)
        assert verify_gfamily_axioms(F)
        assert np.array_equal(F.ops[1 % F.group.order], R.op) or F.group.order == 1
        for g in range(F.group.order):
            assert verify_rack_axioms(F.slice(g))


def test_example_family():
    F = example_z3_s3()
    G = F.group
    assert verify_gfamily_axioms(F)
    odd = [G.index(s) for s in ("x", "ax", "a2x")]
    even = [G.index(s) for s in ("e", "a", "a2")]
    for g in odd:
        assert np.array_equal(F.ops[g], dihedral_quandle(3).op)
    for g in even:
        assert np.array_equal(F.ops[g], trivial_rack(3).op)


def test_family_violations_are_reported():
    G = s3_presented()
    ops = np.stack([dihedral_quandle(3).op] * 6)
    assert gfamily_violation(GFamilyOfRacks(G, ops))[0] == "identity"
    # constant dihedral action off the identity breaks the exponent law
    ops[G.identity] = trivial_rack(3).op
    assert gfamily_violation(GFamilyOfRacks(G, ops))[0] == "exponent"


def test_gfamily_json_default():
    F = example_z3_s3()
    data = {"carrier": 3, "group": F.group.to_dict(),
            "ops": {"3": dihedral_quandle(3).op.tolist(), "4": dihedral_quandle(3).op.tolist(),
                    "5": dihedral_quandle(3).op.tolist()},
            "default": trivial_rack(3).op.tolist()}
    G2 = GFamilyOfRacks.from_dict(data)
    assert np.array_equal(G2.ops, F.ops)
    del data["default"]
    with pytest.raises(FormatError):
        GFamilyOfRacks.from_dict(data)
    assert np.array_equal(GFamilyOfRacks.from_dict(F.to_dict()).ops, F.ops)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_corrupted_rack_fails(data):
    n = data.draw(st.integers(3, 7))
    op = dihedral_quandle(n).op.copy()
    x, y = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    op[x, y] = data.draw(st.integers(0, n - 1).filter(lambda v: v != op[x, y]))
    assert not verify_rack_axioms(Rack(op))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_corrupted_family_fails(data):
    F = example_z3_s3()
    ops = F.ops.copy()
    g, x, y = (data.draw(st.integers(0, k)) for k in (5, 2, 2))
    ops[g, x, y] = data.draw(st.integers(0, 2).filter(lambda v: v != ops[g, x, y]))
    assert not verify_gfamily_axioms(GFamilyOfRacks(F.group, ops))
