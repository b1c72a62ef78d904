import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgrack.errors import CocycleInvalid, ConstructionError, FormatError
from mgrack.finite_group import SubgroupWitness, cyclic_group, normal_subgroups, s3_presented
from mgrack.mgr import (CocycleData, MultipleGroupRack, abelian_extension, associated_mgr, conjugation_mgr,
                        extension_projection, is_mcq, is_mgr_homomorphism, semidirect_mgr,
                        star_inverse, trivial_mgr, verify_mgr_axioms)
from mgrack.rack import Rack, enumerate_racks, gfamily_from_rack


def semidirect_index(M, x, g, n, N):
    k = len(N)
    return x * 6 * k + g * k + N.position(n)


def projection(family, N):
    """(x, (g, n)) -> (x, g) as an index map."""
    k, m, q = len(N), family.group.order * len(N), family.group.order
    u = np.arange(family.carrier_size * m)
    return (u // m) * q + (u % m) // k


def test_small_mgrs():
    G = s3_presented()
    for M in (trivial_mgr(G), conjugation_mgr(G)):
        assert verify_mgr_axioms(M).ok
    assert is_mcq(conjugation_mgr(G))
    assert not is_mcq(trivial_mgr(G))


def test_associated_is_mcq(A):
    assert A.size == 18
    assert verify_mgr_axioms(A).ok
    assert is_mcq(A)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_associated_from_every_small_rack(n):
    for R in enumerate_racks(n):
        assert verify_mgr_axioms(associated_mgr(gfamily_from_rack(R))).ok


def test_semidirect_all_normal_subgroups(family):
    sizes = []
    for N in normal_subgroups(family.group):
        M = semidirect_mgr(family, N)
        assert verify_mgr_axioms(M).ok
        assert len(M.components) == 3
        sizes.append(M.size)
        assert is_mcq(M) == (len(N) == 1)
    assert sizes == [18, 54, 108]


def test_semidirect_star_formula(family, S):
    G = family.group
    N = SubgroupWitness(G, range(6))
    conj = G.conjugation_table()
    rng = np.random.default_rng(0)
    for x, y, g1, n1, g2, n2 in rng.integers(0, [3, 3, 6, 6, 6, 6], size=(300, 6)):
        act = G.mul(g2, n2)
        want = semidirect_index(S, family.ops[act, x, y], conj[g1, act], conj[n1, act], N)
        assert S.star[semidirect_index(S, x, g1, n1, N), semidirect_index(S, y, g2, n2, N)] == want


def test_example_square(family, S):
    """(0,(a,x)) * (0,(a,x)) differs from (0,(a,x)); its value is (0,(a2,a2x))."""
    G = family.group
    N = SubgroupWitness(G, range(6))
    u = semidirect_index(S, 0, G.index("a"), G.index("x"), N)
    v = int(S.star[u, u])
    assert v != u
    assert S.labels[v] == "(0,(a2,a2x))"
    assert S.labels[v] != "(0,(a2,ax))"


def test_star_inverse_round_trip(S):
    for x in range(0, S.size, 7):
        for y in range(S.size):
            assert star_inverse(S, int(S.star[x, y]), y) == x
    for lam in range(3):
        e = int(S.identities[lam])
        assert all(star_inverse(S, z, e) == z for z in range(S.size))


def test_columns_are_bijections(S):
    for y in range(S.size):
        assert len(set(S.star[:, y].tolist())) == S.size


def test_trivial_n_matches_associated(family, A):
    N = SubgroupWitness(family.group, [0])
    M = semidirect_mgr(family, N)
    p = projection(family, N)
    assert sorted(p.tolist()) == list(range(A.size))
    assert is_mgr_homomorphism(p, M, A)


def test_projection_fails_for_full_n(family, S, A):
    assert not is_mgr_homomorphism(projection(family, SubgroupWitness(family.group, range(6))), S, A)


def test_rejects_non_normal(family):
    with pytest.raises(ConstructionError):
        semidirect_mgr(family, SubgroupWitness(family.group, [0, 3]))


def test_mgr_round_trip(A):
    B = MultipleGroupRack.from_dict(A.to_dict())
    assert np.array_equal(A.star, B.star)
    assert B.labels == A.labels
    with pytest.raises(FormatError):
        MultipleGroupRack.from_dict({**A.to_dict(), "bogus": 1})


def swap_mgr():
    return associated_mgr(gfamily_from_rack(Rack([[1, 1], [0, 0]])))


def test_cocycles():
    M, Z2 = swap_mgr(), cyclic_group(2)
    zero = CocycleData.zero(M, Z2)
    E = abelian_extension(M, zero)
    assert E.size == 8
    assert is_mgr_homomorphism(extension_projection(M, Z2), E, M)
    twisted = CocycleData(Z2, np.zeros((4, 4), int), ([[0, 0], [0, 1]], [[0, 0], [0, 1]]))
    E = abelian_extension(M, twisted)
    assert [g.commutative for g in E.components] == [True, True]
    # the component is Z4, not Z2 x Z2
    g = E.components[0]
    assert any(g.prod(h, h) != g.identity for h in range(4))
    bad = CocycleData(Z2, np.eye(4, dtype=int), (np.zeros((2, 2), int),) * 2)
    with pytest.raises(CocycleInvalid) as info:
        abelian_extension(M, bad)
    assert info.value.violation is not None


def test_cocycle_needs_abelian_target():
    M = swap_mgr()
    with pytest.raises(ConstructionError):
        CocycleData.zero(M, s3_presented())


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_corrupted_mgr_fails(data):
    M = swap_mgr()
    star = M.star.copy()
    i, j = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    star[i, j] = data.draw(st.integers(0, 3).filter(lambda v: v != star[i, j]))
    assert not verify_mgr_axioms(MultipleGroupRack(M.components, star)).ok


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_corrupted_semidirect_fails(family, data):
    M = semidirect_mgr(family, SubgroupWitness(family.group, (0, 1, 2)))
    star = M.star.copy()
    i, j = data.draw(st.integers(0, M.size - 1)), data.draw(st.integers(0, M.size - 1))
    star[i, j] = data.draw(st.integers(0, M.size - 1).filter(lambda v: v != star[i, j]))
    report = verify_mgr_axioms(MultipleGroupRack(M.components, star))
    assert not report.ok and report.first_violation is not None
