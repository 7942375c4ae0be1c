from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from affine_brylinski import brylinski
from affine_brylinski.cartan import build_root_system
from affine_brylinski.graded import ResourceLimitError


def product_oracle(degrees, n):
    """Coefficient of q^n in prod_{d, k >= 1} 1/(1 - t^d q^k), by multiset count."""
    letters = [(d, k) for d in degrees for k in range(1, n + 1)]
    out = Counter()
    for size in range(n + 1):
        for combo in combinations_with_replacement(range(len(letters)), size):
            if sum(letters[c][1] for c in combo) == n:
                out[sum(letters[c][0] for c in combo)] += 1
    return dict(out)


@pytest.fixture(scope="module")
def fil_a1(A1):
    return brylinski.Filtration(A1)


@pytest.fixture(scope="module")
def fil_a2(A2):
    return brylinski.Filtration(A2)


def test_splus_dimensions(A1, D4):
    assert brylinski.splus_basis(A1, 6).dims() == {1: 1, 2: 0, 3: 1, 4: 0, 5: 1, 6: 0}
    assert brylinski.splus_basis(D4, 6).dims() == {1: 1, 2: 0, 3: 2, 4: 0, 5: 1, 6: 0}


def test_degree_one_is_principal_nilpotent(A2):
    (u,) = brylinski.splus_basis(A2, 1).elements[1]
    e = brylinski.principal_nilpotent(A2)
    ratio = {u[k] / e[k] for k in e}
    assert set(u) == set(e) and len(ratio) == 1


def test_splus_commutes_abstractly(A2):
    flat = brylinski.splus_basis(A2, 7).flat()
    for a, (_, u) in enumerate(flat):
        for _, w in flat[a + 1:]:
            assert brylinski.loop_bracket_elements(A2, u, w) == {}


def test_depth_and_pieces(A1, A2):
    assert brylinski.depth(A1, (0,), 3) == 6
    assert brylinski.depth(A1, (-1,), 0) == 1
    assert brylinski.depth(A2, (1, 1), 0) == 5
    fil = brylinski.Filtration(A2)
    assert [fil.piece(D).dim for D in range(5)] == [1, 1, 2, 2, 4]  # partitions into parts prime to 3


def test_small_filtration_pieces(fil_a1):
    assert fil_a1.filtration_subspace(0, -1) == []
    assert len(fil_a1.filtration_subspace(0, 0)) == 1
    assert fil_a1.filtration_subspace(1, 1) == []
    assert len(fil_a1.filtration_subspace(1, 2)) == 1
    with pytest.raises(ValueError):
        fil_a1.filtration_subspace(1, -2)


def test_profile_examples(fil_a1, fil_a2):
    assert fil_a1.profile(0) == {0: 1}
    assert fil_a1.profile(2) == {2: 1, 4: 1}
    assert fil_a2.profile(1) == {2: 1, 3: 1}


@pytest.mark.parametrize("name,n_max", [(("A", 1), 6), (("A", 2), 4), (("A", 3), 2)])
def test_profile_matches_product(name, n_max):
    rs = build_root_system(*name)
    got = brylinski.filtration_profile(rs, n_max)
    for n in range(n_max + 1):
        assert got[n] == product_oracle(rs.degrees, n)
    assert brylinski.compare_profile(rs, min(n_max, 3)) == []


def test_filtration_is_increasing(fil_a2):
    n = 3
    prev = []
    for i in range(-1, fil_a2.stabilization_bound(n) + 1):
        cur = fil_a2.filtration_subspace(n, i)
        assert len(cur) >= len(prev)
        prev = cur
    assert len(prev) == 10  # dim Z_3 for rank 2


def test_polarization(fil_a1, fil_a2):
    assert fil_a1.polarization_check(3, trials=4)
    assert fil_a2.polarization_check(2, trials=4)


def test_realized_splus_commutes(fil_a2, A1):
    assert fil_a2.commutation_check(6)
    assert brylinski.Filtration(A1).commutation_check(6)


def test_resource_limit(A2):
    with pytest.raises(ResourceLimitError):
        brylinski.Filtration(A2, max_basis=2).piece(6)


def test_realize_respects_depth(fil_a1):
    (u,) = fil_a1.splus(1).elements[1]
    rows = fil_a1.realize(u, 1, 4)
    assert len(rows) == fil_a1.piece(3).dim
    assert any(rows)
    assert Fraction(0) not in {x for r in rows for x in r.values()}
