from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from affine_brylinski.cartan import (UnsupportedRootSystem, WeightVector, build_root_system,
                                     cartan_matrix, chevalley_constants, cocycle, inner_product)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 5), ("D", 4), ("D", 5), ("E", 6), ("E", 7),
         ("E", 8)]


def reflection_closure(rs):
    """Roots as the Weyl orbit of the simple roots (independent of the height layers)."""
    g = rs.gram
    n = rs.rank

    def reflect(v, i):
        c = sum(v[j] * g[j][i] for j in range(n))
        return tuple(v[j] - (c if j == i else 0) for j in range(n))

    seen = {rs.simple_root(i) for i in range(n)}
    todo = list(seen)
    while todo:
        v = todo.pop()
        for i in range(n):
            w = reflect(v, i)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def weyl_order(rs):
    g = rs.gram
    n = rs.rank
    start = tuple(rs.weyl_vector)
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for i in range(n):
            c = sum(v[j] * g[j][i] for j in range(n))
            w = tuple(v[j] - (c if j == i else 0) for j in range(n))
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen)


@pytest.mark.parametrize("family,rank", TYPES)
def test_roots_match_reflection_closure(family, rank):
    rs = build_root_system(family, rank)
    assert set(rs.roots) == reflection_closure(rs)


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4),
                                          ("D", 5)])
def test_weyl_group_order_is_product_of_degrees(family, rank):
    rs = build_root_system(family, rank)
    assert weyl_order(rs) == prod(rs.degrees)


@pytest.mark.parametrize("family,rank", TYPES)
def test_exponent_identities(family, rank):
    rs = build_root_system(family, rank)
    h = rs.coxeter_number
    assert len(rs.positive_roots) == rank * h // 2
    assert sum(rs.exponents) == len(rs.positive_roots)
    # exponents are symmetric under e -> h - e
    assert sorted(h - e for e in rs.exponents) == sorted(rs.exponents)
    # strange formula: |rho|^2 = h dim / 12 with roots of length 2
    dim = rank + 2 * len(rs.positive_roots)
    assert rs.norm2(rs.weyl_vector) == Fraction(h * dim, 12)


def test_spec_examples(A1, A2, D4):
    assert A1.coxeter_number == 2 and A1.degrees == (2,) and len(A1.positive_roots) == 1
    assert A1.norm2(A1.weyl_vector) == Fraction(1, 2)
    assert A2.coxeter_number == 3 and A2.degrees == (2, 3)
    assert A2.norm2(A2.weyl_vector) == 2
    assert D4.coxeter_number == 6 and D4.degrees == (2, 4, 4, 6)
    assert len(D4.positive_roots) == 12 and D4.norm2(D4.weyl_vector) == 14
    e8 = build_root_system("E", 8)
    assert e8.coxeter_number == 30 and len(e8.positive_roots) == 120
    assert e8.norm2(e8.weyl_vector) == 620
    assert e8.degrees == (2, 8, 12, 14, 18, 20, 24, 30)


def test_highest_root_pairs_to_h_minus_one(D4):
    for name in TYPES:
        rs = build_root_system(*name)
        assert rs.height(rs.highest_root) == rs.coxeter_number - 1
        assert rs.norm2(rs.highest_root) == 2


def test_unsupported_types():
    for fam, rank in [("D", 3), ("E", 5), ("B", 2), ("A", 0)]:
        with pytest.raises(UnsupportedRootSystem):
            cartan_matrix(fam, rank)


def test_weight_basis_conversion(A2):
    rho_f = WeightVector(A2.weyl_vector).to_fundamental(A2)
    assert rho_f.coords == (1, 1)
    assert rho_f.to_root(A2).coords == A2.weyl_vector
    with pytest.raises(ValueError):
        inner_product(A2, rho_f, WeightVector(A2.weyl_vector))


@pytest.mark.parametrize("family,rank", [("A", 2), ("A", 3), ("D", 4), ("D", 5)])
def test_chevalley_jacobi(family, rank):
    rs = build_root_system(family, rank)
    assert chevalley_constants(rs, check=True).check_jacobi()


def test_jacobi_with_other_orderings(A3):
    assert chevalley_constants(A3, ordering=(2, 0, 1), check=True).check_jacobi()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TYPES[:6]), st.data())
def test_structure_constants_antisymmetric(name, data):
    rs = build_root_system(*name)
    cb = chevalley_constants(rs)
    a = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    if (a, b) in cb.structure:
        # N(a, b) = (-1)^(a|b) N(b, a); (a|b) = -1 whenever a + b is a root
        assert cb.N(a, b) == -cb.N(b, a)
        assert cb.N(a, b) == (-1) ** rs.inner(a, b) * cb.N(b, a)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_cocycle_bimultiplicative(a, b, c):
    rs = build_root_system("A", 3)
    bc = [x + y for x, y in zip(b, c)]
    assert cocycle(rs, a, bc) == cocycle(rs, a, b) * cocycle(rs, a, c)
    # eps(a, b) eps(b, a) = (-1)^(a|b)
    assert cocycle(rs, a, b) * cocycle(rs, b, a) == (-1) ** (rs.inner(a, b) % 2)
