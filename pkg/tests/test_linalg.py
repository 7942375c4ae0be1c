import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_brylinski import _backend, linalg


def random_matrix(rng, m, n, rank, den=5):
    basis = [[Fraction(rng.randint(-4, 4), rng.randint(1, den)) for _ in range(n)]
             for _ in range(rank)]
    rows = []
    for _ in range(m):
        coef = [Fraction(rng.randint(-3, 3)) for _ in range(rank)]
        rows.append({j: sum(c * b[j] for c, b in zip(coef, basis)) for j in range(n)})
    return [{j: x for j, x in r.items() if x} for r in rows]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 40), st.integers(2, 40), st.integers(0, 12))
def test_modular_reduction_matches_fraction_rref(seed, m, n, rank):
    rng = random.Random(seed)
    rows = random_matrix(rng, m, n, min(rank, m, n))
    rref, piv = linalg.rref_fraction(rows, n)
    red = linalg.reduce(rows, n)
    assert red.pivots == piv
    assert len(red.kernel) == n - len(piv)
    for v in red.kernel:
        assert not linalg.apply_rows(rows, v)


def test_large_matrix_uses_modular_path():
    rng = random.Random(3)
    rows = random_matrix(rng, 60, 50, 31, den=9)
    assert len(rows) * 50 > linalg.SMALL
    red = linalg.reduce(rows, 50)
    _, piv = linalg.rref_fraction(rows, 50)
    assert red.rank == 31 and red.pivots == piv


def test_rank_helpers():
    rows = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)}, {2: Fraction(1)}]
    assert linalg.rank(rows, 3) == 2
    assert linalg.independent_columns(rows, 3) == [0, 2]
    assert linalg.span_contains(rows, [{0: Fraction(3), 1: Fraction(6), 2: Fraction(1)}])
    assert not linalg.span_contains(rows, [{1: Fraction(1)}])
    assert linalg.intersection_dim(rows, [{2: Fraction(5)}, {1: Fraction(1)}]) == 1
    ann = linalg.annihilator(rows, 3)
    assert len(ann) == 1 and all(not linalg.apply_rows(rows, a) for a in ann)


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=-10**6, max_value=10**6, max_denominator=1000))
def test_rational_reconstruction(q):
    # inside the sqrt(m/2) bound reconstruction is unique
    m = linalg.PRIMES[0] * linalg.PRIMES[1]
    a = q.numerator * pow(q.denominator, -1, m) % m
    assert linalg.ratrecon(a, m) == q


@pytest.mark.skipif("cython" not in _backend.kernels(), reason="extension not built")
@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 30), st.integers(1, 30))
def test_backends_agree(seed, m, n):
    rng = np.random.default_rng(seed)
    p = linalg.PRIMES[0]
    a = (rng.integers(-2, 3, size=(m, n)) * (rng.random((m, n)) < 0.4)).astype(np.int64) % p
    ks = _backend.kernels()
    a1, a2 = a.copy(), a.copy()
    assert ks["python"](a1, p) == list(ks["cython"](a2, p))
    assert np.array_equal(a1, a2)
