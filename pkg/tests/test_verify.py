import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affine_brylinski import verify, walg
from affine_brylinski.cartan import build_root_system
from affine_brylinski.series import colored_partitions


def brute_generic(rs, lam, k, n_max=400):
    c = Fraction(k) + rs.dual_coxeter
    if c == 0:
        return False
    mu = [a + b for a, b in zip(lam, rs.weyl_vector)]
    for beta in rs.roots:
        a = Fraction(rs.inner(mu, beta))
        for n in range(0 if sum(beta) > 0 else 1, n_max + 1):
            v = a + n * c
            if v.denominator == 1 and v >= 1:
                return False
    return True


def test_pbw_tuple_examples(A1, A2):
    assert verify.pbw_tuples(A1, 3) == [((1, -1),) * 3, ((1, -2), (1, -1)), ((1, -3),)]
    assert len(verify.pbw_tuples(A2, 2)) == 5
    assert verify.pbw_tuples(A2, 0) == [()]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=4), st.integers(0, 6))
def test_pbw_tuple_count(degrees, n):
    tups = verify.pbw_tuples(sorted(degrees), n)
    assert len(tups) == colored_partitions(len(degrees), n)
    assert len(set(tups)) == len(tups)


def test_pbw_degree_cap(A2):
    # generator degrees 2 and 3: count with total degree <= 4 at n = 2
    capped = verify.pbw_tuples(A2, 2, d_cap=4)
    assert sorted(verify.tuple_degree(A2.degrees, t) for t in capped) == [2, 3, 4]


def test_kac_kazhdan_examples(A1, A2):
    assert not verify.kac_kazhdan_generic(A1, (0,), 0).generic
    res = verify.kac_kazhdan_generic(A1, (0,), -2)
    assert not res.generic and "critical" in res.reason
    lam = (Fraction(1, 3),)
    res = verify.kac_kazhdan_generic(A1, tuple(a - b for a, b in zip(lam, A1.weyl_vector)), -1)
    assert res.generic
    w = verify.kac_kazhdan_generic(A2, (1, 0), Fraction(1, 2))
    assert not w.generic and w.witness[1] == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4),
                min_size=2, max_size=2),
       st.fractions(min_value=-8, max_value=4, max_denominator=3))
def test_kac_kazhdan_matches_brute_force(lam, k):
    rs = build_root_system("A", 2)
    if k + rs.dual_coxeter != 0 and abs(k + rs.dual_coxeter) < Fraction(1, 3):
        return
    assert verify.kac_kazhdan_generic(rs, lam, k).generic == brute_generic(rs, lam, k)


@pytest.mark.parametrize("name", [("A", 1), ("A", 2), ("A", 3), ("D", 4), ("E", 6)])
def test_generic_weights_give_generic_highest_weights(name):
    rs = build_root_system(*name)
    assert verify.check_proposition_generic(rs, trials=100, seed=7).ok


def test_random_generic_weight(A2):
    rng = random.Random(0)
    for _ in range(10):
        lam = verify.random_generic_weight(A2, rng)
        assert verify.integral_pairing_roots(A2, lam) == []


def test_fock_pullback_rho_over_h(A1):
    rep = verify.check_fock_pullback(A1, (Fraction(1, 4),), 5)
    assert rep.ok
    assert rep.params["lowest_eigenvalue"] == "1/16"
    assert all(e["invertible"] for e in rep.entries)


def test_fock_pullback_degenerate(A1, A2):
    for rs in (A1, A2):
        rep = verify.check_fock_pullback(rs, (0,) * rs.rank, 3)
        assert rep.ok
        assert rep.params["first_deficient_level"] == 1


def test_fock_pullback_random_generic(A2):
    rng = random.Random(11)
    gens = walg.choose_generators(A2)
    for _ in range(3):
        lam = verify.random_generic_weight(A2, rng)
        assert verify.check_fock_pullback(A2, lam, 3, gens).ok


@pytest.mark.parametrize("name,n_max", [(("A", 1), 5), (("A", 2), 3)])
def test_main_theorem(name, n_max):
    rep = verify.check_theorem_main(build_root_system(*name), n_max)
    assert rep.ok, rep.entries


def test_report_json_hides_timing(A1):
    rep = verify.check_theorem_main(A1, 2)
    assert "timing" not in rep.to_json()
    assert "timing" in rep.to_json(timing=True)
