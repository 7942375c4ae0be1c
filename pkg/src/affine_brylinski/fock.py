"""Heisenberg Fock modules: mode actions, normal-ordered products, Sugawara vector.

Bosons are the simple roots: ``b_i = alpha_i`` with ``[b_i(m), b_j(n)] =
m delta_{m+n,0} (alpha_i | alpha_j) k``.  A vector ``h`` of the Cartan
subalgebra is a coordinate tuple in this basis.  Zero modes act on a state of
lattice charge ``beta`` in the module of highest weight ``mu`` by
``(mu + beta | h)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from .cartan import RootSystem, WeightVector
from .graded import (Charge, Monomial, ModeOperator, Vector, add_into, degree,
                     fock_basis, insert, remove_one)

QVec = Tuple[Fraction, ...]


def gbinom(a: int, k: int) -> Fraction:
    """Generalized binomial coefficient a(a-1)...(a-k+1)/k! for integer a."""
    if k < 0:
        return Fraction(0)
    num = 1
    for j in range(k):
        num *= a - j
    return Fraction(num, factorial(k))


@dataclass(frozen=True)
class FockElement:
    level: Fraction
    weight: QVec
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           {m: Fraction(c) for m, c in sorted(self.terms.items()) if c})
        object.__setattr__(self, "level", Fraction(self.level))
        object.__setattr__(self, "weight", tuple(Fraction(x) for x in self.weight))

    @property
    def conformal_degree(self) -> int | None:
        degs = {degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def as_states(self, charge: Charge | None = None) -> Vector:
        charge = charge if charge is not None else tuple(0 for _ in self.weight)
        return {(charge, m): c for m, c in self.terms.items()}

    def __add__(self, other: "FockElement") -> "FockElement":
        if (self.level, self.weight) != (other.level, other.weight):
            raise ValueError("elements live in different Fock modules")
        out = dict(self.terms)
        for m, c in other.terms.items():
            add_into(out, m, c)
        return FockElement(self.level, self.weight, out)

    def scale(self, c) -> "FockElement":
        return FockElement(self.level, self.weight,
                           {m: x * Fraction(c) for m, x in self.terms.items()})


# ---------------------------------------------------------------------------
# single-mode actions on basis states

def _pair(rs: RootSystem, h: Sequence, i: int) -> Fraction:
    """(h | alpha_i)."""
    g = rs.gram
    return sum(Fraction(h[j]) * g[j][i] for j in range(rs.rank) if h[j])


def create(rs: RootSystem, h: Sequence, n: int, charge: Charge, mono: Monomial) -> Vector:
    """h(-n), n >= 1."""
    return {(charge, insert(mono, (i, n))): Fraction(h[i]) for i in range(rs.rank) if h[i]}


def annihilate(rs: RootSystem, h: Sequence, m: int, charge: Charge, mono: Monomial,
               level=1) -> Vector:
    """h(m), m >= 1: contract against each factor b_j(-m)."""
    out: Vector = {}
    for (j, n), cnt in Counter(mono).items():
        if n != m:
            continue
        c = _pair(rs, h, j) * m * cnt * Fraction(level)
        if c:
            add_into(out, (charge, remove_one(mono, (j, n))), c)
    return out


def zero_mode_value(rs: RootSystem, h: Sequence, charge: Charge, mu: Sequence) -> Fraction:
    return sum(_pair(rs, h, i) * (Fraction(charge[i]) + Fraction(mu[i])) for i in range(rs.rank))


def heisenberg_action(rs: RootSystem, h: Sequence, s: int, charge: Charge, mono: Monomial,
                      mu: Sequence, level=1) -> Vector:
    if s < 0:
        return create(rs, h, -s, charge, mono)
    if s > 0:
        return annihilate(rs, h, s, charge, mono, level)
    c = zero_mode_value(rs, h, charge, mu)
    return {(charge, mono): c} if c else {}


def heisenberg_mode(rs: RootSystem, h: WeightVector | Sequence, s: int,
                    mu: Sequence | None = None, level=1) -> ModeOperator:
    """The operator ``h t^s`` on the Fock module of highest weight ``mu``
    (on the lattice algebra when ``mu`` is zero and charges vary)."""
    hv = h.to_root(rs).coords if isinstance(h, WeightVector) else tuple(Fraction(x) for x in h)
    mu = tuple(Fraction(x) for x in (mu or (0,) * rs.rank))

    def action(charge, mono):
        return heisenberg_action(rs, hv, s, charge, mono, mu, level)

    return ModeOperator(f"h_{s}", rs.rank, action, (0,) * rs.rank, Fraction(-s),
                        rs.norm2, Fraction(s))


# ---------------------------------------------------------------------------
# normal-ordered products of free fields

def _compositions(total: int, k: int) -> Iterator[Tuple[int, ...]]:
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def field_monomial_mode(rs: RootSystem, field: Monomial, N: int, charge: Charge,
                        mono: Monomial, mu: Sequence) -> Dict[Monomial, Fraction]:
    """Mode ``(N)`` of Y(field, z) on one basis state, by full normal ordering.

    ``Y(b_{i_1}(-n_1)...b_{i_r}(-n_r)|0>, z) = : prod_j d^{(n_j-1)} b_{i_j}(z) :``
    whose ``(N)`` mode is the sum over ``s_1 + ... + s_r = N + 1 - wt`` of
    ``prod_j binom(-s_j-1, n_j-1) : prod_j b_{i_j}(s_j) :``.
    """
    wt = degree(field)
    S = N + 1 - wt
    r = len(field)
    zero = [zero_mode_value(rs, rs.simple_root(i), charge, mu) for i in range(rs.rank)]
    g = rs.gram
    out: Dict[Monomial, Fraction] = {}
    avail = Counter(mono)

    def rec(j: int, coef: Fraction, remaining: Counter, used: int, creators: List[int]):
        if not coef:
            return
        if j == r:
            total = -(S - used)  # sum of creation mode sizes
            k = len(creators)
            if k == 0:
                if total != 0:
                    return
                key = tuple(sorted(remaining.elements()))
                add_into(out, key, coef)
                return
            if total < k:
                return
            base = tuple(sorted(remaining.elements()))
            for comp in _compositions(total, k):
                c = coef
                new = base
                for idx, size in zip(creators, comp):
                    i, n = field[idx]
                    c *= comb(size - 1, n - 1)
                    if not c:
                        break
                    new = insert(new, (i, size))
                if c:
                    add_into(out, new, c)
            return
        i, n = field[j]
        # zero mode
        if zero[i]:
            rec(j + 1, coef * zero[i] * (-1) ** (n - 1), remaining, used, creators)
        # annihilation by a factor present in the state
        for (jj, s), cnt in list(remaining.items()):
            if cnt <= 0 or not g[i][jj]:
                continue
            c = coef * cnt * s * g[i][jj] * gbinom(-s - 1, n - 1)
            remaining[(jj, s)] -= 1
            rec(j + 1, c, remaining, used + s, creators)
            remaining[(jj, s)] += 1
        # creation, sizes fixed at the end
        rec(j + 1, coef, remaining, used, creators + [j])

    rec(0, Fraction(1), avail, 0, [])
    # drop zero-count keys hidden in Counter.elements (none by construction)
    return out


def state_mode_action(rs: RootSystem, terms: Mapping[Monomial, Fraction], N: int,
                      charge: Charge, mono: Monomial, mu: Sequence) -> Vector:
    out: Vector = {}
    for fld, c in terms.items():
        for m, x in field_monomial_mode(rs, fld, N, charge, mono, mu).items():
            add_into(out, (charge, m), c * x)
    return out


def state_mode(rs: RootSystem, w: FockElement, N: int, mu: Sequence | None = None) -> ModeOperator:
    """Mode ``w_(N)`` of a homogeneous Heisenberg state on a Fock module
    (``mu`` = highest weight; lattice charges add to the zero-mode weight)."""
    d = w.conformal_degree
    if d is None:
        raise ValueError("state must be homogeneous")
    mu = tuple(Fraction(x) for x in (mu if mu is not None else (0,) * rs.rank))
    terms = dict(w.terms)

    def action(charge, mono):
        return state_mode_action(rs, terms, N, charge, mono, mu)

    return ModeOperator(f"w_({N})", rs.rank, action, (0,) * rs.rank,
                        Fraction(d - N - 1), rs.norm2, Fraction(N))


# ---------------------------------------------------------------------------
# Sugawara / Virasoro

def sugawara_vector(rs: RootSystem) -> FockElement:
    """(1/2) sum_ij (G^-1)_ij b_i(-1) b_j(-1)|0>, level 1."""
    gi = rs.gram_inverse
    terms: Dict[Monomial, Fraction] = {}
    for i in range(rs.rank):
        for j in range(rs.rank):
            if gi[i][j]:
                add_into(terms, tuple(sorted(((i, 1), (j, 1)))), gi[i][j] / 2)
    return FockElement(1, (0,) * rs.rank, terms)


def sugawara_mode(rs: RootSystem, n: int, mu: Sequence | None = None) -> ModeOperator:
    """L_n = (1/2) sum_ij G^ij sum_s :b_i(s) b_j(n-s): from the explicit formula."""
    gi = rs.gram_inverse
    mu = tuple(Fraction(x) for x in (mu if mu is not None else (0,) * rs.rank))
    ell = rs.rank
    basis_vecs = [rs.simple_root(i) for i in range(ell)]

    def one(i, s, charge, mono):
        return heisenberg_action(rs, basis_vecs[i], s, charge, mono, mu)

    def action(charge, mono):
        out: Vector = {}
        bound = degree(mono) + abs(n) + 1
        for i in range(ell):
            for j in range(ell):
                c = gi[i][j]
                if not c:
                    continue
                for s in range(-bound, bound + 1):
                    t = n - s
                    # normal order: the annihilating (larger) mode acts first
                    first, second = ((i, s), (j, t)) if s >= t else ((j, t), (i, s))
                    mid = one(first[0], first[1], charge, mono)
                    for (c2, m2), x in mid.items():
                        for k, y in one(second[0], second[1], c2, m2).items():
                            add_into(out, k, c * x * y / 2)
        return out

    return ModeOperator(f"L_{n}", ell, action, (0,) * ell, Fraction(-n), rs.norm2, Fraction(n))


def virasoro_mode(rs: RootSystem, omega: FockElement, n: int,
                  mu: Sequence | None = None) -> ModeOperator:
    """omega_n in the convention Y(omega, z) = sum omega_n z^{-n-2}."""
    if omega.conformal_degree != 2:
        raise ValueError("a Virasoro field needs a weight-2 state")
    op = state_mode(rs, omega, n + 1, mu)
    op.name = f"L_{n}"
    op.index = Fraction(n)
    return op


def fock_dimension(ell: int, s: int) -> int:
    return len(fock_basis(ell, s))
