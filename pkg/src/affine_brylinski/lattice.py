"""The lattice vertex algebra V_Q: exponential vertex operators, descendant
fields and screening operators.

Basis states are ``(charge, monomial)``; the conformal weight of a state is
``degree(monomial) + |charge|^2 / 2``.  For ``v`` of weight ``wt`` the mode
``v_(n)`` shifts weights by ``wt - n - 1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, Mapping, Sequence, Tuple

from .cartan import RootSystem, cocycle
from .fock import FockElement, gbinom, heisenberg_action
from .graded import (Charge, Monomial, ModeOperator, State, Vector, add_into, degree,
                     insert, merge)


@dataclass(frozen=True)
class LatticeElement:
    terms: Mapping[State, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           {k: Fraction(c) for k, c in sorted(self.terms.items()) if c})

    @classmethod
    def exp(cls, beta: Charge) -> "LatticeElement":
        return cls({(tuple(beta), ()): Fraction(1)})

    @classmethod
    def from_fock(cls, w: FockElement) -> "LatticeElement":
        return cls(w.as_states())

    def weights(self, rs: RootSystem) -> set:
        return {degree(m) + Fraction(rs.norm2(b), 2) for b, m in self.terms}


def weight_of(rs: RootSystem, charge: Charge, mono: Monomial) -> Fraction:
    return degree(mono) + Fraction(rs.norm2(charge), 2)


class LatticeEngine:
    """Memoized vertex-operator actions on V_Q (or on a Fock module when a
    highest weight ``mu`` is supplied and charges stay zero)."""

    def __init__(self, rs: RootSystem, mu: Sequence | None = None):
        self.rs = rs
        self.mu = tuple(Fraction(x) for x in (mu if mu is not None else (0,) * rs.rank))
        self._schur: Dict[Tuple[Charge, int], Dict[Monomial, Fraction]] = {}
        self._memo: Dict[tuple, Vector] = {}

    # -- exponential fields ------------------------------------------------
    def creation_poly(self, beta: Charge, a: int) -> Dict[Monomial, Fraction]:
        """Coefficient of z^a in exp(sum_{k>0} beta(-k) z^k / k), in the boson basis."""
        key = (beta, a)
        if key in self._schur:
            return self._schur[key]
        if a == 0:
            res = {(): Fraction(1)}
        else:
            res: Dict[Monomial, Fraction] = {}
            # a S_a = sum_k beta(-k) S_{a-k}
            for k in range(1, a + 1):
                prev = self.creation_poly(beta, a - k)
                for mono, c in prev.items():
                    for i, bi in enumerate(beta):
                        if bi:
                            add_into(res, insert(mono, (i, k)), c * bi / a)
        self._schur[key] = res
        return res

    def exp_action(self, beta: Charge, n: int, gamma: Charge, mono: Monomial) -> Vector:
        """(1 (x) e^beta)_(n) applied to mono (x) e^gamma."""
        rs = self.rs
        bg = rs.inner(beta, gamma)
        target = tuple(b + g for b, g in zip(beta, gamma))
        sign = cocycle(rs, beta, gamma)
        need = -n - 1 - bg  # required total power of z
        # annihilation half: each factor b_j(-m) becomes b_j(-m) - (beta|alpha_j) z^{-m}
        groups = sorted(Counter(mono).items())
        choices = []
        for (j, m), mult in groups:
            c = -rs.inner(beta, rs.simple_root(j))
            opts = []
            for k in range(mult + 1):
                if k and not c:
                    break
                opts.append((k * m, comb(mult, k) * c ** k, ((j, m),) * (mult - k)))
            choices.append(opts)
        out: Vector = {}
        for combo in product(*choices):
            removed = sum(x[0] for x in combo)
            a = need + removed
            if a < 0:
                continue
            coef = Fraction(sign)
            rest: Monomial = ()
            for _, c, kept in combo:
                coef *= c
                rest += kept
            if not coef:
                continue
            rest = tuple(sorted(rest))
            for cm, x in self.creation_poly(beta, a).items():
                add_into(out, (target, merge(rest, cm)), coef * x)
        return out

    # -- general states ------------------------------------------------------
    def apply(self, charge: Charge, field: Monomial, n: int, gamma: Charge,
              mono: Monomial) -> Vector:
        """(field (x) e^charge)_(n) applied to mono (x) e^gamma, by recursive
        reduction Y(a(-m)u, z) = :d^{(m-1)} a(z) Y(u, z):."""
        key = (charge, field, n, gamma, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        rs = self.rs
        if not field:
            if any(charge):
                res = self.exp_action(charge, n, gamma, mono)
            else:
                res = {(gamma, mono): Fraction(1)} if n == -1 else {}
            self._memo[key] = res
            return res
        i, m = field[0]
        u = field[1:]
        a = rs.simple_root(i)
        res: Vector = {}
        wt_u = degree(u) + Fraction(rs.norm2(charge), 2)
        wt_x = weight_of(rs, gamma, mono)
        tgt = tuple(c + g for c, g in zip(charge, gamma))
        floor_t = Fraction(rs.norm2(tgt), 2)
        # s < 0: a_s u_(n-s-m);  u_(k) vanishes once wt_x + wt_u - k - 1 < floor
        k_max = wt_x + wt_u - 1 - floor_t
        s = -1
        while n - s - m <= k_max:
            cs = gbinom(-s - 1, m - 1)
            if cs:
                for (c2, m2), x in self.apply(charge, u, n - s - m, gamma, mono).items():
                    add_into(res, (c2, insert(m2, (i, -s))), cs * x)
            s -= 1
        # s >= 0: u_(n-s-m) a_s
        for s in range(0, degree(mono) + 1):
            cs = gbinom(-s - 1, m - 1)
            if not cs:
                continue
            for (c2, m2), x in heisenberg_action(rs, a, s, gamma, mono, self.mu).items():
                for k, y in self.apply(charge, u, n - s - m, c2, m2).items():
                    add_into(res, k, cs * x * y)
        self._memo[key] = res
        return res


_ENGINES: Dict[Tuple, LatticeEngine] = {}


def engine(rs: RootSystem, mu: Sequence | None = None) -> LatticeEngine:
    key = (rs.family, rs.rank, tuple(Fraction(x) for x in (mu or (0,) * rs.rank)))
    if key not in _ENGINES:
        _ENGINES[key] = LatticeEngine(rs, key[2])
    return _ENGINES[key]


def exp_vertex_mode(rs: RootSystem, beta: Sequence[int], n: int) -> ModeOperator:
    """(1 (x) e^beta)_(n) on V_Q."""
    beta = tuple(int(x) for x in beta)
    eng = engine(rs)

    def action(gamma, mono):
        return eng.exp_action(beta, n, gamma, mono)

    return ModeOperator(f"e^{beta}_({n})", rs.rank, action, beta,
                        Fraction(rs.norm2(beta), 2) - n - 1, rs.norm2, Fraction(n))


def descendant_mode(rs: RootSystem, v: LatticeElement | FockElement, n: int,
                    mu: Sequence | None = None) -> ModeOperator:
    """v_(n) for a homogeneous state v of V_Q, reduced to generating fields."""
    if isinstance(v, FockElement):
        v = LatticeElement.from_fock(v)
    weights = v.weights(rs)
    charges = {b for b, _ in v.terms}
    if len(weights) != 1 or len(charges) != 1:
        raise ValueError("descendant_mode needs a homogeneous state of one charge")
    wt = weights.pop()
    charge = charges.pop()
    eng = engine(rs, mu)
    terms = [(m, c) for (_, m), c in v.terms.items()]

    def action(gamma, mono):
        out: Vector = {}
        for fld, c in terms:
            for k, x in eng.apply(charge, fld, n, gamma, mono).items():
                add_into(out, k, c * x)
        return out

    return ModeOperator(f"v_({n})", rs.rank, action, charge, wt - n - 1, rs.norm2,
                        Fraction(n))


def screening_zero_mode(rs: RootSystem, i: int) -> ModeOperator:
    """(1 (x) e^{-alpha_i})_(0); weight preserving since |alpha_i|^2/2 = 1."""
    beta = tuple(-int(j == i) for j in range(rs.rank))
    op = exp_vertex_mode(rs, beta, 0)
    op.name = f"S_{i + 1}"
    return op
