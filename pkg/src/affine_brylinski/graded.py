"""Graded bases of Fock spaces and blockwise mode operators.

A Fock monomial is a sorted tuple of ``(boson, mode)`` pairs, ``boson`` a
0-based simple-root index and ``mode`` the positive integer ``n`` of the
creation operator ``b_boson(-n)``.  A basis state of the lattice algebra is
``(charge, monomial)`` with ``charge`` an integer tuple in the root basis.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Tuple

Monomial = Tuple[Tuple[int, int], ...]
Charge = Tuple[int, ...]
State = Tuple[Charge, Monomial]
Vector = Dict[State, Fraction]
Component = Tuple[Charge, int]

MAX_BASIS = 50000


class ResourceLimitError(RuntimeError):
    """Raised when a requested graded piece exceeds the configured size limit."""


def degree(mono: Monomial) -> int:
    return sum(n for _, n in mono)


def _parts(ell: int, s: int, max_part: Tuple[int, int]) -> List[List[Tuple[int, int]]]:
    if s == 0:
        return [[]]
    out = []
    n_hi, i_hi = max_part
    for n in range(min(n_hi, s), 0, -1):
        for i in range(ell - 1, -1, -1):
            if (n, i) > (n_hi, i_hi):
                continue
            for rest in _parts(ell, s - n, (n, i)):
                out.append([(i, n)] + rest)
    return out


@lru_cache(maxsize=None)
def fock_basis(ell: int, s: int) -> Tuple[Monomial, ...]:
    """All monomials of degree ``s`` in sorted order (cached, deterministic)."""
    if s < 0:
        return ()
    from .series import colored_partitions
    if colored_partitions(ell, s) > MAX_BASIS:
        raise ResourceLimitError(
            f"Fock degree {s} with {ell} bosons has {colored_partitions(ell, s)} states "
            f"(limit {MAX_BASIS})")
    monos = {tuple(sorted(p)) for p in _parts(ell, s, (s, ell - 1))}
    return tuple(sorted(monos))


@lru_cache(maxsize=None)
def fock_index(ell: int, s: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(fock_basis(ell, s))}


def insert(mono: Monomial, factor: Tuple[int, int]) -> Monomial:
    lst = list(mono)
    lo, hi = 0, len(lst)
    while lo < hi:
        mid = (lo + hi) // 2
        if lst[mid] < factor:
            lo = mid + 1
        else:
            hi = mid
    lst.insert(lo, factor)
    return tuple(lst)


def merge(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def remove_one(mono: Monomial, factor: Tuple[int, int]) -> Monomial:
    i = mono.index(factor)
    return mono[:i] + mono[i + 1:]


def add_into(acc: Dict, key, c) -> None:
    x = acc.get(key, 0) + c
    if x:
        acc[key] = x
    else:
        acc.pop(key, None)


def clean(v: Mapping) -> Dict:
    return {k: Fraction(c) for k, c in v.items() if c}


Action = Callable[[Charge, Monomial], Mapping[State, Fraction]]


class ModeOperator:
    """A graded operator given blockwise by exact sparse matrices.

    ``action(charge, monomial)`` returns the image of one basis state.  The
    operator shifts lattice charge by ``charge_shift`` and Fock-space weight
    (conformal weight of the component) by ``weight_shift``; both are checked
    on every computed block.
    """

    def __init__(self, name: str, ell: int, action: Action, charge_shift: Charge,
                 weight_shift: Fraction, norm2: Callable[[Charge], Fraction],
                 index: Fraction = Fraction(0)):
        self.name = name
        self.ell = ell
        self.action = action
        self.charge_shift = tuple(charge_shift)
        self.weight_shift = Fraction(weight_shift)
        self.index = Fraction(index)
        self._norm2 = norm2
        self._blocks: Dict[Component, Tuple[Component, List[Dict[int, Fraction]]]] = {}
        self._lock = threading.Lock()

    def target(self, comp: Component) -> Component | None:
        charge, s = comp
        tc = tuple(a + b for a, b in zip(charge, self.charge_shift))
        w = s + Fraction(self._norm2(charge), 2) + self.weight_shift
        ts = w - Fraction(self._norm2(tc), 2)
        if ts.denominator != 1:
            raise ValueError(f"{self.name}: non-integral target degree from {comp}")
        return (tc, int(ts)) if ts >= 0 else None

    def block(self, comp: Component) -> Tuple[Component | None, List[Dict[int, Fraction]]]:
        """(target component, columns) with column j the image of basis state j."""
        if comp in self._blocks:
            return self._blocks[comp]
        charge, s = comp
        tgt = self.target(comp)
        cols: List[Dict[int, Fraction]] = []
        tindex = fock_index(self.ell, tgt[1]) if tgt is not None else {}
        for mono in fock_basis(self.ell, s):
            img = self.action(charge, mono)
            col: Dict[int, Fraction] = {}
            for (c2, m2), x in img.items():
                if tgt is None or c2 != tgt[0] or degree(m2) != tgt[1]:
                    raise AssertionError(
                        f"{self.name}: weight bookkeeping violated mapping {comp} to {(c2, degree(m2))}")
                col[tindex[m2]] = Fraction(x)
            cols.append(col)
        with self._lock:
            self._blocks.setdefault(comp, (tgt, cols))
        return self._blocks[comp]

    def apply(self, v: Mapping[State, Fraction]) -> Vector:
        out: Vector = {}
        for (charge, mono), c in v.items():
            for k, x in self.action(charge, mono).items():
                add_into(out, k, c * x)
        return out

    def matrix_rows(self, comp: Component) -> List[Dict[int, Fraction]]:
        """Block as sparse rows (target index -> {source index: value})."""
        tgt, cols = self.block(comp)
        nrows = len(fock_basis(self.ell, tgt[1])) if tgt else 0
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                rows[i][j] = x
        return rows


def combine(*terms: Tuple[Fraction, ModeOperator], name: str = "combination") -> ModeOperator:
    """Linear combination of operators with identical grading shifts."""
    first = terms[0][1]
    for _, op in terms:
        if op.charge_shift != first.charge_shift or op.weight_shift != first.weight_shift:
            raise ValueError("cannot combine operators with different shifts")

    def action(charge, mono):
        out: Vector = {}
        for c, op in terms:
            for k, x in op.action(charge, mono).items():
                add_into(out, k, c * x)
        return out

    return ModeOperator(name, first.ell, action, first.charge_shift, first.weight_shift,
                        first._norm2, first.index)


def to_json_block(rows: List[Dict[int, Fraction]]) -> list:
    from .serialize import qstr
    return [[[j, qstr(x)] for j, x in sorted(r.items())] for r in rows]
