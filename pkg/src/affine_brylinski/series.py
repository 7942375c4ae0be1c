"""Truncated power series in ``q`` and ``(t, q)`` with exact rational coefficients.

A fractional leading power (as in Verma characters) is kept apart from the
integer-exponent mantissa as an exact ``offset``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple

from .cartan import RootSystem, WeightVector
from .serialize import qstr


class CriticalLevelError(ValueError):
    pass


@dataclass(frozen=True)
class QTSeries:
    coeffs: Mapping[Tuple[int, int], Fraction]
    T: int
    N: int
    offset: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        clean = {}
        for (t, q), c in self.coeffs.items():
            c = Fraction(c)
            if c and 0 <= t <= self.T and 0 <= q <= self.N:
                clean[(t, q)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "offset", Fraction(self.offset))

    @classmethod
    def one(cls, T: int, N: int) -> "QTSeries":
        return cls({(0, 0): Fraction(1)}, T, N)

    @classmethod
    def monomial(cls, t: int, q: int, T: int, N: int, c=1) -> "QTSeries":
        return cls({(t, q): Fraction(c)}, T, N)

    def _check(self, other: "QTSeries") -> Tuple[int, int]:
        return min(self.T, other.T), min(self.N, other.N)

    def __add__(self, other: "QTSeries") -> "QTSeries":
        if self.offset != other.offset:
            raise ValueError("cannot add series with different q-offsets")
        T, N = self._check(other)
        out: Dict[Tuple[int, int], Fraction] = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return QTSeries(out, T, N, self.offset)

    def __neg__(self) -> "QTSeries":
        return QTSeries({k: -c for k, c in self.coeffs.items()}, self.T, self.N, self.offset)

    def __sub__(self, other: "QTSeries") -> "QTSeries":
        return self + (-other)

    def __mul__(self, other: "QTSeries") -> "QTSeries":
        T, N = self._check(other)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (t1, q1), c1 in self.coeffs.items():
            if t1 > T or q1 > N:
                continue
            for (t2, q2), c2 in other.coeffs.items():
                t, q = t1 + t2, q1 + q2
                if t <= T and q <= N:
                    out[(t, q)] = out.get((t, q), 0) + c1 * c2
        return QTSeries(out, T, N, self.offset + other.offset)

    def inverse(self) -> "QTSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.coeffs.get((0, 0), 0)
        if not c0:
            raise ZeroDivisionError("series is not a unit (zero constant term)")
        # solve inv * self = 1 degree by degree in (q, t) lexicographic order
        inv: Dict[Tuple[int, int], Fraction] = {}
        terms = [(k, c) for k, c in self.coeffs.items() if k != (0, 0)]
        for q in range(self.N + 1):
            for t in range(self.T + 1):
                acc = Fraction(int((t, q) == (0, 0)))
                for (dt, dq), c in terms:
                    prev = inv.get((t - dt, q - dq))
                    if prev:
                        acc -= c * prev
                if acc:
                    inv[(t, q)] = acc / c0
        return QTSeries(inv, self.T, self.N, -self.offset)

    def coefficient(self, t: int, q: int) -> Fraction:
        return self.coeffs.get((t, q), Fraction(0))

    def q_row(self, q: int) -> Dict[int, Fraction]:
        """Coefficient of ``q**q`` as a ``{t_exponent: coefficient}`` dict."""
        return {t: c for (t, qq), c in self.coeffs.items() if qq == q}

    def at_t_equals_one(self) -> "QTSeries":
        out: Dict[Tuple[int, int], Fraction] = {}
        for (t, q), c in self.coeffs.items():
            out[(0, q)] = out.get((0, q), 0) + c
        return QTSeries(out, 0, self.N, self.offset)

    def q_list(self) -> list:
        """Mantissa coefficients ``[c_0, ..., c_N]`` of a pure q-series."""
        if any(t for t, _ in self.coeffs):
            raise ValueError("series depends on t; specialize first")
        return [self.coefficient(0, q) for q in range(self.N + 1)]

    def to_triples(self) -> list:
        return [[t, q, qstr(c)] for (t, q), c in self.coeffs.items()]

    def to_json(self) -> dict:
        return {"T": self.T, "N": self.N, "offset": qstr(self.offset),
                "terms": self.to_triples()}

    @classmethod
    def from_json(cls, d: dict) -> "QTSeries":
        return cls({(int(t), int(q)): Fraction(c) for t, q, c in d["terms"]},
                   int(d["T"]), int(d["N"]), Fraction(d["offset"]))


def euler_product(parts: Iterable[Tuple[int, int]], T: int, N: int) -> QTSeries:
    """prod over (t_weight, q_weight) of 1 / (1 - t^tw q^qw), truncated."""
    coeffs: Dict[Tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    for tw, qw in parts:
        if qw > N or tw > T:
            continue
        # multiply by the geometric series in place, ascending order
        for q in range(qw, N + 1):
            for t in range(tw, T + 1):
                prev = coeffs.get((t - tw, q - qw))
                if prev:
                    coeffs[(t, q)] = coeffs.get((t, q), 0) + prev
    return QTSeries(coeffs, T, N)


def hilbert_grZ(rs: RootSystem, T: int, N: int) -> QTSeries:
    """prod_k prod_{n>=1} (1 - t^{d_k} q^n)^{-1} to orders (T, N)."""
    if T < 0 or N < 0:
        raise ValueError("truncation orders must be nonnegative")
    return euler_product(((d, n) for d in rs.degrees for n in range(1, N + 1)), T, N)


def inverse_phi_power(ell: int, N: int) -> QTSeries:
    """1 / phi(q)^ell with phi(q) = prod (1 - q^n)."""
    return euler_product(((0, n) for _ in range(ell) for n in range(1, N + 1)), 0, N)


def central_charge(rs: RootSystem, k) -> Fraction:
    k = Fraction(k)
    kh = k + rs.dual_coxeter
    if kh == 0:
        raise CriticalLevelError("critical level k = -h^vee has no conformal vector")
    r2 = Fraction(rs.norm2(rs.weyl_vector))
    return rs.rank - 12 * (kh * r2 - 2 * r2 + r2 / kh)


def verma_character(rs: RootSystem, lam: WeightVector, k, N: int) -> QTSeries:
    k = Fraction(k)
    kh = k + rs.dual_coxeter
    if kh == 0:
        raise CriticalLevelError("critical level k = -h^vee")
    lr = lam.to_root(rs).coords
    shifted = [a + b for a, b in zip(lr, rs.weyl_vector)]
    offset = Fraction(rs.norm2(shifted)) / (2 * kh) + (central_charge(rs, k) - rs.rank) / 24
    base = inverse_phi_power(rs.rank, N)
    return QTSeries(base.coeffs, 0, N, offset)


def w_vacuum_character(rs: RootSystem, N: int) -> QTSeries:
    """Character of the vertex algebra freely generated in degrees d_k."""
    return euler_product(((0, n) for d in rs.degrees for n in range(d, N + 1)), 0, N)


def principal_character(rs: RootSystem, N: int) -> QTSeries:
    """Principally specialized character of the basic representation:
    prod over affine exponents m (m = e_k mod h) of 1/(1 - q^m)."""
    h = rs.coxeter_number
    parts = [(0, m) for e in rs.exponents for m in range(e, N + 1, h)]
    return euler_product(parts, 0, N)


@lru_cache(maxsize=None)
def colored_partitions(ell: int, n: int) -> int:
    """Number of ell-colored partitions of n (independent recursion)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    # n p(n) = sum_{k>=1} sigma(k) ell p(n-k)
    total = 0
    for k in range(1, n + 1):
        sigma = sum(d for d in range(1, k + 1) if k % d == 0)
        total += ell * sigma * colored_partitions(ell, n - k)
    assert total % n == 0
    return total // n
