"""Exact linear algebra over Q for sparse rational matrices.

Matrices are lists of sparse rows ``{column: Fraction}``.  Reduction runs over
word-size primes; the rational row echelon data is lifted by CRT and rational
reconstruction and then checked exactly against the input, which certifies
both the rank and the pivot columns:

* a rank mod p never exceeds the rank over Q (lower bound);
* ``ncols - rank_p`` verified kernel vectors bound the rank from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from . import _backend

Row = Mapping[int, Fraction]
SparseVec = Dict[int, Fraction]

# below this many entries a plain Fraction elimination is cheaper
SMALL = 600
MAX_PRIMES = 60


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes() -> List[int]:
    out, p = [], (1 << 31) - 1
    while len(out) < MAX_PRIMES:
        if _is_prime(p):
            out.append(p)
        p -= 2
    return out


PRIMES = _primes()


class ReconstructionError(RuntimeError):
    pass


def integer_rows(rows: Sequence[Row]) -> List[Dict[int, int]]:
    """Scale each row by the lcm of its denominators (kernel unchanged)."""
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            d = Fraction(v).denominator
            den = den * d // math.gcd(den, d)
        irow = {c: int(Fraction(v) * den) for c, v in row.items() if v}
        g = 0
        for v in irow.values():
            g = math.gcd(g, v)
        if g > 1:
            irow = {c: v // g for c, v in irow.items()}
        if irow:
            out.append(irow)
    return out


def _dense_mod(irows: Sequence[Mapping[int, int]], ncols: int, p: int) -> np.ndarray:
    a = np.zeros((len(irows), ncols), dtype=np.int64)
    for i, row in enumerate(irows):
        for c, v in row.items():
            a[i, c] = v % p
    return a


def ratrecon(a: int, m: int) -> Fraction | None:
    """r/s with r/s = a mod m and |r|, s <= sqrt(m/2), or None."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


@dataclass
class Reduction:
    ncols: int
    pivots: List[int]
    kernel: List[SparseVec]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref_fraction(rows: Sequence[Row], ncols: int) -> Tuple[List[SparseVec], List[int]]:
    """Reduced row echelon form with Fraction arithmetic (small inputs, oracle)."""
    work = [{c: Fraction(v) for c, v in row.items() if v} for row in rows]
    work = [r for r in work if r]
    pivots: List[int] = []
    done: List[SparseVec] = []
    for c in range(ncols):
        idx = next((i for i, r in enumerate(work) if c in r), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = 1 / prow[c]
        prow = {k: v * inv for k, v in prow.items()}
        for group in (work, done):
            for i, r in enumerate(group):
                f = r.get(c)
                if f:
                    nr = dict(r)
                    for k, v in prow.items():
                        x = nr.get(k, 0) - f * v
                        if x:
                            nr[k] = x
                        else:
                            nr.pop(k, None)
                    group[i] = nr
        work = [r for r in work if r]
        done.append(prow)
        pivots.append(c)
    return done, pivots


def _kernel_from_rref(rref: Sequence[Mapping[int, Fraction]], pivots: Sequence[int],
                      ncols: int) -> List[SparseVec]:
    pivset = set(pivots)
    kernel = []
    for f in range(ncols):
        if f in pivset:
            continue
        v: SparseVec = {f: Fraction(1)}
        for row, pc in zip(rref, pivots):
            x = row.get(f)
            if x:
                v[pc] = -Fraction(x)
        kernel.append(v)
    return kernel


def _verify(irows: Sequence[Mapping[int, int]], kernel: Sequence[SparseVec]) -> bool:
    for v in kernel:
        den = 1
        for x in v.values():
            den = den * x.denominator // math.gcd(den, x.denominator)
        iv = {c: int(x * den) for c, x in v.items()}
        for row in irows:
            if len(row) <= len(iv):
                s = sum(a * iv.get(c, 0) for c, a in row.items())
            else:
                s = sum(b * row.get(c, 0) for c, b in iv.items())
            if s:
                return False
    return True


def reduce(rows: Sequence[Row], ncols: int) -> Reduction:
    """Certified pivot columns and kernel basis of a rational matrix."""
    irows = integer_rows(rows)
    if not irows:
        return Reduction(ncols, [], [{c: Fraction(1)} for c in range(ncols)])
    if len(irows) * ncols <= SMALL:
        rref, piv = rref_fraction([{c: Fraction(v) for c, v in r.items()} for r in irows], ncols)
        return Reduction(ncols, piv, _kernel_from_rref(rref, piv, ncols))
    best_rank = -1
    best_piv: List[int] = []
    residues: List[int] = []
    modulus = 1
    free: List[int] = []
    for p in PRIMES:
        a = _dense_mod(irows, ncols, p)
        piv = _backend.rref_mod(a, p)
        if len(piv) < best_rank:
            continue  # unlucky prime
        if len(piv) > best_rank or piv != best_piv:
            best_rank, best_piv = len(piv), list(piv)
            pivset = set(piv)
            free = [c for c in range(ncols) if c not in pivset]
            if not free:
                return Reduction(ncols, best_piv, [])
            residues = [int(x) for x in a[:best_rank][:, free].ravel()]
            modulus = p
        else:
            new = a[:best_rank][:, free].ravel()
            inv = pow(modulus, -1, p)
            residues = [x + modulus * (((int(y) - x) * inv) % p) for x, y in zip(residues, new)]
            modulus *= p
        values = []
        for x in residues:
            q = ratrecon(x, modulus)
            if q is None:
                break
            values.append(q)
        else:
            nf = len(free)
            rref = [{free[j]: values[i * nf + j] for j in range(nf) if values[i * nf + j]}
                    for i in range(best_rank)]
            kernel = _kernel_from_rref(rref, best_piv, ncols)
            if _verify(irows, kernel):
                return Reduction(ncols, best_piv, kernel)
    raise ReconstructionError(f"no certified reduction after {len(PRIMES)} primes")


def nullspace(rows: Sequence[Row], ncols: int) -> List[SparseVec]:
    return reduce(rows, ncols).kernel


def transpose(vectors: Sequence[Row]) -> Dict[int, SparseVec]:
    out: Dict[int, SparseVec] = {}
    for i, v in enumerate(vectors):
        for c, x in v.items():
            if x:
                out.setdefault(c, {})[i] = Fraction(x)
    return out


def rank(rows: Sequence[Row], ncols: int | None = None) -> int:
    rows = [r for r in rows if any(r.values())]
    if not rows:
        return 0
    if ncols is None:
        ncols = 1 + max(c for r in rows for c in r)
    if len(rows) < ncols:
        # reduce the transpose: fewer columns, smaller reconstruction
        cols = transpose(rows)
        trows = [cols[c] for c in sorted(cols)]
        return reduce(trows, len(rows)).rank
    return reduce(rows, ncols).rank


def independent_columns(vectors: Sequence[Row], dim: int) -> List[int]:
    """Indices of the greedy (leftmost) maximal independent subfamily."""
    if not vectors:
        return []
    cols = transpose(vectors)
    trows = [cols[c] for c in sorted(cols)]
    return reduce(trows, len(vectors)).pivots


def span_contains(big: Sequence[Row], small: Sequence[Row]) -> bool:
    """True when span(small) is a subspace of span(big)."""
    if not any(any(v.values()) for v in small):
        return True
    return rank(list(big) + list(small)) == rank(big)


def annihilator(vectors: Sequence[Row], dim: int) -> List[SparseVec]:
    """Basis of the functionals vanishing on span(vectors)."""
    return nullspace(vectors, dim)


def intersection_dim(a: Sequence[Row], b: Sequence[Row]) -> int:
    return rank(a) + rank(b) - rank(list(a) + list(b))


def apply_rows(rows: Sequence[Row], v: Row) -> SparseVec:
    """Matrix (given by rows) times sparse vector."""
    out: SparseVec = {}
    for i, row in enumerate(rows):
        s = sum(x * v.get(c, 0) for c, x in row.items())
        if s:
            out[i] = s
    return out


def random_combination(vectors: Sequence[Row], rng) -> SparseVec:
    out: SparseVec = {}
    for v in vectors:
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        for k, x in v.items():
            out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x}


def dense(v: Row, dim: int) -> List[Fraction]:
    return [Fraction(v.get(i, 0)) for i in range(dim)]


def as_sparse(values: Iterable) -> SparseVec:
    return {i: Fraction(x) for i, x in enumerate(values) if x}
