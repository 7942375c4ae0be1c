"""Simply-laced root data, weights and Chevalley structure constants.

Weights are stored in the simple-root basis; ``(a | b)`` is computed with the
Cartan matrix, which equals the Gram matrix once ``(alpha_i | alpha_i) = 2``.
In this normalization the Weyl covector equals the Weyl vector, so every
formula that calls for the half-sum of positive coroots uses ``weyl_vector``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

Vec = Tuple[int, ...]
QVec = Tuple[Fraction, ...]

SUPPORTED = "A_l (l>=1), D_l (l>=4), E_6, E_7, E_8"


class UnsupportedRootSystem(ValueError):
    pass


def cartan_matrix(family: str, rank: int) -> List[List[int]]:
    """Cartan matrix in Bourbaki numbering (0-based indices)."""
    family = family.upper()
    if rank < 1:
        raise UnsupportedRootSystem(f"rank must be positive, got {rank}")
    edges: List[Tuple[int, int]]
    if family == "A":
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif family == "D":
        if rank < 4:
            raise UnsupportedRootSystem(f"D_{rank} is not supported; use {SUPPORTED}")
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    elif family == "E":
        if rank not in (6, 7, 8):
            raise UnsupportedRootSystem(f"E_{rank} is not supported; use {SUPPORTED}")
        # 1-3-4-5-6-7-8 chain with 2 attached to 4
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, rank - 1)]
    else:
        raise UnsupportedRootSystem(f"unknown family {family!r}; use {SUPPORTED}")
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    return a


def _positive_roots(cm: Sequence[Sequence[int]]) -> List[Vec]:
    rank = len(cm)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    roots = list(simple)
    seen = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(rank):
                ip = sum(beta[j] * cm[j][i] for j in range(rank))
                if ip == -1:
                    gamma = tuple(b + (j == i) for j, b in enumerate(beta))
                    if gamma not in seen:
                        seen.add(gamma)
                        nxt.append(gamma)
        nxt.sort(key=lambda v: tuple(-x for x in v))
        roots.extend(nxt)
        layer = nxt
    return roots


def _inverse(m: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Vec, ...]
    degrees: Tuple[int, ...]
    exponents: Tuple[int, ...]
    coxeter_number: int
    dual_coxeter: int
    weyl_vector: QVec
    gram: Tuple[Tuple[int, ...], ...]

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @cached_property
    def roots(self) -> Tuple[Vec, ...]:
        neg = tuple(tuple(-x for x in r) for r in self.positive_roots)
        return self.positive_roots + neg

    @cached_property
    def root_index(self) -> Dict[Vec, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def gram_inverse(self) -> Tuple[QVec, ...]:
        return tuple(tuple(row) for row in _inverse(self.gram))

    @cached_property
    def highest_root(self) -> Vec:
        return max(self.positive_roots, key=sum)

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.root_index

    def inner(self, a: Sequence, b: Sequence):
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) for j in range(self.rank)
                   if a[i] and b[j])

    def norm2(self, a: Sequence):
        return self.inner(a, a)

    def height(self, v: Sequence) -> int:
        return sum(v)

    def simple_root(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.rank))

    def fundamental_weight(self, i: int) -> QVec:
        return tuple(self.gram_inverse[j][i] for j in range(self.rank))

    def to_json(self) -> dict:
        from .serialize import qstr
        return {
            "family": self.family,
            "rank": self.rank,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "gram": [list(r) for r in self.gram],
            "positive_roots": [list(r) for r in self.positive_roots],
            "degrees": list(self.degrees),
            "exponents": list(self.exponents),
            "coxeter_number": self.coxeter_number,
            "dual_coxeter": self.dual_coxeter,
            "weyl_vector": [qstr(x) for x in self.weyl_vector],
            "weyl_vector_norm2": qstr(self.norm2(self.weyl_vector)),
        }


_ROOT_SYSTEMS: Dict[Tuple[str, int], RootSystem] = {}


def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the root data of ``family``\\ ``rank`` from its Cartan matrix.

    Exponents come from the principal gradation: the number of positive roots
    of height ``m`` equals the number of exponents ``>= m``.
    """
    key = (family.upper(), int(rank))
    if key in _ROOT_SYSTEMS:
        return _ROOT_SYSTEMS[key]
    cm = cartan_matrix(*key)
    pos = _positive_roots(cm)
    by_height: Dict[int, int] = {}
    for r in pos:
        by_height[sum(r)] = by_height.get(sum(r), 0) + 1
    h = max(by_height) + 1
    exponents: List[int] = []
    for m in range(1, h):
        mult = by_height.get(m, 0) - by_height.get(m + 1, 0)
        exponents.extend([m] * mult)
    if len(exponents) != rank or sum(exponents) != len(pos):
        raise AssertionError(f"exponent computation failed for {key}")
    rho = tuple(Fraction(sum(r[i] for r in pos), 2) for i in range(rank))
    frozen = tuple(tuple(row) for row in cm)
    rs = RootSystem(
        family=key[0], rank=key[1], cartan_matrix=frozen, positive_roots=tuple(pos),
        degrees=tuple(e + 1 for e in exponents), exponents=tuple(exponents),
        coxeter_number=h, dual_coxeter=h, weyl_vector=rho, gram=frozen,
    )
    _ROOT_SYSTEMS[key] = rs
    return rs


@dataclass(frozen=True)
class WeightVector:
    coords: QVec
    basis: str = "root"

    def __post_init__(self):
        if self.basis not in ("root", "fundamental"):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    def to_root(self, rs: RootSystem) -> "WeightVector":
        if self.basis == "root":
            return self
        gi = rs.gram_inverse
        n = rs.rank
        return WeightVector(tuple(sum(gi[i][j] * self.coords[j] for j in range(n))
                                  for i in range(n)), "root")

    def to_fundamental(self, rs: RootSystem) -> "WeightVector":
        if self.basis == "fundamental":
            return self
        g = rs.gram
        n = rs.rank
        return WeightVector(tuple(sum(g[i][j] * self.coords[j] for j in range(n))
                                  for i in range(n)), "fundamental")


def inner_product(rs: RootSystem, a: WeightVector, b: WeightVector) -> Fraction:
    if a.basis != b.basis:
        raise ValueError(f"basis mismatch ({a.basis} vs {b.basis}); convert first")
    if len(a.coords) != rs.rank or len(b.coords) != rs.rank:
        raise ValueError("weight length does not match the rank")
    return Fraction(rs.inner(a.to_root(rs).coords, b.to_root(rs).coords))


# ---------------------------------------------------------------------------
# Chevalley basis with signs from the lattice cocycle

def cocycle(rs: RootSystem, beta: Sequence[int], gamma: Sequence[int],
            order: Sequence[int] | None = None) -> int:
    """Bimultiplicative sign with eps(a_i, a_j) = 1 for i <= j and
    (-1)^(a_i|a_j) for i > j, positions taken from ``order``."""
    n = rs.rank
    pos = list(range(n)) if order is None else [list(order).index(i) for i in range(n)]
    a = rs.cartan_matrix
    s = 0
    for i in range(n):
        if not beta[i]:
            continue
        for j in range(n):
            if gamma[j] and pos[i] > pos[j] and a[i][j]:
                s += beta[i] * gamma[j] * a[i][j]
    return -1 if s % 2 else 1


# Lie algebra elements are dicts keyed by ("h", i) or ("x", root)
Key = Tuple


@dataclass(frozen=True)
class ChevalleyBasis:
    rs: RootSystem
    ordering: Tuple[int, ...]
    structure: Dict[Tuple[Vec, Vec], int] = field(repr=False, compare=False)

    def eps(self, beta: Sequence[int], gamma: Sequence[int]) -> int:
        return cocycle(self.rs, beta, gamma, self.ordering)

    def N(self, alpha: Vec, beta: Vec) -> int:
        return self.structure[(alpha, beta)]

    def basis(self) -> List[Key]:
        return [("h", i) for i in range(self.rs.rank)] + [("x", r) for r in self.rs.roots]

    def bracket_basis(self, a: Key, b: Key) -> Dict[Key, Fraction]:
        rs = self.rs
        if a[0] == "h" and b[0] == "h":
            return {}
        if a[0] == "h":
            c = Fraction(rs.inner(rs.simple_root(a[1]), b[1]))
            return {b: c} if c else {}
        if b[0] == "h":
            return {k: -v for k, v in self.bracket_basis(b, a).items()}
        al, be = a[1], b[1]
        s = tuple(x + y for x, y in zip(al, be))
        if not any(s):
            # [x_a, x_-a] = eps(a, -a) a, expanded on the simple-root bosons
            e = self.eps(al, be)
            return {("h", i): Fraction(e * al[i]) for i in range(rs.rank) if al[i]}
        if s in rs.root_index:
            return {("x", s): Fraction(self.structure[(al, be)])}
        return {}

    def bracket(self, u: Dict[Key, Fraction], v: Dict[Key, Fraction]) -> Dict[Key, Fraction]:
        out: Dict[Key, Fraction] = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for k, c in self.bracket_basis(a, b).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: c for k, c in out.items() if c}

    def form(self, a: Key, b: Key) -> Fraction:
        """Invariant form with (x_a | x_-a) = eps(a, -a) and (h_i | h_j) = gram."""
        rs = self.rs
        if a[0] == "h" and b[0] == "h":
            return Fraction(rs.gram[a[1]][b[1]])
        if a[0] == "x" and b[0] == "x" and not any(x + y for x, y in zip(a[1], b[1])):
            return Fraction(self.eps(a[1], b[1]))
        return Fraction(0)

    def check_jacobi(self) -> bool:
        basis = self.basis()
        for a, b in itertools.combinations_with_replacement(basis, 2):
            ab, ba = self.bracket_basis(a, b), self.bracket_basis(b, a)
            if any(ab.get(k, 0) + ba.get(k, 0) for k in set(ab) | set(ba)):
                return False
        for a, b, c in itertools.combinations(basis, 3):
            total: Dict[Key, Fraction] = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket_basis(y, z)
                for k, v in self.bracket({x: Fraction(1)}, inner).items():
                    total[k] = total.get(k, 0) + v
            if any(total.values()):
                return False
        return True


class InternalConsistencyError(RuntimeError):
    pass


def chevalley_constants(rs: RootSystem, ordering: Iterable[int] | None = None,
                        check: bool | None = None) -> ChevalleyBasis:
    order = tuple(range(rs.rank)) if ordering is None else tuple(ordering)
    if sorted(order) != list(range(rs.rank)):
        raise ValueError("ordering must be a permutation of the simple roots")
    structure = {}
    for a in rs.roots:
        for b in rs.roots:
            s = tuple(x + y for x, y in zip(a, b))
            if s in rs.root_index:
                structure[(a, b)] = cocycle(rs, a, b, order)
    cb = ChevalleyBasis(rs, order, structure)
    if check is None:
        check = len(rs.roots) + rs.rank <= 80
    if check and not cb.check_jacobi():
        raise InternalConsistencyError(f"Jacobi identity fails for {rs.name}")
    return cb
