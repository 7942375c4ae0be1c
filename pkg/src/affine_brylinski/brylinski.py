"""The positive principal Heisenberg subalgebra and the Brylinski filtration
of the dominant part Z of the basic representation.

The basic representation is decomposed by principal depth: the component
``(beta, s)`` of V_Q (charge ``beta``, Fock degree ``s``) has depth
``D = h (s + |beta|^2/2) + ht(beta)``, which is h times its twisted
grading.  A loop element of principal degree ``m`` maps depth ``D`` to depth
``D - m``; ``Z_n`` is the component ``(0, n)`` at depth ``h n``.

For a commuting family spanning s+, the power condition ``x^{i+1} v = 0``
for every ``x`` in s+ is equivalent (polarization, characteristic 0) to
``u_1 ... u_{i+1} v = 0`` for all basis monomials.  The latter is computed
recursively,

    G^{-1}_D = 0,    G^i_D = { w in L_D : u w in G^{i-1}_{D - deg u} for all u },

each ``G`` stored as the kernel of a reduced constraint matrix.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from . import linalg
from .cartan import RootSystem, chevalley_constants
from .graded import Charge, ResourceLimitError, Vector, add_into, fock_basis, fock_index
from .series import hilbert_grZ, principal_character
from .twisted import affine_action, loop_bracket

LoopElement = Dict[Tuple, Fraction]  # {(key, j): coefficient}


class FiltrationMismatch(AssertionError):
    pass


# ---------------------------------------------------------------------------
# the abstract principal Heisenberg subalgebra

def principal_nilpotent(rs: RootSystem) -> LoopElement:
    e = {(("x", rs.simple_root(i)), 0): Fraction(1) for i in range(rs.rank)}
    e[(("x", tuple(-x for x in rs.highest_root)), 1)] = Fraction(1)
    return e


def loop_basis(rs: RootSystem, m: int) -> List[Tuple]:
    """Basis of the loop algebra in principal degree m (m != 0)."""
    h = rs.coxeter_number
    out = []
    for r in rs.roots:
        j, rem = divmod(m - rs.height(r), h)
        if not rem:
            out.append((("x", r), j))
    if m % h == 0:
        out.extend((("h", i), m // h) for i in range(rs.rank))
    return sorted(out, key=repr)


def exponent_multiplicity(rs: RootSystem, m: int) -> int:
    h = rs.coxeter_number
    return sum(1 for e in rs.exponents if (e - m) % h == 0)


def loop_bracket_elements(rs: RootSystem, a: LoopElement, b: LoopElement) -> LoopElement:
    cb = chevalley_constants(rs)
    out: LoopElement = {}
    for ka, ca in a.items():
        for kb, cb_ in b.items():
            for k, c in loop_bracket(cb, ka, kb).items():
                add_into(out, k, ca * cb_ * c)
    return out


@dataclass(frozen=True)
class SPlusBasis:
    rs: RootSystem
    max_degree: int
    elements: Dict[int, Tuple[LoopElement, ...]] = field(repr=False)

    def dims(self) -> Dict[int, int]:
        return {m: len(v) for m, v in sorted(self.elements.items())}

    def flat(self, up_to: int | None = None) -> List[Tuple[int, LoopElement]]:
        top = self.max_degree if up_to is None else min(up_to, self.max_degree)
        return [(m, u) for m in range(1, top + 1) for u in self.elements.get(m, ())]


def splus_basis(rs: RootSystem, max_degree: int) -> SPlusBasis:
    """Exact solutions of [x, e] = 0 in each principal degree 1..M."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    e = principal_nilpotent(rs)
    elements: Dict[int, Tuple[LoopElement, ...]] = {}
    for m in range(1, max_degree + 1):
        basis = loop_basis(rs, m)
        cols = []
        for k in basis:
            cols.append(loop_bracket_elements(rs, {k: Fraction(1)}, e))
        rowkeys = sorted({k for c in cols for k in c}, key=repr)
        ridx = {k: i for i, k in enumerate(rowkeys)}
        rows: List[Dict[int, Fraction]] = [dict() for _ in rowkeys]
        for j, c in enumerate(cols):
            for k, x in c.items():
                rows[ridx[k]][j] = x
        kern = linalg.nullspace(rows, len(basis))
        want = exponent_multiplicity(rs, m)
        if len(kern) != want:
            raise AssertionError(f"{rs.name}: s+ has dimension {len(kern)} in degree {m}, "
                                 f"exponents predict {want}")
        elements[m] = tuple({basis[j]: c for j, c in v.items()} for v in kern)
    return SPlusBasis(rs, max_degree, elements)


# ---------------------------------------------------------------------------
# principal-depth pieces of the basic representation

def depth(rs: RootSystem, beta: Charge, s: int) -> Fraction:
    h = rs.coxeter_number
    return h * (s + Fraction(rs.norm2(beta), 2)) + rs.height(beta)


def _charges_in_ball(rs: RootSystem, D: int) -> List[Charge]:
    """Root-lattice points with |beta + rho/h|^2 <= 2D/h + |rho/h|^2."""
    h = rs.coxeter_number
    c = [-Fraction(x) / h for x in rs.weyl_vector]
    r2 = Fraction(2 * D, h) + rs.norm2(c)
    gi = rs.gram_inverse
    ranges = []
    for i in range(rs.rank):
        half = math.sqrt(float(r2 * gi[i][i])) + 1e-9
        ranges.append(range(math.ceil(float(c[i]) - half), math.floor(float(c[i]) + half) + 1))
    out = []

    def rec(i, acc):
        if i == rs.rank:
            d = [Fraction(a) - b for a, b in zip(acc, c)]
            if rs.norm2(d) <= r2:
                out.append(tuple(acc))
            return
        for x in ranges[i]:
            rec(i + 1, acc + [x])

    rec(0, [])
    return out


class PrincipalPiece:
    """The depth-D subspace of the basic representation with a global basis."""

    def __init__(self, rs: RootSystem, D: int):
        self.rs = rs
        self.D = D
        comps = []
        h = rs.coxeter_number
        for beta in _charges_in_ball(rs, D):
            s = Fraction(D - rs.height(beta), h) - Fraction(rs.norm2(beta), 2)
            if s >= 0 and s.denominator == 1:
                comps.append((beta, int(s)))
        self.components: List[Tuple[Charge, int]] = sorted(comps)
        self.offsets: Dict[Tuple[Charge, int], int] = {}
        off = 0
        for comp in self.components:
            self.offsets[comp] = off
            off += len(fock_basis(rs.rank, comp[1]))
        self.dim = off

    def index(self, charge: Charge, mono) -> int:
        return self.offsets[(charge, sum(n for _, n in mono))] + \
            fock_index(self.rs.rank, sum(n for _, n in mono))[mono]

    def states(self) -> List[Tuple[Charge, tuple]]:
        return [(c, m) for c, s in self.components for m in fock_basis(self.rs.rank, s)]

    def to_vector(self, v: Dict[int, Fraction]) -> Vector:
        st = self.states()
        return {st[i]: x for i, x in v.items()}


@dataclass
class Filtration:
    """Brylinski filtration engine for one root system."""

    rs: RootSystem
    max_basis: int = 20000
    _pieces: Dict[int, PrincipalPiece] = field(default_factory=dict, repr=False)
    _ops: Dict[Tuple[int, int], List[Dict[int, Fraction]]] = field(default_factory=dict,
                                                                   repr=False)
    _constraints: Dict[Tuple[int, int], List[Dict[int, Fraction]]] = field(
        default_factory=dict, repr=False)
    _splus: SPlusBasis | None = field(default=None, repr=False)

    def piece(self, D: int) -> PrincipalPiece:
        if D not in self._pieces:
            p = PrincipalPiece(self.rs, D)
            if p.dim > self.max_basis:
                raise ResourceLimitError(f"depth {D} piece has {p.dim} states "
                                         f"(limit {self.max_basis})")
            expected = principal_character(self.rs, D).coefficient(0, D)
            if p.dim != expected:
                raise AssertionError(f"depth {D}: {p.dim} states, principal character "
                                     f"predicts {expected}")
            self._pieces[D] = p
        return self._pieces[D]

    def splus(self, M: int) -> SPlusBasis:
        if self._splus is None or self._splus.max_degree < M:
            self._splus = splus_basis(self.rs, max(M, 1))
        return self._splus

    def realize(self, u: LoopElement, m: int, D: int) -> List[Dict[int, Fraction]]:
        """Rows of the matrix of u : L_D -> L_{D-m}, indexed by target."""
        src, tgt = self.piece(D), self.piece(D - m)
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(tgt.dim)]
        for (key, j), c in u.items():
            op = affine_action(self.rs, key, j)
            for comp in src.components:
                t, cols = op.block(comp)
                if t is None:
                    continue
                if t not in tgt.offsets:
                    raise AssertionError(f"{op.name} maps {comp} outside depth {D - m}")
                so, to = src.offsets[comp], tgt.offsets[t]
                for a, col in enumerate(cols):
                    for b, x in col.items():
                        add_into(rows[to + b], so + a, c * x)
        return rows

    def operator(self, k: int, D: int) -> List[Dict[int, Fraction]]:
        key = (k, D)
        if key not in self._ops:
            m, u = self.splus(D).flat(D)[k]
            self._ops[key] = self.realize(u, m, D)
        return self._ops[key]

    def constraints(self, i: int, D: int) -> List[Dict[int, Fraction]]:
        """Reduced rows C with G^i_D = ker C."""
        key = (i, D)
        if key in self._constraints:
            return self._constraints[key]
        piece = self.piece(D)
        if i < 0:
            rows = [{j: Fraction(1)} for j in range(piece.dim)]
        else:
            stacked: List[Dict[int, Fraction]] = []
            for k, (m, _) in enumerate(self.splus(D).flat(D)):
                prev = self.constraints(i - 1, D - m)
                if not prev:
                    continue
                U = self.operator(k, D)
                for r in prev:
                    out: Dict[int, Fraction] = {}
                    for t, x in r.items():
                        for sidx, y in U[t].items():
                            add_into(out, sidx, x * y)
                    if out:
                        stacked.append(out)
            if not stacked:
                rows = []
            else:
                kern = linalg.nullspace(stacked, piece.dim)
                rows = linalg.annihilator(kern, piece.dim) if kern else \
                    [{j: Fraction(1)} for j in range(piece.dim)]
        self._constraints[key] = rows
        return rows

    def z_columns(self, n: int) -> List[int]:
        piece = self.piece(self.rs.coxeter_number * n)
        off = piece.offsets[((0,) * self.rs.rank, n)]
        return list(range(off, off + len(fock_basis(self.rs.rank, n))))

    def filtration_subspace(self, n: int, i: int) -> List[Dict[int, Fraction]]:
        """Basis of F^i Z_n in Fock coordinates of Z_n (index into fock_basis)."""
        if i < -1:
            raise ValueError("filtration index starts at -1")
        dimz = len(fock_basis(self.rs.rank, n))
        if i == -1:
            return []
        D = self.rs.coxeter_number * n
        cols = self.z_columns(n)
        pos = {c: a for a, c in enumerate(cols)}
        rows = []
        for r in self.constraints(i, D):
            rr = {pos[c]: x for c, x in r.items() if c in pos}
            if rr:
                rows.append(rr)
        return linalg.nullspace(rows, dimz)

    def stabilization_bound(self, n: int) -> int:
        """F^i Z_n = Z_n once i reaches this value (top degree d_l times n)."""
        return max(self.rs.degrees) * n

    def profile(self, n: int) -> Dict[int, int]:
        """{i: dim F^i Z_n - dim F^{i-1} Z_n} for nonzero jumps."""
        dimz = len(fock_basis(self.rs.rank, n))
        jumps: Dict[int, int] = {}
        prev = 0
        i = -1
        while prev < dimz:
            i += 1
            if i > self.stabilization_bound(n):
                raise FiltrationMismatch(f"F^i Z_{n} does not reach Z_{n} by i = {i - 1}")
            cur = len(self.filtration_subspace(n, i))
            if cur < prev:
                raise FiltrationMismatch(f"F^{i} Z_{n} is smaller than F^{i - 1} Z_{n}")
            if cur > prev:
                jumps[i] = cur - prev
            prev = cur
        return jumps

    # -- checks ---------------------------------------------------------------
    def to_states(self, n: int, v: Dict[int, Fraction]) -> Vector:
        zero = (0,) * self.rs.rank
        basis = fock_basis(self.rs.rank, n)
        return {(zero, basis[a]): x for a, x in v.items()}

    def apply_element(self, u: LoopElement, v: Vector) -> Vector:
        out: Vector = {}
        for (key, j), c in u.items():
            for k, x in affine_action(self.rs, key, j).apply(v).items():
                add_into(out, k, c * x)
        return out

    def polarization_check(self, n: int, trials: int = 20, seed: int = 0) -> bool:
        """x^{i+1} kills F^i Z_n for random rational combinations x of s+."""
        rng = random.Random(seed)
        D = self.rs.coxeter_number * n
        flat = self.splus(max(D, 1)).flat(D)
        if not flat:
            return True
        for _ in range(trials):
            x: LoopElement = {}
            for _, u in flat:
                c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                for k, y in u.items():
                    add_into(x, k, c * y)
            for i in range(0, self.stabilization_bound(n) + 1):
                for v in self.filtration_subspace(n, i):
                    w = self.to_states(n, v)
                    for _ in range(i + 1):
                        w = self.apply_element(x, w)
                        if not w:
                            break
                    if w:
                        return False
        return True

    def commutation_check(self, D: int) -> bool:
        """Realized s+ basis elements commute on L_D."""
        flat = self.splus(max(D, 1)).flat(D)
        piece = self.piece(D)
        basis = [{st: Fraction(1)} for st in piece.states()]
        for a in range(len(flat)):
            for b in range(a + 1, len(flat)):
                u, w = flat[a][1], flat[b][1]
                for v in basis:
                    lhs = self.apply_element(u, self.apply_element(w, v))
                    rhs = self.apply_element(w, self.apply_element(u, v))
                    if lhs != rhs:
                        return False
        return True


def filtration_profile(rs: RootSystem, n_max: int, engine: Filtration | None = None
                       ) -> Dict[int, Dict[int, int]]:
    """Jump table {n: {i: dim F^i Z_n / F^{i-1} Z_n}} for n <= n_max."""
    eng = engine or Filtration(rs)
    return {n: eng.profile(n) for n in range(n_max + 1)}


def expected_profile(rs: RootSystem, n_max: int) -> Dict[int, Dict[int, int]]:
    T = max(rs.degrees) * n_max
    series = hilbert_grZ(rs, T, n_max)
    return {n: {t: int(c) for t, c in sorted(series.q_row(n).items()) if c}
            for n in range(n_max + 1)}


def compare_profile(rs: RootSystem, n_max: int, engine: Filtration | None = None) -> List[str]:
    """Mismatches (n, i) between the brute-force table and the product formula."""
    got = filtration_profile(rs, n_max, engine)
    want = expected_profile(rs, n_max)
    bad = []
    for n in range(n_max + 1):
        for t in sorted(set(got[n]) | set(want[n])):
            if got[n].get(t, 0) != want[n].get(t, 0):
                bad.append(f"n={n} t^{t}: computed {got[n].get(t, 0)}, expected "
                           f"{want[n].get(t, 0)}")
    return bad
