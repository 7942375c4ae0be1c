"""The inner-twisted realization of the basic representation on V_Q.

The twist is implemented by the shift operator

    Delta(h, z) = z^{h_0} exp( sum_{k>=1} (-1)^{k+1} h_k z^{-k} / k ),
    Y_zeta(v, z) = Y(Delta(h, z) v, z),

with ``h = rho/h``.  For ``v`` of lattice charge ``beta`` the twisted modes
``v^zeta_(m)`` live in ``-(h|beta) + Z``, and the twisted grading of the
component ``(beta, s)`` is ``s + |beta|^2/2 + (h|beta)``, i.e. principal
depth over ``h``.  The affine algebra acts through

    x_alpha (x) t^j  ->  (e^{-alpha})^zeta_(j + (h|alpha)) = (e^{-alpha})_(j),
    a (x) t^j        ->  -(a^zeta_(j) - delta_{j,0} (h|a)) = -a_(j),
    K                ->  1,

which is the Frenkel-Kac action composed with the Chevalley involution
``e^beta -> e^{-beta}, a -> -a`` (an automorphism of V_Q because the cocycle
is bimultiplicative).  With this choice ``x_alpha t^j`` lowers the twisted
grading by its principal degree ``(ht(alpha) + j h)/h``, and the Cartan
subalgebra kills ``Z = pi_1 (x) e^0``.  On Z the twisted W-fields reproduce
the Fock module of highest weight ``rho/h``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

from .cartan import ChevalleyBasis, Key, RootSystem, chevalley_constants
from .fock import FockElement, heisenberg_action, heisenberg_mode, state_mode
from .graded import Charge, ModeOperator, Vector, add_into, combine, fock_basis
from .lattice import LatticeElement, descendant_mode, exp_vertex_mode

LoopKey = Tuple[Key, int]  # (Lie algebra basis key, power of t); ("K",) for the centre


def principal_shift(rs: RootSystem) -> Tuple[Fraction, ...]:
    """rho / h in the root basis."""
    h = rs.coxeter_number
    return tuple(Fraction(x) / h for x in rs.weyl_vector)


def _states(v) -> Vector:
    if isinstance(v, LatticeElement):
        return dict(v.terms)
    if isinstance(v, FockElement):
        return v.as_states()
    return dict(v)


def delta_apply(rs: RootSystem, hw: Sequence, v, order: int | None = None
                ) -> List[Tuple[Fraction, LatticeElement]]:
    """Laurent coefficients of Delta(hw, z) v as (power of z, state) pairs.

    ``v`` must have a single lattice charge.  With ``order`` given, the
    expansion is cut after ``z^{-order}`` relative to the leading power and
    rejected if that would drop nonzero terms.
    """
    hw = tuple(Fraction(x) for x in hw)
    states = _states(v)
    charges = {c for c, _ in states}
    if len(charges) > 1:
        raise ValueError("delta_apply needs a state of a single lattice charge")
    beta = charges.pop() if charges else (0,) * rs.rank
    lead = Fraction(rs.inner(hw, beta))
    zero = (0,) * rs.rank
    layers: List[Vector] = [states]
    # h_k lowers the Heisenberg degree by k, so E_j vanishes past the top degree
    top = max((sum(n for _, n in m) for _, m in states), default=0)
    for j in range(1, top + 1):
        nxt: Vector = {}
        # j E_j = sum_k (-1)^{k+1} h_k E_{j-k}
        for k in range(1, j + 1):
            sign = 1 if k % 2 else -1
            for (c, m), x in layers[j - k].items():
                for key, y in heisenberg_action(rs, hw, k, c, m, zero).items():
                    add_into(nxt, key, Fraction(sign, j) * x * y)
        layers.append(nxt)
    while len(layers) > 1 and not layers[-1]:
        layers.pop()
    if order is not None and len(layers) > order + 1:
        raise ValueError(f"order {order} drops nonzero terms; need at least {len(layers) - 1}")
    return [(lead - i, LatticeElement(e)) for i, e in enumerate(layers) if e]


def twisted_mode(rs: RootSystem, v, m, hw: Sequence | None = None) -> ModeOperator:
    """The mode v^zeta_(m) of Y_zeta(v, z) = sum_m v^zeta_(m) z^{-m-1} on V_Q."""
    hw = principal_shift(rs) if hw is None else tuple(Fraction(x) for x in hw)
    m = Fraction(m)
    pieces = delta_apply(rs, hw, v)
    if not pieces:
        raise ValueError("zero state")
    beta = next(iter(pieces[0][1].terms))[0]
    lead = Fraction(rs.inner(hw, beta))
    if (m + lead).denominator != 1:
        raise ValueError(f"mode index {m} is not in -(h|beta) + Z = {-lead} + Z")
    terms = []
    for power, u in pieces:
        j = lead - power
        n = int(m + lead - j)
        terms.append((Fraction(1), descendant_mode(rs, u, n)))
    if len(terms) == 1:
        op = terms[0][1]
    else:
        op = combine(*terms)
    op.name = f"zeta_({m})"
    op.index = m
    return op


def twisted_grade(rs: RootSystem, beta: Charge, s: int, hw: Sequence | None = None) -> Fraction:
    """Twisted L_0 eigenvalue minus |h|^2/2 on the component (beta, s):
    s + |beta|^2/2 + (h|beta)."""
    hw = principal_shift(rs) if hw is None else hw
    return s + Fraction(rs.norm2(beta), 2) + Fraction(rs.inner(hw, beta))


# ---------------------------------------------------------------------------
# the affine algebra

def identity_mode(rs: RootSystem) -> ModeOperator:
    def action(charge, mono):
        return {(charge, mono): Fraction(1)}
    return ModeOperator("K", rs.rank, action, (0,) * rs.rank, Fraction(0), rs.norm2)


def affine_action(rs: RootSystem, key, j: int = 0) -> ModeOperator:
    """Operator of a loop basis element: key ("x", alpha), ("h", i) or ("K",)."""
    if key[0] == "K":
        return identity_mode(rs)
    if key[0] == "x":
        op = exp_vertex_mode(rs, tuple(-x for x in key[1]), j)
        op.name = f"x{key[1]}t^{j}"
        return op
    if key[0] == "h":
        op = heisenberg_mode(rs, tuple(-x for x in rs.simple_root(key[1])), j)
        op.name = f"h{key[1] + 1}t^{j}"
        return op
    raise ValueError(f"unknown loop basis key {key!r}")


def principal_degree(rs: RootSystem, key, j: int) -> int:
    if key[0] == "x":
        return rs.height(key[1]) + j * rs.coxeter_number
    if key[0] == "h":
        return j * rs.coxeter_number
    return 0


def loop_bracket(cb: ChevalleyBasis, a: Tuple[Key, int], b: Tuple[Key, int]
                 ) -> Dict[Tuple, Fraction]:
    """[x t^m, y t^n] = [x, y] t^{m+n} + m delta_{m+n,0} (x|y) K."""
    (x, m), (y, n) = a, b
    out: Dict[Tuple, Fraction] = {(k, m + n): c for k, c in cb.bracket_basis(x, y).items()}
    if m + n == 0 and m:
        c = m * cb.form(x, y)
        if c:
            out[(("K",), 0)] = c
    return out


def _basis_vectors(rs: RootSystem, comp):
    charge, s = comp
    return [{(charge, mono): Fraction(1)} for mono in fock_basis(rs.rank, s)]


def _commutator(A: ModeOperator, B: ModeOperator, v: Vector) -> Vector:
    out = dict(A.apply(B.apply(v)))
    for k, x in B.apply(A.apply(v)).items():
        add_into(out, k, -x)
    return out


def affine_bracket_check(rs: RootSystem, pairs: Iterable[Tuple[Tuple[Key, int], Tuple[Key, int]]],
                         components: Iterable[Tuple[Charge, int]]) -> List[str]:
    """Failures of [rho(a), rho(b)] = rho([a, b]) on the basis of each component."""
    cb = chevalley_constants(rs)
    comps = list(components)
    failures = []
    for a, b in pairs:
        A, B = affine_action(rs, *a), affine_action(rs, *b)
        expect = loop_bracket(cb, a, b)
        ops = [(c, affine_action(rs, *k)) for k, c in expect.items()]
        for comp in comps:
            for v in _basis_vectors(rs, comp):
                lhs = _commutator(A, B, v)
                rhs: Vector = {}
                for c, op in ops:
                    for k, x in op.apply(v).items():
                        add_into(rhs, k, c * x)
                if lhs != rhs:
                    failures.append(f"[{A.name}, {B.name}] on {comp}")
                    break
    return failures


def sample_loop_pairs(rs: RootSystem, max_degree: int, count: int, seed: int = 0):
    """Random pairs of loop basis elements of principal degree in [-M, M]."""
    cb = chevalley_constants(rs)
    pool = []
    for key in cb.basis():
        for j in range(-2, 3):
            if abs(principal_degree(rs, key, j)) <= max_degree:
                pool.append((key, j))
    rng = random.Random(seed)
    return [(rng.choice(pool), rng.choice(pool)) for _ in range(count)]


# ---------------------------------------------------------------------------
# the subspace Z and its Fock structure

@dataclass(frozen=True)
class TwistedRealization:
    rs: RootSystem

    @cached_property
    def shift(self) -> Tuple[Fraction, ...]:
        return principal_shift(self.rs)

    def z_dimension(self, n: int) -> int:
        """Dimension of the Cartan-weight-0 part of principal depth h n."""
        return len(fock_basis(self.rs.rank, n))

    def vacuum(self) -> Vector:
        return {((0,) * self.rs.rank, ()): Fraction(1)}

    def w_mode_on_z(self, w: FockElement, N: int) -> ModeOperator:
        """w^zeta_(N) restricted to Z (charge-zero states)."""
        return twisted_mode(self.rs, w, N, self.shift)

    def fock_mode_on_z(self, w: FockElement, N: int) -> ModeOperator:
        """The same mode computed on the Fock module of highest weight rho/h."""
        return state_mode(self.rs, w, N, self.shift)

    def compare_on_z(self, w: FockElement, N: int, n_max: int) -> bool:
        """Twisted lattice action on Z agrees with the shifted Fock module action."""
        A, B = self.w_mode_on_z(w, N), self.fock_mode_on_z(w, N)
        zero = (0,) * self.rs.rank
        for s in range(n_max + 1):
            tgt = A.target((zero, s))
            if tgt is None:
                continue
            if A.block((zero, s)) != B.block((zero, s)):
                return False
        return True

    def cartan_kills_z(self, n_max: int) -> bool:
        """Each h_i t^0 annihilates Z through degree n_max; e_0..e_l kill the vacuum."""
        rs = self.rs
        zero = (0,) * rs.rank
        for i in range(rs.rank):
            op = affine_action(rs, ("h", i), 0)
            for s in range(n_max + 1):
                if any(op.block((zero, s))[1][j] for j in range(len(fock_basis(rs.rank, s)))):
                    return False
        theta = tuple(-x for x in rs.highest_root)
        gens = [affine_action(rs, ("x", rs.simple_root(i)), 0) for i in range(rs.rank)]
        gens.append(affine_action(rs, ("x", theta), 1))
        return all(not g.apply(self.vacuum()) for g in gens)

    def twisted_zero_mode_eigen(self, a: Sequence, beta: Charge) -> Fraction:
        """Twisted zero mode of a(-1)|0> on 1 (x) e^beta: (beta|a) + (rho/h|a)."""
        rs = self.rs
        v = FockElement(1, (0,) * rs.rank, {((i, 1),): Fraction(a[i])
                                            for i in range(rs.rank) if a[i]})
        op = twisted_mode(rs, v, 0, self.shift)
        img = op.apply({(tuple(beta), ()): Fraction(1)})
        return img.get((tuple(beta), ()), Fraction(0))
