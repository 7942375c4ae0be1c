"""Theorem-level checks: PBW bases of Z and their filtration degrees, generic
Fock modules as W-modules, and the Kac-Kazhdan genericity condition."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .brylinski import Filtration
from .cartan import RootSystem, WeightVector
from .graded import fock_basis, fock_index
from .serialize import CONVENTION_VERSION, SCHEMA_VERSION, qstr
from .series import colored_partitions, verma_character
from .twisted import principal_shift
from .walg import WGenerators, apply_word, choose_generators, w_mode

PBWTuple = Tuple[Tuple[int, int], ...]


@dataclass
class VerificationReport:
    kind: str
    family: str
    rank: int
    params: Dict[str, object] = field(default_factory=dict)
    entries: List[Dict[str, object]] = field(default_factory=list)
    witnesses: List[str] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def fail(self, msg: str) -> None:
        self.witnesses.append(msg)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "convention": CONVENTION_VERSION,
            "kind": self.kind,
            "family": self.family,
            "rank": self.rank,
            "params": self.params,
            "entries": self.entries,
            "ok": self.ok,
            "witnesses": self.witnesses,
        }
        if timing:
            out["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out


# ---------------------------------------------------------------------------
# PBW tuples

def pbw_tuples(rs: RootSystem | Sequence[int], n: int, d_cap: int | None = None
               ) -> List[PBWTuple]:
    """Tuples ((p_1,k_1),...,(p_r,k_r)) with l >= p_1 >= ... >= p_r >= 1,
    k_j <= -1, k_j <= k_{j+1} when p_j = p_{j+1}, and sum(-k_j) = n.

    With ``d_cap`` only tuples whose generator degrees sum to at most d_cap.
    """
    degrees = tuple(rs.degrees) if isinstance(rs, RootSystem) else tuple(rs)
    ell = len(degrees)
    out: List[PBWTuple] = []

    def rec(remaining, max_p, min_k, acc, dsum):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for p in range(max_p, 0, -1):
            nd = dsum + degrees[p - 1]
            if d_cap is not None and nd > d_cap:
                continue
            for size in range(1, remaining + 1):
                k = -size
                if p == max_p and min_k is not None and k < min_k:
                    continue
                rec(remaining - size, p, k, acc + [(p, k)], nd)

    rec(n, ell, None, [], 0)
    return out


def tuple_degree(degrees: Sequence[int], tup: PBWTuple) -> int:
    return sum(degrees[p - 1] for p, _ in tup)


def pbw_vectors(gens: WGenerators, n: int, lam: Sequence) -> Tuple[List[PBWTuple], List[Dict]]:
    """PBW vectors of degree n on the Fock module of highest weight lam,
    in Fock coordinates (index into fock_basis)."""
    rs = gens.rs
    zero = (0,) * rs.rank
    idx = fock_index(rs.rank, n)
    tuples = pbw_tuples(gens.degrees, n)
    vecs = []
    for tup in tuples:
        ops = [w_mode(gens, p, k, lam) for p, k in tup]
        v = apply_word(ops, {(zero, ()): Fraction(1)})
        vecs.append({idx[m]: c for (_, m), c in v.items()})
    return tuples, vecs


# ---------------------------------------------------------------------------
# main theorem on Z

def check_theorem_main(rs: RootSystem, n_max: int, gens: WGenerators | None = None,
                       engine: Filtration | None = None) -> VerificationReport:
    """PBW vectors on Z are a basis of each Z_n, and the subfamily with
    generator degrees summing to at most d spans F^d Z_n."""
    t0 = time.perf_counter()
    gens = gens or choose_generators(rs)
    engine = engine or Filtration(rs)
    hw = principal_shift(rs)
    rep = VerificationReport("verify-main", rs.family, rs.rank,
                             {"n_max": n_max, "weight": [qstr(x) for x in hw],
                              "generator_degrees": list(gens.degrees),
                              "perturbed": "perturbed" in gens.metadata})
    for n in range(n_max + 1):
        dimz = len(fock_basis(rs.rank, n))
        tuples, vecs = pbw_vectors(gens, n, hw)
        r = linalg.rank(vecs, dimz)
        independent = r == len(vecs)
        spanning = r == dimz
        if not independent:
            rep.fail(f"n={n}: PBW vectors dependent (rank {r} of {len(vecs)})")
        if not spanning:
            rep.fail(f"n={n}: PBW vectors span {r} of {dimz} dimensions")
        degs = [tuple_degree(gens.degrees, t) for t in tuples]
        top = max(degs) if degs else 0
        prev_rank = 0
        for d in range(0, max(top, engine.stabilization_bound(n)) + 1):
            sub = [v for v, dd in zip(vecs, degs) if dd <= d]
            fil = engine.filtration_subspace(n, d)
            rs_sub = linalg.rank(sub, dimz) if sub else 0
            rs_fil = len(fil)
            joint = linalg.rank(sub + fil, dimz) if (sub or fil) else 0
            equal = rs_sub == rs_fil == joint
            if rs_sub < prev_rank:
                rep.fail(f"n={n} d={d}: PBW span shrank")
            prev_rank = rs_sub
            if not equal:
                rep.fail(f"n={n} d={d}: PBW span dim {rs_sub}, F^d dim {rs_fil}, "
                         f"joint {joint}")
            rep.entries.append({"n": n, "d": d, "pbw_dim": rs_sub, "filtration_dim": rs_fil,
                                "equal": equal, "independent": independent,
                                "spanning": spanning, "dim_Z": dimz})
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# generic Fock modules

def integral_pairing_roots(rs: RootSystem, lam: Sequence) -> List[Tuple[int, ...]]:
    """Positive roots beta with (lam|beta) an integer."""
    return [b for b in rs.positive_roots if Fraction(rs.inner(lam, b)).denominator == 1]


def check_fock_pullback(rs: RootSystem, lam: WeightVector | Sequence, n_max: int,
                        gens: WGenerators | None = None) -> VerificationReport:
    """PBW matrices on the Fock module of highest weight lam, lowest conformal
    eigenvalue and character against the W Verma module of weight lam - rho."""
    t0 = time.perf_counter()
    gens = gens or choose_generators(rs)
    if isinstance(lam, WeightVector):
        lam = lam.to_root(rs).coords
    lam = tuple(Fraction(x) for x in lam)
    bad_roots = integral_pairing_roots(rs, lam)
    generic = not bad_roots
    rep = VerificationReport("verify-fock", rs.family, rs.rank,
                             {"n_max": n_max, "weight": [qstr(x) for x in lam],
                              "hypothesis_holds": generic})
    zero = (0,) * rs.rank
    # lowest eigenvalue
    L0 = w_mode(gens, 1, 0, lam)
    eig = L0.apply({(zero, ()): Fraction(1)}).get((zero, ()), Fraction(0))
    expect = Fraction(rs.norm2(lam), 2)
    verma_weight = WeightVector(tuple(a - b for a, b in zip(lam, rs.weyl_vector)))
    k = 1 - rs.dual_coxeter
    ch = verma_character(rs, verma_weight, k, n_max)
    rep.params["lowest_eigenvalue"] = qstr(eig)
    rep.params["verma_offset"] = qstr(ch.offset)
    if eig != expect:
        rep.fail(f"lowest eigenvalue {eig} differs from |lam|^2/2 = {expect}")
    if ch.offset != expect:
        rep.fail(f"Verma character offset {ch.offset} differs from {expect}")
    for n in range(n_max + 1):
        dim = len(fock_basis(rs.rank, n))
        tuples, vecs = pbw_vectors(gens, n, lam)
        r = linalg.rank(vecs, dim)
        square = len(tuples) == dim == colored_partitions(rs.rank, n) == \
            ch.coefficient(0, n)
        if not square:
            rep.fail(f"n={n}: PBW matrix is {len(tuples)} x {dim}, character gives "
                     f"{ch.coefficient(0, n)}")
        full = r == dim
        if generic and not full:
            rep.fail(f"n={n}: rank {r} < {dim} although (lam|beta) is never integral")
        rep.entries.append({"n": n, "size": dim, "rank": r, "invertible": full})
    if not generic:
        rep.params["integral_roots"] = [list(b) for b in bad_roots]
        rep.params["first_deficient_level"] = next(
            (e["n"] for e in rep.entries if not e["invertible"]), None)
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def random_generic_weight(rs: RootSystem, rng: random.Random, max_den: int = 7
                          ) -> Tuple[Fraction, ...]:
    """Random rational weight with (lam|beta) non-integral for every root."""
    while True:
        lam = tuple(Fraction(rng.randint(-12, 12), rng.randint(2, max_den))
                    for _ in range(rs.rank))
        if not integral_pairing_roots(rs, lam):
            return lam


# ---------------------------------------------------------------------------
# Kac-Kazhdan

@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    witness: Optional[Tuple[Tuple[int, ...], int, Fraction]] = None
    reason: str = ""
    bound: int = 0

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            beta, n, N = self.witness
            w = {"beta": list(beta), "n": n, "N": qstr(N)}
        return {"generic": self.generic, "witness": w, "reason": self.reason,
                "enumeration_bound": self.bound}


def kac_kazhdan_generic(rs: RootSystem, lam: WeightVector | Sequence, k) -> GenericityResult:
    """Is lambda = k Lambda_0 + lam generic?

    Checks (lam + rho | beta) + n (k + h) outside {1, 2, ...} for every
    positive real affine root beta + n delta (n >= 1, or n = 0 and beta > 0),
    and k + h != 0 for the imaginary roots.
    """
    if isinstance(lam, WeightVector):
        lam = lam.to_root(rs).coords
    lam = tuple(Fraction(x) for x in lam)
    c = Fraction(k) + rs.dual_coxeter
    if c == 0:
        return GenericityResult(False, None, "critical level: (lambda+rho|delta) = 0")
    mu = tuple(a + b for a, b in zip(lam, rs.weyl_vector))
    bound = c.denominator if c > 0 else 0
    for beta in sorted(rs.roots, key=lambda r: (-sum(r), r)):
        a = Fraction(rs.inner(mu, beta))
        if sum(beta) > 0 and a.denominator == 1 and a >= 1:
            return GenericityResult(False, (beta, 0, a), "finite root", bound)
        if c > 0:
            # a + n c is integral on a residue class of n mod denominator(c);
            # along it the value eventually reaches the positive integers
            for n in range(1, c.denominator + 1):
                v = a + n * c
                if v.denominator == 1:
                    while v < 1:
                        n += c.denominator
                        v = a + n * c
                    return GenericityResult(False, (beta, n, v), "real affine root", bound)
        else:
            top = math.floor((a - 1) / -c) if a >= 1 else 0
            bound = max(bound, top)
            for n in range(1, top + 1):
                v = a + n * c
                if v.denominator == 1 and v >= 1:
                    return GenericityResult(False, (beta, n, v), "real affine root", bound)
    return GenericityResult(True, None, "", bound)


def check_proposition_generic(rs: RootSystem, trials: int = 100, seed: int = 0
                              ) -> VerificationReport:
    """(lam|beta) never integral implies lam - rho is generic at k = 1 - h."""
    rng = random.Random(seed)
    rep = VerificationReport("generic-random", rs.family, rs.rank,
                             {"trials": trials, "seed": seed})
    k = 1 - rs.dual_coxeter
    for _ in range(trials):
        lam = random_generic_weight(rs, rng)
        shifted = tuple(a - b for a, b in zip(lam, rs.weyl_vector))
        res = kac_kazhdan_generic(rs, shifted, k)
        if not res.generic:
            rep.fail(f"weight {[qstr(x) for x in lam]} has witness {res.witness}")
    return rep
