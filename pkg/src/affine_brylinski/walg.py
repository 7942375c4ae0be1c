"""The W-algebra inside the level-one Fock space as the joint kernel of the
screening zero modes, its free generators and their modes on Fock modules."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .cartan import RootSystem, build_root_system
from .fock import FockElement, state_mode, sugawara_vector
from .graded import ModeOperator, add_into, fock_basis, fock_index
from .lattice import screening_zero_mode
from .serialize import CONVENTION_VERSION, SCHEMA_VERSION, qparse, qstr
from .series import w_vacuum_character

# default kernel-check cutoff is lowered until pi_1 pieces stay below this size
KERNEL_DIM_LIMIT = 1000


class EngineError(RuntimeError):
    """A computed dimension disagrees with its closed-form count."""


def screening_rows(rs: RootSystem, d: int) -> List[Dict[int, Fraction]]:
    """Stacked screening matrices on pi_1^[d] (rows indexed by target states)."""
    rows: List[Dict[int, Fraction]] = []
    for i in range(rs.rank):
        rows.extend(screening_zero_mode(rs, i).matrix_rows(((0,) * rs.rank, d)))
    return rows


def w_graded_kernel(rs: RootSystem, d: int) -> List[FockElement]:
    """Exact basis of W^[d] (reduced echelon form over the Fock basis)."""
    basis = fock_basis(rs.rank, d)
    kernel = linalg.nullspace(screening_rows(rs, d), len(basis)) if d > 0 else \
        [{0: Fraction(1)}]
    expected = w_vacuum_character(rs, d).coefficient(0, d)
    if len(kernel) != expected:
        raise EngineError(f"{rs.name}: dim W^[{d}] = {len(kernel)}, free generation predicts "
                          f"{expected}")
    return [FockElement(1, (0,) * rs.rank, {basis[j]: c for j, c in v.items()})
            for v in kernel]


def default_cutoff(rs: RootSystem) -> int:
    dl = rs.degrees[-1]
    cut = max(2 * dl, dl + 4)
    while cut > dl and linalg_dim(rs, cut) > KERNEL_DIM_LIMIT:
        cut -= 1
    return cut


def linalg_dim(rs: RootSystem, d: int) -> int:
    from .series import colored_partitions
    return colored_partitions(rs.rank, d)


@dataclass(frozen=True)
class WGenerators:
    family: str
    rank: int
    generators: Tuple[Tuple[int, FockElement], ...]
    kernel_dims: Tuple[Tuple[int, int], ...] = ()
    cutoff: int = 0
    metadata: Dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def rs(self) -> RootSystem:
        return build_root_system(self.family, self.rank)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(d for d, _ in self.generators)

    def generator(self, p: int) -> FockElement:
        """1-based generator index."""
        return self.generators[p - 1][1]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "convention": CONVENTION_VERSION,
            "family": self.family,
            "rank": self.rank,
            "cutoff": self.cutoff,
            "kernel_dims": {str(d): k for d, k in self.kernel_dims},
            "metadata": dict(sorted(self.metadata.items())),
            "generators": [
                {"degree": d,
                 "terms": [{"monomial": [[i + 1, n] for i, n in m], "coeff": qstr(c)}
                           for m, c in w.terms.items()]}
                for d, w in self.generators
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WGenerators":
        if data.get("convention") != CONVENTION_VERSION:
            raise ValueError(f"convention mismatch: {data.get('convention')!r}")
        gens = []
        rank = int(data["rank"])
        for g in data["generators"]:
            terms = {tuple(sorted((int(i) - 1, int(n)) for i, n in t["monomial"])):
                     qparse(t["coeff"]) for t in g["terms"]}
            gens.append((int(g["degree"]), FockElement(1, (0,) * rank, terms)))
        return cls(data["family"], rank, tuple(gens),
                   tuple(sorted((int(d), int(k)) for d, k in data["kernel_dims"].items())),
                   int(data["cutoff"]), dict(data.get("metadata", {})))

    def cache_key(self) -> str:
        return content_key(self.family, self.rank, self.cutoff)


def content_key(family: str, rank: int, cutoff: int) -> str:
    blob = json.dumps([family.upper(), rank, cutoff, CONVENTION_VERSION, SCHEMA_VERSION])
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def w_mode(gens: WGenerators, p: int, n: int, lam: Sequence | None = None) -> ModeOperator:
    """omega^(p)_n on the Fock module of highest weight ``lam`` (degree s -> s - n)."""
    rs = gens.rs
    d, w = gens.generators[p - 1]
    op = state_mode(rs, w, n + d - 1, lam)
    op.name = f"W{p}_{n}"
    op.index = Fraction(n)
    return op


def apply_word(ops: Sequence[ModeOperator], v: Dict) -> Dict:
    """Apply ops[0] ops[1] ... ops[-1] to v (rightmost first)."""
    for op in reversed(ops):
        v = op.apply(v)
        if not v:
            break
    return v


def vacuum_pbw_tuples(degrees: Sequence[int], d: int) -> List[Tuple[Tuple[int, int], ...]]:
    """Tuples ((p1,k1),...) with p weakly decreasing, k_j <= -deg(p_j), k weakly
    increasing for equal p, and sum of -k_j equal to d."""
    out: List[Tuple[Tuple[int, int], ...]] = []
    ell = len(degrees)

    def rec(remaining, max_p, min_k, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for p in range(max_p, 0, -1):
            lo = min_k if p == max_p else None
            for size in range(degrees[p - 1], remaining + 1):
                k = -size
                if lo is not None and k < lo:
                    continue
                rec(remaining - size, p, k, acc + [(p, k)])

    rec(d, ell, None, [])
    return out


def pbw_vacuum_vectors(gens: WGenerators, d: int, upto: int | None = None) -> List[Dict]:
    """PBW vectors of weight d in the first ``upto`` generators applied to |0>."""
    rs = gens.rs
    degrees = gens.degrees if upto is None else gens.degrees[:upto]
    zero = (0,) * rs.rank
    vectors = []
    for tup in vacuum_pbw_tuples(degrees, d):
        ops = [w_mode(gens, p, k) for p, k in tup]
        vectors.append(apply_word(ops, {(zero, ()): Fraction(1)}))
    return vectors


def _to_index(rs: RootSystem, v: Dict, d: int) -> Dict[int, Fraction]:
    idx = fock_index(rs.rank, d)
    return {idx[m]: c for (_, m), c in v.items()}


def choose_generators(rs: RootSystem, cutoff: int | None = None) -> WGenerators:
    """Free generators: the Sugawara vector, then for each further degree the
    leftmost kernel basis vectors independent of the decomposables."""
    if cutoff is None:
        cutoff = default_cutoff(rs)
    dl = rs.degrees[-1]
    if cutoff < dl:
        raise ValueError(f"cutoff {cutoff} is below the top degree {dl}")
    sug = sugawara_vector(rs)
    for i in range(rs.rank):
        if screening_zero_mode(rs, i).apply(sug.as_states()):
            raise EngineError("Sugawara vector is not screened")
    gens: List[Tuple[int, FockElement]] = [(2, sug)]
    kernel_dims = []
    kernels = {}
    for d in range(0, cutoff + 1):
        kernels[d] = w_graded_kernel(rs, d)
        kernel_dims.append((d, len(kernels[d])))
    for d in sorted(set(rs.degrees[1:])):
        partial = WGenerators(rs.family, rs.rank, tuple(gens))
        decomp = [_to_index(rs, v, d) for v in pbw_vacuum_vectors(partial, d)]
        decomp = [v for v in decomp if v]
        dim = len(fock_basis(rs.rank, d))
        base_rank = linalg.rank(decomp, dim)
        if base_rank != len(decomp):
            raise EngineError(f"decomposables in degree {d} are dependent")
        cands = [{fock_index(rs.rank, d)[m]: c for m, c in w.terms.items()}
                 for w in kernels[d]]
        pivots = linalg.independent_columns(decomp + cands, dim)
        fresh = [j - len(decomp) for j in pivots if j >= len(decomp)]
        want = rs.degrees.count(d)
        if len(fresh) != want:
            raise EngineError(f"degree {d}: found {len(fresh)} fresh generators, want {want}")
        for j in fresh:
            gens.append((d, kernels[d][j]))
    meta = {"pivot_rule": "leftmost kernel-basis vectors outside decomposables",
            "first_generator": "sugawara",
            "kernel_basis": "reduced echelon over sorted Fock monomials"}
    return WGenerators(rs.family, rs.rank, tuple(gens), tuple(kernel_dims), cutoff, meta)


def perturb(gens: WGenerators, p: int, coeffs: Sequence[Fraction]) -> WGenerators:
    """Replace generator p by itself plus a combination of decomposables of equal degree."""
    d, w = gens.generators[p - 1]
    partial = WGenerators(gens.family, gens.rank, gens.generators[:p - 1])
    extra = pbw_vacuum_vectors(partial, d)
    terms = dict(w.terms)
    for c, v in zip(coeffs, extra):
        for (_, m), x in v.items():
            add_into(terms, m, Fraction(c) * x)
    new = list(gens.generators)
    new[p - 1] = (d, FockElement(1, w.weight, terms))
    meta = dict(gens.metadata)
    meta["perturbed"] = f"generator {p}"
    return WGenerators(gens.family, gens.rank, tuple(new), gens.kernel_dims, gens.cutoff, meta)
