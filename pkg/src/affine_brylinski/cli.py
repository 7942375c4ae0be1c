"""Command-line driver.

Exit codes: 0 success, 2 usage or configuration error, 3 a checked
statement failed, 4 a size limit was hit.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import graded
from .cartan import UnsupportedRootSystem, WeightVector, build_root_system, chevalley_constants
from .serialize import dumps, qstr

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATION = 3
EXIT_RESOURCE = 4

CACHE_ENV = "AFFINE_BRYLINSKI_CACHE"

# built-in defaults; a config file overrides these and flags override both
DEFAULTS = {
    "family": None,
    "rank": None,
    "n": 3,
    "q": 6,
    "t": 12,
    "cutoff": None,
    "k": None,
    "weight": None,
    "format": "json",
    "cache_dir": None,
    "no_cache": False,
    "timing": False,
    "raw": False,
    "perturb": False,
    "max_basis": graded.MAX_BASIS,
}

INT_KEYS = {"rank", "n", "q", "t", "cutoff", "max_basis"}
BOOL_KEYS = {"no_cache", "timing", "raw", "perturb"}


class UsageError(ValueError):
    pass


class Violation(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str
    rank: int
    n_max: int = 3
    q_cap: int = 6
    t_cap: int = 12
    w_degree_cutoff: Optional[int] = None
    k: Optional[Fraction] = None
    weight: Optional[str] = None
    fmt: str = "json"
    cache_dir: Optional[Path] = None
    timing: bool = False
    raw: bool = False
    perturb: bool = False
    max_basis: int = graded.MAX_BASIS

    def validate(self) -> None:
        if not self.family or self.rank is None:
            raise UsageError("--family and --rank are required")
        for name in ("rank", "n_max", "q_cap", "t_cap", "max_basis"):
            if getattr(self, name) is None or getattr(self, name) < 0:
                raise UsageError(f"{name} must be a nonnegative integer")
        if self.rank < 1:
            raise UsageError("rank must be positive")
        if self.w_degree_cutoff is not None and self.w_degree_cutoff < 1:
            raise UsageError("cutoff must be positive")
        if self.fmt not in ("json", "table"):
            raise UsageError("format must be json or table")


def read_config(path: str) -> Dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: Dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    if key in INT_KEYS:
        try:
            return int(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{key} must be an integer, got {value!r}") from exc
    if key in BOOL_KEYS:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-brylinski",
        description="Exact checks for the Brylinski filtration of the basic representation "
                    "and the W-algebra at level 1 - h.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="Cartan type letter: A, D or E")
    common.add_argument("--rank", type=int)
    common.add_argument("--config", help="file of key = value lines (flags win)")
    common.add_argument("--format", choices=["json", "table"], default=None)
    common.add_argument("--cache-dir", dest="cache_dir", default=None,
                        help=f"cache directory (env {CACHE_ENV})")
    common.add_argument("--no-cache", dest="no_cache", action="store_true", default=None)
    common.add_argument("--timing", action="store_true", default=None,
                        help="include wall-clock timings (breaks byte-identity)")
    common.add_argument("--max-basis", dest="max_basis", type=int, default=None,
                        help="largest graded piece to build")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("roots", parents=[common], help="root data and structure constants")
    p = sub.add_parser("hilb", parents=[common], help="expand the (t, q) product formula")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p = sub.add_parser("wgens", parents=[common], help="free generators of W")
    p.add_argument("--cutoff", type=int, default=None)
    p = sub.add_parser("brylinski", parents=[common], help="brute-force jump table")
    p.add_argument("--n", type=int, default=None)
    p = sub.add_parser("verify-main", parents=[common], help="PBW basis of Z and filtration")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--perturb", action="store_true", default=None,
                   help="also run with generators shifted by decomposables")
    p = sub.add_parser("verify-fock", parents=[common], help="PBW matrices on a Fock module")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--weight", default=None,
                   help="comma-separated fundamental coordinates, 0, or rho/h")
    p = sub.add_parser("generic", parents=[common], help="Kac-Kazhdan genericity")
    p.add_argument("--k", default=None, help="level (rational)")
    p.add_argument("--weight", default=None, help="comma-separated fundamental coordinates or 0")
    p.add_argument("--raw", action="store_true", default=None,
                   help="test the weight as given instead of weight - rho")
    return parser


def make_config(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        raise UsageError("invalid arguments") if exc.code else exc
    values = dict(DEFAULTS)
    if getattr(ns, "config", None):
        for k, v in read_config(ns.config).items():
            values[k] = _coerce(k, v)
    for key in DEFAULTS:
        v = getattr(ns, key, None)
        if v is not None:
            values[key] = v
    try:
        k = Fraction(values["k"]) if values["k"] is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse level {values['k']!r}") from exc
    cache = values["cache_dir"] or os.environ.get(CACHE_ENV) or \
        str(Path.home() / ".cache" / "affine-brylinski")
    cfg = RunConfig(
        command=ns.command, family=(values["family"] or "").upper(),
        rank=_coerce("rank", values["rank"]), n_max=_coerce("n", values["n"]),
        q_cap=_coerce("q", values["q"]), t_cap=_coerce("t", values["t"]),
        w_degree_cutoff=_coerce("cutoff", values["cutoff"]),
        k=k,
        weight=values["weight"], fmt=values["format"],
        cache_dir=None if _coerce("no_cache", values["no_cache"]) else Path(cache),
        timing=_coerce("timing", values["timing"]), raw=_coerce("raw", values["raw"]),
        perturb=_coerce("perturb", values["perturb"]),
        max_basis=_coerce("max_basis", values["max_basis"]))
    cfg.validate()
    return cfg


def parse_weight(rs, text: Optional[str]) -> tuple:
    """Root-basis coordinates from fundamental-basis text."""
    if text is None:
        raise UsageError("--weight is required")
    text = text.strip()
    if text in ("0", ""):
        return (Fraction(0),) * rs.rank
    if text.replace(" ", "") in ("rho/h", "rho/h^v"):
        return tuple(Fraction(x) / rs.coxeter_number for x in rs.weyl_vector)
    try:
        parts = [Fraction(p) for p in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse weight {text!r}") from exc
    if len(parts) != rs.rank:
        raise UsageError(f"weight needs {rs.rank} coordinates, got {len(parts)}")
    return WeightVector(tuple(parts), "fundamental").to_root(rs).coords


# ---------------------------------------------------------------------------
# commands

def load_generators(cfg: RunConfig, rs):
    from .walg import WGenerators, choose_generators, content_key, default_cutoff
    cutoff = cfg.w_degree_cutoff or default_cutoff(rs)
    path = None
    if cfg.cache_dir is not None:
        path = cfg.cache_dir / f"wgens-{rs.name}-{content_key(rs.family, rs.rank, cutoff)}.json"
        if path.exists():
            import json
            try:
                return WGenerators.from_json(json.loads(path.read_text())), True
            except (ValueError, KeyError):
                pass  # stale or foreign file: recompute
    gens = choose_generators(rs, cutoff)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(dumps(gens.to_json()))
        tmp.replace(path)
    return gens, False


def cmd_roots(cfg: RunConfig, rs) -> dict:
    cb = chevalley_constants(rs)
    out = rs.to_json()
    # N(alpha, beta) for positive alpha, beta; the rest follow by symmetry
    out["structure_constants"] = [[list(a), list(b), n] for (a, b), n in
                                  sorted(cb.structure.items()) if sum(a) > 0 and sum(b) > 0]
    out["cocycle_ordering"] = [i + 1 for i in cb.ordering]
    return out


def cmd_hilb(cfg: RunConfig, rs) -> dict:
    from .series import hilbert_grZ
    s = hilbert_grZ(rs, cfg.t_cap, cfg.q_cap)
    rows = {str(q): {str(t): qstr(c) for t, c in s.q_row(q).items()}
            for q in range(cfg.q_cap + 1)}
    return {"series": s.to_json(), "rows": rows}


def cmd_wgens(cfg: RunConfig, rs) -> dict:
    gens, cached = load_generators(cfg, rs)
    out = gens.to_json()
    out["cache_key"] = gens.cache_key()
    return out


def cmd_brylinski(cfg: RunConfig, rs) -> dict:
    from .brylinski import Filtration, expected_profile, filtration_profile
    eng = Filtration(rs, max_basis=cfg.max_basis)
    got = filtration_profile(rs, cfg.n_max, eng)
    want = expected_profile(rs, cfg.n_max)
    table = []
    ok = True
    for n in range(cfg.n_max + 1):
        match = got[n] == want[n]
        ok &= match
        table.append({"n": n, "computed": {str(t): c for t, c in sorted(got[n].items())},
                      "expected": {str(t): c for t, c in sorted(want[n].items())},
                      "match": match})
    out = {"jumps": table, "ok": ok}
    if not ok:
        raise Violation(dumps(out))
    return out


def cmd_verify_main(cfg: RunConfig, rs) -> dict:
    from .verify import check_theorem_main
    from .walg import perturb
    from .brylinski import Filtration
    gens, _ = load_generators(cfg, rs)
    eng = Filtration(rs, max_basis=cfg.max_basis)
    rep = check_theorem_main(rs, cfg.n_max, gens, eng)
    out = rep.to_json(cfg.timing)
    if cfg.perturb:
        extra = []
        for p in range(2, len(gens.generators) + 1):
            pg = perturb(gens, p, [Fraction(1)] * 8)
            prep = check_theorem_main(rs, cfg.n_max, pg, eng)
            extra.append({"generator": p, "ok": prep.ok, "witnesses": prep.witnesses})
        out["perturbed_runs"] = extra  # informational
    if not rep.ok:
        raise Violation(dumps(out))
    return out


def cmd_verify_fock(cfg: RunConfig, rs) -> dict:
    from .verify import check_fock_pullback
    lam = parse_weight(rs, cfg.weight)
    gens, _ = load_generators(cfg, rs)
    rep = check_fock_pullback(rs, lam, cfg.n_max, gens)
    out = rep.to_json(cfg.timing)
    if not rep.ok:
        raise Violation(dumps(out))
    return out


def cmd_generic(cfg: RunConfig, rs) -> dict:
    from .verify import kac_kazhdan_generic
    if cfg.k is None:
        raise UsageError("--k is required")
    lam = parse_weight(rs, cfg.weight)
    probe = lam if cfg.raw else tuple(a - b for a, b in zip(lam, rs.weyl_vector))
    res = kac_kazhdan_generic(rs, probe, cfg.k)
    out = res.to_json()
    out["k"] = qstr(cfg.k)
    out["weight"] = [qstr(x) for x in lam]
    out["probed_weight"] = [qstr(x) for x in probe]
    out["shifted_by_rho"] = not cfg.raw
    return out


COMMANDS = {
    "roots": cmd_roots,
    "hilb": cmd_hilb,
    "wgens": cmd_wgens,
    "brylinski": cmd_brylinski,
    "verify-main": cmd_verify_main,
    "verify-fock": cmd_verify_fock,
    "generic": cmd_generic,
}


def render_table(command: str, out: dict) -> str:
    lines: List[str] = []
    if command == "hilb":
        for q, row in out["rows"].items():
            terms = " + ".join(f"{c} t^{t}" for t, c in row.items()) or "0"
            lines.append(f"q^{q}: {terms}")
    elif command == "brylinski":
        for row in out["jumps"]:
            mark = "ok" if row["match"] else "MISMATCH"
            comp = ", ".join(f"t^{t}:{c}" for t, c in row["computed"].items())
            exp = ", ".join(f"t^{t}:{c}" for t, c in row["expected"].items())
            lines.append(f"n={row['n']}  computed {{{comp}}}  product formula {{{exp}}}  {mark}")
    elif command in ("verify-main", "verify-fock"):
        for e in out["entries"]:
            lines.append("  ".join(f"{k}={v}" for k, v in sorted(e.items())))
        lines.append("ok" if out["ok"] else "FAILED: " + "; ".join(out["witnesses"]))
    elif command == "generic":
        if out["generic"]:
            lines.append("generic")
        else:
            lines.append(f"not generic ({out['reason']}): witness {out['witness']}")
    else:
        return dumps(out)
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str]) -> int:
    try:
        cfg = make_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    graded.MAX_BASIS = cfg.max_basis
    try:
        rs = build_root_system(cfg.family, cfg.rank)
    except (UnsupportedRootSystem, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = COMMANDS[cfg.command](cfg, rs)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Violation as exc:
        sys.stdout.write(str(exc))
        print("error: a checked statement failed", file=sys.stderr)
        return EXIT_VIOLATION
    except graded.ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if cfg.fmt == "table":
        sys.stdout.write(render_table(cfg.command, out))
    else:
        out = {"command": cfg.command, "result": out}
        sys.stdout.write(dumps(out))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
