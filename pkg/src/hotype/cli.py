"""Command-line front end.

Every subcommand reads JSON files, runs one computation and prints one
report.  JSON output uses sorted keys, so identical inputs give identical
bytes.  Exit status: 0 success, 2 invalid input, 3 resource limit,
1 failed internal check, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .bundles import (DEFAULT_ENUMERATION_BOUND, DEFAULT_SEARCH_LIMIT, are_concordant, are_isomorphic,
                      bundle_from_json, classifying_map, enumerate_bundles, total_space)
from .classifying import classifying_homology, morita_invariance_check, universal_total
from .errors import HotypeError, ParseError
from .groupoid import FiniteGroupoid, GroupoidFunctor, validate_groupoid
from .simplicial import OrderedSimplicialComplex, chain_complex, homology

EXIT_USAGE = 64

SUBCOMMANDS = ("validate", "homology", "euniv", "morita", "classify", "total-space",
               "isomorphic", "concordance", "enumerate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    groupoid: str | None
    bundles: tuple[str, ...]
    functor: str | None
    base: str | None
    k_max: int | None
    truncation: int | None
    fmt: str
    search_limit: int
    bound: int

    def __post_init__(self):
        if self.k_max is not None and self.k_max < 0:
            raise UsageError("--kmax must be >= 0")
        if self.truncation is not None:
            if self.k_max is not None and self.truncation < self.k_max + 1:
                raise UsageError("--truncation must be >= kmax + 1")
            if self.truncation < 0:
                raise UsageError("--truncation must be >= 0")
        if self.search_limit < 1:
            raise UsageError("--search-limit must be >= 1")
        if self.bound < 1:
            raise UsageError("--bound must be >= 1")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hotype", description="Classifying spaces and bundles for finite groupoids.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--groupoid", metavar="PATH")
    p.add_argument("--bundle", metavar="PATH", action="append", default=[])
    p.add_argument("--functor", metavar="PATH")
    p.add_argument("--base", metavar="PATH", help="simplicial complex file (enumerate)")
    p.add_argument("--kmax", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--search-limit", type=int, default=DEFAULT_SEARCH_LIMIT)
    p.add_argument("--bound", type=int, default=DEFAULT_ENUMERATION_BOUND,
                   help="largest candidate space enumerate will scan")
    return p


def parse_config(argv) -> RunConfig:
    a = build_parser().parse_args(argv)
    return RunConfig(a.subcommand, a.groupoid, tuple(a.bundle), a.functor, a.base, a.kmax,
                     a.truncation, a.format, a.search_limit, a.bound)


# -- file loading ---------------------------------------------------------------

def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}", path=str(path)) from None


def _groupoid_ref(ref, relative_to: Path) -> FiniteGroupoid:
    """A groupoid given inline or as a path relative to the referring file."""
    if isinstance(ref, str):
        return validate_groupoid(_read_json(relative_to.parent / ref))
    return validate_groupoid(ref)


def load_groupoid(path) -> FiniteGroupoid:
    return validate_groupoid(_read_json(path))


def load_bundle(path, groupoid: FiniteGroupoid | None = None):
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: bundle must be a JSON object")
    if groupoid is None:
        if "groupoid" not in data:
            raise ParseError(f"{path}: bundle names no groupoid and --groupoid was not given")
        groupoid = _groupoid_ref(data["groupoid"], Path(path))
    return bundle_from_json(data, groupoid)


def load_functor(path) -> GroupoidFunctor:
    data = _read_json(path)
    if not isinstance(data, dict) or set(data) != {"source", "target", "objects", "morphisms"}:
        raise ParseError(f"{path}: functor needs exactly source/target/objects/morphisms")
    src = _groupoid_ref(data["source"], Path(path))
    tgt = _groupoid_ref(data["target"], Path(path))
    return GroupoidFunctor(src, tgt, {str(k): str(v) for k, v in data["objects"].items()},
                           {str(k): str(v) for k, v in data["morphisms"].items()})


def load_complex(path) -> OrderedSimplicialComplex:
    data = _read_json(path)
    try:
        return OrderedSimplicialComplex.from_facets(data["vertices"], data["simplices"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed simplicial complex: {exc}") from None


# -- subcommands ----------------------------------------------------------------

def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this subcommand")
    return value


def _one_bundle(cfg: RunConfig, g):
    if len(cfg.bundles) != 1:
        raise UsageError("exactly one --bundle is required")
    return load_bundle(cfg.bundles[0], g)


def _two_bundles(cfg: RunConfig, g):
    if len(cfg.bundles) != 2:
        raise UsageError("exactly two --bundle flags are required")
    return load_bundle(cfg.bundles[0], g), load_bundle(cfg.bundles[1], g)


def _opt_groupoid(cfg):
    return load_groupoid(cfg.groupoid) if cfg.groupoid else None


def cmd_validate(cfg: RunConfig):
    given = [x for x in (cfg.groupoid, cfg.functor) if x] + list(cfg.bundles)
    if len(given) != 1:
        raise UsageError("validate takes exactly one of --groupoid, --functor, --bundle")
    if cfg.groupoid:
        g = load_groupoid(cfg.groupoid)
        return {"valid": True, "kind": "groupoid", "id": g.digest(),
                "objects": len(g.objects), "morphisms": len(g.morphisms)}
    if cfg.functor:
        f = load_functor(cfg.functor)
        return {"valid": True, "kind": "functor", "source": f.source.digest(),
                "target": f.target.digest()}
    b = load_bundle(cfg.bundles[0])
    return {"valid": True, "kind": "bundle", "groupoid": b.groupoid.digest(),
            "vertices": len(b.base.vertices), "simplices": len(b.base.simplices)}


def cmd_homology(cfg: RunConfig):
    k_max = _need(cfg.k_max, "--kmax")
    g = load_groupoid(_need(cfg.groupoid, "--groupoid"))
    return classifying_homology(g, k_max, cfg.truncation).to_json()


def cmd_euniv(cfg: RunConfig):
    k_max = _need(cfg.k_max, "--kmax")
    g = load_groupoid(_need(cfg.groupoid, "--groupoid"))
    return universal_total(g, k_max, cfg.truncation).to_json()


def cmd_morita(cfg: RunConfig):
    k_max = _need(cfg.k_max, "--kmax")
    f = load_functor(_need(cfg.functor, "--functor"))
    return morita_invariance_check(f, k_max).to_json()


def cmd_classify(cfg: RunConfig):
    b = _one_bundle(cfg, _opt_groupoid(cfg))
    if cfg.truncation is not None and cfg.truncation < b.base.dim:
        raise UsageError(f"--truncation must be >= base dimension {b.base.dim}")
    m = classifying_map(b, cfg.truncation)
    src, tgt = m.source, m.target
    images = []
    for n, row in enumerate(m.maps):
        for x, y in enumerate(row):
            key = tgt.levels[n][y]
            images.append({"simplex": list(src.levels[n][x]),
                           "image": key if n == 0 else list(key)})
    return {"groupoid": b.groupoid.digest(), "truncation": tgt.truncation, "map": images}


def cmd_total_space(cfg: RunConfig):
    b = _one_bundle(cfg, _opt_groupoid(cfg))
    t = total_space(b)
    k_max = cfg.k_max if cfg.k_max is not None else max(b.base.dim, 0)
    return {"groupoid": b.groupoid.digest(), "level_counts": t.total.counts(),
            "fibers": {v: len(t.fiber(v)) for v in b.base.vertices},
            "homology": homology(chain_complex(t.total), k_max).to_json()}


def cmd_isomorphic(cfg: RunConfig):
    b0, b1 = _two_bundles(cfg, _opt_groupoid(cfg))
    lam = are_isomorphic(b0, b1)
    if lam is None:
        return {"isomorphic": False}
    return {"isomorphic": True, "lambda": dict(sorted(lam.items()))}


def cmd_concordance(cfg: RunConfig):
    b0, b1 = _two_bundles(cfg, _opt_groupoid(cfg))
    cert = are_concordant(b0, b1, cfg.search_limit)
    return {"concordant": False} if cert is None else cert.to_json()


def cmd_enumerate(cfg: RunConfig):
    gpath, bpath = _need(cfg.groupoid, "--groupoid"), _need(cfg.base, "--base")
    g, base = load_groupoid(gpath), load_complex(bpath)
    e = enumerate_bundles(base, g, cfg.bound, cfg.search_limit)
    return {"groupoid": g.digest(), "bundles": len(e.bundles), "class_count": e.class_count,
            "classes": [{"size": len(c), "representative": e.bundles[c[0]].to_json(g.digest())}
                        for c in e.classes]}


COMMANDS = {
    "validate": cmd_validate, "homology": cmd_homology, "euniv": cmd_euniv,
    "morita": cmd_morita, "classify": cmd_classify, "total-space": cmd_total_space,
    "isomorphic": cmd_isomorphic, "concordance": cmd_concordance, "enumerate": cmd_enumerate,
}


# -- rendering ------------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def _profile_text(p):
    from .simplicial import HomologyProfile
    return str(HomologyProfile.from_json(p))


def render_text(subcommand, report) -> str:
    if "homology" in report and isinstance(report["homology"], dict):
        lines = [f"H = {_profile_text(report['homology'])}"]
        if "level_counts" in report:
            lines.append("level counts: " + " ".join(map(str, report["level_counts"])))
        return "\n".join(lines)
    if subcommand == "morita":
        return "\n".join([f"source H = {_profile_text(report['source']['homology'])}",
                          f"target H = {_profile_text(report['target']['homology'])}",
                          f"cone H = {_profile_text(report['cone_homology'])}",
                          f"invariant: {str(report['invariant']).lower()}"])
    if subcommand == "enumerate":
        return f"{report['bundles']} bundles, {report['class_count']} concordance classes"
    if subcommand == "classify":
        return "\n".join(f"{','.join(m['simplex'])} -> {m['image'] if isinstance(m['image'], str) else ','.join(m['image'])}"
                         for m in report["map"])
    return "\n".join(f"{k}: {_dump(v) if not isinstance(v, str) else v}" for k, v in sorted(report.items()))


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(argv)
        report = COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        stderr.write(build_parser().format_usage())
        stderr.write(f"hotype: error: {exc}\n")
        stdout.write(_dump({"error": "UsageError", "reason": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except HotypeError as exc:
        body = exc.to_json()
        if cfg.fmt == "text":
            stdout.write(f"error ({body['reason']}): {body['message']}\n")
        else:
            stdout.write(_dump(body) + "\n")
        return exc.exit_code
    if cfg.fmt == "text":
        stdout.write(render_text(cfg.subcommand, report) + "\n")
    else:
        stdout.write(_dump(report) + "\n")
    return 0


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
