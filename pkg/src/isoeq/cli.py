"""Command-line entry point: ``isoeq <subcommand> ...``.

Exit codes: 0 success, 1 verify found a non-solution, 2 malformed input,
3 precondition violation, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import (
    check_structural_lemmas,
    classify,
    dimension_profile,
    sum_bound_report,
)
from .constructors import build, default_spec
from .core import tuples_equivalent, verification_report
from .errors import IsoeqError, MalformedInput
from .gf import field_make
from .io import (
    classification_to_json,
    loads,
    pair_digest,
    pair_from_json,
    pair_to_json,
    subspace_to_json,
    witness_to_json,
)
from .linalg import DEFAULT_MAX_POINTS, AmbientSpace, span
from .search import (
    Pruning,
    SearchConfig,
    enumerate_coverings,
    search_nontrivial,
    verify_covering_structure,
)

ATLAS_FIELDS = ((2, 1), (3, 1), (2, 2), (5, 1))


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _read_json(path: str | None):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _read_pair(path: str | None):
    obj = _read_json(path)
    # atlas entries carry the pair under "pair"
    if isinstance(obj, dict) and "pair" in obj and "U" not in obj:
        obj = obj["pair"]
    return pair_from_json(obj)


def _parse_vector(text: str, amb: AmbientSpace):
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise MalformedInput(f"vector {text!r}: expected comma-separated integers") from exc
    if len(vals) != amb.d or any(not 0 <= v < amb.q for v in vals):
        raise MalformedInput(f"vector {text!r}: need {amb.d} entries in [0, {amb.q})")
    return vals


def construct_json(kind: str, p: int, e: int, dim: int, s_dim: int, vectors=None, s_basis=None) -> dict:
    amb = AmbientSpace(field_make(p, e), dim)
    spec = default_spec(kind, amb, s_dim, vectors)
    if s_basis is not None:
        S = span(amb, s_basis)
        spec = type(spec)(S, *spec.vectors())
        spec.validate()
    pair = build(spec)
    out = pair_to_json(pair)
    out["type"] = spec.kind
    out["spec"] = witness_to_json(spec)
    return out


def diagnostics(pair) -> dict:
    prof = dimension_profile(pair)
    out = {
        "profile": {
            "n": prof.n,
            "X": list(prof.X),
            "Y": list(prof.Y),
            "max_v": prof.max_v,
            "max_u": prof.max_u,
        }
    }
    if not tuples_equivalent(pair.U, pair.V):
        if prof.max_u == prof.max_v:
            out["lemmas"] = check_structural_lemmas(pair).to_json()
        else:
            out["sum_bound"] = sum_bound_report(pair).to_json()
    return out


def classify_json(pair) -> dict:
    c = classify(pair)
    return classification_to_json(c, diagnostics(pair))


def search_json(report) -> dict:
    classes = []
    for pair, c in zip(report.solutions, report.classifications):
        entry = {"pair": pair_to_json(pair)}
        entry["classification"] = None if c is None else classification_to_json(c)
        classes.append(entry)
    cfg = report.config
    return {
        "field": cfg.field.to_json(),
        "ambient_dim": cfg.d,
        "m": cfg.m,
        "pruning": cfg.pruning.to_json(),
        "classes": classes,
        "counts": report.counts,
        "elapsed": report.elapsed,
    }


def build_atlas(out_dir: Path, fields=ATLAS_FIELDS, s_dims=(0, 1), extra=(0,)) -> list[dict]:
    """Write one JSON file per constructed instance plus ``index.json``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    index = []
    for p, e in fields:
        f = field_make(p, e)
        for kind, base in (("A", 2), ("B", 3), ("C", 4)):
            for s_dim in s_dims:
                for plus in extra:
                    dim = base + s_dim + plus
                    spec = default_spec(kind, AmbientSpace(f, dim), s_dim)
                    pair = build(spec)
                    digest = pair_digest(pair)
                    entry = {
                        "field": f.to_json(),
                        "q": f.q,
                        "ambient_dim": dim,
                        "type": kind,
                        "witness": witness_to_json(spec),
                        "pair": pair_to_json(pair),
                        "digest": digest,
                    }
                    name = f"q{f.q}_d{dim}_s{s_dim}_{kind}.json"
                    (out_dir / name).write_text(json.dumps(entry, indent=2) + "\n")
                    index.append({"file": name, "type": kind, "q": f.q, "ambient_dim": dim,
                                  "s_dim": s_dim, "digest": digest})
    (out_dir / "index.json").write_text(json.dumps(index, indent=2) + "\n")
    return index


def load_atlas_entry(path: Path) -> dict:
    """Read an atlas entry, re-verify its pair and digest."""
    entry = loads(Path(path).read_text())
    pair = pair_from_json(entry["pair"])
    if not verification_report(pair)["solution"]:
        raise MalformedInput(f"{path}: pair does not re-verify")
    if pair_digest(pair) != entry["digest"]:
        raise MalformedInput(f"{path}: digest mismatch")
    return entry


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoeq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def field_args(p, need_m=False):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--e", type=int, default=1)
        p.add_argument("--dim", type=int, required=True)
        if need_m:
            p.add_argument("--m", type=int, required=True)

    c = sub.add_parser("construct", help="emit a Type A/B/C pair")
    c.add_argument("--type", choices=["a", "b", "c", "A", "B", "C"], required=True)
    field_args(c)
    c.add_argument("--s-dim", type=int, default=0)
    c.add_argument("--vectors", nargs="+", help="witness vectors as comma-separated indices")
    c.add_argument("--s-basis", nargs="+", help="generators of S (overrides --s-dim)")
    c.add_argument("--out")

    v = sub.add_parser("verify", help="check a pair JSON against the equation")
    v.add_argument("input", nargs="?")
    v.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)

    k = sub.add_parser("classify", help="classify a pair JSON with m = q + 1")
    k.add_argument("input", nargs="?")
    k.add_argument("--out")

    cv = sub.add_parser("coverings", help="coverings of K^dim by m proper subspaces")
    field_args(cv, need_m=True)
    cv.add_argument("--out")

    s = sub.add_parser("search", help="exhaustive nontrivial-solution search")
    field_args(s, need_m=True)
    s.add_argument("--no-prune", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    s.add_argument("--out")

    a = sub.add_parser("atlas", help="write the catalog of constructed instances")
    a.add_argument("--out", required=True)
    a.add_argument("--s-dims", type=int, nargs="+", default=[0, 1])
    a.add_argument("--extra-dim", type=int, nargs="+", default=[0])
    return ap


def run_cli(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _dispatch(args)
    except IsoeqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def _dispatch(args) -> int:
    if args.cmd == "construct":
        amb = AmbientSpace(field_make(args.p, args.e), args.dim)
        vectors = [_parse_vector(t, amb) for t in args.vectors] if args.vectors else None
        s_basis = [_parse_vector(t, amb) for t in args.s_basis] if args.s_basis else None
        s_dim = len(s_basis) if s_basis else args.s_dim
        _emit(construct_json(args.type, args.p, args.e, args.dim, s_dim, vectors, s_basis), args.out)
        return 0
    if args.cmd == "verify":
        pair = _read_pair(args.input)
        rep = verification_report(pair, max_points=args.max_points)
        _emit(rep)
        return 0 if rep["solution"] else 1
    if args.cmd == "classify":
        pair = _read_pair(args.input)
        _emit(classify_json(pair), args.out)
        return 0
    if args.cmd == "coverings":
        f = field_make(args.p, args.e)
        V = AmbientSpace(f, args.dim).full()
        covers = enumerate_coverings(V, args.m)
        out = {
            "V": subspace_to_json(V),
            "m": args.m,
            "count": len(covers),
            "coverings": [[subspace_to_json(s) for s in cov] for cov in covers],
        }
        if args.m == f.q + 1:
            certs = []
            for cov in covers:
                cert = verify_covering_structure(V, cov)
                cert["S"] = subspace_to_json(cert["S"])
                certs.append(cert)
            out["certificates"] = certs
        _emit(out, args.out)
        return 0
    if args.cmd == "search":
        f = field_make(args.p, args.e)
        pruning = Pruning.off() if args.no_prune else Pruning.default(args.m, f.q)
        cfg = SearchConfig(f, args.dim, args.m, pruning, max_points=args.max_points, jobs=args.jobs)
        _emit(search_json(search_nontrivial(cfg)), args.out)
        return 0
    if args.cmd == "atlas":
        index = build_atlas(Path(args.out), s_dims=tuple(args.s_dims), extra=tuple(args.extra_dim))
        print(json.dumps({"entries": len(index), "out": args.out}))
        return 0
    raise MalformedInput(f"unknown command {args.cmd}")


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
