"""JSON interchange.  Field elements are encoded as their integer index."""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .classify import Classification
from .constructors import SPECS, VECTOR_COUNT
from .core import SolutionPair, SpaceTuple
from .errors import MalformedInput, NonCanonicalBasis
from .gf import FieldSpec, field_make
from .linalg import AmbientSpace, Subspace, Vector, subspace_from_rref


def _require(obj: Any, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedInput(f"{where}: missing field '{key}'")
    return obj[key]


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedInput(f"{where}: expected an integer, got {v!r}")
    return v


def field_to_json(f: FieldSpec) -> dict:
    return f.to_json()


def field_from_json(obj: Any) -> FieldSpec:
    p = _int(_require(obj, "p", "field"), "field.p")
    e = _int(obj.get("e", 1), "field.e")
    try:
        f = field_make(p, e)
    except ValueError as exc:
        raise MalformedInput(f"field: {exc}") from exc
    modulus = obj.get("modulus")
    if modulus is not None and tuple(modulus) != f.modulus:
        raise MalformedInput(
            f"field.modulus: {modulus} differs from the fixed modulus {list(f.modulus)} for GF({p}^{e})"
        )
    return f


def vector_to_json(x: Vector) -> list[int]:
    return list(x)


def vector_from_json(obj: Any, amb: AmbientSpace, where: str = "vector") -> Vector:
    if not isinstance(obj, list):
        raise MalformedInput(f"{where}: expected a list")
    if len(obj) != amb.d:
        raise MalformedInput(f"{where}: length {len(obj)} != ambient dim {amb.d}")
    out = []
    for k, v in enumerate(obj):
        v = _int(v, f"{where}[{k}]")
        if not 0 <= v < amb.q:
            raise MalformedInput(f"{where}[{k}]: element index {v} outside [0, {amb.q})")
        out.append(v)
    return tuple(out)


def subspace_to_json(s: Subspace) -> dict:
    return {"ambient_dim": s.d, "basis": [list(r) for r in s.basis]}


def subspace_from_json(obj: Any, amb: AmbientSpace, where: str = "subspace") -> Subspace:
    d = _int(_require(obj, "ambient_dim", where), f"{where}.ambient_dim")
    if d != amb.d:
        raise MalformedInput(f"{where}.ambient_dim: {d} != {amb.d}")
    basis = _require(obj, "basis", where)
    if not isinstance(basis, list):
        raise MalformedInput(f"{where}.basis: expected a list of rows")
    rows = [vector_from_json(r, amb, f"{where}.basis[{k}]") for k, r in enumerate(basis)]
    try:
        return subspace_from_rref(amb, rows)
    except NonCanonicalBasis as exc:
        raise NonCanonicalBasis(f"{where}.basis: {exc}") from exc


def tuple_from_json(obj: Any, amb: AmbientSpace, where: str) -> SpaceTuple:
    if not isinstance(obj, list) or not obj:
        raise MalformedInput(f"{where}: expected a nonempty list of subspaces")
    return SpaceTuple(tuple(subspace_from_json(s, amb, f"{where}[{k}]") for k, s in enumerate(obj)))


def pair_to_json(p: SolutionPair) -> dict:
    return {
        "field": field_to_json(p.field),
        "ambient_dim": p.ambient.d,
        "U": [subspace_to_json(s) for s in p.U],
        "V": [subspace_to_json(s) for s in p.V],
    }


def pair_from_json(obj: Any) -> SolutionPair:
    f = field_from_json(_require(obj, "field", "pair"))
    d = _int(_require(obj, "ambient_dim", "pair"), "pair.ambient_dim")
    if d < 1:
        raise MalformedInput("pair.ambient_dim: must be >= 1")
    amb = AmbientSpace(f, d)
    U = tuple_from_json(_require(obj, "U", "pair"), amb, "U")
    V = tuple_from_json(_require(obj, "V", "pair"), amb, "V")
    if len(U) != len(V):
        raise MalformedInput(f"pair: |U| = {len(U)} differs from |V| = {len(V)}")
    return SolutionPair(U, V)


def witness_to_json(spec) -> dict:
    out = {"type": spec.kind, "S": subspace_to_json(spec.S)}
    for name, v in zip("abcd", spec.vectors()):
        out[name] = vector_to_json(v)
    return out


def witness_from_json(obj: Any, amb: AmbientSpace):
    kind = _require(obj, "type", "witness")
    if kind not in SPECS:
        raise MalformedInput(f"witness.type: unknown type {kind!r}")
    S = subspace_from_json(_require(obj, "S", "witness"), amb, "witness.S")
    vecs = [
        vector_from_json(_require(obj, name, "witness"), amb, f"witness.{name}")
        for name in "abcd"[: VECTOR_COUNT[kind]]
    ]
    return SPECS[kind](S, *vecs)


def classification_to_json(c: Classification, diagnostics: dict | None = None) -> dict:
    return {
        "kind": c.kind,
        "witness": None if c.witness is None else witness_to_json(c.witness),
        "diagnostics": diagnostics or {},
    }


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def pair_digest(p: SolutionPair) -> str:
    """sha256 of the canonical encoding (members sorted, tuples unordered)."""
    U = [subspace_to_json(s) for s in p.U.sorted()]
    V = [subspace_to_json(s) for s in p.V.sorted()]
    sides = sorted([U, V], key=canonical_dumps)
    payload = {"field": field_to_json(p.field), "ambient_dim": p.ambient.d, "sides": sides}
    return hashlib.sha256(canonical_dumps(payload).encode()).hexdigest()


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
