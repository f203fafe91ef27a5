"""The three families of minimal nontrivial solutions (m = q + 1).

Members are ordered by the field / projective-line enumerations of
:mod:`isoeq.gf`, with the short spaces last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import SolutionPair, SpaceTuple, tuples_equivalent, verify_equation
from .errors import AmbientTooSmall, BadSpec, NotASolution
from .gf import enumerate_projective_line
from .linalg import AmbientSpace, Subspace, Vector, span, vec_add, vec_scale


def _check_independent(S: Subspace, vecs: Sequence[Vector], kind: str) -> None:
    amb = S.ambient
    need = S.dim + len(vecs)
    if amb.d < need:
        raise AmbientTooSmall(f"Type {kind} with dim S = {S.dim} needs ambient dim >= {need}, got {amb.d}")
    vecs = [amb.check(v) for v in vecs]
    if span(amb, list(S.basis) + vecs).dim != need:
        raise BadSpec(
            f"Type {kind}: vectors must be linearly independent and meet S trivially"
        )


@dataclass(frozen=True)
class TypeASpec:
    S: Subspace
    a: Vector
    b: Vector

    kind = "A"

    def validate(self) -> None:
        _check_independent(self.S, [self.a, self.b], "A")

    def vectors(self) -> tuple[Vector, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class TypeBSpec:
    S: Subspace
    a: Vector
    b: Vector
    c: Vector

    kind = "B"

    def validate(self) -> None:
        _check_independent(self.S, [self.a, self.b, self.c], "B")

    def vectors(self) -> tuple[Vector, ...]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class TypeCSpec:
    S: Subspace
    a: Vector
    b: Vector
    c: Vector
    d: Vector

    kind = "C"

    def validate(self) -> None:
        _check_independent(self.S, [self.a, self.b, self.c, self.d], "C")

    def vectors(self) -> tuple[Vector, ...]:
        return (self.a, self.b, self.c, self.d)


def _postcheck(pair: SolutionPair) -> SolutionPair:
    if not verify_equation(pair) or tuples_equivalent(pair.U, pair.V):
        raise NotASolution("constructed pair is not a nontrivial solution")
    return pair


def _gen(S: Subspace, *vecs: Vector) -> Subspace:
    return span(S.ambient, list(S.basis) + list(vecs))


def build_type_a(spec: TypeASpec, validate: bool = False) -> SolutionPair:
    """V = (<S,a,b> q times, S); U = the q+1 hyperplanes of <S,a,b> through S."""
    spec.validate()
    S, a, b = spec.S, spec.a, spec.b
    f = S.field
    top = _gen(S, a, b)
    V = (top,) * f.q + (S,)
    U = tuple(
        _gen(S, vec_add(f, vec_scale(f, al, a), vec_scale(f, be, b)))
        for al, be in enumerate_projective_line(f)
    )
    pair = SolutionPair(SpaceTuple(U), SpaceTuple(V))
    return _postcheck(pair) if validate else pair


def build_type_b(spec: TypeBSpec, validate: bool = False) -> SolutionPair:
    spec.validate()
    S, a, b, c = spec.S, spec.a, spec.b, spec.c
    f = S.field
    V = [_gen(S, b, vec_add(f, vec_scale(f, al, a), c)) for al in range(f.q)]
    U = [_gen(S, a, vec_add(f, vec_scale(f, al, b), c)) for al in range(f.q)]
    V.append(_gen(S, a))
    U.append(_gen(S, b))
    pair = SolutionPair(SpaceTuple(tuple(U)), SpaceTuple(tuple(V)))
    return _postcheck(pair) if validate else pair


def build_type_c(spec: TypeCSpec, validate: bool = False) -> SolutionPair:
    spec.validate()
    S, a, b, c, d = spec.S, spec.a, spec.b, spec.c, spec.d
    f = S.field

    def comb(al, x, be, y):
        return vec_add(f, vec_scale(f, al, x), vec_scale(f, be, y))

    line = enumerate_projective_line(f)
    V = tuple(_gen(S, comb(al, a, be, b), comb(al, c, be, d)) for al, be in line)
    U = tuple(_gen(S, comb(al, a, be, c), comb(al, b, be, d)) for al, be in line)
    pair = SolutionPair(SpaceTuple(U), SpaceTuple(V))
    return _postcheck(pair) if validate else pair


BUILDERS = {"A": build_type_a, "B": build_type_b, "C": build_type_c}
SPECS = {"A": TypeASpec, "B": TypeBSpec, "C": TypeCSpec}
VECTOR_COUNT = {"A": 2, "B": 3, "C": 4}


def build(spec, validate: bool = False) -> SolutionPair:
    return BUILDERS[spec.kind](spec, validate=validate)


def min_ambient_dim(kind: str, s_dim: int) -> int:
    return s_dim + VECTOR_COUNT[kind.upper()]


def default_spec(kind: str, amb: AmbientSpace, s_dim: int, vectors: Sequence[Vector] | None = None):
    """Witness from the standard basis: a, b, ... = e_1, e_2, ...; S spanned by the next s_dim."""
    kind = kind.upper()
    n = VECTOR_COUNT[kind]
    if amb.d < n + s_dim:
        raise AmbientTooSmall(
            f"Type {kind} with dim S = {s_dim} needs ambient dim >= {n + s_dim}, got {amb.d}"
        )
    S = span(amb, [amb.unit(n + i) for i in range(s_dim)])
    if vectors is None:
        vectors = [amb.unit(i) for i in range(n)]
    if len(vectors) != n:
        raise BadSpec(f"Type {kind} takes {n} vectors, got {len(vectors)}")
    spec = SPECS[kind](S, *[amb.check(v) for v in vectors])
    spec.validate()
    return spec
