"""JSON interchange for algebras, cochains, matrices and jets.

Algebras::

    {"dim": n, "field": "Q" | "Q(i)", "name": str?, "brackets": [{"i": 1, "j": 2, "c": ["p/q", ...]}]}

Cochains::

    {"p": p, "n": n?, "entries": [{"idx": [i1, ...], "k": k, "c": "p/q"}]}

Indices are 1-based, brackets are listed for ``i < j`` in lexicographic order,
and scalars use the canonical strings of :func:`format_scalar`.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

from .cohomology import Cochain
from .core import LieAlgebra, LieAlgebraError
from .deformations import DeformationJet
from .linalg import Matrix
from .scalars import Scalar, format_scalar, parse_scalar


class ParseError(ValueError):
    """Input that is not well-formed JSON or does not follow the schema."""


class FieldMismatch(LieAlgebraError):
    """Values that do not belong to the declared field or dimension."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def _require(d: Any, key: str, kind: type | tuple[type, ...]) -> Any:
    if not isinstance(d, dict):
        raise ParseError(f"expected an object holding {key!r}")
    if key not in d:
        raise ParseError(f"missing key {key!r}")
    v = d[key]
    if not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        raise ParseError(f"key {key!r} has the wrong type")
    return v


def scalar_from_json(v: Any) -> Scalar:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ParseError(f"scalar must be a string or integer, got {v!r}")
    try:
        return parse_scalar(str(v))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def vector_from_json(v: Any) -> list[Scalar]:
    if not isinstance(v, list):
        raise ParseError("expected a list of scalars")
    return [scalar_from_json(x) for x in v]


def matrix_from_json(m: Any) -> Matrix:
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise ParseError("expected a list of rows")
    rows = [vector_from_json(r) for r in m]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix rows have different lengths")
    return rows


def vector_to_json(v: Sequence[Scalar]) -> list[str]:
    return [format_scalar(x) for x in v]


def matrix_to_json(m: Sequence[Sequence[Scalar]]) -> list[list[str]]:
    return [vector_to_json(r) for r in m]


# -- algebras ------------------------------------------------------------------


def algebra_to_json(g: LieAlgebra) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dim": g.dim,
        "field": g.field,
        "brackets": [
            {"i": i + 1, "j": j + 1, "c": vector_to_json(vec)} for (i, j), vec in sorted(g.nonzero_brackets().items())
        ],
    }
    if g.name is not None:
        out["name"] = g.name
    return out


def algebra_from_json(d: Any, check: bool = False) -> LieAlgebra:
    """Parse an algebra; the Jacobi identity is verified only when ``check`` is set."""
    dim = _require(d, "dim", int)
    if dim < 0:
        raise ParseError("dim must be non-negative")
    field = d.get("field", "Q")
    if field not in ("Q", "Q(i)"):
        raise ParseError(f"unknown field tag {field!r}")
    name = d.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("name must be a string")
    raw = _require(d, "brackets", list)
    brackets: dict[tuple[int, int], list[Scalar]] = {}
    for entry in raw:
        i = _require(entry, "i", int) - 1
        j = _require(entry, "j", int) - 1
        vec = vector_from_json(_require(entry, "c", list))
        if len(vec) != dim:
            raise FieldMismatch(f"bracket ({i + 1}, {j + 1}) has {len(vec)} coordinates, expected {dim}")
        if not (0 <= i < dim and 0 <= j < dim):
            raise FieldMismatch(f"bracket index ({i + 1}, {j + 1}) outside 1..{dim}")
        if (i, j) in brackets:
            raise ParseError(f"bracket ({i + 1}, {j + 1}) listed twice")
        brackets[(i, j)] = vec
    try:
        return LieAlgebra(dim, brackets, field=field, name=name, check=check)
    except LieAlgebraError as exc:
        if "Gaussian" in str(exc):
            raise FieldMismatch(str(exc)) from exc
        raise


# -- cochains --------------------------------------------------------------------


def cochain_to_json(c: Cochain) -> dict[str, Any]:
    entries = [
        {"idx": [i + 1 for i in idx], "k": k + 1, "c": format_scalar(v)} for (idx, k), v in sorted(c.coeffs.items())
    ]
    return {"p": c.p, "n": c.n, "entries": entries}


def cochain_from_json(d: Any, n: int | None = None) -> Cochain:
    """Parse a cochain; ``n`` comes from the base algebra when the JSON omits it."""
    p = _require(d, "p", int)
    if p < 0:
        raise ParseError("p must be non-negative")
    dn = d.get("n", n)
    if dn is None or isinstance(dn, bool) or not isinstance(dn, int):
        raise ParseError("cochain dimension is unknown")
    if n is not None and dn != n:
        raise FieldMismatch(f"cochain lives on dimension {dn}, base has dimension {n}")
    coeffs: dict[tuple[tuple[int, ...], int], Scalar] = {}
    for entry in _require(d, "entries", list):
        idx = _require(entry, "idx", list)
        if any(isinstance(i, bool) or not isinstance(i, int) for i in idx):
            raise ParseError("idx must hold integers")
        k = _require(entry, "k", int) - 1
        key = (tuple(i - 1 for i in idx), k)
        if len(idx) != p or not 0 <= k < dn or any(not 0 <= i < dn for i in key[0]):
            raise FieldMismatch(f"cochain entry {entry} does not fit p={p}, n={dn}")
        coeffs[key] = coeffs.get(key, 0) + scalar_from_json(entry.get("c"))
    return Cochain(dn, p, coeffs)


# -- jets ------------------------------------------------------------------------


def jet_to_json(jet: DeformationJet) -> dict[str, Any]:
    return {
        "base": algebra_to_json(jet.base),
        "order": jet.order,
        "terms": {str(p): cochain_to_json(phi) for p, phi in sorted(jet.terms.items())},
    }


def jet_from_json(d: Any) -> DeformationJet:
    base = algebra_from_json(_require(d, "base", dict), check=True)
    order = _require(d, "order", int)
    raw = _require(d, "terms", dict)
    terms: dict[int, Cochain] = {}
    for key, val in raw.items():
        try:
            p = int(key)
        except ValueError as exc:
            raise ParseError(f"term key {key!r} is not an integer") from exc
        phi = cochain_from_json(val, base.dim)
        if phi.p != 2:
            raise FieldMismatch("jet terms must be 2-cochains")
        terms[p] = phi
    return DeformationJet(base, terms, order)
