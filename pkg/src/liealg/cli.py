"""Command line entry point: ``liealg <command> ...``.

Every command prints one JSON document on stdout.  Exit codes: 0 ok,
2 validation failure, 3 parse error, 4 precondition failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from . import catalog
from .cohomology import cohomology_basis, cohomology_dims, derivation_dim
from .contractions import (
    contract,
    abelian_family,
    contract_contact_to_heisenberg,
    find_contact_form,
    inonu_wigner,
    weimar_woods,
)
from .core import LieAlgebra, LieAlgebraError, Subspace, validate_jacobi
from .deformations import decompose_deformation, finite_system_check, integrate, linear_deformation_check
from .geometry import double_extension, generalized_complex_check, symplectic_report
from .homogeneous import (
    INVARIANT,
    MCOMPONENTS,
    PRINTED,
    MetricSpec,
    adapted_metric,
    build_so_grading,
    classify_metric,
    grading_check,
    invariance_check,
    metric_eigenvalues,
    metric_signature,
)
from .invariants import invariant_vector, is_nilpotent, is_solvable, nilindex
from .rigidity import rigidity_report
from .scalars import format_scalar
from .serialization import (
    FieldMismatch,
    ParseError,
    algebra_from_json,
    algebra_to_json,
    cochain_from_json,
    cochain_to_json,
    dumps,
    jet_from_json,
    jet_to_json,
    loads,
    matrix_from_json,
    scalar_from_json,
    vector_from_json,
    vector_to_json,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    """Carries the JSON payload of a negative verdict."""

    def __init__(self, payload: dict[str, Any]) -> None:
        super().__init__("validation failed")
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# -- input helpers ---------------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _load_algebra(path: str) -> LieAlgebra:
    g = algebra_from_json(_read_json(path))
    report = validate_jacobi(g)
    if not report.ok:
        raise ValidationFailure({"ok": False, "residuals": _residuals(report)})
    return g._mark_checked(True)


def _residuals(report) -> list[dict[str, Any]]:
    return [
        {"i": i + 1, "j": j + 1, "k": k + 1, "s": s + 1, "value": format_scalar(v)} for i, j, k, s, v in report.residuals
    ]


def _indices(text: str, n: int) -> list[int]:
    try:
        out = [int(t) - 1 for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"bad index list {text!r}") from exc
    if any(not 0 <= i < n for i in out):
        raise FieldMismatch(f"index list {text!r} outside 1..{n}")
    return out


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc


def _span(text: str | None, n: int) -> Subspace | None:
    if text is None:
        return None
    return Subspace.span_of_indices(n, _indices(text, n))


# -- commands --------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> dict[str, Any]:
    g = algebra_from_json(_read_json(args.algebra))
    report = validate_jacobi(g)
    payload = {"ok": report.ok, "dim": g.dim, "residuals": _residuals(report)}
    if not report.ok:
        raise ValidationFailure(payload)
    return payload


def cmd_invariants(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    out = dict(invariant_vector(g))
    out["nilpotent"] = is_nilpotent(g)
    out["solvable"] = is_solvable(g)
    if out["nilpotent"]:
        out["nilindex"] = nilindex(g)
    return out


def cmd_cohomology(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    if args.p < 0:
        raise FieldMismatch("degree must be non-negative")
    rep = cohomology_dims(g, args.p, method=args.method)
    out: dict[str, Any] = dict(rep.as_dict())
    out["method"] = rep.method
    if args.basis:
        out["basis"] = [cochain_to_json(c) for c in cohomology_basis(g, args.p)]
    return out


def cmd_contract(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    n = g.dim
    if args.ww is not None:
        exps = _ints(args.ww)
        if len(exps) != n:
            raise FieldMismatch(f"need {n} exponents")
        limit = weimar_woods(g, exps)
        kind = "weimar-woods"
    elif args.iw is not None:
        limit = inonu_wigner(g, Subspace.span_of_indices(n, _indices(args.iw, n)))
        kind = "inonu-wigner"
    elif args.contact:
        if n % 2 == 0:
            raise FieldMismatch("contact contraction needs odd dimension")
        witness = find_contact_form(g)
        if witness is None:
            raise LieAlgebraError("no contact form found in the search range")
        limit = contract_contact_to_heisenberg(g, witness)
        kind = "contact"
    else:
        limit = contract(g, abelian_family(n))
        kind = "abelian"
    out: dict[str, Any] = {"kind": kind, "der_dim_source": derivation_dim(g)}
    if limit is None:
        out["limit"] = None
        return out
    out["limit"] = algebra_to_json(limit)
    out["der_dim_limit"] = derivation_dim(limit)
    return out


def cmd_deform(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    phi = cochain_from_json(_read_json(args.phi), g.dim)
    if phi.p != 2:
        raise FieldMismatch("a deformation direction is a 2-cochain")
    rep = linear_deformation_check(g, phi)
    out: dict[str, Any] = {
        "is_cocycle": rep.is_cocycle,
        "is_square_zero": rep.is_square_zero,
        "valid_for_all_t": rep.valid_for_all_t,
    }
    if args.order and rep.is_cocycle:
        jet = integrate(g, phi, args.order)
        out["integrated"] = jet is not None
        if jet is not None:
            out["jet"] = jet_to_json(jet)
    return out


def cmd_deform_decompose(args: argparse.Namespace) -> dict[str, Any]:
    jet = jet_from_json(_read_json(args.jet))
    dec = decompose_deformation(jet)
    system = finite_system_check(dec)
    return {
        "length": dec.length,
        "residual_order": dec.residual_order,
        "eps": [[format_scalar(c) for c in s.c] for s in dec.eps],
        "phis": [cochain_to_json(phi) for phi in dec.phis],
        "system_holds": system.holds,
        "dim_v": system.dim_v,
        "bound": system.bound,
    }


def cmd_rigidity(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    torus = _span(args.torus, g.dim)
    nil = _span(args.nilradical, g.dim)
    if (torus is None) != (nil is None):
        raise UsageError("--torus and --nilradical go together")
    return rigidity_report(g, torus, nil)


def cmd_geometry(args: argparse.Namespace) -> dict[str, Any]:
    g = _load_algebra(args.algebra)
    if args.symplectic:
        rep = symplectic_report(g, matrix_from_json(_read_json(args.symplectic)))
        out = {
            "closed": rep.closed,
            "nondegenerate": rep.nondegenerate,
            "symplectic": rep.symplectic,
            "exact": rep.exact,
            "primitive": None if rep.primitive is None else [format_scalar(x) for x in rep.primitive],
        }
        if not rep.symplectic:
            raise ValidationFailure(out)
        return out
    if args.double_extension:
        form_path, d_path = args.double_extension
        ext = double_extension(g, matrix_from_json(_read_json(form_path)), matrix_from_json(_read_json(d_path)))
        if ext is None:
            return {"extension": None, "reason": "obstruction is not a coboundary"}
        return {
            "extension": algebra_to_json(ext.algebra),
            "omega": [[format_scalar(x) for x in row] for row in ext.omega.matrix()],
            "obstruction": [[format_scalar(x) for x in row] for row in ext.obstruction],
            "z": [format_scalar(x) for x in ext.z_omega],
        }
    rep = generalized_complex_check(g, matrix_from_json(_read_json(args.gcs)))
    out = rep.as_dict()
    out["ok"] = rep.ok
    if not rep.ok:
        raise ValidationFailure(out)
    return out


def cmd_grading(args: argparse.Namespace) -> dict[str, Any]:
    if args.k < 1:
        raise FieldMismatch("k must be positive")
    gr = build_so_grading(args.k)
    return {
        "k": args.k,
        "dim": gr.algebra.dim,
        "dims": gr.grading.dims(),
        "grading_check": grading_check(gr.algebra, gr.grading),
        "algebra": algebra_to_json(gr.algebra),
        "components": {
            gr.grading.names.get(lab, str(lab)): [vector_to_json(v) for v in sp.basis]
            for lab, sp in gr.grading.components.items()
        },
    }


def _metric_spec(k: int, d: Any) -> MetricSpec:
    raw = d.get("lambdas", d) if isinstance(d, dict) else None
    if not isinstance(raw, dict):
        raise ParseError("metric spec must be an object of lambda pairs")
    lambdas = {}
    for gamma in MCOMPONENTS:
        pair = raw.get(gamma)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"lambdas for {gamma!r} must be a pair")
        lambdas[gamma] = (scalar_from_json(pair[0]), scalar_from_json(pair[1]))
    return MetricSpec(k, lambdas)


def cmd_metric(args: argparse.Namespace) -> dict[str, Any]:
    spec = _metric_spec(args.k, _read_json(args.spec))
    spec.validate()
    sig = metric_signature(spec)
    out: dict[str, Any] = {
        "k": spec.k,
        "eigenvalues": {
            gamma: [{"value": format_scalar(mu), "multiplicity": m} for mu, m in vals]
            for gamma, vals in metric_eigenvalues(spec).items()
        },
        "signature": {gamma: list(pq) for gamma, pq in sig.components.items()},
        "total_signature": list(sig.total),
        "classification": classify_metric(spec).as_dict(),
    }
    if args.invariance:
        gr = build_so_grading(spec.k)
        out["invariant"] = {
            PRINTED: invariance_check(adapted_metric(gr, spec, PRINTED)),
            INVARIANT: invariance_check(adapted_metric(gr, spec, INVARIANT)),
        }
    return out


def _catalog_params(entry: catalog.CatalogEntry, args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name in entry.params:
        val = getattr(args, name, None)
        if name == "phi":
            out[name] = [] if val is None else vector_from_json(val.split(","))
            continue
        if val is None:
            raise UsageError(f"{entry.name} needs --{name}")
        out[name] = val
    return out


def cmd_catalog(args: argparse.Namespace) -> dict[str, Any]:
    if args.action == "list":
        return {
            "entries": [{"name": e.name, "params": list(e.params), "note": e.note} for e in catalog.CATALOG.values()]
        }
    entry = catalog.CATALOG.get(args.name)
    if entry is None:
        raise UsageError(f"unknown catalog entry {args.name!r}")
    g = entry.build(**_catalog_params(entry, args))
    return algebra_to_json(g)


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liealg", description="Exact computations with finite-dimensional Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="verify the Jacobi identity")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariants", help="series, centre, derivations, characteristic sequence")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("cohomology", help="dimensions of Z^p, B^p, H^p(g, g)")
    p.add_argument("algebra")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--method", choices=("exact", "modular", "verified"), default="exact")
    p.add_argument("--basis", action="store_true", help="also print cocycle representatives")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("contract", help="limit of a one-parameter change of basis")
    p.add_argument("algebra")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--ww", help="comma separated exponents n_i of f(e_i) = eps^n_i e_i")
    mode.add_argument("--iw", help="comma separated 1-based basis indices spanning the kept subalgebra")
    mode.add_argument("--abelian", action="store_true", help="f = eps Id (default)")
    mode.add_argument("--contact", action="store_true", help="contract onto the Heisenberg law")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("deform", help="check a linear deformation and integrate it")
    p.add_argument("algebra")
    p.add_argument("--phi", required=True, help="2-cochain JSON file")
    p.add_argument("--order", type=int, default=0)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("deform-decompose", help="valued decomposition of a deformation jet")
    p.add_argument("jet")
    p.set_defaults(func=cmd_deform_decompose)

    p = sub.add_parser("rigidity", help="cohomological and root-system rigidity tests")
    p.add_argument("algebra")
    p.add_argument("--torus", help="comma separated 1-based indices")
    p.add_argument("--nilradical", help="comma separated 1-based indices")
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("geometry", help="symplectic, double extension, generalized complex checks")
    p.add_argument("algebra")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--symplectic", metavar="FORM", help="2-form as a JSON matrix")
    mode.add_argument("--double-extension", nargs=2, metavar=("FORM", "D"))
    mode.add_argument("--gcs", metavar="J", help="endomorphism of g + g* as a JSON matrix")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("grading", help="Z2 x Z2 grading of so(4k)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_grading)

    p = sub.add_parser("metric", help="eigenvalues and signature of an adapted metric")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--spec", required=True, help='JSON {"a": [l1, l2], "b": [...], "c": [...]}')
    p.add_argument("--invariance", action="store_true", help="also test ad-invariance on the explicit Gram")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("catalog", help="built-in algebras")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--phi", help="comma separated rationals")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "catalog" and args.action == "show" and not args.name:
            raise UsageError("catalog show needs a name")
        payload = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationFailure as exc:
        print(dumps(exc.payload))
        print("validation failed", file=sys.stderr)
        return EXIT_VALIDATION
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FieldMismatch, LieAlgebraError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(dumps(payload))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
