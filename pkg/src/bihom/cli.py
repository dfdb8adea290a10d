"""``bihom`` command-line front end.

Spec files are JSON objects with a ``"kind"`` field.  A ``"workspace"``
spec bundles several objects; other objects refer to algebras and bimodules
by label, resolved first within the file and then against the built-in
corpus.  Exit codes: 0 success, 1 invalid structure or mathematical
failure, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Mapping

from . import corpus
from .ainfty import (
    CrossedModule,
    ainfty_from_json,
    crossed_module_violations,
    validate_ainfty,
)
from .algebra import (
    BihomAlgebra,
    Bimodule,
    adjoint_bimodule,
    algebra_violations,
    bimodule_violations,
)
from .cohomology import (
    class_certificate,
    cohomology_dims,
    is_cocycle,
    restricted_subcomplex_dims,
)
from .deformation import (
    TruncatedDeformation,
    deformation_from_json,
    deformation_to_json,
    extend_deformation,
    obstruction,
    trivialize_first_order,
    verify_deformation,
)
from .errors import (
    BihomError,
    BudgetExceeded,
    DimensionMismatch,
    NotInvertible,
    ParseError,
    ShapeMismatch,
    UnknownKind,
)
from .extensions import (
    AbelianExtension,
    extension_from_cocycle,
    extension_violations,
    find_compatible_splitting,
    splitting_problem_from_json,
)
from .io import algebra_from_json, bimodule_from_json, dumps, load_json
from .linalg import inverse
from .maps import apply_inputs, budget
from .operad import cochain, cochain_to_json
from .qarray import QArray
from .selftest import report_json, report_table, run_selftest

OK, INVALID, PARSE = 0, 1, 2


def _frac_json(xs) -> list:
    return [str(x) if x.denominator != 1 else x.numerator for x in xs]


# -- workspace ----------------------------------------------------------------

class Workspace:
    """Label-keyed registries of the objects named in one spec file."""

    KINDS = ("algebra", "bimodule", "deformation", "ainfty", "extension",
             "crossed_module", "splitting_problem", "cochain")

    def __init__(self) -> None:
        self.algebras: dict[str, BihomAlgebra] = {}
        self.bimodules: dict[str, Bimodule] = {}
        self.deformations: dict[str, TruncatedDeformation] = {}
        self.ainfty: dict = {}
        self.extensions: dict[str, AbelianExtension] = {}
        self.crossed_modules: dict[str, CrossedModule] = {}
        self.splitting_problems: dict[str, tuple] = {}
        self.cochains: dict = {}
        self.order: list[tuple[str, str]] = []  # (kind, label) in file order

    # references

    def algebra(self, ref) -> BihomAlgebra:
        if isinstance(ref, Mapping):
            A = algebra_from_json(ref)
            self.algebras.setdefault(A.label, A)
            return A
        if ref in self.algebras:
            return self.algebras[ref]
        if isinstance(ref, str) and ref in corpus.ALGEBRAS + ("t4_perturbed",):
            A = corpus.load(ref)
            self.algebras[ref] = A
            return A
        raise ParseError(f"unresolved algebra reference {ref!r}")

    def bimodule(self, ref, base: BihomAlgebra | None = None) -> Bimodule:
        if isinstance(ref, Mapping):
            if base is None:
                base = self.algebra(ref.get("base"))
            return bimodule_from_json(ref, base)
        if ref in self.bimodules:
            return self.bimodules[ref]
        if isinstance(ref, str) and ref.endswith("_adj") and ref[:-4] in corpus.ALGEBRAS:
            A = self.algebra(ref[:-4]) if base is None else base
            M = corpus.load_adjoint(ref[:-4], A)
            self.bimodules[ref] = M
            return M
        raise ParseError(f"unresolved bimodule reference {ref!r}")

    # loading

    def add(self, raw: Mapping) -> tuple[str, str]:
        kind = raw.get("kind", "algebra" if "mu" in raw else None)
        if kind not in self.KINDS:
            raise UnknownKind(f"unknown kind {kind!r}")
        label = str(raw.get("label", ""))
        try:
            obj = getattr(self, "_parse_" + kind)(raw)
        except KeyError as exc:
            raise ParseError(f"{kind} spec missing {exc}") from exc
        except (ShapeMismatch, DimensionMismatch, TypeError) as exc:
            raise ParseError(f"{kind}: {exc}") from exc
        registry = {"algebra": self.algebras, "bimodule": self.bimodules,
                    "deformation": self.deformations, "ainfty": self.ainfty,
                    "extension": self.extensions, "crossed_module": self.crossed_modules,
                    "splitting_problem": self.splitting_problems, "cochain": self.cochains}[kind]
        if label in registry and registry[label] is not obj:
            raise ParseError(f"duplicate {kind} label {label!r}")
        registry[label] = obj
        self.order.append((kind, label))
        return kind, label

    def _parse_algebra(self, raw):
        return algebra_from_json(raw)

    def _parse_bimodule(self, raw):
        return bimodule_from_json(raw, self.algebra(raw["base"]))

    def _parse_deformation(self, raw):
        return deformation_from_json(raw, self.algebra(raw["base"]))

    def _parse_ainfty(self, raw):
        return ainfty_from_json(raw)

    def _parse_cochain(self, raw):
        A = self.algebra(raw["base"])
        M = self.bimodule(raw["module"], A) if raw.get("module") not in (None, "self") else None
        return cochain(A, raw["coeffs"], M)

    def _parse_splitting_problem(self, raw):
        return splitting_problem_from_json(raw)

    def _parse_extension(self, raw):
        A = self.algebra(raw["base"])
        M = self.bimodule(raw["fiber"], A)
        if "cocycle" in raw:
            return extension_from_cocycle(A, M, cochain(A, raw["cocycle"], M), str(raw.get("label", "")))
        T = self.algebra(raw["total"])
        mats = [QArray.from_values(raw[k]) for k in ("incl", "proj", "splitting")]
        return AbelianExtension(T, *mats, M, A)

    def _parse_crossed_module(self, raw):
        A, B = self.algebra(raw["alg_a"]), self.algebra(raw["alg_b"])
        return CrossedModule(A, B, *(QArray.from_values(raw[k]) for k in
                                     ("dt", "action_left", "action_right")))

    @classmethod
    def from_json(cls, raw: Mapping) -> "Workspace":
        ws = cls()
        if raw.get("kind") == "workspace":
            # algebras first so that later entries can refer to them
            items = sorted(raw.get("objects", []), key=lambda o: o.get("kind") != "algebra")
            for item in items:
                if not isinstance(item, Mapping):
                    raise ParseError("workspace objects must be JSON objects")
                ws.add(item)
        else:
            ws.add(raw)
        return ws

    @classmethod
    def load(cls, path) -> "Workspace":
        return cls.from_json(load_json(resolve_path(path)))


def resolve_path(path) -> Path:
    """The given path, or a corpus data file of the same name."""
    p = Path(path)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    q = corpus.data_path(stem)
    return q if q.exists() else p


# -- checks -------------------------------------------------------------------

def _violations(ws: Workspace, kind: str, label: str) -> list[dict]:
    if kind == "algebra":
        return [v.as_dict() for v in algebra_violations(ws.algebras[label])]
    if kind == "bimodule":
        M = ws.bimodules[label]
        return [v.as_dict() for v in algebra_violations(M.base) + bimodule_violations(M)]
    if kind == "extension":
        return [v.as_dict() for v in extension_violations(ws.extensions[label])]
    if kind == "crossed_module":
        return [v.as_dict() for v in crossed_module_violations(ws.crossed_modules[label])]
    if kind == "ainfty":
        rep = validate_ainfty(ws.ainfty[label])
        return [] if rep.valid else [rep.violation.as_dict()]
    if kind == "deformation":
        D = ws.deformations[label]
        bad = [o for o in verify_deformation(D).orders if not o.ok]
        return [{"axiom": f"deformation equation order {o.order}",
                 "witness": list(o.witness) if o.witness else None, "detail": ""} for o in bad]
    if kind == "splitting_problem":
        if find_compatible_splitting(*ws.splitting_problems[label]) is None:
            return [{"axiom": "compatible splitting", "witness": None,
                     "detail": "no section commutes with both twists"}]
        return []
    if kind == "cochain":
        f = ws.cochains[label]
        out = [{"axiom": "twist compatibility", "witness": list(w), "detail": name}
               for name, w in f.twist_defects()]
        return out
    raise UnknownKind(kind)


def cmd_check(args) -> tuple[int, dict]:
    ws = Workspace.load(args.spec)
    results = []
    for kind, label in ws.order:
        bad = _violations(ws, kind, label)
        results.append({"kind": kind, "label": label, "valid": not bad, "violations": bad})
    valid = all(r["valid"] for r in results)
    return (OK if valid else INVALID), {"valid": valid, "objects": results}


def _check_table(rep: dict) -> str:
    lines = []
    for r in rep["objects"]:
        lines.append(f"{'VALID' if r['valid'] else 'INVALID':<8} {r['kind']:<17} {r['label']}")
        for v in r["violations"]:
            lines.append(f"         {v['axiom']}  witness={v['witness']}")
    return "\n".join(lines)


# -- cohomology ---------------------------------------------------------------

def _single_algebra(ws: Workspace) -> BihomAlgebra:
    if len(ws.algebras) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(ws.algebras)}")
    return next(iter(ws.algebras.values()))


def _untwisted_product(A: BihomAlgebra, raw: Mapping) -> QArray:
    if "mu_assoc" in raw:
        return QArray.from_values(raw["mu_assoc"])
    ai, bi = inverse(A.alpha), inverse(A.beta)
    if ai is None or bi is None:
        raise NotInvertible("the classical subcomplex needs invertible twists")
    return apply_inputs(A.mu, [ai, bi])


def cmd_cohomology(args) -> tuple[int, dict]:
    path = resolve_path(args.spec)
    raw = load_json(path)
    ws = Workspace.from_json(raw)
    A = _single_algebra(ws)
    if args.classical:
        rep = restricted_subcomplex_dims(_untwisted_product(A, raw), A.alpha, A.beta, args.max_degree)
        return OK, rep.to_json()
    coeff = args.coefficients
    if coeff == "self":
        M = None
    elif coeff == "adjoint":
        M = adjoint_bimodule(A, (A.label or "A") + "_adj")
    elif coeff.endswith(".json"):
        M = bimodule_from_json(load_json(resolve_path(coeff)), A)
    else:
        M = ws.bimodule(coeff, A)
    bad = algebra_violations(A) + (bimodule_violations(M) if M is not None else [])
    if bad:
        return INVALID, {"error": "invalid input", "violations": [v.as_dict() for v in bad]}
    degree0 = False if args.kernel_h1 else None
    return OK, cohomology_dims(A, M, args.max_degree, degree0=degree0).to_json()


def _cohomology_table(rep: dict) -> str:
    lines = [f"coefficients: {rep['coefficients']}", " n  dimC  rank  ker  H"]
    for r in rep["rows"]:
        lines.append(f"{r['n']:>2}  {r['dimC']:>4}  {r['rank']:>4}  {r['ker']:>3}  {r['H']}")
    if rep.get("note"):
        lines.append(rep["note"])
    return "\n".join(lines)


# -- deformations -------------------------------------------------------------

def _single_deformation(args) -> TruncatedDeformation:
    ws = Workspace.load(args.base) if args.base else Workspace()
    ws_d = load_json(resolve_path(args.spec))
    if ws_d.get("kind") == "workspace":
        for item in ws_d.get("objects", []):
            ws.add(item)
    else:
        ws.add(ws_d)
    if len(ws.deformations) != 1:
        raise ParseError(f"expected exactly one deformation, found {len(ws.deformations)}")
    return next(iter(ws.deformations.values()))


def cmd_deform(args) -> tuple[int, dict]:
    D = _single_deformation(args)
    A = D.base
    rep = verify_deformation(D)
    if args.action == "verify":
        return (OK if rep.verified else INVALID), rep.to_json()
    if not rep.verified:
        return INVALID, {"error": "deformation is not verified", "report": rep.to_json()}
    if args.action == "obstruct":
        ob = obstruction(D)
        return OK, {"obstruction": cochain_to_json(ob), "is_cocycle": is_cocycle(A, None, ob),
                    "is_zero": ob.is_zero()}
    if args.action == "extend":
        nxt = extend_deformation(D)
        if nxt is None:
            cert = class_certificate(A, None, obstruction(D))
            return INVALID, {"extended": False,
                             "certificate": None if cert is None else _frac_json(cert)}
        D2 = D.extended(nxt)
        out = deformation_to_json(D2)
        if args.output:
            Path(args.output).write_text(dumps(out) + "\n")
        return OK, {"extended": True, "verified": verify_deformation(D2).verified,
                    "term": cochain_to_json(nxt), "deformation": out}
    phi = trivialize_first_order(D)
    if phi is None:
        cert = class_certificate(A, None, D.term(1))
        return INVALID, {"trivialized": False,
                         "certificate": None if cert is None else _frac_json(cert)}
    return OK, {"trivialized": True, "phi1": cochain_to_json(phi)}


# -- selftest -----------------------------------------------------------------

def cmd_selftest(args) -> tuple[int, dict]:
    results = run_selftest(args.seed, args.triples, args.inject_failure)
    rep = report_json(args.seed, results)
    rep["_table"] = report_table(results)
    return (OK if rep["passed"] else INVALID), rep


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", action="store_true", help="human-readable output")
    common.add_argument("--budget", type=int, default=None, metavar="ENTRIES",
                        help="tensor-entry cap (overrides BIHOM_BUDGET)")

    p = argparse.ArgumentParser(prog="bihom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="validate a spec file")
    c.add_argument("spec")
    c.set_defaults(func=cmd_check, render=_check_table)

    h = sub.add_parser("cohomology", parents=[common], help="Hochschild cohomology dimensions")
    h.add_argument("spec")
    h.add_argument("--max-degree", type=int, default=3)
    h.add_argument("--coefficients", default="self",
                   help="'self', 'adjoint', a bimodule label, or a bimodule JSON file")
    h.add_argument("--classical", action="store_true",
                   help="classical complex restricted to twist-commuting cochains")
    h.add_argument("--kernel-h1", action="store_true",
                   help="report H^1 = ker delta^1 even for untwisted inputs")
    h.set_defaults(func=cmd_cohomology, render=_cohomology_table)

    d = sub.add_parser("deform", parents=[common], help="deformation calculus")
    d.add_argument("action", choices=["verify", "obstruct", "extend", "trivialize"])
    d.add_argument("spec")
    d.add_argument("--base", help="spec file defining the base algebra")
    d.add_argument("--output", "-o", help="write the extended deformation here")
    d.set_defaults(func=cmd_deform, render=None)

    s = sub.add_parser("selftest", parents=[common], help="seeded property suite")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--triples", type=int, default=100)
    s.add_argument("--inject-failure", action="store_true",
                   help="add a broken fixture to the corpus (negative control)")
    s.set_defaults(func=cmd_selftest, render=lambda rep: rep["_table"])
    return p


def _emit(rep: dict, args, out) -> None:
    table = rep.pop("_table", None)
    if args.table and args.render is not None and "error" not in rep:
        if table is not None:
            rep["_table"] = table
        print(args.render(rep), file=out)
    else:
        print(dumps(rep), file=out)


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if args.budget is not None:
            with budget(args.budget):
                code, rep = args.func(args)
        else:
            code, rep = args.func(args)
    except (ParseError, UnknownKind) as exc:
        code, rep = PARSE, {"error": type(exc).__name__, "message": str(exc)}
    except BudgetExceeded as exc:
        code, rep = INVALID, {"error": "BudgetExceeded", "message": str(exc),
                              "needed": exc.needed, "budget": exc.budget}
    except BihomError as exc:
        code, rep = INVALID, {"error": type(exc).__name__, "message": str(exc)}
    _emit(rep, args, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
