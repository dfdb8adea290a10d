"""JSON encodings.

Rationals are written as integers or ``"p/q"`` strings.  Objects that refer
to an algebra (bimodules, cochains, deformations) name it by ``"base"``,
either a label resolved through a registry or an inline algebra object.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from .algebra import BihomAlgebra, Bimodule, make_algebra, make_bimodule
from .errors import DimensionMismatch, ParseError
from .qarray import QArray


def _tensor(raw, name: str) -> QArray:
    try:
        return QArray.from_values(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{name}: {exc}") from exc


def algebra_from_json(raw: Mapping) -> BihomAlgebra:
    try:
        mu = _tensor(raw["mu"], "mu")
        alpha = _tensor(raw["alpha"], "alpha")
        beta = _tensor(raw["beta"], "beta")
    except KeyError as exc:
        raise ParseError(f"algebra spec missing {exc}") from exc
    A = make_algebra(mu, alpha, beta, str(raw.get("label", "")))
    if "dim" in raw and int(raw["dim"]) != A.dim:
        raise DimensionMismatch(f"declared dim {raw['dim']} but mu has dim {A.dim}")
    return A


def algebra_to_json(A: BihomAlgebra) -> dict:
    return {"kind": "algebra", "label": A.label, "dim": A.dim, "mu": A.mu.to_json(),
            "alpha": A.alpha.to_json(), "beta": A.beta.to_json()}


def resolve_base(ref, registry: Mapping[str, BihomAlgebra] | None) -> BihomAlgebra:
    if isinstance(ref, BihomAlgebra):
        return ref
    if isinstance(ref, Mapping):
        return algebra_from_json(ref)
    if registry is not None and ref in registry:
        return registry[ref]
    raise ParseError(f"unresolved algebra reference {ref!r}")


def bimodule_from_json(raw: Mapping, base: BihomAlgebra | None = None,
                       registry: Mapping[str, BihomAlgebra] | None = None) -> Bimodule:
    if base is None:
        base = resolve_base(raw.get("base"), registry)
    try:
        return make_bimodule(base, _tensor(raw["left"], "left"), _tensor(raw["right"], "right"),
                             _tensor(raw["alpha_m"], "alpha_m"), _tensor(raw["beta_m"], "beta_m"),
                             str(raw.get("label", "")))
    except KeyError as exc:
        raise ParseError(f"bimodule spec missing {exc}") from exc


def bimodule_to_json(M: Bimodule) -> dict:
    return {"kind": "bimodule", "label": M.label, "base": M.base.label, "dim": M.dim,
            "left": M.left.to_json(), "right": M.right.to_json(),
            "alpha_m": M.alpha_m.to_json(), "beta_m": M.beta_m.to_json()}


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return data


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)
