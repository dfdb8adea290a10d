"""Built-in example corpus.

The shipped JSON files under ``data/`` are the canonical copies; the
``build_*`` functions construct the same objects from first principles and
``regenerate()`` rewrites the files from them.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .algebra import (
    BihomAlgebra,
    adjoint_bimodule,
    identity_algebra_twists,
    matrix_algebra,
    make_algebra,
    yau_twist,
)
from .io import algebra_from_json, algebra_to_json, bimodule_from_json, bimodule_to_json
from .qarray import QArray

ALGEBRAS = ("q", "dual_twist", "t4", "m2q")


def truncated_polynomial(n: int) -> list:
    """Untwisted product of Q[X]/(X^n) on the monomial basis."""
    return [[[1 if (a + b == k) else 0 for k in range(n)] for b in range(n)] for a in range(n)]


def build_q() -> BihomAlgebra:
    return identity_algebra_twists([[[1]]], "q")


def build_dual_numbers() -> BihomAlgebra:
    return identity_algebra_twists(truncated_polynomial(2), "dual")


def build_dual_twist() -> BihomAlgebra:
    return yau_twist(truncated_polynomial(2), [[1, 0], [0, -1]], [[1, 0], [0, 0]], "dual_twist")


def squaring_map(n: int) -> list:
    """Matrix of x^a -> x^(2a) on Q[X]/(X^n)."""
    return [[1 if (2 * a == r) else 0 for a in range(n)] for r in range(n)]


def build_t4() -> BihomAlgebra:
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    return yau_twist(truncated_polynomial(4), squaring_map(4), eye, "t4")


def build_t4_perturbed() -> BihomAlgebra:
    A = build_t4()
    mu = A.mu.tolist()
    mu[1][1][0] += 1
    return make_algebra(QArray.from_values(mu), A.alpha, A.beta, "t4_perturbed")


def build_m2q() -> BihomAlgebra:
    return matrix_algebra(build_q(), 2, "m2q")


def remark_splitting_problem() -> dict:
    """The two-dimensional E over the one-dimensional A with no twist-compatible section."""
    return {
        "kind": "splitting_problem",
        "label": "remark_pair",
        "proj": [[1, 0]],
        "alpha_e": [[0, 0], [1, 0]],
        "beta_e": [[1, 0], [0, 1]],
        "alpha": [[0]],
        "beta": [[1]],
    }


def _data_dir() -> Path:
    return Path(str(resources.files("bihom") / "data"))


def regenerate(target: Path | None = None) -> None:
    target = target or _data_dir()
    target.mkdir(parents=True, exist_ok=True)
    builders = {"q": build_q, "dual_twist": build_dual_twist, "t4": build_t4,
                "m2q": build_m2q, "t4_perturbed": build_t4_perturbed}
    for name, build in builders.items():
        A = build()
        (target / f"{name}.json").write_text(json.dumps(algebra_to_json(A), indent=1) + "\n")
        if name != "t4_perturbed":
            M = adjoint_bimodule(A, f"{name}_adj")
            (target / f"{name}_adj.json").write_text(json.dumps(bimodule_to_json(M), indent=1) + "\n")
    (target / "remark_pair.json").write_text(json.dumps(remark_splitting_problem(), indent=1) + "\n")


def load_raw(name: str) -> dict:
    return json.loads((_data_dir() / f"{name}.json").read_text())


def load(name: str) -> BihomAlgebra:
    return algebra_from_json(load_raw(name))


def load_adjoint(name: str, A: BihomAlgebra | None = None):
    A = A or load(name)
    return bimodule_from_json(load_raw(f"{name}_adj"), A)


def data_path(name: str) -> Path:
    return _data_dir() / f"{name}.json"
