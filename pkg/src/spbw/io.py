"""Loading algebra description files (JSON documents with the AlgebraFile fields)."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .algebra import Algebra, MonomialOrder, Presentation, validate
from .coefficients import CoefficientRing, ScalarField, SigmaAction
from .errors import SchemaError, SPBWError
from .expr import parse_free, parse_scalar

FIXTURES = ("jordan", "tdim", "dispin", "diffusion", "so3q", "aw3", "uqsl2", "sklyanin0")


def fixture_path(name: str) -> Path:
    stem = name[:-4] if name.endswith(".alg") else name
    return Path(str(resources.files("spbw").joinpath("fixtures").joinpath(f"{stem}.alg")))


def load_fixture(name: str) -> Algebra:
    return load_algebra(fixture_path(name))


def resolve_algebra_path(spec: str) -> Path:
    """A path on disk, or the name of a shipped fixture."""
    p = Path(spec)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".alg") else p.name
    if stem in FIXTURES:
        return fixture_path(stem)
    raise FileNotFoundError(spec)


def load_algebra(path) -> Algebra:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    try:
        return presentation_from_dict(doc)
    except SchemaError as e:
        raise SchemaError(f"{path}: {e}") from e


def _require(doc: dict, key: str, kind):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return value


def build_presentation(doc: dict) -> Presentation:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    name = doc.get("name", "algebra")
    params = _require(doc, "parameters", list) if "parameters" in doc else []
    cvars = doc.get("coeff_vars", [])
    gens = _require(doc, "generators", list)
    order_doc = _require(doc, "order", dict)
    rel_docs = doc.get("relations", [])
    sigma_doc = doc.get("sigma", {})
    strict = bool(doc.get("strict", False))

    cnames = []
    claurent = []
    for cv in cvars:
        if isinstance(cv, str):
            cnames.append(cv)
            claurent.append(False)
        elif isinstance(cv, dict) and "name" in cv:
            cnames.append(cv["name"])
            claurent.append(bool(cv.get("laurent", False)))
        else:
            raise SchemaError("coeff_vars entries need a name")
    all_names = list(params) + cnames + list(gens)
    if len(set(all_names)) != len(all_names):
        raise SchemaError("parameter, coefficient and generator names must be distinct")
    if not gens:
        raise SchemaError("at least one generator is required")

    field = ScalarField(params)
    ring = CoefficientRing(field, cnames, claurent)
    kind = order_doc.get("kind")
    prec = order_doc.get("precedence", list(gens))
    try:
        order = MonomialOrder.from_names(kind, prec, gens)
    except ValueError as e:
        raise SchemaError(f"order: {e}") from e

    n = len(gens)
    relations: dict = {}
    for k, rel in enumerate(rel_docs):
        if not isinstance(rel, dict) or "left" not in rel or "right" not in rel:
            raise SchemaError(f"relation {k} needs 'left' and 'right'")
        left = parse_free(field, ring, gens, rel["left"])
        if len(left) != 1:
            raise SchemaError(f"relation {k}: left side must be a single word x_j*x_i")
        ((word, beta), c), = left.items()
        if len(word) != 2 or any(beta) or not c.is_one():
            raise SchemaError(f"relation {k}: left side must be a single word x_j*x_i")
        j, i = word
        if j < i:
            raise SchemaError(f"relation {k}: left side must have j >= i")
        if (j, i) in relations:
            raise SchemaError(f"relation {k}: pair {gens[j]}*{gens[i]} given twice")
        right = parse_free(field, ring, gens, rel["right"])
        d = field.zero
        lower = {}
        for (w, b), coef in right.items():
            if w == (i, j):
                if any(b):
                    raise SchemaError(f"relation {k}: d must be a scalar")
                d = coef
                continue
            if any(w[t] > w[t + 1] for t in range(len(w) - 1)):
                raise SchemaError(f"relation {k}: right side word is not standard")
            alpha = tuple(w.count(g) for g in range(n))
            lower[(alpha, b)] = coef
        relations[(j, i)] = (d, lower)

    factors = [[field.one] * len(cnames) for _ in range(n)]
    for gname, row in sigma_doc.items():
        if gname not in gens:
            raise SchemaError(f"sigma: unknown generator {gname!r}")
        for vname, text in row.items():
            if vname not in cnames:
                raise SchemaError(f"sigma: unknown coefficient variable {vname!r}")
            factors[gens.index(gname)][cnames.index(vname)] = parse_scalar(field, str(text))
    try:
        sigma = SigmaAction(ring, factors)
    except ValueError as e:
        raise SchemaError(f"sigma: {e}") from e
    return Presentation(name, field, ring, tuple(gens), relations, order, sigma, strict)


def presentation_from_dict(doc: dict) -> Algebra:
    try:
        p = build_presentation(doc)
    except SchemaError:
        raise
    except SPBWError as e:
        raise SchemaError(str(e)) from e
    return validate(p)
