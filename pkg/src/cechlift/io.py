"""JSON container formats for every domain object.

One container format with a "kind" discriminator; emitted artifacts are
canonical (sorted keys, sorted simplices, fixed separators) so repeated
runs are byte-identical and every artifact re-parses to an equal value.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import abelian, deligne, tower
from .abelian import CIRCLE, CircleElement, FgAbelianGroup, GroupElement, Homomorphism, ShortExactSequence
from .cochains import Cochain
from .complexes import Chain, Cover, SimplicialComplex, nerve, star_cover, validate_complex
from .errors import FormatError


def _require(obj, key, kind):
    if key not in obj:
        raise FormatError(f"{kind} object is missing '{key}'")
    return obj[key]


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def kind_of(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError("top-level object must carry a 'kind' discriminator")
    return obj["kind"]


# -- complexes --------------------------------------------------------------

def complex_to_json(k):
    maximal = [list(s) for s in sorted(k.simplices) if not any(
        set(s) < set(t) for t in k.simplices
    )]
    return {"kind": "complex", "vertices": k.vertex_count, "simplices": maximal}


def complex_from_json(obj):
    simps = _require(obj, "simplices", "complex")
    vertices = obj.get("vertices")
    try:
        return validate_complex([tuple(s) for s in simps], vertex_count=vertices)
    except TypeError as exc:
        raise FormatError(f"malformed complex: {exc}") from exc


# -- covers -----------------------------------------------------------------

def cover_to_json(c):
    pieces = []
    for piece in c.pieces:
        maximal = [
            list(s)
            for s in sorted(piece.simplices)
            if not any(set(s) < set(t) for t in piece.simplices)
        ]
        pieces.append(maximal)
    return {"kind": "cover", "base": complex_to_json(c.base), "pieces": pieces}


def cover_from_json(obj):
    base = complex_from_json(_require(obj, "base", "cover"))
    if obj.get("star_cover"):
        return star_cover(base)
    pieces_raw = _require(obj, "pieces", "cover")
    from .complexes import downward_closure

    pieces = []
    for praw in pieces_raw:
        simps = downward_closure([tuple(sorted(s)) for s in praw])
        pieces.append(SimplicialComplex(base.vertex_count, simps))
    return Cover(base, tuple(pieces))


# -- groups and elements ----------------------------------------------------

def group_to_json(g):
    if isinstance(g, abelian.CircleGroup):
        return {"kind": "group", "circle": True}
    return {"kind": "group", "moduli": list(g.moduli)}


def group_from_json(obj):
    if obj.get("circle"):
        return CIRCLE
    moduli = _require(obj, "moduli", "group")
    try:
        return FgAbelianGroup(tuple(moduli))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def element_to_json(v):
    if isinstance(v, GroupElement):
        return list(v.coords)
    if isinstance(v, CircleElement):
        return {"num": v.value.numerator, "den": v.value.denominator}
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    raise FormatError(f"cannot serialize element {v!r}")


def element_from_json(group, obj):
    if isinstance(group, abelian.CircleGroup):
        if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
            raise FormatError("circle elements are {'num':p,'den':q} objects")
        return CircleElement(Fraction(obj["num"], obj["den"]))
    if isinstance(obj, dict):
        raise FormatError("fg group elements are integer arrays")
    return GroupElement(group, tuple(obj))


# -- chains ------------------------------------------------------------------

def chain_to_json(z):
    return {
        "kind": "chain",
        "degree": z.degree,
        "cells": [
            {"simplex": list(s), "coeff": c} for s, c in sorted(z.coefficients.items())
        ],
    }


def chain_from_json(obj, complex_):
    degree = _require(obj, "degree", "chain")
    coeffs = {}
    for cell in _require(obj, "cells", "chain"):
        coeffs[tuple(cell["simplex"])] = int(cell["coeff"])
    return Chain(complex_, degree, coeffs)


# -- cochains ----------------------------------------------------------------

def cochain_to_json(x, include_cover=None):
    out = {
        "kind": "cochain",
        "degree": x.degree,
        "coefficients": group_to_json(x.group),
        "values": [
            {"indices": list(s), "value": element_to_json(v)} for s, v in x.items()
        ],
    }
    if include_cover is not None:
        out["cover"] = cover_to_json(include_cover)
    return out


def cochain_from_json(obj, carrier=None):
    """Rebuild a cochain; the carrier comes from context or the embedded
    cover (whose nerve is used)."""
    cover = None
    if carrier is None:
        if "cover" not in obj:
            raise FormatError("cochain file has no embedded cover and no context")
        cover = cover_from_json(obj["cover"])
        carrier = nerve(cover)
    group = group_from_json(_require(obj, "coefficients", "cochain"))
    degree = _require(obj, "degree", "cochain")
    values = {}
    for entry in _require(obj, "values", "cochain"):
        values[tuple(entry["indices"])] = element_from_json(group, entry["value"])
    x = Cochain(carrier, degree, group, values)
    return (x, cover) if cover is not None else x


# -- finite groups, extensions, towers, transitions ---------------------------

def finite_group_to_json(g):
    return {
        "kind": "finite_group",
        "order": g.order,
        "identity": g.identity,
        "table": [list(r) for r in g.table],
    }


def finite_group_from_json(obj):
    try:
        return tower.FiniteGroup(_require(obj, "table", "finite_group"), obj.get("identity"))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def extension_to_json(e):
    return {
        "kind": "extension",
        "base": finite_group_to_json(e.base),
        "kernel": {"moduli": list(e.kernel.moduli)},
        "factor_set": [
            [list(v.coords) for v in row] for row in e.factor_set
        ],
    }


def extension_from_json(obj):
    base = finite_group_from_json(_require(obj, "base", "extension"))
    kernel = FgAbelianGroup(tuple(_require(obj, "kernel", "extension")["moduli"]))
    fs = _require(obj, "factor_set", "extension")
    return tower.build_extension(base, kernel, fs)


def tower_to_json(t):
    return {"kind": "tower", "extensions": [extension_to_json(e) for e in t.extensions]}


def tower_from_json(obj):
    if isinstance(obj, list):
        exts = [extension_from_json(e) for e in obj]
    else:
        exts = [extension_from_json(e) for e in _require(obj, "extensions", "tower")]
    return tower.ExtensionTower(exts)


def transitions_to_json(g):
    return {
        "kind": "transitions",
        "edges": [{"i": i, "j": j, "g": v} for (i, j), v in g.items()],
    }


def transitions_from_json(obj, nerve_, group):
    g = {}
    for e in _require(obj, "edges", "transitions"):
        g[(int(e["i"]), int(e["j"]))] = int(e["g"])
    return tower.TransitionCocycle(nerve_, group, g)


# -- short exact sequences ----------------------------------------------------

def ses_to_json(s):
    return {
        "kind": "ses",
        "A": {"moduli": list(s.A.moduli)},
        "B": {"moduli": list(s.B.moduli)},
        "C": {"moduli": list(s.C.moduli)},
        "inject": [list(r) for r in s.inject.matrix],
        "project": [list(r) for r in s.project.matrix],
    }


def ses_from_json(obj):
    a = FgAbelianGroup(tuple(_require(obj, "A", "ses")["moduli"]))
    b = FgAbelianGroup(tuple(_require(obj, "B", "ses")["moduli"]))
    c = FgAbelianGroup(tuple(_require(obj, "C", "ses")["moduli"]))
    inject = Homomorphism(a, b, tuple(tuple(r) for r in _require(obj, "inject", "ses")))
    project = Homomorphism(b, c, tuple(tuple(r) for r in _require(obj, "project", "ses")))
    try:
        return ShortExactSequence(a, b, c, inject, project)
    except ValueError as exc:
        raise FormatError(f"not a short exact sequence: {exc}") from exc


# -- packages ------------------------------------------------------------------

def package_to_json(p):
    layers = []
    for q in sorted(p.layers):
        layer = p.layers[q]
        blocks = []
        for t, loc in sorted(layer.values.items()):
            blocks.append(
                {
                    "indices": list(t),
                    "cochain": [
                        {
                            "simplex": list(s),
                            "value": {"num": v.numerator, "den": v.denominator},
                        }
                        for s, v in sorted(loc.items())
                    ],
                }
            )
        layers.append(
            {"cech_degree": layer.cech_degree, "form_degree": layer.form_degree, "values": blocks}
        )
    return {
        "kind": "package",
        "degree": p.degree,
        "cover": cover_to_json(p.cover),
        "cocycle": cochain_to_json(p.cocycle),
        "layers": layers,
    }


def package_from_json(obj):
    cover = cover_from_json(_require(obj, "cover", "package"))
    nerve_ = nerve(cover)
    degree = _require(obj, "degree", "package")
    cocycle = cochain_from_json(_require(obj, "cocycle", "package"), carrier=nerve_)
    layers = {}
    for block in _require(obj, "layers", "package"):
        q = block["cech_degree"]
        values = {}
        for entry in block["values"]:
            loc = {}
            for cell in entry["cochain"]:
                loc[tuple(cell["simplex"])] = Fraction(
                    cell["value"]["num"], cell["value"]["den"]
                )
            values[tuple(entry["indices"])] = loc
        layers[q] = deligne.DoubleCochain(
            cover, nerve_, q, block["form_degree"], values
        )
    pkg = deligne.DelignePackage(cover, nerve_, degree, cocycle, layers)
    pkg.validate()
    return pkg


# -- result artifacts -----------------------------------------------------------

def rational_cochain_to_json(x, complex_):
    return {
        "kind": "rational_cochain",
        "complex": complex_to_json(complex_),
        "degree": x.degree,
        "values": [
            {"simplex": list(s), "num": v.numerator, "den": v.denominator}
            for s, v in x.items()
        ],
    }


def rational_cochain_from_json(obj):
    complex_ = complex_from_json(_require(obj, "complex", "rational_cochain"))
    values = {
        tuple(e["simplex"]): Fraction(e["num"], e["den"])
        for e in _require(obj, "values", "rational_cochain")
    }
    return Cochain(complex_, _require(obj, "degree", "rational_cochain"), abelian.QQ, values)


def circle_value_to_json(v):
    return {"kind": "circle_value", "num": v.value.numerator, "den": v.value.denominator}


def circle_value_from_json(obj):
    return CircleElement(Fraction(_require(obj, "num", "circle_value"), obj["den"]))


# -- dispatch -------------------------------------------------------------------

_LOADERS = {
    "complex": complex_from_json,
    "cover": cover_from_json,
    "group": group_from_json,
    "finite_group": finite_group_from_json,
    "extension": extension_from_json,
    "tower": tower_from_json,
    "ses": ses_from_json,
    "package": package_from_json,
    "rational_cochain": rational_cochain_from_json,
    "circle_value": circle_value_from_json,
}


def load_typed(path, expect=None):
    """Load a container file, optionally enforcing its kind."""
    obj = load_json(path)
    kind = kind_of(obj) if not isinstance(obj, list) else "tower"
    if expect is not None and kind != expect:
        raise FormatError(f"{path}: expected a {expect} file, found {kind}")
    loader = _LOADERS.get(kind)
    if loader is None:
        raise FormatError(f"{path}: no loader for kind {kind!r}")
    return loader(obj)
