"""Shipped spherical data and the JSON datum format."""

from __future__ import annotations

import json
import re
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Callable

import jsonschema

from .lattice import RootDatum, _num_json, gl, pgl2, product
from .spherical import FrobeniusDatum, SphericalDatum


class DatumLoadError(ValueError):
    """Raised for unreadable, unknown or schema-violating datum references."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}" if pointer else message)


_VEC_INT = {"type": "array", "items": {"type": "integer"}}
_NUM = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_VEC_NUM = {"type": "array", "items": _NUM}

DATUM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["rank", "simple_coroots", "simple_roots", "colors", "color_pairs", "h_char", "grading"],
    "properties": {
        "name": {"type": "string"},
        "rank": {"type": "integer", "minimum": 0},
        "simple_coroots": {"type": "array", "items": _VEC_INT},
        "simple_roots": {"type": "array", "items": _VEC_NUM},
        "labels": {"type": "array", "items": {"type": "string"}},
        "colors": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "valuation"],
                "properties": {"name": {"type": "string"}, "valuation": _VEC_INT},
            },
        },
        "color_pairs": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}},
        },
        "extra_generators": {"type": "array", "items": _VEC_INT},
        "h_char": _VEC_NUM,
        "grading": _VEC_NUM,
        "frobenius": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lattice_auto", "color_perm", "dynkin_perm"],
            "properties": {
                "lattice_auto": {"type": "array", "items": _VEC_INT},
                "color_perm": {"type": "object", "additionalProperties": {"type": "string"}},
                "dynkin_perm": _VEC_INT,
            },
        },
    },
}


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def datum_from_json(obj: dict) -> SphericalDatum:
    """Build a datum from its JSON object; schema errors carry a JSON pointer."""
    validator = jsonschema.Draft202012Validator(DATUM_SCHEMA)
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise DatumLoadError(e.message, _pointer(e.absolute_path))
    try:
        rd = RootDatum(
            obj["rank"],
            tuple(obj["simple_coroots"]),
            tuple(tuple(Fraction(v) for v in a) for a in obj["simple_roots"]),
            tuple(obj.get("labels", ())),
        )
    except ValueError as exc:
        raise DatumLoadError(str(exc), "/simple_roots") from exc
    pairs = {}
    for key, names in obj["color_pairs"].items():
        if key.isdigit():
            idx = int(key)
        elif key in rd.labels:
            idx = rd.labels.index(key)
        else:
            raise DatumLoadError(f"unknown simple root {key!r}", _pointer(["color_pairs", key]))
        pairs[idx] = tuple(names)
    fr = None
    if "frobenius" in obj:
        f = obj["frobenius"]
        fr = FrobeniusDatum(tuple(map(tuple, f["lattice_auto"])), f["color_perm"], tuple(f["dynkin_perm"]))
    for k, c in enumerate(obj["colors"]):
        if len(c["valuation"]) != rd.rank:
            raise DatumLoadError("valuation has wrong rank", _pointer(["colors", k, "valuation"]))
    for key in ("h_char", "grading"):
        if len(obj[key]) != rd.rank:
            raise DatumLoadError("functional has wrong rank", _pointer([key]))
    return SphericalDatum(
        rd,
        tuple((c["name"], tuple(c["valuation"])) for c in obj["colors"]),
        pairs,
        tuple(tuple(g) for g in obj.get("extra_generators", ())),
        tuple(Fraction(v) for v in obj["h_char"]),
        tuple(Fraction(v) for v in obj["grading"]),
        fr,
        obj.get("name", ""),
    )


def datum_to_json(d: SphericalDatum) -> dict:
    rd = d.root_datum
    out = {"name": d.name, **rd.to_json()}
    out["colors"] = [{"name": n, "valuation": list(v)} for n, v in d.colors]
    out["color_pairs"] = {rd.labels[i]: list(p) for i, p in sorted(d.color_pairs.items())}
    out["extra_generators"] = [list(g) for g in d.extra_generators]
    out["h_char"] = [_num_json(v) for v in d.h_char]
    out["grading"] = [_num_json(v) for v in d.grading]
    if d.frobenius is not None:
        out["frobenius"] = d.frobenius.to_json()
    return out


# -- catalog ------------------------------------------------------------------

def hecke_gl2() -> SphericalDatum:
    """GL2 acting on itself by the torus: colours eps1^vee and -eps2^vee."""
    return SphericalDatum(
        gl(2), (("D+", (1, 0)), ("D-", (0, -1))), {0: ("D+", "D-")}, (), (0, 0), (1, -1), name="hecke-gl2"
    )


def hecke_gl2_det() -> SphericalDatum:
    # synthetic: adds the antidominant generator (-1,-1) to exercise boundary strata
    d = hecke_gl2()
    return SphericalDatum(d.root_datum, d.colors, d.color_pairs, ((-1, -1),), d.h_char, (1, -2),
                          name="hecke-gl2-det")


def hecke_pgl2() -> SphericalDatum:
    """PGL2 version: both colours have valuation alpha^vee / 2."""
    return SphericalDatum(pgl2(), (("D+", (1,)), ("D-", (1,))), {0: ("D+", "D-")}, (), (0,), (1,),
                          name="hecke-pgl2")


def hecke_pgl2_nonsplit() -> SphericalDatum:
    """hecke-pgl2 with a Frobenius exchanging the two colours."""
    d = hecke_pgl2()
    fr = FrobeniusDatum(((1,),), {"D+": "D-", "D-": "D+"}, (0,))
    return SphericalDatum(d.root_datum, d.colors, d.color_pairs, (), d.h_char, d.grading, fr,
                          name="hecke-pgl2-nonsplit")


def nfold(n: int) -> SphericalDatum:
    """n copies of SL2 with the diagonal torus, glued along the determinant.

    Basis: b0 = (m + sum alpha_k)/2 followed by alpha_1 .. alpha_n, where m is
    the coweight of the central G_m.  In it alpha_i = (1, 2 delta_ik).
    """
    if n < 1:
        raise ValueError("nfold needs n >= 1")
    r = n + 1
    coroots = tuple(tuple(1 if k == i + 1 else 0 for k in range(r)) for i in range(n))
    roots = tuple(tuple([1] + [2 if k == i else 0 for k in range(n)]) for i in range(n))
    rd = RootDatum(r, coroots, roots, tuple(f"a{i + 1}" for i in range(n)))
    colors = [("D0", tuple([-1] + [1] * n))]
    for i in range(n):
        colors.append((f"D{i + 1}", tuple([1] + [0 if k == i else -1 for k in range(n)])))
    pairs = {i: ("D0", f"D{i + 1}") for i in range(n)}
    h = tuple([n - 1] + [0] * n)
    grading = tuple([2 * n - 1] + [2] * n)
    return SphericalDatum(rd, tuple(colors), pairs, (), h, grading, name=f"nfold({n})")


def product_datum(*data: SphericalDatum, name: str = "") -> SphericalDatum:
    """Direct product of spherical data; colour names get a ``.k`` suffix."""
    rd = product(*(d.root_datum for d in data))
    colors, pairs, extras, h, grading = [], {}, [], [], []
    offset = 0
    idx = 0
    for k, d in enumerate(data, start=1):
        pad = lambda v: (0,) * offset + tuple(v) + (0,) * (rd.rank - offset - d.rank)
        colors += [(f"{c}.{k}", pad(v)) for c, v in d.colors]
        for i, (a, b) in d.color_pairs.items():
            pairs[idx + i] = (f"{a}.{k}", f"{b}.{k}")
        extras += [pad(g) for g in d.extra_generators]
        h += list(d.h_char)
        grading += list(d.grading)
        offset += d.rank
        idx += d.root_datum.semisimple_rank
    return SphericalDatum(rd, tuple(colors), pairs, tuple(extras), tuple(h), tuple(grading),
                          name=name or " x ".join(d.name for d in data))


def a1xa1_product() -> SphericalDatum:
    return product_datum(hecke_gl2(), hecke_gl2(), name="a1xa1-product")


CATALOG: dict[str, Callable[[], SphericalDatum]] = {
    "hecke-gl2": hecke_gl2,
    "hecke-gl2-det": hecke_gl2_det,
    "hecke-pgl2": hecke_pgl2,
    "hecke-pgl2-nonsplit": hecke_pgl2_nonsplit,
    "nfold(1)": lambda: nfold(1),
    "nfold(2)": lambda: nfold(2),
    "nfold(3)": lambda: nfold(3),
    "a1xa1-product": a1xa1_product,
}

_NFOLD = re.compile(r"^nfold\((\d+)\)$")


def catalog_names() -> list[str]:
    return list(CATALOG)


def load_datum(ref: str) -> SphericalDatum:
    """Load a datum by catalog name or JSON file path.

    A file whose path collides with a catalog name wins, with a warning.
    """
    path = Path(ref)
    in_catalog = ref in CATALOG or bool(_NFOLD.match(ref))
    if path.is_file():
        if in_catalog:
            warnings.warn(f"file {ref!r} overrides the catalog datum of the same name", stacklevel=2)
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DatumLoadError(f"malformed JSON in {path}: {exc}") from exc
        return datum_from_json(obj)
    if ref in CATALOG:
        return CATALOG[ref]()
    m = _NFOLD.match(ref)
    if m:
        return nfold(int(m.group(1)))
    if ref.endswith(".json") or "/" in ref:
        raise DatumLoadError(f"no such file: {path}")
    raise DatumLoadError(f"unknown datum {ref!r}; known: {', '.join(CATALOG)}")
