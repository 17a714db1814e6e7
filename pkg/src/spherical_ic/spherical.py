"""Combinatorial data of an affine spherical variety with all simple roots of type T.

A datum records the colour valuations, the pair of colours attached to each
simple root, extra antidominant generators of the monoid c_X, the
eigencharacter h of a volume form and a grading functional that is strictly
positive on c_X \\ 0 (used to bound every enumeration).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lattice import (
    Coweight,
    Functional,
    RootDatum,
    add,
    as_coweight,
    as_functional,
    neg,
    pairing,
    sub,
)


@dataclass(frozen=True)
class FrobeniusDatum:
    """Action of geometric Frobenius: a lattice automorphism with compatible permutations."""

    lattice_auto: tuple[tuple[int, ...], ...]
    color_perm: Mapping[str, str]
    dynkin_perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lattice_auto", tuple(tuple(int(v) for v in row) for row in self.lattice_auto))
        object.__setattr__(self, "color_perm", dict(self.color_perm))
        object.__setattr__(self, "dynkin_perm", tuple(int(i) for i in self.dynkin_perm))

    def __hash__(self):
        return hash((self.lattice_auto, tuple(sorted(self.color_perm.items())), self.dynkin_perm))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.lattice_auto, dtype=np.int64).reshape(len(self.lattice_auto), -1)

    def apply(self, x: Sequence[int]) -> Coweight:
        if not len(x):
            return ()
        return tuple(int(v) for v in self.matrix @ np.array(x, dtype=np.int64))

    def order(self, limit: int = 64) -> int | None:
        m = self.matrix
        if not m.size:
            return 1
        p = m.copy()
        ident = np.eye(len(m), dtype=np.int64)
        for k in range(1, limit + 1):
            if np.array_equal(p, ident):
                return k
            p = m @ p
        return None

    @staticmethod
    def identity(rank: int, colors: Iterable[str], n_simple: int) -> "FrobeniusDatum":
        return FrobeniusDatum(
            tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)),
            {c: c for c in colors},
            tuple(range(n_simple)),
        )

    def to_json(self) -> dict:
        return {
            "lattice_auto": [list(r) for r in self.lattice_auto],
            "color_perm": dict(sorted(self.color_perm.items())),
            "dynkin_perm": list(self.dynkin_perm),
        }


@dataclass(frozen=True)
class SphericalDatum:
    root_datum: RootDatum
    colors: tuple[tuple[str, Coweight], ...]
    color_pairs: Mapping[int, tuple[str, str]]
    extra_generators: tuple[Coweight, ...]
    h_char: Functional
    grading: Functional
    frobenius: FrobeniusDatum | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple((str(n), as_coweight(v)) for n, v in self.colors))
        object.__setattr__(
            self, "color_pairs", {int(i): tuple(p) for i, p in sorted(dict(self.color_pairs).items())}
        )
        object.__setattr__(self, "extra_generators", tuple(as_coweight(g) for g in self.extra_generators))
        object.__setattr__(self, "h_char", as_functional(self.h_char))
        object.__setattr__(self, "grading", as_functional(self.grading))

    def __hash__(self):
        return hash((self.root_datum, self.colors, tuple(self.color_pairs.items()),
                     self.extra_generators, self.h_char, self.grading, self.frobenius, self.name))

    @property
    def rank(self) -> int:
        return self.root_datum.rank

    @cached_property
    def valuation(self) -> dict[str, Coweight]:
        return dict(self.colors)

    @property
    def color_names(self) -> list[str]:
        return [n for n, _ in self.colors]

    @property
    def color_valuations(self) -> list[Coweight]:
        return [v for _, v in self.colors]

    @property
    def generators(self) -> list[Coweight]:
        return self.color_valuations + list(self.extra_generators)

    def grade(self, x: Sequence) -> Fraction:
        cache = self.__dict__.setdefault("_grade_cache", {})
        key = tuple(x)
        if key not in cache:
            cache[key] = pairing(self.grading, key)
        return cache[key]

    @cached_property
    def length_functional(self) -> Functional:
        return add(self.h_char, self.root_datum.two_rho)

    def with_frobenius(self, fr: FrobeniusDatum | None) -> "SphericalDatum":
        return SphericalDatum(self.root_datum, self.colors, self.color_pairs, self.extra_generators,
                              self.h_char, self.grading, fr, self.name)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


def validate(d: SphericalDatum) -> list[Violation]:
    """Check the type-T axioms and the standing assumptions; empty list means valid."""
    rd = d.root_datum
    out: list[Violation] = []
    names = d.color_names
    if len(set(names)) != len(names):
        out.append(Violation("duplicate-color", f"colour names {names} are not distinct"))
    val = d.valuation
    for v in d.generators:
        if len(v) != rd.rank:
            out.append(Violation("rank-mismatch", f"generator {v} has wrong rank"))
            return out

    attached = set()
    for i in range(rd.semisimple_rank):
        pair = d.color_pairs.get(i)
        label = rd.labels[i]
        if pair is None or len(pair) != 2 or len(set(pair)) != 2:
            out.append(Violation("pair-missing", f"simple root {label} needs two distinct colours, got {pair}"))
            continue
        unknown = [c for c in pair if c not in val]
        if unknown:
            out.append(Violation("unknown-color", f"colours {unknown} in pair of {label} are not declared"))
            continue
        attached.update(pair)
        s = add(val[pair[0]], val[pair[1]])
        if s != rd.simple_coroots[i]:
            out.append(Violation("pair-sum-not-coroot",
                                 f"nu({pair[0]}) + nu({pair[1]}) = {s} != {rd.simple_coroots[i]} for {label}"))
        for name, v in d.colors:
            p = rd.pair(i, v)
            if name in pair:
                if p != 1:
                    out.append(Violation("pairing-not-one", f"<{label}, nu({name})> = {p}, expected 1"))
            elif p > 0:
                out.append(Violation("pair-mismatch",
                                     f"<{label}, nu({name})> = {p} > 0 but {name} is not in D({label})"))
    for name in names:
        if rd.semisimple_rank and name not in attached:
            out.append(Violation("color-unattached", f"colour {name} belongs to no D(alpha)"))

    for g in d.extra_generators:
        if not rd.is_antidominant(g):
            out.append(Violation("extra-not-antidominant", f"extra generator {g} is not antidominant"))

    for i in range(rd.semisimple_rank):
        if pairing(d.h_char, rd.simple_coroots[i]) != 0:
            out.append(Violation("h-not-invariant", f"h is not W-invariant: <h, {rd.labels[i]}^vee> != 0"))
    for name, v in d.colors:
        ln = pairing(d.length_functional, v)
        if ln != 1:
            out.append(Violation("length-not-one", f"<h + 2rho, nu({name})> = {ln}, expected 1"))

    for g in d.generators:
        if d.grade(g) <= 0:
            out.append(Violation("grading-not-strictly-positive", f"grading of generator {g} is {d.grade(g)}"))

    if d.frobenius is not None:
        out.extend(_validate_frobenius(d))
    return out


def _validate_frobenius(d: SphericalDatum) -> list[Violation]:
    fr = d.frobenius
    rd = d.root_datum
    out = []
    m = fr.matrix
    if m.shape != (rd.rank, rd.rank):
        return [Violation("frobenius-shape", f"lattice automorphism has shape {m.shape}")]
    if fr.order() is None:
        out.append(Violation("frobenius-infinite-order", "lattice automorphism has no finite order <= 64"))
    if sorted(fr.dynkin_perm) != list(range(rd.semisimple_rank)):
        out.append(Violation("frobenius-dynkin-perm", f"{fr.dynkin_perm} is not a permutation of simple roots"))
        return out
    if sorted(fr.color_perm) != sorted(d.color_names) or sorted(fr.color_perm.values()) != sorted(d.color_names):
        out.append(Violation("frobenius-color-perm", "colour permutation is not a bijection of the colours"))
        return out
    for i, j in enumerate(fr.dynkin_perm):
        if fr.apply(rd.simple_coroots[i]) != rd.simple_coroots[j]:
            out.append(Violation("frobenius-coroots", f"sigma(alpha_{i}^vee) != alpha_{j}^vee"))
        # alpha_j o sigma == alpha_i
        pulled = tuple(sum((rd.simple_roots[j][k] * int(m[k, c]) for k in range(rd.rank)), Fraction(0))
                       for c in range(rd.rank))
        if pulled != rd.simple_roots[i]:
            out.append(Violation("frobenius-roots", f"alpha_{j} o sigma != alpha_{i}"))
    for name, v in d.colors:
        img = fr.color_perm[name]
        if fr.apply(v) != d.valuation[img]:
            out.append(Violation("frobenius-colors", f"sigma(nu({name})) != nu({img})"))
    extras = set(d.extra_generators)
    if {fr.apply(g) for g in extras} != extras:
        out.append(Violation("frobenius-extra", "sigma does not preserve the extra generators"))
    for f, label in ((d.h_char, "h"), (d.root_datum.two_rho, "2rho")):
        pulled = tuple(sum((f[k] * int(m[k, c]) for k in range(rd.rank)), Fraction(0)) for c in range(rd.rank))
        if pulled != f:
            out.append(Violation("frobenius-functional", f"{label} is not fixed by sigma"))
    return out


# -- monoid -------------------------------------------------------------------

class _SpanOracle:
    """Membership in the N-span of a finite set of vectors, by graded search."""

    def __init__(self, gens: Sequence[Coweight], grading: Functional):
        self.gens = list(dict.fromkeys(gens))
        self.grading = grading
        self._memo: dict[Coweight, bool] = {}

    def __call__(self, v: Coweight) -> bool:
        v = tuple(v)
        if all(a == 0 for a in v):
            return True
        if v in self._memo:
            return self._memo[v]
        g = pairing(self.grading, v)
        ok = False
        if g > 0:
            for gen in self.gens:
                if pairing(self.grading, gen) <= g and self(sub(v, gen)):
                    ok = True
                    break
        self._memo[v] = ok
        return ok


def _oracle(d: SphericalDatum, colors_only: bool) -> _SpanOracle:
    cache = d.__dict__.setdefault("_span_oracles", {})
    if colors_only not in cache:
        gens = d.color_valuations if colors_only else d.generators
        cache[colors_only] = _SpanOracle(gens, d.grading)
    return cache[colors_only]


def in_color_monoid(x: Sequence[int], d: SphericalDatum) -> bool:
    """Membership in c_X^D, the N-span of the colour valuations."""
    return _oracle(d, True)(tuple(x))


def in_monoid(x: Sequence[int], d: SphericalDatum) -> bool:
    """Membership in c_X (colours plus extra generators)."""
    return _oracle(d, False)(tuple(x))


def preceq(x: Sequence[int], y: Sequence[int], d: SphericalDatum) -> bool:
    """``x ⪯ y`` iff y - x is an N-combination of colour valuations."""
    return in_color_monoid(sub(y, x), d)


def monoid_elements(d: SphericalDatum, bound) -> dict[Coweight, tuple[int, ...]]:
    """All elements of c_X with grading <= bound, each with one witness.

    The witness counts generators in the order ``d.generators`` (colours first).
    Keys are ordered by grading, then coordinates.
    """
    gens = d.generators
    zero = (0,) * d.rank
    found = {zero: (0,) * len(gens)}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = add(x, g)
                if y in found or d.grade(y) > bound:
                    continue
                w = list(found[x])
                w[k] += 1
                found[y] = tuple(w)
                nxt.append(y)
        frontier = nxt
    return {k: found[k] for k in sorted(found, key=lambda v: (d.grade(v), v))}


def antidominant_elements(d: SphericalDatum, bound) -> list[Coweight]:
    rd = d.root_datum
    return [x for x in monoid_elements(d, bound) if rd.is_antidominant(x)]


@dataclass(frozen=True)
class SaturatedSet:
    elements: tuple[Coweight, ...]
    truncated: bool
    bound: Fraction = field(default=Fraction(0))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def saturated_set(d: SphericalDatum, bound=None, variant: str = "sum") -> SaturatedSet:
    """Antidominant primitive elements of c_X that are not (antidominant) + (colour-positive).

    ``variant="sum"`` excludes theta = theta' + lambda with lambda in c_X^D \\ 0;
    ``variant="color"`` only excludes theta = theta' + nu_D for a single colour.
    Every primitive element is one of the generators, and colours are never
    antidominant, so ``bound`` at least the largest grading of an extra
    generator is always sufficient; smaller bounds set ``truncated``.
    """
    if variant not in ("sum", "color"):
        raise ValueError(f"unknown variant {variant!r}")
    needed = max((d.grade(g) for g in d.extra_generators), default=Fraction(0))
    if bound is None:
        bound = needed
    bound = Fraction(bound)
    rd = d.root_datum
    elems = monoid_elements(d, bound)
    nonzero = [x for x in elems if any(x)]
    anti = [x for x in nonzero if rd.is_antidominant(x)]
    colors = d.color_valuations

    def primitive(x):
        gx = d.grade(x)
        return not any(d.grade(y) < gx and in_monoid(sub(x, y), d) for y in nonzero)

    out = []
    for th in anti:
        if not primitive(th):
            continue
        decomposable = False
        for th2 in anti:
            if th2 == th or d.grade(th2) >= d.grade(th):
                continue
            rest = sub(th, th2)
            if variant == "sum":
                decomposable = any(rest) and in_color_monoid(rest, d)
            else:
                decomposable = rest in colors
            if decomposable:
                break
        if not decomposable:
            out.append(th)
    return SaturatedSet(tuple(out), truncated=bound < needed, bound=bound)


def length(x: Sequence[int], d: SphericalDatum) -> Fraction:
    """len(x) = <h + 2 rho, x>."""
    return pairing(d.length_functional, x)


def is_minuscule(x: Sequence[int], rd: RootDatum) -> bool:
    return all(abs(pairing(a, x)) <= 1 for a in rd.positive_roots)


def color_orbit(d: SphericalDatum) -> set[Coweight]:
    """W-orbit of the colour valuations."""
    out = set()
    for v in d.color_valuations:
        out |= d.root_datum.orbit(v)
    return out


def dominant_color_translates(d: SphericalDatum) -> list[Coweight]:
    rd = d.root_datum
    return sorted({rd.dominant_translate(v) for v in d.color_valuations}, key=lambda v: (d.grade(v), v))


def orbit_sign_check(d: SphericalDatum) -> dict[Coweight, bool]:
    """For each w(nu_D): whether it lies in c_X^D or -c_X^D."""
    return {v: in_color_monoid(v, d) or in_color_monoid(neg(v), d) for v in sorted(color_orbit(d))}
