"""The crystal B_X attached to a spherical datum and the checks it must pass.

B_X is assembled from irreducible crystals: one copy of V^lam for each
dominant Weyl translate lam of a colour valuation (two copies when 2 lam is a
coroot), plus the modules of lowest weight theta and highest weight -theta for
each theta in the saturated set.  Elements whose weight lies in c_X \\ 0 form
the plus part; the remaining elements are their duals.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .crystal import (
    Crystal,
    check_axioms,
    check_normality,
    character,
    disjoint_union,
    dual_crystal,
    irreducible_crystal,
    isomorphism,
    lowest_weight_crystal,
    restrict_to_levi,
    weight_multiplicity,
)
from .lattice import Coweight, RootDatum, as_coweight, neg, pairing, scale, sub
from .spherical import (
    SphericalDatum,
    color_orbit,
    dominant_color_translates,
    in_monoid,
    length,
    saturated_set,
)

OPEN = "open"
BOUNDARY = "boundary"


class XCrystalError(ValueError):
    pass


@dataclass(frozen=True)
class Summand:
    kind: str  # OPEN or BOUNDARY
    weight: Coweight  # highest weight (open) or the signed saturated element (boundary)
    label: str  # distinguishes copies of the same open summand
    start: int
    size: int

    @property
    def elements(self) -> range:
        return range(self.start, self.start + self.size)


def _half_coroot(lam: Coweight, rd: RootDatum) -> bool:
    return scale(2, lam) in rd.coroots


def open_multiplicity(lam: Sequence[int], rd: RootDatum) -> int:
    """2 when 2 lam is a coroot, otherwise 1."""
    return 2 if _half_coroot(as_coweight(lam), rd) else 1


@dataclass(frozen=True, eq=False)
class XCrystal:
    datum: SphericalDatum
    crystal: Crystal
    summands: tuple[Summand, ...]
    summand_of: tuple[int, ...]
    twist: tuple[Fraction, ...]
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    dual_map: dict[int, int]
    saturated: tuple[Coweight, ...]
    truncated: bool = False
    warnings: tuple[str, ...] = ()

    @property
    def root_datum(self) -> RootDatum:
        return self.datum.root_datum

    def provenance(self, b: int) -> tuple:
        s = self.summands[self.summand_of[b]]
        return (s.kind, s.weight)

    def is_open(self, b: int) -> bool:
        return self.summands[self.summand_of[b]].kind == OPEN

    @property
    def plus_part(self) -> Crystal:
        return self.crystal.subcrystal(self.plus)[0]

    @property
    def minus_part(self) -> Crystal:
        return self.crystal.subcrystal(self.minus)[0]

    def plus_weights(self) -> list[Coweight]:
        return [self.crystal.wt[b] for b in self.plus]

    def plus_twists(self) -> list[Fraction]:
        return [self.twist[b] for b in self.plus]

    def without(self, removed: Iterable[int]) -> "XCrystal":
        """Copy with some elements deleted (for negative tests); the dual map becomes partial."""
        removed = set(removed)
        keep = [b for b in self.crystal.elements if b not in removed]
        c, old = self.crystal.subcrystal(keep)
        new = {b: k for k, b in enumerate(old)}
        summands = []
        for s in self.summands:
            ids = [new[b] for b in s.elements if b in new]
            summands.append(Summand(s.kind, s.weight, s.label, ids[0] if ids else 0, len(ids)))
        return XCrystal(
            self.datum,
            c,
            tuple(summands),
            tuple(self.summand_of[b] for b in old),
            tuple(self.twist[b] for b in old),
            tuple(new[b] for b in self.plus if b in new),
            tuple(new[b] for b in self.minus if b in new),
            {new[a]: new[b] for a, b in self.dual_map.items() if a in new and b in new},
            self.saturated,
            self.truncated,
            self.warnings,
        )

    def annotations(self) -> dict[str, list]:
        return {
            "provenance": [[k, list(w)] for k, w in (self.provenance(b) for b in self.crystal.elements)],
            "twist": [str(t) for t in self.twist],
            "part": ["plus" if b in set(self.plus) else "minus" for b in self.crystal.elements],
        }


def build_xcrystal(d: SphericalDatum, sat_bound=None, variant: str = "sum") -> XCrystal:
    rd = d.root_datum
    sat = saturated_set(d, sat_bound, variant)
    warnings = []
    if sat.truncated:
        warnings.append(f"saturated set may be truncated at grading bound {sat.bound}")
    parts: list[tuple[Crystal, str, Coweight, str, Fraction]] = []
    for lam in dominant_color_translates(d):
        m = open_multiplicity(lam, rd)
        names = sorted(n for n, v in d.colors if rd.dominant_translate(v) == lam)
        labels = names if len(names) == m else [str(k) for k in range(m)]
        for lab in labels:
            parts.append((irreducible_crystal(lam, rd), OPEN, lam, lab, Fraction(1, 2)))
    for th in sat:
        c = Fraction(length(th, d)) / 2
        parts.append((lowest_weight_crystal(th, rd), BOUNDARY, th, "", c))
        parts.append((irreducible_crystal(neg(th), rd), BOUNDARY, neg(th), "", c))

    summands, summand_of, twist, keys = [], [], [], []
    start = 0
    for k, (c, kind, w, lab, tw) in enumerate(parts):
        summands.append(Summand(kind, w, lab, start, len(c)))
        summand_of += [k] * len(c)
        twist += [tw] * len(c)
        keys += [(kind,) if kind == OPEN else (kind, w)] * len(c)
        start += len(c)
    if not parts:
        crystal = Crystal(rd, (), tuple({} for _ in range(rd.semisimple_rank)))
    else:
        crystal = disjoint_union(*(p[0].with_keys(None) for p in parts))

    plus = tuple(b for b in crystal.elements if any(crystal.wt[b]) and in_monoid(crystal.wt[b], d))
    plus_set = set(plus)
    minus = tuple(b for b in crystal.elements if b not in plus_set)

    keyed = crystal.with_keys(keys)
    dual_keys = [k if k[0] == OPEN else (k[0], neg(k[1])) for k in keys]
    dual = dual_crystal(crystal).with_keys(dual_keys)
    iso = isomorphism(keyed, dual)
    if iso is None:
        warnings.append("no provenance-preserving isomorphism with the dual crystal")
        iso = {}
    return XCrystal(d, crystal, tuple(summands), tuple(summand_of), tuple(twist), plus, minus, iso,
                    tuple(sat), sat.truncated, tuple(warnings))


# -- verification -------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks] + [f"[NOTE] {n}" for n in self.notes]


def _check_weight_set(x: XCrystal) -> Check:
    rd = x.root_datum
    expected = set()
    for lam in dominant_color_translates(x.datum):
        expected |= set(character(lam, rd))
    got = {x.crystal.wt[b] for b in x.crystal.elements if x.is_open(b)}
    missing, extra = expected - got, got - expected
    detail = "" if not (missing or extra) else f"missing {sorted(missing)[:4]}, unexpected {sorted(extra)[:4]}"
    return Check("weight-set", not missing and not extra, detail)


def _check_weyl_invariance(x: XCrystal) -> Check:
    rd = x.root_datum
    counts = Counter(x.crystal.wt)
    for mu, n in counts.items():
        for i in range(rd.semisimple_rank):
            nu = rd.reflect(i, mu)
            if counts.get(nu, 0) != n:
                return Check("weyl-invariance", False, f"mult({mu}) = {n} but mult({nu}) = {counts.get(nu, 0)}")
    return Check("weyl-invariance", True)


def _check_color_multiplicity(x: XCrystal) -> Check:
    rd = x.root_datum
    counts = Counter(x.crystal.wt[b] for b in x.crystal.elements if x.is_open(b))
    for lam in sorted(color_orbit(x.datum)):
        want = open_multiplicity(lam, rd)
        if counts.get(lam, 0) != want:
            return Check("color-multiplicity", False, f"weight {lam} has {counts.get(lam, 0)} elements, expected {want}")
    return Check("color-multiplicity", True)


def lowering_chain(x: XCrystal, b: int) -> list[tuple[int, int]] | None:
    """Shortest sequence of (index, element) f-steps from b to an element of colour weight."""
    targets = set(x.datum.color_valuations)
    c = x.crystal
    prev: dict[int, tuple[int, int] | None] = {b: None}
    queue = deque([b])
    while queue:
        y = queue.popleft()
        if c.wt[y] in targets:
            path = []
            while prev[y] is not None:
                i, p = prev[y]
                path.append((i, y))
                y = p
            return path[::-1]
        for i in c.indices:
            z = c.f(i, y)
            if z is not None and z not in prev:
                prev[z] = (i, y)
                queue.append(z)
    return None


def _check_lowering_chains(x: XCrystal) -> Check:
    for b in x.plus:
        if x.is_open(b) and lowering_chain(x, b) is None:
            return Check("lowering-chains", False, f"element {b} of weight {x.crystal.wt[b]} reaches no colour weight")
    return Check("lowering-chains", True)


def _check_rank_one_shape(x: XCrystal) -> Check:
    c = x.crystal
    for i in c.indices:
        r = restrict_to_levi(c, [i])
        if check_axioms(r):
            return Check("rank-one-shape", False, f"restriction to {i} is not seminormal")
        comp_of = {}
        comps = r.components()
        for k, comp in enumerate(comps):
            for b in comp:
                comp_of[b] = k
        for comp in comps:
            tops = [b for b in comp if r.is_highest_weight(b)]
            if len(tops) != 1:
                return Check("rank-one-shape", False, f"component {comp} over index {i} is not a string")
            img = {x.dual_map.get(b) for b in comp}
            if None in img:
                return Check("rank-one-shape", False, f"component {comp} over index {i} has no dual partner")
            partner = {comp_of[b] for b in img}
            if len(partner) != 1 or len(comps[partner.pop()]) != len(comp):
                return Check("rank-one-shape", False, f"component {comp} over index {i} does not pair under duality")
    return Check("rank-one-shape", True)


def _check_self_duality(x: XCrystal) -> Check:
    c, iota = x.crystal, x.dual_map
    if sorted(iota) != list(c.elements) or sorted(iota.values()) != list(c.elements):
        return Check("self-duality", False, "duality map is not a bijection of the crystal")
    for b, y in iota.items():
        if c.wt[y] != neg(c.wt[b]):
            return Check("self-duality", False, f"wt of dual of {b} is not -wt")
        kb, ky = x.provenance(b), x.provenance(y)
        if kb[0] != ky[0] or (kb[0] == BOUNDARY and ky[1] != neg(kb[1])):
            return Check("self-duality", False, f"provenance of {b} not preserved")
        for i in c.indices:
            fb = c.f(i, b)
            if (fb is None) != (c.e(i, y) is None) or (fb is not None and iota[fb] != c.e(i, y)):
                return Check("self-duality", False, f"duality does not intertwine f_{i} and e_{i} at {b}")
    plus = set(x.plus)
    if {iota[b] for b in x.plus} != set(x.minus) or plus & set(x.minus):
        return Check("self-duality", False, "duality does not exchange the plus and minus parts")
    return Check("self-duality", True)


def verify_properties(x: XCrystal) -> Report:
    rep = Report()
    rep.checks.append(Check("seminormal", not check_axioms(x.crystal)))
    rep.checks.append(_check_weight_set(x))
    rep.checks.append(_check_weyl_invariance(x))
    rep.checks.append(_check_color_multiplicity(x))
    rep.checks.append(_check_lowering_chains(x))
    rep.checks.append(_check_rank_one_shape(x))
    rep.checks.append(_check_self_duality(x))
    for w in x.warnings:
        rep.notes.append(w)
    # multiplicities away from colour translates are only predicted, not proven
    rd = x.root_datum
    expected = Counter()
    for s in x.summands:
        if s.kind == OPEN and s.label == next(t.label for t in x.summands if t.kind == OPEN and t.weight == s.weight):
            for mu, m in character(s.weight, rd).items():
                expected[mu] += m * open_multiplicity(s.weight, rd)
    got = Counter(x.crystal.wt[b] for b in x.crystal.elements if x.is_open(b))
    agree = got == expected
    rep.notes.append(f"conjecture-level: open-part multiplicities {'agree' if agree else 'differ'} "
                     f"with the predicted module")
    minuscule = all(all(abs(pairing(a, lam)) <= 1 for a in rd.positive_roots)
                    for lam in dominant_color_translates(x.datum))
    if minuscule:
        rep.notes.append("all dominant colour translates are minuscule")
    return rep


def normality(x: XCrystal):
    return check_normality(x.crystal)


# -- dimensions ------------------------------------------------------------------

def critical_dimension(lam: Sequence[int], stratum, d: SphericalDatum) -> Fraction:
    """Critical dimension of central fibres at lam over the open stratum or a boundary stratum theta.

    ``stratum`` is ``"open"`` or an antidominant coweight theta.
    """
    lam = as_coweight(lam)
    rd = d.root_datum
    if stratum == OPEN:
        if not in_monoid(lam, d):
            raise XCrystalError(f"{lam} is not in the monoid")
        return (length(lam, d) - 1) / 2
    theta = as_coweight(stratum)
    if mv_cycle_count(lam, theta, rd) == 0:
        raise XCrystalError(f"{lam} is not a weight of the module of lowest weight {theta}")
    return pairing(rd.two_rho, sub(lam, theta)) / 2


def mv_cycle_count(lam: Sequence[int], theta: Sequence[int], rd: RootDatum) -> int:
    """Multiplicity of lam in the irreducible module with lowest weight theta."""
    theta = as_coweight(theta)
    if not rd.is_antidominant(theta):
        raise XCrystalError(f"{theta} is not antidominant")
    return weight_multiplicity(rd.dominant_translate(theta), lam, rd)


# -- Frobenius ------------------------------------------------------------------

def frobenius_permutation(x: XCrystal) -> dict[int, int]:
    """Induced Frobenius on the plus part.

    Summands go to their sigma-images (copies of a doubled summand follow the
    colour permutation) and elements are matched along f-edges twisted by the
    Dynkin permutation.  Refused when a plus weight space has dimension > 2.
    """
    d = x.datum
    fr = d.frobenius
    if fr is None:
        raise XCrystalError("datum has no Frobenius")
    c = x.crystal
    mult = Counter(c.wt[b] for b in x.plus)
    if mult and max(mult.values()) > 2:
        raise XCrystalError("Frobenius action is only modelled for plus weight spaces of dimension <= 2")
    index = {(s.kind, s.weight, s.label): k for k, s in enumerate(x.summands)}
    perm: dict[int, int] = {}
    for s in x.summands:
        label = fr.color_perm.get(s.label, s.label) if s.kind == OPEN else s.label
        target = index.get((s.kind, fr.apply(s.weight), label))
        if target is None:
            raise XCrystalError(f"no sigma-image for summand {s}")
        t = x.summands[target]
        top_s = next(b for b in s.elements if c.is_highest_weight(b))
        top_t = next(b for b in t.elements if c.is_highest_weight(b))
        m = {top_s: top_t}
        queue = deque([top_s])
        while queue:
            b = queue.popleft()
            for i in c.indices:
                fb = c.f(i, b)
                if fb is None or fb in m:
                    continue
                m[fb] = c.f(fr.dynkin_perm[i], m[b])
                queue.append(fb)
        for b, y in m.items():
            if y is None or c.wt[y] != fr.apply(c.wt[b]):
                raise XCrystalError("Frobenius does not transport the summand crystal")
        perm.update(m)
    plus = set(x.plus)
    return {b: perm[b] for b in x.plus if perm[b] in plus}


def frobenius_orbits(x: XCrystal) -> list[list[int]]:
    perm = frobenius_permutation(x)
    if set(perm) != set(x.plus):
        raise XCrystalError("Frobenius does not preserve the plus part")
    seen, out = set(), []
    for b in x.plus:
        if b in seen:
            continue
        orb = [b]
        seen.add(b)
        y = perm[b]
        while y != b:
            orb.append(y)
            seen.add(y)
            y = perm[y]
        out.append(orb)
    return out
