"""Exact graded generating series on the coweight lattice.

Coefficients are Laurent polynomials in q^(1/2) with integer coefficients.
Every series here is supported in the monoid c_X and truncated by the grading
functional; since the numerator factors only add positive coroots (which have
positive grading), truncating the symmetric algebra first and multiplying the
numerator afterwards gives exact coefficients up to the bound.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lattice import Coweight, add, as_coweight, neg, sub
from .spherical import SphericalDatum, in_monoid, monoid_elements
from .xcrystal import XCrystal, XCrystalError, frobenius_orbits


class QLaurent:
    """Finite sum of c_k q^k with k in (1/2)Z and c_k nonzero integers."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            k = Fraction(k)
            if (2 * k).denominator != 1:
                raise ValueError(f"exponent {k} is not a half-integer")
            if c:
                clean[k] = clean.get(k, 0) + int(c)
        self.terms = {k: c for k, c in sorted(clean.items()) if c}

    @classmethod
    def monomial(cls, exponent, coeff: int = 1) -> "QLaurent":
        return cls({exponent: coeff})

    @classmethod
    def one(cls) -> "QLaurent":
        return cls({0: 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QLaurent({0: other})
        return isinstance(other, QLaurent) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other: "QLaurent") -> "QLaurent":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return QLaurent(out)

    def __neg__(self) -> "QLaurent":
        return QLaurent({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "QLaurent") -> "QLaurent":
        return self + (-other)

    def __mul__(self, other: "QLaurent") -> "QLaurent":
        out: dict[Fraction, int] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return QLaurent(out)

    def __call__(self, q: float) -> float:
        return sum(c * float(q) ** float(k) for k, c in self.terms.items())

    def __repr__(self):
        return f"QLaurent({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class GradedSeries:
    datum: SphericalDatum
    bound: Fraction
    coeffs: Mapping[Coweight, QLaurent] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        kept = {as_coweight(k): v for k, v in self.coeffs.items() if v and self.datum.grade(k) <= self.bound}
        order = sorted(kept, key=lambda k: (self.datum.grade(k), k))
        object.__setattr__(self, "coeffs", {k: kept[k] for k in order})

    @classmethod
    def unit(cls, d: SphericalDatum, bound) -> "GradedSeries":
        return cls(d, bound, {(0,) * d.rank: QLaurent.one()})

    def __getitem__(self, key: Sequence[int]) -> QLaurent:
        return self.coeffs.get(as_coweight(key), QLaurent())

    def __contains__(self, key) -> bool:
        return as_coweight(key) in self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def keys(self):
        return self.coeffs.keys()

    def items(self):
        return self.coeffs.items()

    def __eq__(self, other):
        return isinstance(other, GradedSeries) and self.bound == other.bound and dict(self.coeffs) == dict(other.coeffs)

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        bound = min(self.bound, other.bound)
        out: dict[Coweight, QLaurent] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                k = add(a, b)
                if self.datum.grade(k) > bound:
                    continue
                out[k] = out.get(k, QLaurent()) + x * y
        return GradedSeries(self.datum, bound, out)

    def times_binomial(self, weight: Sequence[int], coeff: QLaurent) -> "GradedSeries":
        """Multiply by (1 + coeff * e^weight)."""
        out = dict(self.coeffs)
        for k, v in self.coeffs.items():
            key = add(k, weight)
            out[key] = out.get(key, QLaurent()) + coeff * v
        return GradedSeries(self.datum, self.bound, out)

    def times_geometric(self, weight: Sequence[int], exponent) -> "GradedSeries":
        """Multiply by (1 - q^exponent e^weight)^-1 expanded as a geometric series."""
        weight = as_coweight(weight)
        step = self.datum.grade(weight)
        if step <= 0:
            raise ValueError(f"weight {weight} has non-positive grading; the expansion would not terminate")
        out = {}
        # processing keys by increasing grading makes the recursion out[k] += q^e out[k - w] valid
        for k in sorted(self._closure(weight), key=lambda v: (self.datum.grade(v), v)):
            val = self.coeffs.get(k, QLaurent())
            prev = out.get(sub(k, weight))
            if prev:
                val = val + QLaurent.monomial(exponent) * prev
            if val:
                out[k] = val
        return GradedSeries(self.datum, self.bound, out)

    def _closure(self, weight: Coweight) -> set[Coweight]:
        keys = set()
        for k in self.coeffs:
            while self.datum.grade(k) <= self.bound:
                keys.add(k)
                k = add(k, weight)
        return keys

    def restrict(self, keys: Iterable[Coweight]) -> dict[Coweight, QLaurent]:
        wanted = set(keys)
        return {k: v for k, v in self.coeffs.items() if k in wanted}

    def terms(self) -> list[tuple[Coweight, Fraction, int]]:
        """Monomials (key, q-exponent, coefficient) in export order."""
        return [(k, e, c) for k, v in self.coeffs.items() for e, c in v.terms.items()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(self.datum.rank)] + ["q_exponent", "coefficient"])
        for k, e, c in self.terms():
            w.writerow(list(k) + [str(e), c])
        return buf.getvalue()


def _check_bound(bound):
    if bound < 0:
        raise ValueError("bound must be non-negative")


def sym_series(x: XCrystal, bound) -> GradedSeries:
    """Product over plus elements b of (1 - q^-c(b) e^wt(b))^-1."""
    _check_bound(bound)
    s = GradedSeries.unit(x.datum, bound)
    for b in x.plus:
        s = s.times_geometric(x.crystal.wt[b], -x.twist[b])
    return s


def _numerator(s: GradedSeries, x: XCrystal, q_exponent) -> GradedSeries:
    coeff = -QLaurent.monomial(q_exponent)
    for cr in x.root_datum.positive_coroots:
        s = s.times_binomial(cr, coeff)
    return s


def pushforward_series(x: XCrystal, bound) -> GradedSeries:
    """Product over positive coroots of (1 - q^-1 e^coroot), times the symmetric algebra series."""
    return _numerator(sym_series(x, bound), x, -1)


def asymptotics_series(x: XCrystal, bound) -> GradedSeries:
    """Product over positive coroots of (1 - e^coroot), times the symmetric algebra series."""
    return _numerator(sym_series(x, bound), x, 0)


def basic_function(x: XCrystal, bound) -> dict[Coweight, QLaurent]:
    """Asymptotics restricted to antidominant (and Frobenius-fixed) coweights."""
    rd = x.root_datum
    fr = x.datum.frobenius
    out = {}
    for k, v in asymptotics_series(x, bound).items():
        if rd.is_antidominant(k) and (fr is None or fr.apply(k) == k):
            out[k] = v
    return out


def frobenius_sym_series(x: XCrystal, bound) -> GradedSeries:
    """Trace of Frobenius on the symmetric algebra: one geometric factor per Frobenius orbit."""
    _check_bound(bound)
    s = GradedSeries.unit(x.datum, bound)
    c = x.crystal
    for orb in frobenius_orbits(x):
        total = (0,) * x.datum.rank
        for b in orb:
            total = add(total, c.wt[b])
        s = s.times_geometric(total, -sum((x.twist[b] for b in orb), Fraction(0)))
    return s


def coroot_orbits(x: XCrystal) -> list[list[Coweight]]:
    fr = x.datum.frobenius
    pos = x.root_datum.positive_coroots
    seen, out = set(), []
    for cr in pos:
        if cr in seen:
            continue
        orb = [cr]
        seen.add(cr)
        y = fr.apply(cr)
        while y != cr:
            if y not in pos:
                raise XCrystalError("Frobenius does not preserve the positive coroots")
            orb.append(y)
            seen.add(y)
            y = fr.apply(y)
        out.append(orb)
    return out


def frobenius_trace(x: XCrystal, bound) -> GradedSeries:
    """Frobenius-twisted pushforward: orbit-wise numerator times the orbit-wise symmetric algebra."""
    fr = x.datum.frobenius
    if fr is None:
        raise XCrystalError("datum has no Frobenius")
    s = frobenius_sym_series(x, bound)
    for orb in coroot_orbits(x):
        total = (0,) * x.datum.rank
        for cr in orb:
            total = add(total, cr)
        s = s.times_binomial(total, -QLaurent.monomial(-len(orb)))
    return GradedSeries(s.datum, s.bound, {k: v for k, v in s.items() if fr.apply(k) == k})


# -- partitions -----------------------------------------------------------------

Partition = tuple[Coweight, ...]


def partitions(lam: Sequence[int], d: SphericalDatum) -> list[Partition]:
    """All multisets of nonzero monoid elements with sum lam (each sorted)."""
    lam = as_coweight(lam)
    if not in_monoid(lam, d):
        return []
    g = d.grade(lam)
    parts = [k for k in monoid_elements(d, g) if any(k) and in_monoid(sub(lam, k), d)]
    parts.sort()
    out: list[Partition] = []

    def rec(rest: Coweight, start: int, acc: list[Coweight]):
        if not any(rest):
            out.append(tuple(acc))
            return
        for j in range(start, len(parts)):
            p = parts[j]
            r = sub(rest, p)
            if d.grade(r) >= 0 and in_monoid(r, d):
                acc.append(p)
                rec(r, j, acc)
                acc.pop()

    rec(lam, 0, [])
    return sorted(out, key=lambda p: (len(p), p))


def refines(fine: Partition, coarse: Partition) -> bool:
    """Whether ``fine`` is obtained from ``coarse`` by splitting parts, i.e. the parts of
    ``fine`` can be grouped into blocks whose sums are the parts of ``coarse``."""
    fine_c = Counter(fine)
    targets = sorted(coarse, key=lambda v: tuple(neg(v)))

    def take(target: Coweight, avail: Counter) -> Iterable[Counter]:
        # all sub-multisets of avail summing to target (nonempty), enumerated in sorted order
        items = sorted(avail)

        def rec(rest, j, chosen):
            if not any(rest) and chosen:
                yield chosen
                return
            for k in range(j, len(items)):
                v = items[k]
                if chosen[v] < avail[v]:
                    chosen[v] += 1
                    yield from rec(sub(rest, v), k, chosen)
                    chosen[v] -= 1
                    if not chosen[v]:
                        del chosen[v]

        yield from rec(target, 0, Counter())

    def solve(i: int, avail: Counter) -> bool:
        if i == len(targets):
            return not +avail
        for used in take(targets[i], avail):
            if solve(i + 1, avail - used):
                return True
        return False

    if len(fine) < len(coarse):
        return False
    return solve(0, fine_c)


def refinement_relation(parts: Sequence[Partition]) -> list[tuple[Partition, Partition]]:
    """Pairs (P, P') with P refining P' among the given partitions (reflexive pairs included)."""
    return [(a, b) for a in parts for b in parts if refines(a, b)]
