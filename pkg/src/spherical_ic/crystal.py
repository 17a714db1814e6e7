"""Finite crystals over the dual Lie algebra.

Elements are the integers ``0..n-1``; a crystal stores their weights and the
lowering operators ``f_i`` as partial maps, from which ``e_i``, ``eps_i`` and
``phi_i`` (string lengths) are derived.  Irreducible crystals come from the
Littelmann path model with exact rational arithmetic, and the Freudenthal
recursion serves as an independent character oracle.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .lattice import Coweight, RootDatum, add, as_coweight, neg, pairing, scale, sub


class CrystalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Crystal:
    root_datum: RootDatum
    wt: tuple[Coweight, ...]
    f_edges: tuple[Mapping[int, int], ...]
    keys: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "wt", tuple(as_coweight(w) for w in self.wt))
        object.__setattr__(self, "f_edges", tuple(dict(sorted(m.items())) for m in self.f_edges))
        if len(self.f_edges) != self.root_datum.semisimple_rank:
            raise CrystalError("one f-map per simple root is required")
        if self.keys is not None and len(self.keys) != len(self.wt):
            raise CrystalError("one key per element is required")

    def __len__(self) -> int:
        return len(self.wt)

    @property
    def elements(self) -> range:
        return range(len(self.wt))

    @property
    def indices(self) -> range:
        return range(self.root_datum.semisimple_rank)

    @cached_property
    def e_edges(self) -> tuple[dict[int, int], ...]:
        return tuple({v: k for k, v in m.items()} for m in self.f_edges)

    def f(self, i: int, b: int) -> int | None:
        return self.f_edges[i].get(b)

    def e(self, i: int, b: int) -> int | None:
        return self.e_edges[i].get(b)

    @cached_property
    def _strings(self) -> tuple[tuple[list[int], list[int]], ...]:
        out = []
        n = len(self)
        for i in self.indices:
            eps = [-1] * n
            phi = [-1] * n
            fi, ei = self.f_edges[i], self.e_edges[i]
            for b in self.elements:
                if b in ei:
                    continue
                chain = [b]
                while chain[-1] in fi and len(chain) <= n:
                    chain.append(fi[chain[-1]])
                for k, c in enumerate(chain):
                    eps[c], phi[c] = k, len(chain) - 1 - k
            out.append((eps, phi))
        return tuple(out)

    def epsilon(self, i: int, b: int) -> int:
        return self._strings[i][0][b]

    def phi(self, i: int, b: int) -> int:
        return self._strings[i][1][b]

    def string_data(self, b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (tuple(self.epsilon(i, b) for i in self.indices), tuple(self.phi(i, b) for i in self.indices))

    def character(self) -> Counter:
        return Counter(self.wt)

    def key(self, b: int):
        return None if self.keys is None else self.keys[b]

    def is_highest_weight(self, b: int, indices: Iterable[int] | None = None) -> bool:
        idx = self.indices if indices is None else indices
        return all(b not in self.e_edges[i] for i in idx)

    def components(self, indices: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components of the operator graph over the given indices."""
        idx = list(self.indices if indices is None else indices)
        seen = [False] * len(self)
        comps = []
        for b in self.elements:
            if seen[b]:
                continue
            seen[b] = True
            comp, queue = [], deque([b])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for i in idx:
                    for y in (self.f_edges[i].get(x), self.e_edges[i].get(x)):
                        if y is not None and not seen[y]:
                            seen[y] = True
                            queue.append(y)
            comps.append(sorted(comp))
        return comps

    def subcrystal(self, elements: Iterable[int]) -> tuple["Crystal", list[int]]:
        """Induced crystal on a subset (edges leaving it are dropped); also returns the old ids."""
        old = sorted(set(elements))
        new = {b: k for k, b in enumerate(old)}
        f = tuple({new[a]: new[b] for a, b in m.items() if a in new and b in new} for m in self.f_edges)
        keys = None if self.keys is None else tuple(self.keys[b] for b in old)
        return Crystal(self.root_datum, tuple(self.wt[b] for b in old), f, keys), old

    def with_keys(self, keys: Sequence[Hashable] | None) -> "Crystal":
        return Crystal(self.root_datum, self.wt, self.f_edges, None if keys is None else tuple(keys))

    def edge_count(self) -> int:
        return sum(len(m) for m in self.f_edges)

    # -- exports --------------------------------------------------------------

    def to_json(self, annotations: Mapping[str, Sequence] | None = None) -> dict:
        out = {
            "root_datum": self.root_datum.to_json(),
            "elements": list(self.elements),
            "wt": [list(w) for w in self.wt],
            "f_edges": {self.root_datum.labels[i]: [[a, b] for a, b in m.items()] for i, m in enumerate(self.f_edges)},
        }
        for name, values in (annotations or {}).items():
            out[name] = list(values)
        return out

    @staticmethod
    def from_json(obj: Mapping) -> "Crystal":
        rj = obj["root_datum"]
        rd = RootDatum(rj["rank"], tuple(map(tuple, rj["simple_coroots"])),
                       tuple(tuple(Fraction(v) for v in a) for a in rj["simple_roots"]), tuple(rj["labels"]))
        f = tuple({int(a): int(b) for a, b in obj["f_edges"][lab]} for lab in rd.labels)
        return Crystal(rd, tuple(tuple(w) for w in obj["wt"]), f)

    def to_dot(self, name: str = "crystal", labels: Sequence[str] | None = None) -> str:
        lines = [f'digraph "{name}" {{']
        for b in self.elements:
            text = ",".join(map(str, self.wt[b]))
            if labels is not None:
                text += f"\\n{labels[b]}"
            lines.append(f'  {b} [label="{text}"];')
        for i, m in enumerate(self.f_edges):
            for a, b in m.items():
                lines.append(f'  {a} -> {b} [label="{self.root_datum.labels[i]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def check_axioms(c: Crystal) -> list[str]:
    """Seminormal crystal axioms; returns a list of human-readable failures."""
    rd = c.root_datum
    out = []
    for i in c.indices:
        m = c.f_edges[i]
        if len(set(m.values())) != len(m):
            out.append(f"f_{rd.labels[i]} is not injective")
        for a, b in m.items():
            if not (0 <= a < len(c) and 0 <= b < len(c)):
                out.append(f"f_{rd.labels[i]} edge {a}->{b} leaves the crystal")
                continue
            if c.wt[b] != sub(c.wt[a], rd.simple_coroots[i]):
                out.append(f"wt(f_{rd.labels[i]} {a}) != wt({a}) - alpha_{rd.labels[i]}^vee")
        for b in c.elements:
            if c.epsilon(i, b) < 0:
                out.append(f"element {b} lies on an f_{rd.labels[i]} cycle")
                continue
            if c.phi(i, b) != c.epsilon(i, b) + rd.pair(i, c.wt[b]):
                out.append(f"phi_{rd.labels[i]}({b}) != eps_{rd.labels[i]}({b}) + <alpha, wt>")
    return out


# -- constructions --------------------------------------------------------------

def trivial_crystal(rd: RootDatum, weight: Sequence[int] | None = None) -> Crystal:
    w = tuple(weight) if weight is not None else (0,) * rd.rank
    return Crystal(rd, (w,), tuple({} for _ in range(rd.semisimple_rank)))


def disjoint_union(*crystals: Crystal) -> Crystal:
    if not crystals:
        raise CrystalError("empty union")
    rd = crystals[0].root_datum
    wt, f, keys, off = [], [dict() for _ in range(rd.semisimple_rank)], [], 0
    with_keys = all(c.keys is not None for c in crystals)
    for c in crystals:
        if c.root_datum != rd:
            raise CrystalError("root datum mismatch")
        wt += list(c.wt)
        for i, m in enumerate(c.f_edges):
            f[i].update({a + off: b + off for a, b in m.items()})
        if with_keys:
            keys += list(c.keys)
        off += len(c)
    return Crystal(rd, tuple(wt), tuple(f), tuple(keys) if with_keys else None)


def tensor(a: Crystal, b: Crystal) -> Crystal:
    """Tensor product by the signature rule: f_i acts on the left factor iff phi_i(x) > eps_i(y)."""
    if a.root_datum != b.root_datum:
        raise CrystalError("root datum mismatch")
    nb = len(b)
    wt = tuple(add(a.wt[x], b.wt[y]) for x in a.elements for y in b.elements)
    f = []
    for i in a.indices:
        m = {}
        for x in a.elements:
            for y in b.elements:
                if a.phi(i, x) > b.epsilon(i, y):
                    fx = a.f(i, x)
                    if fx is not None:
                        m[x * nb + y] = fx * nb + y
                else:
                    fy = b.f(i, y)
                    if fy is not None:
                        m[x * nb + y] = x * nb + fy
        f.append(m)
    return Crystal(a.root_datum, wt, tuple(f))


def dual_crystal(c: Crystal) -> Crystal:
    """Weights negated and the roles of e_i and f_i exchanged."""
    return Crystal(c.root_datum, tuple(neg(w) for w in c.wt), c.e_edges, c.keys)


def restrict_to_levi(c: Crystal, J: Iterable[int]) -> Crystal:
    """The same elements regarded as a crystal over the Levi subdatum on J (operators re-indexed)."""
    J = sorted(set(J))
    return Crystal(c.root_datum.levi(J), c.wt, tuple(c.f_edges[j] for j in J), c.keys)


def weyl_reflection(c: Crystal, i: int, b: int) -> int:
    """Action of the generator s_i of the cactus-like group on an element."""
    n = c.root_datum.pair(i, c.wt[b])
    step = c.f if n >= 0 else c.e
    for _ in range(abs(int(n))):
        b = step(i, b)
        if b is None:
            raise CrystalError("string too short for the reflection: crystal is not seminormal")
    return b


# -- Littelmann paths -----------------------------------------------------------

Path = tuple[tuple[Fraction, ...], ...]


def _normalize(segs: Iterable[tuple[Fraction, ...]]) -> Path:
    out: list[tuple[Fraction, ...]] = []
    for v in segs:
        if not any(v):
            continue
        if out and _positively_parallel(out[-1], v):
            out[-1] = tuple(a + b for a, b in zip(out[-1], v))
        else:
            out.append(tuple(v))
    return tuple(out)


def _positively_parallel(u, v) -> bool:
    k = next(j for j in range(len(u)) if u[j] != 0)
    if v[k] == 0 or (v[k] > 0) != (u[k] > 0):
        return False
    r = v[k] / u[k]
    return all(v[j] == r * u[j] for j in range(len(u)))


def _heights(path: Path, alpha) -> list[Fraction]:
    h = [Fraction(0)]
    for v in path:
        h.append(h[-1] + pairing(alpha, v))
    return h


def _reflect(v, alpha, coroot):
    return tuple(a - pairing(alpha, v) * c for a, c in zip(v, coroot))


def _apply_root_operator(path: Path, alpha, coroot, lower: bool) -> Path | None:
    h = _heights(path, alpha)
    m = min(h)
    n = len(path)
    if lower:
        if h[-1] - m < 1:
            return None
        p0 = max(k for k in range(n + 1) if h[k] == m)
        # first point after p0 where the height reaches m + 1
        k = p0
        while h[k + 1] < m + 1:
            k += 1
        frac = (m + 1 - h[k]) / (h[k + 1] - h[k])
        head = list(path[:p0])
        mid = list(path[p0:k])
        cut = scale(frac, path[k])
        rest = [sub(path[k], cut)] + list(path[k + 1:])
        mid.append(cut)
    else:
        if m > -1:
            return None
        p1 = min(k for k in range(n + 1) if h[k] == m)
        # last point before p1 where the height is m + 1
        k = p1 - 1
        while h[k] < m + 1:
            k -= 1
        frac = (h[k] - (m + 1)) / (h[k] - h[k + 1])
        head = list(path[:k])
        cut = scale(frac, path[k])
        head.append(cut)
        mid = [sub(path[k], cut)] + list(path[k + 1:p1])
        rest = list(path[p1:])
    mid = [_reflect(v, alpha, coroot) for v in mid]
    return _normalize(head + mid + rest)


def ls_paths(lam: Sequence[int], rd: RootDatum) -> tuple[list[Path], list[dict[int, int]]]:
    """All LS paths of shape lam with their f-edges (indices into the returned list)."""
    lam = as_coweight(lam)
    if not rd.is_dominant(lam):
        raise CrystalError(f"{lam} is not dominant")
    start = _normalize([tuple(Fraction(x) for x in lam)])
    index = {start: 0}
    paths = [start]
    edges: list[dict[int, int]] = [dict() for _ in range(rd.semisimple_rank)]
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for i in range(rd.semisimple_rank):
            q = _apply_root_operator(p, rd.simple_roots[i], rd.simple_coroots[i], lower=True)
            if q is None:
                continue
            if q not in index:
                index[q] = len(paths)
                paths.append(q)
                queue.append(q)
            edges[i][index[p]] = index[q]
    return paths, edges


def _endpoint(p: Path, rank: int) -> Coweight:
    tot = [Fraction(0)] * rank
    for v in p:
        tot = [a + b for a, b in zip(tot, v)]
    return as_coweight(tot)


@lru_cache(maxsize=512)
def irreducible_crystal(lam: Sequence[int], rd: RootDatum) -> Crystal:
    """Crystal basis of the irreducible module of highest weight lam."""
    paths, edges = ls_paths(tuple(lam), rd)
    return Crystal(rd, tuple(_endpoint(p, rd.rank) for p in paths), tuple(edges))


def lowest_weight_crystal(theta: Sequence[int], rd: RootDatum) -> Crystal:
    """Crystal of the irreducible module with lowest weight theta (antidominant)."""
    theta = as_coweight(theta)
    if not rd.is_antidominant(theta):
        raise CrystalError(f"{theta} is not antidominant")
    return dual_crystal(irreducible_crystal(neg(theta), rd))


# -- isomorphism ----------------------------------------------------------------

def _signature(c: Crystal, b: int):
    return (c.wt[b], c.string_data(b), c.key(b))


def _match_component(a: Crystal, comp_a: list[int], b: Crystal, root_b: int) -> dict[int, int] | None:
    root_a = comp_a[0]
    if _signature(a, root_a) != _signature(b, root_b):
        return None
    iso = {root_a: root_b}
    used = {root_b}
    queue = deque([root_a])
    while queue:
        x = queue.popleft()
        y = iso[x]
        for i in a.indices:
            for op_a, op_b in ((a.f_edges[i], b.f_edges[i]), (a.e_edges[i], b.e_edges[i])):
                xa, yb = op_a.get(x), op_b.get(y)
                if (xa is None) != (yb is None):
                    return None
                if xa is None:
                    continue
                if xa in iso:
                    if iso[xa] != yb:
                        return None
                    continue
                if yb in used or _signature(a, xa) != _signature(b, yb):
                    return None
                iso[xa] = yb
                used.add(yb)
                queue.append(xa)
    return iso if len(iso) == len(comp_a) else None


def isomorphism(a: Crystal, b: Crystal) -> dict[int, int] | None:
    """A weight-, operator- and key-preserving bijection a -> b, or None."""
    if a.root_datum.simple_coroots != b.root_datum.simple_coroots or len(a) != len(b):
        return None
    if Counter(a.wt) != Counter(b.wt):
        return None
    comps_b = b.components()
    free = {i: comp for i, comp in enumerate(comps_b)}
    result: dict[int, int] = {}
    for comp in a.components():
        found = None
        for j, cb in free.items():
            if len(cb) != len(comp):
                continue
            for root in cb:
                iso = _match_component(a, comp, b, root)
                if iso is not None and set(iso.values()) == set(cb):
                    found = (j, iso)
                    break
            if found:
                break
        if found is None:
            return None
        del free[found[0]]
        result.update(found[1])
    return result


def is_isomorphic(a: Crystal, b: Crystal) -> bool:
    return isomorphism(a, b) is not None


# -- normality ------------------------------------------------------------------

@dataclass
class NormalityReport:
    normal: bool
    seminormal: bool
    failures: list[str] = field(default_factory=list)

    def __str__(self):
        if self.normal:
            return "normal"
        head = "not seminormal" if not self.seminormal else "not normal"
        return head + ("" if not self.failures else ": " + self.failures[0])


def check_normality(c: Crystal) -> NormalityReport:
    """Seminormality, then every rank <= 2 Levi component against an irreducible crystal."""
    problems = check_axioms(c)
    if problems:
        return NormalityReport(False, False, problems)
    n = c.root_datum.semisimple_rank
    subsets = list(combinations(range(n), 2)) if n >= 2 else [(i,) for i in range(n)]
    for J in subsets:
        r = restrict_to_levi(c.with_keys(None), J)
        for comp in r.components():
            sub_c, _ = r.subcrystal(comp)
            tops = [b for b in sub_c.elements if sub_c.is_highest_weight(b)]
            if len(tops) != 1:
                return NormalityReport(False, True, [f"component over {J} has {len(tops)} highest-weight elements"])
            lam = sub_c.wt[tops[0]]
            if not is_isomorphic(sub_c, irreducible_crystal(lam, r.root_datum)):
                return NormalityReport(False, True, [f"component over {J} with highest weight {lam} is not irreducible"])
    return NormalityReport(True, True)


# -- character oracle -----------------------------------------------------------

def _form(rd: RootDatum, x, y) -> Fraction:
    return sum((pairing(a, x) * pairing(a, y) for a in rd.positive_roots), Fraction(0))


@lru_cache(maxsize=512)
def _dominant_multiplicities(lam: Coweight, rd: RootDatum) -> dict[Coweight, int]:
    rho = tuple(Fraction(v, 2) for v in rd.rho_vee_doubled)
    # every weight is reached from lam by subtracting simple coroots inside the weight set
    weights = {lam}
    queue = deque([lam])
    while queue:
        mu = queue.popleft()
        for cr in rd.simple_coroots:
            nu = sub(mu, cr)
            if nu not in weights and rd.dominance_le(rd.dominant_translate(nu), lam):
                weights.add(nu)
                queue.append(nu)
    dominant = sorted((w for w in weights if rd.is_dominant(w)), key=lambda w: -pairing(rd.two_rho, w))
    top = _form(rd, add(lam, rho), add(lam, rho))
    mult: dict[Coweight, int] = {}
    for mu in dominant:
        if mu == lam:
            mult[mu] = 1
            continue
        total = Fraction(0)
        for beta in rd.positive_coroots:
            k = 1
            while True:
                nu = add(mu, scale(k, beta))
                d = rd.dominant_translate(nu)
                if d not in weights:
                    break
                total += mult[d] * _form(rd, nu, beta)
                k += 1
        val = 2 * total / (top - _form(rd, add(mu, rho), add(mu, rho)))
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {val} at {mu}")
        mult[mu] = int(val)
    return mult


def character(lam: Sequence[int], rd: RootDatum) -> dict[Coweight, int]:
    """Weight multiplicities of the irreducible module V^lam (Freudenthal recursion)."""
    lam = as_coweight(lam)
    if not rd.is_dominant(lam):
        raise CrystalError(f"{lam} is not dominant")
    out = {}
    for mu, m in _dominant_multiplicities(lam, rd).items():
        if m:
            for w in rd.orbit(mu):
                out[w] = m
    return out


def weight_multiplicity(lam: Sequence[int], mu: Sequence[int], rd: RootDatum) -> int:
    lam = as_coweight(lam)
    if not rd.is_dominant(lam):
        raise CrystalError(f"{lam} is not dominant")
    return _dominant_multiplicities(lam, rd).get(rd.dominant_translate(mu), 0)


def crystal_to_json_text(c: Crystal, annotations: Mapping[str, Sequence] | None = None) -> str:
    return json.dumps(c.to_json(annotations), indent=2, sort_keys=True) + "\n"
