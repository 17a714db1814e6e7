"""Based root data on an explicit coweight lattice.

Coweights are plain tuples of ints (coordinates in a fixed basis of the
lattice); weight functionals are tuples of ``Fraction`` so that characters
such as rho, or the half-integral functionals of non-simply-connected
duals, can be stored exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Coweight = tuple[int, ...]
Functional = tuple[Fraction, ...]

WEYL_ORDER_LIMIT = 200_000


class RootDatumError(ValueError):
    pass


def as_coweight(x: Iterable) -> Coweight:
    out = []
    for c in x:
        f = Fraction(c)
        if f.denominator != 1:
            raise RootDatumError(f"coweight coordinate {c!r} is not integral")
        out.append(int(f))
    return tuple(out)


def as_functional(x: Iterable) -> Functional:
    return tuple(Fraction(c) for c in x)


def pairing(f: Sequence, c: Sequence) -> Fraction:
    """Exact pairing of a weight functional with a coweight (or any rational vector)."""
    if len(f) != len(c):
        raise RootDatumError(f"rank mismatch: {len(f)} vs {len(c)}")
    return sum((Fraction(a) * b for a, b in zip(f, c)), Fraction(0))


def add(x: Sequence, y: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def neg(x: Sequence) -> tuple:
    return tuple(-a for a in x)


def scale(k, x: Sequence) -> tuple:
    return tuple(k * a for a in x)


def solve_rational(columns: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Solve ``sum_j c_j * columns[j] == target`` exactly.

    Columns must be linearly independent; returns ``None`` if the target is
    not in their rational span.
    """
    n = len(columns)
    r = len(target)
    # augmented matrix with rows = coordinates
    rows = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(r)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((k for k in range(row, r) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        p = rows[row][col]
        rows[row] = [v / p for v in rows[row]]
        for k in range(r):
            if k != row and rows[k][col] != 0:
                fac = rows[k][col]
                rows[k] = [a - fac * b for a, b in zip(rows[k], rows[row])]
        pivots.append(col)
        row += 1
    for k in range(row, r):
        if rows[k][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for k, col in enumerate(pivots):
        sol[col] = rows[k][n]
    return sol


@dataclass(frozen=True)
class RootDatum:
    """Based root datum of a reductive group on an explicit coweight lattice.

    ``simple_coroots[i]`` is the coweight alpha_i^vee and ``simple_roots[i]``
    the functional alpha_i, so that ``<alpha_j, alpha_i^vee>`` is the Cartan
    matrix entry ``A[j][i]``.
    """

    rank: int
    simple_coroots: tuple[Coweight, ...]
    simple_roots: tuple[Functional, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "simple_coroots", tuple(as_coweight(c) for c in self.simple_coroots))
        object.__setattr__(self, "simple_roots", tuple(as_functional(a) for a in self.simple_roots))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"a{i + 1}" for i in range(len(self.simple_roots))))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        self._validate()

    def _validate(self):
        if len(self.simple_coroots) != len(self.simple_roots):
            raise RootDatumError("number of simple roots and coroots differ")
        if len(self.labels) != len(self.simple_roots):
            raise RootDatumError("one label per simple root required")
        for v in self.simple_coroots + self.simple_roots:
            if len(v) != self.rank:
                raise RootDatumError(f"vector {v} does not have rank {self.rank}")
        A = self.cartan_matrix
        n = self.semisimple_rank
        for i in range(n):
            for j in range(n):
                if i == j and A[i][j] != 2:
                    raise RootDatumError(f"<alpha_{i}, alpha_{i}^vee> = {A[i][j]}, expected 2")
                if i != j:
                    if A[i][j] > 0:
                        raise RootDatumError(f"positive off-diagonal Cartan entry at ({i},{j})")
                    if (A[i][j] == 0) != (A[j][i] == 0):
                        raise RootDatumError(f"Cartan matrix not symmetric in its zero pattern at ({i},{j})")
        # simple roots must be integral on the whole lattice
        for a in self.simple_roots:
            for c in a:
                if c.denominator != 1:
                    raise RootDatumError(f"simple root {a} is not integral on the lattice")
        if n and solve_rank(self.simple_coroots) < n:
            raise RootDatumError("simple coroots are linearly dependent")
        if n and not _is_finite_type(A):
            raise RootDatumError("Cartan matrix is not of finite type")

    # -- basic data -------------------------------------------------------

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """``A[i][j] = <alpha_i, alpha_j^vee>``."""
        return tuple(
            tuple(int(pairing(a, c)) for c in self.simple_coroots) for a in self.simple_roots
        )

    def pair(self, i: int, x: Sequence) -> Fraction:
        return pairing(self.simple_roots[i], x)

    def reflect(self, i: int, x: Sequence) -> tuple:
        """Simple reflection s_i on a (possibly rational) coweight."""
        k = pairing(self.simple_roots[i], x)
        out = tuple(a - k * b for a, b in zip(x, self.simple_coroots[i]))
        if all(isinstance(a, int) or getattr(a, "denominator", 1) == 1 for a in out):
            return tuple(int(a) for a in out)
        return out

    def reflection_matrix(self, i: int) -> np.ndarray:
        r = self.rank
        m = np.eye(r, dtype=np.int64)
        av = np.array(self.simple_coroots[i], dtype=np.int64).reshape(r, 1)
        a = np.array([int(c) for c in self.simple_roots[i]], dtype=np.int64).reshape(1, r)
        return m - av @ a

    # -- Weyl group -------------------------------------------------------

    @cached_property
    def weyl_group(self) -> tuple[np.ndarray, ...]:
        """All elements of W as integer matrices acting on coweight coordinates.

        Identity first, then breadth-first in word length.
        """
        return weyl_group(self)

    @cached_property
    def longest_element(self) -> np.ndarray:
        # w0 sends the dominant chamber to the antidominant one
        if not self.semisimple_rank:
            return np.eye(self.rank, dtype=np.int64)
        probe = self.rho_vee_doubled
        for w in self.weyl_group:
            img = w @ np.array(probe, dtype=np.int64)
            if all(self.pair(i, tuple(int(v) for v in img)) < 0 for i in range(self.semisimple_rank)):
                return w
        raise RuntimeError("no longest element found")

    def act(self, w: np.ndarray, x: Sequence[int]) -> Coweight:
        return tuple(int(v) for v in w @ np.array(x, dtype=np.int64))

    def orbit(self, x: Sequence[int]) -> set[Coweight]:
        return {self.act(w, x) for w in self.weyl_group}

    # -- roots ------------------------------------------------------------

    @cached_property
    def _root_system(self):
        """Positive roots and coroots, paired, with coroot coefficient vectors."""
        n = self.semisimple_rank
        A = self.cartan_matrix
        seen: dict[tuple[int, ...], tuple[Functional, Coweight]] = {}
        frontier = []
        for i in range(n):
            coeff = tuple(1 if k == i else 0 for k in range(n))
            seen[coeff] = (self.simple_roots[i], self.simple_coroots[i])
            frontier.append(coeff)
        while frontier:
            nxt = []
            for coeff in frontier:
                root, coroot = seen[coeff]
                for i in range(n):
                    # s_i on coroot coefficients: c_i -= <alpha_i, coroot>
                    k = sum(A[i][j] * coeff[j] for j in range(n))
                    if k == 0:
                        continue
                    new = tuple(c - k if j == i else c for j, c in enumerate(coeff))
                    if any(c < 0 for c in new) or new in seen:
                        continue
                    kr = int(pairing(root, self.simple_coroots[i]))
                    new_root = tuple(a - kr * b for a, b in zip(root, self.simple_roots[i]))
                    new_coroot = tuple(a - k * b for a, b in zip(coroot, self.simple_coroots[i]))
                    seen[new] = (new_root, new_coroot)
                    nxt.append(new)
            frontier = nxt
        keys = sorted(seen, key=lambda c: (sum(c), tuple(-v for v in c)))
        return [(c, seen[c][0], seen[c][1]) for c in keys]

    @property
    def positive_roots(self) -> list[Functional]:
        return [r for _, r, _ in self._root_system]

    @property
    def positive_coroots(self) -> list[Coweight]:
        return [cr for _, _, cr in self._root_system]

    @cached_property
    def coroots(self) -> frozenset[Coweight]:
        pos = self.positive_coroots
        return frozenset(pos) | frozenset(neg(c) for c in pos)

    @cached_property
    def two_rho(self) -> Functional:
        """Sum of the positive roots."""
        return two_rho(self)

    @cached_property
    def rho_vee_doubled(self) -> Coweight:
        """Sum of the positive coroots (twice the dual Weyl vector)."""
        tot = (0,) * self.rank
        for c in self.positive_coroots:
            tot = add(tot, c)
        return tot

    # -- chambers and orders ---------------------------------------------

    def is_dominant(self, x: Sequence, indices: Iterable[int] | None = None) -> bool:
        idx = range(self.semisimple_rank) if indices is None else indices
        return all(self.pair(i, x) >= 0 for i in idx)

    def is_antidominant(self, x: Sequence) -> bool:
        return all(self.pair(i, x) <= 0 for i in range(self.semisimple_rank))

    def dominant_translate(self, x: Sequence[int]) -> Coweight:
        x = tuple(x)
        while True:
            for i in range(self.semisimple_rank):
                if self.pair(i, x) < 0:
                    x = self.reflect(i, x)
                    break
            else:
                return tuple(int(a) for a in x)

    def coroot_coefficients(self, x: Sequence) -> list[Fraction] | None:
        """Coefficients of x in the simple coroots, or None if x is outside their span."""
        return solve_rational(self.simple_coroots, x)

    def dominance_le(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return dominance_le(x, y, self)

    def levi(self, indices: Iterable[int]) -> "RootDatum":
        """Root datum of the standard Levi with the given simple roots, same lattice."""
        idx = sorted(set(indices))
        return RootDatum(
            self.rank,
            tuple(self.simple_coroots[i] for i in idx),
            tuple(self.simple_roots[i] for i in idx),
            tuple(self.labels[i] for i in idx),
        )

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "simple_coroots": [list(c) for c in self.simple_coroots],
            "simple_roots": [[_num_json(v) for v in a] for a in self.simple_roots],
            "labels": list(self.labels),
        }


def _num_json(v: Fraction):
    return int(v) if v.denominator == 1 else str(v)


def solve_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))


def _is_finite_type(A) -> bool:
    n = len(A)
    S = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                S[i, j] = 2.0
            else:
                S[i, j] = -np.sqrt(A[i][j] * A[j][i])
    return bool(np.all(np.linalg.eigvalsh(S) > 1e-9))


def weyl_group(rd: RootDatum) -> tuple[np.ndarray, ...]:
    """Enumerate W by closure of the simple reflections."""
    gens = [rd.reflection_matrix(i) for i in range(rd.semisimple_rank)]
    ident = np.eye(rd.rank, dtype=np.int64)
    elements = [ident]
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                m = s @ w
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    elements.append(m)
                    nxt.append(m)
                    if len(elements) > WEYL_ORDER_LIMIT:
                        raise RootDatumError("Weyl group too large or infinite")
        frontier = nxt
    for m in elements:
        m.setflags(write=False)
    return tuple(elements)


def two_rho(rd: RootDatum) -> Functional:
    tot = (Fraction(0),) * rd.rank
    for a in rd.positive_roots:
        tot = add(tot, a)
    return tot


def dominance_le(x: Sequence[int], y: Sequence[int], rd: RootDatum) -> bool:
    """``x <= y`` iff y - x is a non-negative integral combination of simple coroots."""
    if len(x) != len(y):
        raise RootDatumError("rank mismatch")
    d = sub(y, x)
    if not rd.semisimple_rank:
        return all(v == 0 for v in d)
    coeffs = rd.coroot_coefficients(d)
    if coeffs is None:
        return False
    return all(c.denominator == 1 and c >= 0 for c in coeffs)


# -- standard root data used in tests and examples ------------------------

def cartan_type(name: str, lattice: str = "coroot") -> RootDatum:
    """Root datum of a simple type given by name (A1..A3, B2, C2, G2).

    With ``lattice="coroot"`` the basis is the simple coroots, so simple roots
    are the rows of the Cartan matrix.  With ``lattice="coweight"`` the basis
    is the fundamental coweights: roots are unit vectors and coroots the
    columns of the Cartan matrix.
    """
    mats = {
        "A1": [[2]],
        "A2": [[2, -1], [-1, 2]],
        "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
        "B2": [[2, -2], [-1, 2]],
        "C2": [[2, -1], [-2, 2]],
        "G2": [[2, -1], [-3, 2]],
    }
    A = mats[name]
    n = len(A)
    unit = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    if lattice == "coroot":
        return RootDatum(n, tuple(unit), tuple(tuple(row) for row in A))
    if lattice == "coweight":
        return RootDatum(n, tuple(tuple(A[j][i] for j in range(n)) for i in range(n)), tuple(unit))
    raise ValueError(f"unknown lattice {lattice!r}")


def gl(n: int) -> RootDatum:
    """GL_n in the standard basis eps_1^vee..eps_n^vee."""
    coroots, roots = [], []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        coroots.append(tuple(v))
        roots.append(tuple(v))
    return RootDatum(n, tuple(coroots), tuple(roots))


def pgl2() -> RootDatum:
    """PGL_2 with lattice basis alpha^vee / 2, so the dual group is SL_2."""
    return RootDatum(1, ((2,),), ((1,),))


def torus(rank: int) -> RootDatum:
    return RootDatum(rank, (), ())


def product(*data: RootDatum) -> RootDatum:
    """Direct product of root data on the direct sum of lattices."""
    rank = sum(d.rank for d in data)
    coroots, roots, labels = [], [], []
    offset = 0
    for k, d in enumerate(data):
        for c, a, lab in zip(d.simple_coroots, d.simple_roots, d.labels):
            coroots.append((0,) * offset + c + (0,) * (rank - offset - d.rank))
            roots.append((Fraction(0),) * offset + a + (Fraction(0),) * (rank - offset - d.rank))
            labels.append(f"{lab}.{k + 1}" if len(data) > 1 else lab)
        offset += d.rank
    return RootDatum(rank, tuple(coroots), tuple(roots), tuple(labels))
