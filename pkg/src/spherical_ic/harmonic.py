"""Numeric layer: Satake points, L-factors, Plancherel densities and torus quadrature."""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .lattice import Coweight
from .series import GradedSeries, QLaurent, asymptotics_series, sym_series
from .xcrystal import XCrystal

POLE_TOL = 1e-12


class PoleError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SatakePoint:
    """Unitary point chi of the dual torus with e^{b_k}(chi) = exp(2 pi i angles_k)."""

    angles: tuple[float, ...]
    q: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) % 1.0 for a in self.angles))
        if self.q <= 1:
            raise ValueError("q must exceed 1")

    def character(self, lam: Sequence[int]) -> complex:
        if len(lam) != len(self.angles):
            raise ValueError(f"rank mismatch: {len(lam)} vs {len(self.angles)}")
        return cmath.exp(2j * math.pi * math.fsum(l * a for l, a in zip(lam, self.angles)))

    def conjugate(self) -> "SatakePoint":
        return SatakePoint(tuple(-a for a in self.angles), self.q)


def random_points(rank: int, n: int, seed: int = 0, q: float = 4.0) -> list[SatakePoint]:
    rng = np.random.default_rng(seed)
    return [SatakePoint(tuple(rng.random(rank)), q) for _ in range(n)]


def _csum(values: Iterable[complex]) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def evaluate_series(s: GradedSeries, chi: SatakePoint) -> complex:
    return _csum(v(chi.q) * chi.character(k) for k, v in s.items())


def _factor(z: complex) -> complex:
    f = 1 - z
    if abs(f) <= POLE_TOL * max(1.0, abs(z)):
        raise PoleError(f"factor 1 - {z} vanishes")
    return f


def lfactor(chi: SatakePoint, weights: Iterable[Sequence[int]], s: float) -> complex:
    """Product over weights of (1 - q^-s e^lam(chi))^-1; raises PoleError at a pole."""
    out = complex(1)
    for lam in weights:
        out /= _factor(chi.q ** (-s) * chi.character(lam))
    return out


def closed_form(x: XCrystal, chi: SatakePoint) -> complex:
    """F(chi) = prod over positive coroots (1 - e^a) / prod over plus elements (1 - q^-c e^wt)."""
    out = complex(1)
    for cr in x.root_datum.positive_coroots:
        out *= 1 - chi.character(cr)
    for b in x.plus:
        out /= _factor(chi.q ** (-float(x.twist[b])) * chi.character(x.crystal.wt[b]))
    return out


def plancherel_integrand(x: XCrystal, chi: SatakePoint, bound=None) -> float:
    """|F(chi)|^2 from the closed product (``bound`` is accepted for symmetry and unused)."""
    return abs(closed_form(x, chi)) ** 2


def truncated_integrand(x: XCrystal, chi: SatakePoint, bound) -> float:
    return abs(evaluate_series(asymptotics_series(x, bound), chi)) ** 2


@dataclass
class QuadratureResult:
    quadrature: float
    parseval: float
    difference: float
    grid: int
    bound: float
    q: float
    grid_ok: bool
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _grid_values(coeffs: dict[Coweight, float], rank: int, grid: int) -> np.ndarray:
    arr = np.zeros((grid,) * rank, dtype=complex)
    for k, c in coeffs.items():
        arr[tuple(v % grid for v in k)] += c
    # sum_k c_k exp(2 pi i k.j / grid) on the grid j
    return np.fft.ifftn(arr) * grid**rank


def quadrature_norm(x: XCrystal, bound, grid: int, q: float = 4.0) -> QuadratureResult:
    """(1/|W|) times the grid mean of |F_N|^2 and times the sum of |c|^2, F_N the truncated asymptotics."""
    s = asymptotics_series(x, bound)
    coeffs = {k: v(q) for k, v in s.items()}
    rank = x.datum.rank
    order = len(x.root_datum.weyl_group)
    parseval = math.fsum(c * c for c in coeffs.values()) / order
    warnings = []
    if rank == 0:
        quad = sum(coeffs.values()) ** 2 / order if coeffs else 0.0
        return QuadratureResult(quad, parseval, abs(quad - parseval), grid, float(bound), q, True)
    spread = [max(k[i] for k in coeffs) - min(k[i] for k in coeffs) for i in range(rank)] if coeffs else [0] * rank
    grid_ok = all(grid > sp for sp in spread)
    if not grid_ok:
        warnings.append(f"grid {grid} does not exceed the coefficient spread {max(spread)}; quadrature aliases")
    vals = _grid_values(coeffs, rank, grid)
    # numpy sums pairwise, which is deterministic for a fixed grid
    quad = float(np.sum(np.abs(vals) ** 2)) / vals.size / order
    return QuadratureResult(quad, parseval, abs(quad - parseval), grid, float(bound), q, grid_ok, warnings)


def pointwise_errors(x: XCrystal, bound, points: Sequence[SatakePoint]) -> list[float]:
    """|plancherel_integrand - |F_N|^2| at each point."""
    s = asymptotics_series(x, bound)
    return [abs(plancherel_integrand(x, chi) - abs(evaluate_series(s, chi)) ** 2) for chi in points]


def grid_csv(x: XCrystal, bound, grid: int, q: float = 4.0) -> str:
    """Rows (angles..., truncated |F_N|^2, closed-form integrand or empty at a pole)."""
    rank = x.datum.rank
    s = asymptotics_series(x, bound)
    vals = _grid_values({k: v(q) for k, v in s.items()}, rank, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"t{i}" for i in range(rank)] + ["truncated", "closed_form"])
    for idx in np.ndindex(*vals.shape):
        chi = SatakePoint(tuple(j / grid for j in idx), q)
        try:
            closed = f"{plancherel_integrand(x, chi):.12g}"
        except PoleError:
            closed = ""
        w.writerow([f"{j / grid:.6g}" for j in idx] + [f"{abs(vals[idx]) ** 2:.12g}", closed])
    return buf.getvalue()


def tail_bound(x: XCrystal, bound, q: float = 4.0) -> float:
    """Upper bound for sum of |c_lam| over coefficients beyond the truncation.

    Uses the majorant prod (1 + e^a) / prod (1 - q^-c e^wt) whose coefficients
    dominate those of F in absolute value; infinite when some twist is zero.
    """
    total = 2.0 ** len(x.root_datum.positive_coroots)
    for b in x.plus:
        r = q ** (-float(x.twist[b]))
        if r >= 1:
            return math.inf
        total /= 1 - r
    s = sym_series(x, bound)
    for cr in x.root_datum.positive_coroots:
        s = s.times_binomial(cr, QLaurent.one())
    kept = math.fsum(v(q) for v in s.coeffs.values())
    return max(total - kept, 0.0)
