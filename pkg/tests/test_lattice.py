import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spherical_ic.lattice import (
    RootDatum,
    RootDatumError,
    cartan_type,
    dominance_le,
    gl,
    pairing,
    pgl2,
    product,
    solve_rational,
    two_rho,
    weyl_group,
)

TYPES = [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("C2", 8), ("G2", 12)]
DATA = [cartan_type(n) for n, _ in TYPES] + [cartan_type(n, "coweight") for n, _ in TYPES] + [gl(2), gl(3), pgl2()]


def brute_dominance(x, y, rd, depth=12):
    # enumerate N-combinations of simple coroots up to a fixed total size
    diff = tuple(b - a for a, b in zip(x, y))
    n = rd.semisimple_rank
    for coeffs in itertools.product(range(depth + 1), repeat=n):
        v = [0] * rd.rank
        for k, c in enumerate(coeffs):
            for j in range(rd.rank):
                v[j] += c * rd.simple_coroots[k][j]
        if tuple(v) == diff:
            return True
    return False


def test_pairing_examples():
    g = gl(2)
    assert pairing(g.simple_roots[0], (1, 0)) == 1
    assert pairing(g.simple_roots[0], (1, -1)) == 2
    assert pairing(pgl2().simple_roots[0], (1,)) == 1


def test_pairing_rank_mismatch():
    with pytest.raises(RootDatumError):
        pairing((1, 0), (1, 0, 0))


@pytest.mark.parametrize("name,order", TYPES)
def test_weyl_group_orders(name, order):
    assert len(weyl_group(cartan_type(name))) == order
    assert len(weyl_group(cartan_type(name, "coweight"))) == order


def test_weyl_group_small_cases():
    assert len(weyl_group(gl(2))) == 2
    assert len(weyl_group(product(gl(2), gl(2)))) == 4


def test_two_rho():
    assert two_rho(gl(2)) == (1, -1)
    a2 = cartan_type("A2")
    assert pairing(two_rho(a2), a2.simple_coroots[0]) == 2
    highest = max(a2.positive_coroots, key=lambda c: pairing(a2.two_rho, c))
    # rho = half the sum of positive roots, enumerated independently
    total = [Fraction(0)] * a2.rank
    for a in a2.positive_roots:
        total = [s + v for s, v in zip(total, a)]
    assert pairing(total, highest) / 2 == 2


@pytest.mark.parametrize("rd", DATA, ids=lambda r: str(r.cartan_matrix))
def test_two_rho_simple_coroots(rd):
    for c in rd.simple_coroots:
        assert pairing(rd.two_rho, c) == 2


def test_dominance_examples():
    g = gl(2)
    assert dominance_le((0, 1), (1, 0), g)
    assert not dominance_le((1, 0), (1, 1), g)
    assert dominance_le((3, -2), (3, -2), g)


@pytest.mark.parametrize("rd", DATA, ids=lambda r: str(r.cartan_matrix))
def test_weyl_group_axioms(rd):
    W = weyl_group(rd)
    ident = np.eye(rd.rank, dtype=np.int64)
    assert any(np.array_equal(w, ident) for w in W)
    keys = {w.tobytes() for w in W}
    for w in W[:20]:
        for v in W[:20]:
            assert (w @ v).tobytes() in keys
    for i in range(rd.semisimple_rank):
        s = rd.reflection_matrix(i)
        assert np.array_equal(s @ s, ident)


@pytest.mark.parametrize("rd", DATA, ids=lambda r: str(r.cartan_matrix))
def test_action_compatibility(rd):
    # <alpha_i o w, c> = <alpha_i, w(c)> for basis coweights c
    basis = [tuple(1 if k == j else 0 for k in range(rd.rank)) for j in range(rd.rank)]
    for w in weyl_group(rd):
        for a in rd.simple_roots:
            pulled = [sum(a[k] * int(w[k, j]) for k in range(rd.rank)) for j in range(rd.rank)]
            for c in basis:
                assert pairing(pulled, c) == pairing(a, rd.act(w, c))


def test_rejects_non_finite_type():
    with pytest.raises(RootDatumError):
        RootDatum(2, ((1, 0), (0, 1)), ((2, -2), (-2, 2)))


def test_rejects_dependent_coroots():
    with pytest.raises(RootDatumError):
        RootDatum(2, ((1, -1), (1, -1)), ((1, -1), (1, -1)))


def test_solve_rational():
    assert solve_rational([(1, 0), (1, 1)], (3, 2)) == [1, 2]
    assert solve_rational([(1, 1)], (1, 0)) is None


small = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@given(small, small)
def test_dominance_matches_enumeration_a2(x, y):
    rd = cartan_type("A2")
    assert dominance_le(x, y, rd) == brute_dominance(x, y, rd)


@given(small, small)
def test_dominance_matches_enumeration_gl2(x, y):
    rd = gl(2)
    assert dominance_le(x, y, rd) == brute_dominance(x, y, rd)


@given(small, small, small)
def test_dominance_partial_order(x, y, z):
    rd = cartan_type("B2")
    assert dominance_le(x, x, rd)
    if dominance_le(x, y, rd) and dominance_le(y, x, rd):
        assert x == y
    if dominance_le(x, y, rd) and dominance_le(y, z, rd):
        assert dominance_le(x, z, rd)


@given(small)
def test_unique_dominant_translate_for_regular(x):
    rd = cartan_type("G2")
    if any(pairing(a, x) == 0 for a in rd.positive_roots):
        return
    dominant = [v for v in rd.orbit(x) if rd.is_dominant(v)]
    assert len(dominant) == 1
    assert len(rd.orbit(x)) == 12
