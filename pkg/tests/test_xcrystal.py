from collections import Counter
from fractions import Fraction

import pytest

from spherical_ic.catalog import hecke_gl2, hecke_pgl2, load_datum
from spherical_ic.crystal import character, weight_multiplicity
from spherical_ic.lattice import cartan_type, gl, pairing, sub
from spherical_ic.spherical import in_monoid
from spherical_ic.xcrystal import (
    XCrystalError,
    build_xcrystal,
    critical_dimension,
    frobenius_orbits,
    frobenius_permutation,
    lowering_chain,
    mv_cycle_count,
    normality,
    verify_properties,
)

from conftest import MINUSCULE_DATA


def test_hecke_gl2_shape(xcrystals):
    x = xcrystals("hecke-gl2")
    assert len(x.crystal) == 4
    assert Counter(x.plus_weights()) == Counter({(1, 0): 1, (0, -1): 1})
    assert x.plus_twists() == [Fraction(1, 2)] * 2


def test_hecke_pgl2_doubled(xcrystals):
    x = xcrystals("hecke-pgl2")
    assert x.plus_weights() == [(1,), (1,)]


def test_nfold2_plus_part(xcrystals):
    x = xcrystals("nfold(2)")
    assert len(x.plus) == 4
    d = x.datum
    assert set(d.color_valuations) <= set(x.plus_weights())


def test_boundary_summands(xcrystals):
    x = xcrystals("hecke-gl2-det")
    kinds = Counter(s.kind for s in x.summands)
    assert kinds == {"open": 2, "boundary": 2}
    theta = (-1, -1)
    b = next(b for b in x.plus if x.crystal.wt[b] == theta)
    assert x.provenance(b) == ("boundary", theta) and x.twist[b] == 0


@pytest.mark.parametrize("name", MINUSCULE_DATA + ["a1xa1-product", "hecke-pgl2-nonsplit"])
def test_verify_properties_pass(name, xcrystals):
    rep = verify_properties(xcrystals(name))
    assert rep.passed, rep.lines()
    assert any(n.startswith("conjecture-level") for n in rep.notes)


def test_mutilated_crystal_fails_weyl_invariance(xcrystals):
    x = xcrystals("hecke-gl2")
    rep = verify_properties(x.without([x.plus[0]]))
    assert not rep["weyl-invariance"].passed
    assert not rep.passed


@pytest.mark.parametrize("name", MINUSCULE_DATA)
def test_normality(name, xcrystals):
    assert normality(xcrystals(name)).normal


@pytest.mark.parametrize("name", MINUSCULE_DATA)
def test_plus_weights_in_monoid_and_minus_are_negatives(name, xcrystals):
    x = xcrystals(name)
    c = x.crystal
    for b in x.plus:
        assert any(c.wt[b]) and in_monoid(c.wt[b], x.datum)
    assert Counter(c.wt[b] for b in x.minus) == Counter(tuple(-v for v in c.wt[b]) for b in x.plus)


@pytest.mark.parametrize("name", MINUSCULE_DATA)
def test_crystal_counts_match_characters(name, xcrystals):
    x = xcrystals(name)
    rd = x.root_datum
    want = Counter()
    for s in x.summands:
        lam = rd.dominant_translate(s.weight)
        for mu, m in character(lam, rd).items():
            want[mu] += m
    assert Counter(x.crystal.wt) == want


@pytest.mark.parametrize("name", MINUSCULE_DATA)
def test_weyl_action_on_plus_part(name, xcrystals):
    # s_i moves the plus weight spaces away from the colour pair of alpha_i
    x = xcrystals(name)
    c, rd, d = x.crystal, x.root_datum, x.datum
    counts = Counter(c.wt[b] for b in x.plus)
    for i in range(rd.semisimple_rank):
        pair = {d.valuation[n] for n in d.color_pairs[i]}
        for lam in counts:
            if lam in pair:
                continue
            assert counts[rd.reflect(i, lam)] == counts[lam]


@pytest.mark.parametrize("name", MINUSCULE_DATA)
def test_lowering_chain_lengths(name, xcrystals):
    x = xcrystals(name)
    rd = x.root_datum
    for b in x.plus:
        if not x.is_open(b):
            continue
        chain = lowering_chain(x, b)
        assert chain is not None
        end = x.crystal.wt[chain[-1][1]] if chain else x.crystal.wt[b]
        assert end in x.datum.color_valuations
        if rd.dominance_le(end, x.crystal.wt[b]):
            assert len(chain) == pairing(rd.two_rho, sub(x.crystal.wt[b], end)) / 2


def test_duality_preserves_provenance(xcrystals):
    x = xcrystals("hecke-gl2-det")
    for b, y in x.dual_map.items():
        kb, ky = x.provenance(b), x.provenance(y)
        assert kb[0] == ky[0]
        if kb[0] == "boundary":
            assert ky[1] == tuple(-v for v in kb[1])


def test_critical_dimension_examples():
    d = hecke_gl2()
    assert critical_dimension((1, 0), "open", d) == 0
    assert critical_dimension((0, -1), "open", d) == 0
    assert critical_dimension((3, -2), "open", d) == 2
    dd = load_datum("hecke-gl2-det")
    assert critical_dimension((-1, -1), (-1, -1), dd) == 0
    with pytest.raises(XCrystalError):
        critical_dimension((-1, 0), "open", d)
    with pytest.raises(XCrystalError):
        critical_dimension((0, 0), (-1, -1), dd)


def test_mv_cycle_counts():
    a2 = cartan_type("A2", "coweight")
    assert mv_cycle_count((0, 0), (-1, -1), a2) == 2
    assert mv_cycle_count((-1, -1), (-1, -1), a2) == 1
    assert mv_cycle_count((0, 0), (-1, -1), gl(2)) == 0
    assert mv_cycle_count((0, 0), (-1, -1), a2) == weight_multiplicity((1, 1), (0, 0), a2)


def test_frobenius_swaps_copies(xcrystals):
    x = xcrystals("hecke-pgl2-nonsplit")
    perm = frobenius_permutation(x)
    assert perm[x.plus[0]] == x.plus[1] and perm[x.plus[1]] == x.plus[0]
    assert frobenius_orbits(x) == [list(x.plus)]


def test_frobenius_requires_datum(xcrystals):
    with pytest.raises(XCrystalError):
        frobenius_permutation(xcrystals("hecke-gl2"))


def test_exports(xcrystals):
    x = xcrystals("nfold(2)")
    dot = x.crystal.to_dot("nfold")
    assert dot.count("->") == x.crystal.edge_count()
    ann = x.annotations()
    assert len(ann["provenance"]) == len(x.crystal) and ann["part"].count("plus") == 4
