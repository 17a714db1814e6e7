import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spherical_ic.catalog import (
    DatumLoadError,
    datum_from_json,
    datum_to_json,
    hecke_gl2,
    hecke_gl2_det,
    hecke_pgl2,
    hecke_pgl2_nonsplit,
    load_datum,
    nfold,
)
from spherical_ic.lattice import gl
from spherical_ic.spherical import (
    FrobeniusDatum,
    SphericalDatum,
    antidominant_elements,
    color_orbit,
    in_color_monoid,
    in_monoid,
    length,
    monoid_elements,
    orbit_sign_check,
    preceq,
    saturated_set,
    validate,
)


def brute_span(gens, grading_fn, bound):
    # all N-combinations with bounded coefficients, filtered by grading
    out = set()
    rank = len(gens[0]) if gens else 0
    for coeffs in itertools.product(range(int(bound) + 1), repeat=len(gens)):
        v = tuple(sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(rank))
        if grading_fn(v) <= bound:
            out.add(v)
    return out


def test_catalog_data_are_valid(catalog_name):
    assert validate(load_datum(catalog_name)) == []


def test_pairing_not_one():
    d = hecke_gl2()
    bad = SphericalDatum(d.root_datum, (("D+", (2, -1)), ("D-", (-1, 0))), d.color_pairs, (), (0, 0), (1, -1))
    codes = {v.code for v in validate(bad)}
    assert "pairing-not-one" in codes


def test_grading_not_positive_when_monoid_has_a_line():
    d = hecke_gl2_det()
    bad = SphericalDatum(d.root_datum, d.colors, d.color_pairs, ((-1, -1), (1, 1)), (0, 0), (1, -2))
    assert "grading-not-strictly-positive" in {v.code for v in validate(bad)}


def test_other_violations():
    d = hecke_gl2()
    bad = SphericalDatum(d.root_datum, (("D+", (1, 0)), ("D-", (0, -1)), ("E", (0, -1))), d.color_pairs,
                         ((1, 0),), (1, 0), (1, -1))
    codes = {v.code for v in validate(bad)}
    assert {"color-unattached", "extra-not-antidominant", "h-not-invariant", "pair-mismatch"} <= codes


def test_frobenius_validation():
    d = hecke_pgl2()
    good = d.with_frobenius(FrobeniusDatum(((1,),), {"D+": "D-", "D-": "D+"}, (0,)))
    assert validate(good) == []
    bad = d.with_frobenius(FrobeniusDatum(((-1,),), {"D+": "D-", "D-": "D+"}, (0,)))
    assert {"frobenius-coroots", "frobenius-colors"} <= {v.code for v in validate(bad)}


def test_preceq_examples():
    d = hecke_gl2()
    assert preceq((0, 0), (1, -1), d)
    assert preceq((0, 0), (0, 0), d)
    assert preceq((0, 0), (1, -2), d)
    assert not preceq((0, 0), (-1, 1), d)


def test_monoid_examples():
    assert set(monoid_elements(hecke_gl2(), 1)) == {(0, 0), (1, 0), (0, -1)}
    for name in ("hecke-gl2", "nfold(2)", "hecke-pgl2"):
        assert set(monoid_elements(load_datum(name), 0)) == {(0,) * load_datum(name).rank}
    assert set(monoid_elements(hecke_gl2_det(), 1)) == {(0, 0), (1, 0), (-1, -1)}


def test_monoid_witnesses():
    d = hecke_gl2_det()
    for v, w in monoid_elements(d, 5).items():
        total = tuple(sum(c * g[j] for c, g in zip(w, d.generators)) for j in range(d.rank))
        assert total == v


@pytest.mark.parametrize("name", ["hecke-gl2", "hecke-gl2-det", "nfold(2)", "hecke-pgl2"])
def test_monoid_matches_enumeration(name):
    d = load_datum(name)
    assert set(monoid_elements(d, 4)) == brute_span(d.generators, d.grade, 4)


def test_antidominant_examples():
    assert antidominant_elements(hecke_gl2(), 8) == [(0, 0)]
    assert antidominant_elements(hecke_gl2_det(), 3) == [(0, 0), (-1, -1), (-2, -2), (-3, -3)]
    assert antidominant_elements(hecke_pgl2(), 8) == [(0,)]


def test_saturated_examples():
    assert saturated_set(hecke_gl2()).elements == ()
    s = saturated_set(hecke_gl2_det(), 6)
    assert s.elements == ((-1, -1),) and not s.truncated
    assert saturated_set(nfold(1)).elements == ()


def test_saturated_truncation_flag():
    assert saturated_set(hecke_gl2_det(), 1).truncated is False
    d = hecke_gl2_det()
    tall = SphericalDatum(d.root_datum, d.colors, d.color_pairs, ((-1, -1),), d.h_char, (1, -4))
    assert saturated_set(tall, 1).truncated
    assert saturated_set(tall, 1).elements == ()
    assert saturated_set(tall).elements == ((-1, -1),)


def test_saturated_variants_agree(catalog_name):
    # primitivity already rules out theta' + lambda, so both forms give the same set
    d = load_datum(catalog_name)
    assert saturated_set(d, 6, "sum").elements == saturated_set(d, 6, "color").elements
    with pytest.raises(ValueError):
        saturated_set(d, 6, "other")


def test_saturated_properties(catalog_name):
    d = load_datum(catalog_name)
    sat = saturated_set(d).elements
    for t in sat:
        assert d.root_datum.is_antidominant(t)
    for a in sat:
        for b in sat:
            if a != b:
                assert not preceq(a, b, d)


def test_length_examples():
    assert length((1, 0), hecke_gl2()) == 1
    assert length((1, -1), hecke_gl2()) == 2
    assert length((-1, -1), hecke_gl2_det()) == 0


def test_colors_have_length_one(catalog_name):
    d = load_datum(catalog_name)
    for v in d.color_valuations:
        assert length(v, d) == 1


def test_orbit_sign_property(catalog_name):
    d = load_datum(catalog_name)
    assert all(orbit_sign_check(d).values())
    assert len(color_orbit(d)) >= len(set(d.color_valuations))


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_preceq_is_monotone_in_grading(x, y):
    d = hecke_gl2()
    if preceq(x, y, d):
        assert d.grade(x) <= d.grade(y)
        assert preceq(x, x, d)


def test_preceq_partial_order_on_monoid():
    d = load_datum("nfold(2)")
    elems = list(monoid_elements(d, 3))
    for a, b in itertools.product(elems, repeat=2):
        if preceq(a, b, d) and preceq(b, a, d):
            assert a == b
    for a, b, c in itertools.product(elems[:8], repeat=3):
        if preceq(a, b, d) and preceq(b, c, d):
            assert preceq(a, c, d)


def test_frobenius_commutes_with_weyl():
    d = hecke_pgl2_nonsplit()
    fr = d.frobenius
    for w in d.root_datum.weyl_group:
        for v in ((1,), (-2,), (3,)):
            assert fr.apply(d.root_datum.act(w, v)) == d.root_datum.act(w, fr.apply(v))


def test_membership_helpers():
    d = hecke_gl2_det()
    assert in_monoid((-1, -1), d)
    assert not in_color_monoid((-1, -1), d)


def test_json_round_trip(catalog_name):
    d = load_datum(catalog_name)
    text = json.dumps(datum_to_json(d))
    assert datum_from_json(json.loads(text)) == d


def test_schema_error_has_pointer():
    obj = datum_to_json(hecke_gl2())
    obj["colors"][1]["valuation"] = ["x", 1]
    with pytest.raises(DatumLoadError) as err:
        datum_from_json(obj)
    assert err.value.pointer == "/colors/1/valuation/0"
    obj = datum_to_json(hecke_gl2())
    obj["unexpected"] = 1
    with pytest.raises(DatumLoadError):
        datum_from_json(obj)


def test_load_errors(tmp_path):
    with pytest.raises(DatumLoadError, match="no such file"):
        load_datum(str(tmp_path / "missing.json"))
    with pytest.raises(DatumLoadError, match="unknown datum"):
        load_datum("nonsense")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DatumLoadError, match="malformed"):
        load_datum(str(bad))


def test_file_overrides_catalog(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    d = hecke_gl2()
    (tmp_path / "hecke-pgl2").write_text(json.dumps(datum_to_json(d)))
    with pytest.warns(UserWarning, match="overrides"):
        loaded = load_datum("hecke-pgl2")
    assert loaded == d


def test_nfold_any_n():
    d = load_datum("nfold(4)")
    assert validate(d) == [] and len(d.colors) == 5


def test_gl_root_datum_for_products():
    assert load_datum("a1xa1-product").root_datum.rank == 4
    assert gl(2).semisimple_rank == 1
