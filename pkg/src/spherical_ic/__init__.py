"""Crystals, IC functions and Plancherel densities for affine spherical varieties of type T."""

from .catalog import CATALOG, DatumLoadError, catalog_names, datum_from_json, datum_to_json, load_datum, nfold
from .crystal import (
    Crystal,
    character,
    check_axioms,
    check_normality,
    dual_crystal,
    irreducible_crystal,
    is_isomorphic,
    isomorphism,
    lowest_weight_crystal,
    restrict_to_levi,
    tensor,
    weight_multiplicity,
)
from .harmonic import (
    PoleError,
    SatakePoint,
    evaluate_series,
    lfactor,
    plancherel_integrand,
    quadrature_norm,
    random_points,
)
from .lattice import RootDatum, cartan_type, dominance_le, gl, pairing, pgl2, two_rho, weyl_group
from .series import (
    GradedSeries,
    QLaurent,
    asymptotics_series,
    basic_function,
    frobenius_trace,
    partitions,
    pushforward_series,
    refines,
    sym_series,
)
from .spherical import (
    FrobeniusDatum,
    SphericalDatum,
    antidominant_elements,
    length,
    monoid_elements,
    preceq,
    saturated_set,
    validate,
)
from .xcrystal import XCrystal, build_xcrystal, critical_dimension, mv_cycle_count, verify_properties
