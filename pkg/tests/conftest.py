import pytest
from hypothesis import HealthCheck, settings

from spherical_ic.catalog import CATALOG, load_datum
from spherical_ic.xcrystal import build_xcrystal

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

MINUSCULE_DATA = ["hecke-gl2", "hecke-pgl2", "hecke-gl2-det", "nfold(1)", "nfold(2)", "nfold(3)"]


@pytest.fixture(scope="session")
def xcrystals():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_xcrystal(load_datum(name))
        return cache[name]

    return get


@pytest.fixture(params=sorted(CATALOG))
def catalog_name(request):
    return request.param
