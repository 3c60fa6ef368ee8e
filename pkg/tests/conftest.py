import pytest

from dynext import (CurveSelfMap, ExtensionConfig, Field, PolyRing,
                    ProjectiveVariety, RationalCurve, validate_system)

QQ = Field.rationals()


@pytest.fixture(scope="session")
def qq():
    return QQ


@pytest.fixture(scope="session")
def conic_ring():
    return PolyRing(("x0", "x1", "x2"), QQ)


@pytest.fixture(scope="session")
def conic_variety(conic_ring):
    return ProjectiveVariety(conic_ring, [conic_ring.parse("x1^2 - x0*x2")])


@pytest.fixture(scope="session")
def conic_system(conic_ring, conic_variety):
    forms = [conic_ring.parse(s) for s in ("x0^2", "x1^2", "x2^2")]
    report = validate_system(conic_variety, 2, forms)
    assert report.ok
    return report.system


@pytest.fixture(scope="session")
def param_ring():
    return PolyRing(("u", "v"), QQ)


@pytest.fixture(scope="session")
def conic_curve(param_ring):
    return RationalCurve(param_ring, [param_ring.parse(s)
                                      for s in ("u^2", "u*v", "v^2")])


@pytest.fixture(scope="session")
def conic_curve_selfmap(param_ring):
    return CurveSelfMap(param_ring, [param_ring.parse("u^2"), param_ring.parse("v^2")])


@pytest.fixture(scope="session")
def quintic_curve(param_ring):
    return RationalCurve(param_ring, [param_ring.parse(s)
                                      for s in ("u^5", "u^4*v", "u*v^4", "v^5")])


@pytest.fixture(scope="session")
def abc_selfmap(param_ring):
    return CurveSelfMap(param_ring, [param_ring.parse("u^2 + u*v + v^2"),
                                     param_ring.parse("u*v + v^2")])


@pytest.fixture(scope="session")
def monomial_selfmap(param_ring):
    return CurveSelfMap(param_ring, [param_ring.parse("u^2"), param_ring.parse("v^2")])


@pytest.fixture(scope="session")
def quintic_variety(quintic_curve):
    return quintic_curve.variety()


@pytest.fixture(scope="session")
def twisted_cubic(param_ring):
    return RationalCurve(param_ring, [param_ring.parse(s)
                                      for s in ("u^3", "u^2*v", "u*v^2", "v^3")])


@pytest.fixture
def fast_config():
    return ExtensionConfig(seed=1, max_r=3)
