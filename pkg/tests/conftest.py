import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LAM = Fraction(3, 28)
ENERGY = Fraction(9, 7)


@pytest.fixture(scope="session")
def ref_suite():
    from bianchi_galois.model import ModelParams, build_ve_suite

    return build_ve_suite(ModelParams(LAM, ENERGY))


@pytest.fixture(scope="session")
def ref_path(ref_suite):
    from bianchi_galois.evidence import reference_path
    from bianchi_galois.model import VEPath

    return VEPath(ref_suite, reference_path())


@pytest.fixture(scope="session")
def ref_resolution(ref_suite, ref_path):
    from bianchi_galois.evidence import resolve_constants

    return resolve_constants(ref_suite, ref_path)


@pytest.fixture(scope="session")
def ref_report():
    from bianchi_galois.kovacic import run
    from bianchi_galois.model import ModelParams, build_ve_suite

    return run(build_ve_suite(ModelParams(LAM, ENERGY)).g, exhaustive=True)
