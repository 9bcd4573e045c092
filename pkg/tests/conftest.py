"""Shared fixtures: small decompositions and extension fields reused across
the suite.  Session scope keeps the expensive builds to one per run."""

from fractions import Fraction

import pytest

from whitneyext import SpaceParams, build, jets_from_function, ExtensionField
from whitneyext.functions import gaussian_bump


@pytest.fixture(scope="session")
def params1():
    return SpaceParams(n=1, s=1.5, p=4.0)


@pytest.fixture(scope="session")
def params2():
    return SpaceParams(n=2, s=1.5, p=6.0)


@pytest.fixture(scope="session")
def W1(params1):
    """Canonical 1-D single-site decomposition on [-32, 32]."""
    return build(params1, [(Fraction(0),)], 5, 8)


@pytest.fixture(scope="session")
def W1_pair(params1):
    """Two sites, for anchor tie-break and path variety."""
    return build(params1, [(Fraction(-1),), (Fraction(1),)], 5, 8)


@pytest.fixture(scope="session")
def W2(params2):
    """Small 2-D decomposition with three sites."""
    sites = [(Fraction(1, 4), Fraction(-3, 8)),
             (Fraction(-1, 2), Fraction(1, 2)),
             (Fraction(5, 8), Fraction(5, 8))]
    return build(params2, sites, 1, 6)


@pytest.fixture(scope="session")
def gauss1():
    return gaussian_bump(1, width=4.0)


@pytest.fixture(scope="session")
def Tf1(W1, params1, gauss1):
    jets = jets_from_function(gauss1, W1.sites, params1)
    return ExtensionField(W1, jets)


@pytest.fixture(scope="session")
def gauss2():
    return gaussian_bump(2, width=1.0)


@pytest.fixture(scope="session")
def Tf2(W2, params2, gauss2):
    jets = jets_from_function(gauss2, W2.sites, params2)
    return ExtensionField(W2, jets)
