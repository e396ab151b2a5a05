"""Shared fixtures: small graphs, matroid specs, and exact-law helpers."""

import pytest

from matroid_mcmc import Fields, matroid_from_dict
from matroid_mcmc.exact import BruteMatroid, independent_masks, is_matroid_family

TRIANGLE_EDGES = [(0, 1), (1, 2), (0, 2)]
PATH4_EDGES = [(0, 1), (1, 2), (2, 3)]
K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def spec_of(d):
    """Build a spec and sanity-check the matroid axioms before handing it out."""
    spec = matroid_from_dict(d)
    if spec.n <= 8:
        masks = independent_masks(spec)
        assert is_matroid_family(spec.n, masks), f"not a matroid: {d}"
    return spec


@pytest.fixture
def triangle_graphic():
    return spec_of({"variant": "graphic", "edges": [list(e) for e in TRIANGLE_EDGES]})


@pytest.fixture
def triangle_cographic():
    return spec_of({"variant": "cographic", "edges": [list(e) for e in TRIANGLE_EDGES]})


@pytest.fixture
def uniform42():
    return spec_of({"variant": "uniform", "n": 4, "k": 2})


@pytest.fixture
def k4_graphic():
    return spec_of({"variant": "graphic", "edges": [list(e) for e in K4_EDGES]})


def ones(n):
    return Fields.constant(n, 1.0)


def masks_of(samples):
    return [sum(1 << i for i in s) for s in samples]


def brute(spec) -> BruteMatroid:
    return BruteMatroid(spec)
