"""Shared fixtures and hypothesis strategies."""

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mvspace_engine.config import reset_settings
from mvspace_engine.exact_linalg import (
    RATIONALS,
    LinearMap,
    ScalarField,
    Subspace,
    subspace_from_generators,
)
from mvspace_engine.mvspace import MVSpace, canonicalize, make_mvspace

settings.register_profile(
    "engine",
    max_examples=100,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("engine")

GF2 = ScalarField.prime(2)
GF3 = ScalarField.prime(3)
GF5 = ScalarField.prime(5)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in (
        "ORACLE_MAX_ELEMENTS",
        "ORACLE_MAX_CHECKS",
        "WITNESS_SEARCH_LIMIT",
        "DEBUG_CHECKS",
        "LOG_LEVEL",
    ):
        monkeypatch.delenv(f"MVSPACE_{name}", raising=False)
    reset_settings()
    yield
    reset_settings()


# --- worked examples ---

def deep_line_space(field: ScalarField = RATIONALS) -> MVSpace:
    """θ has count 4, the y-axis count 2, everything else count 1."""
    return make_mvspace(field, 2, 4, [(4, []), (2, [(0, 1)]), (1, [(1, 0), (0, 1)])])


def equal_counts_space() -> MVSpace:
    """θ has count 6, every other vector count 1."""
    return make_mvspace(RATIONALS, 2, 6, [(6, []), (1, [(1, 0), (0, 1)])])


def four_dim_space() -> MVSpace:
    """span{e3, e4} has count 5 and the rest of Q^4 count 2."""
    return make_mvspace(
        RATIONALS,
        4,
        5,
        [
            (5, [(0, 0, 1, 0), (0, 0, 0, 1)]),
            (2, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]),
        ],
    )


FOUR_DIM_BASIS = [(0, 0, 0, 1), (-1, 1, 1, 1), (1, -1, 1, 1), (1, 1, -1, 1)]


def pair_v() -> MVSpace:
    return make_mvspace(RATIONALS, 2, 6, [(5, []), (3, [(0, 1)]), (1, [(1, 0), (0, 1)])])


def pair_w() -> MVSpace:
    return make_mvspace(RATIONALS, 2, 6, [(6, []), (2, [(1, 1)]), (1, [(1, 0), (0, 1)])])


@pytest.fixture
def deep_line():
    return deep_line_space()


@pytest.fixture
def equal_counts():
    return equal_counts_space()


@pytest.fixture
def four_dim():
    return four_dim_space()


@pytest.fixture
def pair():
    return pair_v(), pair_w()


@pytest.fixture
def spacefile_text():
    return (
        "# two spaces over Q^2\n"
        "field Q\n"
        "ambient 2\n"
        "omega 6\n"
        "\n"
        "space V\n"
        "  level 5 span { }\n"
        "  level 3 span { (0,1) }\n"
        "  level 1 span { (1,0) (0,1) }\n"
        "end\n"
        "\n"
        "space W\n"
        "  level 6 span { }\n"
        "  level 2 span { (1,1) }\n"
        "  level 1 span { (1,0) (0,1) }\n"
        "end\n"
    )


# --- strategies ---

def scalars(field: ScalarField):
    if field.is_rational:
        return st.integers(-2, 2).map(field)
    return st.integers(0, field.p - 1)


def vectors(field: ScalarField, m: int):
    return st.tuples(*[scalars(field)] * m)


@st.composite
def mvspaces(draw, field: ScalarField, ambient: int, omega: int = 6, full_support=None):
    """Random canonical chains built from cumulative random generators."""
    n_levels = draw(st.integers(1, min(ambient + 1, omega)))
    counts = sorted(
        draw(st.sets(st.integers(1, omega), min_size=n_levels, max_size=n_levels)), reverse=True
    )
    gens = []
    pairs = []
    for n in counts:
        gens.extend(draw(st.lists(vectors(field, ambient), max_size=2)))
        pairs.append((n, subspace_from_generators(field, ambient, gens)))
    make_full = full_support if full_support is not None else draw(st.booleans())
    if make_full:
        pairs[-1] = (counts[-1], Subspace.full(field, ambient))
    return canonicalize(MVSpace(field, ambient, omega, tuple(pairs)))


@st.composite
def dominant_pairs(draw, field: ScalarField, ambient: int, omega: int = 6):
    """Two spaces whose θ counts are both omega, so theta dominance holds."""
    spaces = []
    for _ in range(2):
        v = draw(mvspaces(field, ambient, omega))
        head = [(n, u) for n, u in v.chain if not u.is_zero]
        chain = ((omega, Subspace.zero(field, ambient)),) + tuple(
            (n, u) for n, u in head if n < omega
        )
        spaces.append(canonicalize(MVSpace(field, ambient, omega, chain)))
    return tuple(spaces)


def linear_maps(field: ScalarField, domain: int, codomain: int):
    return st.lists(
        vectors(field, domain), min_size=codomain, max_size=codomain
    ).map(lambda rows: LinearMap.from_rows(field, rows, domain))
