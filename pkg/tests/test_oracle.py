"""Brute-force oracle tests and chain-versus-oracle equivalence."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvspace_engine.config import configure
from mvspace_engine.dimension_maps import map_image, mdim
from mvspace_engine.errors import BudgetExceeded, PreconditionError
from mvspace_engine.exact_linalg import (
    LinearMap,
    Subspace,
    coordinate_support,
    subspace_from_generators,
)
from mvspace_engine.independence_basis import is_multi_linearly_independent
from mvspace_engine.mset import FiniteMSet, UniverseSpec, const_mset
from mvspace_engine.mvspace import (
    MVSpace,
    count,
    equals,
    from_count_function,
    intersect,
    scalar,
    sum_spaces,
    to_count_function,
)
from mvspace_engine.oracle import (
    oracle_count,
    oracle_has_all_nonzero,
    oracle_image,
    oracle_intersection,
    oracle_is_mvspace,
    oracle_mdim,
    oracle_multi_indep,
    oracle_scalar,
    oracle_sum,
)
from tests.conftest import GF2, GF3, GF5, deep_line_space, linear_maps, mvspaces, vectors


def plane_spaces():
    """Every valid chain on GF(2)^2 with omega <= 3."""
    zero = Subspace.zero(GF2, 2)
    full = Subspace.full(GF2, 2)
    lines = [subspace_from_generators(GF2, 2, [g]) for g in [(1, 0), (0, 1), (1, 1)]]
    chains = [(), (zero,), (full,), (zero, full)]
    for line in lines:
        chains += [(line,), (zero, line), (line, full), (zero, line, full)]
    spaces = []
    for omega in (1, 2, 3):
        for chain in chains:
            for counts in itertools.combinations(range(omega, 0, -1), len(chain)):
                spaces.append(MVSpace(GF2, 2, omega, tuple(zip(counts, chain))))
    return spaces


PLANE_SPACES = plane_spaces()
PLANE_MAPS = [
    LinearMap.from_rows(GF2, [row[:2], row[2:]], 2)
    for row in itertools.product(range(2), repeat=4)
]


def assert_agrees(v: MVSpace) -> None:
    m = to_count_function(v)
    assert oracle_is_mvspace(m)
    assert equals(from_count_function(m), v)
    for x in m.universe.elements:
        assert oracle_count(m, x) == count(v, x)
    for lam in range(v.field.p):
        assert to_count_function(scalar(lam, v)) == oracle_scalar(lam, m)
    assert oracle_mdim(m) == mdim(v)


def assert_pair_agrees(v: MVSpace, w: MVSpace) -> None:
    mv, mw = to_count_function(v), to_count_function(w)
    assert to_count_function(sum_spaces(v, w)) == oracle_sum(mv, mw)
    assert to_count_function(intersect(v, w)) == oracle_intersection(mv, mw)


class TestExhaustivePlane:
    def test_enumeration_size(self):
        assert len(PLANE_SPACES) == 64

    @pytest.mark.parametrize("space", PLANE_SPACES)
    def test_single_space(self, space):
        assert_agrees(space)
        m = to_count_function(space)
        for f in PLANE_MAPS:
            assert to_count_function(map_image(f, space)) == oracle_image(f.matrix.rows, m)

    @pytest.mark.parametrize("omega", [1, 2, 3])
    def test_all_pairs(self, omega):
        spaces = [s for s in PLANE_SPACES if s.omega == omega]
        for v, w in itertools.product(spaces, repeat=2):
            assert_pair_agrees(v, w)


class TestRandomEquivalence:
    @settings(max_examples=250)
    @given(mvspaces(GF2, 3), mvspaces(GF2, 3), linear_maps(GF2, 3, 2))
    def test_gf2_cube(self, v, w, f):
        assert_agrees(v)
        assert_pair_agrees(v, w)
        assert to_count_function(map_image(f, v)) == oracle_image(
            f.matrix.rows, to_count_function(v)
        )

    @settings(max_examples=250)
    @given(mvspaces(GF3, 2), mvspaces(GF3, 2), linear_maps(GF3, 2, 2))
    def test_gf3_plane(self, v, w, f):
        assert_agrees(v)
        assert_pair_agrees(v, w)
        assert to_count_function(map_image(f, v)) == oracle_image(
            f.matrix.rows, to_count_function(v)
        )

    @given(mvspaces(GF5, 2), st.lists(vectors(GF5, 2), min_size=1, max_size=2))
    def test_independence_matches_enumeration(self, v, xs):
        symbolic = is_multi_linearly_independent(v, xs)
        enumerated = oracle_multi_indep(to_count_function(v), xs, all_terms=False)
        assert symbolic.independent == enumerated.ok

    @given(st.lists(vectors(GF5, 3), max_size=3))
    def test_all_nonzero_criterion_matches_enumeration(self, gens):
        w = subspace_from_generators(GF5, 3, gens)
        assert all(coordinate_support(w)) == (oracle_has_all_nonzero(w.rows, 5, 3) is not None)


class TestOracleIsMVSpace:
    def test_constant_on_subspace(self):
        u = UniverseSpec(3, 2)
        line = [(0, 0), (1, 1), (2, 2)]
        assert oracle_is_mvspace(const_mset(u, 2, line, 2))

    def test_deep_line_over_gf5(self):
        assert oracle_is_mvspace(to_count_function(deep_line_space(GF5)))

    def test_scaling_lowers_count(self):
        m = FiniteMSet(UniverseSpec(3, 1), 2, (2, 2, 1))
        verdict = oracle_is_mvspace(m)
        assert not verdict
        assert verdict.witness is not None

    def test_theta_below_other_count(self):
        m = FiniteMSet(UniverseSpec(2, 1), 2, (1, 2))
        verdict = oracle_is_mvspace(m)
        assert not verdict
        assert verdict.reason.startswith("C(x+y)")


class TestOracleIndependence:
    def test_sum_lands_deeper_over_gf5(self):
        m = to_count_function(deep_line_space(GF5))
        verdict = oracle_multi_indep(m, [(1, 0), (4, 1)])
        assert not verdict
        assert verdict.witness == (1, 1)

    def test_singleton(self):
        m = to_count_function(deep_line_space(GF5))
        assert oracle_multi_indep(m, [(2, 3)])

    def test_window(self):
        m = to_count_function(deep_line_space(GF2))
        with pytest.raises(PreconditionError):
            oracle_multi_indep(m, [(1, 0), (1, 1)])
        verdict = oracle_multi_indep(m, [(1, 0), (1, 1)], require_window=False)
        assert verdict.witness == (1, 1)

    def test_dependent(self):
        m = to_count_function(deep_line_space(GF5))
        verdict = oracle_multi_indep(m, [(1, 0), (2, 0)])
        assert verdict.reason == "linearly dependent"


class TestOracleMisc:
    def test_mdim_of_full_level(self):
        u = UniverseSpec(2, 3)
        m = const_mset(u, 4, u.elements, 4)
        assert oracle_mdim(m) == 12

    def test_mdim_of_deep_line(self):
        assert oracle_mdim(to_count_function(deep_line_space(GF2))) == 3

    def test_mdim_budget(self):
        configure(oracle_max_checks=10)
        with pytest.raises(BudgetExceeded):
            oracle_mdim(to_count_function(deep_line_space(GF2)))

    def test_image_identity_and_zero(self):
        m = to_count_function(deep_line_space(GF3))
        assert oracle_image([(1, 0), (0, 1)], m) == m
        zero = oracle_image([(0, 0), (0, 0)], m)
        assert zero.counts[0] == 4
        assert sum(zero.counts) == 4

    def test_all_nonzero_depends_on_field_size(self):
        rows = [(1, 0, 1), (0, 1, 1)]
        assert oracle_has_all_nonzero(rows, 2, 3) is None
        witness = oracle_has_all_nonzero(rows, 5, 3)
        assert witness is not None and all(witness)

    def test_all_nonzero_hyperplane(self):
        assert oracle_has_all_nonzero([(1, 0, 0)], 5, 3) is None
