"""
Brute-force definitional semantics on GF(p)^n.

Every function here enumerates the raw definitions over the finite
universe: closure of a count function, sup-min sums, all coefficient
tuples for multi linear independence, all bases for the multi dimension,
all preimages for images under linear maps. Nothing here uses the level
chain, so agreement with the chain algorithms is an independent check.
Enumeration sizes are bounded by the configured budget and exceeding it
raises BudgetExceeded instead of truncating.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from mvspace_engine.config import get_settings
from mvspace_engine.errors import BudgetExceeded, DimensionMismatch, PreconditionError
from mvspace_engine.mset import (
    Element,
    FiniteMSet,
    UniverseSpec,
    count,
    mset_image,
    mset_intersection,
    mset_scalar,
    mset_sum,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleVerdict:
    """A yes/no answer with the offending witness on 'no'."""
    ok: bool
    witness: Optional[Tuple] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def _charge(checks: int, what: str) -> None:
    budget = get_settings().oracle_max_checks
    if checks > budget:
        raise BudgetExceeded(f"{what} needs {checks} checks, budget is {budget}")


def _as_ints(field_array) -> np.ndarray:
    return field_array.view(np.ndarray).astype(np.int64)


def oracle_is_mvspace(m: FiniteMSet) -> OracleVerdict:
    """
    Check V + V ⊆ V and λV ⊆ V by exhaustion.

    Returns:
        Verdict whose witness is (x, y) for a failed sum or (λ, x) for a
        failed scalar action.
    """
    universe = m.universe
    _charge(universe.size ** 2 + universe.p * universe.size, "closure check")
    c = m.array()
    elements = universe.elements

    at_sum = c[universe.add_table]
    floor = np.minimum(c[:, None], c[None, :])
    bad = np.argwhere(at_sum < floor)
    if bad.size:
        i, j = (int(k) for k in bad[0])
        return OracleVerdict(False, (elements[i], elements[j]), "C(x+y) < min(C(x), C(y))")

    for lam in range(universe.p):
        at_scaled = c[universe.scale_table(lam)]
        bad_x = np.flatnonzero(at_scaled < c)
        if bad_x.size:
            return OracleVerdict(False, (lam, elements[int(bad_x[0])]), "C(λx) < C(x)")
    return OracleVerdict(True)


def oracle_count(m: FiniteMSet, x: Sequence[int]) -> int:
    return count(m, x)


def oracle_sum(a: FiniteMSet, b: FiniteMSet) -> FiniteMSet:
    """Sup-min sum over all p^n decompositions of every element."""
    _charge(a.universe.size ** 2, "sum")
    return mset_sum(a, b)


def oracle_intersection(a: FiniteMSet, b: FiniteMSet) -> FiniteMSet:
    return mset_intersection(a, b)


def oracle_scalar(scalar: int, b: FiniteMSet) -> FiniteMSet:
    return mset_scalar(scalar, b)


def oracle_multi_indep(
    m: FiniteMSet,
    xs: Sequence[Sequence[int]],
    all_terms: bool = True,
    require_window: bool = True,
) -> OracleVerdict:
    """
    Decide multi linear independence by enumerating coefficient tuples.

    Args:
        m: Count function of a multi vector space.
        xs: Candidate vectors.
        all_terms: If True only tuples with every coefficient nonzero are
            checked against min C(x_i); otherwise every nonzero tuple is
            checked against the minimum over its support.
        require_window: With all_terms, insist on |xs| < p, the range in
            which GF(p) and infinite-field answers coincide.

    Returns:
        Verdict; on failure the witness is the coefficient tuple.
    """
    universe = m.universe
    p, k = universe.p, len(xs)
    if all_terms and require_window and k >= p:
        raise PreconditionError(f"{k} vectors need p > {k}, got p = {p}")
    for x in xs:
        if len(x) != universe.n:
            raise DimensionMismatch(f"vector of length {len(x)} in GF({p})^{universe.n}")
    if k == 0:
        return OracleVerdict(True)
    _charge(p ** k, "coefficient enumeration")

    gf = universe.gf
    grid = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    vectors = gf(np.array(xs, dtype=np.int64).reshape(k, universe.n) % p)
    combos = _as_ints(gf(grid) @ vectors)
    at_combo = m.array()[universe.locate(combos)]

    nonzero_tuple = grid.any(axis=1)
    dependent = np.flatnonzero(nonzero_tuple & ~combos.any(axis=1))
    if dependent.size:
        return OracleVerdict(False, tuple(int(a) for a in grid[dependent[0]]), "linearly dependent")

    term_counts = np.array([count(m, tuple(int(a) % p for a in x)) for x in xs], dtype=np.int64)
    support = grid != 0
    expected = np.where(support, term_counts[None, :], np.iinfo(np.int64).max).min(axis=1)
    if all_terms:
        considered = support.all(axis=1)
    else:
        considered = nonzero_tuple
    bad = np.flatnonzero(considered & (at_combo != expected))
    if bad.size:
        witness = tuple(int(a) for a in grid[bad[0]])
        log.debug("oracle independence witness %s", witness)
        return OracleVerdict(False, witness, "count of combination differs from minimum")
    return OracleVerdict(True)


def oracle_mdim(m: FiniteMSet) -> int:
    """
    max over bases B of the summed counts, by enumerating every basis.

    A family of n elements is a basis when its GF(p)-span has p^n
    elements.
    """
    universe = m.universe
    n, size = universe.n, universe.size
    if n == 0:
        return 0
    families = list(itertools.combinations(range(1, size), n))
    _charge(len(families) * size, "basis enumeration")
    gf = universe.gf
    coeff_grid = gf(universe.codes)
    codes = universe.codes
    c = m.array()
    best = 0
    for family in families:
        basis = gf(codes[list(family)])
        spanned = universe.locate(_as_ints(coeff_grid @ basis))
        if len(np.unique(spanned)) != size:
            continue
        best = max(best, int(c[list(family)].sum()))
    return best


def oracle_image(
    matrix: Sequence[Sequence[int]], m: FiniteMSet, codomain: Optional[int] = None
) -> FiniteMSet:
    """
    Image of a count function under x -> A x over GF(p).

    Args:
        matrix: Rows of A (codomain x domain).
        m: Count function on GF(p)^domain.
        codomain: Row count of A; needed only when A has no rows.
    """
    universe = m.universe
    rows = len(matrix) if codomain is None else codomain
    a = np.array(matrix, dtype=np.int64).reshape(rows, universe.n) % universe.p
    target = UniverseSpec(universe.p, rows)
    images = _as_ints(universe.gf(universe.codes) @ universe.gf(a).T)
    table = {x: tuple(int(v) for v in row) for x, row in zip(universe.elements, images)}
    return mset_image(table.__getitem__, m, target)


def oracle_has_all_nonzero(
    rows: Sequence[Sequence[int]], p: int, k: int
) -> Optional[Element]:
    """First element of span(rows) in GF(p)^k with no zero coordinate."""
    if k == 0:
        return ()
    if not rows:
        return None
    universe = UniverseSpec(p, len(rows))
    _charge(universe.size, "span enumeration")
    gf = universe.gf
    basis = gf(np.array(rows, dtype=np.int64).reshape(len(rows), k) % p)
    span = _as_ints(gf(universe.codes) @ basis)
    for vector in span:
        if np.all(vector != 0):
            return tuple(int(a) for a in vector)
    return None
