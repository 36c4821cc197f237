"""
Multi vector spaces in canonical level-chain form.

A multi vector space over F^m is held as a chain of (count, subspace)
pairs with strictly decreasing counts and strictly nested subspaces. The
count of x is the count of the first (deepest) level containing x, and 0
outside the last level.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from mvspace_engine import oracle
from mvspace_engine.errors import (
    DimensionMismatch,
    FieldMismatch,
    NotAMultiVectorSpace,
    PreconditionError,
)
from mvspace_engine.exact_linalg import (
    ScalarField,
    Subspace,
    contains,
    is_subspace_of,
    subspace_from_generators,
    subspace_intersection,
    subspace_sum,
)
from mvspace_engine.mset import FiniteMSet, UniverseSpec, level_set, mset_from_function

log = logging.getLogger(__name__)

Level = Tuple[int, Subspace]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(); violation names the first failed clause."""
    ok: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class MVSpace:
    """
    A multi vector space as a level chain.

    Build values with make_mvspace() (validating) or through the space
    operations, which always return canonical chains.
    """
    field: ScalarField
    ambient: int
    omega: int
    chain: Tuple[Level, ...]

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(n for n, _ in self.chain)

    @property
    def levels(self) -> Tuple[Subspace, ...]:
        return tuple(u for _, u in self.chain)

    @property
    def top_count(self) -> int:
        """C_V(θ), the largest count."""
        return self.chain[0][0] if self.chain else 0

    def format_lines(self) -> List[str]:
        return [f"level {n} {u.format()}" for n, u in self.chain]


def validate(space: MVSpace) -> ValidationReport:
    """
    Check the chain invariants without raising.

    Returns:
        ValidationReport with ok=False and the first violated clause.
    """
    if space.ambient < 0:
        return ValidationReport(False, "ambient dimension is negative")
    if space.omega < 0:
        return ValidationReport(False, "omega is negative")
    previous: Optional[Level] = None
    for n, u in space.chain:
        if u.field != space.field:
            return ValidationReport(False, f"level {n} is over {u.field.tag}, space over {space.field.tag}")
        if u.ambient != space.ambient:
            return ValidationReport(False, f"level {n} lives in F^{u.ambient}, space in F^{space.ambient}")
        if n < 1:
            return ValidationReport(False, f"count {n} is not positive")
        if n > space.omega:
            return ValidationReport(False, f"count {n} exceeds omega {space.omega}")
        if previous is not None:
            prev_n, prev_u = previous
            if n >= prev_n:
                return ValidationReport(False, "counts not strictly decreasing")
            if prev_u == u or not is_subspace_of(prev_u, u):
                return ValidationReport(False, f"levels not strictly nested at count {n}")
        previous = (n, u)
    return ValidationReport(True)


def make_mvspace(
    field: ScalarField, ambient: int, omega: int, levels: Iterable[Tuple[int, object]]
) -> MVSpace:
    """
    Build and validate a space from (count, level) pairs given top-down.

    Args:
        field: Scalar field.
        ambient: Dimension m of F^m.
        omega: Multiplicity cap.
        levels: Pairs of count and either a Subspace or a generator list.
            A trailing level with count 0 carries no information and is
            dropped; a count-0 level followed by another level is rejected.

    Raises:
        NotAMultiVectorSpace: If the chain invariants fail.
    """
    chain = []
    zero_seen = False
    for n, gens in levels:
        u = gens if isinstance(gens, Subspace) else subspace_from_generators(field, ambient, gens)
        if zero_seen:
            raise NotAMultiVectorSpace("counts not strictly decreasing: a level follows count 0")
        if n == 0:
            zero_seen = True
            log.debug("dropping count-0 level of rank %d", u.rank)
            continue
        chain.append((int(n), u))
    space = MVSpace(field, ambient, omega, tuple(chain))
    report = validate(space)
    if not report:
        raise NotAMultiVectorSpace(report.violation)
    return space


def _canonical(field: ScalarField, ambient: int, omega: int, pairs: Iterable[Level]) -> MVSpace:
    """Sort by count, drop count-0 levels and repeated subspaces keeping the larger count."""
    chain: List[Level] = []
    for n, u in sorted(pairs, key=lambda pair: -pair[0]):
        if n <= 0:
            continue
        if chain and chain[-1][1] == u:
            continue
        chain.append((n, u))
    return MVSpace(field, ambient, omega, tuple(chain))


def canonicalize(space: MVSpace) -> MVSpace:
    return _canonical(space.field, space.ambient, space.omega, space.chain)


def _check_compatible(v: MVSpace, w: MVSpace) -> None:
    if v.field != w.field:
        raise FieldMismatch(f"{v.field.tag} vs {w.field.tag}")
    if v.ambient != w.ambient:
        raise DimensionMismatch(f"F^{v.ambient} vs F^{w.ambient}")
    if v.omega != w.omega:
        raise PreconditionError(f"omega mismatch: {v.omega} vs {w.omega}")


def count(space: MVSpace, x: Sequence) -> int:
    """C_V(x): the count of the deepest level containing x, else 0."""
    if len(x) != space.ambient:
        raise DimensionMismatch(f"vector of length {len(x)} in F^{space.ambient}")
    for n, u in space.chain:
        if contains(u, x):
            return n
    return 0


def level(space: MVSpace, n: int) -> Subspace:
    """
    The n-level subspace {x : C_V(x) >= n}.

    For n above C_V(θ) the level set is empty; the zero subspace is
    returned in that case.
    """
    if not 1 <= n <= space.omega:
        raise PreconditionError(f"level {n} outside [1, {space.omega}]")
    result = Subspace.zero(space.field, space.ambient)
    for count_i, u in space.chain:
        if count_i < n:
            break
        result = u
    return result


def support(space: MVSpace) -> Subspace:
    return space.chain[-1][1] if space.chain else Subspace.zero(space.field, space.ambient)


def top_nonzero_count(space: MVSpace) -> int:
    """sup C_V(X∖{θ}); 0 when every nonzero vector has count 0."""
    if space.ambient == 0:
        return 0
    for n, u in space.chain:
        if not u.is_zero:
            return n
    return 0


def nonzero_count_range(space: MVSpace) -> FrozenSet[int]:
    """C_V(X∖{θ}), including 0 when the support is a proper subspace."""
    counts = {n for n, u in space.chain if not u.is_zero}
    if support(space).rank < space.ambient:
        counts.add(0)
    return frozenset(counts)


def count_range(space: MVSpace) -> FrozenSet[int]:
    """C_V(X), at most m + 1 values."""
    return nonzero_count_range(space) | {space.top_count}


def scalar(value, space: MVSpace) -> MVSpace:
    """λV: unchanged for λ != 0, all mass on θ for λ = 0."""
    if space.field(value) != 0:
        return space
    if not space.chain:
        return space
    zero = Subspace.zero(space.field, space.ambient)
    return MVSpace(space.field, space.ambient, space.omega, ((space.top_count, zero),))


def _shared_counts(v: MVSpace, w: MVSpace) -> List[int]:
    # above min(C_V(θ), C_W(θ)) one of the level sets is empty
    ceiling = min(v.top_count, w.top_count)
    return sorted({n for n in v.counts + w.counts if n <= ceiling}, reverse=True)


def sum_spaces(v: MVSpace, w: MVSpace) -> MVSpace:
    """
    V + W, computed levelwise as (V+W)_n = V_n + W_n.

    Raises:
        FieldMismatch, DimensionMismatch, PreconditionError: On
            incompatible operands (omega must agree).
    """
    _check_compatible(v, w)
    pairs = [(n, subspace_sum(level(v, n), level(w, n))) for n in _shared_counts(v, w)]
    return _canonical(v.field, v.ambient, v.omega, pairs)


def sum_all(spaces: Sequence[MVSpace]) -> MVSpace:
    if not spaces:
        raise ValueError("sum of no spaces")
    return reduce(sum_spaces, spaces)


def intersect(v: MVSpace, w: MVSpace) -> MVSpace:
    """V ∩ W, the pointwise minimum, levelwise V_n ∩ W_n."""
    _check_compatible(v, w)
    pairs = [(n, subspace_intersection(level(v, n), level(w, n))) for n in _shared_counts(v, w)]
    return _canonical(v.field, v.ambient, v.omega, pairs)


def restrict(space: MVSpace, carrier: Subspace) -> MVSpace:
    """C_V restricted to a subspace Y: levels U_i ∩ Y."""
    if carrier.field != space.field:
        raise FieldMismatch(f"{carrier.field.tag} vs {space.field.tag}")
    if carrier.ambient != space.ambient:
        raise DimensionMismatch(f"carrier in F^{carrier.ambient}, space in F^{space.ambient}")
    pairs = [(n, subspace_intersection(u, carrier)) for n, u in space.chain]
    return _canonical(space.field, space.ambient, space.omega, pairs)


def equals(v: MVSpace, w: MVSpace) -> bool:
    if (v.field, v.ambient, v.omega) != (w.field, w.ambient, w.omega):
        return False
    return canonicalize(v).chain == canonicalize(w).chain


def from_count_function(m: FiniteMSet) -> MVSpace:
    """
    Recover the level chain of a count function on GF(p)^n.

    Closure under sum and scalar action is verified exhaustively first,
    then every level set is checked to be a subspace.

    Raises:
        NotAMultiVectorSpace: With a witness when closure fails, or when a
            level set is not a subspace.
    """
    verdict = oracle.oracle_is_mvspace(m)
    if not verdict.ok:
        raise NotAMultiVectorSpace(verdict.reason, verdict.witness)
    universe = m.universe
    field = universe.field
    pairs = []
    for n in sorted({c for c in m.counts if c > 0}, reverse=True):
        members = level_set(m, n)
        u = subspace_from_generators(field, universe.n, members)
        if universe.p ** u.rank != len(members):
            raise NotAMultiVectorSpace(f"level set {n} is not a subspace")
        pairs.append((n, u))
    log.debug("recovered chain with %d levels from GF(%d)^%d", len(pairs), universe.p, universe.n)
    return _canonical(field, universe.n, m.omega, pairs)


def to_count_function(space: MVSpace) -> FiniteMSet:
    """Tabulate C_V over GF(p)^m."""
    if space.field.is_rational:
        raise PreconditionError("rational spaces cannot be enumerated")
    universe = UniverseSpec(space.field.p, space.ambient)
    return mset_from_function(universe, space.omega, lambda x: count(space, x))
