"""
Multi linear independence, M-bases and their indices.

A family is multi linearly independent in V when every nonzero linear
combination has exactly the count of its weakest participating vector.
An M-basis is a basis of F^m with that property; equivalently, a basis
meeting every level U_i of the chain in a basis of U_i. The multi index
records how many M-basis vectors sit at each count.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from mvspace_engine import oracle
from mvspace_engine.config import get_settings
from mvspace_engine.errors import (
    DimensionMismatch,
    InvariantViolation,
    PreconditionError,
)
from mvspace_engine.exact_linalg import (
    LinearMap,
    Matrix,
    Subspace,
    Vector,
    coefficient_space,
    contains,
    has_all_nonzero_vector,
    is_basis,
    kernel,
    linearly_independent,
    subspace_from_generators,
    subspace_intersection,
    subspace_sum,
)
from mvspace_engine.mvspace import (
    MVSpace,
    count,
    equals,
    nonzero_count_range,
    restrict,
    support,
    to_count_function,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndependenceResult:
    """
    Verdict of the independence decision.

    On a negative verdict `witness` holds coefficients a with
    count(V, sum a_i x_i) = `witness_count` exceeding the minimum count of
    the x_i with a_i != 0. For a linearly dependent family the witness is
    a dependency and its combination is θ.
    """
    independent: bool
    witness: Optional[Vector] = None
    witness_count: Optional[int] = None

    def __bool__(self) -> bool:
        return self.independent


@dataclass(frozen=True)
class MultiIndex:
    """(count, multiplicity) pairs, counts strictly decreasing."""
    entries: Tuple[Tuple[int, int], ...]

    @property
    def total(self) -> int:
        return sum(r for _, r in self.entries)

    def format(self) -> str:
        return " ".join(f"{n}^{r}" for n, r in self.entries)


@dataclass(frozen=True)
class MBasis:
    """A certified M-basis of `space`, ordered by non-increasing count."""
    space: MVSpace
    vectors: Tuple[Vector, ...]
    counts: Tuple[int, ...]

    @classmethod
    def certify(cls, space: MVSpace, vectors: Sequence[Sequence]) -> "MBasis":
        """
        Check `vectors` with is_mbasis and wrap them.

        Raises:
            PreconditionError: If the vectors are not an M-basis of space.
        """
        coerced = _coerce_all(space, vectors)
        if not is_mbasis(space, coerced):
            raise PreconditionError("vectors are not an M-basis of the space")
        return cls(space, coerced, tuple(count(space, v) for v in coerced))

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class MultiBasis:
    """
    The multiset β of M-basis vectors weighted by their counts.

    β_n (level(n)) is a basis of the n-level subspace of the space for
    every n >= 1.
    """
    space: MVSpace
    entries: Tuple[Tuple[Vector, int], ...]

    def count(self, x: Sequence) -> int:
        target = tuple(x)
        return max((n for v, n in self.entries if v == target), default=0)

    def level(self, n: int) -> Tuple[Vector, ...]:
        if n < 1:
            raise ValueError("level sets are defined for n >= 1")
        return tuple(v for v, c in self.entries if c >= n)


def _coerce_all(space: MVSpace, vectors: Sequence[Sequence]) -> Tuple[Vector, ...]:
    for x in vectors:
        if len(x) != space.ambient:
            raise DimensionMismatch(f"vector of length {len(x)} in F^{space.ambient}")
    return tuple(space.field.vector(x) for x in vectors)


def _dependency(space: MVSpace, xs: Tuple[Vector, ...]) -> Vector:
    k = len(xs)
    columns_as_rows = tuple(tuple(x[i] for x in xs) for i in range(space.ambient))
    f = LinearMap(space.field, k, space.ambient, Matrix(space.field, columns_as_rows, k))
    return kernel(f).rows[0]


def is_multi_linearly_independent(
    space: MVSpace, xs: Sequence[Sequence], all_terms: bool = False
) -> IndependenceResult:
    """
    Decide whether xs is multi linearly independent in space.

    The default reading checks every nonzero coefficient vector a against
    the minimum count over the x_i with a_i != 0. For each level U_j with
    count n_j, the combinations landing in U_j form W = coefficient_space;
    a violation at U_j exists exactly when some RREF row of W is nonzero
    on a coordinate i with count(x_i) < n_j. This is exact over any field.

    Args:
        space: The multi vector space.
        xs: Candidate vectors.
        all_terms: Only consider coefficient vectors with every a_i != 0,
            compared against min count(x_i). Exact over Q through the
            coordinate hyperplane criterion; over GF(p) the coefficient
            tuples are enumerated.

    Returns:
        IndependenceResult with a witness on a negative verdict.

    Raises:
        DimensionMismatch: If a vector has the wrong length.
    """
    vectors = _coerce_all(space, xs)
    if not vectors:
        return IndependenceResult(True)
    field = space.field
    if not linearly_independent(field, space.ambient, vectors):
        return IndependenceResult(False, _dependency(space, vectors), space.top_count)

    counts = [count(space, x) for x in vectors]
    if all_terms:
        return _all_terms_decision(space, vectors, counts)

    for n, u in space.chain:
        weak = [i for i, c in enumerate(counts) if c < n]
        if not weak:
            continue
        w = coefficient_space(vectors, u)
        for row in w.rows:
            if any(row[i] != 0 for i in weak):
                combined = field.combine(row, vectors, space.ambient)
                log.debug("independence fails at level %d with %s", n, field.format_vector(row))
                return IndependenceResult(False, row, count(space, combined))
    return IndependenceResult(True)


def _all_terms_decision(
    space: MVSpace, vectors: Tuple[Vector, ...], counts: List[int]
) -> IndependenceResult:
    field = space.field
    if not field.is_rational:
        verdict = oracle.oracle_multi_indep(
            to_count_function(space), vectors, all_terms=True, require_window=False
        )
        if verdict.ok:
            return IndependenceResult(True)
        witness = field.vector(verdict.witness)
        combined = field.combine(witness, vectors, space.ambient)
        return IndependenceResult(False, witness, count(space, combined))

    floor = min(counts)
    for n, u in space.chain:
        if n <= floor:
            break
        witness = has_all_nonzero_vector(coefficient_space(vectors, u))
        if witness is not None:
            combined = field.combine(witness, vectors, space.ambient)
            return IndependenceResult(False, witness, count(space, combined))
    return IndependenceResult(True)


def _random_member(space: MVSpace, u: Subspace, rng: random.Random) -> Vector:
    field = space.field
    if field.is_rational:
        coeffs = [field(rng.randint(-3, 3)) for _ in u.rows]
    else:
        coeffs = [rng.randrange(field.p) for _ in u.rows]
    return field.combine(coeffs, u.rows, space.ambient)


def mbasis_within(
    space: MVSpace, carrier: Subspace, rng: Optional[random.Random] = None
) -> List[Tuple[Vector, int]]:
    """
    Build an M-basis of C_V restricted to `carrier`, level by level.

    The levels of `space` must lie inside the carrier. Vectors come out
    with non-increasing counts; carrier directions outside the support
    close the list with count 0.
    """
    field = space.field
    picked: List[Tuple[Vector, int]] = []
    current = Subspace.zero(field, space.ambient)
    for n, u in space.chain:
        if rng is None:
            for row in u.rows:
                if not contains(current, row):
                    picked.append((row, n))
                    current = subspace_sum(current, subspace_from_generators(field, space.ambient, [row]))
        else:
            while current.rank < u.rank:
                candidate = _random_member(space, u, rng)
                if not contains(current, candidate):
                    picked.append((candidate, n))
                    current = subspace_sum(
                        current, subspace_from_generators(field, space.ambient, [candidate])
                    )
    for row in carrier.rows:
        if not contains(current, row):
            picked.append((row, 0))
            current = subspace_sum(current, subspace_from_generators(field, space.ambient, [row]))
    return picked


def find_mbasis(space: MVSpace, rng: Optional[random.Random] = None) -> MBasis:
    """
    Construct an M-basis by extending a basis of U_0 to U_1, ..., U_k.

    When the support is a proper subspace the basis is completed with
    standard basis vectors of count 0.

    Args:
        space: A valid multi vector space.
        rng: Pick random members of each level instead of RREF rows.
    """
    picked = mbasis_within(space, Subspace.full(space.field, space.ambient), rng)
    vectors = tuple(v for v, _ in picked)
    counts = tuple(n for _, n in picked)
    if get_settings().debug_checks and not is_mbasis(space, vectors):
        raise InvariantViolation("level-by-level construction is not an M-basis")
    log.debug("M-basis with counts %s", counts)
    return MBasis(space, vectors, counts)


def extend_step(
    space: MVSpace, carrier: Subspace, within: Optional[Subspace] = None
) -> Vector:
    """
    A vector t outside `carrier` of maximal count among such vectors.

    Scans the chain from the deepest level; the first level not inside the
    carrier contributes its first RREF row outside it.

    Args:
        space: The multi vector space.
        carrier: Proper subspace Y to step out of.
        within: Ambient subspace for the search, F^m by default; Y must be
            a proper subspace of it.

    Raises:
        PreconditionError: If Y already fills the search space.
    """
    field = space.field
    bound = within if within is not None else Subspace.full(field, space.ambient)
    if carrier.rank >= bound.rank:
        raise PreconditionError("carrier is not a proper subspace")
    for n, u in space.chain:
        inside = u if within is None else subspace_intersection(u, within)
        for row in inside.rows:
            if not contains(carrier, row):
                log.debug("extension vector from level %d", n)
                return row
    return next(row for row in bound.rows if not contains(carrier, row))


def is_mbasis(
    space: MVSpace, vectors: Sequence[Sequence], carrier: Optional[Subspace] = None
) -> bool:
    """
    True iff `vectors` is a basis of the carrier (F^m by default) meeting
    every level U_i ∩ carrier in exactly dim(U_i ∩ carrier) vectors.
    """
    coerced = _coerce_all(space, vectors)
    field = space.field
    if carrier is None:
        if not is_basis(field, space.ambient, coerced):
            return False
    else:
        if len(coerced) != carrier.rank or not all(contains(carrier, v) for v in coerced):
            return False
        if not linearly_independent(field, space.ambient, coerced):
            return False
    for _, u in space.chain:
        target = u if carrier is None else subspace_intersection(u, carrier)
        if sum(1 for v in coerced if contains(target, v)) != target.rank:
            return False
    return True


def extend_mbasis(space: MVSpace, partial: Sequence[Sequence]) -> MBasis:
    """
    Extend an M-basis of C_V restricted to Y = span(partial) to one of V.

    Raises:
        PreconditionError: If partial is not an M-basis of the restriction.
    """
    vectors = list(_coerce_all(space, partial))
    field = space.field
    carrier = subspace_from_generators(field, space.ambient, vectors)
    if not is_mbasis(restrict(space, carrier), vectors, carrier):
        raise PreconditionError("partial family is not an M-basis of its span")
    while not carrier.is_full:
        t = extend_step(space, carrier)
        vectors.append(t)
        carrier = subspace_sum(carrier, subspace_from_generators(field, space.ambient, [t]))
    return MBasis(space, tuple(vectors), tuple(count(space, v) for v in vectors))


def multi_index(space: MVSpace) -> MultiIndex:
    """(n_i, dim U_i - dim U_{i-1}) over the chain, plus (0, r) off the support."""
    entries = []
    previous = 0
    for n, u in space.chain:
        if u.rank > previous:
            entries.append((n, u.rank - previous))
        previous = u.rank
    if support(space).rank < space.ambient:
        entries.append((0, space.ambient - support(space).rank))
    return MultiIndex(tuple(entries))


def basis_index(space: MVSpace, vectors: Sequence[Sequence]) -> MultiIndex:
    """
    Histogram of counts over a basis.

    Raises:
        PreconditionError: If vectors are not a basis.
    """
    coerced = _coerce_all(space, vectors)
    if not is_basis(space.field, space.ambient, coerced):
        raise PreconditionError("vectors are not a basis")
    histogram = Counter(count(space, v) for v in coerced)
    return MultiIndex(tuple(sorted(histogram.items(), reverse=True)))


def mbasis_by_index_test(space: MVSpace, vectors: Sequence[Sequence]) -> bool:
    """
    Recognize an M-basis by comparing its index with the multi index.

    Raises:
        PreconditionError: If vectors are not a basis or their counts do
            not cover exactly the nonzero-vector count range.
        InvariantViolation: If the index test accepts a non-M-basis.
    """
    index = basis_index(space, vectors)
    if {n for n, _ in index.entries} != set(nonzero_count_range(space)):
        raise PreconditionError("basis counts differ from the nonzero count range")
    accepted = index == multi_index(space)
    if accepted and not is_mbasis(space, vectors):
        raise InvariantViolation("index test accepted a basis that is not an M-basis")
    return accepted


def to_multi_basis(space: MVSpace, basis: MBasis) -> MultiBasis:
    if not equals(space, basis.space):
        raise PreconditionError("M-basis was certified against a different space")
    return MultiBasis(space, tuple(zip(basis.vectors, basis.counts)))


def from_multi_basis(beta: MultiBasis) -> MBasis:
    """
    Recover the M-basis underlying β.

    Raises:
        PreconditionError: If β's vectors are not an M-basis or its counts
            disagree with the space.
    """
    space = beta.space
    vectors = tuple(v for v, _ in beta.entries)
    basis = MBasis.certify(space, vectors)
    if basis.counts != tuple(n for _, n in beta.entries):
        raise PreconditionError("multi basis counts disagree with the space")
    return basis
