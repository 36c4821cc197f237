"""
Exact scalar arithmetic and the subspace lattice.

Scalars are `fractions.Fraction` over the rationals or plain residues in
[0, p) over GF(p). No floating point is used anywhere.
"""

import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import galois

from mvspace_engine.config import get_settings
from mvspace_engine.errors import (
    DimensionMismatch,
    FieldMismatch,
    InvariantViolation,
    PreconditionError,
)

log = logging.getLogger(__name__)

Scalar = Union[Fraction, int]
Vector = Tuple[Scalar, ...]


@dataclass(frozen=True)
class ScalarField:
    """
    An exact field: the rationals when `p == 0`, otherwise GF(p).

    Calling the field coerces a value (int, Fraction or "p/q" text) into
    its canonical scalar representation.
    """
    p: int = 0

    def __post_init__(self):
        if self.p != 0 and (self.p < 2 or not galois.is_prime(self.p)):
            raise ValueError(f"field characteristic must be a prime, got {self.p}")

    @classmethod
    def rational(cls) -> "ScalarField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "ScalarField":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def tag(self) -> str:
        return "Q" if self.is_rational else f"GF({self.p})"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.is_rational else 1

    def __call__(self, value: Union[int, Fraction, str]) -> Scalar:
        if isinstance(value, numbers.Integral):
            value = int(value)
            return Fraction(value) if self.is_rational else value % self.p
        if self.is_rational:
            return Fraction(value)
        fraction = Fraction(value)
        if fraction.denominator % self.p == 0:
            raise ValueError(f"{value} has no image in {self.tag}")
        return (fraction.numerator * pow(fraction.denominator, -1, self.p)) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.is_rational else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.is_rational else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.is_rational else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.is_rational else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / a if self.is_rational else pow(a, -1, self.p)

    def dot(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        total = self.zero
        for a, b in zip(x, y):
            total = self.add(total, self.mul(a, b))
        return total

    def vector(self, entries: Iterable) -> Vector:
        return tuple(self(e) for e in entries)

    def zero_vector(self, m: int) -> Vector:
        return (self.zero,) * m

    def add_vectors(self, x: Vector, y: Vector) -> Vector:
        return tuple(self.add(a, b) for a, b in zip(x, y))

    def scale_vector(self, c: Scalar, x: Vector) -> Vector:
        return tuple(self.mul(c, a) for a in x)

    def combine(self, coeffs: Sequence[Scalar], vectors: Sequence[Vector], m: int) -> Vector:
        """Return the linear combination sum(coeffs[i] * vectors[i]) in F^m."""
        total = [self.zero] * m
        for c, v in zip(coeffs, vectors):
            if c == 0:
                continue
            for i, a in enumerate(v):
                total[i] = self.add(total[i], self.mul(c, a))
        return tuple(total)

    def format_scalar(self, a: Scalar) -> str:
        if self.is_rational and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))

    def format_vector(self, x: Vector) -> str:
        return "(" + ",".join(self.format_scalar(a) for a in x) + ")"


RATIONALS = ScalarField.rational()


def is_zero_vector(x: Vector) -> bool:
    return all(a == 0 for a in x)


@dataclass(frozen=True)
class Matrix:
    """A rectangular grid of scalars over one field."""
    field: ScalarField
    rows: Tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionMismatch(
                    f"matrix row of length {len(row)}, expected {self.ncols}"
                )

    @classmethod
    def from_rows(
        cls, field: ScalarField, rows: Sequence[Sequence], ncols: Optional[int] = None
    ) -> "Matrix":
        coerced = tuple(field.vector(r) for r in rows)
        if ncols is None:
            if not coerced:
                raise DimensionMismatch("column count required for an empty matrix")
            ncols = len(coerced[0])
        return cls(field, coerced, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def columns(self) -> List[Vector]:
        return [tuple(row[j] for row in self.rows) for j in range(self.ncols)]


def _row_reduce(
    field: ScalarField, rows: Sequence[Vector], ncols: int
) -> Tuple[List[Vector], List[int]]:
    """Gauss-Jordan elimination; returns the nonzero RREF rows and pivot columns."""
    work = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        pivot_row = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        scale = field.inv(work[r][c])
        work[r] = [field.mul(scale, v) for v in work[r]]
        for i in range(len(work)):
            factor = work[i][c]
            if i != r and factor != 0:
                work[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in work[:r]], pivots


def _nullspace_basis(field: ScalarField, rows: Sequence[Vector], ncols: int) -> List[Vector]:
    reduced, pivots = _row_reduce(field, rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, c in zip(reduced, pivots):
            v[c] = field.neg(row[free])
        basis.append(tuple(v))
    return basis


def rref(matrix: Matrix) -> Tuple[Matrix, int]:
    """
    Reduced row echelon form of a matrix.

    Args:
        matrix: Any matrix.

    Returns:
        The unique RREF (zero rows last, same shape) and the rank.
    """
    reduced, _ = _row_reduce(matrix.field, matrix.rows, matrix.ncols)
    rank = len(reduced)
    padding = [matrix.field.zero_vector(matrix.ncols)] * (matrix.nrows - rank)
    return Matrix(matrix.field, tuple(reduced) + tuple(padding), matrix.ncols), rank


def _pivot_columns(rows: Sequence[Vector]) -> Tuple[int, ...]:
    return tuple(next(i for i, a in enumerate(row) if a != 0) for row in rows)


@dataclass(frozen=True)
class Subspace:
    """
    A linear subspace of F^m held by its RREF basis.

    Two subspaces are equal exactly when their RREF rows are identical, so
    dataclass equality and hashing are subspace equality.
    """
    field: ScalarField
    ambient: int
    rows: Tuple[Vector, ...]

    def __post_init__(self):
        if self.rank > self.ambient:
            raise ValueError("rank exceeds ambient dimension")
        for row in self.rows:
            if len(row) != self.ambient:
                raise DimensionMismatch(
                    f"basis row of length {len(row)} in F^{self.ambient}"
                )
            if is_zero_vector(row):
                raise ValueError("RREF basis cannot contain a zero row")
        pivots = _pivot_columns(self.rows)
        if any(b <= a for a, b in zip(pivots, pivots[1:])):
            raise ValueError("pivot columns must strictly increase")
        for i, c in enumerate(pivots):
            if any(row[c] != (1 if j == i else 0) for j, row in enumerate(self.rows)):
                raise ValueError("rows are not in reduced row echelon form")

    @classmethod
    def zero(cls, field: ScalarField, m: int) -> "Subspace":
        return cls(field, m, ())

    @classmethod
    def full(cls, field: ScalarField, m: int) -> "Subspace":
        return cls(field, m, tuple(standard_basis(field, m)))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return _pivot_columns(self.rows)

    @property
    def is_zero(self) -> bool:
        return not self.rows

    @property
    def is_full(self) -> bool:
        return self.rank == self.ambient

    def __contains__(self, x: Sequence) -> bool:
        return contains(self, x)

    def format(self) -> str:
        inner = " ".join(self.field.format_vector(r) for r in self.rows)
        return f"span {{ {inner} }}" if inner else "span { }"


def standard_basis(field: ScalarField, m: int) -> List[Vector]:
    return [tuple(field.one if i == j else field.zero for j in range(m)) for i in range(m)]


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.tag} vs {b.field.tag}")
    if a.ambient != b.ambient:
        raise DimensionMismatch(f"F^{a.ambient} vs F^{b.ambient}")


def _coerce_vector(field: ScalarField, m: int, x: Sequence) -> Vector:
    if len(x) != m:
        raise DimensionMismatch(f"vector of length {len(x)} in F^{m}")
    return field.vector(x)


def subspace_from_generators(
    field: ScalarField, m: int, gens: Iterable[Sequence]
) -> Subspace:
    """
    Canonical span of a generator family.

    Args:
        field: Scalar field.
        m: Ambient dimension.
        gens: Generators, each of length m.

    Returns:
        The Subspace spanned by the generators.
    """
    vectors = [_coerce_vector(field, m, g) for g in gens]
    reduced, _ = _row_reduce(field, vectors, m)
    return Subspace(field, m, tuple(reduced))


def rank_of(field: ScalarField, m: int, vectors: Sequence[Sequence]) -> int:
    return subspace_from_generators(field, m, vectors).rank


def linearly_independent(field: ScalarField, m: int, vectors: Sequence[Sequence]) -> bool:
    return rank_of(field, m, vectors) == len(vectors)


def is_basis(field: ScalarField, m: int, vectors: Sequence[Sequence]) -> bool:
    return len(vectors) == m and linearly_independent(field, m, vectors)


def contains(space: Subspace, x: Sequence) -> bool:
    """True iff x lies in the span of the subspace."""
    field = space.field
    residual = list(_coerce_vector(field, space.ambient, x))
    for row, c in zip(space.rows, space.pivots):
        coef = residual[c]
        if coef != 0:
            residual = [field.sub(a, field.mul(coef, b)) for a, b in zip(residual, row)]
    return is_zero_vector(residual)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return subspace_from_generators(a.field, a.ambient, a.rows + b.rows)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """
    Intersection by the Zassenhaus construction.

    Rows (u | u) for u in A and (v | 0) for v in B are reduced together;
    the reduced rows whose left half vanishes carry a basis of A ∩ B in
    their right half.
    """
    _check_same(a, b)
    field, m = a.field, a.ambient
    zero = field.zero_vector(m)
    stacked = [u + u for u in a.rows] + [v + zero for v in b.rows]
    reduced, pivots = _row_reduce(field, stacked, 2 * m)
    meet = [row[m:] for row, c in zip(reduced, pivots) if c >= m]
    return subspace_from_generators(field, m, meet)


def is_subspace_of(a: Subspace, b: Subspace) -> bool:
    _check_same(a, b)
    return a.rank <= b.rank and all(contains(b, row) for row in a.rows)


@dataclass(frozen=True)
class LinearMap:
    """x -> A x from F^domain to F^codomain; A is codomain x domain."""
    field: ScalarField
    domain: int
    codomain: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.field != self.field:
            raise FieldMismatch("matrix field differs from map field")
        if self.matrix.nrows != self.codomain or self.matrix.ncols != self.domain:
            raise DimensionMismatch(
                f"matrix is {self.matrix.nrows}x{self.matrix.ncols}, "
                f"map is F^{self.domain} -> F^{self.codomain}"
            )

    @classmethod
    def from_rows(
        cls, field: ScalarField, rows: Sequence[Sequence], domain: Optional[int] = None
    ) -> "LinearMap":
        matrix = Matrix.from_rows(field, rows, domain)
        return cls(field, matrix.ncols, matrix.nrows, matrix)

    @classmethod
    def identity(cls, field: ScalarField, m: int) -> "LinearMap":
        return cls.from_rows(field, standard_basis(field, m), m)

    @classmethod
    def zero_map(cls, field: ScalarField, domain: int, codomain: int) -> "LinearMap":
        return cls.from_rows(field, [field.zero_vector(domain)] * codomain, domain)

    def __call__(self, x: Sequence) -> Vector:
        v = _coerce_vector(self.field, self.domain, x)
        return tuple(self.field.dot(row, v) for row in self.matrix.rows)


def kernel(f: LinearMap) -> Subspace:
    basis = _nullspace_basis(f.field, f.matrix.rows, f.domain)
    return subspace_from_generators(f.field, f.domain, basis)


def image(f: LinearMap) -> Subspace:
    return subspace_from_generators(f.field, f.codomain, f.matrix.columns())


def map_subspace(f: LinearMap, space: Subspace) -> Subspace:
    """The image f(S) of a subspace of the domain."""
    if space.field != f.field:
        raise FieldMismatch(f"{space.field.tag} vs {f.field.tag}")
    if space.ambient != f.domain:
        raise DimensionMismatch(f"subspace of F^{space.ambient}, map from F^{f.domain}")
    return subspace_from_generators(f.field, f.codomain, [f(row) for row in space.rows])


def preimage_subspace(f: LinearMap, space: Subspace) -> Subspace:
    """
    {x : f(x) ∈ S}.

    S is cut out by its annihilator {y : y·s = 0 for s in S}; each
    annihilator vector y pulls back to the linear constraint (yᵀA) x = 0.

    Args:
        f: Linear map.
        space: Subspace of the codomain.

    Returns:
        The preimage, always containing kernel(f).
    """
    if space.field != f.field:
        raise FieldMismatch(f"{space.field.tag} vs {f.field.tag}")
    if space.ambient != f.codomain:
        raise DimensionMismatch(
            f"subspace of F^{space.ambient}, map into F^{f.codomain}"
        )
    field = f.field
    annihilator = _nullspace_basis(field, space.rows, f.codomain)
    constraints = [
        field.combine(y, f.matrix.rows, f.domain) for y in annihilator
    ]
    basis = _nullspace_basis(field, constraints, f.domain)
    return subspace_from_generators(field, f.domain, basis)


def coefficient_space(xs: Sequence[Sequence], space: Subspace) -> Subspace:
    """
    The coefficient vectors a ∈ F^k with sum(a_i x_i) ∈ S.

    Args:
        xs: k linearly independent vectors of S's ambient space.
        space: Target subspace.

    Returns:
        A Subspace of F^k.

    Raises:
        PreconditionError: If xs are linearly dependent.
    """
    field, m = space.field, space.ambient
    vectors = [_coerce_vector(field, m, x) for x in xs]
    if not linearly_independent(field, m, vectors):
        raise PreconditionError("vectors are linearly dependent")
    k = len(vectors)
    columns_as_rows = [tuple(v[i] for v in vectors) for i in range(m)]
    f = LinearMap(field, k, m, Matrix(field, tuple(columns_as_rows), k))
    return preimage_subspace(f, space)


def coordinate_support(space: Subspace) -> Tuple[bool, ...]:
    """For each coordinate, whether some basis row is nonzero there."""
    return tuple(
        any(row[i] != 0 for row in space.rows) for i in range(space.ambient)
    )


def has_all_nonzero_vector(space: Subspace) -> Optional[Vector]:
    """
    Find a vector of W with every coordinate nonzero, if one exists.

    Over an infinite field W escapes the union of the coordinate
    hyperplanes unless it lies inside one of them. The witness is the
    first t = 1, 2, ... for which sum(t^j row_j) has no zero coordinate;
    each coordinate is a nonzero polynomial in t of degree < rank, so at
    most k * rank values of t fail.

    Args:
        space: A subspace of Q^k.

    Returns:
        The witness vector, or None.

    Raises:
        PreconditionError: For prime-field subspaces.
    """
    if not space.field.is_rational:
        raise PreconditionError(
            "all-nonzero witness search is only exact over Q; use the oracle for GF(p)"
        )
    if not all(coordinate_support(space)):
        return None
    field = space.field
    limit = get_settings().witness_search_limit
    for t in range(1, limit + 1):
        coeffs = [Fraction(t) ** j for j in range(space.rank)]
        candidate = field.combine(coeffs, space.rows, space.ambient)
        if all(a != 0 for a in candidate):
            log.debug("all-nonzero witness found at t=%d", t)
            return candidate
    raise InvariantViolation(f"no all-nonzero witness within t <= {limit}")
