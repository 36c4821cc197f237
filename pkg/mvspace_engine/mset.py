"""
Finite multisets over the enumerable universes GF(p)^n.

This is the executable form of the multiset calculus: count functions,
level sets, union and intersection, the sup-min sum, scalar action, and
image / inverse image under arbitrary maps. Counts are stored densely in
the lexicographic order of the universe.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import galois
import numpy as np

from mvspace_engine.config import get_settings
from mvspace_engine.errors import BudgetExceeded, DimensionMismatch, PreconditionError
from mvspace_engine.exact_linalg import ScalarField

log = logging.getLogger(__name__)

Element = Tuple[int, ...]


@dataclass(frozen=True)
class UniverseSpec:
    """GF(p)^n with its elements enumerated lexicographically."""
    p: int
    n: int

    def __post_init__(self):
        if self.p < 2 or not galois.is_prime(self.p):
            raise ValueError(f"universe characteristic must be a prime, got {self.p}")
        if self.n < 0:
            raise ValueError("universe dimension must be non-negative")
        budget = get_settings().oracle_max_elements
        if self.p ** self.n > budget:
            raise BudgetExceeded(
                f"GF({self.p})^{self.n} has {self.p ** self.n} elements, budget is {budget}"
            )

    @property
    def size(self) -> int:
        return self.p ** self.n

    @property
    def field(self) -> ScalarField:
        return ScalarField.prime(self.p)

    @cached_property
    def gf(self):
        return galois.GF(self.p)

    @cached_property
    def codes(self) -> np.ndarray:
        """Elements as an (N, n) integer array."""
        grid = list(itertools.product(range(self.p), repeat=self.n))
        return np.array(grid, dtype=np.int64).reshape(self.size, self.n)

    @cached_property
    def elements(self) -> Tuple[Element, ...]:
        return tuple(tuple(int(a) for a in row) for row in self.codes)

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def index(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise DimensionMismatch(f"element of length {len(x)} in GF({self.p})^{self.n}")
        if any(not 0 <= int(a) < self.p for a in x):
            raise ValueError(f"{tuple(x)} is not an element of GF({self.p})^{self.n}")
        return int(np.dot(np.asarray(x, dtype=np.int64), self.weights)) if self.n else 0

    def locate(self, codes: np.ndarray) -> np.ndarray:
        """Indices of the elements given as rows of an integer array."""
        return codes @ self.weights

    def _indices(self, field_array) -> np.ndarray:
        return self.locate(field_array.view(np.ndarray).astype(np.int64))

    @cached_property
    def add_table(self) -> np.ndarray:
        """add_table[i, j] is the index of elements[i] + elements[j]."""
        e = self.gf(self.codes)
        return self._indices(e[:, None, :] + e[None, :, :])

    @cached_property
    def sub_table(self) -> np.ndarray:
        """sub_table[i, j] is the index of elements[i] - elements[j]."""
        e = self.gf(self.codes)
        return self._indices(e[:, None, :] - e[None, :, :])

    def scale_table(self, scalar: int) -> np.ndarray:
        """scale_table(s)[i] is the index of s * elements[i]."""
        e = self.gf(self.codes)
        return self._indices(self.gf(scalar % self.p) * e)


@dataclass(frozen=True)
class FiniteMSet:
    """
    A multiset over a finite universe, every count at most omega.
    """
    universe: UniverseSpec
    omega: int
    counts: Tuple[int, ...]

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("omega must be non-negative")
        if len(self.counts) != self.universe.size:
            raise DimensionMismatch(
                f"{len(self.counts)} counts for a universe of {self.universe.size} elements"
            )
        for c in self.counts:
            if not 0 <= c <= self.omega:
                raise ValueError(f"count {c} outside [0, {self.omega}]")

    @classmethod
    def empty(cls, universe: UniverseSpec, omega: int) -> "FiniteMSet":
        return cls(universe, omega, (0,) * universe.size)

    @classmethod
    def from_mapping(
        cls, universe: UniverseSpec, omega: int, mapping: Dict[Element, int]
    ) -> "FiniteMSet":
        counts = [0] * universe.size
        for x, c in mapping.items():
            counts[universe.index(x)] = int(c)
        return cls(universe, omega, tuple(counts))

    @classmethod
    def from_array(cls, universe: UniverseSpec, omega: int, array: np.ndarray) -> "FiniteMSet":
        return cls(universe, omega, tuple(int(c) for c in array))

    def array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    def items(self) -> Iterable[Tuple[Element, int]]:
        return zip(self.universe.elements, self.counts)


def mset_from_function(
    universe: UniverseSpec, omega: int, fn: Callable[[Element], int]
) -> FiniteMSet:
    """Tabulate a count function over the whole universe."""
    return FiniteMSet(universe, omega, tuple(int(fn(x)) for x in universe.elements))


def _check_same(a: FiniteMSet, b: FiniteMSet) -> None:
    if a.universe != b.universe:
        raise DimensionMismatch("multisets live on different universes")
    if a.omega != b.omega:
        raise PreconditionError(f"omega mismatch: {a.omega} vs {b.omega}")


def count(m: FiniteMSet, x: Sequence[int]) -> int:
    return m.counts[m.universe.index(x)]


def level_set(m: FiniteMSet, n: int) -> FrozenSet[Element]:
    """
    The n-level set {x : C_M(x) >= n}.

    Raises:
        ValueError: For n < 1; level 0 is the whole universe and is not
            exposed.
    """
    if n < 1:
        raise ValueError("level sets are defined for n >= 1")
    return frozenset(x for x, c in m.items() if c >= n)


def count_range(m: FiniteMSet) -> FrozenSet[int]:
    return frozenset(m.counts)


def is_submset(a: FiniteMSet, b: FiniteMSet) -> bool:
    """Pointwise inclusion C_A <= C_B."""
    _check_same(a, b)
    return bool(np.all(a.array() <= b.array()))


def mset_union(a: FiniteMSet, b: FiniteMSet) -> FiniteMSet:
    _check_same(a, b)
    return FiniteMSet.from_array(a.universe, a.omega, np.maximum(a.array(), b.array()))


def mset_intersection(a: FiniteMSet, b: FiniteMSet) -> FiniteMSet:
    _check_same(a, b)
    return FiniteMSet.from_array(a.universe, a.omega, np.minimum(a.array(), b.array()))


def const_mset(
    universe: UniverseSpec, omega: int, elements: Iterable[Sequence[int]], n: int
) -> FiniteMSet:
    """The constant multiset nP: count n on P, 0 elsewhere."""
    if not 0 <= n <= omega:
        raise ValueError(f"constant count {n} outside [0, {omega}]")
    counts = np.zeros(universe.size, dtype=np.int64)
    for x in elements:
        counts[universe.index(x)] = n
    return FiniteMSet.from_array(universe, omega, counts)


def mset_sum(a: FiniteMSet, b: FiniteMSet) -> FiniteMSet:
    """
    Sup-min sum: C(x) = max over x1 of min(C_A(x1), C_B(x - x1)).

    Every one of the N^2 decompositions is evaluated.
    """
    _check_same(a, b)
    universe = a.universe
    checks = universe.size ** 2
    if checks > get_settings().oracle_max_checks:
        raise BudgetExceeded(f"{checks} decompositions exceed the check budget")
    ca, cb = a.array(), b.array()
    # row x, column x1: min(C_A(x1), C_B(x - x1))
    pairs = np.minimum(ca[None, :], cb[universe.sub_table])
    return FiniteMSet.from_array(universe, a.omega, pairs.max(axis=1))


def mset_sum_all(msets: Sequence[FiniteMSet]) -> FiniteMSet:
    """n-ary sum A1 + ... + An by folding the binary sum."""
    if not msets:
        raise ValueError("sum of no multisets")
    return reduce(mset_sum, msets)


def mset_scalar(scalar, b: FiniteMSet) -> FiniteMSet:
    """
    Scalar action C_{λB}(y) = max{C_B(x) : λx = y}.

    For λ != 0 the counts are permuted by x -> λx; for λ = 0 the whole
    mass max C_B collapses onto θ.
    """
    universe = b.universe
    lam = universe.field(scalar)
    cb = b.array()
    out = np.zeros(universe.size, dtype=np.int64)
    if lam == 0:
        out[0] = cb.max(initial=0)
    else:
        out[universe.scale_table(lam)] = cb
    return FiniteMSet.from_array(universe, b.omega, out)


def mset_image(
    f: Callable[[Element], Sequence[int]],
    m: FiniteMSet,
    codomain: Optional[UniverseSpec] = None,
) -> FiniteMSet:
    """
    Image f(M): C(y) = max{C_M(x) : f(x) = y}, 0 off the range of f.

    Args:
        f: Total map from m's universe into the codomain.
        m: Source multiset.
        codomain: Target universe, m's own universe by default.
    """
    target = codomain or m.universe
    indices = np.array([target.index(f(x)) for x in m.universe.elements], dtype=np.int64)
    out = np.zeros(target.size, dtype=np.int64)
    np.maximum.at(out, indices, m.array())
    return FiniteMSet.from_array(target, m.omega, out)


def mset_preimage(
    f: Callable[[Element], Sequence[int]],
    n: FiniteMSet,
    domain: Optional[UniverseSpec] = None,
) -> FiniteMSet:
    """Inverse image f^{-1}(N): C(x) = C_N(f(x))."""
    source = domain or n.universe
    return FiniteMSet(
        source, n.omega, tuple(count(n, f(x)) for x in source.elements)
    )
