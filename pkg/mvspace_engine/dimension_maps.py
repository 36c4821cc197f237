"""
Multi dimension, common M-bases and linear maps.

The multi dimension of V is the largest count sum over bases of F^m,
attained by any M-basis. Two spaces whose θ counts dominate each other's
nonzero counts share an M-basis, which yields the modular law for sums
and intersections. Linear maps push count functions forward; kernel and
image restrictions satisfy a rank-nullity law.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from mvspace_engine.config import get_settings
from mvspace_engine.errors import (
    DimensionMismatch,
    FieldMismatch,
    InvariantViolation,
    PreconditionError,
)
from mvspace_engine.exact_linalg import (
    LinearMap,
    Subspace,
    Vector,
    image,
    is_basis,
    kernel,
    map_subspace,
    subspace_from_generators,
)
from mvspace_engine.independence_basis import (
    MBasis,
    extend_mbasis,
    extend_step,
    is_mbasis,
    mbasis_within,
    multi_index,
)
from mvspace_engine.mvspace import (
    MVSpace,
    canonicalize,
    count,
    equals,
    intersect,
    restrict,
    sum_spaces,
    top_nonzero_count,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RestrictedMVSpace:
    """An MVSpace whose levels all lie inside `carrier`."""
    carrier: Subspace
    space: MVSpace

    def __post_init__(self):
        for n, u in self.space.chain:
            if u.ambient != self.carrier.ambient or any(row not in self.carrier for row in u.rows):
                raise PreconditionError(f"level {n} leaves the carrier")

    def mbasis(self) -> List[Tuple[Vector, int]]:
        """An M-basis of the carrier, as (vector, count) pairs."""
        return mbasis_within(self.space, self.carrier)


@dataclass(frozen=True)
class RankNullityDecomposition:
    """M-basis of the kernel part, its extension to V, and the images."""
    kernel_basis: Tuple[Vector, ...]
    extension: Tuple[Vector, ...]
    image_basis: Tuple[Vector, ...]


SpaceLike = Union[MVSpace, RestrictedMVSpace]


def mdim(space: SpaceLike) -> int:
    """Σ n_i (dim U_i - dim U_{i-1}) over the chain."""
    if isinstance(space, RestrictedMVSpace):
        space = space.space
    return sum(n * r for n, r in multi_index(space).entries)


def basis_count_sum(space: MVSpace, vectors: Sequence[Sequence]) -> int:
    """
    Σ count(V, e) over a basis; never exceeds mdim(V).

    Raises:
        PreconditionError: If vectors are not a basis.
    """
    if not is_basis(space.field, space.ambient, vectors):
        raise PreconditionError("vectors are not a basis")
    return sum(count(space, v) for v in vectors)


def _check_pair(v: MVSpace, w: MVSpace) -> None:
    if v.field != w.field:
        raise FieldMismatch(f"{v.field.tag} vs {w.field.tag}")
    if v.ambient != w.ambient:
        raise DimensionMismatch(f"F^{v.ambient} vs F^{w.ambient}")


def theta_dominance(v: MVSpace, w: MVSpace) -> bool:
    """C_V(θ) >= sup C_W(X∖{θ}) and C_W(θ) >= sup C_V(X∖{θ})."""
    _check_pair(v, w)
    return v.top_count >= top_nonzero_count(w) and w.top_count >= top_nonzero_count(v)


def _require_dominance(v: MVSpace, w: MVSpace) -> None:
    if not theta_dominance(v, w):
        raise PreconditionError(
            f"theta dominance fails: C_V(θ)={v.top_count}, C_W(θ)={w.top_count}, "
            f"nonzero tops {top_nonzero_count(v)} and {top_nonzero_count(w)}"
        )


def _common(v: MVSpace, w: MVSpace, carrier: Subspace, depth: int) -> List[Vector]:
    if carrier.rank == 0:
        return []
    if carrier.rank == 1:
        return [carrier.rows[0]]
    v_here = restrict(v, carrier)
    picked = mbasis_within(v_here, carrier)
    # the last vector carries the least count
    rest = [vec for vec, _ in picked[:-1]]
    smaller = subspace_from_generators(v.field, v.ambient, rest)
    partial = _common(v, w, smaller, depth + 1)
    w_here = restrict(w, carrier)
    step = extend_step(w_here, smaller, within=carrier)
    result = partial + [step]
    log.debug("common M-basis depth %d: %d vectors", depth, len(result))
    if get_settings().debug_checks:
        if not equals(restrict(sum_spaces(v, w), carrier), sum_spaces(v_here, w_here)):
            raise InvariantViolation(f"sum does not restrict to the carrier at depth {depth}")
        for label, space in (("V", v_here), ("W", w_here)):
            if not is_mbasis(space, result, carrier):
                raise InvariantViolation(f"common M-basis step fails for {label} at depth {depth}")
    return result


def common_mbasis(v: MVSpace, w: MVSpace) -> Tuple[Vector, ...]:
    """
    One basis that is an M-basis of V, W, V ∩ W and V + W.

    Removes the least-count vector of an M-basis of V, recurses on the
    span H of the rest, then steps out of H with a vector of largest
    W-count.

    Raises:
        PreconditionError: Without theta dominance.
    """
    _require_dominance(v, w)
    full = Subspace.full(v.field, v.ambient)
    basis = tuple(_common(v, w, full, 0))
    if get_settings().debug_checks:
        for space in (v, w, intersect(v, w), sum_spaces(v, w)):
            if not is_mbasis(space, basis):
                raise InvariantViolation("common M-basis postcondition failed")
    return basis


def modular_dimension_check(v: MVSpace, w: MVSpace) -> Tuple[int, int]:
    """(mdim(V+W), mdim V + mdim W - mdim(V∩W)); equal under dominance."""
    _require_dominance(v, w)
    lhs = mdim(sum_spaces(v, w))
    rhs = mdim(v) + mdim(w) - mdim(intersect(v, w))
    return lhs, rhs


def _check_map(f: LinearMap, space: MVSpace) -> None:
    if f.field != space.field:
        raise FieldMismatch(f"{f.field.tag} vs {space.field.tag}")
    if f.domain != space.ambient:
        raise DimensionMismatch(f"map from F^{f.domain}, space in F^{space.ambient}")


def map_image(f: LinearMap, space: MVSpace) -> MVSpace:
    """
    f(V): C(y) = max{C_V(x) : f(x) = y}.

    The chain is f(U_i) with the original counts; equal images keep the
    larger count.
    """
    _check_map(f, space)
    pairs = tuple((n, map_subspace(f, u)) for n, u in space.chain)
    return canonicalize(MVSpace(space.field, f.codomain, space.omega, pairs))


def ker_restrict(f: LinearMap, space: MVSpace) -> RestrictedMVSpace:
    _check_map(f, space)
    carrier = kernel(f)
    return RestrictedMVSpace(carrier, restrict(space, carrier))


def im_restrict(f: LinearMap, space: MVSpace) -> RestrictedMVSpace:
    """The image of f carrying the pushed-forward counts of f(V)."""
    _check_map(f, space)
    return RestrictedMVSpace(image(f), map_image(f, space))


def rank_nullity_check(f: LinearMap, space: MVSpace) -> Tuple[int, int]:
    lhs = mdim(ker_restrict(f, space)) + mdim(im_restrict(f, space))
    return lhs, mdim(space)


def rank_nullity_decomposition(f: LinearMap, space: MVSpace) -> RankNullityDecomposition:
    """
    Witness the rank-nullity law with explicit bases.

    An M-basis of the kernel restriction is extended to an M-basis of V;
    the images of the extension vectors form an M-basis of the image
    restriction with the same counts.

    Raises:
        InvariantViolation: If the images fail to be an M-basis of the
            image restriction.
    """
    ker = ker_restrict(f, space)
    kernel_basis = tuple(vec for vec, _ in ker.mbasis())
    full: MBasis = extend_mbasis(space, kernel_basis)
    extension = full.vectors[len(kernel_basis):]
    images = tuple(f(vec) for vec in extension)
    im = im_restrict(f, space)
    if not is_mbasis(im.space, images, im.carrier):
        raise InvariantViolation("images of the extension are not an M-basis of the image")
    return RankNullityDecomposition(kernel_basis, extension, images)
