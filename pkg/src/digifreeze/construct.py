"""Candidate freezing sets built from cube structure, plus the two families
of explicit non-identity maps used as certificates: close-neighbor collapses
and inward boundary moves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DecompositionError,
    DimensionError,
    DisconnectedImageError,
    PreconditionError,
)
from .lattice import DigitalImage, Point, as_point, boundary, is_connected
from .maps import SelfMap


@dataclass(frozen=True)
class CubeSpec:
    """The box prod [lo_i, hi_i] of Z^n; axes with lo_i == hi_i are degenerate."""

    lo: Point
    hi: Point

    def __post_init__(self):
        lo, hi = as_point(self.lo), as_point(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi):
            raise DimensionError(f"cube bounds {lo} and {hi} differ in length")
        if any(a > b for a, b in zip(lo, hi)):
            raise DecompositionError(f"cube [{lo}, {hi}] has lo > hi on some axis")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def nondegenerate_axes(self) -> List[int]:
        return [k for k in range(self.dim) if self.hi[k] > self.lo[k]]

    def points(self):
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __contains__(self, p) -> bool:
        return len(p) == self.dim and all(a <= c <= b for a, c, b in zip(self.lo, p, self.hi))

    def size(self) -> int:
        out = 1
        for a, b in zip(self.lo, self.hi):
            out *= b - a + 1
        return out

    def image(self, u: int = 1) -> DigitalImage:
        return DigitalImage.from_cube(self.lo, self.hi, u=u)


@dataclass(frozen=True)
class CubeDecomposition:
    cubes: Tuple[CubeSpec, ...]

    def __post_init__(self):
        cubes = tuple(c if isinstance(c, CubeSpec) else CubeSpec(*c) for c in self.cubes)
        object.__setattr__(self, "cubes", cubes)
        if not cubes:
            raise DecompositionError("a decomposition needs at least one cube")
        if len({c.dim for c in cubes}) != 1:
            raise DimensionError("all cubes of a decomposition must share one dimension")

    def union(self) -> set:
        out = set()
        for c in self.cubes:
            out.update(c.points())
        return out

    def __iter__(self):
        return iter(self.cubes)

    def __len__(self) -> int:
        return len(self.cubes)


def corners(K: CubeSpec) -> set:
    """prod {lo_i, hi_i}; a degenerate axis contributes one value."""
    return set(itertools.product(*({a, b} for a, b in zip(K.lo, K.hi))))


def validate_decomposition(X: DigitalImage, D: CubeDecomposition) -> bool:
    """True iff every cube lies in X and the cubes cover X."""
    if D.cubes[0].dim != X.dim:
        return False
    covered = set()
    for cube in D.cubes:
        for p in cube.points():
            if p not in X:
                return False
            covered.add(p)
    return len(covered) == len(X)


def trivial_decomposition(X: DigitalImage) -> CubeDecomposition:
    """One degenerate cube per point."""
    return CubeDecomposition(tuple(CubeSpec(p, p) for p in X.points))


def _checked(X: DigitalImage, D: CubeDecomposition, u: int) -> None:
    if not validate_decomposition(X, D):
        raise DecompositionError("cubes do not decompose the image exactly")
    if not is_connected(X.with_adjacency(u)):
        raise DisconnectedImageError(f"image is not c_{u}-connected")


def c1_freezing_set(D: CubeDecomposition, X: Optional[DigitalImage] = None) -> set:
    """Union of the corner sets of the cubes; freezes (X, c_1)."""
    if X is None:
        X = DigitalImage(D.union(), u=1)
    _checked(X, D, 1)
    out = set()
    for cube in D.cubes:
        out |= corners(cube)
    return out


def cn_freezing_set(D: CubeDecomposition, X: Optional[DigitalImage] = None) -> set:
    """Union of the standalone boundaries of the cubes; freezes (X, c_n)."""
    if X is None:
        X = DigitalImage(D.union(), u=D.cubes[0].dim)
    _checked(X, D, X.dim)
    out = set()
    for cube in D.cubes:
        out |= boundary(cube.image())
    return out


def is_close_neighbor(X: DigitalImage, p: Sequence[int], q: Sequence[int]) -> bool:
    """True when q != p and N(p) is contained in N*(q)."""
    i, j = X.index(p), X.index(q)
    if i == j:
        return False
    reach = X.closed_masks[j]
    return all((reach >> k) & 1 for k in X.adjacency[i])


def close_neighbors(X: DigitalImage, p: Sequence[int]) -> List[Point]:
    """All close neighbors q of p, in canonical order.

    A close neighbor of a point with neighbors must be equal or adjacent to
    one of those neighbors, so only N*(N(p)) is scanned. An isolated point
    has every other point as a close neighbor.
    """
    i = X.index(p)
    nbrs = X.adjacency[i]
    if not nbrs:
        return [q for j, q in enumerate(X.points) if j != i]
    closed = X.closed_masks
    candidates = 0
    for k in nbrs:
        candidates |= closed[k]
    candidates &= ~(1 << i)
    out = []
    while candidates:
        low = candidates & -candidates
        j = low.bit_length() - 1
        candidates ^= low
        reach = closed[j]
        if all((reach >> k) & 1 for k in nbrs):
            out.append(X.points[j])
    return out


def mandatory_certificates(X: DigitalImage) -> Dict[Point, Point]:
    """Map each point that has a close neighbor to its first close neighbor."""
    out = {}
    for p in X.points:
        qs = close_neighbors(X, p)
        if qs:
            out[p] = qs[0]
    return out


def mandatory_points(X: DigitalImage) -> set:
    """Points that belong to every freezing set of X (they have a close neighbor)."""
    return set(mandatory_certificates(X))


def close_neighbor_witness(X: DigitalImage, p: Sequence[int], q: Sequence[int]) -> SelfMap:
    """The identity except p -> q, for q a close neighbor of p."""
    p, q = tuple(p), tuple(q)
    if not is_close_neighbor(X, p, q):
        raise PreconditionError(f"{q} is not a close c_{X.u}-neighbor of {p}")
    return SelfMap.from_mapping(X, {p: q})


def boundary_minimality_witness(K: CubeSpec, x0: Sequence[int], i: int) -> SelfMap:
    """Move boundary point x0 one step inward along axis i (1-based) on (K, c_n).

    Every other point stays put, so the map fixes Bd(K) minus x0.
    """
    x0 = as_point(x0)
    n = K.dim
    if not 1 <= i <= n:
        raise IndexError(f"axis {i} out of range 1..{n}")
    X = K.image(u=n)
    if x0 not in X:
        raise PreconditionError(f"{x0} is not in the cube")
    if x0 not in boundary(X):
        raise PreconditionError(f"{x0} is not a boundary point of the cube")
    k = i - 1
    a, b = K.lo[k], K.hi[k]
    if a == b:
        raise PreconditionError(f"axis {i} is degenerate; no inward move exists")
    if x0[k] == a:
        moved = a + 1
    elif x0[k] == b:
        moved = b - 1
    else:
        raise PreconditionError(f"coordinate {i} of {x0} is not extremal")
    return SelfMap.from_mapping(X, {x0: x0[:k] + (moved,) + x0[k + 1:]})


def extremal_axis(K: CubeSpec, x0: Sequence[int]) -> Optional[int]:
    """First nondegenerate 1-based axis where x0 sits on a face of K, if any."""
    for k in K.nondegenerate_axes():
        if x0[k] in (K.lo[k], K.hi[k]):
            return k + 1
    return None


def boundary_certificates(K: CubeSpec):
    """A certificate provider for minimality checks of Bd(K) under c_n.

    Returns a callable ``(X, reduced_set, removed_point) -> SelfMap | None``
    suitable for :func:`digifreeze.verify.is_minimal_freezing`.
    """

    def provider(X, reduced, removed):
        axis = extremal_axis(K, removed)
        if axis is None:
            return None
        return boundary_minimality_witness(K, removed, axis)

    return provider
