"""Maps between digital images: continuity, composition, fixed points,
lattice symmetries, and the brute-force enumerator of continuous self-maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from .errors import DigifreezeError, DimensionError, SearchGuardError
from .lattice import DigitalImage, Point, as_point

ORACLE_PRODUCT_GUARD = 12
ORACLE_BACKTRACK_GUARD = 40


@dataclass(frozen=True)
class ImageMap:
    """A total function from ``source`` to ``target``.

    ``assignment[i]`` is the target index of the i-th source point in
    canonical order.
    """

    source: DigitalImage
    target: DigitalImage
    assignment: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))
        if len(self.assignment) != len(self.source):
            raise DigifreezeError(
                f"assignment has {len(self.assignment)} entries for {len(self.source)} source points"
            )
        m = len(self.target)
        for a in self.assignment:
            if not 0 <= a < m:
                raise DigifreezeError(f"assignment index {a} is not a target point")

    @classmethod
    def from_mapping(cls, source: DigitalImage, target: DigitalImage, mapping: Dict) -> "ImageMap":
        """Build from a point -> point dict covering every source point."""
        return cls(source, target, tuple(target.index(mapping[p]) for p in source.points))

    def __call__(self, p: Sequence[int]) -> Point:
        return self.target.points[self.assignment[self.source.index(p)]]

    def as_dict(self) -> Dict[Point, Point]:
        tp = self.target.points
        return {p: tp[a] for p, a in zip(self.source.points, self.assignment)}

    def pairs(self):
        """(point, image) pairs in canonical source order."""
        tp = self.target.points
        return [(p, tp[a]) for p, a in zip(self.source.points, self.assignment)]


class SelfMap(ImageMap):
    """An ImageMap whose source and target are the same image."""

    def __init__(self, image: DigitalImage, assignment: Sequence[int]):
        super().__init__(image, image, tuple(assignment))

    @classmethod
    def from_mapping(cls, image: DigitalImage, mapping: Dict) -> "SelfMap":
        return cls(image, tuple(image.index(mapping.get(p, p)) for p in image.points))

    @property
    def image(self) -> DigitalImage:
        return self.source

    def is_identity(self) -> bool:
        return all(a == i for i, a in enumerate(self.assignment))

    def moved(self):
        """Points not fixed by the map, with their images."""
        pts = self.source.points
        return [(pts[i], pts[a]) for i, a in enumerate(self.assignment) if a != i]


def identity(X: DigitalImage) -> SelfMap:
    return SelfMap(X, range(len(X)))


def constant(X: DigitalImage, c: Sequence[int]) -> SelfMap:
    return SelfMap(X, [X.index(c)] * len(X))


def is_continuous(f: ImageMap) -> bool:
    """Adjacent source points must land on equal or adjacent target points.

    Source adjacency uses ``f.source.u``; target adjacency uses ``f.target.u``.
    """
    closed = f.target.closed_masks
    a = f.assignment
    for i, nbrs in enumerate(f.source.adjacency):
        reach = closed[a[i]]
        for j in nbrs:
            if j > i and not (reach >> a[j]) & 1:
                return False
    return True


def compose(f: ImageMap, g: ImageMap) -> ImageMap:
    """g after f."""
    if f.target != g.source:
        raise DigifreezeError("cannot compose: target of f is not the source of g")
    assignment = tuple(g.assignment[a] for a in f.assignment)
    if f.source == g.target:
        return SelfMap(f.source, assignment)
    return ImageMap(f.source, g.target, assignment)


def fixed_points(f: ImageMap) -> set:
    return {p for p, q in f.pairs() if p == q}


@dataclass(frozen=True)
class LatticeIso:
    """Affine lattice symmetry x -> signs * x[permutation] + translation.

    Output coordinate k is ``signs[k] * x[permutation[k]] + translation[k]``.
    """

    permutation: Tuple[int, ...]
    signs: Tuple[int, ...]
    translation: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.permutation)
        object.__setattr__(self, "permutation", tuple(self.permutation))
        object.__setattr__(self, "signs", tuple(self.signs))
        object.__setattr__(self, "translation", as_point(self.translation))
        if sorted(self.permutation) != list(range(n)):
            raise DigifreezeError(f"{self.permutation} is not a permutation of 0..{n - 1}")
        if len(self.signs) != n or len(self.translation) != n:
            raise DimensionError("permutation, signs and translation must have equal length")
        if any(s not in (1, -1) for s in self.signs):
            raise DigifreezeError("signs must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "LatticeIso":
        return cls(tuple(range(n)), (1,) * n, (0,) * n)

    @classmethod
    def translate(cls, offset: Sequence[int]) -> "LatticeIso":
        n = len(offset)
        return cls(tuple(range(n)), (1,) * n, tuple(offset))

    @property
    def dim(self) -> int:
        return len(self.permutation)

    def __call__(self, x: Sequence[int]) -> Point:
        if len(x) != self.dim:
            raise DimensionError(f"point {tuple(x)} does not have dimension {self.dim}")
        return tuple(s * x[k] + t for k, s, t in zip(self.permutation, self.signs, self.translation))

    def then(self, other: "LatticeIso") -> "LatticeIso":
        """The iso applying ``self`` first, then ``other``."""
        perm = tuple(self.permutation[other.permutation[k]] for k in range(self.dim))
        signs = tuple(other.signs[k] * self.signs[other.permutation[k]] for k in range(self.dim))
        trans = tuple(
            other.signs[k] * self.translation[other.permutation[k]] + other.translation[k]
            for k in range(self.dim)
        )
        return LatticeIso(perm, signs, trans)

    def inverse(self) -> "LatticeIso":
        n = self.dim
        perm = [0] * n
        signs = [1] * n
        trans = [0] * n
        for k, j in enumerate(self.permutation):
            # y_k = s_k x_j + t_k  =>  x_j = s_k y_k - s_k t_k
            perm[j] = k
            signs[j] = self.signs[k]
            trans[j] = -self.signs[k] * self.translation[k]
        return LatticeIso(tuple(perm), tuple(signs), tuple(trans))


def apply_iso(T: LatticeIso, X: DigitalImage) -> DigitalImage:
    return DigitalImage((T(p) for p in X.points), u=X.u, dim=X.dim)


def apply_iso_to_set(T: LatticeIso, A: Iterable[Sequence[int]]) -> set:
    return {T(p) for p in A}


def induced_map(T: LatticeIso, X: DigitalImage) -> ImageMap:
    """The bijection X -> T(X) as an ImageMap."""
    Y = apply_iso(T, X)
    return ImageMap(X, Y, tuple(Y.index(T(p)) for p in X.points))


def conjugate(f: SelfMap, T: LatticeIso) -> SelfMap:
    """T o f o T^-1 on T(X)."""
    Y = apply_iso(T, f.image)
    return SelfMap.from_mapping(Y, {T(p): T(q) for p, q in f.pairs()})


def normalize_to_origin(X: DigitalImage):
    """Translate X so that every axis has minimum coordinate 0."""
    lows = tuple(min(p[k] for p in X.points) for k in range(X.dim))
    T = LatticeIso.translate(tuple(-c for c in lows))
    return apply_iso(T, X), T


def enumerate_continuous_selfmaps(
    X: DigitalImage,
    fix: Iterable[Sequence[int]] = (),
    method: str = "backtrack",
    guard: Optional[int] = None,
) -> Iterator[SelfMap]:
    """Yield every continuous self-map of X that fixes ``fix`` pointwise.

    Maps come out in lexicographic order of their assignment sequences.
    ``method="backtrack"`` only extends continuous partial assignments;
    ``method="product"`` filters all |X|^|X| functions and is meant for very
    small images. No pruning beyond continuity is used in either mode.
    """
    n = len(X)
    if method == "backtrack":
        limit = ORACLE_BACKTRACK_GUARD if guard is None else guard
    elif method == "product":
        limit = ORACLE_PRODUCT_GUARD if guard is None else guard
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    if n > limit:
        raise SearchGuardError(f"image has {n} points, above the {method} enumeration guard of {limit}")
    forced = {X.index(p): X.index(p) for p in fix}

    if method == "product":
        choices = [[forced[i]] if i in forced else range(n) for i in range(n)]
        for assignment in itertools.product(*choices):
            f = SelfMap(X, assignment)
            if is_continuous(f):
                yield f
        return

    closed = X.closed_masks
    earlier = [[j for j in X.adjacency[i] if j < i] for i in range(n)]
    assignment = [0] * n

    def extend(i):
        if i == n:
            yield SelfMap(X, assignment)
            return
        allowed = (1 << n) - 1
        for j in earlier[i]:
            allowed &= closed[assignment[j]]
        candidates = [forced[i]] if i in forced else range(n)
        for v in candidates:
            if (allowed >> v) & 1:
                assignment[i] = v
                yield from extend(i + 1)

    yield from extend(0)
