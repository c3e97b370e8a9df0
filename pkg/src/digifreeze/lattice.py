"""Lattice points, digital images and the c_u adjacency graph.

A digital image here is a finite set of points of Z^n together with an
adjacency parameter ``u``: two distinct points are c_u-adjacent when every
coordinate differs by at most 1 and at most ``u`` coordinates differ.
Points are plain tuples of ints and are always kept in lexicographic order,
so index ``i`` of an image is stable and every set-valued result can be
reported deterministically.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .errors import AdjacencyError, DimensionError, PointNotInImage

Point = Tuple[int, ...]

MAX_DIM = 16


def as_point(p: Iterable[int]) -> Point:
    """Coerce a sequence of integers into a point tuple."""
    out = []
    for c in p:
        if isinstance(c, bool) or int(c) != c:
            raise DimensionError(f"coordinates must be integers, got {c!r}")
        out.append(int(c))
    return tuple(out)


def _check_u(u: int, n: int) -> None:
    if isinstance(u, bool) or not isinstance(u, int) or not 1 <= u <= n:
        raise AdjacencyError(f"adjacency parameter u={u!r} must satisfy 1 <= u <= {n}")


def adjacent(p: Sequence[int], q: Sequence[int], u: int) -> bool:
    """Return True when ``p`` and ``q`` are c_u-adjacent."""
    if len(p) != len(q):
        raise DimensionError(f"points {tuple(p)} and {tuple(q)} have different dimensions")
    _check_u(u, len(p))
    differing = 0
    for a, b in zip(p, q):
        d = a - b
        if d == 0:
            continue
        if d not in (1, -1):
            return False
        differing += 1
    return 0 < differing <= u


def projection(x: Sequence[int], i: int) -> int:
    """The i-th coordinate of ``x``, counting from 1."""
    if not 1 <= i <= len(x):
        raise IndexError(f"projection index {i} out of range 1..{len(x)}")
    return x[i - 1]


class DigitalImage:
    """An immutable finite subset of Z^n with c_u adjacency.

    The adjacency graph is built once, at construction, as lists of
    neighbor indices in canonical (lexicographic) point order.
    """

    __slots__ = ("_points", "_index", "_dim", "_u", "_adjacency", "_closed_masks", "_path_tables")

    def __init__(self, points: Iterable[Iterable[int]], u: int = 1, dim: Optional[int] = None):
        pts = sorted({as_point(p) for p in points})
        if not pts:
            raise DimensionError("a digital image needs at least one point")
        n = len(pts[0]) if dim is None else dim
        if not 1 <= n <= MAX_DIM:
            raise DimensionError(f"dimension {n} outside supported range 1..{MAX_DIM}")
        for p in pts:
            if len(p) != n:
                raise DimensionError(f"point {p} does not have dimension {n}")
        _check_u(u, n)
        self._points: Tuple[Point, ...] = tuple(pts)
        self._index = {p: i for i, p in enumerate(pts)}
        self._dim = n
        self._u = u
        self._adjacency = self._build_adjacency()
        self._closed_masks = None
        self._path_tables = {}

    @classmethod
    def from_cube(cls, lo: Sequence[int], hi: Sequence[int], u: int = 1) -> "DigitalImage":
        """The full box prod [lo_i, hi_i]."""
        if len(lo) != len(hi):
            raise DimensionError("cube bounds have different lengths")
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return cls(itertools.product(*ranges), u=u, dim=len(lo))

    def _build_adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        n, u, pts, index = self._dim, self._u, self._points, self._index
        if 3**n <= len(pts):
            offsets = [
                d for d in itertools.product((-1, 0, 1), repeat=n)
                if 0 < sum(1 for c in d if c) <= u
            ]
            adj = []
            for p in pts:
                nbrs = []
                for d in offsets:
                    j = index.get(tuple(a + b for a, b in zip(p, d)))
                    if j is not None:
                        nbrs.append(j)
                adj.append(tuple(sorted(nbrs)))
            return tuple(adj)
        adj = [[] for _ in pts]
        for i, j in itertools.combinations(range(len(pts)), 2):
            if adjacent(pts[i], pts[j], u):
                adj[i].append(j)
                adj[j].append(i)
        return tuple(tuple(a) for a in adj)

    @property
    def points(self) -> Tuple[Point, ...]:
        return self._points

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def u(self) -> int:
        return self._u

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Neighbor index lists, one per point in canonical order."""
        return self._adjacency

    @property
    def closed_masks(self) -> Tuple[int, ...]:
        """Bitmask of N*(x) for each point index x (bit j set for point j)."""
        if self._closed_masks is None:
            masks = []
            for i, nbrs in enumerate(self._adjacency):
                m = 1 << i
                for j in nbrs:
                    m |= 1 << j
                masks.append(m)
            self._closed_masks = tuple(masks)
        return self._closed_masks

    def index(self, p: Sequence[int]) -> int:
        """Canonical index of ``p``; raises PointNotInImage if absent."""
        try:
            return self._index[tuple(p)]
        except KeyError:
            raise PointNotInImage(f"point {tuple(p)} is not in the image") from None

    def with_adjacency(self, u: int) -> "DigitalImage":
        return DigitalImage(self._points, u=u, dim=self._dim)

    def path_table(self, source: int):
        """Cached breadth-first data from point index ``source``.

        Returns ``(dist, count, pred)`` where counts are capped at 2 and
        ``pred[j]`` is the predecessor of j on its shortest path from the
        source when that path is unique, else -1.
        """
        table = self._path_tables.get(source)
        if table is None:
            table = _bfs_counts(self._adjacency, source, cap=2)
            self._path_tables[source] = table
        return table

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, p) -> bool:
        try:
            return tuple(p) in self._index
        except TypeError:
            return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, DigitalImage):
            return NotImplemented
        return self._u == other._u and self._points == other._points

    def __hash__(self) -> int:
        return hash((self._u, self._points))

    def __repr__(self) -> str:
        return f"DigitalImage(dim={self._dim}, u={self._u}, size={len(self._points)})"


def _bfs_counts(adjacency, source: int, cap: Optional[int]):
    n = len(adjacency)
    dist = [-1] * n
    count = [0] * n
    pred = [-1] * n
    dist[source] = 0
    count[source] = 1
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adjacency[x]:
            if dist[y] == -1:
                dist[y] = dx
                count[y] = count[x]
                pred[y] = x
                queue.append(y)
            elif dist[y] == dx:
                c = count[y] + count[x]
                count[y] = c if cap is None else min(c, cap)
                pred[y] = -1
    for y in range(n):
        if count[y] != 1:
            pred[y] = -1
    return dist, count, pred


def _require(X: DigitalImage, x: Sequence[int]) -> int:
    return X.index(x)


def neighbors(X: DigitalImage, x: Sequence[int]) -> set:
    """N(x): the points of X adjacent to ``x``."""
    i = _require(X, x)
    return {X.points[j] for j in X.adjacency[i]}


def closed_neighbors(X: DigitalImage, x: Sequence[int]) -> set:
    """N*(x) = N(x) together with x itself."""
    out = neighbors(X, x)
    out.add(tuple(x))
    return out


def boundary(X: DigitalImage) -> set:
    """Points of X with a c_1-neighbor outside X.

    Always c_1 against the complement, whatever ``X.u`` is.
    """
    out = set()
    for p in X.points:
        for k in range(X.dim):
            for step in (-1, 1):
                q = p[:k] + (p[k] + step,) + p[k + 1:]
                if q not in X:
                    out.add(p)
                    break
            else:
                continue
            break
    return out


def is_connected(X: DigitalImage) -> bool:
    dist = _bfs_counts(X.adjacency, 0, cap=1)[0]
    return all(d >= 0 for d in dist)


def connected_components(X: DigitalImage):
    """List of components, each a sorted list of point indices."""
    seen = [False] * len(X)
    comps = []
    for s in range(len(X)):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in X.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class PathResult:
    """Shortest-path data between two points.

    ``distance`` is ``math.inf`` when the points lie in different
    components. ``unique_path`` is given only when exactly one shortest
    path exists.
    """

    distance: float
    shortest_path_count: int
    unique_path: Optional[Tuple[Point, ...]] = None

    @property
    def is_unique(self) -> bool:
        return self.shortest_path_count == 1


def path_structure(X: DigitalImage, x: Sequence[int], y: Sequence[int], cap: Optional[int] = None) -> PathResult:
    """Distance, number of shortest paths, and the path itself when unique.

    ``cap`` bounds the reported count (``cap=2`` reads as "two or more");
    by default the exact count is returned.
    """
    i, j = _require(X, x), _require(X, y)
    dist, count, pred = _bfs_counts(X.adjacency, i, cap)
    if dist[j] < 0:
        return PathResult(math.inf, 0, None)
    if count[j] != 1:
        return PathResult(dist[j], count[j], None)
    path = [j]
    while path[-1] != i:
        path.append(pred[path[-1]])
    return PathResult(dist[j], 1, tuple(X.points[k] for k in reversed(path)))
