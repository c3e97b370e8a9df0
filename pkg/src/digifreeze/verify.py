"""Deciding whether a set freezes a digital image.

The search looks for a continuous self-map that fixes A but is not the
identity. Continuity is a binary constraint f(y) in N*(f(x)) for every
adjacent pair (x, y), so the problem is a CSP over X with domains kept as
integer bitmasks (bit j = point j of the image). On top of the continuity
propagation, these extra rules can be switched off one by one:

``arc``
    full arc consistency; without it only singleton domains propagate
    (plain forward checking).
``distance``
    f(x) stays within d(x, a) of every a in A.
``geodesic``
    two fixed points joined by a unique shortest path fix the whole path.
``pulling``
    a point pushed past its neighbor along an axis drags the neighbor.
``interior``
    a point whose axis rays reach fixed points on both sides is fixed.
``close_neighbor``
    a point with a close neighbor that is missing from A gives an
    immediate witness.

Every rule is sound, so toggling only changes speed, never the verdict.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .construct import mandatory_certificates, close_neighbor_witness
from .errors import InconclusiveError, NotFrozenError, PointNotInImage, DigifreezeError
from .lattice import DigitalImage, Point
from .maps import SelfMap, enumerate_continuous_selfmaps, is_continuous

log = logging.getLogger(__name__)

RULES = ("arc", "distance", "geodesic", "pulling", "interior", "close_neighbor")
DEFAULT_BUDGET = 10**7


class Status(str, Enum):
    FROZEN = "frozen"
    NOT_FROZEN = "not_frozen"


@dataclass
class SearchStats:
    nodes: int = 0
    seeds: int = 0
    prunings: Dict[str, int] = field(default_factory=lambda: dict.fromkeys(RULES, 0))
    certificate: str = "search"

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.seeds += other.seeds
        for k, v in other.prunings.items():
            self.prunings[k] = self.prunings.get(k, 0) + v

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "seeds": self.seeds,
            "prunings": dict(self.prunings),
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class VerifyOutcome:
    status: Status
    witness: Optional[SelfMap]
    stats: SearchStats

    @property
    def frozen(self) -> bool:
        return self.status is Status.FROZEN


class DomainTable:
    """Candidate images per point; an empty entry means the branch is dead."""

    def __init__(self, image: DigitalImage, masks: Sequence[int]):
        self.image = image
        self.masks = list(masks)

    def values(self, p: Sequence[int]) -> set:
        return set(_bits_points(self.image, self.masks[self.image.index(p)]))

    __getitem__ = values

    def is_fixed(self, p: Sequence[int]) -> bool:
        i = self.image.index(p)
        return self.masks[i] == 1 << i

    def fixed_points(self) -> set:
        pts = self.image.points
        return {pts[i] for i, m in enumerate(self.masks) if m == 1 << i}

    @property
    def infeasible(self) -> bool:
        return any(m == 0 for m in self.masks)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _bits_points(X: DigitalImage, mask: int):
    return [X.points[j] for j in _bits(mask)]


def _resolve_rules(rules=None, disabled: Iterable[str] = ()) -> frozenset:
    chosen = set(RULES if rules is None else rules)
    unknown = (chosen | set(disabled)) - set(RULES)
    if unknown:
        raise DigifreezeError(f"unknown pruning rule(s): {', '.join(sorted(unknown))}")
    return frozenset(chosen - set(disabled))


def check_witness(X: DigitalImage, A: Iterable[Sequence[int]], f: SelfMap) -> bool:
    """True iff f is a continuous non-identity self-map of X fixing A."""
    if f.image != X or not is_continuous(f) or f.is_identity():
        return False
    return all(f(a) == tuple(a) for a in A)


class _State:
    __slots__ = ("doms", "fixed")

    def __init__(self, doms: List[int], fixed: int):
        self.doms = doms
        self.fixed = fixed

    def copy(self) -> "_State":
        return _State(self.doms[:], self.fixed)


class _Engine:
    """Propagation and backtracking over one image with a fixed rule set."""

    def __init__(self, X: DigitalImage, rules: frozenset, budget: int, stats: SearchStats):
        self.X = X
        self.n = len(X)
        self.full = (1 << self.n) - 1
        self.adj = X.adjacency
        self.closed = X.closed_masks
        self.rules = rules
        self.budget = budget
        self.stats = stats
        self._support_cache: Dict[int, int] = {}
        if "pulling" in rules or "interior" in rules:
            self._build_axis_tables()

    # -- precomputation -------------------------------------------------

    def _build_axis_tables(self) -> None:
        X, dim = self.X, self.X.dim
        pts = X.points
        self.lo = [min(p[k] for p in pts) for k in range(dim)]
        self.hi = [max(p[k] for p in pts) for k in range(dim)]
        # le[k][c - lo[k]] = points with coordinate k <= c
        self.le = []
        for k in range(dim):
            by_value = [0] * (self.hi[k] - self.lo[k] + 1)
            for i, p in enumerate(pts):
                by_value[p[k] - self.lo[k]] |= 1 << i
            acc, table = 0, []
            for m in by_value:
                acc |= m
                table.append(acc)
            self.le.append(table)
        # pulling pairs: (neighbor, axis, +1 if neighbor is ahead on the axis else -1)
        self.axis_pairs = []
        for i, p in enumerate(pts):
            pairs = []
            for j in self.adj[i]:
                q = pts[j]
                for k in range(dim):
                    if q[k] != p[k]:
                        pairs.append((j, k, q[k] - p[k]))
            self.axis_pairs.append(pairs)
        self._rays = None

    def mask_le(self, k: int, c: int) -> int:
        if c < self.lo[k]:
            return 0
        if c >= self.hi[k]:
            return self.full
        return self.le[k][c - self.lo[k]]

    def mask_ge(self, k: int, c: int) -> int:
        return self.full & ~self.mask_le(k, c - 1)

    def rays(self):
        """For each point and axis, the contiguous runs of X below and above it."""
        if self._rays is None:
            X, pts = self.X, self.X.points
            rays = []
            for p in pts:
                per_axis = []
                for k in range(X.dim):
                    sides = []
                    for step in (-1, 1):
                        run = []
                        c = p[k] + step
                        while True:
                            q = p[:k] + (c,) + p[k + 1:]
                            j = X._index.get(q)
                            if j is None:
                                break
                            run.append(j)
                            c += step
                        sides.append(run)
                    per_axis.append(sides)
                rays.append(per_axis)
            self._rays = rays
        return self._rays

    # -- propagation ----------------------------------------------------

    def support(self, dom: int) -> int:
        cached = self._support_cache.get(dom)
        if cached is not None:
            return cached
        closed = self.closed
        out = 0
        for j in _bits(dom):
            out |= closed[j]
            if out == self.full:
                break
        if len(self._support_cache) > 200_000:
            self._support_cache.clear()
        self._support_cache[dom] = out
        return out

    def initial_state(self, fixed_idx: Iterable[int]) -> _State:
        doms = [self.full] * self.n
        for a in fixed_idx:
            doms[a] = 1 << a
        # fixed bits are set by propagate() so that every rule sees them
        return _State(doms, 0)

    def apply_distance(self, state: _State, sources: Iterable[int]) -> bool:
        doms = state.doms
        pruned = 0
        for a in sources:
            dist = self.X.path_table(a)[0]
            radius = max(dist)
            balls = [0] * (radius + 1)
            for j, d in enumerate(dist):
                if d >= 0:
                    balls[d] |= 1 << j
            for r in range(1, radius + 1):
                balls[r] |= balls[r - 1]
            for x, d in enumerate(dist):
                if d < 0:
                    continue
                nd = doms[x] & balls[d]
                if nd != doms[x]:
                    pruned += 1
                    doms[x] = nd
                    if nd == 0:
                        return False
        self.stats.prunings["distance"] += pruned
        return True

    def propagate(self, state: _State, changed: Iterable[int]) -> bool:
        """Run every enabled rule to a fixpoint. False means a domain emptied."""
        doms = state.doms
        rules = self.rules
        use_arc = "arc" in rules
        use_pull = "pulling" in rules
        use_geo = "geodesic" in rules
        use_int = "interior" in rules
        prunings = self.stats.prunings
        adj, closed = self.adj, self.closed
        queue = list(dict.fromkeys(changed))
        queued = set(queue)
        new_fixed = [x for x in queue if doms[x] == 1 << x and not (state.fixed >> x) & 1]
        dirty = False

        def restrict(y: int, mask: int, rule: str) -> bool:
            old = doms[y]
            nd = old & mask
            if nd == old:
                return True
            prunings[rule] += 1
            if nd == 0:
                doms[y] = 0
                return False
            doms[y] = nd
            if y not in queued:
                queued.add(y)
                queue.append(y)
            if nd == 1 << y and not (state.fixed >> y) & 1:
                new_fixed.append(y)
            return True

        while True:
            while queue:
                x = queue.pop()
                queued.discard(x)
                d = doms[x]
                if d & (d - 1) == 0:
                    sup = closed[d.bit_length() - 1]
                elif use_arc:
                    sup = self.support(d)
                else:
                    sup = self.full
                if sup != self.full:
                    for y in adj[x]:
                        if not restrict(y, sup, "arc"):
                            return False
                if use_pull:
                    for y, k, step in self.axis_pairs[x]:
                        c = self.X.points[x][k]
                        if step < 0:
                            # y sits behind x on axis k
                            if d & ~self.mask_ge(k, c + 1) == 0:
                                if not restrict(y, self.mask_ge(k, c), "pulling"):
                                    return False
                            if d & ~self.mask_ge(k, c) == 0:
                                if not restrict(y, self.mask_ge(k, c - 1), "pulling"):
                                    return False
                        else:
                            if d & ~self.mask_le(k, c - 1) == 0:
                                if not restrict(y, self.mask_le(k, c), "pulling"):
                                    return False
                            if d & ~self.mask_le(k, c) == 0:
                                if not restrict(y, self.mask_le(k, c + 1), "pulling"):
                                    return False
            if new_fixed:
                batch = new_fixed[:]
                new_fixed.clear()
                for x in batch:
                    state.fixed |= 1 << x
                dirty = True
                if use_geo:
                    for x in batch:
                        if not self._geodesic(state, x, restrict):
                            return False
                continue
            if use_int and dirty:
                dirty = False
                if not self._interior(state, restrict):
                    return False
                continue
            return True

    def _geodesic(self, state: _State, x: int, restrict) -> bool:
        dist, count, pred = self.X.path_table(x)
        doms = state.doms
        for y in _bits(state.fixed):
            if count[y] != 1 or dist[y] < 2:
                continue
            z = pred[y]
            while z != x:
                if doms[z] != 1 << z:
                    if not restrict(z, 1 << z, "geodesic"):
                        return False
                    state.fixed |= 1 << z
                z = pred[z]
        return True

    def _interior(self, state: _State, restrict) -> bool:
        rays = self.rays()
        fixed = state.fixed
        pts = self.X.points
        for x in range(self.n):
            if (fixed >> x) & 1:
                continue
            mask = self.full
            for k, (below, above) in enumerate(rays[x]):
                c = pts[x][k]
                if any((fixed >> j) & 1 for j in below):
                    mask &= self.mask_le(k, c)
                if any((fixed >> j) & 1 for j in above):
                    mask &= self.mask_ge(k, c)
            if mask != self.full and not restrict(x, mask, "interior"):
                return False
        return True

    # -- search ---------------------------------------------------------

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.budget:
            raise InconclusiveError(
                f"node budget of {self.budget} exhausted before a verdict", self.stats
            )

    def complete(self, state: _State) -> Optional[List[int]]:
        """Extend the state to a full continuous assignment, or None."""
        stack = [(state, None)]
        while stack:
            st, values = stack[-1]
            if values is None:
                var, best = -1, self.n + 1
                for i, d in enumerate(st.doms):
                    if d & (d - 1):
                        size = d.bit_count()
                        if size < best:
                            var, best = i, size
                            if size == 2:
                                break
                if var < 0:
                    return [d.bit_length() - 1 for d in st.doms]
                d = st.doms[var]
                order = [var] if (d >> var) & 1 else []
                order += [v for v in _bits(d) if v != var]
                values = iter(order)
                stack[-1] = (st, (var, values))
                continue
            var, it = values
            v = next(it, None)
            if v is None:
                stack.pop()
                continue
            self._tick()
            child = st.copy()
            child.doms[var] = 1 << v
            if self.propagate(child, [var]):
                stack.append((child, None))
        return None

    def try_seed(self, root: _State, x: int, v: int) -> Optional[List[int]]:
        self.stats.seeds += 1
        self._tick()
        trial = root.copy()
        trial.doms[x] = 1 << v
        if not self.propagate(trial, [x]):
            return None
        return self.complete(trial)


# worker-process state for parallel seed evaluation
_WORKER: Optional[_Engine] = None


def _worker_init(X, rules, budget):
    global _WORKER
    _WORKER = _Engine(X, rules, budget, SearchStats())


def _worker_seed(doms, fixed, x, v, budget):
    eng = _WORKER
    eng.stats = SearchStats()
    eng.budget = budget
    try:
        sol = eng.try_seed(_State(list(doms), fixed), x, v)
    except InconclusiveError:
        return v, None, eng.stats, True
    return v, sol, eng.stats, False


def _default_budget() -> int:
    env = os.environ.get("DIGIFREEZE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _as_index_set(X: DigitalImage, A) -> List[int]:
    out = set()
    for a in A:
        try:
            out.add(X.index(a))
        except PointNotInImage:
            raise PointNotInImage(f"point {tuple(a)} of the candidate set is not in the image") from None
    return sorted(out)


def verify_freezing(
    X: DigitalImage,
    A: Iterable[Sequence[int]],
    *,
    rules: Optional[Iterable[str]] = None,
    disabled: Iterable[str] = (),
    budget: Optional[int] = None,
    threads: int = 1,
) -> VerifyOutcome:
    """Decide whether A is a freezing set for X under X's adjacency.

    Returns FROZEN only after every candidate non-identity map has been
    ruled out; otherwise NOT_FROZEN with a checked witness. Raises
    InconclusiveError when the node budget runs out.
    """
    active = _resolve_rules(rules, disabled)
    budget = _default_budget() if budget is None else budget
    fixed_idx = _as_index_set(X, A)
    stats = SearchStats()
    A_pts = [X.points[i] for i in fixed_idx]

    def done_not_frozen(assignment, certificate):
        f = SelfMap(X, assignment)
        if not check_witness(X, A_pts, f):
            raise AssertionError("search produced an invalid witness")
        stats.certificate = certificate
        return VerifyOutcome(Status.NOT_FROZEN, f, stats)

    if "close_neighbor" in active:
        in_a = set(fixed_idx)
        for p, q in mandatory_certificates(X).items():
            if X.index(p) not in in_a:
                stats.prunings["close_neighbor"] += 1
                return done_not_frozen(close_neighbor_witness(X, p, q).assignment, "close_neighbor")

    eng = _Engine(X, active, budget, stats)
    root = eng.initial_state(fixed_idx)
    if "distance" in active and not eng.apply_distance(root, fixed_idx):
        raise AssertionError("distance rule emptied a domain at the root")
    if not eng.propagate(root, range(len(X))):
        raise AssertionError("root propagation failed although the identity is a solution")

    # seeds: far-from-A points first; unreachable points count as infinitely far
    far = [math.inf] * len(X)
    for a in fixed_idx:
        dist = X.path_table(a)[0]
        for x, d in enumerate(dist):
            if d >= 0:
                far[x] = d if far[x] == math.inf else min(far[x], d)
    order = sorted(range(len(X)), key=lambda x: (-far[x], x))

    pool = None
    if threads > 1:
        pool = ProcessPoolExecutor(max_workers=threads, initializer=_worker_init,
                                   initargs=(X, active, budget))
    try:
        for x in order:
            if root.doms[x] == 1 << x:
                continue
            if pool is None:
                for v in list(_bits(root.doms[x])):
                    if v == x or not (root.doms[x] >> v) & 1:
                        continue
                    sol = eng.try_seed(root, x, v)
                    if sol is not None:
                        return done_not_frozen(sol, "search")
                    root.doms[x] &= ~(1 << v)
                    if not eng.propagate(root, [x]):
                        raise AssertionError("root propagation failed after a refuted seed")
            else:
                sol = _parallel_seeds(pool, eng, root, x, threads)
                if sol is not None:
                    return done_not_frozen(sol, "search")
                root.doms[x] = 1 << x
                if not eng.propagate(root, [x]):
                    raise AssertionError("root propagation failed after refuting all seeds")
            log.debug("point %s is forced fixed", X.points[x])
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)
    return VerifyOutcome(Status.FROZEN, None, stats)


def _parallel_seeds(pool, eng: _Engine, root: _State, x: int, threads: int):
    pending = {}
    values = [v for v in _bits(root.doms[x]) if v != x]
    found = {}
    it = iter(values)

    def submit():
        v = next(it, None)
        if v is None:
            return False
        remaining = eng.budget - eng.stats.nodes
        pending[pool.submit(_worker_seed, root.doms, root.fixed, x, v, remaining)] = v
        return True

    for _ in range(threads):
        if not submit():
            break
    while pending:
        finished, _ = wait(pending, return_when=FIRST_COMPLETED)
        for fut in finished:
            pending.pop(fut)
            v, sol, wstats, exhausted = fut.result()
            eng.stats.merge(wstats)
            if exhausted or eng.stats.nodes > eng.budget:
                raise InconclusiveError(
                    f"node budget of {eng.budget} exhausted before a verdict", eng.stats
                )
            if sol is not None:
                found[v] = sol
        if found:
            for fut in pending:
                fut.cancel()
            return found[min(found)]
        while len(pending) < threads and submit():
            pass
    return None


def propagate(
    X: DigitalImage,
    A: Iterable[Sequence[int]],
    partial: Optional[Dict] = None,
    *,
    rules: Optional[Iterable[str]] = None,
    disabled: Iterable[str] = (),
) -> DomainTable:
    """Domains left after fixing A, applying ``partial`` and propagating.

    An empty domain in the result means no continuous map extends the
    given assignment.
    """
    active = _resolve_rules(rules, disabled)
    fixed_idx = _as_index_set(X, A)
    eng = _Engine(X, active, DEFAULT_BUDGET, SearchStats())
    state = eng.initial_state(fixed_idx)
    changed = list(range(len(X)))
    for p, q in (partial or {}).items():
        i, j = X.index(p), X.index(q)
        state.doms[i] &= 1 << j
    if any(d == 0 for d in state.doms):
        return DomainTable(X, state.doms)
    if "distance" in active and not eng.apply_distance(state, fixed_idx):
        return DomainTable(X, state.doms)
    eng.propagate(state, changed)
    return DomainTable(X, state.doms)


def oracle_verify(X: DigitalImage, A: Iterable[Sequence[int]], method: str = "backtrack") -> VerifyOutcome:
    """Decide freezing status by plain enumeration of continuous self-maps."""
    A = [tuple(a) for a in A]
    _as_index_set(X, A)
    stats = SearchStats(certificate="oracle")
    for f in enumerate_continuous_selfmaps(X, A, method=method):
        stats.nodes += 1
        if not f.is_identity():
            return VerifyOutcome(Status.NOT_FROZEN, f, stats)
    return VerifyOutcome(Status.FROZEN, None, stats)


@dataclass(frozen=True)
class MinimalityReport:
    """Per-point outcome of removing each point of a freezing set.

    ``witnesses[a]`` is a map certifying that A minus a does not freeze,
    or None when A minus a still freezes (a is redundant).
    """

    minimal: bool
    witnesses: Dict[Point, Optional[SelfMap]]
    sources: Dict[Point, str]

    @property
    def redundant(self) -> List[Point]:
        return sorted(p for p, w in self.witnesses.items() if w is None)

    def __bool__(self) -> bool:
        return self.minimal


CertificateProvider = Callable[[DigitalImage, set, Point], Optional[SelfMap]]


def is_minimal_freezing(
    X: DigitalImage,
    A: Iterable[Sequence[int]],
    certificates: Optional[CertificateProvider] = None,
    **search,
) -> MinimalityReport:
    """Check that no point of the freezing set A can be dropped.

    ``certificates`` may supply a candidate witness for each removal; it is
    accepted only after validation, otherwise the search runs.
    """
    A = {tuple(a) for a in A}
    start = verify_freezing(X, A, **search)
    if not start.frozen:
        raise NotFrozenError("the given set is not a freezing set", start)
    witnesses, sources = {}, {}
    for a in sorted(A):
        reduced = A - {a}
        if certificates is not None:
            g = certificates(X, reduced, a)
            if g is not None and check_witness(X, reduced, g):
                witnesses[a], sources[a] = g, "certificate"
                continue
        out = verify_freezing(X, reduced, **search)
        witnesses[a] = out.witness
        sources[a] = out.stats.certificate
    return MinimalityReport(all(w is not None for w in witnesses.values()), witnesses, sources)


def greedy_minimize(X: DigitalImage, A: Iterable[Sequence[int]], **search) -> set:
    """Drop points of A in canonical order while the rest still freezes X.

    One pass suffices: a point kept once stays necessary for every subset
    of the set it was tested against.
    """
    current = {tuple(a) for a in A}
    start = verify_freezing(X, current, **search)
    if not start.frozen:
        raise NotFrozenError("the given set is not a freezing set", start)
    for a in sorted(current):
        if verify_freezing(X, current - {a}, **search).frozen:
            current.discard(a)
    return current
