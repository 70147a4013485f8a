"""Depth-truncated infinite paths, shift maps and the *-commuting lift.

An infinite path is replaced by its restriction to the box ``[0, N]``, which
is itself a finite path of degree ``N``.  Shifting by ``p`` drops the first
``p`` steps (``depth`` shrinks by ``p``) and prepending a path of degree ``p``
grows it by ``p``.

The *-commute check mirrors the classification argument exactly.  Every
pair ``(y, z)`` with ``shift(y, e_i) == shift(z, e_j) == w`` has the form
``y = e^i w`` and ``z = e^j w``, and any common lift ``x`` of depth
``depth(y) + e_j`` is ``f^j e^i w`` for a coalignment witness ``(f^i, f^j)``
of the edge pair.  So lifts correspond one-to-one with witnesses, which is
why uniqueness at finite depth is decided soundly here.  The reduction is
cross-checked against :func:`star_lift_bruteforce`, which searches all paths
of the lift's depth.

Two backends are supported: basic data (paths are ``PathFn`` value tables)
and generic skeletons (paths are ``GridPath`` edge grids).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import basic_data as bdm
from . import skeleton as sk
from .verdict import Verdict

Degree = tuple[int, ...]
FinitePath = Union[bdm.PathFn, sk.GridPath]


@dataclass(frozen=True)
class BasicDataBackend:
    bd: bdm.BasicData
    k: int = 2

    def paths(self, n: Degree) -> list[bdm.PathFn]:
        return bdm.enumerate_paths(self.bd, tuple(n))

    def segment(self, x: bdm.PathFn, m: Degree, n: Degree) -> bdm.PathFn:
        return bdm.segment(x, tuple(m), tuple(n))

    def compose(self, a: bdm.PathFn, b: bdm.PathFn) -> bdm.PathFn:
        return bdm.compose(self.bd, a, b)

    def edges_with_source(self, v: bdm.PathFn, color: int) -> list[bdm.PathFn]:
        return [e for e in bdm.enumerate_edges(self.bd, color) if e.source == v]

    def witnesses(self, e_i: bdm.PathFn, e_j: bdm.PathFn) -> list[tuple[bdm.PathFn, bdm.PathFn]]:
        return bdm.coalign_witnesses(self.bd, e_i, e_j)


@dataclass(frozen=True)
class SkeletonBackend:
    graph: sk.KGraphSkeleton

    @property
    def k(self) -> int:
        return self.graph.k

    def paths(self, n: Degree) -> list[sk.GridPath]:
        return sk.grid_paths(self.graph, n)

    def segment(self, x: sk.GridPath, m: Degree, n: Degree) -> sk.GridPath:
        return sk.grid_segment(x, m, n)

    def compose(self, a: sk.GridPath, b: sk.GridPath) -> sk.GridPath:
        return sk.grid_compose(self.graph, a, b)

    def edges_with_source(self, v: sk.GridPath, color: int) -> list[sk.GridPath]:
        return [sk.edge_path(self.graph, e) for e in self.graph.edges_of(v.range, color)]

    def witnesses(self, e_i: sk.GridPath, e_j: sk.GridPath) -> list[tuple[sk.GridPath, sk.GridPath]]:
        pairs = sk.coalign_witness(self.graph, e_i.edges[0], e_j.edges[0])
        return [(sk.edge_path(self.graph, a), sk.edge_path(self.graph, b)) for a, b in pairs]


Backend = Union[BasicDataBackend, SkeletonBackend]


def backend_for(graph) -> Backend:
    if isinstance(graph, (BasicDataBackend, SkeletonBackend)):
        return graph
    if isinstance(graph, bdm.BasicData):
        return BasicDataBackend(graph)
    if isinstance(graph, sk.KGraphSkeleton):
        return SkeletonBackend(graph)
    raise TypeError(f"no path backend for {type(graph).__name__}")


@dataclass(frozen=True, order=True)
class RectPath:
    backend: Backend
    path: FinitePath

    @property
    def depth(self) -> Degree:
        return tuple(self.path.degree)

    @property
    def range(self) -> FinitePath:
        return self.backend.segment(self.path, self._zero, self._zero)

    @property
    def _zero(self) -> Degree:
        return (0,) * self.backend.k

    def __str__(self) -> str:
        return str(self.path)


def rect(graph, path: FinitePath) -> RectPath:
    return RectPath(backend_for(graph), path)


def unit(k: int, color: int) -> Degree:
    return sk.unit(k, color)


def _add(a, b) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def all_paths(graph, depth) -> list[RectPath]:
    backend = backend_for(graph)
    return [RectPath(backend, p) for p in backend.paths(tuple(depth))]


def segment(x: RectPath, m, n) -> FinitePath:
    return x.backend.segment(x.path, tuple(m), tuple(n))


def shift(x: RectPath, p) -> RectPath:
    p = tuple(p)
    if len(p) != len(x.depth) or any(a < 0 or a > d for a, d in zip(p, x.depth)):
        raise ValueError(f"cannot shift depth {x.depth} by {p}")
    return RectPath(x.backend, x.backend.segment(x.path, p, x.depth))


def prepend(lam: FinitePath, x: RectPath) -> RectPath:
    """The unique ``lam x``: shifting it by d(lam) gives back x."""
    if isinstance(lam, RectPath):
        lam = lam.path
    return RectPath(x.backend, x.backend.compose(lam, x.path))


def compose(graph, a: FinitePath, b: FinitePath) -> FinitePath:
    return backend_for(graph).compose(a, b)


def _check_lift_inputs(y: RectPath, z: RectPath, i: int, j: int) -> int:
    if i == j:
        raise ValueError("star_lift needs two distinct colors")
    if y.backend != z.backend:
        raise ValueError("y and z live on different graphs")
    k = y.backend.k
    if not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"colors must lie in 1..{k}")
    ei, ej = unit(k, i), unit(k, j)
    base = _sub(y.depth, ei)
    if min(base) < 0 or base != _sub(z.depth, ej) or min(_sub(z.depth, ej)) < 0:
        raise ValueError(f"depths {y.depth} and {z.depth} do not share a tail after e_{i}, e_{j}")
    if shift(y, ei) != shift(z, ej):
        raise ValueError(f"shift(y, e_{i}) != shift(z, e_{j})")
    return k


def star_lift(y: RectPath, z: RectPath, i: int, j: int) -> list[RectPath]:
    """All x with shift(x, e_j) == y and shift(x, e_i) == z, built from witnesses."""
    k = _check_lift_inputs(y, z, i, j)
    ei, ej = unit(k, i), unit(k, j)
    zero = (0,) * k
    edge_i = y.backend.segment(y.path, zero, ei)
    edge_j = z.backend.segment(z.path, zero, ej)
    witnesses = y.backend.witnesses(edge_i, edge_j)
    lifts = []
    for _, f_j in witnesses:
        x = prepend(f_j, y)
        if shift(x, ej) != y or shift(x, ei) != z:
            raise RuntimeError("lift does not satisfy both shift equations")
        lifts.append(x)
    assert len(set(lifts)) == len(witnesses)
    return sorted(lifts)


def star_lift_bruteforce(y: RectPath, z: RectPath, i: int, j: int) -> list[RectPath]:
    """Same contract as :func:`star_lift`, by searching every path of the lift's depth."""
    k = _check_lift_inputs(y, z, i, j)
    ei, ej = unit(k, i), unit(k, j)
    depth = _add(y.depth, ej)
    return sorted(
        x for x in all_paths(y.backend, depth) if shift(x, ej) == y and shift(x, ei) == z
    )


def verify_star_commute(graph, i: int, j: int, depth) -> Verdict:
    """Check that shift by e_i and shift by e_j *-commute on paths with tails of ``depth``.

    Enumerates every tail w of the given depth and every edge pair
    (e^i, e^j) into r(w), and demands exactly one lift for (e^i w, e^j w).
    """
    backend = backend_for(graph)
    k = backend.k
    depth = tuple(depth)
    zero = (0,) * k
    checked = 0
    for tail in backend.paths(depth):
        w = RectPath(backend, tail)
        v = backend.segment(tail, zero, zero)
        for e_i in backend.edges_with_source(v, i):
            y = prepend(e_i, w)
            for e_j in backend.edges_with_source(v, j):
                z = prepend(e_j, w)
                lifts = star_lift(y, z, i, j)
                checked += 1
                if len(lifts) != 1:
                    return Verdict(
                        False,
                        {"y": y, "z": z, "lifts": lifts, "colors": (i, j)},
                        {"instances": checked},
                    )
    return Verdict(True, None, {"instances": checked})


def verify_all_pairs(graph, depth) -> Verdict:
    """verify_star_commute over every color pair i < j."""
    backend = backend_for(graph)
    total = 0
    for i in range(1, backend.k + 1):
        for j in range(i + 1, backend.k + 1):
            result = verify_star_commute(backend, i, j, depth)
            total += result.details["instances"]
            if not result:
                result.details["instances"] = total
                return result
    return Verdict(True, None, {"instances": total})


def preimage_cylinder_check(graph, lam: FinitePath, i: int, depth) -> Verdict:
    """Finite check that the preimage of Z(lam) under shift-by-e_i is the disjoint union of Z(e lam).

    ``depth`` is the depth of the paths being shifted into Z(lam); the
    preimages are enumerated at depth ``depth + e_i``.
    """
    backend = backend_for(graph)
    k = backend.k
    depth = tuple(depth)
    ei, zero = unit(k, i), (0,) * k
    d_lam = tuple(lam.degree)
    if any(a > b for a, b in zip(d_lam, depth)):
        raise ValueError(f"depth {depth} is shallower than the cylinder word {d_lam}")
    universe = backend.paths(_add(depth, ei))
    preimage = {x for x in universe if backend.segment(x, ei, _add(ei, d_lam)) == lam}

    head = _add(ei, d_lam)
    r_lam = backend.segment(lam, zero, zero)
    cylinders = []
    for e in backend.edges_with_source(r_lam, i):
        word = backend.compose(e, lam)
        cylinders.append((e, {x for x in universe if backend.segment(x, zero, head) == word}))

    seen: set = set()
    for e, cyl in cylinders:
        overlap = seen & cyl
        if overlap:
            return Verdict(False, {"reason": "cylinders overlap", "edge": e, "path": min(overlap)})
        seen |= cyl
    if seen != preimage:
        extra = sorted(seen - preimage)
        missing = sorted(preimage - seen)
        return Verdict(
            False,
            {"reason": "union differs from preimage", "extra": extra[:1], "missing": missing[:1]},
        )
    return Verdict(
        True,
        None,
        {"cylinders": len(cylinders), "preimage_size": len(preimage), "universe": len(universe)},
    )


def shift_surjective(graph, i: int, depth) -> Verdict:
    """Every path of depth ``depth - e_i`` is hit by shift-by-e_i from depth ``depth``."""
    backend = backend_for(graph)
    depth = tuple(depth)
    ei = unit(backend.k, i)
    target = _sub(depth, ei)
    if min(target) < 0:
        raise ValueError(f"depth {depth} has no e_{i} step")
    image = {backend.segment(x, ei, depth) for x in backend.paths(depth)}
    for y in backend.paths(target):
        if y not in image:
            return Verdict(False, {"unreached": y})
    return Verdict(True, None, {"targets": len(backend.paths(target))})
