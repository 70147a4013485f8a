"""2-graphs generated by basic data (tile, alphabet size, trace, rule).

A vertex is a colouring ``v: T -> Z/q`` of the tile satisfying the trace
congruence ``sum_i w(i) v(i) == t (mod q)``.  A path of degree ``n`` is a
colouring of ``T(n)``, the union of the translates ``T + m`` for
``0 <= m <= n``, whose restriction to every translate is a vertex.

Path values are stored densely as a tuple of ints in [0, q) following the
lexicographic order of ``T(n)``, which makes equality and hashing canonical.

Basic-data files are JSON::

    {"tile": [[0, 0], [1, 0], [0, 1]], "q": 2, "t": 0,
     "w": [[[0, 0], 1], [[1, 0], 1], [[0, 1], 1]]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

from . import skeleton as sk
from .modular import Modulus, Residue, inverse, solve_linear
from .verdict import ValidationReport, Verdict

Point = tuple[int, int]
E1: Point = (1, 0)
E2: Point = (0, 1)
ORIGIN: Point = (0, 0)
SQUARE: Point = (1, 1)


class BasicDataError(ValueError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class PropagationStall(RuntimeError):
    def __init__(self, stuck: Sequence[Point]):
        self.stuck = tuple(stuck)
        super().__init__(f"composition stalled; undetermined cells {list(self.stuck)}")


def _add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def _leq(a: Point, b: Point) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def box(n: Point) -> list[Point]:
    return [(a, b) for a in range(n[0] + 1) for b in range(n[1] + 1)]


@dataclass(frozen=True)
class Tile:
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple(sorted({(int(a), int(b)) for a, b in self.points}))
        object.__setattr__(self, "points", pts)

    @property
    def corner(self) -> Point:
        """Componentwise join of the points."""
        return (max(p[0] for p in self.points), max(p[1] for p in self.points))

    def missing_below(self) -> Optional[tuple[Point, Point]]:
        """First (missing, witness) pair violating heredity, or None."""
        have = set(self.points)
        for p in self.points:
            for i in box(p):
                if i not in have:
                    return i, p
        return None

    def is_hereditary(self) -> bool:
        return self.missing_below() is None

    def __len__(self) -> int:
        return len(self.points)


@lru_cache(maxsize=None)
def domain(tile: Tile, n: Point) -> tuple[Point, ...]:
    """T(n) in lexicographic order."""
    return tuple(sorted({_add(i, m) for m in box(n) for i in tile.points}))


@lru_cache(maxsize=None)
def _index(tile: Tile, n: Point) -> dict[Point, int]:
    return {p: k for k, p in enumerate(domain(tile, n))}


@lru_cache(maxsize=None)
def _translates(tile: Tile, n: Point) -> tuple[tuple[int, ...], ...]:
    """For each 0 <= m <= n, positions in T(n) of T + m, aligned with tile.points."""
    idx = _index(tile, n)
    return tuple(tuple(idx[_add(i, m)] for i in tile.points) for m in box(n))


@lru_cache(maxsize=None)
def _segment_positions(tile: Tile, deg: Point, m: Point, n: Point) -> tuple[int, ...]:
    idx = _index(tile, deg)
    return tuple(idx[_add(m, i)] for i in domain(tile, _sub(n, m)))


@dataclass(frozen=True, order=True)
class PathFn:
    tile: Tile
    degree: Point
    values: tuple[int, ...]

    def __getitem__(self, point: Point) -> int:
        return self.values[_index(self.tile, self.degree)[point]]

    def as_dict(self) -> dict[Point, int]:
        return dict(zip(domain(self.tile, self.degree), self.values))

    @property
    def range(self) -> "PathFn":
        return segment(self, ORIGIN, ORIGIN)

    @property
    def source(self) -> "PathFn":
        return segment(self, self.degree, self.degree)

    def __str__(self) -> str:
        return "\n".join(
            [f"degree {self.degree}"] + [f"  {p} {v}" for p, v in self.as_dict().items()]
        )


@dataclass(frozen=True)
class BasicData:
    tile: Tile
    q: int
    t: int
    w: tuple[int, ...]  # aligned with tile.points

    @classmethod
    def build(cls, tile: Iterable[Sequence[int]], q: int, t: int, w: Mapping[Point, int] | int) -> "BasicData":
        """Convenience constructor; ``w`` is a point->value mapping or a constant."""
        tile = Tile(tuple(tuple(p) for p in tile))
        if isinstance(w, int):
            w = {p: w for p in tile.points}
        w = {tuple(p): v for p, v in w.items()}
        if set(w) != set(tile.points):
            extra = sorted(set(w) - set(tile.points))
            missing = sorted(set(tile.points) - set(w))
            raise BasicDataError(f"rule must be defined on exactly the tile (missing {missing}, extra {extra})", "w")
        return cls(tile, q, t % q, tuple(w[p] % q for p in tile.points))

    @property
    def modulus(self) -> Modulus:
        return Modulus(self.q)

    @property
    def trace(self) -> Residue:
        return self.modulus(self.t)

    @property
    def rule(self) -> dict[Point, Residue]:
        return {p: self.modulus(v) for p, v in zip(self.tile.points, self.w)}

    def weight(self, point: Point) -> int:
        return dict(zip(self.tile.points, self.w))[point]

    @cached_property
    def _zero_solutions(self) -> tuple[tuple[int, ...], ...]:
        # rhs -> solutions t0 of w(0) t0 == rhs
        m = self.modulus
        w0 = m(self.weight(ORIGIN))
        return tuple(tuple(r.value for r in solve_linear(w0, m(rhs))) for rhs in range(self.q))

    def is_path(self, path: PathFn) -> bool:
        if path.tile != self.tile or len(path.values) != len(domain(self.tile, path.degree)):
            return False
        if any(not 0 <= v < self.q for v in path.values):
            return False
        vals = path.values
        return all(
            sum(c * vals[p] for c, p in zip(self.w, cells)) % self.q == self.t
            for cells in _translates(self.tile, path.degree)
        )

    def path(self, degree: Point, values: Mapping[Point, int] | Sequence[int]) -> PathFn:
        """Build and check a path from a point->value mapping or dense values."""
        dom = domain(self.tile, tuple(degree))
        if isinstance(values, Mapping):
            if set(values) != set(dom):
                raise ValueError(f"values must cover exactly T{tuple(degree)}")
            values = [values[p] for p in dom]
        out = PathFn(self.tile, tuple(degree), tuple(v % self.q for v in values))
        if not self.is_path(out):
            raise ValueError("a translate of the tile violates the trace condition")
        return out


def validate_basic_data(bd: BasicData) -> ValidationReport:
    report = ValidationReport()
    if len(bd.w) != len(bd.tile.points):
        raise BasicDataError("rule must be defined on exactly the tile", "w")
    report.add("modulus", bd.q >= 2, f"q = {bd.q}")
    gap = bd.tile.missing_below()
    report.add(
        "hereditary",
        gap is None,
        "" if gap is None else f"{gap[0]} is missing although {gap[1]} is in the tile",
    )
    c1, c2 = bd.tile.corner
    report.add("corner_positive", c1 >= 1 and c2 >= 1, f"corner = {(c1, c2)}")
    if gap is None and c1 >= 1 and c2 >= 1 and bd.q >= 2:
        bad = [
            f"w{p} = {bd.weight(p)} shares a factor with {bd.q}"
            for p in ((c1, 0), (0, c2))
            if gcd(bd.weight(p), bd.q) != 1
        ]
        report.add("invertible_corners", not bad, "; ".join(bad))
    else:
        report.add("invertible_corners", False, "not checked: tile malformed")
    return report


def has_invertible_zero(bd: BasicData) -> bool:
    return gcd(bd.weight(ORIGIN), bd.q) == 1


def has_three_invertible_corners(bd: BasicData) -> bool:
    c1, c2 = bd.tile.corner
    if c1 < 1 or c2 < 1:
        return False
    return all(gcd(bd.weight(p), bd.q) == 1 for p in (ORIGIN, (c1, 0), (0, c2)))


# --------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=64)
def _search_plan(bd: BasicData, n: Point):
    """Per cell: the trace constraints whose last cell (in lexicographic order) it is."""
    cells = domain(bd.tile, n)
    plan: list[list[tuple[int, tuple[tuple[int, int], ...]]]] = [[] for _ in cells]
    for translate in _translates(bd.tile, n):
        last = max(translate)
        own = sum(c for c, p in zip(bd.w, translate) if p == last)
        others = tuple((c, p) for c, p in zip(bd.w, translate) if p != last)
        plan[last].append((own % bd.q, others))
    return plan


def enumerate_paths(bd: BasicData, n: Point) -> list[PathFn]:
    """Every path of degree ``n``, sorted by value table."""
    return list(_enumerate_paths(bd, tuple(n)))


@lru_cache(maxsize=64)
def _enumerate_paths(bd: BasicData, n: Point) -> tuple[PathFn, ...]:
    q, t = bd.q, bd.t
    plan = _search_plan(bd, n)
    size = len(plan)
    vals = [0] * size
    found: list[tuple[int, ...]] = []
    solver = {}

    def candidates(pos: int):
        cons = plan[pos]
        if not cons:
            return range(q)
        coef, others = cons[0]
        rhs = (t - sum(c * vals[p] for c, p in others)) % q
        key = (coef, rhs)
        if key not in solver:
            solver[key] = [r.value for r in solve_linear(Residue(coef, bd.modulus), Residue(rhs, bd.modulus))]
        return solver[key]

    def extend(pos: int) -> None:
        if pos == size:
            found.append(tuple(vals))
            return
        for v in candidates(pos):
            vals[pos] = v
            if all(
                (coef * v + sum(c * vals[p] for c, p in others)) % q == t
                for coef, others in plan[pos][1:]
            ):
                extend(pos + 1)

    extend(0)
    return tuple(PathFn(bd.tile, n, v) for v in sorted(found))


def enumerate_vertices(bd: BasicData) -> list[PathFn]:
    return enumerate_paths(bd, ORIGIN)


def enumerate_edges(bd: BasicData, direction: int) -> list[PathFn]:
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    return enumerate_paths(bd, E1 if direction == 1 else E2)


def paths_by_source(paths: Iterable[PathFn]) -> dict[PathFn, list[PathFn]]:
    out: dict[PathFn, list[PathFn]] = {}
    for p in paths:
        out.setdefault(p.source, []).append(p)
    return out


# --------------------------------------------------------------------------
# segments, square completion, composition


def segment(lam: PathFn, m: Point, n: Point) -> PathFn:
    m, n = tuple(m), tuple(n)
    if not (_leq(ORIGIN, m) and _leq(m, n) and _leq(n, lam.degree)):
        raise ValueError(f"segment bounds {m}, {n} not within 0 <= m <= n <= {lam.degree}")
    pos = _segment_positions(lam.tile, lam.degree, m, n)
    vals = lam.values
    return PathFn(lam.tile, _sub(n, m), tuple(vals[p] for p in pos))


@lru_cache(maxsize=None)
def _square_layout(tile: Tile):
    """Where each cell of T(e1+e2) takes its value from, given (e_b, e_r).

    Returns (zero_position, [(pos, r_index or None, b_index or None)]).
    """
    cells = domain(tile, SQUARE)
    r_idx, b_idx = _index(tile, E2), _index(tile, E1)
    layout = []
    for pos, i in enumerate(cells):
        if i == ORIGIN:
            continue
        from_r = r_idx[_sub(i, E1)] if i[0] > 0 else None
        from_b = b_idx[_sub(i, E2)] if i[1] > 0 else None
        layout.append((pos, from_r, from_b))
    return cells.index(ORIGIN), tuple(layout)


@lru_cache(maxsize=None)
def _origin_constraint(bd: BasicData) -> tuple[tuple[int, int], ...]:
    # (w(i), position in T(e1+e2)) for i in T \ {0}
    idx = _index(bd.tile, SQUARE)
    return tuple((c, idx[p]) for p, c in zip(bd.tile.points, bd.w) if p != ORIGIN)


def complete_square(bd: BasicData, e_b: PathFn, e_r: PathFn) -> list[PathFn]:
    """All paths lam of degree e1+e2 with lam(e1, e1+e2) = e_r and lam(e2, e1+e2) = e_b.

    The boundary is forced away from the origin; the origin value t0 ranges
    over the solutions of ``w(0) t0 == t - sum_{i != 0} w(i) lam(i)``.  An
    empty list means the pair has no commuting completion.
    """
    if e_b.degree != E1 or e_r.degree != E2:
        raise ValueError("complete_square expects an e1-edge and an e2-edge")
    if e_b.source != e_r.source:
        raise ValueError("edges do not share a source")
    zero, layout = _square_layout(bd.tile)
    vals = [0] * (len(layout) + 1)
    rv, bv = e_r.values, e_b.values
    for pos, from_r, from_b in layout:
        if from_r is not None:
            vals[pos] = rv[from_r]
            if from_b is not None and bv[from_b] != vals[pos]:
                raise RuntimeError(f"boundary not well defined at cell {domain(bd.tile, SQUARE)[pos]}")
        else:
            vals[pos] = bv[from_b]
    rhs = (bd.t - sum(c * vals[p] for c, p in _origin_constraint(bd))) % bd.q
    out = []
    for t0 in bd._zero_solutions[rhs]:
        vals[zero] = t0
        lam = PathFn(bd.tile, SQUARE, tuple(vals))
        if segment(lam, E1, SQUARE) != e_r or segment(lam, E2, SQUARE) != e_b:
            raise RuntimeError("completed square does not restrict to its boundary edges")
        out.append(lam)
    return out


@lru_cache(maxsize=256)
def _compose_plan(bd: BasicData, m: Point, n: Point):
    total = _add(m, n)
    idx = _index(bd.tile, total)
    from_mu = tuple(idx[p] for p in domain(bd.tile, m))
    from_nu = _segment_positions(bd.tile, total, m, total)
    known = set(from_mu) | set(from_nu)
    translates = _translates(bd.tile, total)
    steps = []
    progress = True
    while progress and len(known) < len(idx):
        progress = False
        for cells in translates:
            unknown = [k for k, p in enumerate(cells) if p not in known]
            if len(unknown) != 1:
                continue
            k = unknown[0]
            inv = inverse(bd.modulus(bd.w[k]))
            if inv is None:
                continue
            others = tuple((c, p) for j, (c, p) in enumerate(zip(bd.w, cells)) if j != k)
            steps.append((cells[k], inv.value, others))
            known.add(cells[k])
            progress = True
    if len(known) < len(idx):
        cells = domain(bd.tile, total)
        raise PropagationStall([cells[p] for p in range(len(cells)) if p not in known])
    return total, len(idx), from_mu, from_nu, tuple(steps), translates


def compose(bd: BasicData, mu: PathFn, nu: PathFn) -> PathFn:
    """The unique path lam with lam(0, d(mu)) = mu and lam(d(mu), d(mu)+d(nu)) = nu.

    Cells not covered by either factor are filled by propagation: a translate
    of the tile with a single unknown cell whose rule coefficient is a unit
    determines that cell.  Invertible corners guarantee this never stalls.
    """
    if mu.source != nu.range:
        raise ValueError("cannot compose: source of the first path is not the range of the second")
    total, size, from_mu, from_nu, steps, translates = _compose_plan(bd, mu.degree, nu.degree)
    q, t = bd.q, bd.t
    vals = [0] * size
    for p, v in zip(from_mu, mu.values):
        vals[p] = v
    for p, v in zip(from_nu, nu.values):
        vals[p] = v
    for pos, inv, others in steps:
        vals[pos] = inv * (t - sum(c * vals[p] for c, p in others)) % q
    w = bd.w
    for cells in translates:
        if sum(c * vals[p] for c, p in zip(w, cells)) % q != t:
            raise RuntimeError("composite violates the trace condition (inputs are not paths)")
    return PathFn(bd.tile, total, tuple(vals))


# --------------------------------------------------------------------------
# the coalignment decision by exhaustive scan


def coalign_witnesses(bd: BasicData, e_i: PathFn, e_j: PathFn) -> list[tuple[PathFn, PathFn]]:
    """Pairs (f_i, f_j) with f_i e_j = f_j e_i, colors read off the degrees."""
    if e_i.degree == E1 and e_j.degree == E2:
        squares = complete_square(bd, e_i, e_j)
        return [(segment(s, ORIGIN, E1), segment(s, ORIGIN, E2)) for s in squares]
    if e_i.degree == E2 and e_j.degree == E1:
        squares = complete_square(bd, e_j, e_i)
        return [(segment(s, ORIGIN, E2), segment(s, ORIGIN, E1)) for s in squares]
    raise ValueError("need one edge of each color")


def is_one_coaligned_bruteforce(bd: BasicData) -> Verdict:
    blue = paths_by_source(enumerate_edges(bd, 1))
    red = paths_by_source(enumerate_edges(bd, 2))
    checked = 0
    for v in enumerate_vertices(bd):
        for e_b in blue.get(v, []):
            for e_r in red.get(v, []):
                checked += 1
                n = len(complete_square(bd, e_b, e_r))
                if n != 1:
                    return Verdict(False, {"e_b": e_b, "e_r": e_r, "completions": n}, {"pairs_checked": checked})
    return Verdict(True, None, {"pairs_checked": checked})


# --------------------------------------------------------------------------
# bridge to the generic skeleton checker


def path_id(bd: BasicData, path: PathFn) -> str:
    prefix = {ORIGIN: "v", E1: "b", E2: "r"}.get(path.degree, "p")
    sep = "" if bd.q <= 10 else "."
    return prefix + sep.join(str(v) for v in path.values)


def export_skeleton(bd: BasicData) -> sk.KGraphSkeleton:
    vertices = enumerate_vertices(bd)
    blue, red = enumerate_edges(bd, 1), enumerate_edges(bd, 2)
    edges = [
        sk.Edge(path_id(bd, e), color, path_id(bd, e.source), path_id(bd, e.range))
        for color, group in ((1, blue), (2, red))
        for e in group
    ]
    red_by_range: dict[PathFn, list[PathFn]] = {}
    for e in red:
        red_by_range.setdefault(e.range, []).append(e)
    squares = []
    for f_b in blue:
        for e_r in red_by_range.get(f_b.source, []):
            lam = compose(bd, f_b, e_r)
            f_r, e_b = segment(lam, ORIGIN, E2), segment(lam, E2, SQUARE)
            squares.append(sk.Square((1, 2), *(path_id(bd, p) for p in (f_b, e_r, f_r, e_b))))
    return sk.KGraphSkeleton(2, tuple(path_id(bd, v) for v in vertices), tuple(edges), tuple(squares))


def to_grid(bd: BasicData, path: PathFn) -> sk.GridPath:
    """The same path seen as an edge grid over the exported skeleton."""
    n = path.degree
    verts = tuple(path_id(bd, segment(path, p, p)) for p in sk.lattice(n))
    edges = tuple(
        path_id(bd, segment(path, p, _add(p, E1 if c == 1 else E2))) for p, c in sk.edge_slots(n)
    )
    return sk.GridPath(n, verts, edges)


# --------------------------------------------------------------------------
# file format


def dumps(bd: BasicData) -> str:
    doc = {
        "tile": [list(p) for p in bd.tile.points],
        "q": bd.q,
        "t": bd.t,
        "w": [[list(p), v] for p, v in zip(bd.tile.points, bd.w)],
    }
    return json.dumps(doc) + "\n"


def loads(text: str) -> BasicData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BasicDataError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise BasicDataError("top level must be an object")
    for key in ("tile", "q", "t", "w"):
        if key not in doc:
            raise BasicDataError("missing field", key)
    q, t = doc["q"], doc["t"]
    if not isinstance(q, int) or q < 2:
        raise BasicDataError(f"must be an integer >= 2, got {q!r}", "q")
    if not isinstance(t, int):
        raise BasicDataError(f"must be an integer, got {t!r}", "t")
    points = []
    for k, p in enumerate(doc["tile"]):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(a, int) and a >= 0 for a in p)):
            raise BasicDataError(f"entry {k} is not a pair of non-negative integers: {p!r}", "tile")
        points.append(tuple(p))
    if not points:
        raise BasicDataError("tile is empty", "tile")
    tile = Tile(tuple(points))
    gap = tile.missing_below()
    if gap is not None:
        raise BasicDataError(f"not hereditary: {list(gap[0])} is missing below {list(gap[1])}", "tile")
    rule = {}
    for k, entry in enumerate(doc["w"]):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], int)):
            raise BasicDataError(f"entry {k} must be [[x, y], value], got {entry!r}", "w")
        p = tuple(entry[0]) if isinstance(entry[0], list) else None
        if p is None or len(p) != 2:
            raise BasicDataError(f"entry {k} has a malformed coordinate {entry[0]!r}", "w")
        if p in rule:
            raise BasicDataError(f"duplicate coordinate {list(p)}", "w")
        rule[p] = entry[1]
    return BasicData.build(tile.points, q, t, rule)


# --------------------------------------------------------------------------
# instances


LEDRAPPIER_TILE = ((0, 0), (1, 0), (0, 1))
SQUARE_TILE = ((0, 0), (1, 0), (0, 1), (1, 1))


def ledrappier(q: int = 2, t: int = 0, w: int = 1) -> BasicData:
    return BasicData.build(LEDRAPPIER_TILE, q, t, w)


def small_tiles() -> list[Tile]:
    """Hereditary tiles inside {0, e1, e2, e1+e2} that contain {0, e1, e2}."""
    return [Tile(LEDRAPPIER_TILE), Tile(SQUARE_TILE)]


def corner_valid_rules(tile: Tile, q: int) -> Iterable[tuple[int, ...]]:
    """Every rule on ``tile`` (aligned with tile.points) with invertible corners."""
    c1, c2 = tile.corner
    corners = {(c1, 0), (0, c2)}
    units = [v for v in range(q) if gcd(v, q) == 1]
    choices = [units if p in corners else range(q) for p in tile.points]
    return product(*choices)
