"""Finite k-graphs presented as a k-colored graph plus factorization squares.

A square with colors ``i < j`` records the commuting relation
``f_i e_j = f_j e_i`` between two bi-colored paths of degree ``e_i + e_j``.
Edges follow the k-graph convention: a path ``g h`` is composable when
``source(g) == range(h)``.

Finite paths of any degree are materialised as :class:`GridPath`: a vertex at
every lattice point of the box ``[0, degree]`` and an edge on every unit step,
each unit cell being one of the listed squares.

Text format (what :func:`dumps` writes and :func:`loads` reads)::

    k 2
    [vertices]
    v
    [edges]
    a 1 v v          # id color source range
    b 2 v v
    [squares]
    1 2 a b b a      # i j f_i e_j f_j e_i

Blank lines and ``#`` comments are ignored on input.  Output is sorted, so a
file written by :func:`dumps` loads and re-dumps byte-identically.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence, Union

from .verdict import ValidationReport, Verdict


class SkeletonFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PropagationError(RuntimeError):
    """Square data did not determine a unique grid (invalid k-graph input)."""


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    color: int
    source: str
    range: str


@dataclass(frozen=True, order=True)
class Square:
    """``f_i e_j = f_j e_i`` with ``colors == (i, j)`` and ``i < j``."""

    colors: tuple[int, int]
    f_i: str
    e_j: str
    f_j: str
    e_i: str


@dataclass(frozen=True)
class KGraphSkeleton:
    k: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "squares", tuple(sorted(self.squares)))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.k, self.vertices, self.edges, self.squares))

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[tuple[str, int], list[Edge]]:
        """Edges keyed by (source, color)."""
        table: dict[tuple[str, int], list[Edge]] = defaultdict(list)
        for e in self.edges:
            table[e.source, e.color].append(e)
        return dict(table)

    @cached_property
    def in_edges(self) -> dict[tuple[str, int], list[Edge]]:
        """Edges keyed by (range, color)."""
        table: dict[tuple[str, int], list[Edge]] = defaultdict(list)
        for e in self.edges:
            table[e.range, e.color].append(e)
        return dict(table)

    @cached_property
    def _flip(self) -> dict[tuple[str, str], tuple[str, str]]:
        # composable pair -> the other factorization of the same square
        table: dict[tuple[str, str], tuple[str, str]] = {}
        for sq in self.squares:
            table.setdefault((sq.f_i, sq.e_j), (sq.f_j, sq.e_i))
            table.setdefault((sq.f_j, sq.e_i), (sq.f_i, sq.e_j))
        return table

    @cached_property
    def _by_tail(self) -> dict[tuple[str, str], list[Square]]:
        table: dict[tuple[str, str], list[Square]] = defaultdict(list)
        for sq in self.squares:
            table[sq.e_i, sq.e_j].append(sq)
        return dict(table)

    @cached_property
    def _path_cache(self) -> dict[tuple[int, ...], list["GridPath"]]:
        return {}

    def flip(self, g: str, h: str) -> tuple[str, str]:
        """The other factorization of the composite ``g h``."""
        try:
            return self._flip[g, h]
        except KeyError:
            raise PropagationError(f"no square contains the composable pair ({g}, {h})") from None

    def edges_of(self, source: str, color: int) -> list[Edge]:
        return self.out_edges.get((source, color), [])


def unit(k: int, color: int) -> tuple[int, ...]:
    return tuple(int(c == color - 1) for c in range(k))


# --------------------------------------------------------------------------
# validation and the coalignment decision


def validate(g: KGraphSkeleton) -> ValidationReport:
    report = ValidationReport()
    problems = _structural_problems(g)
    report.add("structure", not problems, "; ".join(problems))
    if problems:
        return report
    if g.k >= 3:
        report.warnings.append(
            "k >= 3: only pairwise unique factorization is checked; "
            "the cube condition (higher associativity) is NOT verified"
        )

    edge = g.edge_by_id
    bad = []
    for sq in g.squares:
        i, j = sq.colors
        fi, ej, fj, ei = edge[sq.f_i], edge[sq.e_j], edge[sq.f_j], edge[sq.e_i]
        if (fi.color, ej.color, fj.color, ei.color) != (i, j, j, i):
            bad.append(f"{_sq(sq)}: edge colors do not match ({i}, {j})")
        elif fi.source != ej.range or fj.source != ei.range:
            bad.append(f"{_sq(sq)}: a factorization is not composable")
        elif fi.range != fj.range or ej.source != ei.source:
            bad.append(f"{_sq(sq)}: the two composites have different endpoints")
    report.add("squares", not bad, "; ".join(bad))

    counts = Counter()
    for sq in g.squares:
        counts[sq.f_i, sq.e_j] += 1
        counts[sq.f_j, sq.e_i] += 1
    bad = []
    for i in range(1, g.k + 1):
        for j in range(1, g.k + 1):
            if i == j:
                continue
            for first in g.edges:
                if first.color != i:
                    continue
                for second in g.in_edges.get((first.source, j), []):
                    n = counts[first.id, second.id]
                    if n != 1:
                        bad.append(f"({first.id}, {second.id}) lies in {n} squares")
    report.add("factorization", not bad, "; ".join(bad))

    colors = range(1, g.k + 1)
    no_in = [f"{v} (color {c})" for v in g.vertices for c in colors if (v, c) not in g.in_edges]
    report.add("no_sources", not no_in, "no edge of given color has range " + ", ".join(no_in) if no_in else "")
    no_out = [f"{v} (color {c})" for v in g.vertices for c in colors if (v, c) not in g.out_edges]
    report.add("no_sinks", not no_out, "no edge of given color has source " + ", ".join(no_out) if no_out else "")
    widest = max((len(es) for es in g.in_edges.values()), default=0)
    report.add("row_finite", True, f"at most {widest} edges of one color share a range")
    return report


def _sq(sq: Square) -> str:
    return f"square {sq.colors[0]} {sq.colors[1]} {sq.f_i} {sq.e_j} {sq.f_j} {sq.e_i}"


def _structural_problems(g: KGraphSkeleton) -> list[str]:
    problems = []
    vertex_set = set(g.vertices)
    if len(vertex_set) != len(g.vertices):
        problems.append("duplicate vertex ids")
    if len(g.edge_by_id) != len(g.edges):
        problems.append("duplicate edge ids")
    for e in g.edges:
        if not 1 <= e.color <= g.k:
            problems.append(f"edge {e.id} has color {e.color} outside 1..{g.k}")
        for end in (e.source, e.range):
            if end not in vertex_set:
                problems.append(f"edge {e.id} has dangling endpoint {end}")
    for sq in g.squares:
        i, j = sq.colors
        if not 1 <= i < j <= g.k:
            problems.append(f"{_sq(sq)}: color pair must satisfy 1 <= i < j <= {g.k}")
        for eid in (sq.f_i, sq.e_j, sq.f_j, sq.e_i):
            if eid not in g.edge_by_id:
                problems.append(f"{_sq(sq)}: unknown edge {eid}")
    return problems


def coalign_witness(g: KGraphSkeleton, e_i: str, e_j: str) -> list[tuple[str, str]]:
    """All pairs (f_i, f_j) with ``f_i e_j = f_j e_i``, sorted."""
    a, b = g.edge_by_id[e_i], g.edge_by_id[e_j]
    if a.color == b.color:
        raise ValueError(f"edges {e_i} and {e_j} have the same color {a.color}")
    if a.source != b.source:
        raise ValueError(f"edges {e_i} and {e_j} do not share a source")
    if a.color < b.color:
        found = [(sq.f_i, sq.f_j) for sq in g._by_tail.get((e_i, e_j), [])]
    else:
        found = [(sq.f_j, sq.f_i) for sq in g._by_tail.get((e_j, e_i), [])]
    edge = g.edge_by_id
    for f_i, f_j in found:
        assert edge[f_i].source == b.range and edge[f_j].source == a.range
        assert edge[f_i].range == edge[f_j].range
    return sorted(found)


def is_one_coaligned(g: KGraphSkeleton) -> Verdict:
    checked = 0
    for i in range(1, g.k + 1):
        for j in range(i + 1, g.k + 1):
            for v in g.vertices:
                for a in g.edges_of(v, i):
                    for b in g.edges_of(v, j):
                        checked += 1
                        found = coalign_witness(g, a.id, b.id)
                        if len(found) != 1:
                            return Verdict(
                                False,
                                {"colors": (i, j), "e_i": a.id, "e_j": b.id, "witnesses": found},
                                {"pairs_checked": checked},
                            )
    return Verdict(True, None, {"pairs_checked": checked})


# --------------------------------------------------------------------------
# finite paths as edge grids


@lru_cache(maxsize=None)
def lattice(degree: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(product(*(range(n + 1) for n in degree)))


@lru_cache(maxsize=None)
def edge_slots(degree: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(point, color) for every unit step inside the box, lexicographic."""
    k = len(degree)
    return tuple(
        (p, c)
        for p in lattice(degree)
        for c in range(1, k + 1)
        if p[c - 1] < degree[c - 1]
    )


@lru_cache(maxsize=None)
def _point_index(degree: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    return {p: n for n, p in enumerate(lattice(degree))}


@lru_cache(maxsize=None)
def _slot_index(degree: tuple[int, ...]) -> dict[tuple[tuple[int, ...], int], int]:
    return {s: n for n, s in enumerate(edge_slots(degree))}


@dataclass(frozen=True, order=True)
class GridPath:
    degree: tuple[int, ...]
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def range(self) -> str:
        return self.vertices[0]

    @property
    def source(self) -> str:
        return self.vertices[-1]

    def vertex_at(self, point: tuple[int, ...]) -> str:
        return self.vertices[_point_index(self.degree)[point]]

    def edge_at(self, point: tuple[int, ...], color: int) -> str:
        return self.edges[_slot_index(self.degree)[point, color]]

    def __str__(self) -> str:
        rows = [f"degree {self.degree}"]
        rows += [f"  {p} {v}" for p, v in zip(lattice(self.degree), self.vertices)]
        rows += [f"  {p} +e{c} {e}" for (p, c), e in zip(edge_slots(self.degree), self.edges)]
        return "\n".join(rows)


def vertex_path(g: KGraphSkeleton, v: str) -> GridPath:
    return GridPath((0,) * g.k, (v,), ())


def edge_path(g: KGraphSkeleton, e: Union[str, Edge]) -> GridPath:
    if isinstance(e, str):
        e = g.edge_by_id[e]
    return GridPath(unit(g.k, e.color), (e.range, e.source), (e.id,))


def grid_segment(x: GridPath, m: Sequence[int], n: Sequence[int]) -> GridPath:
    m, n = tuple(m), tuple(n)
    if not all(0 <= a <= b <= d for a, b, d in zip(m, n, x.degree)) or len(m) != len(x.degree):
        raise ValueError(f"segment bounds {m}, {n} outside [0, {x.degree}]")
    deg = tuple(b - a for a, b in zip(m, n))
    pidx, sidx = _point_index(x.degree), _slot_index(x.degree)
    verts = tuple(x.vertices[pidx[_add(m, p)]] for p in lattice(deg))
    edges = tuple(x.edges[sidx[_add(m, p), c]] for p, c in edge_slots(deg))
    return GridPath(deg, verts, edges)


def grid_prepend_edge(g: KGraphSkeleton, e: Union[str, Edge], x: GridPath) -> GridPath:
    """The unique grid ``e x`` of degree ``degree(x) + e_color``."""
    if isinstance(e, str):
        e = g.edge_by_id[e]
    if e.source != x.range:
        raise ValueError(f"edge {e.id} has source {e.source}, path has range {x.range}")
    c = e.color
    N = x.degree
    new_deg = _add(N, unit(g.k, c))
    verts: dict[tuple[int, ...], str] = {}
    edges: dict[tuple[tuple[int, ...], int], str] = {}
    shift = unit(g.k, c)
    for p, v in zip(lattice(N), x.vertices):
        verts[_add(p, shift)] = v
    for (p, d), eid in zip(edge_slots(N), x.edges):
        edges[_add(p, shift), d] = eid

    edges[(0,) * g.k, c] = e.id
    for p in lattice(new_deg):
        if p[c - 1] != 0:
            continue
        down = edges[p, c]
        verts[p] = g.edge_by_id[down].range
        for d in range(1, g.k + 1):
            if d == c or p[d - 1] >= N[d - 1]:
                continue
            across, new_down = g.flip(down, x.edge_at(p, d))
            for slot, val in (((p, d), across), ((_add(p, unit(g.k, d)), c), new_down)):
                if edges.setdefault(slot, val) != val:
                    raise PropagationError(
                        f"conflicting edges {edges[slot]} and {val} at {slot} (cube condition fails)"
                    )
    return GridPath(
        new_deg,
        tuple(verts[p] for p in lattice(new_deg)),
        tuple(edges[s] for s in edge_slots(new_deg)),
    )


def staircase(x: GridPath) -> list[str]:
    """Edges of ``x`` along the lattice path that exhausts color 1, then 2, ..."""
    k = len(x.degree)
    p = [0] * k
    out = []
    for c in range(1, k + 1):
        for _ in range(x.degree[c - 1]):
            out.append(x.edge_at(tuple(p), c))
            p[c - 1] += 1
    return out


def grid_compose(g: KGraphSkeleton, a: GridPath, b: GridPath) -> GridPath:
    if a.source != b.range:
        raise ValueError(f"cannot compose: source {a.source} != range {b.range}")
    out = b
    for eid in reversed(staircase(a)):
        out = grid_prepend_edge(g, eid, out)
    if grid_segment(out, (0,) * g.k, a.degree) != a:
        raise PropagationError("composite does not restrict to its first factor (invalid squares)")
    return out


def grid_paths(g: KGraphSkeleton, degree: Sequence[int]) -> list[GridPath]:
    """Every path of the given degree, sorted."""
    degree = tuple(degree)
    cache = g._path_cache
    if degree in cache:
        return cache[degree]
    if not any(degree):
        out = [vertex_path(g, v) for v in g.vertices]
    else:
        c = next(n for n in range(len(degree), 0, -1) if degree[n - 1])
        smaller = tuple(d - (n == c - 1) for n, d in enumerate(degree))
        out = sorted(
            grid_prepend_edge(g, e, x)
            for x in grid_paths(g, smaller)
            for e in g.edges_of(x.range, c)
        )
    cache[degree] = out
    return out


def is_grid_path(g: KGraphSkeleton, x: GridPath) -> bool:
    edge = g.edge_by_id
    for (p, c), eid in zip(edge_slots(x.degree), x.edges):
        e = edge.get(eid)
        if e is None or e.color != c:
            return False
        if e.range != x.vertex_at(p) or e.source != x.vertex_at(_add(p, unit(g.k, c))):
            return False
    for p in lattice(x.degree):
        for i in range(1, g.k + 1):
            for j in range(i + 1, g.k + 1):
                pi, pj = _add(p, unit(g.k, i)), _add(p, unit(g.k, j))
                if pi[i - 1] > x.degree[i - 1] or pj[j - 1] > x.degree[j - 1]:
                    continue
                pair = (x.edge_at(p, i), x.edge_at(pi, j))
                if g._flip.get(pair) != (x.edge_at(p, j), x.edge_at(pj, i)):
                    return False
    return True


def _add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


# --------------------------------------------------------------------------
# text format


def dumps(g: KGraphSkeleton) -> str:
    lines = [f"k {g.k}", "[vertices]"]
    lines += list(g.vertices)
    lines.append("[edges]")
    lines += [f"{e.id} {e.color} {e.source} {e.range}" for e in g.edges]
    lines.append("[squares]")
    lines += [
        f"{sq.colors[0]} {sq.colors[1]} {sq.f_i} {sq.e_j} {sq.f_j} {sq.e_i}" for sq in g.squares
    ]
    return "\n".join(lines) + "\n"


def loads(text: str) -> KGraphSkeleton:
    k = None
    section = None
    vertices: list[str] = []
    edges: list[Edge] = []
    squares: list[Square] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]").strip()
            if section not in ("vertices", "edges", "squares"):
                raise SkeletonFormatError(f"unknown section [{section}]", lineno)
            continue
        fields = line.split()
        if section is None:
            if fields[0] != "k" or len(fields) != 2:
                raise SkeletonFormatError("expected 'k <rank>' before any section", lineno)
            k = _int(fields[1], "k", lineno)
        elif section == "vertices":
            if len(fields) != 1:
                raise SkeletonFormatError("vertex line takes a single id", lineno)
            vertices.append(fields[0])
        elif section == "edges":
            if len(fields) != 4:
                raise SkeletonFormatError("edge line is 'id color source range'", lineno)
            edges.append(Edge(fields[0], _int(fields[1], "color", lineno), fields[2], fields[3]))
        else:
            if len(fields) != 6:
                raise SkeletonFormatError("square line is 'i j f_i e_j f_j e_i'", lineno)
            i, j = _int(fields[0], "i", lineno), _int(fields[1], "j", lineno)
            if i >= j:
                raise SkeletonFormatError(f"square colors must satisfy i < j, got {i} {j}", lineno)
            squares.append(Square((i, j), *fields[2:]))
    if k is None:
        raise SkeletonFormatError("missing 'k <rank>' header")
    return KGraphSkeleton(k, tuple(vertices), tuple(edges), tuple(squares))


def _int(token: str, name: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise SkeletonFormatError(f"{name} must be an integer, got {token!r}", lineno) from None


def terminal(k: int = 2) -> KGraphSkeleton:
    """One vertex, one loop per color, every square trivial."""
    loops = [Edge(f"l{c}", c, "v", "v") for c in range(1, k + 1)]
    squares = [
        Square((i, j), f"l{i}", f"l{j}", f"l{j}", f"l{i}")
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
    ]
    return KGraphSkeleton(k, ("v",), tuple(loops), tuple(squares))


def from_parts(
    k: int,
    vertices: Iterable[str],
    edges: Iterable[tuple[str, int, str, str]],
    squares: Iterable[tuple[int, int, str, str, str, str]],
) -> KGraphSkeleton:
    return KGraphSkeleton(
        k,
        tuple(vertices),
        tuple(Edge(*e) for e in edges),
        tuple(Square((s[0], s[1]), *s[2:]) for s in squares),
    )
