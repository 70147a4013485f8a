"""Exhaustive sweeps comparing closed-form criteria with brute-force checks.

Set ``STARMAPS_WORKERS`` to fan instances out over processes; results are
collected in input order either way.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Sequence, TypeVar

from . import basic_data as bdm
from . import fullshift as fs

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("STARMAPS_WORKERS", "1")))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int | None = None) -> list[R]:
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


@dataclass
class SweepResult:
    family: str
    instances: int = 0
    mismatches: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __bool__(self) -> bool:
        return self.ok


# --------------------------------------------------------------------------
# basic data: coalignment by scan versus invertibility of w(0)


def tile_instances(
    qs: Iterable[int] = (2, 3, 4, 5, 6),
    exhaustive_up_to: int = 4,
    samples: int = 200,
    seed: int = 0,
    tiles: Sequence[bdm.Tile] | None = None,
) -> list[bdm.BasicData]:
    """Corner-valid basic data on the small tiles; sampled uniformly for large q."""
    tiles = bdm.small_tiles() if tiles is None else list(tiles)
    rng = random.Random(seed)
    out: list[bdm.BasicData] = []
    for q in qs:
        if q <= exhaustive_up_to:
            for tile in tiles:
                for rule in bdm.corner_valid_rules(tile, q):
                    for t in range(q):
                        out.append(bdm.BasicData(tile, q, t, rule))
            continue
        units = [v for v in range(q) if gcd(v, q) == 1]
        sizes = []
        for tile in tiles:
            c1, c2 = tile.corner
            corner_count = sum(p in {(c1, 0), (0, c2)} for p in tile.points)
            sizes.append(q * len(units) ** corner_count * q ** (len(tile) - corner_count))
        for _ in range(samples):
            tile = rng.choices(tiles, weights=sizes)[0]
            c1, c2 = tile.corner
            rule = tuple(
                rng.choice(units) if p in {(c1, 0), (0, c2)} else rng.randrange(q)
                for p in tile.points
            )
            out.append(bdm.BasicData(tile, q, rng.randrange(q), rule))
    return out


def _tile_case(bd: bdm.BasicData) -> tuple[bool, bool, int, bool]:
    scan = bool(bdm.is_one_coaligned_bruteforce(bd))
    vertices = len(bdm.enumerate_vertices(bd))
    unit_entry = any(gcd(v, bd.q) == 1 for v in bd.w)
    count_ok = (not unit_entry) or vertices == bd.q ** (len(bd.tile) - 1)
    return scan, bdm.has_invertible_zero(bd), vertices, count_ok


def sweep_tiles(instances: Sequence[bdm.BasicData]) -> SweepResult:
    result = SweepResult("tiles")
    coaligned = count_failures = 0
    for bd, (scan, criterion, vertices, count_ok) in zip(instances, ordered_map(_tile_case, instances)):
        result.instances += 1
        coaligned += scan
        if scan != criterion:
            result.mismatches.append({"data": bd, "scan": scan, "criterion": criterion})
        if not count_ok:
            count_failures += 1
            result.mismatches.append({"data": bd, "vertex_count": vertices})
    result.counts = {
        "coaligned": coaligned,
        "not_coaligned": result.instances - coaligned,
        "vertex_count_failures": count_failures,
    }
    return result


# --------------------------------------------------------------------------
# block maps: window *-commute check versus left permutivity


def _blockmap_case(args: tuple[fs.BlockMap, int]) -> tuple[bool, bool]:
    d, length = args
    return bool(fs.verify_star_commute_fullshift(d, length)), bool(fs.is_left_permutive(d))


def sweep_blockmaps(size: int, ns: Iterable[int], extra: int = 3) -> SweepResult:
    """All block maps over ``size`` letters for each n, windows of length n + extra."""
    result = SweepResult("blockmaps")
    permutive = 0
    for n in ns:
        maps = list(fs.all_block_maps(size, n))
        outcomes = ordered_map(_blockmap_case, [(d, n + extra) for d in maps])
        for d, (window, criterion) in zip(maps, outcomes):
            result.instances += 1
            permutive += criterion
            if window != criterion:
                result.mismatches.append({"map": d, "window": window, "criterion": criterion})
    result.counts = {"permutive": permutive, "not_permutive": result.instances - permutive}
    return result
