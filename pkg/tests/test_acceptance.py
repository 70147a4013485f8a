"""Acceptance criteria, one test each.

Every test records a single pass/fail line that is echoed in the terminal
summary under "acceptance criteria".
"""

import time
from collections import Counter, defaultdict
from itertools import product

import pytest

from conftest import ACCEPTANCE_LINES
from starmaps import basic_data as bdm
from starmaps import fullshift as fs
from starmaps import path_space as ps
from starmaps import sweeps

pytestmark = pytest.mark.acceptance

LED2 = bdm.ledrappier(2)


def record(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def tile_sweep():
    start = time.perf_counter()
    instances = sweeps.tile_instances()
    result = sweeps.sweep_tiles(instances)
    return result, instances, time.perf_counter() - start


def test_c1_invertible_zero_sweep(tile_sweep):
    result, instances, elapsed = tile_sweep
    by_q = Counter(bd.q for bd in instances)
    criterion_mismatches = [m for m in result.mismatches if "scan" in m]
    ok = not criterion_mismatches and elapsed < 60 and all(by_q[q] >= 200 for q in (5, 6))
    detail = (
        f"{result.instances} instances {dict(sorted(by_q.items()))}, "
        f"{len(criterion_mismatches)} mismatches, {elapsed:.1f}s"
    )
    assert record("C1 coalignment sweep", ok, detail), criterion_mismatches[:3]


COALIGNED = [
    bdm.ledrappier(2),
    bdm.ledrappier(3),
    bdm.BasicData.build(bdm.LEDRAPPIER_TILE, 3, 1, {(0, 0): 2, (1, 0): 1, (0, 1): 1}),
    bdm.BasicData.build(bdm.SQUARE_TILE, 2, 0, 1),
    bdm.BasicData.build(bdm.SQUARE_TILE, 3, 2, {(0, 0): 1, (1, 0): 2, (0, 1): 1, (1, 1): 2}),
]
NOT_COALIGNED = [
    bdm.BasicData.build(bdm.LEDRAPPIER_TILE, 4, 1, {(0, 0): 2, (1, 0): 1, (0, 1): 1}),
    bdm.BasicData.build(bdm.LEDRAPPIER_TILE, 6, 0, {(0, 0): 3, (1, 0): 1, (0, 1): 5}),
    bdm.BasicData.build(bdm.LEDRAPPIER_TILE, 3, 0, {(0, 0): 0, (1, 0): 1, (0, 1): 1}),
    bdm.BasicData.build(bdm.LEDRAPPIER_TILE, 2, 1, {(0, 0): 0, (1, 0): 1, (0, 1): 1}),
    bdm.BasicData.build(bdm.SQUARE_TILE, 4, 3, {(0, 0): 2, (1, 0): 1, (0, 1): 3, (1, 1): 1}),
]


def test_c2_star_commute_chain():
    start = time.perf_counter()
    wrong = []
    for bd, expected in [(b, True) for b in COALIGNED] + [(b, False) for b in NOT_COALIGNED]:
        assert bdm.validate_basic_data(bd).ok
        coaligned = bool(bdm.is_one_coaligned_bruteforce(bd))
        verdict = ps.verify_all_pairs(bd, (2, 2))
        if not (bool(verdict) == coaligned == expected):
            wrong.append(bd)
        if not verdict:
            ce = verdict.counterexample
            print(
                f"  q={bd.q} t={bd.t} w={bd.w}: colors {ce['colors']}, "
                f"{len(ce['lifts'])} lifts of y={ce['y'].path.values} z={ce['z'].path.values}"
            )
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 60
    detail = f"{len(COALIGNED)} coaligned pass, {len(NOT_COALIGNED)} non-coaligned fail at depth (2,2), {elapsed:.1f}s"
    assert record("C2 star-commute chain", ok, detail), wrong


def test_c3_block_map_sweep():
    start = time.perf_counter()
    binary = sweeps.sweep_blockmaps(2, [1, 2, 3], extra=3)
    ternary = sweeps.sweep_blockmaps(3, [2], extra=3)
    elapsed = time.perf_counter() - start
    ok = (
        binary.instances == 276
        and ternary.instances == 19683
        and binary.ok
        and ternary.ok
        and elapsed < 120
    )
    detail = (
        f"|A|=2: {binary.instances} maps {len(binary.mismatches)} mismatches; "
        f"|A|=3 n=2: {ternary.instances} maps {len(ternary.mismatches)} mismatches; {elapsed:.1f}s"
    )
    assert record("C3 block map sweep", ok, detail), (binary.mismatches[:3], ternary.mismatches[:3])


def test_c4_named_examples():
    results = {
        "four_letter permutive": bool(fs.is_left_permutive(fs.four_letter())),
        "mod_sum 2..5 permutive": all(fs.is_left_permutive(fs.mod_sum(n)) for n in range(2, 6)),
        "bar commutes at L=6": bool(fs.verify_star_commute_fullshift(fs.bar(), 6)),
    }
    drop = fs.verify_star_commute_fullshift(fs.drop_first())
    results["drop_first two preimages"] = not drop and len(drop.counterexample["lifts"]) == 2
    ok = all(results.values())
    detail = ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in results.items())
    assert record("C4 named examples", ok, detail), results


def _candidate_completions(bd):
    """Every function T(e1+e2) -> Z_q, filtered by the trace on each translate."""
    dom = bdm.domain(bd.tile, bdm.SQUARE)
    pos = {p: k for k, p in enumerate(dom)}
    w = dict(zip(bd.tile.points, bd.w))
    checks = [
        [(w[i], pos[(i[0] + a, i[1] + b)]) for i in bd.tile.points]
        for a, b in product(range(2), repeat=2)
    ]
    found = defaultdict(list)
    candidates = 0
    for values in product(range(bd.q), repeat=len(dom)):
        candidates += 1
        if all(sum(c * values[k] for c, k in check) % bd.q == bd.t for check in checks):
            lam = bd.path(bdm.SQUARE, values)
            key = (bdm.segment(lam, bdm.E2, bdm.SQUARE), bdm.segment(lam, bdm.E1, bdm.SQUARE))
            found[key].append(lam)
    return found, candidates


def test_c5_square_completion_oracle():
    start = time.perf_counter()
    instances = pairs = candidates = 0
    wrong = []
    for q in (2, 3):
        for tile in bdm.small_tiles():
            for rule in bdm.corner_valid_rules(tile, q):
                for t in range(q):
                    bd = bdm.BasicData(tile, q, t, rule)
                    oracle, n = _candidate_completions(bd)
                    instances += 1
                    candidates += n
                    blue = bdm.paths_by_source(bdm.enumerate_edges(bd, 1))
                    red = bdm.paths_by_source(bdm.enumerate_edges(bd, 2))
                    for v, blues in blue.items():
                        for e_b, e_r in product(blues, red.get(v, [])):
                            pairs += 1
                            if sorted(bdm.complete_square(bd, e_b, e_r)) != sorted(oracle.get((e_b, e_r), [])):
                                wrong.append((bd, e_b, e_r))
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 30
    detail = f"{instances} instances, {pairs} edge pairs, {candidates} candidates searched, {len(wrong)} differences, {elapsed:.1f}s"
    assert record("C5 square completion oracle", ok, detail), wrong[:3]


def _count_by_search(bd, n):
    dom = bdm.domain(bd.tile, n)
    pos = {p: k for k, p in enumerate(dom)}
    w = dict(zip(bd.tile.points, bd.w))
    checks = [[(w[i], pos[(i[0] + m[0], i[1] + m[1])]) for i in bd.tile.points] for m in bdm.box(n)]
    return sum(
        all(sum(c * f[k] for c, k in check) % bd.q == bd.t for check in checks)
        for f in product(range(bd.q), repeat=len(dom))
    )


def test_c6_counts(tile_sweep):
    result, _, _ = tile_sweep
    vertices = len(bdm.enumerate_vertices(LED2))
    per_dir = [len(bdm.enumerate_edges(LED2, c)) for c in (1, 2)]
    searched = [_count_by_search(LED2, n) for n in (bdm.ORIGIN, bdm.E1, bdm.E2)]
    failures = result.counts["vertex_count_failures"]
    ok = [vertices, *per_dir] == searched == [4, 8, 8] and failures == 0
    detail = (
        f"vertices {vertices}, edges per direction {per_dir}, "
        f"vertex count q^(|T|-1) failures across the sweep {failures}"
    )
    assert record("C6 counts", ok, detail)


def _depths(top):
    return list(product(*(range(d + 1) for d in top)))


def test_c7_path_space_laws():
    top = (3, 3)
    violations = Counter()
    checked = Counter()
    paths = {n: ps.all_paths(LED2, n) for n in _depths(top)}
    by_range = {n: defaultdict(list) for n in paths}
    for n, xs in paths.items():
        for x in xs:
            by_range[n][x.range].append(x)

    for n, xs in paths.items():
        for p in _depths(n):
            rest = ps._sub(n, p)
            # unique prepend: (head, tail) determines the path, and every compatible pair occurs
            split = Counter((ps.segment(x, (0, 0), p), ps.shift(x, p)) for x in xs)
            heads = bdm.enumerate_paths(LED2, p)
            compatible = sum(len(by_range[rest][lam.source]) for lam in heads)
            checked["P1"] += 1
            violations["P1"] += any(c != 1 for c in split.values()) or len(split) != compatible
            for x in xs:
                checked["P2"] += 1
                violations["P2"] += ps.prepend(ps.segment(x, (0, 0), p), ps.shift(x, p)) != x
                for r in _depths(rest):
                    checked["shift"] += 1
                    violations["shift"] += ps.shift(ps.shift(x, p), r) != ps.shift(x, ps._add(p, r))

    for n, xs in paths.items():
        for x in xs:
            for b in _depths(ps._sub(top, n)):
                for a in _depths(ps._sub(ps._sub(top, n), b)):
                    if a == (0, 0) and b == (0, 0):
                        continue
                    for mu in bdm.enumerate_paths(LED2, b):
                        if mu.source != x.range:
                            continue
                        for lam in bdm.enumerate_paths(LED2, a):
                            if lam.source != mu.range:
                                continue
                            checked["P4"] += 1
                            left = ps.prepend(lam, ps.prepend(mu, x))
                            violations["P4"] += left != ps.prepend(bdm.compose(LED2, lam, mu), x)
    ok = sum(violations.values()) == 0
    detail = ", ".join(f"{k} {checked[k]} checks {violations[k]} violations" for k in ("P1", "P2", "P4", "shift"))
    assert record("C7 path space laws to depth (3,3)", ok, detail)


def test_c8_cylinder_decomposition():
    results = []
    for v in bdm.enumerate_vertices(LED2):
        for i in (1, 2):
            results.append(ps.preimage_cylinder_check(LED2, v, i, (2, 2)))
    ok = all(results)
    detail = f"{sum(map(bool, results))}/{len(results)} vertex cylinders decompose at depth (2,2)"
    assert record("C8 cylinder decomposition", ok, detail), [r.counterexample for r in results if not r]
