"""Command-line front end.

Every subcommand prints one report per check, either as an aligned text block
or (with ``--json``) as one JSON object per line.  Exit status is 0 when every
report passes, 1 when any fails and 2 on input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field, is_dataclass
from pathlib import Path
from typing import Any, Optional

from . import basic_data as bdm
from . import fullshift as fs
from . import path_space as ps
from . import skeleton as sk
from . import sweeps

EXIT = {"pass": 0, "fail": 1, "error": 2}

# sweep safety caps, lifted with --force
MAX_TILE_INSTANCES = 5000
MAX_BLOCK_TABLES = 50_000


@dataclass
class Report:
    check: str
    input: str
    verdict: str
    counterexample: Any = None
    counts: dict = field(default_factory=dict)
    elapsed: Optional[float] = None

    def __post_init__(self) -> None:
        assert self.verdict in EXIT
        assert (self.counterexample is not None) == (self.verdict == "fail")

    def to_json(self) -> str:
        doc = {
            "check": self.check,
            "input": self.input,
            "verdict": self.verdict,
            "counterexample": jsonable(self.counterexample),
            "counts": jsonable(self.counts),
        }
        if self.elapsed is not None:
            doc["elapsed"] = round(self.elapsed, 3)
        return json.dumps(doc, sort_keys=True)

    def to_text(self) -> str:
        head = f"{self.check:<12} {self.input:<20} {self.verdict.upper()}"
        lines = [head]
        for key, value in self.counts.items():
            lines.append(f"  {key}: {_plain(value)}")
        if self.elapsed is not None:
            lines.append(f"  elapsed: {self.elapsed:.3f}s")
        if self.counterexample is not None:
            lines.append("  counterexample:")
            for line in _describe(self.counterexample).splitlines():
                lines.append("    " + line)
        return "\n".join(lines)


class InputError(Exception):
    pass


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bdm.PathFn):
        return {"degree": list(obj.degree), "values": [[list(p), v] for p, v in obj.as_dict().items()]}
    if isinstance(obj, sk.GridPath):
        return {"degree": list(obj.degree), "vertices": list(obj.vertices), "edges": list(obj.edges)}
    if isinstance(obj, ps.RectPath):
        return jsonable(obj.path)
    if isinstance(obj, bdm.BasicData):
        return json.loads(bdm.dumps(obj))
    if isinstance(obj, fs.BlockMap):
        return {"size": obj.size, "n": obj.n, "table": list(obj.table)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if is_dataclass(obj):
        return jsonable(asdict(obj))
    return obj


def _plain(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _describe(obj: Any) -> str:
    if isinstance(obj, dict):
        parts = []
        for key, value in obj.items():
            text = _describe(value)
            if "\n" in text:
                parts.append(f"{key}:")
                parts.extend("  " + line for line in text.splitlines())
            else:
                parts.append(f"{key}: {text}")
        return "\n".join(parts)
    if isinstance(obj, (list, tuple)) and obj and not all(isinstance(v, int) for v in obj):
        return "\n".join(f"- {_describe(v)}".replace("\n", "\n  ") for v in obj)
    if isinstance(obj, bdm.BasicData):
        return bdm.dumps(obj).strip()
    return _plain(obj) if isinstance(obj, bool) else str(obj)


# --------------------------------------------------------------------------
# input handling


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:12]


def guess_kind(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "basic"
    for line in text.splitlines():
        fields = line.split("#", 1)[0].split()
        if fields:
            return "skeleton" if fields[0] in ("k", "[vertices]") else "blockmap"
    raise InputError("empty input file")


def load_input(path: str, kind: Optional[str] = None):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    text = raw.decode()
    kind = kind or guess_kind(text)
    try:
        if kind == "basic":
            obj = bdm.loads(text)
        elif kind == "skeleton":
            obj = sk.loads(text)
        else:
            obj = fs.loads(text)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    return kind, obj, _digest(raw)


def load_blockmap(source: str) -> tuple[fs.BlockMap, str]:
    if Path(source).exists():
        _, obj, digest = load_input(source, "blockmap")
        return obj, digest
    try:
        return fs.builtin(source), f"builtin:{source}"
    except KeyError:
        raise InputError(f"{source} is neither a file nor a builtin block map "
                         f"({', '.join(fs.builtin_examples())})") from None


def parse_degree(text: str, k: int) -> tuple[int, ...]:
    try:
        parts = tuple(int(a) for a in text.split(","))
    except ValueError:
        raise InputError(f"degree must be comma-separated integers, got {text!r}") from None
    if len(parts) == 1:
        parts = parts * k
    if len(parts) != k or min(parts) < 0:
        raise InputError(f"degree {text!r} does not describe a vector in N^{k}")
    return parts


# --------------------------------------------------------------------------
# commands


def cmd_validate(args) -> list[Report]:
    kind, obj, digest = load_input(args.file, args.kind)
    if kind == "blockmap":
        verdict = fs.is_left_permutive(obj)
        return [Report("validate", digest, "pass", counts={
            "kind": kind, "alphabet": obj.size, "n": obj.n, "table_total": True,
            "left_permutive": bool(verdict)})]
    report = bdm.validate_basic_data(obj) if kind == "basic" else sk.validate(obj)
    counts = {"kind": kind}
    counts.update({c.name: c.ok for c in report.checks})
    if report.warnings:
        counts["warnings"] = report.warnings
    failures = {c.name: c.detail for c in report.failures()}
    return [Report("validate", digest, "pass" if report.ok else "fail", failures or None, counts)]


def cmd_enumerate(args) -> list[Report]:
    kind, obj, digest = load_input(args.file, args.kind)
    if kind == "blockmap":
        raise InputError("enumerate works on basic data and skeleton files")
    k = 2 if kind == "basic" else obj.k
    if args.what == "vertices":
        degrees = [(0,) * k]
    elif args.what == "edges":
        degrees = [sk.unit(k, c) for c in range(1, k + 1)]
    else:
        degrees = [parse_degree(args.degree, k)]
    counts: dict[str, Any] = {}
    for n in degrees:
        if sum(n) > args.bound and not args.force:
            raise InputError(f"degree {n} exceeds the enumeration bound {args.bound} (use --bound or --force)")
        if kind == "basic" and bdm.validate_basic_data(obj).get("invertible_corners").ok is False and sum(n) > 0:
            raise InputError("basic data must have invertible corners to enumerate paths")
        paths = bdm.enumerate_paths(obj, n) if kind == "basic" else sk.grid_paths(obj, n)
        counts[f"degree {','.join(map(str, n))}"] = len(paths)
        if args.list:
            counts[f"paths {','.join(map(str, n))}"] = [str(p) for p in paths]
    return [Report("enumerate", digest, "pass", counts=counts)]


def cmd_coaligned(args) -> list[Report]:
    kind, obj, digest = load_input(args.file, args.kind)
    if kind == "blockmap":
        raise InputError("coaligned works on basic data and skeleton files")
    counts: dict[str, Any] = {"method": args.method}
    if kind == "skeleton":
        if args.method != "brute":
            raise InputError("the closed-form criterion only applies to basic data; use --method brute")
        _require_valid_skeleton(obj)
        verdict = sk.is_one_coaligned(obj)
        counts.update(brute=bool(verdict), **verdict.details)
        return [Report("coaligned", digest, "pass" if verdict else "fail", verdict.counterexample, counts)]

    _require_valid_basic(obj)
    results = {}
    counterexample = None
    if args.method in ("brute", "both"):
        verdict = bdm.is_one_coaligned_bruteforce(obj)
        results["brute"] = bool(verdict)
        counts.update(verdict.details)
        counterexample = verdict.counterexample
    if args.method in ("criterion", "both"):
        results["criterion"] = bdm.has_invertible_zero(obj)
        counts["three_invertible_corners"] = bdm.has_three_invertible_corners(obj)
        if not results["criterion"] and counterexample is None:
            counterexample = {"w(0)": obj.weight(bdm.ORIGIN), "q": obj.q}
    counts.update(results)
    agree = len(set(results.values())) == 1
    if not agree:
        counterexample = {"disagreement": results, "scan": counterexample}
    ok = agree and all(results.values())
    return [Report("coaligned", digest, "pass" if ok else "fail", None if ok else counterexample, counts)]


def cmd_star_check(args) -> list[Report]:
    kind, obj, digest = load_input(args.file, args.kind)
    if kind == "blockmap":
        raise InputError("use 'blockmap SOURCE star-check' for block maps")
    k = 2 if kind == "basic" else obj.k
    depth = parse_degree(args.depth, k)
    if sum(depth) > args.bound and not args.force:
        raise InputError(f"depth {depth} exceeds the enumeration bound {args.bound} (use --bound or --force)")
    if kind == "basic":
        _require_valid_basic(obj)
    else:
        _require_valid_skeleton(obj)
    verdict = ps.verify_all_pairs(obj, depth)
    counts: dict[str, Any] = {"depth": ",".join(map(str, depth)), "star_commute": bool(verdict)}
    counts.update(verdict.details)
    chain = [bool(verdict)]
    if kind == "basic":
        counts["one_coaligned"] = bool(bdm.is_one_coaligned_bruteforce(obj))
        counts["three_invertible_corners"] = bdm.has_three_invertible_corners(obj)
        chain += [counts["one_coaligned"], counts["three_invertible_corners"]]
    else:
        counts["one_coaligned"] = bool(sk.is_one_coaligned(obj))
        chain.append(counts["one_coaligned"])
    counterexample = verdict.counterexample
    if len(set(chain)) != 1:
        counterexample = {"chain_disagrees": chain, "star_counterexample": counterexample}
    ok = all(chain)
    return [Report("star-check", digest, "pass" if ok else "fail", None if ok else counterexample, counts)]


def cmd_blockmap(args) -> list[Report]:
    d, digest = load_blockmap(args.source)
    counts: dict[str, Any] = {"alphabet": d.size, "n": d.n}
    if args.action == "permutive":
        verdict = fs.is_left_permutive(d)
        counterexample = None if verdict else {"prefix": verdict.counterexample, **verdict.details}
        return [Report("permutive", digest, "pass" if verdict else "fail", counterexample, counts)]
    length = d.n + 3 if args.len is None else args.len
    if length < d.n + 1:
        raise InputError(f"--len must be at least n + 1 = {d.n + 1}")
    if d.size ** length > 10**7 and not args.force:
        raise InputError(f"{d.size}^{length} windows exceed the safety cap (use --force)")
    verdict = fs.verify_star_commute_fullshift(d, length)
    counts.update(length=length, **verdict.details, left_permutive=bool(fs.is_left_permutive(d)))
    return [Report("star-check", digest, "pass" if verdict else "fail", verdict.counterexample, counts)]


def cmd_sweep(args) -> list[Report]:
    if args.family == "tiles":
        qs = [int(a) for a in args.q.split(",")]
        if min(qs) < 2:
            raise InputError("--q values must be at least 2")
        instances = sweeps.tile_instances(qs, args.exhaustive_up_to, args.samples, args.seed)
        if len(instances) > MAX_TILE_INSTANCES and not args.force:
            raise InputError(f"{len(instances)} instances exceed the safety cap {MAX_TILE_INSTANCES} (use --force)")
        result = sweeps.sweep_tiles(instances)
        label = f"tiles q={args.q} samples={args.samples} seed={args.seed}"
    else:
        ns = range(1, args.max_n + 1)
        tables = sum(args.alphabet ** (args.alphabet ** n) for n in ns)
        if tables > MAX_BLOCK_TABLES and not args.force:
            raise InputError(f"{tables} tables exceed the safety cap {MAX_BLOCK_TABLES} (use --force)")
        result = sweeps.sweep_blockmaps(args.alphabet, ns, args.extra)
        label = f"blockmaps A={args.alphabet} n<={args.max_n} L=n+{args.extra}"
    counts = {"instances": result.instances, "mismatches": len(result.mismatches), **result.counts}
    counterexample = result.mismatches[0] if result.mismatches else None
    return [Report("sweep", _digest(label.encode()), "pass" if result else "fail", counterexample, counts)]


def _require_valid_basic(bd: bdm.BasicData) -> None:
    report = bdm.validate_basic_data(bd)
    if not report.ok:
        raise InputError("invalid basic data: " + "; ".join(f"{c.name}: {c.detail}" for c in report.failures()))


def _require_valid_skeleton(g: sk.KGraphSkeleton) -> None:
    report = sk.validate(g)
    bad = [c for c in report.failures() if c.name in ("structure", "squares", "factorization")]
    if bad:
        raise InputError("invalid skeleton: " + "; ".join(f"{c.name}: {c.detail}" for c in bad))


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="one JSON record per check")
    common.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-determinism)")

    parser = argparse.ArgumentParser(prog="starmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("file")
        p.add_argument("--kind", choices=["basic", "skeleton", "blockmap"], help="override format detection")
        return p

    p = with_file("validate", "check tile/corner or skeleton axioms")
    p.set_defaults(run=cmd_validate)

    p = with_file("enumerate", "count vertices, edges or paths")
    p.add_argument("--what", choices=["vertices", "edges", "paths"], default="vertices")
    p.add_argument("--degree", default="1,1", help="path degree for --what paths")
    p.add_argument("--bound", type=int, default=4, help="largest total degree enumerated")
    p.add_argument("--force", action="store_true")
    p.add_argument("--list", action="store_true", help="print the paths themselves")
    p.set_defaults(run=cmd_enumerate)

    p = with_file("coaligned", "decide 1-coalignment")
    p.add_argument("--method", choices=["brute", "criterion", "both"], default="both")
    p.set_defaults(run=cmd_coaligned)

    p = with_file("star-check", "verify that the coordinate shifts *-commute")
    p.add_argument("--depth", default="2,2")
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--force", action="store_true")
    p.set_defaults(run=cmd_star_check)

    p = sub.add_parser("blockmap", parents=[common], help="block map checks")
    p.add_argument("source", help="block map file or builtin name")
    p.add_argument("action", choices=["permutive", "star-check"])
    p.add_argument("--len", type=int, default=None, help="window length (default n + 3)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(run=cmd_blockmap)

    p = sub.add_parser("sweep", parents=[common], help="exhaustive theorem sweeps")
    p.add_argument("--family", choices=["tiles", "blockmaps"], required=True)
    p.add_argument("--q", default="2,3,4,5,6", help="alphabet sizes for the tile sweep")
    p.add_argument("--exhaustive-up-to", type=int, default=4)
    p.add_argument("--samples", type=int, default=200, help="random instances per large q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--extra", type=int, default=3, help="window length is n + extra")
    p.add_argument("--force", action="store_true")
    p.set_defaults(run=cmd_sweep)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        reports = args.run(args)
    except InputError as exc:
        reports = [Report(args.command, "-", "error", counts={"message": str(exc)})]
    elapsed = time.perf_counter() - start
    for report in reports:
        if args.timing:
            report.elapsed = elapsed
        print(report.to_json() if args.json else report.to_text())
    return max(EXIT[r.verdict] for r in reports)


if __name__ == "__main__":
    sys.exit(main())
