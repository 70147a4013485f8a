"""Block maps, sliding block codes on finite windows, and left permutivity.

Windows are tuples of symbols ``0..size-1`` standing in for one-sided
sequences.  ``sigma(y) = tau_d(z)`` is read on the common overlap of the two
finite words.

What :func:`verify_star_commute_fullshift` proves for a window length ``L``:
for every ``z`` in ``A^L`` and every ``y`` with ``y[1:] == tau_d(z)``, there is
exactly one ``x`` of length ``L + 1`` with ``x[1:] == z`` and
``tau_d(x) == y``.  Left permutivity is the exact criterion for the
infinite statement; the window check corroborates it.

Block-map files: a header ``<alphabet size> <n>`` followed by one line
``<word> <value>`` per word, the word written as concatenated digits (or
comma-separated symbols when the alphabet has more than ten letters).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .verdict import Verdict

Window = tuple[int, ...]


class BlockMapFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("alphabet needs at least one symbol")

    @property
    def symbols(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class BlockMap:
    """``d: A^n -> A`` stored as a table indexed by the base-|A| value of the word."""

    size: int
    n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.size < 1 or self.n < 1:
            raise ValueError("alphabet size and window length must be positive")
        if len(self.table) != self.size**self.n:
            raise ValueError(f"table needs {self.size ** self.n} entries, got {len(self.table)}")
        if any(not 0 <= v < self.size for v in self.table):
            raise ValueError("table values must be alphabet symbols")

    @classmethod
    def from_function(cls, size: int, n: int, fn: Callable[..., int]) -> "BlockMap":
        return cls(size, n, tuple(fn(*word) for word in words(size, n)))

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.size)

    def index(self, word: Sequence[int]) -> int:
        k = 0
        for a in word:
            k = k * self.size + a
        return k

    def __call__(self, word: Sequence[int]) -> int:
        if len(word) != self.n:
            raise ValueError(f"block map reads words of length {self.n}")
        return self.table[self.index(word)]

    def section(self, prefix: Sequence[int]) -> tuple[int, ...]:
        """The values a -> d(a x_1 ... x_{n-1}) for a fixed tail word."""
        return tuple(self((a, *prefix)) for a in range(self.size))


def words(size: int, length: int) -> Iterator[Window]:
    return product(range(size), repeat=length)


def apply_code(d: BlockMap, x: Sequence[int]) -> Window:
    """tau_d(x)_i = d(x_i ... x_{i+n-1}) on a finite window."""
    n, s, table = d.n, d.size, d.table
    if len(x) < n:
        raise ValueError(f"window of length {len(x)} is shorter than the block length {n}")
    top = s ** (n - 1)
    k = 0
    for a in x[: n - 1]:
        k = k * s + a
    out = []
    for pos in range(n - 1, len(x)):
        k = (k % top) * s + x[pos] if n > 1 else x[pos]
        out.append(table[k])
    return tuple(out)


def shift(x: Sequence[int]) -> Window:
    return tuple(x[1:])


def is_left_permutive(d: BlockMap) -> Verdict:
    for prefix in words(d.size, d.n - 1):
        sec = d.section(prefix)
        if len(set(sec)) != d.size:
            return Verdict(False, prefix, {"section": sec})
    return Verdict(True)


def _check_lift_inputs(d: BlockMap, y: Sequence[int], z: Sequence[int]) -> None:
    if len(z) < d.n:
        raise ValueError(f"z must have length at least {d.n}")
    tail, image = tuple(y[1:]), apply_code(d, z)
    overlap = min(len(tail), len(image))
    if overlap < 1:
        raise ValueError("sigma(y) and tau_d(z) have no overlap to compare")
    if tail[:overlap] != image[:overlap]:
        raise ValueError("sigma(y) and tau_d(z) disagree on their overlap")


def star_lift_fullshift(d: BlockMap, y: Sequence[int], z: Sequence[int]) -> list[Window]:
    """All x = a z with d(a z_1 ... z_{n-1}) = y_1, ascending in a."""
    _check_lift_inputs(d, y, z)
    y, z = tuple(y), tuple(z)
    prefix = z[: d.n - 1]
    lifts = [(a, *z) for a in range(d.size) if d((a, *prefix)) == y[0]]
    for x in lifts:
        image = apply_code(d, x)
        m = min(len(image), len(y))
        assert image[:m] == y[:m]
    return lifts


def star_lift_bruteforce(d: BlockMap, y: Sequence[int], z: Sequence[int]) -> list[Window]:
    """Search every word of length len(z)+1 for x with shift(x) == z and tau_d(x) ~ y."""
    _check_lift_inputs(d, y, z)
    y, z = tuple(y), tuple(z)
    out = []
    for x in words(d.size, len(z) + 1):
        if x[1:] != z:
            continue
        image = apply_code(d, x)
        m = min(len(image), len(y))
        if image[:m] == y[:m]:
            out.append(x)
    return out


def verify_star_commute_fullshift(d: BlockMap, length: int | None = None) -> Verdict:
    """Exhaustive lift existence and uniqueness for all z of the given length."""
    L = d.n + 3 if length is None else length
    if L < d.n + 1:
        raise ValueError(f"window length must be at least n + 1 = {d.n + 1}")
    s, n = d.size, d.n
    table = d.table
    head = s ** (n - 1)
    checked = 0
    for z in words(s, L):
        image = apply_code(d, z)
        prefix_key = 0
        for a in z[: n - 1]:
            prefix_key = prefix_key * s + a
        for y1 in range(s):
            y = (y1, *image)
            lifts = []
            for a in range(s):
                if table[a * head + prefix_key] == y1:
                    x = (a, *z)
                    if apply_code(d, x) == y:
                        lifts.append(x)
            checked += 1
            if len(lifts) != 1:
                return Verdict(False, {"y": y, "z": z, "lifts": lifts}, {"instances": checked})
    return Verdict(True, None, {"instances": checked})


def all_block_maps(size: int, n: int) -> Iterator[BlockMap]:
    for table in product(range(size), repeat=size**n):
        yield BlockMap(size, n, table)


# --------------------------------------------------------------------------
# named examples


def bar() -> BlockMap:
    """Swap 0 and 1 letter by letter."""
    return BlockMap(2, 1, (1, 0))


def drop_first(size: int = 2) -> BlockMap:
    """d(ab) = b, whose sliding block code is the shift itself."""
    return BlockMap.from_function(size, 2, lambda a, b: b)


FOUR_LETTER_ROWS = (
    (0, 0, 1, 1),
    (3, 3, 2, 2),
    (2, 2, 3, 3),
    (1, 1, 0, 0),
)


def four_letter() -> BlockMap:
    """The 4-letter two-block table; row is the first letter, column the second."""
    return BlockMap(4, 2, tuple(v for row in FOUR_LETTER_ROWS for v in row))


def mod_sum(n: int) -> BlockMap:
    """d(a_1 ... a_n) = a_1 + ... + a_n mod n over the alphabet {0..n-1}."""
    return BlockMap.from_function(n, n, lambda *word: sum(word) % n)


def builtin_examples() -> dict[str, BlockMap]:
    examples = {"bar": bar(), "drop_first": drop_first(), "four_letter": four_letter()}
    for n in range(2, 6):
        examples[f"mod_sum_{n}"] = mod_sum(n)
    return examples


def builtin(name: str) -> BlockMap:
    if name.startswith("mod_sum_") and name[8:].isdigit():
        return mod_sum(int(name[8:]))
    try:
        return builtin_examples()[name]
    except KeyError:
        raise KeyError(f"unknown builtin block map {name!r}") from None


# --------------------------------------------------------------------------
# file format


def _word_text(word: Sequence[int], size: int) -> str:
    return "".join(map(str, word)) if size <= 10 else ",".join(map(str, word))


def dumps(d: BlockMap) -> str:
    lines = [f"{d.size} {d.n}"]
    lines += [f"{_word_text(w, d.size)} {v}" for w, v in zip(words(d.size, d.n), d.table)]
    return "\n".join(lines) + "\n"


def loads(text: str) -> BlockMap:
    rows = [
        (lineno, line.split("#", 1)[0].split())
        for lineno, line in enumerate(text.splitlines(), 1)
    ]
    rows = [(lineno, fields) for lineno, fields in rows if fields]
    if not rows:
        raise BlockMapFormatError("empty block map file")
    lineno, header = rows[0]
    if len(header) != 2 or not all(f.isdigit() for f in header):
        raise BlockMapFormatError("header must be '<alphabet size> <n>'", lineno)
    size, n = int(header[0]), int(header[1])
    if size < 1 or n < 1:
        raise BlockMapFormatError("alphabet size and n must be positive", lineno)
    table: dict[Window, int] = {}
    for lineno, fields in rows[1:]:
        if len(fields) != 2:
            raise BlockMapFormatError("expected '<word> <value>'", lineno)
        raw, value = fields
        try:
            word = tuple(int(c) for c in (raw.split(",") if size > 10 else raw))
            v = int(value)
        except ValueError:
            raise BlockMapFormatError(f"non-numeric entry {raw!r} {value!r}", lineno) from None
        if len(word) != n or any(not 0 <= a < size for a in word):
            raise BlockMapFormatError(f"{raw!r} is not a word of length {n} over {size} symbols", lineno)
        if not 0 <= v < size:
            raise BlockMapFormatError(f"value {v} is not a symbol", lineno)
        if word in table:
            raise BlockMapFormatError(f"duplicate word {raw!r}", lineno)
        table[word] = v
    missing = [w for w in words(size, n) if w not in table]
    if missing:
        raise BlockMapFormatError(
            f"table is not total: {len(missing)} words missing, first {_word_text(missing[0], size)}"
        )
    return BlockMap(size, n, tuple(table[w] for w in words(size, n)))
