"""Exact arithmetic in Z/qZ and linear congruences."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional


class ModulusMismatch(ValueError):
    """Raised when residues of different moduli are combined."""


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        quot, rem = divmod(a, b)
        a, b = b, rem
        x0, x1 = x1, x0 - quot * x1
        y0, y1 = y1, y0 - quot * y1
    return a, x0, y0


@dataclass(frozen=True, order=True)
class Modulus:
    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.q!r}")

    def __call__(self, value: int) -> "Residue":
        return Residue(value % self.q, self)

    def elements(self) -> list["Residue"]:
        return [Residue(v, self) for v in range(self.q)]


@dataclass(frozen=True, order=True)
class Residue:
    value: int
    modulus: Modulus

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus.q:
            raise ValueError(f"{self.value} is not reduced modulo {self.modulus.q}")

    @property
    def q(self) -> int:
        return self.modulus.q

    def _check(self, other: "Residue") -> None:
        if not isinstance(other, Residue):
            raise TypeError(f"expected Residue, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"cannot combine residues mod {self.q} and mod {other.q}")

    def __add__(self, other: "Residue") -> "Residue":
        self._check(other)
        return self.modulus(self.value + other.value)

    def __sub__(self, other: "Residue") -> "Residue":
        self._check(other)
        return self.modulus(self.value - other.value)

    def __mul__(self, other: "Residue") -> "Residue":
        self._check(other)
        return self.modulus(self.value * other.value)

    def __neg__(self) -> "Residue":
        return self.modulus(-self.value)

    def is_unit(self) -> bool:
        return gcd(self.value, self.q) == 1

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.q})"


def inverse(a: Residue) -> Optional[Residue]:
    """Multiplicative inverse of ``a``, or None when gcd(a, q) != 1."""
    g, x, _ = extended_gcd(a.value, a.q)
    if g != 1:
        return None
    return a.modulus(x)


def solve_linear(w: Residue, r: Residue) -> list[Residue]:
    """All x with w*x == r (mod q), in ascending order.

    There are either no solutions (gcd(w, q) does not divide r) or exactly
    gcd(w, q) of them, spaced q/g apart.
    """
    w._check(r)
    q = w.q
    g, x, _ = extended_gcd(w.value, q)
    if r.value % g:
        return []
    step = q // g
    base = (x * (r.value // g)) % step
    return [w.modulus(base + k * step) for k in range(g)]
