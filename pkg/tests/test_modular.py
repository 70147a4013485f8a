from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from starmaps.modular import Modulus, ModulusMismatch, Residue, extended_gcd, inverse, solve_linear


def brute_inverse(a, q):
    return [b for b in range(q) if a * b % q == 1]


def brute_solutions(w, r, q):
    return [x for x in range(q) if w * x % q == r]


def test_inverse_examples():
    assert inverse(Modulus(9)(1)) == Modulus(9)(1)
    assert brute_inverse(3, 7) == [5]
    assert inverse(Modulus(7)(3)) == Modulus(7)(5)
    assert brute_inverse(2, 4) == []
    assert inverse(Modulus(4)(2)) is None


def test_solve_linear_examples():
    m4 = Modulus(4)
    assert [r.value for r in solve_linear(Modulus(11)(1), Modulus(11)(6))] == [6]
    assert brute_solutions(2, 1, 4) == []
    assert solve_linear(m4(2), m4(1)) == []
    assert brute_solutions(2, 2, 4) == [1, 3]
    assert solve_linear(m4(2), m4(2)) == [m4(1), m4(3)]


@pytest.mark.parametrize("q", range(2, 65))
def test_inverse_exists_iff_coprime(q):
    m = Modulus(q)
    for a in range(q):
        inv = inverse(m(a))
        assert (inv is not None) == (gcd(a, q) == 1)
        assert ([inv.value] if inv else []) == brute_inverse(a, q)


@pytest.mark.parametrize("q", range(2, 65))
def test_solution_sets_match_brute_force(q):
    m = Modulus(q)
    for w in range(q):
        g = gcd(w, q)
        for r in range(q):
            found = [x.value for x in solve_linear(m(w), m(r))]
            assert found == brute_solutions(w, r, q)
            assert len(found) in (0, g)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_extended_gcd_bezout(a, b):
    g, x, y = extended_gcd(a, b)
    assert a * x + b * y == g
    assert abs(g) == gcd(a, b)


def test_residues_never_mix():
    with pytest.raises(ModulusMismatch):
        Modulus(4)(1) + Modulus(5)(1)
    with pytest.raises(ModulusMismatch):
        solve_linear(Modulus(4)(1), Modulus(6)(1))


def test_residue_arithmetic_and_invariants():
    m = Modulus(6)
    assert m(5) + m(4) == m(3)
    assert m(2) * m(3) == m(0)
    assert -m(1) == m(5)
    assert m(5).is_unit() and not m(4).is_unit()
    with pytest.raises(ValueError):
        Residue(6, m)
    with pytest.raises(ValueError):
        Modulus(1)
