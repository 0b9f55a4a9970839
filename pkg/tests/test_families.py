import pytest

from apolarity.exactalg import QQ, PrimeField
from apolarity.families import (RATIONAL_BOUND, FamilyDescriptor, UnsupportedNError, auxiliary_generators,
                                family_cubic, family_monomials, permute_form, random_cubic, shift_form,
                                variable_index)
from apolarity.ring import format_form, parse_form


def expected_terms(n):
    if n in (6, 8):
        return 8
    m = n // 3
    return {0: 4 * m, 1: 5 * m, 2: 6 * m}[n % 3]


@pytest.mark.parametrize("n", [1, 2, 5, 7])
def test_unsupported(n):
    with pytest.raises(UnsupportedNError):
        FamilyDescriptor.for_n(n)
    with pytest.raises(UnsupportedNError):
        family_cubic(n)


@pytest.mark.parametrize("n", [6, 8, 9, 10, 11, 12, 13, 14, 18, 19, 20])
def test_term_counts_and_coefficients(n):
    f = family_cubic(n)
    assert len(f.coeffs) == expected_terms(n) == len(family_monomials(n))
    assert set(f.coeffs.values()) == {1}
    assert f.degree == 3 and f.dual and f.ctx.n == n


def test_variable_order():
    d = FamilyDescriptor.for_n(11)
    assert d.kind == "ThreeMplus2" and d.m == 3
    assert d.names() == ("a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3", "d", "e")
    assert variable_index("b2", d) == 4
    assert variable_index("e", d) == 10
    with pytest.raises(KeyError):
        variable_index("a4", d)


def test_special_six_text():
    f = family_cubic(6)
    g = parse_form("a1*b1*c1 + a2*b2*c2 + a1*a2^2 + b1*b2^2 + c1*c2^2 + a1^3 + b1^3 + c1^3", f.ctx)
    assert f == g


def test_special_eight_text():
    f = family_cubic(8)
    g = parse_form("a1*b1*c1 + a2*b2*c2 + a1*a2^2 + b1*b2^2 + c1*c2^2 + a1*d*e + b1^2*d + c1^2*e", f.ctx)
    assert f == g


def test_nine_text():
    f = family_cubic(9)
    txt = " + ".join(f"a{i}*b{i}*c{i} + a{i}*a{j}^2 + b{i}*b{j}^2 + c{i}*c{j}^2"
                     for i, j in ((1, 2), (2, 3), (3, 1)))
    assert f == parse_form(txt, f.ctx)


def test_indices_wrap_cyclically():
    f = family_cubic(13)
    assert f == family_cubic(13)
    assert "a4*b1*d" in format_form(f)


@pytest.mark.parametrize("n", [9, 10, 11, 12, 13, 14, 18, 19, 20])
def test_cyclic_shift_fixes_family(n):
    f = family_cubic(n)
    d = FamilyDescriptor.for_n(n)
    for step in range(d.m):
        assert shift_form(f, d, step) == f


@pytest.mark.parametrize("n", [9, 12, 18])
def test_block_permutations_fix_three_m(n):
    from itertools import permutations

    f = family_cubic(n)
    m = n // 3
    for p in permutations(range(3)):
        perm = [p[i // m] * m + i % m for i in range(n)]
        assert permute_form(f, perm) == f


def test_random_cubic_reproducible():
    F = PrimeField(32003)
    assert random_cubic(6, F, seed=3) == random_cubic(6, F, seed=3)
    assert random_cubic(6, F, seed=3) != random_cubic(6, F, seed=4)
    g = random_cubic(5, QQ, seed=1)
    assert all(abs(v) <= RATIONAL_BOUND for v in g.coeffs.values())


def test_auxiliary_generators():
    assert auxiliary_generators(6) == [] and auxiliary_generators(8) == []
    gens = auxiliary_generators(19)
    assert ("a1", "a2", "a3", "a3") in gens
    assert ("a6", "a1", "a2", "a2") in gens
    assert ("a1", "b1", "c1", "d") in gens
    assert len(gens) == 3 * 6 + 1
    assert len(auxiliary_generators(20)) == 3 * 6 + 2
