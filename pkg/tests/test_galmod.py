from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from cyclohodge._nt import prime_power, totient
from cyclohodge.characters import odd_characters
from cyclohodge.exact import CycloElement
from cyclohodge.fourier import IdentityViolation, OddFunction, fourier_coeff, h_function, units
from cyclohodge.galmod import (ambient_dim, bareiss_rank, dim_V, generates_V,
                               generation_via_characters, half_translate_matrix, max_simple_dim,
                               naive_rank, random_odd_function, tower_center_dim, tower_check,
                               tower_function, translate_matrix, translates_rank)

ODD_MODULI = [3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32]
HALF = Fraction(1, 2)


def full_rows(h: OddFunction):
    return [list(row) for row in translate_matrix(h).entries]


def character_rank(h: OddFunction) -> int:
    """Number of odd characters with a nonzero coefficient: the complex rank of the module."""
    return sum(not fourier_coeff(h, chi).is_zero() for chi in odd_characters(h.q))


def test_zero_function():
    assert translates_rank(h_function(1, 7)) == 0
    assert not generates_V(h_function(1, 7))


def test_q5_n2():
    h = h_function(2, 5)
    rows = full_rows(h)
    assert rows[0] == [HALF, HALF, -HALF, -HALF]
    assert translates_rank(h) == 2 == dim_V(5)
    assert generates_V(h)


def test_q2():
    assert translates_rank(h_function(3, 2)) == 0
    assert dim_V(2) == 0


def test_translate_matrix_rows_are_translates():
    h = h_function(3, 16)
    tm = translate_matrix(h)
    for s, row in zip(tm.elements, tm.entries):
        g = h.translate(pow(s, -1, 16))
        assert list(row) == [g(b) for b in tm.elements]


def test_half_block_shape():
    den, block = half_translate_matrix(h_function(2, 9))
    assert den == 2 and block.shape == (3, 3) and block.dtype == np.int64


def test_generation_via_characters_q5():
    ok, coeffs = generation_via_characters(h_function(2, 5))
    assert ok
    i = CycloElement.zeta(4)
    assert {c for _, c in coeffs} == {(1 - i) / 4, (1 + i) / 4}


def test_generation_via_characters_zero():
    ok, coeffs = generation_via_characters(h_function(1, 9))
    assert not ok and all(c.is_zero() for _, c in coeffs)


def test_quadratic_character_mod4():
    h = OddFunction(4, {1: 1, 3: -1})
    assert generation_via_characters(h)[0] and generates_V(h)


def test_unknown_method():
    with pytest.raises(ValueError):
        translates_rank(h_function(2, 5), method="magic")


class TestRankOracles:
    def test_known_matrices(self):
        assert bareiss_rank([[1, 2], [2, 4]]) == 1 == naive_rank([[1, 2], [2, 4]])
        assert bareiss_rank([[0, 0], [0, 0]]) == 0
        assert bareiss_rank([]) == 0 and naive_rank([[]]) == 0
        m = [[2, 3, 5], [7, 11, 13], [17, 19, 23]]
        assert bareiss_rank(m) == 3 == sympy.Matrix(m).rank()

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=7))
    def test_bareiss_matches_sympy(self, rows):
        assert bareiss_rank(rows) == naive_rank(rows) == sympy.Matrix(rows).rank()

    @pytest.mark.parametrize("q", [5, 7, 9, 16, 25])
    def test_methods_agree_on_h(self, q):
        for n in range(2, 12):
            if n % prime_power(q)[0] == 0:
                continue
            h = h_function(n, q)
            expected = naive_rank(full_rows(h))
            assert translates_rank(h) == translates_rank(h, method="bareiss") == expected


@given(st.sampled_from(ODD_MODULI), st.randoms(use_true_random=False))
def test_rank_equals_character_support(q, rnd):
    h = random_odd_function(q, rnd, -2, 2)
    r = translates_rank(h)
    assert r == character_rank(h) == naive_rank(full_rows(h))
    assert generates_V(h) == generation_via_characters(h)[0]


@given(st.sampled_from([16, 25, 27, 32]), st.randoms(use_true_random=False))
def test_sparse_functions_hit_the_bareiss_path(q, rnd):
    # functions supported on a few characters have rank below the block size
    chis = rnd.sample(odd_characters(q), 2)
    vals = {a: Fraction(0) for a in units(q)}
    for chi in chis:
        for a in units(q):
            vals[a] += sum((chi(a) + chi(a).conjugate()).coeffs[:1], Fraction(0))
    h = OddFunction(q, vals)
    assert translates_rank(h) == character_rank(h) == naive_rank(full_rows(h))


def test_random_odd_function_is_seeded():
    a = random_odd_function(25, random.Random(7))
    b = random_odd_function(25, random.Random(7))
    assert a == b and set(a.values) == set(units(25))


class TestTower:
    def test_examples(self):
        t = tower_function(2, 3, 2)
        h1, h2 = t.levels
        assert h1(1) == HALF == h2(1) + h2(4) + h2(7)
        assert h1(2) == -HALF == h2(2) + h2(8) + h2(5)
        assert tower_check(t).passed
        assert tower_center_dim(t) == 3 and ambient_dim(3, 2) == 4

    def test_r1_vacuous(self):
        rep = tower_check(tower_function(2, 5, 1))
        assert rep.passed and rep.checked == 0
        assert tower_center_dim(tower_function(2, 5, 1)) == 2 == ambient_dim(5, 1)

    def test_p2(self):
        t = tower_function(3, 2, 3)
        assert tower_center_dim(t) == 2 and ambient_dim(2, 3) == 3

    def test_failure_has_witness(self):
        t = tower_function(2, 3, 2)
        broken = type(t)(t.p, t.r, t.n, (h_function(5, 3), t.levels[1]))
        rep = tower_check(broken, strict=False)
        assert not rep.passed and rep.failures[0][0] == 1
        with pytest.raises(IdentityViolation):
            tower_check(broken)

    @pytest.mark.parametrize("p,r", [(2, 5), (3, 3), (5, 2), (7, 2)])
    def test_trace_relation(self, p, r):
        for n in range(2, 15):
            if n % p:
                t = tower_function(n, p, r)
                assert tower_check(t).passed
                assert tower_center_dim(t) == totient(p**r) // 2


@pytest.mark.parametrize("q,expected", [(5, 2), (16, 2), (7, 2), (9, 2), (11, 4), (27, 6)])
def test_max_simple_dim(q, expected):
    assert max_simple_dim(q) == expected
