from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from cyclohodge._nt import divisors, legendre, totient
from cyclohodge.characters import (DirichletCharacter, all_characters, character_from_values,
                                   conductor, eval_char, induce, is_odd, legendre_character,
                                   odd_characters, restrict, restrict_to_conductor,
                                   value_notation)
from cyclohodge.exact import CycloElement

MODULI = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49]


def coset_conductor(chi: DirichletCharacter) -> int:
    """Smallest d | q such that chi(a) depends only on a mod d (over units)."""
    q = chi.modulus
    us = [a for a in range(q) if math.gcd(a, q) == 1]
    for d in divisors(q):
        seen = {}
        if all(seen.setdefault(a % d, chi.log(a)) == chi.log(a) for a in us):
            return d
    raise AssertionError


def test_counts_and_orders():
    assert len(all_characters(2)) == 1
    assert sorted(chi.order for chi in all_characters(5)) == [1, 2, 4, 4]
    chars8 = all_characters(8)
    assert len(chars8) == 4 and all(2 % chi.order == 0 for chi in chars8)


def test_eval_examples():
    triv = DirichletCharacter(5, (0,))
    assert eval_char(triv, 7) == 1
    assert eval_char(triv, 5) == 0
    chi = character_from_values(5, [(1, 4)])
    assert chi(2) == CycloElement.zeta(4)
    assert is_odd(chi) and chi(4) == -1
    assert not is_odd(triv)


def test_conductor_examples():
    chars = all_characters(9)
    assert conductor(DirichletCharacter(9, (0,))) == 1
    assert [c.conductor for c in chars if c.order == 2] == [3]
    assert {c.conductor for c in chars if c.order == 6} == {9}


def test_restrict_primitive_is_identity():
    for chi in all_characters(25):
        if chi.is_primitive():
            assert restrict_to_conductor(chi) == chi


def test_induce_vanishes_on_multiples():
    chi = induce(legendre_character(3), 9)
    assert [value_notation(chi, a) for a in range(9)] == ["0", "1", "-1", "0", "1", "-1",
                                                        "0", "1", "-1"]
    assert chi.conductor == 3


def test_legendre_matches_euler_criterion():
    for p in [3, 5, 7, 11, 13, 23, 43]:
        chi = legendre_character(p)
        for a in range(1, p):
            assert chi(a) == legendre(a, p)


def test_bad_exponent_count():
    with pytest.raises(ValueError):
        DirichletCharacter(16, (1,))


def test_character_from_values_rejects_bad_order():
    with pytest.raises(ValueError):
        character_from_values(5, [(1, 3)])


def test_restrict_rejects_too_small():
    chi = next(c for c in all_characters(9) if c.order == 6)
    with pytest.raises(ValueError):
        restrict(chi, 3)


def test_mod_one_trivial():
    chi = DirichletCharacter(1, ())
    assert chi(0) == 1 and chi(5) == 1 and chi.conductor == 1


def test_label_and_json():
    chi = character_from_values(5, [(1, 4)])
    assert chi.label() == "chi_5[1]"
    assert chi.to_json() == {"modulus": 5, "exponents": [1], "order": 4,
                             "conductor": 5, "parity": "odd"}
    assert value_notation(chi, 2) == "z4^1"


@pytest.mark.parametrize("q", MODULI)
def test_group_structure(q):
    chars = all_characters(q)
    assert len(chars) == totient(q) == len(set(chars))
    assert len(odd_characters(q)) == (totient(q) // 2 if q > 2 else 0)


@pytest.mark.parametrize("q", MODULI)
def test_conductor_matches_coset_oracle(q):
    for chi in all_characters(q):
        assert chi.conductor == coset_conductor(chi)


@pytest.mark.parametrize("q", MODULI)
def test_orthogonality(q):
    for chi in all_characters(q):
        total = sum((chi(a) for a in range(q)), CycloElement.zero(chi.order))
        assert total == (totient(q) if chi.is_trivial() else 0)


@pytest.mark.parametrize("q", [9, 16, 25, 27, 32])
def test_restrict_induce_roundtrip(q):
    for chi in all_characters(q):
        star = restrict_to_conductor(chi)
        assert star.is_primitive() or star.modulus == 1
        assert induce(star, q) == chi
        assert star.order == chi.order


@given(st.sampled_from(MODULI), st.data())
def test_multiplicative(q, data):
    chi = data.draw(st.sampled_from(all_characters(q)))
    a, b = data.draw(st.integers(0, 3 * q)), data.draw(st.integers(0, 3 * q))
    assert chi(a * b) == chi(a) * chi(b)
    assert chi.conj()(a) == chi(a).conjugate()
    assert chi(a + q) == chi(a)


@given(st.sampled_from([q for q in MODULI if q > 2]), st.data())
def test_parity_is_value_at_minus_one(q, data):
    chi = data.draw(st.sampled_from(all_characters(q)))
    assert chi(q - 1) == (-1 if chi.is_odd() else 1)
