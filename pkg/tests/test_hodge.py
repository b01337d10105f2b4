from __future__ import annotations

from fractions import Fraction

import pytest

from cyclohodge._nt import prime_power, prime_powers_between, totient
from cyclohodge.fourier import h_function
from cyclohodge.galmod import max_simple_dim
from cyclohodge.hodge import (ELLIPTIC_EXCEPTIONS, TheoremViolation, center_report, cm_type,
                              elliptic_divisor_form, elliptic_split_check,
                              elliptic_statement_form, jacobian_dim, subvariety_bound,
                              zero_level_report)


def test_cm_type_examples():
    rec = cm_type(2, 5)
    assert rec.d == 1 and rec.n_sigma == {1: 0, 2: 0, 3: 1, 4: 1}
    rec = cm_type(4, 3)
    assert rec.d == 3 and rec.n_sigma == {1: 1, 2: 2}


def test_cm_type_h_is_h_function():
    for n, q in [(2, 5), (3, 8), (5, 9), (7, 16)]:
        assert cm_type(n, q).h() == h_function(n, q)


def test_cm_type_total_is_genus():
    for n, q in [(3, 5), (4, 7), (5, 9), (3, 16)]:
        assert sum(cm_type(n, q).n_sigma.values()) == (n - 1) * totient(q) // 2


def test_jacobian_dim():
    assert jacobian_dim(3, 2) == 1
    assert jacobian_dim(4, 3) == 3
    assert jacobian_dim(5, 7) == 12
    with pytest.raises(ValueError):
        jacobian_dim(4, 2)


class TestCenterReport:
    def test_3_2_2(self):
        rep = center_report(2, 3, 2)
        assert rep.level_dims == [1, 3]
        assert (rep.tower_dim, rep.ambient_dim, rep.exotic_gap) == (3, 4, True)

    def test_5_1_2(self):
        rep = center_report(2, 5, 1)
        assert rep.level_dims == [2] and rep.tower_dim == 2 and not rep.exotic_gap

    def test_2_2_3(self):
        rep = center_report(3, 2, 2)
        assert rep.level_dims == [0, 1] and rep.tower_dim == 1
        assert rep.subvariety_bound is None

    def test_p2_gap_starts_at_r3(self):
        assert not center_report(3, 2, 2).exotic_gap
        assert center_report(3, 2, 3).exotic_gap

    def test_flags_and_json(self):
        rep = center_report(4, 3, 2, assume_large_galois=True)
        blob = rep.to_json()
        assert blob["assume_large_galois"] is True
        assert any("S_n" in note for note in blob["notes"])

    def test_invalid(self):
        with pytest.raises(ValueError):
            center_report(3, 3, 2)
        with pytest.raises(ValueError):
            center_report(3, 2, 1)

    def test_zero_level(self):
        rep = zero_level_report(3)
        assert rep.tower_dim == 0 and rep.ambient_dim == 0 and rep.jacobian_dim == 1

    def test_violation_is_raised(self, monkeypatch):
        from cyclohodge import hodge
        monkeypatch.setattr(hodge, "tower_center_dim", lambda t: 1)
        with pytest.raises(TheoremViolation) as info:
            center_report(2, 3, 2)
        assert info.value.witness["rank"] == 1


class TestBounds:
    @pytest.mark.parametrize("p,r,expected", [(5, 1, 2), (3, 2, 2), (2, 4, 2), (2, 3, 1),
                                              (2, 6, 8), (7, 1, 2), (11, 1, 4)])
    def test_values(self, p, r, expected):
        assert subvariety_bound(p, r) == expected

    def test_matches_orbit_maximum(self):
        for q in prime_powers_between(3, 256):
            p, r = prime_power(q)
            if p == 2 and r < 3:
                continue
            assert subvariety_bound(p, r) == max_simple_dim(q), q

    def test_rejects(self):
        with pytest.raises(ValueError):
            subvariety_bound(2, 2)
        with pytest.raises(ValueError):
            subvariety_bound(4, 1)


class TestElliptic:
    def test_examples(self):
        assert not elliptic_split_check(24)
        assert elliptic_split_check(7)
        assert elliptic_split_check(18)

    def test_small_and_exceptional(self):
        for d in list(range(1, 5)) + sorted(ELLIPTIC_EXCEPTIONS):
            assert not elliptic_split_check(d)

    def test_forms_agree(self):
        assert all(elliptic_divisor_form(d) == elliptic_statement_form(d) for d in range(1, 3000))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            elliptic_split_check(0)


def test_theorem_violation_message():
    err = TheoremViolation("demo", {"q": Fraction(1, 2)})
    assert "demo" in str(err) and isinstance(err, AssertionError)
