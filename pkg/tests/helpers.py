"""Shared strategies and oracles for the test modules."""

from __future__ import annotations

import cmath
import math

from hypothesis import strategies as st

from cyclohodge._nt import totient
from cyclohodge.exact import CycloElement

MODULI = [1, 3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 25, 27]


def direct_value(x: CycloElement) -> complex:
    """Plain complex evaluation of the power-basis vector (independent of embed)."""
    z = cmath.exp(2j * cmath.pi / x.modulus)
    return sum(float(c) * z**i for i, c in enumerate(x.coeffs))


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def elements(draw, modulus=None):
    m = draw(st.sampled_from(MODULI)) if modulus is None else modulus
    coeffs = draw(st.lists(small_fractions, min_size=totient(m), max_size=totient(m)))
    den = math.lcm(*(c.denominator for c in coeffs))
    return CycloElement.from_ints(m, [int(c * den) for c in coeffs], den)


@st.composite
def element_pairs(draw, count=2):
    m = draw(st.sampled_from(MODULI))
    return tuple(draw(elements(m)) for _ in range(count))
