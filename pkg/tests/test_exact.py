from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilmin.exact import GaussianRational, I, QuadraticSurd, format_exact, parse_exact, sign, sqrt_exact


def test_sqrt_exact_rational_and_surd():
    assert sqrt_exact(Fraction(9, 4)) == Fraction(3, 2)
    r = sqrt_exact(8)
    assert isinstance(r, QuadraticSurd) and (r.a, r.b, r.d) == (0, 2, 2)
    assert r * r == 8
    with pytest.raises(ValueError):
        sqrt_exact(-1)


def test_surd_sign_and_order():
    x = QuadraticSurd(1, -1, 2)  # 1 - sqrt 2 < 0
    assert sign(x) == -1
    y = QuadraticSurd(Fraction(3, 2), -1, 2)  # 1.5 - 1.414 > 0
    assert sign(y) == 1


def test_parse_and_format_roundtrip():
    for text in ("1/3", "-7", "0", "2+3*sqrt(5)", "-sqrt(2)", "1/2-1/3*sqrt(7)"):
        v = parse_exact(text)
        assert parse_exact(format_exact(v)) == v
    assert parse_exact("sqrt(12)") == QuadraticSurd(0, 2, 3)
    with pytest.raises(TypeError):
        parse_exact(0.5)
    with pytest.raises(ValueError):
        parse_exact("abc")


@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20).filter(bool), st.sampled_from([2, 3, 5, 7]))
def test_surd_field_inverse(a, b, d):
    x = QuadraticSurd.make(a, b, d)
    assert x * (1 / x) == 1


@given(*(st.fractions(max_denominator=9) for _ in range(4)))
def test_gaussian_rationals_form_a_field(a, b, c, d):
    z, w = GaussianRational(a, b), GaussianRational(c, d)
    assert z * w == w * z
    assert (z * w).conjugate() == z.conjugate() * w.conjugate()
    if w:
        assert (z / w) * w == z
    assert I * I == GaussianRational(-1)


def test_gaussian_rational_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
