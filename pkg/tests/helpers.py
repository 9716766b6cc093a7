from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from nilmin.catalog import FAMILIES, instantiate


def bracket(name, **params):
    return instantiate(name, params).bracket


def all_instances():
    out = []
    for fam in FAMILIES.values():
        for point in fam.grid:
            out.append(instantiate(fam.name, dict(zip(fam.params, point))))
    return out


small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)
positive_fractions = st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5).filter(lambda x: x > 0)


def realify_complex(re_part, im_part):
    """n x n complex matrix (given by real and imaginary parts) as a J-commuting 2n x 2n real matrix."""
    n = len(re_part)
    g = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            x, y = re_part[a][b], im_part[a][b]
            g[2 * a][2 * b] = x
            g[2 * a][2 * b + 1] = -y
            g[2 * a + 1][2 * b] = y
            g[2 * a + 1][2 * b + 1] = x
    return g


@st.composite
def complex_linear_maps(draw, n=3):
    re_part = [[draw(small_fractions) for _ in range(n)] for _ in range(n)]
    im_part = [[draw(small_fractions) for _ in range(n)] for _ in range(n)]
    return realify_complex(re_part, im_part)


@st.composite
def diagonal_scalings(draw, n=3):
    vals = [draw(positive_fractions) for _ in range(n)]
    d = 2 * n
    g = [[Fraction(0)] * d for _ in range(d)]
    for a in range(d):
        g[a][a] = vals[a // 2]
    return g
