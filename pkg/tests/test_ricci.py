from __future__ import annotations

from fractions import Fraction

import pytest
from helpers import all_instances, bracket, diagonal_scalings
from hypothesis import given
from hypothesis import strategies as st

from nilmin import linalg
from nilmin.algebra import LieBracket, act, pi_action, standard_J, tensor_inner
from nilmin.ricci import ricci_data, ricci_operator, soliton_decomposition
from oracles import is_derivation, koszul_ricci

F = Fraction
ORACLE_CASES = [
    ("h6", {}),
    ("mu_t", {"t": 2}),
    ("h26plus", {"e": 1}),
    ("h5b", {"s": 1, "t": 1}),
    ("h2", {"s": 1, "t": 0}),
    ("h12", {"s": F(1, 2), "t": F(1, 2)}),
    ("h19minus", {"e": -1}),
]


@pytest.mark.parametrize("name,params", ORACLE_CASES)
def test_closed_form_matches_koszul_oracle(name, params):
    mu = bracket(name, **params)
    assert ricci_operator(mu) == koszul_ricci(mu)


def test_zero_bracket_is_flat():
    data = ricci_data(LieBracket(6))
    assert data.ric == linalg.zeros(6) and data.ric_c == linalg.zeros(6) and data.scal == 0


def test_h6_scalar_curvature():
    assert ricci_data(bracket("h6")).scal == F(-3, 2)


@pytest.mark.parametrize("inst", all_instances(), ids=lambda i: f"{i.family}{i.params}")
def test_ricci_invariants_on_catalog(inst):
    mu = inst.bracket
    data = ricci_data(mu)
    J = standard_J(mu).matrix
    assert data.ric == linalg.transpose(data.ric)
    assert linalg.matmul(data.ric_c, J) == linalg.matmul(J, data.ric_c)
    assert linalg.trace(data.ric) == linalg.trace(data.ric_c) == data.scal == -tensor_inner(mu, mu) / 4


def test_ric_c_equals_ric_when_already_invariant():
    fixed = 0
    for inst in all_instances():
        data = ricci_data(inst.bracket)
        J = standard_J(inst.bracket).matrix
        if linalg.matmul(data.ric, J) == linalg.matmul(J, data.ric):
            assert data.ric_c == data.ric
            fixed += 1
        else:
            assert data.ric_c != data.ric
    assert fixed > 0


@pytest.mark.parametrize("t,expected", [(F(0), True), (F(1), True), (F(2), False), (F(-1), False), (F(1, 2), False)])
def test_example_family_soliton(t, expected):
    assert soliton_decomposition(bracket("mu_t", t=t)).exists is expected


@pytest.mark.parametrize(
    "name,params,expected",
    [("h7", {}, True), ("h4", {"t": -1}, True), ("h4", {"t": 1}, False), ("h16", {"s": 0, "t": 1}, True)],
)
def test_soliton_table_points(name, params, expected):
    assert soliton_decomposition(bracket(name, **params)).exists is expected


@pytest.mark.parametrize("inst", all_instances(), ids=lambda i: f"{i.family}{i.params}")
def test_soliton_reassembles(inst):
    mu = inst.bracket
    sol = soliton_decomposition(mu)
    if not sol.exists:
        assert sol.defect is not None and not sol.defect.is_zero()
        return
    assert pi_action(sol.D, mu).is_zero()
    assert is_derivation(sol.D, mu)
    rc = ricci_data(mu).ric_c
    assert linalg.add(sol.D, linalg.scale(linalg.identity(6), sol.c)) == rc


@given(st.fractions(min_value=F(-4), max_value=F(4), max_denominator=6).filter(bool),
       st.sampled_from(["h2", "h5b", "mu_t", "h26plus", "h7"]))
def test_scale_equivariance(r, name):
    params = {"h2": {"s": 1, "t": 0}, "h5b": {"s": 1, "t": 1}, "mu_t": {"t": 1}, "h26plus": {"e": 1}, "h7": {}}[name]
    mu = bracket(name, **params)
    nu = act(linalg.scale(linalg.identity(6), r), mu)
    assert ricci_operator(nu) == linalg.scale(ricci_operator(mu), 1 / (r * r))
    assert soliton_decomposition(nu).exists == soliton_decomposition(mu).exists


@given(diagonal_scalings())
def test_oracle_agrees_after_scaling(g):
    mu = act(g, bracket("h15", s=1, t=0, c=3))
    assert ricci_operator(mu) == koszul_ricci(mu)
