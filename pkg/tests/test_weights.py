from __future__ import annotations

from fractions import Fraction

import pytest
from helpers import all_instances, bracket, diagonal_scalings
from hypothesis import given

from nilmin import linalg
from nilmin.algebra import LieBracket, act
from nilmin.feasibility import is_psd
from nilmin.weights import (
    DIAGONALITY_EVIDENCE,
    INCONCLUSIVE,
    NICE_BASIS,
    ROOT_DIFFERENCE,
    WeightList,
    WeightRow,
    diagonality_test,
    gram_matrix,
    jnice_status,
    nice_basis_test,
    root_difference_test,
    roots,
    weight_of,
    weight_support,
)
from oracles import weight_by_scaling

F = Fraction

H5_11 = [(-2, 0, 1), (-1, -1, 1), (-1, -1, 1), (-1, -1, 1), (-1, -1, 1), (0, -2, 1), (0, -2, 1)]
U_H5_11 = [
    [5, 3, 3, 3, 3, 1, 1],
    [3, 3, 3, 3, 3, 3, 3],
    [3, 3, 3, 3, 3, 3, 3],
    [3, 3, 3, 3, 3, 3, 3],
    [3, 3, 3, 3, 3, 3, 3],
    [1, 3, 3, 3, 3, 5, 5],
    [1, 3, 3, 3, 3, 5, 5],
]


@pytest.mark.parametrize(
    "ijk,w",
    [((1, 2, 4), (-2, 1, 0)), ((1, 3, 5), (-1, -1, 1)), ((1, 5, 3), (-1, 1, -1)), ((3, 4, 5), (0, -2, 1))],
)
def test_weight_of_examples(ijk, w):
    assert weight_of(*ijk, 3) == w


def test_weight_support_examples():
    assert weight_support(bracket("mu_t", t=2)).weights == [(-2, 1, 0), (-1, -1, 1), (-1, -1, 1), (-1, -1, 1)]
    assert weight_support(bracket("h5b", s=1, t=1)).weights == H5_11
    assert len(weight_support(bracket("h5b", s=0, t=0))) == 5


def test_gram_examples():
    assert gram_matrix(weight_support(bracket("mu_t", t=2))) == [[5, 1, 1, 1], [1, 3, 3, 3], [1, 3, 3, 3], [1, 3, 3, 3]]
    assert gram_matrix(weight_support(bracket("h5b", s=1, t=1))) == U_H5_11
    assert gram_matrix(weight_support(bracket("h26plus", e=1))) == [
        [5, 3, 1, 3, 1], [3, 3, -1, 3, -1], [1, -1, 3, -1, 3], [3, 3, -1, 3, -1], [1, -1, 3, -1, 3],
    ]


def test_roots():
    assert roots(1) == frozenset()
    assert roots(2) == {(1, -1), (-1, 1)}
    assert roots(3) == {(1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1)}


def test_nice_basis_examples():
    assert nice_basis_test(bracket("h26plus", e=1))
    assert not nice_basis_test(bracket("h5b", s=1, t=1))
    assert nice_basis_test(bracket("mu_t", t=2))


def test_root_difference_examples():
    assert root_difference_test(weight_support(bracket("mu_t", t=2)))
    assert not root_difference_test(weight_support(bracket("h5b", s=1, t=1)))
    assert root_difference_test(WeightList(3, (WeightRow((-1, -1, 1), (1, 3, 5)),)))


def test_diagonality_examples():
    assert diagonality_test(bracket("h5b", s=1, t=1), samples=32).status == DIAGONALITY_EVIDENCE
    # an off-pair entry makes Ric^c leave the torus algebra at once
    corrupted = LieBracket(6, {**bracket("h6").entries, (1, 3, 6): F(1)})
    res = diagonality_test(corrupted, samples=32)
    assert res.status == INCONCLUSIVE and res.failing_sample == 0


def test_h2_canonical_bracket_is_not_in_a_jnice_space():
    # a sampled scaling gives an exact off-torus Ric^c, so the weight space of the
    # canonical h2 bracket is not J-nice; the pipeline reaches its verdict through
    # an orbit representative instead (see test_pipeline)
    res = diagonality_test(bracket("h2", s=1, t=0), samples=32)
    assert res.status == INCONCLUSIVE


def test_cascade_examples():
    assert jnice_status(bracket("h26plus", e=1)).status == NICE_BASIS
    # the example family has a nice basis, which the cascade checks first
    h11 = bracket("mu_t", t=2)
    assert jnice_status(h11).status == NICE_BASIS
    assert root_difference_test(weight_support(h11))
    assert jnice_status(bracket("h5b", s=1, t=1)).status == DIAGONALITY_EVIDENCE
    assert jnice_status(bracket("h11a", t=-1)).status in (NICE_BASIS, ROOT_DIFFERENCE)


def test_diagonality_is_deterministic():
    mu = bracket("h5b", s=1, t=1)
    assert diagonality_test(mu, samples=8, seed=5) == diagonality_test(mu, samples=8, seed=5)


@pytest.mark.parametrize("inst", all_instances(), ids=lambda i: f"{i.family}{i.params}")
def test_weight_properties_on_catalog(inst):
    mu = inst.bracket
    w = weight_support(mu)
    for row in w:
        assert sum(row.weight) == -1
        assert row.weight == weight_by_scaling(mu, *row.source)
    assert [r.source for r in w] == sorted(r.source for r in w)
    U = gram_matrix(w)
    assert all(isinstance(x, int) for r in U for x in r)
    assert U == linalg.transpose(U)
    assert is_psd(U)
    if nice_basis_test(mu):
        assert diagonality_test(mu, samples=8).status == DIAGONALITY_EVIDENCE


@given(diagonal_scalings())
def test_weight_support_is_scale_invariant(g):
    for mu in (bracket("h5b", s=1, t=1), bracket("h26plus", e=-1), bracket("h14", s=2, t=0, c=3)):
        assert weight_support(act(g, mu)).weights == weight_support(mu).weights
