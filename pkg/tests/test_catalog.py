from __future__ import annotations

import csv
import io
from fractions import Fraction

import pytest

from nilmin.catalog import (
    CSV_COLUMNS,
    FAMILIES,
    DomainError,
    format_params,
    instantiate,
    parse_params,
    reproduce_tables,
    run_instance,
    sweep,
)
from nilmin.feasibility import solve_positive
from nilmin.ricci import soliton_decomposition
from nilmin.weights import gram_matrix, weight_support

F = Fraction


def test_instantiate_expectations():
    assert instantiate("h4", {"t": F(1, 4)}).expected_existence is False
    assert instantiate("h5b", {"s": 0, "t": 0}).expected_existence is False
    assert instantiate("h5b", {"s": 0, "t": 1}).expected_existence is True
    assert instantiate("h26plus", {"e": 1}).expected_existence is False
    assert instantiate("h26plus", {"e": -1}).expected_existence is False
    assert instantiate("h4", {"t": -1}).expected_canonical is True


@pytest.mark.parametrize(
    "name,params",
    [("h5b", {"s": 1, "t": 0}), ("h5b", {"s": -1, "t": 3}), ("h26plus", {"e": 2}), ("h4", {}), ("h7", {"x": 1})],
)
def test_domain_errors(name, params):
    with pytest.raises(DomainError):
        instantiate(name, params)


def test_unknown_family():
    with pytest.raises(KeyError):
        instantiate("h99", {})


def test_param_parsing():
    assert parse_params("s=1/2, t=-3") == {"s": F(1, 2), "t": F(-3)}
    assert parse_params("s=1;t=0") == {"s": F(1), "t": F(0)}
    assert format_params({"s": F(1, 2), "t": F(0)}) == "s=1/2;t=0"
    with pytest.raises(ValueError):
        parse_params("s")


def test_sweep_examples():
    rep = sweep("h11a", grid=[(F(-1),), (F(1, 2),)])
    assert [r.existence_computed for r in rep.rows] == [True, True]
    rep = sweep("h11b", grid=[(F(2),), (F(3),)])
    assert [r.existence_computed for r in rep.rows] == [True, True]
    rep = sweep("h5b", grid=[(0, 0), (0, 1), (F(1, 2), F(3, 4))])
    assert [r.existence_computed for r in rep.rows] == [False, True, True]
    row = sweep("h7").rows[0]
    assert row.existence_computed and row.canonical_minimal_computed


def test_sweep_skips_out_of_domain_points():
    rep = sweep("h5c", grid=[(0, 0), (0, F(1, 2))])
    assert len(rep.rows) == 1 and len(rep.skipped) == 1


@pytest.mark.parametrize(
    "name,params,canonical",
    [("h12", {"s": F(1, 2), "t": F(1, 2)}, True), ("h12", {"s": 1, "t": 1}, False), ("h16", {"s": 0, "t": 1}, True)],
)
def test_canonical_points(name, params, canonical):
    row = run_instance(instantiate(name, params))
    assert row.existence_computed is True
    assert row.canonical_minimal_computed is canonical


def test_every_family_has_a_grid():
    for fam in FAMILIES.values():
        assert fam.grid
        if len(fam.params) >= 1 and fam.name not in ("h19minus", "h26plus"):
            assert len(fam.grid) >= 3


def test_canonical_true_implies_feasible():
    for fam in FAMILIES.values():
        for point in fam.grid:
            inst = instantiate(fam.name, dict(zip(fam.params, point)))
            if inst.expected_canonical:
                assert soliton_decomposition(inst.bracket).exists
                assert solve_positive(gram_matrix(weight_support(inst.bracket))).feasible


def test_table_csv_shape_and_determinism():
    rep = reproduce_tables(names=["h4", "h26plus", "mu_t"])
    text = rep.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + len(rep.rows)
    assert text == reproduce_tables(names=["h4", "h26plus", "mu_t"]).to_csv()
    h4q = next(r for r in rep.rows if r.family == "h4" and r.params == "t=1/4")
    assert h4q.existence_computed is False and h4q.match
