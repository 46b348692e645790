import pytest
from hypothesis import given, settings, strategies as st

from polychrome.colorings import (
    CATALOG,
    ModularFormulaColoring,
    OutOfWindowError,
    TableColoring,
    catalog,
    catalog_target,
    constant_coloring,
    evaluate,
    evaluate_many,
    format_coloring,
    parse_coloring,
    parse_params,
    period_of,
    project,
    uniform_shift_holds,
)
from polychrome.grid import cells_in_window

import numpy as np


def test_evaluate_examples():
    assert evaluate(catalog("p4mv"), (2, 1)) == 2
    c = catalog("p233")
    assert c((0, 0, 0)) == 0
    assert c((0, 1, 0)) == 2
    assert ModularFormulaColoring((1, 1), 4, 1, 2, (3, 1))((0, 0)) == 3


def test_periods():
    assert period_of(catalog("qmv", k=3)) == (8, 8)
    assert period_of(catalog("p24")) == (5, 15, 5)
    assert period_of(constant_coloring(3)) == (1, 1, 1)


@pytest.mark.parametrize("name,params", [
    ("pd_lower", {"d": 5}), ("qmv", {"k": 3}), ("p4mv", {}), ("p4me", {}),
    ("pq2kmv", {"k": 3}), ("p233", {}), ("p24", {}),
])
def test_period_really_is_a_period(name, params):
    c = catalog(name, **params)
    P = period_of(c)
    for cell in cells_in_window(c.arity, 6):
        for j, p in enumerate(P):
            shifted = list(cell)
            shifted[j] += p
            assert c(cell) == c(shifted)


def test_catalog_entries():
    c = catalog("p4me")
    assert (c.coeffs, c.modulus) == ((4, 1), 6)
    c = catalog("qmv", k=2)
    assert (c.coeffs, c.modulus) == ((2, 1), 3)
    c = catalog("p24")
    assert (c.coeffs, c.modulus, c.offset_coord, c.offset_period, c.offsets) == ((1, 1, 1), 5, 2, 3, (0, 1, 2))
    assert catalog_target("qmv", k=3) == (5, 1, "vertex")
    assert catalog("pd_lower", d=4).modulus == 6


def test_catalog_errors():
    with pytest.raises(ValueError):
        catalog("nope")
    with pytest.raises(ValueError):
        catalog("qmv", k=3, z=1)
    with pytest.raises(ValueError):
        catalog("qmv")
    with pytest.raises(ValueError):
        catalog("qmv", k=1)
    assert parse_params("k=3, d=4") == {"k": 3, "d": 4}
    with pytest.raises(ValueError):
        parse_params("k3")


def test_project():
    assert project(catalog("p233"), 1)((0, 1, 0, 5)) == 2
    assert project(catalog("p4mv"), 2)((2, 1, 9, 4)) == 2
    const = project(constant_coloring(2), 1)
    assert const.arity == 3 and const((4, 5, 6)) == 0
    with pytest.raises(ValueError):
        project(catalog("p233"), 0)


def test_table_window():
    cells = cells_in_window(2, 2)
    t = TableColoring(2, 2, 3, {c: sum(c) % 3 for c in cells})
    assert t((1, 1)) == 2
    with pytest.raises(OutOfWindowError):
        t((2, 1))
    with pytest.raises(ValueError):
        TableColoring(2, 2, 3, {c: 0 for c in cells[:-1]})
    with pytest.raises(ValueError):
        TableColoring(2, 1, 2, {c: 5 for c in cells_in_window(2, 1)})


def test_project_table():
    cells = cells_in_window(2, 2)
    t = TableColoring(2, 2, 3, {c: (c[0] + 2 * c[1]) % 3 for c in cells})
    p = project(t, 1)
    assert p.arity == 3
    for c in cells_in_window(3, 2):
        assert p(c) == t(c[:2])


def test_uniform_shift():
    assert uniform_shift_holds(catalog("p233"))
    assert uniform_shift_holds(catalog("qmv", k=2))
    assert not uniform_shift_holds(ModularFormulaColoring((1, 1, 1), 3, 1, 2, (0, 1)))
    assert not uniform_shift_holds(ModularFormulaColoring((1, 1, 1), 3, 3, 2, (0, 1)))


def test_spec_file_roundtrip():
    for name, entry in CATALOG.items():
        params = {p: 3 for p in entry.params}
        c = catalog(name, **params)
        text = format_coloring(c)
        assert parse_coloring(text) == c
        assert format_coloring(parse_coloring(text)) == text
    cells = cells_in_window(3, 2)
    t = TableColoring(3, 2, 4, {c: (c[0] + c[2]) % 4 for c in cells})
    text = format_coloring(t)
    assert parse_coloring(text) == t
    assert format_coloring(parse_coloring(text)) == text
    assert parse_coloring(text.replace("->", "→")) == t


def test_spec_file_errors():
    with pytest.raises(ValueError):
        parse_coloring("kind: formula\narity: 2\ncoeffs: 1,1,1\nmodulus: 3\n")
    with pytest.raises(ValueError):
        parse_coloring("kind: spiral\n")


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(0, 7), min_size=2, max_size=4),
    st.integers(1, 9),
    st.data(),
)
def test_evaluate_many_matches_scalar(coeffs, m, data):
    arity = len(coeffs)
    kappa = data.draw(st.one_of(st.none(), st.integers(1, arity)))
    t = data.draw(st.integers(1, 4)) if kappa else 1
    offsets = tuple(data.draw(st.lists(st.integers(0, 9), min_size=t, max_size=t))) if kappa else ()
    c = ModularFormulaColoring(tuple(coeffs), m, kappa, t, offsets)
    cells = np.array(cells_in_window(arity, 4))
    assert list(evaluate_many(c, cells)) == [c(tuple(x)) for x in cells]
    assert all(0 <= c(tuple(x)) < m for x in cells)
