import pytest

from polychrome.bounds import (
    binomial_upper,
    grid_region,
    max_product_lower,
    partition_intervals,
    pig_bound,
    qd_closed_form,
    sequence_offsets,
)
from polychrome.colorings import ModularFormulaColoring, catalog
from polychrome.core import PunctureSpec
from polychrome.grid import apply_puncture, shape_sequence


def test_closed_form_values():
    assert [qd_closed_form(d) for d in (1, 4, 5, 7)] == [1, 6, 9, 16]
    with pytest.raises(ValueError):
        qd_closed_form(0)


def test_pig_matches_closed_form():
    for d in range(1, 13):
        seq = shape_sequence((0,) * (d + 1), 1)
        assert pig_bound(seq).value == qd_closed_form(d)
        # the bound depends on the shapes only, not where they sit
        assert pig_bound(shape_sequence(tuple(range(d + 1)), 1)).value == qd_closed_form(d)


def test_pig_punctured():
    seq = apply_puncture(shape_sequence((0, 0, 0, 0), 1), PunctureSpec.vertex("111"))
    assert pig_bound(seq).value == 3
    for k in (2, 3, 4):
        word = "0" * (k - 1) + "*" + "1" * (k - 1)
        seq = apply_puncture(shape_sequence((0,) * (2 * k), 1), PunctureSpec.edge(word))
        assert pig_bound(seq).value == k * k - 1
    assert pig_bound(apply_puncture(shape_sequence((0,) * 6, 1), PunctureSpec.edge("00*11"))).value == 8


def test_binomial_and_products():
    assert binomial_upper(3, 2) == 4
    assert binomial_upper(4, 2) == 10
    assert binomial_upper(5, 5) == 1
    assert [max_product_lower(d, 2) for d in (4, 5, 6)] == [4, 8, 12]
    for d in range(1, 9):
        assert max_product_lower(d, 1) == qd_closed_form(d)
        assert max_product_lower(d, d) == 1
    with pytest.raises(ValueError):
        binomial_upper(2, 3)


def test_report_formats():
    r = pig_bound(shape_sequence((0,) * 6, 1))
    assert r.to_line() == "pig d=5 i=1 puncture=none value=9 levels=1,2,3,2,1"
    assert r.csv_row() == "5,1,none,pig,9"


def _q3_shapes():
    return sequence_offsets(shape_sequence((0, 0, 0, 0), 1))


@pytest.mark.parametrize("cols", [40, 200])
def test_partition_on_polychromatic_region(cols):
    c = catalog("pd_lower", d=3)
    region = grid_region(c, 3, cols)
    for color in range(c.palette_size):
        res = partition_intervals(region, _q3_shapes(), color)
        assert res.ok and 1 <= len(res.intervals) <= 3
        assert res.intervals[0][0] == 1 and res.intervals[-1][1] == cols


def test_partition_missing_color():
    region = [[0] * 30 for _ in range(3)]
    res = partition_intervals(region, _q3_shapes(), 1)
    assert not res.ok
    assert res.violation == (1, 1, 1)


def test_partition_single_shape():
    region = [[5] * 10]
    res = partition_intervals(region, [[(0, 0), (1, 0)]], 5)
    assert res.ok and res.intervals == ((1, 10),)


def test_partition_violation_is_an_instance():
    c = ModularFormulaColoring((1, 1), 3)  # too few colors for p(Q_3)=4
    region = grid_region(c, 3, 60)
    res = partition_intervals(region, _q3_shapes(), 3)
    assert not res.ok
    cols = res.violation
    assert list(cols) == sorted(cols)
