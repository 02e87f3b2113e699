import math

import numpy as np
import pytest

from hwent import sweep
from hwent.errors import InputError
from hwent.states import DensityMatrix, StateFamily, ghz


@pytest.mark.parametrize(
    "name, criterion, expected, side",
    [
        ("ghz3-white-noise", "theorem1", 0.4941, "below"),
        ("ghz3-white-noise", "gme3-corollary1", 0.4941, "below"),
        ("ghz4-white-noise", "theorem4", 0.4142, "above"),
        ("ghz4-white-noise", "theorem6", 0.4930, "above"),
        ("ghz4-white-noise", "gme4-corollary2", 0.6361, "above"),
    ],
)
def test_family_thresholds(name, criterion, expected, side):
    t = sweep.find_threshold(name, criterion)
    assert t.threshold == pytest.approx(expected, abs=5e-4)
    assert t.detected_side == side
    a, b = t.bracket
    assert b - a <= 2e-9
    assert t.bracket_margins[0] * t.bracket_margins[1] <= 0


def test_theorem4_threshold_is_sqrt2_minus_1():
    # (4 + sqrt2) x + 2 = sqrt18  <=>  x = sqrt2 - 1
    t = sweep.find_threshold("ghz4-white-noise", "theorem4")
    assert t.threshold == pytest.approx(math.sqrt(2) - 1, abs=1e-9)


def test_reference_roots():
    roots = {"f2": (4 - 2 * math.sqrt(3)) / 3, "f6": 2 / 3, "f7": 1 / math.sqrt(3)}
    for key, root in roots.items():
        assert sweep.find_threshold("ghz4-white-noise", key).threshold == pytest.approx(root, abs=1e-6)


def test_ppt_thresholds():
    assert sweep.find_threshold("ghz3-white-noise", "ppt").threshold == pytest.approx(0.8, abs=1e-8)
    assert sweep.find_threshold("ghz4-white-noise", "ppt").threshold == pytest.approx(1 / 9, abs=1e-8)


def test_no_sign_change_reports():
    with pytest.raises(InputError, match="does not change sign"):
        sweep.find_threshold("ghz3-white-noise", "theorem2")


def test_threshold_argument_checks():
    with pytest.raises(InputError):
        sweep.find_threshold("ghz3-white-noise", "theorem1", tol=1e-12)
    with pytest.raises(InputError):
        sweep.find_threshold("ghz3-white-noise", "theorem1", lo=0.6, hi=0.2)
    with pytest.raises(InputError):
        sweep.margin("ghz3-white-noise", "theorem9", 0.1)
    with pytest.raises(InputError):
        sweep.margin("ghz3-white-noise", "theorem4", 0.1)


def _bump_family():
    # noise weight 4x(1-x): pure GHZ at both ends, fully mixed at x = 1/2
    def member(x):
        w = 4 * x * (1 - x)
        return DensityMatrix(w * np.eye(8) / 8 + (1 - w) * ghz(3).matrix, (2, 2, 2))

    return StateFamily("ghz3-bump", (2, 2, 2), "noise-weight", member)


def test_grid_fallback_when_endpoints_agree():
    t = sweep.find_threshold(_bump_family(), "theorem1")
    weight = sweep.find_threshold("ghz3-white-noise", "theorem1").threshold
    assert t.threshold == pytest.approx((1 - math.sqrt(1 - weight)) / 2, abs=1e-8)
    assert t.detected_side == "below"


def test_no_root_in_subinterval():
    with pytest.raises(InputError):
        sweep.find_threshold("ghz3-white-noise", "theorem1", lo=0.3, hi=0.45)


def test_statement_variant_gives_theorem2_threshold():
    t = sweep.find_threshold("ghz3-white-noise", "theorem2", bound_variant="statement")
    assert 0 < t.threshold < 1
    assert t.detected_side == "below"


def test_scan_shape_and_columns():
    result = sweep.scan("ghz3-white-noise", steps=11)
    assert result.xs == list(np.linspace(0, 1, 11))
    assert len(result.records) == 11
    cols = result.columns()
    assert cols[0] == "x"
    assert "margin[1|23[g=2]]" in cols
    assert "gme3.corollary_margin" in cols
    assert cols[-3:] == ["f2", "f6", "f7"]
    assert all(len(row) == len(cols) for row in result.rows())


def test_scan_margin_crossing():
    result = sweep.scan("ghz4-white-noise", steps=101)
    col = result.columns().index("margin[1|234[h=2]]")
    rows = result.rows()
    signs = [(row[0], row[col] > 0) for row in rows]
    first = next(x for x, positive in signs if positive)
    assert 0.41 < first <= 0.42


@pytest.mark.parametrize("start, stop, steps", [(0.5, 0.5, 10), (-0.1, 1, 10), (0, 1, 1)])
def test_scan_argument_checks(start, stop, steps):
    with pytest.raises(InputError):
        sweep.scan("ghz3-white-noise", start, stop, steps)


def test_criterion_names():
    names = sweep.criterion_names()
    for key in ("theorem1", "theorem2", "theorem4", "theorem5", "theorem6", "gme4-theorem7", "ppt", "f7"):
        assert key in names
