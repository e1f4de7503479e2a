import math

import pytest

from lmtopo.constants import (
    BracketError,
    c2_equation,
    c2_from_root,
    gamma2_equation,
    gamma2_from_root,
    scan_bracket,
    solve_c2,
    solve_gamma2,
)


def bisect200(f, lo, hi):
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# Written out from the definitions, in log form for gamma2 so the oracle does
# not share an expression with the solver.
def g_log(x):
    return -(1 - x) / (2 * x) - math.log(x)


def h(y):
    return 3 * (1 - y) + (1 + 2 * y) * math.log(y)


def test_values():
    g, c = solve_gamma2(), solve_c2()
    assert abs(g.value - 2.455407) < 1e-5
    assert abs(c.value - 2.753806) < 1e-5
    assert 2 < g.value < c.value < 3
    assert abs(g.residual) < 1e-12 and abs(c.residual) < 1e-12


def test_against_bisection_oracle():
    x = bisect200(g_log, 0.05, 0.9)
    y = bisect200(h, 0.01, 0.9)
    g, c = solve_gamma2(), solve_c2()
    assert g.inner_root == pytest.approx(x, abs=1e-12)
    assert c.inner_root == pytest.approx(y, abs=1e-12)
    assert g.value == pytest.approx(1 / (2 * x * (1 - x)), abs=1e-11)
    assert c.value == pytest.approx(-math.log(y) / (1 - y) ** 2, abs=1e-11)


def test_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    x = mpmath.findroot(lambda t: mpmath.exp(-(1 - t) / (2 * t)) - t, 0.28)
    y = mpmath.findroot(lambda t: 3 * (1 - t) + (1 + 2 * t) * mpmath.log(t), 0.12)
    assert abs(solve_gamma2().value - float(1 / (2 * x * (1 - x)))) < 1e-12
    assert abs(solve_c2().value - float(-mpmath.log(y) / (1 - y) ** 2)) < 1e-12


def test_value_from_root_is_exact():
    g, c = solve_gamma2(), solve_c2()
    assert gamma2_from_root(g.inner_root) == g.value
    assert c2_from_root(c.inner_root) == c.value
    assert g.bracket[0] <= g.inner_root <= g.bracket[1]
    assert g.bracket[1] - g.bracket[0] < 1e-12
    assert abs(gamma2_equation(g.inner_root)) == g.residual or g.residual < 1e-15


def test_scan_requires_one_sign_change():
    with pytest.raises(BracketError):
        scan_bracket(lambda t: t * t + 1)
    with pytest.raises(BracketError):
        scan_bracket(lambda t: math.sin(40 * t))
    lo, hi = scan_bracket(c2_equation)
    assert hi - lo <= 0.01 + 1e-12 and c2_equation(lo) * c2_equation(hi) <= 0


def test_json_shape():
    d = solve_gamma2().to_dict()
    assert set(d) == {"name", "value", "inner_root", "residual", "bracket"}
