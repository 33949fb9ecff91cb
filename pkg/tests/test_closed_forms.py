import math

import mpmath as mp
import pytest

from realitykit import closed_forms as cf

LN2 = math.log(2)


def _ref_renyi_down(a, e):
    a, e = mp.mpf(a), mp.mpf(e)
    inner = ((1 - e) ** a + (1 + 3 * e) ** a) / (4 * (1 + e) ** (a - 1)) + (1 - e) / 2
    return mp.log(2) - mp.log(inner) / (a - 1)


def _ref_tsallis(q, e):
    q, e = mp.mpf(q), mp.mpf(e)
    num = (1 - e) ** q - 2 * (1 + e) ** q + (1 + 3 * e) ** q
    return (2 ** (1 - q) - 1) / (1 - q) - num / (4 * (q - 1) * (2 * (1 + e)) ** (q - 1))


@pytest.mark.parametrize("a", [1 / 8, 0.5, 1 - 1e-6, 1 + 1e-6, 3.0])
def test_renyi_down_precision(a):
    with mp.workdps(40):
        for k in range(0, 101, 5):
            e = k / 100
            assert cf.werner_renyi_down(a, e) == pytest.approx(float(_ref_renyi_down(a, e)), abs=1e-14)


@pytest.mark.parametrize("q", [0.5, 1 - 1e-6, 1.5, 2.0])
def test_tsallis_precision(q):
    with mp.workdps(40):
        for k in range(0, 101, 5):
            e = k / 100
            assert cf.werner_tsallis(q, e) == pytest.approx(float(_ref_tsallis(q, e)), abs=1e-14)


def test_endpoints():
    for a in (0.1, 0.5, 0.9):
        assert cf.werner_renyi_down(a, 0.0) == pytest.approx(LN2, abs=1e-15)
        assert cf.werner_renyi_down(a, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert cf.werner_renyi_up(a, 0.0) == pytest.approx(LN2, abs=1e-15)
    assert cf.werner_tsallis(2.0, 0.0) == pytest.approx(0.5)
    assert cf.werner_reality_vn(0.0) == pytest.approx(LN2)
    assert cf.werner_reality_vn(1.0) == pytest.approx(0.0, abs=1e-15)
    assert cf.werner_max_rel(1.0) == pytest.approx(0.0)
    assert cf.werner_min_rel(0.5) == LN2


def test_concavity_lower_bound():
    for a in (1 / 8, 1 / 4, 1 / 2):
        for k in range(101):
            e = k / 100
            assert cf.werner_renyi_down(a, e) >= (1 - e) * LN2 - 1e-12


def test_up_above_down_with_derived_chi():
    for a in (0.1, 0.24, 0.5, 0.9):
        for k in range(1, 100):
            e = k / 100
            assert cf.werner_renyi_up(a, e) >= cf.werner_renyi_down(a, e) - 1e-12


def test_vn_limit():
    for e in (0.2, 0.5, 0.8):
        assert cf.werner_renyi_down(1 - 1e-7, e) == pytest.approx(cf.werner_reality_vn(e), abs=1e-6)
        assert cf.werner_tsallis(1 + 1e-7, e) == pytest.approx(cf.werner_reality_vn(e), abs=1e-6)
