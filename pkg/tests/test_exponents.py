import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restriction_lab.exponents import ExponentPair, conjugate_exponent, scaling_line_q


def test_conjugate_special_values():
    assert conjugate_exponent(2.0) == 2.0
    assert conjugate_exponent(1.0) == math.inf
    assert conjugate_exponent(math.inf) == 1.0


@given(st.floats(min_value=1.0001, max_value=100.0))
def test_conjugate_involution(p):
    assert conjugate_exponent(conjugate_exponent(p)) == pytest.approx(p, rel=1e-12)


@given(st.floats(min_value=1.01, max_value=3.99))
def test_holder_identity(p):
    pp = conjugate_exponent(p)
    assert 1.0 / p + 1.0 / pp == pytest.approx(1.0, abs=1e-12)


def test_pair_validation():
    with pytest.raises(ValueError):
        ExponentPair(d=3, p=2.0, q=6.0)
    with pytest.raises(ValueError):
        ExponentPair(d=1, p=1.0, q=6.0)
    with pytest.raises(ValueError):
        ExponentPair(d=1, p=2.0, q=2.0)


def test_scaling_line_membership():
    pair = ExponentPair(d=1, p=2.0, q=6.0)
    assert pair.on_scaling_line()
    assert ExponentPair(d=2, p=2.0, q=4.0).on_scaling_line()
    assert not ExponentPair(d=1, p=2.0, q=6.1).on_scaling_line()


def test_derived_exponents():
    pair = ExponentPair(d=1, p=1.5, q=9.0)
    assert pair.ptilde() == pytest.approx(3.0)
    assert pair.r() == pytest.approx(2.0)
    assert pair.pprime() == pytest.approx(3.0)
    wide = ExponentPair(d=1, p=3.0, q=10.0)
    assert wide.ptilde() == pytest.approx(3.0)
    assert wide.r() == pytest.approx(3.0)


def test_infinite_p_pair():
    pair = ExponentPair(d=1, p=math.inf, q=math.inf)
    assert pair.ptilde() == math.inf
    assert pair.r() == math.inf
    assert scaling_line_q(math.inf, 1) == pytest.approx(3.0)
