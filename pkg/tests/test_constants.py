import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restriction_lab.constants import (
    AlphaResult,
    alpha,
    beta,
    circle_average_phi,
    circle_average_phi_endpoint,
    scaling_exponents,
)


def test_scaling_exponents_reference():
    q, ptilde, r = scaling_exponents(2.0, 1)
    assert q == pytest.approx(6.0, abs=1e-14)
    assert ptilde == 2.0 and r == 2.0
    q2, _, _ = scaling_exponents(2.0, 2)
    assert q2 == pytest.approx(4.0, abs=1e-14)
    q15, pt15, r15 = scaling_exponents(1.5, 1)
    assert (q15, pt15, r15) == pytest.approx((9.0, 3.0, 2.0))


def test_scaling_exponents_domain():
    with pytest.raises(ValueError):
        scaling_exponents(1.0, 1)
    with pytest.raises(ValueError):
        scaling_exponents(4.0, 1)
    with pytest.raises(ValueError):
        scaling_exponents(2.0, 3)


def test_circle_average_trivial():
    assert circle_average_phi(0.0, 6.0) == 1.0


def test_circle_average_endpoint_closed_form():
    # Wallis integral: (1/2pi) int |2 cos(theta/2)|^q dtheta = 2^q G((q+1)/2)/(sqrt(pi) G((q+2)/2))
    for q in (4.0, 5.0, 6.0, 8.0, 9.0):
        closed = 2.0 * (
            math.gamma((q + 1) / 2) / (math.sqrt(math.pi) * math.gamma((q + 2) / 2))
        ) ** (1.0 / q)
        assert circle_average_phi(1.0, q) == pytest.approx(closed, abs=1e-10)
        assert circle_average_phi_endpoint(q) == pytest.approx(closed, abs=1e-14)


def test_circle_average_reference_value():
    assert circle_average_phi(1.0, 6.0) == pytest.approx(2.0 * (5.0 / 16.0) ** (1.0 / 6.0), abs=1e-10)


def test_circle_average_monotone_in_t():
    for q in (4.0, 6.0, 9.0):
        values = [circle_average_phi(t, q) for t in np.linspace(0.0, 1.0, 11)]
        assert all(b >= a - 1e-13 for a, b in zip(values, values[1:]))


def test_circle_average_domain():
    with pytest.raises(ValueError):
        circle_average_phi(-0.1, 6.0)
    with pytest.raises(ValueError):
        circle_average_phi(0.5, 0.9)


@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=1.0, max_value=12.0))
@settings(max_examples=25, deadline=None)
def test_circle_average_bounds(t, q):
    value = circle_average_phi(t, q, nodes=2048)
    assert 1.0 - 1e-12 <= value <= 1.0 + t + 1e-12  # between the q=inf means


def test_beta_reference_values():
    assert beta(2.0, 6.0) == pytest.approx(math.sqrt(2.0) * (5.0 / 16.0) ** (1.0 / 6.0), abs=1e-12)
    assert beta(2.0, 4.0) == pytest.approx(math.sqrt(2.0) * (3.0 / 8.0) ** (1.0 / 4.0), abs=1e-12)


def test_beta_flat_below_two():
    assert beta(1.5, 7.0) == beta(1.9, 7.0)  # r = 2 for both


def test_alpha_equals_beta_at_two():
    result = alpha(2.0, 6.0)
    assert isinstance(result, AlphaResult)
    assert abs(result.value - beta(2.0, 6.0)) < 1e-8
    assert abs(result.argmax_t - 1.0) < 1e-6
    assert len(result.samples) == 2001


def test_alpha_strictly_below_beta_for_small_p():
    q, _, _ = scaling_exponents(1.5, 1)
    result = alpha(1.5, q)
    assert result.value < beta(1.5, q) - 1e-6


def test_alpha_degenerate_p1():
    result = alpha(1.0, 6.0)
    assert result.value >= 1.0  # the t=0 ratio is 1


def test_alpha_off_scaling_line():
    with pytest.raises(ValueError):
        alpha(2.0, 5.9)


def test_alpha_at_least_one_along_line():
    for p in (1.2, 1.8, 2.2, 2.6):
        q, _, _ = scaling_exponents(p, 1)
        assert alpha(p, q).value >= 1.0 - 1e-12


def test_alpha_le_beta_property():
    for d in (1, 2):
        for p in (1.3, 1.7, 2.0, 2.4):
            if p >= 2.0 * (d + 1) / d:
                continue
            q, _, _ = scaling_exponents(p, d)
            a = alpha(p, q).value
            b = beta(p, q)
            assert a <= b + 1e-9
            if p >= 2.0:
                assert abs(a - b) < 1e-8
