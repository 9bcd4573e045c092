import math

import pytest

from whitneyext.functions import gaussian_bump, polynomial
from whitneyext.jets import (
    Jet, constant_jet, jet_derivative, jet_eval, taylor_remainder_witness)


def test_jet_validates_coefficient_keys():
    with pytest.raises(ValueError, match="coefficient keys"):
        Jet(anchor=(0.0,), order=1, coeffs={(0,): 1.0})


def test_jet_eval_is_the_taylor_polynomial():
    # jet of f(x) = 2 + 3x + 5x^2 at x0 = 1: f(1)=10, f'(1)=13, f''(1)=10
    jet = Jet(anchor=(1.0,), order=2,
              coeffs={(0,): 10.0, (1,): 13.0, (2,): 10.0})
    for t in (-1.0, 0.0, 0.5, 2.0):
        assert jet_eval(jet, (t,)) == pytest.approx(2 + 3 * t + 5 * t * t)


def test_jet_derivative_shifts_coefficients():
    jet = Jet(anchor=(0.0, 0.0), order=2,
              coeffs={(0, 0): 1.0, (1, 0): 2.0, (0, 1): 3.0,
                      (2, 0): 4.0, (1, 1): 5.0, (0, 2): 6.0})
    dx = jet_derivative(jet, (1, 0))
    assert dx.order == 1
    assert dx.coeffs == {(0, 0): 2.0, (1, 0): 4.0, (0, 1): 5.0}
    with pytest.raises(ValueError, match="order exceeded"):
        jet_derivative(jet, (3, 0))


def test_constant_jet():
    jet = constant_jet((0.0, 0.0), 1, 7.0)
    assert jet_eval(jet, (3.0, -2.0)) == 7.0
    assert jet_eval(jet_derivative(jet, (1, 0)), (3.0, -2.0)) == 0.0


def test_jet_json_round_trip():
    jet = Jet(anchor=(0.5,), order=1, coeffs={(0,): 1.0, (1,): -2.0})
    back = Jet.from_json(jet.to_json())
    assert back.anchor == jet.anchor
    assert back.order == jet.order
    assert back.coeffs == jet.coeffs


def test_remainder_witness_polynomial_degenerate():
    # degree <= m: remainder identity holds for every t, 0.5 is reported
    F = polynomial(1, {(0,): 1.0, (1,): 2.0})
    t, res = taylor_remainder_witness(F, (0.75,), (0.0,), m=1)
    assert t == 0.5
    assert abs(res) <= 1e-10


def test_remainder_witness_gaussian():
    F = gaussian_bump(1, width=2.0)
    t, res = taylor_remainder_witness(F, (0.9,), (0.1,), m=1)
    assert 0.0 < t < 1.0
    scale = abs(F.value_at((0.9,))) + 1.0
    assert abs(res) <= 1e-9 * scale


def test_remainder_witness_2d():
    F = gaussian_bump(2, width=2.0)
    t, res = taylor_remainder_witness(F, (0.6, -0.4), (0.0, 0.1), m=1)
    assert 0.0 < t < 1.0
    assert math.isfinite(res)
