import math

import numpy as np
import pytest
import sympy

from eiscoh.config import DEFAULT_SEED, QuadratureConfig
from eiscoh.errors import NonConvergentConfiguration, ShapeMismatchError, UnbalancedInfinityTypeError
from eiscoh.intertwine import (
    ONE,
    Composition,
    KTypeFunction,
    LocalCharData,
    PiPowerValue,
    closed_form_telescoping,
    composition_count,
    compositions,
    intertwine_closed_form,
    intertwine_numeric,
    local_data_from_pair,
    local_l_ratio,
    normalized_value,
    phi_eval,
)


def test_compositions_order_and_count():
    assert [c.beta for c in compositions(2, 2)] == [(0, 2), (1, 1), (2, 0)]
    for n, g in [(2, 5), (3, 4), (4, 3)]:
        listed = list(compositions(n, g))
        assert len(listed) == composition_count(n, g)
        assert all(c.total == g and c.n == n for c in listed)


def test_local_data_orders_pair():
    data = local_data_from_pair(4, -1, 3)
    assert (data.eta_lo, data.eta_hi, data.gap) == (-1, 4, 5)
    assert data.beta0() == Composition((0, 0, 5))
    with pytest.raises(UnbalancedInfinityTypeError):
        LocalCharData(1, 4, 3)
    with pytest.raises(UnbalancedInfinityTypeError):
        local_data_from_pair(0, 2, 3)


def test_closed_form_values():
    assert intertwine_closed_form(1, 2, local_data_from_pair(0, 2, 2), Composition((0, 2))) == PiPowerValue(1, 1)
    data = local_data_from_pair(0, 3, 3)
    assert intertwine_closed_form(1, 3, data, data.beta0()) == PiPowerValue(sympy.Rational(1, 2), 2)
    assert intertwine_closed_form(3, 3, data, data.beta0()) == ONE
    assert float(intertwine_closed_form(1, 2, local_data_from_pair(0, 2, 2), Composition((0, 2)))) == pytest.approx(2 * math.pi)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_closed_form_vanishes_off_beta0(n):
    data = local_data_from_pair(-1, n + 1, n)
    for k in range(1, n + 1):
        for beta in compositions(n, data.gap):
            value = intertwine_closed_form(k, n, data, beta)
            assert value.is_zero == (beta != data.beta0())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("eta_hi_offset", [0, 1, 3])
def test_normalized_value_is_one(n, eta_hi_offset):
    data = local_data_from_pair(0, n + eta_hi_offset, n)
    for k in range(1, n + 1):
        assert normalized_value(k, n, data) == ONE
        assert local_l_ratio(k, n, data) == intertwine_closed_form(k, n, data, data.beta0())


def test_closed_form_telescoping():
    n, eta_hi = 4, 6
    data = local_data_from_pair(0, eta_hi, n)
    for k in range(1, n):
        assert closed_form_telescoping(k, n, data) == PiPowerValue(sympy.Rational(1, eta_hi - (n - k)), 1)
    with pytest.raises(ValueError):
        closed_form_telescoping(n, n, data)


def test_ktype_function_on_matrix():
    data = local_data_from_pair(0, 2, 2)
    f = KTypeFunction(data.beta0(), data)
    assert f.is_lowest
    assert f(np.eye(2)) == pytest.approx(1.0)
    assert f([[1, 0], [1, 1]]) == pytest.approx(0.25)

    with pytest.raises(ShapeMismatchError):
        f(np.eye(3))
    with pytest.raises(ValueError, match="sums to"):
        KTypeFunction(Composition((1, 0)), data)


def test_numeric_radial_n2():
    data = local_data_from_pair(0, 2, 2)
    estimate = intertwine_numeric(1, 2, data, data.beta0())
    assert estimate.method == "radial-iterated"
    assert estimate.value.real == pytest.approx(2 * math.pi, rel=1e-8)
    assert abs(estimate.value.imag) < 1e-12


def test_numeric_radial_n3():
    data = local_data_from_pair(0, 3, 3)
    estimate = intertwine_numeric(1, 3, data, data.beta0())
    assert estimate.value.real == pytest.approx(2 * math.pi**2, rel=1e-7)


def test_numeric_tensor_grid_n2():
    data = local_data_from_pair(0, 2, 2)
    estimate = intertwine_numeric(1, 2, data, data.beta0(), QuadratureConfig(method="tensor-grid"))
    assert estimate.value.real == pytest.approx(2 * math.pi, rel=1e-6)


def test_numeric_monte_carlo_n2():
    data = local_data_from_pair(0, 2, 2)
    quad = QuadratureConfig(method="monte-carlo", samples=200_000, seed=7)
    estimate = intertwine_numeric(1, 2, data, data.beta0(), quad)
    assert estimate.value.real == pytest.approx(2 * math.pi, rel=2e-2)
    assert estimate.points == 200_000


def test_numeric_vanishing_off_beta0():
    data = local_data_from_pair(0, 3, 2)
    estimate = intertwine_numeric(1, 2, data, Composition((1, 2)))
    assert abs(estimate.value) < 1e-10


def test_numeric_top_coset_is_exact():
    data = local_data_from_pair(0, 3, 3)
    estimate = intertwine_numeric(3, 3, data, data.beta0())
    assert estimate.value == pytest.approx(1.0)
    assert estimate.error == 0.0


def test_numeric_refuses_divergent_integrand():
    data = local_data_from_pair(0, 3, 3)
    with pytest.raises(NonConvergentConfiguration, match="not integrable"):
        intertwine_numeric(1, 3, data, Composition((0, 3, 0)))


def test_phi_eval_on_last_row():
    data = local_data_from_pair(0, 2, 2)
    f = KTypeFunction(data.beta0(), data)
    assert phi_eval(f, [0, 1]) == pytest.approx(1.0)
    assert phi_eval(f, [1, 1]) == pytest.approx(0.25)
    assert phi_eval(f, [0, 2j]) == pytest.approx(-4 / 16)
    with pytest.raises(ShapeMismatchError):
        phi_eval(f, [1, 0, 0])
    with pytest.raises(ValueError, match="zero row"):
        phi_eval(f, [0, 0])


def random_vanishing_betas(rng, k, n, data, count=3):
    """Up to `count` integrable compositions other than beta_0, drawn without replacement."""
    beta0 = data.beta0()
    candidates = [
        beta for beta in compositions(n, data.gap)
        if beta != beta0 and KTypeFunction(beta, data).integrand(k).is_absolutely_convergent()
    ]
    picks = rng.choice(len(candidates), size=min(count, len(candidates)), replace=False)
    return [candidates[int(i)] for i in sorted(picks)]


@pytest.mark.slow
@pytest.mark.parametrize("eta_hi", [3, 4, 5, 6])
def test_tensor_grid_two_complex_dimensions(eta_hi):
    n, k = 3, 1
    quad = QuadratureConfig(method="tensor-grid", nodes=12)
    data = local_data_from_pair(0, eta_hi, n)
    target = float(intertwine_closed_form(k, n, data, data.beta0()))
    estimate = intertwine_numeric(k, n, data, data.beta0(), quad)
    assert estimate.value.real == pytest.approx(target, rel=quad.resolved_tol)
    assert abs(estimate.value.imag) <= quad.resolved_tol * target

    rng = np.random.default_rng(DEFAULT_SEED + eta_hi)
    for beta in random_vanishing_betas(rng, k, n, data):
        value = intertwine_numeric(k, n, data, beta, quad).value
        assert abs(value) <= quad.resolved_tol * (2 * math.pi) ** (n - k), beta


@pytest.mark.slow
@pytest.mark.parametrize("eta_hi", [4, 5, 6, 7])
def test_monte_carlo_three_complex_dimensions(eta_hi):
    n, k = 4, 1
    quad = QuadratureConfig(method="monte-carlo", samples=10**6)
    data = local_data_from_pair(0, eta_hi, n)
    target = float(intertwine_closed_form(k, n, data, data.beta0()))
    estimate = intertwine_numeric(k, n, data, data.beta0(), quad)
    assert estimate.value.real == pytest.approx(target, rel=quad.resolved_tol)

    rng = np.random.default_rng(DEFAULT_SEED + eta_hi)
    for beta in random_vanishing_betas(rng, k, n, data):
        value = intertwine_numeric(k, n, data, beta, quad).value
        assert abs(value) <= quad.resolved_tol * (2 * math.pi) ** (n - k), beta


@pytest.mark.parametrize("eta_hi", [2, 3, 4, 5])
def test_radial_sweep_n2(eta_hi):
    data = local_data_from_pair(0, eta_hi, 2)
    target = float(intertwine_closed_form(1, 2, data, data.beta0()))
    estimate = intertwine_numeric(1, 2, data, data.beta0())
    assert estimate.value.real == pytest.approx(target, rel=1e-8)


def test_radial_error_bound_is_tight():
    data = local_data_from_pair(0, 2, 2)
    estimate = intertwine_numeric(1, 2, data, data.beta0())
    assert estimate.error <= 1e-8 * abs(estimate.value)
    assert abs(estimate.value - 2 * math.pi) <= max(estimate.error, 1e-10)
