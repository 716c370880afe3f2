import numpy as np
import pytest

from eiscoh.config import QuadratureConfig
from eiscoh.errors import BudgetExceeded, ConfigError
from eiscoh.intertwine import LastRowIntegrand
from eiscoh.quadrature import (
    MonteCarloMethod,
    QuadratureMethod,
    RadialIteratedMethod,
    TensorGridMethod,
    create_method,
)


@pytest.mark.parametrize(
    "name, cls",
    [
        ("radial-iterated", RadialIteratedMethod),
        ("tensor-grid", TensorGridMethod),
        ("monte-carlo", MonteCarloMethod),
    ],
)
def test_create_method(name, cls):
    method = create_method(QuadratureConfig(method=name))
    assert isinstance(method, cls)
    assert isinstance(method, QuadratureMethod)
    assert method.method_name == name


def test_unknown_method_rejected():
    with pytest.raises(ConfigError, match="unknown quadrature method"):
        QuadratureConfig(method="simpson")


def test_steps_are_symmetric():
    method = create_method(QuadratureConfig(nodes=8))
    tau, h = method.steps(8)
    assert len(tau) == 17
    assert tau[0] == pytest.approx(-method.STEP_RANGE)
    assert h == pytest.approx(method.STEP_RANGE / 8)


def test_budget_exceeded():
    integrand = LastRowIntegrand((0,), 2)
    method = create_method(QuadratureConfig(method="tensor-grid", max_points=1000))
    with pytest.raises(BudgetExceeded, match="budget"):
        method.integrate(integrand)


def test_integrand_decay_and_phase():
    integrand = LastRowIntegrand((1,), 3)
    u = np.array([[1j], [2.0]])
    values = integrand(u)
    assert values[0] == pytest.approx(1j / 8)
    assert values[1] == pytest.approx(2 / 125)
    assert integrand.is_absolutely_convergent()
    assert not LastRowIntegrand((3, 0), 3).is_absolutely_convergent()


def test_radial_ring_kills_nonzero_exponents():
    method = create_method(QuadratureConfig())
    result = method.integrate(LastRowIntegrand((2,), 3))
    assert abs(result.value) < 1e-12


def test_monte_carlo_is_reproducible_across_threads():
    integrand = LastRowIntegrand((0,), 2)
    single = create_method(QuadratureConfig(method="monte-carlo", samples=150_000, seed=11, threads=1))
    pooled = create_method(QuadratureConfig(method="monte-carlo", samples=150_000, seed=11, threads=3))
    first = single.integrate(integrand)
    assert first.value == pooled.integrate(integrand).value
    assert first.value == single.integrate(integrand).value


def test_radial_threads_agree():
    integrand = LastRowIntegrand((0, 0), 3)
    single = create_method(QuadratureConfig(nodes=16)).integrate(integrand)
    pooled = create_method(QuadratureConfig(nodes=16, threads=4)).integrate(integrand)
    assert single.value == pooled.value


@pytest.mark.parametrize("method_name", ["radial-iterated", "tensor-grid"])
def test_error_compares_against_refined_rule(method_name):
    integrand = LastRowIntegrand((0,), 2)
    method = create_method(QuadratureConfig(method=method_name, nodes=6))
    base, base_points = method._sum(integrand, 6)
    refined, refined_points = method._sum(integrand, 12)

    result = method.integrate(integrand)
    assert result.value == refined
    assert result.error == pytest.approx(abs(refined - base))
    assert result.points == base_points + refined_points
    assert abs(result.value - 2 * np.pi) < abs(base - 2 * np.pi) + 1e-15
