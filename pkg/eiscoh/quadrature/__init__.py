"""
eiscoh - Quadrature oracles for the archimedean intertwining integrals

Methods for integrating phi_beta over the complex last-row space:
- radial-iterated: angular ring rule per coordinate, exp-sinh radial grid
- tensor-grid: raw 2m-dimensional Cartesian sinh-sinh product rule
- monte-carlo: importance sampling from a heavy-tailed multivariate-t proposal
"""

from ..config import QuadratureConfig
from ..errors import ConfigError
from .base import QuadratureMethod, QuadratureResult
from .monte_carlo import MonteCarloMethod
from .radial import RadialIteratedMethod
from .tensor_grid import TensorGridMethod

METHODS = {
    "radial-iterated": RadialIteratedMethod,
    "tensor-grid": TensorGridMethod,
    "monte-carlo": MonteCarloMethod,
}


def create_method(config: QuadratureConfig) -> QuadratureMethod:
    """Create the quadrature method named in the config."""
    try:
        return METHODS[config.method](config)
    except KeyError:
        raise ConfigError(f"unknown quadrature method {config.method!r}") from None


__all__ = [
    'QuadratureMethod',
    'QuadratureResult',
    'RadialIteratedMethod',
    'TensorGridMethod',
    'MonteCarloMethod',
    'create_method',
]
