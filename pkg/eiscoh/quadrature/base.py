"""
Base quadrature class with common functionality.
"""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..config import QuadratureConfig
from ..errors import BudgetExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    points: int


class QuadratureMethod(ABC):
    """Base class for all numerical oracles."""

    # Half-width of the double-exponential parameter interval [-T, T]
    STEP_RANGE = 3.0

    def __init__(self, config: QuadratureConfig):
        self.config = config

    def check_budget(self, points: int) -> None:
        """Refuse grids or sample counts above the configured cap."""
        if points > self.config.max_points:
            raise BudgetExceeded(
                f"{self.method_name} needs {points:,} evaluations, budget is {self.config.max_points:,}"
            )

    def steps(self, per_side: int) -> tuple[np.ndarray, float]:
        """Equally spaced tau in [-T, T] with 2*per_side + 1 points, and the spacing h."""
        h = self.STEP_RANGE / per_side
        return h * np.arange(-per_side, per_side + 1), h

    def refine(self, rule: Callable[[int], tuple[complex, int]]) -> QuadratureResult:
        """
        Run a step-grid rule at the configured nodes and at twice as many.

        The refined sum is reported; its distance to the base sum is the error bound.
        """
        per_side = self.config.resolved_nodes
        base, base_points = rule(per_side)
        refined, refined_points = rule(2 * per_side)
        return QuadratureResult(refined, abs(refined - base), base_points + refined_points)

    def map_ordered(self, func: Callable, chunks: Sequence) -> list:
        """Evaluate chunks, in parallel when allowed, keeping chunk order for the reduction."""
        if self.config.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
                return list(executor.map(func, chunks))
        return [func(chunk) for chunk in chunks]

    @abstractmethod
    def integrate(self, integrand) -> QuadratureResult:
        """
        Integrate over C^m with the self-dual measure.

        Args:
            integrand: LastRowIntegrand (callable on arrays of shape (points, m))

        Returns:
            QuadratureResult with value, a-posteriori error bound and point count
        """
        pass

    @property
    @abstractmethod
    def method_name(self) -> str:
        """Name of this method."""
        pass
