"""
Radial-iterated quadrature.

Each complex coordinate is written u = r e^(i theta) with measure 2 r dr dtheta.
The angle uses the equally spaced ring rule (exact for e^(i b theta) once the
ring has more than b points); the radius uses tanh-sinh nodes t on (0, 1)
pushed through r = t/(1-t), which composes to r = exp(pi sinh tau).
"""

import itertools

import numpy as np

from ..intertwine import MEASURE_FACTOR
from .base import QuadratureMethod, QuadratureResult


class RadialIteratedMethod(QuadratureMethod):
    """Polar reduction per coordinate."""

    @property
    def method_name(self) -> str:
        return "radial-iterated"

    def radial_rule(self, per_side: int) -> tuple[np.ndarray, np.ndarray]:
        tau, h = self.steps(per_side)
        r = np.exp(np.pi * np.sinh(tau))
        dr = h * np.pi * np.cosh(tau) * r
        return r, dr

    def _sum(self, integrand, per_side: int) -> tuple[complex, int]:
        m = integrand.dimension
        r, dr = self.radial_rule(per_side)

        rings = []
        for b in integrand.exponents:
            count = b + 1
            theta = 2 * np.pi * np.arange(count) / count
            rings.append((theta, 2 * np.pi / count))

        # One axis per coordinate: (radius node, angle node) pairs
        axes = []
        for theta, dtheta in rings:
            radius = np.repeat(r, len(theta))
            angle = np.tile(theta, len(r))
            weight = np.repeat(MEASURE_FACTOR * r * dr, len(theta)) * dtheta
            axes.append((radius * np.exp(1j * angle), weight))

        points = int(np.prod([len(w) for _, w in axes]))
        self.check_budget(points)

        inner_u, inner_w = axes[-1]
        outer = list(itertools.product(*[range(len(w)) for _, w in axes[:-1]]))

        def chunk_sum(index: tuple[int, ...]) -> complex:
            u = np.empty((len(inner_u), m), dtype=complex)
            weight = inner_w.copy()
            for axis, i in enumerate(index):
                u[:, axis] = axes[axis][0][i]
                weight = weight * axes[axis][1][i]
            u[:, m - 1] = inner_u
            return complex(np.sum(weight * integrand(u)))

        partials = self.map_ordered(chunk_sum, outer)
        return complex(sum(partials)), points

    def integrate(self, integrand) -> QuadratureResult:
        return self.refine(lambda per_side: self._sum(integrand, per_side))
