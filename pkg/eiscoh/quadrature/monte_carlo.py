"""
Monte-carlo quadrature with a heavy-tailed proposal.

Samples x in R^(2m) from the density proportional to (1 + |x|^2)^(-p), a
scaled multivariate t with 2p - 2m degrees of freedom. The exponent p sits
just below the integrand decay so the importance weights stay bounded for
beta_0 and have finite variance whenever the integral converges absolutely.
"""

import math

import numpy as np
from scipy.special import gammaln

from ..intertwine import MEASURE_FACTOR
from .base import QuadratureMethod, QuadratureResult

CHUNK_SIZE = 1 << 16
# Reported bound is this many standard errors
ERROR_SIGMAS = 3.0


class MonteCarloMethod(QuadratureMethod):
    """Importance sampling, chunked with one spawned seed per chunk."""

    @property
    def method_name(self) -> str:
        return "monte-carlo"

    @staticmethod
    def proposal_exponent(integrand) -> float:
        """eta - 1/2 for beta_0, else the midpoint of the finite-variance window (m, 2 eta - |beta| - m)."""
        return integrand.eta_hi - max(integrand.degree, 1) / 2

    def integrate(self, integrand) -> QuadratureResult:
        m = integrand.dimension
        d = 2 * m
        samples = self.config.samples
        self.check_budget(samples)

        p = self.proposal_exponent(integrand)
        dof = 2 * p - d
        log_norm = m * math.log(math.pi) + gammaln(p - m) - gammaln(p)
        scale = MEASURE_FACTOR**m

        sizes = [CHUNK_SIZE] * (samples // CHUNK_SIZE)
        if samples % CHUNK_SIZE:
            sizes.append(samples % CHUNK_SIZE)
        seeds = np.random.SeedSequence(self.config.seed).spawn(len(sizes))

        def chunk_moments(job) -> tuple[complex, float]:
            size, seed = job
            rng = np.random.default_rng(seed)
            z = rng.standard_normal((size, d))
            g = rng.chisquare(dof, size)
            x = z / np.sqrt(g)[:, None]
            u = x[:, 0::2] + 1j * x[:, 1::2]
            radius2 = np.sum(x * x, axis=1)
            log_q = -p * np.log1p(radius2) - log_norm
            weights = integrand(u) * np.exp(-log_q) * scale
            return complex(np.sum(weights)), float(np.sum(np.abs(weights) ** 2))

        moments = self.map_ordered(chunk_moments, list(zip(sizes, seeds)))
        total = complex(sum(s for s, _ in moments))
        total_sq = float(sum(q for _, q in moments))

        mean = total / samples
        variance = max(total_sq / samples - abs(mean) ** 2, 0.0)
        error = ERROR_SIGMAS * math.sqrt(variance / samples)
        return QuadratureResult(mean, error, samples)
