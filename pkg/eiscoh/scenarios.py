"""
Curated scenario suite for the diagram checks.

Every scenario has n <= 4 and an infinity type that is balanced and constant
on the fibers of E_k -> E_k1, listed in the tower's embedding order.
"""

from .config import QuadratureConfig
from .errors import ConfigError
from .presets import load_tower
from .rationality import ScenarioConfig

# name -> (preset, n, eta values, sigma names or () for the full generating set)
CURATED = {
    "gauss-n2": ("gauss", 2, (0, 2), ()),
    "gauss-n2-conj": ("gauss", 2, (0, 2), ("conj",)),
    "gauss-n3": ("gauss", 3, (-1, 4), ()),
    "gauss-n4": ("gauss", 4, (0, 4), ()),
    "zeta5-n2": ("zeta5", 2, (0, 2, 3, -1), ()),
    "zeta8-n3": ("zeta8", 3, (0, 3, 0, 3), ()),
    "zeta12-n2": ("zeta12", 2, (2, 0, 0, 2), ()),
    "gauss-root-1pi-n2": ("gauss-root-1pi", 2, (4, -1, 4, -1), ()),
    "gauss-root-1pi-n3": ("gauss-root-1pi", 3, (0, 3, 0, 3), ()),
    "gauss-root-1pi-n3-a3": ("gauss-root-1pi", 3, (0, 3, 0, 3), ("a3",)),
    "gauss-root-1pi-n4": ("gauss-root-1pi", 4, (0, 4, 0, 4), ("a3", "a5", "conj")),
}

# Scenarios that also run the quadrature oracle on beta_0
NUMERIC = {
    "gauss-n2-radial": ("gauss", 2, (0, 2), ("conj",), "radial-iterated"),
    "gauss-n3-radial": ("gauss", 3, (0, 3), ("conj",), "radial-iterated"),
}


def curated_scenarios(include_numeric: bool = False) -> list[ScenarioConfig]:
    """The suite ordered by name; towers are shared between scenarios on the same preset."""
    towers = {}

    def tower(preset: str):
        if preset not in towers:
            towers[preset] = load_tower(preset)
        return towers[preset]

    scenarios = [
        ScenarioConfig(name, preset, n, eta, sigmas, tower=tower(preset))
        for name, (preset, n, eta, sigmas) in CURATED.items()
    ]
    if include_numeric:
        scenarios += [
            ScenarioConfig(name, preset, n, eta, sigmas, quad=QuadratureConfig(method=method), tower=tower(preset))
            for name, (preset, n, eta, sigmas, method) in NUMERIC.items()
        ]
    return sorted(scenarios, key=lambda s: s.name)


def scenario_by_name(name: str) -> ScenarioConfig:
    for scenario in curated_scenarios(include_numeric=True):
        if scenario.name == name:
            return scenario
    raise ConfigError(f"unknown scenario {name!r}")
