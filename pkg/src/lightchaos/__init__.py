"""Certified checks of light chaos: transitivity, periodic density and
sensitivity restricted to a subbase, plus the functional envelope."""

__version__ = "0.1.0"

from .detectors import (  # noqa: E402
    check_light_periodic_density,
    check_light_sensitivity,
    check_light_transitivity,
    check_periodic_density,
    check_sensitivity,
    check_transitivity,
    find_periodic_points,
    orbit_density_probe,
)
from .maps import system_from_tag  # noqa: E402
from .subbases import SubbaseScheme, generate_family  # noqa: E402
from .verdicts import Budget, Status, Verdict  # noqa: E402

__all__ = [
    "__version__",
    "Budget",
    "Status",
    "Verdict",
    "SubbaseScheme",
    "generate_family",
    "system_from_tag",
    "check_light_transitivity",
    "check_light_periodic_density",
    "check_light_sensitivity",
    "check_transitivity",
    "check_periodic_density",
    "check_sensitivity",
    "find_periodic_points",
    "orbit_density_probe",
]
