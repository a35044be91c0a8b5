"""Justified representation (JR, PJR, EJR) in temporal approval elections."""

from .election import (
    ALL_SPECS,
    Axiom,
    AxiomSpec,
    Election,
    Outcome,
    Strength,
    VoterGroup,
    Witness,
    agreement,
    alt_demand,
    coverage,
    demand,
    satisfaction,
    satisfactions,
)
from .errors import CapacityError, InputError, PreconditionError, TemporalJRError
from .rules import gcr, gcr_monotonic
from .verify import Budgets, VerifyReport, route, verify_bruteforce

__version__ = "0.1.0"

__all__ = [
    "ALL_SPECS",
    "Axiom",
    "AxiomSpec",
    "Budgets",
    "CapacityError",
    "Election",
    "InputError",
    "Outcome",
    "PreconditionError",
    "Strength",
    "TemporalJRError",
    "VerifyReport",
    "VoterGroup",
    "Witness",
    "agreement",
    "alt_demand",
    "coverage",
    "demand",
    "gcr",
    "gcr_monotonic",
    "route",
    "satisfaction",
    "satisfactions",
    "verify_bruteforce",
]
