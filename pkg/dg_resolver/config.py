import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

CACHE_DIR_ENV = "DG_RESOLVER_CACHE_DIR"


@dataclass(frozen=True)
class Limits:
    """
    Caps shared by the bounded solvers and the Gröbner engine.

    Attributes:
        solver_cap (int): Total exponent cap of the first bounded d-solve.
        escalation_rounds (int): How many times a failing solve doubles its cap.
        groebner_max_variables (int): Largest ring handed to Buchberger.
        groebner_max_degree (int): Abort when a basis element exceeds this degree.
        groebner_max_steps (int): Abort after this many S-pair reductions.
        transport_max_t_degree (int): Largest t-degree tried by der_transport.
    """

    solver_cap: int = 8
    escalation_rounds: int = 3
    groebner_max_variables: int = 12
    groebner_max_degree: int = 20
    groebner_max_steps: int = 5000
    transport_max_t_degree: int = 6

    def with_overrides(self, **kwargs) -> "Limits":
        return replace(
            self, **{key: value for key, value in kwargs.items() if value is not None}
        )


DEFAULT_LIMITS = Limits()


def cache_directory() -> Optional[Path]:
    value = os.environ.get(CACHE_DIR_ENV)
    if not value:
        return None
    return Path(value)
