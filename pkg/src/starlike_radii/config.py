import os
from dataclasses import dataclass

from loguru import logger

from starlike_radii.errors import ParameterError

THREADS_ENV_VAR = "STARLIKE_THREADS"
MAX_DEFAULT_THREADS = 8


@dataclass(frozen=True)
class SolverSettings:
    grid_cells: int = 4096
    bracket_width: float = 1e-14
    refinements: int = 1
    endpoint_guard: float = 1e-12


@dataclass(frozen=True)
class WindingSettings:
    """
    Sampling used for winding-number membership. Points closer than
    `near_boundary` to the sampled polyline trigger a doubling of the sample
    count (at most `max_doublings` times); points within `on_boundary` of it are
    reported as boundary points.
    """

    samples: int = 4096
    near_boundary: float = 1e-6
    on_boundary: float = 1e-12
    max_doublings: int = 6
    extent: float = 8.0


@dataclass(frozen=True)
class Tolerances:
    oracle: float = 1e-8
    reference: float = 1e-5
    sharpness: float = 1e-6
    lemma_slack: float = 1e-9
    containment_boundary: float = 1e-9
    singularity: float = 1e-12


DEFAULT_SOLVER = SolverSettings()
DEFAULT_WINDING = WindingSettings()
DEFAULT_TOLERANCES = Tolerances()


def sweep_threads() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return min(os.cpu_count() or 1, MAX_DEFAULT_THREADS)
    try:
        threads = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ParameterError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    logger.debug(f"Sweep parallelism capped at {threads} by {THREADS_ENV_VAR}")
    return threads
