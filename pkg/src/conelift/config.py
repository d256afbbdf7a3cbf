"""Process-wide numerical settings.

Every tolerance and iteration cap used by the package is read from a single
:class:`Config` instance.  Functions take ``tol=None`` style arguments and fall
back to :func:`current` when the caller does not pass an explicit value.
"""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    tol: float = 1e-9               # absolute, scaled by input magnitude at each use
    face_tol: float = 1e-8          # principal-angle threshold for PSD face comparisons
    eig_max_sweeps: int = 100       # cyclic Jacobi sweep cap
    root_cluster: float = 1e2       # roots closer than root_cluster * tol are one root
    root_gcd_tol: float = 1e-10     # relative size below which a Sturm remainder is zero
    feasibility_slack: float = 1e-7
    dykstra_max_iter: int = 100_000
    dykstra_tol: float = 1e-9
    hyp_samples: int = 200
    seed: int = 0

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


_current = Config()


def current() -> Config:
    return _current


def set_config(cfg: Config) -> None:
    global _current
    if cfg.tol <= 0:
        raise ValueError("tolerance must be positive")
    _current = cfg


@contextlib.contextmanager
def using(**changes):
    """Temporarily override fields of the active configuration."""
    prev = current()
    set_config(prev.replace(**changes))
    try:
        yield current()
    finally:
        set_config(prev)


def resolve_tol(tol: float | None) -> float:
    return current().tol if tol is None else float(tol)
