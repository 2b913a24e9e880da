"""Precision policy shared by every truncated series and quadrature."""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, replace

EPS_FLOOR = 1e-14


@dataclass(frozen=True)
class PrecisionPolicy:
    """Error targets plus the truncation cutoffs used by the numerical routes.

    ``cutoff_csum`` is the largest modulus c (a multiple of the level) kept in
    c-sums; ``cutoff_qseries`` caps the number of q-expansion terms any single
    evaluation may use; ``quadrature_nodes`` is the double-exponential level.
    """

    epsilon_abs: float = 1e-14
    epsilon_rel: float = 1e-12
    quadrature_nodes: int = 7
    cutoff_csum: int = 1100
    cutoff_qseries: int = 2_000_000

    def __post_init__(self):
        for name in ("epsilon_abs", "epsilon_rel"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be positive, got {v}")
            if v < EPS_FLOOR:
                warnings.warn(f"{name}={v} below double-precision floor; clamped to {EPS_FLOOR}")
                object.__setattr__(self, name, EPS_FLOOR)
        for name in ("quadrature_nodes", "cutoff_csum", "cutoff_qseries"):
            v = getattr(self, name)
            if int(v) != v or v <= 0:
                raise ValueError(f"{name} must be a positive integer, got {v}")

    def with_(self, **kw) -> "PrecisionPolicy":
        return replace(self, **kw)

    def snapshot(self) -> dict:
        return asdict(self)


DEFAULT_POLICY = PrecisionPolicy()


class TruncationError(RuntimeError):
    """A series or quadrature would need more terms than the policy allows."""
