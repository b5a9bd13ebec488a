"""
Per-step ledger entry of a trajectory x_{n+1} = T(x_n)
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

ZERO_MARKER = "ZERO"


def _log10(value: Optional[float]):
    if value is None:
        return None
    return value / math.log(10.0)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Model for one step of a trajectory; log_norm None means exact zero"""
    step: int
    log_norm: Optional[float]
    support_min: Optional[int] = None
    support_max: Optional[int] = None
    band_k: Optional[int] = None
    active_k_range: Optional[Tuple[int, int]] = None

    # Reference bounds in natural log units, filled when x_0 is known
    quarter_bound: Optional[float] = None
    decay_bound: Optional[float] = None

    @property
    def is_zero(self) -> bool:
        return self.log_norm is None

    def to_dict(self) -> dict:
        """Convert record to dictionary for CSV export"""
        return {
            'n': self.step,
            'log10_norm': ZERO_MARKER if self.is_zero else _log10(self.log_norm),
            'support_min': self.support_min,
            'support_max': self.support_max,
            'band_k': self.band_k,
            'bound_32_log10': _log10(self.quarter_bound),
            'bound_38_log10': _log10(self.decay_bound),
        }
