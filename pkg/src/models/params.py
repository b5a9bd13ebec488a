"""
Construction parameters (M, K)
"""

import math
from dataclasses import dataclass, field

from src.exceptions import ParamsError


@dataclass(frozen=True)
class Params:
    """The pair (M, K) with M > K > 1 fixing eps_m = M / K^(m-1)"""
    M: float = 5.0
    K: float = 3.0
    log_M: float = field(init=False, repr=False)
    log_K: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.M > self.K > 1):
            raise ParamsError(
                f"parameters must satisfy M > K > 1 (got M={self.M}, K={self.K})"
            )
        object.__setattr__(self, 'log_M', math.log(self.M))
        object.__setattr__(self, 'log_K', math.log(self.K))

    def to_dict(self) -> dict:
        """Convert parameters to dictionary for report export"""
        return {'M': self.M, 'K': self.K}
