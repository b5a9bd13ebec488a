"""
Cutoff ramps and the active envelope levels at a given norm
"""

from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class CutoffSpec:
    """Ramp [a, b] of a cutoff, stored as natural logs of its endpoints"""
    log_a: float
    log_b: float

    def __post_init__(self):
        if not self.log_a < self.log_b:
            raise ValueError(f"cutoff needs a < b (got log a={self.log_a}, log b={self.log_b})")


@dataclass(frozen=True)
class ActiveBand:
    """Levels k whose term N_k(t) is not in one of the two zero cases at t.

    complements[i] is 1 - envelopes[i], evaluated separately so that it keeps
    full relative precision when the envelope is close to 1.
    """
    log_t: float
    k_list: Tuple[int, ...] = ()
    envelopes: Tuple[float, ...] = ()
    complements: Tuple[float, ...] = ()

    def __post_init__(self):
        if not len(self.k_list) == len(self.envelopes) == len(self.complements):
            raise ValueError("one envelope and one complement per active level are required")

    @property
    def is_empty(self) -> bool:
        return not self.k_list

    @property
    def k_range(self) -> Optional[Tuple[int, int]]:
        if not self.k_list:
            return None
        return (self.k_list[0], self.k_list[-1])

    def envelope_for(self, k: int) -> float:
        """c_k(t), zero for levels outside the band"""
        for level, value in zip(self.k_list, self.envelopes):
            if level == k:
                return value
        return 0.0

    def complement_for(self, k: int) -> float:
        """1 - c_k(t)"""
        for level, value in zip(self.k_list, self.complements):
            if level == k:
                return value
        return 1.0
