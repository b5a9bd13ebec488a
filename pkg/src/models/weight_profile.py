"""
Weight profile of a Kakutani-type weighted shift
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .params import Params


class ProfileKind(Enum):
    FULL = "full"                    # alpha_n
    COMPLEMENT = "complement"        # weights of W_eps - L_m
    SINGLE_LEVEL = "single-level"    # weights of L_m


@dataclass(frozen=True)
class WeightProfile:
    """Model for the weight sequence of W_eps, L_m or W_eps - L_m"""
    params: Params
    kind: ProfileKind = ProfileKind.FULL
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind is ProfileKind.FULL:
            if self.m is not None:
                raise ValueError("the full profile carries no truncation level")
        elif self.m is None or self.m < 1:
            raise ValueError(f"{self.kind.value} profile needs a level m >= 1")

    @property
    def label(self) -> str:
        if self.kind is ProfileKind.FULL:
            return "W_eps"
        if self.kind is ProfileKind.SINGLE_LEVEL:
            return f"L_{self.m}"
        return f"W_eps - L_{self.m}"
