"""
Error types raised by the lab
"""

from typing import List


class LabError(Exception):
    """Base class for all lab errors"""


class ParamsError(LabError, ValueError):
    """Raised when the construction parameters violate M > K > 1"""


class InsufficientWindowError(LabError, ValueError):
    """Raised when a weight window is too short to certify Omega_k membership"""


class OmegaCertificationError(LabError, ValueError):
    """Raised when operators handed to a nilpotency check are not all in Omega_k"""

    def __init__(self, k: int, failed_indices: List[int]):
        self.k = k
        self.failed_indices = list(failed_indices)
        super().__init__(
            f"operators {self.failed_indices} are not in Omega_{k}"
        )


class UsageError(LabError, ValueError):
    """Raised when a caller violates a certificate precondition"""


class ConfigError(LabError, ValueError):
    """Raised for invalid configuration files or flags"""


class VectorFormatError(LabError, ValueError):
    """Raised for malformed sparse vector input"""
