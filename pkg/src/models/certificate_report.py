"""
Pass/fail evidence for one checked inequality
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class CertificateStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass
class CertificateReport:
    """Model for the outcome of a certificate run"""
    certificate: str
    status: CertificateStatus
    tolerance: float = 0.0
    witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    # Run metadata
    params: Optional[Dict[str, float]] = None
    seed: Optional[int] = None
    runtime_ms: Optional[float] = None

    def __post_init__(self):
        if self.status is CertificateStatus.FAIL and not self.witness:
            raise ValueError(f"failed certificate {self.certificate} needs a witness")

    @property
    def passed(self) -> bool:
        return self.status is CertificateStatus.PASS

    @property
    def applicable(self) -> bool:
        return self.status is not CertificateStatus.NOT_APPLICABLE

    def to_dict(self, include_runtime: bool = False) -> Dict[str, Any]:
        """Convert report to dictionary for JSON export"""
        payload = {
            'certificate': self.certificate,
            'params': self.params,
            'seed': self.seed,
            'pass': self.passed,
            'status': self.status.value,
            'witness': self.witness,
            'tolerance': self.tolerance,
            'details': self.details,
        }
        if include_runtime:
            payload['runtime_ms'] = self.runtime_ms
        return payload
