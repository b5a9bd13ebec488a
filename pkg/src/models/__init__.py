"""
Lab data models package

This package contains the value types shared by the services.
"""

# Import all models for convenient access
from .params import Params
from .log_scalar import LogScalar
from .weight_profile import ProfileKind, WeightProfile
from .sparse_vec import SparseVec
from .shift_spec import ShiftSpec
from .active_band import ActiveBand, CutoffSpec
from .trajectory_record import TrajectoryRecord
from .certificate_report import CertificateReport, CertificateStatus
from .run_config import RunConfig

__all__ = [
    'Params',
    'LogScalar',
    'ProfileKind',
    'WeightProfile',
    'SparseVec',
    'ShiftSpec',
    'ActiveBand',
    'CutoffSpec',
    'TrajectoryRecord',
    'CertificateReport',
    'CertificateStatus',
    'RunConfig',
]
