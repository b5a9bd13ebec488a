"""
Service for turning trajectories, weight tables and certificate reports into
CSV or JSON text
"""

import json
import math
from typing import Iterable, List, Optional

import pandas as pd

from src.models.certificate_report import CertificateReport
from src.models.params import Params
from src.models.trajectory_record import TrajectoryRecord
from src.services import shift_operators
from src.services.kakutani_weights import alpha, dyadic_valuation

TRAJECTORY_COLUMNS = [
    'n', 'log10_norm', 'support_min', 'support_max', 'band_k', 'bound_32_log10', 'bound_38_log10',
]


def _plain(value):
    """numpy scalars to builtins for json"""
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


class ReportService:
    def __init__(self, params: Params, output_format: str = 'csv'):
        self.params = params
        self.output_format = output_format

    def _render(self, frame: pd.DataFrame) -> str:
        if self.output_format == 'json':
            records = frame.astype(object).where(frame.notna(), None).to_dict(orient='records')
            return json.dumps(records, sort_keys=True, indent=2, default=_plain) + "\n"
        return frame.to_csv(index=False)

    def trajectory_frame(self, records: Iterable[TrajectoryRecord]) -> pd.DataFrame:
        """One row per recorded step; integer columns stay integers with gaps"""
        frame = pd.DataFrame([record.to_dict() for record in records], columns=TRAJECTORY_COLUMNS)
        for column in ('support_min', 'support_max', 'band_k'):
            frame[column] = frame[column].astype('Int64')
        return frame

    def trajectory_report(self, records: Iterable[TrajectoryRecord]) -> str:
        return self._render(self.trajectory_frame(records))

    def weights_frame(self, horizon: int) -> pd.DataFrame:
        """n, k(n), the eps index 1 + k(n) and alpha_n for n = 1..horizon"""
        rows = []
        for n in range(1, horizon + 1):
            k = dyadic_valuation(n)
            weight = alpha(n, self.params)
            rows.append({
                'n': n,
                'k': k,
                'eps_index': k + 1,
                'mask': f"L_{k + 1}",
                'alpha': math.exp(weight.log_mag),
                'log_alpha': weight.log_mag,
            })
        return pd.DataFrame(rows, columns=['n', 'k', 'eps_index', 'mask', 'alpha', 'log_alpha'])

    def weights_report(self, horizon: int) -> str:
        return self._render(self.weights_frame(horizon))

    def spectral_radius_frame(self, p_max: int) -> pd.DataFrame:
        """rho_estimate(p) for p = 1..p_max next to the exact limit M/K"""
        limit = shift_operators.spectral_radius(self.params)
        rows = []
        for p in range(1, p_max + 1):
            value = shift_operators.rho_estimate(p, self.params)
            rows.append({
                'p': p,
                'n': (1 << p) - 1,
                'rho_estimate': value,
                'limit': limit,
                'abs_error': abs(value - limit),
            })
        return pd.DataFrame(rows, columns=['p', 'n', 'rho_estimate', 'limit', 'abs_error'])

    def spectral_radius_report(self, p_max: int) -> str:
        return self._render(self.spectral_radius_frame(p_max))

    @staticmethod
    def certificate_report(reports: List[CertificateReport], suite: Optional[str] = None,
                           include_runtime: bool = False) -> str:
        """JSON document with every report sorted by certificate id"""
        ordered = sorted(reports, key=lambda r: r.certificate)
        payload = {
            'suite': suite,
            'pass': all(r.status.value != 'fail' for r in ordered),
            'certificates': [r.to_dict(include_runtime) for r in ordered],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
