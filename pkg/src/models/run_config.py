"""
Run configuration for the command-line front end
"""

from dataclasses import dataclass, fields
from typing import Optional

from src.exceptions import ConfigError, ParamsError
from .params import Params

OUTPUT_FORMATS = ('csv', 'json')


@dataclass
class RunConfig:
    """Model for a single CLI run"""
    M: float = 5.0
    K: float = 3.0
    seed: int = 7
    steps: int = 20000
    horizon: int = 512
    format: str = 'csv'
    out: Optional[str] = None

    def __post_init__(self):
        try:
            Params(self.M, self.K)
        except ParamsError as exc:
            raise ConfigError(str(exc)) from exc
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0 (got {self.steps})")
        if self.horizon < 0:
            raise ConfigError(f"horizon must be >= 0 (got {self.horizon})")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"format must be one of {OUTPUT_FORMATS} (got {self.format!r})")

    @classmethod
    def keys(cls):
        return tuple(f.name for f in fields(cls))

    @property
    def params(self) -> Params:
        return Params(self.M, self.K)
