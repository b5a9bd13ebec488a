"""
Finitely supported vector in l^2 over the Hilbert basis (e_n)
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

from .log_scalar import LogScalar


@dataclass
class SparseVec:
    """Model for a finitely supported l^2 vector with log-domain coefficients.

    Entries never hold exact zeros; an empty mapping is the zero vector.
    Treated as a value: services never mutate an existing vector.
    """
    entries: Dict[int, LogScalar] = field(default_factory=dict)
    cached_norm: Optional[LogScalar] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for index in self.entries:
            if index < 1:
                raise ValueError(f"basis indices start at 1 (got {index})")
        self.entries = {n: c for n, c in self.entries.items() if c.sign != 0}

    @property
    def is_zero(self) -> bool:
        return not self.entries

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.entries))

    @property
    def support_min(self) -> Optional[int]:
        return min(self.entries) if self.entries else None

    @property
    def support_max(self) -> Optional[int]:
        return max(self.entries) if self.entries else None

    def __getitem__(self, index: int) -> LogScalar:
        return self.entries.get(index, LogScalar.zero())

    def __len__(self) -> int:
        return len(self.entries)

    def items(self) -> Iterator[Tuple[int, LogScalar]]:
        return iter(sorted(self.entries.items()))
