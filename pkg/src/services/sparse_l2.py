"""
Sparse l^2 vectors: construction, norms, linear combinations and the
index:sign:log_mag text format
"""

import math
from typing import Dict, Iterable, Optional

from src.exceptions import VectorFormatError
from src.models.log_scalar import LogScalar, ZERO
from src.models.sparse_vec import SparseVec
from src.services import logspace
from src.services.logspace import CancellationCounter


def zero_vector() -> SparseVec:
    return SparseVec({})


def basis(i: int, c: LogScalar = LogScalar.one()) -> SparseVec:
    """The vector c * e_i"""
    if i < 1:
        raise ValueError(f"basis indices start at 1 (got {i})")
    if c.sign == 0:
        return zero_vector()
    return SparseVec({i: c})


def from_reals(values: Dict[int, float]) -> SparseVec:
    return SparseVec({n: LogScalar.from_real(v) for n, v in values.items()})


def norm(x: SparseVec) -> LogScalar:
    """l^2 norm in the log domain; computed once per vector"""
    if x.cached_norm is None:
        x.cached_norm = logspace.log_sum_exp_sq(x.entries.values())
    return x.cached_norm


def scale(c: LogScalar, x: SparseVec) -> SparseVec:
    if c.sign == 0:
        return zero_vector()
    result = SparseVec({n: logspace.mul(c, v) for n, v in x.entries.items()})
    if x.cached_norm is not None:
        result.cached_norm = logspace.mul(abs(c), x.cached_norm)
    return result


def axpy(a: LogScalar, x: SparseVec, y: SparseVec,
         counter: Optional[CancellationCounter] = None) -> SparseVec:
    """a*x + y with exact cancellation pruned"""
    if a.sign == 0 or x.is_zero:
        return y
    entries = dict(y.entries)
    for n, v in x.entries.items():
        term = logspace.mul(a, v)
        current = entries.get(n)
        entries[n] = term if current is None else logspace.add(current, term, counter)
    return SparseVec(entries)


def add(x: SparseVec, y: SparseVec) -> SparseVec:
    return axpy(LogScalar.one(), x, y)


def sub(x: SparseVec, y: SparseVec, counter: Optional[CancellationCounter] = None) -> SparseVec:
    return axpy(-LogScalar.one(), y, x, counter)


def inner(x: SparseVec, y: SparseVec, counter: Optional[CancellationCounter] = None) -> LogScalar:
    """<x, y>, signed products summed largest magnitude first"""
    if len(x) > len(y):
        x, y = y, x
    products = [
        logspace.mul(v, y.entries[n]) for n, v in x.entries.items() if n in y.entries
    ]
    products.sort(key=lambda p: p.log_mag, reverse=True)
    total = ZERO
    for p in products:
        total = logspace.add(total, p, counter)
    return total


def normalize(x: SparseVec) -> SparseVec:
    if x.is_zero:
        raise ValueError("the zero vector has no direction")
    return scale(logspace.div(LogScalar.one(), norm(x)), x)


def with_log_norm(x: SparseVec, log_norm: float) -> SparseVec:
    """Rescale x so that log ||x|| == log_norm"""
    if x.is_zero:
        raise ValueError("the zero vector cannot be rescaled to a positive norm")
    shift = LogScalar(1, log_norm - norm(x).log_mag)
    result = scale(shift, x)
    result.cached_norm = LogScalar(1, log_norm)
    return result


def format_vector(x: SparseVec) -> str:
    """One 'index:sign:log_mag' triple per line, ascending index"""
    return "".join(f"{n}:{c.sign}:{c.log_mag!r}\n" for n, c in x.items())


def parse_vector(lines: Iterable[str]) -> SparseVec:
    """Inverse of format_vector; blank lines and '#' comments are skipped"""
    entries: Dict[int, LogScalar] = {}
    for line_num, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split(':')
        if len(parts) != 3:
            raise VectorFormatError(f"line {line_num}: expected index:sign:log_mag, got {line!r}")
        try:
            index, sign, log_mag = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise VectorFormatError(f"line {line_num}: {exc}") from exc
        if not math.isfinite(log_mag):
            raise VectorFormatError(f"line {line_num}: log_mag must be finite (got {parts[2]!r})")
        if index < 1:
            raise VectorFormatError(f"line {line_num}: index must be >= 1")
        if sign not in (-1, 0, 1):
            raise VectorFormatError(f"line {line_num}: sign must be -1, 0 or 1")
        if index in entries:
            raise VectorFormatError(f"line {line_num}: duplicate index {index}")
        entries[index] = LogScalar.from_log(log_mag, sign)
    return SparseVec(entries)
