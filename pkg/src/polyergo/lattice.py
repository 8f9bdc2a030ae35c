"""Finitely supported functions on Z^d: boxes, dense and sparse storage.

A LatticeFunction carries an integer box (per-axis inclusive bounds) and
either a dense ndarray over the box or, for boxes above the dense cell cap,
a dict of nonzero entries.  Exact arithmetic is supported by object-dtype
arrays (or dict values) holding ints or Fractions; floating storage is
complex128 or float64.

Serialization writes a single JSON header line (box, dtype) followed by the
raw little-endian array bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Iterator

import numpy as np

from .errors import ContractError, DomainError, SizeCapError

DENSE_CELL_CAP = 10**7

_DTYPES = {"complex128": "<c16", "float64": "<f8"}


@dataclass(frozen=True)
class Box:
    """Axis-aligned integer box with inclusive bounds."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or not self.lo:
            raise DomainError("box bounds must be nonempty and of equal length")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise DomainError(f"empty box: lo={self.lo}, hi={self.hi}")

    @property
    def ndim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        n = 1
        for s in self.shape:
            n *= s
        return n

    def contains(self, point: Iterable[int]) -> bool:
        p = tuple(point)
        return len(p) == self.ndim and all(
            l <= x <= h for x, l, h in zip(p, self.lo, self.hi)
        )

    def offset(self, point: Iterable[int]) -> tuple[int, ...]:
        p = tuple(point)
        if not self.contains(p):
            raise DomainError(f"point {p} outside box")
        return tuple(x - l for x, l in zip(p, self.lo))

    def point(self, offset: Iterable[int]) -> tuple[int, ...]:
        return tuple(l + int(o) for l, o in zip(self.lo, offset))

    def points(self) -> Iterator[tuple[int, ...]]:
        for off in np.ndindex(*self.shape):
            yield tuple(l + o for l, o in zip(self.lo, off))

    def shifted(self, by: Iterable[int]) -> "Box":
        b = tuple(by)
        return Box(
            lo=tuple(l + s for l, s in zip(self.lo, b)),
            hi=tuple(h + s for h, s in zip(self.hi, b)),
        )

    def dilated(self, lo_shift: Iterable[int], hi_shift: Iterable[int]) -> "Box":
        return Box(
            lo=tuple(l + s for l, s in zip(self.lo, lo_shift)),
            hi=tuple(h + s for h, s in zip(self.hi, hi_shift)),
        )


class LatticeFunction:
    """Finitely supported function on Z^d over an explicit box."""

    def __init__(self, box: Box, values=None, entries: dict | None = None):
        self.box = box
        if (values is None) == (entries is None):
            raise DomainError("provide exactly one of values or entries")
        if values is not None:
            values = np.asarray(values)
            if values.shape != box.shape:
                raise DomainError(
                    f"values shape {values.shape} does not match box shape {box.shape}"
                )
            self.values = values
            self.entries = None
        else:
            for p in entries:
                if not box.contains(p):
                    raise DomainError(f"entry {p} outside box")
            self.values = None
            self.entries = dict(entries)

    # ------------------------------------------------------------------
    @property
    def dense(self) -> bool:
        return self.values is not None

    @property
    def exact(self) -> bool:
        if self.dense:
            return self.values.dtype == object
        return all(
            isinstance(v, (int, Fraction)) or (isinstance(v, Number) and not isinstance(v, (float, complex)))
            for v in self.entries.values()
        )

    @classmethod
    def zeros(cls, box: Box, dtype=np.complex128) -> "LatticeFunction":
        if box.size > DENSE_CELL_CAP:
            return cls(box, entries={})
        if dtype is object:
            vals = np.zeros(box.shape, dtype=object)
            vals[...] = 0
            return cls(box, values=vals)
        return cls(box, values=np.zeros(box.shape, dtype=dtype))

    @classmethod
    def point_mass(cls, point: Iterable[int], value=1.0, box: Box | None = None) -> "LatticeFunction":
        p = tuple(int(x) for x in point)
        if box is None:
            box = Box(lo=p, hi=p)
        dtype = object if isinstance(value, (int, Fraction)) and not isinstance(value, bool) else np.complex128
        out = cls.zeros(box, dtype=dtype)
        out.set(p, value)
        return out

    # ------------------------------------------------------------------
    def get(self, point: Iterable[int]):
        p = tuple(point)
        if not self.box.contains(p):
            return 0
        if self.dense:
            return self.values[self.box.offset(p)]
        return self.entries.get(p, 0)

    def set(self, point: Iterable[int], value) -> None:
        p = tuple(point)
        if self.dense:
            self.values[self.box.offset(p)] = value
        else:
            if not self.box.contains(p):
                raise DomainError(f"point {p} outside box")
            if value == 0:
                self.entries.pop(p, None)
            else:
                self.entries[p] = value

    def items(self) -> Iterator[tuple[tuple[int, ...], object]]:
        if self.dense:
            for off in zip(*np.nonzero(self.values)):
                point = tuple(l + int(o) for l, o in zip(self.box.lo, off))
                yield point, self.values[off]
        else:
            yield from self.entries.items()

    def total(self):
        """Sum of all values (exact when storage is exact)."""
        if self.dense:
            if self.values.dtype == object:
                acc = 0
                for v in self.values.flat:
                    acc += v
                return acc
            return complex(self.values.sum())
        acc = 0
        for v in self.entries.values():
            acc += v
        return acc

    def sup_norm(self) -> float:
        if self.dense:
            if self.values.dtype == object:
                return max((abs(complex(v)) for v in self.values.flat), default=0.0)
            return float(np.abs(self.values).max()) if self.values.size else 0.0
        return max((abs(complex(v)) for v in self.entries.values()), default=0.0)

    def lp_norm(self, p: float) -> float:
        if p <= 0:
            raise DomainError("need p > 0")
        if self.dense and self.values.dtype != object:
            mags = np.abs(self.values)
        else:
            mags = np.array([abs(complex(v)) for _, v in self.items()])
        if mags.size == 0:
            return 0.0
        return float((mags**p).sum() ** (1.0 / p))

    def astype_complex(self) -> "LatticeFunction":
        if self.dense:
            if self.values.dtype == np.complex128:
                return self
            return LatticeFunction(self.box, values=np.asarray(
                [complex(v) for v in self.values.flat], dtype=np.complex128
            ).reshape(self.box.shape))
        return LatticeFunction(
            self.box, entries={p: complex(v) for p, v in self.entries.items()}
        )

    def to_dense(self) -> "LatticeFunction":
        if self.dense:
            return self
        if self.box.size > DENSE_CELL_CAP:
            raise SizeCapError(f"box has {self.box.size} cells, above the dense cap")
        out = LatticeFunction.zeros(self.box, dtype=np.complex128)
        for p, v in self.entries.items():
            out.set(p, complex(v))
        return out

    # ------------------------------------------------------------------
    def save(self, path) -> None:
        """JSON header line + raw little-endian array bytes."""
        if not self.dense:
            raise ContractError("sparse lattice functions are not serializable")
        name = {np.dtype(np.complex128): "complex128", np.dtype(np.float64): "float64"}.get(
            self.values.dtype
        )
        if name is None:
            raise ContractError(f"dtype {self.values.dtype} is not serializable")
        header = json.dumps({"lo": list(self.box.lo), "hi": list(self.box.hi), "dtype": name})
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii") + b"\n")
            fh.write(np.ascontiguousarray(self.values).astype(_DTYPES[name]).tobytes())

    @classmethod
    def load(cls, path) -> "LatticeFunction":
        with open(path, "rb") as fh:
            header = json.loads(fh.readline().decode("ascii"))
            box = Box(lo=tuple(header["lo"]), hi=tuple(header["hi"]))
            dtype = header["dtype"]
            if dtype not in _DTYPES:
                raise DomainError(f"unknown dtype {dtype!r}")
            raw = fh.read()
        values = np.frombuffer(raw, dtype=_DTYPES[dtype]).reshape(box.shape)
        return cls(box, values=values.copy())
