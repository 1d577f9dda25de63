"""Rectangular integer-lattice supports.

A support is a box ``{a_1..b_1} x ... x {a_d..b_d}`` where each lower bound
is a finite integer or ``-inf`` and each upper bound a finite integer or
``+inf``.  Every catalog distribution lives on such a box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModelError

__all__ = ["Bound", "LatticeBox"]


@dataclass(frozen=True)
class Bound:
    """One edge of a lattice interval: a finite integer or an infinity.

    ``value`` is an integer-valued float, ``math.inf`` or ``-math.inf``.
    """

    value: float

    def __post_init__(self) -> None:
        v = self.value
        if not (math.isinf(v) or float(v).is_integer()):
            raise InvalidModelError(f"bound must be an integer or infinite, got {v!r}")
        object.__setattr__(self, "value", float(v))

    @staticmethod
    def finite(value: int) -> "Bound":
        if math.isinf(value):
            raise InvalidModelError("finite bound cannot be infinite")
        return Bound(float(value))

    @staticmethod
    def plus_infinity() -> "Bound":
        return Bound(math.inf)

    @staticmethod
    def minus_infinity() -> "Bound":
        return Bound(-math.inf)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def as_int(self) -> int:
        if not self.is_finite:
            raise InvalidModelError("infinite bound has no integer value")
        return int(self.value)


@dataclass(frozen=True)
class LatticeBox:
    """Box support with per-axis bounds.

    ``-inf`` is legal only as a lower bound, ``+inf`` only as an upper bound,
    and on every axis ``lower < upper`` unless ``allow_degenerate`` was set
    (degenerate boxes arise from single-point domain estimates and are valid
    data even though no distribution is supported on them).
    """

    lower: tuple[Bound, ...]
    upper: tuple[Bound, ...]
    allow_degenerate: bool = False

    def __post_init__(self) -> None:
        lower = tuple(b if isinstance(b, Bound) else Bound(float(b)) for b in self.lower)
        upper = tuple(b if isinstance(b, Bound) else Bound(float(b)) for b in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != len(upper) or not lower:
            raise InvalidModelError("lower and upper must have equal positive length")
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if lo.value == math.inf:
                raise InvalidModelError(f"axis {i}: +inf is not a valid lower bound")
            if hi.value == -math.inf:
                raise InvalidModelError(f"axis {i}: -inf is not a valid upper bound")
            if self.allow_degenerate:
                if lo.value > hi.value:
                    raise InvalidModelError(f"axis {i}: lower {lo.value} > upper {hi.value}")
            elif not lo.value < hi.value:
                raise InvalidModelError(f"axis {i}: need lower < upper, got [{lo.value}, {hi.value}]")

    @staticmethod
    def interval(a: float, b: float) -> "LatticeBox":
        """One-dimensional box ``{a..b}``."""
        return LatticeBox((Bound(float(a)),), (Bound(float(b)),))

    @staticmethod
    def of(lower, upper, allow_degenerate: bool = False) -> "LatticeBox":
        return LatticeBox(
            tuple(Bound(float(v)) for v in lower),
            tuple(Bound(float(v)) for v in upper),
            allow_degenerate,
        )

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def is_finite(self) -> bool:
        return all(lo.is_finite for lo in self.lower) and all(hi.is_finite for hi in self.upper)

    def lower_array(self) -> np.ndarray:
        return np.array([b.value for b in self.lower])

    def upper_array(self) -> np.ndarray:
        return np.array([b.value for b in self.upper])

    def contains(self, k) -> bool:
        """Whether a lattice point (scalar for d=1, length-d sequence else) is in the box."""
        pt = np.atleast_1d(np.asarray(k, dtype=float))
        if pt.shape != (self.dim,):
            return False
        return bool(
            np.all(pt >= self.lower_array()) and np.all(pt <= self.upper_array())
        )

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for an ``(n, d)`` array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        lo, hi = self.lower_array(), self.upper_array()
        return np.all(pts >= lo, axis=1) & np.all(pts <= hi, axis=1)

    def axis_range(self, i: int) -> np.ndarray:
        """All integer points on a finite axis."""
        lo, hi = self.lower[i], self.upper[i]
        if not (lo.is_finite and hi.is_finite):
            raise InvalidModelError(f"axis {i} is not finite")
        return np.arange(lo.as_int(), hi.as_int() + 1, dtype=np.int64)

    def enumerate_points(self) -> np.ndarray:
        """All lattice points of a finite box as an ``(n, d)`` int array."""
        axes = [self.axis_range(i) for i in range(self.dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)
