"""Separable ground costs ``c(x, y) = h1(|x1 - y1|) + h2(|x2 - y2|)``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

_CONVEXITY_GRID = np.linspace(0.0, 20.0, 201)
_CONVEXITY_TOL = 1e-12


@dataclass(frozen=True)
class ConvexRadialCost:
    """One-dimensional cost ``h(|x - y|)`` with ``h`` convex, ``h(0) = 0``, ``h >= 0``.

    Use :meth:`power` for ``h(t) = t**p`` and :meth:`custom` for an arbitrary
    callable. Convexity of a custom ``h`` is the caller's responsibility; it is
    only spot-checked on a grid.
    """

    p: Optional[float] = None
    h: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if (self.p is None) == (self.h is None):
            raise ValueError("give exactly one of p or h")
        if self.p is not None:
            if not self.p >= 1:
                raise ValueError(f"power cost needs p >= 1, got {self.p!r}")
            object.__setattr__(self, "p", float(self.p))
        else:
            _spot_check_convex(self.h)

    @classmethod
    def power(cls, p: float) -> ConvexRadialCost:
        return cls(p=p)

    @classmethod
    def custom(cls, h: Callable[[float], float]) -> ConvexRadialCost:
        return cls(h=h)

    @property
    def is_power(self) -> bool:
        return self.p is not None

    def radial(self, t: float) -> float:
        t = abs(t)
        if self.p is None:
            return float(self.h(t))
        if self.p == 1.0:
            return t
        if self.p == 2.0:
            return t * t
        return t**self.p

    def __call__(self, x: float, y: float) -> float:
        return self.radial(x - y)

    def label(self) -> str:
        return f"{self.p:g}" if self.p is not None else "custom"


def _spot_check_convex(h) -> None:
    vals = np.array([float(h(t)) for t in _CONVEXITY_GRID])
    if abs(vals[0]) > _CONVEXITY_TOL:
        raise ValueError("custom cost must satisfy h(0) = 0")
    if np.any(vals < -_CONVEXITY_TOL):
        raise ValueError("custom cost must be nonnegative")
    mid = vals[1:-1]
    if np.any(mid > 0.5 * (vals[:-2] + vals[2:]) + _CONVEXITY_TOL * (1.0 + np.abs(mid))):
        raise ValueError("custom cost fails the midpoint convexity check")


@dataclass(frozen=True)
class SeparableCost:
    c1: ConvexRadialCost
    c2: ConvexRadialCost

    @classmethod
    def power(cls, p1: float, p2: Optional[float] = None) -> SeparableCost:
        return cls(ConvexRadialCost.power(p1), ConvexRadialCost.power(p1 if p2 is None else p2))

    @classmethod
    def parse(cls, spec: str) -> SeparableCost:
        """Parse a ``p1:p2`` string such as ``"2:2"``."""
        parts = spec.split(":")
        if len(parts) != 2:
            raise ValueError(f"cost spec must look like p1:p2, got {spec!r}")
        try:
            p1, p2 = (float(s) for s in parts)
        except ValueError:
            raise ValueError(f"cost spec must look like p1:p2, got {spec!r}") from None
        return cls.power(p1, p2)

    def __call__(self, x, y) -> float:
        return eval_total(self, x, y)

    def label(self) -> str:
        return f"{self.c1.label()}:{self.c2.label()}"


def eval_total(c: SeparableCost, x, y) -> float:
    return c.c1(x[0], y[0]) + c.c2(x[1], y[1])


def is_metric(c: SeparableCost) -> bool:
    """True when both components are ``|x - y|``, i.e. ``c`` is a separable distance."""
    return c.c1.p == 1.0 and c.c2.p == 1.0
