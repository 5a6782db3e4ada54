"""Per-wire current domains: arithmetic progressions or finite sets."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .expr import Poly, poly_add, poly_const, poly_var


class DomainViolation(ValueError):
    """A current left the domain declared for its wire type."""


@dataclass(frozen=True)
class Progression:
    """The set ``{step*k + base | k >= 0}``; ``step == 0`` is the singleton."""

    step: int
    base: int

    def __post_init__(self) -> None:
        if self.step < 0 or self.base < 1:
            raise ValueError("progressions need step >= 0 and base >= 1")

    @property
    def finite(self) -> bool:
        return self.step == 0

    def points(self, B: int) -> list[int]:
        if self.step == 0:
            return [self.base]
        return [self.base + self.step * k for k in range(B)]

    def __contains__(self, v: int) -> bool:
        if self.step == 0:
            return v == self.base
        return v >= self.base and (v - self.base) % self.step == 0

    def member_mask(self, arr):
        if self.step == 0:
            return arr == self.base
        return (arr >= self.base) & ((arr - self.base) % self.step == 0)

    def next(self, v: int) -> int | None:
        return None if self.step == 0 else v + self.step

    def clamp(self, v: int) -> int:
        if v <= self.base or self.step == 0:
            return self.base
        return self.base + (v - self.base) // self.step * self.step

    def minimum(self) -> int:
        return self.base

    def as_poly(self, i: int, n: int) -> Poly | None:
        """The domain as ``step*t_i + base`` over a fresh natural ``t_i``."""
        lin = {k: self.step * v for k, v in poly_var(i, n).items()} if self.step else {}
        return poly_add(lin, poly_const(self.base, n))

    def __str__(self) -> str:
        if self.step == 0:
            return "{%d}" % self.base
        if self.step == 1 and self.base == 1:
            return "N-{0}"
        lead = "N" if self.step == 1 else f"{self.step}N"
        return f"{lead}+{self.base}"


@dataclass(frozen=True)
class FiniteSet:
    values: tuple

    def __post_init__(self) -> None:
        vals = tuple(sorted(set(self.values)))
        if not vals or vals[0] < 1:
            raise ValueError("finite domains must be non-empty sets of positive naturals")
        object.__setattr__(self, "values", vals)

    finite = True

    def points(self, B: int) -> list[int]:
        return list(self.values[:B])

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def member_mask(self, arr):
        return np.isin(arr, self.values)

    def next(self, v: int) -> int | None:
        for w in self.values:
            if w > v:
                return w
        return None

    def clamp(self, v: int) -> int:
        best = self.values[0]
        for w in self.values:
            if w <= v:
                best = w
        return best

    def minimum(self) -> int:
        return self.values[0]

    def as_poly(self, i: int, n: int) -> Poly | None:
        return poly_const(self.values[0], n) if len(self.values) == 1 else None

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.values)) + "}"


Domain = Progression | FiniteSet

POSITIVE = Progression(1, 1)

_PROG = re.compile(r"^(\d*)\s*\*?\s*N\s*(?:\+\s*(\d+))?$")


def parse_domain(text: str) -> Domain:
    """Parse ``N-{0}``, ``N+1``, ``2N+1``, ``2*N+1``, ``{1}`` or ``{1,2,3}``."""
    t = text.strip()
    if t.replace(" ", "") in ("N-{0}", "N\\{0}"):
        return POSITIVE
    if t.startswith("{") and t.endswith("}"):
        items = [s.strip() for s in t[1:-1].split(",") if s.strip()]
        vals = tuple(int(s) for s in items)
        return Progression(0, vals[0]) if len(vals) == 1 else FiniteSet(vals)
    m = _PROG.match(t)
    if m:
        step = int(m.group(1)) if m.group(1) else 1
        base = int(m.group(2)) if m.group(2) else 0
        return Progression(step, base)
    raise ValueError(f"cannot parse domain {text!r}")
