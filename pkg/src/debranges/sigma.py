"""Finite zero sequences with repetition bookkeeping.

A zero sequence keeps the imposed zeros in canonical order: equal values
sit in contiguous runs (runs ordered by first appearance) and every entry
carries its offset inside its run. That offset is the derivative order
used whenever a function is "evaluated" at the entry, so a run of m equal
zeros imposes vanishing to order m.

Equality of zeros is exact complex equality. Nearly coincident zeros stay
distinct; the resulting ill-conditioning is reported by the Gram layer
instead of being merged away here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

from .errors import PoleError

# Distance to a zero, relative to 1 + |zero|, below which evaluation
# switches from the direct rational form to the Taylor form that absorbs
# the vanishing order. Shared by the gram and structure layers.
DESINGULARIZATION_RADIUS_FACTOR = 1e-3
DESINGULARIZATION_TERMS = 8


def _canonical_confluence(points: tuple[complex, ...]) -> Optional[tuple[int, ...]]:
    """Confluence offsets for `points`, or None if runs are not contiguous."""
    seen: set[complex] = set()
    conf: list[int] = []
    for idx, p in enumerate(points):
        if idx > 0 and points[idx - 1] == p:
            conf.append(conf[-1] + 1)
            continue
        if p in seen:
            return None
        seen.add(p)
        conf.append(0)
    return tuple(conf)


@dataclass(frozen=True)
class ZeroSequence:
    """Canonically ordered zeros z_1..z_n with confluence offsets k_1..k_n.

    Construct through :func:`canonicalize`; direct construction is
    validated against the canonical bookkeeping.
    """

    points: tuple[complex, ...]
    confluence: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        conf = tuple(int(k) for k in self.confluence)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "confluence", conf)
        expected = _canonical_confluence(pts)
        if expected is None:
            raise ValueError("equal zeros must be contiguous; use canonicalize()")
        if conf != expected:
            raise ValueError("confluence offsets do not match the points")

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def group_list(self) -> tuple[tuple[complex, int], ...]:
        """Runs of equal zeros as (value, multiplicity), in order."""
        groups: list[tuple[complex, int]] = []
        for p, k in zip(self.points, self.confluence):
            if k == 0:
                groups.append((p, 1))
            else:
                value, count = groups[-1]
                groups[-1] = (value, count + 1)
        return tuple(groups)

    def multiplicity(self, value: complex) -> int:
        value = complex(value)
        for v, count in self.group_list:
            if v == value:
                return count
        return 0

    def local_group(
        self, w: complex, radius_factor: float = DESINGULARIZATION_RADIUS_FACTOR
    ) -> Optional[tuple[complex, int]]:
        """Nearest run whose de-singularization disk contains w, or None."""
        w = complex(w)
        best: Optional[tuple[float, complex, int]] = None
        for v, count in self.group_list:
            d = abs(w - v)
            if d <= radius_factor * (1.0 + abs(v)) and (best is None or d < best[0]):
                best = (d, v, count)
        return None if best is None else (best[1], best[2])

    def product(self, at: complex, exclude_value: Optional[complex] = None) -> complex:
        """prod (at - z_i), optionally skipping the run equal to exclude_value."""
        acc = 1.0 + 0j
        for p in self.points:
            if exclude_value is not None and p == exclude_value:
                continue
            acc *= at - p
        return acc

    def gamma(self, z: complex) -> complex:
        """The rational factor prod 1/(z - z_i); a pole on the sequence raises."""
        z = complex(z)
        if any(z == p for p in self.points):
            raise PoleError(f"gamma has a pole at {z}; use the de-singularized routes")
        return 1.0 / self.product(z)


def canonicalize(points: Iterable[complex]) -> ZeroSequence:
    """Group equal values contiguously, keeping order of first appearance."""
    counts: dict[complex, int] = {}
    for p in points:
        p = complex(p)
        counts[p] = counts.get(p, 0) + 1
    pts: list[complex] = []
    conf: list[int] = []
    for value, count in counts.items():
        for k in range(count):
            pts.append(value)
            conf.append(k)
    return ZeroSequence(tuple(pts), tuple(conf))


def bracket(f: Callable[..., complex], zs: ZeroSequence, i: int) -> complex:
    """The functional f -> f^(k_i)(z_i) for the i-th entry (0-based).

    `f` is called as f(point, order); bound methods like
    StructureFunction.eval_E fit directly.
    """
    return f(zs.points[i], zs.confluence[i])


def bracket_eps(f: Callable[[complex], complex], zs: ZeroSequence, i: int, eps: float) -> complex:
    """One-sided difference approximation of :func:`bracket`.

    eps^(-k_i) * sum_l (-1)^l binom(k_i, l) f(z_i - l*eps), which tends to
    f^(k_i)(z_i) as eps -> 0 for analytic f.
    """
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    k = zs.confluence[i]
    z = zs.points[i]
    acc = 0j
    for ell in range(k + 1):
        acc += ((-1) ** ell) * math.comb(k, ell) * f(z - ell * eps)
    return acc / eps**k
