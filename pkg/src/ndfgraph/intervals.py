"""Intervals lists: ordered partitions of the degree axis.

An intervals list is given by its ascending starting points
``n_1 < n_2 < ... < n_m``; interval ``j`` holds the degrees
``n_j .. n_{j+1} - 1`` and the last interval is unbounded.  Lists for
undirected graphs start at 1, lists for directed graphs start at 0 so that
neighbours of in-/out-degree zero have a bucket.
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph


class DegreeDomainError(ValueError):
    """A degree fell below the first starting point of an intervals list."""


@dataclass(frozen=True)
class IntervalsList:
    starting_points: tuple[int, ...]
    zero_based: bool = False

    def __post_init__(self):
        pts = tuple(int(x) for x in self.starting_points)
        object.__setattr__(self, "starting_points", pts)
        if not pts:
            raise ValueError("an intervals list needs at least one starting point")
        first = 0 if self.zero_based else 1
        if pts[0] != first:
            raise ValueError(f"starting points must begin at {first}, got {pts[0]}")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError(f"starting points must be strictly ascending: {list(pts)}")

    @classmethod
    def parse(cls, text: str, zero_based: bool | None = None) -> "IntervalsList":
        """Parse ``"1,2,4,7"``; a leading 0 implies ``zero_based``."""
        try:
            pts = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError:
            raise ValueError(f"starting points must be integers: {text!r}") from None
        if zero_based is None:
            zero_based = bool(pts) and pts[0] == 0
        return cls(tuple(pts), zero_based)

    def __len__(self) -> int:
        return len(self.starting_points)

    def __str__(self) -> str:
        return ",".join(map(str, self.starting_points))

    def bucket(self, degree: int) -> int:
        """0-based index of the interval containing ``degree``."""
        if degree < self.starting_points[0]:
            raise DegreeDomainError(
                f"degree {degree} is below the first starting point "
                f"{self.starting_points[0]} (directed degrees need a zero-based list)"
            )
        return bisect_right(self.starting_points, degree) - 1

    def buckets(self, degrees) -> np.ndarray:
        """Vectorised :meth:`bucket`."""
        degrees = np.asarray(degrees, dtype=np.int64)
        if degrees.size and degrees.min() < self.starting_points[0]:
            bad = int(degrees.min())
            raise DegreeDomainError(
                f"degree {bad} is below the first starting point {self.starting_points[0]}"
            )
        return np.searchsorted(np.asarray(self.starting_points), degrees, side="right") - 1

    def intervals(self) -> list[tuple[int, float]]:
        """``[(start, end_inclusive), ...]`` with ``math.inf`` closing the last one."""
        pts = self.starting_points
        return [(a, b - 1) for a, b in zip(pts, pts[1:])] + [(pts[-1], math.inf)]

    def check_covers(self, degrees: Iterable[int]) -> bool:
        """Warn when the unbounded last interval holds none of ``degrees``.

        Such a list still partitions the degrees, but its last NDF coordinate
        is identically zero on the graph.
        """
        degrees = list(degrees)
        ok = bool(degrees) and max(degrees) >= self.starting_points[-1]
        if not ok:
            warnings.warn(
                f"last interval [{self.starting_points[-1]}, inf) contains no occurring degree",
                stacklevel=2,
            )
        return ok


def uniform_starting_points(d: int, m: int) -> IntervalsList:
    """Intervals of fixed length ``m``; any shorter remainder is the first interval."""
    if not (d >= m >= 1 and d > 1):
        raise ValueError(f"need d >= m >= 1 and d > 1, got d={d}, m={m}")
    points = []
    next_point = d
    while next_point > 0:
        points.append(next_point)
        next_point -= m
        if next_point <= 1:
            points.append(1)
            break
    points.reverse()
    return IntervalsList(tuple(points))


def increasing_starting_points(d: int, m: int, s: int, r: float) -> IntervalsList:
    """Interval lengths grow geometrically by ``r`` from ``s`` up to ``m``.

    Each new point is ``floor(last + length)``; generation stops once the
    last point reaches ``d``, and a final point beyond ``d`` is dropped.
    """
    if not (d >= m >= s >= 1):
        raise ValueError(f"need d >= m >= s >= 1, got d={d}, m={m}, s={s}")
    if not r > 1:
        raise ValueError(f"ratio must exceed 1, got {r}")
    next_length = s
    points = [1, s + 1]
    while points[-1] < d:
        next_length = min(next_length * r, m)
        points.append(int(points[-1] + next_length))
    if points[-1] > d:
        points.pop()
    return IntervalsList(tuple(points))


def concat_starting_points(primary: IntervalsList, complementary: Sequence[int]) -> IntervalsList:
    """Append hand-picked points for the high-degree tail of a list."""
    comp = [int(x) for x in complementary]
    if any(b <= a for a, b in zip(comp, comp[1:])):
        raise ValueError(f"complementary points must be strictly ascending: {comp}")
    if comp and comp[0] <= primary.starting_points[-1]:
        raise ValueError(
            f"complementary points must exceed {primary.starting_points[-1]}, got {comp[0]}"
        )
    return IntervalsList(primary.starting_points + tuple(comp), primary.zero_based)


def _direction_for(g: Graph, direction: str | None) -> str:
    if g.directed:
        if direction not in ("inward", "outward"):
            raise ValueError("directed graphs need direction 'inward' or 'outward'")
        return direction
    return "undirected"


def vanilla_intervals(g: Graph, direction: str | None = None) -> IntervalsList:
    """``[1, 2, ..., maxdeg]``, or ``[0, 1, ..., maxdeg]`` on directed graphs."""
    direction = _direction_for(g, direction)
    d = g.max_degree(direction)
    if g.directed:
        return IntervalsList(tuple(range(0, max(d, 0) + 1)), zero_based=True)
    if d < 1:
        raise ValueError("graph has no edges")
    return IntervalsList(tuple(range(1, d + 1)))


def minimal_intervals(g: Graph, direction: str | None = None) -> IntervalsList:
    """Ascending occurring degrees with the first point forced to 1 (0 if directed)."""
    direction = _direction_for(g, direction)
    degrees = sorted(set(g.degrees(direction).tolist()))
    if not g.directed and degrees[-1:] in ([], [0]):
        raise ValueError("graph has no edges")
    if not degrees:
        raise ValueError("graph has no nodes")
    degrees[0] = 0 if g.directed else 1
    return IntervalsList(tuple(sorted(set(degrees))), zero_based=g.directed)
