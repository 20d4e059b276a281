"""Dyadic (Whitney-type) decomposition of the unit disk.

Level j splits the circle into 2^j arcs of angle 2 pi 2^-j and pairs the
k-th arc with the polar rectangle

    Q_{j,k} = { r e^{i theta} : 1 - 2^(1-j) <= r <= 1 - 2^-j,
                                 theta in the k-th arc },

so the cells tile the disk minus a boundary annulus of width 2^-j (the
level-1 cell reaches down to r = 0).  Each cell carries an inscribed disk
whose fixed dilate contains the cell; the dilation factor is reported so
integral comparisons can quote it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DyadicCell:
    """One polar rectangle of the dyadic decomposition."""

    level: int
    index: int          # 1-based angular index, 1 <= index <= 2^level
    r_min: float
    r_max: float
    theta_min: float
    theta_max: float

    @property
    def angular_width(self) -> float:
        return self.theta_max - self.theta_min

    @property
    def radial_width(self) -> float:
        return self.r_max - self.r_min

    def area(self) -> float:
        return 0.5 * (self.r_max ** 2 - self.r_min ** 2) * self.angular_width

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        r = abs(z)
        if not (self.r_min - slack <= r <= self.r_max + slack):
            return False
        theta = math.atan2(z.imag, z.real) % (2 * math.pi)
        lo = self.theta_min % (2 * math.pi)
        width = self.angular_width
        offset = (theta - lo) % (2 * math.pi)
        return offset <= width + slack or offset >= 2 * math.pi - slack

    def corners(self) -> np.ndarray:
        rs = (self.r_min, self.r_max)
        ts = (self.theta_min, self.theta_max)
        return np.array([r * np.exp(1j * t) for r in rs for t in ts])


@dataclass(frozen=True)
class InscribedDisk:
    """A disk inside a cell together with the dilation that covers the cell."""

    center: complex
    radius: float
    dilation: float


def cell(j: int, k: int) -> DyadicCell:
    if j < 1:
        raise DomainError(f"level must be >= 1, got {j}")
    if not (1 <= k <= 2 ** j):
        raise DomainError(f"angular index {k} outside 1..2^{j}")
    r_min = max(0.0, 1.0 - 2.0 ** (1 - j))
    r_max = 1.0 - 2.0 ** -j
    width = 2 * math.pi * 2.0 ** -j
    return DyadicCell(level=j, index=k, r_min=r_min, r_max=r_max,
                      theta_min=(k - 1) * width, theta_max=k * width)


def cells(j: int) -> Iterator[DyadicCell]:
    """Lazily iterate the 2^j cells of one level."""
    for k in range(1, 2 ** j + 1):
        yield cell(j, k)


def inscribed_disk(c: DyadicCell) -> InscribedDisk:
    """Largest centered disk inside the cell plus its covering dilation.

    The disk is centered at the polar midpoint.  Its radius is limited by
    the radial half-width and by the chord distance to the angular walls.
    The dilation is the factor by which the disk must be scaled (about its
    center) to contain the whole cell, i.e. max corner distance / radius.
    """
    r_mid = 0.5 * (c.r_min + c.r_max)
    t_mid = 0.5 * (c.theta_min + c.theta_max)
    center = r_mid * complex(math.cos(t_mid), math.sin(t_mid))
    half_rad = 0.5 * c.radial_width
    # distance from the center to the straight angular walls
    half_ang = 0.5 * c.angular_width
    wall = r_mid * math.sin(min(half_ang, 0.5 * math.pi))
    radius = min(half_rad, wall)
    if radius <= 0:
        raise DomainError(f"degenerate cell {c}")
    reach = max(abs(z - center) for z in inscribed_disk_reach_points(c))
    return InscribedDisk(center=center, radius=radius,
                         dilation=reach / radius)


def inscribed_disk_reach_points(c: DyadicCell) -> np.ndarray:
    """Points of the cell boundary realizing the maximal center distance."""
    return c.corners()


def level_area(j: int) -> float:
    """Total area covered by the cells of level j (an annulus, or disk)."""
    r_min = max(0.0, 1.0 - 2.0 ** (1 - j))
    r_max = 1.0 - 2.0 ** -j
    return math.pi * (r_max ** 2 - r_min ** 2)


def covered_area(J: int) -> float:
    """Area covered by all cells of levels 1..J: pi (1 - 2^-J)^2."""
    return math.pi * (1.0 - 2.0 ** -J) ** 2
