"""Deterministic point sampling: low-discrepancy interior points and grids.

Everything here is seeded or sequence-based so that identical configurations
produce byte-identical reports.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc

from .geometry import hyp_dist


def halton_disk_points(count: int, radius: float = 1.0) -> list[complex]:
    """Low-discrepancy points in the disk of given radius (area-uniform)."""
    sampler = qmc.Halton(d=2, scramble=False)
    pts = sampler.random(count + 1)[1:]  # drop the degenerate first point (0,0)
    out = []
    for u, v in pts:
        r = radius * math.sqrt(u)
        theta = 2.0 * math.pi * v
        out.append(complex(r * math.cos(theta), r * math.sin(theta)))
    return out


def halfplane_lattice(center: complex, radius: float, size: int) -> list[complex]:
    """size x size hyperbolic lattice around a half-plane point.

    Built from the model lattice u + i e^v around i (which stays within
    hyperbolic distance ~radius of i for |u|, |v| <= radius/1.8) and moved to
    the requested center by the isometry w -> x + y w.
    """
    s = radius / 1.8
    us = np.linspace(-s, s, size)
    vs = np.linspace(-s, s, size)
    x, y = center.real, center.imag
    pts = []
    for v in vs:
        for u in us:
            w = complex(u, math.exp(v))
            if hyp_dist(w, 1j) <= radius + 1e-9:
                pts.append(complex(x + y * w.real, y * w.imag))
    return pts


def halfplane_pairs(rng: np.random.Generator, count: int,
                    center: complex = 1j, spread: float = 2.0) -> list[tuple[complex, complex]]:
    """Random pairs of half-plane points clustered around a center."""
    x, y = center.real, center.imag
    pairs = []
    for _ in range(count):
        a = complex(x + y * rng.uniform(-spread, spread),
                    y * math.exp(rng.uniform(-spread / 2, spread / 2)))
        b = complex(x + y * rng.uniform(-spread, spread),
                    y * math.exp(rng.uniform(-spread / 2, spread / 2)))
        pairs.append((a, b))
    return pairs
