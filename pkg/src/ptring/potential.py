"""Piecewise-constant purely imaginary potentials on a circle of circumference 4.

The solver's potential family consists of 4M equal segments of width h = 1/M
alternating between +iZ and -iZ, the first segment (starting at -2) carrying
+iZ. Such a layout is PT-symmetric: V(-x) equals the complex conjugate of V(x)
away from segment boundaries.
"""

import cmath
import math
from dataclasses import dataclass

CIRCUMFERENCE = 4.0
START = -2.0

_WIDTH_SUM_TOL = 1e-12


@dataclass(frozen=True)
class CirclePotential:
    """Ordered segments (width, purely imaginary value) covering the circle.

    Segment boundaries are half-open on the right; the value at a boundary
    point is the left segment's value (matching conditions never evaluate V
    at a boundary, so this choice is inert).
    """

    circumference: float
    start: float
    segments: tuple[tuple[float, complex], ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("potential needs at least one segment")
        for width, value in self.segments:
            if not width > 0:
                raise ValueError(f"segment width must be positive, got {width}")
            if value.real != 0.0:
                raise ValueError(f"segment value must be purely imaginary, got {value}")
        total = math.fsum(w for w, _ in self.segments)
        if abs(total - self.circumference) > _WIDTH_SUM_TOL:
            raise ValueError(
                f"segment widths sum to {total!r}, expected {self.circumference!r}"
            )

    def boundaries(self) -> list[float]:
        """All segment edges from start to start + circumference."""
        edges = [self.start]
        for width, _ in self.segments:
            edges.append(edges[-1] + width)
        return edges

    def value_at(self, x: float) -> complex:
        """V(x) for x in [start, start + circumference), left-closed segments."""
        offset = (x - self.start) % self.circumference
        acc = 0.0
        for width, value in self.segments:
            acc += width
            if offset < acc:
                return value
        return self.segments[-1][1]

    def is_pt_symmetric(self, samples: int = 997) -> bool:
        """Check V(-x) == conj(V(x)) on a grid, skipping segment boundaries.

        Boundary points are measure zero and carry no matching information;
        the half-open convention makes V one-sided there, so they are excluded.
        """
        edges = self.boundaries()
        for i in range(samples):
            x = self.start + (i + 0.5) * self.circumference / samples
            if any(abs(x - e) < 1e-9 or abs(-x - e) < 1e-9 for e in edges):
                continue
            if self.value_at(-x) != self.value_at(x).conjugate():
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "circumference": self.circumference,
            "start": self.start,
            "segments": [{"width": w, "im": v.imag} for w, v in self.segments],
        }


def build_square_well(M: int, Z: float) -> CirclePotential:
    """The 4M-segment alternating potential: +iZ first from -2, width 1/M each."""
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    if not Z > 0:
        raise ValueError(f"Z must be positive, got {Z!r}")
    h = 1.0 / M
    segments = tuple(
        (h, complex(0.0, Z) if j % 2 == 0 else complex(0.0, -Z)) for j in range(4 * M)
    )
    return CirclePotential(CIRCUMFERENCE, START, segments)


def rotate_segments(pot: CirclePotential, k: int) -> CirclePotential:
    """Cyclically shift the segment list by k positions (k taken mod count)."""
    n = len(pot.segments)
    k = k % n
    return CirclePotential(
        pot.circumference, pot.start, pot.segments[k:] + pot.segments[:k]
    )


def asymptotic_pt_imag(M: int, alpha: float, s: float) -> complex:
    """Smooth large-alpha reference shape e^(-2 M alpha) (-cos(pi M s) + i sin(pi M s)).

    Used only to cross-check segment signs; never enters the secular solver.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    phase = math.pi * M * s
    return cmath.exp(-2.0 * M * alpha) * complex(-math.cos(phase), math.sin(phase))
