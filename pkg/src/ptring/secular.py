"""Secular functions whose real roots t_n determine the spectrum.

Two independent backends are provided:

- secular_monodromy: for any M, the ordered product T of segment propagators
  around the circle, with strictly periodic closure g(t) = 2 - tr(T)
  (a periodic eigenstate exists where the unit-determinant monodromy has
  eigenvalue 1, i.e. det(T - 1) = 2 - tr(T) = 0).

- secular_explicit: M=1 only, the determinant of an eight-by-eight matching
  system assembled from the per-segment sine/cosine ansatz. Its rows 3 and 4
  couple the two inner half-waves through an energy-dependent unimodular
  factor cos(kappa)/cos(kappa*), so this system is equivalent to a
  quasi-periodic closure and its root set is NOT the periodic one; it is the
  reference spectrum the regression suite pins. See README for the relation
  between the two backends.

Both backends substitute s = Z/(2t) and work at purely real energy
E = s^2 - t^2; values are returned in sign/log-magnitude form to survive the
huge dynamic range of the secular determinant.
"""

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .potential import CirclePotential

DEFAULT_REALITY_RTOL = 1e-8
# Calibrated ceiling for LU determinant imaginary-part rounding noise, in
# units of eps * exp(Hadamard row bound). Measured maximum over the working
# (Z, t) domain is 0.29; 64 leaves two orders of margin.
_NOISE_FLOOR_C = 64.0

_TINY_KAPPA = 1e-150


class SecularRealityError(RuntimeError):
    """The secular value failed its reality assertion.

    Signals either a PT-asymmetric input potential or a numerical fault;
    carries the offending (Z, t) and the imaginary magnitude seen.
    """

    def __init__(self, what: str, Z: float, t: float, im_mag: float):
        super().__init__(
            f"{what} not real at Z={Z!r}, t={t!r}: |Im| = {im_mag:.3e}"
        )
        self.Z = Z
        self.t = t
        self.im_mag = im_mag


def reality_rtol() -> float:
    """Reality tolerance, overridable via the PT_CIRCLE_TOL environment variable."""
    raw = os.environ.get("PT_CIRCLE_TOL")
    if raw is None:
        return DEFAULT_REALITY_RTOL
    try:
        val = float(raw)
    except ValueError as e:
        raise ValueError(f"PT_CIRCLE_TOL must be a float, got {raw!r}") from e
    if not val > 0:
        raise ValueError(f"PT_CIRCLE_TOL must be positive, got {val!r}")
    return val


@dataclass(frozen=True)
class SpectralPoint:
    """The (t, s, kappa, E) bundle tied by 2st = Z and E = s^2 - t^2.

    kappa = s - i t is the wavenumber in +iZ segments (kappa^2 = E - iZ);
    its conjugate belongs to -iZ segments. The branch is fixed by s > 0,
    t > 0 by construction, never by a complex square root.
    """

    Z: float
    t: float
    s: float
    kappa: complex
    E: float

    @classmethod
    def from_zt(cls, Z: float, t: float) -> "SpectralPoint":
        if not Z > 0:
            raise ValueError(f"Z must be positive, got {Z!r}")
        if not t > 0:
            raise ValueError(f"t must be positive, got {t!r}")
        s = Z / (2.0 * t)
        return cls(Z=Z, t=t, s=s, kappa=complex(s, -t), E=s * s - t * t)


@dataclass(frozen=True)
class LogScaledValue:
    """sign * e^(logmag) with sign in {-1, 0, +1}; logmag = -inf when sign = 0.

    logmag is exactly the L(t) = log|F(t)| quantity plotted by the scan
    command, so near-tangent zero crossings appear as deep dips.
    """

    sign: int
    logmag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 and self.logmag != float("-inf"):
            raise ValueError("zero value must carry logmag = -inf")

    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * float("inf")

    @classmethod
    def from_float(cls, x: float) -> "LogScaledValue":
        if x == 0.0:
            return cls(0, float("-inf"))
        return cls(1 if x > 0 else -1, math.log(abs(x)))


@dataclass(frozen=True)
class TransferMatrix2:
    """2x2 complex transfer matrix with an accumulated log scale factored out.

    The represented (true) matrix is e^(logscale) * [[a, b], [c, d]], so the
    stored determinant a d - b c equals e^(-2 logscale) times the true one.
    Wronskian conservation makes every true determinant here equal 1.

    det_factors carries the determinant accumulated factor by factor as
    products are built; extracting it from the final entries instead would
    lose up to e^(2 logscale) digits to cancellation. Callers constructing
    a matrix directly with a non-unit determinant must pass it explicitly.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    logscale: float = 0.0
    det_factors: complex = 1.0 + 0j

    def trace(self) -> complex:
        return self.a + self.d

    def det_stored(self) -> complex:
        """a d - b c of the stored entries. Diagnostic only: the rescaling
        makes this e^(-2 logscale), computed amid O(1) entries."""
        return self.a * self.d - self.b * self.c

    def det_true(self) -> complex:
        return self.det_factors


def segment_propagator(width: float, kappa: complex) -> TransferMatrix2:
    """Map (psi, psi') across one constant-kappa segment of the given width.

    [[cos(kd), sin(kd)/k], [-k sin(kd), cos(kd)]]; unit determinant by the
    sine/cosine Wronskian. For |kappa| below 1e-150 the analytic kappa -> 0
    limit [[1, d], [0, 1]] is used.
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width!r}")
    if abs(kappa) < _TINY_KAPPA:
        return TransferMatrix2(1.0 + 0j, complex(width), 0j, 1.0 + 0j)
    kd = kappa * width
    c = cmath.cos(kd)
    s = cmath.sin(kd)
    return TransferMatrix2(c, s / kappa, -kappa * s, c, det_factors=c * c + s * s)


def _rescaled_multiply(P: TransferMatrix2, T: TransferMatrix2) -> TransferMatrix2:
    """P @ T with the max entry magnitude factored out into logscale."""
    a = P.a * T.a + P.b * T.c
    b = P.a * T.b + P.b * T.d
    c = P.c * T.a + P.d * T.c
    d = P.c * T.b + P.d * T.d
    m = max(abs(a), abs(b), abs(c), abs(d))
    if m == 0.0:
        raise ArithmeticError("transfer matrix product vanished")
    return TransferMatrix2(
        a / m, b / m, c / m, d / m,
        P.logscale + T.logscale + math.log(m),
        det_factors=P.det_factors * T.det_factors,
    )


def monodromy(pot: CirclePotential, point: SpectralPoint) -> TransferMatrix2:
    """Ordered product of segment propagators once around the circle.

    Segments with value +iZ use kappa, segments with value -iZ use its
    conjugate; entries are rescaled to O(1) after every multiplication.
    """
    T = TransferMatrix2(1.0 + 0j, 0j, 0j, 1.0 + 0j)
    for width, value in pot.segments:
        if abs(abs(value.imag) - point.Z) > 1e-12 * point.Z:
            raise ValueError(
                f"segment value {value!r} does not match coupling Z={point.Z!r}"
            )
        kappa = point.kappa if value.imag > 0 else point.kappa.conjugate()
        T = _rescaled_multiply(segment_propagator(width, kappa), T)
    return T


def secular_monodromy(pot: CirclePotential, Z: float, t: float) -> LogScaledValue:
    """g(t) = 2 - tr(T) for the monodromy T, as a log-scaled real value.

    The monodromy logscale is folded in (the returned value is e^L times the
    normalized 2 e^(-L) - tr(T_scaled)), which leaves root positions intact.
    Asserts |Im g| <= rtol (1 + |Re g|) on the normalized value.
    """
    point = SpectralPoint.from_zt(Z, t)
    T = monodromy(pot, point)
    v = 2.0 * math.exp(-T.logscale) - T.trace()
    rtol = reality_rtol()
    if abs(v.imag) > rtol * (1.0 + abs(v.real)):
        raise SecularRealityError("monodromy secular value", Z, t, abs(v.imag))
    if v.real == 0.0:
        return LogScaledValue(0, float("-inf"))
    sign = 1 if v.real > 0 else -1
    return LogScaledValue(sign, T.logscale + math.log(abs(v.real)))


def build_Q(Z: float, t: float) -> np.ndarray:
    """The eight-by-eight matching matrix of the four-segment (M=1) system.

    Columns order the ansatz coefficients (A, B) per segment from -2:
    far-left, near-left, near-right, far-right; psi = A sin(kappa x)
    + B cos(kappa x) with the global coordinate x. Rows 1-2 match at x=-1,
    rows 3-4 at x=0, rows 5-6 at x=+1, rows 7-8 close the circle at x=+-2.
    Only the listed entries are nonzero; conjugate-paired positions hold
    conjugate values with the signs encoded below.
    """
    point = SpectralPoint.from_zt(Z, t)
    k = point.kappa
    kc = k.conjugate()
    sk, ck = cmath.sin(k), cmath.cos(k)
    s2k, c2k = cmath.sin(2 * k), cmath.cos(2 * k)
    skc, ckc = sk.conjugate(), ck.conjugate()
    s2kc, c2kc = s2k.conjugate(), c2k.conjugate()

    Q = np.zeros((8, 8), dtype=complex)
    # x = -1: psi and psi' continuity between far-left and near-left
    Q[0, 0], Q[0, 1], Q[0, 2], Q[0, 3] = -sk, ck, skc, -ckc
    Q[1, 0], Q[1, 1], Q[1, 2], Q[1, 3] = k * ck, k * sk, -kc * ckc, -kc * skc
    # x = 0: the inner-boundary rows; note the cos(kappa) weights, which make
    # the system quasi-periodic rather than strictly periodic (see README)
    Q[2, 3], Q[2, 5] = ckc, -ck
    Q[3, 2], Q[3, 4] = kc * ckc, -k * ck
    # x = +1: near-right to far-right
    Q[4, 4], Q[4, 5], Q[4, 6], Q[4, 7] = sk, ck, -skc, -ckc
    Q[5, 4], Q[5, 5], Q[5, 6], Q[5, 7] = k * ck, -k * sk, -kc * ckc, kc * skc
    # x = +-2: circular closure between far-right and far-left
    Q[6, 0], Q[6, 1], Q[6, 6], Q[6, 7] = -s2k, c2k, -s2kc, -c2kc
    Q[7, 0], Q[7, 1], Q[7, 6], Q[7, 7] = k * c2k, k * s2k, -kc * c2kc, kc * s2kc
    return Q


# Conjugation pairing of the nonzero Q positions: each tuple is
# (row, col, row', col', sign) asserting Q[row, col] == sign * conj(Q[row', col']).
# This is the internal redundancy of the element list; the build_Q tests
# verify it numerically.
Q_CONJUGATE_PAIRS: tuple[tuple[int, int, int, int, int], ...] = (
    (0, 0, 0, 2, -1), (0, 1, 0, 3, -1),
    (1, 0, 1, 2, -1), (1, 1, 1, 3, -1),
    (2, 3, 2, 5, -1), (3, 2, 3, 4, -1),
    (4, 4, 4, 6, -1), (4, 5, 4, 7, -1),
    (5, 4, 5, 6, -1), (5, 5, 5, 7, -1),
    (6, 0, 6, 6, 1), (6, 1, 6, 7, -1),
    (7, 0, 7, 6, -1), (7, 1, 7, 7, 1),
    # cross-row ties between the two half-circle matchings
    (0, 0, 4, 6, 1), (0, 1, 4, 7, -1),
    (1, 0, 5, 6, -1), (1, 1, 5, 7, 1),
)


def secular_explicit(Z: float, t: float) -> LogScaledValue:
    """det Q via partial-pivot LU with log-accumulated pivots, M=1 only.

    The determinant is asserted real: |Im| <= rtol |Re| plus a rounding floor
    of 64 eps exp(sum log ||row||), below which the phase of a vanishing
    determinant is rounding noise. The returned log-magnitude is envelope
    normalized by the smooth positive factor 8 (s^2 + t^2)^3, which gives the
    value the cosh^6(t) / (2 t^4) small-t crest growth of the closed form
    (verified numerically); roots and signs are unaffected.
    """
    point = SpectralPoint.from_zt(Z, t)
    Q = build_Q(Z, t)
    hadamard = float(np.sum(np.log(np.linalg.norm(Q, axis=1))))
    lu, piv = scipy.linalg.lu_factor(Q, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return LogScaledValue(0, float("-inf"))
    logmag = float(np.sum(np.log(np.abs(diag))))
    phase = complex(np.prod(diag / np.abs(diag)))
    if int(np.sum(piv != np.arange(8))) % 2:
        phase = -phase
    rtol = reality_rtol()
    floor = _NOISE_FLOOR_C * np.finfo(float).eps * math.exp(hadamard - logmag)
    if abs(phase.imag) > rtol * abs(phase.real) + floor:
        raise SecularRealityError(
            "explicit secular determinant", Z, t, abs(phase.imag) * math.exp(logmag)
        )
    sign = 1 if phase.real > 0 else -1
    norm = math.log(8.0) + 3.0 * math.log(point.s * point.s + t * t)
    return LogScaledValue(sign, logmag + norm)
