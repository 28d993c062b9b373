"""Both secular backends against frozen reference roots and exact identities.

Reference t values were computed independently at 40-digit precision with a
multiprecision propagator and det evaluation, then frozen here; tests assert
sign changes across tight brackets around them rather than re-deriving.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptring import (
    CirclePotential,
    LogScaledValue,
    SecularRealityError,
    SpectralPoint,
    TransferMatrix2,
    build_Q,
    build_square_well,
    monodromy,
    rotate_segments,
    secular_explicit,
    secular_monodromy,
    segment_propagator,
)
from ptring.secular import Q_CONJUGATE_PAIRS

# 22-digit roots of the eight-by-eight determinant at Z = 1, ascending E
EXPLICIT_ROOTS_Z1 = [
    0.656419569606386165771,
    0.3934710176605069340951,
    0.2659198624354214277554,
    0.1595707645052334930822,
    0.1587476660683445053169,
    0.1114147664453410750752,
    0.1014644909004648103075,
    0.07959026804746830444437,
    0.07956469150039351410166,
    0.06511719261341520152622,
    0.06229852252045557359147,
    0.0530533302387008456488,
    0.05304996558285919536241,
    0.04609709480078567164293,
    0.04487297248872351844684,
    0.03978913487008050862374,
    0.03978833670789681931525,
    0.03570014539314851402317,
]
EXPLICIT_ROOTS_Z01 = [0.2219819562431546437372, 0.03467067057228565555074]
# roots of the strictly periodic (transfer-matrix) secular function
MONODROMY_GROUND_Z1 = 0.6780547977525431307031
MONODROMY_GROUND_Z01 = 0.2226769781898852005535


def _sign_flips(f, t0, rel=1e-6):
    lo, hi = f(t0 * (1 - rel)), f(t0 * (1 + rel))
    return lo.sign * hi.sign < 0


# --- SpectralPoint ---------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(
    z=st.floats(min_value=1e-6, max_value=100.0),
    t=st.floats(min_value=1e-6, max_value=100.0),
)
def test_spectral_point_identities(z, t):
    p = SpectralPoint.from_zt(z, t)
    assert abs(2.0 * p.s * p.t - z) <= 1e-14 * z
    k2 = p.kappa * p.kappa
    assert abs(k2 - complex(p.E, -z)) <= 1e-13 * abs(k2)


@pytest.mark.parametrize("z,t", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_spectral_point_domain(z, t):
    with pytest.raises(ValueError):
        SpectralPoint.from_zt(z, t)


# --- LogScaledValue --------------------------------------------------------


def test_log_scaled_value_roundtrip():
    v = LogScaledValue.from_float(-123.456)
    assert v.sign == -1
    assert v.value() == pytest.approx(-123.456, rel=1e-15)
    z = LogScaledValue.from_float(0.0)
    assert z.sign == 0 and z.value() == 0.0


def test_log_scaled_value_validation():
    with pytest.raises(ValueError):
        LogScaledValue(2, 0.0)
    with pytest.raises(ValueError):
        LogScaledValue(0, 1.0)


# --- propagator and monodromy ---------------------------------------------


def test_propagator_short_segment_is_near_identity():
    P = segment_propagator(1e-12, 1.0 + 0j)
    assert abs(P.a - 1) < 1e-11 and abs(P.d - 1) < 1e-11
    assert abs(P.b - 1e-12) < 1e-23 and abs(P.c) < 1e-11


def test_propagator_half_wave():
    P = segment_propagator(1.0, complex(math.pi))
    # cos(pi) = -1, sin(pi) ~ 0: half a wavelength flips the state
    assert abs(P.a + 1) < 1e-12 and abs(P.d + 1) < 1e-12
    assert abs(P.b) < 1e-12 and abs(P.c) < 1e-12


def test_propagator_unit_determinant():
    P = segment_propagator(0.7, 1.3 - 0.4j)
    assert abs(P.det_true() - 1) < 1e-12


def test_propagator_tiny_kappa_limit():
    P = segment_propagator(0.3, 1e-200 + 0j)
    assert (P.a, P.b, P.c, P.d) == (1.0, 0.3, 0.0, 1.0)


def test_propagator_rejects_bad_width():
    with pytest.raises(ValueError):
        segment_propagator(0.0, 1.0 + 0j)


def test_unit_det_secular_identity():
    """det(T - 1) = 2 - tr(T) for any unit-determinant 2x2 matrix."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m /= np.sqrt(np.linalg.det(m))
        lhs = np.linalg.det(m - np.eye(2))
        rhs = 2.0 - np.trace(m)
        assert abs(lhs - rhs) < 1e-10


def test_monodromy_unit_determinant():
    pot = build_square_well(3, 1.0)
    T = monodromy(pot, SpectralPoint.from_zt(1.0, 0.2))
    assert abs(T.det_true() - 1) < 1e-12
    # at small logscale the entry-based extraction agrees with the
    # factor-accumulated value
    assert abs(T.det_stored() * math.exp(2.0 * T.logscale) - T.det_true()) < 1e-10


def test_monodromy_det_stable_at_large_logscale():
    # deep in the hyperbolic regime the entries span e^(2 logscale) ~ 1e7;
    # the factor-accumulated determinant must not inherit that cancellation
    pot = build_square_well(1, 10.0)
    T = monodromy(pot, SpectralPoint.from_zt(10.0, 2.0))
    assert T.logscale > 5.0
    assert abs(T.det_true() - 1) < 1e-12


def test_monodromy_free_limit_trace():
    # at vanishing coupling the circle is free: tr = 2 cos(4 sqrt(E))
    pot = build_square_well(1, 1e-12)
    p = SpectralPoint.from_zt(1e-12, 5e-13)
    T = monodromy(pot, p)
    tr = T.trace() * math.exp(T.logscale)
    assert abs(tr - 2.0 * math.cos(4.0)) < 1e-9


def test_monodromy_trace_cyclicity():
    pot = build_square_well(2, 1.0)
    p = SpectralPoint.from_zt(1.0, 0.37)
    t0 = monodromy(pot, p)
    tr0 = t0.trace() * math.exp(t0.logscale)
    for k in (1, 3, 6):
        tk = monodromy(rotate_segments(pot, k), p)
        trk = tk.trace() * math.exp(tk.logscale)
        assert abs(trk - tr0) <= 1e-10 * abs(tr0)


def test_monodromy_rejects_mismatched_coupling():
    pot = build_square_well(1, 2.0)
    with pytest.raises(ValueError):
        monodromy(pot, SpectralPoint.from_zt(1.0, 0.5))


# --- reality assertion -----------------------------------------------------


@pytest.mark.parametrize("M", [1, 2, 4, 6])
@pytest.mark.parametrize("Z", [0.1, 1.0, 10.0])
def test_reality_never_fires_on_family(M, Z):
    pot = build_square_well(M, Z)
    for t in np.linspace(0.02, 2.0, 100):
        secular_monodromy(pot, Z, float(t))


def test_reality_fires_on_pt_broken_layouts():
    asym = CirclePotential(
        circumference=4.0,
        start=-2.0,
        segments=((0.5, 1j), (1.5, -1j), (1.0, 1j), (1.0, -1j)),
    )
    with pytest.raises(SecularRealityError) as ei:
        secular_monodromy(asym, 1.0, 0.4)
    assert ei.value.t == 0.4 and ei.value.Z == 1.0


def test_reality_accepts_pt_symmetric_non_alternating():
    pot = CirclePotential(
        circumference=4.0,
        start=-2.0,
        segments=((1.0, 1j), (1.0, 1j), (1.0, -1j), (1.0, -1j)),
    )
    v = secular_monodromy(pot, 1.0, 0.4)
    assert v.sign in (-1, 1)


def test_reality_tolerance_env_override(monkeypatch):
    asym = CirclePotential(
        circumference=4.0,
        start=-2.0,
        segments=((0.5, 1j), (1.5, -1j), (1.0, 1j), (1.0, -1j)),
    )
    # measured |Im|/(1+|Re|) is about 0.21 at this point; a huge tolerance
    # lets the value through
    monkeypatch.setenv("PT_CIRCLE_TOL", "10.0")
    secular_monodromy(asym, 1.0, 0.4)
    monkeypatch.setenv("PT_CIRCLE_TOL", "not-a-number")
    with pytest.raises(ValueError):
        secular_monodromy(asym, 1.0, 0.4)


# --- the eight-by-eight system ---------------------------------------------


def test_q_matrix_shape_and_sparsity():
    Q = build_Q(1.0, 0.5)
    assert Q.shape == (8, 8)
    # the closure rows touch only the outermost coefficient pairs
    assert np.count_nonzero(Q[7]) == 4
    assert np.count_nonzero(Q[2]) == 2
    assert np.count_nonzero(Q[3]) == 2


def test_q_matrix_corner_entry():
    # kappa = s - i t with s = Z/(2t) = 1, so Q[0,0] = -sin(1 - 0.5i)
    Q = build_Q(1.0, 0.5)
    assert Q[0, 0] == pytest.approx(-cmath.sin(1 - 0.5j), rel=1e-15)


def test_q_conjugate_pairing():
    rng = np.random.default_rng(3)
    for _ in range(10):
        z = float(rng.uniform(0.05, 5.0))
        t = float(rng.uniform(0.01, 2.0))
        Q = build_Q(z, t)
        for r, c, r2, c2, sign in Q_CONJUGATE_PAIRS:
            assert Q[r, c] == pytest.approx(sign * np.conj(Q[r2, c2]), rel=1e-14)


def test_explicit_sign_flip_at_ground():
    assert _sign_flips(lambda t: secular_explicit(1.0, t), EXPLICIT_ROOTS_Z1[0])


@pytest.mark.parametrize("t0", EXPLICIT_ROOTS_Z1)
def test_explicit_frozen_roots_z1(t0):
    assert _sign_flips(lambda t: secular_explicit(1.0, t), t0, rel=1e-8)


@pytest.mark.parametrize("t0", EXPLICIT_ROOTS_Z01)
def test_explicit_frozen_roots_z01(t0):
    assert _sign_flips(lambda t: secular_explicit(0.1, t), t0, rel=1e-8)


def test_monodromy_frozen_ground_roots():
    pot1 = build_square_well(1, 1.0)
    assert _sign_flips(lambda t: secular_monodromy(pot1, 1.0, t), MONODROMY_GROUND_Z1)
    pot01 = build_square_well(1, 0.1)
    assert _sign_flips(
        lambda t: secular_monodromy(pot01, 0.1, t), MONODROMY_GROUND_Z01
    )


def test_explicit_negative_beyond_ground():
    for t in np.linspace(0.66, 2.0, 60):
        assert secular_explicit(1.0, float(t)).sign == -1


def test_explicit_crest_envelope():
    """Near the anti-node points t = 1/(2 pi k) the normalized magnitude
    approaches cosh(t)^6 / (2 t^4)."""
    for k in (5, 10, 20, 40):
        t = 1.0 / (2.0 * math.pi * k)
        v = secular_explicit(1.0, t)
        crest = math.log(math.cosh(t) ** 6 / (2.0 * t**4))
        assert v.logmag == pytest.approx(crest, abs=2e-3)


def test_explicit_dynamic_range_at_root():
    """log|F| at a root sits many orders below the surrounding window."""
    t1 = EXPLICIT_ROOTS_Z1[1]
    at_root = secular_explicit(1.0, t1).logmag
    window_max = max(
        secular_explicit(1.0, float(t)).logmag for t in np.linspace(0.35, 0.45, 41)
    )
    assert window_max - at_root > 6.0 * math.log(10.0)


def test_explicit_requires_positive_inputs():
    with pytest.raises(ValueError):
        secular_explicit(1.0, 0.0)
    with pytest.raises(ValueError):
        secular_explicit(-1.0, 0.5)
