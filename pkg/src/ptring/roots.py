"""Root location for log-scaled secular functions of t.

The spectrum is found on a master grid that is uniform in s = Z/(2t) (so the
energy resolution is roughly uniform), with two detection channels:

- sign changes of the secular value, closed by bisection;
- "bumps": deep dips of log|F| with no sign change, which arise either from
  a doublet of real roots closer than the grid spacing or from a complex
  conjugate pair of roots sitting just off the real t axis.

Bump windows are re-scanned at 16x resolution per refinement depth and must
re-qualify each time (the dip must stay at least bump_drop below its
flanking crests). Real doublets sharpen under magnification until they
split into two sign changes; complex-pair dips flatten and are discarded.
A dip still qualifying at the depth limit is reported once with
unresolved_doublet=True and counts as two levels.

A level count below the requested one after all this is a physical signal,
not a numerical fault: the missing levels have no real root in the window,
as happens when PT symmetry breaks spontaneously and levels merge into
complex conjugate pairs. find_roots emits a LevelShortfallWarning for it.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# Master-scan resolution in s; chosen so that every doublet of the target
# family either straddles a grid point or dips well below bump_drop.
_MASTER_DS = 5e-3
_WINDOW_SAMPLES = 64
_MERGE_TOL = 1e-12


class SecularEvaluationError(RuntimeError):
    """A secular callable raised while scanning; carries the offending t."""

    def __init__(self, t: float, cause: BaseException):
        super().__init__(f"secular evaluation failed at t={t!r}: {cause}")
        self.t = t


class LevelShortfallWarning(UserWarning):
    """Fewer real levels found than requested (possible PT breaking)."""


@dataclass(frozen=True)
class ScanConfig:
    """Scan window and refinement knobs for find_roots and scan_secular."""

    t_min: float
    t_max: float
    initial_samples: int = 256
    max_refine_depth: int = 4
    t_tol: float = 1e-13
    bump_drop: float = 3.0

    def __post_init__(self) -> None:
        if not self.t_min > 0:
            raise ValueError(f"t_min must be positive, got {self.t_min!r}")
        if not self.t_min < self.t_max:
            raise ValueError(
                f"need t_min < t_max, got [{self.t_min!r}, {self.t_max!r}]"
            )
        if self.initial_samples < 16:
            raise ValueError(
                f"initial_samples must be at least 16, got {self.initial_samples!r}"
            )
        if self.max_refine_depth < 0:
            raise ValueError("max_refine_depth must be non-negative")
        if not self.t_tol > 0:
            raise ValueError("t_tol must be positive")
        if not self.bump_drop > 0:
            raise ValueError("bump_drop must be positive")


@dataclass(frozen=True)
class ScanSample:
    t: float
    sign: int
    logmag: float


@dataclass(frozen=True)
class RootRecord:
    """One located root (or unresolved root pair) of the secular function.

    bracket_width is the final uncertainty interval; residual_logmag is
    log|F| at the reported t. detection is "sign_change" or "bump"; a bump
    record has unresolved_doublet=True and stands for two levels.
    """

    t: float
    residual_logmag: float
    bracket_width: float
    detection: str
    unresolved_doublet: bool = False


@dataclass(frozen=True)
class BumpWindow:
    """A qualifying no-crossing dip: re-scan [t_lo, t_hi] to resolve it."""

    t_lo: float
    t_hi: float
    min_t: float
    min_logmag: float
    drop: float


def _eval_sample(f: Callable[[float], object], t: float) -> ScanSample:
    try:
        v = f(t)
    except SecularEvaluationError:
        raise
    except Exception as e:
        raise SecularEvaluationError(t, e) from e
    return ScanSample(t=float(t), sign=v.sign, logmag=v.logmag)


def scan_secular(
    f: Callable[[float], object], config: ScanConfig
) -> list[ScanSample]:
    """Tabulate sign and log-magnitude on a uniform t grid over the window."""
    ts = np.linspace(config.t_min, config.t_max, config.initial_samples)
    return [_eval_sample(f, t) for t in ts]


def bisect(
    f: Callable[[float], object],
    bracket: tuple[float, float],
    t_tol: float = 1e-13,
) -> RootRecord:
    """Close a sign-change bracket down to relative width t_tol.

    Raises ValueError unless the secular signs at the bracket ends differ
    (an endpoint with sign 0 is accepted as an exact root).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise ValueError(f"need 0 < lo < hi, got ({lo!r}, {hi!r})")
    va = _eval_sample(f, lo)
    vb = _eval_sample(f, hi)
    for end in (va, vb):
        if end.sign == 0:
            return RootRecord(
                t=end.t,
                residual_logmag=end.logmag,
                bracket_width=0.0,
                detection="sign_change",
            )
    if va.sign == vb.sign:
        raise ValueError(
            f"no sign change across bracket ({lo!r}, {hi!r}); "
            f"both ends have sign {va.sign}"
        )
    while hi - lo > t_tol * hi:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        vm = _eval_sample(f, mid)
        if vm.sign == 0:
            lo = hi = mid
            break
        if vm.sign == va.sign:
            lo, va = mid, vm
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    res = _eval_sample(f, t)
    return RootRecord(
        t=t,
        residual_logmag=res.logmag,
        bracket_width=hi - lo,
        detection="sign_change",
    )


def detect_bumps(
    samples: Sequence[ScanSample], config: ScanConfig
) -> list[BumpWindow]:
    """Find dips of log|F| that qualify for bump refinement.

    A sample is a dip when it is a local minimum of logmag lying at least
    bump_drop below both nearest flanking crests (grid ends count as
    crests), with a single sign throughout. The returned window spans two
    samples to each side of the minimum.
    """
    n = len(samples)
    if n < 3:
        return []
    lm = [s.logmag for s in samples]
    out: list[BumpWindow] = []
    for i in range(1, n - 1):
        if not (lm[i] < lm[i - 1] and lm[i] <= lm[i + 1]):
            continue
        j = i
        while j > 0 and lm[j - 1] >= lm[j]:
            j -= 1
        k = i
        while k < n - 1 and lm[k + 1] >= lm[k]:
            k += 1
        drop = min(lm[j], lm[k]) - lm[i]
        if drop < config.bump_drop:
            continue
        a = min(j, max(0, i - 2))
        b = max(k, min(n - 1, i + 2))
        signs = {samples[q].sign for q in range(a, b + 1)}
        if len(signs) != 1 or 0 in signs:
            continue
        lo_i, hi_i = max(0, i - 2), min(n - 1, i + 2)
        t_pair = (samples[lo_i].t, samples[hi_i].t)
        out.append(
            BumpWindow(
                t_lo=min(t_pair),
                t_hi=max(t_pair),
                min_t=samples[i].t,
                min_logmag=lm[i],
                drop=drop,
            )
        )
    return out


def _brackets_and_exacts(
    samples: Sequence[ScanSample],
) -> tuple[list[tuple[float, float]], list[ScanSample]]:
    brackets = []
    exacts = []
    for i in range(len(samples) - 1):
        a, b = samples[i], samples[i + 1]
        if a.sign == 0:
            exacts.append(a)
        elif a.sign * b.sign < 0:
            t_pair = (a.t, b.t)
            brackets.append((min(t_pair), max(t_pair)))
    if samples and samples[-1].sign == 0:
        exacts.append(samples[-1])
    return brackets, exacts


def _refine_bump(
    f: Callable[[float], object],
    t_lo: float,
    t_hi: float,
    config: ScanConfig,
    depth: int,
) -> list[RootRecord]:
    """Re-scan a bump window; resolve, recurse, report, or discard.

    Sign changes found at the finer resolution are bisected and returned.
    Otherwise the dip must re-qualify under detect_bumps: a dip that
    flattened out is a complex pair and is dropped; one that persists is
    recursed into, or reported as an unresolved doublet at the depth limit.
    """
    ts = np.linspace(t_lo, t_hi, _WINDOW_SAMPLES)
    samples = [_eval_sample(f, t) for t in ts]
    brackets, exacts = _brackets_and_exacts(samples)
    if brackets or exacts:
        recs = [bisect(f, br, config.t_tol) for br in brackets]
        recs.extend(
            RootRecord(
                t=e.t,
                residual_logmag=e.logmag,
                bracket_width=0.0,
                detection="sign_change",
            )
            for e in exacts
        )
        return recs
    out: list[RootRecord] = []
    for w in detect_bumps(samples, config):
        if depth >= config.max_refine_depth:
            out.append(
                RootRecord(
                    t=w.min_t,
                    residual_logmag=w.min_logmag,
                    bracket_width=w.t_hi - w.t_lo,
                    detection="bump",
                    unresolved_doublet=True,
                )
            )
        else:
            out.extend(_refine_bump(f, w.t_lo, w.t_hi, config, depth + 1))
    return out


def _merge_close(records: list[RootRecord]) -> list[RootRecord]:
    """Collapse root pairs closer than the float resolution of bisection.

    Two distinct records within _MERGE_TOL of each other are one doublet
    whose splitting is below achievable resolution; they merge into a
    single unresolved_doublet record.
    """
    records = sorted(records, key=lambda r: r.t)
    out: list[RootRecord] = []
    for r in records:
        if out and abs(r.t - out[-1].t) < _MERGE_TOL:
            prev = out.pop()
            if prev.unresolved_doublet or r.unresolved_doublet:
                # already counted as a pair; keep the sharper record
                keep = prev if prev.residual_logmag <= r.residual_logmag else r
                out.append(keep)
                continue
            out.append(
                RootRecord(
                    t=0.5 * (prev.t + r.t),
                    residual_logmag=min(prev.residual_logmag, r.residual_logmag),
                    bracket_width=abs(r.t - prev.t)
                    + prev.bracket_width
                    + r.bracket_width,
                    detection="sign_change",
                    unresolved_doublet=True,
                )
            )
        else:
            out.append(r)
    return out


def level_count(records: Sequence[RootRecord]) -> int:
    """Number of energy levels the records stand for (doublets count twice)."""
    return sum(2 if r.unresolved_doublet else 1 for r in records)


def default_scan_config(
    Z: float,
    n_levels: int,
    t_min: float | None = None,
    t_max: float | None = None,
) -> ScanConfig:
    """Scan window sized to capture the lowest n_levels levels.

    The energy ceiling is 1.5x the free-circle estimate for level
    n_levels + 2, converted to a t floor through s = Z/(2t); the t ceiling
    sits far above the ground state of any coupling up to Z.
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be at least 1, got {n_levels!r}")
    if not Z > 0:
        raise ValueError(f"Z must be positive, got {Z!r}")
    e_max = 1.5 * (math.pi * (n_levels + 2) / 4.0) ** 2
    if t_max is None:
        t_max = 5.0 * max(1.0, math.sqrt(Z))
    if t_min is None:
        t_min = Z / (2.0 * math.sqrt(e_max))
    return ScanConfig(t_min=t_min, t_max=t_max)


def find_roots(
    f: Callable[[float], object],
    Z: float,
    n_levels: int,
    config: ScanConfig | None = None,
) -> list[RootRecord]:
    """Locate the real secular roots covering the lowest n_levels levels.

    Returns every root found in the window, in descending t (ascending
    energy) order; callers slice the leading n_levels levels after doublet
    expansion. Warns with LevelShortfallWarning when the window yields
    fewer levels than requested, which for this operator family indicates
    levels lost to complex conjugate pairs rather than a scan failure.
    """
    cfg = config if config is not None else default_scan_config(Z, n_levels)
    s_lo = Z / (2.0 * cfg.t_max)
    s_hi = Z / (2.0 * cfg.t_min)
    n = max(cfg.initial_samples, math.ceil((s_hi - s_lo) / _MASTER_DS) + 1)
    s_grid = np.linspace(s_lo, s_hi, n)
    samples = [_eval_sample(f, Z / (2.0 * s)) for s in s_grid]

    records: list[RootRecord] = []
    brackets, exacts = _brackets_and_exacts(samples)
    for br in brackets:
        records.append(bisect(f, br, cfg.t_tol))
    records.extend(
        RootRecord(
            t=e.t,
            residual_logmag=e.logmag,
            bracket_width=0.0,
            detection="sign_change",
        )
        for e in exacts
    )
    for w in detect_bumps(samples, cfg):
        records.extend(_refine_bump(f, w.t_lo, w.t_hi, cfg, depth=1))

    records = _merge_close(records)
    records.sort(key=lambda r: -r.t)

    found = level_count(records)
    if found < n_levels:
        e_top = (Z / (2.0 * cfg.t_min)) ** 2 - cfg.t_min**2
        warnings.warn(
            LevelShortfallWarning(
                f"found {found} of {n_levels} requested levels scanning "
                f"E up to {e_top:.6g}; the missing levels have no real "
                f"root in the window, consistent with complex conjugate "
                f"pairs from spontaneously broken PT symmetry"
            ),
            stacklevel=2,
        )
    return records
