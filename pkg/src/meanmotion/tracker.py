"""Continuous argument branches of univariate exponential sums.

Tracks arg+ / arg- along real segments with the convention that a zero of
multiplicity m contributes a jump of -m*pi (plus branch) or +m*pi (minus
branch), locates real-axis zeros by rectangle subdivision with boundary
winding counts, and certifies every contour as zero-free before trusting
its phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import UnivariateExpSum
from .errors import (
    DegenerateInputError,
    EndpointZeroError,
    SingularContourError,
    TrackingError,
)

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Interval widths at which rectangle subdivision hands over to polishing.
_COARSE_WIDTH = 0.02
_FINE_WIDTH = 1e-8
_H_FACTORS = (1.0, 0.87, 0.71, 0.55, 0.41, 0.26, 0.17, 0.11)
_SPLIT_OFFSETS = (0.5, 0.53, 0.47, 0.57, 0.43, 0.51, 0.61, 0.39, 0.55)
_MULTIPLICITY_CAP = 50


@dataclass(frozen=True)
class TrackerConfig:
    zero_threshold: float = 1e-9
    circle_radius_factor: float = 0.25
    max_refinement_depth: int = 24
    quadrature_points_per_turn: int = 64

    def __post_init__(self):
        if min(self.zero_threshold, self.circle_radius_factor) <= 0:
            raise ValueError("thresholds must be positive")
        if self.max_refinement_depth < 20:
            raise ValueError("max_refinement_depth must be >= 20")
        if self.quadrature_points_per_turn < 1:
            raise ValueError("quadrature_points_per_turn must be positive")


DEFAULT_CONFIG = TrackerConfig()


@dataclass(frozen=True)
class Zero:
    location: float
    multiplicity: int


@dataclass(frozen=True)
class ArgTrace:
    convention: str
    interval: tuple[float, float]
    samples: np.ndarray  # (n, 2) columns: s, unwrapped phase
    zeros: tuple[Zero, ...]
    smooth_increment: float
    jump_increment: float
    total_increment: float


@dataclass(frozen=True)
class _Span:
    t: np.ndarray
    v: np.ndarray
    increment: float
    left_correction: float
    right_correction: float


def _wrap(x: float) -> float:
    """Reduce to (-pi, pi]."""
    return x - TWO_PI * math.floor((x + math.pi) / TWO_PI)


def _refined_track(
    fn: Callable[[np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    n0: int,
    cfg: TrackerConfig,
    err: type = SingularContourError,
    floor_scale: float | None = None,
):
    """Total continuous phase change of fn along [t0, t1].

    Adaptively bisects until every step's phase change is below pi/2;
    raises `err` when the samples come within zero_threshold of zero
    relative to the (given or running) modulus scale.
    """
    t = np.linspace(t0, t1, n0 + 1)
    v = fn(t)
    for _ in range(cfg.max_refinement_depth):
        mods = np.abs(v)
        scale = floor_scale if floor_scale is not None else mods.max()
        if mods.min() <= cfg.zero_threshold * scale:
            raise err("contour passes too close to a zero")
        steps = np.angle(v[1:] / v[:-1])
        bad = np.abs(steps) >= HALF_PI
        if not bad.any():
            return float(steps.sum()), t, v
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        t = np.unique(np.concatenate([t, mids]))
        v = fn(t)
    raise TrackingError("phase-step refinement did not converge")


def winding_number(
    U: UnivariateExpSum,
    center: complex,
    radius: float,
    config: TrackerConfig | None = None,
) -> int:
    """Winding of U around a circle, certified zero-free; exact integer.

    Perturbs the radius when the circle cannot be certified, up to
    max_refinement_depth attempts.
    """
    cfg = config or DEFAULT_CONFIG
    if U.is_identically_zero:
        raise DegenerateInputError("identically-zero sum has no winding")
    if radius <= 0:
        raise ValueError("radius must be positive")
    last: Exception | None = None
    for attempt in range(cfg.max_refinement_depth):
        bump = 0.065 * ((attempt + 1) // 2) * (1 if attempt % 2 else -1)
        r = radius * (1.0 + bump)
        n0 = max(
            cfg.quadrature_points_per_turn,
            int(8 * U.frequency_scale * r) + 16,
        )
        fn = lambda th: U(center + r * np.exp(1j * th))
        try:
            total, _, _ = _refined_track(fn, 0.0, TWO_PI, n0, cfg)
        except (SingularContourError, TrackingError) as e:
            last = e
            continue
        w = total / TWO_PI
        k = round(w)
        if abs(w - k) > 0.1:
            last = TrackingError(f"winding residual {abs(w - k):.3f} turns")
            continue
        if abs(k) > _MULTIPLICITY_CAP:
            raise TrackingError(
                f"winding {k} exceeds plausible multiplicity; "
                "input is near-degenerate or tracking is broken"
            )
        return int(k)
    raise SingularContourError(
        "could not certify a zero-free circle"
    ) from last


def _rect_boundary_change(U, rect, cfg) -> float:
    s0, s1, t0, t1 = rect
    corners = np.array(
        [
            s0 + 1j * t0,
            s1 + 1j * t0,
            s1 + 1j * t1,
            s0 + 1j * t1,
            s0 + 1j * t0,
        ]
    )

    def path(t):
        k = np.minimum(np.floor(t).astype(int), 3)
        frac = t - k
        return corners[k] * (1 - frac) + corners[k + 1] * frac

    perimeter = 2 * ((s1 - s0) + (t1 - t0))
    n0 = max(128, int(8 * U.frequency_scale * perimeter / TWO_PI) + 16)
    total, _, _ = _refined_track(lambda t: U(path(t)), 0.0, 4.0, n0, cfg)
    return total


def count_zeros_rectangle(
    U: UnivariateExpSum,
    rect: tuple[float, float, float, float],
    config: TrackerConfig | None = None,
) -> int:
    """Zeros of the analytic continuation inside the rectangle, with
    multiplicity, by boundary phase tracking."""
    cfg = config or DEFAULT_CONFIG
    if U.is_identically_zero:
        raise DegenerateInputError("identically-zero sum")
    s0, s1, t0, t1 = rect
    if not (s0 < s1 and t0 < t1):
        raise ValueError("rectangle must have positive extent")
    total = _rect_boundary_change(U, rect, cfg)
    w = total / TWO_PI
    k = round(w)
    if abs(w - k) > 0.1:
        raise TrackingError(f"boundary winding residual {abs(w - k):.3f}")
    return int(k)


def _rect_count_any_height(U, lo, hi, h, cfg) -> int:
    for f in _H_FACTORS:
        try:
            return count_zeros_rectangle(U, (lo, hi, -h * f, h * f), cfg)
        except (SingularContourError, TrackingError):
            continue
    raise SingularContourError(
        f"no certifiable rectangle over ({lo}, {hi})"
    )


def _isolate(U, lo, hi, h, width_stop, cfg):
    """Recursive subdivision; returns disjoint clusters (lo, hi, count)."""
    h_eff = min(h, hi - lo)
    cnt = _rect_count_any_height(U, lo, hi, h_eff, cfg)
    if cnt == 0:
        return []
    if hi - lo <= width_stop:
        return [(lo, hi, cnt)]
    last = None
    for off in _SPLIT_OFFSETS:
        mid = lo + off * (hi - lo)
        try:
            return _isolate(U, lo, mid, h_eff, width_stop, cfg) + _isolate(
                U, mid, hi, h_eff, width_stop, cfg
            )
        except (SingularContourError, TrackingError) as e:
            last = e
    raise last if last is not None else SingularContourError("isolation failed")


def _newton(U, s0: complex, m: int) -> complex | None:
    s = complex(s0)
    for _ in range(60):
        du = U.derivative(s)
        if du == 0:
            return None
        step = m * U(s) / du
        s -= step
        if abs(step) <= 1e-14 * max(1.0, abs(s)):
            return s
    return None


def _resolve_cluster(U, lo, hi, cnt, cfg, depth=0):
    """Turn an isolated cluster into real zero candidates (loc, mult)."""
    scale = U.amplitude_scale
    width = hi - lo
    s = _newton(U, 0.5 * (lo + hi), cnt)
    if (
        s is not None
        and abs(U(s)) <= 1e-7 * scale
        and lo - width <= s.real <= hi + width
    ):
        if abs(s.imag) <= 1e-7:
            return [(s.real, cnt)]
        if cnt == 1:
            return []  # an off-axis zero caught by the coarse rectangle
    if depth >= 1 or width <= 10 * _FINE_WIDTH:
        return [(0.5 * (lo + hi), cnt)]
    subs = _isolate(U, lo, hi, width, _FINE_WIDTH, cfg)
    out = []
    for l2, h2, c2 in subs:
        out.extend(_resolve_cluster(U, l2, h2, c2, cfg, depth + 1))
    return out


def _confirm_multiplicity(U, loc, gap, expected, cfg) -> int:
    r = min(cfg.circle_radius_factor * gap, 0.02)
    for _ in range(3):
        if r < 1e-9:
            break
        try:
            m = winding_number(U, complex(loc), r, cfg)
        except (SingularContourError, TrackingError):
            r *= 0.1
            continue
        if m == expected:
            return m
        r *= 0.1
    return expected


def locate_zeros(
    U: UnivariateExpSum,
    interval: tuple[float, float],
    config: TrackerConfig | None = None,
) -> list[Zero]:
    """All real zeros of U in the open interval, with multiplicities.

    Zeros are isolated by recursive subdivision with rectangle winding
    counts, polished by Newton iteration, and their multiplicities
    confirmed on small certified circles. A zero at either endpoint is an
    EndpointZeroError; the caller is expected to perturb the window.
    """
    cfg = config or DEFAULT_CONFIG
    if U.is_identically_zero:
        raise DegenerateInputError("identically-zero sum")
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError("empty interval")
    grid = np.linspace(a, b, 513)
    scale = max(float(np.abs(U(grid)).max()), 1e-300)
    if min(abs(U(a)), abs(U(b))) <= cfg.zero_threshold * scale:
        raise EndpointZeroError("window endpoint sits on a zero")
    clusters = _isolate(U, a, b, min(0.5, 0.5 * (b - a)), _COARSE_WIDTH, cfg)
    candidates: list[tuple[float, int]] = []
    for lo, hi, cnt in clusters:
        candidates.extend(_resolve_cluster(U, lo, hi, cnt, cfg))
    candidates.sort()
    end_tol = max(1e-9, 1e-7 * min(1.0, b - a))
    zeros: list[Zero] = []
    for i, (loc, cnt) in enumerate(candidates):
        if loc - a < end_tol or b - loc < end_tol:
            raise EndpointZeroError(f"zero at {loc} abuts the window")
        gap = min(
            loc - a,
            b - loc,
            loc - candidates[i - 1][0] if i > 0 else math.inf,
            candidates[i + 1][0] - loc if i + 1 < len(candidates) else math.inf,
        )
        zeros.append(Zero(loc, _confirm_multiplicity(U, loc, gap, cnt, cfg)))
    return zeros


def _endpoint_offset(U, z, gap, scale):
    """Distance at which |U| is safely above the noise floor near a zero."""
    d = min(1e-6, 0.1 * gap)
    while d < 0.2 * gap:
        if min(abs(U(z - d)), abs(U(z + d))) > 1e-7 * scale:
            break
        d *= 3.0
    return d


def _smooth_trace(U, interval, cfg):
    """Smooth branch increment and per-span samples between zeros.

    The one-sided limits at each zero come from the leading Taylor
    coefficient, so skipping a tiny neighbourhood of the zero costs no
    accuracy: the tracked phase is matched to the exact limit by a wrap
    correction strictly below pi.
    """
    a, b = float(interval[0]), float(interval[1])
    zeros = locate_zeros(U, (a, b), cfg)
    pts = [a] + [z.location for z in zeros] + [b]
    scale = U.amplitude_scale
    spans = []
    smooth = 0.0
    for i in range(len(pts) - 1):
        l, r = pts[i], pts[i + 1]
        zl = zeros[i - 1] if i > 0 else None
        zr = zeros[i] if i < len(zeros) else None
        dl = _endpoint_offset(U, l, r - l, scale) if zl else 0.0
        dr = _endpoint_offset(U, r, r - l, scale) if zr else 0.0
        n0 = max(64, math.ceil(8 * U.frequency_scale * (r - dr - l - dl) / TWO_PI))
        inc, t, v = _refined_track(
            lambda s: U(s), l + dl, r - dr, n0, cfg,
            err=TrackingError, floor_scale=scale,
        )
        cl = 0.0
        if zl is not None:
            limit = cmath.phase(U.leading_coefficient(l, zl.multiplicity))
            cl = _wrap(float(np.angle(v[0])) - limit)
        cr = 0.0
        if zr is not None:
            limit = (
                cmath.phase(U.leading_coefficient(r, zr.multiplicity))
                + zr.multiplicity * math.pi
            )
            cr = _wrap(limit - float(np.angle(v[-1])))
        spans.append(_Span(t, v, inc, cl, cr))
        smooth += inc + cl + cr
    return smooth, zeros, spans


def _assemble_trace(convention, interval, smooth, zeros, spans) -> ArgTrace:
    jump_sign = -math.pi if convention == "plus" else math.pi
    total_mult = sum(z.multiplicity for z in zeros)
    jump = jump_sign * total_mult
    ss, phs = [], []
    base = 0.0
    for i, sp in enumerate(spans):
        steps = np.angle(sp.v[1:] / sp.v[:-1])
        if i == 0:
            base = float(np.angle(sp.v[0]))
        else:
            base += spans[i - 1].right_correction
            base += jump_sign * zeros[i - 1].multiplicity
            base += sp.left_correction
        ph = base + np.concatenate([[0.0], np.cumsum(steps)])
        ss.append(sp.t)
        phs.append(ph)
        base = float(ph[-1])
    samples = np.column_stack([np.concatenate(ss), np.concatenate(phs)])
    return ArgTrace(
        convention=convention,
        interval=(float(interval[0]), float(interval[1])),
        samples=samples,
        zeros=tuple(zeros),
        smooth_increment=smooth,
        jump_increment=jump,
        total_increment=smooth + jump,
    )


def arg_increment(
    U: UnivariateExpSum,
    interval: tuple[float, float],
    convention: str,
    config: TrackerConfig | None = None,
) -> ArgTrace:
    """Increment of the arg+ or arg- branch of U over the interval."""
    if convention not in ("plus", "minus"):
        raise ValueError("convention must be 'plus' or 'minus'")
    cfg = config or DEFAULT_CONFIG
    smooth, zeros, spans = _smooth_trace(U, interval, cfg)
    return _assemble_trace(convention, interval, smooth, zeros, spans)


def arg_increment_pair(
    U: UnivariateExpSum,
    interval: tuple[float, float],
    config: TrackerConfig | None = None,
) -> tuple[ArgTrace, ArgTrace]:
    """Both branches from a single zero search and smooth trace."""
    cfg = config or DEFAULT_CONFIG
    smooth, zeros, spans = _smooth_trace(U, interval, cfg)
    return (
        _assemble_trace("plus", interval, smooth, zeros, spans),
        _assemble_trace("minus", interval, smooth, zeros, spans),
    )
