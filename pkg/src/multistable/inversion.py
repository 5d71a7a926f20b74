"""Density and tail probabilities of the multistable integral by Fourier inversion.

The characteristic function is real, even and positive, so the density is

    D(x) = (1/pi) integral_0^inf cos(x theta) cf(theta) dtheta

and the two-sided tail follows from a single sine-kernel integral
(Gil-Pelaez form for a symmetric law):

    P(|I(f)| > lam) = 1 - (2/pi) integral_0^inf sin(lam theta)/theta cf(theta) dtheta.

Both integrals run through the shared oscillatory engine.  Truncation for
the non-oscillatory paths uses the envelope cf(theta) <= exp(-m1 theta^a)
for theta >= 1, where m1 is the modular at scale 1; the tail mass beyond
the truncation point is bounded rigorously by an incomplete-gamma
integral of that envelope.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as _gamma_fn
from scipy.special import gammaincc

from .charfn import cf_profile
from .function_space import MultistableSpec, modular_integral
from .quadrature import AccuracyError, QuadratureConfig, fourier_integral

__all__ = [
    "density",
    "tail_probability",
    "interval_probability",
    "cdf",
    "density_with_error",
    "tail_probability_with_error",
]


def _require_nonzero(spec: MultistableSpec):
    if spec.is_zero:
        raise ValueError("f == 0: the law is a point mass at 0 and has no density")


def _envelope_tail_mass(spec: MultistableSpec, theta: float) -> float:
    """Rigorous bound on integral_theta^inf cf(t) dt.

    Uses cf(t) <= exp(-m1 t^a), valid for t >= 1; below 1 the crude bound
    cf <= 1 covers the gap, so the result is a certificate for any theta.
    """
    a = spec.a
    m1 = modular_integral(spec, 1.0)
    below = max(0.0, 1.0 - theta)
    theta = max(theta, 1.0)
    # integral_T^inf exp(-m1 t^a) dt = Gamma(1/a, m1 T^a) / (a m1^(1/a))
    z = m1 * theta ** a
    return below + float(_gamma_fn(1.0 / a) * gammaincc(1.0 / a, z) / (a * m1 ** (1.0 / a)))


def _truncation_point(spec: MultistableSpec, cfg: QuadratureConfig) -> float:
    """Truncation with envelope tail mass below abs_tol/2 (>= 1 always)."""
    if cfg.truncation_theta != "auto":
        return float(cfg.truncation_theta)
    m1 = modular_integral(spec, 1.0)
    a = spec.a
    # solve exp(-Theta^a m1) = abs_tol/2 as the starting point
    theta = max(1.0, (math.log(2.0 / cfg.abs_tol) / m1) ** (1.0 / a))
    while _envelope_tail_mass(spec, theta) > cfg.abs_tol / 2 and theta < 1e12:
        theta *= 1.5
    return theta


def density_with_error(spec: MultistableSpec, x: float,
                       cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Density at x and a bound on the absolute quadrature error."""
    cfg = cfg or QuadratureConfig()
    _require_nonzero(spec)
    theta_trunc = _truncation_point(spec, cfg)
    val, err = fourier_integral(
        lambda t: cf_profile(spec, t), abs(x), "cos", cfg,
        theta_trunc=theta_trunc,
        tail_bound=lambda T: _envelope_tail_mass(spec, T),
    )
    return val / math.pi, err / math.pi


def density(spec: MultistableSpec, x: float,
            cfg: QuadratureConfig | None = None) -> float:
    """Probability density of I(f) at x (continuous, even, bounded).

    Values in [-abs_tol, 0) produced by quadrature noise are clamped to 0;
    anything more negative raises :class:`AccuracyError`.
    """
    cfg = cfg or QuadratureConfig()
    val, err = density_with_error(spec, x, cfg)
    if err > cfg.abs_tol:
        raise AccuracyError("density quadrature did not meet abs_tol", err)
    if val < 0.0:
        if val < -cfg.abs_tol:
            raise AccuracyError("density came out significantly negative", abs(val))
        val = 0.0
    return val


def _sine_integral(spec: MultistableSpec, x: float,
                   cfg: QuadratureConfig) -> tuple[float, float]:
    """integral_0^inf sin(x theta) cf(theta)/theta dtheta for x >= 0."""
    theta_trunc = _truncation_point(spec, cfg)

    def env(t):
        t = np.asarray(t, dtype=float)
        safe = np.where(t > 0.0, t, 1.0)
        return cf_profile(spec, t) / safe

    return fourier_integral(
        env, x, "sin", cfg,
        theta_trunc=theta_trunc,
        tail_bound=lambda T: _envelope_tail_mass(spec, T) / max(T, 1.0),
    )


def tail_probability_with_error(spec: MultistableSpec, lam: float,
                                cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    cfg = cfg or QuadratureConfig()
    _require_nonzero(spec)
    if lam <= 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    val, err = _sine_integral(spec, lam, cfg)
    p = 1.0 - (2.0 / math.pi) * val
    return float(np.clip(p, 0.0, 1.0)), (2.0 / math.pi) * err


def tail_probability(spec: MultistableSpec, lam: float,
                     cfg: QuadratureConfig | None = None) -> float:
    """P(|I(f)| > lam), clipped to [0, 1]."""
    cfg = cfg or QuadratureConfig()
    p, err = tail_probability_with_error(spec, lam, cfg)
    if err > cfg.abs_tol:
        raise AccuracyError("tail-probability quadrature did not meet abs_tol", err)
    return p


def cdf(spec: MultistableSpec, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Distribution function F(x) = P(I(f) <= x) of the symmetric law."""
    cfg = cfg or QuadratureConfig()
    _require_nonzero(spec)
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x == 0.0:
        return 0.5
    val, err = _sine_integral(spec, abs(x), cfg)
    if err / math.pi > cfg.abs_tol:
        raise AccuracyError("cdf quadrature did not meet abs_tol", err / math.pi)
    half = val / math.pi
    return float(np.clip(0.5 + math.copysign(half, x), 0.0, 1.0))


def interval_probability(spec: MultistableSpec, lo: float, hi: float,
                         cfg: QuadratureConfig | None = None) -> float:
    """P(lo < I(f) <= hi) by difference of distribution-function values."""
    cfg = cfg or QuadratureConfig()
    if not lo <= hi:
        raise ValueError(f"need lo <= hi, got ({lo}, {hi})")
    p = cdf(spec, hi, cfg) - cdf(spec, lo, cfg)
    return float(np.clip(p, 0.0, 1.0))


def tail_via_density(spec: MultistableSpec, lam: float,
                     cfg: QuadratureConfig | None = None,
                     density_tol: float | None = None) -> float:
    """P(|I(f)| > lam) = 1 - 2 integral_0^lam D(x) dx, integrating the density.

    A deliberately independent route from the Gil-Pelaez tail: the x-axis
    integral is driven adaptively over pointwise density evaluations, so
    the two paths share no quadrature decisions.  Used for cross-checks.
    """
    from scipy.integrate import quad

    cfg = cfg or QuadratureConfig()
    dtol = density_tol if density_tol is not None else cfg.abs_tol

    dcfg = QuadratureConfig(abs_tol=dtol, truncation_theta=cfg.truncation_theta,
                            max_panels=cfg.max_panels)
    body, err = quad(lambda x: density(spec, x, dcfg), 0.0, lam,
                     epsabs=cfg.abs_tol / 4, epsrel=1e-12, limit=400)
    return float(np.clip(1.0 - 2.0 * body, 0.0, 1.0))
