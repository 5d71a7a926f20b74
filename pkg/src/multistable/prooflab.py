"""Numerical replication of the proof machinery behind the tail theorem.

For a mollifier phi_q and a spec f the quantities are

    eta(xi) = integral phi_q(theta) (1 - exp(-m(theta/xi))) dtheta
    tau(xi) = integral |f(x)/xi|^alpha(x) h_q(alpha(x)) dx      (Fubini form)
    rho(xi) = integral |phi_q(theta)| |m(theta/xi) - 1 + exp(-m(theta/xi))| dtheta

with m(s) the modular of f at scale factor s, and

    h_q(gamma) = integral |theta|^gamma phi_q(theta) dtheta,
    j0(lam, q) the unique integer with q^j0 <= lam < q^(j0+1).

Each lemma's sandwich is checked on grids with the quadrature error
budgets subtracted from the margins; the proof-internal constants are
never computed explicitly, only fitted envelopes are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .asymptote import TailAsymptote, tail_asymptote
from .function_space import MultistableSpec, quasinorm
from .inversion import tail_probability_with_error
from .mollifier import MollifierSpec
from .quadrature import AccuracyError, QuadratureConfig

__all__ = [
    "h_q",
    "j0",
    "eta",
    "tau",
    "rho",
    "verify_elementary_inequality",
    "verify_lemma1",
    "verify_lemma3",
    "verify_lemma5",
    "verify_lemma6",
    "verify_parseval",
    "LemmaReport",
]


@dataclass
class LemmaReport:
    """Outcome of one verification sweep: grid rows plus a verdict."""

    lemma: str
    passed: bool
    grid: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "passed": bool(self.passed),
            "grid": self.grid,
            "summary": self.summary,
        }


# ---------------------------------------------------------------------------
# core operations

def h_q(moll: MollifierSpec, gamma: float) -> float:
    """h_q(gamma); the reported error bound is available via ``moll.h``."""
    return moll.h(gamma)[0]


def j0(lam: float, q: float) -> int:
    """The unique integer j >= 1 with q^j <= lam < q^(j+1).

    Computed from the floating-point floor of log(lam)/log(q) and then
    corrected by integer search, so boundary values such as lam = q^3
    land on the lower edge exactly.
    """
    if q <= 1.0:
        raise ValueError(f"q must exceed 1, got {q}")
    if lam < q:
        raise ValueError(f"j0 requires lambda >= q, got lambda={lam}, q={q}")
    j = int(math.floor(math.log(lam) / math.log(q)))
    while q ** j > lam:
        j -= 1
    while q ** (j + 1) <= lam:
        j += 1
    return j


def _check_xi(xi: float):
    if xi < 1.0:
        raise ValueError(f"xi must be >= 1, got {xi}")


def eta_with_error(spec: MultistableSpec, moll: MollifierSpec, xi: float,
                   cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """eta(xi) with an error bound (table quadrature + decay-envelope tail)."""
    _check_xi(xi)
    m_vals = spec.scaled_modular(moll.nodes / xi)
    body = 2.0 * moll.integrate(-np.expm1(-m_vals))
    # tail: 1 - e^-m <= m = sum_i W_i (theta/xi)^alpha_i; on the stub theta < 1
    # the same bound gives m <= (sum_i W_i) theta^a
    groups = _group_weights(spec)
    tail = sum(wgt * xi ** -alph * moll.tail_power_bound(alph) for wgt, alph in groups)
    total_w = sum(wgt for wgt, _ in groups)
    err = 2.0 * tail + 2.0 * total_w * moll.stub_bound(spec.a) \
        + 4e-16 * (1.0 + abs(body))
    if cfg is not None and err > cfg.abs_tol:
        raise AccuracyError("eta error bound exceeds abs_tol", err)
    return max(body, 0.0), err


def eta(spec: MultistableSpec, moll: MollifierSpec, xi: float,
        cfg: QuadratureConfig | None = None) -> float:
    return eta_with_error(spec, moll, xi, cfg)[0]


def _group_weights(spec: MultistableSpec):
    """Pairs (sum |c|^alpha * len, alpha) grouped by distinct exponent."""
    groups: dict[float, float] = {}
    for c, a, ln in zip(spec._abs_coef, spec._alph, spec._len):
        groups[float(a)] = groups.get(float(a), 0.0) + float(c ** a * ln)
    return [(wgt, alph) for alph, wgt in sorted(groups.items())]


def tau_with_error(spec: MultistableSpec, moll: MollifierSpec, xi: float,
                   cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """tau(xi) via the Fubini form: an exact cell sum against h_q values."""
    _check_xi(xi)
    val = 0.0
    err = 0.0
    for wgt, alph in _group_weights(spec):
        h, he = moll.h(alph)
        val += wgt * xi ** -alph * h
        err += wgt * xi ** -alph * he
    if cfg is not None and err > cfg.abs_tol:
        raise AccuracyError("tau error bound exceeds abs_tol", err)
    return val, err


def tau(spec: MultistableSpec, moll: MollifierSpec, xi: float,
        cfg: QuadratureConfig | None = None) -> float:
    return tau_with_error(spec, moll, xi, cfg)[0]


def rho_with_error(spec: MultistableSpec, moll: MollifierSpec, xi: float,
                   cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """rho(xi): the absolute exponential remainder integrated against |phi_q|."""
    _check_xi(xi)
    m_vals = spec.scaled_modular(moll.nodes / xi)
    remainder = m_vals + np.expm1(-m_vals)  # m - 1 + e^-m >= 0
    body = 2.0 * moll.integrate_abs(np.abs(remainder))
    # tail: remainder <= m^2 / 2, expand the square over exponent groups
    groups = _group_weights(spec)
    tail = 0.0
    for w1, a1 in groups:
        for w2, a2 in groups:
            tail += 0.5 * w1 * w2 * xi ** -(a1 + a2) * moll.tail_power_bound(a1 + a2)
    total_w = sum(wgt for wgt, _ in groups)
    err = 2.0 * tail + total_w ** 2 * moll.stub_bound(2.0 * spec.a) \
        + 4e-16 * (1.0 + abs(body))
    if cfg is not None and err > cfg.abs_tol:
        raise AccuracyError("rho error bound exceeds abs_tol", err)
    return body, err


def rho(spec: MultistableSpec, moll: MollifierSpec, xi: float,
        cfg: QuadratureConfig | None = None) -> float:
    return rho_with_error(spec, moll, xi, cfg)[0]


def verify_elementary_inequality(u_samples: Sequence[float]) -> bool:
    """0 <= u - 1 + e^-u <= u^2 / 2 for every sample (all must be >= 0)."""
    for u in u_samples:
        if u < 0.0:
            raise ValueError(f"samples must be nonnegative, got {u}")
        lhs = u + math.expm1(-u)
        if not (0.0 <= lhs <= u * u / 2.0):
            return False
    return True


# ---------------------------------------------------------------------------
# lemma sweeps

def verify_lemma3(moll: MollifierSpec, gammas: Sequence[float]) -> LemmaReport:
    """q^-gamma h_q(gamma) <= C(gamma) <= q^gamma h_q(gamma) on a gamma grid."""
    from .asymptote import tail_constant

    q = moll.q
    rows = []
    ok_all = True
    for g in gammas:
        h, he = moll.h(float(g))
        c = tail_constant(float(g))
        lo, hi = q ** -g * h, q ** g * h
        lo_budget, hi_budget = q ** -g * he, q ** g * he
        ok = (lo - lo_budget <= c) and (c <= hi + hi_budget)
        # margins with the error budget already subtracted
        rows.append({
            "gamma": float(g), "h": h, "h_err": he, "C": c,
            "lower": lo, "upper": hi,
            "margin_lower": c - lo - lo_budget,
            "margin_upper": hi - c - hi_budget,
            "ok": ok,
        })
        ok_all &= ok
    worst = min(min(r["margin_lower"], r["margin_upper"]) for r in rows)
    return LemmaReport("lemma3", ok_all, rows, {"q": q, "worst_margin": worst})


def verify_lemma1(spec: MultistableSpec, moll: MollifierSpec,
                  lambdas: Sequence[float],
                  cfg: QuadratureConfig | None = None) -> LemmaReport:
    """eta(q^(j0+1)) <= P(|I(f)| > lam) <= eta(q^(j0-1)) over a lambda grid."""
    cfg = cfg or QuadratureConfig()
    q = moll.q
    rows = []
    ok_all = True
    for lam in lambdas:
        j = j0(float(lam), q)
        lo, lo_err = eta_with_error(spec, moll, q ** (j + 1))
        hi, hi_err = eta_with_error(spec, moll, q ** (j - 1))
        p, p_err = tail_probability_with_error(spec, float(lam), cfg)
        ok = (lo - lo_err <= p + p_err) and (p - p_err <= hi + hi_err)
        rows.append({
            "lambda": float(lam), "j0": j,
            "eta_upper_arg": lo, "tail": p, "eta_lower_arg": hi,
            "margin_lower": p - lo - lo_err - p_err,
            "margin_upper": hi - p - hi_err - p_err,
            "ok": ok,
        })
        ok_all &= ok
    worst = min(min(r["margin_lower"], r["margin_upper"]) for r in rows)
    return LemmaReport("lemma1", ok_all, rows, {"q": q, "worst_margin": worst})


def verify_lemma5(spec: MultistableSpec, moll: MollifierSpec,
                  xis: Sequence[float]) -> LemmaReport:
    """T(q xi) <= tau(xi) <= T(xi / q) on a xi grid."""
    q = moll.q
    rows = []
    ok_all = True
    for xi in xis:
        xi = float(xi)
        t, te = tau_with_error(spec, moll, xi)
        lo = tail_asymptote(spec, q * xi)
        hi = tail_asymptote(spec, xi / q)
        ok = (lo <= t + te) and (t - te <= hi)
        rows.append({
            "xi": xi, "T_qxi": lo, "tau": t, "tau_err": te, "T_xi_over_q": hi,
            "margin_lower": t - lo - te, "margin_upper": hi - t - te, "ok": ok,
        })
        ok_all &= ok
    worst = min(min(r["margin_lower"], r["margin_upper"]) for r in rows)
    return LemmaReport("lemma5", ok_all, rows, {"q": q, "worst_margin": worst})


def verify_lemma6(spec: MultistableSpec, moll: MollifierSpec,
                  lambda_grid: Sequence[float],
                  cfg: QuadratureConfig | None = None) -> LemmaReport:
    """Qualitative sandwich for eta/T with a fitted lambda^-a envelope.

    Checks q^-2b - eps(lam) <= eta(q^(j0+1))/T(lam) and
    eta(q^(j0-1))/T(lam) <= q^3b + eps(lam) with eps(lam) = c_fit lam^-a,
    plus the exact middle inequality eta(q^(j0+1)) <= eta(q^(j0-1)).
    The spec must lie on the unit sphere.
    """
    if abs(quasinorm(spec) - 1.0) > 1e-6:
        raise ValueError("lemma6 sweep requires a unit-sphere spec")
    q = moll.q
    a, b = spec.a, spec.b
    lo_edge = q ** (-2.0 * b)
    hi_edge = q ** (3.0 * b)
    rows = []
    middle_ok = True
    c_fit = 0.0
    for lam in lambda_grid:
        lam = float(lam)
        j = j0(lam, q)
        e_lo, e_lo_err = eta_with_error(spec, moll, q ** (j + 1))
        e_hi, e_hi_err = eta_with_error(spec, moll, q ** (j - 1))
        t = tail_asymptote(spec, lam)
        r_lo, r_hi = e_lo / t, e_hi / t
        middle = e_lo <= e_hi + e_lo_err + e_hi_err
        middle_ok &= middle
        # smallest envelope constant making both outer inequalities hold here
        need = max(0.0, (lo_edge - r_lo) * lam ** a, (r_hi - hi_edge) * lam ** a)
        c_fit = max(c_fit, need)
        rows.append({
            "lambda": lam, "j0": j, "ratio_lower": r_lo, "ratio_upper": r_hi,
            "lower_edge": lo_edge, "upper_edge": hi_edge,
            "middle_ok": middle, "envelope_needed": need,
        })
    worst_lo = min(r["ratio_lower"] - lo_edge for r in rows)
    worst_hi = min(hi_edge - r["ratio_upper"] for r in rows)
    return LemmaReport(
        "lemma6", middle_ok, rows,
        {
            "q": q, "a": a, "b": b,
            "fitted_constant": c_fit,
            "worst_margin_lower": worst_lo,
            "worst_margin_upper": worst_hi,
        },
    )


def verify_parseval(spec: MultistableSpec, moll: MollifierSpec,
                    deltas: Sequence[float],
                    cfg: QuadratureConfig | None = None) -> LemmaReport:
    """Both sides of the transform identity

        integral (1 - bump(delta x)) D(x) dx = integral phi_q(theta) (1 - cf(delta theta)) dtheta

    computed by independent routes (x-side drives the density pointwise,
    theta-side uses the mollifier table).
    """
    from scipy.integrate import quad

    from .charfn import cf_profile
    from .inversion import density, tail_probability_with_error

    cfg = cfg or QuadratureConfig()
    b_edge = (1.0 + moll.q) / 2.0
    rows = []
    ok_all = True
    for delta in deltas:
        delta = float(delta)
        if delta <= 0.0:
            raise ValueError("delta must be positive")
        # theta side on the table
        factor = 1.0 - cf_profile(spec, delta * moll.nodes)
        theta_side = 2.0 * moll.integrate(factor)
        theta_err = 2.0 * sum(
            wgt * delta ** alph * moll.tail_power_bound(alph)
            for wgt, alph in _group_weights(spec)
        ) + 2.0 * moll.stub_bound(spec.b)
        # x side: transition band + everything beyond the bump support
        lo_x, hi_x = 1.0 / delta, b_edge / delta
        band, band_err = quad(
            lambda x: (1.0 - float(moll.bump(delta * x))) * density(spec, x, cfg),
            lo_x, hi_x, epsabs=cfg.abs_tol, epsrel=1e-12, limit=200)
        beyond, beyond_err = tail_probability_with_error(spec, hi_x, cfg)
        x_side = 2.0 * band + beyond
        x_err = 2.0 * band_err + beyond_err + 2.0 * (hi_x - lo_x) * cfg.abs_tol
        tol = theta_err + x_err + 1e-9
        ok = abs(theta_side - x_side) <= tol
        rows.append({
            "delta": delta, "theta_side": theta_side, "x_side": x_side,
            "difference": theta_side - x_side, "tolerance": tol, "ok": ok,
        })
        ok_all &= ok
    return LemmaReport("parseval", ok_all, rows, {"q": moll.q})
