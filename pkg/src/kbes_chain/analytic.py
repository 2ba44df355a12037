"""Closed-form trajectories, steady state and final concurrence of the damped chain.

These closed-form expressions serve as an oracle that is
independent of the numerical engine.  Trajectories and concurrences hold for
``B = 0`` and real amplitudes (``delta = 0``); the steady state and the final
concurrence hold for any field.

Labelling: the trajectory expressions are written for the Bell-like states with
their two amplitudes exchanged relative to :func:`kbes_chain.model.ewl_density`
(i.e. for ``b|01> + a|10>`` and ``b|00> + a|11>``).  The functions here take
the amplitudes in the package's own convention and swap them internally, so
``closed_form_state(kind, 0, ctx)`` equals ``ewl_density`` for the same
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Callable
import warnings

import numpy as np

from .errors import StateError
from .linalg import ComplexMatrix
from .model import AnisotropyWarning, EWLParams, Kind, SpinChainParams

GOLDEN = (math.sqrt(5) - 1) / 2
#: Thermal occupation above which no steady-state entanglement survives.
N_THRESHOLD = (math.sqrt(2) - 1) / 2


@dataclass(frozen=True)
class ClosedFormContext:
    """Parameters entering the closed-form expressions."""

    alpha: float
    beta: float
    J: float
    Delta: float
    B: float = 0.0
    r: float = 1.0
    a: float = 1 / math.sqrt(2)
    b_abs: float = 1 / math.sqrt(2)
    delta: float = 0.0

    def __post_init__(self):
        if not self.alpha > self.beta >= 0:
            raise ValueError(f"need alpha > beta >= 0, got alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def from_params(cls, p: SpinChainParams, q: EWLParams | None = None) -> "ClosedFormContext":
        q = q or EWLParams()
        return cls(p.alpha, p.beta, p.J, p.Delta, p.B, q.r, q.a, q.b_abs, q.delta)

    @property
    def j_delta(self) -> float:
        return self.J * self.Delta

    @property
    def D(self) -> float:
        return (self.alpha + self.beta) ** 2 + self.j_delta**2


def _require_trajectory_domain(ctx: ClosedFormContext, t: float):
    if ctx.B != 0:
        raise StateError("closed-form trajectories require B = 0")
    if ctx.delta % (2 * math.pi) != 0:
        raise StateError("closed-form trajectories require a real amplitude b (delta = 0)")
    if t < 0:
        raise ValueError("t must be nonnegative")


def closed_form_state(kind, t: float, ctx: ClosedFormContext) -> ComplexMatrix:
    """Analytic density matrix at time ``t`` for an extended Werner-like initial state."""
    kind = Kind.parse(kind)
    _require_trajectory_domain(ctx, t)
    al, be, J, jd, r = ctx.alpha, ctx.beta, ctx.J, ctx.j_delta, ctx.r
    a, b = ctx.b_abs, ctx.a  # reference labelling
    s = al + be
    d = ctx.D
    e4 = math.exp(4 * s * t)
    e2 = math.exp(2 * s * t)
    pre = math.exp(-4 * s * t) / (4 * d)
    c, sn = math.cos(2 * jd * t), math.sin(2 * jd * t)
    rho = np.zeros((4, 4), dtype=np.complex128)

    if kind is Kind.PHI:
        rho[0, 0] = pre * (
            (1 - r) * (al - be) ** 2 - 4 * al * be * r + 4 * be**2 * e4 + jd**2 * (e4 - r)
            + 2 * e2 * (al - be) * (2 * be * c - jd * sn)
        )
        rho[3, 3] = pre * (
            (1 - r) * (al - be) ** 2 - 4 * al * be * r + 4 * al**2 * e4 + jd**2 * (e4 - r)
            + 2 * e2 * (be - al) * (2 * al * c - jd * sn)
        )

        def middle(sign):
            return pre * (
                (r - 1) * s**2 + 4 * al * be * (e4 + 1) + jd**2 * (e4 + r)
                + 2 * e2 * (r * sign * d * math.cos(2 * J * t) + (al - be) ** 2 * c)
            )

        rho[1, 1] = middle(b**2 - a**2)
        rho[2, 2] = middle(a**2 - b**2)
        rho[1, 2] = r * math.exp(-2 * s * t) * (a * b + 1j * math.sin(2 * J * t) * (b**2 - a**2) / 2)
        rho[0, 3] = 1j * (al - be) * ((jd * c + s * sn) * math.exp(-2 * s * t) - jd) / (2 * d)
    else:
        rho[0, 0] = pre * (
            (1 - r) * (al - be) ** 2 + 4 * be**2 * e4 + 4 * r * (a**2 * be**2 + b**2 * al**2)
            + jd**2 * (e4 + r)
            + 2 * c * e2 * (2 * be * (al - be) + r * (b**2 - a**2) * (2 * al * be + 2 * be**2 + jd**2))
            + 2 * jd * sn * e2 * (be - al) * (1 + r * b**2 - r * a**2)
        )
        rho[3, 3] = pre * (
            (1 - r) * (al - be) ** 2 + 4 * al**2 * e4 + 4 * r * (a**2 * be**2 + b**2 * al**2)
            + jd**2 * (e4 + r)
            + 2 * c * e2 * (2 * al * (be - al) + r * (a**2 - b**2) * (2 * al**2 + 2 * al * be + jd**2))
            + 2 * jd * sn * e2 * (al - be) * (1 + r * a**2 - r * b**2)
        )
        rho[1, 1] = rho[2, 2] = pre * (
            (r - 1) * (al - be) ** 2 + jd**2 * (e4 - r) - 4 * r * (a**2 * be**2 + b**2 * al**2)
            + 4 * al * be * e4
            + 2 * r * jd * sn * e2 * (al - be) * (b**2 - a**2)
            + 2 * c * e2 * ((al - be) ** 2 + r * (b**2 - a**2) * (al**2 - be**2))
        )
        # the initial coherence r*a*b decays without acquiring a phase at B = 0
        rho[0, 3] = math.exp(-2 * s * t) / (2 * d) * (
            2 * a * b * r * d
            + 1j * (
                jd * (al - be) * (c - e2)
                + (al**2 - be**2 + r * (b**2 - a**2) * d) * sn
            )
        )

    rho[3, 0] = np.conj(rho[0, 3])
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


# G1..G5 reduce to the pure-state helpers at r = 1; the r-dependent pieces are
# carried so that mixed initial states (r < 1) are covered as well.
def g1(al: float, be: float, t: float, ctx: ClosedFormContext) -> float:
    jd, r, s = ctx.j_delta, ctx.r, al + be
    c, sn = math.cos(2 * jd * t), math.sin(2 * jd * t)
    return (
        (al - be) * (2 * al * c - jd * sn)
        - (2 * al**2 + jd**2 / 2) * math.exp(2 * s * t)
        + (2 * al * be * r + jd**2 * r / 2 - (1 - r) * (al - be) ** 2 / 2) * math.exp(-2 * s * t)
    )


def g2(t: float, ctx: ClosedFormContext) -> float:
    al, be, jd = ctx.alpha, ctx.beta, ctx.j_delta
    s = al + be
    return (al - be) * (jd * math.cos(2 * jd * t) + s * math.sin(2 * jd * t) - jd * math.exp(2 * s * t))


def g3(a: float, b: float, t: float, ctx: ClosedFormContext) -> float:
    al, be, jd, r = ctx.alpha, ctx.beta, ctx.j_delta, ctx.r
    s, d = al + be, ctx.D
    em = math.exp(-2 * s * t)
    return (
        r * d * (a**2 - b**2) * math.cos(2 * ctx.J * t)
        + 2 * al * be * (math.exp(2 * s * t) + em)
        + jd**2 * (math.exp(2 * s * t) + r * em) / 2
        + (r - 1) * s**2 * em / 2
        + (al - be) ** 2 * math.cos(2 * jd * t)
    )


def g4(a: float, b: float, t: float, ctx: ClosedFormContext) -> complex:
    al, be, jd, r = ctx.alpha, ctx.beta, ctx.j_delta, ctx.r
    s, d = al + be, ctx.D
    c, sn = math.cos(2 * jd * t), math.sin(2 * jd * t)
    return (
        (al - be) * jd * (math.exp(2 * s * t) - c)
        - 2j * a * b * r * d
        + (2 * be * s + jd**2 - 2 * d * b**2 + (1 - r) * d * (b**2 - a**2)) * sn
    )


def g5(a: float, b: float, t: float, ctx: ClosedFormContext) -> float:
    al, be, jd, r = ctx.alpha, ctx.beta, ctx.j_delta, ctx.r
    s = al + be
    c, sn = math.cos(2 * jd * t), math.sin(2 * jd * t)
    em = math.exp(-2 * s * t)
    return (
        2 * (b**2 * al**2 + a**2 * be**2) * (c - r * em)
        + 2 * al * be * (math.exp(2 * s * t) - c)
        + jd**2 * (math.exp(2 * s * t) - r * em) / 2
        + (r - 1) * (al - be) ** 2 * em / 2
        + (r - 1) * (b**2 - a**2) * (al**2 - be**2) * c
        + r * (b**2 - a**2) * jd * (al - be) * sn
    )


def k_terms(kind, t: float, ctx: ClosedFormContext) -> tuple[float, ...]:
    """The K functions whose positive part is the concurrence (``(K1, K2)`` or ``(K1,)``)."""
    kind = Kind.parse(kind)
    _require_trajectory_domain(ctx, t)
    al, be, d = ctx.alpha, ctx.beta, ctx.D
    a, b = ctx.b_abs, ctx.a  # reference labelling
    em = math.exp(-2 * (al + be) * t)
    if kind is Kind.PHI:
        k1 = ctx.r * em * math.sqrt(4 * a**2 * b**2 + (a**2 - b**2) ** 2 * math.sin(2 * ctx.J * t) ** 2)
        k1 -= em / d * math.sqrt(max(0.0, g1(al, be, t, ctx) * g1(be, al, t, ctx)))
        k2 = em / d * (abs(g2(t, ctx)) - math.sqrt(max(0.0, g3(a, b, t, ctx) * g3(b, a, t, ctx))))
        return k1, k2
    return (em / d * (abs(g4(a, b, t, ctx)) - abs(g5(a, b, t, ctx))),)


def closed_form_concurrence(kind, t: float, ctx: ClosedFormContext) -> float:
    """Concurrence along the analytic trajectory: the positive part of the largest K."""
    return max(0.0, *k_terms(kind, t, ctx))


def steady_state_closed(ctx: ClosedFormContext) -> ComplexMatrix:
    """Analytic ``t -> infinity`` state; valid for any field ``B``."""
    al, be, jd, B = ctx.alpha, ctx.beta, ctx.j_delta, ctx.B
    s = al + be
    q = 4 * B**2 + jd**2 + s**2
    den = 4 * s**2 * q
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = (jd**2 * s**2 + 4 * be**2 * (4 * B**2 + s**2)) / den
    rho[1, 1] = rho[2, 2] = (jd**2 * s**2 + 4 * al * be * (4 * B**2 + s**2)) / den
    rho[3, 3] = (16 * B**2 * al**2 + (jd**2 + 4 * al**2) * s**2) / den
    rho[0, 3] = -1j * jd * (al - be) * (-2j * B + s) / (2 * s * q)
    rho[3, 0] = 1j * jd * (al - be) * (2j * B + s) / (2 * s * q)
    return rho


def k_m(ctx: ClosedFormContext) -> float:
    """Steady-state K whose positive part is the final concurrence.

    The reference expression assumes ``J*Delta >= 0``; the modulus is used here,
    which leaves that case unchanged and covers the mirror case ``J*Delta < 0``.
    """
    al, be, B = ctx.alpha, ctx.beta, ctx.B
    jd = abs(ctx.j_delta)
    s = al + be
    root = math.sqrt(4 * B**2 + s**2)
    num = 2 * jd * (al**2 - be**2) * root - 4 * al * be * (4 * B**2 + s**2) - jd**2 * s**2
    return num / (2 * s**2 * (4 * B**2 + jd**2 + s**2))


def final_concurrence(ctx: ClosedFormContext) -> float:
    """``max(K_M, 0)``: the concurrence of the steady state."""
    return max(0.0, k_m(ctx))


def cmax_infinity(n: float) -> float:
    """Largest final concurrence reachable at thermal occupation ``n`` (over B and J*Delta)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    val = (math.sqrt(5 + 16 * n * (1 + n)) - (8 * n**2 + 8 * n + 1)) / (4 * (1 + 2 * n) ** 2)
    return max(val, 0.0)


def optimal_j_delta(B: float, n: float = 0.0, gamma: float = 1.0) -> float:
    """``J*Delta`` maximizing the final concurrence at fixed field and temperature.

    Writing ``J*Delta = sqrt(4B^2 + s^2) * y`` with ``s = alpha + beta`` removes
    ``B`` from the objective; the stationary point solves
    ``p y^2 + (alpha - beta)^2 y - p = 0`` with ``p = alpha^2 - beta^2``.  At
    ``n = 0`` this gives ``sqrt(4B^2 + 1) * (sqrt(5) - 1) / 2`` (for gamma = 1).
    """
    al, be = gamma * (n + 1), gamma * n
    s = al + be
    p = al**2 - be**2
    q = (al - be) ** 2
    y = (-q + math.sqrt(q * q + 4 * p * p)) / (2 * p)
    return math.sqrt(4 * B**2 + s**2) * y


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8,
                       max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal function on ``[lo, hi]``; returns ``(x_max, f(x_max))``."""
    invphi = GOLDEN
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def maximize_final_concurrence(B: float, n: float = 0.0, gamma: float = 1.0, J: float = 1.0,
                               lo: float = 0.0, hi: float = 20.0, tol: float = 1e-8,
                               objective: Callable[[SpinChainParams], float] | None = None) -> tuple[float, float]:
    """Golden-section maximum of the final concurrence over ``J*Delta`` in ``[lo, hi]``.

    The search runs on the unclamped steady-state K (``K_M`` by default, or
    ``objective(params)``), which is smooth and unimodal where the clamped
    concurrence has a flat zero plateau.  Returns ``(J*Delta, max(K, 0))``.
    """
    def value(jd):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AnisotropyWarning)
            p = SpinChainParams(B=B, J=J, Delta=jd / J, gamma=gamma, n=n)
        if objective is None:
            return k_m(ClosedFormContext.from_params(p))
        return objective(p)

    x, k = golden_section_max(value, lo, hi, tol)
    return x, max(0.0, k)
