"""Glaser-Liu-Rokhlin root sweep for Laguerre functions.

The roots of ``Lhat_n^(alpha)`` are found in increasing order.  Each step
predicts the next root by integrating the Pruefer phase equation of the
governing ODE, then corrects with Newton's method using a local Taylor
expansion generated from the ODE itself.  Because the expansion is seeded
with the Laguerre-function derivative at the previous root, the derivative
at every root falls out of the same computation and ``exp(-x/2)`` is never
evaluated beyond the first few roots near the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .laguerre import EvalPair, LaguerreParam, eval_function_modified

EPS = np.finfo(float).eps
TAYLOR_ORDER = 30
NEAR_ORIGIN_ROOTS = 20
# evaluate a jet directly only within this fraction of the distance to the
# nearest singular point of the ODE; beyond it the jet is re-expanded
RELIABLE_FRACTION = 0.5
TAIL_TOL = EPS / 8


class RootSweepError(RuntimeError):
    def __init__(self, message: str, index: int | None = None, trace: list | None = None):
        super().__init__(message)
        self.index = index
        self.trace = trace or []


class NoFurtherRoots(RuntimeError):
    """The predictor stepped past the upper root bound."""


def _poly(c: tuple[float, float, float], x: float) -> tuple[float, float, float]:
    c2, c1, c0 = c
    return (c2 * x + c1) * x + c0, 2 * c2 * x + c1, 2 * c2


@dataclass(frozen=True)
class OdeCoefficients:
    """``p(x) y'' + q(x) y' + r(x) y = 0`` with quadratic ``p, q, r``.

    Each polynomial is stored as ``(c2, c1, c0)`` for ``c2 x^2 + c1 x + c0``.
    """

    p: tuple[float, float, float]
    q: tuple[float, float, float]
    r: tuple[float, float, float]

    def at(self, x: float):
        return _poly(self.p, x), _poly(self.q, x), _poly(self.r, x)

    def singular_distance(self, x: float) -> float:
        """Distance from ``x`` to the nearest complex zero of ``p``."""
        c2, c1, c0 = self.p
        if c2 == 0.0 and c1 == 0.0:
            return math.inf
        zeros = np.roots([c2, c1, c0]) if c2 != 0.0 else np.array([-c0 / c1])
        return float(np.min(np.abs(zeros - x))) if zeros.size else math.inf


def ode_coefficients(param: LaguerreParam) -> OdeCoefficients:
    """``x y'' + (alpha+1) y' + (n + (alpha+1)/2 - x/4) y = 0``."""
    a, n = param.alpha, param.degree
    return OdeCoefficients(p=(0.0, 1.0, 0.0), q=(0.0, 0.0, a + 1.0), r=(0.0, -0.25, n + (a + 1.0) / 2))


@dataclass(frozen=True)
class TaylorJet:
    """Scaled Taylor coefficients ``coeffs[k] = y^(k)(center) * scale**k / k!``."""

    center: float
    coeffs: np.ndarray
    order: int
    scale: float = 1.0
    ode: OdeCoefficients | None = field(default=None, compare=False)

    def _sum(self, s: float) -> tuple[float, float]:
        c = self.coeffs
        val = c[-1]
        der = self.order * c[-1]
        for k in range(self.order - 1, 0, -1):
            val = val * s + c[k]
            der = der * s + k * c[k]
        return val * s + c[0], der / self.scale

    def reliable_radius(self) -> float:
        if self.ode is None:
            return math.inf
        return RELIABLE_FRACTION * self.ode.singular_distance(self.center)

    def _safe_step(self, offset: float) -> float:
        step = math.copysign(min(abs(offset), self.reliable_radius()), offset)
        while self.tail(step) > TAIL_TOL:
            step /= 2
        return step

    def evaluate(self, offset: float) -> EvalPair:
        """``(y, y')`` at ``center + offset``.

        Offsets past the reliable radius, or where the last retained term is
        not negligible, are reached by re-expanding the solution at
        intermediate points.  A single long expansion would amplify rounding
        through the solution that is singular where ``p`` vanishes.
        """
        jet, remaining = self, offset
        step = jet._safe_step(remaining)
        while step != remaining:
            seed = EvalPair(*jet._sum(step / jet.scale))
            jet = taylor_jet(jet.center + step, seed, jet.order, jet.ode, scale=step)
            remaining = offset - (jet.center - self.center)
            step = jet._safe_step(remaining)
        return EvalPair(*jet._sum(remaining / jet.scale))

    def tail(self, offset: float) -> float:
        """Magnitude of the last retained term relative to the largest one."""
        s = abs(offset / self.scale)
        terms = np.abs(self.coeffs) * s ** np.arange(self.order + 1)
        return float(terms[-1] / max(terms.max(), np.finfo(float).tiny))


def taylor_jet(
    center: float, seed: EvalPair, m: int, ode: OdeCoefficients, scale: float = 1.0
) -> TaylorJet:
    """Expand the ODE solution with ``y(center), y'(center) = seed`` to order ``m``.

    The k-th derivative of the ODE, evaluated at ``center``, gives
    ``y^(k+2)`` from lower derivatives; it is solved here in the scaled
    variables ``u_k = y^(k) h^k / k!`` with ``h = scale``.
    """
    if m < 2:
        raise ValueError("Taylor order must be at least 2")
    (p, p1, p2), (q, q1, q2), (r, r1, r2) = ode.at(center)
    if p == 0.0:
        raise ValueError(f"center {center} is a singular point of the ODE")
    h = float(scale)
    u = np.zeros(m + 1)
    u[0] = seed.value
    u[1] = seed.derivative * h
    for k in range(0, m - 1):
        acc = (k + 1) * (k * p1 + q) * h * u[k + 1]
        acc += (k * (k - 1) / 2 * p2 + k * q1 + r) * h * h * u[k]
        if k >= 1:
            acc += ((k - 1) / 2 * q2 + r1) * h**3 * u[k - 1]
        if k >= 2:
            acc += r2 / 2 * h**4 * u[k - 2]
        u[k + 2] = -acc / (p * (k + 1) * (k + 2))
    if not np.all(np.isfinite(u)):
        raise RootSweepError(f"non-finite Taylor coefficient at x={center}")
    return TaylorJet(center, u, m, h, ode)


def _phase_rhs(x: float, phi: float, ode: OdeCoefficients) -> float:
    (p, p1, _), (q, _, _), (r, r1, _) = ode.at(x)
    kappa = math.sqrt(abs(r / p))
    g = (r1 * p - r * p1 + 2 * r * q) / (2 * r * p)
    denom = kappa + g * math.sin(phi) * math.cos(phi)
    if not denom > 0:
        raise RootSweepError(f"Pruefer phase equation degenerate at x={x}")
    return 1.0 / denom


def prufer_advance(x: float, phi0: float, phi1: float, ode: OdeCoefficients, steps: int = 10) -> float:
    """Integrate ``dx/dphi`` from phase ``phi0`` to ``phi1`` with classical RK4.

    The phase ``phi`` is defined by ``tan(phi) = sqrt(r/p) y / y'`` so the
    zeros of ``y`` sit at integer multiples of pi.
    """
    dphi = (phi1 - phi0) / steps
    phi = phi0
    for _ in range(steps):
        k1 = _phase_rhs(x, phi, ode)
        k2 = _phase_rhs(x + 0.5 * dphi * k1, phi + 0.5 * dphi, ode)
        k3 = _phase_rhs(x + 0.5 * dphi * k2, phi + 0.5 * dphi, ode)
        k4 = _phase_rhs(x + dphi * k3, phi + dphi, ode)
        x += dphi * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        phi += dphi
    return x


def root_bounds(param: LaguerreParam) -> tuple[float, float]:
    """Heuristic lower start and rigorous upper bound for the roots.

    The lower value ``1/(2n + alpha + 1)`` only seeds a bracketing search;
    the upper value is Szego's bound on the largest zero.
    """
    n, a = param.degree, param.alpha
    s = 2 * n + a + 1
    return 1.0 / s, s + math.sqrt(s * s + 0.25 - a * a)


def prufer_predict(prev_root: float, ode: OdeCoefficients, upper: float | None = None) -> float:
    """Guess for the root following ``prev_root``."""
    guess = prufer_advance(prev_root, 0.0, math.pi, ode)
    if upper is not None and not guess < upper:
        raise NoFurtherRoots(f"predicted root {guess} passes the upper bound {upper}")
    return guess


def newton_refine(jet: TaylorJet, guess_offset: float, maxit: int = 50) -> tuple[float, float, float]:
    """Newton's method on the jet: returns ``(root, y'(root), y(root))``."""
    h = guess_offset
    trace = []
    for _ in range(maxit):
        y, dy = jet.evaluate(h)
        step = y / dy
        h -= step
        trace.append((h, y, dy))
        if not math.isfinite(h):
            break
        if abs(step) <= 10 * EPS * abs(jet.center + h):
            # evaluate at the representable root so the residual describes it
            root = jet.center + h
            y, dy = jet.evaluate(root - jet.center)
            return root, dy, y
    raise RootSweepError(
        f"Newton on the Taylor expansion at {jet.center} did not converge", trace=trace
    )


@dataclass(frozen=True)
class RootSweepResult:
    roots: np.ndarray
    derivs: np.ndarray
    residuals: np.ndarray
    param: LaguerreParam
    taylor_tail: float = 0.0


def _newton_recurrence(param: LaguerreParam, x: float, lo: float, hi: float, maxit: int = 50):
    """Newton on the recurrence-evaluated Laguerre function, kept inside ``(lo, hi)``."""
    trace = []
    for _ in range(maxit):
        y, dy = eval_function_modified(param, x)
        step = y / dy
        xn = x - step
        trace.append((x, y, dy))
        if not (lo < xn < hi) or not math.isfinite(xn):
            return None
        if abs(step) <= 10 * EPS * abs(xn):
            return (xn, *_shift(param, x, xn, y, dy))
        x = xn
    return None


def _shift(param: LaguerreParam, x: float, xn: float, y: float, dy: float) -> tuple[float, float]:
    # move (y, y') from the last evaluation point to the accepted root, with y'' from the ODE
    (p, _, _), (q, _, _), (r, _, _) = ode_coefficients(param).at(x)
    ddy = -(q * dy + r * y) / p
    t = xn - x
    return dy + ddy * t, y + t * (dy + 0.5 * ddy * t)


def _first_root(param: LaguerreParam):
    # Real-rooted polynomial: Newton from left of the smallest zero converges
    # monotonically.  Halving the start point until L_n > 0 guarantees that.
    start, _ = root_bounds(param)
    while eval_function_modified(param, start).value <= 0:
        start /= 2
    x = start
    for _ in range(200):
        y, dy = eval_function_modified(param, x)
        step = y / (dy + 0.5 * y)  # L / L' on the polynomial itself
        xn = x - step
        if abs(step) <= 10 * EPS * abs(xn):
            return (xn, *_shift(param, x, xn, y, dy))
        x = xn
    raise RootSweepError("first-root iteration did not converge", index=0)


def _bracket_root(evaluate, lo: float, step: float, hi: float):
    """Find the first sign change after ``lo`` by doubling steps, then bisect."""
    f_lo = evaluate(lo + step * 1e-3)[0]
    a, b = lo + step * 1e-3, lo + step
    while b < hi:
        fb = evaluate(b)[0]
        if fb == 0 or math.copysign(1.0, fb) != math.copysign(1.0, f_lo):
            break
        a, b = b, b + step
        step *= 2
    else:
        b = hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = evaluate(mid)[0]
        if math.copysign(1.0, fm) == math.copysign(1.0, f_lo):
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


_SPLITTER = 134217729.0  # 2**27 + 1
_RESCALE = 2.0**200


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    t = _SPLITTER * b
    bh = t - (t - b)
    al, bl = a - ah, b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dw_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    return _two_sum(p, e + (ah * bl + al * bh))


def _dw_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    return _two_sum(s, e + al + bl)


def _dw_div(ah, al, d):
    q = ah / d
    p, e = _two_prod(q, d)
    return _two_sum(q, ((ah - p) - e + al) / d)


def polish_roots(param: LaguerreParam, roots: np.ndarray) -> np.ndarray:
    """One Newton step per root on ``L_n`` evaluated in double-word arithmetic.

    The three-term recurrence runs on all roots at once with about 32 digits,
    rescaled by powers of two so it neither overflows nor needs ``exp``.
    The step is then exact to well below an ulp.
    """
    n, a = param.degree, float(param.alpha)
    x = np.asarray(roots, dtype=float)
    p0h, p0l = np.ones_like(x), np.zeros_like(x)
    p1h, p1l = _two_sum(1.0 + a, -x)
    for k in range(1, n):
        ch, cl = _two_sum(2.0 * k + a + 1.0, -x)
        th, tl = _dw_mul(ch, cl, p1h, p1l)
        sh, sl = _two_prod(k + a, p0h)
        th, tl = _dw_add(th, tl, -sh, -(sl + (k + a) * p0l))
        p0h, p0l = p1h, p1l
        p1h, p1l = _dw_div(th, tl, k + 1.0)
        big = np.abs(p1h) > _RESCALE
        if big.any():
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            p0h, p0l, p1h, p1l = p0h * f, p0l * f, p1h * f, p1l * f
    lead = p1h + p1l
    with np.errstate(divide="ignore", invalid="ignore"):
        # L_n / L_n' with L_n' = (n L_n - (n + alpha) L_{n-1}) / x
        step = x * lead / (n * lead - (n + a) * p0h)
    step = np.where(np.isfinite(step) & (np.abs(step) < 1e-8 * x), step, 0.0)
    return x - step


def sweep_roots(
    param: LaguerreParam,
    near_origin: int = NEAR_ORIGIN_ROOTS,
    order: int = TAYLOR_ORDER,
    polish: bool = True,
) -> RootSweepResult:
    """All roots of ``L_n^(alpha)`` with ``Lhat_n^(alpha)'`` at each root."""
    n = param.degree
    if n < 1:
        raise ValueError("sweep_roots needs degree >= 1")
    ode = ode_coefficients(param)
    _, upper = root_bounds(param)
    roots = np.empty(n)
    derivs = np.empty(n)
    resid = np.empty(n)
    roots[0], derivs[0], resid[0] = _first_root(param)
    tail = 0.0
    for i in range(1, n):
        x = roots[i - 1]
        try:
            guess = prufer_predict(x, ode, upper)
        except (NoFurtherRoots, RootSweepError):
            guess = 0.5 * (x + upper)
        if i < near_origin:
            out = _newton_recurrence(param, guess, x, upper)
            if out is None:
                spacing = x - roots[i - 2] if i >= 2 else x
                evaluate = lambda t: eval_function_modified(param, t)  # noqa: E731
                root = _bracket_root(evaluate, x, spacing / 2, upper)
                out = _newton_recurrence(param, root, x, upper)
                if out is None:
                    raise RootSweepError("recurrence Newton failed", index=i)
        else:
            h = guess - x
            # seed with the residual so rounding of the previous root does not propagate
            jet = taylor_jet(x, EvalPair(resid[i - 1], derivs[i - 1]), order, ode, scale=h)
            try:
                out = newton_refine(jet, h)
                if not x < out[0] < upper:
                    raise RootSweepError("Newton left the bracket", index=i)
            except RootSweepError:
                spacing = x - roots[i - 2]
                off = _bracket_root(lambda t: jet.evaluate(t - x), x, spacing / 2, upper) - x
                out = newton_refine(jet, off)
            tail = max(tail, jet.tail(out[0] - x))
        roots[i], derivs[i], resid[i] = out
        if not (math.isfinite(roots[i]) and math.isfinite(derivs[i])):
            raise RootSweepError(f"non-finite value at root index {i}", index=i)
        if not roots[i] > x:
            raise RootSweepError(f"root {i} did not advance past root {i - 1}", index=i)
    if polish:
        # the sweep itself is good to a few ulps; a compensated step removes the rest
        moved = polish_roots(param, roots)
        resid = resid + derivs * (moved - roots)
        roots = moved
    return RootSweepResult(roots, derivs, resid, param, tail)
