"""Floating-point dynamics of z -> lambda * exp(z).

Dynamic rays are computed by backward iteration along the potential ladder
t, F(t), F(F(t)), ... with F(t) = exp(t) - 1.  Above the descent threshold
the inverse branches are the address entries themselves (the asymptotic
strips).  Below it the ray may cross the static strips, so the branch at
every ladder level is carried downward by continuity while the potential
shrinks on a geometric schedule; this keeps the trace on the ray named by
the address all the way into the landing zone.

All arithmetic is double precision; exp() is guarded at Re z > 700.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import (
    EvalOverflowError,
    NonConvergenceError,
    RayCollisionError,
    SpuriousRootError,
)

OVERFLOW_REAL = 700.0

ATTRACTING_OR_PARABOLIC = "attracting_or_parabolic"
EVENTUALLY_CONSTANT = "eventually_constant"
ESCAPING = "escaping"
UNDECIDED = "undecided"


def eval_map(lam, z):
    """lambda * exp(z); overflow is an error, never a silent infinity."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    z = complex(z)
    if z.real > OVERFLOW_REAL:
        raise EvalOverflowError("exp overflow at Re z = %g" % z.real)
    return lam * cmath.exp(z)


def inverse_branch(lam, w, j):
    """The preimage of w under eval_map lying in static strip R_j:
    Log w - Log lambda + 2 pi i j with principal logs."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if w == 0:
        raise RayCollisionError("0 is an omitted value and has no preimage")
    return cmath.log(w) - cmath.log(lam) + 2j * math.pi * j


@dataclass(frozen=True)
class TraceConfig:
    """Knobs of the ray tracer.

    t_cap stops the potential ladder once the asymptotic formula is exact
    to double precision; n_cap bounds the ladder length (reached only for
    potentials below ~5e-4).  The descent schedule refines geometrically,
    finer while crossing the strip-transition zone.  error_constant is the
    C in the reported (heuristic) tail bound; it never steers control flow.
    """

    t_cap: float = 1e100
    n_cap: int = 8192
    descent_start: float = 4.0
    fine_ratio: float = 0.9
    coarse_ratio: float = 0.7
    fine_floor: float = 0.02
    error_constant: float = 2.0


DEFAULT_TRACE = TraceConfig()


@dataclass(frozen=True)
class RayTrace:
    """One traced ray point g_s(t) with its ladder metadata."""

    lam: complex
    address: object
    t: float
    depth: int
    point: complex
    tail_error_bound: float


def _potentials(t, config):
    """Ladder t, F(t), ..., stopping at t_cap, at the double-exp safety
    line, or at n_cap levels."""
    ts = [t]
    while ts[-1] < config.t_cap and ts[-1] <= OVERFLOW_REAL and len(ts) - 1 < config.n_cap:
        ts.append(math.expm1(ts[-1]))
    return ts


def _ladder_static(lam, s, t, config):
    """Backward orbit with address-entry branches; exact for potentials in
    the asymptotic regime."""
    loglam = cmath.log(lam)
    ts = _potentials(t, config)
    n = len(ts) - 1
    ent = s.expand(n + 2)
    zs = [0j] * (n + 1)
    zs[n] = ts[n] - loglam + 2j * math.pi * ent[n]
    for m in range(n - 1, -1, -1):
        if zs[m + 1] == 0:
            raise RayCollisionError("ray pullback hit the singular value")
        zs[m] = cmath.log(zs[m + 1]) - loglam + 2j * math.pi * ent[m]
    return ts, zs


def _ladder_at(lam, s, t, config):
    """Backward orbit at potential t; below descent_start the branches are
    transported by per-level continuity from the asymptotic regime."""
    tau = max(t, config.descent_start)
    ts, zs = _ladder_static(lam, s, tau, config)
    loglam = cmath.log(lam)
    while tau > t:
        ratio = config.fine_ratio if tau > config.fine_floor else config.coarse_ratio
        tau = max(t, tau * ratio)
        ts = _potentials(tau, config)
        n = len(ts) - 1
        ent = s.expand(n + 2)
        new = [0j] * (n + 1)
        new[n] = ts[n] - loglam + 2j * math.pi * ent[n]
        for m in range(n - 1, -1, -1):
            if new[m + 1] == 0:
                raise RayCollisionError("ray pullback hit the singular value")
            w = cmath.log(new[m + 1]) - loglam
            if m < len(zs):
                j = round((zs[m].imag - w.imag) / (2.0 * math.pi))
            else:
                j = ent[m]
            new[m] = w + 2j * math.pi * j
        zs = new
    return ts, zs


def trace_dynamic_ray(lam, s, t, config=DEFAULT_TRACE):
    """Approximate g_s(t) for the exponential map with parameter lam."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if not t > 0:
        raise ValueError("potential must be positive, got %g" % t)
    ts, zs = _ladder_at(lam, s, t, config)
    top = min(ts[-1], OVERFLOW_REAL)
    bound = 2.0 * math.exp(-top) * (abs(cmath.log(lam)) + config.error_constant)
    return RayTrace(lam=lam, address=s, t=t, depth=len(ts) - 1,
                    point=zs[0], tail_error_bound=bound)


@dataclass(frozen=True)
class SingularOrbit:
    """Orbit of the singular value 0 with parameter derivatives.

    points[i] = E^i(0); derivatives[i] = d points[i] / d lambda from the
    recurrence z'_{i+1} = z_{i+1} (1/lambda + z'_i).  overflow_index marks
    the first iterate whose exp() would overflow; the orbit stops there.
    """

    lam: complex
    points: tuple
    derivatives: tuple
    overflow_index: int | None = None

    @property
    def overflowed(self):
        return self.overflow_index is not None


def singular_orbit(lam, n):
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    pts = [0j]
    ders = [0j]
    overflow = None
    for i in range(n):
        z = pts[-1]
        if z.real > OVERFLOW_REAL:
            overflow = i
            break
        z_next = lam * cmath.exp(z)
        pts.append(z_next)
        ders.append(z_next * (1.0 / lam + ders[-1]))
    return SingularOrbit(lam=complex(lam), points=tuple(pts),
                         derivatives=tuple(ders), overflow_index=overflow)


def _orbit_shape_residuals(lam, l, k):
    """Residual |z_{l'+k'} - z_{l'}| for all smaller admissible shapes,
    plus the target shape residual.  Used for spurious-root rejection."""
    orb = singular_orbit(lam, l + k)
    if len(orb.points) < l + k + 1:
        return None, None
    target = abs(orb.points[l + k] - orb.points[l])
    smaller = []
    for kk in (d for d in range(1, k) if k % d == 0):
        smaller.append(("period %d" % kk, abs(orb.points[l + kk] - orb.points[l])))
    for ll in range(l):
        smaller.append(("preperiod %d" % ll, abs(orb.points[ll + k] - orb.points[ll])))
    return target, smaller


def misiurewicz_newton(seed, l, k, tol=1e-12, max_iter=60, reject_tol=1e-8):
    """Newton's method on Phi(lambda) = z_{l+k}(lambda) - z_l(lambda).

    Uses the analytic derivative recurrence.  A root whose orbit is
    actually periodic or realizes a strictly smaller (preperiod, period)
    is rejected as spurious.
    """
    if seed == 0:
        raise ValueError("seed must be nonzero")
    if l < 1 or k < 1:
        raise ValueError("need preperiod >= 1 and period >= 1")
    lam = complex(seed)
    for _ in range(max_iter):
        orb = singular_orbit(lam, l + k)
        if len(orb.points) < l + k + 1:
            raise NonConvergenceError("singular orbit overflowed at lambda = %s" % lam)
        phi = orb.points[l + k] - orb.points[l]
        if abs(phi) < tol:
            break
        dphi = orb.derivatives[l + k] - orb.derivatives[l]
        if dphi == 0:
            raise NonConvergenceError("vanishing derivative at lambda = %s" % lam)
        step = phi / dphi
        damp = 1.0
        while damp > 1e-6:
            cand = lam - damp * step
            if cand != 0 and len(singular_orbit(cand, l + k).points) == l + k + 1:
                lam = cand
                break
            damp *= 0.5
        else:
            raise NonConvergenceError("orbit overflow blocks every Newton step")
    else:
        raise NonConvergenceError(
            "no root with |Phi| < %g after %d iterations" % (tol, max_iter))
    target, smaller = _orbit_shape_residuals(lam, l, k)
    for name, value in smaller:
        if value < reject_tol:
            raise SpuriousRootError(
                "root %s realizes smaller shape (%s residual %g)" % (lam, name, value))
    return lam


@dataclass(frozen=True)
class ConvergenceClass:
    """Outcome of the tower/orbit classifier with its witness: the fixed
    point for the attracting case, (preperiod, period) for the eventually
    constant case, the escape index for escape."""

    tag: str
    witness: object = None


def _fixed_point_newton(lam, z0, tol=1e-12, max_iter=60):
    z = complex(z0)
    for _ in range(max_iter):
        if z.real > OVERFLOW_REAL or abs(z) > 1e8:
            return None
        f = lam * cmath.exp(z) - z
        if abs(f) < tol:
            return z
        df = lam * cmath.exp(z) - 1.0
        if df == 0:
            return None
        z = z - f / df
    return None


def classify_convergence(lam, max_iter=256, tol=1e-9):
    """Trichotomy of the singular orbit: convergence to an attracting or
    parabolic fixed point, eventually constant (finite) orbit, escape to
    infinity, or none of these within the budget."""
    if lam == 0:
        return ConvergenceClass(UNDECIDED, "lambda = 0 is not a parameter")
    lam = complex(lam)
    pts = [0j]
    collision = None
    escaped = None
    for n in range(1, max_iter + 1):
        z = pts[-1]
        if z.real > OVERFLOW_REAL:
            escaped = n - 1
            break
        z = lam * cmath.exp(z)
        pts.append(z)
        for m in range(len(pts) - 1):
            if abs(pts[m] - z) < tol:
                collision = (m, n)
                break
        if collision:
            break

    if escaped is not None:
        tail = [p.real for p in pts[-3:]]
        if all(tail[i] < tail[i + 1] for i in range(len(tail) - 1)):
            return ConvergenceClass(ESCAPING, escaped)
        return ConvergenceClass(UNDECIDED, "overflow without monotone growth")

    if collision:
        i, j = collision
        k = j - i
        mult = complex(1.0)
        for m in range(i, j):
            mult *= pts[m + 1]  # E'(z_m) = z_{m+1}
        stable = True
        ext = list(pts)
        for _ in range(k):
            z = ext[-1]
            if z.real > OVERFLOW_REAL:
                stable = False
                break
            ext.append(lam * cmath.exp(z))
        if stable:
            stable = all(abs(ext[j + m] - ext[i + m]) < 1e-6 for m in range(1, k + 1))
        if stable and abs(mult) > 1.0 + 1e-8:
            return ConvergenceClass(EVENTUALLY_CONSTANT, (i, k))

    # attracting/parabolic: a fixed point near the orbit accumulation with
    # multiplier (= the fixed point itself) inside the closed unit disk
    z_star = _fixed_point_newton(lam, pts[-1])
    if z_star is not None and abs(z_star) <= 1.0 + tol and len(pts) >= 2:
        d1 = abs(pts[-1] - z_star)
        d2 = abs(pts[-2] - z_star)
        if d1 < 0.5 and d1 <= d2 + 1e-12:
            return ConvergenceClass(ATTRACTING_OR_PARABOLIC, z_star)
    return ConvergenceClass(UNDECIDED, None)
