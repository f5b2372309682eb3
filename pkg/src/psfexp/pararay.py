"""Parameter rays, landing, and the address -> parameter pipeline.

The parameter ray at address s is followed by solving g_s(t) = 0 for the
parameter with damped Newton (finite-difference derivative), continuing
along a halving schedule of potentials.  The continuation is only a seed
finder; the located parameter is certified by Newton on the exact orbit
preperiodicity condition and cross-checked against the combinatorics: the
orbit must realize the class's preperiod and kneading period, the dynamic
ray at the address must land at the singular value, and the convergence
classifier must report an eventually constant orbit.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .classify import are_equivalent, equivalence_class
from .errors import (
    ContinuationError,
    FirstEntryNonzeroError,
    NonConvergenceError,
    PeriodicAddressError,
    PipelineError,
    PsfexpError,
    SearchLimitError,
)
from .numerics import (
    DEFAULT_TRACE,
    EVENTUALLY_CONSTANT,
    classify_convergence,
    misiurewicz_newton,
    singular_orbit,
    trace_dynamic_ray,
)
from .symbolic import enumerate_addresses

LANDING_GRID = (0.1, 0.03, 0.01, 0.003, 0.001)
MEMBER_AGREEMENT = 1e-8
DISTINCTNESS_GAP = 1e-6
ADDRESS_SEARCH_CAP = 10 ** 5
COLD_SEED_CAP = 700.0


@dataclass(frozen=True)
class ParameterRaySample:
    """One solved point lambda = G_s(t) with the solver residual |g_s(t)|."""

    t: float
    lam: complex
    residual: float


@dataclass(frozen=True)
class ContinuationSchedule:
    t_start: float = 20.0
    t_end: float = 1e-3
    shrink: float = 0.5
    stall_gap: float = 1e-9
    residual_tol: float = 1e-10
    max_halvings: int = 6


DEFAULT_SCHEDULE = ContinuationSchedule()


@dataclass(frozen=True)
class PsfParameter:
    """A located postsingularly finite parameter and its certificates."""

    lam: complex
    address_class: object
    l: int
    k: int
    orbit_period: int
    newton_residual: float
    landing_gap: float
    dynamic_landing_residual: float
    gap_history: tuple = ()
    refined: bool = True


def _require_ray_address(s):
    if not s.is_strictly_preperiodic():
        raise PeriodicAddressError("parameter rays here require strictly preperiodic addresses")
    if s.entry(1) != 0:
        raise FirstEntryNonzeroError(
            "rays landing at the singular value start with 0, got first entry %d" % s.entry(1))


def _solve_ray_equation(s, t, seed, tol, config, max_iter=60):
    """Damped Newton on lambda -> g_s(t), derivative by forward difference
    with step 1e-7 (1 + |lambda|)."""
    lam = seed
    g = trace_dynamic_ray(lam, s, t, config).point
    for _ in range(max_iter):
        if abs(g) < tol:
            return ParameterRaySample(t=t, lam=lam, residual=abs(g))
        h = 1e-7 * (1.0 + abs(lam))
        g_shift = trace_dynamic_ray(lam + h, s, t, config).point
        dg = (g_shift - g) / h
        if dg == 0:
            raise NonConvergenceError("flat ray equation at t = %g" % t)
        step = g / dg
        damp = 1.0
        improved = False
        for _ in range(40):
            cand = lam - damp * step
            if cand == 0:
                damp *= 0.5
                continue
            try:
                g_cand = trace_dynamic_ray(cand, s, t, config).point
            except PsfexpError:
                damp *= 0.5
                continue
            if abs(g_cand) < abs(g):
                lam, g = cand, g_cand
                improved = True
                break
            damp *= 0.5
        if not improved:
            raise NonConvergenceError(
                "ray solve stalled at t = %g with |g| = %g" % (t, abs(g)))
    if abs(g) < tol:
        return ParameterRaySample(t=t, lam=lam, residual=abs(g))
    raise NonConvergenceError("ray solve at t = %g left |g| = %g" % (t, abs(g)))


def trace_parameter_ray(s, t, seed=None, config=DEFAULT_TRACE,
                        tol=DEFAULT_SCHEDULE.residual_tol):
    """The unique parameter with the singular value on g_s at potential t.

    Cold starts are seeded from the ray asymptotics (log lambda ~ t) and
    need t >= 0.001.
    """
    _require_ray_address(s)
    if not t >= 1e-3:
        raise ValueError("potential too small to solve, need t >= 0.001")
    if seed is None:
        seed = complex(math.exp(min(t, COLD_SEED_CAP)))
    return _solve_ray_equation(s, t, seed, tol, config)


def land_parameter_ray(s, schedule=DEFAULT_SCHEDULE, config=DEFAULT_TRACE):
    """Follow G_s down the potential schedule until the parameter stops
    moving; returns the unrefined landing estimate.

    A failed solve retries on geometrically intermediate potentials up to
    schedule.max_halvings times before giving up.
    """
    _require_ray_address(s)
    cls = equivalence_class(s)
    t = schedule.t_start
    lam = complex(math.exp(min(t, COLD_SEED_CAP)))
    residual = math.inf
    prev = None
    gaps = []

    def _solve_with_fallback(t_from, t_to, seed, depth):
        try:
            return _solve_ray_equation(s, t_to, seed, schedule.residual_tol, config)
        except NonConvergenceError:
            if depth >= schedule.max_halvings:
                raise ContinuationError(
                    "continuation for %s diverged near t = %g" % (s, t_to)) from None
            t_mid = math.sqrt(t_from * t_to)
            mid = _solve_with_fallback(t_from, t_mid, seed, depth + 1)
            return _solve_with_fallback(t_mid, t_to, mid.lam, depth + 1)

    sample = _solve_with_fallback(t, t, lam, 0)
    lam, residual = sample.lam, sample.residual
    while True:
        if prev is not None:
            gaps.append(abs(lam - prev))
            if gaps[-1] < schedule.stall_gap:
                break
        prev = lam
        if t <= schedule.t_end:
            break
        t_next = t * schedule.shrink
        sample = _solve_with_fallback(t, t_next, lam, 0)
        lam, residual = sample.lam, sample.residual
        t = t_next
    landing_residual = abs(trace_dynamic_ray(lam, s, LANDING_GRID[-1], config).point)
    return PsfParameter(
        lam=lam,
        address_class=cls,
        l=cls.preperiod,
        k=cls.period,
        orbit_period=cls.kneading_period,
        newton_residual=residual,
        landing_gap=gaps[-1] if gaps else math.inf,
        dynamic_landing_residual=landing_residual,
        gap_history=tuple(gaps),
        refined=False,
    )


def _verify_orbit_shape(lam, l, k_orbit, tol=1e-12, floor=1e-8):
    orb = singular_orbit(lam, l + k_orbit)
    if len(orb.points) < l + k_orbit + 1:
        raise PipelineError("verify-preperiodicity", "orbit overflowed")
    if abs(orb.points[l + k_orbit] - orb.points[l]) >= tol:
        raise PipelineError(
            "verify-preperiodicity",
            "|z_{l+k} - z_l| = %g" % abs(orb.points[l + k_orbit] - orb.points[l]))
    for kk in (d for d in range(1, k_orbit) if k_orbit % d == 0):
        if abs(orb.points[l + kk] - orb.points[l]) < floor:
            raise PipelineError("verify-preperiodicity", "true period divides %d" % kk)
    for ll in range(l):
        if abs(orb.points[ll + k_orbit] - orb.points[ll]) < floor:
            raise PipelineError("verify-preperiodicity", "true preperiod is <= %d" % ll)


def _verify_dynamic_landing(lam, s, config):
    values = [abs(trace_dynamic_ray(lam, s, t, config).point) for t in LANDING_GRID]
    for a, b in zip(values, values[1:]):
        if b > a + 1e-9:
            raise PipelineError(
                "verify-dynamics",
                "|g_s(t)| not decreasing towards landing: %s" % values)
    if not values[-1] < 0.05:
        raise PipelineError(
            "verify-dynamics", "|g_s(0.001)| = %g, ray does not land at 0" % values[-1])
    return values[-1]


def find_lambda(s, schedule=DEFAULT_SCHEDULE, config=DEFAULT_TRACE):
    """Locate the unique postsingularly finite parameter for the class of s.

    Pipeline: enumerate the class, land the parameter ray, refine with
    Newton on the orbit condition, then verify preperiodicity, dynamic
    landing of the ray at every class member, and the convergence class.
    The orbit period used for refinement is the kneading period k', which
    is the true period of the singular orbit (k' < k for satellite
    classes).
    """
    try:
        landing = land_parameter_ray(s, schedule, config)
    except PsfexpError as exc:
        if isinstance(exc, (FirstEntryNonzeroError, PeriodicAddressError)):
            raise
        raise PipelineError("continuation", str(exc)) from exc
    cls = landing.address_class
    l, k_orbit = cls.preperiod, cls.kneading_period
    try:
        lam = misiurewicz_newton(landing.lam, l, k_orbit)
    except PsfexpError as exc:
        raise PipelineError("newton", str(exc)) from exc
    _verify_orbit_shape(lam, l, k_orbit)
    landing_residual = _verify_dynamic_landing(lam, s, config)
    fate = classify_convergence(lam)
    if fate.tag != EVENTUALLY_CONSTANT:
        raise PipelineError(
            "verify-convergence", "classifier reports %s at %s" % (fate.tag, lam))
    orb = singular_orbit(lam, l + k_orbit)
    residual = abs(orb.points[l + k_orbit] - orb.points[l])
    return PsfParameter(
        lam=lam,
        address_class=cls,
        l=cls.preperiod,
        k=cls.period,
        orbit_period=k_orbit,
        newton_residual=residual,
        landing_gap=landing.landing_gap,
        dynamic_landing_residual=landing_residual,
        gap_history=landing.gap_history,
        refined=True,
    )


def distinctness_check(classes, schedule=DEFAULT_SCHEDULE, config=DEFAULT_TRACE):
    """Locate the parameter of each class and verify pairwise separation.

    Classes must be pairwise non-equivalent; the report carries the full
    distance matrix and flags any collision below the separation floor.
    """
    reps = [cls.representative for cls in classes]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if are_equivalent(reps[i], reps[j]):
                raise ValueError(
                    "classes %d and %d are equivalent" % (i, j))
    params = [find_lambda(rep, schedule, config) for rep in reps]
    n = len(params)
    matrix = [[abs(params[i].lam - params[j].lam) for j in range(n)] for i in range(n)]
    min_gap = min((matrix[i][j] for i in range(n) for j in range(i + 1, n)),
                  default=math.inf)
    collisions = [(i, j) for i in range(n) for j in range(i + 1, n)
                  if matrix[i][j] <= DISTINCTNESS_GAP]
    return {
        "lambdas": [p.lam for p in params],
        "matrix": matrix,
        "min_gap": min_gap,
        "collisions": collisions,
        "ok": not collisions,
    }


@dataclass(frozen=True)
class ParameterScan:
    """Grid of convergence classes over a rectangle of parameters."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int
    max_iter: int
    grid: tuple  # grid[j][i] is the class at pixel (i, j), row-major

    def pixel_center(self, i, j):
        re = self.re_min + (i + 0.5) * (self.re_max - self.re_min) / self.width
        im = self.im_min + (j + 0.5) * (self.im_max - self.im_min) / self.height
        return complex(re, im)

    def rows(self):
        for j in range(self.height):
            for i in range(self.width):
                lam = self.pixel_center(i, j)
                yield (lam.real, lam.imag, self.grid[j][i].tag)

    def counts(self):
        out = {}
        for j in range(self.height):
            for i in range(self.width):
                tag = self.grid[j][i].tag
                out[tag] = out.get(tag, 0) + 1
        return out


def scan_parameter_plane(rect, resolution, max_iter=64, threads=1):
    """Classify the singular orbit at every pixel center of a grid.

    rect is (re_min, re_max, im_min, im_max); resolution is an int or a
    (width, height) pair.  The origin, if hit exactly, is tagged undecided
    (lambda = 0 is not a parameter).  Output is independent of the thread
    count.
    """
    re_min, re_max, im_min, im_max = map(float, rect)
    if not (re_min < re_max and im_min < im_max):
        raise ValueError("empty scan rectangle")
    if isinstance(resolution, int):
        width = height = resolution
    else:
        width, height = resolution
    dre = (re_max - re_min) / width
    dim = (im_max - im_min) / height

    def _row(j):
        im = im_min + (j + 0.5) * dim
        return tuple(
            classify_convergence(complex(re_min + (i + 0.5) * dre, im), max_iter)
            for i in range(width))

    if threads <= 1:
        grid = tuple(_row(j) for j in range(height))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            grid = tuple(pool.map(_row, range(height)))
    return ParameterScan(re_min=re_min, re_max=re_max, im_min=im_min, im_max=im_max,
                         width=width, height=height, max_iter=max_iter, grid=grid)


def address_search(lam, l, k, entry_bound, schedule=DEFAULT_SCHEDULE,
                   config=DEFAULT_TRACE, match_tol=DISTINCTNESS_GAP):
    """Brute-force inversion: all canonical addresses of shape (l, k) with
    first entry 0 and bounded entries whose located parameter matches lam.

    Candidates are grouped into equivalence classes first, so the landing
    pipeline runs once per class; the result is therefore closed under
    equivalence by construction.
    """
    candidates = enumerate_addresses(l, k, entry_bound)
    if len(candidates) > ADDRESS_SEARCH_CAP:
        raise SearchLimitError(
            "address search over %d candidates exceeds cap %d"
            % (len(candidates), ADDRESS_SEARCH_CAP))
    matches = []
    done = set()
    for s in candidates:
        if s in done:
            continue
        cls = equivalence_class(s)
        done.update(cls.members)
        try:
            located = find_lambda(cls.representative, schedule, config)
        except PsfexpError:
            continue
        if abs(located.lam - lam) < match_tol:
            matches.extend(cls.members)
    matches.sort(key=lambda a: (a.preperiod, a.period))
    return matches
