"""Self-maps, forward orbits and Denjoy-Wolff type classification.

A self-map is elliptic (interior fixed point), hyperbolic (boundary fixed
point with derivative limit c in (0,1)), or parabolic (derivative limit 1);
parabolic maps split further by whether the hyperbolic step between
consecutive orbit points tends to zero.  All step computations happen in
half-plane coordinates regardless of the map's native domain: the disk
formula loses digits near the boundary, exactly where orbits accumulate.

Classification from finitely many iterates is necessarily heuristic; every
threshold lives in ClassifyConfig and an undecided budget ends in an
explicit InconclusiveError, never a guessed label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dsl import ParsedMap, SelfMapReport, check_selfmap
from .errors import (
    AutomorphismError,
    DomainError,
    InconclusiveError,
    InconsistentSeedsError,
    OrbitPrecisionError,
    PrecisionError,
    UnstableLimitError,
)
from .geometry import (
    INFINITY,
    MoebiusMap,
    as_complex,
    disk_to_halfplane,
    halfplane_to_disk,
    hyp_dist,
    is_infinity,
)

KINDS = (
    "elliptic-attracting",
    "elliptic-superattracting",
    "hyperbolic",
    "parabolic-nonzero-step",
    "parabolic-zero-step",
)

STEP_SLACK = 1e-12  # Schwarz monotonicity slack for computed steps


@dataclass(frozen=True)
class SelfMap:
    """A validated analytic self-map of the disk or the upper half-plane."""

    parsed: ParsedMap
    report: SelfMapReport

    @classmethod
    def from_source(cls, src: str, domain: str, samples: int = 200) -> "SelfMap":
        parsed = ParsedMap.from_source(src, domain)
        return cls(parsed, check_selfmap(parsed, samples=samples))

    @classmethod
    def from_parsed(cls, parsed: ParsedMap, samples: int = 200) -> "SelfMap":
        return cls(parsed, check_selfmap(parsed, samples=samples))

    @property
    def domain(self) -> str:
        return self.parsed.domain

    def __call__(self, z):
        return self.parsed(z)

    def derivative_at(self, z):
        return self.parsed.derivative_at(z)

    def source(self) -> str:
        return self.parsed.source()

    def to_view(self, z):
        """Native point -> half-plane view coordinates."""
        return z if self.domain == "halfplane" else disk_to_halfplane(z)

    def from_view(self, z):
        """Half-plane view -> native coordinates (INFINITY -> 1 on the disk)."""
        return z if self.domain == "halfplane" else halfplane_to_disk(z)


@dataclass(frozen=True)
class Orbit:
    """Cached forward iterates with per-step hyperbolic diagnostics.

    ``points`` are native-domain iterates; ``xs``/``ys`` are the half-plane
    view coordinates in which ``steps[n] = hyp_dist(z_n, z_{n+1})`` is
    computed.  ``l_inf_estimate`` extrapolates the limit of ``ys`` (math.inf
    when the heights look divergent, None when they are not monotone).
    """

    z0: complex
    points: tuple
    xs: tuple
    ys: tuple
    steps: tuple
    l_inf_estimate: float | None
    escaped: bool = False


class _ViewOrbit:
    """Growable orbit kept both in native and half-plane view coordinates.

    With ``strict_steps`` a violation of Schwarz step monotonicity raises
    immediately; otherwise the first violating index is recorded (disk-native
    orbits iterated near the boundary inject cancellation noise into the
    steps long before the height ratios degrade) and iteration continues.
    """

    def __init__(self, m: SelfMap, z0, magnitude_guard: float = 1e150,
                 strict_steps: bool = True):
        self.m = m
        self.guard = magnitude_guard
        self.strict_steps = strict_steps
        z = as_complex(z0)
        if m.domain == "halfplane" and z.imag <= 0:
            raise DomainError("orbit seed must be interior", witness=z)
        if m.domain == "disk" and abs(z) >= 1:
            raise DomainError("orbit seed must be interior", witness=z)
        w = m.to_view(z)
        if is_infinity(w) or w.imag <= 0:
            raise DomainError("orbit seed maps outside the half-plane view", witness=z)
        self.native = [z]
        self.view = [w]
        self.steps: list[float] = []
        self.escaped = False
        self.escape_reason = ""
        self.step_violation_index: int | None = None

    def __len__(self) -> int:
        return len(self.native) - 1  # number of completed iterations

    def grow(self, target: int) -> None:
        """Extend to ``target`` iterations, truncating cleanly on escape."""
        while len(self) < target and not self.escaped:
            z = self.m(self.native[-1])
            if is_infinity(z):
                self.escaped, self.escape_reason = True, "pole"
                return
            interior = (z.imag > 0.0) if self.m.domain == "halfplane" else (abs(z) < 1.0)
            if not interior:
                self.escaped, self.escape_reason = True, "left domain"
                return
            w = self.m.to_view(z)
            if is_infinity(w) or w.imag <= 0.0:
                self.escaped, self.escape_reason = True, "view overflow"
                return
            if abs(w) > self.guard:
                self.escaped, self.escape_reason = True, "magnitude guard"
                return
            s = hyp_dist(self.view[-1], w)
            if self.steps and s > self.steps[-1] + STEP_SLACK:
                if self.strict_steps:
                    raise PrecisionError(
                        f"hyperbolic step increased at n={len(self)} "
                        f"({self.steps[-1]:.3e} -> {s:.3e}); precision exhausted"
                    )
                if self.step_violation_index is None:
                    self.step_violation_index = len(self)
            self.native.append(z)
            self.view.append(w)
            self.steps.append(s)

    def snapshot(self) -> Orbit:
        xs = tuple(w.real for w in self.view)
        ys = tuple(w.imag for w in self.view)
        return Orbit(
            z0=self.native[0],
            points=tuple(self.native),
            xs=xs,
            ys=ys,
            steps=tuple(self.steps),
            l_inf_estimate=_height_limit_estimate(ys),
            escaped=self.escaped,
        )


def _height_limit_estimate(ys) -> float | None:
    """Extrapolated limit of the orbit heights, from dyadic increment blocks."""
    n = len(ys) - 1
    if n < 8:
        return None
    if any(ys[k + 1] < ys[k] for k in range(n)):
        return None
    if ys[n] > 1e6:
        return math.inf
    a = ys[n // 2] - ys[n // 4]
    b = ys[n] - ys[n // 2]
    if b <= 0.0:
        return float(ys[n])
    ratio = a / b
    if ratio <= 1.05:
        return math.inf
    return float(ys[n] + b / (ratio - 1.0))


def extend_orbit(m: SelfMap, z0, n: int, cap: int = 10_000,
                 magnitude_guard: float = 1e150) -> Orbit:
    """Forward orbit of length n (points[k] = k-th iterate of z0).

    Raises OrbitPrecisionError when the iterates leave the domain
    numerically before reaching n; the error carries the last valid index.
    """
    if n < 0:
        raise ValueError("orbit length must be >= 0")
    if n > cap:
        raise ValueError(f"orbit length {n} exceeds the cap {cap}")
    orbit = _ViewOrbit(m, z0, magnitude_guard)
    orbit.grow(n)
    if orbit.escaped and len(orbit) < n:
        raise OrbitPrecisionError(
            f"orbit {orbit.escape_reason} numerically", last_valid_index=len(orbit)
        )
    return orbit.snapshot()


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifyConfig:
    max_iter: int = 10_000
    min_iter: int = 256
    hyperbolic_delta: float = 1e-3     # A > 1 + delta declares hyperbolic
    plateau_ratio: float = 0.01        # dyadic step drop below this is a plateau
    zero_step_abs: float = 1e-6
    zero_step_rel: float = 0.01
    boundary_margin: float = 1e-6      # interior/boundary split in disk coords
    fixed_point_tol: float = 1e-10
    superattracting_tol: float = 1e-9
    magnitude_guard: float = 1e150
    dw_inf_threshold: float = 1e3      # |view iterate| beyond this suggests DW at infinity
    dw_agreement_tol: float = 1e-2     # cross-seed DW agreement, disk metric


@dataclass(frozen=True)
class Classification:
    """Outcome of the type decision for one self-map.

    ``dw_point`` is in native coordinates (INFINITY for the boundary point at
    infinity of the half-plane).  ``multiplier`` is c = 1/A for hyperbolic
    maps, |phi'(fixed point)| for elliptic ones and 1.0 for parabolic.
    ``dw_view`` is the Denjoy-Wolff point seen in half-plane view
    coordinates; the renormalization engines use it to move it to infinity.
    """

    kind: str
    dw_point: object
    multiplier: float | None
    A: float | None
    s_inf: float
    orientation_sign: int | None
    confidence: dict = field(repr=False, default_factory=dict)
    dw_view: object = field(repr=False, default=None)

    @property
    def is_elliptic(self) -> bool:
        return self.kind.startswith("elliptic")


def _newton_fixed_point(m: SelfMap, start: complex, tol: float,
                        max_steps: int = 60) -> complex | None:
    p = start
    bound = 10.0 if m.domain == "halfplane" else 1.5
    for _ in range(max_steps):
        fp = m(p)
        dp = m.derivative_at(p)
        if is_infinity(fp) or is_infinity(dp):
            return None
        r = fp - p
        if abs(r) < tol * (1.0 + abs(p)):
            return p
        denom = dp - 1.0
        if abs(denom) < 1e-14:
            return None
        p = p - r / denom
        if not (math.isfinite(p.real) and math.isfinite(p.imag)) or abs(p) > bound:
            return None
    fp = m(p)
    if not is_infinity(fp) and abs(fp - p) < tol * (1.0 + abs(p)):
        return p
    return None


def _interiority(m: SelfMap, p: complex, margin: float) -> str:
    """'interior', 'boundary' or 'outside' in the native domain."""
    if m.domain == "disk":
        r = abs(p)
        if r < 1.0 - margin:
            return "interior"
        return "boundary" if r < 1.0 + margin else "outside"
    if p.imag > margin:
        return "interior"
    return "boundary" if abs(p.imag) <= margin * (1.0 + abs(p)) else "outside"


def _tail_ratio(ys, lo: int, hi: int) -> float:
    """Geometric mean of y_{n+1}/y_n over [lo, hi)."""
    return math.exp(math.log(ys[hi] / ys[lo]) / (hi - lo))


@dataclass
class _SeedResult:
    kind: str
    dw_native: object
    dw_view: object
    multiplier: float | None
    A: float | None
    s_inf: float
    orientation: int | None
    diagnostics: dict


def _classify_seed(m: SelfMap, seed, cfg: ClassifyConfig) -> _SeedResult:
    orbit = _ViewOrbit(m, seed, cfg.magnitude_guard, strict_steps=False)
    stage = cfg.min_iter
    newton_boundary: complex | None = None
    diag: dict = {"seed": seed}
    while True:
        orbit.grow(min(stage, cfg.max_iter))
        n = len(orbit)
        diag["iterations"] = n
        diag["escaped"] = orbit.escaped
        if orbit.escaped:
            diag["escape_reason"] = orbit.escape_reason
        if orbit.step_violation_index is not None:
            diag["step_violation"] = orbit.step_violation_index

        # Elliptic attempt: the tail settles inside, Newton pins the fixed point.
        if n >= 8:
            tail_diff = abs(orbit.native[-1] - orbit.native[-2])
            if tail_diff < 1e-5:
                p = _newton_fixed_point(m, orbit.native[-1], cfg.fixed_point_tol)
                if p is not None:
                    where = _interiority(m, p, cfg.boundary_margin)
                    if where == "interior":
                        dp = m.derivative_at(p)
                        mult = abs(dp) if not is_infinity(dp) else math.inf
                        if mult < 1.0:
                            kind = (
                                "elliptic-superattracting"
                                if mult < cfg.superattracting_tol
                                else "elliptic-attracting"
                            )
                            diag["fixed_point_residual"] = abs(m(p) - p)
                            return _SeedResult(
                                kind=kind,
                                dw_native=p,
                                dw_view=m.to_view(p),
                                multiplier=mult,
                                A=(1.0 / mult) if mult > 0 else None,
                                s_inf=0.0,
                                orientation=None,
                                diagnostics=diag,
                            )
                    elif where == "boundary":
                        newton_boundary = p

        decided = _boundary_decision(m, orbit, cfg, newton_boundary, diag)
        if decided is not None:
            return decided

        if orbit.escaped or stage >= cfg.max_iter:
            raise InconclusiveError(
                "classification budget exhausted before any criterion held",
                diagnostics=diag,
            )
        stage *= 2


def _boundary_decision(m, orbit, cfg, newton_boundary, diag):
    n = len(orbit)
    if n < 32:
        return None
    view = orbit.view
    steps = orbit.steps

    # Locate the Denjoy-Wolff point in view coordinates.
    dw_view = None
    mags = [abs(view[k]) for k in range(3 * n // 4, n + 1)]
    if mags[-1] > cfg.dw_inf_threshold and all(
        mags[k + 1] >= mags[k] * 0.99 for k in range(len(mags) - 1)
    ):
        dw_view = INFINITY
    else:
        tail_y = [view[k].imag for k in range(3 * n // 4, n + 1)]
        tail_x = [view[k].real for k in range(3 * n // 4, n + 1)]
        x_spread = max(tail_x) - min(tail_x)
        if tail_y[-1] < 0.05 and tail_y[-1] <= tail_y[0] and x_spread < 0.05 * (1.0 + abs(tail_x[-1])):
            p = tail_x[-1]
            if newton_boundary is not None:
                q = m.to_view(newton_boundary)
                if not is_infinity(q) and abs(q - p) < 0.2 * (1.0 + abs(p)):
                    p = q.real
            dw_view = complex(p, 0.0)
    if dw_view is None:
        return None

    # Move the Denjoy-Wolff point to infinity and read off heights there.
    if is_infinity(dw_view):
        conj = None
        zs = view
    else:
        conj = MoebiusMap(0.0, -1.0, 1.0, -dw_view)  # z -> -1/(z - p)
        zs = []
        for w in view:
            u = conj.apply(w)
            if is_infinity(u) or u.imag <= 0:
                return None
            zs.append(u)
    ys = [w.imag for w in zs]
    xs = [w.real for w in zs]

    lo, mid, hi = 3 * n // 4, 7 * n // 8, n
    if ys[lo] <= 0 or ys[hi] <= 0:
        return None
    A_est = _tail_ratio(ys, lo, hi)
    A_spread = abs(_tail_ratio(ys, lo, mid) - _tail_ratio(ys, mid, hi))
    diag.update({"A_estimate": A_est, "A_spread": A_spread})

    dw_native = INFINITY if is_infinity(dw_view) else m.from_view(dw_view)
    if m.domain == "disk" and is_infinity(dw_view):
        dw_native = 1.0 + 0.0j  # Cayley image of infinity
    orientation = 1 if xs[hi] >= 0 else -1

    if A_est > 1.0 + cfg.hyperbolic_delta:
        # A zero-step orbit with y_n ~ n also shows A_est > 1 at small n, but
        # its excess A_est - 1 halves when the window doubles; a genuinely
        # hyperbolic ratio has a stable excess.  Grow until that stabilizes.
        excess_hi = A_est - 1.0
        excess_lo = _tail_ratio(ys, max(1, 3 * n // 8), n // 2) - 1.0
        diag["A_excess_ratio"] = excess_lo / excess_hi if excess_hi > 0 else math.inf
        if not (0.0 < excess_lo / excess_hi < 1.4):
            return None  # ratio still drifting toward 1; grow or give up
        return _SeedResult(
            kind="hyperbolic",
            dw_native=dw_native,
            dw_view=dw_view,
            multiplier=1.0 / A_est,
            A=A_est,
            s_inf=steps[-1],
            orientation=orientation,
            diagnostics=diag,
        )

    # Parabolic: plateau of the step sequence vs decay to zero.
    s0, s_half, s_quarter, s_last = steps[0], steps[n // 2 - 1], steps[n // 4 - 1], steps[-1]
    drop_recent = (s_half - s_last) / s_half if s_half > 0 else 0.0
    drop_earlier = (s_quarter - s_half) / s_quarter if s_quarter > 0 else 0.0
    diag.update({"step_first": s0, "step_last": s_last,
                 "plateau_drop": drop_recent, "plateau_drop_prev": drop_earlier})
    zero_floor = max(cfg.zero_step_abs, cfg.zero_step_rel * s0)
    if (drop_recent < cfg.plateau_ratio and drop_earlier < cfg.plateau_ratio
            and s_last > 10.0 * cfg.zero_step_abs):
        return _SeedResult(
            kind="parabolic-nonzero-step",
            dw_native=dw_native,
            dw_view=dw_view,
            multiplier=1.0,
            A=1.0,
            s_inf=s_last,
            orientation=orientation,
            diagnostics=diag,
        )
    if s_last < zero_floor:
        return _SeedResult(
            kind="parabolic-zero-step",
            dw_native=dw_native,
            dw_view=dw_view,
            multiplier=1.0,
            A=1.0,
            s_inf=0.0,
            orientation=orientation,
            diagnostics=diag,
        )
    return None


def _dw_close(m: SelfMap, a, b, tol: float) -> bool:
    if is_infinity(a) or is_infinity(b):
        ca = 1.0 + 0.0j if is_infinity(a) else halfplane_to_disk(m.to_view(a))
        cb = 1.0 + 0.0j if is_infinity(b) else halfplane_to_disk(m.to_view(b))
        return abs(ca - cb) < tol
    da = a if m.domain == "disk" else halfplane_to_disk(a)
    db = b if m.domain == "disk" else halfplane_to_disk(b)
    return abs(da - db) < tol


def classify(m: SelfMap, seeds, cfg: ClassifyConfig | None = None) -> Classification:
    """Decide the dynamical type of m from one or more interior seeds.

    All seeds must agree on the type and the Denjoy-Wolff point; otherwise
    InconsistentSeedsError is raised.  An automorphism-flagged map is
    rejected up front.  Budget exhaustion raises InconclusiveError rather
    than returning a doubtful label.
    """
    cfg = cfg or ClassifyConfig()
    seeds = list(seeds)
    if not seeds:
        raise ValueError("classify needs at least one seed")
    if m.report.likely_automorphism:
        raise AutomorphismError(
            "map looks like an automorphism (Schwarz-Pick quotient is 1 everywhere)"
        )
    results = [_classify_seed(m, seed, cfg) for seed in seeds]
    first = results[0]
    for other in results[1:]:
        if other.kind != first.kind:
            raise InconsistentSeedsError(
                f"seeds disagree on the type: {first.kind} vs {other.kind}"
            )
        if not _dw_close(m, first.dw_native, other.dw_native, cfg.dw_agreement_tol):
            raise InconsistentSeedsError("seeds disagree on the Denjoy-Wolff point")
    confidence = {
        "seeds": [r.diagnostics for r in results],
        "agreement": len(results),
    }
    return Classification(
        kind=first.kind,
        dw_point=first.dw_native,
        multiplier=first.multiplier,
        A=first.A,
        s_inf=first.s_inf,
        orientation_sign=first.orientation,
        confidence=confidence,
        dw_view=first.dw_view,
    )


def multiplier_at_infinity(m: SelfMap, spread_tol: float = 1e-3) -> float:
    """Dilation coefficient at infinity, sampled along the imaginary axis.

    Evaluates phi(iy)/(iy) for y = 10^2 .. 10^8 and returns the stabilized
    tail value; the spread over the last three decades must stay below
    spread_tol, and the value is cross-checked against the orbit height
    ratio.  Only meaningful for half-plane maps whose Denjoy-Wolff point is
    at infinity.
    """
    if m.domain != "halfplane":
        raise DomainError("multiplier_at_infinity needs a half-plane map")
    values = []
    for k in range(2, 9):
        z = 1j * (10.0 ** k)
        w = m(z)
        if is_infinity(w):
            raise UnstableLimitError("map blows up along the imaginary axis", math.inf)
        values.append(w / z)
    tail = values[-3:]
    spread = max(abs(a - b) for a in tail for b in tail)
    if spread > spread_tol:
        raise UnstableLimitError("phi(iy)/(iy) did not stabilize", spread)
    a_axis = (sum(tail) / len(tail)).real

    orbit = _ViewOrbit(m, 1j, strict_steps=False)
    orbit.grow(4000)
    n = len(orbit)
    if n >= 64:
        ys = [w.imag for w in orbit.view]
        a_orbit = _tail_ratio(ys, 3 * n // 4, n)
        if abs(a_axis - a_orbit) > spread_tol * max(1.0, abs(a_axis)):
            raise UnstableLimitError(
                f"axis estimate {a_axis:.6f} disagrees with orbit estimate {a_orbit:.6f}",
                abs(a_axis - a_orbit),
            )
    return a_axis
