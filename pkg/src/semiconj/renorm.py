"""Renormalization engines producing semiconjugations onto model maps.

For a half-plane self-map with Denjoy-Wolff point at infinity and orbit
z_n = x_n + i y_n, the normalized iterates

    g_n(z) = (phi_n(z) - x_n) / y_n

converge locally uniformly for hyperbolic and parabolic non-zero-step maps
to a self-map g of H with g(z0) = i solving g(phi(z)) = A g(z) + b, where
A = lim y_{n+1}/y_n and b = lim (x_{n+1} - x_n)/y_n.  For parabolic
zero-step maps that limit degenerates and the right renormalization is
planar:

    h_n(z) = (phi_n(z) - z_n) / (z_{n+1} - z_n)

which converges to an analytic h: H -> C with h(z0) = 0 solving
h(phi(z)) = h(z) + 1.

Convergence is detected by a Cauchy criterion in the codomain's natural
metric (hyperbolic for H-valued g, Euclidean for C-valued h): the limit
theorems carry no rate, so we require `stability` consecutive gaps below
`tol`.  Both engines track the significant digits lost to the subtraction
of growing orbit data and abort with PrecisionError rather than return
garbage.

Maps whose Denjoy-Wolff point is elsewhere are conjugated first: disk maps
through the Cayley transform, finite boundary fixed points by z -> -1/(z - p).
Both moves are Moebius, so grids and base points transport exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .dsl import evaluate_array
from .dynamics import Classification, ClassifyConfig, SelfMap, classify
from .errors import (
    CannotStandardizeError,
    DomainError,
    ModelMismatchError,
    NonConvergenceError,
    PrecisionError,
    ResidualError,
)
from .geometry import (
    INFINITY,
    HyperbolicDisk,
    MoebiusMap,
    hyp_dist,
    is_infinity,
)
from .sampling import halfplane_lattice

# Cayley transform disk -> half-plane as a Moebius map: w -> i(1+w)/(1-w)
_CAYLEY_DISK_TO_H = MoebiusMap(1j, 1j, -1.0, 1.0)


@dataclass(frozen=True)
class RenormConfig:
    tol: float = 1e-9            # Cauchy gap tolerance (codomain metric)
    stability: int = 5           # consecutive small gaps required
    max_iter: int = 200_000
    res_tol: float | None = None  # default 1e-6 (half-plane) / 1e-8 (planar)
    base_tol: float | None = None  # default 1e-9 (half-plane) / 1e-12 (planar)
    min_digits: float = 6.0      # abort below this many estimated digits
    grid_size: int = 5
    grid_radius: float = 2.0
    magnitude_guard: float = 1e150


@dataclass(frozen=True)
class UnivalenceRegion:
    """Union of orbit-centered disks where the limit map should be injective.

    Half-plane model: hyperbolic disks of radius rho around z_n.  Planar
    model: Euclidean disks z_n + (z_{n+1} - z_n) rho D.  Indices run from
    start_index over `count` orbit positions.
    """

    kind: str = "orbit-disks"
    rho: float = 1.0
    start_index: int = 16
    count: int = 8

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("region radius must be positive")
        if self.start_index < 0 or self.count < 1:
            raise ValueError("bad region indices")


class _Engine:
    """Shared iteration loop for both renormalizations.

    Points are iterated in native coordinates by the map itself and
    renormalized through the (Moebius) transport into the coordinates where
    the Denjoy-Wolff point sits at infinity.
    """

    def __init__(self, m: SelfMap, classification: Classification, z0,
                 cfg: RenormConfig, kind: str):
        self.m = m
        self.classification = classification
        self.cfg = cfg
        self.kind = kind  # "halfplane" | "planar"
        transport = None
        if m.domain == "disk":
            transport = _CAYLEY_DISK_TO_H
        dwv = classification.dw_view
        if dwv is not None and not is_infinity(dwv):
            pin = MoebiusMap(0.0, -1.0, 1.0, -dwv)  # z -> -1/(z - p)
            transport = pin if transport is None else pin.compose(transport)
        self.transport = transport
        self.z0 = complex(z0)
        w0 = self._to_model(self.z0)
        self._orbit_native = [self.z0]
        self._orbit_model = [w0]

    # -- coordinates -------------------------------------------------------

    def _to_model(self, z: complex) -> complex:
        w = z if self.transport is None else self.transport.apply(z)
        if is_infinity(w) or w.imag <= 0:
            raise PrecisionError(f"point {z} left the half-plane view")
        return w

    def from_model(self, w: complex) -> complex:
        if self.transport is None:
            return w
        return self.transport.inverse().apply(w)

    # -- orbit cache -------------------------------------------------------

    def _ensure_orbit(self, n: int) -> None:
        while len(self._orbit_native) <= n:
            z = self.m(self._orbit_native[-1])
            if is_infinity(z):
                raise PrecisionError("base orbit hit a pole")
            w = self._to_model(z)
            if abs(w) > self.cfg.magnitude_guard:
                raise PrecisionError(
                    f"base orbit magnitude guard tripped at n={len(self._orbit_native)}"
                )
            self._orbit_native.append(z)
            self._orbit_model.append(w)

    def orbit_model_point(self, n: int) -> complex:
        self._ensure_orbit(n)
        return self._orbit_model[n]

    # -- renormalization ---------------------------------------------------

    def _renorm(self, w_model: complex, n: int) -> complex:
        zn = self._orbit_model[n]
        if self.kind == "halfplane":
            return (w_model - zn.real) / zn.imag
        self._ensure_orbit(n + 1)
        return (w_model - zn) / (self._orbit_model[n + 1] - zn)

    def _metric(self, a: complex, b: complex) -> float:
        if self.kind == "halfplane":
            return hyp_dist(a, b)
        return abs(a - b)

    def _digits_left(self, w_model: complex, value: complex, n: int) -> float:
        zn = self._orbit_model[n]
        scale = zn.imag if self.kind == "halfplane" else abs(self._orbit_model[n + 1] - zn)
        denom = max(abs(value), 1e-3) * scale
        lost = math.log10(max(abs(w_model), 1.0) / denom) if denom > 0 else math.inf
        return 15.95 - max(0.0, lost)

    def _advance_array(self, pts: np.ndarray, n: int) -> np.ndarray:
        out = evaluate_array(self.m.parsed.expr, pts)
        if not np.isfinite(out).all():
            raise PrecisionError(f"probe orbit hit a pole or overflowed at n={n}")
        if self.m.domain == "halfplane":
            bad = out.imag <= 0
        else:
            bad = np.abs(out) >= 1
        if bad.any():
            raise PrecisionError(f"probe orbit left the domain numerically at n={n}")
        return out

    def _models_array(self, pts: np.ndarray) -> np.ndarray:
        if self.transport is None:
            w = pts
        else:
            t = self.transport
            with np.errstate(all="ignore"):
                w = (t.a * pts + t.b) / (t.c * pts + t.d)
        if not np.isfinite(w).all() or (w.imag <= 0).any():
            raise PrecisionError("probe points left the half-plane view")
        if np.abs(w).max() > self.cfg.magnitude_guard:
            raise PrecisionError("probe magnitude guard tripped")
        return w

    def _renorm_array(self, w: np.ndarray, n: int) -> np.ndarray:
        zn = self._orbit_model[n]
        if self.kind == "halfplane":
            return (w - zn.real) / zn.imag
        self._ensure_orbit(n + 1)
        return (w - zn) / (self._orbit_model[n + 1] - zn)

    def _metric_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == "halfplane":
            u = np.abs(a - b) ** 2 / (2.0 * a.imag * b.imag)
            return np.log1p(u + np.sqrt(u * (u + 2.0)))
        return np.abs(a - b)

    def run(self, points_native, stop_check=None) -> tuple[list[complex], int, float, dict]:
        """Iterate all points together until the Cauchy criterion holds.

        Returns (values, iterations_used, window_gap, diagnostics) where
        window_gap is the sup over points of the metric distance between the
        values `stability` iterations apart at the stopping time.

        ``stop_check(vals, n)``, when given, gates the stop after Cauchy
        stability: slowly converging maps (values accurate to O(1/n)) may
        need to run past gap stability before a residual criterion holds.
        It is polled on a sparse schedule and must return True to stop.
        """
        cfg = self.cfg
        pts = np.asarray([complex(p) for p in points_native], dtype=complex)
        self._ensure_orbit(1)
        history: list[np.ndarray] = []
        gap_trace: list[float] = []
        consecutive = 0
        n = 0
        vals = self._renorm_array(self._models_array(pts), n)
        history.append(vals)
        min_digits = math.inf
        next_poll = 0
        stop_info = True if stop_check is None else False
        while True:
            pts = self._advance_array(pts, n + 1)
            n += 1
            self._ensure_orbit(n)
            models = self._models_array(pts)
            vals = self._renorm_array(models, n)
            zn = self._orbit_model[n]
            scale = zn.imag if self.kind == "halfplane" else abs(self._orbit_model[n + 1] - zn)
            denom = np.maximum(np.abs(vals), 1e-3) * scale
            lost = np.log10(np.maximum(np.abs(models), 1.0) / denom)
            min_digits = min(min_digits, float(15.95 - max(0.0, lost.max())))
            if min_digits < cfg.min_digits:
                raise PrecisionError(
                    f"estimated precision fell to {min_digits:.1f} digits at n={n} "
                    "before convergence"
                )
            gap = float(self._metric_array(vals, history[-1]).max())
            gap_trace.append(gap)
            consecutive = consecutive + 1 if gap < cfg.tol else 0
            history.append(vals)
            if len(history) > cfg.stability + 1:
                history.pop(0)
            if consecutive >= cfg.stability:
                if stop_check is not None and not stop_info and n >= next_poll:
                    stop_info = stop_check(vals, n)
                    next_poll = n + max(32, n // 16)
                if stop_info:
                    window_gap = float(self._metric_array(vals, history[0]).max())
                    diag = {
                        "min_digits": min_digits,
                        "last_gap": gap,
                        "error_estimate": _error_estimate(gap_trace, n),
                    }
                    return [complex(v) for v in vals], n, window_gap, diag
            if n >= cfg.max_iter:
                if consecutive >= cfg.stability:
                    raise ResidualError(
                        "Cauchy criterion held but the functional-equation "
                        f"residual stayed above tolerance through n={n}",
                        gap,
                    )
                raise NonConvergenceError(
                    f"no convergence within {cfg.max_iter} iterations "
                    f"(last gap {gap:.3e})",
                    gap_trace=tuple(gap_trace[-20:]),
                )

    def evaluate(self, z) -> complex:
        vals, _, _, _ = self.run([z])
        return vals[0]

    def evaluate_many(self, zs) -> list[complex]:
        if not zs:
            return []
        vals, _, _, _ = self.run(list(zs))
        return vals

    def evaluate_model_point(self, w_model: complex) -> complex:
        return self.evaluate(self.from_model(w_model))

    def evaluate_model_points(self, ws) -> list[complex]:
        return self.evaluate_many([self.from_model(w) for w in ws])


def _error_estimate(gap_trace: list[float], n: int) -> float:
    """Crude distance-to-limit bound from the gap decay profile.

    Geometric-looking tails sum to gap * r/(1-r); slower tails are treated
    as harmonic-like, giving roughly gap * n.
    """
    if not gap_trace:
        return 0.0
    gap = gap_trace[-1]
    if len(gap_trace) >= 8:
        a, b = gap_trace[-8], gap_trace[-1]
        if a > 0 and b > 0:
            r = (b / a) ** (1.0 / 7.0)
            if r < 0.9:
                return gap * r / (1.0 - r)
    return gap * n


@dataclass(frozen=True)
class SemiconjResult:
    """Sampled semiconjugation plus model coefficients and diagnostics.

    ``values[k]`` approximates the limit map at ``grid[k]`` (native
    coordinates); ``values_after_map[k]`` is its value at phi(grid[k]), used
    for the functional-equation residual.  ``evaluate`` computes the limit
    map at arbitrary interior points by re-running the renormalization
    against the cached base orbit.
    """

    kind: str                  # "halfplane" | "planar"
    grid: tuple
    values: tuple
    values_after_map: tuple
    A: float | None
    b: float | None
    base_point: complex
    base_value: complex
    iterations_used: int
    sup_cauchy_gap: float
    residual: float
    classification: Classification = field(repr=False)
    precision_report: dict = field(repr=False, default_factory=dict)
    engine: _Engine = field(repr=False, default=None, compare=False)

    def evaluate(self, z) -> complex:
        return self.engine.evaluate(z)

    def model_map(self):
        """The model automorphism tau with (limit o phi) = tau o limit."""
        if self.kind == "halfplane":
            A, b = self.A, self.b
            return lambda u: A * u + b
        return lambda u: u + 1.0

    def selfmap(self) -> SelfMap:
        return self.engine.m


def _default_grid(engine: _Engine, cfg: RenormConfig):
    w0 = engine._to_model(engine.z0)
    lattice = halfplane_lattice(w0, cfg.grid_radius, cfg.grid_size)
    return [engine.from_model(w) for w in lattice]


def _model_coefficients(engine: _Engine, classification: Classification,
                        n_used: int) -> tuple[float, float, float]:
    """(A, b, b_spread): A from the classification, b from the orbit tail.

    b_n = (x_{n+1} - x_n)/y_n is averaged over the last quarter of the
    orbit; a second average over the preceding quarter Richardson-corrects
    the O(1/n) bias that slowly converging parabolic orbits leave in the
    plain tail mean (the correction is exact for a b + c/n tail and a no-op
    for already-stable tails).
    """
    engine._ensure_orbit(n_used + 1)
    xs = [w.real for w in engine._orbit_model]
    ys = [w.imag for w in engine._orbit_model]
    mid = max(2, 3 * n_used // 4)
    lo = max(1, n_used // 2)
    bs_hi = [(xs[k + 1] - xs[k]) / ys[k] for k in range(mid, n_used + 1)]
    bs_lo = [(xs[k + 1] - xs[k]) / ys[k] for k in range(lo, mid)]
    avg_hi = float(np.mean(bs_hi))
    if bs_lo:
        avg_lo = float(np.mean(bs_lo))
        # window-mean biases of a c/k tail: ln(4/3) vs ln(3/2), both over n/4
        weight = math.log(4.0 / 3.0) / math.log(9.0 / 8.0)
        b = avg_hi + weight * (avg_hi - avg_lo)
    else:
        b = avg_hi
    b_spread = float(max(bs_hi) - min(bs_hi)) if len(bs_hi) > 1 else 0.0
    if classification.kind == "hyperbolic":
        A = float(classification.A)
    else:
        A = 1.0
    return A, b, b_spread


def halfplane_semiconjugation(m: SelfMap, z0, grid=None,
                              cfg: RenormConfig | None = None,
                              classification: Classification | None = None,
                              classify_cfg: ClassifyConfig | None = None) -> SemiconjResult:
    """Renormalize toward the half-plane model (g, u -> A u + b).

    Accepts hyperbolic and parabolic non-zero-step maps.  Zero-step maps
    make g degenerate (the limit is the constant 1) and are rejected with a
    pointer to the planar engine; elliptic maps are rejected outright.
    """
    cfg = cfg or RenormConfig()
    if classification is None:
        classification = classify(m, [z0], classify_cfg)
    if classification.is_elliptic:
        raise ModelMismatchError("renormalization engines reject elliptic maps")
    if classification.kind == "parabolic-zero-step":
        raise ModelMismatchError(
            "zero-step parabolic map: the half-plane limit degenerates; "
            "use the planar engine (planar_semiconjugation)"
        )
    engine = _Engine(m, classification, z0, cfg, "halfplane")
    grid = list(grid) if grid is not None else _default_grid(engine, cfg)
    res_tol = cfg.res_tol if cfg.res_tol is not None else 1e-6
    base_tol = cfg.base_tol if cfg.base_tol is not None else 1e-9
    k = len(grid)

    def model_residual(vals, n):
        A_n, b_n, _ = _model_coefficients(engine, classification, n)
        return max(
            hyp_dist(va, A_n * vz + b_n)
            for va, vz in zip(vals[1 + k:], vals[1:1 + k])
        )

    probe = [complex(z0)] + grid + [m(z) for z in grid]
    vals, n_used, window_gap, diag = engine.run(
        probe, stop_check=lambda vals, n: model_residual(vals, n) < res_tol
    )
    base_value = vals[0]
    g_vals = vals[1:1 + k]
    g_after = vals[1 + k:]
    if abs(base_value - 1j) > base_tol:
        raise PrecisionError(
            f"base normalization violated: g(z0) = {base_value} (expected i)"
        )
    for v in g_vals + g_after:
        if v.imag <= 0:
            raise PrecisionError("half-plane model values left H")

    A, b, b_spread = _model_coefficients(engine, classification, n_used)
    residual = max(
        hyp_dist(ga, A * gz + b) for ga, gz in zip(g_after, g_vals)
    )
    if residual > res_tol:
        raise ResidualError("functional equation residual too large", residual)
    diag.update({"b_spread": b_spread})
    return SemiconjResult(
        kind="halfplane",
        grid=tuple(grid),
        values=tuple(g_vals),
        values_after_map=tuple(g_after),
        A=A,
        b=b,
        base_point=complex(z0),
        base_value=base_value,
        iterations_used=n_used,
        sup_cauchy_gap=window_gap,
        residual=residual,
        classification=classification,
        precision_report=diag,
        engine=engine,
    )


def planar_semiconjugation(m: SelfMap, z0, grid=None,
                           cfg: RenormConfig | None = None,
                           classification: Classification | None = None,
                           classify_cfg: ClassifyConfig | None = None) -> SemiconjResult:
    """Renormalize toward the planar translation model (h, u -> u + 1).

    Only parabolic zero-step maps are accepted; anything with a genuine
    half-plane model is redirected to halfplane_semiconjugation.
    """
    cfg = cfg or RenormConfig()
    if classification is None:
        classification = classify(m, [z0], classify_cfg)
    if classification.is_elliptic:
        raise ModelMismatchError("renormalization engines reject elliptic maps")
    if classification.kind != "parabolic-zero-step":
        raise ModelMismatchError(
            f"{classification.kind} map has a half-plane model; "
            "use halfplane_semiconjugation"
        )
    engine = _Engine(m, classification, z0, cfg, "planar")
    grid = list(grid) if grid is not None else _default_grid(engine, cfg)
    res_tol = cfg.res_tol if cfg.res_tol is not None else 1e-8
    base_tol = cfg.base_tol if cfg.base_tol is not None else 1e-12
    k = len(grid)

    def planar_residual(vals, n):
        return max(
            abs(va - vz - 1.0) for va, vz in zip(vals[1 + k:], vals[1:1 + k])
        )

    probe = [complex(z0)] + grid + [m(z) for z in grid]
    vals, n_used, window_gap, diag = engine.run(
        probe, stop_check=lambda vals, n: planar_residual(vals, n) < res_tol
    )
    base_value = vals[0]
    h_vals = vals[1:1 + k]
    h_after = vals[1 + k:]
    if abs(base_value) > base_tol:
        raise PrecisionError(
            f"base normalization violated: h(z0) = {base_value} (expected 0)"
        )
    residual = max(abs(ha - hz - 1.0) for ha, hz in zip(h_after, h_vals))
    if residual > res_tol:
        raise ResidualError("planar equation residual too large", residual)
    return SemiconjResult(
        kind="planar",
        grid=tuple(grid),
        values=tuple(h_vals),
        values_after_map=tuple(h_after),
        A=None,
        b=None,
        base_point=complex(z0),
        base_value=base_value,
        iterations_used=n_used,
        sup_cauchy_gap=window_gap,
        residual=residual,
        classification=classification,
        precision_report=diag,
        engine=engine,
    )


# ---------------------------------------------------------------------------
# Standard form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardForm:
    """Affine re-normalization of a result onto the standard model.

    ``scale``/``shift`` give sigma(z) = scale * limit(z) + shift; the model
    is ("dilation", A), ("translation", +-1) or ("planar-translation", 1).
    """

    model: tuple
    values: tuple
    residual: float
    scale: float
    shift: float
    source: SemiconjResult

    def evaluate(self, z) -> complex:
        return self.scale * self.source.evaluate(z) + self.shift

    def model_map(self):
        name, p = self.model
        if name == "dilation":
            return lambda u: p * u
        return lambda u: u + p


def standard_form(result: SemiconjResult, b_tol: float = 1e-9) -> StandardForm:
    """Conjugate the model to a dilation u -> Au or a translation u -> u +- 1.

    Half-plane results with A > 1 shift by b/(A-1); parabolic results with
    b != 0 rescale by 1/|b|.  Planar results are already in the z + 1 model
    and pass through unchanged.
    """
    if result.kind == "planar":
        return StandardForm(
            model=("planar-translation", 1.0),
            values=result.values,
            residual=result.residual,
            scale=1.0,
            shift=0.0,
            source=result,
        )
    A, b = result.A, result.b
    if A > 1.0:
        shift = b / (A - 1.0)
        scale = 1.0
        model = ("dilation", A)
    else:
        if abs(b) < b_tol:
            raise CannotStandardizeError(
                f"degenerate model: A = 1 and |b| = {abs(b):.3e} < {b_tol:g}"
            )
        scale = 1.0 / abs(b)
        shift = 0.0
        model = ("translation", 1.0 if b > 0 else -1.0)
    values = tuple(scale * v + shift for v in result.values)
    after = tuple(scale * v + shift for v in result.values_after_map)
    mm = (lambda u: A * u) if model[0] == "dilation" else (lambda u: u + model[1])
    residual = max(hyp_dist(va, mm(vz)) for va, vz in zip(after, values))
    return StandardForm(
        model=model,
        values=values,
        residual=residual,
        scale=scale,
        shift=shift,
        source=result,
    )


# ---------------------------------------------------------------------------
# Univalence and covering probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnivalenceReport:
    passed: bool
    pairs: int
    collisions: tuple
    min_separation_ratio: float
    region: UnivalenceRegion


def default_region(result: SemiconjResult,
                   start_index: int | None = None) -> UnivalenceRegion:
    rho = 1.0 if result.kind == "halfplane" else 5.0
    if start_index is None:
        start_index = 16
    return UnivalenceRegion(rho=rho, start_index=start_index)


def _region_point(result: SemiconjResult, region: UnivalenceRegion,
                  n: int, r: float, t: float) -> complex:
    """Point inside the n-th region disk, in model coordinates."""
    engine = result.engine
    zn = engine.orbit_model_point(n)
    if result.kind == "halfplane":
        return HyperbolicDisk(zn, region.rho).interior_point(r, t)
    dz = engine.orbit_model_point(n + 1) - zn
    return zn + dz * region.rho * r * cmath.exp(2j * math.pi * t)


def _region_boundary(result: SemiconjResult, region: UnivalenceRegion,
                     n: int, samples: int):
    engine = result.engine
    zn = engine.orbit_model_point(n)
    if result.kind == "halfplane":
        disk = HyperbolicDisk(zn, region.rho)
        return [disk.boundary_point(k / samples) for k in range(samples)]
    dz = engine.orbit_model_point(n + 1) - zn
    return [
        zn + dz * region.rho * cmath.exp(2j * math.pi * k / samples)
        for k in range(samples)
    ]


def univalence_probe(result: SemiconjResult, region: UnivalenceRegion | None = None,
                     samples: int = 300, collision_tol: float = 1e-9,
                     seed: int = 0) -> UnivalenceReport:
    """Sample point pairs in the orbit-disk region and look for collisions.

    Pairs are drawn inside single disks and across disks with distinct
    indices.  A collision is |g(z) - g(w)| < collision_tol with z != w; the
    report also carries the worst separation ratio |g(z) - g(w)| scaled by
    the domain metric distance.  Report-only: collisions are findings.
    """
    region = region or default_region(result)
    rng = np.random.default_rng(seed)
    engine = result.engine
    metric = engine._metric
    pts_a, pts_b = [], []
    while len(pts_a) < samples:
        i = region.start_index + int(rng.integers(0, region.count))
        j = region.start_index + int(rng.integers(0, region.count))
        a = _region_point(result, region, i, math.sqrt(rng.uniform()), rng.uniform())
        b = _region_point(result, region, j, math.sqrt(rng.uniform()), rng.uniform())
        if a.imag <= 0 or b.imag <= 0:
            continue  # planar region disks may dip below the domain; skip
        pts_a.append(a)
        pts_b.append(b)
    vals_a = engine.evaluate_model_points(pts_a)
    vals_b = engine.evaluate_model_points(pts_b)
    collisions = []
    min_ratio = math.inf
    pair_count = 0
    for a, b, va, vb in zip(pts_a, pts_b, vals_a, vals_b):
        d = metric(a, b)
        if d < 1e-9:
            continue
        pair_count += 1
        sep = abs(va - vb)
        min_ratio = min(min_ratio, sep / d)
        if sep < collision_tol:
            collisions.append((a, b))
    return UnivalenceReport(
        passed=not collisions and pair_count > 0,
        pairs=pair_count,
        collisions=tuple(collisions[:5]),
        min_separation_ratio=min_ratio,
        region=region,
    )


@dataclass(frozen=True)
class CoveringTarget:
    target: complex
    disk_index: int
    winding: int
    residue: float
    passed: bool


@dataclass(frozen=True)
class CoveringReport:
    passed: bool
    targets: tuple
    region: UnivalenceRegion


def _pick_disk_index(result: SemiconjResult, region: UnivalenceRegion,
                     w: complex) -> int:
    """Index n whose model image disk should contain the target."""
    lo = region.start_index
    hi = region.start_index + max(region.count, 64)
    if result.kind == "planar":
        n = round(w.real)
    else:
        A, b = result.A, result.b
        if A > 1.0:
            mag = abs(w + b / (A - 1.0))
            n = round(math.log(max(mag, 1e-12)) / math.log(A))
        else:
            n = round(w.real / b) if b else lo
    return min(max(int(n), lo), hi)


def covering_probe(result: SemiconjResult, targets,
                   region: UnivalenceRegion | None = None,
                   boundary_samples: int = 512,
                   max_boundary_samples: int = 4096) -> CoveringReport:
    """Winding-number check that model-space targets are covered exactly once.

    For each target w the boundary of the orbit disk whose model image
    should contain w is pushed through the limit map and the winding number
    of the image curve around w is computed (>= 512 samples, doubled while
    the curve looks under-sampled).  PASS per target iff the winding is 1.
    """
    from .geometry import AmbiguousWindingError, winding_number

    region = region or default_region(result)
    engine = result.engine
    entries = []
    for w in targets:
        w = complex(w)
        n = _pick_disk_index(result, region, w)
        samples = boundary_samples
        entry = None
        while True:
            boundary = _region_boundary(result, region, n, samples)
            if any(p.imag <= 0 for p in boundary):
                raise DomainError(
                    "region disk leaves the half-plane; reduce rho or "
                    "increase the start index"
                )
            try:
                curve = engine.evaluate_model_points(boundary)
                res = winding_number(curve, w)
            except AmbiguousWindingError:
                n += 1
                continue
            if res.precision_warning and samples < max_boundary_samples:
                samples *= 2
                continue
            entry = CoveringTarget(
                target=w,
                disk_index=n,
                winding=res.value,
                residue=res.residue,
                passed=res.value == 1,
            )
            break
        entries.append(entry)
    return CoveringReport(
        passed=all(e.passed for e in entries),
        targets=tuple(entries),
        region=region,
    )
