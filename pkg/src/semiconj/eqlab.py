"""Functional-equation laboratory.

Residual checks for sigma o phi = tau o sigma (half-plane and planar
variants), the maximality inequality against the renormalized limit, the
canonicity criterion (canonical solutions are exactly the affine
post-compositions of the limit map), base-point change identities, the
catalogue of closed-form intertwiners between model automorphisms, and
grand-orbit equivalence for the models themselves.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import dsl
from .dsl import Add, Call, Const, Mul, ParsedMap, Var, differentiate
from .errors import (
    DomainError,
    EmptyFamilyError,
    ModelMismatchError,
    UnsupportedFamilyError,
)
from .geometry import MoebiusMap, disk_dist, hyp_dist, is_infinity
from .renorm import SemiconjResult, standard_form
from .sampling import halfplane_lattice, halfplane_pairs

_Z = Var()


# ---------------------------------------------------------------------------
# Solution pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanarAffine:
    """Automorphism of the plane, z -> a z + b with a != 0."""

    a: complex
    b: complex = 0.0

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("planar affine map needs a != 0")

    def __call__(self, z: complex) -> complex:
        return self.a * z + self.b


def _sigma_call(sigma, z) -> complex:
    if hasattr(sigma, "evaluate"):
        return sigma.evaluate(z)
    return sigma(z)


@dataclass(frozen=True)
class SolutionPair:
    """Candidate semiconjugation sigma with its model automorphism tau.

    ``equation`` is "forward" (tau an automorphism of the disk/half-plane)
    or "planar" (tau affine on C).  ``codomain`` names the metric used for
    residuals: "halfplane", "disk" or "plane".
    """

    sigma: object
    tau: object  # MoebiusMap | PlanarAffine
    equation: str = "forward"
    codomain: str = "halfplane"

    def __post_init__(self):
        if self.equation not in ("forward", "planar"):
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.equation == "planar" and not isinstance(self.tau, PlanarAffine):
            raise ValueError("planar equation needs a PlanarAffine tau")
        if self.codomain not in ("halfplane", "disk", "plane"):
            raise ValueError(f"unknown codomain {self.codomain!r}")
        if self.equation == "forward" and self.codomain == "plane":
            raise ValueError("forward equation solutions stay in the disk/half-plane")

    def sigma_at(self, z) -> complex:
        return _sigma_call(self.sigma, z)

    def tau_at(self, u) -> complex:
        if isinstance(self.tau, MoebiusMap):
            return self.tau.apply(u)
        return self.tau(u)

    def tau_affine(self) -> tuple[complex, complex]:
        if isinstance(self.tau, MoebiusMap):
            return self.tau.affine_coefficients()
        return self.tau.a, self.tau.b


def _codomain_metric(codomain: str):
    if codomain == "halfplane":
        return hyp_dist
    if codomain == "disk":
        return disk_dist
    return lambda a, b: abs(a - b)


def _check_codomain(value: complex, codomain: str, z) -> None:
    if codomain == "halfplane" and value.imag <= 0:
        raise DomainError("sigma left the upper half-plane", witness=z)
    if codomain == "disk" and abs(value) >= 1:
        raise DomainError("sigma left the unit disk", witness=z)


def residual(pair: SolutionPair, phi, grid) -> float:
    """sup over the grid of dist(sigma(phi(z)), tau(sigma(z))).

    The metric matches the declared codomain.  A constant sigma is rejected
    (trivial solutions carry no information), as is any codomain violation.
    """
    metric = _codomain_metric(pair.codomain)
    values = []
    worst = 0.0
    for z in grid:
        w = phi(z)
        if is_infinity(w):
            raise DomainError("phi has a pole on the grid", witness=z)
        sz = pair.sigma_at(z)
        spz = pair.sigma_at(w)
        _check_codomain(sz, pair.codomain, z)
        _check_codomain(spz, pair.codomain, w)
        values.append(sz)
        worst = max(worst, metric(spz, pair.tau_at(sz)))
    spread = max(abs(a - b) for a in values[:8] for b in values[:8])
    if spread < 1e-14:
        raise DomainError("sigma is constant on the grid; non-constant solutions required")
    return worst


# ---------------------------------------------------------------------------
# Maximality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaximalityReport:
    """Pairwise comparison of sigma's contraction against the limit map's.

    The renormalized limit g dominates every solution sigma in the
    hyperbolic metric: dist(sigma z, sigma w) <= dist(g z, g w).  Violations
    beyond tolerance falsify that; equality pairs (with a floor on the
    right-hand side) witness that sigma is an isometric post-composition.
    """

    pairs: int
    violations: tuple
    strict_count: int
    equality_count: int
    equality_pairs: tuple
    max_excess: float

    @property
    def passed(self) -> bool:
        return not self.violations


def maximality_check(pair: SolutionPair, g: SemiconjResult, point_pairs,
                     tol: float = 1e-9, rhs_floor: float = 1e-6) -> MaximalityReport:
    violations = []
    equalities = []
    strict = 0
    max_excess = -math.inf
    count = 0
    for z, w in point_pairs:
        lhs = hyp_dist(pair.sigma_at(z), pair.sigma_at(w))
        rhs = hyp_dist(g.evaluate(z), g.evaluate(w))
        count += 1
        excess = lhs - rhs
        max_excess = max(max_excess, excess)
        if excess > tol:
            violations.append((z, w, lhs, rhs))
        elif abs(excess) <= tol:
            if rhs > rhs_floor:
                equalities.append((z, w))
        else:
            strict += 1
    return MaximalityReport(
        pairs=count,
        violations=tuple(violations[:10]),
        strict_count=strict,
        equality_count=len(equalities),
        equality_pairs=tuple(equalities[:10]),
        max_excess=max_excess,
    )


# ---------------------------------------------------------------------------
# Canonicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicityConfig:
    tol: float = 1e-6            # affine-fit residual bound for CANONICAL
    equality_tol: float = 1e-9
    rhs_floor: float = 1e-6
    pair_samples: int = 60
    seed: int = 3


@dataclass(frozen=True)
class CanonicityVerdict:
    """Two sub-tests for sigma being an affine post-composition of the limit.

    The binding verdict is the affine fit (residual below tolerance after
    both sides are put in standard model coordinates); the equality-case
    search on sampled pairs is reported alongside and should agree.
    """

    canonical: bool
    fit_residual: float
    fit_params: dict
    equality_verdict: bool
    equality_witness: tuple | None
    sub_verdicts_agree: bool
    details: dict = field(repr=False, default_factory=dict)


def _standardize_sigma(pair: SolutionPair, model_kind: str, model_A: float):
    """Conjugate sigma by the automorphism that standardizes tau.

    Returns (fn, note) with fn the standardized sigma, or (None, reason)
    when tau's standard form cannot match the limit's model type.
    """
    a, b = pair.tau_affine()
    if pair.equation == "planar":
        if abs(a - 1.0) > 1e-9:
            return None, f"tau standardizes to a dilation (a={a}), not a translation"
        if b == 0:
            return None, "tau is the identity"
        return (lambda z: pair.sigma_at(z) / b), None
    if abs(a.imag) > 1e-9 or abs(b.imag) > 1e-9:
        return None, "tau is not in the affine subgroup fixing infinity"
    a, b = a.real, b.real
    if model_kind == "dilation":
        if a <= 1.0 + 1e-12:
            return None, f"tau (a={a}) is not hyperbolic while the limit model is"
        shift = b / (a - 1.0)
        return (lambda z: pair.sigma_at(z) + shift), None
    if abs(a - 1.0) > 1e-9:
        return None, f"tau (a={a}) is not parabolic while the limit model is"
    if abs(b) < 1e-12:
        return None, "tau is the identity"
    return (lambda z: pair.sigma_at(z) / abs(b)), None


def canonicity_check(pair: SolutionPair, g: SemiconjResult,
                     cfg: CanonicityConfig | None = None) -> CanonicityVerdict:
    """Decide whether sigma is a canonical solution for g's map.

    Canonical solutions are precisely the affine post-compositions of the
    renormalized limit: c * g_std (c > 0) in the dilation model, g_std + d
    (d real) in the translation model, h + c (c complex) in the planar
    model.  The fit runs in standard coordinates with the complementary
    coefficient pinned; the equality-case sub-test searches sampled pairs
    for equality in the maximality inequality (planar variant: the pair
    distances |sigma z - sigma w| and |h z - h w| agree everywhere).
    """
    cfg = cfg or CanonicityConfig()
    std = standard_form(g)
    if std.model[0] == "dilation":
        model_kind, model_A = "dilation", std.model[1]
    elif std.model[0] == "translation":
        model_kind, model_A = "translation", 1.0
    else:
        model_kind, model_A = "planar", 1.0

    sigma_std, reason = _standardize_sigma(pair, model_kind, model_A)
    grid = list(g.grid)
    g_std_vals = list(std.values)

    details: dict = {"model": std.model}
    if sigma_std is None:
        fit_res = math.inf
        fit_params = {"reason": reason}
    else:
        s_vals = [sigma_std(z) for z in grid]
        if model_kind == "dilation":
            num = sum((s * u.conjugate()).real for s, u in zip(s_vals, g_std_vals))
            den = sum(abs(u) ** 2 for u in g_std_vals)
            c = num / den
            if c <= 0:
                fit_res, fit_params = math.inf, {"c": c, "reason": "fitted c <= 0"}
            else:
                fit_res = max(hyp_dist(s, c * u) for s, u in zip(s_vals, g_std_vals))
                fit_params = {"c": c}
        elif model_kind == "translation":
            d = float(np.mean([(s - u).real for s, u in zip(s_vals, g_std_vals)]))
            fit_res = max(hyp_dist(s, u + d) for s, u in zip(s_vals, g_std_vals))
            fit_params = {"d": d}
        else:
            c = complex(np.mean([s - u for s, u in zip(s_vals, g_std_vals)]))
            fit_res = max(abs(s - u - c) for s, u in zip(s_vals, g_std_vals))
            fit_params = {"c": c}

    canonical = fit_res < cfg.tol

    # Equality-case sub-test on sampled pairs.
    rng = np.random.default_rng(cfg.seed)
    base = g.base_point if g.selfmap().domain == "halfplane" else 1j
    pairs = halfplane_pairs(rng, cfg.pair_samples, center=base)
    native_pairs = pairs
    if g.selfmap().domain == "disk":
        from .geometry import halfplane_to_disk

        native_pairs = [
            (halfplane_to_disk(a), halfplane_to_disk(b)) for a, b in pairs
        ]
    equality_witness = None
    if model_kind == "planar":
        all_match = True
        for z, w in native_pairs:
            lhs = abs(pair.sigma_at(z) - pair.sigma_at(w))
            rhs = abs(g.evaluate(z) - g.evaluate(w))
            if abs(lhs - rhs) > cfg.equality_tol and rhs > cfg.rhs_floor:
                all_match = False
                break
        equality_verdict = all_match
    else:
        equality_verdict = False
        for z, w in native_pairs:
            lhs = hyp_dist(pair.sigma_at(z), pair.sigma_at(w))
            rhs = hyp_dist(g.evaluate(z), g.evaluate(w))
            if abs(lhs - rhs) < cfg.equality_tol and rhs > cfg.rhs_floor:
                equality_verdict = True
                equality_witness = (z, w)
                break

    return CanonicityVerdict(
        canonical=canonical,
        fit_residual=fit_res,
        fit_params=fit_params,
        equality_verdict=equality_verdict,
        equality_witness=equality_witness,
        sub_verdicts_agree=(equality_verdict == canonical),
        details=details,
    )


# ---------------------------------------------------------------------------
# Base-point change identities
# ---------------------------------------------------------------------------


def base_point_identity(gA: SemiconjResult, gB: SemiconjResult, mode: str) -> float:
    """Sup deviation of the base-point change identity on gA's grid.

    Renormalizing along the orbit of a different base point changes the
    limit by an explicit Moebius relation.  Modes: "hyperbolic" compares
    (gB + bB/(A-1)) / (i + bB/(A-1)) with (gA + bA/(A-1)) / (gA(zB) + bA/(A-1));
    "parabolic-nzs" compares (gB - i)/|bB| with (gA - gA(zB))/|bA|;
    "planar" compares hB with hA - hA(zB).
    """
    mA, mB = gA.selfmap(), gB.selfmap()
    if mA.domain != mB.domain or mA.source() != mB.source():
        raise ValueError("results were produced by different maps")
    if mode == "hyperbolic":
        if gA.kind != "halfplane" or gA.A is None or gA.A <= 1.0:
            raise ModelMismatchError("hyperbolic mode needs a dilation-model result (A > 1)")
        A = gA.A
        cA, cB = gA.b / (A - 1.0), gB.b / (A - 1.0)
        g_at_zb = gA.evaluate(gB.base_point)
        worst = 0.0
        for z, ga in zip(gA.grid, gA.values):
            gb = gB.evaluate(z)
            lhs = (gb + cB) / (1j + cB)
            rhs = (ga + cA) / (g_at_zb + cA)
            worst = max(worst, abs(lhs - rhs))
        return worst
    if mode == "parabolic-nzs":
        if gA.kind != "halfplane" or gA.A is None or abs(gA.A - 1.0) > 1e-9:
            raise ModelMismatchError("parabolic mode needs a translation-model result (A = 1)")
        g_at_zb = gA.evaluate(gB.base_point)
        worst = 0.0
        for z, ga in zip(gA.grid, gA.values):
            gb = gB.evaluate(z)
            lhs = (gb - 1j) / abs(gB.b)
            rhs = (ga - g_at_zb) / abs(gA.b)
            worst = max(worst, abs(lhs - rhs))
        return worst
    if mode == "planar":
        if gA.kind != "planar":
            raise ModelMismatchError("planar mode needs planar-model results")
        h_at_zb = gA.evaluate(gB.base_point)
        worst = 0.0
        for z, ha in zip(gA.grid, gA.values):
            hb = gB.evaluate(z)
            worst = max(worst, abs(hb - (ha - h_at_zb)))
        return worst
    raise ModelMismatchError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Intertwiner families
# ---------------------------------------------------------------------------

FAMILIES = (
    "h->h", "h->p", "h->e", "p->p", "p->h", "p->e",
    "planar p->p", "planar p->e", "planar e->p",
)


@dataclass(frozen=True)
class IntertwinerSpec:
    """Family tag plus parameters for maps intertwining model automorphisms.

    Source/target letters: h = dilation z -> Sz (S > 1) on H, p = unit
    translation on H (sign gives direction), e = rotation by theta (disk
    target); "planar" families are entire functions intertwining plane
    automorphisms.
    """

    family: str
    S: float | None = None
    T: float | None = None
    theta: float | None = None
    sign: str = "++"
    d: float = 1.0
    c: complex = 1.0
    a: complex | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; one of {FAMILIES}")
        if self.family in ("h->h", "h->p", "h->e"):
            if self.S is None or self.S <= 1.0:
                raise ValueError("source dilation factor S must exceed 1")
        if self.family == "h->h" and (self.T is None or self.T <= 1.0):
            raise ValueError("target dilation factor T must exceed 1")
        if self.family in ("p->h",) and (self.T is None or self.T <= 1.0):
            raise ValueError("target dilation factor T must exceed 1")
        if self.family in ("h->e", "p->e"):
            if self.theta is None or not (0.0 <= self.theta < 2 * math.pi):
                raise ValueError("rotation angle theta must lie in [0, 2pi)")
        if self.family == "planar p->e" and (self.a is None or self.a == 0):
            raise ValueError("target multiplier a must be nonzero")


@dataclass(frozen=True)
class Intertwiner:
    """Closed-form family member, evaluable and tagged with its equation."""

    map: ParsedMap
    spec: IntertwinerSpec
    codomain: str

    def __call__(self, z):
        return self.map(z)

    def source(self) -> str:
        return self.map.source()


def _parsed(expr, domain: str = "halfplane") -> ParsedMap:
    return ParsedMap(expr, differentiate(expr), domain)


def make_intertwiner(spec: IntertwinerSpec) -> Intertwiner:
    """Construct a closed-form member of the requested family.

    Families proven empty raise EmptyFamilyError with the obstruction;
    non-empty families without a catalogued closed form raise
    UnsupportedFamilyError.
    """
    f = spec.family
    if f == "h->h":
        S, T = spec.S, spec.T
        if T > S:
            raise EmptyFamilyError(
                "no self-map of H satisfies sigma(Sz) = T sigma(z) with T > S: "
                "sigma(S^n z)/(S^n z) = (T/S)^n sigma(z)/z would grow without "
                "bound, contradicting the finite dilation coefficient at infinity"
            )
        if math.isclose(T, S, rel_tol=1e-12):
            c = float(spec.c.real) if isinstance(spec.c, complex) else float(spec.c)
            if c <= 0:
                raise ValueError("h->h(S,S) members are c*z with c > 0")
            expr = Mul(Const(complex(c)), _Z)
            return Intertwiner(_parsed(expr), spec, "halfplane")
        gamma = math.log(T) / math.log(S)
        expr = Call("exp", Mul(Const(complex(gamma)), Call("log", _Z)))
        return Intertwiner(_parsed(expr), spec, "halfplane")
    if f == "h->p":
        if spec.sign not in ("+", "++"):
            raise UnsupportedFamilyError(
                "only the increasing-translation variant has a catalogued member"
            )
        expr = dsl.Div(Call("log", _Z), Const(complex(math.log(spec.S))))
        return Intertwiner(_parsed(expr), spec, "halfplane")
    if f == "h->e":
        if spec.theta == 0.0:
            raise ValueError("theta = 0 degenerates to a constant map")
        t = spec.theta / math.log(spec.S)
        expr = Call("exp", Mul(Const(complex(0.0, t)), Call("log", _Z)))
        return Intertwiner(_parsed(expr), spec, "disk")
    if f == "p->p":
        if spec.sign in ("+-", "-+"):
            raise EmptyFamilyError(
                "no self-map of H satisfies sigma(z + 1) = sigma(z) - 1 (or the "
                "mirror case): the dilation coefficient of sigma at infinity "
                "would have to be -1, but it is nonnegative"
            )
        if spec.sign == "--":
            raise UnsupportedFamilyError(
                "the decreasing-translation family coincides with the "
                "increasing one; request sign '++'"
            )
        expr = Add(_Z, Const(complex(spec.d)))
        return Intertwiner(_parsed(expr), spec, "halfplane")
    if f == "p->h":
        raise EmptyFamilyError(
            "no self-map of H satisfies sigma(z +- 1) = T sigma(z) with T > 1: "
            "sigma(z)/z would diverge along horizontal translates, "
            "contradicting its finite nontangential limit"
        )
    if f == "p->e":
        if spec.sign not in ("+", "++"):
            raise UnsupportedFamilyError(
                "only the increasing-translation variant has a catalogued member"
            )
        if spec.theta == 0.0:
            raise ValueError("theta = 0 degenerates to a constant map")
        expr = Call("exp", Mul(Const(complex(0.0, spec.theta)), _Z))
        return Intertwiner(_parsed(expr), spec, "disk")
    if f == "planar p->p":
        expr = Add(_Z, Const(complex(spec.c)))
        return Intertwiner(_parsed(expr), spec, "plane")
    if f == "planar p->e":
        expr = Call("exp", Mul(_Z, Const(cmath.log(spec.a))))
        return Intertwiner(_parsed(expr), spec, "plane")
    if f == "planar e->p":
        raise EmptyFamilyError(
            "no entire F satisfies F(a z) = F(z) + 1: evaluating at z = 0 "
            "gives F(0) = F(0) + 1"
        )
    raise UnsupportedFamilyError(f"no constructor for family {f!r}")


def _family_equation(spec: IntertwinerSpec):
    """(source transform, target action, codomain) of the defining equation."""
    f = spec.family
    if f == "h->h":
        return (lambda z: spec.S * z), (lambda u: spec.T * u), "halfplane"
    if f == "h->p":
        step = 1.0 if spec.sign in ("+", "++") else -1.0
        return (lambda z: spec.S * z), (lambda u: u + step), "halfplane"
    if f == "h->e":
        rot = cmath.exp(1j * spec.theta)
        return (lambda z: spec.S * z), (lambda u: rot * u), "disk"
    if f == "p->p":
        s0 = 1.0 if spec.sign[0] == "+" else -1.0
        s1 = 1.0 if spec.sign[-1] == "+" else -1.0
        return (lambda z: z + s0), (lambda u: u + s1), "halfplane"
    if f == "p->h":
        step = 1.0 if spec.sign in ("+", "++") else -1.0
        return (lambda z: z + step), (lambda u: spec.T * u), "halfplane"
    if f == "p->e":
        step = 1.0 if spec.sign in ("+", "++") else -1.0
        rot = cmath.exp(1j * spec.theta)
        return (lambda z: z + step), (lambda u: rot * u), "disk"
    if f == "planar p->p":
        return (lambda z: z + 1.0), (lambda u: u + 1.0), "plane"
    if f == "planar p->e":
        return (lambda z: z + 1.0), (lambda u: spec.a * u), "plane"
    raise UnsupportedFamilyError(f"family {f!r} has no checkable equation")


@dataclass(frozen=True)
class MembershipReport:
    residual: float
    codomain_ok: bool
    grid_size: int
    decay_magnitudes: tuple | None = None
    decay_monotone: bool | None = None

    @property
    def passed(self) -> bool:
        return self.codomain_ok and self.residual < 1e-8


def default_membership_grid(spec: IntertwinerSpec):
    if spec.family.startswith("planar"):
        return [complex(x, y) for x in np.linspace(-2, 2, 7) for y in np.linspace(-2, 2, 7)]
    return halfplane_lattice(1j, 2.0, 7)


def membership_check(sigma, spec: IntertwinerSpec, grid=None) -> MembershipReport:
    """Residual of the family's defining equation over a grid.

    Also verifies codomain containment and, for dilation-to-dilation members
    with T < S, samples sigma(iy)/(iy) along y = 10^2..10^8: such members
    must decay toward zero at infinity.
    """
    src, tgt, codomain = _family_equation(spec)
    grid = list(grid) if grid is not None else default_membership_grid(spec)
    metric = _codomain_metric(codomain)
    fn = sigma if callable(sigma) else sigma.map
    worst = 0.0
    for z in grid:
        v = fn(z)
        vt = fn(src(z))
        if is_infinity(v) or is_infinity(vt):
            raise DomainError("sigma has a pole on the grid", witness=z)
        _check_codomain(v, codomain, z)
        _check_codomain(vt, codomain, src(z))
        worst = max(worst, metric(vt, tgt(v)))
    decay_mags = None
    decay_monotone = None
    if spec.family == "h->h" and spec.T < spec.S:
        decay_mags = tuple(
            abs(fn(1j * 10.0 ** k) / (1j * 10.0 ** k)) for k in range(2, 9)
        )
        decay_monotone = all(
            decay_mags[i + 1] < decay_mags[i] for i in range(len(decay_mags) - 1)
        )
    return MembershipReport(
        residual=worst,
        codomain_ok=True,
        grid_size=len(grid),
        decay_magnitudes=decay_mags,
        decay_monotone=decay_monotone,
    )


# ---------------------------------------------------------------------------
# Grand orbits of the models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrandOrbitVerdict:
    equivalent: bool
    shift: int | None
    deviation: float


def grand_orbit_equivalent(model, z: complex, w: complex,
                           tol: float = 1e-9) -> GrandOrbitVerdict:
    """Closed-form grand-orbit equivalence for the model automorphisms.

    ``model`` is ("dilation", A), "translation" (on H) or
    "planar-translation" (on C).  Under z -> z + 1 two points are equivalent
    iff they differ by an integer; under z -> Az iff log(z/w)/log(A) is an
    integer (principal logarithm, both points in H).
    """
    z, w = complex(z), complex(w)
    if isinstance(model, tuple) and model[0] == "dilation":
        A = float(model[1])
        if A <= 1.0:
            raise ValueError("dilation model needs A > 1")
        if z.imag <= 0 or w.imag <= 0:
            raise DomainError("dilation model lives on the upper half-plane")
        if w == 0 or z == 0:
            raise DomainError("dilation grand orbits exclude 0")
        r = cmath.log(z / w) / math.log(A)
        k = round(r.real)
        dev = abs(r - k)
        return GrandOrbitVerdict(dev < tol, int(k) if dev < tol else None, dev)
    if model == "translation":
        if z.imag <= 0 or w.imag <= 0:
            raise DomainError("translation model lives on the upper half-plane")
    elif model != "planar-translation":
        raise ValueError(f"unknown model {model!r}")
    d = z - w
    k = round(d.real)
    dev = abs(d - k)
    return GrandOrbitVerdict(dev < tol, int(k) if dev < tol else None, dev)


# ---------------------------------------------------------------------------
# Axis sampling (nontangential limits probed along the imaginary axis)
# ---------------------------------------------------------------------------


def axis_ratio_magnitudes(fn, decades=range(2, 9)) -> tuple:
    """|fn(iy)/(iy)| along y = 10^k; Lindelof-type limits justify one ray."""
    out = []
    for k in decades:
        z = 1j * 10.0 ** k
        v = fn(z) if not hasattr(fn, "evaluate") else fn.evaluate(z)
        out.append(abs(v / z))
    return tuple(out)
