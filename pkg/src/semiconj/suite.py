"""Acceptance battery: one function per criterion, shared prerequisites cached.

Each criterion returns a CriterionResult with the measured numbers; the CLI
``suite`` subcommand and the acceptance tests both consume these, printing
one pass/fail line per criterion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .dsl import ParsedMap, finite_difference_derivative, parse
from .dynamics import SelfMap, _ViewOrbit, classify
from .eqlab import (
    IntertwinerSpec,
    PlanarAffine,
    SolutionPair,
    base_point_identity,
    canonicity_check,
    make_intertwiner,
    membership_check,
)
from .errors import EmptyFamilyError, ParseError, SemiconjError
from .geometry import MoebiusMap, hyp_dist
from .renorm import covering_probe, halfplane_semiconjugation, planar_semiconjugation
from .sampling import halfplane_pairs

CLASSIFICATION_CASES = (
    ("(z^2+z)/2", "disk", 0.4 + 0.3j, "elliptic-attracting"),
    ("z^2", "disk", 0.5 + 0.1j, "elliptic-superattracting"),
    ("2*z+i", "halfplane", 1j, "hyperbolic"),
    ("z+1-1/(z+i)", "halfplane", 1j, "parabolic-nonzero-step"),
    ("z+i", "halfplane", 1j, "parabolic-zero-step"),
)

SUITE_EXPRESSIONS = (
    "(z^2+z)/2",
    "z^2",
    "2*z+i",
    "z+1-1/(z+i)",
    "z+i",
    "exp(0.5*log(z))",
    "log(z)/0.6931471805599453",
    "exp(i*z)",
    "sqrt((z+i)/2)",
)

MALFORMED_EXPRESSIONS = ("z ^", "2*", "(z+1", "sqrt(", "z+*2", "", "q+1", "z^1.5")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  criterion {self.number:2d}: {self.name}"


class SuiteContext:
    """Caches the expensive shared artifacts (maps, engine runs)."""

    def __init__(self):
        self._cache: dict = {}

    def selfmap(self, src: str, domain: str) -> SelfMap:
        key = ("map", src, domain)
        if key not in self._cache:
            self._cache[key] = SelfMap.from_source(src, domain)
        return self._cache[key]

    def g_dilation(self, z0=1j):
        key = ("g", z0)
        if key not in self._cache:
            m = self.selfmap("2*z+i", "halfplane")
            self._cache[key] = halfplane_semiconjugation(m, z0)
        return self._cache[key]

    def h_planar(self, z0=1j):
        key = ("h", z0)
        if key not in self._cache:
            m = self.selfmap("z+i", "halfplane")
            self._cache[key] = planar_semiconjugation(m, z0)
        return self._cache[key]


def criterion_1(ctx: SuiteContext) -> CriterionResult:
    """Dilation-model reproduction for 2z+i from z0 = i."""
    g = ctx.g_dilation()
    sup_err = max(abs(v - (z + 1j) / 2) for z, v in zip(g.grid, g.values))
    details = {
        "iterations": g.iterations_used,
        "sup_error": sup_err,
        "A": g.A,
        "b": g.b,
        "residual": g.residual,
    }
    passed = (
        g.iterations_used <= 80
        and sup_err < 1e-6
        and abs(g.A - 2.0) <= 1e-9
        and abs(g.b) <= 1e-9
        and g.residual < 1e-6
    )
    return CriterionResult(1, "dilation-model limit for 2z+i matches (z+i)/2", passed, details)


def criterion_2(ctx: SuiteContext) -> CriterionResult:
    """Planar-model reproduction for z+i from z0 = i."""
    h = ctx.h_planar()
    sup_err = max(abs(v - (-1j * (z - 1j))) for z, v in zip(h.grid, h.values))
    details = {
        "sup_error": sup_err,
        "residual": h.residual,
        "base_value": abs(h.base_value),
    }
    passed = sup_err < 1e-10 and h.residual < 1e-10 and abs(h.base_value) <= 1e-12
    return CriterionResult(2, "planar-model limit for z+i matches -i(z-i)", passed, details)


def criterion_3(ctx: SuiteContext) -> CriterionResult:
    """Base-point change identity in the dilation model (z0 = i vs 2i)."""
    gA = ctx.g_dilation(1j)
    gB = ctx.g_dilation(2j)
    oracle_err = max(abs(v - (z + 1j) / 3) for z, v in zip(gB.grid, gB.values))
    dev = base_point_identity(gA, gB, "hyperbolic")
    passed = dev < 1e-6 and oracle_err < 1e-6
    return CriterionResult(
        3, "base-point identity for 2z+i (rebased limit is (z+i)/3)", passed,
        {"deviation": dev, "oracle_error": oracle_err},
    )


def criterion_4(ctx: SuiteContext) -> CriterionResult:
    """Base-point change identity in the planar model (z0 = i vs 1+2i)."""
    hA = ctx.h_planar(1j)
    hB = ctx.h_planar(1 + 2j)
    dev = base_point_identity(hA, hB, "planar")
    return CriterionResult(
        4, "planar base-point identity h~ = h - h(z0~)", dev < 1e-10, {"deviation": dev}
    )


def criterion_5(ctx: SuiteContext) -> CriterionResult:
    """The five labelled maps classify correctly (inconclusive counts as failure)."""
    outcomes = {}
    passed = True
    for src, domain, seed, expected in CLASSIFICATION_CASES:
        try:
            c = classify(ctx.selfmap(src, domain), [seed])
            outcomes[src] = c.kind
            if c.kind != expected:
                passed = False
        except SemiconjError as exc:
            outcomes[src] = f"error: {type(exc).__name__}"
            passed = False
    return CriterionResult(5, "classification of the five labelled maps", passed, outcomes)


def criterion_6(ctx: SuiteContext) -> CriterionResult:
    """Hyperbolic steps never increase (1e-12 slack) on any suite orbit."""
    worst = -math.inf
    checked = 0
    for src, domain, seed, _ in CLASSIFICATION_CASES:
        m = ctx.selfmap(src, domain)
        orbit = _ViewOrbit(m, seed, strict_steps=False)
        orbit.grow(2048)
        steps = orbit.steps
        checked += max(0, len(steps) - 1)
        for k in range(len(steps) - 1):
            worst = max(worst, steps[k + 1] - steps[k])
    passed = worst <= 1e-12
    return CriterionResult(
        6, "Schwarz step monotonicity across all suite orbits", passed,
        {"max_step_increase": worst, "steps_checked": checked},
    )


def criterion_7(ctx: SuiteContext) -> CriterionResult:
    """Maximality of the limit: sqrt(g) strictly contracts, 3g is isometric."""
    g = ctx.g_dilation()
    rng = np.random.default_rng(7)
    pairs = halfplane_pairs(rng, 200)
    g_of = {z: g.evaluate(z) for pair in pairs for z in pair}

    violations = 0
    strict_far = 0
    far = 0
    for z, w in pairs:
        lhs = hyp_dist(cmath.sqrt(g_of[z]), cmath.sqrt(g_of[w]))
        rhs = hyp_dist(g_of[z], g_of[w])
        if lhs > rhs + 1e-9:
            violations += 1
        if hyp_dist(z, w) > 0.1:
            far += 1
            if lhs < rhs - 1e-9:
                strict_far += 1
    max_eq_dev = max(
        abs(hyp_dist(3 * g_of[z], 3 * g_of[w]) - hyp_dist(g_of[z], g_of[w]))
        for z, w in pairs
    )
    details = {
        "violations": violations,
        "strict_fraction_far": strict_far / far if far else 0.0,
        "far_pairs": far,
        "max_equality_deviation_3g": max_eq_dev,
    }
    passed = violations == 0 and far > 0 and strict_far >= 0.95 * far and max_eq_dev <= 1e-9
    return CriterionResult(7, "maximality: sqrt(g) vs g and 3g vs g over 200 pairs", passed, details)


def criterion_8(ctx: SuiteContext) -> CriterionResult:
    """Canonicity verdicts: c*g and h+c canonical, sqrt(g) not; sub-tests agree."""
    g = ctx.g_dilation()
    h = ctx.h_planar()
    results = {}
    agree = True

    for c in (0.5, 3.0):
        pair = SolutionPair(
            sigma=lambda z, c=c: c * g.evaluate(z), tau=MoebiusMap.affine(2.0, 0.0)
        )
        v = canonicity_check(pair, g)
        results[f"{c}*g"] = v.canonical
        agree = agree and v.sub_verdicts_agree
    sqrt_pair = SolutionPair(
        sigma=lambda z: cmath.sqrt(g.evaluate(z)),
        tau=MoebiusMap.affine(math.sqrt(2.0), 0.0),
    )
    v_sqrt = canonicity_check(sqrt_pair, g)
    results["sqrt(g)"] = v_sqrt.canonical
    agree = agree and v_sqrt.sub_verdicts_agree

    c_planar = 2 - 1j
    planar_pair = SolutionPair(
        sigma=lambda z: h.evaluate(z) + c_planar,
        tau=PlanarAffine(1.0, 1.0),
        equation="planar",
        codomain="plane",
    )
    v_planar = canonicity_check(planar_pair, h)
    results["h+(2-i)"] = v_planar.canonical
    agree = agree and v_planar.sub_verdicts_agree

    passed = (
        results["0.5*g"] and results["3.0*g"] and results["h+(2-i)"]
        and not results["sqrt(g)"] and agree
    )
    results["sub_verdicts_agree"] = agree
    return CriterionResult(8, "canonicity: affine post-compositions and sqrt(g)", passed, results)


def criterion_9(ctx: SuiteContext) -> CriterionResult:
    """Intertwiner constructors pass membership; empty families refuse; decay holds."""
    specs = [
        IntertwinerSpec("h->h", S=4.0, T=2.0),
        IntertwinerSpec("h->h", S=3.0, T=3.0, c=2.5),
        IntertwinerSpec("h->p", S=2.0, sign="+"),
        IntertwinerSpec("h->e", S=2.0, theta=1.0),
        IntertwinerSpec("p->p", sign="++", d=3.0),
        IntertwinerSpec("p->e", sign="+", theta=1.0),
        IntertwinerSpec("planar p->p", c=2 - 1j),
        IntertwinerSpec("planar p->e", a=2 + 1j),
    ]
    details = {}
    passed = True
    decay_ok = False
    for spec in specs:
        it = make_intertwiner(spec)
        rep = membership_check(it, spec)
        key = f"{spec.family}"
        if spec.family == "h->h":
            key = f"h->h(S={spec.S:g},T={spec.T:g})"
        details[key] = rep.residual
        if rep.residual >= 1e-10:
            passed = False
        if spec.family == "h->h" and spec.T == 2.0:
            decay_ok = bool(rep.decay_monotone)
    details["decay_monotone"] = decay_ok
    passed = passed and decay_ok

    for fam, kwargs in (("p->h", {"sign": "+", "T": 2.0}), ("planar e->p", {})):
        try:
            make_intertwiner(IntertwinerSpec(fam, **kwargs))
            details[fam] = "constructed (unexpected)"
            passed = False
        except EmptyFamilyError:
            details[fam] = "empty-family error"
    return CriterionResult(9, "intertwiner constructors, empty families, decay", passed, details)


def criterion_10(ctx: SuiteContext) -> CriterionResult:
    """Covering: half-strip targets wind once, a control target outside winds zero."""
    h = ctx.h_planar()
    targets = [complex(17 + k, 0.2 * (-1) ** k) for k in range(10)]
    control = complex(20.0, -12.0)
    rep = covering_probe(h, targets + [control])
    windings = [e.winding for e in rep.targets]
    passed = all(wk == 1 for wk in windings[:-1]) and windings[-1] == 0
    return CriterionResult(
        10, "covering probe: strip targets wind once, control winds zero", passed,
        {"windings": windings},
    )


def criterion_11(ctx: SuiteContext) -> CriterionResult:
    """Symbolic derivative matches finite differences; bad input errors carry offsets."""
    rng = np.random.default_rng(11)
    worst = 0.0
    for src in SUITE_EXPRESSIONS:
        pm = ParsedMap.from_source(src, "halfplane")
        for _ in range(100):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2.5))
            exact = pm.derivative_at(z)
            approx = finite_difference_derivative(pm.expr, z)
            worst = max(worst, abs(approx - exact) / max(abs(exact), 1e-9))
    syntax_ok = True
    for bad in MALFORMED_EXPRESSIONS:
        try:
            parse(bad)
            syntax_ok = False
        except ParseError as exc:
            if not isinstance(exc.offset, int) or exc.offset < 0:
                syntax_ok = False
    passed = worst < 1e-6 and syntax_ok
    return CriterionResult(
        11, "symbolic derivative vs finite differences; positioned syntax errors",
        passed, {"worst_relative_error": worst, "syntax_errors_positioned": syntax_ok},
    )


ALL_CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11,
)


def run_suite(printer=print) -> list[CriterionResult]:
    ctx = SuiteContext()
    results = []
    for crit in ALL_CRITERIA:
        result = crit(ctx)
        results.append(result)
        if printer is not None:
            printer(result.line())
    return results
