"""Command-line front end.

Subcommands: classify, semiconj, verify, intertwine, suite.  Reports are
JSON on stdout (schema 1); errors are structured JSON on stderr.  Exit
codes: 0 success, 1 check failure, 2 usage error, 3 numerical error
(non-convergence / precision / inconclusive).  The SEMICONJ_MAX_ITER
environment variable overrides the iteration cap.
"""

from __future__ import annotations

import argparse
import cmath
import math
import os
import sys

import numpy as np

from . import report
from .dynamics import ClassifyConfig, SelfMap, classify
from .eqlab import (
    IntertwinerSpec,
    PlanarAffine,
    SolutionPair,
    base_point_identity,
    canonicity_check,
    make_intertwiner,
    maximality_check,
    membership_check,
    residual as equation_residual,
)
from .errors import (
    EmptyFamilyError,
    InconclusiveError,
    NonConvergenceError,
    OrbitPrecisionError,
    ParseError,
    PrecisionError,
    ResidualError,
    SemiconjError,
    UnstableLimitError,
    UsageError,
)
from .dsl import ParsedMap
from .geometry import MoebiusMap, is_infinity
from .renorm import RenormConfig, halfplane_semiconjugation, planar_semiconjugation
from .sampling import halfplane_pairs
from .suite import run_suite

NUMERICAL_ERRORS = (
    NonConvergenceError,
    PrecisionError,
    OrbitPrecisionError,
    UnstableLimitError,
    InconclusiveError,
    ResidualError,
)

MAX_ITER_LIMIT = 1_000_000


def _parse_complex(text: str) -> complex:
    """Parse 're,im' into a complex number (shell-safe flag format)."""
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise UsageError(f"bad complex literal {text!r}: {exc}") from None


def _parse_tau(text: str):
    """2 floats -> real affine a,b; 4 floats -> complex affine (planar)."""
    parts = text.split(",")
    try:
        nums = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad tau {text!r}: {exc}") from None
    if len(nums) == 2:
        return nums[0], nums[1]
    if len(nums) == 4:
        return complex(nums[0], nums[1]), complex(nums[2], nums[3])
    raise UsageError("tau needs 'a,b' (real) or 're,im,re,im' (complex)")


def _default_seed(domain: str) -> complex:
    return 1j if domain == "halfplane" else 0.25 + 0.25j


def _effective_max_iter(requested: int | None, fallback: int) -> int:
    env = os.environ.get("SEMICONJ_MAX_ITER")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"SEMICONJ_MAX_ITER={env!r} is not an integer") from None
    else:
        value = requested if requested is not None else fallback
    if not (0 < value <= MAX_ITER_LIMIT):
        raise UsageError(f"max-iter must be in (0, {MAX_ITER_LIMIT}]")
    return value


def _classification_payload(c) -> dict:
    seed_diag = c.confidence.get("seeds", [{}])[0]
    a_digits = report.digits_from_error(seed_diag.get("A_spread"))
    return {
        "kind": c.kind,
        "dw_point": report.cnum(c.dw_point),
        "multiplier": report.num(c.multiplier, a_digits) if c.multiplier is not None else None,
        "A": report.num(c.A, a_digits) if c.A is not None else None,
        "s_inf": report.num(c.s_inf, 9),
        "orientation_sign": c.orientation_sign,
        "confidence": {
            "iterations": seed_diag.get("iterations"),
            "escaped": seed_diag.get("escaped"),
            "A_spread": report.num(seed_diag.get("A_spread"), report.MACHINE_DIGITS)
            if seed_diag.get("A_spread") is not None else None,
            "plateau_drop": report.num(seed_diag.get("plateau_drop"), report.MACHINE_DIGITS)
            if seed_diag.get("plateau_drop") is not None else None,
            "seeds_agreeing": c.confidence.get("agreement"),
        },
    }


def _semiconj_payload(result) -> dict:
    value_digits = report.digits_from_error(
        max(result.precision_report.get("error_estimate", 0.0), result.sup_cauchy_gap)
    )
    b_digits = report.digits_from_error(result.precision_report.get("b_spread"))
    payload = {
        "kind": result.kind,
        "A": report.num(result.A, 9) if result.A is not None else None,
        "b": report.num(result.b, b_digits) if result.b is not None else None,
        "base_point": report.cnum(result.base_point),
        "base_value": report.cnum(result.base_value, value_digits),
        "iterations_used": result.iterations_used,
        "sup_cauchy_gap": report.num(result.sup_cauchy_gap),
        "residual": report.num(result.residual),
        "grid": [report.cnum(z) for z in result.grid],
        "values": [report.cnum(v, value_digits) for v in result.values],
        "precision": {
            "min_digits": report.num(result.precision_report.get("min_digits", 0.0), 2),
            "error_estimate": report.num(
                result.precision_report.get("error_estimate", 0.0)
            ),
        },
    }
    return payload


def _build_renorm_config(args) -> RenormConfig:
    kwargs = {}
    kwargs["max_iter"] = _effective_max_iter(args.max_iter, RenormConfig.max_iter)
    if args.tol is not None:
        if args.tol <= 0:
            raise UsageError("tol must be positive")
        kwargs["tol"] = args.tol
    if getattr(args, "res_tol", None) is not None:
        if args.res_tol <= 0:
            raise UsageError("res-tol must be positive")
        kwargs["res_tol"] = args.res_tol
    if getattr(args, "grid_radius", None) is not None:
        kwargs["grid_radius"] = args.grid_radius
    if getattr(args, "grid_size", None) is not None:
        kwargs["grid_size"] = args.grid_size
    return RenormConfig(**kwargs)


def _selfmap_from_args(args) -> SelfMap:
    return SelfMap.from_source(args.map, args.domain)


def _cmd_classify(args) -> tuple[int, dict]:
    m = _selfmap_from_args(args)
    seeds = [_parse_complex(s) for s in args.seed] if args.seed else [_default_seed(args.domain)]
    cfg = ClassifyConfig(max_iter=_effective_max_iter(args.max_iter, ClassifyConfig.max_iter))
    c = classify(m, seeds, cfg)
    payload = {
        "schema": 1,
        "command": "classify",
        "config": {"map": args.map, "domain": args.domain,
                   "seeds": [report.cnum(s) for s in seeds]},
        "classification": _classification_payload(c),
    }
    return 0, payload


def _cmd_semiconj(args) -> tuple[int, dict | str]:
    m = _selfmap_from_args(args)
    z0 = _parse_complex(args.seed) if args.seed else _default_seed(args.domain)
    cfg = _build_renorm_config(args)
    c = classify(m, [z0])
    model = args.model
    if model is None:
        model = "planar" if c.kind == "parabolic-zero-step" else "halfplane"
    if model == "halfplane":
        result = halfplane_semiconjugation(m, z0, cfg=cfg, classification=c)
    else:
        result = planar_semiconjugation(m, z0, cfg=cfg, classification=c)
    if args.output == "csv":
        return 0, report.grid_csv(result.grid, result.values)
    payload = {
        "schema": 1,
        "command": "semiconj",
        "config": {
            "map": args.map,
            "domain": args.domain,
            "seed": report.cnum(z0),
            "model": model,
        },
        "result": _semiconj_payload(result),
    }
    return 0, payload


def _cmd_verify(args) -> tuple[int, dict]:
    m = _selfmap_from_args(args)
    z0 = _parse_complex(args.seed) if args.seed else _default_seed(args.domain)
    cfg = _build_renorm_config(args)
    c = classify(m, [z0])
    res_tol = args.res_tol if args.res_tol is not None else 1e-6

    sigma = ParsedMap.from_source(args.sigma, args.domain)
    a, b = _parse_tau(args.tau)
    planar_wanted = args.equation == "planar" or c.kind == "parabolic-zero-step"
    if planar_wanted:
        engine_result = planar_semiconjugation(m, z0, cfg=cfg, classification=c)
        pair = SolutionPair(sigma=sigma, tau=PlanarAffine(complex(a), complex(b)),
                            equation="planar", codomain="plane")
    else:
        engine_result = halfplane_semiconjugation(m, z0, cfg=cfg, classification=c)
        pair = SolutionPair(sigma=sigma, tau=MoebiusMap.affine(a, b))

    res = equation_residual(pair, m, engine_result.grid)
    checks = {"residual": report.num(res), "residual_ok": res < res_tol}

    verdict = canonicity_check(pair, engine_result)
    checks["canonical"] = verdict.canonical
    checks["canonicity_fit_residual"] = report.num(verdict.fit_residual)
    checks["canonicity_sub_verdicts_agree"] = verdict.sub_verdicts_agree

    if not planar_wanted:
        rng = np.random.default_rng(17)
        pairs = halfplane_pairs(rng, args.pairs, center=z0 if args.domain == "halfplane" else 1j)
        if args.domain == "disk":
            from .geometry import halfplane_to_disk

            pairs = [(halfplane_to_disk(x), halfplane_to_disk(y)) for x, y in pairs]
        maxrep = maximality_check(pair, engine_result, pairs)
        checks["maximality_violations"] = len(maxrep.violations)
        checks["maximality_strict"] = maxrep.strict_count
        checks["maximality_equalities"] = maxrep.equality_count
        checks["maximality_ok"] = maxrep.passed

    if args.tilde_base:
        zb = _parse_complex(args.tilde_base)
        if planar_wanted:
            other = planar_semiconjugation(m, zb, cfg=cfg)
            dev = base_point_identity(engine_result, other, "planar")
        else:
            mode = "hyperbolic" if engine_result.A > 1.0 else "parabolic-nzs"
            other = halfplane_semiconjugation(m, zb, cfg=cfg)
            dev = base_point_identity(engine_result, other, mode)
        checks["base_point_identity_deviation"] = report.num(dev)
        checks["base_point_identity_ok"] = dev < max(res_tol, 1e-6)

    ok = checks["residual_ok"] and checks.get("maximality_ok", True) and checks.get(
        "base_point_identity_ok", True
    )
    payload = {
        "schema": 1,
        "command": "verify",
        "config": {
            "map": args.map, "domain": args.domain, "sigma": args.sigma,
            "tau": args.tau, "equation": "planar" if planar_wanted else "forward",
            "seed": report.cnum(z0),
        },
        "checks": checks,
        "passed": bool(ok),
    }
    return (0 if ok else 1), payload


_FAMILY_ALIASES = {
    "h-h": "h->h", "h-p": "h->p", "h-e": "h->e",
    "p-p": "p->p", "p-h": "p->h", "p-e": "p->e",
    "planar-p-p": "planar p->p", "planar-p-e": "planar p->e",
    "planar-e-p": "planar e->p",
}


def _cmd_intertwine(args) -> tuple[int, dict]:
    family = _FAMILY_ALIASES.get(args.family, args.family)
    kwargs = {}
    if args.S is not None:
        kwargs["S"] = args.S
    if args.T is not None:
        kwargs["T"] = args.T
    if args.theta is not None:
        kwargs["theta"] = args.theta
    if args.sign is not None:
        kwargs["sign"] = args.sign
    if args.d is not None:
        kwargs["d"] = args.d
    if args.c is not None:
        kwargs["c"] = _parse_complex(args.c) if "," in args.c else complex(float(args.c))
    if args.a is not None:
        kwargs["a"] = _parse_complex(args.a) if "," in args.a else complex(float(args.a))
    try:
        spec = IntertwinerSpec(family, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    it = make_intertwiner(spec)
    rep = membership_check(it, spec)
    payload = {
        "schema": 1,
        "command": "intertwine",
        "config": {"family": family, **{k: report.cnum(v) if isinstance(v, complex) else v
                                        for k, v in kwargs.items()}},
        "member": it.source(),
        "membership": {
            "residual": report.num(rep.residual),
            "codomain_ok": rep.codomain_ok,
            "grid_size": rep.grid_size,
            "decay_magnitudes": [report.num(x, 12) for x in rep.decay_magnitudes]
            if rep.decay_magnitudes else None,
            "decay_monotone": rep.decay_monotone,
        },
        "passed": rep.passed,
    }
    return (0 if rep.passed else 1), payload


def _cmd_suite(args) -> tuple[int, dict]:
    results = run_suite(printer=lambda line: print(line, file=sys.stderr))
    payload = {
        "schema": 1,
        "command": "suite",
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    return (0 if payload["passed"] else 1), payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiconj",
        description="Classify analytic self-maps and compute/verify their "
                    "semiconjugations onto model automorphisms.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_map_args(p):
        p.add_argument("--map", required=True, help="map expression, e.g. '2*z + i'")
        p.add_argument("--domain", choices=("halfplane", "disk"), default="halfplane")
        p.add_argument("--max-iter", type=int, default=None)

    p_classify = sub.add_parser("classify", help="Denjoy-Wolff type classification")
    add_map_args(p_classify)
    p_classify.add_argument("--seed", action="append", default=None,
                            help="interior seed 're,im' (repeatable)")
    p_classify.set_defaults(func=_cmd_classify)

    p_semi = sub.add_parser("semiconj", help="compute the renormalized limit map")
    add_map_args(p_semi)
    p_semi.add_argument("--seed", default=None, help="base point 're,im'")
    p_semi.add_argument("--model", choices=("halfplane", "planar"), default=None,
                        help="override the engine selected by classification")
    p_semi.add_argument("--tol", type=float, default=None)
    p_semi.add_argument("--res-tol", type=float, default=None)
    p_semi.add_argument("--grid-radius", type=float, default=None)
    p_semi.add_argument("--grid-size", type=int, default=None)
    p_semi.add_argument("--output", choices=("json", "csv"), default="json")
    p_semi.set_defaults(func=_cmd_semiconj)

    p_verify = sub.add_parser("verify", help="check a candidate solution pair")
    add_map_args(p_verify)
    p_verify.add_argument("--sigma", required=True, help="candidate sigma expression")
    p_verify.add_argument("--tau", required=True,
                          help="model automorphism 'a,b' (z -> a z + b); "
                               "'re,im,re,im' for complex planar coefficients")
    p_verify.add_argument("--equation", choices=("forward", "planar"), default="forward")
    p_verify.add_argument("--seed", default=None, help="base point 're,im'")
    p_verify.add_argument("--tilde-base", default=None,
                          help="second base point 're,im' for the rebase identity")
    p_verify.add_argument("--pairs", type=int, default=200)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--res-tol", type=float, default=None)
    p_verify.set_defaults(func=_cmd_verify)

    p_inter = sub.add_parser("intertwine", help="construct and check intertwiners")
    p_inter.add_argument("--family", required=True,
                         help="h-h, h-p, h-e, p-p, p-h, p-e, planar-p-p, planar-p-e")
    p_inter.add_argument("--S", type=float, default=None)
    p_inter.add_argument("--T", type=float, default=None)
    p_inter.add_argument("--theta", type=float, default=None)
    p_inter.add_argument("--sign", default=None)
    p_inter.add_argument("--d", type=float, default=None)
    p_inter.add_argument("--c", default=None, help="scale/offset, float or 're,im'")
    p_inter.add_argument("--a", default=None, help="target multiplier, float or 're,im'")
    p_inter.set_defaults(func=_cmd_intertwine)

    p_suite = sub.add_parser("suite", help="run the acceptance battery")
    p_suite.set_defaults(func=_cmd_suite)
    return parser


def _error_payload(exc: Exception) -> dict:
    payload: dict = {
        "schema": 1,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    witness = getattr(exc, "witness", None)
    if witness is not None and not is_infinity(witness):
        payload["error"]["witness"] = report.cnum(witness)
    offset = getattr(exc, "offset", None)
    if offset is not None:
        payload["error"]["offset"] = offset
    return payload


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        code, payload = args.func(args)
    except (ParseError, UsageError) as exc:
        sys.stderr.write(report.dumps(_error_payload(exc)))
        return 2
    except NUMERICAL_ERRORS as exc:
        sys.stderr.write(report.dumps(_error_payload(exc)))
        return 3
    except SemiconjError as exc:
        sys.stderr.write(report.dumps(_error_payload(exc)))
        return 1
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        sys.stdout.write(report.dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
