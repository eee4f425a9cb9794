"""Parser, printer, evaluator, symbolic derivative, self-map validation."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiconj import (
    NotASelfMapError,
    ParseError,
    ParsedMap,
    check_selfmap,
    differentiate,
    evaluate,
    is_infinity,
    parse,
    substitute,
    to_source,
)
from semiconj.dsl import (
    Add,
    Call,
    Const,
    Div,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    evaluate_array,
    finite_difference_derivative,
)


class TestParse:
    def test_simple_sum(self):
        assert parse("2*z + i") == Add(Mul(Const(2.0 + 0j), Var()), Const(1j))

    def test_precedence(self):
        # z + 1 - 1/(z+i): subtraction binds last, division tighter
        e = parse("z + 1 - 1/(z+i)")
        expected = Sub(
            Add(Var(), Const(1.0 + 0j)),
            Div(Const(1.0 + 0j), Add(Var(), Const(1j))),
        )
        assert e == expected

    def test_power_tighter_than_unary_minus(self):
        assert parse("-z^2") == Neg(Pow(Var(), 2))

    def test_power_right_assoc_requires_integer(self):
        assert parse("z^3") == Pow(Var(), 3)
        assert parse("z^-2") == Pow(Var(), -2)
        with pytest.raises(ParseError):
            parse("z^1.5")
        with pytest.raises(ParseError):
            parse("z^z")

    def test_incomplete_power_offset(self):
        with pytest.raises(ParseError) as err:
            parse("z ^")
        assert err.value.offset == 3
        assert "integer exponent" in err.value.expected

    def test_unknown_name(self):
        with pytest.raises(ParseError) as err:
            parse("q + 1")
        assert err.value.offset == 0

    def test_i_not_callable(self):
        with pytest.raises(ParseError):
            parse("i(z)")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse("   ")

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError) as err:
            parse("(z+1")
        assert err.value.offset == 4

    def test_scientific_notation(self):
        assert parse("1.5e-3") == Const(0.0015 + 0j)

    def test_functions(self):
        assert parse("sqrt(z)") == Call("sqrt", Var())
        assert parse("exp(0.5*log(z))") == Call(
            "exp", Mul(Const(0.5 + 0j), Call("log", Var()))
        )


def expr_sources():
    """Parseable source strings via generated ASTs (round-trip property)."""
    consts = st.floats(0.0, 100.0, allow_nan=False).map(lambda x: Const(complex(x)))
    base = st.one_of(st.just(Var()), consts, st.just(Const(1j)))
    return st.recursive(
        base,
        lambda inner: st.one_of(
            st.builds(Add, inner, inner),
            st.builds(Sub, inner, inner),
            st.builds(Mul, inner, inner),
            st.builds(Div, inner, inner),
            st.builds(Neg, inner),
            st.builds(Pow, inner, st.integers(-3, 5)),
            st.builds(Call, st.sampled_from(["sqrt", "log", "exp"]), inner),
        ),
        max_leaves=20,
    ).map(to_source)


class TestPrinting:
    @settings(deadline=None, max_examples=200)
    @given(expr_sources())
    def test_parse_print_parse_idempotent(self, src):
        first = parse(src)
        again = parse(to_source(first))
        assert again == first

    def test_examples_round_trip(self):
        for src in ("2*z + i", "z + 1 - 1/(z+i)", "-z^2", "z/(z*z)", "sqrt(z)^-2"):
            e = parse(src)
            assert parse(to_source(e)) == e


class TestEvaluate:
    def test_square(self):
        assert evaluate(parse("z^2"), 1 + 1j) == pytest.approx(2j)

    def test_principal_sqrt(self):
        v = evaluate(parse("sqrt(z)"), 1j)
        assert v == pytest.approx((1 + 1j) / math.sqrt(2))

    def test_pole_flag(self):
        assert is_infinity(evaluate(parse("1/(z+i)"), -1j))

    def test_log_zero_flag(self):
        assert is_infinity(evaluate(parse("log(z)"), 0.0))

    def test_overflow_flag(self):
        assert is_infinity(evaluate(parse("exp(z)"), 1e9))

    def test_composition_consistency(self):
        inner = parse("(z+i)/2")
        outer = parse("sqrt(z)")
        composed = substitute(outer, inner)
        for z in (1 + 1j, 2j, -0.5 + 0.3j):
            direct = evaluate(outer, evaluate(inner, z))
            assert evaluate(composed, z) == pytest.approx(direct)

    def test_array_matches_scalar(self):
        e = parse("z + 1 - 1/(z+i)")
        zs = np.array([1j, 2 + 1j, -1 + 0.5j])
        vals = evaluate_array(e, zs)
        for z, v in zip(zs, vals):
            assert v == pytest.approx(evaluate(e, complex(z)))


class TestDifferentiate:
    def test_affine(self):
        assert differentiate(parse("2*z+i")) == Const(2.0 + 0j)

    def test_quotient_by_hand(self):
        # d/dz (z + 1 - 1/(z+i)) = 1 + 1/(z+i)^2
        d = differentiate(parse("z + 1 - 1/(z+i)"))
        for z in (1j, 1 + 2j, -0.3 + 0.7j):
            expected = 1 + 1 / (z + 1j) ** 2
            assert evaluate(d, z) == pytest.approx(expected)

    def test_sqrt(self):
        d = differentiate(parse("sqrt(z)"))
        for z in (1 + 1j, 4.0 + 0.1j):
            assert evaluate(d, z) == pytest.approx(1 / (2 * cmath.sqrt(z)))

    def test_negative_power(self):
        d = differentiate(parse("z^-2"))
        z = 0.7 + 0.4j
        assert evaluate(d, z) == pytest.approx(-2 * z ** -3)

    @pytest.mark.parametrize(
        "src",
        ["2*z+i", "z+1-1/(z+i)", "(z^2+z)/2", "z^2", "sqrt(z)",
         "exp(0.5*log(z))", "log(z)/2", "exp(i*z)", "z^3/(1+z^2)"],
    )
    def test_against_finite_differences(self, src):
        e = parse(src)
        d = differentiate(e)
        rng = np.random.default_rng(5)
        for _ in range(100):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2.5))
            exact = evaluate(d, z)
            if is_infinity(exact):
                continue
            approx = finite_difference_derivative(e, z)
            assert abs(approx - exact) <= 1e-6 * max(abs(exact), 1e-9)


class TestCheckSelfmap:
    def test_halfplane_pass(self):
        m = ParsedMap.from_source("2*z + i", "halfplane")
        rep = check_selfmap(m)
        assert not rep.likely_automorphism
        assert rep.max_schwarz_pick < 1.0

    def test_disk_pass(self):
        m = ParsedMap.from_source("(z^2+z)/2", "disk")
        rep = check_selfmap(m)
        assert rep.worst_margin > 0

    def test_violation_carries_witness(self):
        m = ParsedMap.from_source("z - i", "halfplane")
        with pytest.raises(NotASelfMapError) as err:
            check_selfmap(m)
        w = err.value.witness
        assert w.imag > 0 and (w - 1j).imag <= 0

    def test_automorphism_flagged(self):
        m = ParsedMap.from_source("z + 1", "halfplane")
        rep = check_selfmap(m)
        assert rep.likely_automorphism

    def test_samples_floor(self):
        m = ParsedMap.from_source("2*z+i", "halfplane")
        with pytest.raises(ValueError):
            check_selfmap(m, samples=50)
