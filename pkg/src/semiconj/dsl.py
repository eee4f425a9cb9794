"""Expression DSL for defining analytic self-maps.

Grammar (EBNF, whitespace ignored):

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , exponent ] ;
    exponent= [ "-" ] , integer ;
    atom    = number | "i" | "z" | func , "(" , expr , ")" | "(" , expr , ")" ;
    func    = "sqrt" | "log" | "exp" ;
    number  = digits , [ "." , digits ] , [ ("e"|"E") , [ "+"|"-" ] , digits ] ;

Precedence: ^ binds tighter than unary minus, which binds tighter than * /,
which bind tighter than + -.  Equal-precedence binary operators associate
left; ^ associates right but its exponent must be an integer literal.
``sqrt`` and ``log`` use principal branches (cut along the negative real
axis); real powers should be written exp(gamma*log(z)) so the branch is
explicit.  Evaluation at a pole or branch point returns the INFINITY
sentinel instead of raising.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, NotASelfMapError, ParseError
from .geometry import INFINITY, as_complex, disk_to_halfplane
from .sampling import halton_disk_points

FUNCTIONS = ("sqrt", "log", "exp")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Var | Const | Neg | Add | Sub | Mul | Div | Pow | Call

Z = Var()
ONE = Const(1.0 + 0.0j)
ZERO = Const(0.0 + 0.0j)


# ---------------------------------------------------------------------------
# Lexer / parser
# ---------------------------------------------------------------------------

_OPS = "+-*/^()"


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, offset) triples; kinds: num, name, op."""
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in _OPS:
            tokens.append(("op", ch, pos))
            pos += 1
            continue
        if ch.isdigit() or (ch == "." and pos + 1 < n and src[pos + 1].isdigit()):
            start = pos
            while pos < n and src[pos].isdigit():
                pos += 1
            if pos < n and src[pos] == ".":
                pos += 1
                while pos < n and src[pos].isdigit():
                    pos += 1
            if pos < n and src[pos] in "eE":
                look = pos + 1
                if look < n and src[look] in "+-":
                    look += 1
                if look < n and src[look].isdigit():
                    pos = look
                    while pos < n and src[pos].isdigit():
                        pos += 1
            tokens.append(("num", src[start:pos], start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (src[pos].isalnum() or src[pos] == "_"):
                pos += 1
            tokens.append(("name", src[start:pos], start))
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"got {text!r}" if text else "unexpected end of input", off, (op,))
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {text!r}", off, ("operator", "end of input"))
        return e

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.unary()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        kind, text, off = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            sign = -1
            kind, text, off = self.peek()
        if kind != "num":
            raise ParseError(
                f"got {text!r}" if text else "unexpected end of input",
                off,
                ("integer exponent",),
            )
        if "." in text or "e" in text or "E" in text:
            raise ParseError(f"exponent {text!r} is not an integer literal", off,
                             ("integer exponent",))
        self.advance()
        return sign * int(text)

    def atom(self) -> Expr:
        kind, text, off = self.advance()
        if kind == "num":
            return Const(complex(float(text), 0.0))
        if kind == "name":
            if text == "z":
                return Z
            if text == "i":
                nkind, ntext, _ = self.peek()
                if nkind == "op" and ntext == "(":
                    raise ParseError("'i' is the imaginary unit, not a function", off,
                                     ("operator",))
                return Const(1j)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ParseError(f"unknown name {text!r}", off, ("z", "i") + FUNCTIONS)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(
            f"got {text!r}" if text else "unexpected end of input",
            off,
            ("number", "z", "i", "function", "("),
        )


def parse(src: str) -> Expr:
    """Parse an expression string into an AST; raises ParseError with offset."""
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Printing (round-trips through parse)
# ---------------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Call: 5, Const: 5, Var: 5}


def _const_source(value: complex) -> str:
    re, im = value.real + 0.0, value.imag + 0.0  # normalize -0.0
    if im == 0.0:
        return repr(re) if re >= 0 else f"(-{repr(-re)})"
    if re == 0.0:
        if im == 1.0:
            return "i"
        return f"({repr(im)}*i)" if im >= 0 else f"(-{repr(-im)}*i)"
    im_part = f"+{repr(im)}*i" if im >= 0 else f"-{repr(-im)}*i"
    re_part = repr(re) if re >= 0 else f"-{repr(-re)}"
    return f"({re_part}{im_part})"


def to_source(e: Expr) -> str:
    """Render an AST back to parseable source with minimal parentheses."""

    def wrap(child: Expr, parent_prec: int, strict: bool = False) -> str:
        s = to_source(child)
        prec = _PREC[type(child)]
        if prec < parent_prec or (strict and prec == parent_prec):
            return f"({s})"
        return s

    if isinstance(e, Var):
        return "z"
    if isinstance(e, Const):
        return _const_source(e.value)
    if isinstance(e, Neg):
        return f"-{wrap(e.operand, _PREC[Neg])}"
    if isinstance(e, Add):
        return f"{wrap(e.left, 1)} + {wrap(e.right, 1, strict=True)}"
    if isinstance(e, Sub):
        return f"{wrap(e.left, 1)} - {wrap(e.right, 1, strict=True)}"
    if isinstance(e, Mul):
        return f"{wrap(e.left, 2)}*{wrap(e.right, 2, strict=True)}"
    if isinstance(e, Div):
        return f"{wrap(e.left, 2)}/{wrap(e.right, 2, strict=True)}"
    if isinstance(e, Pow):
        base = wrap(e.base, _PREC[Pow], strict=True)
        exp = str(e.exponent) if e.exponent >= 0 else f"(-{-e.exponent})"
        return f"{base}^{exp}"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Evaluation (compiled once per AST)
# ---------------------------------------------------------------------------


def _pycode(e: Expr) -> str:
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Const):
        return f"complex({e.value.real!r}, {e.value.imag!r})"
    if isinstance(e, Neg):
        return f"(-{_pycode(e.operand)})"
    if isinstance(e, Add):
        return f"({_pycode(e.left)} + {_pycode(e.right)})"
    if isinstance(e, Sub):
        return f"({_pycode(e.left)} - {_pycode(e.right)})"
    if isinstance(e, Mul):
        return f"({_pycode(e.left)} * {_pycode(e.right)})"
    if isinstance(e, Div):
        return f"({_pycode(e.left)} / {_pycode(e.right)})"
    if isinstance(e, Pow):
        return f"({_pycode(e.base)} ** {e.exponent})"
    if isinstance(e, Call):
        return f"_{e.func}({_pycode(e.arg)})"
    raise TypeError(f"not an Expr: {e!r}")


_EVAL_GLOBALS = {
    "__builtins__": {},
    "complex": complex,
    "_sqrt": cmath.sqrt,
    "_log": cmath.log,
    "_exp": cmath.exp,
}


@lru_cache(maxsize=512)
def _compiled(e: Expr):
    return compile(_pycode(e), "<mapdsl>", "eval")


def evaluate(e: Expr, z):
    """Evaluate at a finite point; non-finite outcomes return INFINITY."""
    w = as_complex(z)
    try:
        v = eval(_compiled(e), _EVAL_GLOBALS, {"z": w})  # noqa: S307 (sandboxed env)
    except (ZeroDivisionError, OverflowError, ValueError):
        return INFINITY
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return INFINITY
    return v


_ARRAY_GLOBALS = {
    "__builtins__": {},
    "complex": complex,
    "_sqrt": None,  # filled lazily to keep numpy import out of the scalar path
    "_log": None,
    "_exp": None,
}


def evaluate_array(e: Expr, zs):
    """Vectorized evaluation on a complex numpy array (principal branches).

    Poles and overflows surface as non-finite entries for the caller to
    handle; no sentinel substitution happens here.
    """
    import numpy as np

    if _ARRAY_GLOBALS["_sqrt"] is None:
        _ARRAY_GLOBALS.update(_sqrt=np.sqrt, _log=np.log, _exp=np.exp)
    with np.errstate(all="ignore"):
        out = eval(_compiled(e), _ARRAY_GLOBALS, {"z": zs})  # noqa: S307
    return np.asarray(out, dtype=complex) + np.zeros_like(zs)


# ---------------------------------------------------------------------------
# Symbolic differentiation
# ---------------------------------------------------------------------------


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return Neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def differentiate(e: Expr) -> Expr:
    """Exact symbolic derivative with light constant folding."""
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Neg):
        d = differentiate(e.operand)
        return Const(-d.value) if _is_const(d) else Neg(d)
    if isinstance(e, Add):
        return _add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        return _add(_mul(differentiate(e.left), e.right), _mul(e.left, differentiate(e.right)))
    if isinstance(e, Div):
        num = _sub(_mul(differentiate(e.left), e.right), _mul(e.left, differentiate(e.right)))
        return _div(num, Pow(e.right, 2))
    if isinstance(e, Pow):
        n = e.exponent
        if n == 0:
            return ZERO
        inner = differentiate(e.base)
        if n == 1:
            return inner
        if n == 2:
            factor = _mul(Const(complex(n)), e.base)
        else:
            factor = _mul(Const(complex(n)), Pow(e.base, n - 1))
        return _mul(factor, inner)
    if isinstance(e, Call):
        inner = differentiate(e.arg)
        if e.func == "exp":
            return _mul(e, inner)
        if e.func == "log":
            return _div(inner, e.arg)
        if e.func == "sqrt":
            return _div(inner, _mul(Const(2.0 + 0.0j), e))
    raise TypeError(f"not an Expr: {e!r}")


def substitute(e: Expr, replacement: Expr) -> Expr:
    """Replace the variable z by another expression (symbolic composition)."""
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Const):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, replacement))
    if isinstance(e, (Add, Sub, Mul, Div)):
        return type(e)(substitute(e.left, replacement), substitute(e.right, replacement))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, replacement), e.exponent)
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, replacement))
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# ParsedMap and the self-map check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParsedMap:
    """An expression, its exact symbolic derivative, and a domain tag."""

    expr: Expr
    derivative: Expr
    domain: str  # "disk" | "halfplane"

    @classmethod
    def from_source(cls, src: str, domain: str) -> "ParsedMap":
        if domain not in ("disk", "halfplane"):
            raise ValueError(f"domain must be 'disk' or 'halfplane', got {domain!r}")
        expr = parse(src)
        return cls(expr, differentiate(expr), domain)

    def __call__(self, z):
        return evaluate(self.expr, z)

    def derivative_at(self, z):
        return evaluate(self.derivative, z)

    def source(self) -> str:
        return to_source(self.expr)


@dataclass(frozen=True)
class SelfMapReport:
    """Outcome of sampling-based self-map validation."""

    samples: int
    max_schwarz_pick: float
    likely_automorphism: bool
    worst_margin: float  # min of Im(phi) (halfplane) or 1-|phi| (disk) over samples


def _interior_samples(domain: str, count: int) -> list[complex]:
    disk_pts = halton_disk_points(count, radius=0.995)
    if domain == "disk":
        return disk_pts
    out = []
    for w in disk_pts:
        z = disk_to_halfplane(w)
        if z is not INFINITY and z.imag > 0:
            out.append(z)
    return out


def _schwarz_pick_quotient(m: ParsedMap, z: complex) -> float:
    w = m(z)
    dw = m.derivative_at(z)
    if w is INFINITY or dw is INFINITY:
        return math.nan
    if m.domain == "halfplane":
        if w.imag <= 0:
            return math.inf
        return abs(dw) * z.imag / w.imag
    den = 1.0 - abs(w) ** 2
    if den <= 0:
        return math.inf
    return abs(dw) * (1.0 - abs(z) ** 2) / den

def check_selfmap(m: ParsedMap, samples: int = 200,
                  automorphism_tol: float = 1e-9) -> SelfMapReport:
    """Validate that m maps its domain into itself, on quasi-random points.

    Raises NotASelfMapError (with a witness) on any violation of Im phi > 0
    (half-plane) or |phi| < 1 (disk).  The Schwarz-Pick quotient

        |phi'(z)| Im z / Im phi(z)      resp.
        |phi'(z)| (1-|z|^2) / (1-|phi(z)|^2)

    is <= 1 for self-maps with equality only for automorphisms; when it
    exceeds 1 - automorphism_tol at 20 probe points the report flags the map
    as a likely automorphism (the renormalization engines reject those).
    """
    if samples < 100:
        raise ValueError("check_selfmap needs samples >= 100")
    pts = _interior_samples(m.domain, samples)
    worst_margin = math.inf
    for z in pts:
        w = m(z)
        if w is INFINITY:
            raise NotASelfMapError("map has a pole inside its domain", witness=z)
        margin = w.imag if m.domain == "halfplane" else 1.0 - abs(w)
        if margin <= 0.0:
            raise NotASelfMapError(
                f"map leaves the {m.domain} at z = {z}", witness=z
            )
        worst_margin = min(worst_margin, margin)
    quotients = []
    for z in pts[:20]:
        q = _schwarz_pick_quotient(m, z)
        if not math.isnan(q):
            quotients.append(q)
    max_q = max(quotients) if quotients else math.nan
    likely_aut = bool(quotients) and all(q > 1.0 - automorphism_tol for q in quotients)
    return SelfMapReport(
        samples=len(pts),
        max_schwarz_pick=max_q,
        likely_automorphism=likely_aut,
        worst_margin=worst_margin,
    )


def finite_difference_derivative(e: Expr, z: complex, scale: float = 1e-5) -> complex:
    """4th-order central difference, used by tests as the independent oracle."""
    h = scale * (1.0 + abs(z))
    f = lambda w: evaluate(e, w)
    vals = [f(z + 2 * h), f(z + h), f(z - h), f(z - 2 * h)]
    if any(v is INFINITY for v in vals):
        raise DomainError("finite difference stencil hit a pole")
    return (-vals[0] + 8 * vals[1] - 8 * vals[2] + vals[3]) / (12 * h)
