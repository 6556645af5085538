"""Expression trees for the family DSL and their exact evaluation.

Values produced by evaluation are one of

* ``Fraction``         exact rational (signed),
* ``INF``              symbolic +infinity,
* ``Exp(q)``           e**q with rational q,
* ``Log(c, x)``        c*log(x) with rational c and rational x > 0,
* ``float``            anything that left the exact fragment.

Keeping ``Exp`` and ``Log`` symbolic is what makes weights such as
``exp(-n) ^ log(j) = j^(-n)`` come out exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple, Union

from .scalars import DEFAULT_TOL, XPos, exact_root


class EvaluationError(ArithmeticError):
    pass


class NonPositiveWeight(EvaluationError):
    pass


class _Inf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Inf, ())


INF = _Inf()


@dataclass(frozen=True)
class Exp:
    q: Fraction


@dataclass(frozen=True)
class Log:
    c: Fraction
    x: Fraction


Value = Union[Fraction, _Inf, Exp, Log, float]


def _exp(q: Fraction) -> Value:
    return Fraction(1) if q == 0 else Exp(q)


def _log(c: Fraction, x: Fraction) -> Value:
    if c == 0 or x == 1:
        return Fraction(0)
    return Log(c, x)


def to_float(v: Value) -> float:
    if isinstance(v, Fraction):
        return float(v)
    if v is INF:
        return math.inf
    if isinstance(v, Exp):
        return math.exp(v.q)
    if isinstance(v, Log):
        return float(v.c) * math.log(v.x)
    return float(v)


def is_exact(v: Value) -> bool:
    return not isinstance(v, float)


def v_neg(a: Value) -> Value:
    if isinstance(a, Fraction):
        return -a
    if isinstance(a, Log):
        return Log(-a.c, a.x)
    if a is INF:
        raise EvaluationError("negative infinity is not a weight value")
    return -to_float(a)


def v_add(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if a is INF or b is INF:
        return INF
    if isinstance(a, Fraction) and a == 0:
        return b
    if isinstance(b, Fraction) and b == 0:
        return a
    if isinstance(a, Log) and isinstance(b, Log):
        if a.x == b.x:
            return _log(a.c + b.c, a.x)
        if a.c == b.c:
            return _log(a.c, a.x * b.x)
    return to_float(a) + to_float(b)


def v_sub(a: Value, b: Value) -> Value:
    if b is INF:
        raise EvaluationError("subtraction of infinity")
    return v_add(a, v_neg(b))


def v_mul(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if a is INF or b is INF:
        other = b if a is INF else a
        if other is INF or to_float(other) > 0:
            return INF
        raise EvaluationError("infinity times a nonpositive value")
    if isinstance(a, Exp) and isinstance(b, Exp):
        return _exp(a.q + b.q)
    if isinstance(a, Log) and isinstance(b, Fraction):
        return _log(a.c * b, a.x)
    if isinstance(b, Log) and isinstance(a, Fraction):
        return _log(b.c * a, b.x)
    if isinstance(a, Fraction) and a == 0 or isinstance(b, Fraction) and b == 0:
        return Fraction(0)
    return to_float(a) * to_float(b)


def v_div(a: Value, b: Value) -> Value:
    if isinstance(b, Fraction) and b == 0:
        raise EvaluationError("division by zero")
    if a is INF and b is INF:
        return Fraction(1)
    if b is INF:
        return Fraction(0)
    if a is INF:
        if to_float(b) > 0:
            return INF
        raise EvaluationError("infinity divided by a negative value")
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    if isinstance(a, Exp) and isinstance(b, Exp):
        return _exp(a.q - b.q)
    if isinstance(a, Log) and isinstance(b, Fraction):
        return _log(a.c / b, a.x)
    if isinstance(a, Log) and isinstance(b, Log) and a.x == b.x:
        return a.c / b.c
    if isinstance(a, Fraction) and a == 0:
        return Fraction(0)
    return to_float(a) / to_float(b)


def _rat_pow(a: Fraction, e: Fraction) -> Value:
    if e.denominator == 1:
        if a == 0 and e < 0:
            raise EvaluationError("zero to a negative power")
        return a ** int(e)
    if a < 0:
        raise EvaluationError("fractional power of a negative number")
    if a == 0:
        if e < 0:
            raise EvaluationError("zero to a negative power")
        return Fraction(0)
    r = exact_root(a ** e.numerator if e > 0 else (1 / a) ** (-e.numerator), e.denominator)
    if r is not None:
        return r
    return float(a) ** float(e)


def v_pow(a: Value, b: Value) -> Value:
    if isinstance(b, Fraction):
        if a is INF:
            return INF if b > 0 else (Fraction(1) if b == 0 else Fraction(0))
        if isinstance(a, Fraction):
            return _rat_pow(a, b)
        if isinstance(a, Exp):
            return _exp(a.q * b)
        return to_float(a) ** float(b)
    if b is INF:
        fa = to_float(a)
        if fa > 1:
            return INF
        if fa == 1:
            return Fraction(1)
        if fa >= 0:
            return Fraction(0)
        raise EvaluationError("negative base to an infinite power")
    if isinstance(b, Log):
        # a^(c log x) = x^(c log a)
        if isinstance(a, Exp):
            return _rat_pow(b.x, b.c * a.q)
        if isinstance(a, Fraction):
            if a <= 0:
                raise EvaluationError("nonpositive base to a logarithmic power")
            if a == 1:
                return Fraction(1)
            return math.exp(float(b.c) * math.log(b.x) * math.log(a))
        if a is INF:
            return INF if to_float(b) > 0 else (Fraction(1) if to_float(b) == 0 else Fraction(0))
    fa, fb = to_float(a), to_float(b)
    if fa == math.inf:
        return INF if fb > 0 else Fraction(0)
    if fa < 0:
        raise EvaluationError("negative base to a non-integer power")
    return fa ** fb


def v_exp(a: Value) -> Value:
    if isinstance(a, Fraction):
        return _exp(a)
    if isinstance(a, Log):
        return _rat_pow(a.x, a.c)
    if a is INF:
        return INF
    return math.exp(to_float(a))


def v_log(a: Value) -> Value:
    if isinstance(a, Fraction):
        if a <= 0:
            raise EvaluationError("log of a nonpositive number")
        return _log(Fraction(1), a)
    if isinstance(a, Exp):
        return a.q
    if a is INF:
        return INF
    fa = to_float(a)
    if fa <= 0:
        raise EvaluationError("log of a nonpositive number")
    return math.log(fa)


def v_cmp(a: Value, b: Value, tol: float = DEFAULT_TOL) -> int:
    """Exact comparison where possible; raises when floats tie within tol."""
    if a is INF or b is INF:
        return (a is INF) - (b is INF)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    if isinstance(a, Exp) and isinstance(b, Exp):
        return (a.q > b.q) - (a.q < b.q)
    # e**q is positive, so it beats every nonpositive rational exactly
    if isinstance(a, Exp) and isinstance(b, Fraction) and b <= 0:
        return 1
    if isinstance(b, Exp) and isinstance(a, Fraction) and a <= 0:
        return -1
    if isinstance(a, Log) and isinstance(b, Log) and a.x == b.x:
        s = 1 if a.x > 1 else -1
        d = (a.c - b.c) * s
        return (d > 0) - (d < 0)
    fa, fb = to_float(a), to_float(b)
    if abs(fa - fb) <= tol * max(1.0, abs(fa), abs(fb)):
        raise EvaluationError(f"comparison of {a!r} and {b!r} is within tolerance")
    return 1 if fa > fb else -1


def to_xpos(v: Value) -> XPos:
    if v is INF:
        return XPos.inf()
    if isinstance(v, Fraction):
        if v <= 0:
            raise NonPositiveWeight(f"weight value {v} is not positive")
        return XPos.exact(v)
    f = to_float(v)
    if not f > 0:
        raise NonPositiveWeight(f"weight value {f} is not positive")
    return XPos.approx(f)


# --------------------------------------------------------------------------
# AST

Span = Tuple[int, int]


@dataclass(frozen=True)
class Node:
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Num(Node):
    value: Fraction = Fraction(0)


@dataclass(frozen=True)
class InfLit(Node):
    pass


@dataclass(frozen=True)
class Name(Node):
    name: str = ""


@dataclass(frozen=True)
class BinOp(Node):
    op: str = "+"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Neg(Node):
    operand: Node = None


@dataclass(frozen=True)
class Call(Node):
    name: str = ""
    args: Tuple[Node, ...] = ()


@dataclass(frozen=True)
class IfThen(Node):
    cond: Node = None
    then: Node = None
    orelse: Node = None


@dataclass(frozen=True)
class Compare(Node):
    op: str = "<"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class BoolOp(Node):
    op: str = "and"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class NotOp(Node):
    operand: Node = None


@dataclass(frozen=True)
class ListLit(Node):
    items: Tuple[Node, ...] = ()


class CompileError(ValueError):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{message} at line {span[0]}, column {span[1]}")
        self.span = span


_BIN = {"+": v_add, "-": v_sub, "*": v_mul, "/": v_div, "^": v_pow}
_FUN1 = {"log": v_log, "exp": v_exp, "sqrt": lambda a: v_pow(a, Fraction(1, 2))}
_CMP = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    ">": lambda c: c > 0,
    ">=": lambda c: c >= 0,
    "==": lambda c: c == 0,
    "!=": lambda c: c != 0,
}


def _vmin(*xs):
    best = xs[0]
    for x in xs[1:]:
        if v_cmp(x, best) < 0:
            best = x
    return best


def _vmax(*xs):
    best = xs[0]
    for x in xs[1:]:
        if v_cmp(x, best) > 0:
            best = x
    return best


def compile_expr(node: Node, params: Tuple[str, ...]) -> Callable[..., Value]:
    """Compile an expression to a closure taking the params positionally."""
    index = {p: k for k, p in enumerate(params)}

    def build(nd: Node) -> Callable[[tuple], Value]:
        if isinstance(nd, Num):
            v = nd.value
            return lambda env: v
        if isinstance(nd, InfLit):
            return lambda env: INF
        if isinstance(nd, Name):
            if nd.name not in index:
                raise CompileError(f"unknown variable {nd.name!r}", nd.span)
            k = index[nd.name]
            return lambda env: env[k]
        if isinstance(nd, Neg):
            f = build(nd.operand)
            return lambda env: v_neg(f(env))
        if isinstance(nd, BinOp):
            f, g, op = build(nd.left), build(nd.right), _BIN[nd.op]
            return lambda env: op(f(env), g(env))
        if isinstance(nd, Call):
            args = [build(a) for a in nd.args]
            if nd.name in _FUN1:
                if len(args) != 1:
                    raise CompileError(f"{nd.name} takes one argument", nd.span)
                fn, a0 = _FUN1[nd.name], args[0]
                return lambda env: fn(a0(env))
            if nd.name in ("min", "max") and args:
                fn = _vmin if nd.name == "min" else _vmax
                return lambda env: fn(*(a(env) for a in args))
            raise CompileError(f"unknown function {nd.name!r}", nd.span)
        if isinstance(nd, IfThen):
            c, t, e = build(nd.cond), build(nd.then), build(nd.orelse)
            return lambda env: t(env) if c(env) else e(env)
        if isinstance(nd, Compare):
            f, g, test = build(nd.left), build(nd.right), _CMP[nd.op]
            return lambda env: test(v_cmp(f(env), g(env)))
        if isinstance(nd, BoolOp):
            f, g = build(nd.left), build(nd.right)
            if nd.op == "and":
                return lambda env: f(env) and g(env)
            return lambda env: f(env) or g(env)
        if isinstance(nd, NotOp):
            f = build(nd.operand)
            return lambda env: not f(env)
        raise CompileError(f"unexpected {type(nd).__name__} in expression", nd.span)

    fn = build(node)

    def call(*args):
        return fn(tuple(a if not isinstance(a, int) else Fraction(a) for a in args))

    return call


# --------------------------------------------------------------------------
# shape analysis


def free_names(node: Node) -> set:
    if isinstance(node, Name):
        return {node.name}
    out = set()
    for attr in ("left", "right", "operand", "cond", "then", "orelse"):
        child = getattr(node, attr, None)
        if isinstance(child, Node):
            out |= free_names(child)
    for child in getattr(node, "args", ()) + getattr(node, "items", ()):
        out |= free_names(child)
    return out


def substitute(node: Node, env: Dict[str, Fraction]) -> Node:
    """Replace free names by rational literals."""
    if isinstance(node, Name):
        return Num(node.span, Fraction(env[node.name])) if node.name in env else node
    if isinstance(node, (Num, InfLit)):
        return node
    if isinstance(node, Neg):
        return Neg(node.span, substitute(node.operand, env))
    if isinstance(node, NotOp):
        return NotOp(node.span, substitute(node.operand, env))
    if isinstance(node, (BinOp, Compare, BoolOp)):
        return type(node)(node.span, node.op, substitute(node.left, env),
                          substitute(node.right, env))
    if isinstance(node, Call):
        return Call(node.span, node.name, tuple(substitute(a, env) for a in node.args))
    if isinstance(node, IfThen):
        return IfThen(node.span, substitute(node.cond, env), substitute(node.then, env),
                      substitute(node.orelse, env))
    if isinstance(node, ListLit):
        return ListLit(node.span, tuple(substitute(a, env) for a in node.items))
    return node


GenPoly = Dict[Fraction, Fraction]


def genpoly(node: Node, var: str) -> Optional[GenPoly]:
    """Write node as sum of coef * var**exponent with rational data, if possible."""
    if isinstance(node, Num):
        return {Fraction(0): node.value} if node.value else {}
    if isinstance(node, Name):
        return {Fraction(1): Fraction(1)} if node.name == var else None
    if isinstance(node, Neg):
        p = genpoly(node.operand, var)
        return None if p is None else {e: -c for e, c in p.items()}
    if isinstance(node, BinOp):
        a, b = genpoly(node.left, var), genpoly(node.right, var)
        if node.op in "+-":
            if a is None or b is None:
                return None
            out = dict(a)
            for e, c in b.items():
                out[e] = out.get(e, Fraction(0)) + (c if node.op == "+" else -c)
            return {e: c for e, c in out.items() if c}
        if node.op == "*":
            if a is None or b is None:
                return None
            out: GenPoly = {}
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
            return {e: c for e, c in out.items() if c}
        if node.op == "/":
            if a is None or b is None or len(b) != 1:
                return None
            (eb, cb), = b.items()
            return {e - eb: c / cb for e, c in a.items()}
        if node.op == "^":
            if a is None or b is None or len(a) != 1 or set(b) - {Fraction(0)}:
                return None
            f = b.get(Fraction(0), Fraction(0))
            (ea, ca), = a.items()
            cf = _rat_pow(ca, f) if ca > 0 or f.denominator == 1 else None
            if not isinstance(cf, Fraction):
                return None
            return {ea * f: cf}
    return None


def loglinear(node: Node, var: str) -> Optional[Tuple[Fraction, Fraction]]:
    """Write node as c*log(var) + b with rational c, b, if possible."""
    if isinstance(node, Num):
        return (Fraction(0), node.value)
    if isinstance(node, Call) and node.name == "log" and len(node.args) == 1:
        arg = node.args[0]
        if isinstance(arg, Name) and arg.name == var:
            return (Fraction(1), Fraction(0))
        p = genpoly(arg, var)
        if p is not None and len(p) == 1:
            (e, c), = p.items()
            if c == 1:
                return (e, Fraction(0))
        return None
    if isinstance(node, Neg):
        r = loglinear(node.operand, var)
        return None if r is None else (-r[0], -r[1])
    if isinstance(node, BinOp):
        a, b = loglinear(node.left, var), loglinear(node.right, var)
        if a is None or b is None:
            return None
        if node.op == "+":
            return (a[0] + b[0], a[1] + b[1])
        if node.op == "-":
            return (a[0] - b[0], a[1] - b[1])
        if node.op == "*":
            if a[0] == 0:
                return (a[1] * b[0], a[1] * b[1])
            if b[0] == 0:
                return (b[1] * a[0], b[1] * a[1])
            return None
        if node.op == "/" and b[0] == 0 and b[1] != 0:
            return (a[0] / b[1], a[1] / b[1])
    return None


def render(node: Node) -> str:
    """Source-like text for a node (used in reports and JSON)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, InfLit):
        return "inf"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        return f"-({render(node.operand)})"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(render(a) for a in node.args)})"
    if isinstance(node, IfThen):
        return f"if {render(node.cond)} then {render(node.then)} else {render(node.orelse)}"
    if isinstance(node, Compare):
        return f"{render(node.left)} {node.op} {render(node.right)}"
    if isinstance(node, BoolOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, NotOp):
        return f"not ({render(node.operand)})"
    if isinstance(node, ListLit):
        return "[" + ", ".join(render(i) for i in node.items) + "]"
    return "?"
