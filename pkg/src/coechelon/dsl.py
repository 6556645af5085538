"""The family description language.

A file is a sequence of declarations::

    # the grid family with c_j = 1/j
    family grid { c(j) = 1/j }

    family hadamard { kind = dual_power_series; R = 1; alpha(j) = j; r(n) = 1 + 1/n; }

    family left { kind = uniform; g(n) = 1; }
    family both { base = dsum(left, hadamard); }

Expressions use ``+ - * / ^``, unary minus, ``if c then a else b``,
comparisons, ``and``/``or``/``not``, ``log exp sqrt min max`` and ``inf``.
Decimal literals are read as exact rationals.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import expr as E
from . import weights as W
from .indexsets import (
    Finite, Nat, NatSquared, Predicate, Where, complement, conjoin, predicate_from_name,
)
from .scalars import XPos

KINDS = ("phi", "uniform", "dual_power_series", "grid", "table")
KIND_ALIASES = {"dps": "dual_power_series", "constant": "uniform"}


class DslError(ValueError):
    """A syntax or family-definition error located at (line, column)."""

    def __init__(self, message: str, span: Tuple[int, int], category: str = "syntax"):
        super().__init__(f"line {span[0]}, column {span[1]}: {message}")
        self.message = message
        self.span = span
        self.category = category


# --------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9']*)
  | (?P<op><=|>=|==|!=|[-+*/^(){}\[\],;=<>])
""", re.VERBOSE)

KEYWORDS = {"family", "if", "then", "else", "and", "or", "not", "inf"}


@dataclass(frozen=True)
class Token:
    kind: str      # num, name, kw, op, eof
    text: str
    span: Tuple[int, int]


def tokenize(text: str) -> List[Token]:
    out, pos, line, col0 = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = (line, pos - col0 + 1)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind == "name":
            word = m.group()
            out.append(Token("kw" if word in KEYWORDS else "name", word, span))
        elif kind in ("num", "op"):
            out.append(Token(kind, m.group(), span))
        pos = m.end()
    out.append(Token("eof", "", (line, pos - col0 + 1)))
    return out


# --------------------------------------------------------------------------
# parser


@dataclass(frozen=True)
class Binding:
    key: str
    params: Tuple[str, ...]
    value: E.Node
    span: Tuple[int, int]


@dataclass(frozen=True)
class Declaration:
    name: str
    bindings: Tuple[Binding, ...]
    span: Tuple[int, int]

    def get(self, key: str) -> Optional[Binding]:
        for b in self.bindings:
            if b.key == key:
                return b
        return None


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def advance(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise DslError(f"expected {text!r}, found {got!r}", self.tok.span)
        return self.advance()

    def name(self) -> Token:
        if self.tok.kind != "name":
            got = self.tok.text or "end of input"
            raise DslError(f"expected a name, found {got!r}", self.tok.span)
        return self.advance()

    # -- declarations -------------------------------------------------
    def file(self) -> List[Declaration]:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.declaration())
        if not decls:
            raise DslError("no family declaration found", self.tok.span)
        return decls

    def declaration(self) -> Declaration:
        start = self.expect("family").span
        name = self.name().text
        bindings = []
        if self.at("{"):
            self.advance()
            while not self.at("}"):
                bindings.append(self.binding())
                if self.at(";"):
                    self.advance()
                elif not self.at("}"):
                    raise DslError(f"expected ';' or '}}', found {self.tok.text!r}", self.tok.span)
            self.expect("}")
        return Declaration(name, tuple(bindings), start)

    def binding(self) -> Binding:
        key = self.name()
        params: Tuple[str, ...] = ()
        if self.at("("):
            self.advance()
            names = [self.name().text]
            while self.at(","):
                self.advance()
                names.append(self.name().text)
            self.expect(")")
            params = tuple(names)
        self.expect("=")
        return Binding(key.text, params, self.expr(), key.span)

    # -- expressions --------------------------------------------------
    def expr(self) -> E.Node:
        if self.at("if"):
            span = self.advance().span
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return E.IfThen(span, cond, then, self.expr())
        return self.disjunction()

    def disjunction(self) -> E.Node:
        node = self.conjunction()
        while self.at("or"):
            span = self.advance().span
            node = E.BoolOp(span, "or", node, self.conjunction())
        return node

    def conjunction(self) -> E.Node:
        node = self.negation()
        while self.at("and"):
            span = self.advance().span
            node = E.BoolOp(span, "and", node, self.negation())
        return node

    def negation(self) -> E.Node:
        if self.at("not"):
            span = self.advance().span
            return E.NotOp(span, self.negation())
        return self.comparison()

    def comparison(self) -> E.Node:
        node = self.sum()
        if self.tok.kind == "op" and self.tok.text in ("<", "<=", ">", ">=", "==", "!="):
            op = self.advance()
            node = E.Compare(op.span, op.text, node, self.sum())
        return node

    def sum(self) -> E.Node:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            node = E.BinOp(op.span, op.text, node, self.term())
        return node

    def term(self) -> E.Node:
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            node = E.BinOp(op.span, op.text, node, self.unary())
        return node

    def unary(self) -> E.Node:
        if self.at("-"):
            span = self.advance().span
            return E.Neg(span, self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> E.Node:
        node = self.atom()
        if self.at("^"):
            op = self.advance()
            node = E.BinOp(op.span, "^", node, self.unary())
        return node

    def atom(self) -> E.Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return E.Num(t.span, Fraction(t.text))
        if t.kind == "kw" and t.text == "inf":
            self.advance()
            return E.InfLit(t.span)
        if t.kind == "name":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return E.Call(t.span, t.text, tuple(args))
            return E.Name(t.span, t.text)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.expr())
                while self.at(","):
                    self.advance()
                    items.append(self.expr())
            self.expect("]")
            return E.ListLit(t.span, tuple(items))
        raise DslError(f"unexpected {t.text or 'end of input'!r}", t.span)


def parse_expression(text: str) -> E.Node:
    p = Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        raise DslError(f"unexpected {p.tok.text!r} after expression", p.tok.span)
    return node


def parse_declarations(text: str) -> List[Declaration]:
    return Parser(text).file()


# --------------------------------------------------------------------------
# building families


def _const(node: E.Node, what: str) -> Fraction:
    fn = E.compile_expr(node, ())
    try:
        v = fn()
    except E.EvaluationError as exc:
        raise DslError(f"{what}: {exc}", node.span, "family") from exc
    if not isinstance(v, Fraction):
        raise DslError(f"{what} must be an exact rational", node.span)
    return v


def _word(node: E.Node, what: str) -> str:
    if not isinstance(node, E.Name):
        raise DslError(f"{what} must be a name", node.span)
    return node.name


def _fn(b: Binding, default_params: Tuple[str, ...]) -> W.ExprFn:
    params = b.params or default_params
    if len(params) != len(default_params):
        raise DslError(f"{b.key} takes {len(default_params)} argument(s)", b.span)
    try:
        return W.ExprFn.build(params, b.value)
    except E.CompileError as exc:
        raise DslError(str(exc).split(" at line")[0], exc.span) from exc


def build_predicate(node: E.Node) -> Predicate:
    """Interpret a subset expression: ``diagonal``, ``row(1)``, ``not even``, ``where(i < j)``."""
    if isinstance(node, E.Name):
        try:
            return predicate_from_name(node.name)
        except ValueError as exc:
            raise DslError(str(exc), node.span) from exc
    if isinstance(node, E.NotOp):
        return complement(build_predicate(node.operand))
    if isinstance(node, E.BoolOp):
        a, b = build_predicate(node.left), build_predicate(node.right)
        return conjoin(a, b) if node.op == "and" else a | b
    if isinstance(node, E.Call):
        if node.name == "where":
            if len(node.args) != 1:
                raise DslError("where takes one condition", node.span)
            cond = node.args[0]
            try:
                test = E.compile_expr(cond, ("i", "j"))
            except E.CompileError as exc:
                raise DslError(str(exc).split(" at line")[0], exc.span) from exc
            return Where(E.render(cond), test)
        if node.name == "not" and len(node.args) == 1:
            return complement(build_predicate(node.args[0]))
        if node.name == "set":
            members = []
            for a in node.args:
                if isinstance(a, E.ListLit):
                    members.append(tuple(int(_const(x, "set member")) for x in a.items))
                else:
                    members.append(int(_const(a, "set member")))
            return Finite(frozenset(members))
        args = tuple(int(_const(a, f"argument of {node.name}")) for a in node.args)
        try:
            return predicate_from_name(node.name, args)
        except ValueError as exc:
            raise DslError(str(exc), node.span) from exc
    raise DslError("not a subset expression", node.span)


class Builder:
    def __init__(self, levels: int = W.DEFAULT_LEVELS, horizon: int = W.DEFAULT_HORIZON,
                 library: Optional[Dict[str, W.WeightFamily]] = None):
        self.levels = levels
        self.horizon = horizon
        self.known: Dict[str, W.WeightFamily] = dict(library or {})

    def lookup(self, node: E.Node) -> W.WeightFamily:
        name = _word(node, "family reference")
        if name in self.known:
            return self.known[name]
        from .library import builtin_names, load_builtin
        if name in builtin_names():
            return load_builtin(name)
        raise DslError(f"unknown family {name!r}", node.span)

    def build(self, d: Declaration) -> W.WeightFamily:
        try:
            fam = self._build(d)
        except W.FamilyError as exc:
            where = []
            if exc.level is not None:
                where.append(f"n={exc.level}")
            if exc.index is not None:
                where.append(f"i={exc.index}")
            suffix = f" (at {', '.join(where)})" if where else ""
            raise DslError(f"family {d.name!r}: {exc}{suffix}", d.span, "family") from exc
        except E.EvaluationError as exc:
            raise DslError(f"family {d.name!r}: {exc}", d.span, "family") from exc
        self.known[d.name] = fam
        return fam

    def _kind(self, d: Declaration) -> str:
        b = d.get("kind")
        if b is not None:
            kind = _word(b.value, "kind")
        elif d.get("base") is not None:
            return "combinator"
        else:
            kind = d.name
        kind = KIND_ALIASES.get(kind, kind)
        if kind not in KINDS:
            span = b.value.span if b is not None else d.span
            raise DslError(f"unknown family kind {kind!r}; give kind = one of {', '.join(KINDS)}",
                           span)
        return kind

    def _check_keys(self, d: Declaration, allowed: Tuple[str, ...]):
        for b in d.bindings:
            if b.key not in allowed + ("kind",):
                raise DslError(f"binding {b.key!r} is not used by this family kind", b.span)

    def _build(self, d: Declaration) -> W.WeightFamily:
        kind = self._kind(d)
        if kind == "combinator":
            self._check_keys(d, ("base",))
            return self._combinator(d, d.get("base").value)
        if kind == "phi":
            self._check_keys(d, ())
            return W.Phi(d.name)
        if kind == "uniform":
            self._check_keys(d, ("g", "index"))
            g = d.get("g")
            g_fn = _fn(g, ("n",)) if g is not None else W.ExprFn.parse(("n",), "1")
            return W.Uniform(g_fn, self._index(d), d.name)
        if kind == "grid":
            self._check_keys(d, ("c",))
            c = d.get("c")
            if c is None:
                raise DslError("grid family needs c(j) = ...", d.span)
            return W.Grid(_fn(c, ("j",)), d.name)
        if kind == "dual_power_series":
            self._check_keys(d, ("R", "alpha", "r"))
            rb = d.get("R")
            R = _const(rb.value, "R") if rb is not None else Fraction(0)
            alpha = _fn(d.get("alpha"), ("j",)) if d.get("alpha") else W.ExprFn.parse(("j",), "j")
            if d.get("r") is not None:
                r = _fn(d.get("r"), ("n",))
            else:
                r = W.ExprFn.parse(("n",), f"{R} + 1/n")
            return W.DualPowerSeries(R, alpha, r, d.name)
        return self._table(d)

    def _index(self, d: Declaration, arity: Optional[int] = None):
        b = d.get("index")
        if b is None:
            return NatSquared() if arity == 3 else Nat()
        word = _word(b.value, "index")
        if word in ("nat", "N"):
            return Nat()
        if word in ("nat2", "N2"):
            return NatSquared()
        raise DslError(f"unknown index set {word!r}; use nat or nat2", b.value.span)

    def _table(self, d: Declaration) -> W.WeightFamily:
        self._check_keys(d, ("v", "data", "tail", "monotone", "index"))
        vb = d.get("v")
        arity = len(vb.params) if vb is not None and vb.params else None
        index = self._index(d, arity)
        params = ("n", "j") if isinstance(index, Nat) else ("n", "i", "j")
        expression = None
        if vb is not None:
            if vb.params and len(vb.params) != len(params):
                raise DslError(f"v takes {len(params)} arguments on this index set", vb.span)
            expression = _fn(vb, params)
            if not any(expression.depends_on(x) for x in expression.params[1:]):
                if d.get("data") is None:
                    g = W.ExprFn.build((expression.params[0],), vb.value)
                    return W.Uniform(g, index, d.name)
        data: Tuple[Tuple[XPos, ...], ...] = ()
        db = d.get("data")
        if db is not None:
            data = self._data(db.value)
        periodic = False
        tb = d.get("tail")
        if tb is not None:
            word = _word(tb.value, "tail")
            if word not in ("periodic", "expression"):
                raise DslError("tail must be periodic or expression", tb.value.span)
            periodic = word == "periodic"
        mb = d.get("monotone")
        monotone = bool(_const(mb.value, "monotone")) if mb is not None else False
        return W.Table(index, expression, data, periodic, monotone, d.name,
                       check_levels=self.levels, check_indices=self.horizon)

    def _data(self, node: E.Node) -> Tuple[Tuple[XPos, ...], ...]:
        if not isinstance(node, E.ListLit):
            raise DslError("data must be a list of rows", node.span)
        rows = []
        for row in node.items:
            items = row.items if isinstance(row, E.ListLit) else (row,)
            vals = []
            for it in items:
                if isinstance(it, E.InfLit):
                    vals.append(XPos.inf())
                    continue
                q = _const(it, "data entry")
                if q <= 0:
                    raise DslError(f"weight value {q} is not positive", it.span, "family")
                vals.append(XPos.exact(q))
            rows.append(tuple(vals))
        return tuple(rows)

    def _combinator(self, d: Declaration, node: E.Node) -> W.WeightFamily:
        if isinstance(node, E.Call) and node.name == "dsum":
            if len(node.args) != 2:
                raise DslError("dsum takes two families", node.span)
            return W.direct_sum(self.lookup(node.args[0]), self.lookup(node.args[1]), d.name)
        if isinstance(node, E.Call) and node.name == "restrict":
            if len(node.args) != 2:
                raise DslError("restrict takes a family and a subset", node.span)
            return W.restrict(self.lookup(node.args[0]), build_predicate(node.args[1]), d.name)
        if isinstance(node, E.Name):
            return self.lookup(node)
        raise DslError("base must be dsum(F, G), restrict(F, S) or a family name", node.span)


def parse_families(text: str, levels: int = W.DEFAULT_LEVELS,
                   horizon: int = W.DEFAULT_HORIZON) -> Dict[str, W.WeightFamily]:
    """All families of a source file, in declaration order."""
    builder = Builder(levels, horizon)
    out: Dict[str, W.WeightFamily] = {}
    for d in parse_declarations(text):
        if d.name in out:
            raise DslError(f"family {d.name!r} declared twice", d.span)
        out[d.name] = builder.build(d)
    return out


def parse_family(text: str, name: Optional[str] = None, levels: int = W.DEFAULT_LEVELS,
                 horizon: int = W.DEFAULT_HORIZON) -> W.WeightFamily:
    """The family called ``name``, or the last one declared."""
    fams = parse_families(text, levels, horizon)
    if name is None:
        return list(fams.values())[-1]
    if name not in fams:
        raise KeyError(f"no family named {name!r}; declared: {', '.join(fams)}")
    return fams[name]
