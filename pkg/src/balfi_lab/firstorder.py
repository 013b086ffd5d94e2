"""Quantified LFI formulas over finite structures.

A structure pairs a finite universe {0, ..., k-1} with a BALFI; predicates take
values in the BALFI's carrier, and the quantifiers are interpreted as carrier
infima/suprema over the universe (finite, hence always defined).  Substitution
is capture-rejecting: substituting a term that is not free for the variable
raises instead of silently renaming, mirroring the side conditions on the
quantifier axioms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from . import balfi as balfi_mod
from . import syntax
from .balfi import Balfi
from .syntax import (
    AND, BOT, CIRC, IMP, NEG, OR, TOP,
    Binary, Const, Formula, ParseError, Token, Unary, Var, _TokenStream, tokenize,
)

# --- Terms ---------------------------------------------------------------

@dataclass(frozen=True)
class TermVar:
    name: str


@dataclass(frozen=True)
class TermConst:
    name: str


@dataclass(frozen=True)
class TermApp:
    func: str
    args: tuple


Term = object  # TermVar | TermConst | TermApp


# --- Formulas (connective nodes come from the syntax module) --------------

@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


class NotFreeFor(ValueError):
    """The term would be captured by a binder if substituted."""

    def __init__(self, var: str, term: "Term", binder: str):
        super().__init__(
            f"term {render_term(term)} is not free for {var}: "
            f"a free occurrence lies under a binder on {binder}"
        )
        self.var = var
        self.term = term
        self.binder = binder


class UnknownSymbol(ValueError):
    pass


@dataclass(frozen=True)
class FOSignature:
    constants: frozenset[str]
    functions: Mapping[str, int]
    predicates: Mapping[str, int]

    def __post_init__(self):
        if not self.predicates:
            raise ValueError("a first-order signature needs at least one predicate")
        overlap = self.constants & set(self.functions) | self.constants & set(self.predicates)
        if overlap:
            raise ValueError(f"symbols declared twice: {sorted(overlap)}")


def term_vars(t: Term) -> set[str]:
    if isinstance(t, TermVar):
        return {t.name}
    if isinstance(t, TermApp):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        out: set[str] = set()
        for t in f.args:
            out |= term_vars(t)
        return out
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Unary):
        return free_vars(f.child)
    if isinstance(f, Binary):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Var, Const)):
        return set()
    raise TypeError(f"not a first-order formula node: {type(f).__name__}")


def free_vars_ordered(f: Formula) -> tuple[str, ...]:
    """Free variables in first-occurrence (left-to-right) order."""
    seen: dict[str, None] = {}
    def walk(node, bound):
        if isinstance(node, Pred):
            for t in node.args:
                for name in _term_vars_ordered(t):
                    if name not in bound:
                        seen.setdefault(name, None)
        elif isinstance(node, (Forall, Exists)):
            walk(node.body, bound | {node.var})
        elif isinstance(node, Unary):
            walk(node.child, bound)
        elif isinstance(node, Binary):
            walk(node.left, bound)
            walk(node.right, bound)
    walk(f, frozenset())
    return tuple(seen)


def _term_vars_ordered(t: Term) -> Iterator[str]:
    if isinstance(t, TermVar):
        yield t.name
    elif isinstance(t, TermApp):
        for a in t.args:
            yield from _term_vars_ordered(a)


def term_substitute(t: Term, x: str, replacement: Term) -> Term:
    if isinstance(t, TermVar):
        return replacement if t.name == x else t
    if isinstance(t, TermApp):
        return TermApp(t.func, tuple(term_substitute(a, x, replacement) for a in t.args))
    return t


def fo_substitute(f: Formula, x: str, t: Term) -> Formula:
    """phi[x/t] on free occurrences; raises NotFreeFor instead of renaming."""
    tvars = term_vars(t)
    def walk(node):
        if isinstance(node, Pred):
            return Pred(node.name, tuple(term_substitute(a, x, t) for a in node.args))
        if isinstance(node, (Forall, Exists)):
            if node.var == x:
                return node
            if node.var in tvars and x in free_vars(node.body):
                raise NotFreeFor(x, t, node.var)
            body = walk(node.body)
            return type(node)(node.var, body)
        if isinstance(node, Unary):
            return Unary(node.op, walk(node.child))
        if isinstance(node, Binary):
            return Binary(node.op, walk(node.left), walk(node.right))
        return node
    return walk(f)


def universal_closure(f: Formula) -> Formula:
    """Prefix universal quantifiers over the free variables, first occurrence first."""
    closed = f
    for name in reversed(free_vars_ordered(f)):
        closed = Forall(name, closed)
    return closed


# --- Structures ------------------------------------------------------------

def _table_arity(table) -> int:
    depth = 0
    node = table
    while isinstance(node, (list, tuple)) and node and isinstance(node[0], (list, tuple)):
        depth += 1
        node = node[0]
    return depth + (1 if isinstance(node, (list, tuple)) or depth == 0 else 0)


def _freeze(table):
    if isinstance(table, (list, tuple)):
        return tuple(_freeze(x) for x in table)
    return table


@dataclass(frozen=True)
class FOStructure:
    universe: int                       # elements are 0 .. universe-1
    balfi: Balfi
    consts: Mapping[str, int]
    funcs: Mapping[str, tuple]          # arity-deep nested tuples over universe indices
    preds: Mapping[str, object]         # arity-deep nested tuples of carrier elements

    def __post_init__(self):
        if self.universe < 1:
            raise ValueError("the universe must be nonempty")
        if not self.preds:
            raise ValueError("a structure needs at least one predicate")
        for name, value in self.consts.items():
            self._check_point(value, f"constant {name}")
        object.__setattr__(self, "funcs", {n: _freeze(t) for n, t in self.funcs.items()})
        object.__setattr__(self, "preds", {n: _freeze(t) for n, t in self.preds.items()})
        for name, table in self.funcs.items():
            for leaf in self._leaves(table, f"function {name}"):
                self._check_point(leaf, f"function {name}")
        for name, table in self.preds.items():
            arity = self.pred_arity(name)
            leaves = [table] if arity == 0 else self._leaves(table, f"predicate {name}", depth=arity)
            for leaf in leaves:
                self.balfi.alg.check_element(leaf)

    def _check_point(self, value, what: str):
        if not isinstance(value, int) or not 0 <= value < self.universe:
            raise ValueError(f"{what} takes value {value!r} outside the universe")

    def _leaves(self, table, what, depth: Optional[int] = None):
        if depth is None:
            depth = _table_arity(table)
        nodes = [table]
        for _ in range(depth):
            nxt = []
            for node in nodes:
                if not isinstance(node, tuple) or len(node) != self.universe:
                    raise ValueError(f"{what} table is not total over the universe")
                nxt.extend(node)
            nodes = nxt
        return nodes

    def func_arity(self, name: str) -> int:
        return _table_arity(self.funcs[name])

    def pred_arity(self, name: str) -> int:
        table = self.preds[name]
        if isinstance(table, int):
            return 0
        depth = 0
        node = table
        while isinstance(node, tuple) and node and isinstance(node[0], tuple):
            depth += 1
            node = node[0]
        return depth + 1

    @property
    def signature(self) -> FOSignature:
        return FOSignature(
            frozenset(self.consts),
            {n: self.func_arity(n) for n in self.funcs},
            {n: self.pred_arity(n) for n in self.preds},
        )


Assignment = Mapping[str, int]


def assign_update(mu: Assignment, x: str, a: int) -> dict[str, int]:
    out = dict(mu)
    out[x] = a
    return out


def _lookup(table, args: Sequence[int]):
    node = table
    for a in args:
        node = node[a]
    return node


def term_denote(s: FOStructure, mu: Assignment, t: Term) -> int:
    if isinstance(t, TermVar):
        try:
            return mu[t.name]
        except KeyError:
            raise balfi_mod.UnboundVariable(t.name) from None
    if isinstance(t, TermConst):
        try:
            return s.consts[t.name]
        except KeyError:
            raise UnknownSymbol(f"constant {t.name!r} is not interpreted") from None
    if isinstance(t, TermApp):
        if t.func not in s.funcs:
            raise UnknownSymbol(f"function {t.func!r} is not interpreted")
        args = [term_denote(s, mu, a) for a in t.args]
        return _lookup(s.funcs[t.func], args)
    raise TypeError(f"not a term: {type(t).__name__}")


def fo_evaluate(s: FOStructure, mu: Assignment, f: Formula) -> int:
    """The interpretation map: predicates via their tables, connectives via the
    BALFI, quantifiers as big meets/joins over the universe."""
    b = s.balfi
    alg = b.alg
    def ev(node, mu):
        if isinstance(node, Pred):
            if node.name not in s.preds:
                raise UnknownSymbol(f"predicate {node.name!r} is not interpreted")
            args = [term_denote(s, mu, t) for t in node.args]
            return _lookup(s.preds[node.name], args)
        if isinstance(node, Forall):
            return alg.big_meet(ev(node.body, assign_update(mu, node.var, a))
                                for a in range(s.universe))
        if isinstance(node, Exists):
            return alg.big_join(ev(node.body, assign_update(mu, node.var, a))
                                for a in range(s.universe))
        if isinstance(node, Const):
            return 0 if node.tag == BOT else alg.top
        if isinstance(node, Unary):
            if node.op == NEG:
                return b.neg[ev(node.child, mu)]
            if node.op == CIRC:
                return b.circ[ev(node.child, mu)]
            raise balfi_mod.UnsupportedOperator(f"{node.op} is outside the quantified fragment")
        if isinstance(node, Binary):
            left = ev(node.left, mu)
            right = ev(node.right, mu)
            if node.op == AND:
                return left & right
            if node.op == OR:
                return left | right
            return (alg.top ^ left) | right
        if isinstance(node, Var):
            raise balfi_mod.UnsupportedOperator(
                f"propositional variable {node.name!r} in a first-order formula"
            )
        raise TypeError(f"cannot evaluate {type(node).__name__} node")
    return ev(f, mu)


def fo_valid_in(s: FOStructure, f: Formula) -> bool:
    """Value top under every assignment; only the free variables matter."""
    names = free_vars_ordered(f)
    import itertools
    for point in itertools.product(range(s.universe), repeat=len(names)):
        if fo_evaluate(s, dict(zip(names, point)), f) != s.balfi.top:
            return False
    return True


# --- Parsing and rendering --------------------------------------------------
#
# The grammar extends the propositional one with `forall x. phi`,
# `exists x. phi` (scope extends maximally to the right) and `P(t1,...,tn)`.
# Identifiers are classified against the signature: declared constants and
# functions are term symbols, declared predicates atoms, anything else of the
# shape [a-z]... a variable.

_VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_QUANT_WORDS = {"forall": Forall, "exists": Exists}


class _FOParser:
    def __init__(self, stream: _TokenStream, sig: FOSignature):
        self.s = stream
        self.sig = sig

    def parse_formula(self) -> Formula:
        f = self.parse_expr()
        tok = self.s.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.value!r}", tok.pos)
        return f

    def parse_expr(self) -> Formula:
        tok = self.s.peek()
        if tok is not None and tok.kind == "ident" and tok.value in _QUANT_WORDS:
            self.s.next()
            ctor = _QUANT_WORDS[tok.value]
            var = self.s.expect("ident", "a variable")
            if not _VAR_RE.fullmatch(var.value) or self._symbol_kind(var.value):
                raise ParseError(f"{var.value!r} cannot be a bound variable", var.pos)
            self.s.expect("dot", "'.' after the bound variable")
            return ctor(var.value, self.parse_expr())
        return self.parse_iff()

    def parse_iff(self) -> Formula:
        left = self.parse_imp()
        tok = self.s.peek()
        if tok is not None and tok.kind == "iff":
            self.s.next()
            right = self.parse_iff()
            return Binary(AND, Binary(IMP, left, right), Binary(IMP, right, left))
        return left

    def parse_imp(self) -> Formula:
        left = self.parse_or()
        tok = self.s.peek()
        if tok is not None and tok.kind == "imp":
            self.s.next()
            return Binary(IMP, left, self.parse_imp())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while (tok := self.s.peek()) is not None and tok.kind == "or":
            self.s.next()
            left = Binary(OR, left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while (tok := self.s.peek()) is not None and tok.kind == "and":
            self.s.next()
            left = Binary(AND, left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        tok = self.s.peek()
        if tok is None:
            raise ParseError("expected a formula", self.s.length)
        if tok.kind == "neg":
            self.s.next()
            return Unary(NEG, self.parse_unary())
        if tok.kind == "circ":
            self.s.next()
            return Unary(CIRC, self.parse_unary())
        if tok.kind == "cneg":
            self.s.next()
            return Binary(IMP, self.parse_unary(), Const(BOT))
        if tok.kind == "ident" and tok.value in _QUANT_WORDS:
            return self.parse_expr()
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.s.next()
        if tok.kind == "lpar":
            f = self.parse_expr()
            nxt = self.s.peek()
            if nxt is None or nxt.kind != "rpar":
                raise ParseError("unclosed parenthesis", nxt.pos if nxt else self.s.length)
            self.s.next()
            return f
        if tok.kind == "const":
            return Const(BOT if tok.value == "0" else TOP)
        if tok.kind == "ident":
            if tok.value in self.sig.predicates:
                return self.parse_predicate(tok)
            raise ParseError(f"{tok.value!r} is not a declared predicate", tok.pos)
        raise ParseError(f"unexpected {tok.value!r}", tok.pos)

    def parse_predicate(self, tok: Token) -> Pred:
        arity = self.sig.predicates[tok.value]
        if arity == 0:
            return Pred(tok.value, ())
        self.s.expect("lpar", f"'(' after predicate {tok.value}")
        args = [self.parse_term()]
        while (nxt := self.s.peek()) is not None and nxt.kind == "comma":
            self.s.next()
            args.append(self.parse_term())
        self.s.expect("rpar", "')'")
        if len(args) != arity:
            raise ParseError(f"{tok.value} expects {arity} arguments, got {len(args)}", tok.pos)
        return Pred(tok.value, tuple(args))

    def parse_term(self) -> Term:
        tok = self.s.expect("ident", "a term")
        name = tok.value
        if name in self.sig.constants:
            return TermConst(name)
        if name in self.sig.functions:
            arity = self.sig.functions[name]
            self.s.expect("lpar", f"'(' after function {name}")
            args = [self.parse_term()]
            while (nxt := self.s.peek()) is not None and nxt.kind == "comma":
                self.s.next()
                args.append(self.parse_term())
            self.s.expect("rpar", "')'")
            if len(args) != arity:
                raise ParseError(f"{name} expects {arity} arguments, got {len(args)}", tok.pos)
            return TermApp(name, tuple(args))
        if name in self.sig.predicates or name in _QUANT_WORDS or not _VAR_RE.fullmatch(name):
            raise ParseError(f"{name!r} cannot be a term", tok.pos)
        return TermVar(name)

    def _symbol_kind(self, name: str) -> Optional[str]:
        if name in self.sig.constants:
            return "constant"
        if name in self.sig.functions:
            return "function"
        if name in self.sig.predicates:
            return "predicate"
        return None


def parse_fo(text: str, sig: FOSignature) -> Formula:
    stream = _TokenStream(tokenize(text), len(text))
    return _FOParser(stream, sig).parse_formula()


def parse_term(text: str, sig: FOSignature) -> Term:
    stream = _TokenStream(tokenize(text), len(text))
    term = _FOParser(stream, sig).parse_term()
    tok = stream.peek()
    if tok is not None:
        raise ParseError(f"unexpected {tok.value!r}", tok.pos)
    return term


def render_term(t: Term) -> str:
    if isinstance(t, TermVar) or isinstance(t, TermConst):
        return t.name
    if isinstance(t, TermApp):
        return f"{t.func}({', '.join(render_term(a) for a in t.args)})"
    return repr(t)


def render_fo(f: Formula) -> str:
    if isinstance(f, Pred):
        if not f.args:
            return f.name
        return f"{f.name}({', '.join(render_term(t) for t in f.args)})"
    if isinstance(f, Forall):
        return f"forall {f.var}. {render_fo(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {render_fo(f.body)}"
    if isinstance(f, Unary):
        child = render_fo(f.child)
        if isinstance(f.child, (Binary, Forall, Exists)):
            child = f"({child})"
        return syntax.UNARY_SYMBOL[f.op] + child
    if isinstance(f, Binary):
        left = render_fo(f.left)
        right = render_fo(f.right)
        if isinstance(f.left, (Binary, Forall, Exists)):
            left = f"({left})"
        if isinstance(f.right, (Binary, Forall, Exists)):
            right = f"({right})"
        return f"{left} {syntax.BINARY_SYMBOL[f.op]} {right}"
    if isinstance(f, Const):
        return "0" if f.tag == BOT else "1"
    if isinstance(f, Var):
        return f.name
    raise TypeError(f"cannot render {type(f).__name__} node")


def validate_fo(f: Formula, sig) -> None:
    """Connectives within the signature; predicates and quantifiers pass."""
    signature = syntax.resolve_signature(sig)
    def walk(node):
        if isinstance(node, Unary):
            if not signature.admits_unary(node.op):
                raise syntax.SignatureViolation(syntax.UNARY_SYMBOL[node.op], signature)
            walk(node.child)
        elif isinstance(node, Binary):
            if not signature.admits_binary(node.op):
                raise syntax.SignatureViolation(syntax.BINARY_SYMBOL[node.op], signature)
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Forall, Exists)):
            walk(node.body)
    walk(f)


# --- Structure files ---------------------------------------------------------

def structure_to_dict(s: FOStructure) -> dict:
    alg = s.balfi.alg
    def pred_doc(table, arity):
        if arity == 0:
            return alg.atoms(table)
        return [pred_doc(row, arity - 1) for row in table]
    return {
        "universe": s.universe,
        "balfi": balfi_mod.balfi_to_dict(s.balfi),
        "consts": dict(sorted(s.consts.items())),
        "funcs": {n: _nested_list(t) for n, t in sorted(s.funcs.items())},
        "preds": {n: pred_doc(t, s.pred_arity(n)) for n, t in sorted(s.preds.items())},
    }


def _nested_list(table):
    if isinstance(table, tuple):
        return [_nested_list(x) for x in table]
    return table


def structure_from_dict(doc: Mapping) -> FOStructure:
    b = balfi_mod.balfi_from_dict(doc["balfi"])
    alg = b.alg
    def pred_table(node):
        # a node is an element (leaf) when all of its items are atom indices
        if isinstance(node, (list, tuple)) and all(isinstance(x, int) for x in node):
            return alg.from_atoms(node)
        return tuple(pred_table(x) for x in node)
    return FOStructure(
        universe=doc["universe"],
        balfi=b,
        consts=dict(doc.get("consts", {})),
        funcs={n: _freeze(t) for n, t in doc.get("funcs", {}).items()},
        preds={n: pred_table(t) for n, t in doc["preds"].items()},
    )
