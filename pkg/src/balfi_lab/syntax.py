"""Formula ASTs over the LFI/modal signatures: parsing, printing, substitution,
schema matching and the weighted complexity measure.

Formulas are immutable trees built from four node kinds (Var, Const, Unary,
Binary).  Signatures restrict which operators and constants a formula may use;
the parser expands the sugar forms (`<->`, `~` where not primitive, `_|_`)
before validating against the requested signature.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

# Unary operator names
NEG = "neg"        # paraconsistent negation  !
CIRC = "circ"      # consistency operator     @
CNEG = "cneg"      # classical negation       ~   (primitive only in some signatures)
BOX1 = "box1"      # [1]
DIA1 = "dia1"      # <1>
BOX2 = "box2"      # [2]
DIA2 = "dia2"      # <2>

# Binary operator names
AND = "and"
OR = "or"
IMP = "imp"

# Constant tags
BOT = "bot"        # 0
TOP = "top"        # 1

UNARY_OPS = (NEG, CIRC, CNEG, BOX1, DIA1, BOX2, DIA2)
BINARY_OPS = (AND, OR, IMP)


class ParseError(ValueError):
    """Syntax error with a character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"syntax error at position {pos}: {message}")
        self.pos = pos


class SignatureViolation(ValueError):
    """A formula uses an operator or constant outside the signature."""

    def __init__(self, offender: str, signature: "SignatureId"):
        super().__init__(f"operator {offender!r} is not part of signature {signature.name}")
        self.offender = offender
        self.signature = signature


class MissingBinding(KeyError):
    """A schema instantiation lacks an entry for some metavariable."""

    def __init__(self, name: str):
        super().__init__(name)
        self.metavariable = name

    def __str__(self) -> str:
        return f"no binding for metavariable {self.metavariable!r}"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    tag: str  # BOT or TOP


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Formula"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Formula"
    right: "Formula"


# Foreign node kinds (the first-order module adds predicates and quantifiers)
# participate in Formula positions; the functions below treat any node that is
# not Var/Const/Unary/Binary as an opaque subtree.
Formula = object


@dataclass(frozen=True)
class SignatureId:
    """One of the paper's signatures: a fixed set of admitted connectives."""

    name: str
    unary: frozenset
    binary: frozenset
    constants: frozenset

    def admits_unary(self, op: str) -> bool:
        return op in self.unary

    def admits_binary(self, op: str) -> bool:
        return op in self.binary

    def admits_const(self, tag: str) -> bool:
        return tag in self.constants


def _sig(name, unary=(), binary=BINARY_OPS, constants=()):
    return SignatureId(name, frozenset(unary), frozenset(binary), frozenset(constants))


SIGMA_PLUS = _sig("SigmaPlus")
SIGMA_BA = _sig("SigmaBA", constants=(BOT, TOP))
SIGMA = _sig("Sigma", unary=(NEG, CIRC))
SIGMA_C = _sig("SigmaC", unary=(NEG,))
SIGMA_C0 = _sig("SigmaC0", unary=(NEG,), constants=(BOT,))
SIGMA_CE = _sig("SigmaCe", unary=(NEG, CNEG), constants=(BOT, TOP))
SIGMA_E = _sig("SigmaE", unary=(NEG, CIRC), constants=(BOT, TOP))
SIGMA_M = _sig("SigmaM", unary=(CNEG, BOX1, DIA1))
SIGMA_BM = _sig("SigmaBM", unary=(CNEG, BOX1, DIA1, BOX2, DIA2))

SIGNATURES: Mapping[str, SignatureId] = {
    s.name: s
    for s in (SIGMA_PLUS, SIGMA_BA, SIGMA, SIGMA_C, SIGMA_C0, SIGMA_CE, SIGMA_E, SIGMA_M, SIGMA_BM)
}


def resolve_signature(sig) -> SignatureId:
    if isinstance(sig, SignatureId):
        return sig
    try:
        return SIGNATURES[sig]
    except KeyError:
        raise ValueError(f"unknown signature {sig!r}; known: {sorted(SIGNATURES)}") from None


# The designated bottom-witness variable: `_|_` parses to (p0 & !p0) & @p0.
BOTTOM_WITNESS = "p0"


def bottom_pattern() -> Formula:
    p0 = Var(BOTTOM_WITNESS)
    return Binary(AND, Binary(AND, p0, Unary(NEG, p0)), Unary(CIRC, p0))


# ---------------------------------------------------------------------------
# Tokenizer (shared with the first-order parser)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<botsugar>_\|_|⊥)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<neg>!|¬)
  | (?P<circ>@|∘|°)
  | (?P<cneg>~|∼)
  | (?P<box>\[(?P<boxidx>[12])\]|□(?P<boxidx2>[₁₂12]))
  | (?P<dia><(?P<diaidx>[12])>|◇(?P<diaidx2>[₁₂12]))
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<const>[01])
  | (?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)

_SUBSCRIPTS = {"₁": "1", "₂": "2"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind in ("boxidx", "boxidx2", "diaidx", "diaidx2"):
            kind = "box" if kind.startswith("box") else "dia"
        if kind != "ws":
            if kind == "box":
                idx = m.group("boxidx") or m.group("boxidx2")
                value = _SUBSCRIPTS.get(idx, idx)
            elif kind == "dia":
                idx = m.group("diaidx") or m.group("diaidx2")
                value = _SUBSCRIPTS.get(idx, idx)
            else:
                value = m.group()
            tokens.append(Token(kind, value, pos))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[Token], length: int):
        self.tokens = tokens
        self.i = 0
        self.length = length

    def peek(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.length)
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            pos = tok.pos if tok else self.length
            found = repr(tok.value) if tok else "end of input"
            raise ParseError(f"expected {what}, found {found}", pos)
        return self.next()


# ---------------------------------------------------------------------------
# Parser.  Precedence: unary > & > | > -> (right-assoc) > <->.

class _Parser:
    def __init__(self, stream: _TokenStream, sig: SignatureId):
        self.s = stream
        self.sig = sig

    def parse_formula(self) -> Formula:
        f = self.parse_iff()
        tok = self.s.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.value!r}", tok.pos)
        return f

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
        while True:
            tok = self.s.peek()
            if tok is None or tok.kind != "or":
                return left
            self.s.next()
            left = Binary(OR, left, self.parse_and())

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while True:
            tok = self.s.peek()
            if tok is None or tok.kind != "and":
                return left
            self.s.next()
            left = Binary(AND, left, self.parse_unary())

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
            return self.strong_negation(self.parse_unary(), tok.pos)
        if tok.kind == "box":
            self.s.next()
            return Unary(BOX1 if tok.value == "1" else BOX2, self.parse_unary())
        if tok.kind == "dia":
            self.s.next()
            return Unary(DIA1 if tok.value == "1" else DIA2, self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.s.next()
        if tok.kind == "lpar":
            f = self.parse_iff()
            nxt = self.s.peek()
            if nxt is None or nxt.kind != "rpar":
                pos = nxt.pos if nxt else self.s.length
                raise ParseError("unclosed parenthesis", pos)
            self.s.next()
            return f
        if tok.kind == "ident":
            if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok.value):
                raise ParseError(f"invalid variable name {tok.value!r}", tok.pos)
            return Var(tok.value)
        if tok.kind == "const":
            return Const(BOT if tok.value == "0" else TOP)
        if tok.kind == "botsugar":
            return bottom_pattern()
        raise ParseError(f"unexpected {tok.value!r}", tok.pos)

    def strong_negation(self, child: Formula, pos: int) -> Formula:
        """Expand `~x`: primitive where the signature has it, `x -> 0` where the
        constant exists, and `x -> bottom-pattern` in the pure LFI signature."""
        sig = self.sig
        if sig.admits_unary(CNEG):
            return Unary(CNEG, child)
        if sig.admits_const(BOT):
            return Binary(IMP, child, Const(BOT))
        if sig.admits_unary(NEG) and sig.admits_unary(CIRC):
            return Binary(IMP, child, bottom_pattern())
        raise SignatureViolation("~", sig)


def parse(text: str, sig="Sigma") -> Formula:
    """Parse `text` against a signature; sugar is expanded, the result validated."""
    signature = resolve_signature(sig)
    stream = _TokenStream(tokenize(text), len(text))
    formula = _Parser(stream, signature).parse_formula()
    validate(formula, signature)
    return formula


UNARY_SYMBOL = {NEG: "!", CIRC: "@", CNEG: "~", BOX1: "[1]", DIA1: "<1>", BOX2: "[2]", DIA2: "<2>"}
BINARY_SYMBOL = {AND: "&", OR: "|", IMP: "->"}
_PREC = {IMP: 1, OR: 2, AND: 3}
_RIGHT_ASSOC = {IMP}


def render(formula: Formula) -> str:
    """Canonical ASCII rendering; `parse(render(f), sig) == f` for validated f."""
    return _render(formula, 0)


def _render(f: Formula, parent_prec: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return "0" if f.tag == BOT else "1"
    if isinstance(f, Unary):
        return UNARY_SYMBOL[f.op] + _render(f.child, 4)
    if isinstance(f, Binary):
        prec = _PREC[f.op]
        if f.op in _RIGHT_ASSOC:
            text = f"{_render(f.left, prec + 1)} {BINARY_SYMBOL[f.op]} {_render(f.right, prec)}"
        else:
            text = f"{_render(f.left, prec)} {BINARY_SYMBOL[f.op]} {_render(f.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"cannot render {type(f).__name__} node")


def validate(formula: Formula, sig) -> None:
    """Check that every operator/constant of the formula belongs to `sig`."""
    signature = resolve_signature(sig)
    for node in iter_nodes(formula):
        if isinstance(node, Unary) and not signature.admits_unary(node.op):
            raise SignatureViolation(UNARY_SYMBOL[node.op], signature)
        if isinstance(node, Binary) and not signature.admits_binary(node.op):
            raise SignatureViolation(BINARY_SYMBOL[node.op], signature)
        if isinstance(node, Const) and not signature.admits_const(node.tag):
            raise SignatureViolation("0" if node.tag == BOT else "1", signature)


def iter_nodes(formula: Formula) -> Iterator[Formula]:
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Unary):
            stack.append(node.child)
        elif isinstance(node, Binary):
            stack.append(node.right)
            stack.append(node.left)


def variables(formula: Formula) -> tuple[str, ...]:
    """Variable names in first-occurrence (left-to-right) order."""
    seen: dict[str, None] = {}
    def walk(f):
        if isinstance(f, Var):
            seen.setdefault(f.name, None)
        elif isinstance(f, Unary):
            walk(f.child)
        elif isinstance(f, Binary):
            walk(f.left)
            walk(f.right)
    walk(formula)
    return tuple(seen)


def complexity(formula: Formula) -> int:
    """Structural size, with `@` weighted 2 so that complexity(@g) > complexity(!g)."""
    if isinstance(formula, Var) or isinstance(formula, Const):
        return 1
    if isinstance(formula, Unary):
        weight = 2 if formula.op == CIRC else 1
        return weight + complexity(formula.child)
    if isinstance(formula, Binary):
        return 1 + complexity(formula.left) + complexity(formula.right)
    raise TypeError(f"no complexity for {type(formula).__name__} node")


# ---------------------------------------------------------------------------
# Schemas: formulas read with their variables as metavariables.

@dataclass(frozen=True)
class Schema:
    body: Formula

    @property
    def metavariables(self) -> tuple[str, ...]:
        return variables(self.body)


def schema(text: str, sig="Sigma") -> Schema:
    return Schema(parse(text, sig))


def substitute(s: Schema, binding: Mapping[str, Formula], sig=None) -> Formula:
    """Uniform substitution of formulas for the schema's metavariables.

    With `sig` given, the instance is validated against that signature.
    """
    def walk(f):
        if isinstance(f, Var):
            try:
                return binding[f.name]
            except KeyError:
                raise MissingBinding(f.name) from None
        if isinstance(f, Unary):
            return Unary(f.op, walk(f.child))
        if isinstance(f, Binary):
            return Binary(f.op, walk(f.left), walk(f.right))
        return f
    instance = walk(s.body)
    if sig is not None:
        validate(instance, sig)
    return instance


def match_schema(s: Schema, candidate: Formula) -> Optional[dict[str, Formula]]:
    """Bind metavariables so that substitute(s, binding) == candidate, or None.

    Nonlinear metavariable occurrences must match syntactically equal subtrees.
    """
    binding: dict[str, Formula] = {}

    def walk(pat, cand) -> bool:
        if isinstance(pat, Var):
            bound = binding.get(pat.name)
            if bound is None:
                binding[pat.name] = cand
                return True
            return bound == cand
        if isinstance(pat, Const):
            return isinstance(cand, Const) and pat.tag == cand.tag
        if isinstance(pat, Unary):
            return isinstance(cand, Unary) and pat.op == cand.op and walk(pat.child, cand.child)
        if isinstance(pat, Binary):
            return (
                isinstance(cand, Binary)
                and pat.op == cand.op
                and walk(pat.left, cand.left)
                and walk(pat.right, cand.right)
            )
        return pat == cand

    return binding if walk(s.body, candidate) else None


def conjoin(formulas) -> Formula:
    """Right-nested conjunction (g1 & (g2 & (... & gn))); the paper's convention."""
    items = list(formulas)
    if not items:
        raise ValueError("cannot conjoin an empty sequence")
    result = items[-1]
    for f in reversed(items[:-1]):
        result = Binary(AND, f, result)
    return result


def iff(left: Formula, right: Formula) -> Formula:
    return Binary(AND, Binary(IMP, left, right), Binary(IMP, right, left))
