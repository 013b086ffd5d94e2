"""Hilbert calculi with careful reasoning: descriptors and proof checking.

Calculi pair axiom schemas with a rule partition: local rules may be applied
to anything, global rules only to theorems.  Three checking regimes cover the
paper's derivation notions:

  * check_theorem        - no premises; every rule is available since every
                           line is itself a theorem.
  * check_local_derivation  - premises enter only through an explicit witness:
                           a theorem proof of the conclusion itself or of
                           (g_i1 & ... & g_ik) -> conclusion for a cited
                           nonempty premise subset.
  * check_global_derivation - premises may be cited directly and global rules
                           apply to any earlier line (the starred regime).

Proofs are verified, never searched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional, Sequence, Union

from . import firstorder as fo
from . import syntax
from .balfi import AXIOM_TAG_SCHEMAS
from .syntax import (
    AND, BOX1, BOX2, CIRC, IMP, NEG,
    Binary, Formula, Schema, SignatureId, Unary,
)

MP = "mp"
RNEG = "rneg"
RCIRC = "rcirc"
RBOX1 = "rbox1"
RBOX2 = "rbox2"
EXISTS_IN = "existsin"
FORALL_IN = "forallin"

RULE_IDS = (MP, RNEG, RCIRC, RBOX1, RBOX2, EXISTS_IN, FORALL_IN)

AX_EXISTS = "AxExists"
AX_FORALL = "AxForall"


class ProofError(ValueError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step + 1}: {message}")
        self.step = step


class BadAxiomInstance(ProofError):
    pass


class BadRuleApplication(ProofError):
    pass


class ForwardReference(ProofError):
    pass


class WitnessError(ValueError):
    """Malformed local-derivation witness (index out of range)."""


@dataclass(frozen=True)
class AxiomStep:
    axiom_id: str
    binding: tuple[tuple[str, object], ...]  # sorted (key, formula/var-name/term)

    @staticmethod
    def make(axiom_id: str, binding: Mapping[str, object]) -> "AxiomStep":
        return AxiomStep(axiom_id, tuple(sorted(binding.items())))

    def binding_dict(self) -> dict[str, object]:
        return dict(self.binding)


@dataclass(frozen=True)
class PremiseStep:
    index: int


@dataclass(frozen=True)
class RuleStep:
    rule_id: str
    antecedents: tuple[int, ...]   # 0-based indices of earlier steps
    var: Optional[str] = None      # for existsin / forallin


Step = Union[AxiomStep, PremiseStep, RuleStep]


@dataclass(frozen=True)
class CalculusSpec:
    name: str
    sig: SignatureId
    axioms: tuple[tuple[str, Schema], ...]
    local_rules: frozenset[str]
    global_rules: frozenset[str]
    first_order: bool = False

    def __post_init__(self):
        if MP not in self.local_rules:
            raise ValueError("MP must be a local rule")
        if not self.local_rules <= self.global_rules:
            raise ValueError("local rules must be contained in the global rules")
        for rule in self.global_rules:
            if rule not in RULE_IDS:
                raise ValueError(f"unknown rule {rule!r}")

    def axiom_schema(self, axiom_id: str) -> Optional[Schema]:
        for known_id, schema in self.axioms:
            if known_id == axiom_id:
                return schema
        return None


@dataclass(frozen=True)
class Proof:
    calculus: CalculusSpec
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]


# ---------------------------------------------------------------------------
# Calculus presets

_CPL_AXIOMS = tuple(
    (name, syntax.schema(text, "SigmaPlus"))
    for name, text in (
        ("Ax1", "a -> (b -> a)"),
        ("Ax2", "(a -> (b -> c)) -> ((a -> b) -> (a -> c))"),
        ("Ax3", "a -> (b -> (a & b))"),
        ("Ax4", "(a & b) -> a"),
        ("Ax5", "(a & b) -> b"),
        ("Ax6", "a -> (a | b)"),
        ("Ax7", "b -> (a | b)"),
        ("Ax8", "(a -> c) -> ((b -> c) -> ((a | b) -> c))"),
        ("Ax9", "(a -> b) | a"),
    )
)

_MBC_AXIOMS = _CPL_AXIOMS + (
    ("Ax10", syntax.schema("a | !a")),
    ("bc1", syntax.schema("@a -> (a -> (!a -> b))")),
)

# The Definition order of the section-3 extension axioms, used for naming.
TAG_ORDER = ("ciw", "ci", "cl", "cf", "ce", "caAnd", "caOr", "caImp")


def _tag_axioms(tags: Sequence[str]) -> tuple[tuple[str, Schema], ...]:
    unknown = [t for t in tags if t not in TAG_ORDER]
    if unknown:
        raise ValueError(f"unknown extension axioms: {unknown}")
    ordered = [t for t in TAG_ORDER if t in set(tags)]
    return tuple((t, AXIOM_TAG_SCHEMAS[t]) for t in ordered)


def _modal_axioms(bimodal: bool) -> tuple[tuple[str, Schema], ...]:
    # the CPL+ schemas only use & | ->, shared by every signature
    sig = "SigmaBM" if bimodal else "SigmaM"
    axioms = [
        (name, Schema(syntax.parse(text, sig)))
        for name, text in (("PEM", "a | ~a"), ("exp", "a -> (~a -> b)"),
                           ("AxMod1", "<1>a <-> ~[1]~a"))
    ]
    if bimodal:
        axioms.append(("AxMod2", Schema(syntax.parse("<2>a <-> ~[2]~a", sig))))
    return _CPL_AXIOMS + tuple(axioms)


CPL_PLUS = CalculusSpec("CPLplus", syntax.SIGMA_PLUS, _CPL_AXIOMS,
                        frozenset({MP}), frozenset({MP}))
MBC = CalculusSpec("mbC", syntax.SIGMA, _MBC_AXIOMS, frozenset({MP}), frozenset({MP}))
RMBC = CalculusSpec("RmbC", syntax.SIGMA, _MBC_AXIOMS,
                    frozenset({MP}), frozenset({MP, RNEG, RCIRC}))
E = CalculusSpec("E", syntax.SIGMA_M, _modal_axioms(False),
                 frozenset({MP}), frozenset({MP, RBOX1}))
EXE = CalculusSpec("ExE", syntax.SIGMA_BM, _modal_axioms(True),
                   frozenset({MP}), frozenset({MP, RBOX1, RBOX2}))
RQMBC = CalculusSpec(
    "RQmbC", syntax.SIGMA,
    _MBC_AXIOMS + ((AX_EXISTS, None), (AX_FORALL, None)),
    frozenset({MP}), frozenset({MP, RNEG, RCIRC, EXISTS_IN, FORALL_IN}),
    first_order=True,
)


def mbc_extension(*tags: str) -> CalculusSpec:
    axioms = _tag_axioms(tags)
    name = f"mbC({','.join(t for t, _ in axioms)})"
    return CalculusSpec(name, syntax.SIGMA, _MBC_AXIOMS + axioms,
                        frozenset({MP}), frozenset({MP}))


def rmbc_extension(*tags: str) -> CalculusSpec:
    axioms = _tag_axioms(tags)
    name = f"RmbC({','.join(t for t, _ in axioms)})"
    return CalculusSpec(name, syntax.SIGMA, _MBC_AXIOMS + axioms,
                        frozenset({MP}), frozenset({MP, RNEG, RCIRC}))


_ALIASES = {
    "CPLplus": lambda: CPL_PLUS,
    "CPL+": lambda: CPL_PLUS,
    "mbC": lambda: MBC,
    "RmbC": lambda: RMBC,
    "E": lambda: E,
    "ExE": lambda: EXE,
    "E+E": lambda: EXE,
    "RQmbC": lambda: RQMBC,
    "bC": lambda: mbc_extension("cf"),
    "Ci": lambda: mbc_extension("ci", "cf"),
    "RbC": lambda: rmbc_extension("cf"),
    "RCi": lambda: rmbc_extension("ci", "cf"),
    "RmbCciw": lambda: rmbc_extension("ciw"),
    "RCila": lambda: rmbc_extension("ci", "cl", "cf", "caAnd", "caOr", "caImp"),
}


def get_calculus(name: str) -> CalculusSpec:
    """Resolve a calculus by name, including 'RmbC(ci,cf)'-style extensions."""
    name = name.strip()
    if name in _ALIASES:
        return _ALIASES[name]()
    for prefix, factory in (("RmbC(", rmbc_extension), ("mbC(", mbc_extension)):
        if name.startswith(prefix) and name.endswith(")"):
            tags = [t.strip() for t in name[len(prefix):-1].split(",") if t.strip()]
            return factory(*tags)
    raise ValueError(f"unknown calculus {name!r}")


# ---------------------------------------------------------------------------
# Checking

def _axiom_formula(calculus: CalculusSpec, step: AxiomStep, i: int) -> Formula:
    binding = step.binding_dict()
    if step.axiom_id in (AX_EXISTS, AX_FORALL):
        if not calculus.first_order:
            raise BadAxiomInstance(i, f"{step.axiom_id} needs a first-order calculus")
        try:
            phi = binding["a"]
            x = binding["x"]
            t = binding["t"]
        except KeyError as missing:
            raise BadAxiomInstance(i, f"{step.axiom_id} needs keys a, x, t "
                                      f"(missing {missing})") from None
        if not isinstance(x, str):
            raise BadAxiomInstance(i, "binding key x must be a variable name")
        try:
            substituted = fo.fo_substitute(phi, x, t)
        except fo.NotFreeFor as err:
            raise BadAxiomInstance(i, str(err)) from None
        if step.axiom_id == AX_EXISTS:
            return Binary(IMP, substituted, fo.Exists(x, phi))
        return Binary(IMP, fo.Forall(x, phi), substituted)
    schema = calculus.axiom_schema(step.axiom_id)
    if schema is None:
        raise BadAxiomInstance(i, f"{step.axiom_id!r} is not an axiom of {calculus.name}")
    try:
        formula = syntax.substitute(schema, binding)
    except syntax.MissingBinding as err:
        raise BadAxiomInstance(i, str(err)) from None
    try:
        if calculus.first_order:
            fo.validate_fo(formula, calculus.sig)
        else:
            syntax.validate(formula, calculus.sig)
    except syntax.SignatureViolation as err:
        raise BadAxiomInstance(i, str(err)) from None
    return formula


def _split_iff(f: Formula) -> Optional[tuple[Formula, Formula]]:
    if (
        isinstance(f, Binary) and f.op == AND
        and isinstance(f.left, Binary) and f.left.op == IMP
        and isinstance(f.right, Binary) and f.right.op == IMP
        and f.left.left == f.right.right
        and f.left.right == f.right.left
    ):
        return f.left.left, f.left.right
    return None


_REPLACEMENT_OPS = {RNEG: NEG, RCIRC: CIRC, RBOX1: BOX1, RBOX2: BOX2}


def _rule_formula(calculus: CalculusSpec, step: RuleStep, formulas: list[Formula], i: int) -> Formula:
    if step.rule_id not in calculus.global_rules:
        raise BadRuleApplication(i, f"rule {step.rule_id} is not part of {calculus.name}")
    for ref in step.antecedents:
        if not 0 <= ref < i:
            raise ForwardReference(i, f"step cites line {ref + 1}")
    if step.rule_id == MP:
        if len(step.antecedents) != 2:
            raise BadRuleApplication(i, "mp cites a premise and an implication")
        minor = formulas[step.antecedents[0]]
        major = formulas[step.antecedents[1]]
        if not (isinstance(major, Binary) and major.op == IMP and major.left == minor):
            raise BadRuleApplication(i, "mp needs lines of shape a and a -> b")
        return major.right
    if step.rule_id in _REPLACEMENT_OPS:
        if len(step.antecedents) != 1:
            raise BadRuleApplication(i, f"{step.rule_id} cites one equivalence")
        split = _split_iff(formulas[step.antecedents[0]])
        if split is None:
            raise BadRuleApplication(i, f"{step.rule_id} needs a line of shape "
                                        "(a -> b) & (b -> a)")
        left, right = split
        op = _REPLACEMENT_OPS[step.rule_id]
        return syntax.iff(Unary(op, left), Unary(op, right))
    if step.rule_id in (EXISTS_IN, FORALL_IN):
        if not calculus.first_order:
            raise BadRuleApplication(i, f"{step.rule_id} needs a first-order calculus")
        if len(step.antecedents) != 1 or step.var is None:
            raise BadRuleApplication(i, f"{step.rule_id} cites one implication and a variable")
        ante = formulas[step.antecedents[0]]
        if not (isinstance(ante, Binary) and ante.op == IMP):
            raise BadRuleApplication(i, f"{step.rule_id} needs a line of shape a -> b")
        phi, psi = ante.left, ante.right
        if step.rule_id == EXISTS_IN:
            if step.var in fo.free_vars(psi):
                raise BadRuleApplication(i, f"{step.var} occurs free in the consequent")
            return Binary(IMP, fo.Exists(step.var, phi), psi)
        if step.var in fo.free_vars(phi):
            raise BadRuleApplication(i, f"{step.var} occurs free in the antecedent")
        return Binary(IMP, phi, fo.Forall(step.var, psi))
    raise BadRuleApplication(i, f"unknown rule {step.rule_id!r}")


def _step_formulas(proof: Proof, allow_premises: bool) -> list[Formula]:
    formulas: list[Formula] = []
    for i, step in enumerate(proof.steps):
        if isinstance(step, AxiomStep):
            formulas.append(_axiom_formula(proof.calculus, step, i))
        elif isinstance(step, PremiseStep):
            if not allow_premises:
                raise BadRuleApplication(i, "premise step in a theorem proof")
            if not 0 <= step.index < len(proof.premises):
                raise BadRuleApplication(i, f"premise index {step.index} out of range")
            formulas.append(proof.premises[step.index])
        elif isinstance(step, RuleStep):
            formulas.append(_rule_formula(proof.calculus, step, formulas, i))
        else:
            raise BadRuleApplication(i, f"unknown step kind {type(step).__name__}")
    if not formulas:
        raise ValueError("empty proof")
    return formulas


def check_theorem(proof: Proof) -> Formula:
    """Verify a premise-free derivation; returns the certified conclusion.

    Global rules are permitted everywhere: every line of a premise-free
    derivation is itself a theorem.
    """
    if proof.premises:
        raise ValueError("theorem proofs take no premises; use check_global_derivation")
    return _step_formulas(proof, allow_premises=False)[-1]


def check_local_derivation(
    calculus: CalculusSpec,
    gamma: Sequence[Formula],
    phi: Formula,
    witness: tuple[Sequence[int], Proof],
) -> bool:
    """Degree-preserving derivability with an explicit finite-subset witness.

    True iff the witness proof is a theorem of the calculus concluding either
    phi itself (empty subset) or (g_i1 & ... & g_ik) -> phi for the cited
    nonempty subset, right-nested in the cited order.
    """
    subset, proof = witness
    subset = list(subset)
    for k in subset:
        if not 0 <= k < len(gamma):
            raise WitnessError(f"premise index {k} out of range")
    if proof.premises or proof.calculus is not calculus and proof.calculus != calculus:
        return False
    try:
        conclusion = check_theorem(proof)
    except (ProofError, ValueError):
        return False
    if not subset:
        return conclusion == phi
    target = Binary(IMP, syntax.conjoin([gamma[k] for k in subset]), phi)
    return conclusion == target


def check_global_derivation(
    calculus: CalculusSpec,
    gamma: Sequence[Formula],
    phi: Formula,
    proof: Proof,
) -> bool:
    """Truth-preserving derivability: premises citable anywhere, global rules
    applicable to any earlier line."""
    if proof.calculus is not calculus and proof.calculus != calculus:
        return False
    if tuple(proof.premises) != tuple(gamma):
        return False
    try:
        formulas = _step_formulas(proof, allow_premises=True)
    except (ProofError, ValueError):
        return False
    return formulas[-1] == phi


# ---------------------------------------------------------------------------
# Script format: one step per line, 1-based labels, 0-based premise indices.
#
#   1. axiom Ax1 {a: p, b: q}
#   2. premise 0
#   3. mp 2 1
#   4. rneg 3
#   5. existsin 4 x

def _render_binding_value(value, first_order: bool) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (fo.TermVar, fo.TermConst, fo.TermApp)):
        return fo.render_term(value)
    if first_order:
        return fo.render_fo(value)
    return syntax.render(value)


def render_script(proof: Proof) -> str:
    lines = []
    first_order = proof.calculus.first_order
    for i, step in enumerate(proof.steps):
        label = f"{i + 1}."
        if isinstance(step, AxiomStep):
            parts = ", ".join(
                f"{key}: {_render_binding_value(value, first_order)}"
                for key, value in step.binding
            )
            lines.append(f"{label} axiom {step.axiom_id} {{{parts}}}")
        elif isinstance(step, PremiseStep):
            lines.append(f"{label} premise {step.index}")
        else:
            refs = " ".join(str(r + 1) for r in step.antecedents)
            tail = f" {step.var}" if step.var is not None else ""
            lines.append(f"{label} {step.rule_id} {refs}{tail}")
    return "\n".join(lines) + "\n"


class ScriptError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _split_binding(body: str, line_no: int) -> list[tuple[str, str]]:
    entries = []
    depth = 0
    current = ""
    for ch in body:
        # commas only nest inside predicate-argument parentheses
        if ch == "," and depth == 0:
            entries.append(current)
            current = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        current += ch
    if current.strip():
        entries.append(current)
    pairs = []
    for entry in entries:
        if ":" not in entry:
            raise ScriptError(line_no, f"binding entry {entry.strip()!r} lacks ':'")
        key, _, value = entry.partition(":")
        pairs.append((key.strip(), value.strip()))
    return pairs


def parse_script(
    text: str,
    calculus: CalculusSpec,
    fosig: Optional[fo.FOSignature] = None,
) -> tuple[Step, ...]:
    steps: list[Step] = []
    expected = 1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, _, rest = line.partition(".")
        try:
            label_num = int(label)
        except ValueError:
            raise ScriptError(line_no, f"missing step label in {line!r}") from None
        if label_num != expected:
            raise ScriptError(line_no, f"expected step {expected}, found {label}")
        expected += 1
        rest = rest.strip()
        word, _, tail = rest.partition(" ")
        tail = tail.strip()
        if word == "axiom":
            axiom_id, _, brace = tail.partition(" ")
            brace = brace.strip()
            binding: dict[str, object] = {}
            if brace:
                if not (brace.startswith("{") and brace.endswith("}")):
                    raise ScriptError(line_no, "axiom binding must be {key: value, ...}")
                for key, value in _split_binding(brace[1:-1], line_no):
                    if key == "x":
                        binding[key] = value
                    elif key == "t":
                        if fosig is None:
                            raise ScriptError(line_no, "term binding needs a first-order signature")
                        binding[key] = fo.parse_term(value, fosig)
                    elif calculus.first_order:
                        if fosig is None:
                            raise ScriptError(line_no, "formula binding needs a first-order signature")
                        binding[key] = fo.parse_fo(value, fosig)
                    else:
                        binding[key] = syntax.parse(value, calculus.sig)
            steps.append(AxiomStep.make(axiom_id, binding))
        elif word == "premise":
            steps.append(PremiseStep(int(tail)))
        elif word in RULE_IDS:
            parts = tail.split()
            if word in (EXISTS_IN, FORALL_IN):
                if len(parts) != 2:
                    raise ScriptError(line_no, f"{word} takes a step label and a variable")
                steps.append(RuleStep(word, (int(parts[0]) - 1,), parts[1]))
            else:
                refs = tuple(int(p) - 1 for p in parts)
                steps.append(RuleStep(word, refs))
        else:
            raise ScriptError(line_no, f"unknown step kind {word!r}")
    if not steps:
        raise ScriptError(0, "script has no steps")
    return tuple(steps)


# ---------------------------------------------------------------------------
# The shipped theorem library

@dataclass(frozen=True)
class LibraryEntry:
    name: str
    calculus_name: str
    description: str
    conclusion_text: str
    script: str
    mode: str = "theorem"               # "theorem" | "global"
    premises_text: tuple[str, ...] = ()

    @property
    def calculus(self) -> CalculusSpec:
        return get_calculus(self.calculus_name)

    @property
    def premises(self) -> tuple[Formula, ...]:
        sig = self.calculus.sig
        return tuple(syntax.parse(text, sig) for text in self.premises_text)

    @property
    def conclusion(self) -> Formula:
        return syntax.parse(self.conclusion_text, self.calculus.sig)

    def proof(self) -> Proof:
        calculus = self.calculus
        steps = parse_script(self.script, calculus)
        return Proof(calculus, self.premises, steps)


def library_entries() -> list[LibraryEntry]:
    root = resources.files("balfi_lab") / "library"
    index = json.loads((root / "index.json").read_text())
    entries = []
    for item in index:
        script = (root / item["file"]).read_text()
        entries.append(LibraryEntry(
            name=item["name"],
            calculus_name=item["calculus"],
            description=item["description"],
            conclusion_text=item["conclusion"],
            script=script,
            mode=item.get("mode", "theorem"),
            premises_text=tuple(item.get("premises", ())),
        ))
    return entries


def library_entry(name: str) -> LibraryEntry:
    for entry in library_entries():
        if entry.name == name:
            return entry
    raise KeyError(f"no library script named {name!r}")
