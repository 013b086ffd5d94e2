import random

import pytest

from balfi_lab import syntax as sx
from balfi_lab.syntax import (
    AND, BOT, CIRC, CNEG, IMP, NEG, OR,
    Binary, Const, MissingBinding, ParseError, Schema, SignatureViolation, Unary, Var,
)


def test_parse_neg_and_circ():
    assert sx.parse("!p & @p") == Binary(AND, Unary(NEG, Var("p")), Unary(CIRC, Var("p")))


def test_parse_iff_is_sugar():
    p, q = Var("p"), Var("q")
    assert sx.parse("p <-> q") == Binary(AND, Binary(IMP, p, q), Binary(IMP, q, p))


def test_parse_bimodal():
    f = sx.parse("[1]p -> <2>q", "SigmaBM")
    assert f == Binary(IMP, Unary("box1", Var("p")), Unary("dia2", Var("q")))


def test_bottom_sugar_expansion():
    expected = sx.parse("(p0 & !p0) & @p0")
    assert sx.parse("_|_") == expected
    assert sx.parse("⊥") == expected


def test_strong_negation_expansions():
    # In Sigma: a -> bottom-pattern
    assert sx.parse("~p") == Binary(IMP, Var("p"), sx.bottom_pattern())
    # Primitive where the signature admits it
    assert sx.parse("~p", "SigmaBM") == Unary(CNEG, Var("p"))
    assert sx.parse("~p", "SigmaCe") == Unary(CNEG, Var("p"))
    # Via the constant where one is available
    assert sx.parse("~p", "SigmaC0") == Binary(IMP, Var("p"), Const(BOT))
    assert sx.parse("~p", "SigmaE") == Binary(IMP, Var("p"), Const(BOT))
    assert sx.parse("~p", "SigmaBA") == Binary(IMP, Var("p"), Const(BOT))
    with pytest.raises(SignatureViolation):
        sx.parse("~p", "SigmaPlus")


def test_precedence_and_associativity():
    assert sx.parse("p & q | r -> s") == Binary(
        IMP, Binary(OR, Binary(AND, Var("p"), Var("q")), Var("r")), Var("s")
    )
    assert sx.parse("p -> q -> r") == Binary(IMP, Var("p"), Binary(IMP, Var("q"), Var("r")))
    assert sx.parse("p & q & r") == Binary(AND, Binary(AND, Var("p"), Var("q")), Var("r"))
    assert sx.parse("!p & q") == Binary(AND, Unary(NEG, Var("p")), Var("q"))


def test_unicode_spellings():
    assert sx.parse("¬p ∧ ∘q") == sx.parse("!p & @q")
    assert sx.parse("p → q ∨ r") == sx.parse("p -> q | r")
    assert sx.parse("□₁p → ◇₂p", "SigmaBM") == sx.parse("[1]p -> <2>p", "SigmaBM")


def test_syntax_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        sx.parse("p & ")
    assert exc.value.pos == 4
    with pytest.raises(ParseError):
        sx.parse("(p & q")
    with pytest.raises(ParseError):
        sx.parse("p q")
    with pytest.raises(ParseError):
        sx.parse("p & $q")


def test_signature_violations_name_offender():
    with pytest.raises(SignatureViolation) as exc:
        sx.parse("@p", "SigmaC")
    assert exc.value.offender == "@"
    with pytest.raises(SignatureViolation):
        sx.parse("[1]p", "Sigma")
    with pytest.raises(SignatureViolation):
        sx.parse("0", "Sigma")
    with pytest.raises(SignatureViolation):
        sx.parse("_|_", "SigmaBA")  # expansion needs ! and @
    # validation of an already-built tree
    with pytest.raises(SignatureViolation):
        sx.validate(Unary(CIRC, Var("p")), "SigmaC")


SIG_OPS = {
    "Sigma": ([NEG, CIRC], []),
    "SigmaE": ([NEG, CIRC], [BOT, "top"]),
    "SigmaBM": ([CNEG, "box1", "dia1", "box2", "dia2"], []),
    "SigmaPlus": ([], []),
    "SigmaBA": ([], [BOT, "top"]),
}


def random_formula(rng, sig_name, depth):
    unary, consts = SIG_OPS[sig_name]
    if depth == 0 or rng.random() < 0.25:
        if consts and rng.random() < 0.2:
            return Const(rng.choice(consts))
        return Var(rng.choice(["p", "q", "r", "s_1"]))
    choices = ["binary"] * 3 + (["unary"] * 2 if unary else [])
    if rng.choice(choices) == "unary":
        return Unary(rng.choice(unary), random_formula(rng, sig_name, depth - 1))
    op = rng.choice([AND, OR, IMP])
    return Binary(op, random_formula(rng, sig_name, depth - 1), random_formula(rng, sig_name, depth - 1))


def test_render_parse_round_trip():
    rng = random.Random(20240811)
    for sig_name in SIG_OPS:
        for _ in range(300):
            f = random_formula(rng, sig_name, rng.randint(0, 8))
            assert sx.parse(sx.render(f), sig_name) == f


def test_substitute_bc1():
    bc1 = sx.schema("@a -> (a -> (!a -> b))")
    inst = sx.substitute(bc1, {"a": Var("p"), "b": Var("q")})
    assert inst == sx.parse("@p -> (p -> (!p -> q))")


def test_substitute_ax10_and_identity():
    ax10 = sx.schema("a | !a")
    conj = sx.parse("p & q")
    assert sx.substitute(ax10, {"a": conj}) == sx.parse("(p & q) | !(p & q)")
    assert sx.substitute(Schema(Var("a")), {"a": Var("p")}) == Var("p")


def test_substitute_missing_binding():
    with pytest.raises(MissingBinding):
        sx.substitute(sx.schema("a -> b"), {"a": Var("p")})


def test_match_schema_examples():
    em = sx.schema("a | !a")
    assert sx.match_schema(em, sx.parse("p | !p")) == {"a": Var("p")}
    assert sx.match_schema(em, sx.parse("p | !q")) is None
    bc1 = sx.schema("@a -> (a -> (!a -> b))")
    inst = sx.parse("@(p & q) -> ((p & q) -> (!(p & q) -> r))")
    assert sx.match_schema(bc1, inst) == {"a": sx.parse("p & q"), "b": Var("r")}


def test_match_substitute_round_trip():
    rng = random.Random(7)
    schemas = [sx.schema(t) for t in ("a -> (b -> a)", "a | !a", "@a -> (a -> (!a -> b))",
                                      "(a & b) -> (b & a)")]
    for _ in range(200):
        s = rng.choice(schemas)
        binding = {m: random_formula(rng, "Sigma", 3) for m in s.metavariables}
        inst = sx.substitute(s, binding)
        found = sx.match_schema(s, inst)
        assert found is not None
        assert sx.substitute(s, found) == inst


def test_complexity():
    assert sx.complexity(sx.parse("p")) == 1
    assert sx.complexity(sx.parse("!p")) == 2
    assert sx.complexity(sx.parse("@p")) == 3
    assert sx.complexity(sx.parse("@!p")) == 4
    # the forced ordering: @g strictly heavier than !g, for any g
    rng = random.Random(3)
    for _ in range(50):
        g = random_formula(rng, "Sigma", 4)
        assert sx.complexity(Unary(CIRC, g)) > sx.complexity(Unary(NEG, g))


def test_variables_first_occurrence_order():
    assert sx.variables(sx.parse("q & (p | q) -> r")) == ("q", "p", "r")


def test_conjoin_right_nested():
    p, q, r = Var("p"), Var("q"), Var("r")
    assert sx.conjoin([p, q, r]) == Binary(AND, p, Binary(AND, q, r))
    assert sx.conjoin([p]) == p
    with pytest.raises(ValueError):
        sx.conjoin([])
