import itertools
import random

import pytest

from balfi_lab import balfi as bf
from balfi_lab import modal
from balfi_lab import modelfind as mf
from balfi_lab import syntax as sx
from genutil import random_frame, random_neighborhood_model, random_sigma_formula

W1 = 0b01
W2 = 0b10


def classical_frame(n_worlds):
    size = 1 << n_worlds
    top = size - 1
    return modal.NeighborhoodFrame(
        n_worlds,
        tuple(top ^ x for x in range(size)),
        tuple(top for _ in range(size)),
    )


def all_frames_w1():
    for s_neg in itertools.product(range(2), repeat=2):
        for s_circ in itertools.product(range(2), repeat=2):
            yield modal.NeighborhoodFrame(1, s_neg, s_circ)


def test_denote_excluded_middle_and_bottom():
    rng = random.Random(12)
    for _ in range(50):
        m = random_neighborhood_model(rng, rng.randint(1, 3), ["p"])
        top = m.frame.top
        assert modal.denote(m, sx.parse("p | !p")) == top
        assert modal.denote(m, sx.parse("(p & !p) & @p")) == 0


def test_denote_hand_computed():
    # |W| = 1, s_neg identity, s_circ constant W, d(p) = W
    frame = modal.NeighborhoodFrame(1, (0, 1), (1, 1))
    m = modal.NeighborhoodModel(frame, {"p": 1})
    assert modal.denote(m, sx.parse("!p")) == 1
    assert modal.denote(m, sx.parse("@p")) == 0


def test_denote_errors():
    frame = classical_frame(2)
    m = modal.NeighborhoodModel(frame, {"p": W1})
    with pytest.raises(modal.UnboundVariable):
        modal.denote(m, sx.parse("q"))
    with pytest.raises(modal.UnsupportedOperator):
        modal.denote(m, sx.parse("[1]p", "SigmaBM"))


def test_balfi_from_frame_examples():
    # s_neg = complement map: the induced negation is classical
    fr = classical_frame(2)
    b = modal.balfi_from_frame(fr)
    assert all(b.neg[x] == b.alg.compl(x) for x in b.alg.elements())
    # s_neg constantly W: negation constantly W
    fr = modal.NeighborhoodFrame(2, (3, 3, 3, 3), (0, 1, 2, 3))
    b = modal.balfi_from_frame(fr)
    assert all(b.neg[x] == 3 for x in b.alg.elements())
    # identity s_neg with constant-W s_circ
    fr = modal.NeighborhoodFrame(1, (0, 1), (1, 1))
    b = modal.balfi_from_frame(fr)
    assert b.neg == (1, 1)
    assert b.circ == (1, 0)


def test_balfi_from_frame_always_valid():
    rng = random.Random(5)
    for _ in range(200):
        fr = random_frame(rng, rng.randint(1, 3))
        b = modal.balfi_from_frame(fr)  # check_balfi inside
        assert bf.is_valid_in(b, sx.parse("p | !p"))


def test_frame_round_trip_on_remark_model():
    b = mf.reconstruct_example("B_remark")
    fr = modal.frame_from_balfi(b)
    assert fr.s_neg[W1] == W2
    assert fr.s_circ[W1] == W1
    assert modal.balfi_from_frame(fr) == b


def test_frame_round_trip_random():
    rng = random.Random(31)
    for b in mf.enumerate_balfis(mf.SearchSpec(n_atoms=3, mode=mf.Random(60, seed=2))):
        assert modal.balfi_from_frame(modal.frame_from_balfi(b)) == b


def test_frame_valid_schema():
    ax10 = sx.schema("a | !a")
    rng = random.Random(9)
    for _ in range(30):
        fr = random_frame(rng, rng.randint(1, 3))
        assert modal.frame_valid_schema(fr, ax10)
    b3 = mf.reconstruct_example("B_triple_prime")
    fr = modal.frame_from_balfi(b3)
    assert modal.frame_valid_schema(fr, bf.AXIOM_TAG_SCHEMAS["cl"])
    assert not modal.frame_valid_schema(fr, bf.AXIOM_TAG_SCHEMAS["cf"])


def test_frame_condition_examples():
    fr = classical_frame(2)
    for tag in modal.FRAME_CONDITION_TAGS:
        assert modal.frame_condition(fr, tag)
    # s_neg constantly W, s_circ constantly empty: ciw fails at X = empty
    fr = modal.NeighborhoodFrame(2, (3,) * 4, (0,) * 4)
    assert not modal.frame_condition(fr, "ciw")
    with pytest.raises(ValueError):
        modal.frame_condition(fr, "caAnd")


def test_frame_condition_matches_schema_validity_w1_exhaustive():
    for fr in all_frames_w1():
        for tag in modal.FRAME_CONDITION_TAGS:
            assert modal.frame_condition(fr, tag) == modal.frame_valid_schema(
                fr, bf.AXIOM_TAG_SCHEMAS[tag]
            ), (fr, tag)


def test_frame_condition_matches_schema_validity_w2_sample():
    rng = random.Random(77)
    for _ in range(300):
        fr = random_frame(rng, 2)
        for tag in modal.FRAME_CONDITION_TAGS:
            assert modal.frame_condition(fr, tag) == modal.frame_valid_schema(
                fr, bf.AXIOM_TAG_SCHEMAS[tag]
            ), (fr, tag)


def test_denote_bimodal_axioms():
    rng = random.Random(4)
    pem = sx.parse("a | ~a", "SigmaBM")
    exp = sx.parse("a -> (~a -> b)", "SigmaBM")
    mod1 = sx.parse("<1>a <-> ~[1]~a", "SigmaBM")
    mod2 = sx.parse("<2>a <-> ~[2]~a", "SigmaBM")
    for _ in range(100):
        n_worlds = rng.randint(1, 3)
        m = random_neighborhood_model(rng, n_worlds, ["a", "b"])
        nm = modal.minimal_from_neighborhood(m)
        for f in (pem, exp, mod1, mod2):
            assert modal.denote_bimodal(nm, f) == nm.top


def test_denote_bimodal_empty_neighborhoods():
    nm = modal.MinimalModel(2, (frozenset(), frozenset()), (frozenset(), frozenset()),
                            {"p": W1})
    assert modal.denote_bimodal(nm, sx.parse("[1]p", "SigmaBM")) == 0
    assert modal.denote_bimodal(nm, sx.parse("<1>p", "SigmaBM")) == 3


def test_rbox_preserves_validity_on_instances():
    rng = random.Random(8)
    iff = sx.parse("(p & q) <-> (q & p)", "SigmaBM")
    boxed = sx.parse("[1](p & q) <-> [1](q & p)", "SigmaBM")
    for _ in range(50):
        m = random_neighborhood_model(rng, rng.randint(1, 3), ["p", "q"])
        nm = modal.minimal_from_neighborhood(m)
        assert modal.denote_bimodal(nm, iff) == nm.top
        assert modal.denote_bimodal(nm, boxed) == nm.top


def test_translate_clauses():
    p = sx.parse("p")
    assert modal.translate(sx.parse("!p")) == sx.parse("p -> [1]p", "SigmaBM")
    assert modal.translate(sx.parse("@p")) == sx.parse("~(p & [1]p) & [2]p", "SigmaBM")
    assert modal.translate(sx.parse("p & q")) == sx.parse("p & q", "SigmaBM")
    with pytest.raises(modal.UnsupportedOperator):
        modal.translate(sx.parse("~p", "SigmaBM"))


def test_n_s_inverse_exhaustive_w2():
    size = 4
    for s_map in itertools.product(range(size), repeat=size):
        n_map = modal.s_to_n(2, s_map)
        assert modal.n_to_s(2, n_map) == s_map
    # and the other direction on a sample of N maps
    rng = random.Random(14)
    subsets = list(range(size))
    for _ in range(200):
        n_map = tuple(frozenset(rng.sample(subsets, rng.randint(0, size))) for _ in range(2))
        assert modal.s_to_n(2, modal.n_to_s(2, n_map)) == n_map


def test_n_s_constant_examples():
    assert modal.s_to_n(2, (0, 0, 0, 0)) == (frozenset(), frozenset())
    assert modal.s_to_n(2, (3, 3, 3, 3)) == (frozenset(range(4)), frozenset(range(4)))


def test_translation_invariance_sample():
    rng = random.Random(2024)
    for _ in range(300):
        n_worlds = rng.randint(1, 4)
        m = random_neighborhood_model(rng, n_worlds, ["p", "q", "r"])
        nm = modal.minimal_from_neighborhood(m)
        f = random_sigma_formula(rng, ["p", "q", "r"], rng.randint(0, 6))
        assert modal.denote(m, f) == modal.denote_bimodal(nm, modal.translate(f))


def test_frame_dict_round_trip():
    rng = random.Random(6)
    for _ in range(20):
        fr = random_frame(rng, rng.randint(1, 3))
        assert modal.frame_from_dict(modal.frame_to_dict(fr)) == fr
        m = random_neighborhood_model(rng, 2, ["p"])
        nm = modal.minimal_from_neighborhood(m)
        assert modal.minimal_from_dict(modal.minimal_to_dict(nm)) == nm


def test_world_cap():
    with pytest.raises(ValueError):
        modal.NeighborhoodFrame(6, (0,) * 64, (0,) * 64)
    with pytest.raises(ValueError):
        modal.NeighborhoodFrame(2, (0, 1), (0, 1, 2, 3))
