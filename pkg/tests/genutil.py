"""Seeded random generators shared by the test modules."""

import random

from balfi_lab import firstorder as fo
from balfi_lab import modal
from balfi_lab import modelfind as mf
from balfi_lab.syntax import AND, CIRC, IMP, NEG, OR, Binary, Unary, Var

SIGMA_UNARY = (NEG, CIRC)
BINARY = (AND, OR, IMP)


def random_sigma_formula(rng: random.Random, variables, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.choice(variables))
    if rng.random() < 0.4:
        return Unary(rng.choice(SIGMA_UNARY), random_sigma_formula(rng, variables, depth - 1))
    op = rng.choice(BINARY)
    return Binary(
        op,
        random_sigma_formula(rng, variables, depth - 1),
        random_sigma_formula(rng, variables, depth - 1),
    )


def random_frame(rng: random.Random, n_worlds: int) -> modal.NeighborhoodFrame:
    size = 1 << n_worlds
    return modal.NeighborhoodFrame(
        n_worlds,
        tuple(rng.randrange(size) for _ in range(size)),
        tuple(rng.randrange(size) for _ in range(size)),
    )


def random_neighborhood_model(rng: random.Random, n_worlds: int, variables):
    size = 1 << n_worlds
    frame = random_frame(rng, n_worlds)
    d = {v: rng.randrange(size) for v in variables}
    return modal.NeighborhoodModel(frame, d)


def random_balfi(rng: random.Random, n_atoms: int):
    spec = mf.SearchSpec(n_atoms=n_atoms, mode=mf.Random(1, seed=rng.randrange(2 ** 30)))
    return next(mf.enumerate_balfis(spec))


def random_structure(rng: random.Random, max_universe: int = 3) -> fo.FOStructure:
    universe = rng.randint(1, max_universe)
    balfi = random_balfi(rng, rng.randint(1, 2))
    size = balfi.alg.size

    def fn_table(arity):
        if arity == 0:
            return rng.randrange(universe)
        return tuple(fn_table(arity - 1) for _ in range(universe))

    def pred_table(arity):
        if arity == 0:
            return rng.randrange(size)
        return tuple(pred_table(arity - 1) for _ in range(universe))

    consts = {"c": rng.randrange(universe)}
    funcs = {"f": fn_table(1)}
    if rng.random() < 0.5:
        funcs["g"] = fn_table(2)
    preds = {"P": pred_table(1), "Q": pred_table(2)}
    return fo.FOStructure(universe, balfi, consts, funcs, preds)


def random_term(rng: random.Random, sig: fo.FOSignature, variables, depth: int):
    roll = rng.random()
    if depth == 0 or roll < 0.5:
        return fo.TermVar(rng.choice(variables))
    if roll < 0.7 and sig.constants:
        return fo.TermConst(rng.choice(sorted(sig.constants)))
    name = rng.choice(sorted(sig.functions))
    arity = sig.functions[name]
    return fo.TermApp(name, tuple(random_term(rng, sig, variables, depth - 1)
                                  for _ in range(arity)))


def random_fo_formula(rng: random.Random, sig: fo.FOSignature, variables, depth: int):
    if depth == 0 or rng.random() < 0.25:
        name = rng.choice(sorted(sig.predicates))
        arity = sig.predicates[name]
        return fo.Pred(name, tuple(random_term(rng, sig, variables, 1)
                                   for _ in range(arity)))
    roll = rng.random()
    if roll < 0.25:
        return Unary(rng.choice(SIGMA_UNARY), random_fo_formula(rng, sig, variables, depth - 1))
    if roll < 0.5:
        ctor = fo.Forall if rng.random() < 0.5 else fo.Exists
        return ctor(rng.choice(variables), random_fo_formula(rng, sig, variables, depth - 1))
    op = rng.choice(BINARY)
    return Binary(
        op,
        random_fo_formula(rng, sig, variables, depth - 1),
        random_fo_formula(rng, sig, variables, depth - 1),
    )
