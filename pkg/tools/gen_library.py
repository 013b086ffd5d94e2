"""Regenerate the shipped theorem-library scripts.

Each proof is assembled with the ProofBuilder, verified with the ordinary
checker, rendered to the script format, re-parsed and re-verified, and only
then written to src/balfi_lab/library/.  Run from the repository root:

    python tools/gen_library.py
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from balfi_lab import hilbert, syntax
from balfi_lab.hilbert import CPL_PLUS, MBC, RMBC, Proof, check_theorem, parse_script, render_script
from balfi_lab.proofbuilder import ProofBuilder
from balfi_lab.syntax import parse

LIBRARY = pathlib.Path(__file__).resolve().parent.parent / "src" / "balfi_lab" / "library"


def mp_local_demo() -> Proof:
    b = ProofBuilder(CPL_PLUS)
    h = b.assume(parse("p & (p -> q)", "SigmaPlus"))
    p = b.and_left(h)
    pq = b.and_right(h)
    b.mp(p, pq)
    b.discharge()
    return b.qed()


def conj_reassoc() -> Proof:
    b = ProofBuilder(CPL_PLUS)
    h = b.assume(parse("(p & q) & r", "SigmaPlus"))
    pq = b.and_left(h)
    r = b.and_right(h)
    p = b.and_left(pq)
    q = b.and_right(pq)
    qr = b.and_intro(q, r)
    b.and_intro(p, qr)
    b.discharge()
    return b.qed()


def circ_implies_strongneg() -> Proof:
    # @p -> ~(p & !p), with ~x the strong negation x -> bottom-pattern
    b = ProofBuilder(MBC)
    bottom = syntax.bottom_pattern()
    h1 = b.assume(parse("@p"))
    h2 = b.assume(parse("p & !p"))
    p = b.and_left(h2)
    np = b.and_right(h2)
    bc1 = b.axiom("bc1", a=parse("p"), b=bottom)
    chain = b.mp(h1, bc1)
    chain = b.mp(p, chain)
    b.mp(np, chain)
    b.discharge()
    b.discharge()
    return b.qed()


def contradiction_implies_negcirc() -> Proof:
    # (p & !p) -> !@p, by cases on @p | !@p
    b = ProofBuilder(MBC)
    h = b.assume(parse("p & !p"))
    p = b.and_left(h)
    np = b.and_right(h)
    h2 = b.assume(parse("@p"))
    bc1 = b.axiom("bc1", a=parse("p"), b=parse("!@p"))
    chain = b.mp(h2, bc1)
    chain = b.mp(p, chain)
    b.mp(np, chain)
    case1 = b.discharge()
    case2 = b.identity(parse("!@p"))
    em = b.axiom("Ax10", a=parse("@p"))
    b.by_cases(em, case1, case2)
    b.discharge()
    return b.qed()


def circ_implies_neg_contradiction() -> Proof:
    # @p -> !(p & !p), by cases on (p & !p) | !(p & !p)
    b = ProofBuilder(MBC)
    contra = parse("p & !p")
    target = parse("!(p & !p)")
    h = b.assume(parse("@p"))
    h2 = b.assume(contra)
    p = b.and_left(h2)
    np = b.and_right(h2)
    bc1 = b.axiom("bc1", a=parse("p"), b=target)
    chain = b.mp(h, bc1)
    chain = b.mp(p, chain)
    b.mp(np, chain)
    case1 = b.discharge()
    case2 = b.identity(target)
    em = b.axiom("Ax10", a=contra)
    b.by_cases(em, case1, case2)
    b.discharge()
    return b.qed()


def neg_commutes_conj() -> Proof:
    # !(p & q) <-> !(q & p), replacement applied to a proved equivalence
    b = ProofBuilder(RMBC)
    h = b.assume(parse("p & q"))
    p = b.and_left(h)
    q = b.and_right(h)
    b.and_intro(q, p)
    forward = b.discharge()
    h = b.assume(parse("q & p"))
    q = b.and_left(h)
    p = b.and_right(h)
    b.and_intro(p, q)
    backward = b.discharge()
    equivalence = b.iff_intro(forward, backward)
    b.rule("rneg", equivalence)
    return b.qed()


def nec_circ_pem() -> Proof:
    # @(p | !p) in RmbC({cl, ce}), mirroring the admissibility argument:
    # from alpha infer !alpha <-> (alpha & !alpha), replace under !, then ce + cl.
    calculus = hilbert.rmbc_extension("cl", "ce")
    b = ProofBuilder(calculus)
    alpha = parse("p | !p")
    em = b.axiom("Ax10", a=parse("p"))
    h = b.assume(syntax.Unary(syntax.NEG, alpha))
    b.and_intro(em, h)
    forward = b.discharge()
    backward = b.axiom("Ax5", a=alpha, b=syntax.Unary(syntax.NEG, alpha))
    equivalence = b.iff_intro(forward, backward)
    replaced = b.rule("rneg", equivalence)
    ce = b.axiom("ce", a=alpha)
    nna = b.mp(em, ce)
    direction = b.and_left(replaced)
    nc = b.mp(nna, direction)
    cl = b.axiom("cl", a=alpha)
    b.mp(nc, cl)
    return b.qed()


RNEG_ON_PREMISE = "1. premise 0\n2. rneg 1\n"


def main() -> None:
    generated = [
        ("mp_local_demo", "CPLplus", mp_local_demo(),
         "detachment under a conjoined premise, the local-derivation witness shape"),
        ("conj_reassoc", "CPLplus", conj_reassoc(),
         "reassociation of a nested conjunction"),
        ("circ_implies_strongneg", "mbC", circ_implies_strongneg(),
         "consistency implies the strong negation of the contradiction"),
        ("contradiction_implies_negcirc", "mbC", contradiction_implies_negcirc(),
         "a contradiction implies the negated consistency claim"),
        ("circ_implies_neg_contradiction", "mbC", circ_implies_neg_contradiction(),
         "consistency implies the negated contradiction"),
        ("neg_commutes_conj", "RmbC", neg_commutes_conj(),
         "replacement under negation for a commuted conjunction"),
        ("nec_circ_pem", "RmbC(cl,ce)", nec_circ_pem(),
         "consistency of excluded middle in RmbC({cl,ce})"),
    ]
    LIBRARY.mkdir(exist_ok=True)
    index = []
    for name, calculus_name, proof, description in generated:
        conclusion = check_theorem(proof)
        script = render_script(proof)
        reparsed = Proof(proof.calculus, (), parse_script(script, proof.calculus))
        assert check_theorem(reparsed) == conclusion, name
        (LIBRARY / f"{name}.prf").write_text(script)
        index.append({
            "name": name,
            "file": f"{name}.prf",
            "calculus": calculus_name,
            "mode": "theorem",
            "conclusion": syntax.render(conclusion),
            "description": description,
        })
        print(f"{name}: {len(proof.steps)} steps, conclusion {syntax.render(conclusion)}")

    (LIBRARY / "rneg_on_premise.prf").write_text(RNEG_ON_PREMISE)
    index.append({
        "name": "rneg_on_premise",
        "file": "rneg_on_premise.prf",
        "calculus": "RmbC",
        "mode": "global",
        "premises": ["p <-> q"],
        "conclusion": "!p <-> !q",
        "description": "replacement applied to a premise: valid globally, not locally",
    })
    (LIBRARY / "index.json").write_text(json.dumps(index, indent=2) + "\n")
    print(f"wrote {len(index)} scripts to {LIBRARY}")


if __name__ == "__main__":
    main()
