import json

import pytest

from balfi_lab import balfi as bf
from balfi_lab import firstorder as fo
from balfi_lab import modal
from balfi_lab import modelfind as mf
from balfi_lab.cli import EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_YES, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_verb(capsys):
    code, out, _ = run(capsys, "parse", "--formula", "p <-> q")
    assert code == EXIT_YES
    assert out.strip() == "(p -> q) & (q -> p)"
    code, out, _ = run(capsys, "parse", "--json", "--formula", "!p", "--sig", "Sigma")
    assert code == EXIT_YES
    doc = json.loads(out)
    assert doc["ast"] == {"op": "neg", "child": {"var": "p"}}


def test_parse_errors_exit_usage(capsys):
    code, _, err = run(capsys, "parse", "--formula", "p & ")
    assert code == EXIT_USAGE
    assert "syntax error" in err
    code, _, err = run(capsys, "parse", "--formula", "@p", "--sig", "SigmaC")
    assert code == EXIT_USAGE


def test_validity_countermodel(capsys):
    code, out, _ = run(capsys, "validity", "--calculus", "RmbC", "--atoms", "2",
                       "--formula", "(p<->q)->(!p<->!q)", "--json")
    assert code == EXIT_NO
    doc = json.loads(out)
    b = bf.balfi_from_dict(doc["witness"]["model"])
    v = {name: b.alg.from_atoms(atoms) for name, atoms in doc["witness"]["valuation"].items()}
    from balfi_lab import syntax as sx
    assert bf.evaluate(b, v, sx.parse("(p<->q)->(!p<->!q)")) != b.top


def test_validity_clean_sweep(capsys):
    code, out, _ = run(capsys, "validity", "--atoms", "2", "--formula", "p | !p")
    assert code == EXIT_YES
    assert "no countermodel" in out


def test_validity_random_inconclusive(capsys):
    code, out, _ = run(capsys, "validity", "--atoms", "3", "--formula", "p | !p",
                       "--random", "50", "--seed", "1")
    assert code == EXIT_UNKNOWN


def test_consequence_verb(capsys):
    code, out, _ = run(capsys, "consequence", "--atoms", "2", "--mode", "local",
                       "--premises", "q; !q", "--goal", "p")
    assert code == EXIT_NO
    code, out, _ = run(capsys, "consequence", "--atoms", "2", "--mode", "local",
                       "--premises", "p; !p; @p", "--goal", "q")
    assert code == EXIT_YES
    # globally, {p, !p} |= q over the cf subclass but not over all models
    code, _, _ = run(capsys, "consequence", "--atoms", "2", "--mode", "global",
                     "--require", "cf", "--premises", "p; !p", "--goal", "q")
    assert code == EXIT_YES
    code, _, _ = run(capsys, "consequence", "--atoms", "2", "--mode", "global",
                     "--premises", "p; !p", "--goal", "q")
    assert code == EXIT_NO


def test_enumerate_count(capsys):
    code, out, _ = run(capsys, "enumerate", "--atoms", "2", "--count-only")
    assert code == EXIT_YES
    assert out.strip() == "1296"
    code, out, _ = run(capsys, "enumerate", "--atoms", "2", "--count-only", "--require", "ciw")
    assert out.strip() == "16"


def test_enumerate_jobs_deterministic(capsys):
    code, solo, _ = run(capsys, "enumerate", "--atoms", "2", "--limit", "12")
    assert code == EXIT_YES
    code, par, _ = run(capsys, "enumerate", "--atoms", "2", "--limit", "12", "--jobs", "2")
    assert code == EXIT_YES
    assert solo == par
    code, out, _ = run(capsys, "enumerate", "--atoms", "2", "--count-only", "--jobs", "2")
    assert out.strip() == "1296"


def test_enumerate_space_cap(capsys):
    code, _, err = run(capsys, "enumerate", "--atoms", "3", "--count-only")
    assert code == EXIT_USAGE
    assert "cap" in err


def test_find_model_and_countermodel(capsys):
    code, out, _ = run(capsys, "find", "--atoms", "2", "--require", "ci,cf",
                       "--paraconsistent", "--json")
    assert code == EXIT_NO  # no paraconsistent {ci,cf} model exists over A4
    code, out, _ = run(capsys, "find", "--atoms", "2", "--require", "cf",
                       "--paraconsistent", "--json")
    assert code == EXIT_YES
    doc = json.loads(out)
    b = bf.balfi_from_dict(doc["model"])
    assert bf.satisfies_equation(b, "cf") and bf.is_paraconsistent(b)
    code, out, _ = run(capsys, "find", "--atoms", "2", "--goal", "(p & !p) -> q",
                       "--mode", "local", "--json")
    assert code == EXIT_YES
    code, out, _ = run(capsys, "find", "--atoms", "2", "--goal", "(p & !p & @p) -> q",
                       "--mode", "local")
    assert code == EXIT_NO


def test_check_proof_library_and_file(tmp_path, capsys):
    code, out, _ = run(capsys, "check-proof", "--calculus", "mbC",
                       "--script", "circ_implies_strongneg")
    assert code == EXIT_YES
    # the .prf spelling resolves against the shipped library too
    code, _, _ = run(capsys, "check-proof", "--calculus", "mbC",
                     "--script", "circ_implies_strongneg.prf")
    assert code == EXIT_YES
    # a mutated script is rejected
    from balfi_lab import hilbert as hb
    entry = hb.library_entry("mp_local_demo")
    broken = entry.script.replace("20. mp 11 19", "20. mp 19 11")
    path = tmp_path / "broken.prf"
    path.write_text(broken)
    code, out, _ = run(capsys, "check-proof", "--calculus", "CPLplus", "--script", str(path))
    assert code == EXIT_NO


def test_check_proof_global_vs_local(capsys):
    code, _, _ = run(capsys, "check-proof", "--calculus", "RmbC",
                     "--script", "rneg_on_premise", "--mode", "global")
    assert code == EXIT_YES
    code, _, _ = run(capsys, "check-proof", "--calculus", "RmbC",
                     "--script", "rneg_on_premise", "--mode", "local",
                     "--premises", "p <-> q", "--goal", "!p <-> !q", "--subset", "0")
    assert code == EXIT_NO


def test_translate_verb(capsys):
    code, out, _ = run(capsys, "translate", "--formula", "!p")
    assert code == EXIT_YES
    assert out.strip() == "p -> [1]p"


def test_frame_check_verb(tmp_path, capsys):
    b = mf.reconstruct_example("B_triple_prime")
    frame = modal.frame_from_balfi(b)
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(modal.frame_to_dict(frame)))
    code, out, _ = run(capsys, "frame-check", "--frame", str(path), "--tags", "cl")
    assert code == EXIT_YES
    assert "cl: condition=True schema-valid=True" in out
    code, out, _ = run(capsys, "frame-check", "--frame", str(path), "--tags", "cl,cf")
    assert code == EXIT_NO
    assert "cf: condition=False schema-valid=False" in out


def test_fo_eval_verb(tmp_path, capsys):
    balfi = mf.reconstruct_example("B_remark")
    st = fo.FOStructure(1, balfi, {"c": 0}, {}, {"P": (1,)})
    path = tmp_path / "structure.json"
    path.write_text(json.dumps(fo.structure_to_dict(st)))
    code, out, _ = run(capsys, "fo-eval", "--structure", str(path),
                       "--formula", "P(x) -> exists y. P(y)")
    assert code == EXIT_YES
    code, out, _ = run(capsys, "fo-eval", "--structure", str(path),
                       "--formula", "forall x. P(x)", "--json")
    assert code == EXIT_NO
    assert json.loads(out) == {"valid": False}
    code, out, _ = run(capsys, "fo-eval", "--structure", str(path),
                       "--formula", "forall x. P(x)", "--assign", "z=0", "--json")
    assert code == EXIT_NO
    assert json.loads(out)["value"] == [0]


def test_examples_verb(capsys):
    code, out, _ = run(capsys, "examples", "--list")
    assert code == EXIT_YES
    assert "B_remark" in out
    code, out, _ = run(capsys, "examples", "--name", "B_remark", "--json")
    assert code == EXIT_YES
    doc = json.loads(out)
    b = bf.balfi_from_dict(doc["model"])
    assert b.neg[1] == 2 and b.circ[3] == 0


def test_find_jobs_matches_sequential(capsys):
    argv = ["find", "--atoms", "2", "--goal", "(p <-> q) -> (!p <-> !q)", "--json"]
    solo = run(capsys, *argv)
    par = run(capsys, *argv, "--jobs", "3")
    assert solo == par
    assert solo[0] == EXIT_YES
    argv = ["find", "--atoms", "2", "--require", "cf", "--paraconsistent", "--json"]
    assert run(capsys, *argv) == run(capsys, *argv, "--jobs", "2")


def test_byte_for_byte_reproducibility(capsys):
    argv = ["find", "--atoms", "3", "--random", "40", "--seed", "9",
            "--require", "ciw", "--paraconsistent", "--json"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    argv = ["enumerate", "--atoms", "2", "--require", "cf", "--limit", "7"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_usage_errors(capsys):
    code, _, err = run(capsys, "validity", "--formula", "p", "--calculus", "Nope")
    assert code == EXIT_USAGE
    code, _, err = run(capsys, "frame-check", "--frame", "/nonexistent.json")
    assert code == EXIT_USAGE
    code, _, err = run(capsys, "no-such-verb")
    assert code == EXIT_USAGE
