"""Command-line surface.

Exit codes: 0 affirmative (theorem checked / no countermodel in the searched
class / model found), 1 negative (countermodel found / proof rejected / no
model in the searched space), 2 inconclusive (sampling or budget exhausted
without an answer), 3 usage or input errors.

Bounded searches never claim validity over all BALFIs: an exhaustive sweep
without countermodel reports exactly that the searched class is clean.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys
from typing import Optional, Sequence

from . import balfi as bf
from . import firstorder as fo
from . import hilbert as hb
from . import modal
from . import modelfind as mf
from . import syntax as sx

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _split_formulas(text: str, sig) -> list:
    return [sx.parse(part.strip(), sig) for part in text.split(";") if part.strip()]


def _calculus_tags(calculus: hb.CalculusSpec) -> frozenset[str]:
    return frozenset(axiom_id for axiom_id, _ in calculus.axioms if axiom_id in hb.TAG_ORDER)


def _parse_tags(text: Optional[str]) -> frozenset[str]:
    if not text:
        return frozenset()
    tags = frozenset(t.strip() for t in text.split(",") if t.strip())
    unknown = tags - set(bf.AXIOM_TAG_SCHEMAS)
    if unknown:
        raise CliError(f"unknown axiom tags: {sorted(unknown)}")
    return tags


def _search_spec(args, extra_tags: frozenset[str] = frozenset()) -> mf.SearchSpec:
    mode = mf.Exhaustive()
    if getattr(args, "random", None):
        mode = mf.Random(args.random, getattr(args, "seed", 0) or 0)
    return mf.SearchSpec(
        n_atoms=args.atoms,
        require_tags=_parse_tags(getattr(args, "require", None)) | extra_tags,
        require_paraconsistent=bool(getattr(args, "paraconsistent", False)),
        require_lfi=bool(getattr(args, "lfi", False)),
        mode=mode,
    )


def _emit(args, doc: dict, text_lines: Sequence[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _witness_doc(b: bf.Balfi, v: dict) -> dict:
    return {"model": bf.balfi_to_dict(b), "valuation": bf.valuation_to_dict(b, v)}


def _ast_doc(f) -> object:
    if isinstance(f, sx.Var):
        return {"var": f.name}
    if isinstance(f, sx.Const):
        return {"const": "0" if f.tag == sx.BOT else "1"}
    if isinstance(f, sx.Unary):
        return {"op": f.op, "child": _ast_doc(f.child)}
    if isinstance(f, sx.Binary):
        return {"op": f.op, "left": _ast_doc(f.left), "right": _ast_doc(f.right)}
    return {"node": repr(f)}


# ---------------------------------------------------------------------------
# verbs

def cmd_parse(args) -> int:
    f = sx.parse(args.formula, args.sig)
    _emit(args, {"formula": sx.render(f), "ast": _ast_doc(f)}, [sx.render(f)])
    return EXIT_YES


def _load_script(path_text: str) -> tuple[str, Optional[hb.LibraryEntry]]:
    path = pathlib.Path(path_text)
    if path.exists():
        return path.read_text(), None
    try:
        entry = hb.library_entry(path.stem if path.suffix == ".prf" else path_text)
        return entry.script, entry
    except KeyError:
        raise CliError(f"no such script file or library entry: {path_text}")


def _load_fo_signature(text: Optional[str]) -> Optional[fo.FOSignature]:
    if not text:
        return None
    path = pathlib.Path(text)
    doc = json.loads(path.read_text() if path.exists() else text)
    return fo.FOSignature(
        frozenset(doc.get("constants", ())),
        dict(doc.get("functions", {})),
        dict(doc.get("predicates", {})),
    )


def cmd_check_proof(args) -> int:
    calculus = hb.get_calculus(args.calculus)
    script, entry = _load_script(args.script)
    fosig = _load_fo_signature(args.fo_sig)
    steps = hb.parse_script(script, calculus, fosig=fosig)
    mode = args.mode
    if mode is None:
        mode = entry.mode if entry is not None else "theorem"

    def parse_formula(text):
        if calculus.first_order:
            if fosig is None:
                raise CliError("first-order calculi need --fo-sig")
            return fo.parse_fo(text, fosig)
        return sx.parse(text, calculus.sig)

    premises_text = args.premises if args.premises is not None else (
        "; ".join(entry.premises_text) if entry is not None else ""
    )
    gamma = [parse_formula(t) for t in premises_text.split(";") if t.strip()]

    if mode == "theorem":
        proof = hb.Proof(calculus, (), steps)
        try:
            conclusion = hb.check_theorem(proof)
        except hb.ProofError as err:
            _emit(args, {"accepted": False, "error": str(err)}, [f"rejected: {err}"])
            return EXIT_NO
        rendered = fo.render_fo(conclusion) if calculus.first_order else sx.render(conclusion)
        _emit(args, {"accepted": True, "conclusion": rendered},
              [f"theorem: {rendered}"])
        return EXIT_YES

    if args.goal is not None:
        goal = parse_formula(args.goal)
    elif entry is not None:
        goal = entry.conclusion
    else:
        raise CliError(f"--goal is required for mode {mode}")
    if mode == "local":
        subset = [int(k) for k in args.subset.split(",") if k.strip()] if args.subset else []
        ok = hb.check_local_derivation(calculus, gamma, goal, (subset, hb.Proof(calculus, (), steps)))
    elif mode == "global":
        ok = hb.check_global_derivation(calculus, gamma, goal, hb.Proof(calculus, tuple(gamma), steps))
    else:
        raise CliError(f"unknown mode {mode!r}")
    _emit(args, {"accepted": ok, "mode": mode},
          [f"{'accepted' if ok else 'rejected'} ({mode} derivation)"])
    return EXIT_YES if ok else EXIT_NO


def cmd_validity(args) -> int:
    calculus = hb.get_calculus(args.calculus) if args.calculus else hb.RMBC
    if calculus.sig is not sx.SIGMA:
        raise CliError(f"validity search works over the LFI signature; got {calculus.name}")
    spec = _search_spec(args, extra_tags=_calculus_tags(calculus))
    formula = sx.parse(args.formula, "Sigma")
    hit = mf.find_countermodel(spec, [], formula, "local")
    exhaustive = isinstance(spec.mode, mf.Exhaustive)
    if hit is not None:
        b, v = hit
        _emit(args, {"valid": False, "witness": _witness_doc(b, v)},
              ["countermodel found:", json.dumps(_witness_doc(b, v), sort_keys=True)])
        return EXIT_NO
    if exhaustive:
        _emit(args, {"valid": None, "searched": "exhaustive", "atoms": args.atoms},
              [f"no countermodel over {args.atoms} atom(s); "
               f"validity over all BALFIs is not decided by bounded search"])
        return EXIT_YES
    _emit(args, {"valid": None, "searched": "random"},
          ["no countermodel in the sample; inconclusive"])
    return EXIT_UNKNOWN


def cmd_consequence(args) -> int:
    calculus = hb.get_calculus(args.calculus) if args.calculus else hb.RMBC
    spec = _search_spec(args, extra_tags=_calculus_tags(calculus))
    gamma = _split_formulas(args.premises or "", "Sigma")
    goal = sx.parse(args.goal, "Sigma")
    hit = mf.find_countermodel(spec, gamma, goal, args.mode)
    if hit is not None:
        b, v = hit
        _emit(args, {"holds": False, "witness": _witness_doc(b, v)},
              ["countermodel found:", json.dumps(_witness_doc(b, v), sort_keys=True)])
        return EXIT_NO
    if isinstance(spec.mode, mf.Exhaustive):
        _emit(args, {"holds": None, "searched": "exhaustive", "atoms": args.atoms},
              [f"no countermodel over {args.atoms} atom(s) ({args.mode} mode)"])
        return EXIT_YES
    _emit(args, {"holds": None, "searched": "random"},
          ["no countermodel in the sample; inconclusive"])
    return EXIT_UNKNOWN


def _partitioned_models(spec: mf.SearchSpec, jobs: int, limit: Optional[int]):
    if jobs <= 1 or not isinstance(spec.mode, mf.Exhaustive):
        count = 0
        for b in mf.enumerate_balfis(spec):
            yield b
            count += 1
            if limit is not None and count >= limit:
                return
        return
    mf.estimate_space(spec)  # surface SpaceTooLarge before forking
    import multiprocessing

    parts = mf.partition_specs(spec)
    with multiprocessing.Pool(min(jobs, len(parts))) as pool:
        count = 0
        for docs in pool.imap(_worker_enumerate, parts):
            for doc in docs:
                yield bf.balfi_from_dict(doc)
                count += 1
                if limit is not None and count >= limit:
                    pool.terminate()
                    return


def _worker_enumerate(spec: mf.SearchSpec) -> list[dict]:
    return [bf.balfi_to_dict(b) for b in mf.enumerate_balfis(spec)]


def cmd_enumerate(args) -> int:
    spec = _search_spec(args)
    if args.count_only:
        if args.jobs > 1 and isinstance(spec.mode, mf.Exhaustive):
            mf.estimate_space(spec)
            import multiprocessing
            parts = mf.partition_specs(spec)
            with multiprocessing.Pool(min(args.jobs, len(parts))) as pool:
                total = sum(pool.map(_worker_count, parts))
        else:
            total = mf.count_balfis(spec)
        _emit(args, {"count": total}, [str(total)])
        return EXIT_YES
    emitted = 0
    for b in _partitioned_models(spec, args.jobs, args.limit):
        print(json.dumps(bf.balfi_to_dict(b), sort_keys=True))
        emitted += 1
    if not getattr(args, "json", False):
        print(f"# {emitted} model(s)", file=sys.stderr)
    return EXIT_YES


def _worker_count(spec: mf.SearchSpec) -> int:
    return mf.count_balfis(spec)


def _worker_find(payload) -> Optional[dict]:
    spec, gamma, goal, mode = payload
    hit = mf.find_countermodel(spec, gamma, goal, mode)
    if hit is None:
        return None
    b, v = hit
    return _witness_doc(b, v)


def _find_witness(spec, gamma, goal, mode, jobs: int) -> Optional[dict]:
    if jobs <= 1 or not isinstance(spec.mode, mf.Exhaustive):
        hit = mf.find_countermodel(spec, gamma, goal, mode)
        return None if hit is None else _witness_doc(*hit)
    mf.estimate_space(spec)  # surface SpaceTooLarge like a sequential run
    import multiprocessing

    parts = mf.partition_specs(spec)
    payloads = [(part, gamma, goal, mode) for part in parts]
    with multiprocessing.Pool(min(jobs, len(parts))) as pool:
        # partitions follow stream order, so the first hit is the sequential one
        for doc in pool.imap(_worker_find, payloads):
            if doc is not None:
                pool.terminate()
                return doc
    return None


def cmd_find(args) -> int:
    spec = _search_spec(args)
    if args.goal is not None:
        gamma = _split_formulas(args.premises or "", "Sigma")
        goal = sx.parse(args.goal, "Sigma")
        witness = _find_witness(spec, gamma, goal, args.mode, args.jobs)
        if witness is not None:
            _emit(args, {"found": True, "witness": witness},
                  [json.dumps(witness, sort_keys=True)])
            return EXIT_YES
        if isinstance(spec.mode, mf.Exhaustive):
            _emit(args, {"found": False, "searched": "exhaustive"},
                  ["no countermodel in the searched space"])
            return EXIT_NO
        _emit(args, {"found": False, "searched": "random"},
              ["no countermodel in the sample; inconclusive"])
        return EXIT_UNKNOWN
    for b in _partitioned_models(spec, args.jobs, 1):
        _emit(args, {"found": True, "model": bf.balfi_to_dict(b)},
              [json.dumps(bf.balfi_to_dict(b), sort_keys=True)])
        return EXIT_YES
    if isinstance(spec.mode, mf.Exhaustive):
        _emit(args, {"found": False, "searched": "exhaustive"}, ["no model in the searched space"])
        return EXIT_NO
    _emit(args, {"found": False, "searched": "random"}, ["no model in the sample; inconclusive"])
    return EXIT_UNKNOWN


def cmd_translate(args) -> int:
    f = sx.parse(args.formula, "Sigma")
    translated = modal.translate(f)
    _emit(args, {"formula": sx.render(translated)}, [sx.render(translated)])
    return EXIT_YES


def cmd_frame_check(args) -> int:
    doc = json.loads(pathlib.Path(args.frame).read_text())
    frame = modal.frame_from_dict(doc)
    tags = [t.strip() for t in (args.tags or "").split(",") if t.strip()]
    results = {}
    lines = []
    for tag in tags:
        condition = modal.frame_condition(frame, tag)
        schema_valid = modal.frame_valid_schema(frame, bf.AXIOM_TAG_SCHEMAS[tag])
        results[tag] = {"condition": condition, "schema_valid": schema_valid}
        lines.append(f"{tag}: condition={condition} schema-valid={schema_valid}")
    if args.schema:
        s = sx.schema(args.schema)
        valid = modal.frame_valid_schema(frame, s)
        results["schema"] = valid
        lines.append(f"schema {args.schema!r}: valid={valid}")
    ok = all(
        (v["condition"] and v["schema_valid"]) if isinstance(v, dict) else v
        for v in results.values()
    )
    _emit(args, {"results": results, "all_hold": ok}, lines)
    return EXIT_YES if ok else EXIT_NO


def cmd_fo_eval(args) -> int:
    doc = json.loads(pathlib.Path(args.structure).read_text())
    structure = fo.structure_from_dict(doc)
    formula = fo.parse_fo(args.formula, structure.signature)
    alg = structure.balfi.alg
    if args.assign:
        mu = {}
        for piece in args.assign.split(","):
            name, _, value = piece.partition("=")
            mu[name.strip()] = int(value)
        value = fo.fo_evaluate(structure, mu, formula)
        _emit(args, {"value": alg.atoms(value), "is_top": value == alg.top},
              [f"value: {alg.atoms(value)}"])
        return EXIT_YES if value == alg.top else EXIT_NO
    valid = fo.fo_valid_in(structure, formula)
    _emit(args, {"valid": valid}, [f"valid in structure: {valid}"])
    return EXIT_YES if valid else EXIT_NO


def cmd_examples(args) -> int:
    if args.list or not args.name:
        names = list(mf.EXAMPLE_NAMES)
        _emit(args, {"examples": names}, names)
        return EXIT_YES
    b = mf.reconstruct_example(args.name)
    doc = bf.balfi_to_dict(b)
    _emit(args, {"name": args.name, "model": doc}, [json.dumps(doc, sort_keys=True)])
    return EXIT_YES


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="balfi-lab", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="structured output")
        return p

    p = add("parse", cmd_parse, help="parse a formula and print its canonical form")
    p.add_argument("--formula", required=True)
    p.add_argument("--sig", default="Sigma", choices=sorted(sx.SIGNATURES))

    p = add("check-proof", cmd_check_proof, help="check a proof script")
    p.add_argument("--calculus", required=True)
    p.add_argument("--script", required=True, help="path or shipped library name")
    p.add_argument("--mode", choices=["theorem", "local", "global"])
    p.add_argument("--premises", help="semicolon-separated premise formulas")
    p.add_argument("--goal")
    p.add_argument("--subset", help="comma-separated premise indices for local mode")
    p.add_argument("--fo-sig", help="first-order signature (JSON text or path)")

    for name, fn in (("validity", cmd_validity), ("consequence", cmd_consequence)):
        p = add(name, fn, help=f"bounded {name} check over BALFI classes")
        p.add_argument("--calculus", default="RmbC")
        p.add_argument("--atoms", type=int, default=2)
        p.add_argument("--require", help="extra axiom tags, comma-separated")
        p.add_argument("--random", type=int, help="sample this many models instead")
        p.add_argument("--seed", type=int, default=0)
        if name == "validity":
            p.add_argument("--formula", required=True)
        else:
            p.add_argument("--premises", default="")
            p.add_argument("--goal", required=True)
            p.add_argument("--mode", choices=["local", "global"], default="local")

    p = add("find", cmd_find, help="find a model or countermodel")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--require", help="axiom tags, comma-separated")
    p.add_argument("--paraconsistent", action="store_true")
    p.add_argument("--lfi", action="store_true")
    p.add_argument("--goal", help="search for a countermodel to this formula")
    p.add_argument("--premises", default="")
    p.add_argument("--mode", choices=["local", "global"], default="local")
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = add("enumerate", cmd_enumerate, help="enumerate BALFIs")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--require")
    p.add_argument("--paraconsistent", action="store_true")
    p.add_argument("--lfi", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = add("translate", cmd_translate, help="translate into the bimodal language")
    p.add_argument("--formula", required=True)

    p = add("frame-check", cmd_frame_check, help="check frame conditions")
    p.add_argument("--frame", required=True, help="frame file (JSON)")
    p.add_argument("--tags", help="comma-separated: ciw,ci,cl,cf,ce")
    p.add_argument("--schema", help="an arbitrary schema to test for frame validity")

    p = add("fo-eval", cmd_fo_eval, help="evaluate a first-order formula")
    p.add_argument("--structure", required=True, help="structure file (JSON)")
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", help="assignment like x=0,y=1")

    p = add("examples", cmd_examples, help="emit reconstructed example models")
    p.add_argument("--name", choices=list(mf.EXAMPLE_NAMES))
    p.add_argument("--list", action="store_true")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (sx.ParseError, sx.SignatureViolation, hb.ScriptError, fo.NotFreeFor,
            fo.UnknownSymbol, mf.SpaceTooLarge, mf.ReconstructionError,
            bf.BalfiError, json.JSONDecodeError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
