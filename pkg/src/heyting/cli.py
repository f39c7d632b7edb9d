"""Batch command-line front end.

Exit codes: 0 success, 1 a logical "no" (invalid, inequivalent, not
join-irreducible), 2 errors or budget exhaustion, 64 bad usage.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .budget import Budget, BudgetExceeded, default_budget
from .formula import Formula, Kind, ParseError, AtomOutOfRange, max_atom, parse, rn_ladder
from .formula import top
from .prover import decompose, entails, is_join_irreducible
from .semantics import brute_countermodel

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def schema() -> dict:
    return json.loads(resources.files("heyting").joinpath("schemas/report.schema.json").read_text())


# -- helpers ------------------------------------------------------------------

def _budget(args) -> Budget:
    base = default_budget()
    kw = {}
    for name in ("type_count", "node_count", "level_depth", "search_steps", "width"):
        v = getattr(args, f"budget_{name}", None)
        if v is not None:
            kw[name] = v
    return base.with_(**kw)


def _formulas(args, texts) -> tuple[list[Formula], int]:
    fs = [parse(t, args.vars) for t in texts]
    n = args.vars or max([1] + [max_atom(f) for f in fs])
    if not 1 <= n <= 16:
        raise UsageError("-n must lie in 1..16")
    return fs, n


def _fragment(n: int, levels: int, budget: Budget):
    from .universal import complete_fragment
    return complete_fragment(n, levels, budget)


# -- verbs --------------------------------------------------------------------

def cmd_prove(args, budget):
    (phi,), n = _formulas(args, [args.formula])
    if phi.kind is Kind.IMP:
        e = entails(phi.left, phi.right, n, budget)
    else:
        e = entails(top(), phi, n, budget)
    rep = {"formula": str(phi), "verdict": "valid" if e.valid else "invalid", "method": e.method}
    if not e.valid:
        rep["countermodel"] = e.countermodel.to_json()
    return rep, e.valid, rep["verdict"]


def cmd_equiv(args, budget):
    (a, b), n = _formulas(args, [args.left, args.right])
    ab, ba = entails(a, b, n, budget), entails(b, a, n, budget)
    rep = {"left": str(a), "right": str(b), "left_entails_right": ab.valid,
           "right_entails_left": ba.valid,
           "verdict": "equivalent" if ab.valid and ba.valid else "inequivalent"}
    for key, e in (("countermodel_left_right", ab), ("countermodel_right_left", ba)):
        if not e.valid:
            rep[key] = e.countermodel.to_json()
    return rep, ab.valid and ba.valid, rep["verdict"]


def cmd_decompose(args, budget):
    (phi,), n = _formulas(args, [args.formula])
    comps = decompose(phi, n, budget, verify=not args.no_verify)
    rep = {"formula": str(phi), "components": [str(c) for c in comps],
           "verdict": f"{len(comps)} component(s)"}
    return rep, True, "\n".join(rep["components"]) or "F (no components)"


def cmd_mintype(args, budget):
    (phi,), n = _formulas(args, [args.formula])
    ji = is_join_irreducible(phi, n, budget)
    rep = {"formula": str(phi), "join_irreducible": ji.irreducible, "c_size": ji.c_size,
           "minimal_types": [[str(g) for g in t.members()] for t in ji.minimal_types]}
    if ji.irreducible:
        rep["mintype"] = [str(g) for g in ji.mintype.members()]
        rep["verdict"] = "join-irreducible"
        text = "{" + ", ".join(rep["mintype"]) + "}"
    else:
        rep["verdict"] = "not join-irreducible"
        text = rep["verdict"]
    return rep, ji.irreducible, text


def cmd_classify(args, budget):
    from .structure import classify
    (phi,), n = _formulas(args, [args.formula])
    label = classify(phi, n, budget=budget)
    rep = {"formula": str(phi), "verdict": label.kind}
    rep.update(label.to_json())
    if label.ken is not None:
        rep["counts"] = {str(m): c for m, c in label.ken.counts.items()}
        if args.format == "dot" and label.witness is not None:
            ids = list(label.witness.ids) if hasattr(label.witness, "ids") else \
                list(label.witness) if isinstance(label.witness, tuple) else label.ken.forcers()
            up = set()
            for a in ids:
                up |= label.ken.frag.upset(a)
            rep["dot"] = label.ken.frag.to_dot(up)
    return rep, True, label.kind


def cmd_kenum(args, budget):
    from .structure import areminimal_violations, enumerate_k
    (phi,), n = _formulas(args, [args.formula])
    ken = enumerate_k(phi, n, level_budget=args.levels, budget=budget)
    rep = {"formula": str(phi), "verdict": ken.status}
    rep.update(ken.to_json())
    rep["areminimal_violations"] = areminimal_violations(ken.counts)
    rep["fragment"] = ken.frag.to_json()
    if args.format == "dot":
        rep["dot"] = ken.frag.to_dot(ken.forcers())
    text = f"{ken.status} " + " ".join(f"L{m}:{c}" for m, c in ken.counts.items())
    return rep, True, text


def cmd_model(args, budget):
    from .universal import leaves
    n = args.vars or 1
    if args.what == "leaves":
        frag = leaves(n)
    elif args.what == "level":
        frag = _fragment(n, max(1, args.level - 1), budget)
        if args.level >= 2 and args.count_only:
            total = frag.count_level(args.level, budget)
            return {"verdict": str(total), "level": args.level, "count": total}, True, str(total)
        if args.level >= 2:
            frag.enumerate_level(args.level, budget)
    else:
        frag = _fragment(n, args.levels, budget)
    counts = {str(m): len(v) for m, v in sorted(frag.by_level.items())}
    rep = {"verdict": "fragment", "counts": counts, "fragment": frag.to_json()}
    if args.format == "dot":
        rep["dot"] = frag.to_dot()
    return rep, True, " ".join(f"L{m}:{c}" for m, c in counts.items())


def cmd_dejongh(args, budget):
    from .dejongh import node_formulas, verify_node_formulas
    n = args.vars or 1
    frag = _fragment(n, args.levels, budget)
    ids = [args.node] if args.node is not None else list(range(len(frag)))
    rows = []
    for a in ids:
        if not 0 <= a < len(frag):
            raise UsageError(f"node {a} is not stored at levels 1..{args.levels}")
        pair = node_formulas(frag, a)
        row = {"node": a, "pos": str(pair.pos), "neg": str(pair.neg)}
        if args.verify:
            row["report"] = verify_node_formulas(frag, pair, budget=budget).to_json()
        rows.append(row)
    rep = {"verdict": "ok", "nodes": rows, "fragment": frag.to_json()}
    text = "\n".join(f"{r['node']}: pos = {r['pos']}\n{r['node']}: neg = {r['neg']}" for r in rows)
    return rep, True, text


def _triplet_arg(frag, spec: str | None):
    from .structure import Triplet, reference_triplet
    if spec is None:
        return reference_triplet(frag)
    parts = [int(x) for x in spec.split(",")]
    if len(parts) != 3:
        raise UsageError("--triplet expects three comma-separated node ids")
    return Triplet(*parts)


def cmd_triplets(args, budget):
    from .structure import enumerate_k, find_triplets
    n = args.vars or 1
    if args.formula:
        (phi,), n = _formulas(args, [args.formula])
        ken = enumerate_k(phi, n, level_budget=args.levels, budget=budget)
        found = find_triplets(ken, require_mintype=args.mintype)
        frag = ken.frag
    else:
        levels = args.levels or (6 if n == 1 else 2)
        frag = _fragment(n, levels, budget)
        row = frag.by_level[levels]
        for i, b in enumerate(row):  # gamma candidates node({beta, delta}) above the top level
            for d in row[i + 1:]:
                frag.mk_node([b, d])
        found = find_triplets(frag)
    shown = found[:args.limit]
    rep = {"verdict": str(len(found)), "count": len(found),
           "triplets": [list(t.ids) for t in shown],
           "levels": [frag.level_of(t.alpha) for t in shown]}
    if args.format == "dot" and shown:
        up = set()
        for t in shown:
            up |= frag.upset(t.alpha) | frag.upset(t.gamma)
        rep["dot"] = frag.to_dot(up)
    text = "\n".join(f"{t.ids}" for t in shown) or "none"
    return rep, True, text


def cmd_j2build(args, budget):
    from .structure import build_aset, enumerate_k, areminimal_violations
    from .structure.j2 import j2_parts
    n = args.vars or 2
    frag = _fragment(n, 2, budget)
    t = _triplet_arg(frag, args.triplet)
    parts = j2_parts(frag, t)
    from .formula import big_and
    phi = big_and(list(parts["psi"]))
    L = frag.level_of(t.alpha)
    ken = enumerate_k(phi, frag=frag, level_budget=L + args.extra, budget=budget)
    A = build_aset(frag, t, L + args.extra)
    through = max(ken.levels)
    matches = set(ken.forcers()) == {a for a in A.members() if frag.level_of(a) <= through}
    rep = {"formula": str(phi), "triplet": list(t.ids), "max_outside": parts["max_outside"],
           "counts": {str(m): c for m, c in ken.counts.items()},
           "aset_counts": {str(m): c for m, c in A.counts().items()},
           "k_matches_aset": matches, "areminimal_violations": areminimal_violations(ken.counts),
           "verdict": "ok" if matches else "mismatch"}
    if args.format == "dot":
        rep["dot"] = frag.to_dot(ken.forcers())
    return rep, matches, str(phi)


SCENARIOS = {
    # name: (elements, strict pairs, images by element, new element)
    "bottom": (["bot", "q", "a"], [("bot", "q"), ("q", "a")], {"bot": "F", "a": "T"}, "q"),
    "side": (["bot", "a", "q"], [("bot", "a"), ("bot", "q")], {"bot": "F", "a": "x1 -> x2"}, "q"),
    "augmented": (["bot", "l", "q", "u"], [("bot", "l"), ("l", "q"), ("q", "u")],
                  {"bot": "F", "l": "x1 -> x2", "u": "T"}, "q"),
    "direct": (["bot", "l1", "l2", "q", "u"],
               [("bot", "l1"), ("bot", "l2"), ("l1", "q"), ("l2", "q"), ("q", "u")],
               {"bot": "F", "l1": "x1 -> x2", "l2": "x2 -> x1", "u": "T"}, "q"),
}


def cmd_extend(args, budget):
    from .structure import Bqsl
    from .structure.fraisse import fraisse_extend_details
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        els, less, imgs, q = cfg["elements"], [tuple(p) for p in cfg["less"]], cfg["images"], cfg["new"]
    else:
        els, less, imgs, q = SCENARIOS[args.scenario]
    n = args.vars or 2
    Q2 = Bqsl.from_relations(els, less)
    embedded = [(e, parse(imgs[e], n)) for e in els if e != q]
    res = fraisse_extend_details(embedded, Q2, q, n, budget=budget)
    rep = {"verdict": res.case, "poset": Q2.to_json()}
    rep.update(res.to_json())
    return rep, True, str(res.formula)


def cmd_rn(args, budget):
    ladder = rn_ladder(args.depth)
    rep = {"verdict": "ok", "ladder": [[name, str(f)] for name, f in ladder]}
    lines = [f"{name:>6}  {f}" for name, f in ladder]
    if args.table:
        mat = [[1 if entails(f, g, 1, budget) else 0 for _, g in ladder] for _, f in ladder]
        rep["order"] = mat
        names = [name for name, _ in ladder]
        lines.append("")
        lines.append("        " + " ".join(f"{x:>6}" for x in names))
        for name, row in zip(names, mat):
            lines.append(f"{name:>6}  " + " ".join(f"{v:>6}" for v in row))
    return rep, True, "\n".join(lines)


def cmd_oracle(args, budget):
    (a, b), n = _formulas(args, [args.left, args.right])
    cm = brute_countermodel(a, b, args.max_nodes, n)
    e = entails(a, b, n, budget)
    agree = (cm is None) == e.valid or (cm is not None and not e.valid)
    rep = {"left": str(a), "right": str(b), "brute": "countermodel" if cm else "not-found",
           "prover": "valid" if e.valid else "invalid", "sound": not (e.valid and cm is not None),
           "verdict": "agree" if agree else "disagree"}
    if cm is not None:
        rep["countermodel"] = cm.to_json()
    return rep, rep["sound"], f"brute: {rep['brute']}, prover: {rep['prover']}"


VERBS = {"prove": cmd_prove, "equiv": cmd_equiv, "decompose": cmd_decompose,
         "mintype": cmd_mintype, "classify": cmd_classify, "kenum": cmd_kenum,
         "model": cmd_model, "dejongh": cmd_dejongh, "triplets": cmd_triplets,
         "j2build": cmd_j2build, "extend": cmd_extend, "rn": cmd_rn, "oracle": cmd_oracle}
JSON_FIRST = {"classify", "kenum", "triplets", "j2build", "extend"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-n", "--vars", type=int, default=None, help="number of atoms (1..16)")
    common.add_argument("--format", choices=["text", "json", "dot"], default=None)
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="recorded in reports for reproducibility")
    for name in ("type-count", "node-count", "level-depth", "search-steps", "width"):
        common.add_argument(f"--budget-{name}", type=int, default=None,
                            dest=f"budget_{name.replace('-', '_')}")
    p = _Parser(prog="heyting", description="Intuitionistic logic toolkit")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("prove", parents=[common], help="decide validity (A -> B checks A |- B)")
    s.add_argument("formula")
    s = sub.add_parser("equiv", parents=[common], help="decide equivalence")
    s.add_argument("left"), s.add_argument("right")
    s = sub.add_parser("decompose", parents=[common], help="join-irreducible components")
    s.add_argument("formula"), s.add_argument("--no-verify", action="store_true")
    s = sub.add_parser("mintype", parents=[common], help="minimum realized type, if any")
    s.add_argument("formula")
    s = sub.add_parser("classify", parents=[common], help="Bottom/Reducible/J1/J2/J3/Unknown")
    s.add_argument("formula")
    s = sub.add_parser("kenum", parents=[common], help="forcers of a formula level by level")
    s.add_argument("formula"), s.add_argument("--levels", type=int, default=None)
    s = sub.add_parser("model", parents=[common], help="universal-model fragments")
    s.add_argument("what", choices=["leaves", "level", "export"])
    s.add_argument("--level", type=int, default=2)
    s.add_argument("--levels", type=int, default=2)
    s.add_argument("--count-only", action="store_true")
    s = sub.add_parser("dejongh", parents=[common], help="de Jongh formulas of stored nodes")
    s.add_argument("--levels", type=int, default=2), s.add_argument("--node", type=int)
    s.add_argument("--verify", action="store_true")
    s = sub.add_parser("triplets", parents=[common], help="well-positioned triplets")
    s.add_argument("--formula"), s.add_argument("--levels", type=int, default=None)
    s.add_argument("--mintype", action="store_true"), s.add_argument("--limit", type=int, default=20)
    s = sub.add_parser("j2build", parents=[common], help="J2 witness formula for a triplet")
    s.add_argument("--triplet", help="alpha,beta,gamma node ids (default: reference triplet)")
    s.add_argument("--extra", type=int, default=6, help="levels past alpha to check")
    s = sub.add_parser("extend", parents=[common], help="one-point bqsl extension in J3")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--scenario", choices=sorted(SCENARIOS), default="bottom")
    g.add_argument("--config", metavar="JSON")
    s = sub.add_parser("rn", parents=[common], help="the one-variable ladder")
    s.add_argument("--depth", type=int, default=3), s.add_argument("--table", action="store_true")
    s = sub.add_parser("oracle", parents=[common], help="cross-check against brute force")
    s.add_argument("left"), s.add_argument("right"), s.add_argument("--max-nodes", type=int, default=4)
    return p


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if args.vars is not None and not 1 <= args.vars <= 16:
            raise UsageError("-n must lie in 1..16")
        budget = _budget(args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
    fmt = args.format or ("json" if args.verb in JSON_FIRST else "text")
    base = {"verb": args.verb, "seed": args.seed,
            "budget": {k: getattr(budget, k) for k in
                       ("type_count", "node_count", "level_depth", "search_steps", "width")},
            "profile": os.environ.get("HEYTING_BUDGET_PROFILE", "desk")}
    try:
        rep, yes, text = VERBS[args.verb](args, budget)
        n = args.vars or _infer_n(rep)
        rep = {**base, **rep, "n": n, "status": "ok" if yes else "no"}
        code = EXIT_OK if yes else EXIT_NO
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (ParseError, AtomOutOfRange, BudgetExceeded, ValueError, RuntimeError,
            AssertionError, KeyError, LookupError) as e:
        rep = {**base, "n": args.vars or 1, "status": "error", "error": f"{type(e).__name__}: {e}"}
        text = f"error: {type(e).__name__}: {e}"
        code = EXIT_ERROR
    if fmt == "json":
        rep.pop("dot", None)
        _emit(json.dumps(rep, sort_keys=True, indent=2), args.out)
    elif fmt == "dot" and "dot" in rep:
        _emit(rep["dot"], args.out)
    else:
        _emit(text if code != EXIT_ERROR else rep["error"], args.out)
    return code


def _infer_n(rep: dict) -> int:
    for key in ("fragment", "countermodel"):
        if key in rep:
            return rep[key]["n"]
    texts = [rep.get(k) for k in ("formula", "left", "right")]
    return max([1] + [max_atom(parse(t)) for t in texts if t])


if __name__ == "__main__":
    sys.exit(main())
