"""Command line front end.

Exit codes: 0 for a positive answer, 1 for a negative one, 2 for errors and
inconclusive results.  ``--json`` prints a single object with the keys
``command``, ``answer``, ``stats`` and, where relevant, ``witness`` or ``goals``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .automata import DEFAULT_STATE_BUDGET, dfa_to_regex
from .distance import DEFAULT_CLOSURE_BUDGET, build_distance_automaton, limitedness
from .errors import RsrlError
from .membership import (
    MembershipConfig,
    equivalence_star_free,
    inclusion_star_free,
    membership,
    membership_star_free,
    oracle_membership,
)
from .ops import OPERATORS, goals
from .regex import parse_regex, to_text
from .rewriting import maximal_rewriting
from .specfile import parse_query, parse_spec, write_spec
from .unionfree import DEFAULT_UNIONFREE_BUDGET, union_free_decomp

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _budget_flags(p: argparse.ArgumentParser):
    env = os.environ.get("RSRL_STATE_BUDGET")
    p.add_argument("--state-budget", type=int, default=int(env) if env else DEFAULT_STATE_BUDGET)
    p.add_argument("--unionfree-budget", type=int, default=DEFAULT_UNIONFREE_BUDGET)
    p.add_argument("--closure-budget", type=int, default=DEFAULT_CLOSURE_BUDGET)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsrl", description="Rational sets of regular languages.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        _budget_flags(p)
        return p

    p = command("member", "is the query language a member")
    p.add_argument("--spec", required=True)
    p.add_argument("--query", help="query regex (default: R from the spec file)")
    p.add_argument("--algorithm", choices=("general", "starfree", "oracle"), default="general")
    p.add_argument("--max-len", type=int, default=8, help="word length bound for --algorithm oracle")

    for name, help in (("include", "star-free inclusion of left in right"), ("equiv", "star-free equivalence")):
        p = command(name, help)
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)

    p = command("goals", "list the member languages of a star-free spec")
    p.add_argument("--spec", required=True)

    p = command("op", "apply an operator and write the result as a spec file")
    p.add_argument("--kind", required=True, choices=sorted(OPERATORS))
    p.add_argument("--left", required=True)
    p.add_argument("--right")
    p.add_argument("--query", help="regex operand of the point-wise operators")
    p.add_argument("--out")

    p = command("rewrite", "maximal rewriting of the query")
    p.add_argument("--spec", required=True)
    p.add_argument("--query")

    p = command("decompose", "union-free decomposition, one expression per line")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec", help="decompose the generator of this spec")
    g.add_argument("--regex", help="decompose this regex")

    p = command("limited", "limitedness of the distance automaton of a chain")
    p.add_argument("--spec", required=True)
    p.add_argument("--chain", help="chain over the meta alphabet (default: K)")
    return parser


def _query(args, r, spec_query):
    if args.query:
        return parse_query(args.query, r.phi)
    if spec_query is None:
        raise RsrlError("no query: pass --query or add an 'R:' line to the spec")
    return spec_query


def _config(args) -> MembershipConfig:
    return MembershipConfig(
        state_budget=args.state_budget,
        unionfree_budget=args.unionfree_budget,
        closure_budget=args.closure_budget,
        oracle_max_len=getattr(args, "max_len", 8),
    )


def _word(w):
    return None if w is None else " ".join(w)


def run_member(args):
    r, spec_query = parse_spec(args.spec)
    rq = _query(args, r, spec_query)
    if args.algorithm == "general":
        out = membership(rq, r, _config(args))
    elif args.algorithm == "starfree":
        out = membership_star_free(rq, r)
    else:
        out = oracle_membership(rq, r, args.max_len)
        if out is None:
            return {"answer": None, "stats": {"max_len": args.max_len}}, "inconclusive", EXIT_ERROR
    result = {"answer": out.answer, "witness": _word(out.witness), "stats": out.stats}
    text = "member" if out.answer else "not a member"
    if out.witness is not None:
        text += f" (witness: {_word(out.witness)})"
    return result, text, EXIT_YES if out.answer else EXIT_NO


def run_compare(args):
    left, _ = parse_spec(args.left)
    right, _ = parse_spec(args.right)
    fn = inclusion_star_free if args.command == "include" else equivalence_star_free
    answer = fn(left, right)
    return {"answer": answer, "stats": {}}, "yes" if answer else "no", EXIT_YES if answer else EXIT_NO


def run_goals(args):
    r, _ = parse_spec(args.spec)
    regexes = [to_text(x) for x in goals(r, args.state_budget).regexes()]
    return {"answer": True, "goals": regexes, "stats": {"count": len(regexes)}}, "\n".join(regexes), EXIT_YES


def run_op(args):
    fn, arity = OPERATORS[args.kind]
    left, _ = parse_spec(args.left)
    if arity == "binary":
        if not args.right:
            raise RsrlError(f"operator {args.kind} needs --right")
        right, _ = parse_spec(args.right)
        result = fn(left, right)
    elif arity == "query":
        if not args.query:
            raise RsrlError(f"operator {args.kind} needs --query")
        result = fn(left, parse_query(args.query, left.phi))
    else:
        result = fn(left)
    if args.out:
        write_spec(args.out, result)
    stats = {"meta_symbols": len(result.delta), "generator": to_text(result.k)}
    text = f"wrote {args.out}" if args.out else str(result)
    return {"answer": True, "stats": stats}, text, EXIT_YES


def run_rewrite(args):
    r, spec_query = parse_spec(args.spec)
    rq = _query(args, r, spec_query)
    d = maximal_rewriting(rq, r.phi, args.state_budget)
    regex = to_text(dfa_to_regex(d))
    stats = {"states": d.n_states, "finals": len(d.finals), "regex": regex}
    return {"answer": bool(d.finals), "stats": stats}, regex, EXIT_YES


def run_decompose(args):
    if args.spec:
        r, _ = parse_spec(args.spec)
        source = r.k
    else:
        source = parse_regex(args.regex)
    terms = [to_text(t) for t in union_free_decomp(source, args.unionfree_budget)]
    return {"answer": True, "stats": {"terms": terms, "count": len(terms)}}, "\n".join(terms), EXIT_YES


def run_limited(args):
    r, _ = parse_spec(args.spec)
    chain = parse_regex(args.chain, r.delta) if args.chain else r.k
    rep = limitedness(build_distance_automaton(chain, r.phi), args.closure_budget)
    result = {
        "answer": rep.limited,
        "limited": rep.limited,
        "states": rep.states,
        "closure_size": rep.closure_size,
        "stats": {"states": rep.states, "closure_size": rep.closure_size},
    }
    return result, "limited" if rep.limited else "unlimited", EXIT_YES if rep.limited else EXIT_NO


HANDLERS = {
    "member": run_member,
    "include": run_compare,
    "equiv": run_compare,
    "goals": run_goals,
    "op": run_op,
    "rewrite": run_rewrite,
    "decompose": run_decompose,
    "limited": run_limited,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    try:
        result, text, code = HANDLERS[args.command](args)
    except Exception as e:  # every failure maps to exit code 2
        if getattr(args, "json", False):
            print(json.dumps({"command": args.command, "answer": None, "error": str(e), "stats": {}}), file=stdout)
        print(f"rsrl {args.command}: error: {e}", file=stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps({"command": args.command, **result}), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
