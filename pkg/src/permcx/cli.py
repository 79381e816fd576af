"""``permcx``: command-line front end.

Every command emits a JSON report (``--format json`` or ``--out``) and an
aligned text table (``--format text``, the default).  Exit status: 0 on
success, 1 when an ``--expect-*`` assertion or the selftest fails, 2 on
bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance, cohomology, complexes, counterexamples, gmod, groups, resolution
from .exactla import GF


class InputError(Exception):
    """Bad user input; reported with exit status 2."""


# ---------------------------------------------------------------------------
# input

def load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc


def _decode(path: str, fn, *args):
    try:
        return fn(*args)
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _looks_like_vector(x) -> bool:
    return isinstance(x, list) and all(isinstance(c, int) for c in x)


def read_subgroup(path: str, G: groups.ElemAbGroup) -> groups.Subgroup:
    """A subgroup file: ``{"p", "r", "basis"}`` or a bare list of generators."""
    obj = load_json(path)
    if isinstance(obj, dict):
        return _decode(path, groups.Subgroup.from_json, obj, G)
    if isinstance(obj, list) and all(_looks_like_vector(v) for v in obj):
        return _decode(path, groups.subgroup_from_generators, G, obj)
    raise InputError(f"{path}: expected a subgroup object or a list of generator vectors")


def read_collection(path: str, G: groups.ElemAbGroup) -> groups.SubgroupCollection:
    """A list whose entries are subgroup objects or generator lists."""
    obj = load_json(path)
    if not isinstance(obj, list):
        raise InputError(f"{path}: expected a list of subgroups")
    out = []
    for i, item in enumerate(obj):
        where = f"{path}[{i}]"
        if isinstance(item, dict):
            out.append(_decode(where, groups.Subgroup.from_json, item, G))
        elif isinstance(item, list) and all(_looks_like_vector(v) for v in item):
            out.append(_decode(where, groups.subgroup_from_generators, G, item))
        else:
            raise InputError(f"{where}: expected a subgroup object or a list of generator vectors")
    return _decode(path, groups.SubgroupCollection, out)


def read_complex(path: str) -> complexes.BoundedComplex:
    """A complex file, or any report carrying one under ``"complex"``."""
    obj = load_json(path)
    if isinstance(obj, dict) and "complex" in obj and "modules" not in obj:
        obj = obj["complex"]
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a complex object")
    return _decode(path, complexes.BoundedComplex.from_json, obj)


def read_module(spec: str, G: groups.ElemAbGroup, field) -> gmod.GModule:
    if spec == "trivial":
        return gmod.make_trivial(G, field, 1)
    if spec == "free":
        return gmod.make_free(G, field, 1)
    obj = load_json(spec)
    if isinstance(obj, dict) and "basis" in obj:
        E = _decode(spec, groups.Subgroup.from_json, obj, G)
        return gmod.make_permutation(E, field)
    if not isinstance(obj, dict):
        raise InputError(f"{spec}: expected a module object, a subgroup object, 'trivial' or 'free'")
    M = _decode(spec, gmod.GModule.from_json, obj)
    if M.group != G:
        raise InputError(f"{spec}: module over {M.group!r}, but --group is {G!r}")
    return M


def _group(args) -> groups.ElemAbGroup:
    if args.group is None:
        raise InputError("--group p=<prime>,r=<rank> is required")
    try:
        return groups.parse_group(args.group)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _field(args, G: groups.ElemAbGroup):
    e = args.field_ext or 1
    if e < 1:
        raise InputError("--field-ext must be at least 1")
    return GF(G.p, e)


# ---------------------------------------------------------------------------
# output

def table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _basis_str(E) -> str:
    return "<" + ", ".join("".join(map(str, b)) for b in E.basis) + ">" if E.basis else "1"


def emit(args, report, text: str) -> None:
    if args.out:
        Path(args.out).write_text(dumps(report) + "\n")
    print(dumps(report) if args.format == "json" else text)


# ---------------------------------------------------------------------------
# commands

def cmd_check_condition(args) -> int:
    G = _group(args)
    H = read_collection(_required(args, "subgroups"), G)
    chain = groups.check_chain_condition(H)
    report = {"group": G.to_json(), "subgroups": H.to_json(), "ok": chain.ok,
              "violations": [[E.to_json(), F.to_json()] for E, F in chain.violations]}
    text = f"chain condition on {len(H)} subgroups of {G!r}: {'OK' if chain.ok else 'VIOLATED'}"
    if chain.violations:
        text += "\n" + table(["E", "F", "[F:E]"], [(_basis_str(E), _basis_str(F), G.p) for E, F in chain.violations])
    emit(args, report, text)
    return 0


def _complex_from_args(args) -> complexes.BoundedComplex:
    path = _required(args, "complex")
    if path != "random":
        return read_complex(path)
    G = _group(args)
    H = read_collection(_required(args, "subgroups"), G)
    return complexes.random_addS_complex(H, args.length, None, seed=args.seed, field=_field(args, G))


def cmd_verify_complex(args) -> int:
    C = _complex_from_args(args)
    problems = complexes.validate(C)
    if problems:
        raise InputError("invalid complex: " + "; ".join(str(v) for v in problems))
    ex = complexes.is_exact(C)
    con = complexes.is_contractible(C)
    report = {"dims": C.dims, "exact": ex.exact, "homology_dims": ex.homology_dims,
              "contractible": con.contractible,
              "certificate": con.certificate.to_json() if con.certificate is not None else None}
    rows = [("dims", C.dims), ("exact", ex.exact), ("homology dims", ex.homology_dims),
            ("contractible", con.contractible)]
    if args.subgroups:
        H = read_collection(args.subgroups, C.group)
        th = complexes.check_theorem31(H, C)
        report["theorem"] = th.to_json()
        rows += [("membership", report["theorem"]["membership"]), ("verdict", th.verdict), ("reason", th.reason)]
    if args.complex == "random":
        report["complex"] = C.to_json()
    status = 0
    if args.expect_contractible and not con.contractible:
        rows.append(("expectation", "FAILED: not contractible"))
        status = 1
    if args.expect_exact and not ex.exact:
        rows.append(("expectation", "FAILED: not exact"))
        status = 1
    emit(args, report, table(["property", "value"], rows))
    return status


def _counterexample_rows(reports):
    return [(_basis_str(r.violating_pair[0]), _basis_str(r.violating_pair[1]), r.complex.dims,
             r.exact, r.contractible, r.member, r.certified) for r in reports]


_CX_HEADERS = ["E", "F", "dims", "exact", "contractible", "membership", "certified"]


def cmd_counterexample(args) -> int:
    G = _group(args)
    if not args.pair:
        raise InputError("--pair E.json F.json is required")
    E, F = (read_subgroup(p, G) for p in args.pair)
    try:
        rep = counterexamples.chain_pair_counterexample(G, E, F, _field(args, G))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    emit(args, rep.to_json(), table(_CX_HEADERS, _counterexample_rows([rep])))
    return 0


def cmd_necessity(args) -> int:
    G = _group(args)
    H = read_collection(_required(args, "subgroups"), G)
    reports = counterexamples.necessity_report(H, _field(args, G))
    out = {"group": G.to_json(), "subgroups": H.to_json(), "counterexamples": [r.to_json() for r in reports]}
    text = f"{len(reports)} violating pairs" + ("\n" + table(_CX_HEADERS, _counterexample_rows(reports)) if reports else "")
    emit(args, out, text)
    return 0


def cmd_regular_pair(args) -> int:
    G = _group(args)
    Hp = read_collection(_required(args, "hprime"), G)
    Hd = read_collection(_required(args, "hdoubleprime"), G) if args.hdoubleprime != "none" else []
    try:
        pair = cohomology.find_avoidance_pair(list(Hp), list(Hd), _field(args, G), args.max_degree or 8)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    check = cohomology.verify_avoidance_pair(pair.u, pair.v, list(Hp), list(Hd))
    report = {**pair.to_json(), "verified": check.ok, "witness": check.witness}
    rows = [("u", repr(pair.u)), ("v", repr(pair.v)), ("field", repr(pair.field_used)), ("verified", check.ok)]
    emit(args, report, table(["", "value"], rows))
    return 0 if check.ok else 1


def cmd_cohomology(args) -> int:
    G = _group(args)
    field = _field(args, G)
    M = read_module(_required(args, "module"), G, field)
    J = 6 if args.max_degree is None else args.max_degree
    if J < 0:
        raise InputError("--max-degree must be nonnegative")
    dims = resolution.cohomology_dims(M, J)
    report = {"group": G.to_json(), "field": field.to_json(), "module_dim": M.dim, "max_degree": J, "dims": dims}
    emit(args, report, table(["j", "dim H^j"], list(enumerate(dims))))
    return 0


def cmd_e1_table(args) -> int:
    C = read_complex(_required(args, "complex"))
    J = 4 if args.max_degree is None else args.max_degree
    try:
        tab = resolution.e1_dimension_table(C, J)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sums = [sum((-1) ** i * x for i, x in enumerate(row)) for row in tab]
    report = {"dims": C.dims, "max_degree": J, "table": tab, "alternating_sums": sums}
    rows = [[j, *row, s] for j, (row, s) in enumerate(zip(tab, sums))]
    emit(args, report, table(["j"] + [f"C^{i}" for i in range(len(C.terms))] + ["alt. sum"], rows))
    return 0


def cmd_selftest(args) -> int:
    results = acceptance.run_all(args.filter, args.out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (": failed " + ", ".join(f"{r.number}. {r.name}" for r in failed) if failed else ""))
    return 1 if failed or not results else 0


def _required(args, name: str) -> str:
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required")
    return value


COMMANDS = {
    "check-condition": (cmd_check_condition, "check the index-p chain condition on a collection"),
    "verify-complex": (cmd_verify_complex, "decide exactness and contractibility of a complex"),
    "counterexample": (cmd_counterexample, "build a certified counterexample for E < F of index p"),
    "necessity": (cmd_necessity, "counterexamples for every violating pair of a collection"),
    "regular-pair": (cmd_regular_pair, "find and verify a prime-avoidance pair (u, v)"),
    "cohomology": (cmd_cohomology, "dimensions of H^j(G, M)"),
    "e1-table": (cmd_e1_table, "dim H^j(G, C^i) for every term of a complex"),
    "selftest": (cmd_selftest, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="p=<prime>,r=<rank>")
    common.add_argument("--field-ext", type=int, default=None, metavar="E", help="work over GF(p^E)")
    common.add_argument("--subgroups", metavar="PATH")
    common.add_argument("--out", metavar="PATH", help="write the JSON report (selftest: a directory)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-degree", type=int, default=None, metavar="J")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="permcx", description="Complexes of permutation modules over elementary abelian p-groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    ps = {name: sub.add_parser(name, parents=[common], help=help_) for name, (_, help_) in COMMANDS.items()}
    ps["verify-complex"].add_argument("--complex", metavar="PATH", help="complex JSON, or 'random' with --subgroups")
    ps["verify-complex"].add_argument("--length", type=int, default=2, help="length of a random complex")
    ps["verify-complex"].add_argument("--expect-contractible", action="store_true")
    ps["verify-complex"].add_argument("--expect-exact", action="store_true")
    ps["e1-table"].add_argument("--complex", metavar="PATH")
    ps["counterexample"].add_argument("--pair", nargs=2, metavar=("E", "F"))
    ps["regular-pair"].add_argument("--hprime", metavar="PATH")
    ps["regular-pair"].add_argument("--hdoubleprime", metavar="PATH", help="collection path or 'none'")
    ps["cohomology"].add_argument("--module", metavar="SPEC", help="'trivial', 'free', a module JSON or a subgroup JSON")
    ps["selftest"].add_argument("--filter", metavar="TAG", help="only criteria with this topic tag")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command][0](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
