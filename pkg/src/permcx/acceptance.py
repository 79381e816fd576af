"""Executable acceptance criteria, shared by the test suite and ``selftest``.

Each criterion returns a :class:`CriterionResult` whose ``report`` is a
JSON-serialisable dict free of timings, so reruns are byte-comparable.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from itertools import product
from math import comb
from typing import Callable

import numpy as np

from . import cohomology, complexes, counterexamples, gmod, groups, resolution
from .exactla import GF, Matrix


@dataclass
class CriterionResult:
    number: int
    name: str
    tags: tuple[str, ...]
    passed: bool
    detail: str
    report: dict = dc_field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2}. {self.name:<38} {self.seconds:7.2f}s  {self.detail}"


def _pair(E, F):
    return [E.to_json()["basis"], F.to_json()["basis"]]


# ---------------------------------------------------------------------------

def periodicity_certification() -> tuple[bool, str, dict]:
    rows = []
    for p in (2, 3, 5):
        t0 = time.perf_counter()
        C = counterexamples.periodicity_complex(p)
        valid = not complexes.validate(C)
        exact = complexes.is_exact(C).exact
        contractible = complexes.is_contractible(C).contractible
        fast = time.perf_counter() - t0 < 1.0
        rows.append({"p": p, "dims": C.dims, "valid": valid, "exact": exact,
                     "contractible": contractible, "under_1s": fast})
    ok = all(r["valid"] and r["exact"] and not r["contractible"] and r["under_1s"] for r in rows)
    return ok, "p=2,3,5: exact, not contractible", {"complexes": rows}


def necessity_sweep() -> tuple[bool, str, dict]:
    t0 = time.perf_counter()
    rows = []
    for p, r in ((2, 3), (3, 2)):
        G = groups.ElemAbGroup(p, r)
        subs = groups.all_subgroups(G)
        for E, F in groups.check_chain_condition(subs).violations:
            rep = counterexamples.chain_pair_counterexample(G, E, F)
            tagged = {t.summand_subgroup(G) for M in rep.complex.terms for t in M.tags}
            rows.append({"group": [p, r], "pair": _pair(E, F), "dims": rep.complex.dims,
                         "exact": rep.exact, "contractible": rep.contractible,
                         "membership": bool(rep.member) and tagged == {E, F},
                         "certified": rep.certified})
    fast = time.perf_counter() - t0 < 60
    ok = fast and all(r["certified"] and r["membership"] for r in rows)
    n23 = sum(1 for r in rows if r["group"] == [2, 3])
    return ok, f"{len(rows)} pairs certified ({n23} in C_2^3, {len(rows) - n23} in C_3^2)", \
        {"pairs": rows, "under_60s": fast}


def consistency_instances(count: int = 200):
    """The seeded complexes shared by criteria 3 and 9."""
    for p in (2, 3):
        G = groups.ElemAbGroup(p, 2)
        H = groups.SubgroupCollection([G.trivial_subgroup(), G.whole()])
        for seed in range(count):
            rng = np.random.default_rng([p, seed])
            length = int(rng.integers(1, 4))
            yield p, seed, H, complexes.random_addS_complex(H, length, None, seed=seed)


def theorem_consistency(count: int = 200) -> tuple[bool, str, dict]:
    rows = []
    for p, seed, H, C in consistency_instances(count):
        rep = complexes.check_theorem31(H, C)
        rows.append({"p": p, "seed": seed, "dims": C.dims, "exact": rep.exact,
                     "certificate": rep.certificate is not None and not rep.certificate.failures(C),
                     "verdict": rep.verdict})
    ok = all(r["exact"] and r["certificate"] and r["verdict"] == complexes.CONSISTENT for r in rows)
    return ok, f"{len(rows)} complexes exact, certified contractible, consistent", {"instances": rows}


def _c2_modules():
    """Every C_2-module of dimension <= 2 over F_2, as an explicit matrix."""
    G = groups.ElemAbGroup(2, 1)
    f = GF(2)
    mods = [gmod.GModule(G, f, 0, (Matrix.zeros(f, 0, 0),)), gmod.GModule(G, f, 1, (Matrix(f, [[1]]),))]
    for entries in product(range(2), repeat=4):
        A = Matrix(f, np.array(entries).reshape(2, 2))
        if A @ A == Matrix.identity(f, 2):
            mods.append(gmod.GModule(G, f, 2, (A,)))
    return mods


def _all_matrices(rows: int, cols: int):
    for entries in product(range(2), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def brute_force_contractible(A: gmod.GModule, B: gmod.GModule, d: np.ndarray) -> bool:
    """0 -> A -d-> B -> 0 over F_2 C_2: search every h: B -> A."""
    gA, gB = A.action[0].a, B.action[0].a
    for h in _all_matrices(A.dim, B.dim):
        if ((h @ gB) % 2 != (gA @ h) % 2).any():
            continue
        if ((h @ d) % 2 == np.eye(A.dim, dtype=np.int64)).all() and ((d @ h) % 2 == np.eye(B.dim, dtype=np.int64)).all():
            return True
    return False


def contractibility_oracle() -> tuple[bool, str, dict]:
    mods = _c2_modules()
    total = disagreements = positive = 0
    bad = []
    for A in mods:
        for B in mods:
            gA, gB = A.action[0].a, B.action[0].a
            for d in _all_matrices(B.dim, A.dim):
                if ((d @ gA) % 2 != (gB @ d) % 2).any():
                    continue
                C = complexes.BoundedComplex((A, B), (Matrix(A.field, d),))
                total += 1
                solver = complexes.is_contractible(C).contractible
                positive += solver
                if solver != brute_force_contractible(A, B, d):
                    disagreements += 1
                    bad.append({"A": gA.tolist(), "B": gB.tolist(), "d": d.tolist()})
    return disagreements == 0, f"{total} complexes ({positive} contractible), {disagreements} disagreements", \
        {"complexes": total, "contractible": positive, "disagreements": bad}


def eckmann_shapiro() -> tuple[bool, str, dict]:
    rows = []
    for p, r in ((2, 3), (3, 2)):
        G = groups.ElemAbGroup(p, r)
        for E in groups.all_subgroups(G):
            dims = resolution.cohomology_dims(gmod.make_permutation(E, G.prime_field), 6)
            s = E.rank
            expected = [comb(j + s - 1, s - 1) for j in range(7)] if s else [1] + [0] * 6
            rows.append({"group": [p, r], "subgroup": E.to_json()["basis"], "dims": dims, "ok": dims == expected})
    return all(r["ok"] for r in rows), f"{len(rows)} subgroups match H^*(E,k)", {"subgroups": rows}


def betti_numbers() -> tuple[bool, str, dict]:
    expected = {(2, 2): [1, 2, 3, 4, 5, 6, 7], (3, 2): [1, 2, 3, 4, 5, 6, 7], (2, 3): [1, 3, 6, 10, 15, 21, 28]}
    rows = []
    for (p, r), want in expected.items():
        G = groups.ElemAbGroup(p, r)
        res = resolution.minimal_free_resolution(gmod.make_trivial(G, G.prime_field), 6)
        rows.append({"group": [p, r], "ranks": res.ranks, "minimal": res.is_minimal(), "ok": res.ranks == want})
    return all(r["ok"] and r["minimal"] for r in rows), "C_2^2, C_3^2, C_2^3 Betti numbers", {"groups": rows}


def avoidance_round_trip(count: int = 20) -> tuple[bool, str, dict]:
    G = groups.ElemAbGroup(2, 3)
    sg = groups.subgroup_from_generators
    Hp = [sg(G, [(1, 0, 0), (0, 1, 0)]), sg(G, [(0, 1, 0), (0, 0, 1)])]
    Hd = [sg(G, [(1, 1, 1)])]
    pair = cohomology.find_avoidance_pair(Hp, Hd)
    worked = cohomology.verify_avoidance_pair(pair.u, pair.v, Hp, Hd).ok and pair.field_used == GF(2)
    rows = [{"instance": "worked", "u": repr(pair.u), "v": repr(pair.v),
             "field_e": pair.field_used.e, "ok": worked}]
    for seed in range(count):
        G = groups.ElemAbGroup(2 if seed % 2 == 0 else 3, 3)
        rng = np.random.default_rng(seed)
        Hp, Hd = cohomology.random_avoidance_instance(G, rng)
        pair = cohomology.find_avoidance_pair(Hp, Hd)
        check = cohomology.verify_avoidance_pair(pair.u, pair.v, Hp, Hd)
        rows.append({"instance": seed, "group": [G.p, G.r],
                     "Hprime": [E.to_json()["basis"] for E in Hp],
                     "Hdoubleprime": [E.to_json()["basis"] for E in Hd],
                     "u": repr(pair.u), "v": repr(pair.v), "field_e": pair.field_used.e,
                     "ok": check.ok, "witness": check.witness})
    enlarged = sum(1 for r in rows if r["field_e"] > 1)
    return all(r["ok"] for r in rows), f"worked example + {count} random pairs verified ({enlarged} enlarged)", \
        {"instances": rows}


def splitting_instances(count: int = 50):
    for p in (2, 3):
        G = groups.ElemAbGroup(p, 2)
        H = [G.trivial_subgroup(), G.whole()]
        for seed in range(count):
            rng = np.random.default_rng([17, p, seed])
            length = int(rng.integers(1, 4))
            mult = rng.integers(0, 3, size=(length, 2))
            mult[-1] = [0, int(rng.integers(1, 3))]
            yield p, seed, G, complexes.random_addS_complex(H, length, mult.tolist(), seed=seed)


def splitting_construction(count: int = 50) -> tuple[bool, str, dict]:
    rows = []
    for p, seed, G, C in splitting_instances(count):
        try:
            psi = complexes.split_via_rank_two_subgroup(C, G.whole())
            ok = C.differentials[-1] @ psi.matrix == C.terms[-1].identity()
            err = None
        except (AssertionError, ValueError) as exc:
            ok, err = False, str(exc)
        rows.append({"p": p, "seed": seed, "dims": C.dims, "ok": ok, "error": err})
    return all(r["ok"] for r in rows), f"{len(rows)} splittings with d psi = 1, fixed points in radical", \
        {"instances": rows}


def e1_balance(count: int = 200, top: int = 4) -> tuple[bool, str, dict]:
    rows = []
    for p, seed, H, C in consistency_instances(count):
        table = resolution.e1_dimension_table(C, top)
        sums = [sum((-1) ** i * x for i, x in enumerate(row)) for row in table]
        rows.append({"p": p, "seed": seed, "alternating_sums": sums, "ok": not any(sums)})
    return all(r["ok"] for r in rows), f"{len(rows)} complexes balance for j <= {top}", {"instances": rows}


CRITERIA: list[tuple[int, str, tuple[str, ...], Callable]] = [
    (1, "periodicity certification", ("periodicity", "complexes"), periodicity_certification),
    (2, "necessity sweep", ("necessity", "counterexamples"), necessity_sweep),
    (3, "theorem-consistency harness", ("theorem", "complexes"), theorem_consistency),
    (4, "contractibility oracle equivalence", ("oracle", "complexes"), contractibility_oracle),
    (5, "Eckmann-Shapiro dimensions", ("cohomology",), eckmann_shapiro),
    (6, "Betti numbers", ("cohomology", "resolution"), betti_numbers),
    (7, "avoidance-pair round trip", ("cohomology", "avoidance"), avoidance_round_trip),
    (8, "rank-two splitting construction", ("splitting", "complexes"), splitting_construction),
    (9, "E1 columns balance", ("cohomology", "e1"), e1_balance),
]


def run_criterion(number: int) -> CriterionResult:
    num, name, tags, fn = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    try:
        passed, detail, report = fn()
    except Exception as exc:  # a crash is a failure, reported by name
        passed, detail, report = False, f"error: {type(exc).__name__}: {exc}", {"error": str(exc)}
    return CriterionResult(num, name, tags, passed, detail, report, time.perf_counter() - t0)


def report_bytes(result: CriterionResult) -> bytes:
    body = {"criterion": result.number, "name": result.name, "passed": result.passed,
            "detail": result.detail, "report": result.report}
    return json.dumps(body, sort_keys=True, indent=1).encode()


def determinism(first: dict[int, bytes]) -> CriterionResult:
    t0 = time.perf_counter()
    differing = [n for n, blob in first.items() if report_bytes(run_criterion(n)) != blob]
    return CriterionResult(10, "determinism", ("determinism",), not differing,
                           f"{len(first)} reports re-run, {len(differing)} differ",
                           {"rerun": sorted(first), "differing": differing}, time.perf_counter() - t0)


def run_all(filter_tag: str | None = None, out_dir=None, echo=print) -> list[CriterionResult]:
    """Run the criteria (optionally only those tagged ``filter_tag``)."""
    results = []
    blobs = {}
    for num, name, tags, _ in CRITERIA:
        if filter_tag and filter_tag not in tags:
            continue
        res = run_criterion(num)
        blobs[num] = report_bytes(res)
        results.append(res)
        echo(res.line())
    if not filter_tag or filter_tag == "determinism":
        if filter_tag == "determinism":
            blobs = {n: report_bytes(run_criterion(n)) for n, *_ in CRITERIA}
        res = determinism(blobs)
        blobs[10] = report_bytes(res)
        results.append(res)
        echo(res.line())
    if out_dir is not None:
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for num, blob in blobs.items():
            (out / f"criterion_{num:02d}.json").write_bytes(blob)
    return results
