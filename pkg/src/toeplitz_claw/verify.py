"""Exhaustive sweeps that cross-check the classifiers against the oracles.

A sweep walks a box of Toeplitz parameters ``(k, offsets, n)`` and runs a
set of named checks on every cell.  Each check compares a closed-form claim
with brute force and records a :class:`Discrepancy` when they disagree.
Cells the oracles cannot handle are recorded as skipped, never dropped.
"""

from __future__ import annotations

import ast
import operator
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Callable, Iterator, Optional

from . import oracle
from . import theorems as th
from .core import Claw, ToeplitzParams, build_graph
from .errors import OracleBoundExceeded

CHECKS = (
    "claw",
    "reflection",
    "chordal",
    "interval",
    "clique",
    "components",
    "cycles",
    "line",
    "catalogue37",
    "boundary35",
    "equivalence25",
    "mutation28",
    "fibonacci",
)
FAMILIES = ("all", "cocoonery", "mutation", "fibonacci")
HOLE_SCAN_MAX = 12
FIBONACCI = (1, 2, 3, 5, 8, 13, 21, 34)


# -- parameter boxes ---------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.FloorDiv: operator.floordiv}
_FUNCS = {"min": min, "max": max}


def eval_bound(expr: str, env: dict[str, int]) -> int:
    """Evaluate an integer bound such as ``min(40, 2*(t1+tk))``.

    Names: ``k``, ``t1``, ``tk``, ``tkm1`` (``t_{k-1}``, 0 when ``k = 1``);
    functions ``min`` and ``max``; operators ``+ - * //``.
    """

    def ev(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id in env:
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and not node.keywords
        ):
            return _FUNCS[node.func.id](*(ev(a) for a in node.args))
        raise ValueError(f"unsupported bound expression: {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse bound expression {expr!r}") from exc
    return ev(tree)


@dataclass(frozen=True)
class SweepSpec:
    """A parameter box and the checks to run on each of its cells.

    ``family`` restricts the offsets: ``all`` takes every increasing tuple
    with ``t_k <= t_max``; ``cocoonery`` and ``mutation`` take the patterned
    tuples with step ``t <= t_max``; ``fibonacci`` is the fixed list of
    graphs ``T_{F_k+1}<F_1..F_k>`` for ``k <= 8`` and ignores the box.
    """

    k_values: tuple[int, ...] = (2,)
    t_max: int = 10
    n_min: str = "tk+1"
    n_max: str = "30"
    family: str = "all"
    checks: tuple[str, ...] = ("claw",)
    max_cliques: int = 64
    name: str = "custom"

    def __post_init__(self):
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        if not self.checks:
            raise ValueError("at least one check is required")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family != "fibonacci" and (not self.k_values or min(self.k_values) < 1 or self.t_max < 1):
            raise ValueError("k values and t_max must be positive and nonempty")
        probe = {"k": 2, "t1": 1, "tk": 2, "tkm1": 1}
        eval_bound(self.n_min, probe)
        eval_bound(self.n_max, probe)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "k_values": list(self.k_values),
            "t_max": self.t_max,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "family": self.family,
            "checks": list(self.checks),
            "max_cliques": self.max_cliques,
        }


def _offset_tuples(spec: SweepSpec, k: int) -> Iterator[tuple[int, ...]]:
    if spec.family == "all":
        yield from combinations(range(1, spec.t_max + 1), k)
    elif spec.family == "cocoonery":
        for t in range(1, spec.t_max + 1):
            yield tuple(i * t for i in range(1, k + 1))
    elif spec.family == "mutation" and k >= 2:
        for t in range(1, spec.t_max + 1):
            yield tuple(i * t for i in range(1, k)) + ((k + 1) * t,)


def cells(spec: SweepSpec) -> list[ToeplitzParams]:
    """Every parameter set in the box, sorted by ``(k, offsets, n)``."""
    if spec.family == "fibonacci":
        out = [ToeplitzParams(FIBONACCI[k - 1] + 1, FIBONACCI[:k]) for k in range(1, 9)]
    else:
        out = []
        for k in sorted(set(spec.k_values)):
            for offs in _offset_tuples(spec, k):
                env = {"k": k, "t1": offs[0], "tk": offs[-1], "tkm1": offs[-2] if k > 1 else 0}
                lo = max(eval_bound(spec.n_min, env), offs[-1] + 1, 2)
                hi = eval_bound(spec.n_max, env)
                out.extend(ToeplitzParams(n, offs) for n in range(lo, hi + 1))
    return sorted(out, key=cell_key)


def cell_key(p: ToeplitzParams) -> tuple:
    return (p.k, p.offsets, p.n)


# -- report types ------------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    params: ToeplitzParams
    check: str
    theorem_verdict: object
    oracle_verdict: object
    witness: Optional[list[int]] = None
    detail: str = ""

    def as_record(self) -> dict:
        return {
            "record": "discrepancy",
            "params": self.params.as_dict(),
            "check": self.check,
            "theorem_verdict": self.theorem_verdict,
            "oracle_verdict": self.oracle_verdict,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CellResult:
    params: ToeplitzParams
    applied: tuple[str, ...]
    discrepancies: tuple[Discrepancy, ...]
    skipped: Optional[tuple[str, str]]  # (check, reason)
    timing: dict


@dataclass
class SweepReport:
    spec: SweepSpec
    cells_total: int = 0
    cells_evaluated: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    skipped: list[tuple[ToeplitzParams, str, str]] = field(default_factory=list)
    check_counts: dict[str, int] = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)
    results: list[CellResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def summary(self, timing: bool = False) -> dict:
        out = {
            "record": "summary",
            "spec": self.spec.as_dict(),
            "cells_total": self.cells_total,
            "cells_evaluated": self.cells_evaluated,
            "cells_skipped": len(self.skipped),
            "discrepancy_count": len(self.discrepancies),
            "check_counts": dict(sorted(self.check_counts.items())),
        }
        if timing:
            out["timing"] = {k: round(v, 6) for k, v in sorted(self.timing.items())}
        return out

    def records(self, include_cells: bool = False, timing: bool = False) -> Iterator[dict]:
        """Line-delimited records: cells (optional), skips, discrepancies, summary."""
        if include_cells:
            for r in self.results:
                rec = {
                    "record": "cell",
                    "params": r.params.as_dict(),
                    "checks": list(r.applied),
                    "status": "skipped" if r.skipped else ("discrepancy" if r.discrepancies else "ok"),
                }
                if timing:
                    rec["timing"] = {k: round(v, 6) for k, v in sorted(r.timing.items())}
                yield rec
        for p, check, reason in self.skipped:
            yield {"record": "skipped", "params": p.as_dict(), "check": check, "reason": reason}
        for d in self.discrepancies:
            yield d.as_record()
        yield self.summary(timing)


# -- per-cell evaluation -----------------------------------------------------


class _Cell:
    """Lazily computed oracle facts about one parameter set."""

    def __init__(self, p: ToeplitzParams, max_cliques: int):
        self.p = p
        self.max_cliques = max_cliques

    @cached_property
    def graph(self):
        return build_graph(self.p)

    @cached_property
    def first_claw(self) -> Optional[Claw]:
        found = oracle.enumerate_claws(self.graph, limit=1)
        return found[0] if found else None

    @property
    def oracle_claw_free(self) -> bool:
        return self.first_claw is None

    @cached_property
    def verdict(self) -> th.ClawFreeVerdict:
        return th.classify_claw_free(self.p)

    @cached_property
    def chordal(self) -> oracle.ChordalityCertificate:
        return oracle.is_chordal(self.graph)

    @cached_property
    def interval(self) -> bool:
        return oracle.is_interval(self.graph, max_cliques=self.max_cliques)

    @cached_property
    def omega(self) -> int:
        return oracle.clique_number(self.graph)

    @property
    def progression(self) -> bool:
        t = self.p.offsets
        return all(x == i * t[0] for i, x in enumerate(t, start=1))

    @property
    def top_sum(self) -> Optional[int]:
        t = self.p.offsets
        return t[-2] + t[-1] if len(t) >= 2 else None


def _mismatch(c: _Cell, check: str, theorem, observed, witness=None, detail="") -> Discrepancy:
    return Discrepancy(c.p, check, theorem, observed, witness, detail)


def _check_claw(c: _Cell):
    v = c.verdict
    if v.claw_free != c.oracle_claw_free:
        w = c.first_claw.as_list() if c.first_claw else None
        yield _mismatch(c, "claw", v.claw_free, c.oracle_claw_free, w, v.rule.value)
    if v.witness is not None and not v.witness.is_valid_in(c.graph):
        yield _mismatch(c, "claw", False, None, v.witness.as_list(), "invalid witness")


def _check_reflection(c: _Cell):
    g = c.graph
    full = set(oracle.enumerate_claws(g))
    reduced = oracle.enumerate_claws(g, star=True)
    closed = set(reduced) | {w.reflected(g.order) for w in reduced}
    if closed != full or not all(w.satisfies_star() for w in reduced):
        diff = sorted(closed ^ full)
        yield _mismatch(c, "reflection", len(closed), len(full), diff[0].as_list() if diff else None)
    bad = next((w for w in full if not w.is_valid_in(g)), None)
    if bad is not None:
        yield _mismatch(c, "reflection", None, None, bad.as_list(), "invalid claw")


def _is_peo(g, order) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in g.neighbors(v) if pos[u] > pos[v]]
        if any(not g.adjacent(a, b) for a, b in combinations(later, 2)):
            return False
    return True


def _check_chordal(c: _Cell):
    g, cert = c.graph, c.chordal
    if cert.chordal and not (sorted(cert.ordering) == list(g.vertices()) and _is_peo(g, cert.ordering)):
        yield _mismatch(c, "chordal", True, False, detail="ordering is not a perfect elimination ordering")
    if not cert.chordal and not cert.hole.is_valid_in(g):
        yield _mismatch(c, "chordal", False, None, list(cert.hole.cycle), "invalid hole")
    if g.order <= HOLE_SCAN_MAX:
        hole = next((h for h in (oracle.find_hole(g, l) for l in range(4, g.order + 1)) if h), None)
        if cert.chordal != (hole is None):
            yield _mismatch(c, "chordal", cert.chordal, hole is None, list(hole.cycle) if hole else None,
                            "elimination ordering vs exhaustive hole search")
    s = c.top_sum
    if s is not None and c.p.n >= s and cert.chordal != c.progression:
        yield _mismatch(c, "chordal", c.progression, cert.chordal, detail="chordal iff t_i = i t_1")
    if c.p.k == 2 and c.p.n >= s and not c.progression:
        t1, t2 = c.p.offsets
        if oracle.find_hole(g, (t1 + t2) // gcd(t1, t2)) is None:
            yield _mismatch(c, "chordal", True, False, detail="no hole of length (t1+t2)/gcd")


def _check_interval(c: _Cell):
    if c.interval and not c.chordal:
        yield _mismatch(c, "interval", True, False, detail="interval but not chordal")
    s = c.top_sum
    if s is not None and c.p.n >= s and c.interval != c.progression:
        yield _mismatch(c, "interval", c.progression, c.interval, detail="interval iff t_i = i t_1")


def _check_clique(c: _Cell):
    s = c.top_sum
    if s is not None and c.p.n >= s and (c.omega == c.p.k + 1) != c.progression:
        yield _mismatch(c, "clique", c.progression, c.omega, detail="omega = k+1 iff t_i = i t_1")


def _check_components(c: _Cell):
    p = c.p
    if not th.certify_components(p, th.decompose_gcd(p)):
        yield _mismatch(c, "components", "gcd", False, detail="gcd decomposition failed certification")
    if th.is_cocoonery(p):
        rep = th.decompose_cocoonery(p)
        if not th.certify_components(p, rep):
            yield _mismatch(c, "components", "cocoonery", False, detail="cocoonery decomposition failed")
        found = len(oracle.connected_components(c.graph))
        if found != rep.component_count:
            yield _mismatch(c, "components", rep.component_count, found, detail="component count")


def _check_cycles(c: _Cell):
    d, length = th.cycle_decomposition(c.p)
    g = c.graph
    comps = oracle.connected_components(g)
    shape_ok = len(comps) == d and all(
        len(comp) == length and all(len(g.neighbors(v)) == 2 for v in comp) for comp in comps
    )
    if not shape_ok:
        yield _mismatch(c, "cycles", [d, length], [len(comps), sorted({len(x) for x in comps})])


def _check_line(c: _Cell):
    lv = th.classify_line_graph(c.p)
    cert = oracle.is_line_graph(c.graph)
    if lv.is_line != cert.is_line:
        yield _mismatch(c, "line", lv.is_line, cert.is_line, detail=lv.rule.value)
        return
    if lv.is_line and lv.component_multiset is not None:
        kinds = oracle.component_kinds(c.graph)
        if kinds != lv.component_multiset:
            yield _mismatch(c, "line", lv.component_multiset, kinds, detail="component multiset")
    if lv.root_graph is not None and not oracle.root_round_trip(c.graph, lv.root_graph, lv.edge_map):
        yield _mismatch(c, "line", True, False, detail="root graph round trip")


def _check_catalogue(c: _Cell):
    family = th.near_double_k3_family(c.p)
    listed = family is not None
    if listed != c.oracle_claw_free or c.verdict.claw_free != c.oracle_claw_free:
        yield _mismatch(c, "catalogue37", listed, c.oracle_claw_free,
                        c.first_claw.as_list() if c.first_claw else None,
                        f"family={family} dispatch={c.verdict.claw_free}")


def _check_boundary(c: _Cell):
    predicted = th.k3_boundary_claw_free(c.p)
    if predicted != c.oracle_claw_free or c.verdict.claw_free != c.oracle_claw_free:
        yield _mismatch(c, "boundary35", predicted, c.oracle_claw_free,
                        c.first_claw.as_list() if c.first_claw else None)


def _check_equivalence(c: _Cell):
    facts = {
        "claw_free": c.oracle_claw_free,
        "chordal": c.chordal.chordal,
        "interval": c.interval,
        "cocoonery": th.is_cocoonery(c.p) is not None,
        "omega_k_plus_1": c.omega == c.p.k + 1,
        "dispatch": c.verdict.claw_free,
    }
    if len(set(facts.values())) != 1:
        yield _mismatch(c, "equivalence25", facts["cocoonery"], facts, detail="five-way equivalence")


def _check_mutation(c: _Cell):
    p = c.p
    mut = th.is_mutation(p)
    if mut is not None and p.n <= 2 * mut[0] * mut[1] and not c.oracle_claw_free:
        yield _mismatch(c, "mutation28", True, False, c.first_claw.as_list(), "mutation with n <= 2kt")
    if p.k >= 4 and p.n == c.top_sum:
        coc = th.is_cocoonery(p) is not None
        expected = coc or mut is not None
        if expected != c.oracle_claw_free:
            yield _mismatch(c, "mutation28", expected, c.oracle_claw_free, detail="claw-free iff cocoonery or mutation")
        if p.n % 2 and coc != c.oracle_claw_free:
            yield _mismatch(c, "mutation28", coc, c.oracle_claw_free, detail="odd n: claw-free iff cocoonery")


def _check_fibonacci(c: _Cell):
    k = c.p.k
    expected = k <= 5
    if c.oracle_claw_free != expected or c.verdict.claw_free != expected:
        yield _mismatch(c, "fibonacci", expected, c.oracle_claw_free)
    if k == 6 and c.first_claw != Claw(3, (1, 5, 11)):
        yield _mismatch(c, "fibonacci", [3, 1, 5, 11], c.first_claw.as_list() if c.first_claw else None)


def _applies(check: str, p: ToeplitzParams) -> bool:
    k, n, t = p.k, p.n, p.offsets
    if check == "cycles":
        return k == 2 and n == t[0] + t[1]
    if check == "catalogue37":
        return k == 3 and 1 <= 2 * t[2] - n <= 3
    if check == "boundary35":
        return k == 3 and n == t[2] + 1
    if check == "equivalence25":
        return k >= 2 and n > t[-2] + t[-1]
    if check == "mutation28":
        return th.is_mutation(p) is not None or (k >= 4 and n == t[-2] + t[-1])
    if check == "fibonacci":
        return t == FIBONACCI[:k] and n == t[-1] + 1
    return True


_CHECK_FUNCS: dict[str, Callable[[_Cell], Iterator[Discrepancy]]] = {
    "claw": _check_claw,
    "reflection": _check_reflection,
    "chordal": _check_chordal,
    "interval": _check_interval,
    "clique": _check_clique,
    "components": _check_components,
    "cycles": _check_cycles,
    "line": _check_line,
    "catalogue37": _check_catalogue,
    "boundary35": _check_boundary,
    "equivalence25": _check_equivalence,
    "mutation28": _check_mutation,
    "fibonacci": _check_fibonacci,
}


def evaluate_cell(p: ToeplitzParams, checks: tuple[str, ...], max_cliques: int = 64) -> CellResult:
    cell = _Cell(p, max_cliques)
    applied, found, timing = [], [], {}
    for check in checks:
        if not _applies(check, p):
            continue
        start = time.perf_counter()
        try:
            found.extend(_CHECK_FUNCS[check](cell))
        except OracleBoundExceeded as exc:
            return CellResult(p, tuple(applied), tuple(found), (check, str(exc)), timing)
        finally:
            timing[check] = time.perf_counter() - start
        applied.append(check)
    return CellResult(p, tuple(applied), tuple(found), None, timing)


def _evaluate_args(args) -> CellResult:
    return evaluate_cell(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepReport:
    """Evaluate every cell of ``spec``; the report is sorted by cell key.

    With ``workers > 1`` cells are spread over a process pool.  Results are
    merged in cell order, so the report does not depend on scheduling.
    """
    box = cells(spec)
    jobs = [(p, spec.checks, spec.max_cliques) for p in box]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_args, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        results = [_evaluate_args(j) for j in jobs]
    results.sort(key=lambda r: cell_key(r.params))

    report = SweepReport(spec, cells_total=len(box), results=results)
    for r in results:
        for check in r.applied:
            report.check_counts[check] = report.check_counts.get(check, 0) + 1
        for check, secs in r.timing.items():
            report.timing[check] = report.timing.get(check, 0.0) + secs
        report.discrepancies.extend(r.discrepancies)
        if r.skipped:
            report.skipped.append((r.params, *r.skipped))
        else:
            report.cells_evaluated += 1
    return report


# -- suites ------------------------------------------------------------------

ACCEPTANCE_SUITE: dict[str, tuple[SweepSpec, ...]] = {
    "fibonacci": (SweepSpec(family="fibonacci", checks=("fibonacci", "claw"), name="fibonacci"),),
    "k2": (
        SweepSpec((2,), 10, "tk+1", "min(40, 2*(t1+tk))", checks=("claw",), name="k2"),
    ),
    "k3": (
        SweepSpec((3,), 10, "tk+1", "30", checks=("claw", "boundary35"), name="k3"),
        SweepSpec((3,), 15, "tk+1", "tk+1", checks=("boundary35", "claw"), name="k3-boundary"),
    ),
    "catalogue": (
        SweepSpec((3,), 12, "2*tk-3", "2*tk-1", checks=("catalogue37",), name="catalogue"),
    ),
    "equivalence": (
        SweepSpec((2, 3, 4), 10, "tkm1+tk+1", "30",
                  checks=("equivalence25", "claw", "chordal", "interval", "clique"), name="equivalence"),
    ),
    "boundary": (
        SweepSpec((4, 5), 15, "tkm1+tk", "min(30, tkm1+tk)", checks=("mutation28", "claw"), name="boundary-all"),
        SweepSpec((4, 5), 3, "tkm1+tk", "min(30, tkm1+tk)", family="cocoonery",
                  checks=("mutation28", "claw"), name="boundary-cocoonery"),
        SweepSpec((2, 3, 4, 5), 3, "tk+1", "min(30, 2*k*t1)", family="mutation",
                  checks=("mutation28", "claw"), name="mutation"),
    ),
    "components": (
        SweepSpec((1, 2, 3, 4), 5, "tk+1", "40", family="cocoonery",
                  checks=("components",), name="components-cocoonery"),
        SweepSpec((1, 2, 3), 10, "tk+1", "40", checks=("components", "cycles"), name="components-gcd"),
        SweepSpec((2,), 20, "t1+tk", "t1+tk", checks=("cycles", "components"), name="cycles"),
    ),
    "line": (
        SweepSpec((2,), 5, "tk+1", "5*t1+3", family="cocoonery", checks=("line",), name="line-k2"),
        SweepSpec((3, 4), 3, "tk+1", "(k+2)*t1", family="cocoonery", checks=("line",), name="line-k3"),
        SweepSpec((1,), 19, "tk+1", "20", checks=("line",), name="line-paths"),
        SweepSpec((2, 3), 8, "tk+1", "20", checks=("line",), name="line-general"),
    ),
    "oracle": (
        SweepSpec(tuple(range(1, 11)), 10, "tk+1", "20", checks=("reflection", "chordal"), name="oracle"),
    ),
}


def suite_specs(name: str) -> list[SweepSpec]:
    if name == "acceptance":
        return [s for group in ACCEPTANCE_SUITE.values() for s in group]
    if name in ACCEPTANCE_SUITE:
        return list(ACCEPTANCE_SUITE[name])
    raise ValueError(f"unknown suite {name!r}; choose acceptance or one of {sorted(ACCEPTANCE_SUITE)}")


# -- explain -----------------------------------------------------------------


def explain(p: ToeplitzParams) -> dict:
    """Full dispatch trace for ``p`` with an oracle cross-check when feasible."""
    out: dict = {"params": p.as_dict()}
    try:
        verdict, steps = th.explain_claw_free(p)
    except OracleBoundExceeded as exc:
        out.update(steps=[], verdict=None, error=str(exc))
        return out
    out["steps"] = steps
    out["verdict"] = verdict.as_dict()
    out["final_rule"] = verdict.rule.value
    if p.n <= oracle.oracle_bound():
        oracle_cf = oracle.is_claw_free(build_graph(p))
        out["oracle"] = {"claw_free": oracle_cf, "agrees": oracle_cf == verdict.claw_free}
    else:
        out["oracle"] = None
    return out

