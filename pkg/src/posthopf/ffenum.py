"""Independent brute-force oracle over small odd prime fields.

Enumerates every table on the Sweedler algebra satisfying the relaxed (or
weak) axioms with coefficients in F_p, by backtracking over the generator
columns row by row in the fixed order (1, g, v, gv).  That order makes the
coproduct of each basis element reference only rows already chosen, so the
symbolic constraint system restricted to the assigned rows prunes candidates
as early as possible.  Completed tables are re-checked with the full exact
axiom suite before being emitted, so pruning can only ever remove candidates
the final check would reject.

The search runs over the 32 generator unknowns, not all 64 coefficients: the
product rule forces the remaining columns, the same completion the
classifier uses.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import FpElement, is_odd_prime, rational_mod_p
from .hopfcore import HopfStructure, sweedler_h4
from .multipoly import Poly
from .triangleop import (
    GeneratorTable,
    TriangleOp,
    check_coalgebra_hom,
    check_distributivity,
    check_unitality,
    check_weighted_assoc,
    extend_generators,
    op_serial,
)

__all__ = [
    "EnumerationTask",
    "EnumerationReport",
    "EnumerationLimitError",
    "FamilyDiff",
    "row_candidates",
    "enumerate_structures",
    "family_evaluations",
    "compare_with_families",
]

ROW_ORDER = ("1", "g", "v", "gv")
MAX_PRIME = 13


class EnumerationLimitError(RuntimeError):
    """Raised when the candidate cap is exceeded; partial results are
    discarded."""


@dataclass(frozen=True)
class EnumerationTask:
    prime: int
    mode: str = "relaxed"
    max_leaves: int | None = None
    row_order: tuple[str, ...] = ROW_ORDER

    def __post_init__(self):
        if not is_odd_prime(self.prime) or self.prime > MAX_PRIME:
            raise ValueError(
                f"prime must be an odd prime <= {MAX_PRIME}, got {self.prime}"
            )
        if self.mode not in ("relaxed", "weak"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.row_order != ROW_ORDER:
            raise ValueError(f"row order is fixed to {ROW_ORDER}")


@dataclass
class EnumerationReport:
    task: EnumerationTask
    structures: tuple[TriangleOp, ...]
    count: int
    elapsed: float
    stats: dict


# -- the reduced symbolic system -----------------------------------------------

@lru_cache(maxsize=None)
def _generator_layout():
    """(row, local-slot) of each of the 32 generator unknowns; slots 0-3 are
    the x|>g coordinates, 4-7 the x|>v coordinates."""
    from .classifier import _cached_system

    _op, reg, system = _cached_system("relaxed", "generator32")
    rows = []
    locals_ = []
    for vid in range(len(reg)):
        _, i, j, k = reg.name_of(vid).split("_")
        rows.append(int(i))
        locals_.append((int(j) - 1) * 4 + int(k))
    return tuple(rows), tuple(locals_)


@lru_cache(maxsize=None)
def _system_terms(mode: str):
    """Constraints of the generator parameterization as integer term lists,
    grouped by depth (the highest row index occurring in the support)."""
    from .classifier import _cached_system

    _op, _reg, system = _cached_system(mode, "generator32")
    row_of, _ = _generator_layout()
    grouped: dict[int, list] = {0: [], 1: [], 2: [], 3: []}
    for constraint in system.equations:
        terms = []
        depth = 0
        for mono, coeff in constraint.poly.terms.items():
            if coeff.denominator != 1:
                raise AssertionError("generator system has non-integer coefficient")
            terms.append((int(coeff), mono))
            for v, _e in mono:
                if row_of[v] > depth:
                    depth = row_of[v]
        grouped[depth].append(terms)
    for lst in grouped.values():
        lst.sort(key=len)
    return grouped


def _compile_row_constraints(p: int, mode: str, row: int, assigned) -> list | None:
    """Substitute the already-chosen rows into the depth-``row`` constraints,
    producing term lists over this row's eight local slots.  Returns None if
    some constraint already reduced to a nonzero constant."""
    row_of, local_of = _generator_layout()
    compiled = []
    for terms in _system_terms(mode)[row]:
        acc: dict[tuple, int] = {}
        for coeff, mono in terms:
            c = coeff % p
            local = []
            for v, e in mono:
                r = row_of[v]
                if r < row:
                    c = c * pow(assigned[r][local_of[v]], e, p) % p
                else:
                    local.append((local_of[v], e))
            if c == 0:
                continue
            key = tuple(local)
            c = (acc.get(key, 0) + c) % p
            if c:
                acc[key] = c
            else:
                acc.pop(key, None)
        if not acc:
            continue
        if len(acc) == 1 and () in acc:
            return None
        compiled.append(sorted(acc.items(), key=lambda t: (len(t[0]), t[0])))
    compiled.sort(key=len)
    return compiled


def _eval_compiled(terms, vals, p: int) -> int:
    total = 0
    for mono, c in terms:
        v = c
        for idx, e in mono:
            v = v * pow(vals[idx], e, p) % p
            if v == 0:
                break
        total = (total + v) % p
    return total


def row_candidates(H4: HopfStructure, task: EnumerationTask, row_index: int, assigned_rows) -> list[tuple]:
    """All (x|>g, x|>v) value pairs over F_p for basis row ``row_index`` that
    satisfy every constraint whose support lies within the assigned rows plus
    this one.  Counit compatibility pins two of the eight slots, shrinking
    the scan to p**6; the remaining constraints filter exactly."""
    if tuple(H4.counit) != (1, 1, 0, 0) or H4.dim != 4:
        raise ValueError("row enumeration is specific to the Sweedler algebra")
    p = task.prime
    compiled = _compile_row_constraints(p, task.mode, row_index, assigned_rows)
    if compiled is None:
        return []
    eps_x = int(H4.counit[row_index])

    v_only, rest = [], []
    for c in compiled:
        bucket = v_only if all(idx < 4 for mono, _ in c for idx, _e in mono) else rest
        bucket.append(c)

    candidates: list[tuple] = []
    rng = range(p)
    v_half: list[tuple] = []
    for v1 in rng:
        v0 = (eps_x - v1) % p
        for v2 in rng:
            for v3 in rng:
                vals = (v0, v1, v2, v3, 0, 0, 0, 0)
                if all(_eval_compiled(c, vals, p) == 0 for c in v_only):
                    v_half.append((v0, v1, v2, v3))
    for v in v_half:
        for w1 in rng:
            w0 = (-w1) % p
            for w2 in rng:
                for w3 in rng:
                    vals = v + (w0, w1, w2, w3)
                    if all(_eval_compiled(c, vals, p) == 0 for c in rest):
                        candidates.append(vals)
    return candidates


# -- full enumeration ------------------------------------------------------------

def _table_from_rows(H4: HopfStructure, p: int, rows: dict) -> TriangleOp:
    gt = GeneratorTable(
        tuple(
            (
                tuple(FpElement(rows[i][k], p) for k in range(4)),
                tuple(FpElement(rows[i][4 + k], p) for k in range(4)),
            )
            for i in range(4)
        )
    )
    return extend_generators(H4, gt)


def _passes_full_suite(H4: HopfStructure, op: TriangleOp, mode: str) -> bool:
    if not check_coalgebra_hom(H4, op).passed:
        return False
    if not check_distributivity(H4, op).passed:
        return False
    if not check_weighted_assoc(H4, op).passed:
        return False
    if mode == "weak" and not check_unitality(H4, op).passed:
        return False
    return True


def enumerate_structures(task: EnumerationTask, *, workers: int = 1) -> EnumerationReport:
    """Exhaustive, exact enumeration.  ``workers`` partitions the top-level
    candidate list into chunks whose results are merged and canonically
    sorted, so the output is independent of the partitioning."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    h4 = sweedler_h4()
    p = task.prime
    t0 = time.perf_counter()
    stats = {"row_scans": 0, "leaves": 0, "passed": 0, "prefix_pruned": 0}

    stats["row_scans"] += 1
    top = row_candidates(h4, task, 0, {})
    chunks = [top[i::workers] for i in range(workers)]

    found: dict[str, TriangleOp] = {}

    def descend(row: int, assigned: dict) -> None:
        if row == 4:
            stats["leaves"] += 1
            if task.max_leaves is not None and stats["leaves"] > task.max_leaves:
                raise EnumerationLimitError(
                    f"candidate cap of {task.max_leaves} tables exceeded"
                )
            op = _table_from_rows(h4, p, assigned)
            if _passes_full_suite(h4, op, task.mode):
                stats["passed"] += 1
                found[op_serial(op)] = op
            return
        stats["row_scans"] += 1
        cands = row_candidates(h4, task, row, assigned)
        if not cands:
            stats["prefix_pruned"] += 1
            return
        for cand in cands:
            assigned[row] = cand
            descend(row + 1, assigned)
        del assigned[row]

    for chunk in chunks:
        for cand in chunk:
            descend(1, {0: cand})

    ordered = tuple(found[key] for key in sorted(found))
    elapsed = time.perf_counter() - t0
    return EnumerationReport(
        task=task,
        structures=ordered,
        count=len(ordered),
        elapsed=elapsed,
        stats=stats,
    )


# -- comparison against the symbolic families --------------------------------------

def _op_mod_p(op: TriangleOp, p: int, assignment: dict[int, int]) -> TriangleOp:
    fp_assign = {vid: FpElement(v, p) for vid, v in assignment.items()}

    def entry_mod(entry):
        if isinstance(entry, Poly):
            if entry.support:
                return entry.evaluate_mod_p(fp_assign)
            return rational_mod_p(entry.constant_value(), p)
        return rational_mod_p(Fraction(entry), p)

    table = tuple(
        tuple(tuple(entry_mod(e) for e in cell) for cell in row) for row in op.table
    )
    return TriangleOp(op.dim, table)


def family_evaluations(families: dict[str, TriangleOp], p: int) -> dict[str, tuple]:
    """Every specialization of the given symbolic tables over F_p, keyed by
    canonical serialization; values are (label, parameter or None)."""
    out: dict[str, tuple] = {}
    for label, op in families.items():
        params: set[int] = set()
        for row in op.table:
            for cell in row:
                for entry in cell:
                    if isinstance(entry, Poly):
                        params.update(entry.support)
        if not params:
            key = op_serial(_op_mod_p(op, p, {}))
            out.setdefault(key, (label, None))
        else:
            if len(params) != 1:
                raise ValueError(f"family {label!r} has more than one parameter")
            (vid,) = params
            for v in range(p):
                key = op_serial(_op_mod_p(op, p, {vid: v}))
                out.setdefault(key, (label, v))
    return out


@dataclass
class FamilyDiff:
    missing: list[tuple]   # (label, param, serial) expected but not enumerated
    extra: list[str]       # serials enumerated but not produced by any family
    expected_count: int

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra


def compare_with_families(report: EnumerationReport, families: dict[str, TriangleOp]) -> FamilyDiff:
    """Set comparison between the enumerated structures and all family
    specializations over the same prime."""
    expected = family_evaluations(families, report.task.prime)
    got = {op_serial(op) for op in report.structures}
    missing = [
        (label, param, key)
        for key, (label, param) in sorted(expected.items())
        if key not in got
    ]
    extra = sorted(key for key in got if key not in expected)
    return FamilyDiff(missing=missing, extra=extra, expected_count=len(expected))
