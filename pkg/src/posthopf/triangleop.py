"""Candidate binary operations on a Hopf algebra as structure-constant
tables, with residual-based checkers for every operation axiom, plus the six
built-in classified families on the Sweedler algebra.

Every checker reports the exact residual at each failing basis combination
(never a bare boolean), so failures localize to a table cell and symbolic
residuals double as constraint equations for the classifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .exactmath import FpElement, parse_rational
from .hopfcore import (
    AxiomReport,
    HopfStructure,
    _ReportBuilder,
    basis_element,
    counit_of,
    multiply,
    vec_scale,
    vec_sub,
)
from .multipoly import Poly, VarRegistry, parse_poly

__all__ = [
    "TriangleOp",
    "GeneratorTable",
    "apply",
    "check_coalgebra_hom",
    "check_distributivity",
    "check_weighted_assoc",
    "check_unitality",
    "check_counit_absorption",
    "relaxed_suite",
    "extend_generators",
    "generator_columns",
    "FAMILY_LABELS",
    "family_table",
    "op_ring",
    "op_to_json_dict",
    "op_from_json_dict",
    "op_serial",
]

FAMILY_LABELS = ("i", "ii", "iii", "iv", "v", "vi")


@dataclass(frozen=True)
class TriangleOp:
    """table[i][j] is the coefficient vector of ``e_i |> e_j``."""

    dim: int
    table: tuple

    def __post_init__(self):
        n = self.dim
        if len(self.table) != n or any(
            len(row) != n or any(len(cell) != n for cell in row) for row in self.table
        ):
            raise ValueError("table shape does not match dim")

    def cell(self, i: int, j: int) -> tuple:
        return self.table[i][j]


@dataclass(frozen=True)
class GeneratorTable:
    """Values on the generator columns only: rows[i] = (e_i |> g, e_i |> v)."""

    rows: tuple  # 4 pairs of length-4 coefficient vectors

    def __post_init__(self):
        if len(self.rows) != 4 or any(
            len(pair) != 2 or any(len(vec) != 4 for vec in pair) for pair in self.rows
        ):
            raise ValueError("generator table needs 4 rows of two length-4 vectors")


def apply(H: HopfStructure, op: TriangleOp, x, y) -> tuple:
    """Bilinear extension of the table."""
    n = H.dim
    if op.dim != n:
        raise ValueError("operation dimension does not match the Hopf structure")
    if len(x) != n or len(y) != n:
        raise ValueError("element lengths do not match dim")
    zero = x[0] * 0
    out = [zero] * n
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            coef = xi * yj
            for k, c in enumerate(op.table[i][j]):
                if c != 0:
                    out[k] = out[k] + coef * c
    return tuple(out)


def _op_basis_apply(op: TriangleOp, i: int, vec) -> list:
    """e_i |> (vector with ring coefficients)."""
    n = op.dim
    zero = vec[0] * 0
    out = [zero] * n
    for l, wl in enumerate(vec):
        if wl == 0:
            continue
        for k, c in enumerate(op.table[i][l]):
            if c != 0:
                out[k] = out[k] + wl * c
    return out


def _vec_basis_apply(op: TriangleOp, vec, j: int) -> list:
    """(vector) |> e_j."""
    n = op.dim
    zero = vec[0] * 0
    out = [zero] * n
    for l, ul in enumerate(vec):
        if ul == 0:
            continue
        for k, c in enumerate(op.table[l][j]):
            if c != 0:
                out[k] = out[k] + ul * c
    return out


def check_coalgebra_hom(H: HopfStructure, op: TriangleOp) -> AxiomReport:
    """The operation must be a coalgebra homomorphism: the coproduct of
    ``x |> y`` equals ``(x1 |> y1) (x) (x2 |> y2)`` and its counit equals
    ``eps(x) eps(y)``, for all basis pairs."""
    n = H.dim
    rb = _ReportBuilder()
    for i in range(n):
        for j in range(n):
            cell = op.table[i][j]
            zero = cell[0] * 0
            lhs = [zero] * (n * n)
            for m, cm in enumerate(cell):
                if cm == 0:
                    continue
                plane = H.comul[m]
                for a in range(n):
                    for b in range(n):
                        c = plane[a][b]
                        if c:
                            lhs[a * n + b] = lhs[a * n + b] + cm * c
            rhs = [zero] * (n * n)
            for a in range(n):
                for b in range(n):
                    cab = H.comul[i][a][b]
                    if not cab:
                        continue
                    for c in range(n):
                        for d in range(n):
                            ccd = H.comul[j][c][d]
                            if not ccd:
                                continue
                            coef = cab * ccd
                            left = op.table[a][c]
                            right = op.table[b][d]
                            for k in range(n):
                                lk = left[k]
                                if lk == 0:
                                    continue
                                for l in range(n):
                                    rl = right[l]
                                    if rl != 0:
                                        rhs[k * n + l] = rhs[k * n + l] + coef * (lk * rl)
            for comp in range(n * n):
                rb.residual("coalgebra_delta", (i, j, comp // n, comp % n), lhs[comp] - rhs[comp])
            eps = counit_of(H, cell) - H.counit[i] * H.counit[j]
            rb.residual("coalgebra_counit", (i, j), eps)
    return rb.done()


def check_distributivity(H: HopfStructure, op: TriangleOp) -> AxiomReport:
    """``x |> (y z) = (x1 |> y)(x2 |> z)`` on all basis triples."""
    n = H.dim
    rb = _ReportBuilder()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = _op_basis_apply(op, i, H.mul[j][k])
                zero = lhs[0] * 0
                rhs = [zero] * n
                for a in range(n):
                    for b in range(n):
                        c = H.comul[i][a][b]
                        if not c:
                            continue
                        prod = multiply(H, op.table[a][j], op.table[b][k])
                        for t in range(n):
                            if prod[t] != 0:
                                rhs[t] = rhs[t] + c * prod[t]
                rb.residual_vector(
                    "distributivity", (i, j, k), tuple(x - y for x, y in zip(lhs, rhs))
                )
    return rb.done()


def check_weighted_assoc(H: HopfStructure, op: TriangleOp) -> AxiomReport:
    """``x |> (y |> z) = (x1 (x2 |> y)) |> z`` on all basis triples."""
    n = H.dim
    rb = _ReportBuilder()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = _op_basis_apply(op, i, op.table[j][k])
                zero = lhs[0] * 0
                rhs = [zero] * n
                for a in range(n):
                    for b in range(n):
                        c = H.comul[i][a][b]
                        if not c:
                            continue
                        inner = multiply(H, basis_element(H, a), op.table[b][j])
                        outer = _vec_basis_apply(op, inner, k)
                        for t in range(n):
                            if outer[t] != 0:
                                rhs[t] = rhs[t] + c * outer[t]
                rb.residual_vector(
                    "weighted_assoc", (i, j, k), tuple(x - y for x, y in zip(lhs, rhs))
                )
    return rb.done()


def check_unitality(H: HopfStructure, op: TriangleOp) -> AxiomReport:
    """``1 |> x = x`` on all basis elements (the extra axiom of the weak,
    as opposed to relaxed, setting)."""
    n = H.dim
    rb = _ReportBuilder()
    for j in range(n):
        acted = _vec_basis_apply(op, H.unit, j)
        rb.residual_vector("unitality", (j,), vec_sub(tuple(acted), basis_element(H, j)))
    return rb.done()


def check_counit_absorption(H: HopfStructure, op: TriangleOp) -> AxiomReport:
    """``x |> 1 = eps(x) 1``; a consequence of the other axioms, checked as
    its own property."""
    n = H.dim
    rb = _ReportBuilder()
    for i in range(n):
        val = apply(H, op, basis_element(H, i), H.unit)
        target = vec_scale(H.counit[i], H.unit)
        rb.residual_vector("counit_absorption", (i,), vec_sub(val, target))
    return rb.done()


def relaxed_suite(H: HopfStructure, op: TriangleOp) -> dict[str, AxiomReport]:
    """The axiom battery for the relaxed setting, in fixed order."""
    return {
        "coalgebra_hom": check_coalgebra_hom(H, op),
        "distributivity": check_distributivity(H, op),
        "weighted_assoc": check_weighted_assoc(H, op),
    }


# -- generator-table completion -------------------------------------------------

def extend_generators(H4: HopfStructure, gt: GeneratorTable) -> TriangleOp:
    """Complete generator columns to the full table using the factorizations
    1 = g*g and gv = g*v:

        x |> 1  := (x1 |> g)(x2 |> g)
        x |> gv := (x1 |> g)(x2 |> v)

    No axiom is checked here: the completion is a pure parameterization, and
    any table satisfying the product rule necessarily agrees with it.
    """
    if H4.dim != 4:
        raise ValueError("generator completion is specific to the 4-dimensional algebra")
    col_g = [gt.rows[i][0] for i in range(4)]
    col_v = [gt.rows[i][1] for i in range(4)]

    def completed(i: int, second_col) -> tuple:
        zero = col_g[0][0] * 0
        out = [zero] * 4
        for a in range(4):
            for b in range(4):
                c = H4.comul[i][a][b]
                if not c:
                    continue
                prod = multiply(H4, col_g[a], second_col[b])
                for t in range(4):
                    if prod[t] != 0:
                        out[t] = out[t] + c * prod[t]
        return tuple(out)

    table = tuple(
        (completed(i, col_g), tuple(col_g[i]), tuple(col_v[i]), completed(i, col_v))
        for i in range(4)
    )
    return TriangleOp(4, table)


def generator_columns(op: TriangleOp) -> GeneratorTable:
    """Extract the g and v columns (basis indices 1 and 2)."""
    return GeneratorTable(tuple((op.table[i][1], op.table[i][2]) for i in range(op.dim)))


# -- the built-in families -------------------------------------------------------

@lru_cache(maxsize=1)
def _family_data() -> dict:
    text = resources.files("posthopf").joinpath("families.json").read_text("utf-8")
    return json.loads(text)


def family_data_bytes() -> bytes:
    return resources.files("posthopf").joinpath("families.json").read_bytes()


@lru_cache(maxsize=None)
def _symbolic_family(which: str) -> TriangleOp:
    data = _family_data()["families"][which]
    reg = VarRegistry()
    if data["param"]:
        reg.add(data["param"])
    table = tuple(
        tuple(
            tuple(parse_poly(reg, entry) for entry in cell) for cell in row
        )
        for row in data["table"]
    )
    return TriangleOp(4, table)


def family_table(which: str, param=None) -> TriangleOp:
    """One of the six classified tables.  Families i and ii carry a free
    parameter: omit ``param`` for the symbolic table, pass a Fraction for a
    concrete one.  The parameterless families reject ``param``."""
    if which not in FAMILY_LABELS:
        raise ValueError(f"unknown family {which!r}; expected one of {FAMILY_LABELS}")
    symbolic = _symbolic_family(which)
    has_param = _family_data()["families"][which]["param"] is not None
    if param is None:
        return symbolic
    if not has_param:
        raise ValueError(f"family {which!r} takes no parameter")
    value = Fraction(param)
    reg = symbolic.table[0][0][0].registry
    vid = reg.id_of(_family_data()["families"][which]["param"])
    table = tuple(
        tuple(
            tuple(entry.substitute(vid, value).constant_value() for entry in cell)
            for cell in row
        )
        for row in symbolic.table
    )
    return TriangleOp(4, table)


# -- serialization ----------------------------------------------------------------

def op_ring(op: TriangleOp):
    """Uniform coefficient ring of the table: "rational", "poly", or
    ("prime", p)."""
    kinds = set()
    prime = None
    for row in op.table:
        for cell in row:
            for entry in cell:
                if isinstance(entry, Poly):
                    kinds.add("poly")
                elif isinstance(entry, FpElement):
                    kinds.add("prime")
                    if prime is None:
                        prime = entry.modulus
                    elif prime != entry.modulus:
                        raise ValueError("table mixes prime fields")
                elif isinstance(entry, (Fraction, int)):
                    kinds.add("rational")
                else:
                    raise ValueError(f"unsupported entry type {type(entry)!r}")
    if kinds == {"poly"}:
        return "poly"
    if kinds == {"prime"}:
        return ("prime", prime)
    if kinds == {"rational"}:
        return "rational"
    raise ValueError(f"table mixes coefficient rings: {sorted(kinds)}")


def _entry_str(entry) -> str:
    if isinstance(entry, Poly):
        return entry.to_string()
    return str(entry)


def op_to_json_dict(op: TriangleOp) -> dict:
    ring = op_ring(op)
    ring_field = {"prime": ring[1]} if isinstance(ring, tuple) else ring
    return {
        "dim": op.dim,
        "ring": ring_field,
        "table": [
            [[_entry_str(entry) for entry in cell] for cell in row] for row in op.table
        ],
    }


def op_from_json_dict(data: dict) -> TriangleOp:
    try:
        n = int(data["dim"])
        ring = data["ring"]
        rows = data["table"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed operation payload: {exc}") from exc
    if isinstance(ring, dict):
        p = int(ring["prime"])
        table = tuple(
            tuple(tuple(FpElement(int(e), p) for e in cell) for cell in row)
            for row in rows
        )
    elif ring == "rational":
        table = tuple(
            tuple(tuple(parse_rational(e) for e in cell) for cell in row)
            for row in rows
        )
    elif ring == "poly":
        reg = VarRegistry()
        names: set[str] = set()
        import re as _re

        for row in rows:
            for cell in row:
                for e in cell:
                    names.update(_re.findall(r"[A-Za-z_][A-Za-z0-9_]*", e))
        for name in sorted(names):
            reg.add(name)
        table = tuple(
            tuple(tuple(parse_poly(reg, e) for e in cell) for cell in row)
            for row in rows
        )
    else:
        raise ValueError(f"unknown ring tag {ring!r}")
    return TriangleOp(n, table)


def op_serial(op: TriangleOp) -> str:
    """Canonical one-line serialization, used for sorting and set compares."""
    ring = op_ring(op)
    ring_field = f"p{ring[1]}" if isinstance(ring, tuple) else ring
    cells = ";".join(
        ",".join(_entry_str(e) for e in cell) for row in op.table for cell in row
    )
    return f"{ring_field}|{cells}"
