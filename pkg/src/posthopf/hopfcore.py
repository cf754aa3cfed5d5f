"""Finite-dimensional Hopf algebras presented by structure constants.

A :class:`HopfStructure` fixes a basis and stores the multiplication and
comultiplication tensors, unit and counit vectors, and the antipode matrix,
all over exact rationals.  Elements are coefficient tuples over any exact
ring that combines with Fractions (Fraction itself, prime-field elements,
polynomials), so the same bilinear machinery serves numeric, finite-field
and symbolic computations.

Conventions: ``mul[i][j][k]`` is the ``e_k`` coefficient of ``e_i e_j``;
``comul[i][j][k]`` the ``e_j (x) e_k`` coefficient of the coproduct of
``e_i``; tensor-square elements are flattened row-major, ``(j, k) -> j*n+k``;
``antipode[i][j]`` is the ``e_j`` coefficient of the antipode of ``e_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import kernel_basis, parse_rational

__all__ = [
    "HopfStructure",
    "AxiomEntry",
    "AxiomReport",
    "multiply",
    "comultiply",
    "tensor_multiply",
    "counit_of",
    "antipode_of",
    "basis_element",
    "verify_hopf_axioms",
    "group_likes",
    "skew_primitives",
    "sweedler_h4",
    "hopf_to_json_dict",
    "hopf_from_json_dict",
    "hopf_to_json",
    "hopf_from_json",
]


@dataclass(frozen=True)
class HopfStructure:
    dim: int
    basis_names: tuple[str, ...]
    mul: tuple       # mul[i][j][k]
    unit: tuple      # coefficients of 1
    comul: tuple     # comul[i][j][k]
    counit: tuple
    antipode: tuple  # antipode[i][j]

    def __post_init__(self):
        n = self.dim
        if len(self.basis_names) != n or len(self.unit) != n or len(self.counit) != n:
            raise ValueError("vector lengths do not match dim")
        for tensor in (self.mul, self.comul):
            if len(tensor) != n or any(
                len(plane) != n or any(len(row) != n for row in plane)
                for plane in tensor
            ):
                raise ValueError("tensor shape does not match dim")
        if len(self.antipode) != n or any(len(row) != n for row in self.antipode):
            raise ValueError("antipode shape does not match dim")


@dataclass(frozen=True)
class AxiomEntry:
    axiom: str
    indices: tuple[int, ...]
    residual: object


@dataclass(frozen=True)
class AxiomReport:
    """Nonzero residual components of an axiom check; empty means pass."""

    entries: tuple[AxiomEntry, ...]
    checks: int

    @property
    def passed(self) -> bool:
        return not self.entries

    def first_failure(self) -> AxiomEntry | None:
        return self.entries[0] if self.entries else None

    def axioms_checked(self) -> tuple[str, ...]:
        seen: list[str] = []
        for e in self.entries:
            if e.axiom not in seen:
                seen.append(e.axiom)
        return tuple(seen)


class _ReportBuilder:
    def __init__(self):
        self.entries: list[AxiomEntry] = []
        self.checks = 0

    def residual(self, axiom: str, indices: tuple[int, ...], value) -> None:
        self.checks += 1
        if value != 0:
            self.entries.append(AxiomEntry(axiom, indices, value))

    def residual_vector(self, axiom: str, indices: tuple[int, ...], vec) -> None:
        for comp, value in enumerate(vec):
            self.residual(axiom, indices + (comp,), value)

    def done(self) -> AxiomReport:
        return AxiomReport(tuple(self.entries), self.checks)


# -- element operations -------------------------------------------------------

def _check_len(H: HopfStructure, a) -> None:
    if len(a) != H.dim:
        raise ValueError(f"element length {len(a)} does not match dim {H.dim}")


def basis_element(H: HopfStructure, i: int) -> tuple:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(H.dim))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a):
    return tuple(c * x for x in a)


def multiply(H: HopfStructure, a, b) -> tuple:
    """Bilinear extension of the multiplication tensor."""
    _check_len(H, a)
    _check_len(H, b)
    n = H.dim
    zero = a[0] * 0
    out = [zero] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        row = H.mul[i]
        for j, bj in enumerate(b):
            if bj == 0:
                continue
            coef = ai * bj
            for k, m in enumerate(row[j]):
                if m:
                    out[k] = out[k] + coef * m
    return tuple(out)


def comultiply(H: HopfStructure, a) -> tuple:
    """Linear extension of the comultiplication tensor; returns the flattened
    tensor-square coefficient vector of length dim**2."""
    _check_len(H, a)
    n = H.dim
    zero = a[0] * 0
    out = [zero] * (n * n)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        plane = H.comul[i]
        for j in range(n):
            row = plane[j]
            for k in range(n):
                m = row[k]
                if m:
                    out[j * n + k] = out[j * n + k] + ai * m
    return tuple(out)


def tensor_multiply(H: HopfStructure, s, t) -> tuple:
    """Componentwise product in the tensor square: (a(x)b)(c(x)d) = ac(x)bd."""
    n = H.dim
    if len(s) != n * n or len(t) != n * n:
        raise ValueError("tensor-square element length must be dim**2")
    zero = s[0] * 0
    out = [zero] * (n * n)
    for ij, sij in enumerate(s):
        if sij == 0:
            continue
        i, j = divmod(ij, n)
        for pq, tpq in enumerate(t):
            if tpq == 0:
                continue
            p, q = divmod(pq, n)
            coef = sij * tpq
            left = H.mul[i][p]
            right = H.mul[j][q]
            for k in range(n):
                lk = left[k]
                if not lk:
                    continue
                for l in range(n):
                    rl = right[l]
                    if rl:
                        out[k * n + l] = out[k * n + l] + coef * (lk * rl)
    return tuple(out)


def counit_of(H: HopfStructure, a):
    _check_len(H, a)
    acc = a[0] * 0
    for ai, e in zip(a, H.counit):
        if e:
            acc = acc + ai * e
    return acc


def antipode_of(H: HopfStructure, a) -> tuple:
    _check_len(H, a)
    n = H.dim
    zero = a[0] * 0
    out = [zero] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, s in enumerate(H.antipode[i]):
            if s:
                out[j] = out[j] + ai * s
    return tuple(out)


# -- axiom verification -------------------------------------------------------

def verify_hopf_axioms(H: HopfStructure) -> AxiomReport:
    """Residuals of all Hopf axioms on basis elements: associativity, unit,
    coassociativity, counit, bialgebra compatibility, and both antipode
    identities.  All-zero residuals certify the structure exactly."""
    n = H.dim
    rb = _ReportBuilder()
    basis = [basis_element(H, i) for i in range(n)]

    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = multiply(H, multiply(H, basis[i], basis[j]), basis[k])
                right = multiply(H, basis[i], multiply(H, basis[j], basis[k]))
                rb.residual_vector("assoc", (i, j, k), vec_sub(left, right))

    for i in range(n):
        rb.residual_vector("unit_left", (i,), vec_sub(multiply(H, H.unit, basis[i]), basis[i]))
        rb.residual_vector("unit_right", (i,), vec_sub(multiply(H, basis[i], H.unit), basis[i]))

    # coassociativity on the stored tensor
    for i in range(n):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    lhs = sum(
                        H.comul[i][j][c] * H.comul[j][a][b] for j in range(n)
                    )
                    rhs = sum(
                        H.comul[i][a][j] * H.comul[j][b][c] for j in range(n)
                    )
                    rb.residual("coassoc", (i, a, b, c), lhs - rhs)

    for i in range(n):
        left = [
            sum(H.comul[i][j][k] * H.counit[j] for j in range(n)) for k in range(n)
        ]
        right = [
            sum(H.comul[i][j][k] * H.counit[k] for k in range(n)) for j in range(n)
        ]
        rb.residual_vector("counit_left", (i,), vec_sub(tuple(left), basis[i]))
        rb.residual_vector("counit_right", (i,), vec_sub(tuple(right), basis[i]))

    for i in range(n):
        for j in range(n):
            lhs = comultiply(H, multiply(H, basis[i], basis[j]))
            rhs = tensor_multiply(H, comultiply(H, basis[i]), comultiply(H, basis[j]))
            rb.residual_vector("bialgebra_mul", (i, j), vec_sub(lhs, rhs))
            rb.residual(
                "bialgebra_counit",
                (i, j),
                counit_of(H, multiply(H, basis[i], basis[j])) - H.counit[i] * H.counit[j],
            )

    unit_tensor = tuple(
        H.unit[i] * H.unit[j] for i in range(n) for j in range(n)
    )
    rb.residual_vector("unit_comul", (), vec_sub(comultiply(H, H.unit), unit_tensor))
    rb.residual("unit_counit", (), counit_of(H, H.unit) - Fraction(1))

    for i in range(n):
        left = [Fraction(0)] * n
        right = [Fraction(0)] * n
        for j in range(n):
            for k in range(n):
                c = H.comul[i][j][k]
                if not c:
                    continue
                sj = multiply(H, antipode_of(H, basis[j]), basis[k])
                js = multiply(H, basis[j], antipode_of(H, basis[k]))
                for t in range(n):
                    left[t] += c * sj[t]
                    right[t] += c * js[t]
        target = vec_scale(H.counit[i], H.unit)
        rb.residual_vector("antipode_left", (i,), vec_sub(tuple(left), target))
        rb.residual_vector("antipode_right", (i,), vec_sub(tuple(right), target))

    return rb.done()


# -- group-likes and skew-primitives ------------------------------------------

@lru_cache(maxsize=None)
def group_likes(H: HopfStructure) -> tuple[tuple, ...]:
    """All rational solutions of the group-like system (coproduct equals the
    tensor square, counit 1), obtained with the branch solver.  Raises if any
    branch is unresolved or carries a free parameter (the solution set would
    not be finite)."""
    from . import classifier  # deferred: classifier builds on this module
    from .multipoly import Poly, VarRegistry

    n = H.dim
    reg = VarRegistry()
    xs = [reg.var(f"x{i}") for i in range(n)]
    constraints = []

    eq = Poly.constant(reg, -1)
    for i in range(n):
        if H.counit[i]:
            eq = eq + xs[i] * H.counit[i]
    constraints.append(classifier.Constraint(eq, "group_like_counit", ()))

    for j in range(n):
        for k in range(n):
            lhs = Poly.zero(reg)
            for i in range(n):
                c = H.comul[i][j][k]
                if c:
                    lhs = lhs + xs[i] * c
            constraints.append(
                classifier.Constraint(lhs - xs[j] * xs[k], "group_like_comul", (j, k))
            )

    system = classifier.ConstraintSystem(reg, constraints, "group_like")
    branches, _stats = classifier.solve(system)
    points: list[tuple] = []
    for br in branches:
        if br.status == "inconsistent":
            continue
        if br.status != "resolved" or br.free_params:
            raise ValueError("group-like solution set is not finite over the rationals")
        point = tuple(br.assignments[v].constant_value() for v in range(n))
        if point not in points:
            points.append(point)
    points.sort(reverse=True)
    return tuple(points)


def skew_primitives(H: HopfStructure, g, h) -> list[tuple]:
    """Canonical basis of {c : coproduct(c) = g(x)c + c(x)h} for group-like
    g, h, read off the RREF kernel."""
    g = tuple(g)
    h = tuple(h)
    gl = group_likes(H)
    if g not in gl or h not in gl:
        raise ValueError("both anchors must be group-like elements")
    n = H.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = []
            for i in range(n):
                c = H.comul[i][j][k]
                if i == k:
                    c = c - g[j]
                if i == j:
                    c = c - h[k]
                row.append(c)
            rows.append(row)
    return [tuple(v) for v in kernel_basis(rows)]


# -- the Sweedler algebra ------------------------------------------------------

@lru_cache(maxsize=1)
def sweedler_h4() -> HopfStructure:
    """The four-dimensional Hopf algebra on basis (1, g, v, gv) with
    g*g = 1, v*v = 0, g*v = -v*g, coproduct g -> g(x)g, v -> g(x)v + v(x)1."""
    n = 4
    F0, F1 = Fraction(0), Fraction(1)

    def vec(*entries):
        return tuple(Fraction(e) for e in entries)

    mul = [[[F0] * n for _ in range(n)] for _ in range(n)]

    def set_prod(i, j, k, c):
        mul[i][j][k] = Fraction(c)

    for i in range(n):
        set_prod(0, i, i, 1)
        if i:
            set_prod(i, 0, i, 1)
    set_prod(1, 1, 0, 1)    # g g = 1
    set_prod(1, 2, 3, 1)    # g v = gv
    set_prod(1, 3, 2, 1)    # g gv = v
    set_prod(2, 1, 3, -1)   # v g = -gv
    set_prod(3, 1, 2, -1)   # gv g = -v
    # v v, v gv, gv v, gv gv are all zero

    comul = [[[F0] * n for _ in range(n)] for _ in range(n)]
    comul[0][0][0] = F1                      # 1 -> 1 (x) 1
    comul[1][1][1] = F1                      # g -> g (x) g
    comul[2][1][2] = F1                      # v -> g (x) v + v (x) 1
    comul[2][2][0] = F1
    comul[3][0][3] = F1                      # gv -> 1 (x) gv + gv (x) g
    comul[3][3][1] = F1

    antipode = (
        vec(1, 0, 0, 0),
        vec(0, 1, 0, 0),
        vec(0, 0, 0, -1),   # S(v) = -gv
        vec(0, 0, 1, 0),    # S(gv) = v
    )

    return HopfStructure(
        dim=n,
        basis_names=("1", "g", "v", "gv"),
        mul=tuple(tuple(tuple(r) for r in plane) for plane in mul),
        unit=vec(1, 0, 0, 0),
        comul=tuple(tuple(tuple(r) for r in plane) for plane in comul),
        counit=vec(1, 1, 0, 0),
        antipode=antipode,
    )


# -- JSON ----------------------------------------------------------------------

def hopf_to_json_dict(H: HopfStructure) -> dict:
    return {
        "dim": H.dim,
        "basis": list(H.basis_names),
        "mul": [[[str(c) for c in row] for row in plane] for plane in H.mul],
        "unit": [str(c) for c in H.unit],
        "comul": [[[str(c) for c in row] for row in plane] for plane in H.comul],
        "counit": [str(c) for c in H.counit],
        "antipode": [[str(c) for c in row] for row in H.antipode],
    }


def hopf_from_json_dict(data: dict) -> HopfStructure:
    try:
        n = int(data["dim"])
        basis = tuple(str(s) for s in data["basis"])
        mul = tuple(
            tuple(tuple(parse_rational(c) for c in row) for row in plane)
            for plane in data["mul"]
        )
        unit = tuple(parse_rational(c) for c in data["unit"])
        comul = tuple(
            tuple(tuple(parse_rational(c) for c in row) for row in plane)
            for plane in data["comul"]
        )
        counit = tuple(parse_rational(c) for c in data["counit"])
        antipode = tuple(tuple(parse_rational(c) for c in row) for row in data["antipode"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed Hopf structure payload: {exc}") from exc
    return HopfStructure(n, basis, mul, unit, comul, counit, antipode)


def hopf_to_json(H: HopfStructure) -> str:
    return json.dumps(hopf_to_json_dict(H), indent=2) + "\n"


def hopf_from_json(text: str) -> HopfStructure:
    return hopf_from_json_dict(json.loads(text))
