import random
from fractions import Fraction

import pytest

from posthopf.classifier import (
    Constraint,
    ConstraintSystem,
    Family,
    SolverVerificationError,
    _cached_system,
    build_unknown_op,
    builtin_families,
    canonical_table_key,
    classification_to_json_dict,
    classify,
    generate_constraints,
    match_families,
    solve,
    specializes,
    subsume,
)
from posthopf.hopfcore import multiply, sweedler_h4
from posthopf.multipoly import Poly, VarRegistry, parse_poly
from posthopf.triangleop import TriangleOp, check_unitality, family_table

ONE, G, V, GV = 0, 1, 2, 3


@pytest.fixture(scope="module")
def h4():
    return sweedler_h4()


# -- unknown-table construction ------------------------------------------------

def test_build_unknown_op_counts(h4):
    _, reg32 = build_unknown_op(h4, "generator32")
    assert len(reg32) == 32
    _, reg64 = build_unknown_op(h4, "full64")
    assert len(reg64) == 64
    with pytest.raises(ValueError):
        build_unknown_op(h4, "full128")


def test_generator32_completed_entry_is_quadratic(h4):
    op, reg = build_unknown_op(h4, "generator32")
    cell = op.table[ONE][ONE]  # 1 |> 1, completed via (1|>g)(1|>g)
    row0 = {reg.id_of(f"c_0_{j}_{k}") for j in (1, 2) for k in range(4)}
    for comp in cell:
        assert comp.total_degree() == 2
        assert set(comp.support) <= row0


# -- constraint generation -------------------------------------------------------

def test_unit_row_square_identity_matches_derivation(h4):
    # expanding (1|>g)(1|>g) - 1 componentwise gives exactly
    # [t1^2 + t2^2 - 1, 2 t1 t2, 2 t1 t3, 2 t1 t4]
    op, reg = build_unknown_op(h4, "generator32")
    square = multiply(h4, op.table[ONE][G], op.table[ONE][G])
    expected = [
        "c_0_1_0^2 + c_0_1_1^2 - 1",
        "2*c_0_1_0*c_0_1_1",
        "2*c_0_1_0*c_0_1_2",
        "2*c_0_1_0*c_0_1_3",
    ]
    diff = [square[0] - 1, square[1], square[2], square[3]]
    assert [str(p) for p in diff] == expected


def test_relaxed_system_contains_unit_row_facts(h4):
    _, reg, system = _cached_system("relaxed", "generator32")
    keys = {c.poly.canon_key() for c in system.equations}
    for text in (
        "c_0_1_0^2 - c_0_1_0",   # t1^2 = t1 from coproduct compatibility
        "c_0_1_0*c_0_1_1",       # t1 t2 = 0
        "c_0_1_0*c_0_1_2",       # t1 t3 = 0
        "c_0_1_0*c_0_1_3",       # t1 t4 = 0
    ):
        assert parse_poly(reg, text).canon_key() in keys, text


def test_weak_mode_adds_unit_row_linear_equations(h4):
    _, reg, weak = _cached_system("weak", "generator32")
    keys = {c.poly.canon_key() for c in weak.equations}
    assert parse_poly(reg, "c_0_1_1 - 1").canon_key() in keys
    assert weak.mode == "weak"
    _, _, relaxed = _cached_system("relaxed", "generator32")
    assert len(weak.equations) > len(relaxed.equations)


def test_zero_table_is_inconsistent(h4):
    op, reg = build_unknown_op(h4, "generator32")
    zero_reg = VarRegistry()
    zero = Poly.zero(zero_reg)
    zero_op = TriangleOp(4, tuple(tuple((zero,) * 4 for _ in range(4)) for _ in range(4)))
    system = generate_constraints(h4, zero_op, "relaxed")
    constants = [c for c in system.equations if c.poly.is_constant()]
    assert constants and any(c.poly.constant_value() == -1 for c in constants)
    branches, _ = solve(system)
    assert all(b.status == "inconsistent" for b in branches)


# -- the branch solver -----------------------------------------------------------

def toy_system(equations, reg):
    return ConstraintSystem(
        reg, [Constraint(p, "toy", (i,)) for i, p in enumerate(equations)], "toy"
    )


def test_solve_toy_product_system():
    reg = VarRegistry()
    x, y = reg.var("x"), reg.var("y")
    branches, _ = solve(toy_system([x * y, x * x - 1], reg))
    resolved = [b for b in branches if b.status == "resolved"]
    assert len(resolved) == 2
    points = sorted(
        (b.assignments[0].constant_value(), b.assignments[1].constant_value())
        for b in resolved
    )
    assert points == [(Fraction(-1), Fraction(0)), (Fraction(1), Fraction(0))]
    assert all(not b.free_params for b in resolved)


def test_solve_irrational_quadratic_unresolved():
    reg = VarRegistry()
    x = reg.var("x")
    branches, _ = solve(toy_system([x * x + 1], reg))
    assert [b.status for b in branches] == ["unresolved"]
    assert branches[0].note == "no applicable elimination or split"


def test_solve_respects_branch_limit():
    reg = VarRegistry()
    x, y = reg.var("x"), reg.var("y")
    branches, _ = solve(toy_system([x * x - 1, y * y - 1], reg), max_branches=2)
    assert any(b.status == "unresolved" and b.note == "limit exceeded" for b in branches)


def test_solver_verification_is_a_hard_error(monkeypatch):
    # corrupt the original system after preparation to force a mismatch
    reg = VarRegistry()
    x = reg.var("x")
    system = toy_system([x - 1], reg)
    import posthopf.classifier as mod

    original = mod._prepare

    def tampered(eqs):
        out = original(eqs)
        return [p + 1 if p.linear_candidates() else p for p in out]

    monkeypatch.setattr(mod, "_prepare", tampered)
    with pytest.raises(SolverVerificationError):
        solve(system)


# -- the full classification -------------------------------------------------------

def test_relaxed_classification_completes(relaxed_result):
    assert all(b.status != "unresolved" for b in relaxed_result.branches)
    assert relaxed_result.stats["unresolved"] == 0
    assert len(relaxed_result.maximal_families) == 6


def test_relaxed_classification_bijection(relaxed_result):
    match = match_families(relaxed_result.maximal_families, builtin_families())
    assert match.perfect
    assert sorted(label for _, label in match.pairs) == ["i", "ii", "iii", "iv", "v", "vi"]


def test_weak_classification(weak_result):
    assert all(b.status != "unresolved" for b in weak_result.branches)
    h4 = sweedler_h4()
    known = {
        label: op
        for label, op in builtin_families().items()
        if check_unitality(h4, op).passed
    }
    assert sorted(known) == ["i", "ii", "iii"]
    match = match_families(weak_result.maximal_families, known)
    assert match.perfect
    assert len(weak_result.maximal_families) == 3


def test_parameterization_equivalence(relaxed_result, full64_result):
    keys32 = sorted(canonical_table_key(f.table) for f in relaxed_result.maximal_families)
    keys64 = sorted(canonical_table_key(f.table) for f in full64_result.maximal_families)
    assert keys32 == keys64
    cross = match_families(
        full64_result.maximal_families,
        {str(i): f.table for i, f in enumerate(relaxed_result.maximal_families)},
    )
    assert cross.perfect


def test_proof_step_regression(relaxed_result):
    # every resolved branch satisfies 1|>1 = 1 (despite the source's
    # "1|>1 = x" line, which follows as 1 from counit absorption) and
    # g|>g in {1, g}
    reg_one = (1, 0, 0, 0)
    reg_g = (0, 1, 0, 0)
    for fam in relaxed_result.families:
        cell_11 = tuple(fam.table.table[ONE][ONE])
        assert all(c == t for c, t in zip(cell_11, reg_one))
        cell_gg = tuple(fam.table.table[G][G])
        assert all(c == t for c, t in zip(cell_gg, reg_one)) or all(
            c == t for c, t in zip(cell_gg, reg_g)
        )


def test_branch_soundness_independent_numeric(relaxed_result):
    # numeric spot-check at random parameter values, independent of the
    # solver's symbolic re-verification
    _, _, system = _cached_system("relaxed", "generator32")
    rng = random.Random(99)
    for branch in relaxed_result.branches:
        if branch.status != "resolved":
            continue
        for _ in range(3):
            pvals = {
                branch.registry.id_of(name): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                for name in branch.free_params
            }
            numeric = {v: poly.evaluate(pvals) for v, poly in branch.assignments.items()}
            for c in system.equations:
                assert c.poly.evaluate(numeric) == 0


def test_branch_assignments_back_substituted(relaxed_result):
    for branch in relaxed_result.branches:
        if branch.status != "resolved":
            continue
        param_ids = {branch.registry.id_of(n) for n in branch.free_params}
        for poly in branch.assignments.values():
            assert set(poly.support) <= param_ids


def test_determinism_of_serialized_results(relaxed_result):
    import json

    fresh = classify("relaxed", "generator32")
    assert json.dumps(classification_to_json_dict(fresh)) == json.dumps(
        classification_to_json_dict(relaxed_result)
    )


# -- subsumption and matching -------------------------------------------------------

def fam_of(op):
    return Family(branch=None, table=op, free_params=())


def test_specializes_examples():
    assert specializes(family_table("i"), family_table("i", Fraction(3)))
    assert not specializes(family_table("i", Fraction(3)), family_table("i"))
    assert not specializes(family_table("i"), family_table("iii"))
    assert not specializes(family_table("iii"), family_table("i"))
    assert not specializes(family_table("iv"), family_table("v"))
    assert not specializes(family_table("v"), family_table("iv"))


def test_subsume_drops_specializations():
    fams = [fam_of(family_table("i")), fam_of(family_table("i", Fraction(3)))]
    kept = subsume(fams)
    assert len(kept) == 1
    assert canonical_table_key(kept[0].table) == canonical_table_key(family_table("i"))

    both = subsume([fam_of(family_table("i")), fam_of(family_table("iii"))])
    assert len(both) == 2
    pair = subsume([fam_of(family_table("iv")), fam_of(family_table("v"))])
    assert len(pair) == 2


def test_subsume_keeps_one_of_mutual_duplicates():
    kept = subsume([fam_of(family_table("iii")), fam_of(family_table("iii"))])
    assert len(kept) == 1


def test_canonical_key_normalizes_parameter_sign():
    op = family_table("ii")
    reg = op.table[0][0][0].registry
    vid = reg.id_of("a")
    minus_a = -reg.var_by_id(vid)
    flipped = TriangleOp(
        4,
        tuple(
            tuple(tuple(e.substitute(vid, minus_a) for e in cell) for cell in row)
            for row in op.table
        ),
    )
    assert canonical_table_key(flipped) == canonical_table_key(op)


def test_match_families_reports_unmatched():
    report = match_families([], builtin_families())
    assert report.unmatched_known == list(builtin_families())
    assert not report.pairs

    only_iii = match_families([fam_of(family_table("iii"))], builtin_families())
    assert only_iii.pairs == [(0, "iii")]
    assert sorted(only_iii.unmatched_known) == ["i", "ii", "iv", "v", "vi"]
