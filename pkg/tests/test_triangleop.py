import hashlib
import json
from fractions import Fraction

import pytest

from posthopf.hopfcore import basis_element, sweedler_h4
from posthopf.multipoly import Poly
from posthopf.triangleop import (
    FAMILY_LABELS,
    GeneratorTable,
    TriangleOp,
    apply,
    check_coalgebra_hom,
    check_counit_absorption,
    check_distributivity,
    check_unitality,
    check_weighted_assoc,
    extend_generators,
    family_data_bytes,
    family_table,
    generator_columns,
    op_from_json_dict,
    op_ring,
    op_to_json_dict,
    op_serial,
)

ONE, G, V, GV = 0, 1, 2, 3

FAMILIES_SHA256 = "24bba423b63659d13e4f0738dcbc840584a35dd11191ebd40cf415876e76d85d"


@pytest.fixture(scope="module")
def h4():
    return sweedler_h4()


def rational_op(table):
    return TriangleOp(
        4, tuple(tuple(tuple(Fraction(x) for x in cell) for cell in row) for row in table)
    )


def zeros():
    return (0, 0, 0, 0)


def unit_vec(i):
    return tuple(1 if k == i else 0 for k in range(4))


def test_family_data_frozen():
    assert hashlib.sha256(family_data_bytes()).hexdigest() == FAMILIES_SHA256


def test_family_entries():
    fam1 = family_table("i")
    a = fam1.table[V][V][V]
    assert isinstance(a, Poly) and str(a) == "a"
    assert str(fam1.table[G][V][V]) == "-1"
    assert str(fam1.table[GV][GV][GV]) == "a"  # gv |> gv = a*gv

    fam2 = family_table("ii")
    assert str(fam2.table[V][G][ONE]) == "a" and str(fam2.table[V][G][G]) == "-a"

    fam5 = family_table("v")
    assert fam5.table[G][G] == tuple(Poly.constant(fam5.table[0][0][0].registry, c) for c in (1, 0, 0, 0))


def test_family_param_handling():
    fam = family_table("i", Fraction(3))
    assert op_ring(fam) == "rational"
    assert fam.table[V][V] == (0, 0, 3, 0)
    with pytest.raises(ValueError):
        family_table("iii", Fraction(1))
    with pytest.raises(ValueError):
        family_table("vii")


def test_apply_examples(h4):
    fam1 = family_table("i")
    g, v = basis_element(h4, G), basis_element(h4, V)
    reg = fam1.table[0][0][0].registry
    out = apply(h4, fam1, g, v)
    assert out == (0, 0, Poly.constant(reg, -1), 0)
    fam3 = family_table("iii")
    assert all(x == 0 for x in apply(h4, fam3, v, v))
    zero = (Fraction(0),) * 4
    assert all(x == 0 for x in apply(h4, fam1, zero, v))


def trivial_op(h4):
    """x |> y := eps(x) eps(y) 1."""
    table = tuple(
        tuple(
            tuple(h4.counit[i] * h4.counit[j] * u for u in h4.unit)
            for j in range(4)
        )
        for i in range(4)
    )
    return TriangleOp(4, table)


def eps_action_op(h4):
    """x |> y := eps(x) y."""
    table = tuple(
        tuple(
            tuple(h4.counit[i] * x for x in basis_element(h4, j))
            for j in range(4)
        )
        for i in range(4)
    )
    return TriangleOp(4, table)


def test_coalgebra_hom_examples(h4):
    assert check_coalgebra_hom(h4, family_table("vi")).passed
    assert check_coalgebra_hom(h4, trivial_op(h4)).passed

    # 1 |> g := -1 on the identity action: the coproduct of -1 is -(1x1)
    # but pairing legs gives (+1)x(+1)
    bad = [[list(basis_element(h4, j)) for j in range(4)] for _ in range(4)]
    bad[ONE][G] = [Fraction(-1), Fraction(0), Fraction(0), Fraction(0)]
    bad_op = rational_op(bad)
    report = check_coalgebra_hom(h4, bad_op)
    assert not report.passed
    assert any(e.axiom == "coalgebra_delta" and e.indices[:2] == (ONE, G) for e in report.entries)


def test_distributivity_examples(h4):
    assert check_distributivity(h4, family_table("ii")).passed
    fam1 = family_table("i")
    report = check_distributivity(h4, fam1)
    assert report.passed  # includes the (g, g, g) component
    assert check_distributivity(h4, eps_action_op(h4)).passed


def test_weighted_assoc_examples(h4):
    assert check_weighted_assoc(h4, family_table("i")).passed
    assert check_weighted_assoc(h4, trivial_op(h4)).passed

    # obstruction: 1|>g = 1 with g|>g = g cannot satisfy the weighted
    # associativity: g |> (1|>g) = g|>1 = 1 while (g(g|>1)) |> g = g|>g = g
    gt = GeneratorTable(
        (
            (unit_vec(ONE), zeros()),
            (unit_vec(G), zeros()),
            (zeros(), zeros()),
            (zeros(), zeros()),
        )
    )
    op = extend_generators(sweedler_h4(), gt)
    report = check_weighted_assoc(h4, op)
    assert not report.passed
    assert any(e.indices[:3] == (G, ONE, G) for e in report.entries)


def test_unitality_split(h4):
    assert check_unitality(h4, family_table("ii")).passed
    rep4 = check_unitality(h4, family_table("iv"))
    assert not rep4.passed and rep4.first_failure().indices[0] == V
    rep6 = check_unitality(h4, family_table("vi"))
    assert not rep6.passed and rep6.first_failure().indices[0] == G


def test_counit_absorption_examples(h4):
    fam1 = family_table("i")
    v = basis_element(h4, V)
    assert all(x == 0 for x in apply(h4, fam1, v, basis_element(h4, ONE)))
    fam5 = family_table("v")
    g1 = apply(h4, fam5, basis_element(h4, G), basis_element(h4, ONE))
    reg = fam5.table[0][0][0].registry
    assert g1 == tuple(Poly.constant(reg, c) for c in (1, 0, 0, 0))
    for label in FAMILY_LABELS:
        assert check_counit_absorption(h4, family_table(label)).passed


def test_all_families_pass_relaxed_suite_symbolically(h4):
    weak_unital = []
    for label in FAMILY_LABELS:
        op = family_table(label)
        for check in (
            check_coalgebra_hom,
            check_distributivity,
            check_weighted_assoc,
            check_counit_absorption,
        ):
            report = check(h4, op)
            assert report.passed, (label, check.__name__, report.first_failure())
        if check_unitality(h4, op).passed:
            weak_unital.append(label)
    assert weak_unital == ["i", "ii", "iii"]


def test_extend_generators_reproduces_families(h4):
    for label in FAMILY_LABELS:
        op = family_table(label)
        rebuilt = extend_generators(h4, generator_columns(op))
        assert rebuilt.table == op.table, label


def test_extend_generators_examples(h4):
    # identity action on generators for rows 1 and g, zero rows v and gv:
    # column 1 must come out as (1, 1, 0, 0) via (x1|>g)(x2|>g)
    gt = GeneratorTable(
        (
            (unit_vec(G), unit_vec(V)),
            (unit_vec(G), unit_vec(V)),
            (zeros(), zeros()),
            (zeros(), zeros()),
        )
    )
    op = extend_generators(h4, gt)
    assert [op.table[i][ONE] for i in range(4)] == [
        unit_vec(ONE),
        unit_vec(ONE),
        zeros(),
        zeros(),
    ]

    all_zero = GeneratorTable(((zeros(), zeros()),) * 4)
    op0 = extend_generators(h4, all_zero)
    for i in range(4):
        assert op0.table[i][ONE] == zeros()
        assert op0.table[i][GV] == zeros()


def test_json_roundtrip_rational(h4):
    op = family_table("i", Fraction(2, 3))
    data = op_to_json_dict(op)
    assert data["ring"] == "rational"
    again = op_from_json_dict(json.loads(json.dumps(data)))
    assert again.table == op.table


def test_json_roundtrip_poly():
    op = family_table("ii")
    data = op_to_json_dict(op)
    assert data["ring"] == "poly"
    again = op_from_json_dict(data)
    assert op_serial(again) == op_serial(op)
    assert op_to_json_dict(again) == data


def test_json_roundtrip_prime():
    from posthopf.exactmath import FpElement

    table = tuple(
        tuple(tuple(FpElement(i + j + k, 5) for k in range(4)) for j in range(4))
        for i in range(4)
    )
    op = TriangleOp(4, table)
    data = op_to_json_dict(op)
    assert data["ring"] == {"prime": 5}
    again = op_from_json_dict(data)
    assert again.table == op.table


def test_bad_ring_tag():
    with pytest.raises(ValueError):
        op_from_json_dict({"dim": 4, "ring": "float", "table": []})
