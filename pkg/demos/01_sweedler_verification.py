"""Build the Sweedler algebra from structure constants and verify every
Hopf axiom with exact residuals, then watch a deliberately corrupted
multiplication table fail."""

from fractions import Fraction

from posthopf import sweedler_h4, verify_hopf_axioms
from posthopf.cli import render_element
from posthopf.hopfcore import (
    HopfStructure,
    basis_element,
    comultiply,
    multiply,
)

h4 = sweedler_h4()
names = h4.basis_names
print("basis:", ", ".join(names))

report = verify_hopf_axioms(h4)
print(f"axiom residuals checked: {report.checks}; all zero: {report.passed}")

one, g, v, gv = (basis_element(h4, i) for i in range(4))
show = lambda x: render_element(x, names)
print("\nrelations, computed from the multiplication tensor:")
print("  g*g  =", show(multiply(h4, g, g)))
print("  v*v  =", show(multiply(h4, v, v)))
print("  v*g  =", show(multiply(h4, v, g)), " (anticommutes with g*v)")


def show_tensor(t):
    pieces = []
    for idx, c in enumerate(t):
        if c:
            i, j = divmod(idx, 4)
            mag = "" if c == 1 else f"{c}*"
            pieces.append(f"{mag}{names[i]}(x){names[j]}")
    return " + ".join(pieces) or "0"


print("\ncoproducts:")
print("  comul(v)  =", show_tensor(comultiply(h4, v)))
print("  comul(gv) =", show_tensor(comultiply(h4, gv)))

# corrupt one structure constant: g*g := g instead of 1
mul = [[[c for c in row] for row in plane] for plane in h4.mul]
mul[1][1] = [Fraction(0), Fraction(1), Fraction(0), Fraction(0)]
broken = HopfStructure(
    dim=4,
    basis_names=h4.basis_names,
    mul=tuple(tuple(tuple(r) for r in plane) for plane in mul),
    unit=h4.unit,
    comul=h4.comul,
    counit=h4.counit,
    antipode=h4.antipode,
)
bad = verify_hopf_axioms(broken)
first = bad.first_failure()
print(f"\nafter setting g*g := g, {len(bad.entries)} residuals are nonzero")
print(f"first failure: {first.axiom} at indices {first.indices}, residual {first.residual}")
