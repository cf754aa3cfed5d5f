"""The group-like elements of the Sweedler algebra and the four
skew-primitive subspaces between them.

Group-likes solve a genuinely nonlinear system (coproduct equals the tensor
square); the library routes it through the same branch solver that powers
the classification, then the skew-primitive spaces are plain exact kernels.
"""

from posthopf import group_likes, skew_primitives, sweedler_h4
from posthopf.cli import render_element
from posthopf.hopfcore import basis_element

h4 = sweedler_h4()
names = h4.basis_names

gl = group_likes(h4)
print("group-like elements:", ", ".join(render_element(x, names) for x in gl))

print("\nskew-primitive spaces between group-likes:")
for gi in (0, 1):
    for hi in (0, 1):
        basis = skew_primitives(h4, basis_element(h4, gi), basis_element(h4, hi))
        rendered = ", ".join(render_element(b, names) for b in basis) or "0"
        print(f"  anchors ({names[gi]}, {names[hi]}): dimension {len(basis)}, span {{{rendered}}}")

print("\nthe two 2-dimensional spaces are where the classification's")
print("candidate values for x |> g and x |> v are forced to live")
