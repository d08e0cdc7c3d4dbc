# The same PR tensor is steerable when Bob's system is a square and
# unsteerable when it is read as a tetrahedron whose middle slice is that square.
from gptlab.bipartite import chsh_value, tensor_products_equal
from gptlab.presets import axis_measurement, pr_box, square, square_tetra_pr, tetrahedron
from gptlab.steering import assemblage, has_lhs_model, theorem9_crosscheck

X, Y = axis_measurement(2, 0), axis_measurement(2, 1)
pr = pr_box()
print("CHSH value:", chsh_value(pr, X, Y, X, Y))
print("square x tetrahedron has a unique tensor product:", tensor_products_equal(square(), tetrahedron()))

for ambient in ("max", "min"):
    sc = square_tetra_pr(ambient)
    d = has_lhs_model(assemblage(sc), sc.K_B)
    print(f"{ambient}: Bob has dimension {sc.K_B.dim}, LHS model exists: {d.answer}")

rep = theorem9_crosscheck(square_tetra_pr("max"))
print("LHS and preparation noncontextuality agree:", rep.agree)
