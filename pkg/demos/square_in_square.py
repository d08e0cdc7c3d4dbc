# Diamond states measured with the square's effects: a classical model exists,
# yet two of the allowed measurements have no joint measurement.
from gptlab.compatibility import e_compatible
from gptlab.contextuality import simplex_embeddable, verify_embedding
from gptlab.gpt import dual_state_space
from gptlab.presets import square_in_square
from gptlab.rational import fmt_vec

T = square_in_square()
print("states:", [fmt_vec(v) for v in T.K.vertices])
print("dual state space vertices:", [fmt_vec(v) for v in dual_state_space(T.E).vertices])

emb = simplex_embeddable(T)
print("simplex embeddable:", emb.answer, "| certificate checks:", verify_embedding(T, emb.certificate))
for e, p in zip(emb.certificate.effects, emb.certificate.points):
    print(f"  effect {fmt_vec(e.linear)} . x + {fmt_vec([e.constant])[0]} -> point {fmt_vec(p)}")

comp = e_compatible(T.M, T.E)
print("axis measurements jointly measurable inside E:", comp.answer)
print("Farkas witness verifies:", comp.farkas.verify())
