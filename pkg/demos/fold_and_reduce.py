"""Fold a sphere into a two-singular complex, then take it apart again.

Run from the repository root:

    python demos/fold_and_reduce.py
"""

from pseudoform import moves, reducer
from pseudoform.complexes import total_g2, validate_normal
from pseudoform.generators import find_admissible_fold, spine_path_sphere

# A 2-sphere with an edge of degree 8.  The long edge is what makes a
# fold possible: the two chosen facets share it, and the remaining
# corners are far apart in the edge's link circle.
S = spine_path_sphere(6)
print("start:", S.f_vector())
assert total_g2(S) == 0

site = find_admissible_fold(S)
assert site is not None
sigma1, sigma2, pairs = site
print("folding", tuple(sorted(sigma1)), "onto", tuple(sorted(sigma2)))

K, rec = moves.edge_fold(S, sigma1, sigma2, dict(pairs))
print("after fold:", K.f_vector(), "| move:", rec.kind, f"g2 {rec.g2_delta:+d}")

rep = validate_normal(K)
print(rep.summary())
assert rep.is_normal_closed
assert [cls.kind for _v, cls in rep.singular_vertices] == ["RP2", "RP2"]

# The reducer recognises the two projective-plane vertices and writes a
# construction trace: boundary 4-simplices first, then the forward moves
# that rebuild K.  Replaying the trace must reproduce K exactly.
report = reducer.reduce_complex(K)
print("reduce:", report.summary())
assert report.accepted

text = reducer.format_trace(report.trace)
print("--- trace ---")
print(text, end="")
print("-------------")

rebuilt = reducer.replay(reducer.parse_trace(text))
assert rebuilt == K
print("replay rebuilt the folded complex exactly")
