"""A tour of the move vocabulary and its g2 bookkeeping.

Every operation returns the new complex plus a record whose g2_delta
follows a fixed schedule.  This script applies each kind once and
checks the ledger line by line.

    python demos/move_ledger.py
"""

from pseudoform import moves
from pseudoform.complexes import total_g2, validate_normal
from pseudoform.generators import (
    boundary_simplex,
    cross_polytope,
    find_admissible_fold,
    find_admissible_handle,
    spine_path_sphere,
    staircase_sphere,
)


def step(label, before, result):
    K, rec = result
    assert validate_normal(K).is_normal_closed
    assert total_g2(K) - total_g2(before) == rec.g2_delta
    print(f"{label:<18} g2 {rec.g2_delta:+3d} -> {K.f_vector()}")
    return K


CP = cross_polytope()
print("start: cross polytope,", CP.f_vector())

# Bistellar 1-move at a triangle, then the 2-move at the edge it
# created.  The record carries the edge, so the pair cancels exactly.
tri, _ = moves.bistellar_one_sites(CP)[0]
K1, rec = moves.bistellar_one(CP, tri)
step("Bistellar1", CP, (K1, rec))
K2 = step("Bistellar2", K1, moves.bistellar_two(K1, rec.get("edge")))
assert K2 == CP

# Expand a vertex along a cycle in its link, contract the new edge
# back.  A triangle cycle keeps g2 flat; longer cycles raise it.
v = min(CP.vertices)
cycle = tuple(sorted(next(iter(CP.link((v,)).facets))))
K3, rec = moves.expand_edge(CP, v, cycle)
step("EdgeExpand", CP, (K3, rec))
u = rec.get("apex_u")
w = rec.get("apex_v")
K4 = step("EdgeContract", K3, moves.contract_edge(K3, (u, w), fresh=v))
assert K4 == CP

# Two-facets moves trade a vertex star for a missing triangle.  The
# cross polytope has no such site, so make one with a 1-move first.
host, _ = moves.bistellar_one(CP, tri)
w, t = moves.insertion_sites(host)[0]
K5, rec = moves.insert_two_facets(host, w, t)
step("TwoFacetsInsert", host, (K5, rec))
cu, cv = rec.get("apex_u"), rec.get("apex_v")
assert (cu, cv, t) in moves.contraction_pair_sites(K5)
K6 = step("TwoFacetsContract", K5, moves.contract_two_facets(K5, cu, cv, fresh=w))
assert K6 == host

# Facet subdivision is g2-neutral in both directions.
B = boundary_simplex()
F = next(iter(B.facets))
K7, rec = moves.facet_subdivide(B, F, fresh=B.fresh_label())
step("FacetSubdivide", B, (K7, rec))
apex = rec.get("fresh")
assert apex in [v for v, _F in moves.unsubdividable_vertices(K7)]
K8 = step("FacetUnsubdivide", K7, moves.facet_unsubdivide(K7, apex))
assert K8 == B

# Gluing moves.  A connected sum of two boundary 4-simplices is the
# smallest stacked sphere; a handle needs a long chain of them; a
# fold needs one edge of degree 8.
A = boundary_simplex()
Bm = boundary_simplex().relabeled({i: i + 10 for i in range(5)})
s1 = next(iter(A.facets))
s2 = next(iter(Bm.facets))
psi = dict(zip(sorted(s1), sorted(s2)))
step("ConnectedSum", A, moves.connected_sum(A, s1, Bm, s2, psi))

C9 = staircase_sphere(9)
s1, s2, pairs = find_admissible_handle(C9)
step("HandleAdd", C9, moves.handle_addition(C9, s1, s2, dict(pairs)))

S = spine_path_sphere(6)
s1, s2, pairs = find_admissible_fold(S)
folded, rec = moves.edge_fold(S, s1, s2, dict(pairs))
step("EdgeFold", S, (folded, rec))
site = moves.detect_unfold(folded)
K9 = step("EdgeUnfold", folded, moves.edge_unfold(folded, site.tetra))
assert total_g2(K9) == 0

print("ledger verified for all", len(moves.ALL_KINDS), "kinds")
