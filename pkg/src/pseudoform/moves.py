"""Local moves and gluings on 3-dimensional complexes.

Every operation takes a complex, checks its precondition, and returns a
fresh complex together with a :class:`MoveRecord` describing exactly
what was done (including any newly created vertex labels), so a
sequence of records can be replayed bit-for-bit later.  Inputs are
never mutated.

g2 accounting, with ``n`` the degree of the edge involved:

========================  ==========
bistellar 1-move            +1
bistellar 2-move            -1
edge contraction            -(n-3)
edge expansion              +(n-3)
two-facets insertion        -1
two-facets contraction      +1
connected sum                0   (sum of the parts)
handle addition            +10
edge folding                +3
edge unfolding              -3
facet subdivision            0
facet unsubdivision          0
========================  ==========

Vertices created by a move default to ``max label + 1`` (and ``+2``)
so identical inputs give identical outputs; replay passes the recorded
labels back in explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .complexes import SimplicialComplex, total_g2
from .errors import MissingFaceError, MoveError
from . import surfaces
from .surfaces import MOEBIUS, Surface, cycle_cut, missing_triangle_neighborhood

BISTELLAR1 = "Bistellar1"
BISTELLAR2 = "Bistellar2"
EDGE_CONTRACT = "EdgeContract"
EDGE_EXPAND = "EdgeExpand"
TWO_FACETS_INSERT = "TwoFacetsInsert"
TWO_FACETS_CONTRACT = "TwoFacetsContract"
CONNECTED_SUM = "ConnectedSum"
HANDLE_ADD = "HandleAdd"
EDGE_FOLD = "EdgeFold"
EDGE_UNFOLD = "EdgeUnfold"
FACET_SUBDIVIDE = "FacetSubdivide"
FACET_UNSUBDIVIDE = "FacetUnsubdivide"

ALL_KINDS = (
    BISTELLAR1,
    BISTELLAR2,
    EDGE_CONTRACT,
    EDGE_EXPAND,
    TWO_FACETS_INSERT,
    TWO_FACETS_CONTRACT,
    CONNECTED_SUM,
    HANDLE_ADD,
    EDGE_FOLD,
    EDGE_UNFOLD,
    FACET_SUBDIVIDE,
    FACET_UNSUBDIVIDE,
)


@dataclass(frozen=True)
class MoveRecord:
    """What a move did: its kind, full parameters, and the g2 shift.

    ``params`` pins down the move completely, fresh labels included,
    so that ``apply_record`` reproduces the exact same complex.
    """

    kind: str
    params: tuple  # ordered (key, value) pairs
    g2_delta: int

    def get(self, key):
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def param_dict(self) -> dict:
        return dict(self.params)

    def __str__(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind} {ps} (g2 {self.g2_delta:+d})"


def _record(kind: str, delta: int, **params) -> MoveRecord:
    return MoveRecord(kind, tuple(params.items()), delta)


def _edge(edge: Iterable[int]) -> frozenset:
    e = frozenset(edge)
    if len(e) != 2:
        raise MoveError(f"expected an edge (two labels), got {sorted(e)}")
    return e


def _require_absent_labels(K: SimplicialComplex, labels: Sequence[int]) -> None:
    clash = sorted(set(labels) & K.vertices)
    if clash:
        raise MoveError(f"fresh labels already in use: {clash}", details=clash)
    if len(set(labels)) != len(labels):
        raise MoveError(f"fresh labels must be distinct, got {labels}")


# ---------------------------------------------------------------------
# bistellar moves
# ---------------------------------------------------------------------


def bistellar_two(
    K: SimplicialComplex, edge: Iterable[int]
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Bistellar 2-move: retriangulate around a degree-3 edge.

    The edge ``uv`` must have exactly three facets around it, its link
    being the boundary of a triangle ``abc`` that is not a face of the
    complex.  The three facets around ``uv`` are replaced by the two
    facets ``uabc`` and ``vabc``.  g2 drops by one.
    """
    e = _edge(edge)
    cof = K._cofacets(e)
    if not cof:
        raise MissingFaceError(f"edge {sorted(e)} is not in the complex")
    if len(cof) != 3:
        raise MoveError(
            f"edge {sorted(e)} has degree {len(cof)}, need 3", details=len(cof)
        )
    apex = frozenset(v for F in cof for v in F) - e
    if len(apex) != 3 or {F - e for F in cof} != {
        frozenset(p) for p in itertools.combinations(sorted(apex), 2)
    }:
        raise MoveError(f"link of {sorted(e)} is not a triangle boundary")
    if K.contains_face(apex):
        raise MoveError(
            f"target triangle {sorted(apex)} is already a face",
            details=tuple(sorted(apex)),
        )
    u, v = sorted(e)
    K2 = SimplicialComplex(
        (K.facets - frozenset(cof)) | {apex | {u}, apex | {v}}
    )
    rec = _record(
        BISTELLAR2, -1, edge=(u, v), triangle=tuple(sorted(apex))
    )
    return K2, rec


def bistellar_one(
    K: SimplicialComplex, triangle: Iterable[int]
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Bistellar 1-move: the inverse of the 2-move.

    ``triangle`` must lie in exactly two facets, with apexes ``u`` and
    ``v`` not yet joined by an edge.  The two facets are replaced by
    the three facets around the new edge ``uv``.  g2 grows by one.
    """
    t = frozenset(triangle)
    if len(t) != 3:
        raise MoveError(f"expected a triangle, got {sorted(t)}")
    cof = K._cofacets(t)
    if not cof:
        raise MissingFaceError(f"triangle {sorted(t)} is not in the complex")
    if len(cof) != 2:
        raise MoveError(f"triangle {sorted(t)} lies in {len(cof)} facets, need 2")
    apexes = sorted(v for F in cof for v in F - t)
    u, v = apexes
    if K.contains_face((u, v)):
        raise MoveError(
            f"apex edge {(u, v)} is already present", details=(u, v)
        )
    ring = {frozenset((u, v)) | frozenset(p) for p in itertools.combinations(sorted(t), 2)}
    K2 = SimplicialComplex((K.facets - set(cof)) | ring)
    rec = _record(BISTELLAR1, +1, triangle=tuple(sorted(t)), edge=(u, v))
    return K2, rec


# ---------------------------------------------------------------------
# edge contraction / expansion
# ---------------------------------------------------------------------


def _all_faces(L: SimplicialComplex) -> frozenset:
    out = set()
    for d in range(L.dimension + 1):
        out |= L.faces(d)
    return frozenset(out)


def contract_edge(
    K: SimplicialComplex, edge: Iterable[int], fresh: Optional[int] = None
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Contract an edge satisfying the link condition.

    The condition is that the links of the two endpoints meet exactly
    in the link of the edge; any extra common face is reported in the
    error.  Both endpoint stars are removed and the resulting boundary
    is coned over one fresh vertex.  g2 drops by ``degree - 3``.

    The record carries ``homeomorphic``: True when at least one
    endpoint has a 2-sphere link, in which case the move does not
    change the underlying space.  Contracting an edge between two
    singular vertices is allowed combinatorially but flagged False.
    """
    e = _edge(edge)
    u, v = sorted(e)
    n = K.edge_degree(e)
    common = _all_faces(K.link((u,))) & _all_faces(K.link((v,)))
    allowed = _all_faces(K.link(e))
    extra = sorted((f for f in common if f not in allowed), key=sorted)
    if extra:
        raise MoveError(
            f"link condition fails at edge ({u}, {v}): "
            f"extra common faces {[tuple(sorted(f)) for f in extra]}",
            details=tuple(tuple(sorted(f)) for f in extra),
        )
    w = K.fresh_label() if fresh is None else fresh
    _require_absent_labels(K, (w,))

    def sphere_link(x: int) -> bool:
        try:
            return Surface(K.link((x,)).facets).classify().kind == surfaces.SPHERE
        except Exception:  # noqa: BLE001
            return False

    homeo = sphere_link(u) or sphere_link(v)
    out = []
    for F in K.facets:
        if e <= F:
            continue
        if u in F or v in F:
            out.append((F - e) | {w})
        else:
            out.append(F)
    K2 = SimplicialComplex(out)
    rec = _record(
        EDGE_CONTRACT,
        -(n - 3),
        edge=(u, v),
        fresh=w,
        degree=n,
        homeomorphic=homeo,
    )
    return K2, rec


def expand_edge(
    K: SimplicialComplex,
    vertex: int,
    cycle: Sequence[int],
    u_side: int = 0,
    apexes: Optional[Sequence[int]] = None,
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Expand a vertex into an edge along a separating link cycle.

    ``cycle`` must be a vertex-simple cycle in the link of ``vertex``
    that separates it.  The star of ``vertex`` is replaced by a ring of
    ``n`` facets around the new edge, and each side of the cut link is
    coned over one of the two new apexes.  ``u_side`` picks which
    canonical side the first apex cones (the side containing the
    smallest triangle is side 0).  When one side is a Moebius strip the
    apex over it inherits the non-sphere link; the apex over the disc
    side is always non-singular.  g2 grows by ``n - 3``.

    This is the exact inverse of ``contract_edge``.
    """
    if u_side not in (0, 1):
        raise MoveError(f"u_side must be 0 or 1, got {u_side}")
    star_facets = K._cofacets(frozenset((vertex,)))
    if not star_facets:
        raise MissingFaceError(f"vertex {vertex} is not in the complex")
    S = Surface(K.link((vertex,)).facets)
    report = cycle_cut(S, cycle)
    if not report.separates:
        raise MoveError(
            f"cycle {tuple(cycle)} does not separate the link of {vertex} "
            f"({report.neighborhood})",
            details=report,
        )
    if apexes is None:
        m = K.fresh_label()
        apex_u, apex_v = m, m + 1
    else:
        apex_u, apex_v = apexes
    _require_absent_labels(K, (apex_u, apex_v))

    cyc = tuple(cycle)
    n = len(cyc)
    ring = [
        frozenset((apex_u, apex_v, cyc[i], cyc[(i + 1) % n])) for i in range(n)
    ]
    cone_u = [t | {apex_u} for t in report.sides[u_side]]
    cone_v = [t | {apex_v} for t in report.sides[1 - u_side]]
    K2 = SimplicialComplex(
        (K.facets - frozenset(star_facets)) | set(ring) | set(cone_u) | set(cone_v)
    )
    rec = _record(
        EDGE_EXPAND,
        n - 3,
        vertex=vertex,
        cycle=cyc,
        apex_u=apex_u,
        apex_v=apex_v,
        u_side=u_side,
    )
    return K2, rec


# ---------------------------------------------------------------------
# two-facets insertion / contraction
# ---------------------------------------------------------------------


def insert_two_facets(
    K: SimplicialComplex,
    vertex: int,
    triangle: Iterable[int],
    apexes: Optional[Sequence[int]] = None,
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Retriangulate a vertex star through a missing triangle.

    ``triangle`` must have its boundary in the link of ``vertex``
    without being a face of the complex.  The vertex is removed, the
    triangle inserted, and the two spheres formed by the halves of the
    old link plus the triangle are coned over two fresh apexes (apex
    ordering follows the canonical side order of the cut).  g2 drops
    by one.
    """
    t = frozenset(triangle)
    if len(t) != 3:
        raise MoveError(f"expected a triangle, got {sorted(t)}")
    if vertex in t:
        raise MoveError(f"triangle {sorted(t)} must not contain the vertex {vertex}")
    if K.contains_face(t):
        raise MoveError(
            f"triangle {sorted(t)} is already a face", details=tuple(sorted(t))
        )
    star_facets = K._cofacets(frozenset((vertex,)))
    if not star_facets:
        raise MissingFaceError(f"vertex {vertex} is not in the complex")
    report = missing_triangle_neighborhood(K, vertex, t)
    if not report.separates:
        raise MoveError(
            f"boundary of {sorted(t)} does not separate the link of {vertex}",
            details=report,
        )
    not_discs = [d for d in report.side_descriptions if d != "disc"]
    if not_discs:
        raise MoveError(
            f"cut sides of the link of {vertex} are not both discs: "
            f"{report.side_descriptions}",
            details=report,
        )
    if apexes is None:
        m = K.fresh_label()
        apex_u, apex_v = m, m + 1
    else:
        apex_u, apex_v = apexes
    _require_absent_labels(K, (apex_u, apex_v))

    new = [s | {apex_u} for s in report.sides[0]]
    new += [s | {apex_v} for s in report.sides[1]]
    new += [t | {apex_u}, t | {apex_v}]
    K2 = SimplicialComplex((K.facets - frozenset(star_facets)) | set(new))
    rec = _record(
        TWO_FACETS_INSERT,
        -1,
        vertex=vertex,
        triangle=tuple(sorted(t)),
        apex_u=apex_u,
        apex_v=apex_v,
    )
    return K2, rec


def contract_two_facets(
    K: SimplicialComplex, u: int, v: int, fresh: Optional[int] = None
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Merge two vertex stars that meet in a single triangle.

    ``u`` and ``v`` must be non-adjacent with ``star(u) * star(v)``
    exactly one triangle and its faces.  Both stars are removed
    (dropping the shared triangle) and the boundary sphere of the
    union is coned over one fresh vertex.  Equivalent to a bistellar
    1-move at the shared triangle followed by contracting the new
    edge.  g2 grows by one.
    """
    for x in (u, v):
        if x not in K.vertices:
            raise MissingFaceError(f"vertex {x} is not in the complex")
    if K.contains_face((u, v)):
        raise MoveError(f"vertices {u}, {v} are joined by an edge", details=(u, v))
    common = _all_faces(K.star((u,))) & _all_faces(K.star((v,)))
    tri = sorted((f for f in common if len(f) == 3), key=sorted)
    if len(tri) != 1:
        raise MoveError(
            f"stars of {u} and {v} meet in {len(tri)} triangles, need exactly 1",
            details=tuple(tuple(sorted(f)) for f in tri),
        )
    t = tri[0]
    expected = {t} | {frozenset(p) for p in itertools.combinations(sorted(t), 2)} | {
        frozenset((x,)) for x in t
    }
    stray = sorted((f for f in common if f not in expected), key=sorted)
    if stray:
        raise MoveError(
            f"stars of {u} and {v} meet outside one triangle: "
            f"{[tuple(sorted(f)) for f in stray]}",
            details=tuple(tuple(sorted(f)) for f in stray),
        )
    w = K.fresh_label() if fresh is None else fresh
    _require_absent_labels(K, (w,))

    ball = [F for F in K.facets if u in F or v in F]
    tri_count: dict = {}
    for F in ball:
        for sub in itertools.combinations(sorted(F), 3):
            tri_count[frozenset(sub)] = tri_count.get(frozenset(sub), 0) + 1
    boundary = [s for s, cnt in tri_count.items() if cnt == 1]
    assert all(u not in s and v not in s for s in boundary)
    K2 = SimplicialComplex(
        (K.facets - frozenset(ball)) | {s | {w} for s in boundary}
    )
    rec = _record(
        TWO_FACETS_CONTRACT,
        +1,
        vertices=(min(u, v), max(u, v)),
        triangle=tuple(sorted(t)),
        fresh=w,
    )
    return K2, rec


# ---------------------------------------------------------------------
# gluings: connected sum, handle addition, edge folding
# ---------------------------------------------------------------------


def _check_psi(sigma1: frozenset, sigma2: frozenset, psi: dict) -> dict:
    p = {int(k): int(w) for k, w in psi.items()}
    if set(p) != set(sigma1) or set(p.values()) != set(sigma2):
        raise MoveError(
            f"gluing map must biject {sorted(sigma1)} onto {sorted(sigma2)}, "
            f"got {sorted(p.items())}"
        )
    if len(set(p.values())) != len(p):
        raise MoveError(f"gluing map is not injective: {sorted(p.items())}")
    return p


def _identify_facets(
    K: SimplicialComplex, sigma1: frozenset, psi: dict
) -> SimplicialComplex:
    """Relabel psi's targets back onto sigma1, drop the merged facet."""
    back = {w: x for x, w in psi.items()}
    K2 = K.relabeled(back)
    if len(K2.facets) != len(K.facets) - 1:
        raise MoveError(
            "identification collapsed facets beyond the glued pair; "
            "the gluing map is not admissible"
        )
    return SimplicialComplex(K2.facets - {sigma1})


def _psi_param(psi: dict) -> tuple:
    return tuple(sorted(psi.items()))


def connected_sum(
    K1: SimplicialComplex,
    sigma1: Iterable[int],
    K2: SimplicialComplex,
    sigma2: Iterable[int],
    psi: dict,
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Glue two complexes along one facet each and remove it.

    Label spaces must be disjoint.  ``psi`` maps the vertices of
    ``sigma1`` (in ``K1``) bijectively onto those of ``sigma2`` (in
    ``K2``); the identified facet disappears.  g2 of the result is the
    sum of the parts.
    """
    if K1.vertices & K2.vertices:
        raise MoveError(
            f"label spaces overlap: {sorted(K1.vertices & K2.vertices)}"
        )
    union = SimplicialComplex(K1.facets | K2.facets)
    return connected_sum_in(union, sigma1, sigma2, psi)


def connected_sum_in(
    K: SimplicialComplex, sigma1: Iterable[int], sigma2: Iterable[int], psi: dict
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Connected sum of two components of one (disconnected) complex."""
    s1 = frozenset(sigma1)
    s2 = frozenset(sigma2)
    for s in (s1, s2):
        if s not in K.facets:
            raise MissingFaceError(f"{sorted(s)} is not a facet")
    p = _check_psi(s1, s2, psi)
    reach = K.graph_distances(min(s1))
    if any(x in reach for x in s2):
        raise MoveError(
            "connected sum needs the two facets in different components; "
            "use handle addition within one component"
        )
    K2 = _identify_facets(K, s1, p)
    rec = _record(
        CONNECTED_SUM,
        0,
        sigma1=tuple(sorted(s1)),
        sigma2=tuple(sorted(s2)),
        psi=_psi_param(p),
    )
    return K2, rec


def handle_addition(
    K: SimplicialComplex, sigma1: Iterable[int], sigma2: Iterable[int], psi: dict
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Glue two facets of one connected complex along an admissible map.

    ``psi`` must move every vertex to graph distance at least 3; the
    error reports a violating short path.  The identified facet is
    removed.  g2 grows by 10.
    """
    s1 = frozenset(sigma1)
    s2 = frozenset(sigma2)
    for s in (s1, s2):
        if s not in K.facets:
            raise MissingFaceError(f"{sorted(s)} is not a facet")
    if s1 == s2:
        raise MoveError("cannot glue a facet to itself")
    p = _check_psi(s1, s2, psi)
    reach = K.graph_distances(min(s1))
    if not all(x in reach for x in s2):
        raise MoveError(
            "handle addition needs both facets in one component; "
            "use connected sum across components"
        )
    for x in sorted(s1):
        path = _short_path(K, x, p[x], limit=2)
        if path is not None:
            raise MoveError(
                f"gluing map moves {x} to {p[x]} at distance {len(path) - 1} < 3 "
                f"(path {path})",
                details=tuple(path),
            )
    K2 = _identify_facets(K, s1, p)
    rec = _record(
        HANDLE_ADD,
        +10,
        sigma1=tuple(sorted(s1)),
        sigma2=tuple(sorted(s2)),
        psi=_psi_param(p),
    )
    return K2, rec


def edge_fold(
    K: SimplicialComplex, sigma1: Iterable[int], sigma2: Iterable[int], psi: dict
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Fold two facets sharing exactly one edge onto each other.

    ``psi`` fixes the shared edge ``uv`` pointwise and matches the
    remaining vertices; it is admissible when every path of length at
    most 2 between a vertex and its image passes through ``u`` or
    ``v``.  Folding a sphere along an edge makes exactly the two edge
    endpoints singular, with projective-plane links.  g2 grows by 3.
    """
    s1 = frozenset(sigma1)
    s2 = frozenset(sigma2)
    for s in (s1, s2):
        if s not in K.facets:
            raise MissingFaceError(f"{sorted(s)} is not a facet")
    shared = s1 & s2
    if len(shared) != 2:
        raise MoveError(
            f"facets must share exactly one edge, these share {sorted(shared)}"
        )
    u, v = sorted(shared)
    p = _check_psi(s1, s2, psi)
    if p.get(u) != u or p.get(v) != v:
        raise MoveError(
            f"gluing map must fix the shared edge ({u}, {v}) pointwise"
        )
    adj = K.adjacency
    for y in sorted(s1 - shared):
        z = p[y]
        if z in adj[y]:
            raise MoveError(
                f"fold pairs adjacent vertices {y} and {z}", details=(y, z)
            )
        outside = sorted((adj[y] & adj[z]) - shared)
        if outside:
            raise MoveError(
                f"2-path from {y} to {z} through {outside[0]} avoids the "
                f"folding edge ({u}, {v})",
                details=(y, outside[0], z),
            )
    # The fold glues two edges of the link circle of uv onto each
    # other.  Of the two corner matchings only one keeps that circle
    # in one piece; the other splits it into two components and
    # pinches the complex along uv.
    ring: dict = {}
    for F in K.facets:
        if shared <= F:
            a, b = sorted(F - shared)
            ring.setdefault(a, set()).add(b)
            ring.setdefault(b, set()).add(a)
    x1, x2 = sorted(s1 - shared)
    y1, y2 = sorted(s2 - shared)
    ring[x1].discard(x2)
    ring[x2].discard(x1)
    ring[y1].discard(y2)
    ring[y2].discard(y1)
    merge = {p[x1]: x1, p[x2]: x2}
    quotient: dict = {}
    for a, bs in ring.items():
        qa = merge.get(a, a)
        for b in bs:
            qb = merge.get(b, b)
            quotient.setdefault(qa, set()).add(qb)
            quotient.setdefault(qb, set()).add(qa)
    seen: set = set()
    stack = [min(quotient)]
    while stack:
        a = stack.pop()
        if a in seen:
            continue
        seen.add(a)
        stack.extend(quotient[a])
    if len(seen) != len(quotient):
        raise MoveError(
            f"this matching splits the link circle of ({u}, {v}) in two; "
            "use the reversed pairing of the free corners",
            details=(u, v),
        )
    fold_map = {y: w for y, w in p.items() if y not in shared}
    K2 = _identify_facets(K, s1, fold_map)
    rec = _record(
        EDGE_FOLD,
        +3,
        sigma1=tuple(sorted(s1)),
        sigma2=tuple(sorted(s2)),
        psi=_psi_param(p),
        edge=(u, v),
    )
    return K2, rec


def _short_path(K: SimplicialComplex, a: int, b: int, limit: int):
    """Vertex path from a to b of length <= limit, or None."""
    if a == b:
        return [a]
    frontier = {a: [a]}
    for _ in range(limit):
        nxt = {}
        for x, path in frontier.items():
            for y in K.adjacency[x]:
                if y == b:
                    return path + [y]
                if y not in nxt:
                    nxt[y] = path + [y]
        frontier = nxt
    return None


# ---------------------------------------------------------------------
# edge unfolding
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class UnfoldSite:
    """A missing tetrahedron that witnesses a previous edge fold.

    ``moebius_edge`` holds the two corners with one-sided (Moebius)
    triangle neighbourhoods in their links; ``split_pair`` the two
    corners whose links are separated by the opposite triangle.
    """

    tetra: tuple
    moebius_edge: tuple
    split_pair: tuple


def _corner_reports(K: SimplicialComplex, quad: frozenset) -> dict:
    return {
        x: missing_triangle_neighborhood(K, x, quad - {x}) for x in sorted(quad)
    }


def detect_unfold(K: SimplicialComplex) -> Optional[UnfoldSite]:
    """Find a missing tetrahedron with two Moebius and two separating
    corners, scanning in sorted order.  Returns None when there is
    none."""
    for quad in K.missing_faces(3):
        reports = _corner_reports(K, quad)
        moeb = tuple(
            x for x in sorted(quad) if reports[x].neighborhood == MOEBIUS
        )
        seps = tuple(x for x in sorted(quad) if reports[x].separates)
        if len(moeb) == 2 and len(seps) == 2:
            return UnfoldSite(
                tetra=tuple(sorted(quad)), moebius_edge=moeb, split_pair=seps
            )
    return None


def edge_unfold(
    K: SimplicialComplex,
    tetra: Iterable[int],
    fresh: Optional[Sequence[int]] = None,
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Undo an edge fold at a witnessing missing tetrahedron.

    The tetrahedron must be missing with exactly two Moebius corners
    (the folded edge, whose links are projective planes cut open by
    the unfold) and two separating corners.  Each separating corner is
    split into its two link sides, the matching side pairs receive the
    two reinstated facets, and both Moebius links become spheres.  g2
    drops by 3.
    """
    quad = frozenset(tetra)
    if len(quad) != 4:
        raise MoveError(f"expected four labels, got {sorted(quad)}")
    if quad in K.facets or quad not in set(K.missing_faces(3)):
        raise MoveError(f"{sorted(quad)} is not a missing tetrahedron")
    reports = _corner_reports(K, quad)
    moeb = [x for x in sorted(quad) if reports[x].neighborhood == MOEBIUS]
    seps = [x for x in sorted(quad) if reports[x].separates]
    if len(moeb) != 2 or len(seps) != 2:
        raise MoveError(
            f"corner pattern of {sorted(quad)} does not witness a fold: "
            f"moebius at {moeb}, separating at {seps}",
            details=(tuple(moeb), tuple(seps)),
        )
    u, v = moeb
    a, b = seps

    side_a = {F: _side_of(reports[a], F - {a}) for F in K._cofacets(frozenset((a,)))}
    side_b = {F: _side_of(reports[b], F - {b}) for F in K._cofacets(frozenset((b,)))}

    # Pair the sides through the facets containing the edge ab: sides
    # seen together belong to the same reinstated facet.
    pairing: dict = {}
    for F in K._cofacets(frozenset((a, b))):
        sa, sb = side_a[F], side_b[F]
        if pairing.setdefault(sa, sb) != sb:
            raise MoveError(
                f"link sides at {a} and {b} do not pair consistently",
                details=(a, b),
            )
    if len(pairing) == 1:
        (sa, sb) = next(iter(pairing.items()))
        pairing[1 - sa] = 1 - sb

    if fresh is None:
        m = K.fresh_label()
        a2, b2 = m, m + 1
    else:
        a2, b2 = fresh
    _require_absent_labels(K, (a2, b2))

    out = []
    for F in K.facets:
        G = F
        if a in F and side_a[F] == 1:
            G = (G - {a}) | {a2}
        if b in F and side_b[F] == pairing[1]:
            G = (G - {b}) | {b2}
        out.append(G)
    out.append(frozenset((u, v, a, b)))
    out.append(frozenset((u, v, a2, b2)))
    K2 = SimplicialComplex(out)
    if len(K2.facets) != len(K.facets) + 2:
        raise MoveError("splitting the fold corners collapsed facets")
    rec = _record(
        EDGE_UNFOLD,
        -3,
        tetra=tuple(sorted(quad)),
        moebius_edge=(u, v),
        split_pair=(a, b),
        fresh=(a2, b2),
    )
    return K2, rec


def _side_of(report, triangle: frozenset) -> int:
    for s, side in enumerate(report.sides):
        if triangle in side:
            return s
    raise MoveError(f"triangle {sorted(triangle)} is on neither cut side")


# ---------------------------------------------------------------------
# facet subdivision
# ---------------------------------------------------------------------


def facet_subdivide(
    K: SimplicialComplex, facet: Iterable[int], fresh: Optional[int] = None
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Replace a facet by the cone over its boundary from a new vertex.

    g2 is unchanged.
    """
    s = frozenset(facet)
    if s not in K.facets:
        raise MissingFaceError(f"{sorted(s)} is not a facet")
    w = K.fresh_label() if fresh is None else fresh
    _require_absent_labels(K, (w,))
    K2 = SimplicialComplex(
        (K.facets - {s}) | {(s - {x}) | {w} for x in s}
    )
    rec = _record(FACET_SUBDIVIDE, 0, facet=tuple(sorted(s)), fresh=w)
    return K2, rec


def facet_unsubdivide(
    K: SimplicialComplex, vertex: int
) -> "tuple[SimplicialComplex, MoveRecord]":
    """Remove a degree-4 vertex, reinstating its surrounding facet.

    The link of ``vertex`` must be the boundary of a tetrahedron that
    is not currently a facet (if it were, the complex would be the
    boundary of the 4-simplex and removing the vertex would not leave
    a closed complex).  g2 is unchanged.
    """
    cof = K._cofacets(frozenset((vertex,)))
    if not cof:
        raise MissingFaceError(f"vertex {vertex} is not in the complex")
    if len(cof) != 4:
        raise MoveError(
            f"vertex {vertex} has {len(cof)} facets around it, need 4",
            details=len(cof),
        )
    tetra = frozenset(x for F in cof for x in F) - {vertex}
    if len(tetra) != 4:
        raise MoveError(f"link of {vertex} is not a tetrahedron boundary")
    if tetra in K.facets:
        raise MoveError(
            f"surrounding tetrahedron {sorted(tetra)} is already a facet; "
            "unsubdividing would collapse the simplex boundary"
        )
    K2 = SimplicialComplex((K.facets - frozenset(cof)) | {tetra})
    rec = _record(
        FACET_UNSUBDIVIDE, 0, vertex=vertex, facet=tuple(sorted(tetra))
    )
    return K2, rec


# ---------------------------------------------------------------------
# record replay
# ---------------------------------------------------------------------


def apply_record(
    K: SimplicialComplex, record: MoveRecord
) -> SimplicialComplex:
    """Re-execute a recorded move on ``K`` (or on a disconnected state
    holding several components, for the gluing kinds).

    All preconditions are re-checked, recorded fresh labels are forced,
    and the re-derived record must agree with the given one; any
    mismatch (a tampered g2 delta, for example) raises
    :class:`MoveError`.
    """
    p = record.param_dict()
    kind = record.kind
    if kind == BISTELLAR1:
        K2, rec = bistellar_one(K, p["triangle"])
    elif kind == BISTELLAR2:
        K2, rec = bistellar_two(K, p["edge"])
    elif kind == EDGE_CONTRACT:
        K2, rec = contract_edge(K, p["edge"], fresh=p["fresh"])
    elif kind == EDGE_EXPAND:
        K2, rec = expand_edge(
            K,
            p["vertex"],
            p["cycle"],
            u_side=p["u_side"],
            apexes=(p["apex_u"], p["apex_v"]),
        )
    elif kind == TWO_FACETS_INSERT:
        K2, rec = insert_two_facets(
            K, p["vertex"], p["triangle"], apexes=(p["apex_u"], p["apex_v"])
        )
    elif kind == TWO_FACETS_CONTRACT:
        u, v = p["vertices"]
        K2, rec = contract_two_facets(K, u, v, fresh=p["fresh"])
    elif kind == CONNECTED_SUM:
        K2, rec = connected_sum_in(K, p["sigma1"], p["sigma2"], dict(p["psi"]))
    elif kind == HANDLE_ADD:
        K2, rec = handle_addition(K, p["sigma1"], p["sigma2"], dict(p["psi"]))
    elif kind == EDGE_FOLD:
        K2, rec = edge_fold(K, p["sigma1"], p["sigma2"], dict(p["psi"]))
    elif kind == EDGE_UNFOLD:
        K2, rec = edge_unfold(K, p["tetra"], fresh=p["fresh"])
    elif kind == FACET_SUBDIVIDE:
        K2, rec = facet_subdivide(K, p["facet"], fresh=p["fresh"])
    elif kind == FACET_UNSUBDIVIDE:
        K2, rec = facet_unsubdivide(K, p["vertex"])
    else:
        raise MoveError(f"unknown move kind {kind!r}")
    if rec.g2_delta != record.g2_delta:
        raise MoveError(
            f"recorded g2 delta {record.g2_delta} disagrees with the move's "
            f"actual delta {rec.g2_delta}",
            details=(record.g2_delta, rec.g2_delta),
        )
    realized = total_g2(K2) - total_g2(K)
    if realized != rec.g2_delta:
        raise MoveError(
            f"move changed total g2 by {realized}, expected {rec.g2_delta}"
        )
    return K2


# ---------------------------------------------------------------------
# site enumeration (used by the reducer and the generators)
# ---------------------------------------------------------------------


def bistellar_two_sites(K: SimplicialComplex) -> list:
    """Degree-3 edges whose apex triangle is missing, sorted."""
    out = []
    for e in sorted(K.faces(1), key=sorted):
        cof = K._cofacets(e)
        if len(cof) != 3:
            continue
        apex = frozenset(v for F in cof for v in F) - e
        if len(apex) == 3 and not K.contains_face(apex):
            out.append((tuple(sorted(e)), tuple(sorted(apex))))
    return out


def bistellar_one_sites(K: SimplicialComplex) -> list:
    """Triangles in two facets whose apexes are not adjacent, sorted."""
    out = []
    for t in sorted(K.faces(2), key=sorted):
        cof = K._cofacets(t)
        if len(cof) != 2:
            continue
        apexes = sorted(x for F in cof for x in F - t)
        if not K.contains_face(apexes):
            out.append((tuple(sorted(t)), tuple(apexes)))
    return out


def contractible_edges(K: SimplicialComplex) -> list:
    """Edges satisfying the link condition, as (edge, degree), sorted."""
    out = []
    for e in sorted(K.faces(1), key=sorted):
        u, v = sorted(e)
        common = _all_faces(K.link((u,))) & _all_faces(K.link((v,)))
        if common <= _all_faces(K.link(e)):
            out.append((tuple(sorted(e)), len(K._cofacets(e))))
    return out


def insertion_sites(K: SimplicialComplex) -> list:
    """Pairs (vertex, missing triangle) admitting two-facets insertion."""
    out = []
    for t in K.missing_faces(2):
        tt = tuple(sorted(t))
        for w in sorted(K.vertices):
            if w in t:
                continue
            if all(K.contains_face(frozenset(e) | {w})
                   for e in itertools.combinations(tt, 2)):
                try:
                    report = missing_triangle_neighborhood(K, w, t)
                except Exception:  # noqa: BLE001
                    continue
                if report.separates and set(report.side_descriptions) == {"disc"}:
                    out.append((w, tt))
    return sorted(out)


def contraction_pair_sites(K: SimplicialComplex) -> list:
    """Vertex pairs admitting a two-facets contraction, sorted."""
    out = []
    vs = sorted(K.vertices)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if K.contains_face((u, v)):
                continue
            common = _all_faces(K.star((u,))) & _all_faces(K.star((v,)))
            tri = [f for f in common if len(f) == 3]
            if len(tri) != 1:
                continue
            t = tri[0]
            expected = (
                {t}
                | {frozenset(pp) for pp in itertools.combinations(sorted(t), 2)}
                | {frozenset((x,)) for x in t}
            )
            if common == expected:
                out.append((u, v, tuple(sorted(t))))
    return out


def unsubdividable_vertices(K: SimplicialComplex) -> list:
    """Degree-4 vertices whose surrounding tetrahedron is missing."""
    out = []
    for w in sorted(K.vertices):
        cof = K._cofacets(frozenset((w,)))
        if len(cof) != 4:
            continue
        tetra = frozenset(x for F in cof for x in F) - {w}
        if len(tetra) == 4 and tetra not in K.facets:
            out.append((w, tuple(sorted(tetra))))
    return out
