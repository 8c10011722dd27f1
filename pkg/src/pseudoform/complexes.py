"""Pure simplicial complexes stored as sets of facets.

The only stored data is the set of maximal faces (facets); the face
lattice, f-vector, links and stars are derived on demand and memoised
per instance.  Complexes are immutable values: operations that "change"
a complex return a new one, so instances can be shared freely.  The
memo dictionaries are filled lazily; concurrent readers may at worst
recompute an entry, never see a wrong one.

The main objects of interest are 3-dimensional complexes in which every
triangle lies in exactly two facets and all links are connected (normal
pseudomanifolds).  Lower-dimensional complexes appear as links: the
link of a vertex is a 2-complex, the link of an edge a graph, and so
on.  ``validate_normal`` classifies every vertex link as a surface and
reports the vertices whose link is not a 2-sphere (singular vertices).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Optional

from .errors import (
    DimensionError,
    IsomorphismInconclusive,
    MalformedFacetError,
    MissingFaceError,
)
from . import surfaces

Face = frozenset
"""A face is a frozenset of vertex labels."""


def clean_face(vertices: Iterable[int]) -> Face:
    """Validate and freeze one face given as an iterable of labels.

    Labels must be distinct non-negative integers; anything else raises
    :class:`MalformedFacetError`.
    """
    vs = tuple(vertices)
    for v in vs:
        if not isinstance(v, int) or v < 0:
            raise MalformedFacetError(
                f"vertex labels must be non-negative integers, got {v!r}"
            )
    f = frozenset(vs)
    if len(f) != len(vs):
        raise MalformedFacetError(f"repeated vertex label in face {vs!r}")
    return f


@dataclass(frozen=True)
class FVector:
    """Face counts of a 3-complex plus the derived h- and g-numbers.

    ``h`` is the length-5 image of (1, f0, f1, f2, f3) under the usual
    binomial transform for dimension 3, ``g2 = h2 - h1`` and
    ``g3 = h3 - h2``.  In closed terms ``g2 = f1 - 4*f0 + 10``.
    """

    f0: int
    f1: int
    f2: int
    f3: int
    h: tuple
    g2: int
    g3: int

    @classmethod
    def from_counts(cls, f0: int, f1: int, f2: int, f3: int) -> "FVector":
        fm = (1, f0, f1, f2, f3)  # f_{-1} .. f_3
        h = tuple(
            sum((-1) ** (k - i) * comb(4 - i, k - i) * fm[i] for i in range(k + 1))
            for k in range(5)
        )
        return cls(f0, f1, f2, f3, h, h[2] - h[1], h[3] - h[2])

    def as_tuple(self) -> tuple:
        return (self.f0, self.f1, self.f2, self.f3)

    def __str__(self) -> str:
        body = ",".join(str(n) for n in self.as_tuple())
        return f"f=({body}) g2={self.g2} g3={self.g3}"


class SimplicialComplex:
    """An immutable pure simplicial complex, any dimension from 0 to 3.

    Parameters
    ----------
    facets:
        Iterable of faces (iterables of distinct non-negative integer
        labels).  All facets must have the same number of vertices;
        mixed sizes raise :class:`DimensionError`.  An empty iterable
        yields the empty complex (dimension -1), which occurs naturally
        as the link of a facet.
    """

    def __init__(self, facets: Iterable[Iterable[int]]):
        cleaned = frozenset(clean_face(f) for f in facets)
        sizes = {len(f) for f in cleaned}
        if len(sizes) > 1:
            raise DimensionError(
                f"facets of mixed sizes {sorted(sizes)}: complexes here are pure"
            )
        self.facets: frozenset = cleaned
        self._faces_memo: dict = {}
        self._link_memo: dict = {}
        self._cache: dict = {}

    @classmethod
    def from_facets(cls, quadruples: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build a 3-dimensional complex from vertex-label quadruples.

        Every row must contain exactly four distinct labels.  This is
        the standard entry point for the objects this package studies.
        """
        rows = [clean_face(q) for q in quadruples]
        for row in rows:
            if len(row) != 4:
                raise MalformedFacetError(
                    f"expected a quadruple of distinct labels, got {sorted(row)}"
                )
        return cls(rows)

    # -- basic identity ------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return (
            f"SimplicialComplex(dim={self.dimension}, "
            f"{len(self.vertices)} vertices, {len(self.facets)} facets)"
        )

    @property
    def dimension(self) -> int:
        """Dimension of the facets; -1 for the empty complex."""
        for f in self.facets:
            return len(f) - 1
        return -1

    @property
    def vertices(self) -> frozenset:
        vs = self._cache.get("vertices")
        if vs is None:
            vs = frozenset(v for f in self.facets for v in f)
            self._cache["vertices"] = vs
        return vs

    @property
    def max_label(self) -> int:
        """Largest vertex label in use; -1 for the empty complex."""
        m = self._cache.get("max_label")
        if m is None:
            m = max(self.vertices, default=-1)
            self._cache["max_label"] = m
        return m

    def fresh_label(self) -> int:
        """The deterministic fresh label: one past the largest in use."""
        return self.max_label + 1

    # -- face lattice --------------------------------------------------

    def faces(self, dim: int) -> frozenset:
        """All faces of the given dimension, as frozensets."""
        if dim < 0 or dim > self.dimension:
            return frozenset()
        got = self._faces_memo.get(dim)
        if got is None:
            if dim == self.dimension:
                got = self.facets
            else:
                got = frozenset(
                    frozenset(c)
                    for f in self.facets
                    for c in itertools.combinations(f, dim + 1)
                )
            self._faces_memo[dim] = got
        return got

    @property
    def edges(self) -> frozenset:
        return self.faces(1)

    @property
    def triangles(self) -> frozenset:
        return self.faces(2)

    def contains_face(self, face: Iterable[int]) -> bool:
        f = frozenset(face)
        if not f:
            return bool(self.facets)
        by_vertex = self._facets_by_vertex()
        v = next(iter(f))
        return any(f <= F for F in by_vertex.get(v, ()))

    def _facets_by_vertex(self) -> dict:
        got = self._cache.get("facets_by_vertex")
        if got is None:
            got = {}
            for F in self.facets:
                for v in F:
                    got.setdefault(v, []).append(F)
            self._cache["facets_by_vertex"] = got
        return got

    # -- star / link ---------------------------------------------------

    def star(self, face: Iterable[int]) -> "SimplicialComplex":
        """Subcomplex generated by all facets containing ``face``."""
        f = frozenset(face)
        cof = [F for F in self._cofacets(f)]
        if not cof:
            raise MissingFaceError(f"face {sorted(f)} is not in the complex")
        return SimplicialComplex(cof)

    def link(self, face: Iterable[int]) -> "SimplicialComplex":
        """Link of ``face``: a complex of dimension ``dim - |face|``.

        The link of a vertex in a 3-complex is a 2-complex, the link of
        an edge a graph, the link of a facet the empty complex.
        """
        f = frozenset(face)
        got = self._link_memo.get(f)
        if got is None:
            cof = [F - f for F in self._cofacets(f)]
            if not cof:
                raise MissingFaceError(f"face {sorted(f)} is not in the complex")
            if cof == [frozenset()]:
                got = SimplicialComplex([])
            else:
                got = SimplicialComplex(c for c in cof if c)
            self._link_memo[f] = got
        return got

    def _cofacets(self, f: frozenset) -> list:
        if not f:
            return list(self.facets)
        by_vertex = self._facets_by_vertex()
        v = min(f, key=lambda x: len(by_vertex.get(x, ())))
        return [F for F in by_vertex.get(v, ()) if f <= F]

    def edge_degree(self, edge: Iterable[int]) -> int:
        """Number of vertices in the link of the edge.

        Equals the number of facets around the edge whenever that link
        is a single cycle (the closed, normal case).
        """
        e = frozenset(edge)
        if len(e) != 2:
            raise DimensionError(f"edge_degree wants an edge, got {sorted(e)}")
        if not self._cofacets(e):
            raise MissingFaceError(f"edge {sorted(e)} is not in the complex")
        return len(self.link(e).vertices)

    # -- counting ------------------------------------------------------

    def f_vector(self) -> FVector:
        """f-vector with h- and g-numbers; 3-dimensional complexes only."""
        if self.dimension != 3:
            raise DimensionError(
                f"f_vector is defined for 3-complexes, this one has dimension {self.dimension}"
            )
        fv = self._cache.get("f_vector")
        if fv is None:
            fv = FVector.from_counts(
                len(self.faces(0)), len(self.faces(1)), len(self.faces(2)), len(self.facets)
            )
            self._cache["f_vector"] = fv
        return fv

    @property
    def g2(self) -> int:
        return self.f_vector().g2

    # -- the 1-skeleton as a graph ------------------------------------

    @property
    def adjacency(self) -> dict:
        adj = self._cache.get("adjacency")
        if adj is None:
            adj = {v: set() for v in self.vertices}
            for e in self.faces(1):
                a, b = e
                adj[a].add(b)
                adj[b].add(a)
            adj = {v: frozenset(nb) for v, nb in adj.items()}
            self._cache["adjacency"] = adj
        return adj

    def neighbors(self, v: int) -> frozenset:
        try:
            return self.adjacency[v]
        except KeyError:
            raise MissingFaceError(f"vertex {v} is not in the complex") from None

    def graph_distances(self, source: int) -> dict:
        """BFS distances from ``source`` in the 1-skeleton."""
        dist = {source: 0}
        queue = deque([source])
        adj = self.adjacency
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.graph_distances(min(self.vertices))) == len(self.vertices)

    def connected_components(self) -> list:
        """Components of the 1-skeleton, each as a complex.

        Facets are cliques, so every facet lies in exactly one
        component.
        """
        unseen = set(self.vertices)
        comps = []
        while unseen:
            reached = self.graph_distances(min(unseen))
            unseen -= reached.keys()
            comps.append(
                SimplicialComplex(F for F in self.facets if next(iter(F)) in reached)
            )
        return sorted(comps, key=lambda K: sorted(K.vertices))

    # -- missing faces -------------------------------------------------

    def missing_faces(self, dim: int) -> list:
        """Faces absent from the complex whose boundary is present.

        ``dim=2`` lists missing triangles (empty triangles in the
        1-skeleton), ``dim=3`` missing tetrahedra: quadruples all of
        whose four triangles are present while the solid quadruple is
        not a face.  Results are sorted for determinism.
        """
        if dim == 2:
            adj = self.adjacency
            out = []
            for e in self.faces(1):
                a, b = sorted(e)
                for c in sorted(adj[a] & adj[b]):
                    if c > b and not self.contains_face((a, b, c)):
                        out.append(frozenset((a, b, c)))
            return sorted(out, key=sorted)
        if dim == 3:
            tris = self.faces(2)
            adj = self.adjacency
            out = set()
            for t in tris:
                a, b, c = sorted(t)
                for d in sorted(adj[a] & adj[b] & adj[c]):
                    if d <= c:
                        continue
                    quad = frozenset((a, b, c, d))
                    if quad in self.facets:
                        continue
                    if all(quad - {x} in tris for x in (a, b, c)):
                        out.add(quad)
            return sorted(out, key=sorted)
        raise DimensionError(f"missing_faces supports dim 2 or 3, got {dim}")

    # -- relabeling and display ---------------------------------------

    def relabeled(self, mapping: dict) -> "SimplicialComplex":
        """Apply a vertex relabeling; labels not in ``mapping`` stay put."""
        return SimplicialComplex(
            [mapping.get(v, v) for v in F] for F in self.facets
        )

    def canonical_facets(self) -> list:
        """Facets as sorted tuples, sorted; the canonical printed order."""
        return sorted(tuple(sorted(F)) for F in self.facets)


# ---------------------------------------------------------------------
# normality
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class NormalityReport:
    """Outcome of ``validate_normal``.

    ``verdict`` is ``"NormalClosed"`` when the complex is a connected
    closed normal 3-pseudomanifold, else ``"NotNormal"``.
    ``singular_vertices`` lists ``(vertex, SurfaceClass)`` pairs for the
    vertices whose link is a closed surface other than the 2-sphere.
    """

    verdict: str
    is_pure: bool
    is_connected: bool
    ridge_failures: tuple
    disconnected_links: tuple
    bad_links: tuple
    singular_vertices: tuple

    @property
    def is_normal_closed(self) -> bool:
        return self.verdict == "NormalClosed"

    def summary(self) -> str:
        if self.is_normal_closed:
            if self.singular_vertices:
                names = ", ".join(
                    f"{v}:{cls.kind}" for v, cls in self.singular_vertices
                )
                return f"NormalClosed with singular vertices [{names}]"
            return "NormalClosed, all vertex links are 2-spheres"
        parts = []
        if not self.is_connected:
            parts.append("disconnected")
        if self.ridge_failures:
            parts.append(f"{len(self.ridge_failures)} ridge failures")
        if self.disconnected_links:
            parts.append(f"{len(self.disconnected_links)} disconnected links")
        if self.bad_links:
            parts.append(f"{len(self.bad_links)} non-surface links")
        return "NotNormal: " + ("; ".join(parts) if parts else "see report")


def validate_normal(K: SimplicialComplex) -> NormalityReport:
    """Check the closed normal pseudomanifold conditions in dimension 3.

    Conditions checked, in order: purity (guaranteed by construction,
    reported for completeness), every triangle in exactly two facets,
    global connectivity, connected links for all faces of codimension
    at least two, and every vertex link a closed connected surface.
    Vertex links are classified; non-sphere links populate
    ``singular_vertices``.
    """
    if K.dimension != 3:
        raise DimensionError(
            f"validate_normal expects a 3-complex, got dimension {K.dimension}"
        )

    ridge_failures = []
    for t in sorted(K.faces(2), key=sorted):
        n = len(K._cofacets(t))
        if n != 2:
            ridge_failures.append((tuple(sorted(t)), n))

    is_connected = K.is_connected()

    disconnected_links = []
    for v in sorted(K.vertices):
        if not K.link((v,)).is_connected():
            disconnected_links.append((v,))
    for e in sorted(K.faces(1), key=sorted):
        if not K.link(e).is_connected():
            disconnected_links.append(tuple(sorted(e)))

    bad_links = []
    singular = []
    for v in sorted(K.vertices):
        lk = K.link((v,))
        try:
            surf = surfaces.Surface(lk.facets)
        except Exception as exc:  # noqa: BLE001 - report, do not raise
            bad_links.append((v, str(exc)))
            continue
        cls = surf.classify()
        if cls.kind != surfaces.SPHERE:
            singular.append((v, cls))

    ok = (
        is_connected
        and not ridge_failures
        and not disconnected_links
        and not bad_links
    )
    return NormalityReport(
        verdict="NormalClosed" if ok else "NotNormal",
        is_pure=True,
        is_connected=is_connected,
        ridge_failures=tuple(ridge_failures),
        disconnected_links=tuple(disconnected_links),
        bad_links=tuple(bad_links),
        singular_vertices=tuple(singular),
    )


def singular_vertices(K: SimplicialComplex) -> list:
    """Vertices whose link is not a 2-sphere, as a sorted label list."""
    return [v for v, _ in validate_normal(K).singular_vertices]


def total_g2(K: SimplicialComplex) -> int:
    """Sum of g2 over the connected components.

    For a connected complex this is plain ``g2``.  Summing per
    component keeps the book-keeping additive across disjoint unions,
    which is how construction traces account for connected sums.
    """
    return sum(comp.f_vector().g2 for comp in K.connected_components())


# ---------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------


def _vertex_keys(K: SimplicialComplex) -> dict:
    """Refined per-vertex invariants used to prune the search."""
    base = {}
    for v in K.vertices:
        lk = K.link((v,))
        counts = tuple(len(lk.faces(d)) for d in range(max(lk.dimension + 1, 1)))
        kind = ""
        if lk.dimension == 2:
            try:
                kind = surfaces.Surface(lk.facets).classify().kind
            except Exception:  # noqa: BLE001
                kind = "?"
        base[v] = (len(K.neighbors(v)), counts, kind)
    # one refinement round: append the multiset of neighbour base keys
    return {
        v: (base[v], tuple(sorted(base[u] for u in K.neighbors(v))))
        for v in K.vertices
    }


def find_isomorphism(
    K1: SimplicialComplex,
    K2: SimplicialComplex,
    node_budget: int = 500_000,
) -> Optional[dict]:
    """Search for a facet-preserving vertex bijection K1 -> K2.

    Returns the bijection as a dict, or None when the complexes are not
    isomorphic.  The search is refinement-pruned backtracking; if it
    would exceed ``node_budget`` assignments it raises
    :class:`IsomorphismInconclusive` instead of guessing.
    """
    if K1.dimension != K2.dimension or len(K1.facets) != len(K2.facets):
        return None
    if len(K1.vertices) != len(K2.vertices):
        return None
    for d in range(K1.dimension + 1):
        if len(K1.faces(d)) != len(K2.faces(d)):
            return None

    keys1 = _vertex_keys(K1)
    keys2 = _vertex_keys(K2)
    if sorted(keys1.values()) != sorted(keys2.values()):
        return None

    classes2: dict = {}
    for v, k in keys2.items():
        classes2.setdefault(k, []).append(v)

    # rarest invariant class first, then ties by label for determinism
    order = sorted(K1.vertices, key=lambda v: (len(classes2[keys1[v]]), v))
    facets1 = sorted(K1.facets, key=lambda F: sorted(F))
    adj1, adj2 = K1.adjacency, K2.adjacency

    mapping: dict = {}
    used: set = set()
    nodes = 0

    def extend(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        v = order[i]
        for w in sorted(classes2[keys1[v]]):
            if w in used:
                continue
            nodes += 1
            if nodes > node_budget:
                raise IsomorphismInconclusive(
                    f"isomorphism search budget of {node_budget} nodes exhausted"
                )
            consistent = all(
                (u in adj1[v]) == (mu in adj2[w]) for u, mu in mapping.items()
            )
            if not consistent:
                continue
            mapping[v] = w
            used.add(w)
            facet_ok = True
            for F in facets1:
                if v in F and all(x in mapping for x in F):
                    if frozenset(mapping[x] for x in F) not in K2.facets:
                        facet_ok = False
                        break
            if facet_ok and extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return dict(mapping)
    return None


def are_isomorphic(
    K1: SimplicialComplex, K2: SimplicialComplex, node_budget: int = 500_000
) -> bool:
    """True when a facet-preserving vertex bijection exists."""
    return find_isomorphism(K1, K2, node_budget=node_budget) is not None
