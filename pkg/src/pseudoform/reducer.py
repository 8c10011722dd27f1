"""Decomposition of admissible complexes into boundary-4-simplex seeds.

``reduce_complex`` accepts a normal closed complex that is either a
union of spheres with g2 at most 9 or has exactly two projective-plane
vertices and g2 in {3, 4}, and dismantles it step by step: splitting
connected sums at missing tetrahedra, undoing bistellar moves, edge
expansions, two-facets insertions and edge foldings.  Every reduction
step immediately re-applies the corresponding forward move and checks
that it reproduces the previous state bit for bit, so the emitted
:class:`ConstructionTrace` replays to the exact input, labels and all.

Trace file format (bit-exact round trip):

    trace seeds=<n> result=<f0>,<f1>,<f2>,<f3> g2=<total>
    seed <index>
    <v0> <v1> <v2> <v3>
    ...
    end
    move component=<tag> kind=<Kind> <key>=<value> ... g2_delta=<d>

``audit_multi_singular`` is the falsifier side: it takes a complex
purported to have g2 = 4 with more than two singular vertices and
reports every structural rule such a complex would have to break.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from . import moves
from . import surfaces
from .complexes import (
    NormalityReport,
    SimplicialComplex,
    total_g2,
    validate_normal,
)
from .errors import (
    MoveError,
    PseudoformError,
    ReplayError,
    TraceFormatError,
)
from .surfaces import RP2


# ---------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionTrace:
    """Seeds plus forward moves plus the claimed final tallies.

    ``forward_moves`` holds (component tag, record) pairs; the tag
    names the input component the move belongs to and is purely
    informational, the records themselves pin down where they act.
    """

    seeds: tuple
    forward_moves: tuple
    claimed_fcounts: tuple  # (f0, f1, f2, f3) of the replayed result
    claimed_g2: int  # sum of per-component g2

    def counts(self) -> "tuple[int, int, int]":
        kinds = [rec.kind for _, rec in self.forward_moves]
        return (
            len(self.seeds),
            len(kinds),
            kinds.count(moves.EDGE_FOLD),
        )

    def summary(self) -> str:
        n_seeds, n_moves, n_folds = self.counts()
        f = ",".join(str(x) for x in self.claimed_fcounts)
        return (
            f"seeds={n_seeds} moves={n_moves} folds={n_folds} "
            f"result=({f}) g2={self.claimed_g2}"
        )


def _face_counts(K: SimplicialComplex) -> tuple:
    return tuple(len(K.faces(d)) for d in range(4))


def _encode_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ",".join(_encode_value(x) for x in v) + ")"
    raise TraceFormatError(f"cannot encode parameter value {v!r}")


def _decode_value(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    if text.startswith("("):
        try:
            val = ast.literal_eval(text)
        except (ValueError, SyntaxError):
            raise TraceFormatError(f"bad tuple value {text!r}") from None
        return val
    try:
        return int(text)
    except ValueError:
        raise TraceFormatError(f"bad integer value {text!r}") from None


def format_trace(trace: ConstructionTrace) -> str:
    lines = []
    f = ",".join(str(x) for x in trace.claimed_fcounts)
    lines.append(
        f"trace seeds={len(trace.seeds)} result={f} g2={trace.claimed_g2}"
    )
    for i, seed in enumerate(trace.seeds):
        lines.append(f"seed {i}")
        for facet in sorted(tuple(sorted(F)) for F in seed.facets):
            lines.append(" ".join(str(x) for x in facet))
        lines.append("end")
    for tag, rec in trace.forward_moves:
        parts = [f"move component={tag}", f"kind={rec.kind}"]
        parts += [f"{k}={_encode_value(v)}" for k, v in rec.params]
        parts.append(f"g2_delta={rec.g2_delta}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> ConstructionTrace:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("trace "):
        raise TraceFormatError("missing 'trace' header line")
    header = {}
    for tok in lines[0].split()[1:]:
        if "=" not in tok:
            raise TraceFormatError(f"bad header token {tok!r}")
        k, v = tok.split("=", 1)
        header[k] = v
    try:
        n_seeds = int(header["seeds"])
        fcounts = tuple(int(x) for x in header["result"].split(","))
        g2 = int(header["g2"])
    except (KeyError, ValueError):
        raise TraceFormatError(f"bad header {lines[0]!r}") from None
    if len(fcounts) != 4:
        raise TraceFormatError("result= wants four comma-separated counts")

    seeds = []
    forward = []
    i = 1
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.startswith("seed "):
            try:
                idx = int(line.split()[1])
            except (IndexError, ValueError):
                raise TraceFormatError(f"line {i + 1}: bad seed header") from None
            if idx != len(seeds):
                raise TraceFormatError(
                    f"line {i + 1}: seed {idx} out of order (expected {len(seeds)})"
                )
            i += 1
            facets = []
            while i < len(lines) and lines[i].strip() != "end":
                row = lines[i].split()
                try:
                    facets.append(tuple(int(x) for x in row))
                except ValueError:
                    raise TraceFormatError(
                        f"line {i + 1}: bad facet row {lines[i]!r}"
                    ) from None
                i += 1
            if i >= len(lines):
                raise TraceFormatError("seed block not closed with 'end'")
            i += 1  # skip 'end'
            try:
                seeds.append(SimplicialComplex.from_facets(facets))
            except PseudoformError as e:
                raise TraceFormatError(f"seed {idx}: {e}") from None
        elif line.startswith("move "):
            toks = line.split()[1:]
            pairs = []
            for tok in toks:
                if "=" not in tok:
                    raise TraceFormatError(f"line {i + 1}: bad token {tok!r}")
                k, v = tok.split("=", 1)
                pairs.append((k, v))
            keys = [k for k, _ in pairs]
            if keys[:2] != ["component", "kind"] or keys[-1] != "g2_delta":
                raise TraceFormatError(
                    f"line {i + 1}: move wants component, kind, ..., g2_delta"
                )
            tag = _decode_value(pairs[0][1])
            kind = pairs[1][1]
            if kind not in moves.ALL_KINDS:
                raise TraceFormatError(f"line {i + 1}: unknown kind {kind!r}")
            delta = _decode_value(pairs[-1][1])
            params = tuple((k, _decode_value(v)) for k, v in pairs[2:-1])
            forward.append((tag, moves.MoveRecord(kind, params, delta)))
            i += 1
        else:
            raise TraceFormatError(f"line {i + 1}: unexpected line {line!r}")
    if len(seeds) != n_seeds:
        raise TraceFormatError(
            f"header promised {n_seeds} seeds, found {len(seeds)}"
        )
    return ConstructionTrace(
        seeds=tuple(seeds),
        forward_moves=tuple(forward),
        claimed_fcounts=fcounts,
        claimed_g2=g2,
    )


def _is_simplex_boundary(K: SimplicialComplex) -> bool:
    vs = sorted(K.vertices)
    if len(vs) != 5 or len(K.facets) != 5:
        return False
    return K.facets == frozenset(
        frozenset(q) for q in itertools.combinations(vs, 4)
    )


def _components_all_normal(K: SimplicialComplex) -> Optional[str]:
    for comp in K.connected_components():
        rep = validate_normal(comp)
        if not rep.is_normal_closed:
            return rep.summary()
    return None


def replay(trace: ConstructionTrace) -> SimplicialComplex:
    """Run a trace forward from its seeds, re-checking everything.

    Raises :class:`ReplayError` (with the failing move index) on any
    precondition failure, on an intermediate state that is not a
    disjoint union of normal closed complexes, and on a final tally
    that differs from the trace's claim.
    """
    if not trace.seeds:
        raise ReplayError("trace has no seeds")
    seen: set = set()
    for i, seed in enumerate(trace.seeds):
        if not _is_simplex_boundary(seed):
            raise ReplayError(f"seed {i} is not a boundary 4-simplex")
        if seen & seed.vertices:
            raise ReplayError(f"seed {i} reuses labels of earlier seeds")
        seen |= seed.vertices
    state = SimplicialComplex(
        F for seed in trace.seeds for F in seed.facets
    )
    for i, (_tag, rec) in enumerate(trace.forward_moves):
        try:
            state = moves.apply_record(state, rec)
        except PseudoformError as e:
            raise ReplayError(
                f"forward move {i} ({rec.kind}) failed: {e}", index=i
            ) from e
        bad = _components_all_normal(state)
        if bad is not None:
            raise ReplayError(
                f"state after move {i} ({rec.kind}) is not normal: {bad}",
                index=i,
            )
    if _face_counts(state) != tuple(trace.claimed_fcounts):
        raise ReplayError(
            f"replayed face counts {_face_counts(state)} differ from "
            f"claimed {tuple(trace.claimed_fcounts)}"
        )
    if total_g2(state) != trace.claimed_g2:
        raise ReplayError(
            f"replayed g2 {total_g2(state)} differs from claimed {trace.claimed_g2}"
        )
    return state


# ---------------------------------------------------------------------
# splitting at a missing tetrahedron
# ---------------------------------------------------------------------


def split_at_missing_tetrahedron(
    K: SimplicialComplex,
    tetra: Iterable[int],
    fresh_base: Optional[int] = None,
) -> "tuple[SimplicialComplex, SimplicialComplex, moves.MoveRecord]":
    """Undo the connected sum glued along a missing tetrahedron.

    Every corner's link must be separated by its opposite triangle,
    and removing the four boundary triangles from the facet adjacency
    must disconnect the complex (if it does not, the gluing was a
    handle, which is only possible at g2 >= 10).  Returns the two
    summands, the second with fresh labels on its copy of the
    tetrahedron, plus the ConnectedSum record that reassembles them.
    """
    quad = frozenset(tetra)
    if quad in K.facets or quad not in set(K.missing_faces(3)):
        raise MoveError(f"{sorted(quad)} is not a missing tetrahedron")
    reports = {x: surfaces.missing_triangle_neighborhood(K, x, quad - {x})
               for x in sorted(quad)}
    moebius = [x for x in sorted(quad) if not reports[x].separates]
    if moebius:
        raise MoveError(
            f"corners {moebius} of {sorted(quad)} have one-sided "
            "neighborhoods; this tetrahedron witnesses a fold, not a sum",
            details=tuple(moebius),
        )

    cut = {frozenset(t) for t in itertools.combinations(sorted(quad), 3)}
    facets = sorted(K.facets, key=sorted)
    index = {F: i for i, F in enumerate(facets)}
    by_triangle: dict = {}
    for F in facets:
        for t in itertools.combinations(sorted(F), 3):
            ft = frozenset(t)
            if ft not in cut:
                by_triangle.setdefault(ft, []).append(F)
    comp = {F: None for F in facets}
    n_comp = 0
    for F0 in facets:
        if comp[F0] is not None:
            continue
        stack = [F0]
        comp[F0] = n_comp
        while stack:
            F = stack.pop()
            for t in itertools.combinations(sorted(F), 3):
                for G in by_triangle.get(frozenset(t), ()):
                    if comp[G] is None:
                        comp[G] = n_comp
                        stack.append(G)
        n_comp += 1
    if n_comp == 1:
        raise MoveError(
            f"cutting along {sorted(quad)} does not disconnect: the gluing "
            "was a handle (g2 at least 10), not a connected sum"
        )
    if n_comp != 2:
        raise MoveError(
            f"cutting along {sorted(quad)} leaves {n_comp} pieces; "
            "the complex is not a normal pseudomanifold there"
        )
    side_a = frozenset(F for F in facets if comp[F] == 0)
    side_b = frozenset(F for F in facets if comp[F] == 1)
    shared = (
        frozenset(v for F in side_a for v in F)
        & frozenset(v for F in side_b for v in F)
    )
    if shared != quad:
        raise MoveError(
            f"split sides share vertices {sorted(shared)} beyond the "
            f"tetrahedron {sorted(quad)}"
        )

    base = K.fresh_label() if fresh_base is None else fresh_base
    originals = sorted(quad)
    fresh = {x: base + i for i, x in enumerate(originals)}
    K1 = SimplicialComplex(set(side_a) | {quad})
    relabeled_b = {
        frozenset(fresh.get(v, v) for v in F) for F in side_b
    }
    K2 = SimplicialComplex(relabeled_b | {frozenset(fresh.values())})
    psi = {x: fresh[x] for x in originals}
    rec = moves.MoveRecord(
        moves.CONNECTED_SUM,
        (
            ("sigma1", tuple(originals)),
            ("sigma2", tuple(fresh[x] for x in originals)),
            ("psi", tuple(sorted(psi.items()))),
        ),
        0,
    )
    return K1, K2, rec


# ---------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------

CLASS_STACKED = "StackedSphere"
CLASS_SPHERE = "SphereG2le9"
CLASS_TWO_SINGULAR = "TwoSingularG2_3or4"
CLASS_REJECTED = "Rejected"


@dataclass(frozen=True)
class ReduceReport:
    input_class: str
    reason: Optional[str]
    trace: Optional[ConstructionTrace]
    rule_log: tuple  # ((component tag, rule id, witness), ...)

    @property
    def accepted(self) -> bool:
        return self.input_class != CLASS_REJECTED

    def summary(self) -> str:
        if not self.accepted:
            return f"class={self.input_class} reason={self.reason}"
        return f"class={self.input_class} {self.trace.summary()}"


class _Rejection(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _singular_set(rep: NormalityReport) -> dict:
    return {v: cls for v, cls in rep.singular_vertices}


def _classify_component(K: SimplicialComplex) -> "tuple[str, dict]":
    """Admission check for one connected component."""
    rep = validate_normal(K)
    if not rep.is_normal_closed:
        raise _Rejection(f"not a normal closed pseudomanifold: {rep.summary()}")
    sing = _singular_set(rep)
    g2 = K.f_vector().g2
    if not sing:
        if g2 > 9:
            raise _Rejection(f"sphere component with g2={g2} > 9")
        return (CLASS_STACKED if g2 == 0 else CLASS_SPHERE), sing
    bad = sorted(v for v, cls in sing.items() if cls.kind != RP2)
    if bad:
        raise _Rejection(
            f"singular vertices {bad} have links other than a projective plane"
        )
    if len(sing) != 2:
        raise _Rejection(
            f"{len(sing)} projective-plane vertices; only exactly two are in scope"
        )
    if g2 not in (3, 4):
        raise _Rejection(
            f"two-singular component with g2={g2}; only 3 and 4 are in scope"
        )
    return CLASS_TWO_SINGULAR, sing


def _cycle_tuple(L: SimplicialComplex) -> tuple:
    """Deterministic traversal of a 1-dimensional cycle complex."""
    adj: dict = {}
    for e in L.faces(1):
        a, b = sorted(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    if any(len(ns) != 2 for ns in adj.values()):
        raise MoveError("edge link is not a single cycle")
    walk = [start, min(adj[start])]
    while True:
        prev, cur = walk[-2], walk[-1]
        nxt = [x for x in adj[cur] if x != prev]
        if not nxt:
            raise MoveError("edge link walk broke off")
        if nxt[0] == start:
            break
        walk.append(nxt[0])
    if len(walk) != len(adj):
        raise MoveError("edge link is not a single cycle")
    return tuple(walk)


def _verify_inverse(
    before: SimplicialComplex, rebuilt: SimplicialComplex, what: str
) -> None:
    if rebuilt != before:
        raise _Rejection(
            f"internal check failed: forward {what} does not rebuild the "
            "previous state"
        )


class _Reducer:
    """Single reduction session; owns the global fresh-label counter."""

    def __init__(self, K: SimplicialComplex):
        self.next_label = K.fresh_label()
        self.rule_log: list = []

    def take_labels(self, n: int) -> list:
        out = list(range(self.next_label, self.next_label + n))
        self.next_label += n
        return out

    def log(self, tag: int, rule: str, witness) -> None:
        self.rule_log.append((tag, rule, witness))

    # -- inverse-record builders (each re-applies the forward move) ---

    def _inverse_of_contraction(
        self, before: SimplicialComplex, after: SimplicialComplex,
        edge: tuple, w: int,
    ) -> moves.MoveRecord:
        u, v = sorted(edge)
        cyc = _cycle_tuple(before.link(frozenset(edge)))
        u_tris = {
            t for t in before.link((u,)).faces(2) if v not in t
        }
        report = surfaces.cycle_cut(
            surfaces.Surface(after.link((w,)).facets), cyc
        )
        if report.sides[0] == frozenset(u_tris):
            u_side = 0
        elif report.sides[1] == frozenset(u_tris):
            u_side = 1
        else:
            raise _Rejection(
                "internal check failed: contracted star does not match "
                "either expansion side"
            )
        rebuilt, rec = moves.expand_edge(
            after, w, cyc, u_side=u_side, apexes=(u, v)
        )
        _verify_inverse(before, rebuilt, "edge expansion")
        return rec

    def step_sphere(
        self, K: SimplicialComplex, tag: int
    ) -> "tuple[SimplicialComplex, moves.MoveRecord]":
        """One sphere-path reduction; returns (smaller K, inverse record)."""
        sites = moves.bistellar_two_sites(K)
        if sites:
            edge, _tri = sites[0]
            after, rec2 = moves.bistellar_two(K, edge)
            rebuilt, rec = moves.bistellar_one(after, rec2.get("triangle"))
            _verify_inverse(K, rebuilt, "bistellar 1-move")
            self.log(tag, "bistellar-down-at-degree-three-edge", edge)
            return after, rec
        contractible = moves.contractible_edges(K)
        if contractible:
            edge, _deg = contractible[0]
            (w,) = self.take_labels(1)
            after, recc = moves.contract_edge(K, edge, fresh=w)
            rec = self._inverse_of_contraction(K, after, edge, w)
            self.log(tag, "contract-link-condition-edge", edge)
            return after, rec
        insertions = moves.insertion_sites(K)
        if insertions:
            wv, tri = insertions[0]
            pair = self.take_labels(2)
            after, reci = moves.insert_two_facets(
                K, wv, tri, apexes=tuple(pair)
            )
            rebuilt, rec = moves.contract_two_facets(
                after, pair[0], pair[1], fresh=wv
            )
            _verify_inverse(K, rebuilt, "two-facets contraction")
            self.log(tag, "insert-through-missing-triangle", (wv, tri))
            return after, rec
        raise _Rejection(
            f"sphere with g2={K.f_vector().g2} admits no bistellar 2-move, "
            "no link-condition contraction and no two-facets insertion"
        )

    def step_singular(
        self, K: SimplicialComplex, sing: dict, tag: int
    ) -> "tuple[SimplicialComplex, moves.MoveRecord]":
        site = moves.detect_unfold(K)
        if site is not None:
            after, recu = moves.edge_unfold(
                K, site.tetra, fresh=tuple(self.take_labels(2))
            )
            a, b = site.split_pair
            a2, b2 = recu.get("fresh")
            u, v = site.moebius_edge
            sigma1 = tuple(sorted((u, v, a, b)))
            sigma2 = tuple(sorted((u, v, a2, b2)))
            psi = {u: u, v: v, a: a2, b: b2}
            rebuilt, rec = moves.edge_fold(after, sigma1, sigma2, psi)
            _verify_inverse(K, rebuilt, "edge folding")
            self.log(tag, "unfold-at-moebius-tetrahedron", site.tetra)
            return after, rec
        # No fold witness: contract an edge joining a singular vertex to
        # a non-singular neighbor, provided the link condition holds.
        for edge, _deg in moves.contractible_edges(K):
            a, b = edge
            if (a in sing) == (b in sing):
                continue
            (w,) = self.take_labels(1)
            after, recc = moves.contract_edge(K, edge, fresh=w)
            rec = self._inverse_of_contraction(K, after, edge, w)
            self.log(tag, "contract-singular-incident-edge", edge)
            return after, rec
        raise _Rejection(
            "two-singular component has no fold witness and no admissible "
            "contraction at a singular vertex"
        )

    def run(
        self, K: SimplicialComplex, tag: int
    ) -> "tuple[list, list]":
        """Reduce one connected normal component to seeds.

        Returns (seeds, forward records in replay order).
        """
        inverses: list = []  # most recent first when reversed
        while True:
            _cls, sing = _classify_component(K)

            if _is_simplex_boundary(K):
                return [K], [(tag, r) for r in reversed(inverses)]

            # (a) connected-sum split wherever every corner separates
            for quad in K.missing_faces(3):
                reports = {
                    x: surfaces.missing_triangle_neighborhood(K, x, quad - {x})
                    for x in sorted(quad)
                }
                if not all(r.separates for r in reports.values()):
                    continue
                base = self.take_labels(4)[0]
                try:
                    K1, K2, rec = split_at_missing_tetrahedron(
                        K, quad, fresh_base=base
                    )
                except MoveError as e:
                    # all corners separate yet the cut does not
                    # disconnect: a handle, impossible below g2=10
                    raise _Rejection(str(e)) from None
                self.log(tag, "split-at-missing-tetrahedron", tuple(sorted(quad)))
                seeds1, fwd1 = self.run(K1, tag)
                seeds2, fwd2 = self.run(K2, tag)
                forward = fwd1 + fwd2 + [(tag, rec)]
                forward += [(tag, r) for r in reversed(inverses)]
                return seeds1 + seeds2, forward

            if sing:
                K2, rec = self.step_singular(K, sing, tag)
            elif K.f_vector().g2 == 0:
                subs = moves.unsubdividable_vertices(K)
                if not subs:
                    raise _Rejection(
                        "stacked-range component with no split and no "
                        "degree-four vertex"
                    )
                w, _tet = subs[0]
                K2, recu = moves.facet_unsubdivide(K, w)
                rebuilt, rec = moves.facet_subdivide(
                    K2, recu.get("facet"), fresh=w
                )
                _verify_inverse(K, rebuilt, "facet subdivision")
                self.log(tag, "strip-degree-four-vertex", w)
            else:
                K2, rec = self.step_sphere(K, tag)

            bad = _components_all_normal(K2)
            if bad is not None:
                raise _Rejection(
                    f"reduction step produced an invalid complex: {bad}"
                )
            inverses.append(rec)
            K = K2


def reduce_complex(K: SimplicialComplex) -> ReduceReport:
    """Decompose a complex into boundary-4-simplex seeds with a trace.

    Accepts disjoint unions; components reduce independently and the
    trace tags each move with its component index.  Returns a Rejected
    report (never raises) when the input is outside the supported
    classes or a guaranteed move is unexpectedly unavailable.
    """
    components = K.connected_components()
    if not components:
        return ReduceReport(
            CLASS_REJECTED, "empty complex", None, ()
        )
    try:
        classes = []
        for comp in components:
            cls, _sing = _classify_component(comp)
            classes.append(cls)
    except _Rejection as e:
        return ReduceReport(CLASS_REJECTED, e.reason, None, ())

    session = _Reducer(K)
    seeds: list = []
    forward: list = []
    try:
        for tag, comp in enumerate(components):
            s, f = session.run(comp, tag)
            seeds += s
            forward += f
    except _Rejection as e:
        return ReduceReport(
            CLASS_REJECTED, e.reason, None, tuple(session.rule_log)
        )

    trace = ConstructionTrace(
        seeds=tuple(seeds),
        forward_moves=tuple(forward),
        claimed_fcounts=_face_counts(K),
        claimed_g2=total_g2(K),
    )
    if CLASS_TWO_SINGULAR in classes:
        input_class = CLASS_TWO_SINGULAR
    elif any(c == CLASS_SPHERE for c in classes):
        input_class = CLASS_SPHERE
    else:
        input_class = CLASS_STACKED
    return ReduceReport(input_class, None, trace, tuple(session.rule_log))


# ---------------------------------------------------------------------
# the nonexistence audit
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    """Outcome of auditing a claimed g2=4, many-singular complex.

    ``applicable`` records whether the complex really measured up to
    the claim; when it does not, ``facts`` explains what was measured
    instead and the claim is already refuted.  ``violations`` lists
    every structural rule the (possibly force-audited) complex breaks.
    """

    applicable: bool
    facts: tuple
    violations: tuple

    @property
    def defeated(self) -> bool:
        return (not self.applicable) or bool(self.violations)

    def summary(self) -> str:
        parts = []
        if not self.applicable:
            parts.append("claim refuted by measurement: " + "; ".join(self.facts))
        for code, detail in self.violations:
            parts.append(f"violated {code}: {detail}")
        if not parts:
            parts.append("no violation found")
        return "\n".join(parts)


def _surface_missing_triangles(L: SimplicialComplex) -> list:
    edges = L.faces(1)
    tris = L.faces(2)
    verts = sorted(L.vertices)
    out = []
    for t in itertools.combinations(verts, 3):
        ft = frozenset(t)
        if ft in tris:
            continue
        if all(frozenset(e) in edges for e in itertools.combinations(t, 2)):
            out.append(t)
    return out


def _note(facts: list, fact: str) -> None:
    if fact not in facts:
        facts.append(fact)


def _strip_to_reduced_form(K: SimplicialComplex, facts: list) -> SimplicialComplex:
    """Undo facet subdivisions and separable sums before auditing."""
    while True:
        subs = moves.unsubdividable_vertices(K)
        if subs:
            K, _ = moves.facet_unsubdivide(K, subs[0][0])
            continue
        progressed = False
        for quad in K.missing_faces(3):
            reports = {
                x: surfaces.missing_triangle_neighborhood(K, x, quad - {x})
                for x in sorted(quad)
            }
            if not any(r.separates for r in reports.values()):
                continue
            if not all(r.separates for r in reports.values()):
                _note(
                    facts,
                    f"missing tetrahedron {sorted(quad)} mixes separating "
                    "and one-sided corners",
                )
                continue
            try:
                K1, K2, _rec = split_at_missing_tetrahedron(K, quad)
            except MoveError as e:
                _note(facts, f"unsplittable missing tetrahedron: {e}")
                continue
            def n_sing(C):
                return len(
                    [v for v, _ in validate_normal(C).singular_vertices]
                )
            K = K1 if n_sing(K1) >= n_sing(K2) else K2
            progressed = True
            break
        if not progressed:
            return K


def audit_multi_singular(
    K: SimplicialComplex, force: bool = False
) -> AuditReport:
    """Audit a complex claimed to have g2 = 4 and > 2 singular vertices.

    Measures the claim first; a mismatch refutes it outright (reported
    in ``facts``).  With ``force`` the structural rule battery runs
    regardless, which is how near-miss candidates are probed in tests.
    The rules are checked on the reduced form of the complex (facet
    subdivisions undone, separable connected sums split off).
    """
    facts: list = []
    rep = validate_normal(K)
    if not rep.is_normal_closed:
        facts.append(f"not a normal closed pseudomanifold ({rep.summary()})")
        return AuditReport(False, tuple(facts), ())
    sing = _singular_set(rep)
    g2 = K.f_vector().g2
    non_rp2 = sorted(v for v, cls in sing.items() if cls.kind != RP2)
    if g2 != 4:
        facts.append(f"measured g2={g2}, not 4")
    if len(sing) <= 2:
        facts.append(f"measured {len(sing)} singular vertices, not more than 2")
    if non_rp2:
        facts.append(f"singular links at {non_rp2} are not projective planes")
    applicable = not facts
    if not applicable and not force:
        return AuditReport(False, tuple(facts), ())

    K = _strip_to_reduced_form(K, facts)
    rep = validate_normal(K)
    sing = set(_singular_set(rep))
    nonsing = sorted(K.vertices - sing)
    violations: list = []

    for v in nonsing:
        missing = _surface_missing_triangles(K.link((v,)))
        for t in missing:
            violations.append(
                ("missing-triangle-in-nonsingular-link", (v, t))
            )
    for e in sorted(K.faces(1), key=sorted):
        d = K.edge_degree(e)
        if d < 4:
            violations.append(
                ("edge-degree-below-four", (tuple(sorted(e)), d))
            )
    for e in sorted(K.faces(1), key=sorted):
        a, b = sorted(e)
        if a in sing and b in sing:
            continue
        x, y = (a, b) if a not in sing else (b, a)
        common = K.link((x,)).vertices & K.link((y,)).vertices
        diff = common - K.link(e).vertices
        if not diff:
            violations.append(
                ("empty-common-link-difference", (x, y))
            )
    if len(sing) == 8 and len(K.vertices) < 10:
        violations.append(
            ("too-few-vertices-for-eight-singular", len(K.vertices))
        )
    for a in nonsing:
        d = len(K.link((a,)).vertices)
        if d > 8:
            violations.append(("nonsingular-degree-above-eight", (a, d)))
    for e in sorted(K.faces(1), key=sorted):
        a, b = sorted(e)
        if a not in sing and b not in sing:
            violations.append(
                ("edge-between-nonsingular-vertices", (a, b))
            )
    for t in sorted(sing):
        nbrs = [x for x in sorted(K.neighbors(t)) if x not in sing]
        if len(nbrs) > 1:
            violations.append(
                ("singular-vertex-with-multiple-nonsingular-neighbors",
                 (t, tuple(nbrs)))
            )
    return AuditReport(applicable, tuple(facts), tuple(violations))
