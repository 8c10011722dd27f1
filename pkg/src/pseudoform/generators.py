"""Construction of test-worthy complexes, each with a replayable trace.

Deterministic families (boundary simplex, stacked spheres, the
cross-polytope, spheres with a high-degree spine edge, staircase
spheres) plus seeded random walks over the local moves.  Everything a
generator emits comes with a :class:`~pseudoform.reducer.ConstructionTrace`
that replays to the returned complex label for label.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Optional

from . import moves, reducer
from .complexes import SimplicialComplex, total_g2, validate_normal
from .defaults import DEFAULT_SEED
from .errors import MoveError, PseudoformError
from .surfaces import RP2


def boundary_simplex(base: int = 0) -> SimplicialComplex:
    """The boundary of a 4-simplex on labels base..base+4."""
    return SimplicialComplex.from_facets(
        itertools.combinations(range(base, base + 5), 4)
    )


def spine_path_sphere(blocks: int) -> SimplicialComplex:
    """Sphere built by repeatedly subdividing a facet at the edge {0,1}.

    With ``blocks`` >= 6 the edge {0,1} has degree >= 8 and its link
    cycle is long enough that folds identifying well-separated facets
    become admissible; these are the standard foldable test spheres.
    """
    if blocks < 1:
        raise ValueError("blocks must be positive")
    K = boundary_simplex()
    for j in range(1, blocks):
        K, _ = moves.facet_subdivide(K, (0, 1, j + 2, j + 3), fresh=j + 4)
    return K


def staircase_sphere(blocks: int) -> SimplicialComplex:
    """Stacked sphere whose blocks form a line with a drifting frontier.

    Each subdivision targets the four most recent labels, so vertex
    roles retire as the construction advances; with 9 or more blocks
    the two ends are far enough apart for a handle identification.
    """
    if blocks < 1:
        raise ValueError("blocks must be positive")
    K = boundary_simplex()
    for w in range(5, blocks + 4):
        K, _ = moves.facet_subdivide(K, (w - 4, w - 3, w - 2, w - 1), fresh=w)
    return K


def cross_polytope() -> SimplicialComplex:
    """The 16-cell: 8 vertices in antipodal pairs, 16 facets."""
    pairs = [(0, 1), (2, 3), (4, 5), (6, 7)]
    return SimplicialComplex.from_facets(itertools.product(*pairs))


# ---------------------------------------------------------------------
# fold and handle search
# ---------------------------------------------------------------------


def admissible_folds(K: SimplicialComplex) -> list:
    """All admissible folds as (sigma1, sigma2, psi-pairs), sorted.

    Facet pairs must share exactly one edge; the map fixes that edge,
    leaving two candidate matchings of the remaining corners.
    """
    out = []
    facets = sorted((tuple(sorted(F)) for F in K.facets))
    for s1, s2 in itertools.combinations(facets, 2):
        shared = set(s1) & set(s2)
        if len(shared) != 2:
            continue
        rest1 = [x for x in s1 if x not in shared]
        rest2 = [x for x in s2 if x not in shared]
        for r2 in (rest2, rest2[::-1]):
            psi = {x: x for x in shared}
            psi.update(zip(rest1, r2))
            try:
                moves.edge_fold(K, s1, s2, psi)
            except PseudoformError:
                continue
            out.append((s1, s2, tuple(sorted(psi.items()))))
    return out


def find_admissible_fold(K: SimplicialComplex) -> Optional[tuple]:
    """Lexicographically first admissible fold, or None."""
    for s1, s2 in itertools.combinations(
        sorted(tuple(sorted(F)) for F in K.facets), 2
    ):
        shared = set(s1) & set(s2)
        if len(shared) != 2:
            continue
        rest1 = [x for x in s1 if x not in shared]
        rest2 = [x for x in s2 if x not in shared]
        for r2 in (rest2, rest2[::-1]):
            psi = {x: x for x in shared}
            psi.update(zip(rest1, r2))
            try:
                moves.edge_fold(K, s1, s2, psi)
            except PseudoformError:
                continue
            return (s1, s2, tuple(sorted(psi.items())))
    return None


def admissible_handles(K: SimplicialComplex) -> list:
    """All admissible handle identifications, sorted.

    A bijection between two disjoint facets qualifies when every
    vertex moves to graph distance at least 3.
    """
    dist = {v: K.graph_distances(v) for v in K.vertices}
    out = []
    facets = sorted(tuple(sorted(F)) for F in K.facets)
    for s1, s2 in itertools.combinations(facets, 2):
        if set(s1) & set(s2):
            continue
        for perm in itertools.permutations(s2):
            if all(dist[x].get(y, 99) >= 3 for x, y in zip(s1, perm)):
                out.append((s1, s2, tuple(zip(s1, perm))))
    return out


def find_admissible_handle(K: SimplicialComplex) -> Optional[tuple]:
    hs = admissible_handles(K)
    return hs[0] if hs else None


# ---------------------------------------------------------------------
# generator specs
# ---------------------------------------------------------------------

BOUNDARY_SIMPLEX = "BoundarySimplex"
STACKED_SPHERE = "StackedSphere"
CROSS_POLYTOPE = "CrossPolytope"
RANDOM_MOVES = "RandomMoves"

_SPEC_RE = re.compile(r"^([A-Za-z]+)(?:\((.*)\))?$")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: tuple  # ((key, value), ...)

    def get(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={_fmt(v)}" for k, v in self.params)
        return f"{self.kind}({inner})"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


_SPEC_DEFAULTS = {
    BOUNDARY_SIMPLEX: (),
    STACKED_SPHERE: (("blocks", 3),),
    CROSS_POLYTOPE: (),
    RANDOM_MOVES: (
        ("seed", DEFAULT_SEED),
        ("budget", 20),
        ("allow_fold", False),
        ("g2_cap", 9),
    ),
}


def parse_generator_spec(text: str) -> GeneratorSpec:
    """Parse e.g. ``StackedSphere(4)`` or
    ``RandomMoves(seed=7,budget=30,allow_fold=true)``."""
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad generator spec {text!r}")
    kind, argtext = m.group(1), m.group(2)
    if kind not in _SPEC_DEFAULTS:
        known = ", ".join(sorted(_SPEC_DEFAULTS))
        raise ValueError(f"unknown generator {kind!r} (known: {known})")
    params = dict(_SPEC_DEFAULTS[kind])
    if argtext:
        tokens = [t.strip() for t in argtext.split(",") if t.strip()]
        positional = [k for k, _ in _SPEC_DEFAULTS[kind]]
        for i, tok in enumerate(tokens):
            if "=" in tok:
                key, val = (s.strip() for s in tok.split("=", 1))
            else:
                if i >= len(positional):
                    raise ValueError(f"too many arguments in {text!r}")
                key, val = positional[i], tok
            if key not in params:
                raise ValueError(f"unknown argument {key!r} for {kind}")
            if val in ("true", "false"):
                params[key] = val == "true"
            else:
                try:
                    params[key] = int(val)
                except ValueError:
                    raise ValueError(
                        f"argument {key}={val!r} is neither an integer "
                        "nor true/false"
                    ) from None
    return GeneratorSpec(kind, tuple(params.items()))


@dataclass(frozen=True)
class GeneratedComplex:
    spec: GeneratorSpec
    complex: SimplicialComplex
    trace: "reducer.ConstructionTrace"
    stalled: bool = False
    note: str = ""


def _trace_for(K, seeds, forward) -> "reducer.ConstructionTrace":
    return reducer.ConstructionTrace(
        seeds=tuple(seeds),
        forward_moves=tuple(forward),
        claimed_fcounts=tuple(len(K.faces(d)) for d in range(4)),
        claimed_g2=total_g2(K),
    )


def _gen_stacked(blocks: int, seed: int) -> GeneratedComplex:
    """Stacked sphere as an explicit chain of connected sums.

    Each new block is a fresh boundary simplex glued over a randomly
    chosen facet; only the block's apex label survives the gluing.
    """
    if blocks < 1:
        raise ValueError("blocks must be positive")
    rng = random.Random(seed)
    K = boundary_simplex()
    seeds = [K]
    forward = []
    for i in range(1, blocks):
        block = boundary_simplex(base=5 * i)
        target = rng.choice(sorted(tuple(sorted(F)) for F in K.facets))
        glue = tuple(range(5 * i, 5 * i + 4))
        psi = dict(zip(target, glue))
        K, rec = moves.connected_sum(K, target, block, glue, psi)
        seeds.append(block)
        forward.append((0, rec))
    spec = GeneratorSpec(STACKED_SPHERE, (("blocks", blocks),))
    return GeneratedComplex(spec, K, _trace_for(K, seeds, forward))


_RANDOM_KINDS = (
    moves.BISTELLAR1,
    moves.BISTELLAR2,
    moves.EDGE_EXPAND,
    moves.EDGE_CONTRACT,
    moves.TWO_FACETS_INSERT,
    moves.TWO_FACETS_CONTRACT,
    moves.FACET_SUBDIVIDE,
    moves.FACET_UNSUBDIVIDE,
    moves.EDGE_FOLD,
)


def _link_three_cycles(K: SimplicialComplex, v: int) -> list:
    """3-cycles in lk(v): its triangles and its missing triangles."""
    L = K.link((v,))
    edges = L.faces(1)
    out = list(L.faces(2))
    for t in itertools.combinations(sorted(L.vertices), 3):
        ft = frozenset(t)
        if ft not in out and all(
            frozenset(e) in edges for e in itertools.combinations(t, 2)
        ):
            out.append(ft)
    return sorted((tuple(sorted(t)) for t in out))


def _in_scope(K: SimplicialComplex, g2_cap: int) -> bool:
    for comp in K.connected_components():
        rep = validate_normal(comp)
        if not rep.is_normal_closed:
            return False
        sing = rep.singular_vertices
        if sing:
            if len(sing) != 2:
                return False
            if any(cls.kind != RP2 for _, cls in sing):
                return False
            if comp.f_vector().g2 not in (3, 4):
                return False
    return total_g2(K) <= g2_cap


def _gen_random(
    seed: int, budget: int, allow_fold: bool, g2_cap: int
) -> GeneratedComplex:
    rng = random.Random(seed)
    K = boundary_simplex()
    seeds = [K]
    forward = []
    note = ""
    stalled = False
    steps = 0
    while steps < budget:
        candidates = {}
        singular = bool(validate_normal(K).singular_vertices)
        for kind in _RANDOM_KINDS:
            if kind == moves.BISTELLAR1:
                sites = moves.bistellar_one_sites(K)
            elif kind == moves.BISTELLAR2:
                sites = moves.bistellar_two_sites(K)
            elif kind == moves.EDGE_EXPAND:
                sites = [
                    (v, cyc)
                    for v in sorted(K.vertices)
                    for cyc in _link_three_cycles(K, v)
                ]
            elif kind == moves.EDGE_CONTRACT:
                sites = moves.contractible_edges(K)
            elif kind == moves.TWO_FACETS_INSERT:
                sites = moves.insertion_sites(K)
            elif kind == moves.TWO_FACETS_CONTRACT:
                sites = moves.contraction_pair_sites(K)
            elif kind == moves.FACET_SUBDIVIDE:
                sites = sorted(tuple(sorted(F)) for F in K.facets)
            elif kind == moves.FACET_UNSUBDIVIDE:
                sites = moves.unsubdividable_vertices(K)
            else:  # EdgeFold
                if not allow_fold or singular:
                    sites = []
                else:
                    sites = admissible_folds(K)
            if sites:
                candidates[kind] = sites
        progressed = False
        for kind in rng.sample(sorted(candidates), k=len(candidates)):
            sites = candidates[kind]
            site = rng.choice(sites)
            try:
                K2, rec = _apply_site(K, kind, site, rng)
            except PseudoformError:
                continue
            if not _in_scope(K2, g2_cap):
                continue
            K = K2
            forward.append((0, rec))
            progressed = True
            break
        if not progressed:
            stalled = True
            note = f"stalled after {steps} of {budget} moves"
            break
        steps += 1
    spec = GeneratorSpec(
        RANDOM_MOVES,
        (
            ("seed", seed),
            ("budget", budget),
            ("allow_fold", allow_fold),
            ("g2_cap", g2_cap),
        ),
    )
    return GeneratedComplex(
        spec, K, _trace_for(K, seeds, forward), stalled=stalled, note=note
    )


def _apply_site(K, kind, site, rng):
    fresh = K.fresh_label()
    if kind == moves.BISTELLAR1:
        tri, _apexes = site
        return moves.bistellar_one(K, tri)
    if kind == moves.BISTELLAR2:
        edge, _tri = site
        return moves.bistellar_two(K, edge)
    if kind == moves.EDGE_EXPAND:
        v, cyc = site
        return moves.expand_edge(
            K, v, cyc, u_side=rng.randrange(2), apexes=(fresh, fresh + 1)
        )
    if kind == moves.EDGE_CONTRACT:
        edge, _deg = site
        return moves.contract_edge(K, edge, fresh=fresh)
    if kind == moves.TWO_FACETS_INSERT:
        v, tri = site
        return moves.insert_two_facets(K, v, tri, apexes=(fresh, fresh + 1))
    if kind == moves.TWO_FACETS_CONTRACT:
        u, v, _tri = site
        return moves.contract_two_facets(K, u, v, fresh=fresh)
    if kind == moves.FACET_SUBDIVIDE:
        return moves.facet_subdivide(K, site, fresh=fresh)
    if kind == moves.FACET_UNSUBDIVIDE:
        w, _tet = site
        return moves.facet_unsubdivide(K, w)
    if kind == moves.EDGE_FOLD:
        s1, s2, psi_pairs = site
        return moves.edge_fold(K, s1, s2, dict(psi_pairs))
    raise MoveError(f"no site handler for {kind}")


def generate(spec: GeneratorSpec) -> GeneratedComplex:
    """Build the complex a spec describes, with a replayable trace."""
    if spec.kind == BOUNDARY_SIMPLEX:
        K = boundary_simplex()
        return GeneratedComplex(spec, K, _trace_for(K, [K], []))
    if spec.kind == STACKED_SPHERE:
        return _gen_stacked(spec.get("blocks"), seed=DEFAULT_SEED)
    if spec.kind == CROSS_POLYTOPE:
        K = cross_polytope()
        rep = reducer.reduce_complex(K)
        if not rep.accepted:  # pragma: no cover - fixed input
            raise MoveError(f"cross-polytope failed to reduce: {rep.reason}")
        return GeneratedComplex(spec, K, rep.trace)
    if spec.kind == RANDOM_MOVES:
        return _gen_random(
            spec.get("seed"),
            spec.get("budget"),
            spec.get("allow_fold"),
            spec.get("g2_cap"),
        )
    raise ValueError(f"unknown generator kind {spec.kind!r}")
