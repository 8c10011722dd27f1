"""Generic rigidity ranks over a prime field, and g2 lower bounds.

The rigidity matrix of a graph in ambient dimension d has one row per
edge and d columns per vertex: the row of edge uv carries the vector
p(u) - p(v) in u's column block and its negation in v's block.  At
generic positions its rank is the generic rigidity rank; a graph on
at least d+1 vertices is generically rigid when the rank reaches
d*|V| - C(d+1,2).

Random positions modulo a large prime stand in for generic ones.  A
full-rank outcome is a certificate (specialization can only lose
rank); a deficit could in principle be bad luck, so the verdict
records how many trials were taken.  For a 3-dimensional complex the
interesting ambient dimension is 4, where |E| - rank = g2 whenever
the skeleton is rigid.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from random import Random
from typing import Iterable, Optional

from .complexes import SimplicialComplex
from .defaults import DEFAULT_SEED
from .errors import DimensionError
from .surfaces import surface_g2

# Mersenne prime 2^61 - 1; comfortably above any desk-scale matrix
# size, so a rank deficit across independent trials is overwhelming
# evidence of genuine degeneracy.
DEFAULT_PRIME = (1 << 61) - 1
DEFAULT_TRIALS = 3


@dataclass(frozen=True)
class RigidityVerdict:
    graph_size: tuple  # (|V|, |E|)
    ambient_dim: int
    rank: int
    expected_full_rank: int
    is_generically_rigid: bool
    trials: int
    prime: int

    @property
    def edge_excess(self) -> int:
        """|E| - rank; equals g2 for rigid complex skeletons."""
        return self.graph_size[1] - self.rank

    def __str__(self) -> str:
        v, e = self.graph_size
        tag = "rigid" if self.is_generically_rigid else "not-rigid"
        return (
            f"V={v} E={e} dim={self.ambient_dim} rank={self.rank}"
            f"/{self.expected_full_rank} {tag} excess={self.edge_excess}"
        )


def _rank_mod_p(rows: list, p: int) -> int:
    """Gaussian elimination over GF(p); rows are mutable int lists."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] % p:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col] % p, p - 2, p)
        prow = [(x * inv) % p for x in rows[rank]]
        rows[rank] = prow
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                factor = rows[r][col] % p
                rows[r] = [
                    (a - factor * b) % p for a, b in zip(rows[r], prow)
                ]
        rank += 1
        col += 1
    return rank


def rigidity_rank(
    vertices: Iterable[int],
    edges: Iterable,
    dim: int = 4,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    prime: int = DEFAULT_PRIME,
) -> RigidityVerdict:
    """Probabilistic-exact generic rigidity rank of a graph.

    Runs up to ``trials`` independent random evaluations, keeping the
    best rank and stopping early once the theoretical ceiling
    min(|E|, dim*|V| - C(dim+1,2)) is reached.
    """
    vs = sorted(set(vertices))
    es = sorted(frozenset(e) for e in edges)
    if len(vs) < dim + 1:
        raise DimensionError(
            f"need at least {dim + 1} vertices for dimension {dim}, got {len(vs)}"
        )
    if any(len(e) != 2 or not e <= set(vs) for e in es):
        raise DimensionError("edges must be vertex pairs inside the vertex set")
    index = {v: i for i, v in enumerate(vs)}
    expected = dim * len(vs) - comb(dim + 1, 2)
    ceiling = min(len(es), expected)

    rng = Random(seed)
    best = 0
    used = 0
    for _ in range(max(1, trials)):
        used += 1
        coords = [
            [rng.randrange(prime) for _ in range(dim)] for _ in vs
        ]
        rows = []
        for e in es:
            u, v = sorted(e)
            iu, iv = index[u], index[v]
            row = [0] * (dim * len(vs))
            for k in range(dim):
                d = (coords[iu][k] - coords[iv][k]) % prime
                row[dim * iu + k] = d
                row[dim * iv + k] = (-d) % prime
            rows.append(row)
        best = max(best, _rank_mod_p(rows, prime))
        if best == ceiling:
            break
    return RigidityVerdict(
        graph_size=(len(vs), len(es)),
        ambient_dim=dim,
        rank=best,
        expected_full_rank=expected,
        is_generically_rigid=(best == expected),
        trials=used,
        prime=prime,
    )


def complex_rigidity(
    K: SimplicialComplex,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
) -> RigidityVerdict:
    """Rigidity verdict of the 1-skeleton of a 3-complex in dimension 4."""
    return rigidity_rank(K.vertices, K.faces(1), dim=4, seed=seed, trials=trials)


def _link_surface_g2(K: SimplicialComplex, v: int) -> int:
    return surface_g2(K.link((v,)).facets)


def external_link_edges(K: SimplicialComplex, v: int) -> list:
    """Edges of K with both endpoints in lk(v) that are not link edges."""
    L = K.link((v,))
    lv = L.vertices
    le = L.faces(1)
    out = [e for e in K.faces(1) if e <= lv and e not in le]
    return sorted(out, key=sorted)


def check_star_bound(K: SimplicialComplex, v: int) -> bool:
    """g2 of the complex is at least the surface g2 of the vertex link."""
    return K.f_vector().g2 >= _link_surface_g2(K, v)


def check_cone_augmented_bound(K: SimplicialComplex, v: int) -> "tuple[int, bool]":
    """Sharpened star bound: g2(K) >= g2(lk v) + n, with n the number
    of complex edges spanned by link vertices that the link is missing.

    Returns (n, whether the bound holds).
    """
    n = len(external_link_edges(K, v))
    holds = K.f_vector().g2 >= _link_surface_g2(K, v) + n
    return n, holds
