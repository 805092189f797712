"""Canonical forms and lattice-equivalence tests for smooth polytopes.

Two lattice polytopes are equivalent when an integer matrix of determinant
+-1 (plus an integer translation, when the origin is not pinned) maps one
onto the other.  For a smooth polytope every such map carries a
(vertex, ordered-edge-frame) pair to another one, so minimizing the image
vertex list over all frames yields a complete canonical form.  For reflexive
polytopes translations are irrelevant, so the plain GL search is complete.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .linalg import vec_sub
from .polytope import Polytope, hull
from .blowups import is_smooth


@dataclass(frozen=True)
class CanonicalKey:
    """Lexicographically minimal vertex list over all unimodular frames."""

    dim: int
    canonical_vertices: tuple[tuple[int, ...], ...]

    def sort_key(self):
        flat = tuple(c for v in self.canonical_vertices for c in v)
        return (len(self.canonical_vertices), flat)


def _primitive_edge_frames(p: Polytope):
    """Yield (vertex_index, tuple of primitive edge directions) per vertex."""
    at_vertex: dict[int, list[tuple[int, ...]]] = {i: [] for i in range(len(p.vertices))}
    for e in p.edges_with_lengths():
        a, b = e.endpoints
        at_vertex[a].append(linalg.primitive_direction(vec_sub(p.vertices[b], p.vertices[a])))
        at_vertex[b].append(linalg.primitive_direction(vec_sub(p.vertices[a], p.vertices[b])))
    for vi, dirs in at_vertex.items():
        yield vi, tuple(sorted(dirs))


@lru_cache(maxsize=8192)
def canonical_form(p: Polytope) -> CanonicalKey:
    """Canonical key of a smooth lattice polytope.

    Polytopes with the origin in their interior (all reflexive ones in
    particular) are compared up to GL(n,Z) only.  Other smooth lattice
    polytopes are first translated so their lexicographically smallest
    vertex sits at the origin; that rule is part of the key definition.
    """
    if not p.is_lattice():
        raise ValueError("canonical form requires a lattice polytope")
    if not is_smooth(p):
        raise ValueError("canonical form requires a smooth polytope")
    verts = [linalg.to_int_vector(v) for v in p.vertices]
    if not p.contains_origin_interior():
        base = min(verts)
        verts = [tuple(c - b for c, b in zip(v, base)) for v in verts]
    n = p.dim
    best: tuple[tuple[int, ...], ...] | None = None
    for _, dirs in _primitive_edge_frames(p):
        for perm in itertools.permutations(dirs):
            frame_cols = perm  # frame maps e_i to perm[i]
            rows = tuple(zip(*frame_cols))
            inv = linalg.inverse_unimodular(rows)
            image = sorted(tuple(sum(inv[i][j] * v[j] for j in range(n)) for i in range(n))
                           for v in verts)
            cand = tuple(image)
            if best is None or cand < best:
                best = cand
    assert best is not None
    return CanonicalKey(n, best)


def are_equivalent(p: Polytope, q: Polytope) -> bool:
    """Whether an integer determinant +-1 matrix maps one polytope to the other."""
    if p.dim != q.dim or len(p.vertices) != len(q.vertices):
        return False
    return canonical_form(p) == canonical_form(q)


def canonical_representative(p: Polytope) -> Polytope:
    """The polytope spanned by the canonical vertex list itself."""
    key = canonical_form(p)
    return hull(key.dim, key.canonical_vertices)


def random_unimodular_matrix(n: int, rng: random.Random, shears: int = 4):
    """A random determinant +-1 integer matrix built from shears and signed permutations."""
    perm = list(range(n))
    rng.shuffle(perm)
    m = [[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        if rng.random() < 0.5:
            m[i] = [-c for c in m[i]]
    for _ in range(shears):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    mt = tuple(tuple(r) for r in m)
    assert abs(linalg.det(mt)) == 1
    return mt


def apply_unimodular(p: Polytope, m) -> Polytope:
    """The image polytope under x -> m x (m integer, det +-1)."""
    return hull(p.dim, [linalg.mat_vec(m, v) for v in p.vertices])
