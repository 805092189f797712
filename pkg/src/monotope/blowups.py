"""Smoothness/reflexivity predicates and Delzant/monotone blow-ups.

A blow-up of size eps at a face F truncates the polytope by the halfspace
u_F . x <= b - eps, where u_F is the central normal (sum of primitive outer
normals of facets containing F) and b its supporting value.  On a monotone
polytope, a face of codimension k sits on the hyperplane u_F . x = k and the
only size producing another monotone polytope is k - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .linalg import Scalar, Vector, as_scalar, dot, vec_sub
from .polytope import Facet, FaceRef, Polytope, vertices_of


class BlowUpError(ValueError):
    """Raised when a requested blow-up cannot be performed."""


@dataclass(frozen=True)
class BlowUpSpec:
    """A face to blow up together with a positive rational size."""

    face: FaceRef
    size: Scalar

    def __post_init__(self):
        object.__setattr__(self, "size", as_scalar(self.size))
        if self.size <= 0:
            raise ValueError("blow-up size must be positive")
        if self.face.codim < 2:
            raise BlowUpError("codimension must be at least two")


@dataclass(frozen=True)
class BlowUpReport:
    result: Polytope
    excised: Polytope
    new_facet_index: int


# -- predicates -------------------------------------------------------------


@lru_cache(maxsize=8192)
def is_smooth(p: Polytope) -> bool:
    """Simple, and the primitive edge directions at each vertex are a lattice basis."""
    if not p.is_simple():
        return False
    at_vertex: dict[int, list[Vector]] = {i: [] for i in range(len(p.vertices))}
    for e in p.edges_with_lengths():
        a, b = e.endpoints
        at_vertex[a].append(vec_sub(p.vertices[b], p.vertices[a]))
        at_vertex[b].append(vec_sub(p.vertices[a], p.vertices[b]))
    for dirs in at_vertex.values():
        if len(dirs) != p.dim:
            return False
        prim = [linalg.primitive_direction(d) for d in dirs]
        if abs(linalg.det(prim)) != 1:
            return False
    return True


def is_reflexive(p: Polytope) -> bool:
    """All facet hyperplanes of the lattice polytope are at lattice distance one."""
    if not p.is_lattice():
        raise ValueError("not a lattice polytope")
    return all(f.offset == 1 for f in p.facets)


def is_monotone(p: Polytope) -> bool:
    """Smooth and reflexive (non-lattice polytopes are simply not monotone)."""
    if not p.is_lattice():
        return False
    return is_smooth(p) and is_reflexive(p)


# -- central normals and levels ---------------------------------------------


def central_normal(p: Polytope, face: FaceRef) -> tuple[int, ...]:
    """Sum of the primitive outer normals of all facets containing the face."""
    if not face.facet_indices or face.codim < 1 or face.codim > p.dim:
        raise ValueError("central normal requires a proper face")
    n = [0] * p.dim
    for i in face.facet_indices:
        for j, c in enumerate(p.facets[i].normal):
            n[j] += c
    return tuple(n)


def supporting_value(p: Polytope, u) -> Scalar:
    """Exact maximum of u . x over the polytope (attained at a vertex)."""
    return as_scalar(max(dot(u, v) for v in p.vertices))


def face_level(p: Polytope, face: FaceRef) -> int:
    """On a monotone polytope, a codim-k face lies on {u_face . x = k}."""
    u = central_normal(p, face)
    k = face.codim
    for vi in face.vertex_indices:
        if dot(u, p.vertices[vi]) != k:
            raise ValueError("monotone level violated")
    return k


# -- feasibility --------------------------------------------------------------


def _edges_leaving_face(p: Polytope, face: FaceRef):
    """Edges with exactly one endpoint in the face."""
    inside = set(face.vertex_indices)
    out = []
    for e in p.edges_with_lengths():
        a, b = e.endpoints
        if (a in inside) != (b in inside):
            out.append(e)
    return out


def blow_up_feasible(p: Polytope, face: FaceRef, eps) -> bool:
    """Whether a blow-up of the given size fits.

    The vertex test (u_F . v < b - eps for every vertex outside the face) and
    the leaving-edge length test are both evaluated and cross-asserted; they
    agree on smooth polytopes.
    """
    eps = as_scalar(eps)
    if eps <= 0:
        raise ValueError("blow-up size must be positive")
    u = central_normal(p, face)
    b = supporting_value(p, u)
    inside = set(face.vertex_indices)
    vertex_ok = all(dot(u, v) < b - eps
                    for i, v in enumerate(p.vertices) if i not in inside)
    edge_ok = all(e.lattice_length > eps for e in _edges_leaving_face(p, face))
    if is_smooth(p) and vertex_ok != edge_ok:
        raise AssertionError("vertex and edge feasibility tests disagree on a smooth polytope")
    return vertex_ok


def blow_up(p: Polytope, face: FaceRef, eps) -> BlowUpReport:
    """Truncate by u_F . x <= b - eps; returns the result and the excised piece."""
    if face.codim < 2:
        raise BlowUpError("codimension must be at least two")
    eps = as_scalar(eps)
    if not blow_up_feasible(p, face, eps):
        raise BlowUpError("blow-up size too large")
    u = central_normal(p, face)
    b = supporting_value(p, u)
    cut = Facet(u, b - eps)
    result = vertices_of(p.dim, list(p.facets) + [cut])
    if len(result.facets) != len(p.facets) + 1:
        raise AssertionError("blow-up did not add exactly one facet")
    flipped = Facet(tuple(-c for c in u), -(b - eps))
    excised = vertices_of(p.dim, list(p.facets) + [flipped])
    if result.normalized_volume() + excised.normalized_volume() != p.normalized_volume():
        raise AssertionError("blow-up volume additivity violated")
    if is_smooth(p) and not is_smooth(result):
        raise AssertionError("blow-up of a smooth polytope must stay smooth")
    return BlowUpReport(result, excised, len(p.facets))


def monotone_blow_up(p: Polytope, face: FaceRef) -> BlowUpReport:
    """The unique monotone blow-up at a codim-k face (size k - 1)."""
    if face.codim < 2:
        raise BlowUpError("codimension must be at least two")
    k = face.codim
    if not all(e.lattice_length >= k for e in _edges_leaving_face(p, face)):
        raise BlowUpError("no monotone blow-up at this face")
    report = blow_up(p, face, k - 1)
    if not is_monotone(report.result):
        raise AssertionError("monotone blow-up produced a non-monotone polytope")
    return report


def vertex_blowup_admissible(p: Polytope, v: FaceRef) -> bool:
    """Whether all edges at the vertex have lattice length >= dim."""
    if v.codim != p.dim or len(v.vertex_indices) != 1:
        raise ValueError("expected a vertex face")
    vi = v.vertex_indices[0]
    return all(e.lattice_length >= p.dim for e in p.edges_at_vertex(vi))


# -- disjointness --------------------------------------------------------------


def _halfspaces_nonempty(dim: int, normals, offsets) -> bool:
    """Exact emptiness test for a *bounded* halfspace intersection.

    Any nonempty bounded polyhedron has a vertex, and every vertex solves
    some dim linearly independent tight constraints, so scanning all basic
    solutions is complete.
    """
    m = len(normals)
    for subset in itertools.combinations(range(m), dim):
        try:
            x = linalg.solve_square([normals[i] for i in subset],
                                    [offsets[i] for i in subset])
        except ValueError:
            continue
        if all(dot(normals[i], x) <= offsets[i] for i in range(m)):
            return True
    return False


def excised_region_constraints(p: Polytope, spec: BlowUpSpec):
    """H-description of the region removed by a blow-up (P cap {u.x >= b-eps})."""
    u = central_normal(p, spec.face)
    b = supporting_value(p, u)
    normals = [f.normal for f in p.facets] + [tuple(-c for c in u)]
    offsets = [f.offset for f in p.facets] + [-(b - spec.size)]
    return normals, offsets


def blowups_disjoint(p: Polytope, specs: list[BlowUpSpec]) -> bool:
    """Whether the excised regions are pairwise disjoint as point sets.

    Touching along shared boundary counts as NOT disjoint.  Each spec must be
    individually feasible.  When pairwise disjointness holds, the global test
    (no point in all regions at once) is asserted as a cross-check.
    """
    for spec in specs:
        if not blow_up_feasible(p, spec.face, spec.size):
            raise BlowUpError("blow-up size too large")
    regions = [excised_region_constraints(p, s) for s in specs]
    pairwise = True
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            normals = regions[i][0] + [regions[j][0][-1]]
            offsets = regions[i][1] + [regions[j][1][-1]]
            if _halfspaces_nonempty(p.dim, normals, offsets):
                pairwise = False
                break
        if not pairwise:
            break
    if pairwise and len(regions) > 2:
        normals = regions[0][0] + [r[0][-1] for r in regions[1:]]
        offsets = regions[0][1] + [r[1][-1] for r in regions[1:]]
        if _halfspaces_nonempty(p.dim, normals, offsets):
            raise AssertionError("pairwise disjoint excisions share a common point")
    return pairwise
