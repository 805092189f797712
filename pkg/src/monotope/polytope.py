"""Rational polytopes at small dimension with exact dual representations.

A :class:`Polytope` carries both the vertex description and the irredundant
facet description (primitive integer outer normals with rational offsets),
together with the vertex-facet incidence.  Face enumeration, lattice edge
lengths, f-vectors and normalized volumes are all computed exactly.

Construction goes through :func:`hull` (V to H) or :func:`vertices_of`
(H to V); both use brute-force exact searches that are perfectly adequate
at the intended scale (dimension <= 4, a few dozen vertices).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import linalg
from .linalg import Scalar, Vector, as_scalar, as_vector, dot, vec_sub


@dataclass(frozen=True)
class Facet:
    """Halfspace normal . x <= offset with a primitive integer outer normal."""

    normal: tuple[int, ...]
    offset: Scalar

    def __post_init__(self):
        object.__setattr__(self, "normal", linalg.to_int_vector(self.normal))
        object.__setattr__(self, "offset", as_scalar(self.offset))
        if all(c == 0 for c in self.normal):
            raise ValueError("facet normal must be nonzero")
        if self.normal != linalg.primitive_part(self.normal):
            raise ValueError("facet normal must be primitive")


@dataclass(frozen=True)
class FaceRef:
    """A face named by the (maximal) set of facets containing it."""

    facet_indices: tuple[int, ...]
    vertex_indices: tuple[int, ...]
    codim: int

    def __post_init__(self):
        object.__setattr__(self, "facet_indices", tuple(sorted(self.facet_indices)))
        object.__setattr__(self, "vertex_indices", tuple(sorted(self.vertex_indices)))


@dataclass(frozen=True)
class Edge:
    """A 1-dimensional face with its exact lattice length."""

    endpoints: tuple[int, int]
    lattice_length: Scalar


def lattice_length(a: Vector, b: Vector) -> Scalar:
    """Length of segment ab relative to the lattice.

    This is the unique l > 0 such that (b - a)/l is a primitive integer
    vector; for lattice endpoints it is a positive integer.
    """
    d = vec_sub(b, a)
    if all(c == 0 for c in d):
        raise ValueError("zero-length segment")
    mult = 1
    for c in d:
        if isinstance(c, Fraction):
            mult = mult * c.denominator // gcd(mult, c.denominator)
    z = [int(c * mult) for c in d]
    g = 0
    for c in z:
        g = gcd(g, abs(c))
    return as_scalar(Fraction(g, mult))


@dataclass(frozen=True)
class Polytope:
    """Full-dimensional polytope with consistent V- and H-representations."""

    dim: int
    vertices: tuple[Vector, ...]
    facets: tuple[Facet, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(as_vector(v) for v in self.vertices))
        for v in self.vertices:
            if len(v) != self.dim:
                raise ValueError("vertex dimension mismatch")
        for v in self.vertices:
            for f in self.facets:
                if dot(f.normal, v) > f.offset:
                    raise ValueError("vertex violates a facet inequality")

    # -- incidence ---------------------------------------------------------

    @cached_property
    def vertex_facets(self) -> tuple[frozenset[int], ...]:
        """For each vertex, the indices of facets it lies on."""
        out = []
        for v in self.vertices:
            out.append(frozenset(
                i for i, f in enumerate(self.facets) if dot(f.normal, v) == f.offset))
        return tuple(out)

    @cached_property
    def facet_vertices(self) -> tuple[frozenset[int], ...]:
        """For each facet, the indices of vertices lying on it."""
        out = [set() for _ in self.facets]
        for vi, tight in enumerate(self.vertex_facets):
            for fi in tight:
                out[fi].add(vi)
        return tuple(frozenset(s) for s in out)

    @property
    def incidence(self) -> tuple[tuple[bool, ...], ...]:
        """Vertex x facet boolean incidence matrix."""
        return tuple(tuple(fi in tight for fi in range(len(self.facets)))
                     for tight in self.vertex_facets)

    def is_lattice(self) -> bool:
        return all(linalg.is_integral(v) for v in self.vertices)

    def is_simple(self) -> bool:
        """True iff every vertex lies on exactly dim facets."""
        return all(len(t) == self.dim for t in self.vertex_facets)

    # -- face lattice ------------------------------------------------------

    @cached_property
    def _face_sets(self) -> dict[frozenset[int], int]:
        """All nonempty proper face vertex sets, mapped to their codimension.

        Faces are intersections of facet vertex sets, closed under pairwise
        intersection; codimension is computed from the affine span.
        """
        seen: dict[frozenset[int], int] = {}
        queue = [s for s in self.facet_vertices if s]
        pending = set(queue)
        while queue:
            s = queue.pop()
            for g in self.facet_vertices:
                t = s & g
                if t and t not in pending:
                    pending.add(t)
                    queue.append(t)
        for s in pending:
            seen[s] = self.dim - _affine_dim([self.vertices[i] for i in s])
        return seen

    def faces(self, codim: int) -> list[FaceRef]:
        """All faces of the given codimension (0 = the polytope itself)."""
        if codim < 0 or codim > self.dim:
            raise ValueError("codimension out of range")
        if codim == 0:
            return [FaceRef((), tuple(range(len(self.vertices))), 0)]
        out = []
        for vset, k in self._face_sets.items():
            if k != codim:
                continue
            fset = tuple(i for i, g in enumerate(self.facet_vertices) if vset <= g)
            out.append(FaceRef(fset, tuple(vset), k))
        out.sort(key=lambda f: f.vertex_indices)
        return out

    def all_proper_faces(self) -> list[FaceRef]:
        return [f for k in range(1, self.dim + 1) for f in self.faces(k)]

    def face_from_facets(self, facet_indices) -> FaceRef:
        """The face cut out by the given facets, addressed externally.

        The returned FaceRef carries the maximal facet set of that face.
        """
        idx = sorted(set(facet_indices))
        if any(i < 0 or i >= len(self.facets) for i in idx):
            raise ValueError("facet index out of range")
        if not idx:
            raise ValueError("empty facet set does not name a proper face")
        vset = frozenset(range(len(self.vertices)))
        for i in idx:
            vset &= self.facet_vertices[i]
        if not vset or vset not in self._face_sets:
            raise ValueError("the given facets do not intersect in a face")
        fset = tuple(i for i, g in enumerate(self.facet_vertices) if vset <= g)
        return FaceRef(fset, tuple(vset), self._face_sets[vset])

    def face_from_vertex(self, vertex_index: int) -> FaceRef:
        if vertex_index < 0 or vertex_index >= len(self.vertices):
            raise ValueError("vertex index out of range")
        return FaceRef(tuple(self.vertex_facets[vertex_index]), (vertex_index,), self.dim)

    # -- edges, f-vector, volume -------------------------------------------

    @cached_property
    def _edges(self) -> tuple[Edge, ...]:
        if self.dim == 1:
            pairs = [tuple(range(len(self.vertices)))]
        else:
            pairs = [f.vertex_indices for f in self.faces(self.dim - 1)]
        return tuple(Edge((a, b), lattice_length(self.vertices[a], self.vertices[b]))
                     for (a, b) in pairs)

    def edges_with_lengths(self) -> list[Edge]:
        """All 1-dimensional faces with exact lattice lengths."""
        return list(self._edges)

    def edges_at_vertex(self, vertex_index: int) -> list[Edge]:
        return [e for e in self.edges_with_lengths() if vertex_index in e.endpoints]

    def f_vector(self) -> tuple[int, ...]:
        """(f_0, ..., f_{n-1}): face counts by dimension."""
        counts = [0] * self.dim
        for _, k in self._face_sets.items():
            if 1 <= k <= self.dim:
                counts[self.dim - k] += 1
        return tuple(counts)

    @cached_property
    def _triangulation(self) -> tuple[tuple[int, ...], ...]:
        """A star triangulation into dim-simplices (tuples of vertex indices)."""
        by_vset: dict[frozenset[int], FaceRef] = {}
        for f in self.all_proper_faces():
            by_vset[frozenset(f.vertex_indices)] = f

        children: dict[frozenset[int], list[frozenset[int]]] = {s: [] for s in by_vset}
        for s, f in by_vset.items():
            d = self.dim - f.codim
            for t, g in by_vset.items():
                if self.dim - g.codim == d - 1 and t < s:
                    children[s].append(t)

        memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

        def tri(vset: frozenset[int]) -> list[tuple[int, ...]]:
            if vset in memo:
                return memo[vset]
            if len(vset) == 1:
                memo[vset] = [tuple(vset)]
                return memo[vset]
            apex = min(vset)
            simps = []
            for sub in children[vset]:
                if apex in sub:
                    continue
                for s in tri(sub):
                    simps.append((apex,) + s)
            memo[vset] = simps
            return simps

        top = []
        apex = 0
        for fvs in self.facet_vertices:
            if apex in fvs:
                continue
            for s in tri(fvs):
                top.append((apex,) + s)
        return tuple(top)

    @cached_property
    def _normalized_volume(self) -> Scalar:
        total = Fraction(0)
        for simp in self._triangulation:
            base = self.vertices[simp[0]]
            m = [vec_sub(self.vertices[i], base) for i in simp[1:]]
            total += abs(Fraction(linalg.det(m)))
        return as_scalar(total)

    def normalized_volume(self) -> Scalar:
        """dim! times the Euclidean volume; an integer for lattice polytopes."""
        return self._normalized_volume

    def contains_origin_interior(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    def __repr__(self):
        return (f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"facets={len(self.facets)})")


def _affine_dim(points) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [vec_sub(p, base) for p in points[1:]]
    if not diffs:
        return 0
    return linalg.rank(diffs)


def _supporting_hyperplanes(dim, points):
    """All irredundant facets of conv(points), by exhaustive subset search."""
    facets: dict[tuple[tuple[int, ...], Scalar], None] = {}
    for subset in itertools.combinations(range(len(points)), dim):
        pts = [points[i] for i in subset]
        diffs = [vec_sub(p, pts[0]) for p in pts[1:]]
        normal = linalg.kernel_vector(diffs) if dim > 1 else (1,)
        if normal is None:
            continue
        b = dot(normal, pts[0])
        lo = hi = False
        for p in points:
            s = dot(normal, p)
            if s > b:
                hi = True
            elif s < b:
                lo = True
            if hi and lo:
                break
        if hi and lo:
            continue
        if hi:  # flip so all points satisfy normal . x <= b
            normal = tuple(-c for c in normal)
            b = -b
        facets[(normal, as_scalar(b))] = None
    return [Facet(n, b) for (n, b) in facets]


def hull(dim: int, points) -> Polytope:
    """Convex hull: drops non-vertices, produces irredundant primitive facets."""
    pts = []
    seen = set()
    for p in points:
        v = as_vector(p)
        if len(v) != dim:
            raise ValueError("point dimension mismatch")
        if v not in seen:
            seen.add(v)
            pts.append(v)
    if _affine_dim(pts) != dim:
        raise ValueError("degenerate input")
    facets = _supporting_hyperplanes(dim, pts)
    facets.sort(key=lambda f: (f.normal, f.offset))
    verts = []
    for p in pts:
        tight = [f.normal for f in facets if dot(f.normal, p) == f.offset]
        if len(tight) >= dim and linalg.rank(tight) == dim:
            verts.append(p)
    return Polytope(dim, tuple(verts), tuple(facets))


def _candidate_vertices(dim, normals, offsets):
    """Basic feasible points of the system normals . x <= offsets."""
    m = len(normals)
    verts: dict[Vector, None] = {}
    for subset in itertools.combinations(range(m), dim):
        sub = [normals[i] for i in subset]
        try:
            x = linalg.solve_square(sub, [offsets[i] for i in subset])
        except ValueError:
            continue
        if all(dot(normals[i], x) <= offsets[i] for i in range(m)):
            verts.setdefault(x)
    return list(verts)


def _is_bounded(dim, normals) -> bool:
    """Exact test that {x : normals . x <= b} has trivial recession cone."""
    if linalg.rank(normals) < dim:
        return False
    if dim == 1:
        dirs = [(1,), (-1,)]
    else:
        dirs = []
        seen = set()
        for subset in itertools.combinations(range(len(normals)), dim - 1):
            d = linalg.kernel_vector([normals[i] for i in subset])
            if d is None:
                continue
            for cand in (d, tuple(-c for c in d)):
                if cand not in seen:
                    seen.add(cand)
                    dirs.append(cand)
    for d in dirs:
        if all(dot(u, d) <= 0 for u in normals):
            return False
    return True


def vertices_of(dim: int, facets) -> Polytope:
    """Vertex enumeration of a bounded halfspace intersection.

    Tolerates redundant input halfspaces (they are dropped); the facet order
    of the result follows the first supporting occurrence in the input.
    """
    fl = [f if isinstance(f, Facet) else Facet(*f) for f in facets]
    normals = [f.normal for f in fl]
    offsets = [f.offset for f in fl]
    if not _is_bounded(dim, normals):
        raise ValueError("unbounded")
    verts = _candidate_vertices(dim, normals, offsets)
    if _affine_dim(verts) != dim:
        raise ValueError("degenerate")
    p = hull(dim, sorted(verts))
    order = {(f.normal, f.offset): i for i, f in enumerate(fl)}
    for f in p.facets:
        if (f.normal, f.offset) not in order:
            raise AssertionError("hull produced a facet outside the input system")
    fs = sorted(p.facets, key=lambda f: order[(f.normal, f.offset)])
    return Polytope(dim, p.vertices, tuple(fs))


def monotone_simplex(n: int) -> Polytope:
    """The unique monotone n-simplex {x_i >= -1, sum x_i <= 1}.

    All its edges have lattice length n + 1 and its normalized volume is
    (n + 1)^n.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    verts = [tuple(-1 for _ in range(n))]
    for i in range(n):
        v = [-1] * n
        v[i] += n + 1
        verts.append(tuple(v))
    return hull(n, verts)


def validate(p: Polytope) -> None:
    """Check the mutual-consistency invariants of both representations."""
    if _affine_dim(list(p.vertices)) != p.dim:
        raise AssertionError("not full-dimensional")
    q = hull(p.dim, p.vertices)
    if set(q.vertices) != set(p.vertices):
        raise AssertionError("vertex list contains non-vertices")
    if {(f.normal, f.offset) for f in q.facets} != {(f.normal, f.offset) for f in p.facets}:
        raise AssertionError("facet list is not the irredundant hull description")
    for fi, fvs in enumerate(p.facet_vertices):
        pts = [p.vertices[i] for i in fvs]
        if _affine_dim(pts) != p.dim - 1:
            raise AssertionError("facet has too few affinely independent vertices")
    for tight in p.vertex_facets:
        if len(tight) < p.dim:
            raise AssertionError("vertex on fewer than dim facets")
