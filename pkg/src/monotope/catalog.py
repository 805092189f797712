"""Exhaustive catalogs of monotone polytopes (dim <= 3) and their blow-up DAG.

The enumeration searches all subsets of candidate facet normals (primitive
vectors with coordinates in {-1, 0, 1}, all offsets fixed to 1) up to a
per-dimension facet bound, keeping the subsets that cut out a bounded lattice
polytope which is smooth with every chosen normal supporting a facet.  The
candidate coordinate range is an assumption validated a posteriori against
the known class counts (1, 5, 18); the search itself is exact.

Most subsets die in O(1) bitmask tests: boundedness is decided exactly by a
precomputed set of potential recession directions, and vertex data for every
normal n-subset (basic point, feasibility/tightness masks, lattice and
unimodularity flags) is precomputed once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .linalg import Scalar, dot
from .polytope import Facet, FaceRef, Polytope, hull, monotone_simplex, vertices_of
from .blowups import (BlowUpSpec, blowups_disjoint, is_monotone, monotone_blow_up,
                      vertex_blowup_admissible)
from .equivalence import CanonicalKey, canonical_form


@dataclass(frozen=True)
class EnumerationConfig:
    """Search bounds for the monotone-polytope enumeration."""

    ray_coordinate_bound: int = 1
    # max facet count: 2 for segments, 6 for polygons (hexagon),
    # 8 for 3-polytopes (largest row of the blow-up diagram)
    max_facets_by_dim: tuple[tuple[int, int], ...] = ((1, 2), (2, 6), (3, 8))

    def max_facets(self, dim: int) -> int:
        for d, m in self.max_facets_by_dim:
            if d == dim:
                return m
        raise ValueError(f"no facet bound configured for dimension {dim}")


@dataclass(frozen=True)
class CatalogEntry:
    key: CanonicalKey
    polytope: Polytope
    f_vector: tuple[int, ...]
    normalized_volume: Scalar

    @property
    def num_facets(self) -> int:
        return len(self.polytope.facets)


@dataclass(frozen=True)
class Catalog:
    dim: int
    entries: tuple[CatalogEntry, ...]

    def index_of(self, key: CanonicalKey) -> int:
        for i, e in enumerate(self.entries):
            if e.key == key:
                return i
        raise KeyError("key not in catalog")

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class DagEdge:
    source: int
    target: int
    codim: int
    is_vertex_blowup: bool
    multiplicity: int


@dataclass(frozen=True)
class BlowUpDag:
    catalog: Catalog
    edges: tuple[DagEdge, ...]


# -- candidate machinery ------------------------------------------------------


def _candidate_rays(n: int) -> list[tuple[int, ...]]:
    return sorted(v for v in itertools.product((-1, 0, 1), repeat=n) if any(v))


def _recession_probes(n: int, rays) -> list[tuple[int, ...]]:
    """Directions whose positive coverage decides boundedness exactly.

    Every nontrivial recession cone of {x : u.x <= 1, u in S} contains either
    a lineality direction or an extreme ray, and both lie in the kernel of
    some (n-1)-subset of the candidate normals; so if every kernel direction
    has a chosen normal with positive inner product, the polytope is bounded.
    """
    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()

    def add(d):
        for s in (d, tuple(-c for c in d)):
            if s not in seen:
                seen.add(s)
                out.append(s)

    if n == 1:
        add((1,))
        return out
    for subset in itertools.combinations(rays, n - 1):
        d = linalg.kernel_vector(subset)
        if d is not None:
            add(d)
    return out


def _signed_permutations(n: int):
    """All signed permutation maps as coordinate transforms on integer tuples."""
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield lambda v, perm=perm, signs=signs: tuple(
                signs[i] * v[perm[i]] for i in range(n))


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass
class _SearchTables:
    rays: list[tuple[int, ...]]
    probe_masks: list[int]
    probe_full: int
    # (i_1 < ... < i_n) -> (feasible_mask, tight_mask, vertex_ok)
    tuples: dict[tuple[int, ...], tuple[int, int, bool]]
    ray_index: dict[tuple[int, ...], int]


def _build_tables(n: int) -> _SearchTables:
    rays = _candidate_rays(n)
    probes = _recession_probes(n, rays)
    probe_masks = []
    for u in rays:
        m = 0
        for j, d in enumerate(probes):
            if dot(u, d) > 0:
                m |= 1 << j
        probe_masks.append(m)
    probe_full = (1 << len(probes)) - 1

    tuples: dict[tuple[int, ...], tuple[int, int, bool]] = {}
    ones = tuple(1 for _ in range(n))
    for subset in itertools.combinations(range(len(rays)), n):
        mat = [rays[i] for i in subset]
        d = linalg.det(mat)
        if d == 0:
            continue
        x = linalg.solve_square(mat, ones)
        feas = 0
        tight = 0
        for j, u in enumerate(rays):
            s = dot(u, x)
            if s <= 1:
                feas |= 1 << j
                if s == 1:
                    tight |= 1 << j
        lattice = all(isinstance(c, int) or c.denominator == 1 for c in x)
        vertex_ok = lattice and abs(d) == 1
        tuples[subset] = (feas, tight, vertex_ok)
    return _SearchTables(rays, probe_masks, probe_full,
                         tuples, {u: i for i, u in enumerate(rays)})


def _accept_subset(n: int, subset: tuple[int, ...], mask: int,
                   tables: _SearchTables) -> bool:
    """Exact test: does this normal set cut out a monotone polytope with
    every normal supporting a facet?  (Boundedness already established.)"""
    tuples = tables.tuples
    support = dict.fromkeys(subset, 0)
    nverts = 0
    for t in itertools.combinations(subset, n):
        rec = tuples.get(t)
        if rec is None:
            continue
        feas, tight, vertex_ok = rec
        if mask & ~feas:
            continue  # basic point cut off by another chosen normal
        if not vertex_ok:
            return False  # non-lattice vertex or non-unimodular normal frame
        if _popcount(tight & mask) != n:
            return False  # vertex on more than n chosen facets: not simple
        nverts += 1
        for i in t:
            support[i] += 1
    if nverts < n + 1:
        return False
    # a supporting hyperplane with >= n tight vertices is a facet (dim <= 3)
    return all(c >= n for c in support.values())


def _search_subsets(n: int, config: EnumerationConfig) -> tuple[list[tuple[int, ...]], _SearchTables]:
    tables = _build_tables(n)
    nrays = len(tables.rays)
    masks = tables.probe_masks
    full = tables.probe_full
    max_m = config.max_facets(n)
    # suffix_or[i]: coverage obtainable from rays i..end
    suffix_or = [0] * (nrays + 1)
    for i in reversed(range(nrays)):
        suffix_or[i] = suffix_or[i + 1] | masks[i]

    accepted: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def extend(start: int, cover: int, mask: int):
        if len(chosen) >= n + 1 and cover == full:
            subset = tuple(chosen)
            if _accept_subset(n, subset, mask, tables):
                accepted.append(subset)
        if len(chosen) == max_m:
            return
        for i in range(start, nrays):
            if cover | suffix_or[i] != full:
                break  # never completable from here on
            chosen.append(i)
            extend(i + 1, cover | masks[i], mask | (1 << i))
            chosen.pop()

    extend(0, 0, 0)
    return accepted, tables


# -- enumeration ---------------------------------------------------------------


_CATALOG_CACHE: dict[int, Catalog] = {}


def enumerate_monotone(n: int, config: EnumerationConfig | None = None) -> Catalog:
    """All monotone n-polytopes up to lattice equivalence, for n <= 3."""
    if n < 1 or n > 3:
        raise ValueError("enumeration supported only for n <= 3")
    if config is None:
        if n in _CATALOG_CACHE:
            return _CATALOG_CACHE[n]
        config = EnumerationConfig()
        cache = True
    else:
        cache = False
    if config.ray_coordinate_bound != 1:
        raise NotImplementedError(
            "only the {-1,0,1} candidate range is implemented; the class "
            "counts match the known values, so the wider incremental search "
            "was never needed")

    accepted, tables = _search_subsets(n, config)

    # fold out the signed-permutation symmetries of the candidate set before
    # doing any expensive geometry
    perms = []
    for f in _signed_permutations(n):
        perms.append(tuple(tables.ray_index[f(u)] for u in tables.rays))
    reps: dict[tuple[int, ...], tuple[int, ...]] = {}
    for subset in accepted:
        orbit_min = min(tuple(sorted(p[i] for i in subset)) for p in perms)
        reps.setdefault(orbit_min, subset)

    classes: dict[CanonicalKey, Polytope] = {}
    for subset in reps.values():
        p = vertices_of(n, [Facet(tables.rays[i], 1) for i in subset])
        if not is_monotone(p):
            raise AssertionError("subset search accepted a non-monotone polytope")
        key = canonical_form(p)
        if key not in classes:
            classes[key] = hull(n, key.canonical_vertices)

    entries = [CatalogEntry(k, p, p.f_vector(), p.normalized_volume())
               for k, p in classes.items()]
    entries.sort(key=lambda e: (e.num_facets, -e.normalized_volume, e.key.sort_key()))
    catalog = Catalog(n, tuple(entries))
    if cache:
        _CATALOG_CACHE[n] = catalog
    return catalog


# -- blow-up DAG ----------------------------------------------------------------


def monotone_blowup_faces(p: Polytope) -> list[FaceRef]:
    """Proper faces of codim >= 2 admitting a monotone blow-up."""
    out = []
    for k in range(2, p.dim + 1):
        for face in p.faces(k):
            inside = set(face.vertex_indices)
            if all(e.lattice_length >= k for e in p.edges_with_lengths()
                   if (e.endpoints[0] in inside) != (e.endpoints[1] in inside)):
                out.append(face)
    return out


def build_blowup_dag(catalog: Catalog) -> BlowUpDag:
    """Attempt every monotone blow-up on every catalog entry.

    Parallel edges coming from different faces with the same codimension and
    equivalent results collapse into one edge with a multiplicity counter.
    """
    key_index = {e.key: i for i, e in enumerate(catalog.entries)}
    counts: dict[tuple[int, int, int], int] = {}
    for si, entry in enumerate(catalog.entries):
        p = entry.polytope
        for face in monotone_blowup_faces(p):
            result = monotone_blow_up(p, face).result
            key = canonical_form(result)
            if key not in key_index:
                raise ValueError("catalog incomplete")
            ti = key_index[key]
            counts[(si, ti, face.codim)] = counts.get((si, ti, face.codim), 0) + 1
    edges = tuple(DagEdge(s, t, k, k == catalog.dim, m)
                  for (s, t, k), m in sorted(counts.items()))
    return BlowUpDag(catalog, edges)


def maximal_elements(dag: BlowUpDag) -> list[CatalogEntry]:
    """Entries with in-degree zero: not obtainable as a monotone blow-up."""
    targets = {e.target for e in dag.edges}
    return [e for i, e in enumerate(dag.catalog.entries) if i not in targets]


# -- theorem verifiers -----------------------------------------------------------


@dataclass
class Report:
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def line(self, text: str):
        self.details.append(text)


def entries_with_vertex_blowup(catalog: Catalog) -> list[CatalogEntry]:
    out = []
    for entry in catalog.entries:
        p = entry.polytope
        if any(vertex_blowup_admissible(p, p.face_from_vertex(i))
               for i in range(len(p.vertices))):
            out.append(entry)
    return out


def verify_vertex_theorem(catalog: Catalog) -> Report:
    """Only the monotone simplex and its codim-2 blow-up admit vertex blow-ups."""
    n = catalog.dim
    rep = Report("vertex-blowup classification", True)
    if n < 3:
        raise ValueError("the vertex-blow-up classification is stated for dimension >= 3")
    simplex = monotone_simplex(n)
    codim2 = monotone_blow_up(simplex, simplex.faces(2)[0]).result
    expected = {canonical_form(simplex), canonical_form(codim2)}
    got = entries_with_vertex_blowup(catalog)
    got_keys = {e.key for e in got}
    rep.passed = got_keys == expected
    vols = sorted((e.normalized_volume for e in got), reverse=True)
    rep.data = {"admitting": len(got), "volumes": [int(v) for v in vols]}
    rep.line(f"{len(got)} of {len(catalog)} classes admit a monotone vertex "
             f"blow-up (volumes {[int(v) for v in vols]})")
    if not rep.passed:
        rep.line("MISMATCH with {simplex, codim-2 blow-up of simplex}")
    return rep


def random_simplex_descendant(n: int, max_depth: int, rng: random.Random) -> Polytope:
    """One random monotone blow-up descendant of the monotone n-simplex."""
    p = monotone_simplex(n)
    for _ in range(rng.randint(1, max_depth)):
        faces = monotone_blowup_faces(p)
        if not faces:
            break
        p = monotone_blow_up(p, rng.choice(faces)).result
    return p


def verify_vertex_theorem_sampled(n: int, samples: int = 50, max_depth: int = 2,
                                  seed: int = 0) -> Report:
    """Sampled check of the vertex-blow-up classification beyond the catalog range."""
    rep = Report(f"vertex-blowup classification (dim {n}, sampled)", True)
    simplex = monotone_simplex(n)
    codim2 = monotone_blow_up(simplex, simplex.faces(2)[0]).result
    exceptional = {canonical_form(simplex), canonical_form(codim2)}

    def admits(p):
        return any(vertex_blowup_admissible(p, p.face_from_vertex(i))
                   for i in range(len(p.vertices)))

    if not admits(simplex) or not admits(codim2):
        rep.passed = False
        rep.line("an exceptional polytope fails to admit a vertex blow-up")
        return rep
    rng = random.Random(seed)
    checked = 0
    while checked < samples:
        p = random_simplex_descendant(n, max_depth, rng)
        if canonical_form(p) in exceptional:
            continue
        if admits(p):
            rep.passed = False
            rep.line(f"counterexample with {len(p.facets)} facets, "
                     f"volume {p.normalized_volume()}")
            return rep
        checked += 1
    rep.data = {"samples": checked}
    rep.line(f"simplex and its codim-2 blow-up admit vertex blow-ups; "
             f"{checked} other sampled descendants admit none")
    return rep


def verify_simplex_theorem(n: int) -> Report:
    """Exhaustive pair check on the monotone n-simplex.

    Disjoint monotone blow-ups at two faces exist iff the faces are disjoint
    and their codimensions sum to n+1 or n+2.  For n <= 4 the equivalence of
    pairwise and global disjointness is also exercised on all face triples
    whose pairs are disjoint.
    """
    if n < 2 or n > 6:
        raise ValueError("simplex theorem verification supports 2 <= n <= 6")
    rep = Report(f"simplex disjoint blow-ups (dim {n})", True)
    p = monotone_simplex(n)
    faces = [f for k in range(2, n + 1) for f in p.faces(k)]
    pairset: set[frozenset[int]] = set()
    pairs_checked = 0
    for i, j in itertools.combinations(range(len(faces)), 2):
        f1, f2 = faces[i], faces[j]
        k1, k2 = f1.codim, f2.codim
        vertex_disjoint = set(f1.vertex_indices).isdisjoint(f2.vertex_indices)
        got = blowups_disjoint(p, [BlowUpSpec(f1, k1 - 1), BlowUpSpec(f2, k2 - 1)])
        expect = vertex_disjoint and k1 + k2 <= n + 2
        pairs_checked += 1
        if got != expect:
            rep.passed = False
            rep.line(f"pair codims ({k1},{k2}) vertex-disjoint={vertex_disjoint}: "
                     f"got {got}, expected {expect}")
            return rep
        if got:
            if k1 + k2 < n + 1:
                rep.passed = False
                rep.line("disjoint faces with codim sum below n+1 should not exist")
                return rep
            pairset.add(frozenset((i, j)))
    rep.data = {"pairs": pairs_checked, "disjoint_pairs": len(pairset)}
    rep.line(f"{pairs_checked} face pairs checked; {len(pairset)} admit "
             f"disjoint monotone blow-ups")

    if n <= 4:
        triples = 0
        for fa, fb, fc in itertools.combinations(range(len(faces)), 3):
            if (frozenset((fa, fb)) in pairset and frozenset((fa, fc)) in pairset
                    and frozenset((fb, fc)) in pairset):
                specs = [BlowUpSpec(faces[i], faces[i].codim - 1) for i in (fa, fb, fc)]
                # raises internally if pairwise holds but a common point exists
                if not blowups_disjoint(p, specs):
                    rep.passed = False
                    rep.line("pairwise disjoint triple is not mutually disjoint")
                    return rep
                triples += 1
        rep.data["pairwise_disjoint_triples"] = triples
        rep.line(f"{triples} pairwise-disjoint triples are globally disjoint")
    return rep


def three_disjoint_blowups(n: int) -> Report:
    """Search for three pairwise disjoint monotone blow-ups on the n-simplex.

    Expected to exist only for n = 2 (the three vertices of the triangle).
    """
    if n < 2 or n > 6:
        raise ValueError("supported for 2 <= n <= 6")
    rep = Report(f"three disjoint blow-ups (dim {n})", True)
    p = monotone_simplex(n)
    faces = [f for k in range(2, n + 1) for f in p.faces(k)]
    good_pairs: set[frozenset[int]] = set()
    for i, j in itertools.combinations(range(len(faces)), 2):
        f1, f2 = faces[i], faces[j]
        if not set(f1.vertex_indices).isdisjoint(f2.vertex_indices):
            continue
        if blowups_disjoint(p, [BlowUpSpec(f1, f1.codim - 1),
                                BlowUpSpec(f2, f2.codim - 1)]):
            good_pairs.add(frozenset((i, j)))
    witness = None
    for i, j, k in itertools.combinations(range(len(faces)), 3):
        if (frozenset((i, j)) in good_pairs and frozenset((i, k)) in good_pairs
                and frozenset((j, k)) in good_pairs):
            specs = [BlowUpSpec(faces[x], faces[x].codim - 1) for x in (i, j, k)]
            if blowups_disjoint(p, specs):
                witness = (faces[i], faces[j], faces[k])
                break
    exists = witness is not None
    expected = (n == 2)
    rep.passed = exists == expected
    rep.data = {"exists": exists}
    if exists:
        codims = sorted(f.codim for f in witness)
        all_vertices = all(f.codim == n and len(f.vertex_indices) == 1 for f in witness)
        rep.data["witness_codims"] = codims
        rep.data["witness_is_three_vertices"] = all_vertices
        if n == 2 and not all_vertices:
            rep.passed = False
        rep.line(f"three disjoint blow-ups exist (codims {codims})")
    else:
        rep.line("no three pairwise disjoint monotone blow-ups")
    return rep


def vertex_length_violations(p: Polytope) -> list[tuple[int, list]]:
    """Vertices where all edge lengths are >= dim but not within {dim, dim+1}."""
    n = p.dim
    bad = []
    for vi in range(len(p.vertices)):
        lengths = [e.lattice_length for e in p.edges_at_vertex(vi)]
        if all(l >= n for l in lengths) and not all(l in (n, n + 1) for l in lengths):
            bad.append((vi, lengths))
    return bad


def simplex_descendants(n: int, depth: int) -> list[Polytope]:
    """All monotone blow-up descendants of the monotone n-simplex, up to
    lattice equivalence, reachable in at most the given number of steps."""
    seen: dict[CanonicalKey, Polytope] = {}
    frontier = [monotone_simplex(n)]
    out = []
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for face in monotone_blowup_faces(p):
                q = monotone_blow_up(p, face).result
                key = canonical_form(q)
                if key not in seen:
                    seen[key] = q
                    nxt.append(q)
                    out.append(q)
        frontier = nxt
    return out


def verify_length_lemma(catalog: Catalog) -> Report:
    """Vertices admitting a blow-up have all incident edge lengths in {n, n+1}."""
    rep = Report(f"edge-length lemma (dim {catalog.dim})", True)
    checked = 0
    for entry in catalog.entries:
        p = entry.polytope
        bad = vertex_length_violations(p)
        checked += sum(1 for vi in range(len(p.vertices))
                       if all(e.lattice_length >= p.dim for e in p.edges_at_vertex(vi)))
        if bad:
            rep.passed = False
            rep.line(f"violation in class with volume {entry.normalized_volume}: {bad}")
            return rep
    rep.data = {"admissible_vertices": checked}
    rep.line(f"{checked} blow-up-admissible vertices all have lengths in "
             f"{{{catalog.dim}, {catalog.dim + 1}}}")
    return rep


def verify_length_lemma_descendants(n: int = 4, depth: int = 2) -> Report:
    """Run the edge-length lemma over simplex blow-up descendants (dim n)."""
    rep = Report(f"edge-length lemma (dim {n} descendants, depth <= {depth})", True)
    polys = [monotone_simplex(n)] + simplex_descendants(n, depth)
    checked = 0
    for p in polys:
        bad = vertex_length_violations(p)
        checked += sum(1 for vi in range(len(p.vertices))
                       if all(e.lattice_length >= p.dim for e in p.edges_at_vertex(vi)))
        if bad:
            rep.passed = False
            rep.line(f"violation in descendant with {len(p.facets)} facets: {bad}")
            return rep
    rep.data = {"polytopes": len(polys), "admissible_vertices": checked}
    rep.line(f"{len(polys)} polytopes, {checked} admissible vertices, all lengths "
             f"in {{{n}, {n + 1}}}")
    return rep
