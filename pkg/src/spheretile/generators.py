"""Constructors for every tiling family: prisms, earth-map chains,
triangular fusions of the snub dodecahedron, and the football.

The Archimedean-type families are built on top of a small oriented
polyhedron helper: faces are stored as counterclockwise vertex cycles,
and the derived arc maps (reversal, next-in-face, rotation about the
origin vertex) drive dualization, truncation and the snub construction
combinatorially, with no coordinates involved.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Hashable, Iterable, Optional, Sequence

from .complexes import (
    TilingComplex,
    build_from_faces,
    canonical_code,
)

Arc = tuple[Hashable, Hashable]


class FusionConflict(Exception):
    """A triangle was asked to fuse with two different partners."""


# -- oriented polyhedra -------------------------------------------------------


class OrientedPolyhedron:
    """Closed surface given by consistently oriented face cycles.

    Each face is a cyclic tuple of vertex ids.  Every directed arc (u, v)
    must appear in exactly one face, and its reversal in exactly one other;
    the constructor validates this and precomputes the usual maps:
    ``rev``, ``fnext`` (next arc within the face), ``left`` (face index of
    an arc) and ``sigma`` (rotation of out-arcs about the origin vertex,
    sigma(a) = fnext(rev(a))).
    """

    def __init__(self, faces: Sequence[Sequence[Hashable]]):
        self.faces: tuple[tuple[Hashable, ...], ...] = tuple(
            tuple(f) for f in faces
        )
        self.fnext: dict[Arc, Arc] = {}
        self.left: dict[Arc, int] = {}
        for fi, face in enumerate(self.faces):
            k = len(face)
            if k < 3:
                raise ValueError(f"face {fi} has fewer than 3 vertices")
            if len(set(face)) != k:
                raise ValueError(f"face {fi} repeats a vertex: {face!r}")
            for i in range(k):
                a = (face[i], face[(i + 1) % k])
                if a in self.left:
                    raise ValueError(
                        f"arc {a!r} appears twice; orientations are inconsistent"
                    )
                self.left[a] = fi
                self.fnext[a] = (face[(i + 1) % k], face[(i + 2) % k])
        for (u, v) in self.left:
            if (v, u) not in self.left:
                raise ValueError(f"arc {(u, v)!r} has no reversal; surface has boundary")

        self.out_arcs: dict[Hashable, list[Arc]] = {}
        for (u, v) in self.left:
            self.out_arcs.setdefault(u, []).append((u, v))
        for u in self.out_arcs:
            self.out_arcs[u].sort()

        # Manifold check: the sigma orbit of any out-arc must cover all of them.
        for u, arcs in self.out_arcs.items():
            orbit = {arcs[0]}
            a = arcs[0]
            for _ in range(len(arcs) - 1):
                a = self.sigma(a)
                orbit.add(a)
            if len(orbit) != len(arcs):
                raise ValueError(f"vertex {u!r} has a pinched link")

        self.vertex_count = len(self.out_arcs)
        self.edge_count = len(self.left) // 2
        self.face_count = len(self.faces)
        if self.vertex_count - self.edge_count + self.face_count != 2:
            raise ValueError("polyhedron is not a sphere")

    @staticmethod
    def rev(a: Arc) -> Arc:
        return (a[1], a[0])

    def sigma(self, a: Arc) -> Arc:
        """Next out-arc of origin(a), rotating through the face right of a."""
        return self.fnext[self.rev(a)]

    def arcs(self) -> list[Arc]:
        return sorted(self.left)

    def undirected_edges(self) -> list[Arc]:
        return sorted(a for a in self.left if a < self.rev(a))

    def vertex_orbit(self, u: Hashable) -> list[Arc]:
        """Out-arcs of u in sigma order, starting from the smallest."""
        start = self.out_arcs[u][0]
        orbit = [start]
        a = self.sigma(start)
        while a != start:
            orbit.append(a)
            a = self.sigma(a)
        return orbit

    def degree(self, u: Hashable) -> int:
        return len(self.out_arcs[u])


def tetrahedron() -> OrientedPolyhedron:
    return OrientedPolyhedron([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def cube() -> OrientedPolyhedron:
    return OrientedPolyhedron(
        [
            (0, 1, 2, 3),
            (0, 4, 5, 1),
            (1, 5, 6, 2),
            (2, 6, 7, 3),
            (3, 7, 4, 0),
            (7, 6, 5, 4),
        ]
    )


def icosahedron() -> OrientedPolyhedron:
    """Combinatorial icosahedron, faces counterclockwise seen from outside."""
    return OrientedPolyhedron(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ]
    )


def dual(p: OrientedPolyhedron) -> OrientedPolyhedron:
    """Dual polyhedron: one face per vertex, listing incident faces in sigma order."""
    faces = []
    for u in sorted(p.out_arcs):
        faces.append(tuple(p.left[a] for a in p.vertex_orbit(u)))
    return OrientedPolyhedron(faces)


def dodecahedron() -> OrientedPolyhedron:
    """Combinatorial dodecahedron as the dual of the icosahedron.

    Its 20 vertices are the icosahedron's face indices.
    """
    return dual(icosahedron())


def truncate(p: OrientedPolyhedron) -> OrientedPolyhedron:
    """Truncation: cut every vertex, turning each k-face into a 2k-face.

    The new vertex on arc a = (u, v) sits on edge {u, v} near u and is named
    by the arc itself.  Each original face contributes the 2k-cycle
    (a1, rev a1, a2, rev a2, ...); each original vertex contributes its
    sigma orbit reversed (reversal keeps the orientation consistent).
    """
    faces: list[tuple[Arc, ...]] = []
    for face in p.faces:
        k = len(face)
        cyc: list[Arc] = []
        for i in range(k):
            a = (face[i], face[(i + 1) % k])
            cyc.append(a)
            cyc.append(p.rev(a))
        faces.append(tuple(cyc))
    for u in sorted(p.out_arcs):
        orbit = p.vertex_orbit(u)
        faces.append(tuple(reversed(orbit)))
    return OrientedPolyhedron(faces)


def snub(p: OrientedPolyhedron) -> OrientedPolyhedron:
    """Snub construction: one vertex per arc, original faces shrunk and
    twisted, one triangle per original vertex, two per original edge."""
    structure = _snub_faces(p)
    return OrientedPolyhedron(
        structure["polygons"]
        + structure["vertex_triangles"]
        + structure["edge_triangles"]
    )


def _snub_faces(p: OrientedPolyhedron) -> dict:
    """Face cycles of the snub, with the edge triangles kept addressable.

    For each original arc a the edge quad (s(a), s(sigma a), s(rev a),
    s(sigma(rev a))) splits along the diagonal {s(a), s(rev a)} into

        T1(a) = (s(a), s(sigma a), s(rev a))
        T2(a) = (s(a), s(rev a), s(sigma(rev a)))

    where s(x) is the snub vertex named by arc x.  Only the canonical arc
    (a < rev a) of each edge is used, which fixes the T1/T2 naming.
    """
    polygons = [
        tuple((face[i], face[(i + 1) % len(face)]) for i in range(len(face)))
        for face in p.faces
    ]
    vertex_triangles = []
    vertex_triangle_of: dict[Hashable, tuple[Arc, ...]] = {}
    for u in sorted(p.out_arcs):
        tri = tuple(reversed(p.vertex_orbit(u)))
        vertex_triangles.append(tri)
        vertex_triangle_of[u] = tri
    edge_triangles = []
    t1_of: dict[Arc, tuple[Arc, Arc, Arc]] = {}
    t2_of: dict[Arc, tuple[Arc, Arc, Arc]] = {}
    for a in p.undirected_edges():
        ra = p.rev(a)
        t1 = (a, p.sigma(a), ra)
        t2 = (a, ra, p.sigma(ra))
        t1_of[a] = t1
        t2_of[a] = t2
        edge_triangles.append(t1)
        edge_triangles.append(t2)
    return {
        "polygons": polygons,
        "vertex_triangles": vertex_triangles,
        "edge_triangles": edge_triangles,
        "vertex_triangle_of": vertex_triangle_of,
        "t1_of": t1_of,
        "t2_of": t2_of,
    }


# -- tiling generators ---------------------------------------------------------


def prism(m: int) -> TilingComplex:
    """Prism tiling: two m-gons at the poles joined by a belt of m rhombi.

    Every vertex has type (1, 1, 1).  The rhombus between meridians p and
    p+1 carries beta at the corners where it meets the preceding rhombus
    and gamma where it meets the following one.
    """
    if m < 3:
        raise ValueError(f"prism needs m >= 3, got {m}")
    north = [("N", p) for p in range(m)]
    south = [("S", p) for p in range(m)]
    faces: list = [
        ("mgon", tuple(north), ("alpha",) * m),
        ("mgon", tuple(reversed(south)), ("alpha",) * m),
    ]
    for p in range(m):
        q = (p + 1) % m
        faces.append(
            (
                "rhombus",
                (north[q], north[p], south[p], south[q]),
                ("beta", "gamma", "beta", "gamma"),
            )
        )
    return build_from_faces(faces)


def earth_map(c: int) -> TilingComplex:
    """Earth-map tiling: two polar pentagons and five timezone blocks.

    Each block holds 2c-1 rhombi; block p runs between meridians p and
    p+1.  Interior vertices all have type beta^2 gamma, the ten pentagon
    corners have type alpha beta gamma^c.  The total face count is
    10c - 3, which disagrees with one count stated alongside the family's
    construction; the corner-balance argument (10 alpha corners force 10
    vertices of type alpha beta gamma^c, and then #beta = #gamma forces
    5(2c-1) rhombi) supports this version.
    """
    if c < 2:
        raise ValueError(f"earth_map needs c >= 2, got {c}")
    N = [("N", p) for p in range(5)]
    S = [("S", p) for p in range(5)]
    u = {(p, j): ("u", p, j) for p in range(5) for j in range(1, c)}
    w = {(p, j): ("w", p, j) for p in range(5) for j in range(1, c)}

    faces: list = [
        ("mgon", tuple(N), ("alpha",) * 5),
        ("mgon", tuple(reversed(S)), ("alpha",) * 5),
    ]
    bg = ("beta", "gamma", "beta", "gamma")
    gb = ("gamma", "beta", "gamma", "beta")
    for p in range(5):
        p1 = (p + 1) % 5
        p2 = (p + 2) % 5
        pm = (p - 1) % 5
        faces.append(("rhombus", (N[p], w[(pm, 1)], u[(p, 1)], N[p1]), bg))
        for j in range(2, c):
            faces.append(
                ("rhombus", (N[p1], u[(p, j - 1)], w[(pm, j)], u[(p, j)]), gb)
            )
        faces.append(("rhombus", (N[p1], u[(p, c - 1)], S[p1], w[(p, 1)]), gb))
        for j in range(1, c - 1):
            faces.append(
                ("rhombus", (S[p1], w[(p, j + 1)], u[(p1, j)], w[(p, j)]), gb)
            )
        faces.append(("rhombus", (S[p2], u[(p1, c - 1)], w[(p, c - 1)], S[p1]), bg))
    return build_from_faces(faces)


def football() -> TilingComplex:
    """Football tiling: truncated icosahedron with each hexagon cut into
    three rhombi around its center.

    The three beta corners meeting at each hexagon center give the beta^3
    vertices; every original truncated-icosahedron vertex becomes
    alpha beta gamma^2.
    """
    trunc = truncate(icosahedron())
    faces: list = []
    for fi, face in enumerate(trunc.faces):
        if len(face) == 5:
            faces.append(("mgon", face, ("alpha",) * 5))
            continue
        center = ("hex-center", fi)
        c1, c2, c3, c4, c5, c6 = face
        for triple in ((c1, c2, c3), (c3, c4, c5), (c5, c6, c1)):
            faces.append(
                (
                    "rhombus",
                    (center,) + triple,
                    ("beta", "gamma", "beta", "gamma"),
                )
            )
    return build_from_faces(faces)


def snub_dodecahedron() -> TilingComplex:
    """Snub dodecahedron as an intermediate complex.

    The 80 triangles carry the provisional all-gamma labeling; the complex
    is not itself a dihedral tiling and exists to be fused.
    """
    snb = snub(dodecahedron())
    faces: list = []
    for face in snb.faces:
        if len(face) == 5:
            faces.append(("mgon", face, ("alpha",) * 5))
        else:
            faces.append(("triangle", face, ("gamma",) * 3))
    return build_from_faces(faces)


def dodecahedron_matchings() -> list[tuple[tuple[int, int], ...]]:
    """All perfect matchings of the dodecahedron graph, by backtracking.

    Vertices are the icosahedron's face indices 0..19.  Each matching is a
    sorted tuple of sorted vertex pairs; the list order is deterministic.
    """
    dod = dodecahedron()
    adjacency: dict[int, list[int]] = {v: [] for v in sorted(dod.out_arcs)}
    for (a, b) in dod.undirected_edges():
        adjacency[a].append(b)
        adjacency[b].append(a)
    for v in adjacency:
        adjacency[v].sort()

    n = len(adjacency)
    matchings: list[tuple[tuple[int, int], ...]] = []
    covered = [False] * n
    chosen: list[tuple[int, int]] = []

    def extend() -> None:
        try:
            v = covered.index(False)
        except ValueError:
            matchings.append(tuple(sorted(chosen)))
            return
        covered[v] = True
        for nb in adjacency[v]:
            if not covered[nb]:
                covered[nb] = True
                chosen.append((v, nb))
                extend()
                chosen.pop()
                covered[nb] = False
        covered[v] = False

    extend()
    return matchings


def triangular_fusion(
    base: TilingComplex, matching: Iterable
) -> TilingComplex:
    """Fuse the snub dodecahedron's triangles into rhombi along a matching.

    Each dodecahedron edge corresponds to a pair of edge triangles sharing
    a diagonal.  An unmatched edge fuses that pair directly; a matched edge
    {u, v} instead fuses each of its two triangles with the vertex triangle
    at its respective endpoint.  A perfect matching uses every vertex
    triangle exactly once, so all 80 triangles pair into 40 rhombi.  The
    fused diagonal's endpoints receive beta, the other corners gamma.
    """
    _require_snub_shape(base)
    edges_used = _normalize_matching(matching)

    dod = dodecahedron()
    structure = _snub_faces(dod)

    consumed: set[tuple] = set()

    def take(name: tuple, tri: tuple[Arc, ...]) -> tuple[Arc, ...]:
        if name in consumed:
            raise FusionConflict(f"triangle {name!r} fused twice")
        consumed.add(name)
        return tri

    rhombi: list[tuple[Arc, Arc, Arc, Arc]] = []
    for a in dod.undirected_edges():
        u, v = a
        t1 = structure["t1_of"][a]
        t2 = structure["t2_of"][a]
        if frozenset(a) in edges_used:
            tri_u = take(("V", u), structure["vertex_triangle_of"][u])
            tri_v = take(("V", v), structure["vertex_triangle_of"][v])
            rhombi.append(_fuse(take(("T1", a), t1), tri_u))
            rhombi.append(_fuse(take(("T2", a), t2), tri_v))
        else:
            rhombi.append(_fuse(take(("T1", a), t1), take(("T2", a), t2)))

    assert len(rhombi) == 40, f"expected 40 fused rhombi, got {len(rhombi)}"
    faces: list = [
        ("mgon", poly, ("alpha",) * 5) for poly in structure["polygons"]
    ]
    faces.extend(
        ("rhombus", rh, ("beta", "gamma", "beta", "gamma")) for rh in rhombi
    )
    return build_from_faces(faces)


def _fuse(
    tri1: tuple[Arc, ...], tri2: tuple[Arc, ...]
) -> tuple[Arc, Arc, Arc, Arc]:
    """Glue two triangles along their shared edge and drop the diagonal.

    tri1 holds the shared edge as (p, q), tri2 as (q, p).  Writing
    tri1 = (p, q, c1) and tri2 = (q, p, c2) cyclically, the fused rhombus
    is (q, c1, p, c2); p and q are the diagonal ends and take beta.
    """
    arcs1 = {(tri1[i], tri1[(i + 1) % 3]): tri1[(i + 2) % 3] for i in range(3)}
    arcs2 = {(tri2[i], tri2[(i + 1) % 3]): tri2[(i + 2) % 3] for i in range(3)}
    shared = [e for e in arcs1 if (e[1], e[0]) in arcs2]
    if len(shared) != 1:
        raise FusionConflict(
            f"triangles {tri1!r} and {tri2!r} share {len(shared)} edges, expected 1"
        )
    p, q = shared[0]
    c1 = arcs1[(p, q)]
    c2 = arcs2[(q, p)]
    return (q, c1, p, c2)


def _require_snub_shape(base: TilingComplex) -> None:
    pentagons = sum(1 for f in base.faces if f.kind == "mgon" and f.size == 5)
    triangles = sum(1 for f in base.faces if f.kind == "triangle")
    if (
        pentagons != 12
        or triangles != 80
        or base.vertex_count != 60
        or base.edge_count != 150
    ):
        raise ValueError(
            "base must be the snub dodecahedron "
            f"(got {pentagons} pentagons, {triangles} triangles, "
            f"V={base.vertex_count}, E={base.edge_count})"
        )


def _normalize_matching(matching: Iterable) -> set[frozenset]:
    dod = dodecahedron()
    edge_set = {frozenset(e) for e in dod.undirected_edges()}
    edges = [frozenset(e) for e in matching]
    if len(edges) != 10 or len(set(edges)) != 10:
        raise ValueError("matching must consist of 10 distinct edges")
    for e in edges:
        if e not in edge_set:
            raise ValueError(f"{tuple(sorted(e))!r} is not a dodecahedron edge")
    covered = set()
    for e in edges:
        if covered & e:
            raise ValueError("matching covers a vertex twice")
        covered |= e
    if len(covered) != 20:
        raise ValueError("matching does not cover every vertex")
    return set(edges)


# -- fusion classification and variant order ----------------------------------


def _cyclic_labels_at(t: TilingComplex, v: int) -> list[str]:
    """Corner labels around vertex v in rotation order."""
    out = t.out_half_edges(v)
    start = out[0]
    order = [start]
    h = t.next_half_edge(t.twin(start))
    while h != start:
        order.append(h)
        h = t.next_half_edge(t.twin(h))
    return [t.label_of(h) for h in order]


def bullet_vertices(t: TilingComplex) -> set[int]:
    """Vertices of type alpha beta gamma^2 whose two gamma corners are adjacent.

    In a fused tiling these mark where the beta corner of one rhombus meets
    the alpha of a pentagon; the three fusion variants are told apart by how
    these vertices distribute over the pentagons.
    """
    bullets: set[int] = set()
    for v in range(t.vertex_count):
        labels = _cyclic_labels_at(t, v)
        if len(labels) != 4 or sorted(labels) != [
            "alpha", "beta", "gamma", "gamma",
        ]:
            continue
        g1, g2 = [i for i, lab in enumerate(labels) if lab == "gamma"]
        if (g2 - g1) % 4 in (1, 3):
            bullets.add(v)
    return bullets


def pentagon_bullet_counts(t: TilingComplex) -> list[int]:
    bullets = bullet_vertices(t)
    return [
        sum(1 for v in f.vertices if v in bullets)
        for f in t.faces
        if f.kind == "mgon"
    ]


def _trios(t: TilingComplex) -> list[tuple[int, frozenset]]:
    """Trio pentagons: exactly three bullets, necessarily consecutive.

    Returns, per trio, the middle bullet vertex and the pentagon edge
    opposite it (the far edge joining the two corners not adjacent to the
    middle); the variant-splitting path measurement runs between these.
    """
    bullets = bullet_vertices(t)
    out = []
    for f in t.faces:
        if f.kind != "mgon":
            continue
        flags = [v in bullets for v in f.vertices]
        if sum(flags) != 3:
            continue
        k = len(flags)
        for i in range(k):
            if flags[i] and flags[(i - 1) % k] and flags[(i + 1) % k]:
                opposite = frozenset(
                    (f.vertices[(i + 2) % k], f.vertices[(i + 3) % k])
                )
                out.append((f.vertices[i], opposite))
                break
    return out


def trio_chain_length(t: TilingComplex) -> Optional[int]:
    """Fewest rhombi on a path from one trio's middle bullet to the edge
    opposite another trio's middle bullet.

    A path r_1 .. r_k has consecutive rhombi sharing an edge, the middle
    bullet on r_1 and the target pentagon edge on r_k's boundary; the
    returned value is the minimum k over all ordered trio pairs, or None
    when the tiling has fewer than two trios.
    """
    trios = _trios(t)
    if len(trios) < 2:
        return None
    rhombi = [i for i, f in enumerate(t.faces) if f.kind == "rhombus"]
    adj: dict[int, list[int]] = {i: [] for i in rhombi}
    edges_of: dict[int, set[frozenset]] = {}
    for i in rhombi:
        edges_of[i] = set()
        for h in t.half_edges_of_face(i):
            edges_of[i].add(frozenset(t.half_edge_endpoints(h)))
            j = t.face_of_half_edge(t.twin(h))
            if t.faces[j].kind == "rhombus":
                adj[i].append(j)
    best: Optional[int] = None
    for src, _ in trios:
        targets = [opp for mid, opp in trios if mid != src]
        starts = [i for i in rhombi if src in t.faces[i].vertices]
        dist = {i: 1 for i in starts}
        queue = deque(starts)
        while queue:
            i = queue.popleft()
            if best is not None and dist[i] >= best:
                continue
            if any(opp in edges_of[i] for opp in targets):
                best = dist[i] if best is None else min(best, dist[i])
                continue
            for j in adj[i]:
                if j not in dist:
                    dist[j] = dist[i] + 1
                    queue.append(j)
    return best


@lru_cache(maxsize=1)
def fusion_classification() -> dict:
    """Group all matchings' fusions into isomorphism classes, variant-ordered.

    Returns a dict with the matchings, a class index per matching, and the
    ordered classes, each holding its representative complex plus
    diagnostics (size, pentagon bullet distribution, trio chain length).
    Variant 1 is the class whose bullet distribution is trio-free (its
    crowded pentagons carry five bullets, never three); the remaining two
    are ordered by the shortest rhombus chain from a trio's middle bullet
    to the edge opposite another trio's middle, 3 before 2.
    """
    matchings = dodecahedron_matchings()
    base = snub_dodecahedron()
    fusions = [triangular_fusion(base, mt) for mt in matchings]
    by_code: dict[tuple, list[int]] = {}
    for idx, fused in enumerate(fusions):
        by_code.setdefault(canonical_code(fused), []).append(idx)
    assert len(by_code) == 3, f"expected 3 fusion classes, got {len(by_code)}"

    classes = []
    for code, members in by_code.items():
        rep = fusions[members[0]]
        counts = sorted(pentagon_bullet_counts(rep))
        chain = trio_chain_length(rep)
        classes.append(
            {
                "code": code,
                "members": members,
                "representative": rep,
                "bullet_counts": counts,
                "chain_length": chain,
            }
        )

    trio_free = [cl for cl in classes if cl["chain_length"] is None]
    assert len(trio_free) == 1, (
        "expected exactly one trio-free class, got bullet distributions "
        f"{[cl['bullet_counts'] for cl in classes]}"
    )
    first = trio_free[0]
    rest = [cl for cl in classes if cl is not first]
    chain_lengths = sorted(cl["chain_length"] for cl in rest)
    assert chain_lengths == [2, 3], (
        f"expected trio chain lengths {{2, 3}}, got {chain_lengths}"
    )
    rest.sort(key=lambda cl: -cl["chain_length"])
    ordered = [first] + rest

    variant_of_matching = {}
    for variant, cl in enumerate(ordered, start=1):
        for idx in cl["members"]:
            variant_of_matching[idx] = variant

    return {
        "matchings": matchings,
        "classes": ordered,
        "variant_of_matching": variant_of_matching,
    }


def snub_fusion(variant: int) -> TilingComplex:
    """Representative of one of the three fusion isomorphism classes."""
    if variant not in (1, 2, 3):
        raise ValueError(f"variant must be 1, 2 or 3, got {variant}")
    return fusion_classification()["classes"][variant - 1]["representative"]
