"""Half-edge complexes for labeled spherical tilings.

A tiling is stored as a closed, oriented half-edge mesh whose faces are
either regular m-gons (every corner labeled ``alpha``), rhombi (corners
alternating ``beta``, ``gamma``) or, as a construction intermediate only,
equilateral triangles (corners all ``gamma``).  Building from a face list
validates the edge-to-edge property, the manifold condition, sphericity
(Euler characteristic 2 plus connectivity) and the label discipline.

Corner labels live on half-edges: the label of a half-edge is the corner
at its origin vertex inside its face.  That makes the rhombus alternation
a purely local test and gives the canonical-code traversal direct access
to the labels it must serialize.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

from .trig import TWO_PI, ANGLE_NAMES, AngleSolution

KINDS = ("mgon", "rhombus", "triangle")
_KIND_CODE = {k: i for i, k in enumerate(KINDS)}
_LABEL_CODE = {name: i for i, name in enumerate(ANGLE_NAMES)}

VertexTriple = tuple[int, int, int]
FaceSpec = tuple[str, Sequence[Hashable], Sequence[str]]


class TilingError(Exception):
    """Base class for complex construction failures."""


class NotEdgeToEdge(TilingError):
    """A directed edge is duplicated or lacks its oppositely oriented partner."""


class NotSphere(TilingError):
    """The complex is not a connected 2-sphere."""


class BadLabels(TilingError):
    """A face's kind, size or corner labels break the labeling discipline."""


class DegreeTooLow(TilingError):
    """Some vertex has fewer than three incident faces."""


@dataclass(frozen=True)
class Face:
    kind: str
    vertices: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


class TilingComplex:
    """Immutable validated half-edge complex.

    Construct through :func:`build_from_faces`.  Vertex ids given to the
    builder may be arbitrary hashable names; they are renumbered to
    0..V-1 in order of first appearance, and the original names remain
    available through :attr:`vertex_names`.
    """

    __slots__ = (
        "faces", "vertex_names", "_origin", "_label", "_next", "_prev",
        "_twin", "_face_of", "_face_start", "_out_edges",
    )

    def __init__(
        self,
        faces: tuple[Face, ...],
        vertex_names: tuple[Hashable, ...],
        origin: list[int],
        label: list[str],
        nxt: list[int],
        twin: list[int],
        face_of: list[int],
        face_start: list[int],
        out_edges: dict[int, list[int]],
    ):
        self.faces = faces
        self.vertex_names = vertex_names
        self._origin = origin
        self._label = label
        self._next = nxt
        self._prev = _invert(nxt)
        self._twin = twin
        self._face_of = face_of
        self._face_start = face_start
        self._out_edges = out_edges

    # -- basic counts ------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_names)

    @property
    def half_edge_count(self) -> int:
        return len(self._origin)

    @property
    def edge_count(self) -> int:
        return len(self._origin) // 2

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    @property
    def gonality(self) -> int:
        """Edge count of the regular polygon prototile."""
        for f in self.faces:
            if f.kind == "mgon":
                return f.size
        raise TilingError("complex has no m-gon face")

    def degree(self, v: int) -> int:
        return len(self._out_edges[v])

    def corner_labels_at(self, v: int) -> list[str]:
        return [self._label[h] for h in self._out_edges[v]]

    def face_specs(self) -> list[tuple[str, list[int], list[str]]]:
        """Face list with internal vertex ids, suitable for re-building."""
        return [(f.kind, list(f.vertices), list(f.labels)) for f in self.faces]

    # -- census ------------------------------------------------------------

    def census(self) -> dict[VertexTriple, int]:
        """Count vertices by type (a, b, c) = corner multiplicities of each angle."""
        out: dict[VertexTriple, int] = {}
        for v in range(self.vertex_count):
            counts = [0, 0, 0]
            for h in self._out_edges[v]:
                counts[_LABEL_CODE[self._label[h]]] += 1
            key = (counts[0], counts[1], counts[2])
            out[key] = out.get(key, 0) + 1
        return out

    def corner_counts(self) -> tuple[int, int, int]:
        counts = [0, 0, 0]
        for lab in self._label:
            counts[_LABEL_CODE[lab]] += 1
        return counts[0], counts[1], counts[2]

    # -- traversal helpers used by realization/serialization ---------------

    def face_of_half_edge(self, h: int) -> int:
        return self._face_of[h]

    def half_edges_of_face(self, f: int) -> list[int]:
        start = self._face_start[f]
        out = [start]
        h = self._next[start]
        while h != start:
            out.append(h)
            h = self._next[h]
        return out

    def half_edge_endpoints(self, h: int) -> tuple[int, int]:
        return self._origin[h], self._origin[self._next[h]]

    def twin(self, h: int) -> int:
        return self._twin[h]

    def next_half_edge(self, h: int) -> int:
        return self._next[h]

    def label_of(self, h: int) -> str:
        return self._label[h]

    def out_half_edges(self, v: int) -> list[int]:
        return list(self._out_edges[v])

    def undirected_edges(self) -> list[tuple[int, int]]:
        return [
            (self._origin[h], self._origin[self._next[h]])
            for h in range(len(self._origin))
            if self._origin[h] < self._origin[self._next[h]]
        ]

    # -- canonical form ------------------------------------------------------

    def _canonical_starts(self) -> list[int]:
        """Half-edges of every face whose (kind, size) key is minimal.

        Any traversal opens with its start face's kind code and size, so a
        traversal started on a non-minimal face can never beat one started
        on a minimal face; restricting the start set this way changes
        nothing about the resulting minimum.
        """
        best_key = min((_KIND_CODE[f.kind], f.size) for f in self.faces)
        starts: list[int] = []
        for i, f in enumerate(self.faces):
            if (_KIND_CODE[f.kind], f.size) == best_key:
                starts.extend(self.half_edges_of_face(i))
        return starts

    def _traverse(
        self, start: int, mirror: bool, best: Optional[list[int]]
    ) -> Optional[list[int]]:
        """Token stream of one BFS traversal, or None when pruned by ``best``.

        With ``mirror`` the traversal walks the reflected complex: half-edge
        ids are reused, but a half-edge stands for its reversal, so its
        origin becomes its head, its corner label is the one at the head,
        and the within-face successor is the predecessor.
        """
        nxt = self._prev if mirror else self._next
        origin = self._origin
        label = self._label
        shift = self._next if mirror else None

        tokens: list[int] = []
        tied = best is not None

        vertex_number: dict[int, int] = {}
        visited = [False] * len(self.faces)
        queue: deque[int] = deque([start])

        while queue:
            h = queue.popleft()
            fi = self._face_of[h]
            if visited[fi]:
                continue
            visited[fi] = True
            face = self.faces[fi]
            walk = []
            e = h
            for _ in range(face.size):
                walk.append(e)
                e = nxt[e]

            face_tokens = [_KIND_CODE[face.kind], face.size]
            for w in walk:
                if shift is not None:
                    w_corner = shift[w]
                else:
                    w_corner = w
                v = origin[w_corner]
                num = vertex_number.get(v)
                if num is None:
                    num = len(vertex_number)
                    vertex_number[v] = num
                face_tokens.append(num)
                face_tokens.append(_LABEL_CODE[label[w_corner]])

            if tied:
                pos = len(tokens)
                for tok in face_tokens:
                    b = best[pos]
                    if tok > b:
                        return None
                    if tok < b:
                        tied = False
                        break
                    pos += 1
            tokens.extend(face_tokens)

            for w in walk:
                queue.append(self._twin[w])

        if tied:
            return None
        return tokens


def _invert(nxt: list[int]) -> list[int]:
    prev = [0] * len(nxt)
    for h, n in enumerate(nxt):
        prev[n] = h
    return prev


# -- construction ------------------------------------------------------------


def _check_face(kind: str, vertices: Sequence[Hashable], labels: Sequence[str]) -> None:
    if kind not in KINDS:
        raise BadLabels(f"unknown face kind {kind!r}")
    if len(labels) != len(vertices):
        raise BadLabels(
            f"{kind} face has {len(vertices)} vertices but {len(labels)} labels"
        )
    if len(set(vertices)) != len(vertices):
        raise NotEdgeToEdge(f"{kind} face visits a vertex twice: {tuple(vertices)!r}")
    for lab in labels:
        if lab not in ANGLE_NAMES:
            raise BadLabels(f"unknown corner label {lab!r}")
    if kind == "mgon":
        if len(vertices) < 3:
            raise BadLabels("m-gon face needs at least 3 vertices")
        if any(lab != "alpha" for lab in labels):
            raise BadLabels(f"m-gon corners must all be alpha, got {tuple(labels)!r}")
    elif kind == "rhombus":
        if len(vertices) != 4:
            raise BadLabels("rhombus face needs exactly 4 vertices")
        l0, l1, l2, l3 = labels
        if l0 != l2 or l1 != l3 or {l0, l1} != {"beta", "gamma"}:
            raise BadLabels(
                f"rhombus corners must alternate beta/gamma, got {tuple(labels)!r}"
            )
    else:
        if len(vertices) != 3:
            raise BadLabels("triangle face needs exactly 3 vertices")
        if any(lab != "gamma" for lab in labels):
            raise BadLabels(
                f"triangle corners carry the provisional gamma label, got {tuple(labels)!r}"
            )


def build_from_faces(face_specs: Iterable[FaceSpec]) -> TilingComplex:
    """Validate a face list and assemble the half-edge complex.

    Each spec is (kind, cyclic vertex list, cyclic label list) with the
    label at position i sitting at the corner of vertex i.  Raises
    NotEdgeToEdge, NotSphere, BadLabels or DegreeTooLow as appropriate.
    """
    specs = list(face_specs)
    if not specs:
        raise NotSphere("no faces")

    vertex_ids: dict[Hashable, int] = {}
    faces: list[Face] = []
    for kind, vertices, labels in specs:
        _check_face(kind, vertices, labels)
        ids = []
        for name in vertices:
            if name not in vertex_ids:
                vertex_ids[name] = len(vertex_ids)
            ids.append(vertex_ids[name])
        faces.append(Face(kind, tuple(ids), tuple(labels)))

    mgon_sizes = {f.size for f in faces if f.kind == "mgon"}
    if len(mgon_sizes) > 1:
        raise BadLabels(
            f"all m-gon faces must be congruent, got sizes {sorted(mgon_sizes)}"
        )

    origin: list[int] = []
    label: list[str] = []
    nxt: list[int] = []
    face_of: list[int] = []
    face_start: list[int] = []
    directed: dict[tuple[int, int], int] = {}

    for fi, face in enumerate(faces):
        k = face.size
        base = len(origin)
        face_start.append(base)
        for i in range(k):
            u = face.vertices[i]
            v = face.vertices[(i + 1) % k]
            key = (u, v)
            if key in directed:
                raise NotEdgeToEdge(
                    f"directed edge {u}->{v} appears in two faces; "
                    "orientations are inconsistent or the mesh is not edge-to-edge"
                )
            directed[key] = base + i
            origin.append(u)
            label.append(face.labels[i])
            nxt.append(base + (i + 1) % k)
            face_of.append(fi)

    twin = [-1] * len(origin)
    for (u, v), h in directed.items():
        partner = directed.get((v, u))
        if partner is None:
            raise NotEdgeToEdge(f"edge {u}-{v} borders only one face")
        twin[h] = partner

    out_edges: dict[int, list[int]] = {v: [] for v in range(len(vertex_ids))}
    for h, u in enumerate(origin):
        out_edges[u].append(h)

    for v, edges in out_edges.items():
        if len(edges) < 3:
            raise DegreeTooLow(
                f"vertex {_name_of(vertex_ids, v)!r} has degree {len(edges)}"
            )

    # Manifold link check: rotating a half-edge about its origin via
    # next(twin(h)) must visit every out-edge of that origin in one cycle.
    for v, edges in out_edges.items():
        seen = {edges[0]}
        h = edges[0]
        for _ in range(len(edges) - 1):
            h = nxt[twin[h]]
            if h in seen:
                break
            seen.add(h)
        if len(seen) != len(edges):
            raise NotSphere(
                f"vertex {_name_of(vertex_ids, v)!r} has a pinched link "
                f"({len(seen)} of {len(edges)} faces in one umbrella)"
            )

    # Connectivity over the face-adjacency graph.
    reached = [False] * len(faces)
    queue = deque([0])
    reached[0] = True
    count = 1
    while queue:
        fi = queue.popleft()
        base = face_start[fi]
        for i in range(faces[fi].size):
            g = face_of[twin[base + i]]
            if not reached[g]:
                reached[g] = True
                count += 1
                queue.append(g)
    if count != len(faces):
        raise NotSphere(f"complex is disconnected ({count} of {len(faces)} faces reachable)")

    v_count = len(vertex_ids)
    e_count = len(origin) // 2
    f_count = len(faces)
    euler = v_count - e_count + f_count
    if euler != 2:
        raise NotSphere(
            f"Euler characteristic {euler} (V={v_count}, E={e_count}, F={f_count}), expected 2"
        )

    names = tuple(sorted(vertex_ids, key=vertex_ids.get))
    return TilingComplex(
        tuple(faces), names, origin, label, nxt, twin, face_of, face_start, out_edges
    )


def _name_of(vertex_ids: dict[Hashable, int], internal: int) -> Hashable:
    for name, idx in vertex_ids.items():
        if idx == internal:
            return name
    return internal


# -- combinatorial verification ----------------------------------------------


@dataclass
class CombinatorialReport:
    """Outcome of checking a complex against an angle solution.

    Failures are accumulated as messages; ``ok`` is their absence.  The
    census maps each vertex type (a, b, c) to its number of occurrences.
    """

    ok: bool
    failures: list[str]
    census: dict[VertexTriple, int]
    corner_counts: tuple[int, int, int]
    vertex_count: int
    edge_count: int
    face_count: int
    euler_characteristic: int
    worst_vertex_defect: float = 0.0
    notes: list[str] = field(default_factory=list)


def verify_combinatorial(
    t: TilingComplex, s: AngleSolution, tol: float = 1e-9
) -> CombinatorialReport:
    """Check vertex angle sums, global corner balance and the Euler count.

    Never raises; every broken condition is recorded as a failure message.
    """
    failures: list[str] = []
    census = t.census()

    try:
        gon = t.gonality
        if gon != s.m:
            failures.append(f"complex gonality {gon} does not match solution m={s.m}")
    except TilingError:
        failures.append("complex has no m-gon face to compare with the solution")

    angles = (s.alpha, s.beta, s.gamma)
    worst = 0.0
    for (a, b, c), count in census.items():
        total = a * angles[0] + b * angles[1] + c * angles[2]
        defect = abs(total - TWO_PI)
        worst = max(worst, defect)
        if defect >= tol:
            failures.append(
                f"vertex type (a={a}, b={b}, c={c}) x{count} sums to "
                f"{total:.12f}, off 2*pi by {defect:.3e}"
            )

    n_alpha, n_beta, n_gamma = t.corner_counts()
    n_mgon = sum(1 for f in t.faces if f.kind == "mgon")
    n_rhombus = sum(1 for f in t.faces if f.kind == "rhombus")
    n_triangle = sum(1 for f in t.faces if f.kind == "triangle")
    if n_triangle:
        failures.append(f"{n_triangle} unfused triangle faces present")
    expected_alpha = sum(f.size for f in t.faces if f.kind == "mgon")
    if n_alpha != expected_alpha:
        failures.append(f"alpha corner count {n_alpha}, expected {expected_alpha}")
    if n_beta != 2 * n_rhombus or n_gamma != 2 * n_rhombus:
        failures.append(
            f"beta/gamma corner counts {n_beta}/{n_gamma}, expected "
            f"{2 * n_rhombus} each from {n_rhombus} rhombi"
        )

    reconstructed = [0, 0, 0]
    for (a, b, c), count in census.items():
        reconstructed[0] += a * count
        reconstructed[1] += b * count
        reconstructed[2] += c * count
    if tuple(reconstructed) != (n_alpha, n_beta, n_gamma):
        failures.append("census does not reproduce the global corner counts")

    if t.euler_characteristic != 2:
        failures.append(f"Euler characteristic {t.euler_characteristic} != 2")

    return CombinatorialReport(
        ok=not failures,
        failures=failures,
        census=census,
        corner_counts=(n_alpha, n_beta, n_gamma),
        vertex_count=t.vertex_count,
        edge_count=t.edge_count,
        face_count=t.face_count,
        euler_characteristic=t.euler_characteristic,
        worst_vertex_defect=worst,
    )


# -- canonical codes ----------------------------------------------------------


def canonical_code(
    t: TilingComplex, include_reflections: bool = True
) -> tuple[int, ...]:
    """Minimal token stream over label-aware BFS traversals of the complex.

    The stream lists faces in discovery order as (kind code, size,
    vertex-number/label-code pairs), with vertex numbers assigned on first
    visit.  The minimum is taken over traversals started at every half-edge
    of every minimal-kind face, in both orientations when
    ``include_reflections`` (so mirror images share a code).  Equal codes
    correspond exactly to label-preserving isomorphism: the stream encodes
    enough to rebuild the face list with canonical vertex numbers.
    """
    best: Optional[list[int]] = None
    orientations = (False, True) if include_reflections else (False,)
    for start in t._canonical_starts():
        for mirror in orientations:
            tokens = t._traverse(start, mirror, best)
            if tokens is not None:
                best = tokens
    assert best is not None
    return tuple(best)


def isomorphic(
    t1: TilingComplex, t2: TilingComplex, include_reflections: bool = True
) -> bool:
    """Label-preserving isomorphism test through canonical codes."""
    if (
        t1.vertex_count != t2.vertex_count
        or t1.edge_count != t2.edge_count
        or t1.face_count != t2.face_count
    ):
        return False
    return canonical_code(t1, include_reflections) == canonical_code(
        t2, include_reflections
    )
