"""Numeric realization of tilings on the unit sphere.

Families with closed-form coordinates (prisms) are placed directly; the
rest are embedded by breadth-first propagation: the seed face is laid out
from its corner angles and edge length, and every further face is placed
across an already-embedded edge.  Re-visiting a vertex checks the
propagated position against the stored one, so an inconsistent angle
solution or a wrong complex surfaces as a closure defect instead of a
silently distorted picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import trig
from .trig import TWO_PI, AngleSolution, mgon_lower_bound, solve_closure
from .complexes import TilingComplex, verify_combinatorial
from .generators import earth_map, prism

#: Global handedness of the face-walking rotation; fixed so that faces
#: listed counterclockwise close up instead of folding back on themselves.
SPIN = 1.0

#: Default ceiling on the distance between two placements of one vertex.
CLOSURE_TOL = 1e-7


class ClosureDefect(Exception):
    """Breadth-first placement revisited a vertex too far from its first position."""

    def __init__(self, vertex: int, distance: float):
        self.vertex = vertex
        self.distance = distance
        super().__init__(
            f"vertex {vertex} re-placed {distance:.3e} away from its first position"
        )


@dataclass
class Embedding:
    """Unit-sphere positions per vertex id, plus placement metadata."""

    positions: dict[int, np.ndarray]
    seed_face: int = 0
    worst_defect: float = 0.0

    def position_array(self, count: int) -> np.ndarray:
        return np.array([self.positions[v] for v in range(count)])


@dataclass(frozen=True)
class LuneParams:
    """Prism layout parameters: polar radius r, pole gap h, longitude offset."""

    m: int
    r: float
    h: float
    xi1: float


# -- earth-map parameter ------------------------------------------------------


def _earth_map_alpha(gamma: float) -> float:
    """Polygon angle forced by the rhombus angle gamma in an earth-map tiling."""
    t2 = math.tan(gamma / 4.0) ** 2
    return 2.0 * math.asin(2.0 * math.cos(math.pi / 5.0) / math.sqrt(3.0 - t2))


def _earth_map_c(gamma: float) -> float:
    """Block length c as a continuous function of gamma."""
    return (math.pi - _earth_map_alpha(gamma)) / gamma + 0.5


def earth_map_gamma(c: int) -> float:
    """The unique gamma in (0, 2*pi/5) whose block length is exactly c.

    c(gamma) decreases continuously from +infinity (gamma -> 0) to 1 at
    gamma = 2*pi/5, so for any integer c >= 2 bisection brackets the root;
    iteration stops at machine-width intervals, leaving |c(gamma) - c|
    well under 1e-10.
    """
    if c < 2:
        raise ValueError(f"earth-map blocks need c >= 2, got {c}")
    lo, hi = 1e-9, 2.0 * math.pi / 5.0
    flo = _earth_map_c(lo) - c
    fhi = _earth_map_c(hi) - c
    assert flo > 0.0 > fhi, "bisection bracket failed"
    while hi - lo > 1e-15 * hi:
        mid = 0.5 * (lo + hi)
        fmid = _earth_map_c(mid) - c
        if fmid == 0.0:
            return mid
        if fmid > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def earth_map_solution(c: int) -> AngleSolution:
    """Angle solution of the c-block earth-map tiling."""
    gamma = earth_map_gamma(c)
    alpha = _earth_map_alpha(gamma)
    beta = math.pi - gamma / 2.0
    return AngleSolution.checked(5, alpha, beta, gamma)


# -- prisms --------------------------------------------------------------------


def prism_r_bounds(m: int) -> tuple[float, float]:
    """Open interval of polar radii for which the prism layout exists."""
    return math.atan(1.0 / math.sin(math.pi / m)), math.pi / 2.0


def prism_geometric_bounds(m: int) -> tuple[float, float]:
    """Open radius interval where the rhombus corners stay strictly convex.

    The larger rhombus angle reaches pi exactly when the edge reaches a
    quarter great circle (cos x = 0), which only happens for m = 3 at
    tan(r) = sqrt(2); for m >= 4 the full layout interval qualifies.
    """
    lo, hi = prism_r_bounds(m)
    c = math.cos(TWO_PI / m)
    if c < 0.0:
        hi = min(hi, math.atan(math.sqrt(-1.0 / c)))
    return lo, hi


def prism_default_radius(m: int) -> float:
    """Midpoint of the geometrically valid radius interval."""
    lo, hi = prism_geometric_bounds(m)
    return 0.5 * (lo + hi)


def prism_params(m: int, r: float) -> LuneParams:
    """Longitude offset between the two polar m-gons at radius r.

    The rhombus closes only when the polar gap h = pi - 2r is shorter than
    the edge, i.e. cot(r) < sin(pi/m); the offset is then
    arccos(2*cot(r)^2 + cos(2*pi/m)), always inside (0, 2*pi/m).
    """
    if m < 3:
        raise ValueError(f"prism needs m >= 3, got {m}")
    lo, hi = prism_r_bounds(m)
    if not (lo < r < hi):
        raise ValueError(
            f"polar radius must lie in ({lo:.6f}, {hi:.6f}) for m={m}, got {r}"
        )
    cot_r = 1.0 / math.tan(r)
    xi1 = math.acos(2.0 * cot_r * cot_r + math.cos(TWO_PI / m))
    return LuneParams(m=m, r=r, h=math.pi - 2.0 * r, xi1=xi1)


def prism_solution(m: int, r: float) -> AngleSolution:
    """Angles of the prism tiling at polar radius r.

    The edge follows from the layout, alpha from the m-gon edge identity,
    and beta, gamma from splitting the remaining angle 2*pi - alpha so the
    rhombus identity holds: with u = beta/2, v = gamma/2 one has
    u + v = pi - alpha/2 and cos(u - v) = cos(alpha/2)(1+cos x)/(1-cos x).
    """
    params = prism_params(m, r)
    cos_x = math.cos(r) ** 2 + math.sin(r) ** 2 * math.cos(TWO_PI / m)
    if cos_x <= 0.0:
        raise ValueError(
            f"edge reaches a quarter circle at r={r}; the larger rhombus "
            "corner flattens, so no convex tiling exists there"
        )
    cos_half_alpha_sq = (cos_x - math.cos(TWO_PI / m)) / (1.0 + cos_x)
    half_alpha = math.acos(math.sqrt(cos_half_alpha_sq))
    alpha = 2.0 * half_alpha
    d = math.cos(half_alpha) * (1.0 + cos_x) / (1.0 - cos_x)
    if d > 1.0:
        d = min(d, 1.0 + 1e-12)
        if d > 1.0 + 1e-9:
            raise ValueError("no rhombus splits the remaining angle at this radius")
        d = 1.0
    diff = math.acos(d)
    total = math.pi - half_alpha
    beta = total + diff
    gamma = total - diff
    return AngleSolution.checked(m, alpha, beta, gamma)


def embed_prism(m: int, r: float) -> tuple[TilingComplex, Embedding]:
    """Prism tiling with explicit coordinates: north m-gon at colatitude r,
    south m-gon at colatitude pi - r, rings offset in longitude by xi1.

    The north ring trails by xi1 (rather than leading) so that the short
    rhombus diagonal joins the two corners carrying the larger angle.
    """
    params = prism_params(m, r)
    t = prism(m)
    positions: dict[int, np.ndarray] = {}
    for v, name in enumerate(t.vertex_names):
        ring, p = name
        if ring == "N":
            colat, lon = r, p * TWO_PI / m - params.xi1
        else:
            colat, lon = math.pi - r, p * TWO_PI / m
        positions[v] = np.array(
            [
                math.sin(colat) * math.cos(lon),
                math.sin(colat) * math.sin(lon),
                math.cos(colat),
            ]
        )
    return t, Embedding(positions, seed_face=0)


# -- sporadic solutions ----------------------------------------------------------


@lru_cache(maxsize=None)
def sporadic_solution(kind: str) -> AngleSolution:
    """The isolated angle solutions of the two sporadic families.

    ``football``: vertex types beta^3 and alpha.beta.gamma^2 force a single
    solution with beta exactly 2*pi/3.  ``snub-fusion``: types alpha.beta^2
    and alpha.beta.gamma^2 force the solution with beta = 2*gamma.
    """
    systems = {
        "football": ((0, 3, 0), (1, 1, 2)),
        "snub-fusion": ((1, 2, 0), (1, 1, 2)),
    }
    key = kind.lower().replace("_", "-")
    if key not in systems:
        raise ValueError(f"unknown sporadic kind {kind!r}")
    roots = solve_closure(5, list(systems[key]))
    assert len(roots) == 1, f"{kind}: expected a unique closure root, got {len(roots)}"
    return roots[0]


# -- generic breadth-first embedding -----------------------------------------


def _normalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _tangent_toward(p_from: np.ndarray, p_to: np.ndarray) -> np.ndarray:
    """Unit tangent at p_from pointing along the geodesic to p_to."""
    t = p_to - np.dot(p_to, p_from) * p_from
    n = np.linalg.norm(t)
    if n < 1e-14:
        raise ValueError("tangent undefined between coincident or antipodal points")
    return t / n


def _step(p: np.ndarray, tangent: np.ndarray, arc: float) -> np.ndarray:
    return math.cos(arc) * p + math.sin(arc) * tangent


def _rotate_tangent(p: np.ndarray, tangent: np.ndarray, angle: float) -> np.ndarray:
    """Rotate a tangent vector at p about the axis p by the given angle."""
    return math.cos(angle) * tangent + math.sin(angle) * np.cross(p, tangent)


def _angle_value(s: AngleSolution, label: str) -> float:
    return {"alpha": s.alpha, "beta": s.beta, "gamma": s.gamma}[label]


def embed_generic(
    t: TilingComplex,
    s: AngleSolution,
    closure_tol: float = CLOSURE_TOL,
) -> Embedding:
    """Embed a tiling by walking faces breadth-first from a seed face.

    The seed is a face at a highest-degree vertex (lowest index breaking
    ties) and is posed with its centroid at the north pole and the first
    edge's midpoint on the prime meridian.  Every other face is entered
    across one shared, already-placed edge and walked out corner by
    corner; a revisited vertex keeps its first position and the distance
    to the new candidate is tracked.  A worst distance beyond
    ``closure_tol`` raises :class:`ClosureDefect`.
    """
    x = s.x
    best_vertex = max(range(t.vertex_count), key=t.degree)
    seed_face = min(
        t.face_of_half_edge(h) for h in t.out_half_edges(best_vertex)
    )

    positions: dict[int, np.ndarray] = {}
    worst_defect = 0.0
    worst_vertex = -1

    def place(v: int, p: np.ndarray) -> None:
        nonlocal worst_defect, worst_vertex
        if v in positions:
            d = float(np.linalg.norm(positions[v] - p))
            if d > worst_defect:
                worst_defect = d
                worst_vertex = v
            return
        positions[v] = p

    def walk_face(entry: int) -> list[int]:
        """Place the remaining corners of entry's face; both endpoints of
        entry must already be placed.  Returns the face's half-edges."""
        half_edges = [entry]
        h = t.next_half_edge(entry)
        while h != entry:
            half_edges.append(h)
            h = t.next_half_edge(h)
        prev_v, cur_v = t.half_edge_endpoints(entry)
        p_prev, p_cur = positions[prev_v], positions[cur_v]
        # The final step re-derives the entry vertex, so every face walk
        # doubles as a closure check on the angle solution.
        for he in half_edges[1:]:
            corner = t.label_of(he)
            theta = _angle_value(s, corner)
            back = _tangent_toward(p_cur, p_prev)
            forward = _rotate_tangent(p_cur, back, SPIN * theta)
            p_next = _step(p_cur, forward, x)
            next_v = t.half_edge_endpoints(he)[1]
            place(next_v, p_next)
            p_prev, p_cur = p_cur, positions[next_v]
        return half_edges

    # Seed face: place its first edge along an arbitrary frame, walk the
    # rest, then re-pose the whole sphere afterwards.
    seed_edges = t.half_edges_of_face(seed_face)
    v0, v1 = t.half_edge_endpoints(seed_edges[0])
    positions[v0] = np.array([0.0, 0.0, 1.0])
    positions[v1] = np.array([math.sin(x), 0.0, math.cos(x)])
    walk_face(seed_edges[0])

    placed_faces = {seed_face}
    queue = [t.twin(h) for h in seed_edges]
    head = 0
    while head < len(queue):
        entry = queue[head]
        head += 1
        fi = t.face_of_half_edge(entry)
        if fi in placed_faces:
            continue
        placed_faces.add(fi)
        for h in walk_face(entry):
            queue.append(t.twin(h))

    if worst_defect > closure_tol:
        raise ClosureDefect(worst_vertex, worst_defect)

    for v in positions:
        positions[v] = _normalize(positions[v])

    _pose(t, positions, seed_face)
    return Embedding(positions, seed_face=seed_face, worst_defect=worst_defect)


def _pose(t: TilingComplex, positions: dict[int, np.ndarray], seed_face: int) -> None:
    """Rotate all positions so the seed centroid hits the north pole and the
    seed face's first edge midpoint lands on the prime meridian."""
    face = t.faces[seed_face]
    centroid = _normalize(sum(positions[v] for v in face.vertices))
    v0, v1 = face.vertices[0], face.vertices[1]
    midpoint = _normalize(positions[v0] + positions[v1])

    z = centroid
    y = np.cross(z, midpoint)
    ny = np.linalg.norm(y)
    if ny < 1e-12:
        ref = np.array([1.0, 0.0, 0.0])
        if abs(np.dot(ref, z)) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        y = np.cross(z, ref)
        ny = np.linalg.norm(y)
    y /= ny
    x_axis = np.cross(y, z)
    rot = np.vstack([x_axis, y, z])
    for v in positions:
        positions[v] = rot @ positions[v]


def embed_earth_map(c: int) -> tuple[TilingComplex, Embedding]:
    """Earth-map tiling realized at its unique angle solution."""
    t = earth_map(c)
    s = earth_map_solution(c)
    return t, embed_generic(t, s)


# -- geometric verification -----------------------------------------------------


@dataclass
class GeometricReport:
    """Measured edge lengths, corner angles, vertex sums, area and overlaps."""

    ok: bool
    failures: list[str]
    edge_arc_min: float
    edge_arc_max: float
    edge_spread: float
    worst_corner_defect: float
    worst_vertex_sum_defect: float
    total_area: float
    area_defect: float
    overlapping_faces: list[tuple[int, int]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _corner_angle(
    p_prev: np.ndarray, p_cur: np.ndarray, p_next: np.ndarray
) -> float:
    t1 = _tangent_toward(p_cur, p_prev)
    t2 = _tangent_toward(p_cur, p_next)
    return math.acos(max(-1.0, min(1.0, float(np.dot(t1, t2)))))


def _face_sample_points(points: list[np.ndarray], count: int = 16) -> list[np.ndarray]:
    """Deterministic interior samples: the centroid plus points pulled from
    the centroid toward each corner."""
    centroid = _normalize(sum(points))
    samples = [centroid]
    k = len(points)
    fractions = (0.35, 0.65, 0.87)
    i = 0
    while len(samples) < count:
        corner = points[i % k]
        frac = fractions[(i // k) % len(fractions)]
        samples.append(_normalize((1.0 - frac) * centroid + frac * corner))
        i += 1
    return samples


def verify_geometric(
    t: TilingComplex,
    e: Embedding,
    s: AngleSolution,
    tol: float = 1e-6,
) -> GeometricReport:
    """Check an embedding against its angle solution.

    Verifies unit norms, every edge's arc length against the common edge,
    every corner angle against its label, per-vertex angle sums of 2*pi,
    the total spherical excess of 4*pi, and face interiors staying out of
    each other.  Report-based: failures are collected, nothing raises.
    """
    failures: list[str] = []
    pos = e.positions

    for v in range(t.vertex_count):
        n = float(np.linalg.norm(pos[v]))
        if abs(n - 1.0) > 1e-12:
            failures.append(f"vertex {v} has norm {n:.15f}")

    x = s.x
    arcs = []
    for (u, v) in t.undirected_edges():
        d = max(-1.0, min(1.0, float(np.dot(pos[u], pos[v]))))
        arcs.append(math.acos(d))
    edge_min, edge_max = min(arcs), max(arcs)
    spread = edge_max - edge_min
    if abs(edge_min - x) > tol or abs(edge_max - x) > tol:
        failures.append(
            f"edge arcs range [{edge_min:.12f}, {edge_max:.12f}], expected {x:.12f}"
        )

    worst_corner = 0.0
    vertex_sums = {v: 0.0 for v in range(t.vertex_count)}
    face_excess_total = 0.0
    for face in t.faces:
        k = face.size
        measured_sum = 0.0
        for i in range(k):
            p_prev = pos[face.vertices[(i - 1) % k]]
            p_cur = pos[face.vertices[i]]
            p_next = pos[face.vertices[(i + 1) % k]]
            angle = _corner_angle(p_prev, p_cur, p_next)
            expected = _angle_value(s, face.labels[i])
            worst_corner = max(worst_corner, abs(angle - expected))
            if abs(angle - expected) > tol:
                failures.append(
                    f"corner {face.labels[i]} at vertex {face.vertices[i]} measures "
                    f"{angle:.12f}, expected {expected:.12f}"
                )
            vertex_sums[face.vertices[i]] += angle
            measured_sum += angle
        face_excess_total += measured_sum - (k - 2) * math.pi

    worst_vertex_sum = max(abs(total - TWO_PI) for total in vertex_sums.values())
    if worst_vertex_sum > max(tol, 1e-6):
        failures.append(
            f"worst vertex angle sum is off 2*pi by {worst_vertex_sum:.3e}"
        )

    area_defect = abs(face_excess_total - 4.0 * math.pi)
    if area_defect > max(tol, 1e-6):
        failures.append(
            f"total spherical excess {face_excess_total:.12f} differs from "
            f"4*pi by {area_defect:.3e}"
        )

    overlaps = _find_overlaps(t, pos)
    if overlaps:
        failures.append(f"{len(overlaps)} face pairs have overlapping interiors")

    return GeometricReport(
        ok=not failures,
        failures=failures,
        edge_arc_min=edge_min,
        edge_arc_max=edge_max,
        edge_spread=spread,
        worst_corner_defect=worst_corner,
        worst_vertex_sum_defect=worst_vertex_sum,
        total_area=face_excess_total,
        area_defect=area_defect,
        overlapping_faces=overlaps,
    )


def _find_overlaps(
    t: TilingComplex, pos: dict[int, np.ndarray], margin: float = 1e-6
) -> list[tuple[int, int]]:
    """Face pairs whose sampled interiors intrude into each other.

    Every face is convex (spherical polygon with angles below pi), so a
    point is strictly inside one iff it is on the interior side of each
    boundary plane by more than the margin.
    """
    face_points = []
    face_planes = []
    for fi, face in enumerate(t.faces):
        points = [pos[v] for v in face.vertices]
        face_points.append(_face_sample_points(points))
        k = len(points)
        planes = [np.cross(points[i], points[(i + 1) % k]) for i in range(k)]
        face_planes.append(planes)

    # The common orientation sign: interior samples of a face against its
    # own boundary planes.
    centroid0 = face_points[0][0]
    sign = 1.0 if min(float(np.dot(pl, centroid0)) for pl in face_planes[0]) > 0 else -1.0

    overlaps = []
    for fi in range(len(t.faces)):
        for fj in range(fi + 1, len(t.faces)):
            hit = False
            for p in face_points[fj]:
                if all(
                    sign * float(np.dot(pl, p)) > margin for pl in face_planes[fi]
                ):
                    hit = True
                    break
            if not hit:
                for p in face_points[fi]:
                    if all(
                        sign * float(np.dot(pl, p)) > margin
                        for pl in face_planes[fj]
                    ):
                        hit = True
                        break
            if hit:
                overlaps.append((fi, fj))
    return overlaps
