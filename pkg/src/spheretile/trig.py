"""Spherical-trigonometric core: edge-length identities and the closure equation.

A tiling of the unit sphere by one regular m-gon (interior angle ``alpha``)
and one rhombus (angles ``beta``, ``gamma``, alternating) is only possible
when both prototiles have the same edge length x.  The two identities

    cos x = cot(beta/2) * cot(gamma/2)                      (rhombus)
    cos x = cot^2(alpha/2) + cos(2*pi/m) / sin^2(alpha/2)   (m-gon)

combine into a single closure equation linking alpha, beta, gamma and m.
This module evaluates the identities, solves the closure equation under
linear vertex constraints by bracketed bisection, and produces dense-grid
nonexistence certificates for constraint systems with no admissible root.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

import numpy as np

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

#: Tolerance on the closure residual for an accepted angle solution.
RESIDUAL_TOL = 1e-10
#: Bisection stops once the bracket is narrower than this.
BRACKET_TOL = 1e-12
#: Samples closer than this to a cotangent pole are skipped and recorded.
POLE_TOL = 1e-12
#: Default sample spacing for nonexistence certificates.
EVIDENCE_SPACING = 1e-4 * math.pi

ANGLE_NAMES = ("alpha", "beta", "gamma")

VertexTriple = tuple[int, int, int]


class ClosureDomainError(ValueError):
    """An angle argument lies outside the open interval required by an identity."""


def mgon_lower_bound(m: int) -> float:
    """Smallest interior angle of a spherical regular m-gon, (1 - 2/m)*pi."""
    return (1.0 - 2.0 / m) * math.pi


def rhombus_edge_cos(beta: float, gamma: float) -> float:
    """Cosine of the rhombus edge length, cot(beta/2) * cot(gamma/2).

    Both angles must lie in the open interval (0, pi).  The result is the
    edge cosine of a spherical rhombus with angles beta, gamma, beta, gamma;
    callers needing a nondegenerate rhombus should check it lies in (-1, 1).
    """
    if not (0.0 < beta < math.pi):
        raise ClosureDomainError(f"beta must be in (0, pi), got {beta!r}")
    if not (0.0 < gamma < math.pi):
        raise ClosureDomainError(f"gamma must be in (0, pi), got {gamma!r}")
    return 1.0 / (math.tan(beta / 2.0) * math.tan(gamma / 2.0))


def mgon_edge_cos(m: int, alpha: float) -> float:
    """Cosine of the edge length of a regular spherical m-gon with angle alpha.

    Evaluates cot^2(alpha/2) + cos(2*pi/m) / sin^2(alpha/2).  The angle must
    lie strictly between (1 - 2/m)*pi (flat limit, edge cosine 1) and pi
    (degenerate limit, edge cosine cos(2*pi/m)).  On that interval the value
    decreases strictly from 1 to cos(2*pi/m), so every admissible edge
    satisfies cos(2*pi/m) < cos x < 1.
    """
    if m < 3:
        raise ClosureDomainError(f"gonality must be >= 3, got {m}")
    lo = mgon_lower_bound(m)
    if not (lo < alpha < math.pi):
        raise ClosureDomainError(
            f"alpha must be in ({lo / math.pi:.6f}*pi, pi) for m={m}, "
            f"got {alpha / math.pi:.6f}*pi"
        )
    half = alpha / 2.0
    s2 = math.sin(half) ** 2
    c2 = math.cos(half) ** 2
    return (c2 + math.cos(TWO_PI / m)) / s2


def closure_residual(m: int, alpha: float, beta: float, gamma: float) -> float:
    """m-gon edge cosine minus rhombus edge cosine.

    Zero exactly when the two prototiles share an edge length, i.e. when
    (alpha, beta, gamma) admits a common x.  Domain errors propagate from
    the two identity evaluations.
    """
    return mgon_edge_cos(m, alpha) - rhombus_edge_cos(beta, gamma)


def pi_fraction(value: float, max_den: int = 120, tol: float = 1e-9) -> Optional[Fraction]:
    """Recognize ``value`` as a rational multiple of pi for pretty-printing.

    Returns the Fraction q with value == q*pi within ``tol`` and denominator
    at most ``max_den``, or None.  Used only for display, never computation.
    """
    q = Fraction(value / math.pi).limit_denominator(max_den)
    if abs(float(q) * math.pi - value) <= tol:
        return q
    return None


def format_angle(value: float) -> str:
    """Format an angle in radians as a multiple of pi, exact when recognizable."""
    q = pi_fraction(value)
    if q is not None:
        if q.denominator == 1:
            return f"{q.numerator}*pi" if q.numerator != 1 else "pi"
        return f"{q.numerator}/{q.denominator}*pi"
    return f"{value / math.pi:.6f}*pi"


@dataclass(frozen=True)
class AngleSolution:
    """Angles (alpha, beta, gamma), gonality m and edge cosine satisfying closure.

    The plain constructor stores whatever it is given (tests build perturbed
    instances on purpose).  Use :meth:`checked` for validated construction:
    it normalizes beta > gamma, recomputes the edge cosine from both tiles
    and enforces agreement within RESIDUAL_TOL.
    """

    m: int
    alpha: float
    beta: float
    gamma: float
    cos_x: float
    edge_valid: bool = True

    @classmethod
    def checked(cls, m: int, alpha: float, beta: float, gamma: float) -> "AngleSolution":
        if beta < gamma:
            log.info(
                "swapping beta=%s and gamma=%s to keep beta > gamma",
                format_angle(beta), format_angle(gamma),
            )
            beta, gamma = gamma, beta
        from_rhombus = rhombus_edge_cos(beta, gamma)
        from_mgon = mgon_edge_cos(m, alpha)
        if abs(from_mgon - from_rhombus) >= RESIDUAL_TOL:
            raise ValueError(
                "closure residual too large: "
                f"{from_mgon - from_rhombus:.3e} for m={m}, "
                f"({format_angle(alpha)}, {format_angle(beta)}, {format_angle(gamma)})"
            )
        cos_x = from_rhombus
        return cls(m, alpha, beta, gamma, cos_x, edge_valid=0.0 < cos_x < 1.0)

    @property
    def x(self) -> float:
        """Edge arc length in radians."""
        return math.acos(self.cos_x)

    def angle(self, name: str) -> float:
        if name not in ANGLE_NAMES:
            raise KeyError(name)
        return getattr(self, name)

    def describe(self) -> str:
        return (
            f"m={self.m}: alpha={format_angle(self.alpha)}, "
            f"beta={format_angle(self.beta)}, gamma={format_angle(self.gamma)}, "
            f"x={format_angle(self.x)}"
        )


# --- admissible box -------------------------------------------------------
#
# Constraints a solution must satisfy to be a candidate tiling angle set:
#   (1 - 2/m)*pi < alpha < pi      (spherical m-gon exists)
#   0 < gamma < beta < pi          (rhombus angles, beta > gamma convention)
#   gamma < alpha                  (gamma is the smallest angle)
#   beta + gamma > pi              (spherical rhombus angle excess)
#   alpha + beta + gamma <= 2*pi   (a vertex fits all three angles)
#
# Each entry: (tag, coefficient row (ca, cb, cg), constant, strict) meaning
# ca*alpha + cb*beta + cg*gamma + constant > 0 (or >= 0 when strict=False).


def _box_rows(m: int) -> list[tuple[str, tuple[float, float, float], float, bool]]:
    return [
        ("alpha above m-gon bound", (1.0, 0.0, 0.0), -mgon_lower_bound(m), True),
        ("alpha below pi", (-1.0, 0.0, 0.0), math.pi, True),
        ("beta positive", (0.0, 1.0, 0.0), 0.0, True),
        ("beta below pi", (0.0, -1.0, 0.0), math.pi, True),
        ("gamma positive", (0.0, 0.0, 1.0), 0.0, True),
        ("gamma below beta", (0.0, 1.0, -1.0), 0.0, True),
        ("gamma below alpha", (1.0, 0.0, -1.0), 0.0, True),
        ("beta+gamma above pi", (0.0, 1.0, 1.0), -math.pi, True),
        ("angle sum at most 2*pi", (-1.0, -1.0, -1.0), TWO_PI, False),
    ]


def box_violations(m: int, alpha: float, beta: float, gamma: float) -> list[str]:
    """Tags of admissibility constraints violated by (alpha, beta, gamma)."""
    out = []
    for tag, (ca, cb, cg), const, strict in _box_rows(m):
        v = ca * alpha + cb * beta + cg * gamma + const
        if (v <= 0.0) if strict else (v < 0.0):
            out.append(tag)
    return out


def in_box(m: int, alpha: float, beta: float, gamma: float) -> bool:
    return not box_violations(m, alpha, beta, gamma)


# --- linear constraint reduction ------------------------------------------


def _constraint_rows(constraints: Sequence[VertexTriple]) -> np.ndarray:
    rows = np.array(constraints, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != 3:
        raise ValueError("constraints must be (a, b, c) triples")
    return rows


def _affine_line(
    constraints: Sequence[VertexTriple],
    pinned: Optional[tuple[str, float]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Reduce 2 vertex equations (or 1 plus a pinned angle) to an affine line.

    Returns (point, direction) with every solution of the linear system
    written as point + t * direction.  Raises ValueError when the two rows
    are linearly dependent.
    """
    rows = _constraint_rows(constraints)
    rhs = [TWO_PI] * len(rows)
    if pinned is not None:
        name, value = pinned
        pin_row = np.zeros(3)
        pin_row[ANGLE_NAMES.index(name)] = 1.0
        rows = np.vstack([rows, pin_row])
        rhs.append(value)
    if rows.shape[0] != 2:
        raise ValueError(
            "need exactly two independent linear conditions "
            "(two vertex types, or one plus a pinned angle)"
        )
    direction = np.cross(rows[0], rows[1])
    norm = np.linalg.norm(direction)
    if norm < 1e-12 * np.linalg.norm(rows[0]) * np.linalg.norm(rows[1]):
        raise ValueError("linearly dependent constraints")
    direction /= norm
    point, *_ = np.linalg.lstsq(rows, np.array(rhs), rcond=None)
    return point, direction


def _line_box_interval(
    m: int, point: np.ndarray, direction: np.ndarray
) -> Optional[tuple[float, float]]:
    """Intersect the affine line with the admissible box; None when empty."""
    t_lo, t_hi = -np.inf, np.inf
    for _tag, coeffs, const, _strict in _box_rows(m):
        row = np.array(coeffs)
        num = row @ point + const
        den = row @ direction
        if abs(den) < 1e-15:
            if num <= 0.0:
                return None
            continue
        bound = -num / den
        if den > 0.0:
            t_lo = max(t_lo, bound)
        else:
            t_hi = min(t_hi, bound)
    if not (t_lo < t_hi):
        return None
    return float(t_lo), float(t_hi)


def solve_closure(
    m: int,
    constraints: Sequence[VertexTriple],
    pinned: Optional[tuple[str, float]] = None,
    grid: int = 10_000,
) -> list[AngleSolution]:
    """Roots of the closure equation under linear vertex constraints.

    Each constraint (a, b, c) is read as a*alpha + b*beta + c*gamma = 2*pi.
    Two constraints (or one plus a ``pinned`` angle, given as a name/value
    pair) cut the angle space down to a line; the closure residual is then a
    function of one parameter, scanned over ``grid`` subintervals of the
    line's intersection with the admissible box, and every sign change is
    narrowed by bisection.  An empty return means no admissible root exists,
    which downstream code treats as a nonexistence signal.
    """
    point, direction = _affine_line(constraints, pinned)
    span = _line_box_interval(m, point, direction)
    if span is None:
        return []
    t_lo, t_hi = span
    margin = 1e-9 * (t_hi - t_lo)
    t_lo += margin
    t_hi -= margin
    if not (t_lo < t_hi):
        return []

    ts = np.linspace(t_lo, t_hi, grid + 1)
    angles = point[None, :] + ts[:, None] * direction[None, :]
    residuals = _residual_vec(m, angles)

    roots: list[float] = []
    finite = np.isfinite(residuals)
    for i in range(grid):
        if not (finite[i] and finite[i + 1]):
            continue
        r0, r1 = residuals[i], residuals[i + 1]
        if r0 == 0.0:
            roots.append(float(ts[i]))
            continue
        if r0 * r1 < 0.0:
            roots.append(_bisect(m, point, direction, float(ts[i]), float(ts[i + 1])))
    if finite[-1] and residuals[-1] == 0.0:
        roots.append(float(ts[-1]))

    solutions: list[AngleSolution] = []
    kept_ts: list[float] = []
    for t in sorted(roots):
        if any(abs(t - prev) < 1e-9 for prev in kept_ts):
            continue
        alpha, beta, gamma = (point + t * direction).tolist()
        if not in_box(m, alpha, beta, gamma):
            continue
        if abs(closure_residual(m, alpha, beta, gamma)) >= RESIDUAL_TOL:
            continue
        kept_ts.append(t)
        sol = AngleSolution.checked(m, alpha, beta, gamma)
        if not sol.edge_valid:
            log.warning(
                "closure root with degenerate edge cosine %.6f kept but flagged: %s",
                sol.cos_x, sol.describe(),
            )
        solutions.append(sol)
    solutions.sort(key=lambda s: s.alpha)
    return solutions


def _residual_vec(m: int, angles: np.ndarray) -> np.ndarray:
    """Vectorized closure residual; NaN outside the box or near poles."""
    alpha, beta, gamma = angles[:, 0], angles[:, 1], angles[:, 2]
    bad = (
        (alpha <= mgon_lower_bound(m)) | (alpha >= math.pi)
        | (beta <= POLE_TOL) | (beta >= math.pi - POLE_TOL)
        | (gamma <= POLE_TOL) | (gamma >= math.pi - POLE_TOL)
    )
    with np.errstate(all="ignore"):
        half = alpha / 2.0
        mg = (np.cos(half) ** 2 + math.cos(TWO_PI / m)) / np.sin(half) ** 2
        rh = 1.0 / (np.tan(beta / 2.0) * np.tan(gamma / 2.0))
        res = mg - rh
    res[bad] = np.nan
    return res


def _bisect(
    m: int, point: np.ndarray, direction: np.ndarray, lo: float, hi: float
) -> float:
    def f(t: float) -> float:
        a, b, g = point + t * direction
        return closure_residual(m, a, b, g)

    f_lo = f(lo)
    while hi - lo > BRACKET_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- nonexistence evidence --------------------------------------------------


SignSummary = Literal["constant-positive", "constant-negative", "all-violate"]


@dataclass(frozen=True)
class NonexistenceEvidence:
    """Dense-sampling record showing a constraint system admits no tiling angles.

    ``samples`` holds (parameter, residual) pairs where the closure residual
    was evaluated; ``violations`` holds (parameter, constraint tag) pairs for
    samples that fail an admissibility inequality; ``poles`` lists skipped
    parameters that fell within POLE_TOL of a cotangent pole.  This is
    numerical evidence on a fixed grid, not a proof.
    """

    description: str
    m: int
    constraints: tuple[VertexTriple, ...]
    free_angle: str
    interval: tuple[float, float]
    spacing: float
    sign_summary: SignSummary
    samples: tuple[tuple[float, float], ...] = field(repr=False)
    violations: tuple[tuple[float, str], ...] = field(repr=False)
    poles: tuple[float, ...] = field(repr=False, default=())

    def to_json(self) -> str:
        """Serialize deterministically (17 significant digits, fixed key order)."""
        payload = {
            "description": self.description,
            "m": self.m,
            "constraints": [list(c) for c in self.constraints],
            "free_angle": self.free_angle,
            "interval": [_f17(self.interval[0]), _f17(self.interval[1])],
            "spacing": _f17(self.spacing),
            "sign_summary": self.sign_summary,
            "samples": [[_f17(t), _f17(r)] for t, r in self.samples],
            "violations": [[_f17(t), tag] for t, tag in self.violations],
            "poles": [_f17(t) for t in self.poles],
        }
        return json.dumps(payload, separators=(",", ":"))

    @property
    def sample_count(self) -> int:
        return len(self.samples) + len(self.violations) + len(self.poles)


def _f17(x: float) -> str:
    return format(x, ".17g")


def _evidence_grid(lo: float, hi: float, spacing: float) -> np.ndarray:
    """Fixed midpoint grid covering (lo, hi) at most ``spacing`` apart."""
    if not (hi > lo):
        raise ValueError("empty interval")
    n = max(3, int(math.ceil((hi - lo) / spacing)))
    i = np.arange(n, dtype=float)
    return lo + (i + 0.5) * (hi - lo) / n


def certify_no_root(
    m: int,
    constraints: Sequence[VertexTriple],
    interval: tuple[float, float],
    free_angle: str = "alpha",
    spacing: float = EVIDENCE_SPACING,
    require_beta_above_alpha: bool = False,
    description: str = "",
) -> NonexistenceEvidence:
    """Sample a constraint system densely and certify the absence of a root.

    Three shapes of argument are supported, matching the three ways a vertex
    system fails:

    * two constraints: the closure residual becomes a function of
      ``free_angle`` on ``interval``; every in-box sample is recorded with
      its residual and must share one sign, out-of-box samples are recorded
      as inequality violations.
    * one constraint with no alpha term (e.g. 2*beta + gamma = 2*pi): the
      rhombus edge cosine is compared against the m-gon edge bound
      cos(2*pi/m); for m >= 6 every sample violates it.
    * one constraint with no beta term plus ``require_beta_above_alpha``:
      records, per sample, that the admissible beta range is empty (the
      lower bound beta > alpha meets the upper bound from the angle sum).

    Raises ValueError if evaluated residuals change sign (no certificate).
    """
    cons = tuple(tuple(int(v) for v in c) for c in constraints)
    ts = _evidence_grid(interval[0], interval[1], spacing)
    idx = ANGLE_NAMES.index(free_angle)

    samples: list[tuple[float, float]] = []
    violations: list[tuple[float, str]] = []
    poles: list[float] = []

    if len(cons) == 2:
        point, direction = _affine_line(cons)
        if abs(direction[idx]) < 1e-12:
            raise ValueError(f"{free_angle} is fixed by the constraints, pick another")
        for t in ts.tolist():
            scale = (t - point[idx]) / direction[idx]
            alpha, beta, gamma = (point + scale * direction).tolist()
            tags = box_violations(m, alpha, beta, gamma)
            if tags:
                violations.append((t, tags[0]))
                continue
            if min(alpha, beta, gamma) < POLE_TOL or max(alpha, beta, gamma) > math.pi - POLE_TOL:
                poles.append(t)
                continue
            samples.append((t, closure_residual(m, alpha, beta, gamma)))
    elif len(cons) == 1 and cons[0][0] == 0 and not require_beta_above_alpha:
        # beta/gamma constraint only: the m-gon side is unconstrained, but its
        # edge cosine always exceeds cos(2*pi/m); test the rhombus against that.
        a, b, c = cons[0]
        if free_angle != "gamma" or b == 0:
            raise ValueError("single-constraint edge-bound mode expects gamma free, beta derived")
        bound = math.cos(TWO_PI / m)
        for t in ts.tolist():
            gamma = t
            beta = (TWO_PI - c * gamma) / b
            if not (0.0 < gamma < math.pi) or not (0.0 < beta < math.pi):
                violations.append((t, "angle outside (0, pi)"))
                continue
            if gamma >= beta:
                violations.append((t, "gamma below beta"))
                continue
            edge = rhombus_edge_cos(beta, gamma)
            if edge <= bound:
                violations.append(
                    (t, f"edge bound: rhombus edge cos {_f17(edge)} <= cos(2*pi/m) {_f17(bound)}")
                )
            else:
                samples.append((t, edge - bound))
    elif len(cons) == 1 and cons[0][1] == 0 and require_beta_above_alpha:
        a, b, c = cons[0]
        if free_angle != "alpha" or a == 0:
            raise ValueError("empty-beta-range mode expects alpha free, gamma derived")
        for t in ts.tolist():
            alpha = t
            gamma = (TWO_PI - a * alpha) / c if c else math.nan
            if not (mgon_lower_bound(m) < alpha < math.pi):
                violations.append((t, "alpha above m-gon bound"))
                continue
            if not (0.0 < gamma < math.pi):
                violations.append((t, "angle outside (0, pi)"))
                continue
            if gamma >= alpha:
                violations.append((t, "gamma below alpha"))
                continue
            beta_low = max(alpha, gamma, math.pi - gamma)
            beta_high = min(math.pi, TWO_PI - alpha - gamma)
            if beta_low >= beta_high:
                violations.append(
                    (t, "empty beta range: needs beta > "
                        f"{_f17(beta_low)} and beta <= {_f17(beta_high)}")
                )
            else:
                samples.append((t, beta_high - beta_low))
    else:
        raise ValueError("unsupported constraint shape for certification")

    if samples:
        values = [r for _, r in samples]
        if all(v > 0.0 for v in values):
            summary: SignSummary = "constant-positive"
        elif all(v < 0.0 for v in values):
            summary = "constant-negative"
        else:
            raise ValueError(
                "sampled residuals change sign; a root may exist, no certificate"
            )
    elif violations:
        summary = "all-violate"
    else:
        raise ValueError("no samples fell in the interval")

    return NonexistenceEvidence(
        description=description or _default_description(cons, free_angle, summary),
        m=m,
        constraints=cons,
        free_angle=free_angle,
        interval=(float(interval[0]), float(interval[1])),
        spacing=float(spacing),
        sign_summary=summary,
        samples=tuple(samples),
        violations=tuple(violations),
        poles=tuple(poles),
    )


def _default_description(
    cons: tuple[VertexTriple, ...], free_angle: str, summary: str
) -> str:
    names = " and ".join(vertex_label(c) for c in cons)
    if summary == "all-violate":
        return f"every sampled {free_angle} violates an admissibility inequality for {names}"
    sign = "positive" if summary == "constant-positive" else "negative"
    return f"closure residual is {sign} throughout the {free_angle} interval for {names}"


def vertex_label(triple: Sequence[int]) -> str:
    """Human-readable name of a vertex type, e.g. (1, 2, 0) -> 'alpha.beta^2'."""
    parts = []
    for count, name in zip(triple, ANGLE_NAMES):
        if count == 1:
            parts.append(name)
        elif count > 1:
            parts.append(f"{name}^{count}")
    return ".".join(parts) if parts else "empty"
