"""Pencils of lines through a base point, branch points, and petal loops.

A pencil is a line in the dual plane.  With base point ``Q`` and two
further points ``W0, W1`` the line ``L_s`` joins ``Q`` to ``W0 + s*W1``;
its points are ``W0 + s*W1 + r*Q`` for finite ``r`` (``Q`` itself sits at
``r = inf`` and is off the curve).  The restriction

    G(r, s) = F(W0 + s*W1 + r*Q)

has constant leading coefficient ``F(Q)`` in ``r``, so intersection points
never escape the chart.  Branch points of the pencil are the roots of the
discriminant ``D(s) = disc_r G``, which has degree ``d(d-1)`` exactly when
the line ``s = inf`` is transversal.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import localgeom as lg
from .algebra import UniPoly, det3, discriminant, squarefree_decomposition, to_complex

DUAL_TANGENT = "dual-tangent"
MULTIPLE_BRANCH = "multiple-branch-line"
SINGULAR_POINT = "singular-point-line"


class PencilError(RuntimeError):
    pass


class DegeneratePencilError(PencilError):
    pass


@dataclass
class BranchPoint:
    index: int
    location: complex
    kind: str
    multiplicity: int
    expected_cycle_type: list
    point: tuple | None = None
    branches: list = field(default_factory=list)

    def to_dict(self):
        return {
            "index": self.index,
            "location": [self.location.real, self.location.imag],
            "kind": self.kind,
            "multiplicity": self.multiplicity,
            "expected_cycle_type": list(self.expected_cycle_type),
            "point": None if self.point is None else lg.point_to_json(self.point),
            "branches": [dict(b) for b in self.branches],
        }


@dataclass
class PencilConfig:
    """Base point ``Q`` and chart points ``W0, W1`` (exact integers), the
    start parameter ``s0``, and cached exact data for the curve it was
    chosen for."""

    Q: tuple
    W0: tuple
    W1: tuple
    s0: complex
    seed: int
    attempts: int = 1
    branch_points: list = field(default_factory=list, repr=False)
    discriminant_degree: int = 0
    family: "RestrictionFamily | None" = field(default=None, repr=False, compare=False)

    def line(self, s):
        """Dual coordinates of ``L_s``."""
        A = [self.W0[i] + s * self.W1[i] for i in range(3)]
        return tuple(complex(v) for v in np.cross(np.array(self.Q, dtype=complex), np.array(A, dtype=complex)))

    def point(self, r, s):
        return tuple(self.W0[i] + s * self.W1[i] + r * self.Q[i] for i in range(3))

    def s_of_point(self, P):
        """Parameter of the pencil line through ``P``; ``None`` at ``s = inf``."""
        den = det3(P, self.Q, self.W1)
        if abs(den) == 0:
            return None
        return -det3(P, self.Q, self.W0) / den

    def to_dict(self):
        return {
            "base_point": list(self.Q),
            "W0": list(self.W0),
            "W1": list(self.W1),
            "s0": [self.s0.real, self.s0.imag],
            "seed": self.seed,
            "attempts": self.attempts,
            "discriminant_degree": self.discriminant_degree,
        }


class RestrictionFamily:
    """Floating-point evaluation of ``G(r, s)`` and of each factor's
    restriction, vectorised over roots.  Pure Python complex arithmetic:
    for the small degrees involved it beats numpy's per-call overhead."""

    def __init__(self, curve, Q, W0, W1):
        self.d = curve.degree
        self.total = self._grid(curve.product, Q, W0, W1)
        self.factors = [self._grid(F, Q, W0, W1) for F in curve.factors]
        self.abs_total = [[abs(c) for c in row] for row in self.total]

    @staticmethod
    def _grid(F, Q, W0, W1):
        G = F.compose_linear([list(Q), list(W1), list(W0)]).set_var(2, Fraction(1))
        di = max((e[0] for e in G.terms), default=0)
        dj = max((e[1] for e in G.terms), default=0)
        grid = [[0j] * (dj + 1) for _ in range(di + 1)]
        for (i, j), c in G.terms.items():
            grid[i][j] = to_complex(c)
        return grid

    @staticmethod
    def coeffs_at(grid, s):
        """Coefficients in ``r`` (low first) at parameter ``s``."""
        out = []
        for row in grid:
            acc = 0j
            for c in reversed(row):
                acc = acc * s + c
            out.append(acc)
        return out

    @staticmethod
    def coeffs_ds(grid, s):
        out = []
        for row in grid:
            acc = 0j
            for j in range(len(row) - 1, 0, -1):
                acc = acc * s + j * row[j]
            out.append(acc)
        return out

    def restrict(self, s):
        return UniPoly(self.coeffs_at(self.total, s))

    def eval_all(self, rs, s):
        """``(G, G_r, G_s, scale)`` at each ``r`` in ``rs``."""
        c = self.coeffs_at(self.total, s)
        cs = self.coeffs_ds(self.total, s)
        ac = [abs(v) for v in c]
        out = []
        for r in rs:
            g = gr = 0j
            gs = 0j
            sc = 0.0
            ar = abs(r)
            for k in range(len(c) - 1, -1, -1):
                gr = gr * r + g
                g = g * r + c[k]
                gs = gs * r + cs[k]
                sc = sc * ar + ac[k]
            out.append((g, gr, gs, sc))
        return out

    def factor_residuals(self, r, s):
        """Relative residual of each factor at intersection point ``r``."""
        out = []
        ar = abs(r)
        for grid in self.factors:
            c = self.coeffs_at(grid, s)
            g = 0j
            sc = 0.0
            for k in range(len(c) - 1, -1, -1):
                g = g * r + c[k]
                sc = sc * ar + abs(c[k])
            out.append(abs(g) / sc if sc else abs(g))
        return out


def component_label(family, r, s, ratio=1e6):
    """Index of the factor vanishing at the intersection point; the
    runner-up residual must exceed the smallest by ``ratio``."""
    res = family.factor_residuals(r, s)
    order = sorted(range(len(res)), key=lambda i: res[i])
    if len(order) > 1 and res[order[1]] < ratio * max(res[order[0]], 1e-300):
        raise PencilError(
            f"ambiguous component membership (residuals {res[order[0]]:.2e}, {res[order[1]]:.2e}); reseed the pencil")
    return order[0]


def restrict(curve, pencil, s):
    """Restriction of the curve to ``L_s`` as a degree-``d`` polynomial in ``r``."""
    fam = pencil.family or RestrictionFamily(curve, pencil.Q, pencil.W0, pencil.W1)
    p = fam.restrict(s)
    if p.degree() != curve.degree:
        raise PencilError("leading coefficient collapsed: an intersection left the chart; rotate the chart")
    return p


def polished_roots(family, s, tol=1e-14):
    p = family.restrict(s)
    rs = p.roots(tol=1e-13)
    dp = p.derivative()
    out = []
    for z in rs:
        for _ in range(5):
            v = p(z)
            dv = dp(z)
            if dv == 0:
                break
            z = z - v / dv
        out.append(complex(z))
    return out


def min_separation(rs):
    best = math.inf
    for i in range(len(rs)):
        for j in range(i):
            best = min(best, abs(rs[i] - rs[j]))
    return best


# ---------------------------------------------------------------------------
# choosing a generic pencil
# ---------------------------------------------------------------------------


def _rand_vec(rng, lo=-5, hi=5):
    while True:
        v = tuple(rng.randint(lo, hi) for _ in range(3))
        if any(v):
            return v


def _mp_at(poly, z):
    return lg._eval_exact_poly_mp(poly, z)


def _local_data(curve, seed):
    pts = lg.singular_points(curve, seed=seed)
    return [(P, lg.branches_at(curve, P)) for P in pts]


def choose_pencil(curve, seed=0, local=None, candidates=32, max_attempts=100):
    """Deterministic generic pencil for ``curve``.

    ``local`` is the list of ``(point, branches)`` pairs at singular points
    (computed when omitted).  Genericity checks: ``Q`` off the curve,
    discriminant of full degree, simple discriminant roots away from the
    singular-point lines, one multiple root per singular point (and no
    other), lines through singular points meeting the curve in
    ``d - m_P + 1`` distinct points.
    """
    if local is None:
        local = _local_data(curve, seed)
    F = curve.product
    d = curve.degree
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        Q, W0, W1 = _rand_vec(rng, -3, 3), _rand_vec(rng), _rand_vec(rng)
        if F(Q) == 0 or det3(Q, W0, W1) == 0:
            continue
        result = _try_pencil(curve, Q, W0, W1, local)
        if result is None:
            continue
        bps, ddeg = result
        fam = RestrictionFamily(curve, Q, W0, W1)
        s0 = _choose_base(fam, bps, rng, candidates)
        if s0 is None:
            continue
        pencil = PencilConfig(Q=Q, W0=W0, W1=W1, s0=s0, seed=seed, attempts=attempt,
                              branch_points=bps, discriminant_degree=ddeg, family=fam)
        return pencil
    raise DegeneratePencilError("degenerate curve/pencil interaction")


def _try_pencil(curve, Q, W0, W1, local):
    d = curve.degree
    G = curve.product.compose_linear([list(Q), list(W1), list(W0)]).set_var(2, Fraction(1))
    nested = G.to_nested(main=0, inner=1)
    if nested.degree() != d:
        return None
    if d == 1:
        return [], 0
    D = discriminant(nested)
    if not hasattr(D, "degree"):
        return ([], 0) if d * (d - 1) == 0 else None
    if D.degree() != d * (d - 1):
        return None
    parts = squarefree_decomposition(D)

    # singular-point lines
    sing = []
    for P, brs in local:
        Pc = [lg.MP.mpc(v) for v in P]
        den = det3(Pc, [lg.MP.mpf(v) for v in Q], [lg.MP.mpf(v) for v in W1])
        if abs(den) < 1e-30:
            return None
        sP = -det3(Pc, [lg.MP.mpf(v) for v in Q], [lg.MP.mpf(v) for v in W0]) / den
        sing.append((sP, P, brs))
    for i in range(len(sing)):
        for j in range(i):
            if abs(sing[i][0] - sing[j][0]) < 1e-6 * max(1, abs(sing[i][0])):
                return None

    roots = []
    for poly, k in parts:
        if poly.degree() < 1:
            continue
        for z in lg._exact_poly_roots(poly):
            roots.append((z, k))
    matched = set()
    bps = []
    for z, k in roots:
        hits = [n for n, (sP, _, _) in enumerate(sing) if abs(z - sP) < 1e-6 * max(1, abs(sP))]
        if k == 1:
            if hits:
                return None
            bps.append(dict(location=z, kind=DUAL_TANGENT, multiplicity=1, expected=[2]))
            continue
        if len(hits) != 1 or hits[0] in matched:
            return None
        n = hits[0]
        matched.add(n)
        sP, P, brs = sing[n]
        mP = sum(b.r for b in brs)
        # the line through P must meet C in d - m_P + 1 distinct points
        coeffs = [_mp_at(c, z) if hasattr(c, "coeffs") else lg.to_mpc(lg.MP, c) for c in nested.coeffs]
        rts = lg._mp_roots(coeffs)
        clusters = lg._cluster(rts, 1e-6)
        if len(clusters) != d - mP + 1 or max(len(c) for c in clusters) != mP:
            return None
        multi = sorted((b.r for b in brs if b.r >= 2), reverse=True)
        kind = MULTIPLE_BRANCH if multi else SINGULAR_POINT
        bps.append(dict(location=z, kind=kind, multiplicity=k, expected=multi, point=P,
                        branches=[{"component": b.component, "r": b.r, "s": b.s} for b in brs]))
    if len(matched) != len(sing):
        return None
    bps.sort(key=lambda b: (round(float(lg.MP.re(b["location"])), 12), float(lg.MP.im(b["location"]))))
    out = [BranchPoint(index=i + 1, location=lg._cnum(b["location"]), kind=b["kind"],
                       multiplicity=b["multiplicity"], expected_cycle_type=b["expected"],
                       point=b.get("point"), branches=b.get("branches", []))
           for i, b in enumerate(bps)]
    return out, D.degree()


def nearest_distances(bps):
    locs = [b.location for b in bps]
    out = []
    for i, z in enumerate(locs):
        others = [abs(z - w) for j, w in enumerate(locs) if j != i]
        out.append(min(others) if others else max(1.0, abs(z)))
    return out


def _choose_base(fam, bps, rng, candidates):
    if not bps:
        return 0j
    locs = [b.location for b in bps]
    near = nearest_distances(bps)
    xs = [z.real for z in locs]
    ys = [z.imag for z in locs]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    pad = 0.25 * span
    best, best_score = None, -1.0
    tried = 0
    while tried < 8 * candidates and (best is None or tried < candidates):
        tried += 1
        s = complex(rng.uniform(min(xs) - pad, max(xs) + pad), rng.uniform(min(ys) - pad, max(ys) + pad))
        if any(abs(s - z) <= 0.5 * dk for z, dk in zip(locs, near)):
            continue
        rs = polished_roots(fam, s)
        scale = 1.0 + max(abs(r) for r in rs)
        score = min_separation(rs) / scale
        if score > best_score:
            best, best_score = s, score
    if best is None:
        return None
    # rounding keeps reports short and reproducible
    return complex(round(best.real, 6), round(best.imag, 6))


def branch_points(curve, pencil):
    """Classified branch points of the pencil (computed by ``choose_pencil``)."""
    if pencil.branch_points or pencil.discriminant_degree or curve.degree <= 1:
        return list(pencil.branch_points)
    result = _try_pencil(curve, pencil.Q, pencil.W0, pencil.W1, _local_data(curve, pencil.seed))
    if result is None:
        raise PencilError("unclassifiable branch point: the pencil is not generic for this curve")
    return result[0]


# ---------------------------------------------------------------------------
# loops
# ---------------------------------------------------------------------------


@dataclass
class LoopPath:
    """Closed polyline in the ``s`` chart starting and ending at ``s0``."""

    vertices: np.ndarray
    target: int
    radius: float
    angle: float

    def reversed(self):
        return LoopPath(self.vertices[::-1].copy(), self.target, self.radius, self.angle)

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in self.vertices]


def winding_number(vertices, point):
    """Winding number of a closed polyline about ``point``."""
    w = np.asarray(vertices) - point
    ang = np.angle(w[1:] / w[:-1])
    return int(round(float(np.sum(ang)) / (2 * math.pi)))


def min_distance(vertices, point):
    """Distance from ``point`` to the polyline (segments included)."""
    a = np.asarray(vertices[:-1])
    b = np.asarray(vertices[1:])
    ab = b - a
    denom = np.where(np.abs(ab) > 0, np.abs(ab) ** 2, 1.0)
    t = np.clip(((point - a) * np.conj(ab)).real / denom, 0.0, 1.0)
    proj = a + t * ab
    return float(np.min(np.abs(point - proj)))


def _arc(center, radius, a0, a1, samples, ccw):
    """Vertices of an arc from angle ``a0`` to ``a1`` (excluding the start)."""
    if ccw:
        span = (a1 - a0) % (2 * math.pi)
    else:
        span = -((a0 - a1) % (2 * math.pi))
    n = max(2, int(math.ceil(samples * abs(span) / (2 * math.pi))))
    return [center + radius * cmath.exp(1j * (a0 + span * k / n)) for k in range(1, n + 1)]


def _spoke(start, end, blockers, samples):
    """Path from ``start`` to ``end`` that replaces each chord through a
    blocking disk by the shorter boundary arc, on the side where the
    straight segment passes the disk's center."""
    direction = end - start
    length = abs(direction)
    u = direction / length
    hits = []
    for c, R in blockers:
        w = (c - start) / u                  # rotate so the segment lies on the real axis
        if abs(w.imag) >= R:
            continue
        half = math.sqrt(R * R - w.imag * w.imag)
        t_in, t_out = w.real - half, w.real + half
        if t_out <= 0 or t_in >= length:
            continue
        if t_in <= 0 or t_out >= length:
            raise PencilError("no clearance-respecting spoke; try another pencil seed")
        hits.append((t_in, t_out, c, R, w.imag))
    hits.sort()
    pts = [start]
    for t_in, t_out, c, R, side in hits:
        p_in = start + t_in * u
        p_out = start + t_out * u
        pts.append(p_in)
        a0 = cmath.phase(p_in - c)
        a1 = cmath.phase(p_out - c)
        # center left of the segment: the short arc below it runs counterclockwise
        ccw = side >= 0
        pts.extend(_arc(c, R, a0, a1, samples, ccw))
    pts.append(end)
    return pts


def build_loops(bps, s0, samples=48, fraction=1.0 / 3.0, detour=1.25):
    """One petal per branch point, ordered by ``arg(b - s0)``.

    Petal ``j`` has radius ``rho_j = fraction * min(nearest other branch
    point, |s0 - b_j|)``.  The spoke runs straight from ``s0`` towards
    ``b_j`` and around each disk of radius ``detour * rho_k`` that it would
    cross; then a full counterclockwise circle, then the spoke back.
    """
    near = nearest_distances(bps)
    rho = [fraction * min(near[k], abs(s0 - b.location)) for k, b in enumerate(bps)]
    loops = []
    for j, b in enumerate(bps):
        c = b.location
        u = (s0 - c) / abs(s0 - c)
        end = c + rho[j] * u
        blockers = [(bps[k].location, detour * rho[k]) for k in range(len(bps)) if k != j]
        out = _spoke(s0, end, blockers, samples)
        a0 = cmath.phase(end - c)
        circle = [c + rho[j] * cmath.exp(1j * (a0 + 2 * math.pi * k / samples)) for k in range(1, samples)]
        circle.append(end)
        verts = out + circle + out[::-1][1:]
        verts = np.array(verts, dtype=complex)
        verts[0] = verts[-1] = s0
        loops.append(LoopPath(vertices=verts, target=b.index, radius=rho[j],
                              angle=cmath.phase(c - s0)))
    _check_clearance(loops, bps, rho, samples)
    loops.sort(key=lambda L: (L.angle, L.target))
    return loops


def _check_clearance(loops, bps, rho, samples):
    sag = math.cos(math.pi / samples)     # polygon chords dip inside the circle
    by_index = {b.index: k for k, b in enumerate(bps)}
    for L in loops:
        j = by_index[L.target]
        for k, b in enumerate(bps):
            dist = min_distance(L.vertices, b.location)
            need = rho[k] * (sag if k == j else 1.0) * (1 - 1e-9)
            if dist < need:
                raise PencilError("no clearance-respecting spoke found; try another pencil seed")


def concatenate(loops_by_index, word):
    """Polyline of the word (signed 1-based loop indices, traversal order)."""
    parts = []
    for k in word:
        L = loops_by_index[abs(k) - 1]
        v = L.vertices if k > 0 else L.vertices[::-1]
        parts.append(v if not parts else v[1:])
    if not parts:
        return None
    return np.concatenate(parts)
