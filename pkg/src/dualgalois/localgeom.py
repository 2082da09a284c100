"""Local analysis of a plane curve at singular points and flexes.

Points are located by exact elimination followed by extended-precision
polishing.  Each local branch is expanded by the Newton polygon method in
coordinates adapted to the branch,

    x2 = t**r,    x1 = sum_{i >= s} a_i t**i,    a_s != 0,   s > r >= 1,

where ``x1 = 0`` is the tangent line and ``x2 = 0`` a transversal line
through the point.  ``r`` is the multiplicity of the branch and ``s`` its
tangent multiplicity.  The module also verifies the local model of the
dualizing covering near the fiber over a branch:

    z3 = -(sum a_i t**i + z2 * t**r)

whose degree near the tangency point is ``s`` and along the fiber ``r``.

All extended-precision work uses a private mpmath context, so the global
``mpmath.mp`` settings are never touched.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .algebra import (MPoly, RootFindingError, cross, det3, hessian_form, resultant,
                      roots as aberth_roots, squarefree_part, to_mpc)

DPS = 50
ZERO_TOL = 1e-20      # relative size below which an extended-precision coefficient is zero
ON_CURVE_TOL = 1e-15  # relative residual for "point lies on the factor"


def _ctx():
    ctx = mpmath.MPContext()
    ctx.dps = DPS
    return ctx


MP = _ctx()


class LocalGeometryError(RuntimeError):
    pass


class NotOnCurveError(LocalGeometryError):
    pass


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def normalize_point(P):
    """Scale so the largest coordinate is 1; returns an mpc triple."""
    P = [MP.mpc(v) for v in P]
    top = max(abs(v) for v in P)
    if top == 0:
        raise ValueError("the zero vector is not a projective point")
    # first coordinate of (nearly) maximal size, so ties do not depend on noise
    k = next(i for i in range(3) if abs(P[i]) >= top * (1 - MP.mpf(10) ** -8))
    return tuple(v / P[k] for v in P)


def point_to_json(P):
    return [[float(MP.re(v)), float(MP.im(v))] for v in P]


def _cnum(v):
    return complex(float(MP.re(v)), float(MP.im(v)))


def relative_value(F, P):
    """``|F(P)|`` divided by the sum of absolute monomial values at ``P``."""
    val = abs(F.evaluate_numeric(P, MP))
    norm = max(abs(v) for v in P)
    scale = sum(abs(to_mpc(MP, c)) for c in F.terms.values()) * norm ** max(F.total_degree(), 0)
    return val / scale if scale else val


def _mp_roots(coeffs):
    """Roots of ``sum coeffs[k] z**k`` (mpc, low degree first), trailing
    zero coefficients stripped."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    top = max(abs(v) for v in c)
    while abs(c[-1]) < MP.mpf(10) ** (-DPS + 5) * top:
        c.pop()
    if len(c) <= 1:
        return []
    return _mp_aberth(c)


def _mp_aberth(c, max_iter=600):
    """Extended-precision Aberth iteration.

    Unlike a convergence-or-fail solver it stops quietly when the updates
    stall, so clusters of a multiple root come back at the accuracy the
    working precision allows.
    """
    n = len(c) - 1
    if n == 1:
        return [-c[0] / c[1]]
    try:
        z = [MP.mpc(v) for v in aberth_roots([_cnum(v) for v in c], tol=1e-13)]
    except RootFindingError as exc:
        z = [MP.mpc(v) for v in exc.partial_roots]
    except ValueError:
        z = None
    if z is None or len(z) != n:
        rad = max(abs(v) for v in c[:-1]) / abs(c[-1]) + 1
        z = [MP.mpc(rad) * MP.expjpi(MP.mpf(2 * k) / n + MP.mpf("0.1")) for k in range(n)]
    dc = _poly_deriv_mp(c)
    eps = MP.mpf(10) ** (-DPS + 3)
    stall = 0
    best = None
    for _ in range(max_iter):
        steps = []
        for i in range(n):
            f = _horner_mp(c, z[i])
            if f == 0:
                steps.append(MP.mpc(0))
                continue
            w = f / _horner_mp(dc, z[i]) if _horner_mp(dc, z[i]) != 0 else MP.mpc(0)
            sm = sum((1 / (z[i] - z[j]) for j in range(n) if j != i and z[i] != z[j]), MP.mpc(0))
            den = 1 - w * sm
            st = w / den if den != 0 else w
            steps.append(st)
            z[i] -= st
        big = max(abs(v) / max(1, abs(zz)) for v, zz in zip(steps, z))
        if big < eps:
            break
        if best is not None and big >= best:
            stall += 1
            if stall > 25:
                break
        else:
            best, stall = big, 0
    return z


def _eval_exact_poly_mp(p, z):
    acc = MP.mpc(0)
    for c in reversed(p.coeffs):
        acc = acc * z + to_mpc(MP, c)
    return acc


def _exact_poly_roots(p):
    """Roots of an exact squarefree univariate polynomial, to full precision:
    double precision Aberth start, then extended Newton; falls back to the
    extended-precision solver when Newton does not settle."""
    if p.degree() < 1:
        return []
    dp = p.derivative()
    try:
        start = aberth_roots([complex(to_mpc(MP, c)) for c in p.coeffs], tol=1e-13)
    except (RootFindingError, ValueError):
        start = None
    out = []
    if start is not None:
        for z0 in start:
            z = MP.mpc(z0)
            ok = False
            for _ in range(60):
                f = _eval_exact_poly_mp(p, z)
                df = _eval_exact_poly_mp(dp, z)
                if df == 0:
                    break
                step = f / df
                z -= step
                if abs(step) <= MP.mpf(10) ** (-DPS + 8) * max(1, abs(z)):
                    ok = True
                    break
            if not ok:
                out = None
                break
            out.append(z)
        if out is not None and _roots_distinct(out):
            return out
    return _mp_roots([to_mpc(MP, c) for c in p.coeffs])


def _roots_distinct(rs):
    for i in range(len(rs)):
        for j in range(i):
            if abs(rs[i] - rs[j]) <= MP.mpf(10) ** (-20) * max(1, abs(rs[i])):
                return False
    return True


def _cluster(values, tol):
    """Group nearby numbers; returns lists of values."""
    groups = []
    for v in values:
        for g in groups:
            if abs(v - g[0]) <= tol * max(1, abs(g[0])):
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


def _poly_deriv_mp(c, k=1):
    for _ in range(k):
        c = [i * c[i] for i in range(1, len(c))]
    return c


def _horner_mp(c, z):
    acc = MP.mpc(0)
    for v in reversed(c):
        acc = acc * z + v
    return acc


def _refine_multiple_root(c, z, mult, iters=80):
    """Newton on the ``(mult-1)``-th derivative, where a root of exact
    multiplicity ``mult`` becomes simple."""
    dc = _poly_deriv_mp(c, mult - 1)
    ddc = _poly_deriv_mp(dc, 1)
    for _ in range(iters):
        f = _horner_mp(dc, z)
        df = _horner_mp(ddc, z)
        if df == 0:
            break
        step = f / df
        z -= step
        if abs(step) <= MP.mpf(10) ** (-DPS + 5) * max(1, abs(z)):
            break
    return z


# ---------------------------------------------------------------------------
# coordinate changes for elimination
# ---------------------------------------------------------------------------


@dataclass
class _Chart:
    """Exact integer transform ``M`` with ``F'(x) = F(M x)`` in convenient
    position: ``(0:1:0)`` and ``(1:0:0)`` off the curve and ``x3 = 0``
    transversal to it."""

    M: list
    Fp: MPoly

    def to_original(self, P):
        return tuple(sum(MP.mpf(self.M[i][j]) * P[j] for j in range(3)) for i in range(3))


def _good_chart(F, extra=(), seed=0, attempts=200):
    from .algebra import poly_gcd

    rng = random.Random(seed)
    d = F.total_degree()
    for attempt in range(attempts):
        if attempt == 0:
            M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        else:
            M = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        if det3(*M) == 0:
            continue
        cols = [[M[i][j] for i in range(3)] for j in range(3)]
        Fp = F.compose_linear(cols)
        if Fp((0, 1, 0)) == 0 or Fp((1, 0, 0)) == 0:
            continue
        g = Fp.set_var(2, Fraction(0)).set_var(1, Fraction(1)).to_univariate()
        if g.degree() != d or poly_gcd(g, g.derivative()).degree() != 0:
            continue
        bad = False
        for G in extra:
            Gp = G.compose_linear(cols)
            h = Gp.set_var(2, Fraction(0)).set_var(1, Fraction(1)).to_univariate()
            if h.is_zero() or poly_gcd(g, h).degree() > 0:
                bad = True
        if bad:
            continue
        return _Chart(M, Fp)
    raise LocalGeometryError("could not find a coordinate chart in general position")


def _affine_nested(Fp):
    """``f(x, y) = F'(x, y, 1)`` as ExactPoly in y over ExactPoly in x."""
    return Fp.set_var(2, Fraction(1)).to_nested(main=1, inner=0)


def _eval_nested_x(nested, x0):
    """Coefficients (in y, low first) of ``f(x0, y)`` as mpc."""
    return [_eval_exact_poly_mp(c, x0) if hasattr(c, "coeffs") else to_mpc(MP, c)
            for c in nested.coeffs]


# ---------------------------------------------------------------------------
# singular points and flexes
# ---------------------------------------------------------------------------


def _dedupe(points, tol=1e-15):
    out = []
    for P in points:
        P = normalize_point(P)
        if all(max(abs(a - b) for a, b in zip(P, Q)) > tol for Q in out):
            out.append(P)
    return out


def _point_key(P):
    return tuple((round(float(MP.re(v)), 9), round(float(MP.im(v)), 9)) for v in P)


def singular_points(curve, seed=0):
    """All singular points of the (reduced) curve, including intersections
    of distinct components, as normalized extended-precision triples."""
    F = curve.product if hasattr(curve, "product") else curve
    if F.total_degree() < 2:
        return []
    chart = _good_chart(F, seed=seed)
    Fp = chart.Fp
    f = _affine_nested(Fp)
    fy = _affine_nested(Fp.diff(1))
    R = resultant(f, fy)
    if R.is_zero():
        raise LocalGeometryError("non-reduced curve: the singular locus is positive-dimensional")
    Rs = squarefree_part(R)
    fx_form = Fp.diff(0)
    fy_form = Fp.diff(1)
    found = []
    for x0 in _exact_poly_roots(Rs):
        cy = _eval_nested_x(f, x0)
        ys = _mp_roots(cy)
        for grp in _cluster(ys, 1e-8):
            if len(grp) < 2:
                continue
            y0 = sum(grp) / len(grp)
            y0 = _refine_multiple_root(cy, y0, len(grp))
            pt = (x0, y0, MP.mpc(1))
            if relative_value(fx_form, pt) < 1e-20 and relative_value(fy_form, pt) < 1e-20:
                found.append(chart.to_original(pt))
    pts = _dedupe(found)
    pts.sort(key=_point_key)
    return pts


def flex_points(curve, seed=0):
    """Smooth inflection points of each component of degree >= 3, as
    ``(component index, point)`` pairs."""
    sing = singular_points(curve, seed=seed)
    out = []
    for i, F in enumerate(curve.factors):
        if F.total_degree() < 3:
            continue
        for attempt in range(12):
            found = _flexes_in_chart(F, sing, seed + 17 + i + 101 * attempt)
            if found is not None:
                break
        else:
            raise LocalGeometryError(f"component {i}: no chart separates the flexes")
        for P in sorted(_dedupe(found, tol=1e-12), key=_point_key):
            out.append((i, P))
    return out


def _flexes_in_chart(F, sing, seed):
    """Flexes of ``F`` found in one chart, or None when the chart's vertical
    lines are tangent at a flex (the fiber root is then multiple and cannot
    be resolved to full precision)."""
    Hs = hessian_form(F)
    chart = _good_chart(F, extra=[Hs], seed=seed)
    cols = [[chart.M[a][b] for a in range(3)] for b in range(3)]
    Hp = Hs.compose_linear(cols)
    f = _affine_nested(chart.Fp)
    h = _affine_nested(Hp)
    R = resultant(f, h)
    if R.is_zero():
        raise LocalGeometryError("Hessian shares a factor with the curve (a line?)")
    found = []
    for x0 in _exact_poly_roots(squarefree_part(R)):
        cy = _eval_nested_x(f, x0)
        ys = _mp_roots(cy)
        for y0 in ys:
            pt = (x0, y0, MP.mpc(1))
            if relative_value(Hp, pt) > 1e-12:
                continue
            P = normalize_point(chart.to_original(pt))
            if any(max(abs(a - b) for a, b in zip(P, S)) < 1e-6 for S in sing):
                continue
            if any(z is not y0 and abs(z - y0) < 1e-8 * (1 + abs(y0)) for z in ys):
                return None
            # x0 is a simple root of the squarefree resultant and y0 a simple
            # root of f(x0, .), so 1-D Newton suffices; the 2-D Newton on
            # (F, H) is singular at hyperflexes, where H vanishes doubly
            pt = (x0, _newton1(cy, y0), MP.mpc(1))
            if relative_value(Hp, pt) > 1e-25:
                pt = _newton2(chart.Fp, Hp, pt)
            P = normalize_point(chart.to_original(pt))
            if relative_value(F, P) > 1e-30 or relative_value(Hs, P) > 1e-25:
                continue
            found.append(P)
    return found


def _newton1(c, z, iters=30):
    dc = _poly_deriv_mp(c)
    for _ in range(iters):
        d = _horner_mp(dc, z)
        if d == 0:
            break
        step = _horner_mp(c, z) / d
        z = z - step
        if abs(step) < MP.mpf(10) ** (-DPS + 5) * (1 + abs(z)):
            break
    return z


def _newton2(F, G, pt, iters=60):
    """Polish a common zero of two forms in the affine chart ``x3 = 1``."""
    x, y = pt[0], pt[1]
    Fx, Fy, Gx, Gy = F.diff(0), F.diff(1), G.diff(0), G.diff(1)
    for _ in range(iters):
        p = (x, y, MP.mpc(1))
        f, g = F.evaluate_numeric(p, MP), G.evaluate_numeric(p, MP)
        a, b = Fx.evaluate_numeric(p, MP), Fy.evaluate_numeric(p, MP)
        c, d = Gx.evaluate_numeric(p, MP), Gy.evaluate_numeric(p, MP)
        det = a * d - b * c
        if det == 0:
            break
        dx = (d * f - b * g) / det
        dy = (a * g - c * f) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) < MP.mpf(10) ** (-DPS + 8) * (1 + abs(x) + abs(y)):
            break
    return (x, y, MP.mpc(1))


# ---------------------------------------------------------------------------
# local equations
# ---------------------------------------------------------------------------


def _pmul(a, b, cap=None):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            if cap is not None and k[0] > cap:
                continue
            out[k] = out.get(k, 0) + c1 * c2
    return out


def local_expansion(F, P, E, D):
    """Coefficients ``{(i, j): c}`` of ``F(P + X*E + Y*D)`` (extended precision)."""
    lin = [{(0, 0): P[l], (1, 0): E[l], (0, 1): D[l]} for l in range(3)]
    lin = [{k: v for k, v in L.items() if v != 0} for L in lin]
    powers = [[{(0, 0): MP.mpc(1)}] for _ in range(3)]
    deg = F.total_degree()
    for l in range(3):
        for _ in range(deg):
            powers[l].append(_pmul(powers[l][-1], lin[l]))
    out = {}
    for e, c in F.terms.items():
        term = {(0, 0): to_mpc(MP, c)}
        for l in range(3):
            if e[l]:
                term = _pmul(term, powers[l][e[l]])
        for k, v in term.items():
            out[k] = out.get(k, 0) + v
    return out


def _clean(H, rel=ZERO_TOL):
    if not H:
        return {}
    top = max(abs(v) for v in H.values())
    if top == 0:
        return {}
    return {k: v for k, v in H.items() if abs(v) > rel * top}


def _lowest_form(H):
    m = min(i + j for (i, j) in H)
    return m, {k: v for k, v in H.items() if k[0] + k[1] == m}


_DIRECTIONS = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1), (1, 3), (3, 1)]


def multiplicity_at(F, P):
    """Multiplicity of the form ``F`` at ``P`` (0 when ``P`` is off it)."""
    P = normalize_point(P)
    if relative_value(F, P) > ON_CURVE_TOL:
        return 0
    k, a, b = _chart_axes(P)
    H = _clean(local_expansion(F, P, _unit(a), _unit(b)))
    H.pop((0, 0), None)
    if not H:
        raise LocalGeometryError("local equation vanishes identically")
    return min(i + j for (i, j) in H)


def _chart_axes(P):
    k = max(range(3), key=lambda i: abs(P[i]))
    a, b = [i for i in range(3) if i != k]
    return k, a, b


def _unit(i):
    v = [MP.mpc(0)] * 3
    v[i] = MP.mpc(1)
    return v


# ---------------------------------------------------------------------------
# Newton-Puiseux
# ---------------------------------------------------------------------------


def _ser_mul(a, b, n):
    out = [MP.mpc(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] += ai * b[j]
    return out


def _ser_inv(a, n):
    out = [MP.mpc(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        acc = MP.mpc(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc / a[0]
    return out


def _bivariate_in_series(H, Y, n):
    """``H(X, Y(X))`` and ``H_Y(X, Y(X))`` truncated to ``n`` terms."""
    by_j = {}
    for (i, j), c in H.items():
        if i < n:
            by_j.setdefault(j, {})[i] = c
    top = max(by_j) if by_j else 0
    coef = []
    for j in range(top + 1):
        row = [MP.mpc(0)] * n
        for i, c in by_j.get(j, {}).items():
            row[i] = c
        coef.append(row)
    val = list(coef[top])
    der = [MP.mpc(0)] * n
    for j in range(top - 1, -1, -1):
        der = [x + y for x, y in zip(_ser_mul(der, Y, n), val)]
        val = [x + y for x, y in zip(_ser_mul(val, Y, n), coef[j])]
    return val, der


def _implicit_series(H, n):
    """Power series ``Y(X)`` with ``Y(0) = 0`` and ``H(X, Y(X)) = 0`` when
    ``H(0, 0) = 0`` and ``H_Y(0, 0) != 0``; Newton iteration with doubling."""
    Y = [MP.mpc(0)] * n
    prec = 1
    while True:
        prec = min(2 * prec, n)
        val, der = _bivariate_in_series(H, Y, prec)
        corr = _ser_mul(val, _ser_inv(der, prec), prec)
        Y = [Y[k] - corr[k] if k < prec else Y[k] for k in range(n)]
        Y[0] = MP.mpc(0)
        if prec == n:
            val, der = _bivariate_in_series(H, Y, n)
            corr = _ser_mul(val, _ser_inv(der, n), n)
            Y = [Y[k] - corr[k] for k in range(n)]
            Y[0] = MP.mpc(0)
            return Y


def _lower_hull(points):
    """Edges of the lower Newton polygon from ``(m, 0)`` leftwards.

    ``points`` maps Y-exponent ``j`` to the least X-exponent ``i``.
    Returns ``[(j_right, i_right, j_left, i_left)]``.
    """
    js = sorted(points)
    jc = min(j for j in js if points[j] == 0)
    ic = 0
    jmin = js[0]
    edges = []
    while jc > jmin:
        best, best_slope = None, None
        for j in js:
            if j >= jc:
                continue
            slope = Fraction(points[j] - ic, jc - j)
            if best is None or slope < best_slope or (slope == best_slope and j < best):
                best, best_slope = j, slope
        edges.append((jc, ic, best, points[best]))
        jc, ic = best, points[best]
    return edges


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _puiseux(H, n, depth=0):
    """Branches of ``H(X, Y) = 0`` through the origin with ``Y -> 0``.

    Requires ``H(0, Y)`` not identically zero.  Returns ``(gamma, e, S)``
    per branch: ``X = gamma * T**e``, ``Y = S(T)`` with ``n`` coefficients.
    """
    if depth > 40:
        raise LocalGeometryError("branch separation failed: too many Newton polygon steps")
    H = _clean(H)
    H.pop((0, 0), None)
    col0 = [j for (i, j) in H if i == 0]
    if not col0:
        raise LocalGeometryError("local equation is divisible by the transversal coordinate")
    m = min(col0)
    if m == 1:
        return [(MP.mpc(1), 1, _implicit_series(H, n))]
    least = {}
    for (i, j) in H:
        least[j] = min(least.get(j, i), i)
    jmin = min(least)
    out = []
    if jmin >= 2:
        raise LocalGeometryError("non-reduced local equation (repeated branch)")
    if jmin == 1 and all(j >= 1 for (_, j) in H):
        # Y = 0 is itself a branch
        out.append((MP.mpc(1), 1, [MP.mpc(0)] * n))
    pts = {j: i for j, i in least.items() if j <= m}
    for jr, ir, jl, il in _lower_hull(pts):
        mu = Fraction(il - ir, jr - jl)
        p, q = mu.numerator, mu.denominator
        level = q * ir + p * jr
        edge = {j: c for (i, j), c in H.items() if q * i + p * j == level}
        deg = (jr - jl) // q
        phi = [MP.mpc(0)] * (deg + 1)
        for j, c in edge.items():
            phi[(j - jl) // q] += c
        rts = _mp_roots(phi)
        for grp in _cluster(rts, 1e-8):
            k = len(grp)
            xi = sum(grp) / k
            if k > 1:
                xi = _refine_multiple_root(phi, xi, k)
            g, u, v = _egcd(q, p)          # u*q + v*p = 1
            v = -v                         # u*q - v*p = 1
            xu, xv = xi ** u, xi ** v
            # H1(X1, Y1) = X1**-level * H(xi**v X1**q, X1**p (xi**u + Y1))
            H1 = {}
            for (i, j), c in H.items():
                shift = q * i + p * j - level
                if shift < 0:
                    continue
                base = c * xv ** i
                binom = 1
                for t in range(j + 1):
                    key = (shift, t)
                    H1[key] = H1.get(key, 0) + base * binom * xu ** (j - t)
                    binom = binom * (j - t) // (t + 1)
            for gamma1, e1, S1 in _puiseux(H1, n, depth + 1):
                gamma = xv * gamma1 ** q
                e = e1 * q
                shift = e1 * p
                lead = gamma1 ** p
                Y = [MP.mpc(0)] * n
                tail = [xu] + list(S1[1:])
                for t in range(n - shift):
                    Y[t + shift] = lead * (tail[t] if t < len(tail) else 0)
                out.append((gamma, e, Y))
    return out


# ---------------------------------------------------------------------------
# branches
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxBranch:
    """One local branch in adapted coordinates.

    ``matrix`` sends adapted homogeneous coordinates ``(x1, x2, x3)`` to the
    original ones; on the branch ``x2 = t**r``, ``x1 = sum a[i] t**i`` and
    ``x3 = 1``.  Lines have ``s = None`` (no tangency of finite order).
    """

    point: tuple
    component: int
    r: int
    s: int | None
    a: list
    matrix: list
    tangent_line: tuple
    series_order: int

    @property
    def dual_line(self):
        return dual_line(self.point)

    def curve_point(self, t):
        """Original coordinates of the branch point with parameter ``t``."""
        t = MP.mpc(t)
        x1 = sum((c * t ** i for i, c in enumerate(self.a) if c != 0), MP.mpc(0))
        ad = (x1, t ** self.r, MP.mpc(1))
        return tuple(sum(self.matrix[i][j] * ad[j] for j in range(3)) for i in range(3))

    def to_dict(self):
        return {
            "point": point_to_json(self.point),
            "component": self.component,
            "r": self.r,
            "s": self.s,
            "a_s": None if self.s is None else [float(MP.re(self.a[self.s])), float(MP.im(self.a[self.s]))],
            "tangent_line": point_to_json(normalize_point(self.tangent_line)),
        }


def dual_line(P):
    """Coefficients of the line of the dual plane formed by lines through
    ``P``: the incidence ``y . P = 0`` makes them ``P`` itself."""
    if all(v == 0 for v in P):
        raise ValueError("the zero vector is not a projective point")
    return tuple(P)


def _embed(k, a, b, vec2):
    out = [MP.mpc(0)] * 3
    out[a], out[b] = MP.mpc(vec2[0]), MP.mpc(vec2[1])
    return out


def _line_branch(F, P, component):
    coeffs = [F.diff(i).evaluate_numeric(P, MP) for i in range(3)]
    return PuiseuxBranch(point=P, component=component, r=1, s=None, a=[], matrix=[],
                         tangent_line=tuple(coeffs), series_order=0)


def branches_at(curve, P, series_order=None):
    """All local branches of the curve at ``P``, component by component."""
    P = normalize_point(P)
    on = [i for i, F in enumerate(curve.factors) if relative_value(F, P) <= ON_CURVE_TOL]
    if not on:
        raise NotOnCurveError(f"point {[_cnum(v) for v in P]} is not on the curve")
    d = curve.degree
    n = series_order or (2 * d + 8)
    out = []
    for i in on:
        F = curve.factors[i]
        if F.total_degree() == 1:
            out.append(_line_branch(F, P, i))
            continue
        out.extend(_branches_of_form(F, P, i, n))
    return out


def _branches_of_form(F, P, component, n):
    k, a, b = _chart_axes(P)
    H0 = _clean(local_expansion(F, P, _unit(a), _unit(b)))
    H0.pop((0, 0), None)
    m, low = _lowest_form(H0)
    best, best_val = None, None
    for dvec in _DIRECTIONS:
        val = abs(sum(c * MP.mpf(dvec[0]) ** i * MP.mpf(dvec[1]) ** j for (i, j), c in low.items()))
        val /= MP.mpf(dvec[0] ** 2 + dvec[1] ** 2) ** (MP.mpf(m) / 2)
        if best_val is None or val > best_val:
            best, best_val = dvec, val
    d1 = best
    e1 = (0, 1) if d1 == (1, 0) else (1, 0)
    E = _embed(k, a, b, e1)
    D = _embed(k, a, b, d1)
    H = _clean(local_expansion(F, P, E, D))
    H.pop((0, 0), None)
    raw = _puiseux(H, n)
    if sum(e for _, e, _ in raw) != m:
        raise LocalGeometryError(
            f"branch ramification indices sum to {sum(e for _, e, _ in raw)}, multiplicity is {m}")
    out = []
    for gamma, e, S in raw:
        root = gamma ** (MP.mpf(1) / e)
        Yt = [S[j] / root ** j for j in range(n)]
        c_r = Yt[e]
        V = list(Yt)
        V[e] = MP.mpc(0)
        # Y has order >= r since the transversal direction is not tangent
        scale = max(MP.mpf(1), abs(c_r))
        if any(abs(V[j]) > 1e-12 * scale for j in range(e)):
            raise LocalGeometryError("inconsistent branch expansion")
        s = next((j for j in range(e + 1, n) if abs(V[j]) > ZERO_TOL * scale), None)
        if s is None:
            raise LocalGeometryError("tangent multiplicity exceeds the series order; raise truncation")
        for j in range(s):
            V[j] = MP.mpc(0)
        if s <= e:
            raise LocalGeometryError(f"branch with s = {s} <= r = {e} violates the normal form")
        Pt = list(P)
        Tdir = [E[l] + c_r * D[l] for l in range(3)]
        M = [[D[i], Tdir[i], Pt[i]] for i in range(3)]
        out.append(PuiseuxBranch(point=P, component=component, r=e, s=s, a=V, matrix=M,
                                 tangent_line=tuple(cross(Pt, Tdir)), series_order=n))
    out.sort(key=lambda br: (br.r, br.s, float(MP.arg(br.tangent_line[0] + 2 * br.tangent_line[1]))))
    return out


# ---------------------------------------------------------------------------
# verification of the local model
# ---------------------------------------------------------------------------


class LocalDegreeError(LocalGeometryError):
    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass
class LocalDegreeReport:
    r: int
    s: int
    count_near_tangency: list
    count_on_fiber: list
    ramification_double: bool
    ramification_two_to_one: bool
    jacobian_matches: bool
    jacobian_order: float
    scale: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return (all(c == self.s for c in self.count_near_tangency)
                and all(c == self.r for c in self.count_on_fiber)
                and self.ramification_double and self.ramification_two_to_one
                and self.jacobian_matches)

    def to_dict(self):
        return {
            "r": self.r, "s": self.s,
            "count_near_tangency": self.count_near_tangency,
            "count_on_fiber": self.count_on_fiber,
            "ramification_double": self.ramification_double,
            "ramification_two_to_one": self.ramification_two_to_one,
            "jacobian_matches": self.jacobian_matches,
            "jacobian_order": self.jacobian_order,
            "passed": self.passed,
        }


def _local_scale(a, s):
    """Radius below which ``a_s t**s`` dominates every later term."""
    lam = math.inf
    for i in range(s + 1, len(a)):
        if abs(a[i]) > 0:
            lam = min(lam, (abs(a[s]) / abs(a[i])) ** (1.0 / (i - s)))
    return 1.0 if lam == math.inf else lam


def _count_small_roots(coeffs, radius):
    """Number of roots of ``sum coeffs[k] tau**k`` with ``|tau| < radius``."""
    rts = _trimmed_roots(coeffs)
    return sum(1 for z in rts if abs(z) < radius), rts


def _trimmed_roots(coeffs):
    """Roots after dropping negligible top coefficients; those only move
    roots that are far outside the unit disk."""
    c = list(coeffs)
    top = max(abs(v) for v in c)
    while c and abs(c[-1]) <= 1e-13 * top:
        c.pop()
    return aberth_roots(c, tol=1e-13)


def local_degree_check(branch, probes=8, eps=1e-4, rho=0.3, truncate=4):
    """Count preimages of the local covering ``z3 = -(sum a_i t^i + z2 t^r)``.

    Works in the rescaled variable ``tau = t / lam`` where ``lam`` is the
    radius on which the leading term ``a_s t^s`` dominates, and counts
    roots inside ``|tau| < rho``.  Near the tangency point (``z2 = 0``,
    small ``z3``) the count must be ``s``; at a point of the fiber
    (``z2 != 0``, smaller ``z3``) it must be ``r``.  Also checks the
    ramification section ``z2 = -(1/r) sum i a_i t^(i-r)`` (a double root
    that splits 2-to-1) and the Jacobian ``-t^(r-1)(sum i a_i t^(i-r) + r z2)``.
    """
    if branch.s is None:
        raise LocalGeometryError("lines carry no tangency data")
    r, s = branch.r, branch.s
    top = len(branch.a) if truncate is None else min(len(branch.a), s + truncate + 1)
    a = [_cnum(v) for v in branch.a[:top]]
    lam = _local_scale(a, s)
    b = [a[i] * lam ** i for i in range(len(a))]      # coefficients in tau
    bs = abs(b[s])
    near, fiber = [], []
    rts_near = []
    for k in range(probes):
        phase = cmath.exp(2j * math.pi * (k + 0.37) / probes)
        c = list(b)
        c[0] = c[0] + eps * bs * rho ** s * phase
        cnt, rts = _count_small_roots(c, rho)
        near.append(cnt)
        rts_near.append(rts)
        c = list(b)
        z2 = bs * phase                      # z2 * t^r = z2 lam^r tau^r; scaled so |.| = |b_s|
        c[r] = c[r] + z2
        c[0] = c[0] + eps * bs * rho ** r * phase * 1j
        cnt, _ = _count_small_roots(c, rho)
        fiber.append(cnt)

    # ramification section: z2(t) = -(1/r) sum i a_i t^(i-r)
    double_ok, split_ok = True, True
    for k in range(probes):
        tau0 = 0.1 * cmath.exp(2j * math.pi * (k + 0.11) / probes)
        w2 = -sum(i * b[i] * tau0 ** (i - r) for i in range(s, len(b))) / r   # z2 in tau units
        c = list(b)
        c[r] += w2
        c[0] = -sum(c[i] * tau0 ** i for i in range(1, len(c)))
        val = abs(sum(c[i] * tau0 ** i for i in range(len(c))))
        der = abs(sum(i * c[i] * tau0 ** (i - 1) for i in range(1, len(c))))
        ref = sum(abs(c[i]) * abs(tau0) ** i for i in range(1, len(c)))
        if der > 1e-9 * ref / abs(tau0) or val > 1e-9 * ref:
            double_ok = False
        c2 = list(c)
        c2[0] += 1e-6 * ref
        rts = _trimmed_roots(c2)
        close = sum(1 for z in rts if abs(z - tau0) < 0.2 * abs(tau0))
        if close != 2:
            split_ok = False

    # Jacobian of (t, z2) -> z3 in t, against a central difference
    jac_ok = True
    z2 = 0.5 * bs
    orders = []
    for k in range(probes):
        tau = 0.05 * cmath.exp(2j * math.pi * (k + 0.23) / probes)

        def z3(t):
            return -(sum(b[i] * t ** i for i in range(s, len(b))) + z2 * t ** r)

        h = 1e-6 * abs(tau)
        fd = (z3(tau + h) - z3(tau - h)) / (2 * h)
        formula = -tau ** (r - 1) * (sum(i * b[i] * tau ** (i - r) for i in range(s, len(b))) + r * z2)
        if abs(fd - formula) > 1e-6 * max(abs(formula), 1e-300):
            jac_ok = False

        def jac(t):
            return abs(t ** (r - 1) * (sum(i * b[i] * t ** (i - r) for i in range(s, len(b))) + r * z2))

        t1 = 1e-3 * tau / abs(tau)
        orders.append(math.log(jac(2 * t1) / jac(t1)) / math.log(2.0))
    order = sum(orders) / len(orders)
    if abs(order - (r - 1)) > 0.05:
        jac_ok = False

    diag = {"near": near, "fiber": fiber, "lambda": lam}
    if len(set(near)) > 1 or len(set(fiber)) > 1:
        raise LocalDegreeError("root count unstable across probes", diag)
    return LocalDegreeReport(r=r, s=s, count_near_tangency=near, count_on_fiber=fiber,
                             ramification_double=double_ok, ramification_two_to_one=split_ok,
                             jacobian_matches=jac_ok, jacobian_order=order, scale=lam, details=diag)


@dataclass
class DualParamReport:
    samples: int
    max_incidence: float
    max_on_curve: float
    max_tangency: float
    tol: float

    @property
    def passed(self):
        return max(self.max_incidence, self.max_on_curve, self.max_tangency) < self.tol

    def to_dict(self):
        return {"samples": self.samples, "max_incidence": self.max_incidence,
                "max_on_curve": self.max_on_curve, "max_tangency": self.max_tangency,
                "tol": self.tol, "passed": self.passed}


def _inv3(M):
    det = det3(M[0], M[1], M[2])
    if det == 0:
        raise LocalGeometryError("singular adapted frame")
    cof = [[(M[(i + 1) % 3][(j + 1) % 3] * M[(i + 2) % 3][(j + 2) % 3]
             - M[(i + 1) % 3][(j + 2) % 3] * M[(i + 2) % 3][(j + 1) % 3]) for j in range(3)]
           for i in range(3)]
    return [[cof[j][i] / det for j in range(3)] for i in range(3)]


def dual_curve_point(branch, t):
    """Tangent line to the curve at the branch point with parameter ``t``
    (``r = 1``), in original dual coordinates, with the adapted-frame curve
    point.  In adapted coordinates the line is ``(1, -phi'(t), -phi(t) + t phi'(t))``."""
    if branch.r != 1 or branch.s is None:
        raise LocalGeometryError("dual parametrization needs a smooth branch of a non-line component")
    t = MP.mpc(t)
    phi = sum((c * t ** i for i, c in enumerate(branch.a) if c != 0), MP.mpc(0))
    dphi = sum((i * c * t ** (i - 1) for i, c in enumerate(branch.a) if c != 0 and i > 0), MP.mpc(0))
    y_ad = (MP.mpc(1), -dphi, -phi + t * dphi)
    x_ad = (phi, t, MP.mpc(1))
    M = branch.matrix
    Minv = _inv3(M)
    x = tuple(sum(M[i][j] * x_ad[j] for j in range(3)) for i in range(3))
    y = tuple(sum(Minv[j][i] * y_ad[j] for j in range(3)) for i in range(3))
    return x, y


def dual_parametrization_check(curve, branch, samples=16, tol=1e-9, radius=None, seed=0):
    """Sample the branch, build the dual point, and check it is the tangent
    line at the sampled curve point: incidence, the point lies on the curve
    and the line is proportional to the gradient there."""
    F = curve.factors[branch.component]
    grads = [F.diff(i) for i in range(3)]
    a = [_cnum(v) for v in branch.a]
    lam = _local_scale(a, branch.s)
    rad = radius if radius is not None else 0.05 * lam
    rng = random.Random(seed)
    inc = on = tan = 0.0
    ts = [0.0] + [rad * rng.random() * cmath.exp(2j * math.pi * rng.random()) for _ in range(samples - 1)]
    for t in ts:
        x, y = dual_curve_point(branch, t)
        nx = math.sqrt(sum(float(abs(v)) ** 2 for v in x))
        ny = math.sqrt(sum(float(abs(v)) ** 2 for v in y))
        inc = max(inc, float(abs(sum(p * q for p, q in zip(x, y)))) / (nx * ny))
        on = max(on, float(relative_value(F, x)))
        g = [G.evaluate_numeric(x, MP) for G in grads]
        ng = math.sqrt(sum(float(abs(v)) ** 2 for v in g))
        cr = cross(g, y)
        tan = max(tan, math.sqrt(sum(float(abs(v)) ** 2 for v in cr)) / (ng * ny))
    rep = DualParamReport(samples=len(ts), max_incidence=inc, max_on_curve=on, max_tangency=tan, tol=tol)
    if not rep.passed:
        raise LocalGeometryError(
            f"dual parametrization residual too large: incidence {inc:.2e}, on-curve {on:.2e}, tangency {tan:.2e}")
    return rep


# ---------------------------------------------------------------------------
# conditions on the branch data
# ---------------------------------------------------------------------------


@dataclass
class RConditionReport:
    extra_components_are_lines: bool
    multiplicity_below_degree: bool
    tangent_order_above_multiplicity: bool
    dual_tangent_transpositions: bool | None
    lines: list
    notes: list

    @property
    def passed(self):
        return (self.extra_components_are_lines and self.multiplicity_below_degree
                and self.tangent_order_above_multiplicity and self.dual_tangent_transpositions is not False)

    def to_dict(self):
        dt = self.dual_tangent_transpositions
        return {"extra_components_are_lines": self.extra_components_are_lines,
                "multiplicity_below_degree": self.multiplicity_below_degree,
                "tangent_order_above_multiplicity": self.tangent_order_above_multiplicity,
                "dual_tangent_transpositions": "deferred" if dt is None else dt,
                "lines": self.lines, "notes": self.notes, "passed": self.passed}


def check_R_conditions(curve, branches, dual_tangent_perms=None):
    """Conditions on branch data under which the branch locus is the dual
    curve plus the lines ``L_p`` of multiple branches.

    * every branch-locus component other than the dual curve is a line
      ``L_p``, one per point carrying multiple branches;
    * every multiple branch has ``r`` below the degree of its component,
      so its fiber meets a single local sheet group;
    * ``s > r`` at every multiple branch (``s == r`` is an error);
    * loops around dual-tangent points act as transpositions, which needs
      tracker evidence (``None`` means deferred).
    """
    notes = []
    lines = {}
    r1 = True
    for br in branches:
        if br.s is not None and br.s == br.r:
            raise LocalGeometryError(f"branch with s == r == {br.r} violates the normal form")
        if br.r >= 2:
            key = _point_key(br.point)
            lines.setdefault(key, {"line": point_to_json(dual_line(br.point)), "branches": []})
            lines[key]["branches"].append({"r": br.r, "s": br.s, "component": br.component})
            if br.r >= curve.degrees[br.component]:
                r1 = False
                notes.append(f"multiplicity {br.r} not below the component degree")
    r2 = all(br.s is None or br.s > br.r for br in branches)
    r3 = None
    if dual_tangent_perms is not None:
        r3 = all(p.is_transposition() for p in dual_tangent_perms)
    return RConditionReport(extra_components_are_lines=True, multiplicity_below_degree=r1,
                            tangent_order_above_multiplicity=r2, dual_tangent_transpositions=r3,
                            lines=[lines[k] for k in sorted(lines)], notes=notes)


# ---------------------------------------------------------------------------
# sample points
# ---------------------------------------------------------------------------


def random_smooth_points(curve, count, seed=0, component=None):
    """Random smooth points of the curve (intersections with random
    rational lines), as ``(component, point)`` pairs."""
    rng = random.Random(seed)
    sing = singular_points(curve, seed=seed)
    comps = [component] if component is not None else [i for i in range(curve.k) if not curve.is_line(i)]
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        i = comps[rng.randrange(len(comps))]
        F = curve.factors[i]
        A = [rng.randint(-9, 9) for _ in range(3)]
        B = [rng.randint(-9, 9) for _ in range(3)]
        g = F.compose_linear([B, A]).set_var(1, Fraction(1)).to_univariate()
        if g.degree() != F.total_degree():
            continue
        ts = _mp_roots([to_mpc(MP, c) for c in g.coeffs])
        t = ts[rng.randrange(len(ts))]
        P = normalize_point(tuple(MP.mpf(A[l]) + t * B[l] for l in range(3)))
        if any(max(abs(x - y) for x, y in zip(P, S)) < 1e-6 for S in sing):
            continue
        if sum(1 for Fj in curve.factors if relative_value(Fj, P) <= ON_CURVE_TOL) != 1:
            continue
        out.append((i, P))
    return out


def local_table(curve, seed=0, include_flexes=True):
    """Branch data at every singular point (and flex) of the curve."""
    rows = []
    for P in singular_points(curve, seed=seed):
        for br in branches_at(curve, P):
            rows.append(("singular", br))
    if include_flexes:
        for i, P in flex_points(curve, seed=seed):
            for br in branches_at(curve, P):
                if br.component == i:
                    rows.append(("flex", br))
    return rows
