"""Exact and floating polynomial arithmetic.

The exact layer works over ``fractions.Fraction`` or :class:`GaussRat`
(Gaussian rationals) and, recursively, over polynomial rings built from
them, so that ``ExactPoly`` with ``ExactPoly`` coefficients represents
``Q[s][v]``.  Elimination (resultants, discriminants, squarefree parts)
only ever happens here.

The floating layer is double precision and is used for root finding and
path tracking.

Resultant convention::

    Res(p, q) = lc(p)**deg(q) * prod(q(a) for a in roots(p))

which is the determinant of the Sylvester matrix.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

import numpy as np


class RootFindingError(RuntimeError):
    """Simultaneous iteration did not converge.

    The best available approximations are kept in ``partial_roots``.
    """

    def __init__(self, message, partial_roots):
        super().__init__(message)
        self.partial_roots = list(partial_roots)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussRat:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return GaussRat(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat((self.re * o.re + self.im * o.im) / n,
                        (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussRat(1) / (self ** (-n))
        result, base = GaussRat(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


def exact(x):
    """Coerce ints, Fractions, decimal strings or GaussRat to an exact scalar."""
    if isinstance(x, (GaussRat, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, complex):
        raise TypeError("refusing to convert a float complex to an exact scalar")
    if isinstance(x, float):
        raise TypeError("refusing to convert a float to an exact scalar")
    return Fraction(x)


def to_complex(c):
    """Exact scalar (or int) to a Python complex."""
    if isinstance(c, GaussRat):
        return complex(c)
    return complex(float(c), 0.0)


def to_mpc(ctx, c):
    """Exact scalar to an mpmath complex in context ``ctx`` without rounding
    through double precision."""
    if isinstance(c, GaussRat):
        return ctx.mpc(ctx.mpf(c.re.numerator) / c.re.denominator,
                       ctx.mpf(c.im.numerator) / c.im.denominator)
    c = Fraction(c)
    return ctx.mpc(ctx.mpf(c.numerator) / c.denominator)


def _exquo(a, b):
    """Exact division in the coefficient ring."""
    if isinstance(a, ExactPoly):
        return a.exquo(b)
    if isinstance(b, ExactPoly):
        if b.degree() != 0:
            raise ArithmeticError("inexact division of a scalar by a polynomial")
        b = b.coeffs[0]
    return a / b


def _is_zero(c):
    return c == 0


# ---------------------------------------------------------------------------
# Exact univariate polynomials over a (recursive) coefficient ring
# ---------------------------------------------------------------------------


class ExactPoly:
    """Dense univariate polynomial with exact coefficients, low degree first.

    Coefficients may be ``Fraction``, :class:`GaussRat` or ``ExactPoly``
    (for polynomial rings in several variables).  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        cs = [Fraction(c) if isinstance(c, int) else c for c in cs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    @staticmethod
    def _wrap(other):
        if isinstance(other, ExactPoly):
            return other
        if isinstance(other, (int, Fraction, GaussRat, Rational)):
            return ExactPoly([other])
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return ExactPoly([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return ExactPoly([self[k] - o[k] for k in range(n)])

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return ExactPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = ExactPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"ExactPoly({list(self.coeffs)!r})"

    def __call__(self, z):
        """Horner evaluation; ``z`` may be exact, float, or an mpmath number."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self):
        return ExactPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def scale(self, c):
        return ExactPoly([c * a for a in self.coeffs])

    def map_coeffs(self, fn):
        return ExactPoly([fn(c) for c in self.coeffs])

    # -- division -------------------------------------------------------

    def divmod(self, other):
        """Euclidean division; requires a field of coefficients."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return ExactPoly(), self
        quo = [0] * (dq + 1)
        lc = other.lc()
        for k in range(dq, -1, -1):
            c = _exquo(rem[k + len(other.coeffs) - 1], lc)
            quo[k] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return ExactPoly(quo), ExactPoly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return self.divmod(self._wrap(other))[0]

    def __mod__(self, other):
        return self.divmod(self._wrap(other))[1]

    def exquo(self, other):
        """Exact division by a polynomial or by a coefficient-ring element."""
        if not isinstance(other, ExactPoly):
            return ExactPoly([_exquo(c, other) for c in self.coeffs])
        if other.degree() == 0:
            return ExactPoly([_exquo(c, other.coeffs[0]) for c in self.coeffs])
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def div_coeff(self, c):
        """Divide every coefficient exactly by the ring element ``c``."""
        return ExactPoly([_exquo(x, c) for x in self.coeffs])

    def prem(self, other):
        """Pseudo-remainder: ``lc(other)**(deg self - deg other + 1) * self mod other``
        computed with ring operations only."""
        if other.is_zero():
            raise ZeroDivisionError("pseudo-remainder by zero")
        m, n = self.degree(), other.degree()
        if m < n:
            return self
        lc = other.lc()
        rem = list(self.coeffs)
        e = m - n + 1
        for k in range(m, n - 1, -1):
            top = rem[k]
            rem = [lc * c for c in rem]
            if not _is_zero(top):
                for j, b in enumerate(other.coeffs):
                    rem[k - n + j] = rem[k - n + j] - top * b
            rem.pop()
            e -= 1
        out = ExactPoly(rem)
        if e:
            out = out.scale(lc ** e)
        return out

    def monic(self):
        if self.is_zero():
            return self
        return self.exquo(self.lc())

    def primitive(self):
        """Integer-primitive form with positive leading coefficient (rational
        coefficients) or monic form (Gaussian coefficients)."""
        if self.is_zero():
            return self
        if any(isinstance(c, (GaussRat, ExactPoly)) for c in self.coeffs):
            return self.monic()
        cs = [Fraction(c) for c in self.coeffs]
        den = 1
        for c in cs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return ExactPoly([Fraction(v, g) for v in ints])

    # -- conversions ----------------------------------------------------

    def to_numpy(self):
        """Coefficients as a complex128 array (low degree first)."""
        return np.array([to_complex(c) for c in self.coeffs], dtype=complex)

    def to_mpc(self, ctx):
        return [to_mpc(ctx, c) for c in self.coeffs]


def poly_gcd(p, q):
    """Monic gcd over a coefficient field."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def resultant(p, q):
    """Resultant of two univariate polynomials over an exact integral domain.

    Subresultant pseudo-remainder sequence; the value equals the Sylvester
    determinant, so ``resultant(v - 3, v - 5) == -2``.
    """
    if p.is_zero() and q.is_zero():
        raise ValueError("undefined resultant")
    if p.is_zero() or q.is_zero():
        return Fraction(0)
    a, b = p, q
    sign = 1
    if a.degree() < b.degree():
        a, b = b, a
        if a.degree() % 2 == 1 and b.degree() % 2 == 1:
            sign = -1
    if b.degree() == 0:
        return sign * b.lc() ** a.degree()
    g = h = 1
    while True:
        delta = a.degree() - b.degree()
        if a.degree() % 2 == 1 and b.degree() % 2 == 1:
            sign = -sign
        r = a.prem(b)
        a = b
        b = r.div_coeff(g * h ** delta)
        if b.is_zero():
            return Fraction(0)
        g = a.lc()
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exquo(g ** delta, h ** (delta - 1))
        if b.degree() == 0:
            n = a.degree()
            if n == 1:
                h = b.lc()
            else:
                h = _exquo(b.lc() ** n, h ** (n - 1))
            return h if sign == 1 else -h


def discriminant(p):
    """``(-1)**(n(n-1)/2) * Res(p, p') / lc(p)``; zero iff ``p`` has a repeated root."""
    n = p.degree()
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    res = resultant(p, p.derivative())
    val = _exquo(res, p.lc())
    if (n * (n - 1) // 2) % 2:
        val = -val
    return val


def squarefree_part(p):
    """``p / gcd(p, p')`` in primitive form; requires field coefficients."""
    if p.is_zero():
        raise ValueError("squarefree part of zero")
    if p.degree() <= 0:
        return ExactPoly([1])
    g = poly_gcd(p, p.derivative())
    return p.exquo(g).primitive()


def squarefree_decomposition(p):
    """Yun's algorithm: returns ``[(a_1, 1), (a_2, 2), ...]`` with monic,
    pairwise coprime, squarefree ``a_k`` and ``p = lc(p) * prod(a_k**k)``.
    Trivial factors are omitted."""
    if p.is_zero():
        raise ValueError("squarefree decomposition of zero")
    if p.degree() <= 0:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p.exquo(a0).monic()
    c = dp.exquo(a0).exquo(p.lc())
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            out.append((a, k))
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.derivative()
        k += 1
    return out


# ---------------------------------------------------------------------------
# Exact multivariate polynomials
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate polynomial with exact coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  With three
    variables and a single total degree this is a plane-curve form in
    ``(x1, x2, x3)``.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != nvars or any(v < 0 for v in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = exact(c) if not isinstance(c, (Fraction, GaussRat)) else c
            if c != 0:
                clean[e] = clean.get(e, 0) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    @classmethod
    def var(cls, nvars, k):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def degree_in(self, k):
        if not self.terms:
            return -1
        return max(e[k] for e in self.terms)

    def is_gaussian(self):
        return any(isinstance(c, GaussRat) and c.im != 0 for c in self.terms.values())

    def _wrap(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction, GaussRat)):
            return MPoly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return MPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.constant(self.nvars, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.terms!r})"

    def diff(self, k):
        t = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                t[tuple(e2)] = c * e[k]
        return MPoly(self.nvars, t)

    def __call__(self, *point):
        """Evaluate at a point of any numeric type (exact, complex, mpmath)."""
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = tuple(point[0])
        acc = 0
        for e, c in self.terms.items():
            m = c
            for v, k in zip(point, e):
                if k:
                    m = m * v ** k
            acc = acc + m
        return acc

    def evaluate_numeric(self, point, ctx=None):
        """Evaluate with coefficients converted to complex (or to ``ctx.mpc``)."""
        acc = 0
        for e, c in self.terms.items():
            m = to_mpc(ctx, c) if ctx is not None else to_complex(c)
            for v, k in zip(point, e):
                if k:
                    m = m * v ** k
            acc = acc + m
        return acc

    def abs_scale(self, point, ctx=None):
        """``sum |c| * prod |x_i|**e_i``: natural scale for relative residuals."""
        acc = 0.0 if ctx is None else ctx.mpf(0)
        for e, c in self.terms.items():
            m = abs(to_complex(c)) if ctx is None else abs(to_mpc(ctx, c))
            for v, k in zip(point, e):
                if k:
                    m = m * abs(v) ** k
            acc = acc + m
        return acc

    def compose_linear(self, columns, nvars_out=None):
        """Substitute ``x_i = sum_j columns[j][i] * u_j``.

        ``columns`` is a list of vectors (one per new variable), each with
        ``self.nvars`` exact entries.  Returns a polynomial in the ``u_j``.
        """
        m = nvars_out if nvars_out is not None else len(columns)
        forms = []
        for i in range(self.nvars):
            t = {}
            for j, col in enumerate(columns):
                c = exact(col[i]) if not isinstance(col[i], (Fraction, GaussRat)) else col[i]
                if c != 0:
                    e = [0] * m
                    e[j] = 1
                    t[tuple(e)] = c
            forms.append(MPoly(m, t))
        powers = [dict() for _ in range(self.nvars)]

        def power(i, k):
            if k not in powers[i]:
                powers[i][k] = forms[i] ** k
            return powers[i][k]

        out = MPoly(m)
        for e, c in self.terms.items():
            term = MPoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def set_var(self, k, value):
        """Substitute an exact value for variable ``k``; drops that variable."""
        t = {}
        for e, c in self.terms.items():
            e2 = e[:k] + e[k + 1:]
            t[e2] = t.get(e2, 0) + c * (value ** e[k] if e[k] else 1)
        return MPoly(self.nvars - 1, t)

    def to_nested(self, main, inner):
        """Bivariate polynomial as ``ExactPoly`` in variable ``main`` whose
        coefficients are ``ExactPoly`` in variable ``inner``."""
        if self.nvars != 2:
            raise ValueError("to_nested expects a bivariate polynomial")
        rows = {}
        for e, c in self.terms.items():
            rows.setdefault(e[main], {})[e[inner]] = c
        top = max(rows) if rows else -1
        coeffs = []
        for k in range(top + 1):
            row = rows.get(k, {})
            deg = max(row) if row else -1
            coeffs.append(ExactPoly([row.get(j, 0) for j in range(deg + 1)]))
        return ExactPoly(coeffs)

    def to_univariate(self, k=0):
        if self.nvars != 1:
            raise ValueError("not univariate")
        deg = self.total_degree()
        return ExactPoly([self.terms.get((j,), 0) for j in range(deg + 1)])

    def coefficient_grid(self):
        """Bivariate polynomial as a dense complex array ``A[i, j]`` of the
        coefficient of ``u**i * w**j``."""
        if self.nvars != 2:
            raise ValueError("coefficient_grid expects a bivariate polynomial")
        di = max((e[0] for e in self.terms), default=0)
        dj = max((e[1] for e in self.terms), default=0)
        grid = np.zeros((di + 1, dj + 1), dtype=complex)
        for (i, j), c in self.terms.items():
            grid[i, j] = to_complex(c)
        return grid


def det3(a, b, c):
    """Determinant of the 3x3 matrix with rows ``a, b, c`` (any ring)."""
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def hessian_form(F):
    """Determinant of the matrix of second partials of a ternary form."""
    H = [[F.diff(i).diff(j) for j in range(3)] for i in range(3)]
    return det3(H[0], H[1], H[2])


# ---------------------------------------------------------------------------
# Floating layer
# ---------------------------------------------------------------------------


def horner(coeffs, z):
    """Evaluate ``sum coeffs[k] * z**k`` (low degree first); vectorises over ``z``."""
    acc = np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


class UniPoly:
    """Dense univariate polynomial with complex double coefficients."""

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex).ravel()
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1] if len(nz) else c[:0]

    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        return horner(self.coeffs, z)

    def derivative(self):
        if self.degree() <= 0:
            return UniPoly([])
        k = np.arange(1, len(self.coeffs))
        return UniPoly(self.coeffs[1:] * k)

    def abs_scale(self, z):
        return horner(np.abs(self.coeffs), np.abs(z))

    def roots(self, tol=1e-12, max_iter=500):
        return roots(self, tol=tol, max_iter=max_iter)

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()!r})"


# Fixed irrational offset for the initial circle; breaks the symmetry that
# stalls simultaneous iteration on polynomials like z**n - c.
_ANGLE_OFFSET = 2.0 * math.pi * (math.sqrt(5.0) - 1.0) / 2.0 / 7.0


def fujiwara_bound(coeffs):
    """Fujiwara's upper bound on the moduli of the roots."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    lc = c[-1]
    vals = []
    for k in range(1, n + 1):
        a = abs(c[n - k] / lc)
        if k == n:
            a = a / 2.0
        vals.append(a ** (1.0 / k))
    return 2.0 * max(vals) if vals else 0.0


def roots(p, tol=1e-12, max_iter=500):
    """All complex roots of a univariate polynomial.

    Aberth-Ehrlich simultaneous iteration started on a circle whose radius
    comes from the Fujiwara bound, followed by per-root Newton polishing.
    ``tol`` bounds the scaled residual ``|p(z)| / sum|a_k||z|**k``.
    """
    c = p.coeffs if isinstance(p, UniPoly) else UniPoly(p).coeffs
    n = len(c) - 1
    if n < 1:
        raise ValueError("roots needs degree >= 1")
    if abs(c[-1]) < 1e-14 * np.max(np.abs(c)):
        raise ValueError("leading coefficient is negligible; deflate first")
    if n == 1:
        return [complex(-c[0] / c[1])]
    # strip exact zero roots
    nzero = 0
    while abs(c[nzero]) < np.finfo(float).tiny:    # subnormal counts as zero
        nzero += 1
    if nzero:
        rest = roots(UniPoly(c[nzero:]), tol, max_iter) if n - nzero >= 1 else []
        return [0j] * nzero + rest

    dc = c[1:] * np.arange(1, n + 1)
    absc = np.abs(c)
    radius = fujiwara_bound(c) / 2.0
    if radius == 0.0:
        radius = 1.0
    ang = 2.0 * np.pi * np.arange(n) / n + _ANGLE_OFFSET
    z = radius * np.exp(1j * ang)

    converged = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        pv = horner(c, z)
        dv = horner(dc, z)
        scale = horner(absc, np.abs(z))
        converged = np.abs(pv) <= tol * scale
        if converged.all():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = pv / dv
            step = w / (1.0 - w * s)
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(converged, 0.0, step)
        z = z - step
        if np.max(np.abs(step)) <= 1e-15 * max(1.0, float(np.max(np.abs(z)))):
            pv = horner(c, z)
            scale = horner(absc, np.abs(z))
            converged = np.abs(pv) <= tol * scale
            break

    # Newton polishing
    for _ in range(8):
        pv = horner(c, z)
        dv = horner(dc, z)
        ok = dv != 0
        upd = np.where(ok, pv / np.where(ok, dv, 1.0), 0.0)
        z_new = z - upd
        better = np.abs(horner(c, z_new)) <= np.abs(pv)
        z = np.where(better, z_new, z)
    pv = horner(c, z)
    scale = horner(absc, np.abs(z))
    resid = np.abs(pv) / scale
    if np.any(resid > max(tol, 1e3 * np.finfo(float).eps)):
        raise RootFindingError(
            f"root iteration did not converge (max scaled residual {resid.max():.3e})", z)
    return [complex(v) for v in z]


def poly_from_roots(rs, lead=1.0):
    """Coefficients (low degree first) of ``lead * prod(z - r)``."""
    c = np.array([1.0 + 0j])
    for r in rs:
        c = np.concatenate([[0j], c]) - r * np.concatenate([c, [0j]])
    return lead * c


def exact_from_roots(rs):
    """Exact monic polynomial with the given exact roots."""
    p = ExactPoly([1])
    for r in rs:
        p = p * ExactPoly([-r, 1])
    return p


def nested_eval_outer(nested, value):
    """For ``ExactPoly`` over ``ExactPoly`` (``p(v)`` with coefficients in
    ``s``), substitute ``s = value`` and return an ``ExactPoly`` in ``v``."""
    return ExactPoly([c(value) if isinstance(c, ExactPoly) else c for c in nested.coeffs])
