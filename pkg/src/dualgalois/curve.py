"""Reduced plane curves given as a product of exact homogeneous factors,
and the JSON file format they are read from."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import GaussRat, MPoly, poly_gcd


class CurveError(ValueError):
    """Base class for curve input errors; ``code`` is a stable short tag."""

    code = "curve-error"


class MalformedCurveError(CurveError):
    code = "malformed"


class NonHomogeneousError(CurveError):
    code = "non-homogeneous"


class NonReducedError(CurveError):
    code = "non-reduced"


@dataclass
class CurveSpec:
    """Plane curve ``C = C_1 + ... + C_k`` given by exact ternary forms.

    Factors are assumed irreducible; that is not checked.  Reducedness of
    the product (no repeated or shared factors) is checked on construction.
    """

    factors: list
    names: list = field(default_factory=list)
    _product: MPoly | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.factors:
            raise MalformedCurveError("a curve needs at least one factor")
        for k, F in enumerate(self.factors):
            if not isinstance(F, MPoly) or F.nvars != 3:
                raise MalformedCurveError(f"factor {k} is not a ternary polynomial")
            if F.is_zero() or F.total_degree() < 1:
                raise MalformedCurveError(f"factor {k} has degree < 1")
            if not F.is_homogeneous():
                raise NonHomogeneousError(f"factor {k} is not homogeneous")
        if not self.names:
            self.names = [f"C{k + 1}" for k in range(len(self.factors))]
        check_reduced(self.product)

    @property
    def degrees(self):
        return [F.total_degree() for F in self.factors]

    @property
    def degree(self):
        return sum(self.degrees)

    @property
    def product(self):
        if self._product is None:
            out = self.factors[0]
            for F in self.factors[1:]:
                out = out * F
            self._product = out
        return self._product

    @property
    def k(self):
        return len(self.factors)

    def is_line(self, i):
        return self.factors[i].total_degree() == 1

    def line_components(self):
        return [i for i in range(self.k) if self.is_line(i)]

    def summary(self):
        return {
            "degree": self.degree,
            "degrees": self.degrees,
            "components": self.k,
            "line_components": self.line_components(),
            "factors": [format_form(F) for F in self.factors],
        }

    def to_dict(self):
        return {
            "degree_total": self.degree,
            "factors": [_factor_to_dict(F) for F in self.factors],
        }


def check_reduced(F, attempts=4, rng_seed=0):
    """Raise NonReducedError unless ``F`` is squarefree.

    A reduced curve meets a general line in ``deg F`` distinct points, so
    the restriction to a random line is squarefree.  A repeated factor
    makes every restriction non-squarefree.  A few random lines are tried
    so an unlucky tangent line does not cause a false alarm.
    """
    rng = random.Random(rng_seed)
    d = F.total_degree()
    for _ in range(attempts):
        A = [rng.randint(-7, 7) for _ in range(3)]
        B = [rng.randint(-7, 7) for _ in range(3)]
        g = F.compose_linear([A, B]).set_var(1, Fraction(1)).to_univariate()
        if g.degree() != d:
            continue
        if poly_gcd(g, g.derivative()).degree() == 0:
            return
    raise NonReducedError("non-reduced curve: a factor is repeated or shared")


def _parse_int(v, what):
    if isinstance(v, bool):
        raise MalformedCurveError(f"{what}: expected an integer string")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise MalformedCurveError(f"{what}: expected an integer string, got {v!r}")


def _parse_coeff(c, where):
    if isinstance(c, (int, str)) and not isinstance(c, bool):
        return Fraction(_parse_int(c, where))
    if not isinstance(c, dict):
        raise MalformedCurveError(f"{where}: coefficient must be an object")
    num = _parse_int(c.get("num", "0"), where + ".num")
    den = _parse_int(c.get("den", "1"), where + ".den")
    inum = _parse_int(c.get("inum", "0"), where + ".inum")
    iden = _parse_int(c.get("iden", "1"), where + ".iden")
    if den == 0 or iden == 0:
        raise MalformedCurveError(f"{where}: zero denominator")
    re, im = Fraction(num, den), Fraction(inum, iden)
    return GaussRat(re, im) if im != 0 else re


def curve_from_dict(data):
    if not isinstance(data, dict) or "factors" not in data:
        raise MalformedCurveError("expected an object with a 'factors' list")
    factors_in = data["factors"]
    if not isinstance(factors_in, list) or not factors_in:
        raise MalformedCurveError("'factors' must be a nonempty list")
    factors, names = [], []
    for k, fac in enumerate(factors_in):
        where = f"factors[{k}]"
        if not isinstance(fac, dict) or not isinstance(fac.get("terms"), list):
            raise MalformedCurveError(f"{where}: expected an object with a 'terms' list")
        deg = _parse_int(fac.get("degree"), where + ".degree")
        terms = {}
        for t, term in enumerate(fac["terms"]):
            tw = f"{where}.terms[{t}]"
            exps = term.get("exps") if isinstance(term, dict) else None
            if not isinstance(exps, list) or len(exps) != 3:
                raise MalformedCurveError(f"{tw}: 'exps' must be a list of three integers")
            e = tuple(_parse_int(v, tw + ".exps") for v in exps)
            if any(v < 0 for v in e):
                raise MalformedCurveError(f"{tw}: negative exponent")
            if sum(e) != deg:
                raise NonHomogeneousError(f"{tw}: exponents sum to {sum(e)}, factor degree is {deg}")
            if e in terms:
                raise MalformedCurveError(f"{tw}: duplicate exponent {list(e)}")
            terms[e] = _parse_coeff(term.get("coeff"), tw + ".coeff")
        F = MPoly(3, terms)
        if F.is_zero():
            raise MalformedCurveError(f"{where}: zero polynomial")
        factors.append(F)
        names.append(str(fac.get("name", f"C{k + 1}")))
    curve = CurveSpec(factors, names)
    if "degree_total" in data and _parse_int(data["degree_total"], "degree_total") != curve.degree:
        raise MalformedCurveError(
            f"degree_total {data['degree_total']} does not match the factor degrees {curve.degrees}")
    return curve


def load_curve(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedCurveError(f"malformed JSON: {exc}") from exc
    return curve_from_dict(data)


def _coeff_to_dict(c):
    if isinstance(c, GaussRat):
        return {"num": str(c.re.numerator), "den": str(c.re.denominator),
                "inum": str(c.im.numerator), "iden": str(c.im.denominator)}
    c = Fraction(c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _factor_to_dict(F):
    terms = [{"exps": list(e), "coeff": _coeff_to_dict(c)} for e, c in sorted(F.terms.items(), reverse=True)]
    return {"degree": F.total_degree(), "terms": terms}


def format_form(F):
    """Readable form like ``x1*x3 - x2^2``."""
    parts = []
    for e, c in sorted(F.terms.items(), reverse=True):
        mon = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        if isinstance(c, GaussRat):
            cs = f"({c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}i)"
            parts.append(("+ ", cs + ("*" + mon if mon else "")))
            continue
        sign = "- " if c < 0 else "+ "
        a = abs(c)
        body = mon if (a == 1 and mon) else (f"{a}*{mon}" if mon else f"{a}")
        parts.append((sign, body))
    if not parts:
        return "0"
    first = ("-" if parts[0][0] == "- " else "") + parts[0][1]
    return " ".join([first] + [s + b for s, b in parts[1:]])


def xvars():
    """The coordinate forms ``x1, x2, x3`` for building curves in code."""
    return tuple(MPoly.var(3, k) for k in range(3))


def restrict_to_line(F, A, B):
    """``F(A + t*B)`` as an exact univariate polynomial in ``t``."""
    return F.compose_linear([B, A]).set_var(1, Fraction(1)).to_univariate()
