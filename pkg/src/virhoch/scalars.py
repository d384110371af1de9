"""Exact scalars for the whole computation.

Everything downstream is linear algebra over the field of rationals, or over
the polynomial ring in the two module parameters:

* ``D`` -- the weight of the rank-one module (the eigenvalue of the degree-one
  generator on the cyclic vector),
* ``a`` -- the shift of the module (the constant part of the degree-zero
  generator's action).

Rationals are ``fractions.Fraction`` throughout: exact, arbitrary precision,
always in lowest terms with positive denominator.  ``ParamPoly`` is a thin
commutative-polynomial layer over ``Fraction`` in the two parameters; it
exists so that differentials can be assembled once, symbolically, and then
specialized at many parameter points.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[Fraction, "ParamPoly"]

#: exponent key: (power of D, power of a)
Monomial = tuple[int, int]


def rat(p, q: int = 1) -> Fraction:
    """Shorthand constructor, also accepts strings like ``"-5/2"``."""
    return Fraction(p, q) if q != 1 else Fraction(p)


def format_rational(x: Fraction) -> str:
    """Canonical text form ``p/q`` (or ``p`` when the denominator is 1)."""
    return str(x)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class ParamPoly:
    """Polynomial in the module parameters D and a with rational coefficients.

    Immutable value object.  The internal map never stores zero coefficients,
    so equality of maps is equality of polynomials.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    dd, da = key
                    if dd < 0 or da < 0:
                        raise ValueError(f"negative exponent in {key}")
                    clean[(dd, da)] = clean.get((dd, da), Fraction(0)) + coeff
                    if not clean[(dd, da)]:
                        del clean[(dd, da)]
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(x) -> "ParamPoly":
        return ParamPoly({(0, 0): Fraction(x)})

    @staticmethod
    def coerce(x: Scalar) -> "ParamPoly":
        if isinstance(x, ParamPoly):
            return x
        return ParamPoly.const(x)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other) -> "ParamPoly":
        other = ParamPoly.coerce(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            out[key] = out.get(key, Fraction(0)) + coeff
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "ParamPoly":
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other) -> "ParamPoly":
        return ParamPoly.coerce(other) + (-self)

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            return ParamPoly({k: c * other for k, c in self._terms.items()})
        other = ParamPoly.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for (d1, a1), c1 in self._terms.items():
            for (d2, a2), c2 in other._terms.items():
                key = (d1 + d2, a1 + a2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ParamPoly(out)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- queries -----------------------------------------------------------

    def terms(self) -> Iterable[tuple[Monomial, Fraction]]:
        """Monomials in descending (D-degree, a-degree) order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True)

    def coeff(self, dd: int, da: int) -> Fraction:
        return self._terms.get((dd, da), Fraction(0))

    def degree_a(self) -> int:
        return max((da for (_, da) in self._terms), default=0)

    def shift_part(self) -> "ParamPoly":
        """The coefficient of a^1, as a polynomial in D (a-linear part)."""
        return ParamPoly({(dd, da - 1): c for (dd, da), c in self._terms.items() if da >= 1})

    def drop_shift(self) -> "ParamPoly":
        """The a-free part."""
        return ParamPoly({(dd, da): c for (dd, da), c in self._terms.items() if da == 0})

    def specialize(self, weight: Fraction, shift: Fraction) -> Fraction:
        """Evaluate at D = weight, a = shift.

        Ring homomorphism onto Fraction; the property suite checks that it
        commutes with + and *.
        """
        total = Fraction(0)
        for (dd, da), c in self._terms.items():
            total += c * weight**dd * shift**da
        return total

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (dd, da), c in self.terms():
            if (dd, da) == (0, 0):
                parts.append(format_rational(c))
            else:
                parts.append(f"{format_rational(c)}*D^{dd}*a^{da}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ParamPoly({self!s})"


ZERO = ParamPoly()
ONE = ParamPoly.const(1)
#: the module weight parameter
D = ParamPoly({(1, 0): Fraction(1)})
#: the module shift parameter
A = ParamPoly({(0, 1): Fraction(1)})


def parse_param_poly(text: str) -> ParamPoly:
    """Inverse of ``str(ParamPoly)`` for well-formed input."""
    text = text.strip()
    if text == "0":
        return ZERO
    terms: dict[Monomial, Fraction] = {}
    for chunk in text.split(" + "):
        bits = chunk.split("*")
        coeff = Fraction(bits[0])
        dd = da = 0
        for bit in bits[1:]:
            name, _, exp = bit.partition("^")
            if name == "D":
                dd = int(exp)
            elif name == "a":
                da = int(exp)
            else:
                raise ValueError(f"unknown variable {name!r} in {chunk!r}")
        terms[(dd, da)] = terms.get((dd, da), Fraction(0)) + coeff
    return ParamPoly(terms)
