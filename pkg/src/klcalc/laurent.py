"""Exact integer Laurent polynomials in one variable v.

Every graded multiplicity in this package (Hecke algebra coefficients,
graded decomposition numbers, functor characters) lives in Z[v, v^-1].
Coefficients are plain Python ints, so nothing ever overflows.

A polynomial is a sparse map from exponent to nonzero coefficient; the
empty map is zero.  The hot loops in the Hecke-algebra modules work on
these raw dicts directly via the ``p*`` helper functions below, and the
:class:`LaurentPoly` wrapper provides the arithmetic/printing API on top.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a nonzero polynomial (degree bounds)."""


# ---------------------------------------------------------------------------
# raw-dict helpers (performance layer; no zero values are ever stored)
# ---------------------------------------------------------------------------

def padd_into(dst: dict, src: dict, shift: int = 0, scale: int = 1) -> None:
    """dst += scale * v^shift * src, in place."""
    if scale == 0:
        return
    for e, c in src.items():
        k = e + shift
        t = dst.get(k, 0) + scale * c
        if t:
            dst[k] = t
        else:
            dst.pop(k, None)


def pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            k = ea + eb
            t = out.get(k, 0) + ca * cb
            if t:
                out[k] = t
            else:
                del out[k]
    return out


def pbar(a: dict) -> dict:
    """v -> v^-1 on a raw dict."""
    return {-e: c for e, c in a.items()}


def pscale(a: dict, scale: int, shift: int = 0) -> dict:
    if scale == 0:
        return {}
    return {e + shift: scale * c for e, c in a.items()}


class LaurentPoly:
    """An element of Z[v, v^-1] with exact big-integer coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict | None = None):
        self.c: dict = {e: v for e, v in (coeffs or {}).items() if v}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def v(cls, exponent: int = 1, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]]) -> "LaurentPoly":
        d: dict = {}
        for e, co in terms:
            d[e] = d.get(e, 0) + co
        return cls(d)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self.c)
        padd_into(d, other.c)
        return LaurentPoly(d)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self.c)
        padd_into(d, other.c, scale=-1)
        return LaurentPoly(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.c.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly(pmul(self.c, other.c))
        if isinstance(other, int):
            return LaurentPoly(pscale(self.c, other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not defined for polynomials")
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        return LaurentPoly({e + k: c for e, c in self.c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly(pbar(self.c))

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def eval_at_one(self) -> int:
        return sum(self.c.values())

    def degree_bounds(self) -> tuple[int, int]:
        """(minimal exponent, maximal exponent); requires a nonzero polynomial."""
        if not self.c:
            raise ZeroPolynomial("degree bounds of the zero polynomial")
        return (min(self.c), max(self.c))

    def coeff(self, exponent: int) -> int:
        return self.c.get(exponent, 0)

    def has_nonneg_coeffs(self) -> bool:
        return all(v > 0 for v in self.c.values())

    def terms(self) -> Iterator[tuple[int, int]]:
        """(exponent, coefficient) pairs, exponent ascending."""
        return iter(sorted(self.c.items()))

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.c.items()))

    def __bool__(self) -> bool:
        return bool(self.c)

    # -- rendering -------------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self.c)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def render_poly(coeffs: dict) -> str:
    """Render a raw dict with terms sorted by exponent ascending.

    Grammar (also accepted by :func:`parse_poly`):
    ``v^-1 + 2 + 3*v + v^3 - v^4``.
    """
    if not coeffs:
        return "0"
    parts: list[str] = []
    for e, c in sorted(coeffs.items()):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "v" if e == 1 else f"v^{e}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the output of :func:`render_poly` back into a polynomial."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero()
    tokens = text.replace("- ", "-").replace("+ ", "").split()
    terms: list[tuple[int, int]] = []
    for tok in tokens:
        sign = 1
        if tok.startswith("-"):
            sign, tok = -1, tok[1:]
        if "*" in tok:
            co, var = tok.split("*", 1)
            coeff = int(co)
        elif tok.startswith("v"):
            coeff, var = 1, tok
        else:
            coeff, var = int(tok), ""
        if not var:
            exp = 0
        elif var == "v":
            exp = 1
        else:
            if not var.startswith("v^"):
                raise ValueError(f"bad polynomial token: {tok!r}")
            exp = int(var[2:])
        terms.append((exp, sign * coeff))
    return LaurentPoly.from_terms(terms)
