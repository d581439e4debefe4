"""Trace polynomials of free-group words, with exact integer coefficients.

For every word w on two generators there is a polynomial g_w in Z[x, y, z]
with tr w(U, V) = g_w(tr U, tr V, tr UV) for all unimodular 2x2 matrices
U, V.  It is computed here inside the rank-four algebra spanned by
{1, U, V, UV}, whose multiplication closes over Z[x, y, z] by the
Cayley-Hamilton relations

    U^2 = xU - 1,   V^2 = yV - 1,   VU = (z - xy) + yU + xV - UV.

Running the same recursion with numbers instead of polynomials evaluates
g_w at a point without materializing its coefficients (eval_trace).
"""

from __future__ import annotations

from typing import Union

from mpmath import mp, mpf

from .words import FWord

Scalar = Union[int, mpf]


class TracePolynomial:
    """Sparse element of Z[x, y, z]: exponent triple -> integer coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int, int], int] | None = None):
        clean = {k: v for k, v in (terms or {}).items() if v != 0}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TracePolynomial is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, TracePolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "TracePolynomial") -> "TracePolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TracePolynomial(out)

    def __neg__(self) -> "TracePolynomial":
        return TracePolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "TracePolynomial") -> "TracePolynomial":
        return self + (-other)

    def __mul__(self, other: "TracePolynomial") -> "TracePolynomial":
        out: dict[tuple[int, int, int], int] = {}
        for (i1, j1, k1), c1 in self.terms.items():
            for (i2, j2, k2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                out[key] = out.get(key, 0) + c1 * c2
        return TracePolynomial(out)

    def scale(self, c: int) -> "TracePolynomial":
        return TracePolynomial({k: c * v for k, v in self.terms.items()})

    def is_constant(self) -> bool:
        return all(k == (0, 0, 0) for k in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0, 0, 0), 0)

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    # Canonical term order: lexicographic in (i, j, k), descending.
    def sorted_terms(self) -> list[tuple[tuple[int, int, int], int]]:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for (i, j, k), c in self.sorted_terms():
            mono = " ".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in (("x", i), ("y", j), ("z", k))
                if e > 0
            )
            mag = abs(c)
            body = mono if mono and mag == 1 else (f"{mag} {mono}".strip())
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"TracePolynomial({self})"


ZERO = TracePolynomial()
ONE = TracePolynomial({(0, 0, 0): 1})
PX = TracePolynomial({(1, 0, 0): 1})
PY = TracePolynomial({(0, 1, 0): 1})
PZ = TracePolynomial({(0, 0, 1): 1})


def constant(c: int) -> TracePolynomial:
    return TracePolynomial({(0, 0, 0): c})


def parse_polynomial(text: str) -> TracePolynomial:
    """Inverse of str(): parse 'c x^i y^j z^k' monomials joined by signs."""
    terms: dict[tuple[int, int, int], int] = {}
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    sign, coeff, expo = 1, None, {"x": 0, "y": 0, "z": 0}
    started = False

    def flush():
        nonlocal coeff, expo, started
        if not started:
            return
        c = sign * (1 if coeff is None else coeff)
        key = (expo["x"], expo["y"], expo["z"])
        terms[key] = terms.get(key, 0) + c
        coeff, expo, started = None, {"x": 0, "y": 0, "z": 0}, False

    for tok in tokens:
        if tok in ("+", "-"):
            flush()
            sign = 1 if tok == "+" else -1
            continue
        started = True
        if tok.isdigit():
            coeff = int(tok)
            continue
        var, _, e = tok.partition("^")
        if var not in expo:
            raise ValueError(f"bad monomial token {tok!r}")
        expo[var] += int(e) if e else 1
    flush()
    if text.strip() == "0":
        return ZERO
    return TracePolynomial(terms)


# ---------------------------------------------------------------------------
# The rank-four trace algebra
# ---------------------------------------------------------------------------
#
# Elements are coefficient 4-tuples (a, b, c, d) for a + bU + cV + dUV.
# The same multiplication works over Z[x,y,z] or over mpmath reals.


def _algebra_mul(e1, e2, x, y, z, xy):
    a1, b1, c1, d1 = e1
    a2, b2, c2, d2 = e2
    a = a1 * a2 - b1 * b2 + (z - xy) * (c1 * b2) - c1 * c2 \
        - x * (c1 * d2) - y * (d1 * b2) - d1 * d2
    b = a1 * b2 + b1 * a2 + x * (b1 * b2) + y * (c1 * b2) \
        + c1 * d2 + z * (d1 * b2) - d1 * c2
    c = a1 * c2 + c1 * a2 - b1 * d2 + x * (c1 * b2) \
        + y * (c1 * c2) + z * (c1 * d2) + d1 * b2
    d = a1 * d2 + d1 * a2 + b1 * c2 + x * (b1 * d2) \
        - c1 * b2 + y * (d1 * c2) + z * (d1 * d2)
    return a, b, c, d


def _letter_elements(x, y, one, zero):
    return {
        1: (zero, one, zero, zero),
        -1: (x, -one, zero, zero),
        2: (zero, zero, one, zero),
        -2: (y, zero, -one, zero),
    }


def _word_element(letters, cache, letter_elems, x, y, z, xy, one, zero):
    if letters in cache:
        return cache[letters]
    n = len(letters)
    if n == 0:
        elem = (one, zero, zero, zero)
    elif n == 1:
        elem = letter_elems[letters[0]]
    else:
        mid = n // 2
        left = _word_element(letters[:mid], cache, letter_elems, x, y, z, xy, one, zero)
        right = _word_element(letters[mid:], cache, letter_elems, x, y, z, xy, one, zero)
        elem = _algebra_mul(left, right, x, y, z, xy)
    cache[letters] = elem
    return elem


_poly_cache: dict[tuple[int, ...], tuple] = {}


def trace_polynomial(w: FWord) -> TracePolynomial:
    """The polynomial g_w with tr w(U, V) = g_w(tr U, tr V, tr UV)."""
    elems = _letter_elements(PX, PY, ONE, ZERO)
    a, b, c, d = _word_element(
        w.letters, _poly_cache, elems, PX, PY, PZ, PX * PY, ONE, ZERO
    )
    return a.scale(2) + PX * b + PY * c + PZ * d


def kappa() -> TracePolynomial:
    """The commutator trace polynomial x^2 + y^2 + z^2 - xyz - 2."""
    return TracePolynomial(
        {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (1, 1, 1): -1, (0, 0, 0): -2}
    )


def eval_poly(p: TracePolynomial, x, y, z, prec: int = 53):
    """Evaluate p at (x, y, z), Horner-style in each variable.

    Integer inputs stay on an exact integer path; otherwise the evaluation
    runs at the requested binary precision (at least 53 bits).
    """
    if prec < 53:
        raise ValueError("precision must be at least 53 bits")
    if all(isinstance(v, int) for v in (x, y, z)):
        return _horner(p, x, y, z, 0)
    with mp.workprec(prec):
        return _horner(p, mpf(x), mpf(y), mpf(z), mpf(0))


def _horner(p: TracePolynomial, x, y, z, zero):
    by_i: dict[int, dict[int, dict[int, int]]] = {}
    for (i, j, k), c in p.terms.items():
        by_i.setdefault(i, {}).setdefault(j, {})[k] = c
    total = zero
    for i in range(max(by_i, default=0), -1, -1):
        level_j = by_i.get(i, {})
        acc_j = zero
        for j in range(max(level_j, default=0), -1, -1):
            level_k = level_j.get(j, {})
            acc_k = zero
            for k in range(max(level_k, default=0), -1, -1):
                acc_k = acc_k * z + level_k.get(k, 0)
            acc_j = acc_j * y + acc_k
        total = total * x + acc_j
    return total


def eval_trace(w: FWord, x, y, z, prec: int = 53):
    """Value of g_w at (x, y, z) without materializing the coefficients.

    Runs the trace-algebra recursion over numbers; exactly equal to
    eval_poly(trace_polynomial(w), x, y, z) up to rounding.
    """
    with mp.workprec(prec):
        xv, yv, zv = mpf(x), mpf(y), mpf(z)
        one, zero = mpf(1), mpf(0)
        elems = _letter_elements(xv, yv, one, zero)
        cache: dict[tuple[int, ...], tuple] = {}
        a, b, c, d = _word_element(
            w.letters, cache, elems, xv, yv, zv, xv * yv, one, zero
        )
        return 2 * a + xv * b + yv * c + zv * d
