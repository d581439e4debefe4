"""Exact word algebra in the rank-two free group and its reflection extension.

Free-group words live on the two generators X, Y; the third symbol Z is an
abbreviation for Y^-1 X^-1 (so that X*Y*Z is trivial) and is expanded on
input, never stored.  The ambient reflection group on three involutions
P, Q, R contains the free group with index two via X -> QR, Y -> RP,
Z -> PQ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

# Signed letters: +1 = X, -1 = X^-1, +2 = Y, -2 = Y^-1.
# +3 / -3 encode Z / Z^-1 in raw input only.
X, Y, Z = 1, 2, 3

_LETTER_CHARS = {1: "X", -1: "x", 2: "Y", -2: "y", 3: "Z", -3: "z"}
_CHAR_LETTERS = {v: k for k, v in _LETTER_CHARS.items()}

# Z = Y^-1 X^-1 and Z^-1 = X Y.
_Z_EXPANSION = {3: (-2, -1), -3: (1, 2)}


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for let in letters:
        if stack and stack[-1] == -let:
            stack.pop()
        else:
            stack.append(let)
    return tuple(stack)


class FWord:
    """A freely reduced word over {X, X^-1, Y, Y^-1}.

    Instances are immutable; the constructor expands Z letters and reduces,
    so every FWord is automatically in canonical form.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        expanded: list[int] = []
        for let in letters:
            if let in (3, -3):
                expanded.extend(_Z_EXPANSION[let])
            elif let in (1, -1, 2, -2):
                expanded.append(let)
            else:
                raise ValueError(f"invalid letter {let!r}")
        object.__setattr__(self, "letters", _free_reduce(expanded))

    def __setattr__(self, name, value):
        raise AttributeError("FWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, FWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("FWord", self.letters))

    def __mul__(self, other: "FWord") -> "FWord":
        return FWord(self.letters + other.letters)

    def inverse(self) -> "FWord":
        return FWord(tuple(-l for l in reversed(self.letters)))

    def __pow__(self, n: int) -> "FWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = FWord()
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self, g: "FWord") -> "FWord":
        """g * self * g^-1, reduced."""
        return g * self * g.inverse()

    def reversed(self) -> "FWord":
        return FWord(tuple(reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sums(self) -> tuple[int, int]:
        """Image in Z^2: (sum of X-exponents, sum of Y-exponents)."""
        ex = sum(1 if l == 1 else -1 for l in self.letters if abs(l) == 1)
        ey = sum(1 if l == 2 else -1 for l in self.letters if abs(l) == 2)
        return ex, ey

    def __str__(self) -> str:
        return "".join(_LETTER_CHARS[l] for l in self.letters) or "1"

    def __repr__(self) -> str:
        return f"FWord({self})"


def normalize(raw: Iterable[int]) -> FWord:
    """Freely reduce a raw letter sequence, expanding any Z letters."""
    return FWord(raw)


def commutator(a: FWord, b: FWord) -> FWord:
    return a * b * a.inverse() * b.inverse()


def cyclic_reduce(w: FWord) -> tuple[FWord, FWord]:
    """Return (core, conjugator) with w = conjugator * core * conjugator^-1."""
    letters = list(w.letters)
    prefix: list[int] = []
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        prefix.append(letters[0])
        letters = letters[1:-1]
    return FWord(letters), FWord(prefix)


def is_cyclically_reduced(w: FWord) -> bool:
    return len(w) < 2 or w.letters[0] != -w.letters[-1]


# ---------------------------------------------------------------------------
# Palindromes
# ---------------------------------------------------------------------------

# Rewriting maps into the three two-generator pairs.  Within a pair the
# letters are +-1 (first generator) and +-2 (second generator).
_PAIR_SUBSTITUTIONS = {
    ("X", "Y"): {1: (1,), -1: (-1,), 2: (2,), -2: (-2,)},
    # X = Z^-1 Y^-1 in the pair (Y, Z)
    ("Y", "Z"): {1: (-2, -1), -1: (1, 2), 2: (1,), -2: (-1,)},
    # Y = X^-1 Z^-1 in the pair (Z, X)
    ("Z", "X"): {1: (2,), -1: (-2,), 2: (-2, -1), -2: (1, 2)},
}


@dataclass(frozen=True)
class PalindromeWitness:
    pair: tuple[str, str]
    rewritten: str


def rewrite_in_pair(w: FWord, pair: tuple[str, str]) -> tuple[int, ...]:
    """Express w in the given generator pair, freely reduced."""
    sub = _PAIR_SUBSTITUTIONS[pair]
    out: list[int] = []
    for let in w.letters:
        out.extend(sub[let])
    return _free_reduce(out)


def _render_pair_word(letters: Sequence[int], pair: tuple[str, str]) -> str:
    chars = {1: pair[0], -1: pair[0].lower(), 2: pair[1], -2: pair[1].lower()}
    return "".join(chars[l] for l in letters) or "1"


def is_palindromic(w: FWord) -> Optional[PalindromeWitness]:
    """Witness that w reads the same backwards in one of the three pairs.

    The word itself is tested, with no cyclic conjugation.
    """
    for pair in (("X", "Y"), ("Y", "Z"), ("Z", "X")):
        rewritten = rewrite_in_pair(w, pair)
        if rewritten == tuple(reversed(rewritten)):
            return PalindromeWitness(pair, _render_pair_word(rewritten, pair))
    return None


# ---------------------------------------------------------------------------
# The reflection group on P, Q, R
# ---------------------------------------------------------------------------

P, Q, R = 1, 2, 3
_COX_CHARS = {1: "P", 2: "Q", 3: "R"}
_COX_FROM_CHAR = {v: k for k, v in _COX_CHARS.items()}


def _cox_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for let in letters:
        if stack and stack[-1] == let:
            stack.pop()
        else:
            stack.append(let)
    return tuple(stack)


class CoxWord:
    """A reduced word over the involutions P, Q, R."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        lets = tuple(letters)
        for let in lets:
            if let not in (1, 2, 3):
                raise ValueError(f"invalid reflection letter {let!r}")
        object.__setattr__(self, "letters", _cox_reduce(lets))

    def __setattr__(self, name, value):
        raise AttributeError("CoxWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("CoxWord", self.letters))

    def __mul__(self, other: "CoxWord") -> "CoxWord":
        return CoxWord(self.letters + other.letters)

    def inverse(self) -> "CoxWord":
        return CoxWord(tuple(reversed(self.letters)))

    def __pow__(self, n: int) -> "CoxWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = CoxWord()
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return "".join(_COX_CHARS[l] for l in self.letters) or "1"

    def __repr__(self) -> str:
        return f"CoxWord({self})"


_EMBED = {1: (Q, R), -1: (R, Q), 2: (R, P), -2: (P, R)}
_PROJECT = {
    (Q, R): (1,),
    (R, Q): (-1,),
    (R, P): (2,),
    (P, R): (-2,),
    (P, Q): (3,),
    (Q, P): (-3,),
}


def embed_in_coxeter(w: FWord) -> CoxWord:
    """Image of w under X -> QR, Y -> RP (hence Z -> PQ)."""
    out: list[int] = []
    for let in w.letters:
        out.extend(_EMBED[let])
    return CoxWord(out)


def project_to_f2(w: CoxWord) -> FWord:
    """Inverse of embed_in_coxeter on the even-length subgroup."""
    if len(w) % 2 != 0:
        raise ValueError("not in the index-two subgroup: odd length")
    raw: list[int] = []
    for i in range(0, len(w), 2):
        raw.extend(_PROJECT[w.letters[i : i + 2]])
    return FWord(raw)


# ---------------------------------------------------------------------------
# Distinguished words
# ---------------------------------------------------------------------------


def build_u_n(n: int) -> FWord:
    """The palindromic kernel-candidate word of index n.

    Reduced form XY [X,Y]^n X^-1 Y^-2 X^-1 [Y^-1,X^-1]^n YX, cross-checked
    against its reflection-group commutator form [Z^-1 A^{2n} B, R] with
    A = QPR and B = RQP; construction fails loudly if the two disagree.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    xw, yw = FWord((1,)), FWord((2,))
    k = commutator(xw, yw)
    kbar = commutator(yw.inverse(), xw.inverse())
    u = (
        FWord((1, 2))
        * k ** n
        * FWord((-1, -2, -2, -1))
        * kbar ** n
        * FWord((2, 1))
    )
    a = CoxWord((Q, P, R))
    b = CoxWord((R, Q, P))
    z = CoxWord((P, Q))
    r = CoxWord((R,))
    g = z.inverse() * a ** (2 * n) * b
    cox_form = g * r * g.inverse() * r
    if embed_in_coxeter(u) != cox_form:
        raise ArithmeticError(
            f"u_{n} construction mismatch against its reflection-group form"
        )
    return u


def build_w_n(n: int) -> FWord:
    """The torsion-candidate word [Z,X]^n [Y,Z]^n, with Z expanded."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    xw, yw, zw = FWord((1,)), FWord((2,)), FWord((3,))
    return commutator(zw, xw) ** n * commutator(yw, zw) ** n


def substitute(w: FWord, image_x: FWord, image_y: FWord) -> FWord:
    """Apply the endomorphism X -> image_x, Y -> image_y to w."""
    images = {
        1: image_x.letters,
        -1: image_x.inverse().letters,
        2: image_y.letters,
        -2: image_y.inverse().letters,
    }
    out: list[int] = []
    for let in w.letters:
        out.extend(images[let])
    return FWord(out)


# ---------------------------------------------------------------------------
# Structure of words
# ---------------------------------------------------------------------------


def primitive_root(w: FWord) -> tuple[FWord, int]:
    """Maximal-root decomposition core = root^exponent of the cyclic core."""
    if w.is_identity():
        raise ValueError("empty word has no primitive root")
    core, _ = cyclic_reduce(w)
    letters = core.letters
    n = len(letters)
    for d in range(1, n + 1):
        if n % d != 0:
            continue
        if letters == letters[:d] * (n // d):
            return FWord(letters[:d]), n // d
    raise AssertionError("unreachable: d == n always divides")


def occurrences(pattern: FWord, text: FWord, cyclic: bool = False) -> list[int]:
    """Start positions of pattern inside text, optionally wrapping around."""
    if pattern.is_identity():
        raise ValueError("pattern must be nonempty")
    p, t = pattern.letters, text.letters
    if len(p) > len(t):
        return []
    hits: list[int] = []
    if cyclic:
        doubled = t + t
        for i in range(len(t)):
            if doubled[i : i + len(p)] == p:
                hits.append(i)
    else:
        for i in range(len(t) - len(p) + 1):
            if t[i : i + len(p)] == p:
                hits.append(i)
    return hits


# ---------------------------------------------------------------------------
# Word literals
# ---------------------------------------------------------------------------

_NAMED_WORD = re.compile(r"^\s*([uw])_?(\d+)\s*$")


def parse_word(text: str) -> FWord:
    """Parse a word literal.

    Letters X x Y y Z z (lowercase = inverse), optional ^k repetition with k
    a possibly negative integer, [A,B] commutator sugar, parentheses for
    grouping, whitespace ignored.  The shorthand names u<k> and w<k> denote
    the distinguished words.
    """
    named = _NAMED_WORD.match(text)
    if named:
        builder = build_u_n if named.group(1) == "u" else build_w_n
        return builder(int(named.group(2)))
    word, pos = _parse_sequence(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ValueError(f"unexpected character {text[pos]!r} at {pos}")
    return word


def _skip_ws(s: str, i: int) -> int:
    while i < len(s) and s[i].isspace():
        i += 1
    return i


def _parse_sequence(s: str, i: int, stop: str = "") -> tuple[FWord, int]:
    word = FWord()
    while True:
        i = _skip_ws(s, i)
        if i >= len(s) or s[i] in stop:
            return word, i
        atom, i = _parse_atom(s, i)
        i = _skip_ws(s, i)
        if i < len(s) and s[i] == "^":
            exp, i = _parse_int(s, i + 1)
            atom = atom ** exp
        word = word * atom


def _parse_atom(s: str, i: int) -> tuple[FWord, int]:
    ch = s[i]
    if ch in _CHAR_LETTERS:
        return FWord((_CHAR_LETTERS[ch],)), i + 1
    if ch == "[":
        left, i = _parse_sequence(s, i + 1, stop=",")
        if i >= len(s) or s[i] != ",":
            raise ValueError("expected ',' in commutator")
        right, i = _parse_sequence(s, i + 1, stop="]")
        if i >= len(s) or s[i] != "]":
            raise ValueError("expected ']' closing commutator")
        return commutator(left, right), i + 1
    if ch == "(":
        inner, i = _parse_sequence(s, i + 1, stop=")")
        if i >= len(s) or s[i] != ")":
            raise ValueError("expected ')' closing group")
        return inner, i + 1
    if ch == "1":
        return FWord(), i + 1
    raise ValueError(f"unexpected character {ch!r} at {i}")


def _parse_int(s: str, i: int) -> tuple[int, int]:
    i = _skip_ws(s, i)
    j = i
    if j < len(s) and s[j] in "+-":
        j += 1
    k = j
    while k < len(s) and s[k].isdigit():
        k += 1
    if k == j:
        raise ValueError(f"expected integer at {i}")
    return int(s[i:k]), k


def parse_cox_word(text: str) -> CoxWord:
    """Parse a reflection-group literal over the letters P, Q, R."""
    out: list[int] = []
    for ch in text:
        if ch.isspace():
            continue
        up = ch.upper()
        if up not in _COX_FROM_CHAR:
            raise ValueError(f"invalid reflection letter {ch!r}")
        out.append(_COX_FROM_CHAR[up])
    return CoxWord(out)
