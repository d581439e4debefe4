"""Trace coordinates for hyperbolic cone tori and their holonomy matrices.

A structure with cone angle theta is a point (x, y, z) in (2, oo)^3 with
kappa(x, y, z) = -2 cos(theta/2).  The normal form realizes such a point by
explicit unimodular matrices; the extension adds the three involutions
P, Q, R with QR = X, RP = Y, PQ = (XY)^-1 up to sign.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from mpmath import mp, mpf, mpc, sqrt, cos, atan2

from .words import FWord, CoxWord
from . import words as W

DEFAULT_PREC = 256
# Tolerances quoted at the default 256-bit precision; at other precisions
# the decimal exponent scales proportionally.
IDENTITY_TOL = mpf("1e-30")
VALIDITY_TOL = mpf("1e-25")


def identity_tol(prec: int = DEFAULT_PREC):
    return mpf(10) ** (-30 * prec / 256)


def validity_tol(prec: int = DEFAULT_PREC):
    return mpf(10) ** (-25 * prec / 256)


def decimal_str(v, prec: int = DEFAULT_PREC) -> str:
    """Full-precision decimal rendering of an mpmath number."""
    with mp.workprec(prec):
        digits = int(prec * 0.30103) + 2
        return mp.nstr(v, digits, strip_zeros=True)


class Mat2:
    """A 2x2 matrix at working precision; real entries, or complex for the
    published-table verifier."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(mpf(1), mpf(0), mpf(0), mpf(1))

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        # valid for determinant-one matrices
        return Mat2(self.d, -self.b, -self.c, self.a)

    def scale(self, s) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def max_dist(self, o: "Mat2"):
        return max(abs(p - q) for p, q in zip(self.entries(), o.entries()))

    def pm_identity_residual(self):
        """min over sign of the max-entry distance to +-identity."""
        i = Mat2.identity()
        return min(self.max_dist(i), (-self).max_dist(i))

    def power(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse().power(-n)
        out, base = Mat2.identity(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        return f"Mat2([{self.a}, {self.b}; {self.c}, {self.d}])"


@dataclass(frozen=True)
class ConeAngle:
    theta: mpf
    c: mpf
    prec: int = DEFAULT_PREC


def make_cone_angle(theta, prec: int = DEFAULT_PREC) -> ConeAngle:
    with mp.workprec(prec):
        t = mpf(theta)
        if not (0 < t < 2 * mp.pi):
            raise ValueError("cone angle must lie strictly between 0 and 2*pi")
        return ConeAngle(t, -2 * cos(t / 2), prec)


def kappa_at(x, y, z):
    return x * x + y * y + z * z - x * y * z - 2


@dataclass(frozen=True)
class FrickePoint:
    x: mpf
    y: mpf
    z: mpf
    angle: ConeAngle
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        with mp.workprec(self.prec):
            if not (self.x > 2 and self.y > 2 and self.z > 2):
                raise ValueError("coordinates must all exceed 2")
            if abs(self.kappa() - self.angle.c) >= validity_tol(self.prec):
                raise ValueError(
                    "point violates the cone-angle constraint: "
                    f"kappa residual {decimal_str(self.kappa() - self.angle.c, 64)}"
                )

    def kappa(self):
        with mp.workprec(self.prec):
            return kappa_at(self.x, self.y, self.z)

    def coords(self):
        return (self.x, self.y, self.z)


def point_to_json(p: FrickePoint) -> dict:
    return {
        "schema": 1,
        "theta": decimal_str(p.angle.theta, p.prec),
        "x": decimal_str(p.x, p.prec),
        "y": decimal_str(p.y, p.prec),
        "z": decimal_str(p.z, p.prec),
        "precision_bits": p.prec,
    }


def point_from_json(d: dict) -> FrickePoint:
    prec = int(d.get("precision_bits", DEFAULT_PREC))
    angle = make_cone_angle(mpf(d["theta"]), prec)
    with mp.workprec(prec):
        return FrickePoint(mpf(d["x"]), mpf(d["y"]), mpf(d["z"]), angle, prec)


def solve_z(angle: ConeAngle, x, y, prec: Optional[int] = None) -> list[FrickePoint]:
    """Admissible third coordinates over (x, y): roots > 2 of
    z^2 - xyz + (x^2 + y^2 - 2 - c) = 0, ascending."""
    prec = prec or angle.prec
    with mp.workprec(prec):
        xv, yv = mpf(x), mpf(y)
        if not (xv > 2 and yv > 2):
            raise ValueError("x and y must exceed 2")
        disc = (xv * yv) ** 2 - 4 * (xv * xv + yv * yv - 2 - angle.c)
        if disc < 0:
            return []
        root = sqrt(disc)
        out = []
        for z in ((xv * yv - root) / 2, (xv * yv + root) / 2):
            if z > 2:
                out.append(FrickePoint(xv, yv, z, angle, prec))
        return out


@dataclass(frozen=True)
class Representation:
    """Matrices realizing a point, optionally extended by the involutions."""

    point: FrickePoint
    mat_x: Mat2
    mat_y: Mat2
    mat_p: Optional[Mat2] = None
    mat_q: Optional[Mat2] = None
    mat_r: Optional[Mat2] = None

    @property
    def prec(self) -> int:
        return self.point.prec

    def has_extension(self) -> bool:
        return self.mat_r is not None


def normal_form(point: FrickePoint) -> Representation:
    """The representative with X = [[x, -1], [1, 0]] and
    Y = [[0, 1/zeta], [-zeta, y]], zeta + 1/zeta = z, zeta >= 1."""
    with mp.workprec(point.prec):
        x, y, z = point.coords()
        zeta = (z + sqrt(z * z - 4)) / 2
        mat_x = Mat2(x, mpf(-1), mpf(1), mpf(0))
        mat_y = Mat2(mpf(0), 1 / zeta, -zeta, y)
        return Representation(point, mat_x, mat_y)


def coxeter_extension(rep: Representation) -> Representation:
    """Fill in the involution matrices; R = (XY - YX)/sqrt(2 - kappa),
    Q = X*R, P = R*Y, so that QR, RP, PQ reproduce X, Y, (XY)^-1 up to sign."""
    with mp.workprec(rep.prec):
        k = rep.point.kappa()
        if k >= 2:
            raise ValueError("reducible locus: kappa >= 2")
        x_, y_ = rep.mat_x, rep.mat_y
        xy, yx = x_ * y_, y_ * x_
        denom = sqrt(2 - k)
        mat_r = Mat2(
            (xy.a - yx.a) / denom,
            (xy.b - yx.b) / denom,
            (xy.c - yx.c) / denom,
            (xy.d - yx.d) / denom,
        )
        mat_q = x_ * mat_r
        mat_p = mat_r * y_
        tol = _tol_for(rep.prec)
        neg_id = -Mat2.identity()
        for name, m in (("P", mat_p), ("Q", mat_q), ("R", mat_r)):
            if abs(m.trace()) >= tol or abs(m.det() - 1) >= tol:
                raise ArithmeticError(f"involution {name} failed consistency")
            if (m * m).max_dist(neg_id) >= tol:
                raise ArithmeticError(f"{name}^2 is not -identity")
        checks = (
            (mat_q * mat_r, x_),
            (mat_r * mat_p, y_),
            (mat_p * mat_q, xy.inverse()),
        )
        for prod, target in checks:
            if min(prod.max_dist(target), (-prod).max_dist(target)) >= tol:
                raise ArithmeticError("extension does not restrict to the surface group")
        return replace(rep, mat_p=mat_p, mat_q=mat_q, mat_r=mat_r)


def _tol_for(prec: int):
    # comfortably above arithmetic noise, far below geometric scales
    return mpf(2) ** (-(prec // 2))


def evaluate_word(rep: Representation, w: Union[FWord, CoxWord]) -> Mat2:
    """Product of the generator images along w."""
    with mp.workprec(rep.prec):
        if isinstance(w, CoxWord):
            if not rep.has_extension():
                raise ValueError("reflection letters need the extension; "
                                 "apply coxeter_extension first")
            gens = {W.P: rep.mat_p, W.Q: rep.mat_q, W.R: rep.mat_r}
            out = Mat2.identity()
            for let in w.letters:
                out = out * gens[let]
            return out
        gens = {
            1: rep.mat_x,
            -1: rep.mat_x.inverse(),
            2: rep.mat_y,
            -2: rep.mat_y.inverse(),
        }
        out = Mat2.identity()
        for let in w.letters:
            out = out * gens[let]
        return out


@dataclass(frozen=True)
class IsometryClass:
    kind: str  # "identity" | "elliptic" | "parabolic" | "hyperbolic"
    rotation_angle: Optional[mpf] = None
    translation_length: Optional[mpf] = None


def classify(m: Mat2, tol=mpf("1e-20"), prec: int = DEFAULT_PREC) -> IsometryClass:
    """Isometry type of a unimodular matrix acting on the upper half plane.

    Elliptic rotation angles are oriented counterclockwise and lie in
    (0, 2*pi); they are extracted from the derivative at the fixed point,
    so the answer is well defined up to the overall matrix sign.
    """
    with mp.workprec(prec):
        if abs(m.det() - 1) >= mpf("1e-6"):
            raise ValueError("matrix is not unimodular")
        if m.pm_identity_residual() < tol:
            return IsometryClass("identity")
        tr = m.trace()
        if abs(abs(tr) - 2) < tol:
            return IsometryClass("parabolic")
        if abs(tr) > 2:
            return IsometryClass(
                "hyperbolic", translation_length=2 * mp.acosh(abs(tr) / 2)
            )
        return IsometryClass("elliptic", rotation_angle=_rotation_angle(m))


def _rotation_angle(m: Mat2):
    shear = Mat2(mpf(1), mpf(0), mpf(1), mpf(1))
    for _ in range(3):
        if abs(m.c) >= mpf(2) ** (-mp.prec // 2):
            break
        # conjugate to move the fixed point off the imaginary axis
        m = shear * m * shear.inverse()
    a, b, c, d = m.entries()
    tr = a + d
    z0 = mpc((a - d) / (2 * c), sqrt(4 - tr * tr) / (2 * abs(c)))
    mu = c * z0 + d
    # derivative of the action at the fixed point is mu^-2 = e^{i psi}
    psi = -2 * atan2(mu.imag, mu.real)
    return psi % (2 * mp.pi)


# ---------------------------------------------------------------------------
# Exhaustive short-word relation scan
# ---------------------------------------------------------------------------


def _canonical_class(letters: tuple[int, ...]) -> tuple[int, ...]:
    best = None
    for seq in (letters, tuple(-l for l in reversed(letters))):
        for i in range(len(seq)):
            rot = seq[i:] + seq[:i]
            if best is None or rot < best:
                best = rot
    return best


def class_representatives(max_len: int):
    """Cyclically reduced representatives, one per rotation/inversion class,
    of each length 1..max_len."""
    reps: list[FWord] = []
    frontier: list[tuple[int, ...]] = [()]
    for length in range(1, max_len + 1):
        nxt: list[tuple[int, ...]] = []
        for stem in frontier:
            for let in (1, -1, 2, -2):
                if stem and stem[-1] == -let:
                    continue
                nxt.append(stem + (let,))
        frontier = nxt
        for lets in frontier:
            if len(lets) >= 2 and lets[0] == -lets[-1]:
                continue  # not cyclically reduced
            if _canonical_class(lets) == lets:
                reps.append(FWord(lets))
    return reps


def short_relation_scan(rep: Representation, max_len: int, tol=IDENTITY_TOL):
    """All short words (one per conjugacy/inversion class) whose image is
    within tol of +-identity, with their residuals."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    with mp.workprec(rep.prec):
        hits: list[tuple[FWord, mpf]] = []
        for w in class_representatives(max_len):
            resid = evaluate_word(rep, w).pm_identity_residual()
            if resid < tol:
                hits.append((w, resid))
        return hits
