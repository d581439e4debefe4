"""Triangle shapes, hyperbolic trigonometry, and half-plane diagnostics.

The shape correspondence: a triangle with angles (tA, tB, tC) and angle sum
theta/2 maps to the trace point via the tri-rectangle relation
x = 2 cosh(dA/2) sin(theta/4), where dA is the side opposite tA; the
inverse recovers the angles from (x, y, z) by a closed formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from mpmath import mp, mpf, mpc, sqrt, cos, sin, acos, asin, cosh, sinh, acosh, atan2

from .fricke import DEFAULT_PREC, ConeAngle, FrickePoint, Mat2, make_cone_angle


@dataclass(frozen=True)
class TriangleShape:
    theta_a: mpf
    theta_b: mpf
    theta_c: mpf
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        with mp.workprec(self.prec):
            angles = (self.theta_a, self.theta_b, self.theta_c)
            if not all(0 < t < mp.pi for t in angles):
                raise ValueError("angles must lie in (0, pi)")
            if not (0 < sum(angles) < mp.pi):
                raise ValueError("angle sum must lie in (0, pi)")

    def angle_sum(self):
        return self.theta_a + self.theta_b + self.theta_c

    def area(self):
        return mp.pi - self.angle_sum()

    def cone_angle(self) -> ConeAngle:
        """The paired cone angle: theta = 2 * angle sum."""
        with mp.workprec(self.prec):
            return make_cone_angle(2 * self.angle_sum(), self.prec)


@dataclass(frozen=True)
class SideLengths:
    d_a: mpf
    d_b: mpf
    d_c: mpf
    prec: int = DEFAULT_PREC


def side_lengths_from_angles(t: TriangleShape) -> SideLengths:
    """Dual law of cosines: cosh dA = (cos tB cos tC + cos tA)/(sin tB sin tC)."""
    with mp.workprec(t.prec):
        ca, cb, cc = cos(t.theta_a), cos(t.theta_b), cos(t.theta_c)
        sa, sb, sc = sin(t.theta_a), sin(t.theta_b), sin(t.theta_c)
        return SideLengths(
            acosh((cb * cc + ca) / (sb * sc)),
            acosh((cc * ca + cb) / (sc * sa)),
            acosh((ca * cb + cc) / (sa * sb)),
            t.prec,
        )


def angles_from_side_lengths(s: SideLengths) -> TriangleShape:
    """Hyperbolic law of cosines, inverse direction."""
    with mp.workprec(s.prec):
        cha, chb, chc = cosh(s.d_a), cosh(s.d_b), cosh(s.d_c)
        sha, shb, shc = sinh(s.d_a), sinh(s.d_b), sinh(s.d_c)
        return TriangleShape(
            acos((chb * chc - cha) / (shb * shc)),
            acos((chc * cha - chb) / (shc * sha)),
            acos((cha * chb - chc) / (sha * shb)),
            s.prec,
        )


def triangle_to_fricke(t: TriangleShape) -> FrickePoint:
    """The shape-to-traces map: x = 2 cosh(dA/2) sin(theta/4), cyclically."""
    with mp.workprec(t.prec):
        angle = t.cone_angle()
        sides = side_lengths_from_angles(t)
        s4 = sin(angle.theta / 4)
        x = 2 * cosh(sides.d_a / 2) * s4
        y = 2 * cosh(sides.d_b / 2) * s4
        z = 2 * cosh(sides.d_c / 2) * s4
        return FrickePoint(x, y, z, angle, t.prec)


def _angle_from_traces(u, v, w):
    """cos of the angle opposite the u-coordinate, by the closed formula."""
    num = v * w * (u * u + 2) - (v * v + w * w) * u - u ** 3
    r1 = u * v * w - u * u - v * v
    r2 = u * v * w - u * u - w * w
    if r1 <= 0 or r2 <= 0:
        raise ValueError("outside geometric locus: nonpositive radicand")
    return num / (2 * sqrt(r1 * r2))


def fricke_to_triangle(p: FrickePoint) -> TriangleShape:
    """Inverse of triangle_to_fricke; angle sum equals half the cone angle."""
    with mp.workprec(p.prec):
        x, y, z = p.coords()
        return TriangleShape(
            acos(_angle_from_traces(x, y, z)),
            acos(_angle_from_traces(y, z, x)),
            acos(_angle_from_traces(z, x, y)),
            p.prec,
        )


def half_translation_length(x, prec: int = DEFAULT_PREC):
    """h with 2 cosh h = x, the half translation length of a trace-x isometry."""
    with mp.workprec(prec):
        xv = mpf(x)
        if xv < 2:
            raise ValueError("trace must be at least 2")
        return acosh(xv / 2)


def parallel_angle(h, prec: int = DEFAULT_PREC):
    """Angle of parallelism at distance h: sin(alpha) = 1/cosh(h)."""
    with mp.workprec(prec):
        hv = mpf(h)
        if hv <= 0:
            raise ValueError("distance must be positive")
        return asin(1 / cosh(hv))


# ---------------------------------------------------------------------------
# Upper half-plane diagnostics
# ---------------------------------------------------------------------------

INF = mpf("inf")
Boundary = Union[mpf, float]


def fixed_point(m: Mat2, prec: int = DEFAULT_PREC) -> mpc:
    """The upper-half-plane fixed point of an elliptic matrix."""
    with mp.workprec(prec):
        tr = m.trace()
        if abs(tr) >= 2:
            raise ValueError("matrix is not elliptic")
        if abs(m.c) < mpf(2) ** (-prec // 2):
            # conjugate off the degenerate chart, pull the point back
            g = Mat2(mpf(1), mpf(0), mpf(1), mpf(1))
            w = fixed_point(g * m * g.inverse(), prec)
            return mobius_apply(g.inverse(), w)
        re = (m.a - m.d) / (2 * m.c)
        im = sqrt(4 - tr * tr) / (2 * abs(m.c))
        return mpc(re, im)


def axis_endpoints(m: Mat2, prec: int = DEFAULT_PREC) -> tuple[Boundary, Boundary]:
    """Boundary fixed points (repelling, attracting) of a hyperbolic matrix."""
    with mp.workprec(prec):
        tr = m.trace()
        if abs(tr) <= 2:
            raise ValueError("matrix is not hyperbolic")
        if abs(m.c) < mpf(2) ** (-prec // 2):
            # fixed points are infinity and b/(d - a)
            finite = m.b / (m.d - m.a)
            # attracting iff |a| > |d| at infinity
            return (finite, INF) if abs(m.a) > abs(m.d) else (INF, finite)
        root = sqrt(tr * tr - 4)
        t1 = (m.a - m.d - root) / (2 * m.c)
        t2 = (m.a - m.d + root) / (2 * m.c)
        # attracting endpoint has |derivative| < 1: |c t + d|^2 > 1
        if abs(m.c * t1 + m.d) > 1:
            return (t2, t1)
        return (t1, t2)


def mobius_apply(m: Mat2, w):
    if w == INF:
        return m.a / m.c if m.c != 0 else INF
    denom = m.c * w + m.d
    if denom == 0:
        return INF
    return (m.a * w + m.b) / denom


def hyp_distance(z1: mpc, z2: mpc, prec: int = DEFAULT_PREC):
    with mp.workprec(prec):
        d2 = abs(z1 - z2) ** 2 / (2 * z1.imag * z2.imag)
        return acosh(1 + d2)


def dist_to_geodesic(z: mpc, t1: Boundary, t2: Boundary, prec: int = DEFAULT_PREC):
    """Distance from z to the geodesic with boundary endpoints t1, t2."""
    with mp.workprec(prec):
        if t1 == INF or t2 == INF:
            t = t2 if t1 == INF else t1
            return mp.asinh(abs(z.real - t) / z.imag)
        co = abs(z - t1) * abs(z - t2) / (abs(t1 - t2) * z.imag)
        return acosh(co)


def endpoints_interleave(p: tuple[Boundary, Boundary], q: tuple[Boundary, Boundary]) -> bool:
    """Whether the two endpoint pairs separate each other on the boundary
    circle, i.e. whether the axes cross."""

    def angle(t):
        if t == INF:
            return mp.pi
        return 2 * atan2(mpf(t), mpf(1))

    a1, a2 = sorted((angle(p[0]), angle(p[1])))
    inside = 0
    for t in q:
        inside += 1 if a1 < angle(t) < a2 else 0
    return inside == 1
