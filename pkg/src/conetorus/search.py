"""Location and certification of relation loci on coordinate curves.

For a fixed cone angle, pinning one trace coordinate at s cuts a curve out
of the deformation space.  Torsion loci are values of s where the word
[Z,X]^N [Y,Z]^N maps to an elliptic of prescribed rational rotation order
(its trace is constant along x-curves); non-torsion loci are values where
the palindromic word u_N maps to the identity along the whole curve.
Candidates are located numerically at a canonical transversal point and
then certified by sampling the curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpf, sqrt, cos, sin, pi

from .words import FWord, build_u_n, build_w_n, substitute
from .fricke import (
    DEFAULT_PREC,
    ConeAngle,
    FrickePoint,
    classify,
    decimal_str,
    evaluate_word,
    normal_form,
)
from .geometry import parallel_angle
from .tracepoly import eval_trace

AXES = ("x", "y", "z")

# Generator substitutions whose induced coordinate permutation moves the
# pinned axis into the z slot: sigma with tr rho(sigma(w)) at (x, y, z)
# equal to tr rho'(w) at the permuted point.
_X_IMAGE = {"z": FWord((1,)), "y": FWord((1,)), "x": FWord((2,))}
_Y_IMAGE = {"z": FWord((2,)), "y": FWord((3,)), "x": FWord((3,))}


def axis_word(n: int, coordinate: str) -> FWord:
    """The non-torsion relation word attached to a coordinate axis."""
    if coordinate not in AXES:
        raise ValueError(f"coordinate must be one of {AXES}")
    u = build_u_n(n)
    if coordinate == "z":
        return u
    return substitute(u, _X_IMAGE[coordinate], _Y_IMAGE[coordinate])


def _permute_to_point(coordinate: str, xp, yp, zp) -> tuple:
    """Map a permuted-frame triple (x', y', z'-pinned) back to actual
    coordinates for the given pinned axis."""
    if coordinate == "z":
        return (xp, yp, zp)
    if coordinate == "y":
        # permuted frame is (x, z, y)
        return (xp, zp, yp)
    # coordinate == "x": permuted frame is (y, z, x)
    return (zp, xp, yp)


def curve_point(
    angle: ConeAngle,
    coordinate: str,
    s,
    free,
    prec: Optional[int] = None,
    branch: str = "larger",
) -> FrickePoint:
    """A point on {coordinate = s} with the cyclically-next coordinate at
    the given free value; the remaining one solves the quadratic constraint
    (larger root by default)."""
    if coordinate not in AXES:
        raise ValueError(f"coordinate must be one of {AXES}")
    prec = prec or angle.prec
    with mp.workprec(prec):
        sv, fv = mpf(s), mpf(free)
        if sv <= 2 or fv <= 2:
            raise ValueError("pinned and free values must exceed 2")
        disc = (sv * fv) ** 2 - 4 * (sv * sv + fv * fv - 2 - angle.c)
        if disc < 0:
            raise ValueError("off the curve's footprint: no real solution")
        root = sqrt(disc)
        t = (sv * fv + root) / 2 if branch == "larger" else (sv * fv - root) / 2
        if t <= 2:
            raise ValueError("off the curve's footprint: no admissible root")
        # cyclic order: pin x -> free y, solve z; pin y -> free z, solve x;
        # pin z -> free x, solve y
        if coordinate == "x":
            coords = (sv, fv, t)
        elif coordinate == "y":
            coords = (t, sv, fv)
        else:
            coords = (fv, t, sv)
        return FrickePoint(*coords, angle=angle, prec=prec)


def _symmetric_point(angle: ConeAngle, coordinate: str, s, prec: int) -> FrickePoint:
    """The transversal with the two free coordinates equal; always exists
    for s > 2."""
    with mp.workprec(prec):
        sv = mpf(s)
        w = sqrt((sv * sv - 2 - angle.c) / (sv - 2))
        coords = _permute_to_point(coordinate, w, w, sv)
        return FrickePoint(*coords, angle=angle, prec=prec)


def _free_floor(angle: ConeAngle, s):
    """Smallest permuted-frame free coordinate on the curve {z' = s}."""
    return 2 * sqrt((s * s - 2 - angle.c) / (s * s - 4))


def _curve_samples(
    angle: ConeAngle, coordinate: str, s, k: int, prec: int
) -> list[FrickePoint]:
    """k points spread along the curve: the permuted-frame free coordinate
    runs over floor * 1.5^j, j = 1..k, solving for the last coordinate."""
    with mp.workprec(prec):
        sv = mpf(s)
        floor = _free_floor(angle, sv)
        pts = []
        ratio = mpf("1.5")
        f = floor
        while len(pts) < k:
            f = f * ratio
            disc = (f * sv) ** 2 - 4 * (f * f + sv * sv - 2 - angle.c)
            if disc < 0:
                continue
            other = (f * sv + sqrt(disc)) / 2
            if other <= 2:
                continue
            coords = _permute_to_point(coordinate, f, other, sv)
            pts.append(FrickePoint(*coords, angle=angle, prec=prec))
        return pts


@dataclass(frozen=True)
class GridSpec:
    start: mpf
    stop: mpf
    step: mpf

    def values(self, prec: int):
        with mp.workprec(prec):
            s = mpf(self.start)
            stop, step = mpf(self.stop), mpf(self.step)
            if not (s > 2 and stop > s and step > 0):
                raise ValueError("grid must satisfy 2 < start < stop, step > 0")
            while s < stop:
                yield s
                s = s + step


DEFAULT_GRID = GridSpec(mpf("2.05"), mpf(12), mpf("0.01"))


@dataclass
class LocusResult:
    angle: ConeAngle
    coordinate: str
    s: mpf
    n: int
    word: FWord
    torsion_order: Optional[Fraction] = None
    residuals: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    certified: bool = False
    metadata: dict = field(default_factory=dict)

    def max_residual(self):
        return max(self.residuals) if self.residuals else mpf("inf")

    def to_json(self) -> dict:
        prec = self.angle.prec
        out = {
            "schema": 1,
            "theta": decimal_str(self.angle.theta, prec),
            "coordinate": self.coordinate,
            "s": decimal_str(self.s, prec),
            "N": self.n,
            "word": str(self.word),
            "certified": self.certified,
            "residuals": [decimal_str(r, prec) for r in self.residuals],
            "samples": [
                {"x": decimal_str(p.x, prec), "y": decimal_str(p.y, prec),
                 "z": decimal_str(p.z, prec)}
                for p in self.samples
            ],
            "metadata": {k: str(v) for k, v in self.metadata.items()},
        }
        if self.torsion_order is not None:
            out["torsion_order"] = str(self.torsion_order)
        return out


def _word_residual(word: FWord, point: FrickePoint) -> mpf:
    return evaluate_word(normal_form(point), word).pm_identity_residual()


def certify_locus(result: LocusResult, k: int = 5, tol=mpf("1e-25")) -> LocusResult:
    """Sample k points spread along the pinned curve and record the
    per-sample residuals; the result is certified only if all are below tol.

    For torsion results the residual is the distance of the q-th power from
    +-identity and each sample must classify elliptic of the target order.
    """
    if k < 3:
        raise ValueError("certification needs at least 3 samples")
    prec = result.angle.prec
    with mp.workprec(prec):
        samples = _curve_samples(result.angle, result.coordinate, result.s, k, prec)
        residuals = []
        certified = True
        for p in samples:
            m = evaluate_word(normal_form(p), result.word)
            if result.torsion_order is not None:
                q = result.torsion_order.denominator
                residuals.append(m.power(q).pm_identity_residual())
                cls = classify(m, tol=mpf("1e-10"), prec=prec)
                target = 2 * pi * result.torsion_order.numerator / q
                if cls.kind != "elliptic" or min(
                    abs(cls.rotation_angle - target),
                    abs(cls.rotation_angle - (2 * pi - target)),
                ) > mpf("1e-10"):
                    certified = False
            else:
                residuals.append(m.pm_identity_residual())
        if any(r >= tol for r in residuals):
            certified = False
        result.residuals = residuals
        result.samples = samples
        result.certified = certified
        return result


# ---------------------------------------------------------------------------
# Non-torsion loci: tangential minima of the identity residual
# ---------------------------------------------------------------------------


def _golden_minimize(f, a, b, tol):
    """Golden-section minimum of a unimodal f on [a, b] to width tol."""
    gr = (sqrt(mpf(5)) - 1) / 2
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    return (a + b) / 2


def find_nontorsion_locus(
    angle: ConeAngle,
    n_range,
    coordinate: str = "z",
    grid: GridSpec = DEFAULT_GRID,
    prec: Optional[int] = None,
    bisect_tol=mpf("1e-30"),
    certify_samples: int = 5,
    certify_tol=mpf("1e-25"),
) -> list[LocusResult]:
    """Certified values of s where the axis word of index N kills the whole
    curve {coordinate = s}.

    The word image along the curve family is trivial-or-hyperbolic, so its
    trace touches +-2 tangentially at a locus instead of crossing; the scan
    therefore locates local minima of the +-identity residual at the
    symmetric transversal and refines them by golden section before
    certifying.  Only certified loci are returned.
    """
    if coordinate not in AXES:
        raise ValueError(f"coordinate must be one of {AXES}")
    ns = list(n_range)
    if not ns:
        raise ValueError("empty N range")
    prec = prec or angle.prec
    results: list[LocusResult] = []
    with mp.workprec(prec):
        grid_values = list(grid.values(prec))
        if not grid_values:
            raise ValueError("empty grid")
        for n in ns:
            word = axis_word(n, coordinate)

            def residual_at(s):
                p = _symmetric_point(angle, coordinate, s, prec)
                return _word_residual(word, p)

            values = [residual_at(s) for s in grid_values]
            for i in range(1, len(values) - 1):
                if not (values[i] <= values[i - 1] and values[i] <= values[i + 1]):
                    continue
                a, b = grid_values[i - 1], grid_values[i + 1]
                # cheap refinement first; true loci collapse linearly
                s_mid = _golden_minimize(residual_at, a, b, mpf("1e-12"))
                if residual_at(s_mid) > mpf("1e-3"):
                    continue
                s_star = _golden_minimize(
                    residual_at, s_mid - mpf("1e-10"), s_mid + mpf("1e-10"),
                    min(bisect_tol, mpf("1e-38")),
                )
                result = LocusResult(
                    angle=angle,
                    coordinate=coordinate,
                    s=s_star,
                    n=n,
                    word=word,
                    metadata={
                        "transversal": "symmetric",
                        "transversal_residual": decimal_str(residual_at(s_star), 64),
                        "theta_multiple_mod_2pi": decimal_str(
                            (n * angle.theta) % (2 * pi), 64
                        ),
                    },
                )
                result = certify_locus(result, k=certify_samples, tol=certify_tol)
                if result.certified:
                    results.append(result)
    results.sort(key=lambda r: (r.n, r.s))
    return results


# ---------------------------------------------------------------------------
# Torsion loci: transversal root-finding on the trace
# ---------------------------------------------------------------------------


def _torsion_trace(angle: ConeAngle, coordinate: str, word: FWord, s, prec: int):
    p = _symmetric_point(angle, coordinate, s, prec)
    return eval_trace(word, p.x, p.y, p.z, prec=prec)


def torsion_word_for_axis(n: int, coordinate: str) -> FWord:
    """The torsion relation word attached to a coordinate axis; its trace
    is constant along {coordinate = s}."""
    if coordinate not in AXES:
        raise ValueError(f"coordinate must be one of {AXES}")
    w = build_w_n(n)
    if coordinate == "x":
        return w
    # move the pinned axis into the x slot of the permuted frame:
    # X -> Y, Y -> Z permutes traces to (y, z, x); X -> Z, Y -> X to (z, x, y)
    if coordinate == "y":
        return substitute(w, FWord((2,)), FWord((3,)))
    return substitute(w, FWord((3,)), FWord((1,)))


def apex_trace_oracle(angle: ConeAngle, n: int, s, prec: int = DEFAULT_PREC):
    """|trace| of the torsion word from the isosceles-triangle law of
    cosines: 2 |cos(apex)| with cos(apex) = -cos^2 a + sin^2 a cosh(dA),
    a = n*theta/2 and cosh(dA/2) = s / (2 sin(theta/4))."""
    with mp.workprec(prec):
        a = (n * angle.theta / 2) % (2 * pi)
        chd2 = mpf(s) / (2 * sin(angle.theta / 4))
        chd = 2 * chd2 ** 2 - 1
        return 2 * abs(-cos(a) ** 2 + sin(a) ** 2 * chd)


def find_torsion_locus(
    angle: ConeAngle,
    n: int,
    order: Fraction,
    coordinate: str = "x",
    grid: GridSpec = DEFAULT_GRID,
    prec: Optional[int] = None,
    bisect_tol=mpf("1e-30"),
    certify_samples: int = 5,
    certify_tol=mpf("1e-20"),
) -> list[LocusResult]:
    """Certified values of s where the torsion word becomes elliptic of
    rotation angle 2*pi*order, so its q-th power is a relation.

    Both trace targets +-2 cos(pi p/q) are bracketed independently over the
    grid and bisected; certification checks the q-th power against
    +-identity and the elliptic class at sampled curve points, and records
    the apex-angle oracle agreement.
    """
    if order.denominator < 2:
        raise ValueError("torsion order must have denominator >= 2")
    if coordinate not in AXES:
        raise ValueError(f"coordinate must be one of {AXES}")
    prec = prec or angle.prec
    word = torsion_word_for_axis(n, coordinate)
    results: list[LocusResult] = []
    with mp.workprec(prec):
        p_, q_ = order.numerator, order.denominator
        base_target = 2 * cos(pi * p_ / q_)
        targets = sorted({base_target, -base_target}, reverse=True)
        grid_values = list(grid.values(prec))
        if not grid_values:
            raise ValueError("empty grid")
        traces = [
            _torsion_trace(angle, coordinate, word, s, prec) for s in grid_values
        ]
        for target in targets:
            for i in range(len(grid_values) - 1):
                f0, f1 = traces[i] - target, traces[i + 1] - target
                if f0 == 0:
                    f0 = mpf("1e-60")
                if f0 * f1 >= 0:
                    continue
                a, b = grid_values[i], grid_values[i + 1]
                fa = f0
                while b - a > bisect_tol:
                    m_ = (a + b) / 2
                    fm = _torsion_trace(angle, coordinate, word, m_, prec) - target
                    if fa * fm <= 0:
                        b = m_
                    else:
                        a, fa = m_, fm
                s_star = (a + b) / 2
                oracle = apex_trace_oracle(angle, n, s_star, prec)
                trace_val = _torsion_trace(angle, coordinate, word, s_star, prec)
                a_raw = (n * angle.theta / 2) % (2 * pi)
                line_angle = min(a_raw % pi, pi - (a_raw % pi))
                chd2 = mpf(s_star) / (2 * sin(angle.theta / 4))
                alpha = parallel_angle(mp.acosh(chd2), prec)
                result = LocusResult(
                    angle=angle,
                    coordinate=coordinate,
                    s=s_star,
                    n=n,
                    word=word,
                    torsion_order=order,
                    metadata={
                        "trace_target": decimal_str(target, 64),
                        "apex_oracle_delta": decimal_str(
                            abs(abs(trace_val) - oracle), 64
                        ),
                        "rotation_half_angle_mod_2pi": decimal_str(a_raw, 64),
                        "parallel_angle": decimal_str(alpha, 64),
                        "line_angle_below_parallel": str(line_angle < alpha),
                    },
                )
                result = certify_locus(result, k=certify_samples, tol=certify_tol)
                if result.certified:
                    results.append(result)
    results.sort(key=lambda r: (r.n, r.s))
    return results


def double_point(
    angle: ConeAngle, locus1: LocusResult, locus2: LocusResult, tol=mpf("1e-25")
) -> tuple[FrickePoint, mpf, mpf]:
    """The intersection point of two loci pinning different coordinates,
    with both relation words re-certified there.

    Returns (point, residual of locus1's word, residual of locus2's word);
    raises if the pinned curves do not meet inside the space or a residual
    exceeds tol.
    """
    if locus1.coordinate == locus2.coordinate:
        raise ValueError("loci must pin different coordinates")
    prec = angle.prec
    with mp.workprec(prec):
        pinned = {locus1.coordinate: mpf(locus1.s), locus2.coordinate: mpf(locus2.s)}
        missing = next(c for c in AXES if c not in pinned)
        # kappa = c is quadratic in the missing coordinate
        others = [pinned[c] for c in AXES if c != missing]
        u, v = others
        disc = (u * v) ** 2 - 4 * (u * u + v * v - 2 - angle.c)
        if disc < 0:
            raise ValueError("loci do not intersect inside the space")
        t = (u * v + sqrt(disc)) / 2
        if t <= 2:
            raise ValueError("loci do not intersect inside the space")
        coords = {missing: t, **pinned}
        point = FrickePoint(coords["x"], coords["y"], coords["z"], angle, prec)
        r1 = _certify_word_at(locus1, point)
        r2 = _certify_word_at(locus2, point)
        if r1 >= tol or r2 >= tol:
            raise ValueError(
                "intersection failed certification: residuals "
                f"{decimal_str(r1, 32)}, {decimal_str(r2, 32)}"
            )
        return point, r1, r2


def _certify_word_at(locus: LocusResult, point: FrickePoint):
    m = evaluate_word(normal_form(point), locus.word)
    if locus.torsion_order is not None:
        return m.power(locus.torsion_order.denominator).pm_identity_residual()
    return m.pm_identity_residual()
