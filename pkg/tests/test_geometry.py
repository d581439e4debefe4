import random

import pytest
from mpmath import mp, mpf, mpc, pi, sqrt, acos, cos, cosh, acosh, asin, exp

from conetorus.words import CoxWord, parse_word
from conetorus.fricke import (
    FrickePoint,
    Mat2,
    coxeter_extension,
    evaluate_word,
    make_cone_angle,
    normal_form,
    solve_z,
)
from conetorus.geometry import (
    INF,
    SideLengths,
    TriangleShape,
    angles_from_side_lengths,
    axis_endpoints,
    dist_to_geodesic,
    endpoints_interleave,
    fixed_point,
    fricke_to_triangle,
    half_translation_length,
    hyp_distance,
    mobius_apply,
    parallel_angle,
    side_lengths_from_angles,
    triangle_to_fricke,
)


def random_shape(rng, prec=256):
    with mp.workprec(prec):
        total = mpf(rng.uniform(0.2, 2.9))
        a = mpf(rng.uniform(0.05, 0.9)) * total
        b = mpf(rng.uniform(0.05, 0.9)) * (total - a)
        c = total - a - b
        if min(a, b, c) < mpf("0.01"):
            return random_shape(rng, prec)
        return TriangleShape(a, b, c, prec)


class TestSideLengths:
    def test_equilateral_quarter_pi(self):
        t = TriangleShape(pi / 4, pi / 4, pi / 4)
        s = side_lengths_from_angles(t)
        with mp.workprec(256):
            assert abs(cosh(s.d_a) - (1 + sqrt(2))) < mpf("1e-70")
        assert abs(s.d_a - s.d_b) < mpf("1e-70")
        assert abs(s.d_a - s.d_c) < mpf("1e-70")

    def test_euclidean_limit(self):
        # angle sum approaching pi shrinks the triangle
        prev = None
        for eps in ("0.1", "0.01", "0.001"):
            with mp.workprec(256):
                third = (pi - mpf(eps)) / 3
            t = TriangleShape(third, third, third)
            d = side_lengths_from_angles(t).d_a
            if prev is not None:
                assert d < prev
            prev = d
        assert prev < mpf("0.05")

    def test_angle_round_trip(self):
        rng = random.Random(0)
        for _ in range(20):
            t = random_shape(rng)
            back = angles_from_side_lengths(side_lengths_from_angles(t))
            assert abs(back.theta_a - t.theta_a) < mpf("1e-20")
            assert abs(back.theta_b - t.theta_b) < mpf("1e-20")
            assert abs(back.theta_c - t.theta_c) < mpf("1e-20")

    def test_invalid_shape_rejected(self):
        with pytest.raises(ValueError):
            TriangleShape(mpf(2), mpf(2), mpf(2))


class TestShapeToTraces:
    def test_equilateral_symmetry(self):
        t = TriangleShape(mpf("0.4"), mpf("0.4"), mpf("0.4"))
        p = triangle_to_fricke(t)
        assert abs(p.x - p.y) < mpf("1e-70")
        assert abs(p.y - p.z) < mpf("1e-70")

    def test_symmetric_value(self):
        with mp.workprec(256):
            ta = acos(mpf(6) / 10)
        t = TriangleShape(ta, ta, ta)
        p = triangle_to_fricke(t)
        assert abs(p.x - mpf("2.2")) < mpf("1e-15")

    def test_constraint_satisfied(self):
        rng = random.Random(1)
        for _ in range(15):
            t = random_shape(rng)
            p = triangle_to_fricke(t)
            assert abs(p.kappa() - p.angle.c) < mpf("1e-20")


class TestTracesToShape:
    def test_symmetric_closed_form(self):
        angle = make_cone_angle(mpf("5.563772090427819611170204974"))
        # kappa(2.2, 2.2, 2.2) = 1.872 exactly; cos(theta/2) = -0.936
        with mp.workprec(256):
            theta = 2 * acos(mpf("-0.936"))
        angle = make_cone_angle(theta)
        p = FrickePoint(mpf("2.2"), mpf("2.2"), mpf("2.2"), angle)
        t = fricke_to_triangle(p)
        with mp.workprec(256):
            expected = acos(mpf(6) / 10)
        assert abs(t.theta_a - expected) < mpf("1e-70")
        assert abs(t.theta_b - expected) < mpf("1e-70")

    def test_round_trip_grid(self):
        # 10x10 grid of shapes
        with mp.workprec(256):
            for i in range(1, 11):
                for j in range(1, 11):
                    a = mpf(i) / 10
                    b = mpf(j) / 13
                    c = mpf("0.2")
                    if a + b + c >= pi:
                        continue
                    t = TriangleShape(a, b, c)
                    back = fricke_to_triangle(triangle_to_fricke(t))
                    assert abs(back.theta_a - a) < mpf("1e-18")
                    assert abs(back.theta_b - b) < mpf("1e-18")
                    assert abs(back.theta_c - c) < mpf("1e-18")

    def test_angle_sum_is_half_cone_angle(self):
        rng = random.Random(2)
        for _ in range(15):
            angle = make_cone_angle(mpf(rng.uniform(0.2, 6.0)))
            pts = solve_z(angle, mpf(rng.uniform(2.05, 5)), mpf(rng.uniform(2.05, 5)))
            for p in pts:
                t = fricke_to_triangle(p)
                assert abs(t.angle_sum() - angle.theta / 2) < mpf("1e-20")


class TestScalars:
    def test_half_translation_length(self):
        assert half_translation_length(2) == 0
        with mp.workprec(256):
            assert abs(half_translation_length(2 * cosh(mpf(1))) - 1) < mpf("1e-70")
            assert abs(half_translation_length(3) - acosh(mpf(3) / 2)) < mpf("1e-70")
        with pytest.raises(ValueError):
            half_translation_length(mpf("1.9"))

    def test_parallel_angle_values(self):
        with mp.workprec(256):
            assert abs(parallel_angle(mpf("1e-30")) - pi / 2) < mpf("1e-25")
            assert abs(parallel_angle(acosh(mpf(2))) - pi / 6) < mpf("1e-70")

    def test_parallel_angle_monotone(self):
        values = [parallel_angle(mpf(h) / 4) for h in range(1, 20)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_parallel_angle_rejects(self):
        with pytest.raises(ValueError):
            parallel_angle(0)


def rotation_about_i(psi):
    return Mat2(cos(psi / 2), mp.sin(psi / 2), -mp.sin(psi / 2), cos(psi / 2))


class TestHalfPlane:
    def test_fixed_point_of_rotation(self):
        z0 = fixed_point(rotation_about_i(pi / 3))
        assert abs(z0 - mpc(0, 1)) < mpf("1e-70")

    def test_fixed_point_equivariance(self):
        with mp.workprec(256):
            g = Mat2(mpf(2), mpf(1), mpf(3), mpf(2))  # det 1
            m = rotation_about_i(mpf("0.8"))
            conj = g * m * g.inverse()
            assert abs(fixed_point(conj) - mobius_apply(g, mpc(0, 1))) < mpf("1e-60")

    def test_fixed_point_rejects_hyperbolic(self):
        with pytest.raises(ValueError):
            fixed_point(Mat2(exp(mpf(1)), mpf(0), mpf(0), exp(mpf(-1))))

    def test_axis_of_diagonal(self):
        ends = axis_endpoints(Mat2(exp(mpf(1)), mpf(0), mpf(0), exp(mpf(-1))))
        assert ends == (0, INF)

    def test_axis_equivariance(self):
        with mp.workprec(256):
            g = Mat2(mpf(1), mpf(2), mpf(1), mpf(3))  # det 1
            m = Mat2(exp(mpf(1)), mpf(0), mpf(0), exp(mpf(-1)))
            conj = g * m * g.inverse()
            rep_end, att_end = axis_endpoints(conj)
            assert abs(att_end - mobius_apply(g, INF)) < mpf("1e-60")
            assert abs(rep_end - mobius_apply(g, mpf(0))) < mpf("1e-60")

    def test_axes_of_generators_cross(self):
        rng = random.Random(3)
        for _ in range(15):
            angle = make_cone_angle(mpf(rng.uniform(0.3, 6.0)))
            pts = solve_z(angle, mpf(rng.uniform(2.05, 5)), mpf(rng.uniform(2.05, 5)))
            if not pts:
                continue
            rep = normal_form(pts[0])
            ax = axis_endpoints(rep.mat_x)
            ay = axis_endpoints(rep.mat_y)
            assert endpoints_interleave(ax, ay)


class TestCenterGeometry:
    def _extended(self, theta, x, y, which=0):
        angle = make_cone_angle(mpf(theta))
        p = solve_z(angle, mpf(x), mpf(y))[which]
        return p, coxeter_extension(normal_form(p))

    def test_center_distances_match_side_lengths(self):
        p, rep = self._extended("1.3", "2.7", "3.4")
        o_a = fixed_point(evaluate_word(rep, CoxWord((2, 1, 3))))
        o_b = fixed_point(evaluate_word(rep, CoxWord((3, 2, 1))))
        o_c = fixed_point(evaluate_word(rep, CoxWord((1, 3, 2))))
        sides = side_lengths_from_angles(fricke_to_triangle(p))
        assert abs(hyp_distance(o_b, o_c) - sides.d_a) < mpf("1e-15")
        assert abs(hyp_distance(o_c, o_a) - sides.d_b) < mpf("1e-15")
        assert abs(hyp_distance(o_a, o_b) - sides.d_c) < mpf("1e-15")

    def test_centers_equidistant_from_x_axis(self):
        p, rep = self._extended("0.9", "3.1", "3.5")
        axis = axis_endpoints(rep.mat_x)
        dists = [
            dist_to_geodesic(fixed_point(evaluate_word(rep, w)), *axis)
            for w in (CoxWord((2, 1, 3)), CoxWord((3, 2, 1)), CoxWord((1, 3, 2)))
        ]
        assert max(dists) - min(dists) < mpf("1e-60")

    def test_rotation_centers_form_cone_triangle(self):
        # interior angles at the centers match the shape correspondence
        p, rep = self._extended("2.1", "2.9", "2.6")
        t = fricke_to_triangle(p)
        o_a = fixed_point(evaluate_word(rep, CoxWord((2, 1, 3))))
        o_b = fixed_point(evaluate_word(rep, CoxWord((3, 2, 1))))
        o_c = fixed_point(evaluate_word(rep, CoxWord((1, 3, 2))))
        ab = hyp_distance(o_a, o_b)
        bc = hyp_distance(o_b, o_c)
        ca = hyp_distance(o_c, o_a)
        with mp.workprec(256):
            cos_at_a = (cosh(ab) * cosh(ca) - cosh(bc)) / (
                mp.sinh(ab) * mp.sinh(ca)
            )
            assert abs(acos(cos_at_a) - t.theta_a) < mpf("1e-20")


class TestTwistInvariants:
    def test_x_curve_preserves_shape_data(self):
        # along {x = const} the cone angle and the opposite side length
        # are constant while the other sides vary
        angle = make_cone_angle(mpf("1.1"))
        s = mpf("3.2")
        d_a_values, d_b_values = [], []
        for free in ("2.8", "3.3", "4.1", "5.6"):
            disc = (s * mpf(free)) ** 2 - 4 * (s * s + mpf(free) ** 2 - 2 - angle.c)
            if disc < 0:
                continue
            z = (s * mpf(free) + sqrt(disc)) / 2
            p = FrickePoint(s, mpf(free), z, angle)
            sides = side_lengths_from_angles(fricke_to_triangle(p))
            d_a_values.append(sides.d_a)
            d_b_values.append(sides.d_b)
        assert len(d_a_values) >= 3
        assert max(d_a_values) - min(d_a_values) < mpf("1e-20")
        assert max(d_b_values) - min(d_b_values) > mpf("0.01")
