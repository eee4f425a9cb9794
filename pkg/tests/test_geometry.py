"""Moebius algebra, Cayley transform, hyperbolic metric, winding numbers."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiconj import (
    INFINITY,
    AmbiguousWindingError,
    DomainError,
    HyperbolicDisk,
    InvalidMapError,
    MoebiusMap,
    cayley,
    disk_dist,
    disk_to_halfplane,
    halfplane_to_disk,
    hyp_dist,
    is_infinity,
    winding_number,
)

halfplane_points = st.builds(
    complex,
    st.floats(-3.0, 3.0),
    st.floats(0.05, 3.0),
)

nonzero = st.floats(-2.0, 2.0).filter(lambda x: abs(x) > 0.05)


def moebius_strategy():
    # compose translations, dilations and the inversion: never degenerate
    prim = st.one_of(
        st.builds(lambda b: MoebiusMap.translation(b), st.floats(-2, 2)),
        st.builds(lambda a: MoebiusMap.dilation(abs(a) + 0.1), st.floats(0, 3)),
        st.just(MoebiusMap(0.0, -1.0, 1.0, 0.0)),
    )
    return st.lists(prim, min_size=1, max_size=4).map(
        lambda ms: ms[0] if len(ms) == 1 else _compose_all(ms)
    )


def _compose_all(ms):
    out = ms[0]
    for m in ms[1:]:
        out = out.compose(m)
    return out


class TestMoebius:
    def test_identity_apply(self):
        m = MoebiusMap.identity()
        assert m(2 + 3j) == 2 + 3j

    def test_orbit_renormalizer(self):
        gamma = MoebiusMap.orbit_renormalizer(0.0, 3.0)
        assert abs(gamma(3j) - 1j) < 1e-15

    def test_cayley_map_sends_i_to_zero(self):
        m = MoebiusMap(1.0, -1j, 1.0, 1j)  # (z - i)/(z + i)
        assert abs(m(1j)) < 1e-15

    def test_pole_goes_to_infinity(self):
        m = MoebiusMap(1.0, 0.0, 1.0, -1.0)  # z/(z-1)
        assert is_infinity(m(1.0))
        assert m.apply(INFINITY) == pytest.approx(1.0)

    def test_compose_translations_gives_identity(self):
        m = MoebiusMap.translation(1.0).compose(MoebiusMap.translation(-1.0))
        assert m.is_identity()

    def test_invert_dilation(self):
        inv = MoebiusMap.dilation(2.0).inverse()
        assert abs(inv(2.0) - 1.0) < 1e-15

    def test_renormalizer_transition(self):
        # gamma_n o gamma_{n+1}^{-1} for x=0, y=1 then y=2 is z -> 2z
        g_n = MoebiusMap.orbit_renormalizer(0.0, 1.0)
        g_n1 = MoebiusMap.orbit_renormalizer(0.0, 2.0)
        t = g_n.compose(g_n1.inverse())
        a, b = t.affine_coefficients()
        assert abs(a - 2.0) < 1e-15 and abs(b) < 1e-15

    def test_degenerate_raises(self):
        with pytest.raises(InvalidMapError):
            MoebiusMap(1.0, 2.0, 2.0, 4.0)

    def test_degenerate_compose_raises(self):
        # each factor is valid (det 1e-7) but the product determinant
        # collapses below the threshold
        m1 = MoebiusMap(1.0, 0.0, 0.0, 1e-7)
        with pytest.raises(InvalidMapError):
            m1.compose(m1)

    def test_classify(self):
        assert MoebiusMap.dilation(2.0).classify() == "hyperbolic"
        assert MoebiusMap.translation(1.0).classify() == "parabolic"
        c, s = math.cos(0.3), math.sin(0.3)
        assert MoebiusMap(c, -s, s, c).classify() == "elliptic"
        assert MoebiusMap.identity().classify() == "identity"
        assert MoebiusMap.affine(2j, 0.0).classify() == "loxodromic"

    def test_halfplane_automorphism_detection(self):
        assert MoebiusMap.affine(2.0, 1.0).is_halfplane_automorphism()
        assert MoebiusMap(0.0, -1.0, 1.0, 0.0).is_halfplane_automorphism()
        assert not MoebiusMap.affine(1.0, 1j).is_halfplane_automorphism()

    @settings(deadline=None)
    @given(moebius_strategy(), moebius_strategy(), halfplane_points)
    def test_compose_matches_apply(self, m1, m2, z):
        lhs = m1.compose(m2).apply(z)
        rhs = m1.apply(m2.apply(z))
        if is_infinity(lhs) or is_infinity(rhs):
            return
        assert abs(lhs - rhs) < 1e-9 * (1 + abs(lhs))

    @settings(deadline=None)
    @given(moebius_strategy(), moebius_strategy(), moebius_strategy(), halfplane_points)
    def test_compose_associative(self, m1, m2, m3, z):
        lhs = m1.compose(m2).compose(m3).apply(z)
        rhs = m1.compose(m2.compose(m3)).apply(z)
        if is_infinity(lhs) or is_infinity(rhs):
            return
        assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))


class TestCayley:
    def test_center_to_center(self):
        assert abs(halfplane_to_disk(1j)) < 1e-15
        assert abs(disk_to_halfplane(0.0) - 1j) < 1e-15

    def test_infinity_to_one(self):
        assert halfplane_to_disk(INFINITY) == 1.0
        assert is_infinity(disk_to_halfplane(1.0))

    def test_direction_api(self):
        assert abs(cayley(1j, "halfplane-to-disk")) < 1e-15
        with pytest.raises(ValueError):
            cayley(1j, "sideways")

    @settings(deadline=None)
    @given(halfplane_points)
    def test_round_trip(self, z):
        w = halfplane_to_disk(z)
        back = disk_to_halfplane(w)
        assert abs(back - z) < 1e-14 * (1 + abs(z) ** 2)


class TestHyperbolicDistance:
    def test_zero_at_equal_points(self):
        assert hyp_dist(1j, 1j) == 0.0

    def test_vertical_doubling_is_log_two(self):
        assert hyp_dist(1j, 2j) == pytest.approx(math.log(2.0), abs=1e-14)

    def test_horizontal_unit(self):
        assert hyp_dist(1j, 1 + 1j) == pytest.approx(math.acosh(1.5), abs=1e-14)

    def test_rejects_boundary(self):
        with pytest.raises(DomainError):
            hyp_dist(1.0, 1j)

    @settings(deadline=None)
    @given(halfplane_points, halfplane_points)
    def test_symmetry(self, z, w):
        assert hyp_dist(z, w) == pytest.approx(hyp_dist(w, z), abs=1e-13)

    @settings(deadline=None)
    @given(halfplane_points, halfplane_points)
    def test_matches_disk_formula(self, z, w):
        d_h = hyp_dist(z, w)
        d_d = disk_dist(halfplane_to_disk(z), halfplane_to_disk(w))
        assert abs(d_h - d_d) < 1e-12 * (1 + d_h)

    @settings(deadline=None)
    @given(moebius_strategy(), halfplane_points, halfplane_points)
    def test_automorphism_invariance(self, m, z, w):
        mz, mw = m.apply(z), m.apply(w)
        if is_infinity(mz) or is_infinity(mw) or mz.imag <= 1e-12 or mw.imag <= 1e-12:
            return
        assert abs(hyp_dist(mz, mw) - hyp_dist(z, w)) < 1e-12 * (1 + hyp_dist(z, w))


class TestHyperbolicDisk:
    def test_euclidean_data(self):
        d = HyperbolicDisk(1j, 1.0)
        assert d.euclidean_center() == pytest.approx(1j * math.cosh(1.0))
        assert d.euclidean_radius() == pytest.approx(math.sinh(1.0))

    def test_boundary_points_at_radius(self):
        d = HyperbolicDisk(2 + 3j, 0.7)
        for t in (0.0, 0.25, 0.6):
            assert hyp_dist(d.center, d.boundary_point(t)) == pytest.approx(0.7, abs=1e-12)

    def test_contains(self):
        d = HyperbolicDisk(1j, 1.0)
        assert d.contains(1.2j)
        assert not d.contains(4j)

    def test_negative_radius_rejected(self):
        with pytest.raises(DomainError):
            HyperbolicDisk(1j, -0.1)


class TestWinding:
    def unit_square(self):
        return [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]

    def test_square_around_origin(self):
        res = winding_number(self.unit_square(), 0.0)
        assert res.value == 1
        assert res.residue < 1e-12

    def test_square_around_distant_point(self):
        assert winding_number(self.unit_square(), 10.0).value == 0

    def test_doubly_traversed_circle(self):
        pts = [cmath.exp(2j * math.pi * k / 256) for k in range(512)]
        res = winding_number(pts, 0.0)
        assert res.value == 2
        assert res.residue < 1e-12

    def test_point_on_path_rejected(self):
        with pytest.raises(AmbiguousWindingError):
            winding_number(self.unit_square(), 1.0 + 0.5j)

    def test_analytic_image_curve_residue(self):
        # on |z| = 1.5, |z^3| = 3.375 dominates |0.1 z + 0.05|, so all three
        # zeros lie inside and the image curve winds three times around 0
        f = lambda z: z ** 3 + 0.1 * z + 0.05
        curve = [f(1.5 * cmath.exp(2j * math.pi * k / 512)) for k in range(512)]
        res = winding_number(curve, 0.0)
        assert res.value == 3
        assert res.residue < 1e-6
        assert not res.precision_warning
