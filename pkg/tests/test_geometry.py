import numpy as np
import pytest
from conftest import e, pt

from hartogs.errors import InvalidInput
from hartogs.geometry import (
    UNBOUNDED,
    Ball,
    ClosedBall,
    CPoint,
    DomainUnion,
    EmptySet,
    HalfSpace,
    LineSlice,
    MomentCurve,
    PlanarRegion,
    PlaneSlice,
    Polydisc,
    PowerCone,
    Sphere,
    as_complex,
    check_admissible,
    compact_from_dict,
    contour_of,
    cut_restrict,
    domain_from_dict,
    synthesize_admissible,
)
from hartogs.quadrature import winding_number


class TestPoints:
    def test_as_complex_forms(self):
        assert as_complex([1, 2]) == 1 + 2j
        assert as_complex("3-4i") == 3 - 4j
        assert as_complex(2) == 2

    def test_as_complex_rejects_bad_pair(self):
        with pytest.raises(InvalidInput):
            as_complex([1, 2, 3])

    def test_json_roundtrip_finite(self):
        x = pt(1, 0.5j)
        assert CPoint.from_json(x.to_json(), 2) == x

    def test_json_roundtrip_sequence(self):
        x = CPoint.from_mapping({0: 0.3 + 0.2j, 5: -1}, UNBOUNDED)
        back = CPoint.from_json(x.to_json(), UNBOUNDED)
        assert np.allclose(back.dense(6), x.dense(6))
        assert x.support_width == 6

    def test_wrong_length_rejected(self):
        with pytest.raises(InvalidInput):
            CPoint.from_json([1, 2, 3], 2)


class TestCuts:
    def test_ball_line_cut(self):
        cut = cut_restrict(Ball((0, 0), 2.0), LineSlice(pt(0, 0), e(0, 2)))
        assert cut(1.9) and not cut(2.1) and cut(1.5j)

    def test_sphere_line_cut(self):
        cut = cut_restrict(Sphere((0, 0), 1.0), LineSlice(pt(0, 0), e(0, 2)))
        assert cut(1.0) and cut(1j) and not cut(0.5)

    def test_moment_curve_plane_cut(self):
        K = MomentCurve((0.5,), 2)
        cut = cut_restrict(K, PlaneSlice(pt(0, 0), e(0, 2), e(1, 2)))
        assert cut([1, 0.5])
        assert not cut([1, 0.4])

    def test_union_cut_is_union_of_cuts(self):
        a, b = Ball((0, 0), 1.0), Ball((2.5, 0), 1.0)
        slc = PlaneSlice(pt(0, 0.1), e(0, 2), pt(0.3, 1))
        whole = cut_restrict(DomainUnion((a, b)), slc)
        ca, cb = cut_restrict(a, slc), cut_restrict(b, slc)
        rng = np.random.default_rng(3)
        for z in rng.normal(scale=2, size=(200, 2)) + 1j * rng.normal(scale=2, size=(200, 2)):
            assert whole(z) == (ca(z) or cb(z))


class TestDomains:
    def test_polydisc(self):
        P = Polydisc((0, 0), (1.0, 2.0))
        assert P.contains(np.array([[0.9, 1.9]]))[0]
        assert not P.contains(np.array([[1.1, 0]]))[0]

    def test_halfspace(self):
        H = HalfSpace((1j, 0), 0.5)
        # Re(i z1) = -Im z1
        assert H.contains(np.array([[-1j, 5]]))[0]
        assert not H.contains(np.array([[-0.2j + 3, 0]]))[0]

    def test_power_cone(self):
        C = PowerCone(3, 0, 2.0)
        assert C.contains(np.array([[1.5, 0.5, 0.5]]))[0]
        assert not C.contains(np.array([[0.5, 0.1, 0]]))[0]

    def test_power_cone_cut_bounded_only_along_kernel(self):
        C = PowerCone(3, 0, 2.0)
        kernel = PlaneSlice(pt(1.5, 0, 0), e(1, 3), e(2, 3))
        assert cut_restrict(C, kernel).bounding_ball(2) is not None
        oblique = PlaneSlice(pt(1.5, 0, 0), e(0, 3), e(1, 3))
        assert cut_restrict(C, oblique).bounding_ball(2) is None

    def test_dict_roundtrip_kinds(self):
        for spec in (
            {"kind": "ball", "center": [0, 0], "radius": 2},
            {"kind": "polydisc", "center": [0, 0, 0], "radii": 2},
            {"kind": "union", "parts": [{"kind": "ball", "center": [0], "radius": 1}]},
        ):
            assert domain_from_dict(spec) is not None

    def test_unknown_kind(self):
        with pytest.raises(InvalidInput):
            domain_from_dict({"kind": "torus"})
        with pytest.raises(InvalidInput):
            compact_from_dict({"kind": "closed-ball", "center": [0]})


class TestAdmissible:
    def test_ball_in_ball_single_disc(self):
        K, om = ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)
        G = synthesize_admissible(pt(0, 0), e(0, 2), K, om)
        assert len(G.discs) == 1
        _, r = G.discs[0]
        assert 1 < r < 3
        assert check_admissible(G, pt(0, 0), e(0, 2), K, om)

    def test_empty_compact_gives_margin_disc(self):
        G = synthesize_admissible(pt(0, 0), e(0, 2), EmptySet(2), Ball((0, 0), 3.0), margin=0.05)
        assert G.discs == ((0j, 0.05),)

    def test_sphere_disc(self):
        K, om = Sphere((0, 0), 1.0), Ball((0, 0), 2.0)
        G = synthesize_admissible(pt(0, 0), e(0, 2), K, om)
        c, r = G.discs[0]
        assert 1 < r < 2 and abs(c) < 1e-12
        assert check_admissible(PlanarRegion.disc(0, 1.5), pt(0, 0), e(0, 2), K, om)

    @pytest.mark.parametrize(
        "radius,margin,ok",
        [(2.0, 0.05, True), (0.5, 0.05, False), (2.95, 0.1, False)],
    )
    def test_check_admissible_cases(self, radius, margin, ok):
        K, om = ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)
        rep = check_admissible(PlanarRegion.disc(0, radius), pt(0, 0), e(0, 2), K, om, margin)
        assert bool(rep) is ok
        if not ok:
            assert rep.violations

    def test_overlapping_discs_rejected(self):
        with pytest.raises(InvalidInput):
            PlanarRegion(((0, 1.0), (1.5, 1.0)))


class TestContours:
    def test_single_circle(self):
        C = contour_of(PlanarRegion.disc(0, 1))
        assert len(C.curves) == 1 and C.curves[0].orientation == 1
        assert winding_number(C, 0) == 1
        assert winding_number(C, 2) == 0

    def test_two_discs(self):
        C = contour_of(PlanarRegion(((0, 1.0), (3, 1.0))))
        assert [c.orientation for c in C.curves] == [1, 1]
        assert winding_number(C, 3.2) == 1
