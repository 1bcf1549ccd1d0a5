import warnings

import frozen
import numpy as np
import pytest
from conftest import e, pt

from hartogs.companion import (
    combine,
    companion_1d,
    companion_finitely_open,
    companion_fn,
    companion_nd,
    companion_outer,
    companion_value,
    restrict,
)
from hartogs.errors import (
    AdmissibilityViolation,
    DomainViolation,
    DomainViolationWarning,
    InvalidInput,
)
from hartogs.geometry import (
    UNBOUNDED,
    Ball,
    ClosedBall,
    CPoint,
    EmptySet,
    PlanarRegion,
    PlaneSlice,
    PointSet,
    Polydisc,
    compact_from_dict,
    domain_from_dict,
)
from hartogs.oracles import catalog_fn

DISC2 = Ball((0,), 2.0)
ORIGIN_1D = PointSet(((0,),), 1)


class TestOneVariable:
    def test_inverse_z_vanishes(self):
        f = catalog_fn("meromorphic-1d", {"name": "inv-z"})
        assert abs(companion_1d(f, ORIGIN_1D, DISC2, 0.7).scalar) <= 1e-10

    def test_polynomial_restriction(self):
        f = catalog_fn("polynomial-1d", {"coeffs": [2, 0, 0, 1]})
        assert companion_1d(f, ORIGIN_1D, DISC2, 0.5).scalar == pytest.approx(2.125, abs=1e-10)

    def test_shifted_pole_at_origin(self):
        f = catalog_fn("rational-1d", {"poles": [0.3]})
        K = PointSet(((0.3,),), 1)
        assert abs(companion_1d(f, K, DISC2, 0.0).scalar) <= 1e-10

    @pytest.mark.parametrize("name", ["double-and-simple", "tangent", "mixed-rational"])
    def test_regular_part_against_frozen(self, name):
        f = catalog_fn("meromorphic-1d", {"name": name})
        K = ClosedBall((0,), frozen.K_RADIUS_1D)
        om = Ball((0,), frozen.OMEGA_RADIUS_1D)
        for z in (0.1 + 0.2j, -1.1, 2.2j):
            got = companion_1d(f, K, om, z).scalar
            assert abs(got - frozen.regular_part(name, z)) <= 1e-8

    def test_needs_one_dimension(self):
        with pytest.raises(InvalidInput):
            companion_1d(catalog_fn("constant", {"dim": 2}), EmptySet(2), Ball((0, 0), 1.0), 0.1)


class TestSeveralVariables:
    def test_sphere_origin_with_given_disc(self, sphere_setup):
        K, om = sphere_setup
        f = catalog_fn("sphere-piecewise", {})
        res = companion_nd(f, K, om, pt(0, 0), u=e(0, 2), G=PlanarRegion.disc(0, 1.5))
        assert abs(res.scalar - frozen.SPHERE_COMPANION_AT_ORIGIN) <= 1e-10
        assert f(np.zeros((1, 2)))[0, 0] == frozen.SPHERE_F_AT_ORIGIN

    def test_restricted_entire(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "exp-z1-plus-z2sq"})
        x = pt(1.2, 0.4j)
        assert abs(companion_nd(f, K, om, x).scalar - (np.exp(1.2) + (0.4j) ** 2)) <= 1e-10

    def test_constant(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("constant", {"value": 5, "dim": 2})
        assert companion_value(f, K, om, pt(0.3, -0.2j)).scalar == pytest.approx(5, abs=1e-12)

    def test_vector_valued(self, ball_in_ball):
        K, om = ball_in_ball
        f = restrict(catalog_fn("vector-entire", {"names": ["z1", "exp-z1"]}), K)
        v = companion_nd(f, K, om, pt(0.2, 0.1)).value
        assert np.allclose(v, [0.2, np.exp(0.2)], atol=1e-10)

    def test_bad_disc_is_rejected(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "z1"})
        with pytest.raises(AdmissibilityViolation):
            companion_nd(f, K, om, pt(0, 0), G=PlanarRegion.disc(0, 0.5))

    def test_point_outside_domain(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "z1"})
        with pytest.raises(InvalidInput):
            companion_outer(f, K, om, e(0, 2), pt(4, 0))

    def test_near_boundary_point(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "exp-z1-plus-z2sq"})
        x = pt(2.995, 0)
        assert abs(companion_nd(f, K, om, x).scalar - np.exp(2.995)) <= 1e-8


class TestSliceAgreement:
    @pytest.mark.parametrize("u", [(1, 0), (0, 1), (0.6, 0.8j)])
    def test_directions_agree(self, ball_in_ball, u):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "sin-z1-cos-z2"})
        x = pt(0.4, -0.3j)
        ref = companion_nd(f, K, om, x, u=e(0, 2))
        res = companion_nd(f, K, om, x, u=pt(*u))
        bound = ref.quadrature.est_error + res.quadrature.est_error + 1e-9
        assert abs(res.scalar - ref.scalar) <= bound

    def test_disc_choices_agree(self, ball_in_ball):
        K, om = ball_in_ball
        f = catalog_fn("entire-restricted", {"name": "poly-mixed"})
        x = pt(0.1, 0.2)
        vals = [companion_nd(f, K, om, x, u=e(1, 2), G=PlanarRegion.disc(0, r)).scalar for r in (1.5, 2.0, 2.5)]
        assert max(abs(v - vals[0]) for v in vals) <= 1e-9


class TestStructure:
    def test_left_inverse_on_grid(self, ball_in_ball):
        K, om = ball_in_ball
        g = catalog_fn("entire", {"name": "cosh-combo"})
        H = companion_fn(restrict(g, K), K, om)
        xs = np.array([[a, b] for a in (-1.5, 0, 0.7j, 2) for b in (0, 0.5, -1j)], dtype=complex)
        assert np.max(np.abs(H(xs) - g(xs))) <= 1e-8

    def test_nested_compatibility(self):
        g = catalog_fn("entire", {"name": "exp-product"})
        K, om = ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)
        K0, om0 = ClosedBall((0, 0), 1.5), Ball((0, 0), 2.5)
        f = restrict(g, K)
        for x in (pt(0.2, 0.1j), pt(1.8, 0), pt(0, -2.2j)):
            a = companion_nd(f, K, om, x).scalar
            b = companion_nd(f, K0, om0, x).scalar
            assert abs(a - b) <= 2e-10

    def test_algebra_morphism(self, ball_in_ball):
        K, om = ball_in_ball
        f = restrict(catalog_fn("entire", {"name": "z1-squared"}), K)
        h = restrict(catalog_fn("entire", {"name": "exp-z1-plus-z2sq"}), K)
        x = pt(0.3, 0.6j)
        cf, ch = (companion_nd(q, K, om, x).scalar for q in (f, h))
        assert abs(companion_nd(combine(f, h, "mul"), K, om, x).scalar - cf * ch) <= 1e-8
        assert abs(companion_nd(combine(f, h, "add"), K, om, x).scalar - (cf + ch)) <= 1e-8


class TestOuter:
    @pytest.fixture
    def setup(self):
        om = Polydisc((0, 0, 0), (2.0, 2.0, 2.0))
        spec = {"kind": "parametric-curve", "polys": [[0, 1], [0, 0, 1], [0]], "dim": 3,
                "within": {"kind": "polydisc", "center": [0, 0, 0], "radii": 2}}
        K = compact_from_dict(spec, 3)
        f = catalog_fn("entire-restricted", {"name": "z1z2-plus-z3sq", "dim": 3, "compact": spec})
        return f, K, om

    @pytest.mark.parametrize("x,value", list(frozen.HARTOGS_OUTER.items()))
    def test_examples(self, setup, x, value):
        f, K, om = setup
        assert abs(companion_outer(f, K, om, pt(0, 0, 1), pt(*x)).scalar - value) <= 1e-10

    def test_constant(self, setup):
        _, K, om = setup
        f = catalog_fn("constant", {"value": 2, "dim": 3})
        assert companion_outer(f, K, om, pt(0, 0, 1), pt(1, 1, 0)).scalar == pytest.approx(2)


class TestFinitelyOpen:
    @pytest.fixture
    def setup(self):
        om = domain_from_dict({"kind": "sequence-box", "tail": 1.0})
        K = compact_from_dict({"kind": "pointwise-bound", "tail": 1.0})
        return catalog_fn("sequence-inverse", {}), K, om

    @pytest.mark.parametrize("j", [1, 7])
    def test_half_e0(self, setup, j):
        f, K, om = setup
        x = CPoint.from_mapping({0: 0.5}, UNBOUNDED)
        plane = PlaneSlice(x, CPoint.basis(0, UNBOUNDED), CPoint.basis(j, UNBOUNDED))
        assert abs(companion_finitely_open(f, K, om, x, plane).scalar - frozen.SEQUENCE_INVERSE_AT_HALF) <= 1e-10

    def test_empty_cut_returns_f(self, setup):
        f, K, om = setup
        x = CPoint.from_mapping({0: 1.5}, UNBOUNDED)
        plane = PlaneSlice(x, CPoint.basis(1, UNBOUNDED), CPoint.basis(2, UNBOUNDED))
        assert abs(companion_finitely_open(f, K, om, x, plane).scalar - 1 / 2.5) <= 1e-12

    def test_constant(self, setup):
        _, K, om = setup
        f = catalog_fn("constant", {"value": -3, "dim": "sequence"})
        x = CPoint.from_mapping({2: 0.1}, UNBOUNDED)
        plane = PlaneSlice(x, CPoint.basis(0, UNBOUNDED), CPoint.basis(2, UNBOUNDED))
        assert companion_finitely_open(f, K, om, x, plane).scalar == pytest.approx(-3)

    def test_plane_must_contain_point(self, setup):
        f, K, om = setup
        x = CPoint.from_mapping({0: 0.5}, UNBOUNDED)
        plane = PlaneSlice(CPoint.zero(UNBOUNDED), CPoint.basis(1, UNBOUNDED), CPoint.basis(2, UNBOUNDED))
        with pytest.raises(InvalidInput):
            companion_finitely_open(f, K, om, x, plane)


class TestRestrict:
    def test_same_values_off_k(self):
        g = catalog_fn("entire", {"name": "exp-z1-plus-z2sq"})
        f = restrict(g, ClosedBall((0, 0), 1.0))
        x = pt(1.5, 0)
        assert f.evaluate(x) == g.evaluate(x)
        assert f.known_extension.fn is g.fn

    def test_violation_flagged_on_k(self):
        f = restrict(catalog_fn("entire", {"name": "z1"}), ClosedBall((0, 0), 1.0))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            f.evaluate(pt(0.1, 0))
        assert any(issubclass(w.category, DomainViolationWarning) for w in caught)
        with pytest.raises(DomainViolation):
            f.evaluate(pt(0.1, 0), strict=True)
