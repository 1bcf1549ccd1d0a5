"""Acceptance criteria, one test each, every one printing a PASS/FAIL line.

Tolerances are the stated ones; nothing is loosened here.  Reference values
come from closed forms in ``frozen.py`` or from direct evaluation of a known
extension, never from the quantity under test.
"""

import itertools
import math
import time

import frozen
import mpmath
import numpy as np
import pytest

from hartogs.companion import (
    companion_1d,
    companion_finitely_open,
    companion_nd,
    companion_outer,
    restrict,
)
from hartogs.geometry import (
    UNBOUNDED,
    Ball,
    Circle,
    ClosedBall,
    CPoint,
    DomainUnion,
    EmptySet,
    PlaneSlice,
    PointSet,
    Polydisc,
    Sphere,
    compact_from_dict,
    domain_from_dict,
)
from hartogs.oracles import (
    MEROMORPHIC_FUNCTIONS,
    SeminormSpec,
    catalog_fn,
    regular_part,
)
from hartogs.quadrature import trapezoid_circle, trapezoid_circle_mp
from hartogs.topology import build_grid, components, connectedness_report
from hartogs.verify import (
    sample_domain,
    verify_boundary,
    verify_coincidence,
    verify_composition,
    verify_excision,
    verify_max_min,
    verify_range_and_inertia,
    verify_roundtrips,
)


@pytest.fixture
def announce(capsys):
    def emit(number: int, title: str, ok: bool, measured: str):
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {measured}")
        return ok

    return emit


def cp(*coords):
    return CPoint.from_dense(list(coords), len(coords))


def _disc_points(n, radius, seed, avoid_origin=0.0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(avoid_origin**2 / radius**2, 1, n))
    return r * np.exp(2j * np.pi * rng.random(n))


def test_01_regular_part_equivalence(announce):
    K, om = ClosedBall((0,), frozen.K_RADIUS_1D), Ball((0,), frozen.OMEGA_RADIUS_1D)
    names = list(MEROMORPHIC_FUNCTIONS)
    assert len(names) >= 10
    z = _disc_points(50, 2.4, seed=1)
    start = time.perf_counter()
    worst_symbolic = worst_frozen = 0.0
    for name in names:
        f = catalog_fn("meromorphic-1d", {"name": name})
        tilde = np.array([companion_1d(f, K, om, zk).scalar for zk in z])
        worst_symbolic = max(worst_symbolic, float(np.max(np.abs(tilde - regular_part(f)(z[:, None])[:, 0]))))
        worst_frozen = max(worst_frozen, float(np.max(np.abs(tilde - frozen.regular_part(name, z)))))
    elapsed = time.perf_counter() - start
    ok = worst_symbolic <= 1e-8 and worst_frozen <= 1e-8 and elapsed < 10
    announce(1, "companion_1d vs regular part", ok,
             f"{len(names)} functions x 50 pts, max err {worst_symbolic:.2e} (symbolic) / {worst_frozen:.2e} "
             f"(hand-derived) <= 1e-8, {elapsed:.1f}s < 10s")
    assert ok


def test_02_inverse_z_companion_vanishes(announce):
    f = catalog_fn("meromorphic-1d", {"name": "inv-z"})
    K, om = PointSet(((0,),), 1), Ball((0,), 2.0)
    z = _disc_points(50, 1.99, seed=2, avoid_origin=1e-3)
    worst = max(abs(companion_1d(f, K, om, zk).scalar) for zk in z)
    ok = worst <= 1e-10
    announce(2, "1/z companion is zero", ok, f"max |f~| {worst:.2e} <= 1e-10 over 50 pts")
    assert ok


def _lattice_in_ball(radius, count):
    axis = np.linspace(-2.4, 2.4, 5)
    grid = np.array(np.meshgrid(axis, axis, axis, axis, indexing="ij")).reshape(4, -1).T
    pts = grid[:, 0::2] + 1j * grid[:, 1::2]
    pts = pts[np.linalg.norm(pts, axis=1) < radius]
    return pts[np.linspace(0, len(pts) - 1, count).astype(int)]


def test_03_restriction_roundtrip(announce):
    K, om = ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)
    pts = _lattice_in_ball(2.95, 200)
    assert len(pts) == 200
    names = ["exp-z1-plus-z2sq", "sin-z1-cos-z2", "poly-mixed", "cosh-combo", "exp-product"]
    start = time.perf_counter()
    worst = 0.0
    for name in names:
        g = catalog_fn("entire", {"name": name})
        f = restrict(g, K)
        tilde = np.array([companion_nd(f, K, om, CPoint.from_dense(x, 2)).scalar for x in pts])
        worst = max(worst, float(np.max(np.abs(tilde - g(pts)[:, 0]))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 30
    announce(3, "H(rho(g)) = g", ok, f"5 entire functions x 200 grid pts, max err {worst:.2e} <= 1e-8, {elapsed:.1f}s < 30s")
    assert ok


def test_04_sphere_counterexample(announce):
    K, om = Sphere((0, 0), 1.0), Ball((0, 0), 2.0)
    f = catalog_fn("sphere-piecewise", {})
    tilde0 = companion_nd(f, K, om, cp(0, 0)).scalar
    f0 = complex(f(np.zeros((1, 2)))[0, 0])
    coin = verify_coincidence(f, K, om, n_samples=100, tol=1e-8)
    counts = [components(build_grid(K, om, resolution=r), "complement-k").count for r in (21, 31)]
    ok = (
        abs(tilde0 - frozen.SPHERE_COMPANION_AT_ORIGIN) <= 1e-8
        and f0 == frozen.SPHERE_F_AT_ORIGIN
        and coin.passed
        and coin.samples_used == 100
        and counts == [2, 2]
    )
    announce(4, "sphere counterexample", ok,
             f"f~(0) = {abs(tilde0):.2e} (f(0) = {f0.real:g}), shell coincidence err {coin.worst_violation:.2e} "
             f"over {coin.samples_used} samples, complement components at res 21/31 = {counts}")
    assert ok


def _slice_independence_cases():
    dirs = [cp(1, 0), cp(0, 1), CPoint.from_dense(np.array([1, 1j]) / math.sqrt(2), 2)]
    sphere = (catalog_fn("sphere-piecewise", {}), Sphere((0, 0), 1.0), Ball((0, 0), 2.0))
    kugel = (catalog_fn("entire-restricted", {"name": "exp-z1-plus-z2sq"}), ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0))
    points = PointSet(((0, 0), (0.5, 0.5j)), 2)
    pointset = (restrict(catalog_fn("entire", {"name": "exp-product"}), points), points, Polydisc((0, 0), (2.0, 2.0)))
    return dirs, [("sphere", *sphere), ("ball-in-ball", *kugel), ("point-set", *pointset)]


def test_05_slice_independence(announce):
    dirs, cases = _slice_independence_cases()
    worst = 0.0
    for i, (_, f, K, om) in enumerate(cases):
        for x in sample_domain(om, 20, np.random.default_rng(50 + i)):
            xp = CPoint.from_dense(x, 2)
            vals = [companion_nd(f, K, om, xp, u=u).value for u in dirs]
            worst = max(worst, max(float(np.max(np.abs(v - vals[0]))) for v in vals))
    ok = worst <= 1e-8
    announce(5, "slice/representation independence", ok,
             f"3 scenarios x 20 pts x 3 (u,G), max spread {worst:.2e} <= 1e-8")
    assert ok


def test_06_range_inclusion(announce):
    f = catalog_fn("sphere-piecewise", {})
    r = verify_range_and_inertia(f, Sphere((0, 0), 1.0), Ball((0, 0), 2.0), levels=(1000, 4000, 16000), image_tol=0.05)
    eps = r.details["eps"]
    ok = all(b <= a for a, b in itertools.pairwise(eps)) and eps[-1] <= 0.05
    announce(6, "range inclusion", ok, f"hull distance at 1e3/4e3/1.6e4 = {[round(e, 4) for e in eps]}, "
             "non-increasing and final <= 0.05")
    assert ok


def test_07_excision(announce):
    f = catalog_fn("entire", {"name": "z1"})
    r = verify_excision(f, ClosedBall((0, 0), 1.0), Ball((0, 0), 2.0), levels=(1000, 4000, 16000), image_tol=0.05)
    eps = r.details["eps"]
    ok = all(b <= a for a, b in itertools.pairwise(eps)) and eps[-1] <= 0.05
    announce(7, "excision", ok, f"Hausdorff distance at 1e3/4e3/1.6e4 = {[round(e, 4) for e in eps]}, "
             "monotone and final <= 0.05")
    assert ok


def test_08_boundary_principle(announce):
    f = catalog_fn("entire", {"name": "exp-z1"})
    plane = PlaneSlice(cp(0, 0), cp(1, 0), cp(0, 1))
    r = verify_boundary(f, Ball((0, 0), 1.0), [plane], n_samples=2000, tol=1e-6)
    s = r.details["slices"][0]
    ok = s["interior_sup"] <= s["boundary_sup"] + 1e-6 and abs(s["boundary_sup"] - math.e) <= 1e-3
    announce(8, "boundary principle", ok,
             f"interior sup {s['interior_sup']:.6f} <= boundary sup {s['boundary_sup']:.6f} + 1e-6, "
             f"|boundary sup - e| = {abs(s['boundary_sup'] - math.e):.2e} <= 1e-3")
    assert ok


def test_09_max_min(announce):
    f = catalog_fn("ex-maximum", {})
    p = SeminormSpec("weighted", {"phi": [0, 1], "y0": [0, 1], "nu": {"kind": "coordinate-modulus", "index": 0}})
    r = verify_max_min(f, p, Ball((0, 0), 1.0), cp(0, 0), n_samples=10000, tol=1e-12)
    d = r.details
    ok = r.samples_used == 10000 and d["min_p_f"] >= 1 - 1e-12 and d["flatness_residual"] <= 1e-12
    announce(9, "max-min principle", ok,
             f"min p(f) over 1e4 samples = {d['min_p_f']:.15f} >= 1 - 1e-12, flatness {d['flatness_residual']:.2e} <= 1e-12")
    assert ok


def test_10_composition(announce):
    kugel = (ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0))
    sphere = (Sphere((0, 0), 1.0), Ball((0, 0), 2.0))
    exp_r = catalog_fn("entire-restricted", {"name": "exp-z1"})
    pairs = [
        (exp_r, catalog_fn("polynomial-1d", {"coeffs": [0, 0, 1]}), kugel),
        (catalog_fn("sphere-piecewise", {}), catalog_fn("polynomial-1d", {"coeffs": [1, 1]}), sphere),
        (exp_r, catalog_fn("entire", {"name": "exp-z1", "dim": 1}), kugel),
    ]
    errs = [verify_composition(f, g, *ko, n_samples=20, tol=1e-8).worst_violation for f, g, ko in pairs]
    ok = max(errs) <= 1e-8
    announce(10, "composition", ok, f"3 pairs x 20 pts, errors {[f'{e:.1e}' for e in errs]} <= 1e-8")
    assert ok


def test_11_outer_extension(announce):
    spec = {"kind": "parametric-curve", "polys": [[0, 1], [0, 0, 1], [0]], "dim": 3,
            "within": {"kind": "polydisc", "center": [0, 0, 0], "radii": 2}}
    K = compact_from_dict(spec, 3)
    om = Polydisc((0, 0, 0), (2.0, 2.0, 2.0))
    f = catalog_fn("entire-restricted", {"name": "z1z2-plus-z3sq", "dim": 3, "compact": spec})
    ts = [1, 0.5, -0.5, 1j, 0.3 + 0.4j, -1, 1.2, -0.8j, 0.7 - 0.7j, -0.9 + 0.2j]
    worst, at_one = 0.0, None
    for t in ts:
        x = cp(t, t * t, 0)
        assert K.member(x)
        value = companion_outer(f, K, om, cp(0, 0, 1), x).scalar
        worst = max(worst, abs(value - t**3))  # entire extension z1 z2 + z3^2 on the curve
        if t == 1:
            at_one = value
    ok = worst <= 1e-8 and abs(at_one - frozen.HARTOGS_OUTER[(1, 1, 0)]) <= 1e-8
    announce(11, "outer extension", ok, f"10 pts on K, f~(1,1,0) = {at_one.real:.12f}, max err {worst:.2e} <= 1e-8")
    assert ok


def test_12_finitely_open(announce):
    om = domain_from_dict({"kind": "sequence-box", "tail": 1.0})
    K = compact_from_dict({"kind": "pointwise-bound", "tail": 1.0})
    f = catalog_fn("sequence-inverse", {"shift": 4.0})
    b = lambda i: CPoint.basis(i, UNBOUNDED)
    m = lambda d: CPoint.from_mapping(d, UNBOUNDED)
    dir_pairs = [(b(0), b(1)), (b(0), b(7)), (b(1), b(2)), (m({0: 0.6 + 0.2j, 2: -0.3, 4: 0.5}), m({1: 0.4, 3: 1j, 6: -0.7}))]
    points = [m({0: 0.5}), m({0: 0.3 + 0.2j, 2: -0.4, 5: 0.1j}), m({}), m({1: 0.9, 3: 0.2 - 0.5j}), m({0: -0.8, 4: 0.6})]
    spread = ext_err = 0.0
    for x in points:
        vals = [companion_finitely_open(f, K, om, x, PlaneSlice(x, d1, d2)).scalar for d1, d2 in dir_pairs]
        spread = max(spread, max(abs(v - vals[0]) for v in vals))
        ext_err = max(ext_err, max(abs(v - 1 / (4 - x[0])) for v in vals))
    half = companion_finitely_open(f, K, om, points[0], PlaneSlice(points[0], b(0), b(7))).scalar
    ok = spread <= 1e-8 and ext_err <= 1e-8 and abs(half - frozen.SEQUENCE_INVERSE_AT_HALF) <= 1e-8
    announce(12, "finitely-open slicing", ok,
             f"5 pts x 4 planes, cross-plane spread {spread:.2e}, error vs extension {ext_err:.2e} <= 1e-8")
    assert ok


def test_13_connectedness_equivalences(announce):
    cases = {
        "ball-in-ball": (ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)),
        "sphere": (Sphere((0, 0), 1.0), Ball((0, 0), 2.0)),
        "disconnected": (ClosedBall((1.5, 0), 0.25), DomainUnion((Ball((-1.5, 0), 1.0), Ball((1.5, 0), 1.0)))),
        "empty": (EmptySet(2), Ball((0, 0), 2.0)),
    }
    failures = []
    for name, (K, om) in cases.items():
        truth = []
        for res in (21, 31):
            rep = connectedness_report(K, om, build_grid(K, om, resolution=res))
            truth.append([(q.lhs, q.rhs) for q in rep.equivalences])
            if not rep.consistent:
                failures.append(f"{name}@{res}")
        if truth[0] != truth[1]:
            failures.append(f"{name} differs across resolutions")
    ok = not failures
    announce(13, "connectedness equivalences", ok, f"4 scenarios x res 21/31, inconsistent: {failures or 'none'}")
    assert ok


def test_14_operator_bound(announce):
    cases = [
        ("exp-z1-plus-z2sq", ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)),
        ("poly-mixed", ClosedBall((0, 0), 0.5), Ball((0, 0), 2.0)),
        ("cosh-combo", ClosedBall((0.5, 0), 0.7), Ball((0, 0), 3.0)),
    ]
    slacks = []
    for name, K, om in cases:
        r = verify_roundtrips(catalog_fn("entire", {"name": name}), None, K, om, n_samples=20)
        bound = r.details["operator_bound"]
        assert bound["evaluated"] and bound["M_points"] == 50
        slacks.append(bound["slack"])
    ok = min(slacks) >= -1e-8
    announce(14, "operator seminorm bound", ok, f"slack sup|f| - p_M(f~) = {[round(s, 4) for s in slacks]} >= -1e-8")
    assert ok


def test_15_quadrature_kernel(announce):
    unit = Circle(0j, 1.0, 1)
    err_inv = abs(trapezoid_circle(lambda z: 1 / z, unit, 256)[0] - 2j * math.pi)
    # double-precision roundoff swamps both truncation errors, so the ratio is taken in 200-digit arithmetic
    with mpmath.workdps(200):
        exact = 2j * mpmath.pi
        pole = mpmath.mpf(3) / 10
        e128 = abs(trapezoid_circle_mp(lambda z: 1 / (z - pole), 0, 1, 128, dps=200) - exact)
        e256 = abs(trapezoid_circle_mp(lambda z: 1 / (z - pole), 0, 1, 256, dps=200) - exact)
        ratio = e128 / e256
        ok = err_inv <= 1e-12 and ratio >= 1000
        ratio_txt = mpmath.nstr(ratio, 3)
    announce(15, "quadrature kernel", ok, f"|int dz/z - 2 pi i| at 256 nodes = {err_inv:.1e} <= 1e-12, "
             f"error ratio 128/256 nodes (pole 0.3) = {ratio_txt} >= 1e3")
    assert ok
