"""Property checks, one per theorem-level claim.

Each check samples, compares against an independent route, and returns a
``CheckReport`` whose ``passed`` flag is exactly ``worst_violation <= tolerance``.
Image-inclusion claims use fixed probe sets against nested target samples,
so the reported distances can only shrink as the sample grows; the pass
criterion pairs that monotonicity with an explicit distance threshold.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy import ndimage
from scipy.stats import qmc

from .companion import HoloFn, companion_value, compose, restrict
from .errors import InvalidInput, NoCoincidenceSamples
from .geometry import (
    UNBOUNDED,
    Ball,
    CompactSpec,
    CPoint,
    DomainSpec,
    PlaneSlice,
    cut_restrict,
)
from .oracles import SeminormSpec, hull_distance, seminorm_eval
from .topology import (
    IN_K,
    GridComplex,
    boundary2_coords,
    build_grid,
    coincidence_mask,
    coincidence_membership,
    components,
    is_connected,
    ray_directions,
)

__all__ = [
    "CheckReport",
    "find_local_max",
    "format_number",
    "sample_domain",
    "verify_boundary",
    "verify_coincidence",
    "verify_composition",
    "verify_excision",
    "verify_identity",
    "verify_level_sets",
    "verify_max_min",
    "verify_range_and_inertia",
    "verify_roundtrips",
    "write_reports_json",
    "write_summary_csv",
]

DEFAULT_LEVELS = (1000, 4000, 16000)
DEFAULT_IMAGE_TOL = 0.05


def format_number(v: float) -> str:
    """Shortest round-trippable form; scientific below 1e-4 in magnitude."""
    return format(float(v), ".15g")


def _jsonable(value: Any) -> Any:
    if isinstance(value, CPoint):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_jsonable(float(value.real)), _jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    passed: bool
    worst_violation: float
    tolerance: float
    witness: CPoint | tuple[CPoint, ...] | None
    samples_used: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "pass": self.passed,
            "worst_violation": _jsonable(self.worst_violation),
            "tolerance": _jsonable(self.tolerance),
            "witness": _jsonable(self.witness),
            "samples_used": self.samples_used,
            "details": _jsonable(self.details),
        }


def _report(check_id, violation, tolerance, witness, samples, details) -> CheckReport:
    violation = float(violation)
    passed = bool(violation <= tolerance)  # NaN fails
    return CheckReport(check_id, passed, violation, float(tolerance), witness, int(samples), details)


# ---------------------------------------------------------------- sampling


def _ball_points(center: np.ndarray, radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    d = 2 * center.size
    g = rng.normal(size=(n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    real = g * (radius * rng.uniform(size=n) ** (1.0 / d))[:, None]
    return center[None, :] + real[:, 0::2] + 1j * real[:, 1::2]


def _far_from(K: CompactSpec, pts: np.ndarray, gap: float) -> np.ndarray:
    if K.is_empty:
        return np.ones(pts.shape[0], bool)
    try:
        return K.distance(pts) > gap
    except NotImplementedError:
        return ~K.contains(pts)


def sample_domain(
    domain: DomainSpec,
    n: int,
    rng: np.random.Generator,
    avoid: CompactSpec | None = None,
    gap: float = 1e-9,
    ball: tuple[np.ndarray, float] | None = None,
) -> np.ndarray:
    """``n`` points ``(n, dim)`` of the domain, optionally away from a compact.

    Scrambled Sobol points of the bounding cube, filtered by membership; a
    longer request returns a superset of a shorter one with the same seed.
    """
    dim = domain.ambient_dim
    if dim == UNBOUNDED:
        raise InvalidInput("sampling needs a finite ambient dimension")
    dim = int(dim)
    ball = ball or domain.bounding_ball(dim)
    if ball is None:
        raise InvalidInput("domain is unbounded; pass a sampling ball")
    center = np.asarray(ball[0], complex)[:dim]
    lo = np.column_stack([center.real, center.imag]).ravel() - ball[1]
    seed = int(rng.integers(2**32))
    m = max(int(np.ceil(np.log2(max(n, 1)))) + 1, 8)
    while m <= 24:
        cube = qmc.Sobol(2 * dim, scramble=True, seed=seed).random_base2(m)
        real = lo[None, :] + 2 * ball[1] * cube
        pts = real[:, 0::2] + 1j * real[:, 1::2]
        keep = domain.contains(pts)
        if avoid is not None:
            keep &= _far_from(avoid, pts, gap)
        if keep.sum() >= n:
            return pts[keep][:n]
        m += 1
    raise InvalidInput("rejection sampling found too few points; the domain may be tiny")


def _options(options: dict | None) -> dict:
    return dict(options or {})


def _companion_rows(f: HoloFn, K, omega, pts: np.ndarray, options: dict) -> np.ndarray:
    dim = omega.ambient_dim
    return np.array([companion_value(f, K, omega, CPoint.from_dense(p, dim), **options).value for p in pts])


def _point(row: np.ndarray, dim) -> CPoint:
    return CPoint.from_dense(row, dim)


def _monotone_excess(eps: Sequence[float]) -> float:
    """Largest increase between consecutive refinement levels (0 when non-increasing)."""
    return max([0.0] + [b - a for a, b in itertools.pairwise(eps)])


def _image_violation(eps: Sequence[float], tol: float) -> float:
    excess = _monotone_excess(eps)
    if excess > 0:
        return max(eps[-1], tol) + excess
    return eps[-1]


# ---------------------------------------------------------------- coincidence


def _grid_for(K, omega, grid):
    if grid is not None:
        return grid
    dim = omega.ambient_dim
    if dim == UNBOUNDED or int(dim) > 2:
        return None
    return build_grid(K, omega)


def verify_coincidence(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    n_samples: int = 100,
    tol: float = 1e-8,
    seed: int = 42,
    grid: GridComplex | None = None,
    compare_to: HoloFn | None = None,
    options: dict | None = None,
) -> CheckReport:
    """The companion equals f on sampled points of the coincidence set.

    ``compare_to`` replaces f on the right-hand side; negative controls use it
    to inject a known error.
    """
    rng = np.random.default_rng(seed)
    grid = _grid_for(K, omega, grid)
    dim = omega.ambient_dim
    gap = 0.0
    if grid is not None:
        gap = float(np.linalg.norm(grid.widths))
    kept = []
    for _ in range(50):
        cand = sample_domain(omega, 4 * n_samples, rng, avoid=K, gap=max(gap, 1e-9))
        for row in cand:
            x = _point(row, dim)
            if grid is not None:
                cell = grid.cell_of(x)
                ok = cell is not None and bool(coincidence_mask(grid)[cell])
            else:
                ok = coincidence_membership(x, K, omega, strategy="slice", seed=seed)
            if ok:
                kept.append(row)
            if len(kept) == n_samples:
                break
        if len(kept) == n_samples:
            break
    if not kept:
        raise NoCoincidenceSamples("no sampled point of Ω \\ K lies in the coincidence set")
    pts = np.array(kept)
    tilde = _companion_rows(f, K, omega, pts, _options(options))
    ref = (compare_to or f)(pts)
    err = np.max(np.abs(tilde - ref), axis=1)
    worst = int(np.argmax(err))
    details = {
        "strategy": "grid" if grid is not None else "slice",
        "max_abs_error": float(err[worst]),
        "mean_abs_error": float(err.mean()),
        "seed": seed,
    }
    return _report("coincidence", err[worst], tol, _point(pts[worst], dim), len(pts), details)


# ---------------------------------------------------------------- range and inertia


def verify_range_and_inertia(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    levels: Sequence[int] = DEFAULT_LEVELS,
    D: DomainSpec | None = None,
    n_probes: int = 20,
    probes: Sequence[CPoint] = (),
    image_tol: float = DEFAULT_IMAGE_TOL,
    seed: int = 42,
    options: dict | None = None,
) -> CheckReport:
    """Companion values lie in the closure (m = 1) or convex hull (m >= 2) of f(Ω \\ K).

    With ``D`` (a domain in C) given and every sampled f value inside it, the
    companion values must lie in D as well.
    """
    rng = np.random.default_rng(seed)
    dim = omega.ambient_dim
    probe_pts = [p.dense(int(dim)) for p in probes]
    if n_probes:
        probe_pts += list(sample_domain(omega, n_probes, rng))
    probe_pts = np.array(probe_pts)
    tilde = _companion_rows(f, K, omega, probe_pts, _options(options))
    targets = sample_domain(omega, max(levels), rng, avoid=K)
    images = f(targets)
    mode = "set" if f.codomain_dim == 1 else "convex-hull"
    eps, witness = [], 0
    for n in levels:
        dists = np.array([hull_distance(t, images[:n], mode) for t in tilde])
        eps.append(float(dists.max()))
        witness = int(np.argmax(dists))
    violation = _image_violation(eps, image_tol)
    details: dict[str, Any] = {"mode": mode, "levels": list(levels), "eps": eps, "seed": seed}
    if D is not None:
        if f.codomain_dim != 1:
            raise InvalidInput("the inertia clause is for scalar maps")
        w = images[:, :1]
        applicable = bool(np.all(D.contains(w)))
        outside = int(np.sum(~D.contains(tilde[:, :1]))) if applicable else 0
        details["inertia"] = {"applicable": applicable, "companion_values_outside_D": outside}
        violation += outside
    return _report("range", violation, image_tol, _point(probe_pts[witness], dim), len(probe_pts) + max(levels), details)


# ---------------------------------------------------------------- excision


def verify_excision(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    levels: Sequence[int] = DEFAULT_LEVELS,
    n_probes: int = 200,
    image_tol: float = DEFAULT_IMAGE_TOL,
    seed: int = 42,
) -> CheckReport:
    """Hausdorff distance between sampled f(Ω) and f(Ω \\ K).

    Since Ω \\ K ⊂ Ω, only images of points of K can be far from f(Ω \\ K);
    these form the fixed probe set and the other direction is zero.
    """
    rng = np.random.default_rng(seed)
    dim = omega.ambient_dim
    kball = K.bounding_ball(int(dim)) if not K.is_empty else None
    if kball is None:
        details = {"levels": list(levels), "eps": [0.0] * len(levels), "reason": "K is empty", "seed": seed}
        return _report("excision", 0.0, image_tol, None, 0, details)
    in_k = []
    for _ in range(200):
        batch = _ball_points(np.asarray(kball[0], complex)[: int(dim)], kball[1], 4 * n_probes, rng)
        in_k.extend(batch[K.contains(batch) & omega.contains(batch)])
        if len(in_k) >= n_probes:
            break
    probe_pts = np.array(in_k[:n_probes])
    if probe_pts.size == 0:
        # a thin K carries no volume; fall back to its distance band
        probe_pts = np.zeros((0, int(dim)), complex)
    targets = sample_domain(omega, max(levels), rng, avoid=K)
    vals = f(probe_pts) if len(probe_pts) else np.zeros((0, f.codomain_dim))
    images = f(targets)
    eps, witness = [], None
    for n in levels:
        if len(vals) == 0:
            eps.append(0.0)
            continue
        dists = np.array([hull_distance(v, images[:n], "set") for v in vals])
        eps.append(float(dists.max()))
        witness = int(np.argmax(dists))
    details = {"levels": list(levels), "eps": eps, "reverse_direction": 0.0, "seed": seed}
    wit = _point(probe_pts[witness], dim) if witness is not None else None
    return _report("excision", _image_violation(eps, image_tol), image_tol, wit, len(probe_pts) + max(levels), details)


# ---------------------------------------------------------------- round trips


def locally_constant_counterexample(grid: GridComplex) -> HoloFn:
    """1 on the bounded components of the complement of K, 0 on the unbounded one.

    Cells flagged as K (points within half a cell diagonal of K) inherit the
    label of the nearest cell outside K.
    """
    rep = components(grid, "complement-k")
    lab = rep.label_array
    _, idx = ndimage.distance_transform_edt(grid.labels == IN_K, return_indices=True)
    filled = lab[tuple(idx)]
    bounded = (filled != rep.unbounded_component_id).astype(float)

    def fn(X: np.ndarray) -> np.ndarray:
        out = np.zeros(X.shape[0], complex)
        for i, row in enumerate(X):
            cell = grid.cell_of(CPoint.from_dense(row[: grid.n], grid.n))
            out[i] = bounded[cell] if cell is not None else 0.0
        return out

    return HoloFn("locally-constant", fn, grid.n, 1, excluded=grid.K)


def _deep_bounded_point(grid: GridComplex) -> CPoint | None:
    """Cell center of a bounded complement component farthest from K, inside Ω."""
    rep = components(grid, "complement-k")
    lab = rep.label_array
    bounded = (lab > 0) & (lab != rep.unbounded_component_id) & (grid.labels != IN_K)
    in_omega = grid.labels == 1
    mask = bounded & in_omega
    if not mask.any():
        return None
    dist = ndimage.distance_transform_edt(grid.labels != IN_K)
    dist = np.where(mask, dist, -1.0)
    index = np.unravel_index(int(np.argmax(dist)), dist.shape)
    centre = grid.centers(tuple(np.array([i]) for i in index))[0]
    return CPoint.from_dense(centre, grid.n)


def _operator_bound(f: HoloFn, K, omega, rng, options, n_m: int = 50, n_shell: int = 20000) -> dict:
    """p_M(f~) against the sampled sup of |f| over the closed shell between K0 and Ω0."""
    dim = int(omega.ambient_dim)
    kball = K.bounding_ball(dim) if not K.is_empty else (np.zeros(dim, complex), 0.0)
    centre = np.asarray(kball[0], complex)[:dim]
    r_k = float(kball[1])
    reach = float(omega.clearance(centre[None, :])[0])
    if reach <= r_k:
        return {"evaluated": False, "reason": "K's bounding ball is not inside Ω"}
    r_k0 = r_k + 0.2 * (reach - r_k)
    r_om0 = r_k + 0.6 * (reach - r_k)
    basis = [CPoint.basis(i, dim) for i in range(2)]
    plane = PlaneSlice(CPoint.from_dense(centre, dim), basis[0], basis[1])
    m_coords = _ball_points(np.zeros(2, complex), 0.95 * r_om0, n_m, rng)
    m_pts = plane.embed_dense(m_coords, dim)
    p_m = float(np.max(np.linalg.norm(_companion_rows(f, K, omega, m_pts, options), axis=1)))
    shell = _ball_points(np.zeros(2, complex), r_om0, n_shell, rng)
    shell = shell[np.linalg.norm(shell, axis=1) >= r_k0]
    dirs = _sphere_directions(4096)
    rims = np.concatenate([r_k0 * dirs, r_om0 * dirs])
    shell_pts = plane.embed_dense(np.concatenate([shell, rims]), dim)
    sup = float(np.max(np.linalg.norm(f(shell_pts), axis=1)))
    return {
        "evaluated": True,
        "K0_radius": r_k0,
        "omega0_radius": r_om0,
        "p_M": p_m,
        "shell_sup": sup,
        "slack": sup - p_m,
        "M_points": n_m,
    }


def _sphere_directions(count: int) -> np.ndarray:
    d = ray_directions(count)
    return d[:, 0::2] + 1j * d[:, 1::2]


def verify_roundtrips(
    g: HoloFn,
    f: HoloFn | None,
    K: CompactSpec,
    omega: DomainSpec,
    grid: GridComplex | None = None,
    n_samples: int = 200,
    tol: float = 1e-8,
    seed: int = 42,
    operator_bound: bool = True,
    options: dict | None = None,
) -> CheckReport:
    """Restriction and companion as mutually inverse operators (when they are).

    Clauses: H(ρ(g)) = g always; ρ(H(f)) = f when the complement of K is
    connected; otherwise the locally constant map must deviate by at least
    0.5 somewhere; and the companion obeys the operator seminorm bound.
    """
    options = _options(options)
    rng = np.random.default_rng(seed)
    dim = omega.ambient_dim
    pts = sample_domain(omega, n_samples, rng)
    h_rho = _companion_rows(restrict(g, K), K, omega, pts, options)
    err_i = np.max(np.abs(h_rho - g(pts)), axis=1)
    worst_i = int(np.argmax(err_i))
    violations = {"left_inverse": float(err_i[worst_i])}
    witness = _point(pts[worst_i], dim)
    details: dict[str, Any] = {"left_inverse_max_error": float(err_i[worst_i]), "seed": seed}
    grid = _grid_for(K, omega, grid)
    if grid is None:
        details["connectivity"] = "not evaluated (no native grid)"
    else:
        connected = is_connected(grid, "complement-k")
        details["complement_connected"] = connected
        if connected and f is not None:
            xs = sample_domain(omega, n_samples, rng, avoid=K, gap=1e-6)
            err = np.max(np.abs(_companion_rows(f, K, omega, xs, options) - f(xs)), axis=1)
            details["right_inverse_max_error"] = float(err.max())
            violations["right_inverse"] = float(err.max())
            if err.max() > violations["left_inverse"]:
                witness = _point(xs[int(np.argmax(err))], dim)
        elif not connected:
            x = _deep_bounded_point(grid)
            if x is None:
                details["counterexample"] = "no bounded component meets Ω"
            else:
                lc = locally_constant_counterexample(grid)
                tilde = companion_value(lc, K, omega, x, **options).scalar
                dev = abs(tilde - 1.0)
                details["counterexample"] = {"point": x, "companion": tilde, "value": 1.0, "deviation": dev}
                violations["counterexample"] = max(0.0, 0.5 - dev)
    if operator_bound:
        target = f if f is not None else restrict(g, K)
        bound = _operator_bound(target, K, omega, rng, options)
        details["operator_bound"] = bound
        if bound.get("evaluated"):
            violations["operator_bound"] = max(0.0, -bound["slack"])
    details["violations"] = violations
    worst = max(violations.values())
    return _report("roundtrip", worst, tol, witness, 2 * n_samples, details)


# ---------------------------------------------------------------- composition


def verify_composition(
    f: HoloFn,
    g_outer: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    n_samples: int = 20,
    tol: float = 1e-8,
    seed: int = 42,
    options: dict | None = None,
) -> CheckReport:
    """companion(g ∘ f) against g ∘ companion(f)."""
    options = _options(options)
    rng = np.random.default_rng(seed)
    dim = omega.ambient_dim
    pts = sample_domain(omega, n_samples, rng)
    lhs = _companion_rows(compose(g_outer, f), K, omega, pts, options)
    rhs = g_outer(_companion_rows(f, K, omega, pts, options))
    err = np.max(np.abs(lhs - rhs), axis=1)
    worst = int(np.argmax(err))
    return _report("composition", err[worst], tol, _point(pts[worst], dim), n_samples, {"seed": seed})


# ---------------------------------------------------------------- boundary principle


def verify_boundary(
    f: HoloFn,
    omega: DomainSpec,
    slices: Sequence[PlaneSlice],
    n_samples: int = 2000,
    p: SeminormSpec | None = None,
    tol: float = 1e-6,
    levels: Sequence[int] = (4096, 16384, 65536),
    image_tol: float = DEFAULT_IMAGE_TOL,
    seed: int = 42,
) -> CheckReport:
    """Sup of p ∘ f over each plane cut is attained on the cut's boundary.

    For scalar f the sampled images of interior points must also approach the
    image of the boundary as the ray family is refined (nested ray sets).
    """
    rng = np.random.default_rng(seed)
    norm = (lambda v: seminorm_eval(p, v)) if p is not None else (lambda v: np.linalg.norm(v, axis=1))
    worst, witness, used = -math.inf, None, 0
    per_slice = []
    image_violation = 0.0
    for plane in slices:
        cut = cut_restrict(omega, plane)
        inner = sample_domain(cut, n_samples, rng)
        bd = {lv: boundary2_coords(omega, plane, lv) for lv in levels}
        finest = bd[levels[-1]]
        width = max(plane.width, 1)
        f_in = f(plane.embed_dense(inner, width))
        f_bd = f(plane.embed_dense(finest, width)) if len(finest) else np.zeros((0, f.codomain_dim))
        sup_in = float(np.max(norm(f_in)))
        sup_bd = float(np.max(norm(f_bd))) if len(f_bd) else -math.inf
        gap = sup_in - sup_bd
        entry: dict[str, Any] = {"interior_sup": sup_in, "boundary_sup": sup_bd, "boundary_points": len(finest)}
        if len(f_bd):
            arg = int(np.argmax(norm(f_bd)))
            entry["boundary_argmax"] = plane.embed(finest[arg])
        if f.codomain_dim == 1 and len(finest):
            eps = []
            probe = f_in[: min(len(f_in), 500)]
            for lv in levels:
                imgs = f(plane.embed_dense(bd[lv], width))
                eps.append(float(max(hull_distance(v, imgs, "set") for v in probe)))
            entry["image_eps"] = eps
            image_violation = max(image_violation, _image_violation(eps, image_tol) - image_tol)
        per_slice.append(entry)
        used += len(inner) + len(finest)
        if gap > worst:
            worst = gap
            witness = plane.embed(inner[int(np.argmax(norm(f_in)))])
    violation = max(0.0, worst) + max(0.0, image_violation)
    details = {"slices": per_slice, "levels": list(levels), "image_tol": image_tol, "seed": seed}
    return _report("boundary", violation, tol, witness, used, details)


# ---------------------------------------------------------------- max-min principle


def find_local_max(
    f: HoloFn,
    p: SeminormSpec,
    omega: DomainSpec,
    candidates: np.ndarray,
    step: float = 1e-3,
) -> CPoint | None:
    """First candidate c with p(f(c)) >= p(f) at all 2n real-axis neighbours in Ω."""
    dim = int(omega.ambient_dim)
    offsets = np.concatenate([np.eye(dim), 1j * np.eye(dim)])
    offsets = np.concatenate([offsets, -offsets]) * step
    for c in candidates:
        nbrs = c[None, :] + offsets
        if not np.all(omega.contains(nbrs)):
            continue
        if seminorm_eval(p, f(c[None, :])[0]) >= np.max(seminorm_eval(p, f(nbrs))):
            return CPoint.from_dense(c, dim)
    return None


def _flatness_residual(values: np.ndarray) -> float:
    """Distance of sampled values from their best complex affine hyperplane."""
    centred = values - values.mean(axis=0, keepdims=True)
    if values.shape[1] == 1:
        return float(np.max(np.abs(centred)))
    _, _, vh = np.linalg.svd(centred, full_matrices=False)
    normal = vh[-1].conj()
    return float(np.max(np.abs(centred @ normal)))


def verify_max_min(
    f: HoloFn,
    p: SeminormSpec,
    omega: DomainSpec,
    c: CPoint,
    n_samples: int = 10000,
    tol: float = 1e-12,
    seed: int = 42,
) -> CheckReport:
    """A local maximum of p ∘ f is a global minimum, with a flat range.

    If c is not a sampled local maximum the hypothesis fails and the check
    passes vacuously.
    """
    rng = np.random.default_rng(seed)
    dim = int(omega.ambient_dim)
    cvec = c.dense(dim)
    is_max = find_local_max(f, p, omega, cvec[None, :]) is not None
    pts = sample_domain(omega, n_samples, rng)
    vals = f(pts)
    pv = seminorm_eval(p, vals)
    pc = seminorm_eval(p, f(cvec[None, :])[0])
    details: dict[str, Any] = {"c_is_local_max": is_max, "p_f_c": pc, "seed": seed}
    if not is_max:
        details["vacuous"] = True
        return _report("max-min", 0.0, tol, c, n_samples, details)
    arg = int(np.argmin(pv))
    min_violation = max(0.0, pc - float(pv[arg]))
    flat = _flatness_residual(vals)
    min_norm = float(np.min(np.linalg.norm(vals, axis=1)))
    zero_violation = 1.0 if (pc > 0 and min_norm == 0.0) else 0.0
    details.update({"min_p_f": float(pv[arg]), "flatness_residual": flat, "min_norm_f": min_norm})
    violation = max(min_violation, flat, zero_violation)
    return _report("max-min", violation, tol, _point(pts[arg], dim), n_samples, details)


# ---------------------------------------------------------------- identity theorem


def verify_identity(
    f1: HoloFn,
    f2: HoloFn,
    C_spec: Ball,
    omega: DomainSpec,
    n_samples: int = 200,
    tol: float = 1e-8,
    seed: int = 42,
    options: dict | None = None,
) -> CheckReport:
    """Agreement on a small ball forces agreement on Ω (to ten times the tolerance)."""
    rng = np.random.default_rng(seed)
    dim = omega.ambient_dim
    c_pts = sample_domain(C_spec, n_samples, rng)
    c_pts = c_pts[omega.contains(c_pts)]
    agree_c = float(np.max(np.abs(f1(c_pts) - f2(c_pts))))
    details: dict[str, Any] = {"max_diff_on_C": agree_c, "seed": seed}
    if agree_c > tol:
        details["vacuous"] = True
        return _report("identity", 0.0, 10 * tol, None, len(c_pts), details)
    pts = sample_domain(omega, n_samples, rng)
    diff = np.max(np.abs(f1(pts) - f2(pts)), axis=1)
    worst = int(np.argmax(diff))
    details["max_diff_on_omega"] = float(diff[worst])
    return _report("identity", diff[worst], 10 * tol, _point(pts[worst], dim), len(c_pts) + n_samples, details)


# ---------------------------------------------------------------- level sets


def _newton_roots(h, starts: np.ndarray, fixed: np.ndarray, iters: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Newton for h(fixed, z) = 0 in z from each start; returns roots and success flags."""
    z = starts.astype(complex).copy()
    delta = 1e-7
    for _ in range(iters):
        val = h(fixed, z)
        der = (h(fixed, z + delta) - h(fixed, z - delta)) / (2 * delta)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.abs(der) > 1e-14, val / der, 0.0)
        z = z - step
        z = np.where(np.isfinite(z), z, 0.0)
    val = h(fixed, z)
    ok = np.isfinite(val) & (np.abs(val) <= 1e-10)
    return z, ok


def verify_level_sets(
    f: HoloFn,
    omega: DomainSpec,
    plane: PlaneSlice,
    value: complex = 0.0,
    resolution: int = 33,
    starts_per_axis: int = 5,
) -> CheckReport:
    """A nonempty sampled level set on a plane cut meets every band toward the cut's boundary.

    Bands are clearance shells ``[D 2^-(k+1), D 2^-k]`` for ``k = 1, 2, ...``
    down to the sampling step, with D the largest clearance seen in the cut.
    The violation is the number of bands the level set misses.
    """
    cut = cut_restrict(omega, plane)
    ball = cut.bounding_ball(2)
    if ball is None:
        raise InvalidInput("level-set check needs a bounded plane cut")
    centre, radius = np.asarray(ball[0], complex), float(ball[1])
    width = max(plane.width, 1)
    t = np.linspace(-radius, radius, resolution)
    step = t[1] - t[0]
    re, im = np.meshgrid(t, t, indexing="ij")
    fixed_axis = (re + 1j * im).ravel()
    s = np.linspace(-radius, radius, starts_per_axis)
    sr, si = np.meshgrid(s, s, indexing="ij")
    start_axis = (sr + 1j * si).ravel()

    def make_h(free: int):
        def h(fixed, z):
            coords = np.empty((z.size, 2), complex)
            coords[:, 1 - free] = centre[1 - free] + fixed
            coords[:, free] = centre[free] + z
            return f(plane.embed_dense(coords, width))[:, 0] - value

        return h

    found = []
    for free in (0, 1):
        fixed = np.repeat(fixed_axis, start_axis.size)
        starts = np.tile(start_axis, fixed_axis.size)
        roots, ok = _newton_roots(make_h(free), starts, fixed)
        coords = np.empty((roots.size, 2), complex)
        coords[:, 1 - free] = centre[1 - free] + fixed
        coords[:, free] = centre[free] + roots
        coords = coords[ok]
        coords = coords[cut.contains(coords)] if len(coords) else coords
        found.append(coords)
    level = np.concatenate(found)
    details: dict[str, Any] = {"value": complex(value), "resolution": resolution, "level_points": len(level)}
    if len(level) == 0:
        details["vacuous"] = True
        return _report("level-sets", 0, 0, None, 0, details)
    # largest clearance over a coarse sample of the cut
    probe = np.concatenate([level, sample_domain(cut, 2000, np.random.default_rng(0))])
    try:
        clear_level = cut.clearance(level)
        d_max = float(np.max(cut.clearance(probe)))
    except NotImplementedError:
        raise InvalidInput("level-set check needs a domain with a clearance bound") from None
    bands = []
    k = 1
    while d_max * 2.0 ** (-k - 1) >= step:
        lo, hi = d_max * 2.0 ** (-k - 1), d_max * 2.0**-k
        hit = bool(np.any((clear_level >= lo) & (clear_level <= hi)))
        bands.append({"k": k, "low": lo, "high": hi, "met": hit})
        k += 1
    missed = [b for b in bands if not b["met"]]
    details.update({"d_max": d_max, "bands": bands, "min_clearance": float(clear_level.min())})
    witness = plane.embed(level[int(np.argmin(clear_level))])
    return _report("level-sets", len(missed), 0, witness, len(level), details)


# ---------------------------------------------------------------- serialization


def write_reports_json(reports: Sequence[CheckReport], path: str | Path, extra: dict | None = None) -> None:
    payload = dict(extra or {})
    payload["checks"] = [r.to_json() for r in reports]
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _witness_cell(w: Any) -> str:
    return "" if w is None else json.dumps(_jsonable(w), separators=(",", ":"))


def write_summary_csv(rows: Sequence[tuple[str, CheckReport]], path: str | Path) -> None:
    """One row per (scenario, check)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario_id", "check_id", "pass", "worst_violation", "tolerance", "samples_used", "witness"])
        for scenario_id, r in rows:
            w.writerow(
                [
                    scenario_id,
                    r.check_id,
                    "true" if r.passed else "false",
                    format_number(r.worst_violation),
                    format_number(r.tolerance),
                    r.samples_used,
                    _witness_cell(r.witness),
                ]
            )
