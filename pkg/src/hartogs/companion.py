"""Holomorphic maps and their Hartogs companions.

All evaluators reduce to one contour integral along a complex line
``x + C u``:  ``(1/2πi) ∮_{∂G} f(x + ζu) / ζ dζ`` with G an admissible
union of discs.  The 1D Cauchy form is the case ``u = 1``.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import (
    AdmissibilityViolation,
    CutNotCompact,
    DomainViolation,
    DomainViolationWarning,
    InvalidInput,
    NotConverged,
    SynthesisFailed,
)
from .geometry import (
    DEFAULT_DENSITY,
    DEFAULT_MARGIN,
    UNBOUNDED,
    CompactSpec,
    CPoint,
    DomainSpec,
    PlanarRegion,
    PlaneSlice,
    check_admissible,
    contour_of,
    cut_restrict,
    synthesize_admissible,
    working_width,
)
from .quadrature import (
    DEFAULT_NODE_CAP,
    DEFAULT_TOL,
    QuadratureResult,
    integrate_contour,
)

if TYPE_CHECKING:
    from .oracles import LaurentData

__all__ = [
    "CompanionResult",
    "HoloFn",
    "candidate_directions",
    "combine",
    "companion_1d",
    "companion_finitely_open",
    "companion_fn",
    "companion_nd",
    "companion_outer",
    "companion_value",
    "compose",
    "restrict",
]

N_RANDOM_DIRECTIONS = 8


@dataclass(frozen=True, eq=False)
class HoloFn:
    """Vectorized map ``(N, w) -> (N, m)`` with catalog metadata."""

    catalog_id: str
    fn: Callable[[np.ndarray], np.ndarray]
    ambient_dim: int | str
    codomain_dim: int = 1
    params: Mapping[str, Any] = field(default_factory=dict)
    domain: DomainSpec | None = None
    excluded: CompactSpec | None = None
    laurent: LaurentData | None = None
    known_extension: HoloFn | None = None
    reference: HoloFn | None = None

    def width_for(self, x: CPoint) -> int:
        if self.ambient_dim == UNBOUNDED:
            return max(1, x.support_width)
        return int(self.ambient_dim)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[None, :]
        out = np.asarray(self.fn(pts), dtype=complex)
        if out.ndim == 1:
            out = out[:, None]
        if out.ndim == 0 or out.shape[0] != pts.shape[0]:
            out = np.broadcast_to(out.reshape(1, -1), (pts.shape[0], self.codomain_dim))
        return out

    def in_domain(self, x: CPoint) -> bool:
        if self.domain is not None and not self.domain.member(x):
            return False
        if self.excluded is not None and self.excluded.member(x):
            return False
        return True

    def evaluate(self, x: CPoint, strict: bool = False) -> np.ndarray:
        """Value at one point; a point outside the declared domain is flagged."""
        if not self.in_domain(x):
            msg = f"{self.catalog_id} evaluated outside its domain at {x.to_json()}"
            if strict:
                raise DomainViolation(msg)
            warnings.warn(msg, DomainViolationWarning, stacklevel=2)
        return self(x.dense(self.width_for(x))[None, :])[0]


@dataclass(frozen=True)
class CompanionResult:
    value: np.ndarray
    admissible_set_used: PlanarRegion | None
    direction_used: CPoint | None
    quadrature: QuadratureResult

    @property
    def scalar(self) -> complex:
        return complex(self.value[0])


def candidate_directions(dim: int, seed: int = 0) -> list[np.ndarray]:
    """Coordinate unit vectors followed by seeded random complex unit vectors."""
    eye = [np.eye(dim, dtype=complex)[i] for i in range(dim)]
    rng = np.random.default_rng(seed)
    extra = []
    for _ in range(N_RANDOM_DIRECTIONS):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        extra.append(v / np.linalg.norm(v))
    return eye + extra


def _line_integral(
    f: HoloFn, x: np.ndarray, u: np.ndarray, G: PlanarRegion, tol: float, node_cap: int
) -> QuadratureResult:
    def integrand(zeta: np.ndarray) -> np.ndarray:
        pts = x[None, :] + zeta[:, None] * u[None, :]
        return f(pts) / zeta[:, None]

    # tolerance is on the companion value, hence the 2π rescaling
    raw = integrate_contour(integrand, contour_of(G), tol * 2 * math.pi, node_cap)
    return QuadratureResult(raw.value / (2j * math.pi), raw.est_error / (2 * math.pi), raw.nodes_used, raw.converged)


def _finish(q: QuadratureResult, G, u, accept_partial: bool) -> CompanionResult:
    if not q.converged and not accept_partial:
        raise NotConverged(f"quadrature did not converge (est. error {q.est_error:.3g})", q)
    return CompanionResult(q.value, G, u, q)


def _margin_at(omega: DomainSpec, X: np.ndarray, margin: float) -> float:
    """Synthesis margin, shrunk near ∂Ω so the disc around ζ = 0 still fits."""
    try:
        reach = float(omega.clearance(X[None, :])[0])
    except NotImplementedError:
        return margin
    return min(margin, reach / 3) if reach > 0 else margin


def _as_cpoint(v: np.ndarray, like: CPoint) -> CPoint:
    return CPoint.from_dense(v, like.ambient_dim)


def companion_nd(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    x: CPoint,
    u: CPoint | None = None,
    G: PlanarRegion | None = None,
    tol: float = DEFAULT_TOL,
    node_cap: int = DEFAULT_NODE_CAP,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
    seed: int = 0,
    accept_partial: bool = False,
) -> CompanionResult:
    """Representation-formula companion at ``x``.

    With ``G`` supplied (and ``u``, default the first unit vector) the pair
    is checked for admissibility.  Otherwise G is synthesized, sweeping the
    candidate directions when ``u`` is not given.
    """
    if x.is_sequence:
        raise InvalidInput("companion_nd needs finite ambient dimension; use companion_finitely_open")
    width = working_width(x)
    X = x.dense(width)
    if G is not None:
        u = u if u is not None else CPoint.basis(0, x.ambient_dim)
        report = check_admissible(G, x, u, K, omega, margin, density)
        if not report:
            raise AdmissibilityViolation("; ".join(report.violations))
        q = _line_integral(f, X, u.dense(width), G, tol, node_cap)
        return _finish(q, G, u, accept_partial)
    if K.is_empty:
        # Cauchy's formula on the small disc around 0 reproduces f(x); skip the roundoff
        if not omega.contains(X[None, :])[0]:
            raise InvalidInput("x is not in Ω")
        value = f(X[None, :])[0]
        return CompanionResult(value, None, u, QuadratureResult(value, 0.0, 0, True))
    dirs = [u.dense(width)] if u is not None else candidate_directions(width, seed)
    margin = _margin_at(omega, X, margin)
    failures = []
    for d in dirs:
        ud = _as_cpoint(d, x)
        try:
            G_d = synthesize_admissible(x, ud, K, omega, margin, density)
        except SynthesisFailed as exc:
            failures.append(str(exc))
            continue
        q = _line_integral(f, X, ud.dense(width), G_d, tol, node_cap)
        return _finish(q, G_d, ud, accept_partial)
    raise SynthesisFailed(f"no admissible set for any of {len(dirs)} directions; last: {failures[-1]}")


def companion_1d(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    z: complex,
    tol: float = DEFAULT_TOL,
    node_cap: int = DEFAULT_NODE_CAP,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
    accept_partial: bool = False,
) -> CompanionResult:
    """Cauchy integral over the boundary of a disc union D with K ∪ {z} ⊂ D ⊂ D̄ ⊂ Ω."""
    if omega.ambient_dim != 1:
        raise InvalidInput("companion_1d needs ambient dimension 1")
    x = CPoint.from_dense([z], 1)
    one = CPoint.basis(0, 1)
    G = synthesize_admissible(x, one, K, omega, _margin_at(omega, x.dense(1), margin), density)
    q = _line_integral(f, x.dense(1), np.ones(1, complex), G, tol, node_cap)
    return _finish(q, G, one, accept_partial)


def companion_outer(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    u: CPoint,
    x: CPoint,
    tol: float = DEFAULT_TOL,
    node_cap: int = DEFAULT_NODE_CAP,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
    accept_partial: bool = False,
) -> CompanionResult:
    """1-companion of f restricted to the line x + C u, evaluated at parameter 0."""
    width = working_width(x, u)
    X, U = x.dense(width), u.dense(width)
    if not omega.contains(X[None, :])[0]:
        raise InvalidInput("x is not in Ω")
    pieces = K.line_cut(X, U)  # raises LineCutNotCompact
    if not pieces:
        value = f(X[None, :])[0]
        return CompanionResult(value, None, u, QuadratureResult(value, 0.0, 0, True))
    G = synthesize_admissible(x, u, K, omega, _margin_at(omega, X, margin), density)
    q = _line_integral(f, X, U, G, tol, node_cap)
    return _finish(q, G, u, accept_partial)


def companion_finitely_open(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    x: CPoint,
    plane: PlaneSlice,
    u: CPoint | None = None,
    tol: float = DEFAULT_TOL,
    node_cap: int = DEFAULT_NODE_CAP,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
    seed: int = 0,
    accept_partial: bool = False,
) -> CompanionResult:
    """Companion of the data restricted to a 2-plane through x, at x.

    ``u``, if given, is a direction in plane coordinates (a point of C²).
    """
    _, resid = plane.coordinates_of(x)
    if resid > 1e-12 * max(1.0, x.norm()):
        raise InvalidInput("the plane does not contain x")
    if not omega.member(x):
        raise InvalidInput("x is not in Ω")
    local = plane.rebased(x)
    K_cut = cut_restrict(K, local)
    omega_cut = cut_restrict(omega, local)
    if not K.is_empty and K_cut.bounding_ball(2) is None:
        raise CutNotCompact("cannot bound the plane cut of K")
    width = local.width

    def restricted(coords: np.ndarray) -> np.ndarray:
        return f(local.embed_dense(coords[:, :2], width))

    f_cut = HoloFn(f"{f.catalog_id}|plane", restricted, 2, f.codomain_dim)
    res = companion_nd(
        f_cut, K_cut, omega_cut, CPoint.zero(2), u, None, tol, node_cap, margin, density, seed, accept_partial
    )
    d = res.direction_used.dense(2)
    direction = CPoint.from_dense(local.matrix() @ d, UNBOUNDED if x.is_sequence else x.ambient_dim)
    return CompanionResult(res.value, res.admissible_set_used, direction, res.quadrature)


def companion_value(
    f: HoloFn,
    K: CompactSpec,
    omega: DomainSpec,
    x: CPoint,
    **options: Any,
) -> CompanionResult:
    """Dispatch on dimension: Cauchy form in C, representation formula in C^n."""
    if x.ambient_dim == 1:
        return companion_1d(f, K, omega, x[0], **{k: v for k, v in options.items() if k not in ("seed", "u", "G")})
    return companion_nd(f, K, omega, x, **options)


def companion_fn(f: HoloFn, K: CompactSpec, omega: DomainSpec, **options: Any) -> HoloFn:
    """The companion as an evaluable map, one contour integral per point."""
    dim = omega.ambient_dim

    def fn(pts: np.ndarray) -> np.ndarray:
        rows = [companion_value(f, K, omega, CPoint.from_dense(p, dim), **options).value for p in pts]
        return np.array(rows, dtype=complex).reshape(len(pts), f.codomain_dim)

    return HoloFn(f"companion({f.catalog_id})", fn, dim, f.codomain_dim, domain=omega)


def restrict(g: HoloFn, K: CompactSpec) -> HoloFn:
    """Same evaluator, with K recorded as excluded and g as the known extension."""
    ext = g.known_extension if g.known_extension is not None else g
    ref = g.reference if g.reference is not None else ext
    return replace(g, excluded=K, known_extension=ext, reference=ref)


def compose(outer: HoloFn, f: HoloFn) -> HoloFn:
    """``outer ∘ f`` for a scalar outer map of one variable."""
    if outer.ambient_dim != f.codomain_dim:
        raise InvalidInput("outer map dimension must equal the codomain dimension of f")

    def fn(pts: np.ndarray) -> np.ndarray:
        return outer(f(pts))

    return HoloFn(
        f"{outer.catalog_id}∘{f.catalog_id}",
        fn,
        f.ambient_dim,
        outer.codomain_dim,
        domain=f.domain,
        excluded=f.excluded,
    )


def combine(f: HoloFn, h: HoloFn, op: str) -> HoloFn:
    """Pointwise sum or product of two maps on the same space."""
    ops = {"add": np.add, "mul": np.multiply, "sub": np.subtract}
    func = ops[op]
    return HoloFn(
        f"{f.catalog_id}{op}{h.catalog_id}",
        lambda pts: func(f(pts), h(pts)),
        f.ambient_dim,
        max(f.codomain_dim, h.codomain_dim),
        domain=f.domain,
        excluded=f.excluded,
    )
