"""Points, affine slices, disc regions and the set descriptions for Ω and K.

Every set works on batches of dense coordinate rows.  A batch has shape
``(N, w)``; for finite ambient dimension ``w`` equals it, and in sequence
mode ``w`` is any width covering the supports involved (missing coordinates
are zero).  Domains expose ``clearance``, a lower bound for the Euclidean
distance to their complement; compacts expose ``line_cut``, a list of
closed discs in the parameter plane of a complex line that together cover
the intersection of K with that line.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np

from .errors import InvalidInput, LineCutNotCompact, SynthesisFailed

__all__ = [
    "DEFAULT_DENSITY",
    "DEFAULT_MARGIN",
    "UNBOUNDED",
    "AdmissibilityReport",
    "Ball",
    "CPoint",
    "Circle",
    "ClosedBall",
    "CompactSpec",
    "Contour",
    "DomainDifference",
    "DomainSpec",
    "DomainUnion",
    "EmptySet",
    "HalfSpace",
    "LineSlice",
    "MomentCurve",
    "ParametricCurve",
    "PlanarRegion",
    "PlaneSlice",
    "PointSet",
    "PointwiseBound",
    "Polydisc",
    "PowerCone",
    "SequenceBox",
    "SlicedCompact",
    "SlicedDomain",
    "Sphere",
    "as_complex",
    "check_admissible",
    "compact_from_dict",
    "contour_of",
    "cut_restrict",
    "domain_from_dict",
    "synthesize_admissible",
    "working_width",
]

UNBOUNDED = "unbounded"
DEFAULT_MARGIN = 0.05
DEFAULT_DENSITY = 512
_MAX_RING_NODES = 1 << 15


def as_complex(value: Any) -> complex:
    """Parse a JSON-friendly complex: a number, ``[re, im]`` or a string."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInput(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    raise InvalidInput(f"cannot read {value!r} as a complex number")


def _complex_to_json(z: complex) -> Any:
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


# ---------------------------------------------------------------- points


@dataclass(frozen=True)
class CPoint:
    """Sparse complex point; zero entries are dropped on construction."""

    entries: tuple[tuple[int, complex], ...] = ()
    ambient_dim: int | str = UNBOUNDED

    def __post_init__(self) -> None:
        dim = self.ambient_dim
        if dim != UNBOUNDED and (not isinstance(dim, (int, np.integer)) or dim < 1):
            raise InvalidInput(f"ambient_dim must be a positive int or {UNBOUNDED!r}")
        seen: set[int] = set()
        clean = []
        for idx, val in self.entries:
            idx = int(idx)
            val = complex(val)
            if idx < 0 or idx in seen:
                raise InvalidInput(f"bad or repeated index {idx}")
            if dim != UNBOUNDED and idx >= dim:
                raise InvalidInput(f"index {idx} out of range for dimension {dim}")
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise InvalidInput("CPoint entries must be finite")
            seen.add(idx)
            if val != 0:
                clean.append((idx, val))
        object.__setattr__(self, "entries", tuple(sorted(clean)))
        if dim != UNBOUNDED:
            object.__setattr__(self, "ambient_dim", int(dim))

    @classmethod
    def from_dense(cls, values: Iterable[complex], ambient_dim: int | str | None = None) -> CPoint:
        vals = [complex(v) for v in values]
        dim = len(vals) if ambient_dim is None else ambient_dim
        return cls(tuple(enumerate(vals)), dim)

    @classmethod
    def from_mapping(cls, mapping: dict[int, complex], ambient_dim: int | str = UNBOUNDED) -> CPoint:
        return cls(tuple((int(k), complex(v)) for k, v in mapping.items()), ambient_dim)

    @classmethod
    def basis(cls, index: int, ambient_dim: int | str = UNBOUNDED) -> CPoint:
        return cls(((index, 1.0),), ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int | str = UNBOUNDED) -> CPoint:
        return cls((), ambient_dim)

    @property
    def is_sequence(self) -> bool:
        return self.ambient_dim == UNBOUNDED

    @property
    def support_width(self) -> int:
        return self.entries[-1][0] + 1 if self.entries else 0

    def __getitem__(self, index: int) -> complex:
        for idx, val in self.entries:
            if idx == index:
                return val
        return 0j

    def dense(self, width: int | None = None) -> np.ndarray:
        if width is None:
            width = self.ambient_dim if not self.is_sequence else max(self.support_width, 1)
        if width < self.support_width:
            raise InvalidInput(f"width {width} too small for support {self.support_width}")
        out = np.zeros(width, dtype=complex)
        for idx, val in self.entries:
            out[idx] = val
        return out

    def _combine(self, other: CPoint, sign: float) -> CPoint:
        if self.ambient_dim != other.ambient_dim:
            raise InvalidInput("cannot combine points of different ambient dimension")
        acc = dict(self.entries)
        for idx, val in other.entries:
            acc[idx] = acc.get(idx, 0j) + sign * val
        return CPoint.from_mapping(acc, self.ambient_dim)

    def __add__(self, other: CPoint) -> CPoint:
        return self._combine(other, 1.0)

    def __sub__(self, other: CPoint) -> CPoint:
        return self._combine(other, -1.0)

    def __mul__(self, scalar: complex) -> CPoint:
        s = complex(scalar)
        return CPoint(tuple((i, s * v) for i, v in self.entries), self.ambient_dim)

    __rmul__ = __mul__

    def __neg__(self) -> CPoint:
        return self * -1.0

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for _, v in self.entries))

    def to_json(self) -> Any:
        if self.is_sequence:
            return {str(i): _complex_to_json(v) for i, v in self.entries}
        return [_complex_to_json(v) for v in self.dense()]

    @classmethod
    def from_json(cls, data: Any, ambient_dim: int | str) -> CPoint:
        if isinstance(data, dict):
            return cls.from_mapping({int(k): as_complex(v) for k, v in data.items()}, ambient_dim)
        if isinstance(data, (int, float, str)) and ambient_dim == 1:
            data = [data]
        values = [as_complex(v) for v in data]
        if ambient_dim != UNBOUNDED and len(values) != ambient_dim:
            raise InvalidInput(f"expected {ambient_dim} coordinates, got {len(values)}")
        return cls.from_dense(values, ambient_dim)


def working_width(*points: CPoint) -> int:
    """Dense width able to hold every given point."""
    dims = {p.ambient_dim for p in points}
    if len(dims) > 1:
        raise InvalidInput("points live in different ambient spaces")
    dim = dims.pop()
    if dim != UNBOUNDED:
        return int(dim)
    return max(1, max(p.support_width for p in points))


def _rows(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    return pts[None, :] if pts.ndim == 1 else pts


def _pad(vec: Sequence[complex] | np.ndarray, width: int) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    if v.size >= width:
        return v[:width] if not np.any(v[width:]) else v
    out = np.zeros(width, dtype=complex)
    out[: v.size] = v
    return out


def _match(points: np.ndarray, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zero-pad a batch and a vector to a common width."""
    w = max(points.shape[1], vec.size)
    if points.shape[1] < w:
        points = np.hstack([points, np.zeros((points.shape[0], w - points.shape[1]), complex)])
    return points, _pad(vec, w)


# ---------------------------------------------------------------- slices


@dataclass(frozen=True)
class _AffineSlice:
    base: CPoint
    dirs: tuple[CPoint, ...]

    def __post_init__(self) -> None:
        for d in self.dirs:
            if d.ambient_dim != self.base.ambient_dim:
                raise InvalidInput("slice base and directions must share the ambient space")
            if not d.entries:
                raise InvalidInput("slice direction must be nonzero")
        if len(self.dirs) == 2:
            s = np.linalg.svd(self.matrix(), compute_uv=False)
            if s[-1] <= 1e-12 * s[0]:
                raise InvalidInput("plane directions must be linearly independent over C")

    @property
    def dim(self) -> int:
        return len(self.dirs)

    @property
    def width(self) -> int:
        return working_width(self.base, *self.dirs)

    def matrix(self, width: int | None = None) -> np.ndarray:
        """Linear part as a ``(width, dim)`` matrix."""
        w = self.width if width is None else width
        return np.stack([d.dense(w) for d in self.dirs], axis=1)

    def embed_dense(self, coords: np.ndarray, width: int | None = None) -> np.ndarray:
        w = self.width if width is None else width
        c = np.asarray(coords, dtype=complex)
        c = c.reshape(-1, self.dim)
        return self.base.dense(w)[None, :] + c @ self.matrix(w).T

    def embed(self, coords: complex | Sequence[complex]) -> CPoint:
        row = self.embed_dense(np.atleast_1d(np.asarray(coords, dtype=complex)))[0]
        return CPoint.from_dense(row, self.base.ambient_dim if not self.base.is_sequence else UNBOUNDED)

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix(), compute_uv=False)

    def coordinates_of(self, x: CPoint) -> tuple[np.ndarray, float]:
        """Least-squares slice coordinates of ``x`` and the residual norm."""
        w = working_width(self.base, x, *self.dirs)
        A = self.matrix(w)
        rhs = x.dense(w) - self.base.dense(w)
        coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        return coef, float(np.linalg.norm(A @ coef - rhs))


@dataclass(frozen=True)
class LineSlice(_AffineSlice):
    def __init__(self, base: CPoint, direction: CPoint):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dirs", (direction,))
        self.__post_init__()

    @property
    def direction(self) -> CPoint:
        return self.dirs[0]


@dataclass(frozen=True)
class PlaneSlice(_AffineSlice):
    def __init__(self, base: CPoint, dir1: CPoint, dir2: CPoint):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dirs", (dir1, dir2))
        self.__post_init__()

    def rebased(self, base: CPoint) -> PlaneSlice:
        return PlaneSlice(base, self.dirs[0], self.dirs[1])


# ---------------------------------------------------------------- planar regions and contours


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    orientation: int = 1

    def reversed(self) -> Circle:
        return Circle(self.center, self.radius, -self.orientation)


@dataclass(frozen=True)
class Contour:
    curves: tuple[Circle, ...]
    nodes_hint: int = 64

    def reversed(self) -> Contour:
        return Contour(tuple(c.reversed() for c in self.curves), self.nodes_hint)


@dataclass(frozen=True)
class PlanarRegion:
    """Finite union of open discs whose closures are pairwise separated."""

    discs: tuple[tuple[complex, float], ...]
    clearance: float = 0.0

    def __post_init__(self) -> None:
        clean = tuple((complex(c), float(r)) for c, r in self.discs)
        if not clean:
            raise InvalidInput("a planar region needs at least one disc")
        for _, r in clean:
            if not r > 0:
                raise InvalidInput("disc radii must be positive")
        for i in range(len(clean)):
            for j in range(i + 1, len(clean)):
                (c1, r1), (c2, r2) = clean[i], clean[j]
                gap = abs(c1 - c2) - r1 - r2
                if gap <= 0 or gap < self.clearance - 1e-12:
                    raise InvalidInput("closed discs must be pairwise disjoint with the configured gap")
        object.__setattr__(self, "discs", clean)

    @classmethod
    def disc(cls, center: complex, radius: float) -> PlanarRegion:
        return cls(((center, radius),))

    def contains(self, zeta: np.ndarray | complex) -> np.ndarray:
        z = np.asarray(zeta, dtype=complex)
        inside = np.zeros(z.shape, dtype=bool)
        for c, r in self.discs:
            inside |= np.abs(z - c) < r
        return inside

    def to_json(self) -> list:
        return [{"center": _complex_to_json(c), "radius": r} for c, r in self.discs]


def contour_of(G: PlanarRegion, nodes_hint: int = 64) -> Contour:
    """Positively oriented boundary, one circle per disc."""
    return Contour(tuple(Circle(c, r, 1) for c, r in G.discs), nodes_hint)


# ---------------------------------------------------------------- domains


class DomainSpec(ABC):
    kind: ClassVar[str]
    ambient_dim: int | str

    @abstractmethod
    def contains(self, points: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def clearance(self, points: np.ndarray) -> np.ndarray:
        """Lower bound on the distance to the complement (nonpositive outside)."""

    def bounding_ball(self, width: int) -> tuple[np.ndarray, float] | None:
        return None

    @abstractmethod
    def to_dict(self) -> dict: ...

    def member(self, x: CPoint) -> bool:
        return bool(self.contains(x.dense(self._width_for(x))[None, :])[0])

    def _width_for(self, x: CPoint) -> int:
        if self.ambient_dim == UNBOUNDED:
            return max(1, x.support_width)
        if x.ambient_dim != UNBOUNDED and x.ambient_dim != self.ambient_dim:
            raise InvalidInput(f"point of dimension {x.ambient_dim} in a {self.ambient_dim}-dimensional domain")
        return int(self.ambient_dim)

    def cut_bounding_ball(self, slc) -> tuple[np.ndarray, float] | None:
        """Ball in slice coordinates containing the cut, or None if unknown."""
        return _slice_ball(self.bounding_ball(max(slc.width, 1)), slc)

    def line_clearance(self, a: np.ndarray, u: np.ndarray, zetas: np.ndarray) -> np.ndarray:
        """Clearance inside the line slice, in units of the line parameter."""
        z = np.asarray(zetas, dtype=complex).ravel()
        pts = a[None, :] + z[:, None] * u[None, :]
        return self.clearance(pts) / np.linalg.norm(u)


@dataclass(frozen=True)
class Ball(DomainSpec):
    center: tuple[complex, ...]
    radius: float
    kind: ClassVar[str] = "ball"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        if not self.radius > 0:
            raise InvalidInput("ball radius must be positive")

    @property
    def ambient_dim(self) -> int:
        return len(self.center)

    def _dist(self, points: np.ndarray) -> np.ndarray:
        pts, c = _match(_rows(points), np.asarray(self.center))
        return np.linalg.norm(pts - c, axis=1)

    def contains(self, points):
        return self._dist(points) < self.radius

    def clearance(self, points):
        return self.radius - self._dist(points)

    def bounding_ball(self, width):
        return _pad(self.center, width), float(self.radius)

    def to_dict(self):
        return {"kind": self.kind, "center": [_complex_to_json(c) for c in self.center], "radius": self.radius}


@dataclass(frozen=True)
class Polydisc(DomainSpec):
    center: tuple[complex, ...]
    radii: tuple[float, ...]
    kind: ClassVar[str] = "polydisc"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.center) != len(self.radii) or min(self.radii) <= 0:
            raise InvalidInput("polydisc needs one positive radius per coordinate")

    @property
    def ambient_dim(self) -> int:
        return len(self.center)

    def clearance(self, points):
        pts = _rows(points)
        return np.min(np.asarray(self.radii) - np.abs(pts - np.asarray(self.center)), axis=1)

    def contains(self, points):
        return self.clearance(points) > 0

    def bounding_ball(self, width):
        return _pad(self.center, width), float(np.linalg.norm(self.radii))

    def to_dict(self):
        return {"kind": self.kind, "center": [_complex_to_json(c) for c in self.center], "radii": list(self.radii)}


@dataclass(frozen=True)
class HalfSpace(DomainSpec):
    """``{x : Re(sum_i functional_i x_i) > offset}``."""

    functional: tuple[complex, ...]
    offset: float = 0.0
    kind: ClassVar[str] = "halfspace"

    def __post_init__(self) -> None:
        object.__setattr__(self, "functional", tuple(complex(c) for c in self.functional))
        if not any(self.functional):
            raise InvalidInput("halfspace functional must be nonzero")

    @property
    def ambient_dim(self) -> int:
        return len(self.functional)

    def clearance(self, points):
        pts = _rows(points)
        phi = np.asarray(self.functional)
        return ((pts @ phi).real - self.offset) / np.linalg.norm(phi)

    def contains(self, points):
        return self.clearance(points) > 0

    def to_dict(self):
        return {"kind": self.kind, "functional": [_complex_to_json(c) for c in self.functional], "offset": self.offset}


def _rho_values(values: tuple[float, ...], tail: float, width: int) -> np.ndarray:
    out = np.full(width, tail, dtype=float)
    k = min(width, len(values))
    out[:k] = values[:k]
    return out


@dataclass(frozen=True)
class SequenceBox(DomainSpec):
    """``{w : |w_i| < scale * rho_i for all i}`` on finitely supported sequences."""

    rho: tuple[float, ...] = ()
    tail: float = 1.0
    scale: float = 2.0
    ambient_dim: int | str = UNBOUNDED
    kind: ClassVar[str] = "sequence-box"

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", tuple(float(r) for r in self.rho))
        if min((*self.rho, self.tail)) <= 0:
            raise InvalidInput("rho must be positive")

    def radii(self, width: int) -> np.ndarray:
        return self.scale * _rho_values(self.rho, self.tail, width)

    def clearance(self, points):
        pts = _rows(points)
        return np.min(self.radii(pts.shape[1]) - np.abs(pts), axis=1)

    def contains(self, points):
        return self.clearance(points) > 0

    def line_clearance(self, a, u, zetas):
        # only coordinates moved by the line can reach the boundary
        z = np.asarray(zetas, dtype=complex).ravel()
        r = self.radii(a.size)
        fixed = u == 0
        if np.any(np.abs(a[fixed]) >= r[fixed]):
            return np.full(z.size, -1.0)
        moving = ~fixed
        pts = a[moving][None, :] + z[:, None] * u[moving][None, :]
        return np.min((r[moving] - np.abs(pts)) / np.abs(u[moving]), axis=1)

    def bounding_ball(self, width):
        return np.zeros(width, complex), float(np.linalg.norm(self.radii(width)))

    def to_dict(self):
        return {"kind": self.kind, "rho": list(self.rho), "tail": self.tail, "scale": self.scale}


@dataclass(frozen=True)
class DomainUnion(DomainSpec):
    parts: tuple[DomainSpec, ...]
    kind: ClassVar[str] = "union"

    def __post_init__(self) -> None:
        dims = {p.ambient_dim for p in self.parts}
        if not self.parts or len(dims) != 1:
            raise InvalidInput("union needs parts of one ambient dimension")

    @property
    def ambient_dim(self):
        return self.parts[0].ambient_dim

    def contains(self, points):
        return np.any([p.contains(points) for p in self.parts], axis=0)

    def clearance(self, points):
        return np.max([p.clearance(points) for p in self.parts], axis=0)

    def bounding_ball(self, width):
        balls = [p.bounding_ball(width) for p in self.parts]
        if any(b is None for b in balls):
            return None
        center = np.mean([b[0] for b in balls], axis=0)
        return center, max(float(np.linalg.norm(c - center)) + r for c, r in balls)

    def to_dict(self):
        return {"kind": self.kind, "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class DomainDifference(DomainSpec):
    """An open domain with a compact set removed."""

    base: DomainSpec
    removed: CompactSpec
    kind: ClassVar[str] = "difference"

    @property
    def ambient_dim(self):
        return self.base.ambient_dim

    def contains(self, points):
        return self.base.contains(points) & ~self.removed.contains(points)

    def clearance(self, points):
        return np.minimum(self.base.clearance(points), self.removed.distance(points))

    def bounding_ball(self, width):
        return self.base.bounding_ball(width)

    def to_dict(self):
        return {"kind": self.kind, "base": self.base.to_dict(), "removed": self.removed.to_dict()}


@dataclass(frozen=True)
class PowerCone(DomainSpec):
    """``{x : ||x|| < |x_index|^exponent}``; unbounded, with bounded cuts parallel to the kernel."""

    dim: int
    index: int = 0
    exponent: float = 2.0
    kind: ClassVar[str] = "norm-below-coordinate-power"

    @property
    def ambient_dim(self) -> int:
        return self.dim

    def _gap(self, points):
        pts = _rows(points)
        return np.abs(pts[:, self.index]) ** self.exponent - np.linalg.norm(pts, axis=1)

    def contains(self, points):
        return self._gap(points) > 0

    def clearance(self, points):
        raise NotImplementedError("no clearance bound for this domain; use membership sampling")

    def cut_bounding_ball(self, slc) -> tuple[np.ndarray, float] | None:
        A = slc.matrix(max(slc.width, self.dim))
        if self.index < A.shape[0] and np.any(np.abs(A[self.index]) > 1e-14):
            return None
        # the indexed coordinate is constant on the cut, which caps the norm
        radius = abs(slc.base[self.index]) ** self.exponent
        return _slice_ball((np.zeros(self.dim, complex), radius), slc)

    def to_dict(self):
        return {"kind": self.kind, "dim": self.dim, "index": self.index, "exponent": self.exponent}


# ---------------------------------------------------------------- compacts


class CompactSpec(ABC):
    kind: ClassVar[str]
    ambient_dim: int | str

    @abstractmethod
    def contains(self, points: np.ndarray) -> np.ndarray: ...

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Lower bound on the Euclidean distance to K (0 on K)."""
        raise NotImplementedError(f"{self.kind} has no distance function")

    @abstractmethod
    def line_cut(self, a: np.ndarray, u: np.ndarray) -> list[tuple[complex, float]]:
        """Closed discs in the line parameter covering K ∩ (a + C u)."""

    def bounding_ball(self, width: int) -> tuple[np.ndarray, float] | None:
        return None

    def bounding_box(self, width: int | None = None) -> np.ndarray | None:
        """Real box ``(2w, 2)`` over (Re x_0, Im x_0, Re x_1, ...)."""
        w = width if width is not None else (self.ambient_dim if self.ambient_dim != UNBOUNDED else 1)
        ball = self.bounding_ball(w)
        if ball is None:
            return None
        c, r = ball
        mid = np.column_stack([c.real, c.imag]).ravel()
        return np.column_stack([mid - r, mid + r])

    @property
    def is_empty(self) -> bool:
        return False

    @abstractmethod
    def to_dict(self) -> dict: ...

    def member(self, x: CPoint) -> bool:
        if self.ambient_dim == UNBOUNDED:
            w = max(1, x.support_width)
        else:
            w = int(self.ambient_dim)
        return bool(self.contains(x.dense(w)[None, :])[0])


def _line_ball_disc(a, u, center, radius) -> tuple[complex, float] | None:
    pts, c = _match(a[None, :], np.asarray(center))
    w = pts[0] - c
    uu = _pad(u, w.size)
    nu2 = float(np.vdot(uu, uu).real)
    proj = np.vdot(uu, w)  # sum conj(u_i) w_i
    zeta0 = -proj / nu2
    d2 = float(np.vdot(w, w).real) - abs(proj) ** 2 / nu2
    r2 = (radius**2 - d2) / nu2
    if r2 < -1e-14 * max(1.0, radius**2):
        return None
    return complex(zeta0), math.sqrt(max(r2, 0.0))


@dataclass(frozen=True)
class ClosedBall(CompactSpec):
    center: tuple[complex, ...]
    radius: float
    kind: ClassVar[str] = "closed-ball"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        if self.radius < 0:
            raise InvalidInput("radius must be nonnegative")

    @property
    def ambient_dim(self) -> int:
        return len(self.center)

    def _norm(self, points):
        pts, c = _match(_rows(points), np.asarray(self.center))
        return np.linalg.norm(pts - c, axis=1)

    def contains(self, points):
        return self._norm(points) <= self.radius

    def distance(self, points):
        return np.maximum(self._norm(points) - self.radius, 0.0)

    def line_cut(self, a, u):
        disc = _line_ball_disc(a, u, self.center, self.radius)
        return [] if disc is None else [disc]

    def bounding_ball(self, width):
        return _pad(self.center, width), float(self.radius)

    def to_dict(self):
        return {"kind": self.kind, "center": [_complex_to_json(c) for c in self.center], "radius": self.radius}


@dataclass(frozen=True)
class Sphere(CompactSpec):
    center: tuple[complex, ...]
    radius: float
    kind: ClassVar[str] = "sphere"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        if not self.radius > 0:
            raise InvalidInput("sphere radius must be positive")

    @property
    def ambient_dim(self) -> int:
        return len(self.center)

    def distance(self, points):
        pts, c = _match(_rows(points), np.asarray(self.center))
        return np.abs(np.linalg.norm(pts - c, axis=1) - self.radius)

    def contains(self, points, atol: float = 1e-12):
        return self.distance(points) <= atol * max(1.0, self.radius)

    def line_cut(self, a, u):
        # the cut is a circle; a covering disc must contain its interior too
        disc = _line_ball_disc(a, u, self.center, self.radius)
        return [] if disc is None else [disc]

    def bounding_ball(self, width):
        return _pad(self.center, width), float(self.radius)

    def to_dict(self):
        return {"kind": self.kind, "center": [_complex_to_json(c) for c in self.center], "radius": self.radius}


def _points_on_line(points: np.ndarray, a, u, atol=1e-12) -> list[tuple[complex, float]]:
    out = []
    for p in points:
        pp, aa = _match(p[None, :], a)
        pp = pp[0]
        uu = _pad(u, pp.size)
        zeta = np.vdot(uu, pp - aa) / np.vdot(uu, uu).real
        resid = np.linalg.norm(aa + zeta * uu - pp)
        if resid <= atol * max(1.0, np.linalg.norm(pp)):
            out.append((complex(zeta), 0.0))
    return out


@dataclass(frozen=True)
class PointSet(CompactSpec):
    points: tuple[tuple[complex, ...], ...]
    dim: int | str | None = None
    kind: ClassVar[str] = "finite-point-set"

    def __post_init__(self) -> None:
        pts = tuple(tuple(complex(v) for v in p) for p in self.points)
        if not pts:
            raise InvalidInput("point set must be nonempty (use the empty kind)")
        object.__setattr__(self, "points", pts)
        if self.dim is None:
            object.__setattr__(self, "dim", len(pts[0]))

    @property
    def ambient_dim(self):
        return self.dim

    def _array(self, width: int) -> np.ndarray:
        return np.array([_pad(p, width) for p in self.points])

    def distance(self, points):
        pts = _rows(points)
        w = max(pts.shape[1], max(len(p) for p in self.points))
        pts, _ = _match(pts, np.zeros(w))
        P = self._array(w)
        return np.min(np.linalg.norm(pts[:, None, :] - P[None, :, :], axis=2), axis=1)

    def contains(self, points, atol: float = 1e-12):
        return self.distance(points) <= atol

    def line_cut(self, a, u):
        w = max(a.size, max(len(p) for p in self.points))
        return _points_on_line(self._array(w), _pad(a, w), _pad(u, w))

    def bounding_ball(self, width):
        P = self._array(max(width, max(len(p) for p in self.points)))
        c = P.mean(axis=0)
        return c[:width], float(np.max(np.linalg.norm(P - c, axis=1)))

    def to_dict(self):
        return {"kind": self.kind, "points": [[_complex_to_json(v) for v in p] for p in self.points]}


@dataclass(frozen=True)
class MomentCurve(CompactSpec):
    """Points ``(z^0, z^1, ..., z^(terms-1))`` for z in a finite parameter set."""

    parameters: tuple[complex, ...]
    terms: int
    dim: int | str | None = None
    kind: ClassVar[str] = "moment-curve"

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameters", tuple(complex(z) for z in self.parameters))
        if not self.parameters or self.terms < 1:
            raise InvalidInput("moment curve needs parameters and at least one term")
        if self.dim is None:
            object.__setattr__(self, "dim", self.terms)

    @property
    def ambient_dim(self):
        return self.dim

    def as_points(self) -> PointSet:
        pts = tuple(tuple(z**k for k in range(self.terms)) for z in self.parameters)
        return PointSet(pts, self.dim)

    def contains(self, points, atol: float = 1e-12):
        return self.as_points().contains(points, atol)

    def distance(self, points):
        return self.as_points().distance(points)

    def line_cut(self, a, u):
        return self.as_points().line_cut(a, u)

    def bounding_ball(self, width):
        return self.as_points().bounding_ball(width)

    def to_dict(self):
        return {"kind": self.kind, "parameters": [_complex_to_json(z) for z in self.parameters], "terms": self.terms}


@dataclass(frozen=True)
class PointwiseBound(CompactSpec):
    """``{w : |w_i| <= rho_i for all i}`` on finitely supported sequences."""

    rho: tuple[float, ...] = ()
    tail: float = 1.0
    ambient_dim: int | str = UNBOUNDED
    kind: ClassVar[str] = "pointwise-bound"

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", tuple(float(r) for r in self.rho))

    def bounds(self, width: int) -> np.ndarray:
        return _rho_values(self.rho, self.tail, width)

    def contains(self, points):
        pts = _rows(points)
        return np.all(np.abs(pts) <= self.bounds(pts.shape[1]), axis=1)

    def distance(self, points):
        # distance to a product of closed discs is the norm of per-coordinate excesses
        pts = _rows(points)
        excess = np.maximum(np.abs(pts) - self.bounds(pts.shape[1]), 0.0)
        return np.linalg.norm(excess, axis=1)

    def line_cut(self, a, u):
        r = self.bounds(a.size)
        fixed = u == 0
        if np.any(np.abs(a[fixed]) > r[fixed]):
            return []
        discs = [(complex(-a[i] / u[i]), float(r[i] / abs(u[i]))) for i in np.flatnonzero(~fixed)]
        for i in range(len(discs)):
            for j in range(i + 1, len(discs)):
                if abs(discs[i][0] - discs[j][0]) > discs[i][1] + discs[j][1]:
                    return []
        # intersection of the discs lies in the smallest of them
        return [min(discs, key=lambda d: d[1])]

    def bounding_ball(self, width):
        return np.zeros(width, complex), float(np.linalg.norm(self.bounds(width)))

    def to_dict(self):
        return {"kind": self.kind, "rho": list(self.rho), "tail": self.tail}


@dataclass(frozen=True)
class ParametricCurve(CompactSpec):
    """``{(p_0(z), ..., p_k(z), 0, ...) : z in a closed parameter disc}`` intersected with ``within``.

    Polynomials are given by ascending coefficients.  The first one must be
    nonconstant; membership inverts it.
    """

    polys: tuple[tuple[complex, ...], ...]
    dim: int
    param_disc: tuple[complex, float] | None = None
    within: DomainSpec | None = None
    kind: ClassVar[str] = "parametric-curve"

    def __post_init__(self) -> None:
        polys = tuple(tuple(complex(c) for c in p) for p in self.polys)
        if not polys or len(polys) > self.dim:
            raise InvalidInput("curve needs between 1 and dim polynomials")
        if len(np.trim_zeros(np.array(polys[0]), "b")) < 2:
            raise InvalidInput("first curve polynomial must be nonconstant")
        object.__setattr__(self, "polys", polys)

    @property
    def ambient_dim(self) -> int:
        return self.dim

    def _poly(self, i: int) -> np.polynomial.Polynomial:
        if i < len(self.polys):
            return np.polynomial.Polynomial(self.polys[i])
        return np.polynomial.Polynomial([0j])

    def curve_points(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex).ravel()
        return np.stack([self._poly(i)(zs) for i in range(self.dim)], axis=1)

    def _param_ok(self, z: complex) -> bool:
        if self.param_disc is None:
            return True
        c, r = self.param_disc
        return abs(z - complex(c)) <= r

    def _accept(self, z: complex) -> bool:
        if not self._param_ok(z):
            return False
        if self.within is not None:
            return bool(self.within.contains(self.curve_points(np.array([z])))[0])
        return True

    def contains(self, points, atol: float = 1e-9):
        pts = _rows(points)
        out = np.zeros(pts.shape[0], dtype=bool)
        p0 = self._poly(0)
        for n, x in enumerate(pts):
            for z in (p0 - x[0]).roots():
                if np.linalg.norm(self.curve_points(np.array([z]))[0] - x) <= atol * max(1.0, np.linalg.norm(x)):
                    if self._accept(complex(z)):
                        out[n] = True
                        break
        return out

    def line_cut(self, a, u):
        a = _pad(a, self.dim)
        u = _pad(u, self.dim)
        j = int(np.argmax(np.abs(u)))
        pj = self._poly(j)
        # a_i + zeta u_i = p_i(z) with zeta = (p_j(z) - a_j) / u_j
        eqs = []
        for i in range(self.dim):
            if i == j:
                continue
            q = u[j] * (a[i] - self._poly(i)) + u[i] * (pj - a[j])
            coef = np.trim_zeros(np.asarray(q.coef, dtype=complex), "b")
            scale = max(1.0, float(np.max(np.abs(q.coef))) if q.coef.size else 1.0)
            if coef.size and np.max(np.abs(coef)) > 1e-12 * scale:
                eqs.append(np.polynomial.Polynomial(coef))
        if not eqs:
            raise LineCutNotCompact("the curve lies in the line; the cut is not compact")
        pivot = min(eqs, key=lambda q: q.degree())
        if pivot.degree() == 0:
            return []
        out = []
        for z in pivot.roots():
            if all(abs(q(z)) <= 1e-8 * max(1.0, np.max(np.abs(q.coef))) for q in eqs) and self._accept(complex(z)):
                out.append((complex((pj(z) - a[j]) / u[j]), 0.0))
        return _dedupe_points(out)

    def bounding_ball(self, width):
        if self.param_disc is not None:
            c, r = self.param_disc
            t = np.exp(2j * np.pi * np.arange(256) / 256)
            zs = np.concatenate([complex(c) + r * np.outer(np.linspace(0, 1, 16), t).ravel()])
            P = self.curve_points(zs)
            center = P.mean(axis=0)
            # polynomial images of a disc peak on its boundary; add a small safety factor
            return _pad(center, width), 1.05 * float(np.max(np.linalg.norm(P - center, axis=1)))
        if self.within is not None:
            return self.within.bounding_ball(width)
        return None

    def to_dict(self):
        d: dict[str, Any] = {
            "kind": self.kind,
            "polys": [[_complex_to_json(c) for c in p] for p in self.polys],
            "dim": self.dim,
        }
        if self.param_disc is not None:
            d["param_disc"] = {"center": _complex_to_json(self.param_disc[0]), "radius": self.param_disc[1]}
        if self.within is not None:
            d["within"] = self.within.to_dict()
        return d


def _dedupe_points(pieces: list[tuple[complex, float]], tol: float = 1e-9) -> list[tuple[complex, float]]:
    out: list[tuple[complex, float]] = []
    for c, r in pieces:
        if not any(abs(c - c2) <= tol for c2, _ in out):
            out.append((c, r))
    return out


@dataclass(frozen=True)
class EmptySet(CompactSpec):
    dim: int | str = UNBOUNDED
    kind: ClassVar[str] = "empty"

    @property
    def ambient_dim(self):
        return self.dim

    @property
    def is_empty(self) -> bool:
        return True

    def contains(self, points):
        return np.zeros(_rows(points).shape[0], dtype=bool)

    def distance(self, points):
        return np.full(_rows(points).shape[0], np.inf)

    def line_cut(self, a, u):
        return []

    def bounding_box(self, width=None):
        return None

    def to_dict(self):
        return {"kind": self.kind}


# ---------------------------------------------------------------- restriction to slices


def _slice_ball(ball, slc: _AffineSlice) -> tuple[np.ndarray, float] | None:
    if ball is None:
        return None
    w = slc.width
    c, r = ball
    c = _pad(c, max(w, c.size))
    w = max(w, c.size)
    A = slc.matrix(w)
    coef, *_ = np.linalg.lstsq(A, c - slc.base.dense(w), rcond=None)
    smin = np.linalg.svd(A, compute_uv=False)[-1]
    return coef, float(r / smin)


@dataclass(frozen=True)
class SlicedDomain(DomainSpec):
    parent: DomainSpec
    slice: _AffineSlice
    kind: ClassVar[str] = "sliced"

    @property
    def ambient_dim(self) -> int:
        return self.slice.dim

    def _up(self, points):
        return self.slice.embed_dense(_rows(points)[:, : self.slice.dim])

    def contains(self, points):
        return self.parent.contains(self._up(points))

    def clearance(self, points):
        return self.parent.clearance(self._up(points)) / self.slice.singular_values()[0]

    def line_clearance(self, a, u, zetas):
        A = self.slice.matrix()
        return self.parent.line_clearance(self._up(a[None, :])[0], A @ u[: self.slice.dim], zetas)

    def bounding_ball(self, width):
        ball = self.parent.cut_bounding_ball(self.slice)
        if ball is None:
            return None
        return _pad(ball[0], width), ball[1]

    def to_dict(self):
        return {"kind": self.kind, "parent": self.parent.to_dict()}

    def __call__(self, coords) -> bool:
        return bool(self.contains(np.atleast_1d(np.asarray(coords, complex))[None, :])[0])


@dataclass(frozen=True)
class SlicedCompact(CompactSpec):
    parent: CompactSpec
    slice: _AffineSlice
    kind: ClassVar[str] = "sliced"

    @property
    def ambient_dim(self) -> int:
        return self.slice.dim

    @property
    def is_empty(self) -> bool:
        return self.parent.is_empty

    def _up(self, points):
        return self.slice.embed_dense(_rows(points)[:, : self.slice.dim])

    def contains(self, points):
        return self.parent.contains(self._up(points))

    def distance(self, points):
        return self.parent.distance(self._up(points)) / self.slice.singular_values()[0]

    def line_cut(self, a, u):
        A = self.slice.matrix()
        return self.parent.line_cut(self._up(a[None, :])[0], A @ u[: self.slice.dim])

    def bounding_ball(self, width):
        if self.parent.is_empty:
            return None
        ball = _slice_ball(self.parent.bounding_ball(max(self.slice.width, 1)), self.slice)
        if ball is None:
            return None
        return _pad(ball[0], width), ball[1]

    def to_dict(self):
        return {"kind": self.kind, "parent": self.parent.to_dict()}

    def __call__(self, coords) -> bool:
        return bool(self.contains(np.atleast_1d(np.asarray(coords, complex))[None, :])[0])


def cut_restrict(spec: DomainSpec | CompactSpec, slc: _AffineSlice) -> SlicedDomain | SlicedCompact:
    """Pull a set back to slice coordinates; the result is itself a set spec."""
    if isinstance(spec, DomainSpec):
        return SlicedDomain(spec, slc)
    return SlicedCompact(spec, slc)


# ---------------------------------------------------------------- admissible sets


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _ring(center: complex, radius: float, density: float) -> np.ndarray:
    n = int(min(_MAX_RING_NODES, max(64, math.ceil(2 * math.pi * radius * density))))
    return center + radius * np.exp(2j * np.pi * np.arange(n) / n)


def _disc_clearance_ok(omega: DomainSpec, a, u, center, radius, margin, density) -> tuple[bool, float]:
    """Sampled check that the closed disc sits in the Ω-slice with the margin."""
    slack = 1e-12 * max(1.0, radius)
    ring = omega.line_clearance(a, u, _ring(center, radius, density))
    worst = float(ring.min())
    if worst < margin - slack:
        return False, worst
    centre = float(omega.line_clearance(a, u, np.array([center]))[0])
    if centre - radius >= margin - slack:
        return True, worst
    # slice may be non-convex: sample the interior on a polar grid
    step = max(margin / 2, 1.0 / density)
    for rho in np.arange(step, radius, step):
        val = float(omega.line_clearance(a, u, _ring(center, rho, 1.0 / step)).min())
        worst = min(worst, val)
        if val < margin - slack:
            return False, worst
    if centre < margin - slack:
        return False, centre
    return True, worst


def _dense_line(a: CPoint, u: CPoint) -> tuple[np.ndarray, np.ndarray]:
    w = working_width(a, u)
    return a.dense(w), u.dense(w)


def check_admissible(
    G: PlanarRegion,
    a: CPoint,
    u: CPoint,
    K: CompactSpec,
    omega: DomainSpec,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
) -> AdmissibilityReport:
    """Sampled certificate of the admissibility clauses with clearance ``margin``."""
    violations = []
    A, U = _dense_line(a, u)
    if not np.any(U):
        return AdmissibilityReport(False, ("direction is zero",))
    tol = 1e-12
    if not any(abs(c) <= r - margin + tol * max(1.0, r) for c, r in G.discs):
        violations.append("0 is not inside G with the required clearance")
    for c, r in G.discs:
        try:
            ok, worst = _disc_clearance_ok(omega, A, U, c, r, margin, density)
        except NotImplementedError as exc:
            ok, worst = False, float("nan")
            violations.append(f"cannot certify Ω-slice containment: {exc}")
            continue
        if not ok:
            violations.append(f"closed disc ({c:.6g}, {r:.6g}) has Ω-slice clearance {worst:.3g} < {margin:.3g}")
    for i, (c1, r1) in enumerate(G.discs):
        for c2, r2 in G.discs[i + 1 :]:
            if abs(c1 - c2) - r1 - r2 < margin - tol:
                violations.append("discs of G are closer than the margin")
    try:
        pieces = K.line_cut(A, U)
    except LineCutNotCompact as exc:
        violations.append(str(exc))
        pieces = []
    for pc, pr in pieces:
        if not any(abs(pc - c) + pr <= r - margin + tol * max(1.0, r) for c, r in G.discs):
            violations.append(f"K-cut piece ({pc:.6g}, {pr:.6g}) is not covered by G with clearance")
    return AdmissibilityReport(not violations, tuple(violations))


def _enclose(d1: tuple[complex, float], d2: tuple[complex, float]) -> tuple[complex, float]:
    (c1, r1), (c2, r2) = d1, d2
    dist = abs(c2 - c1)
    if dist + r2 <= r1:
        return d1
    if dist + r1 <= r2:
        return d2
    r = (dist + r1 + r2) / 2
    return c1 + (c2 - c1) / dist * (r - r1), r


def synthesize_admissible(
    a: CPoint,
    u: CPoint,
    K: CompactSpec,
    omega: DomainSpec,
    margin: float = DEFAULT_MARGIN,
    density: float = DEFAULT_DENSITY,
) -> PlanarRegion:
    """Cover K ∩ (a + C u) and the origin by separated discs inside the Ω-slice.

    Each cluster containing part of K gets the radius halfway between the
    smallest covering radius and the largest radius the Ω-slice allows at
    its center; the cluster holding only the origin gets radius ``margin``.
    Clusters whose discs come closer than ``margin`` are merged.
    """
    if margin <= 0:
        raise InvalidInput("margin must be positive")
    A, U = _dense_line(a, u)
    if not np.any(U):
        raise InvalidInput("direction u must be nonzero")
    if not omega.contains(A[None, :])[0]:
        raise InvalidInput("base point is not in Ω")
    pieces = K.line_cut(A, U)
    clusters: list[tuple[list[tuple[complex, float]], bool]] = [([p], True) for p in pieces]
    clusters.append(([(0j, 0.0)], False))

    def disc_for(cluster) -> tuple[complex, float]:
        members, has_k = cluster
        enc = members[0]
        for m in members[1:]:
            enc = _enclose(enc, m)
        center, rad = enc
        r_min = rad + margin
        if not has_k:
            return center, r_min
        try:
            r_max = float(omega.line_clearance(A, U, np.array([center]))[0]) - margin
        except NotImplementedError:
            r_max = r_min
        return center, (r_min + r_max) / 2 if r_max > r_min else r_min

    while True:
        discs = [disc_for(c) for c in clusters]
        pair = None
        for i in range(len(discs)):
            for j in range(i + 1, len(discs)):
                (c1, r1), (c2, r2) = discs[i], discs[j]
                if abs(c1 - c2) - r1 - r2 < margin:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break
        i, j = pair
        merged = (clusters[i][0] + clusters[j][0], clusters[i][1] or clusters[j][1])
        clusters = [c for k, c in enumerate(clusters) if k not in pair] + [merged]
    G = PlanarRegion(tuple(discs), clearance=margin)
    report = check_admissible(G, a, u, K, omega, margin, density)
    if not report:
        raise SynthesisFailed("; ".join(report.violations))
    return G


# ---------------------------------------------------------------- serialization


def _centers(values) -> tuple[complex, ...]:
    return tuple(as_complex(v) for v in values)


def domain_from_dict(data: dict, ambient_dim: int | str | None = None) -> DomainSpec:
    try:
        kind = data["kind"]
        if kind == "ball":
            return Ball(_centers(data["center"]), float(data["radius"]))
        if kind == "polydisc":
            center = _centers(data["center"])
            radii = data["radii"]
            radii = [float(radii)] * len(center) if isinstance(radii, (int, float)) else [float(r) for r in radii]
            return Polydisc(center, tuple(radii))
        if kind == "halfspace":
            return HalfSpace(_centers(data["functional"]), float(data.get("offset", 0.0)))
        if kind == "sequence-box":
            return SequenceBox(
                tuple(data.get("rho", ())),
                float(data.get("tail", 1.0)),
                float(data.get("scale", 2.0)),
                ambient_dim if ambient_dim is not None else UNBOUNDED,
            )
        if kind == "union":
            return DomainUnion(tuple(domain_from_dict(p, ambient_dim) for p in data["parts"]))
        if kind == "difference":
            return DomainDifference(domain_from_dict(data["base"], ambient_dim), compact_from_dict(data["removed"], ambient_dim))
        if kind == "norm-below-coordinate-power":
            return PowerCone(int(data["dim"]), int(data.get("index", 0)), float(data.get("exponent", 2.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad domain spec {data!r}: {exc}") from exc
    raise InvalidInput(f"unknown domain kind {data.get('kind')!r}")


def compact_from_dict(data: dict, ambient_dim: int | str | None = None) -> CompactSpec:
    try:
        kind = data["kind"]
        dim = ambient_dim if ambient_dim is not None else UNBOUNDED
        if kind == "closed-ball":
            return ClosedBall(_centers(data["center"]), float(data["radius"]))
        if kind == "sphere":
            return Sphere(_centers(data["center"]), float(data["radius"]))
        if kind == "finite-point-set":
            return PointSet(tuple(_centers(p) for p in data["points"]), ambient_dim)
        if kind == "moment-curve":
            return MomentCurve(_centers(data["parameters"]), int(data["terms"]), ambient_dim)
        if kind == "pointwise-bound":
            return PointwiseBound(tuple(data.get("rho", ())), float(data.get("tail", 1.0)), dim)
        if kind == "parametric-curve":
            disc = data.get("param_disc")
            within = data.get("within")
            return ParametricCurve(
                tuple(_centers(p) for p in data["polys"]),
                int(data.get("dim", ambient_dim)),
                None if disc is None else (as_complex(disc["center"]), float(disc["radius"])),
                None if within is None else domain_from_dict(within, ambient_dim),
            )
        if kind == "empty":
            return EmptySet(dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"bad compact spec {data!r}: {exc}") from exc
    raise InvalidInput(f"unknown compact kind {data.get('kind')!r}")
