"""Grid connectivity for sets in C or C² (real dimension at most 4).

Cells are classified by their centers.  A cell counts as part of K when
its center lies within half a cell diagonal of K, so that thin compacts
such as spheres still separate the grid.  Components of complements that
touch the outer cell layer are merged, since they connect outside the box.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage, special
from scipy.stats import qmc

from .errors import (
    BoxTooSmall,
    DimensionTooHigh,
    InvalidInput,
    NotInOmegaMinusK,
    UnboundedCut,
)
from .geometry import (
    UNBOUNDED,
    CompactSpec,
    CPoint,
    DomainSpec,
    PlaneSlice,
    cut_restrict,
    working_width,
)

__all__ = [
    "IN_K",
    "IN_OMEGA",
    "LABEL_NAMES",
    "OUTSIDE_BOX",
    "OUTSIDE_OMEGA",
    "REGIONS",
    "ComponentInfo",
    "ComponentReport",
    "ConnectednessReport",
    "Equivalence",
    "GridComplex",
    "boundary2_coords",
    "boundary2_sample",
    "build_grid",
    "coincidence_mask",
    "coincidence_membership",
    "components",
    "connectedness_report",
    "default_box",
    "dump_grid_csv",
    "is_connected",
    "ray_directions",
]

IN_K, IN_OMEGA, OUTSIDE_OMEGA, OUTSIDE_BOX = 0, 1, 2, 3
LABEL_NAMES = {IN_K: "in_K", IN_OMEGA: "in_omega_not_K", OUTSIDE_OMEGA: "outside_omega", OUTSIDE_BOX: "outside_box"}
REGIONS = ("omega", "omega-minus-k", "complement-k", "complement-k-in-omega")
DEFAULT_RESOLUTION = {2: 201, 4: 41}
DEFAULT_RAYS = 4096


@dataclass(frozen=True, eq=False)
class GridComplex:
    box: np.ndarray  # (2n, 2) over (Re x_0, Im x_0, Re x_1, Im x_1)
    resolution: int
    labels: np.ndarray
    K: CompactSpec
    omega: DomainSpec
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.box.shape[0] // 2

    @property
    def widths(self) -> np.ndarray:
        return (self.box[:, 1] - self.box[:, 0]) / self.resolution

    def axis(self, k: int) -> np.ndarray:
        lo, hi = self.box[k]
        h = (hi - lo) / self.resolution
        return lo + h * (np.arange(self.resolution) + 0.5)

    def centers(self, index: tuple[np.ndarray, ...]) -> np.ndarray:
        """Complex coordinates ``(N, n)`` of the cells with the given index arrays."""
        real = np.stack([self.axis(k)[index[k]] for k in range(2 * self.n)], axis=1)
        return real[:, 0::2] + 1j * real[:, 1::2]

    def cell_of(self, x: CPoint) -> tuple[int, ...] | None:
        v = x.dense(self.n)
        real = np.column_stack([v.real, v.imag]).ravel()
        idx = np.floor((real - self.box[:, 0]) / self.widths).astype(int)
        if np.any(idx < 0) or np.any(idx >= self.resolution):
            return None
        return tuple(int(i) for i in idx)


@dataclass(frozen=True)
class ComponentInfo:
    id: int
    representative: CPoint
    cell_count: int
    touches_box_boundary: bool


@dataclass(frozen=True, eq=False)
class ComponentReport:
    region: str
    components: tuple[ComponentInfo, ...]
    unbounded_component_id: int | None
    label_array: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def connected(self) -> bool:
        return self.count <= 1

    @property
    def empty(self) -> bool:
        return self.count == 0

    def to_json(self) -> dict:
        return {
            "region": self.region,
            "count": self.count,
            "connected": self.connected,
            "unbounded_component_id": self.unbounded_component_id,
            "components": [
                {
                    "id": c.id,
                    "representative": c.representative.to_json(),
                    "cell_count": c.cell_count,
                    "touches_box_boundary": c.touches_box_boundary,
                }
                for c in self.components
            ],
        }


def _box_of_ball(ball, n: int) -> np.ndarray | None:
    if ball is None:
        return None
    c, r = ball
    c = np.asarray(c, complex)[:n]
    mid = np.column_stack([c.real, c.imag]).ravel()
    return np.column_stack([mid - r, mid + r])


def default_box(K: CompactSpec, omega: DomainSpec, n: int) -> np.ndarray:
    boxes = [b for b in (_box_of_ball(omega.bounding_ball(n), n), K.bounding_box(n)) if b is not None]
    if not boxes:
        raise InvalidInput("cannot infer a grid box; pass one explicitly")
    lo = np.min([b[:, 0] for b in boxes], axis=0)
    hi = np.max([b[:, 1] for b in boxes], axis=0)
    pad = 0.1 * float(np.max(hi - lo)) + 1e-9
    # a cube keeps cells isotropic
    mid, half = (lo + hi) / 2, float(np.max(hi - lo)) / 2 + pad
    return np.column_stack([mid - half, mid + half])


def build_grid(
    K: CompactSpec,
    omega: DomainSpec,
    box: np.ndarray | None = None,
    resolution: int | None = None,
) -> GridComplex:
    n = omega.ambient_dim
    if n == UNBOUNDED or 2 * int(n) > 4:
        raise DimensionTooHigh(f"native grids need real dimension <= 4, got ambient dimension {n}")
    n = int(n)
    res = int(resolution or DEFAULT_RESOLUTION[2 * n])
    box = default_box(K, omega, n) if box is None else np.asarray(box, dtype=float)
    if box.shape != (2 * n, 2) or np.any(box[:, 1] <= box[:, 0]):
        raise InvalidInput("box must be (2n, 2) with increasing bounds")
    h = (box[:, 1] - box[:, 0]) / res
    kbox = K.bounding_box(n)
    if kbox is not None and (np.any(kbox[:, 0] - 2 * h <= box[:, 0]) or np.any(kbox[:, 1] + 2 * h >= box[:, 1])):
        raise BoxTooSmall("box must contain K's bounding box dilated by two cells")
    half_diag = 0.5 * float(np.linalg.norm(h))
    axes = [box[k, 0] + h[k] * (np.arange(res) + 0.5) for k in range(2 * n)]
    labels = np.empty((res,) * (2 * n), dtype=np.int8)
    # classify one slab along the first axis at a time to bound memory
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, 2 * n - 1)
    for i, x0 in enumerate(axes[0]):
        real = np.column_stack([np.full(rest.shape[0], x0), rest])
        pts = real[:, 0::2] + 1j * real[:, 1::2]
        if K.is_empty:
            in_k = np.zeros(pts.shape[0], bool)
        else:
            try:
                in_k = K.distance(pts) <= half_diag
            except NotImplementedError:
                in_k = K.contains(pts)
        in_om = omega.contains(pts)
        lab = np.where(in_k, IN_K, np.where(in_om, IN_OMEGA, OUTSIDE_OMEGA)).astype(np.int8)
        labels[i] = lab.reshape((res,) * (2 * n - 1))
    return GridComplex(box, res, labels, K, omega)


def _touching(lab: np.ndarray) -> set[int]:
    ids: set[int] = set()
    for ax in range(lab.ndim):
        for end in (0, -1):
            ids.update(np.unique(np.take(lab, end, axis=ax)).tolist())
    ids.discard(0)
    return ids


def _omega_labels(grid: GridComplex) -> ComponentReport:
    return components(grid, "omega")


def components(grid: GridComplex, region: str, omega_component: int | None = None) -> ComponentReport:
    """Face-adjacent components of a region of the grid.

    ``complement-k-in-omega`` is the complement of K ∩ ω for the component
    ``omega_component`` of Ω (ids as reported for region ``omega``).
    """
    key = (region, omega_component)
    if key in grid._cache:
        return grid._cache[key]
    L = grid.labels
    if region == "omega":
        mask = (L == IN_K) | (L == IN_OMEGA)
    elif region == "omega-minus-k":
        mask = L == IN_OMEGA
    elif region == "complement-k":
        mask = L != IN_K
    elif region == "complement-k-in-omega":
        if omega_component is None:
            raise InvalidInput("complement-k-in-omega needs an omega component id")
        om = _omega_labels(grid).label_array
        mask = ~((L == IN_K) & (om == omega_component))
    else:
        raise InvalidInput(f"unknown region {region!r}; expected one of {REGIONS}")
    structure = ndimage.generate_binary_structure(L.ndim, 1)
    lab, _ = ndimage.label(mask, structure=structure)
    touching = _touching(lab)
    unbounded = None
    if region.startswith("complement") and touching:
        # boundary-touching pieces of a complement join outside the box
        unbounded = min(touching)
        for t in touching:
            lab[lab == t] = unbounded
        touching = {unbounded}
    ids = sorted(set(np.unique(lab).tolist()) - {0})
    # renumber 1..count in order of first appearance
    remap = np.zeros(int(lab.max()) + 1, dtype=np.int64)
    for new, old in enumerate(ids, start=1):
        remap[old] = new
    lab = remap[lab]
    if unbounded is not None:
        unbounded = int(remap[unbounded])
    touching = {int(remap[t]) for t in touching}
    infos = []
    sizes = np.bincount(lab.ravel(), minlength=len(ids) + 1)
    flat = lab.ravel()
    firsts = {}
    for pos in np.flatnonzero(flat):
        c = int(flat[pos])
        if c not in firsts:
            firsts[c] = pos
            if len(firsts) == len(ids):
                break
    for cid in range(1, len(ids) + 1):
        index = np.unravel_index(firsts[cid], lab.shape)
        rep = grid.centers(tuple(np.array([i]) for i in index))[0]
        infos.append(ComponentInfo(cid, CPoint.from_dense(rep, grid.n), int(sizes[cid]), cid in touching))
    report = ComponentReport(region, tuple(infos), unbounded, lab)
    grid._cache[key] = report
    return report


def is_connected(grid: GridComplex, region: str, omega_component: int | None = None) -> bool:
    return components(grid, region, omega_component).connected


@dataclass(frozen=True)
class Equivalence:
    name: str
    lhs: bool
    rhs: bool

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class ConnectednessReport:
    equivalences: tuple[Equivalence, ...]
    omega_components: int
    complement_components: int

    @property
    def consistent(self) -> bool:
        return all(e.holds for e in self.equivalences)

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "omega_components": self.omega_components,
            "complement_components": self.complement_components,
            "equivalences": [{"name": e.name, "lhs": e.lhs, "rhs": e.rhs, "holds": e.holds} for e in self.equivalences],
        }


def connectedness_report(K: CompactSpec, omega: DomainSpec, grid: GridComplex | None = None) -> ConnectednessReport:
    """Both sides of the three connectedness equivalences on one grid."""
    grid = grid or build_grid(K, omega)
    om = components(grid, "omega")
    comp = components(grid, "complement-k")
    omega_minus_k = components(grid, "omega-minus-k")
    per_omega_complement = []
    per_omega_minus_k = []
    for c in om.components:
        per_omega_complement.append(is_connected(grid, "complement-k-in-omega", c.id))
        mask = (om.label_array == c.id) & (grid.labels == IN_OMEGA)
        _, count = ndimage.label(mask, structure=ndimage.generate_binary_structure(mask.ndim, 1))
        per_omega_minus_k.append(count <= 1)
    eqs = (
        Equivalence("e.1", omega_minus_k.connected, comp.connected and om.connected),
        Equivalence("e.2", comp.connected, all(per_omega_complement)),
        Equivalence("e.3", comp.connected, all(per_omega_minus_k)),
    )
    return ConnectednessReport(eqs, om.count, comp.count)


def coincidence_mask(grid: GridComplex) -> np.ndarray:
    """Cells of Ω \\ K lying in the unbounded component of the complement of K ∩ ω."""
    if "coincidence" in grid._cache:
        return grid._cache["coincidence"]
    om = components(grid, "omega")
    mask = np.zeros(grid.labels.shape, dtype=bool)
    for c in om.components:
        rep = components(grid, "complement-k-in-omega", c.id)
        if rep.unbounded_component_id is None:
            continue
        mask |= (om.label_array == c.id) & (rep.label_array == rep.unbounded_component_id) & (grid.labels == IN_OMEGA)
    grid._cache["coincidence"] = mask
    return mask


def _default_planes(x: CPoint, seed: int, n_random: int = 4) -> list[PlaneSlice]:
    width = max(working_width(x), 2)
    dim = x.ambient_dim
    basis = [CPoint.basis(i, dim) for i in range(width)]
    planes = [PlaneSlice(x, basis[i], basis[j]) for i, j in itertools.combinations(range(width), 2)]
    if dim != UNBOUNDED and dim == 2:
        return planes[:1]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        v1 = rng.normal(size=width) + 1j * rng.normal(size=width)
        v2 = rng.normal(size=width) + 1j * rng.normal(size=width)
        planes.append(PlaneSlice(x, CPoint.from_dense(v1, dim), CPoint.from_dense(v2, dim)))
    return planes


def coincidence_membership(
    x: CPoint,
    K: CompactSpec,
    omega: DomainSpec,
    strategy: str = "grid",
    grid: GridComplex | None = None,
    planes: list[PlaneSlice] | None = None,
    resolution: int | None = None,
    seed: int = 0,
) -> bool:
    """Whether x lies in the coincidence set.

    The slice strategy can only witness membership: False means that none
    of the sampled planes through x produced a witness.
    """
    if not omega.member(x) or K.member(x):
        raise NotInOmegaMinusK("x must lie in Ω \\ K")
    if strategy == "grid":
        grid = grid or build_grid(K, omega, resolution=resolution)
        cell = grid.cell_of(x)
        return bool(cell is not None and coincidence_mask(grid)[cell])
    if strategy != "slice":
        raise InvalidInput(f"unknown strategy {strategy!r}")
    origin = CPoint.zero(2)
    for plane in planes or _default_planes(x, seed):
        local = plane.rebased(x)
        K_cut, om_cut = cut_restrict(K, local), cut_restrict(omega, local)
        ball = om_cut.bounding_ball(2)
        if ball is None:
            continue
        box = _box_of_ball(ball, 2)
        pad = 0.15 * float(np.max(box[:, 1] - box[:, 0]))
        box = np.column_stack([box[:, 0] - pad, box[:, 1] + pad])
        try:
            g = build_grid(K_cut, om_cut, box, resolution or 21)
        except BoxTooSmall:
            continue
        cell = g.cell_of(origin)
        if cell is not None and coincidence_mask(g)[cell]:
            return True
    return False


def ray_directions(count: int) -> np.ndarray:
    """The 8 signed axis directions of R^4 followed by ``count`` quasi-uniform unit vectors.

    Scrambled Sobol points pushed through the normal quantile give directions
    whose prefixes are nested, so refining ``count`` only adds rays.
    """
    axes = np.concatenate([np.eye(4), -np.eye(4)])
    if count <= 0:
        return axes
    m = max(int(np.ceil(np.log2(count))), 0)
    cube = qmc.Sobol(4, scramble=True, seed=0).random_base2(m)[:count]
    g = special.ndtri(np.clip(cube, 1e-12, 1 - 1e-12))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.concatenate([axes, g])


def boundary2_coords(
    omega: DomainSpec,
    plane: PlaneSlice,
    density: int = DEFAULT_RAYS,
    steps: int = 64,
) -> np.ndarray:
    """Boundary points of the plane cut of Ω, in plane coordinates ``(N, 2)``.

    Rays from an interior point are marched in ``steps`` increments across
    the cut's bounding ball; every in/out transition is bisected.
    """
    cut = cut_restrict(omega, plane)
    ball = cut.bounding_ball(2)
    if ball is None:
        raise UnboundedCut("the plane cut of Ω is not known to be bounded")
    center, radius = ball
    origin = np.zeros(2, complex)
    if cut.contains(origin[None, :])[0]:
        start = origin
    elif cut.contains(center[None, :])[0]:
        start = center
    else:
        rng = np.random.default_rng(0)
        trial = center[None, :] + radius * (rng.uniform(-1, 1, (4096, 2)) + 1j * rng.uniform(-1, 1, (4096, 2)))
        inside = trial[cut.contains(trial)]
        if inside.size == 0:
            return np.zeros((0, 2), complex)
        start = inside[0]
    reach = radius + float(np.linalg.norm(start - center))
    dirs = ray_directions(density)
    dirs_c = dirs[:, 0::2] + 1j * dirs[:, 1::2]
    ts = np.linspace(0.0, reach * 1.001, steps + 1)
    pts = start[None, None, :] + ts[None, :, None] * dirs_c[:, None, :]
    inside = cut.contains(pts.reshape(-1, 2)).reshape(len(dirs), steps + 1)
    flips = np.argwhere(inside[:, 1:] != inside[:, :-1])
    if flips.size == 0:
        return np.zeros((0, 2), complex)
    r_idx, s_idx = flips[:, 0], flips[:, 1]
    lo, hi = ts[s_idx].copy(), ts[s_idx + 1].copy()
    lo_in = inside[r_idx, s_idx]
    d = dirs_c[r_idx]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        m_in = cut.contains(start[None, :] + mid[:, None] * d)
        same = m_in == lo_in
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return start[None, :] + (0.5 * (lo + hi))[:, None] * d


def boundary2_sample(omega: DomainSpec, slices: list[PlaneSlice], density: int = DEFAULT_RAYS) -> list[CPoint]:
    """Boundary points of the 2-cuts of Ω, mapped back to the ambient space."""
    out = []
    for plane in slices:
        coords = boundary2_coords(omega, plane, density)
        dim = plane.base.ambient_dim
        for row in plane.embed_dense(coords):
            out.append(CPoint.from_dense(row, dim))
    return out


def dump_grid_csv(grid: GridComplex, path: str | Path, region: str | None = None) -> None:
    """One row per cell: center coordinates, classification and component id."""
    lab = components(grid, region).label_array if region else None
    names = [f"{p}{k}" for k in range(grid.n) for p in ("re", "im")]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(names + ["classification", "component_id"])
        for index in np.ndindex(grid.labels.shape):
            centre = [grid.axis(k)[index[k]] for k in range(2 * grid.n)]
            comp = int(lab[index]) if lab is not None else ""
            w.writerow([format(v, ".15g") for v in centre] + [LABEL_NAMES[int(grid.labels[index])], comp])
