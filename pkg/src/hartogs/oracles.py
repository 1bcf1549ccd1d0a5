"""Function catalog and independent oracles.

The catalog is a closed set of ids.  Meromorphic entries of one variable
carry principal parts computed symbolically with sympy, so their regular
part is an oracle that never touches a contour integral.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from functools import cache
from typing import Any

import numpy as np

from .companion import HoloFn, restrict
from .errors import EmptySamples, InvalidInput, MissingMetadata, UnknownId
from .geometry import (
    UNBOUNDED,
    ClosedBall,
    Sphere,
    as_complex,
    compact_from_dict,
    domain_from_dict,
)

__all__ = [
    "CATALOG",
    "CONTROL_FUNCTIONS",
    "ENTIRE_FUNCTIONS",
    "MEROMORPHIC_FUNCTIONS",
    "LaurentData",
    "Pole",
    "SeminormSpec",
    "catalog_fn",
    "catalog_listing",
    "hull_distance",
    "regular_part",
    "seminorm_eval",
    "seminorm_from_dict",
]


# ---------------------------------------------------------------- Laurent data


@dataclass(frozen=True)
class Pole:
    location: complex
    coeffs: tuple[complex, ...]  # c_{-1}, c_{-2}, ...

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not any(self.coeffs):
            raise InvalidInput("a pole needs a nonzero principal coefficient")


@dataclass(frozen=True)
class LaurentData:
    poles: tuple[Pole, ...]

    def __post_init__(self) -> None:
        locs = [complex(p.location) for p in self.poles]
        if len(set(locs)) != len(locs):
            raise InvalidInput("pole locations must be distinct")

    def principal(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for p in self.poles:
            w = 1.0 / (z - p.location)
            out += sum(c * w ** (k + 1) for k, c in enumerate(p.coeffs))
        return out

    @property
    def locations(self) -> tuple[complex, ...]:
        return tuple(complex(p.location) for p in self.poles)


# ---------------------------------------------------------------- entire functions of several variables


def _col(X: np.ndarray, i: int) -> np.ndarray:
    return X[:, i] if X.shape[1] > i else np.zeros(X.shape[0], complex)


ENTIRE_FUNCTIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], int]] = {
    "zero": (lambda X: np.zeros(X.shape[0], complex), 1),
    "z1": (lambda X: _col(X, 0), 1),
    "z1-squared": (lambda X: _col(X, 0) ** 2, 1),
    "exp-z1": (lambda X: np.exp(_col(X, 0)), 1),
    "exp-z1-plus-3": (lambda X: np.exp(_col(X, 0)) + 3, 1),
    "exp-z1-plus-z2sq": (lambda X: np.exp(_col(X, 0)) + _col(X, 1) ** 2, 2),
    "sin-z1-cos-z2": (lambda X: np.sin(_col(X, 0)) * np.cos(_col(X, 1)), 2),
    "poly-mixed": (lambda X: _col(X, 0) ** 3 - 2 * _col(X, 0) * _col(X, 1) + 0.5j * _col(X, 1) ** 2 + 1, 2),
    "cosh-combo": (lambda X: np.cosh(_col(X, 0) + 0.5 * _col(X, 1)), 2),
    "exp-product": (lambda X: np.exp(0.3 * _col(X, 0) * _col(X, 1)), 2),
    "z1z2-minus-1": (lambda X: _col(X, 0) * _col(X, 1) - 1, 2),
    "z1z2-plus-z3sq": (lambda X: _col(X, 0) * _col(X, 1) + _col(X, 2) ** 2, 3),
    "one-over-shift-w0": (lambda X: 1.0 / (4.0 - _col(X, 0)), 1),
}


# Deliberately non-holomorphic maps.  They exist only to feed negative
# controls: every verification check must flag at least one of them.
CONTROL_FUNCTIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], int, int]] = {
    "conj-z1": (lambda X: np.conj(_col(X, 0)), 1, 1),
    "abs-sq": (lambda X: np.abs(_col(X, 0)) ** 2, 1, 1),
    "exp-2pi-i-abs-z1-sq": (lambda X: np.exp(2j * np.pi * np.abs(_col(X, 0)) ** 2), 1, 1),
    "one-minus-norm-sq": (lambda X: 1.0 - np.sum(np.abs(X) ** 2, axis=1), 1, 1),
    "ramp-re-z1": (lambda X: np.maximum(0.0, _col(X, 0).real - 0.5) + 0j, 1, 1),
    "step-graph": (lambda X: _col(X, 1) - np.where(np.abs(_col(X, 0)) < 0.5, 0.0, 100.0), 2, 1),
    "cap-pair": (lambda X: np.column_stack([1.0 - np.abs(_col(X, 0)) ** 2 + 0j, np.zeros(X.shape[0], complex)]), 1, 2),
}


# ---------------------------------------------------------------- meromorphic functions of one variable

# name -> (sympy expression in z, [(pole, order), ...]); built lazily
_MEROMORPHIC_SPECS = {
    "inv-z": ("1/z", [("0", 1)]),
    "shifted-pole-plus-square": ("1/(z - 3/10) + z**2", [("3/10", 1)]),
    "double-and-simple": ("2/(z - 1)**2 + 1/(z + 1) + z", [("1", 2), ("-1", 1)]),
    "exp-over-double-pole": ("exp(z)/(z - 3/10)**2", [("3/10", 2)]),
    "sin-over-cube": ("sin(z)/z**3", [("0", 2)]),
    "imaginary-pair": ("1/(z**2 + 1/4)", [("I/2", 1), ("-I/2", 1)]),
    "cos-over-product": ("cos(z)/(z*(z - 1/2))", [("0", 1), ("1/2", 1)]),
    "triple-pole-plus-exp": ("1/(z - 1/5)**3 + exp(2*z)", [("1/5", 3)]),
    "odd-rational": ("z/(z**2 - 9/25)", [("3/5", 1), ("-3/5", 1)]),
    "cosecant": ("1/sin(z)", [("0", 1)]),
    "tangent": ("tan(z)", [("pi/2", 1), ("-pi/2", 1)]),
    "mixed-rational": ("(z**3 + 1)/((z - 2/5)*(z + 7/10)**2)", [("2/5", 1), ("-7/10", 2)]),
}

MEROMORPHIC_FUNCTIONS = tuple(_MEROMORPHIC_SPECS)


@cache
def _meromorphic(name: str) -> tuple[Callable[[np.ndarray], np.ndarray], LaurentData]:
    import sympy as sp

    expr_src, pole_src = _MEROMORPHIC_SPECS[name]
    z, t = sp.symbols("z t")
    expr = sp.sympify(expr_src, locals={"z": z})
    poles = []
    for loc_src, order in pole_src:
        s = sp.sympify(loc_src)
        # principal coefficients from the Taylor expansion of (z - s)^order f at s
        g = sp.simplify((expr * (z - s) ** order).subs(z, s + t))
        ser = sp.series(g, t, 0, order).removeO()
        coeffs = [complex(sp.N(ser.coeff(t, order - j), 30)) for j in range(1, order + 1)]
        poles.append(Pole(complex(sp.N(s, 30)), tuple(coeffs)))
    fn = sp.lambdify(z, expr, "numpy")
    return fn, LaurentData(tuple(poles))


# ---------------------------------------------------------------- catalog


def _dim(params: Mapping[str, Any], default: int | str) -> int | str:
    d = params.get("dim", default)
    return UNBOUNDED if d in ("sequence", UNBOUNDED) else int(d)


def _entire(name: str, dim: int | str) -> HoloFn:
    if name not in ENTIRE_FUNCTIONS:
        raise UnknownId(f"unknown entire function {name!r}")
    fn, need = ENTIRE_FUNCTIONS[name]
    if dim != UNBOUNDED and dim < need:
        raise InvalidInput(f"{name} needs at least {need} variables")
    return HoloFn("entire", fn, dim, 1, params={"name": name, "dim": dim})


def _constant(params):
    if "values" in params:
        vals = np.array([as_complex(v) for v in params["values"]])
    else:
        vals = np.array([as_complex(params.get("value", 1))])
    dim = _dim(params, 1)
    f = HoloFn("constant", lambda X: np.tile(vals, (X.shape[0], 1)), dim, vals.size, params=dict(params))
    return _with_self_reference(f)


def _with_self_reference(f: HoloFn) -> HoloFn:
    return replace(f, known_extension=f, reference=f)


def _polynomial_1d(params):
    coeffs = tuple(as_complex(c) for c in params.get("coeffs", [2, 0, 0, 1]))
    poly = np.polynomial.Polynomial(coeffs)
    f = HoloFn("polynomial-1d", lambda X: poly(X[:, 0]), 1, params={"coeffs": coeffs})
    return _with_self_reference(f)


def _rational_1d(params):
    raw = params.get("poles", [0.3])
    poles = []
    for p in raw:
        if isinstance(p, dict):
            poles.append(Pole(as_complex(p["at"]), tuple(as_complex(c) for c in p.get("coeffs", [1]))))
        else:
            poles.append(Pole(as_complex(p), (1.0,)))
    laurent = LaurentData(tuple(poles))
    poly = np.polynomial.Polynomial([as_complex(c) for c in params.get("polynomial", [0, 0, 1])])
    fn = lambda X: laurent.principal(X[:, 0]) + poly(X[:, 0])
    reg = HoloFn("rational-1d:regular", lambda X: poly(X[:, 0]), 1)
    return HoloFn("rational-1d", fn, 1, 1, params=dict(params), laurent=laurent, reference=reg)


def _meromorphic_1d(params):
    name = params.get("name")
    if name not in _MEROMORPHIC_SPECS:
        raise UnknownId(f"unknown meromorphic function {name!r}")
    fn, laurent = _meromorphic(name)
    f = HoloFn("meromorphic-1d", lambda X: fn(X[:, 0]), 1, 1, params={"name": name}, laurent=laurent)
    return replace(f, reference=regular_part(f))


def _entire_fn(params):
    return _with_self_reference(_entire(params.get("name", "exp-z1-plus-z2sq"), _dim(params, 2)))


def _entire_restricted(params):
    g = _entire_fn(params)
    dim = g.ambient_dim
    K = compact_from_dict(params["compact"], dim) if "compact" in params else ClosedBall((0,) * dim, 1.0)
    f = restrict(g, K)
    if "omega" in params:
        f = replace(f, domain=domain_from_dict(params["omega"], dim))
    return f


def _vector_entire(params):
    names = params.get("names", ["z1", "exp-z1"])
    dim = _dim(params, 2)
    parts = [_entire(n, dim) for n in names]
    f = HoloFn("vector-entire", lambda X: np.column_stack([p(X)[:, 0] for p in parts]), dim, len(parts), dict(params))
    return _with_self_reference(f)


def _sphere_piecewise(params):
    dim = _dim(params, 2)
    center = np.array([as_complex(c) for c in params.get("center", [0] * dim)])
    radius = float(params.get("radius", 1.0))
    inner = as_complex(params.get("inner", 1.0))
    outer = _entire(params.get("outer", "z1"), dim)

    def fn(X):
        r = np.linalg.norm(X - center[None, : X.shape[1]], axis=1)
        out = np.where(r < radius, inner, outer(X)[:, 0])
        # undefined on the sphere itself
        return np.where(r == radius, np.nan, out)

    K = Sphere(tuple(center), radius)
    return HoloFn(
        "sphere-piecewise",
        fn,
        dim,
        1,
        params={"dim": dim, "radius": radius, "inner": inner, "outer": outer.params["name"]},
        excluded=K,
        reference=outer,
    )


def _sequence_inverse(params):
    shift = as_complex(params.get("shift", 4.0))
    index = int(params.get("index", 0))
    dim = _dim(params, UNBOUNDED)
    f = HoloFn("sequence-inverse", lambda X: 1.0 / (shift - _col(X, index)), dim, 1, {"shift": shift, "index": index})
    return _with_self_reference(f)


def _control(params):
    name = params.get("name")
    if name not in CONTROL_FUNCTIONS:
        raise UnknownId(f"unknown control function {name!r}")
    fn, need, m = CONTROL_FUNCTIONS[name]
    dim = _dim(params, max(need, 1))
    if dim != UNBOUNDED and dim < need:
        raise InvalidInput(f"{name} needs at least {need} variables")
    return HoloFn("control", fn, dim, m, params={"name": name, "dim": dim})


def _ex_maximum(params):
    dim = _dim(params, 2)
    f = HoloFn("ex-maximum", lambda X: np.column_stack([X[:, 0], np.ones(X.shape[0], complex)]), dim, 2, {"dim": dim})
    return _with_self_reference(f)


CATALOG: dict[str, tuple[Callable[[Mapping[str, Any]], HoloFn], str]] = {
    "constant": (_constant, "constant map; params value, dim"),
    "polynomial-1d": (_polynomial_1d, "polynomial of one variable; params coeffs (ascending)"),
    "rational-1d": (_rational_1d, "principal parts plus a polynomial; params poles, polynomial"),
    "meromorphic-1d": (_meromorphic_1d, "named meromorphic function with symbolic Laurent data; params name"),
    "entire": (_entire_fn, "named entire function of several variables; params name, dim"),
    "entire-restricted": (_entire_restricted, "entire function restricted to Ω minus K; params name, dim, compact"),
    "vector-entire": (_vector_entire, "C^m-valued map from named entire components; params names, dim"),
    "sphere-piecewise": (_sphere_piecewise, "inner constant inside the sphere, entire outer branch on the shell"),
    "sequence-inverse": (_sequence_inverse, "1/(shift - w_index) on finitely supported sequences"),
    "ex-maximum": (_ex_maximum, "x -> (x_1, 1), C²-valued"),
    "control": (_control, "deliberately non-holomorphic map for negative controls; params name, dim"),
}


def catalog_fn(catalog_id: str, params: Mapping[str, Any] | None = None) -> HoloFn:
    if catalog_id not in CATALOG:
        raise UnknownId(f"unknown catalog id {catalog_id!r}")
    return CATALOG[catalog_id][0](dict(params or {}))


def catalog_listing() -> list[tuple[str, str]]:
    rows = [(cid, desc) for cid, (_, desc) in CATALOG.items()]
    rows += [(f"entire:{n}", "entire function name") for n in ENTIRE_FUNCTIONS]
    rows += [(f"meromorphic-1d:{n}", _MEROMORPHIC_SPECS[n][0]) for n in MEROMORPHIC_FUNCTIONS]
    rows += [(f"control:{n}", "non-holomorphic control") for n in CONTROL_FUNCTIONS]
    return rows


_NEAR_POLE_NODES = 128


def regular_part(f: HoloFn) -> HoloFn:
    """f minus all principal parts recorded in its Laurent data."""
    if f.laurent is None:
        raise MissingMetadata(f"{f.catalog_id} carries no Laurent data")
    laurent = f.laurent
    locs = np.array(laurent.locations)
    # radius of the circle around each pole used for nearby points
    gaps = np.abs(locs[:, None] - locs[None, :]) + np.diag(np.full(locs.size, np.inf))
    rho = np.minimum(0.1, 0.3 * gaps.min(axis=1))
    nodes = np.exp(2j * np.pi * np.arange(_NEAR_POLE_NODES) / _NEAR_POLE_NODES)

    def direct(z):
        return f(z[:, None])[:, 0] - laurent.principal(z)

    def fn(X):
        z = X[:, 0]
        out = np.empty(z.shape, complex)
        near = np.zeros(z.shape, bool)
        for p, r in zip(locs, rho):
            close = np.abs(z - p) < 0.5 * r
            if np.any(close):
                # removable singularity: Cauchy's formula on |ζ - p| = r
                ring = p + r * nodes
                vals = direct(ring)
                w = ring[None, :] - z[close, None]
                out[close] = np.mean(vals[None, :] * (ring - p)[None, :] / w, axis=1)
                near |= close
        out[~near] = direct(z[~near])
        return out

    return HoloFn(f"regular({f.catalog_id})", fn, 1, 1, domain=f.domain)


# ---------------------------------------------------------------- hull distance


def _real(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=-1)


def _min_norm_point(P: np.ndarray, tol: float, max_iter: int = 10_000) -> float:
    """Wolfe's minimum-norm-point iteration over conv(P).

    Stops when the norm of the iterate exceeds the certified lower bound
    ``min_j <x, p_j> / |x|`` on the true distance by at most ``tol``.
    """
    norms = np.einsum("ij,ij->i", P, P)
    S = [int(np.argmin(norms))]
    w = np.array([1.0])
    x = P[S[0]].copy()
    for _ in range(max_iter):
        nx = float(np.linalg.norm(x))
        if nx <= tol:
            return nx
        dots = P @ x
        j = int(np.argmin(dots))
        lower = max(float(dots[j]), 0.0) / nx
        if nx - lower <= tol or j in S:
            return nx
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            Q = P[S]
            n = len(S)
            A = np.zeros((n + 1, n + 1))
            A[:n, :n] = Q @ Q.T
            A[:n, n] = A[n, :n] = 1.0
            rhs = np.zeros(n + 1)
            rhs[n] = 1.0
            alpha = np.linalg.lstsq(A, rhs, rcond=None)[0][:n]
            if np.all(alpha > 1e-14):
                w = alpha
                break
            neg = alpha <= 1e-14
            theta = min(1.0, float(np.min(w[neg] / (w[neg] - alpha[neg]))))
            w = w + theta * (alpha - w)
            keep = w > 1e-14
            S = [s for s, k in zip(S, keep) if k]
            w = w[keep] / w[keep].sum()
        x = w @ P[S]
    return float(np.linalg.norm(x))


def hull_distance(y: np.ndarray | complex, samples: np.ndarray, mode: str = "set", tol: float = 1e-10) -> float:
    """Distance from y to the sample set or to its convex hull."""
    S = np.asarray(samples, dtype=complex)
    if S.size == 0:
        raise EmptySamples("no samples")
    if S.ndim == 1:
        S = S[:, None]
    yv = np.atleast_1d(np.asarray(y, dtype=complex))
    if mode == "set":
        return float(np.min(np.linalg.norm(S - yv[None, :], axis=1)))
    if mode in ("convex-hull", "closed-convex-hull"):
        # the hull of finitely many points is closed, so both modes coincide
        return _min_norm_point(_real(S - yv[None, :]), tol)
    raise InvalidInput(f"unknown hull mode {mode!r}")


# ---------------------------------------------------------------- seminorms


@dataclass(frozen=True)
class SeminormSpec:
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("coordinate-modulus", "max-norm", "euclidean", "weighted"):
            raise InvalidInput(f"unknown seminorm kind {self.kind!r}")


def seminorm_eval(p: SeminormSpec, y: np.ndarray) -> np.ndarray | float:
    """Evaluate p on a vector ``(m,)`` or a batch ``(N, m)``."""
    Y = np.asarray(y, dtype=complex)
    single = Y.ndim == 1
    Y = np.atleast_2d(Y)
    if p.kind == "coordinate-modulus":
        out = np.abs(Y[:, int(p.params.get("index", 0))])
    elif p.kind == "max-norm":
        out = np.max(np.abs(Y), axis=1)
    elif p.kind == "euclidean":
        out = np.linalg.norm(Y, axis=1)
    else:
        # max{nu(y - phi(y) y0), |phi(y)|}
        phi = np.array([as_complex(c) for c in p.params["phi"]])
        y0 = np.array([as_complex(c) for c in p.params["y0"]])
        nu = p.params.get("nu", {"kind": "max-norm"})
        nu = nu if isinstance(nu, SeminormSpec) else seminorm_from_dict(nu)
        val = Y @ phi
        out = np.maximum(seminorm_eval(nu, Y - val[:, None] * y0[None, :]), np.abs(val))
    return float(out[0]) if single else out


def seminorm_from_dict(data: Mapping[str, Any]) -> SeminormSpec:
    params = {k: v for k, v in data.items() if k != "kind"}
    return SeminormSpec(data["kind"], params)
