"""Scenario configs: parsing, task execution, report writing.

A scenario is parsed completely (sets, function, every task) before any
task runs, and nothing is written until every task has finished, so a bad
config never leaves partial output behind.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import topology
from .companion import (
    HoloFn,
    combine,
    companion_finitely_open,
    companion_fn,
    companion_outer,
    companion_value,
)
from .errors import (
    AdmissibilityViolation,
    BoxTooSmall,
    ConfigError,
    CutNotCompact,
    DimensionTooHigh,
    EmptySamples,
    HartogsError,
    InvalidInput,
    LineCutNotCompact,
    MissingMetadata,
    NoCoincidenceSamples,
    NonFinite,
    NotConverged,
    OnBoundary,
    SynthesisFailed,
    UnboundedCut,
    UnknownId,
)
from .geometry import (
    UNBOUNDED,
    Ball,
    CompactSpec,
    CPoint,
    DomainSpec,
    PlaneSlice,
    as_complex,
    compact_from_dict,
    domain_from_dict,
)
from .oracles import catalog_fn, seminorm_from_dict
from .quadrature import DEFAULT_NODE_CAP, DEFAULT_TOL
from .verify import (
    CheckReport,
    format_number,
    verify_boundary,
    verify_coincidence,
    verify_composition,
    verify_excision,
    verify_identity,
    verify_level_sets,
    verify_max_min,
    verify_range_and_inertia,
    verify_roundtrips,
    write_summary_csv,
)

__all__ = [
    "EXIT_CHECK_FAILED",
    "EXIT_CONFIG",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "SCHEMA_VERSION",
    "Scenario",
    "ScenarioOutcome",
    "bundled_suite",
    "dump_grid",
    "load_scenario",
    "run_scenario",
    "verify_all",
    "worst_status",
]

SCHEMA_VERSION = 1
DEFAULT_SEED = 42
EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
_PRIORITY = {EXIT_CONFIG: 3, EXIT_NUMERIC: 2, EXIT_CHECK_FAILED: 1, EXIT_OK: 0}

NUMERIC_ERRORS = (
    NotConverged,
    NonFinite,
    SynthesisFailed,
    AdmissibilityViolation,
    OnBoundary,
    NoCoincidenceSamples,
    LineCutNotCompact,
    CutNotCompact,
    EmptySamples,
)
CONFIG_ERRORS = (
    ConfigError,
    InvalidInput,
    UnknownId,
    MissingMetadata,
    DimensionTooHigh,
    BoxTooSmall,
    UnboundedCut,
    KeyError,
    TypeError,
    ValueError,
)


def worst_status(codes) -> int:
    codes = list(codes)
    return max(codes, key=lambda c: _PRIORITY[c]) if codes else EXIT_OK


def bundled_suite() -> Path:
    return Path(__file__).parent / "scenarios"


# ---------------------------------------------------------------- parsing helpers


def _fn_spec(data: Any, dim: int | str, where: str, compact: dict | None = None) -> HoloFn:
    if not isinstance(data, dict) or "id" not in data:
        raise ConfigError(f"{where}: function spec needs an 'id'")
    params = dict(data.get("params", {}))
    params.setdefault("dim", "sequence" if dim == UNBOUNDED else dim)
    if data["id"] == "entire-restricted" and compact is not None:
        params.setdefault("compact", compact)
    f = catalog_fn(data["id"], params)
    if data.get("perturb"):
        shift = catalog_fn("constant", {"value": data["perturb"], "dim": params["dim"]})
        f = combine(f, shift, "add")
    return f


def _points(data: Any, dim: int | str, where: str) -> list[CPoint]:
    if not isinstance(data, list):
        raise ConfigError(f"{where}: expected a list of points")
    return [CPoint.from_json(p, dim) for p in data]


def _plane(data: dict, dim: int | str, base: CPoint | None = None) -> PlaneSlice:
    dirs = _points(data["dirs"], dim, "plane dirs")
    if len(dirs) != 2:
        raise ConfigError("a plane needs exactly two directions")
    origin = base if base is not None else CPoint.from_json(data.get("base", _zero_json(dim)), dim)
    return PlaneSlice(origin, dirs[0], dirs[1])


def _zero_json(dim):
    return {} if dim == UNBOUNDED else [0] * int(dim)


def _float(task: dict, key: str, default: float) -> float:
    return float(task.get(key, default))


# ---------------------------------------------------------------- scenario


@dataclass
class Scenario:
    scenario_id: str
    ambient_dim: int | str
    omega: DomainSpec
    compact: CompactSpec
    function: HoloFn
    tasks: list[dict]
    tolerances: dict
    grid: dict
    seed: int
    raw: dict = field(repr=False)
    runners: list[Callable[[], TaskResult]] = field(default_factory=list, repr=False)

    def companion_options(self) -> dict:
        return {
            "tol": float(self.tolerances.get("quadrature", DEFAULT_TOL)),
            "node_cap": int(self.tolerances.get("node_cap", DEFAULT_NODE_CAP)),
        }


@dataclass
class TaskResult:
    index: int
    task_type: str
    report: CheckReport
    table: tuple[list[str], list[list[Any]]] | None = None


def load_scenario(path: str | Path, overrides: dict | None = None) -> Scenario:
    """Parse and validate a scenario config; every problem raises ConfigError."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return _build(raw, overrides or {})
    except ConfigError:
        raise
    except CONFIG_ERRORS as exc:
        raise ConfigError(f"{Path(path).name}: {exc}") from exc


def _build(raw: Any, overrides: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if raw.get("spec_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported or missing spec_version (expected {SCHEMA_VERSION})")
    for key in ("scenario_id", "ambient_dim", "omega", "function", "tasks"):
        if key not in raw:
            raise ConfigError(f"missing field {key!r}")
    sid = str(raw["scenario_id"])
    if not sid or any(c in sid for c in "/\\"):
        raise ConfigError("scenario_id must be a plain name")
    dim = UNBOUNDED if raw["ambient_dim"] in ("sequence", UNBOUNDED) else int(raw["ambient_dim"])
    omega = domain_from_dict(raw["omega"], dim)
    compact_raw = raw.get("compact", {"kind": "empty"})
    compact = compact_from_dict(compact_raw, dim)
    function = _fn_spec(raw["function"], dim, "function", compact_raw)
    tolerances = dict(raw.get("tolerances", {}))
    if overrides.get("tol") is not None:
        tolerances["quadrature"] = float(overrides["tol"])
    if overrides.get("nodes") is not None:
        tolerances["node_cap"] = int(overrides["nodes"])
    seed = int(overrides["seed"]) if overrides.get("seed") is not None else int(raw.get("seed", DEFAULT_SEED))
    tasks = raw["tasks"]
    if not isinstance(tasks, list) or not tasks:
        raise ConfigError("tasks must be a nonempty list")
    sc = Scenario(sid, dim, omega, compact, function, tasks, tolerances, dict(raw.get("grid", {})), seed, raw)
    for i, task in enumerate(tasks):
        if not isinstance(task, dict) or "type" not in task:
            raise ConfigError(f"task {i} needs a 'type'")
        sc.runners.append(_prepare(sc, i, task))
    return sc


# ---------------------------------------------------------------- tasks


def _prepare(sc: Scenario, index: int, task: dict) -> Callable[[], TaskResult]:
    kind = task["type"]
    if kind == "evaluate-point":
        return _prepare_points(sc, index, task)
    if kind == "evaluate-grid":
        return _prepare_grid(sc, index, task)
    if kind == "topology-report":
        return _prepare_topology(sc, index, task)
    if kind.startswith("verify-"):
        check = _VERIFY.get(kind[len("verify-") :])
        if check is None:
            raise ConfigError(f"unknown check {kind!r}")
        run = check(sc, task)
        return lambda: TaskResult(index, kind, run())
    raise ConfigError(f"unknown task type {kind!r}")


def _reference(f: HoloFn) -> HoloFn | None:
    return f.reference if f.reference is not None else f.known_extension


def _prepare_points(sc: Scenario, index: int, task: dict) -> Callable[[], TaskResult]:
    dim = sc.ambient_dim
    pts = _points(task.get("points", []), dim, "evaluate-point")
    if not pts:
        raise ConfigError("evaluate-point needs points")
    method = task.get("method", "auto")
    if method not in ("auto", "outer", "finitely-open"):
        raise ConfigError(f"unknown evaluation method {method!r}")
    expect = task.get("expect")
    if expect is not None and len(expect) != len(pts):
        raise ConfigError("expect must match points in length")
    expect = None if expect is None else [as_complex(v) for v in expect]
    direction = CPoint.from_json(task["direction"], dim) if "direction" in task else None
    if method == "outer" and direction is None:
        raise ConfigError("the outer method needs a direction")
    plane_specs = task.get("planes", [])
    if method == "finitely-open" and not plane_specs:
        raise ConfigError("the finitely-open method needs planes")
    # validate plane directions now; bases are the evaluation points
    planes_for = [[_plane(p, dim, x) for p in plane_specs] for x in pts] if method == "finitely-open" else None
    tol = _float(task, "tol", sc.tolerances.get("pointwise", 1e-8))
    opts = sc.companion_options()
    ref = _reference(sc.function)

    def run() -> TaskResult:
        rows, worst, witness = [], 0.0, None
        for k, x in enumerate(pts):
            if method == "outer":
                values = [companion_outer(sc.function, sc.compact, sc.omega, direction, x, **opts).value]
            elif method == "finitely-open":
                values = [
                    companion_finitely_open(sc.function, sc.compact, sc.omega, x, pl, seed=sc.seed, **opts).value
                    for pl in planes_for[k]
                ]
            else:
                values = [companion_value(sc.function, sc.compact, sc.omega, x, seed=sc.seed, **opts).value]
            target = None
            if expect is not None:
                target = expect[k]
            elif ref is not None:
                target = complex(ref(x.dense(ref.width_for(x))[None, :])[0, 0]) if ref.codomain_dim == 1 else None
            for j, v in enumerate(values):
                val = complex(v[0])
                err = abs(val - target) if target is not None else float("nan")
                spread = abs(val - complex(values[0][0]))
                viol = max(err if target is not None else 0.0, spread)
                if viol > worst or witness is None:
                    worst, witness = max(worst, viol), x
                rows.append([json.dumps(x.to_json()), j, val.real, val.imag,
                             "" if target is None else target.real, "" if target is None else target.imag,
                             "" if target is None else err])
        report = CheckReport("evaluate-point", bool(worst <= tol), worst, tol, witness, len(rows),
                             {"method": method, "points": len(pts)})
        header = ["point", "plane", "value_re", "value_im", "reference_re", "reference_im", "abs_err"]
        return TaskResult(index, "evaluate-point", report, (header, rows))

    return run


def _line_grid(sc: Scenario, task: dict):
    dim = sc.ambient_dim
    if dim == UNBOUNDED:
        raise ConfigError("evaluate-grid needs a finite ambient dimension")
    base = CPoint.from_json(task.get("base", _zero_json(dim)), dim)
    direction = CPoint.from_json(task.get("direction", [1] + [0] * (int(dim) - 1)), dim)
    box = task.get("box")
    if box is None:
        ball = sc.omega.bounding_ball(int(dim))
        if ball is None:
            raise ConfigError("evaluate-grid needs a box for an unbounded domain")
        r = float(ball[1]) / max(direction.norm(), 1e-300)
        box = [[-r, r], [-r, r]]
    res = int(task.get("resolution", sc.grid.get("resolution", 21)))
    if res < 2:
        raise ConfigError("grid resolution must be at least 2")
    (a, b), (c, d) = box
    re = np.linspace(float(a), float(b), res)
    im = np.linspace(float(c), float(d), res)
    return base, direction, re, im


def _grid_rows(sc: Scenario, base: CPoint, direction: CPoint, re, im, opts) -> tuple[list[list[Any]], float, CPoint | None]:
    dim = int(sc.ambient_dim)
    ref = _reference(sc.function)
    rows, worst, witness = [], 0.0, None
    B, U = base.dense(dim), direction.dense(dim)
    for y in im:
        for x in re:
            lam = complex(x, y)
            pt = B + lam * U
            if not sc.omega.contains(pt[None, :])[0]:
                rows.append([x, y, "false", "", "", "", "", ""])
                continue
            cp = CPoint.from_dense(pt, dim)
            val = complex(companion_value(sc.function, sc.compact, sc.omega, cp, seed=sc.seed, **opts).value[0])
            if ref is not None:
                target = complex(ref(pt[None, :])[0, 0])
                err = abs(val - target)
                if err > worst or witness is None:
                    worst, witness = max(worst, err), cp
                rows.append([x, y, "true", val.real, val.imag, target.real, target.imag, err])
            else:
                rows.append([x, y, "true", val.real, val.imag, "", "", ""])
    return rows, worst, witness


GRID_HEADER = ["re", "im", "in_omega", "companion_re", "companion_im", "reference_re", "reference_im", "abs_err"]


def _prepare_grid(sc: Scenario, index: int, task: dict) -> Callable[[], TaskResult]:
    base, direction, re, im = _line_grid(sc, task)
    tol = _float(task, "tol", sc.tolerances.get("pointwise", 1e-8))
    opts = sc.companion_options()

    def run() -> TaskResult:
        rows, worst, witness = _grid_rows(sc, base, direction, re, im, opts)
        report = CheckReport("evaluate-grid", bool(worst <= tol), worst, tol, witness, len(rows),
                             {"resolution": len(re)})
        return TaskResult(index, "evaluate-grid", report, (GRID_HEADER, rows))

    return run


def _prepare_topology(sc: Scenario, index: int, task: dict) -> Callable[[], TaskResult]:
    dim = sc.ambient_dim
    if dim == UNBOUNDED or int(dim) > 2:
        raise ConfigError("topology-report needs ambient dimension 1 or 2")
    resolutions = [int(r) for r in task.get("resolutions", [sc.grid.get("resolution", topology.DEFAULT_RESOLUTION[2 * int(dim)])])]
    box = task.get("box", sc.grid.get("box"))
    box = None if box is None else np.asarray(box, dtype=float)
    expect = dict(task.get("expect", {}))
    probes = [(CPoint.from_json(p["point"], dim), bool(p["expect"])) for p in task.get("coincidence_points", [])]

    def run() -> TaskResult:
        rows, details, violations = [], {"resolutions": {}}, 0
        for res in resolutions:
            grid = topology.build_grid(sc.compact, sc.omega, box, res)
            entry = {}
            for region in ("omega", "omega-minus-k", "complement-k"):
                rep = topology.components(grid, region)
                entry[region] = rep.count
                rows.append([res, region, rep.count, "" if rep.unbounded_component_id is None else rep.unbounded_component_id])
            eq = topology.connectedness_report(sc.compact, sc.omega, grid)
            entry["equivalences"] = eq.to_json()["equivalences"]
            violations += sum(not e.holds for e in eq.equivalences)
            for key, region in (("complement_components", "complement-k"), ("omega_components", "omega"),
                                ("omega_minus_k_components", "omega-minus-k")):
                if key in expect and entry[region] != int(expect[key]):
                    violations += 1
            member = []
            for x, want in probes:
                got = topology.coincidence_membership(x, sc.compact, sc.omega, grid=grid)
                member.append({"point": x, "member": got, "expected": want})
                violations += got != want
            if member:
                entry["coincidence_points"] = member
            details["resolutions"][str(res)] = entry
        report = CheckReport("topology-report", violations == 0, float(violations), 0.0, None, len(resolutions), details)
        return TaskResult(index, "topology-report", report, (["resolution", "region", "components", "unbounded_component_id"], rows))

    return run


# verification tasks: each builder validates parameters and returns a thunk


def _v_coincidence(sc: Scenario, task: dict):
    compare = _fn_spec(task["compare_to"], sc.ambient_dim, "compare_to") if "compare_to" in task else None
    return lambda: verify_coincidence(
        sc.function, sc.compact, sc.omega, int(task.get("n_samples", 100)),
        _float(task, "tol", sc.tolerances.get("pointwise", 1e-8)), sc.seed,
        compare_to=compare, options=sc.companion_options(),
    )


def _v_range(sc: Scenario, task: dict):
    D = domain_from_dict(task["D"], 1) if "D" in task else None
    probes = _points(task.get("probes", []), sc.ambient_dim, "probes")
    levels = tuple(int(v) for v in task.get("levels", (1000, 4000, 16000)))
    return lambda: verify_range_and_inertia(
        sc.function, sc.compact, sc.omega, levels, D, int(task.get("n_probes", 20)), probes,
        _float(task, "image_tol", sc.tolerances.get("image", 0.05)), sc.seed, sc.companion_options(),
    )


def _v_excision(sc: Scenario, task: dict):
    levels = tuple(int(v) for v in task.get("levels", (1000, 4000, 16000)))
    return lambda: verify_excision(
        sc.function, sc.compact, sc.omega, levels, int(task.get("n_probes", 200)),
        _float(task, "image_tol", sc.tolerances.get("image", 0.05)), sc.seed,
    )


def _v_roundtrip(sc: Scenario, task: dict):
    if "g" in task:
        g = _fn_spec(task["g"], sc.ambient_dim, "g")
    elif sc.function.known_extension is not None:
        g = sc.function.known_extension
    else:
        raise ConfigError("verify-roundtrip needs 'g' when the function has no known extension")
    f = sc.function if task.get("use_function", True) else None
    return lambda: verify_roundtrips(
        g, f, sc.compact, sc.omega, None, int(task.get("n_samples", 200)),
        _float(task, "tol", sc.tolerances.get("pointwise", 1e-8)), sc.seed,
        bool(task.get("operator_bound", True)), sc.companion_options(),
    )


def _v_composition(sc: Scenario, task: dict):
    outer = _fn_spec(task["outer"], 1, "outer")
    return lambda: verify_composition(
        sc.function, outer, sc.compact, sc.omega, int(task.get("n_samples", 20)),
        _float(task, "tol", sc.tolerances.get("pointwise", 1e-8)), sc.seed, sc.companion_options(),
    )


def _v_boundary(sc: Scenario, task: dict):
    slices = [_plane(s, sc.ambient_dim) for s in task.get("slices", [])]
    if not slices:
        raise ConfigError("verify-boundary needs slices")
    p = seminorm_from_dict(task["seminorm"]) if "seminorm" in task else None
    levels = tuple(int(v) for v in task.get("levels", (4096, 16384, 65536)))
    return lambda: verify_boundary(
        sc.function, sc.omega, slices, int(task.get("n_samples", 2000)), p,
        _float(task, "tol", 1e-6), levels, _float(task, "image_tol", sc.tolerances.get("image", 0.05)), sc.seed,
    )


def _v_max_min(sc: Scenario, task: dict):
    p = seminorm_from_dict(task["seminorm"])
    c = CPoint.from_json(task.get("c", _zero_json(sc.ambient_dim)), sc.ambient_dim)
    return lambda: verify_max_min(
        sc.function, p, sc.omega, c, int(task.get("n_samples", 10000)), _float(task, "tol", 1e-12), sc.seed,
    )


def _v_identity(sc: Scenario, task: dict):
    f1 = sc.function
    if task.get("f1") == "companion":
        f1 = companion_fn(sc.function, sc.compact, sc.omega, seed=sc.seed, **sc.companion_options())
    f2 = _fn_spec(task["f2"], sc.ambient_dim, "f2") if "f2" in task else sc.function
    ball = task.get("C_ball")
    if ball is None:
        raise ConfigError("verify-identity needs C_ball")
    C = Ball(tuple(as_complex(v) for v in ball["center"]), float(ball["radius"]))
    return lambda: verify_identity(
        f1, f2, C, sc.omega, int(task.get("n_samples", 200)),
        _float(task, "tol", sc.tolerances.get("pointwise", 1e-8)), sc.seed,
    )


def _v_level_sets(sc: Scenario, task: dict):
    plane = _plane(task["plane"], sc.ambient_dim)
    value = as_complex(task.get("value", 0))
    return lambda: verify_level_sets(sc.function, sc.omega, plane, value, int(task.get("resolution", 33)))


_VERIFY = {
    "coincidence": _v_coincidence,
    "range": _v_range,
    "excision": _v_excision,
    "roundtrip": _v_roundtrip,
    "composition": _v_composition,
    "boundary": _v_boundary,
    "max-min": _v_max_min,
    "identity": _v_identity,
    "level-sets": _v_level_sets,
}


# ---------------------------------------------------------------- running and writing


@dataclass
class ScenarioOutcome:
    scenario_id: str
    status: int
    reports: list[CheckReport]
    error: str | None = None
    files: list[str] = field(default_factory=list)


def _cell(v: Any) -> Any:
    if isinstance(v, (float, np.floating)):
        return format_number(v)
    return v


def _csv_text(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _execute(sc: Scenario) -> tuple[int, list[TaskResult], list[dict]]:
    results, errors, codes = [], [], []
    for i, run in enumerate(sc.runners):
        try:
            res = run()
        except NUMERIC_ERRORS as exc:
            errors.append({"index": i, "type": sc.tasks[i]["type"], "error": type(exc).__name__, "message": str(exc)})
            codes.append(EXIT_NUMERIC)
            continue
        results.append(res)
        codes.append(EXIT_OK if res.report.passed else EXIT_CHECK_FAILED)
    return worst_status(codes), results, errors


def run_scenario(config_path: str | Path, out_dir: str | Path, overrides: dict | None = None) -> ScenarioOutcome:
    """Run one scenario; writes ``<id>.json`` plus one CSV per task unless the config is bad."""
    try:
        sc = load_scenario(config_path, overrides)
        status, results, errors = _execute(sc)
    except ConfigError as exc:
        return ScenarioOutcome(Path(config_path).stem, EXIT_CONFIG, [], str(exc))
    except CONFIG_ERRORS as exc:
        return ScenarioOutcome(Path(config_path).stem, EXIT_CONFIG, [], f"{type(exc).__name__}: {exc}")
    except HartogsError as exc:
        return ScenarioOutcome(Path(config_path).stem, EXIT_NUMERIC, [], f"{type(exc).__name__}: {exc}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files, task_entries = [], []
    for res in results:
        name = f"{sc.scenario_id}-task{res.index:02d}-{res.task_type}.csv"
        if res.table is not None:
            header, rows = res.table
        else:
            header, rows = _check_table(res.report)
        (out / name).write_text(_csv_text(header, rows), encoding="utf-8")
        files.append(name)
        task_entries.append({"index": res.index, "type": res.task_type, "csv": name, "check": res.report.to_json()})
    report = {
        "scenario_id": sc.scenario_id,
        "spec_version": SCHEMA_VERSION,
        "seed": sc.seed,
        "tolerances": sc.tolerances,
        "status": status,
        "pass": status == EXIT_OK,
        "tasks": task_entries,
        "errors": errors,
    }
    name = f"{sc.scenario_id}.json"
    (out / name).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    files.insert(0, name)
    return ScenarioOutcome(sc.scenario_id, status, [r.report for r in results],
                           "; ".join(e["message"] for e in errors) or None, files)


def _check_table(r: CheckReport):
    header = ["check_id", "pass", "worst_violation", "tolerance", "samples_used", "witness"]
    witness = "" if r.witness is None else json.dumps(r.to_json()["witness"], separators=(",", ":"))
    return header, [[r.check_id, "true" if r.passed else "false", r.worst_violation, r.tolerance, r.samples_used, witness]]


def _run_one(args) -> ScenarioOutcome:
    path, out_dir, overrides = args
    return run_scenario(path, out_dir, overrides)


def verify_all(
    suite_dir: str | Path | None,
    out_dir: str | Path,
    overrides: dict | None = None,
    parallel: int = 1,
) -> tuple[int, list[ScenarioOutcome]]:
    """Run every ``*.json`` scenario in the directory; writes ``summary.csv`` and ``summary.json``."""
    suite = Path(suite_dir) if suite_dir is not None else bundled_suite()
    configs = sorted(suite.glob("*.json")) if suite.is_dir() else []
    if not configs:
        return EXIT_CONFIG, []
    out = Path(out_dir)
    jobs = [(str(p), str(out / p.stem), overrides) for p in configs]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(j) for j in jobs]
    out.mkdir(parents=True, exist_ok=True)
    rows = [(o.scenario_id, r) for o in outcomes for r in o.reports]
    write_summary_csv(rows, out / "summary.csv")
    summary = {
        "status": worst_status(o.status for o in outcomes),
        "scenarios": [
            {"scenario_id": o.scenario_id, "status": o.status, "error": o.error,
             "checks": [{"check_id": r.check_id, "pass": r.passed} for r in o.reports]}
            for o in outcomes
        ],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return summary["status"], outcomes


def dump_grid(config_path: str | Path, out_path: str | Path, overrides: dict | None = None) -> int:
    """Companion values over a line grid as CSV.

    Uses the scenario's first ``evaluate-grid`` task, or the (Re, Im) plane
    of the first coordinate through the origin when there is none.
    """
    try:
        sc = load_scenario(config_path, overrides)
        task = next((t for t in sc.tasks if t["type"] == "evaluate-grid"), {"type": "evaluate-grid"})
        base, direction, re, im = _line_grid(sc, task)
        rows, _, _ = _grid_rows(sc, base, direction, re, im, sc.companion_options())
    except ConfigError:
        return EXIT_CONFIG
    except CONFIG_ERRORS:
        return EXIT_CONFIG
    except HartogsError:
        return EXIT_NUMERIC
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    Path(out_path).write_text(_csv_text(GRID_HEADER, rows), encoding="utf-8")
    return EXIT_OK
