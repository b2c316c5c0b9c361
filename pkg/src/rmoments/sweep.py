"""Checks, family sweeps, boundary search, random surveys and report output."""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import states
from .config import DEFAULT_TOLERANCES
from .criteria import HANKEL_DEFAULT, evaluate, margin, resolve_criteria
from .errors import InputError

# family id -> (generator, ordered parameter names)
FAMILIES = {
    "isotropic": (states.isotropic, ("f",)),
    "toth": (states.toth_family, ("q",)),
    "garg": (states.garg_family, ("a",)),
    "rudolph": (states.rudolph_family, ("s", "t")),
    "filtered": (states.filtered_family, ("b", "c", "d")),
    "belldiag": (states.bell_diagonal, ("p1", "p2", "p3", "p4")),
}


@dataclass(frozen=True)
class FamilySpec:
    """A one-parameter slice through a state family.

    ``fixed`` holds values for the other parameters. For ``belldiag``, weights
    that are neither swept nor fixed share the remaining probability equally.
    """

    family: str
    param: str
    start: float = 0.0
    stop: float = 1.0
    steps: int = 2
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        names = FAMILIES[self.family][1]
        if self.param not in names:
            raise InputError(f"family {self.family!r} has parameters {names}, not {self.param!r}")
        extra = set(self.fixed) - set(names)
        if extra:
            raise InputError(f"unknown fixed parameters {sorted(extra)} for {self.family!r}")
        if self.param in self.fixed:
            raise InputError(f"{self.param!r} is both swept and fixed")
        if self.family != "belldiag":
            missing = [p for p in names if p != self.param and p not in self.fixed]
            if missing:
                raise InputError(f"family {self.family!r} needs fixed values for {missing}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InputError("steps must be a positive integer")
        if self.steps > 1 and not self.stop > self.start:
            raise InputError("sweep range must satisfy from < to")

    def grid(self):
        """Closed interval, endpoints included, ``steps`` points."""
        if self.steps == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, int(self.steps))

    def state(self, value):
        gen, names = FAMILIES[self.family]
        params = dict(self.fixed)
        params[self.param] = float(value)
        if self.family == "belldiag":
            free = [p for p in names if p not in params]
            if free:
                rest = (1.0 - sum(params.values())) / len(free)
                params.update({p: rest for p in free})
        return gen(*(params[p] for p in names))


@dataclass
class SweepReport:
    spec: FamilySpec
    criteria: list
    rows: list  # (param, criterion, value, detects), sorted by param then request order
    boundaries: dict  # criterion -> list of flip locations

    def to_dict(self):
        return {
            "family": self.spec.family,
            "param": self.spec.param,
            "from": self.spec.start,
            "to": self.spec.stop,
            "steps": self.spec.steps,
            "fixed": dict(self.spec.fixed),
            "criteria": list(self.criteria),
            "rows": [
                {"param": p, "criterion": c, "value": v, "detects": d} for p, c, v, d in self.rows
            ],
            "boundaries": {k: list(v) for k, v in self.boundaries.items()},
        }


def check_state(rho, criteria="all", tol=DEFAULT_TOLERANCES, hankel_mode=HANKEL_DEFAULT):
    """Evaluate criteria on an in-memory state, in request order."""
    ids = resolve_criteria(criteria, rho.dims)
    return [evaluate(c, rho, tol, hankel_mode) for c in ids]


def run_check(state_path, criteria="all", tol=DEFAULT_TOLERANCES, hankel_mode=HANKEL_DEFAULT):
    rho = states.load_state(state_path, tol)
    return check_state(rho, criteria, tol, hankel_mode)


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _flips(grid, verdicts):
    out = []
    for i in range(1, len(grid)):
        if verdicts[i] != verdicts[i - 1]:
            out.append(float((grid[i] + grid[i - 1]) / 2))
    return out


def run_sweep(spec, criteria, tol=DEFAULT_TOLERANCES, hankel_mode=HANKEL_DEFAULT, workers=None):
    """Evaluate each criterion at every grid point.

    Results are collected by grid index, so ``workers`` changes nothing in
    the report.
    """
    grid = spec.grid()
    ids = resolve_criteria(criteria)
    # build one state up front so a bad family/range fails before any work
    states_ = _map(spec.state, grid, None)
    if not ids or not states_:
        return SweepReport(spec, ids, [], {})
    ids = resolve_criteria(criteria, states_[0].dims)

    def point(i):
        return [evaluate(c, states_[i], tol, hankel_mode) for c in ids]

    results = _map(point, range(len(grid)), workers)
    rows = []
    for x, res in zip(grid, results):
        for r in res:
            rows.append((float(x), r.id, r.value, r.detects))
    boundaries = {}
    for j, c in enumerate(ids):
        boundaries[c] = _flips(grid, [res[j].detects for res in results])
    return SweepReport(spec, ids, rows, boundaries)


def find_boundary(spec, criterion, lo, hi, param_tol=1e-6, tol=DEFAULT_TOLERANCES, hankel_mode=HANKEL_DEFAULT):
    """Bisect on the criterion's value crossing its verdict threshold.

    A value exactly at the threshold counts as no detection. Returns the
    midpoint of the final bracket, whose width is below ``param_tol``.
    """
    if param_tol <= 0:
        raise InputError("param_tol must be positive")
    if not hi > lo:
        raise InputError("need lo < hi")
    resolve_criteria([criterion])

    def detects(x):
        r = evaluate(criterion, spec.state(x), tol, hankel_mode)
        return margin(criterion, r.value, tol) > 0

    d_lo, d_hi = detects(lo), detects(hi)
    if d_lo == d_hi:
        raise InputError(f"{criterion} gives the same verdict ({d_lo}) at {lo} and {hi}; no boundary bracketed")
    while hi - lo >= param_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if detects(mid) == d_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


SAMPLERS = ("density", "separable")


def run_survey(dims, samples, rank, seed, criteria="all", sampler="density", tol=DEFAULT_TOLERANCES,
               hankel_mode=HANKEL_DEFAULT, workers=None):
    """Detection counts over seeded random states.

    Each sample gets its own child seed from ``numpy.random.SeedSequence(seed)``.
    With ``sampler="separable"`` the ``rank`` argument is the number of product
    terms in the mixture.
    """
    if not isinstance(dims, states.BipartiteDims):
        dims = states.BipartiteDims(*dims)
    if int(samples) != samples or samples < 1:
        raise InputError("samples must be >= 1")
    if seed is None:
        raise InputError("survey requires an explicit seed")
    if sampler not in SAMPLERS:
        raise InputError(f"sampler must be one of {SAMPLERS}")
    ids = resolve_criteria(criteria, dims)
    children = np.random.SeedSequence(int(seed)).spawn(int(samples))

    def one(i):
        child = int(children[i].generate_state(1, dtype=np.uint64)[0])
        if sampler == "density":
            rho = states.random_density(dims, rank, child)
        else:
            rho = states.random_separable(dims, rank, child)
        return [evaluate(c, rho, tol, hankel_mode).detects for c in ids]

    verdicts = _map(one, range(int(samples)), workers)
    counts = {c: sum(v[j] for v in verdicts) for j, c in enumerate(ids)}
    cross = {}
    for a_i, a in enumerate(ids):
        for b_i, b in enumerate(ids):
            if a != b:
                cross[f"{a}&!{b}"] = sum(v[a_i] and not v[b_i] for v in verdicts)
    return {
        "dims": str(dims),
        "samples": int(samples),
        "rank": int(rank),
        "seed": int(seed),
        "sampler": sampler,
        "criteria": ids,
        "counts": counts,
        "cross": cross,
    }


# --- serialisation ---------------------------------------------------------


def _num(x, digits):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return json.dumps(x)
    if digits == 17:
        return format(x, ".16e")
    return format(x, f".{digits}g")


def dumps(obj, digits=17, indent=2, _level=0):
    """JSON text with floats written at ``digits`` significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, digits, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, digits, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, digits, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return _num(obj, digits)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _table(header, rows):
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="csv"):
    """Serialise a SweepReport as csv, json or a plain-text table.

    CSV columns are ``param,criterion,value,detects`` with 10 significant
    digits; JSON uses 17.
    """
    if fmt == "json":
        return dumps(report.to_dict()) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "criterion", "value", "detects"])
        for p, c, v, d in report.rows:
            w.writerow([_num(p, 10), c, _num(v, 10), "true" if d else "false"])
        return buf.getvalue()
    if fmt == "table":
        rows = [(_num(p, 10), c, _num(v, 10), "yes" if d else "no") for p, c, v, d in report.rows]
        return _table(["param", "criterion", "value", "detects"], rows)
    raise InputError(f"unknown format {fmt!r}; use csv, json or table")


def emit_results(results, fmt="json"):
    """Serialise a list of CriterionResult (the ``check`` command's output)."""
    if fmt == "json":
        payload = [
            {"criterion": r.id, "value": r.value, "detects": r.detects, "details": r.details} for r in results
        ]
        return dumps(payload) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["criterion", "value", "detects"])
        for r in results:
            w.writerow([r.id, _num(r.value, 10), "true" if r.detects else "false"])
        return buf.getvalue()
    if fmt == "table":
        return _table(
            ["criterion", "value", "detects"],
            [(r.id, _num(r.value, 10), "yes" if r.detects else "no") for r in results],
        )
    raise InputError(f"unknown format {fmt!r}; use csv, json or table")
