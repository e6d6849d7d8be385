"""Monte Carlo harness: tail probabilities, expectation trajectories, pendant
frequencies and variance scaling over an n grid.

Trial ``i`` of a run draws everything from ``trial_rng(seed, i)`` and grows one
history up to ``max(n_grid)``; every grid point reads a prefix of that history.
Grid points are therefore coupled (monotone in n for the subgraph counts), not
independent.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from . import kernels
from .errors import DomainError
from .graphcore import RootedPattern
from .pendant import count_pendants_parents, count_windowed_parents
from .subgraph import clique_counts, diamond_counts, g_clique, g_diamond
from .treegen import CONVENTIONS, MODELS, pa_back, trial_rng, ua_back

STATISTICS = (
    "diamond-tail",
    "clique-tail",
    "pendant",
    "windowed",
    "leaf-fraction",
    "expectation-trajectory",
    "variance",
)
PROBABILITY_STATISTICS = ("diamond-tail", "clique-tail", "pendant")
CSV_HEADER = ["n", "statistic", "estimate", "ci_low", "ci_high", "trials", "seed"]
Z95 = 1.959963984540054


class ConfigError(DomainError):
    """Invalid experiment configuration; the message starts with the field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ExperimentSpec:
    model: str
    n_grid: tuple
    statistic: str
    m: int = 1
    convention: str = "normalized"
    trials: int | None = None
    seed: int = 0
    k: int | None = None
    pattern: str | None = None
    n0: int | None = None
    r: int | None = None
    output: str | None = None

    def __post_init__(self):
        if not isinstance(self.model, str) or self.model.upper() not in MODELS:
            raise ConfigError("model", f"must be one of {', '.join(MODELS)}, got {self.model!r}")
        object.__setattr__(self, "model", self.model.upper())
        if self.statistic not in STATISTICS:
            raise ConfigError("statistic", f"must be one of {', '.join(STATISTICS)}, got {self.statistic!r}")
        if self.convention not in CONVENTIONS:
            raise ConfigError("convention", f"must be one of {', '.join(CONVENTIONS)}")
        _check_int("m", self.m, 1)
        _check_int("seed", self.seed, 0)
        grid = self.n_grid
        if isinstance(grid, (str, bytes)) or not hasattr(grid, "__iter__"):
            raise ConfigError("n_grid", "must be a list of integers")
        grid = tuple(grid)
        if not grid:
            raise ConfigError("n_grid", "must not be empty")
        for i, n in enumerate(grid):
            _check_int(f"n_grid[{i}]", n, self.m + 1)
            if i and n <= grid[i - 1]:
                raise ConfigError(f"n_grid[{i}]", "grid must be strictly increasing")
        object.__setattr__(self, "n_grid", grid)
        if self.trials is None:
            object.__setattr__(self, "trials", 10_000 if self.statistic in PROBABILITY_STATISTICS else 100)
        _check_int("trials", self.trials, 1)
        self._check_statistic()

    def _check_statistic(self):
        st = self.statistic
        tree_stats = ("pendant", "windowed", "leaf-fraction", "variance")
        if st in tree_stats:
            if self.m != 1:
                raise ConfigError("m", f"{st} works on trees and needs m = 1")
            if self.model == "PA" and self.convention != "normalized":
                raise ConfigError("convention", "the fixed-denominator law can leave vertices isolated; trees need 'normalized'")
        if st in ("diamond-tail", "clique-tail", "expectation-trajectory") and self.model != "UA":
            raise ConfigError("model", f"{st} is defined for UA growth")
        if st == "diamond-tail" and self.m != 2:
            raise ConfigError("m", "diamond statistics need m = 2")
        if st in ("diamond-tail", "clique-tail"):
            if self.k is None:
                raise ConfigError("k", f"{st} needs k")
            lo = 4 if st == "diamond-tail" else self.m + 2
            _check_int("k", self.k, lo)
            if self.k > self.n_grid[-1]:
                raise ConfigError("k", f"must lie within the n grid (<= {self.n_grid[-1]})")
        if st in ("pendant", "windowed", "variance") and self.pattern is None:
            raise ConfigError("pattern", f"{st} needs a pattern parent array such as '0 1 1'")
        if self.pattern is not None:
            try:
                RootedPattern.parse(self.pattern)
            except (ValueError, TypeError) as e:
                raise ConfigError("pattern", str(e)) from None
        if st == "windowed":
            if self.n0 is None or self.r is None:
                raise ConfigError("n0" if self.n0 is None else "r", "windowed needs n0 and r")
            _check_int("n0", self.n0, 1)
            _check_int("r", self.r, 1)
            v = self.pattern_obj().v
            if self.n0 + self.r + v > self.n_grid[0]:
                raise ConfigError("n_grid[0]", f"windowed needs n0 + r + v <= n, got n = {self.n_grid[0]}")

    def pattern_obj(self) -> RootedPattern:
        return RootedPattern.parse(self.pattern if self.pattern is not None else "0")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["n_grid"] = list(self.n_grid)
        return d


def _check_int(path: str, value, lo: int):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"must be an integer, got {value!r}")
    if value < lo:
        raise ConfigError(path, f"must be >= {lo}, got {value}")


@dataclass
class ResultPoint:
    n: int
    statistic: str
    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int
    extra: dict = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    points: list

    def estimates(self) -> list[float]:
        return [p.estimate for p in self.points]

    def to_csv(self) -> str:
        lines = [",".join(CSV_HEADER)]
        for p in self.points:
            lines.append(f"{p.n},{p.statistic},{p.estimate!r},{p.ci_low!r},{p.ci_high!r},{p.trials},{p.seed}")
        return "\n".join(lines) + "\n"

    def manifest(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "points": [dataclasses.asdict(p) for p in self.points],
        }

    def write(self, path: str | Path):
        """CSV at ``path`` and the JSON manifest next to it (``.json``)."""
        path = Path(path)
        path.write_text(self.to_csv())
        path.with_suffix(".json").write_text(json.dumps(self.manifest(), indent=2) + "\n")


def wilson(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval."""
    ci = binomtest(int(successes), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def _proportion_point(n, spec, hits: int, t0: float, extra=None) -> ResultPoint:
    lo, hi = wilson(hits, spec.trials)
    return ResultPoint(n, spec.statistic, hits / spec.trials, lo, hi, spec.trials, spec.seed, extra or {}, time.perf_counter() - t0)


def _mean_point(n, spec, samples: np.ndarray, t0: float, scale: float = 1.0, extra=None) -> ResultPoint:
    x = samples.astype(np.float64) / scale
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0
    return ResultPoint(n, spec.statistic, mean, mean - Z95 * se, mean + Z95 * se, len(x), spec.seed,
                       {"se": se, **(extra or {})}, time.perf_counter() - t0)


# ----------------------------------------------------------------------------
# per-trial samplers; each returns one value per grid point


def _graph_back(spec: ExperimentSpec, rng, n_max: int) -> np.ndarray:
    if spec.model == "UA":
        return ua_back(n_max, spec.m, rng)
    return pa_back(n_max, spec.m, rng, spec.convention)


def _subgraph_trajectory(spec: ExperimentSpec, rng) -> np.ndarray:
    back = _graph_back(spec, rng, spec.n_grid[-1])
    if spec.m == 2:
        return diamond_counts(back, spec.n_grid)
    return clique_counts(back, spec.n_grid)


def _tree_prefixes(spec: ExperimentSpec, rng):
    back = _graph_back(spec, rng, spec.n_grid[-1])
    full = np.ascontiguousarray(back[:, 0])
    for n in spec.n_grid:
        yield n, full[: n + 1]


def _collect(spec: ExperimentSpec, per_trial) -> np.ndarray:
    """(trials, len(grid)) matrix of per-trial values, in trial order."""
    out = np.empty((spec.trials, len(spec.n_grid)), dtype=np.int64)
    for i in range(spec.trials):
        out[i] = per_trial(trial_rng(spec.seed, i))
    return out


def _require(spec: ExperimentSpec, statistics: tuple):
    if spec.statistic not in statistics:
        raise DomainError(f"statistic {spec.statistic!r} not handled here (expected one of {statistics})")


# ----------------------------------------------------------------------------
# experiments


def estimate_tail_probability(spec: ExperimentSpec) -> ExperimentResult:
    """P(X_n >= g(k)) per grid point, X the diamond (m = 2) or K_{m+1} count."""
    _require(spec, ("diamond-tail", "clique-tail"))
    g = g_diamond(spec.k) if spec.statistic == "diamond-tail" else g_clique(spec.k, spec.m)
    t0 = time.perf_counter()
    counts = _collect(spec, lambda rng: _subgraph_trajectory(spec, rng))
    hits = (counts >= g).sum(axis=0)
    return ExperimentResult(spec, [
        _proportion_point(n, spec, int(h), t0, {"threshold": g, "mean": float(counts[:, j].mean())})
        for j, (n, h) in enumerate(zip(spec.n_grid, hits))
    ])


def estimate_expectation_trajectory(spec: ExperimentSpec) -> ExperimentResult:
    """Mean diamond (m = 2) or K_{m+1} (m >= 3) count per grid point."""
    _require(spec, ("expectation-trajectory",))
    t0 = time.perf_counter()
    counts = _collect(spec, lambda rng: _subgraph_trajectory(spec, rng))
    return ExperimentResult(spec, [_mean_point(n, spec, counts[:, j], t0) for j, n in enumerate(spec.n_grid)])


def _pendant_counts(spec: ExperimentSpec, windowed: bool) -> np.ndarray:
    p = spec.pattern_obj()

    def one(rng):
        if windowed:
            return [count_windowed_parents(par, p, spec.n0, spec.r) for _, par in _tree_prefixes(spec, rng)]
        return [count_pendants_parents(par, p) for _, par in _tree_prefixes(spec, rng)]

    return _collect(spec, one)


def pendant_probability_curve(spec: ExperimentSpec) -> ExperimentResult:
    """Frequency of trees having at least one pendant copy of the pattern; for
    ``windowed`` the mean windowed count instead, with the frequency of a
    positive count in ``extra``."""
    _require(spec, ("pendant", "windowed"))
    t0 = time.perf_counter()
    if spec.statistic == "pendant":
        counts = _pendant_counts(spec, windowed=False)
        return ExperimentResult(spec, [
            _proportion_point(n, spec, int((counts[:, j] > 0).sum()), t0) for j, n in enumerate(spec.n_grid)
        ])
    counts = _pendant_counts(spec, windowed=True)
    points = []
    for j, n in enumerate(spec.n_grid):
        freq = float((counts[:, j] > 0).mean())
        points.append(_mean_point(n, spec, counts[:, j], t0, extra={"frequency": freq}))
    return ExperimentResult(spec, points)


def leaf_fraction(spec: ExperimentSpec) -> ExperimentResult:
    """Mean pendant-copy count divided by n; the default single-vertex pattern
    gives the leaf fraction."""
    _require(spec, ("leaf-fraction",))
    t0 = time.perf_counter()
    counts = _pendant_counts(spec, windowed=False)
    return ExperimentResult(spec, [_mean_point(n, spec, counts[:, j], t0, scale=n) for j, n in enumerate(spec.n_grid)])


def variance_scaling(spec: ExperimentSpec) -> ExperimentResult:
    """Empirical Var(X)/n of the pendant count per grid point.

    The interval uses the normal-theory standard error of a sample variance.
    ``extra`` carries the mean, Var/mean^2 and the frequency of X = 0.
    """
    _require(spec, ("variance",))
    t0 = time.perf_counter()
    counts = _pendant_counts(spec, windowed=False)
    points = []
    for j, n in enumerate(spec.n_grid):
        x = counts[:, j].astype(np.float64)
        mean = float(x.mean())
        var = float(x.var(ddof=1)) if len(x) > 1 else 0.0
        se = var * math.sqrt(2.0 / max(len(x) - 1, 1))
        extra = {
            "mean": mean,
            "var": var,
            "var_over_mean2": var / mean**2 if mean else math.inf,
            "p_zero": float((x == 0).mean()),
        }
        points.append(ResultPoint(n, spec.statistic, var / n, max(0.0, (var - Z95 * se) / n), (var + Z95 * se) / n,
                                  len(x), spec.seed, extra, time.perf_counter() - t0))
    return ExperimentResult(spec, points)


_DISPATCH = {
    "diamond-tail": estimate_tail_probability,
    "clique-tail": estimate_tail_probability,
    "expectation-trajectory": estimate_expectation_trajectory,
    "pendant": pendant_probability_curve,
    "windowed": pendant_probability_curve,
    "leaf-fraction": leaf_fraction,
    "variance": variance_scaling,
}


def run(spec: ExperimentSpec, log=None) -> ExperimentResult:
    """Run the experiment named by ``spec.statistic``; writes output files when
    ``spec.output`` is set.  ``log`` receives one line per grid point."""
    kernels.warmup()
    result = _DISPATCH[spec.statistic](spec)
    if log is not None:
        for p in result.points:
            log(f"n={p.n} {p.statistic} estimate={p.estimate:.6g} ci=[{p.ci_low:.6g}, {p.ci_high:.6g}] elapsed={p.elapsed:.2f}s")
    if spec.output:
        result.write(spec.output)
    return result


# ----------------------------------------------------------------------------
# configuration files


_FIELDS = {f.name for f in dataclasses.fields(ExperimentSpec)}


def spec_from_dict(data, default_seed: int = 0) -> ExperimentSpec:
    """Validated spec from a config mapping (or a run manifest's ``spec``)."""
    if not isinstance(data, dict):
        raise ConfigError("$", "config must be a JSON object")
    if "spec" in data and isinstance(data["spec"], dict):
        data = data["spec"]
    for key in data:
        if key not in _FIELDS:
            raise ConfigError(key, "unknown field")
    for key in ("model", "n_grid", "statistic"):
        if key not in data:
            raise ConfigError(key, "required field missing")
    return ExperimentSpec(**{"seed": default_seed, **data})


def load_config(path: str | Path, default_seed: int = 0) -> ExperimentSpec:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(str(path), f"cannot read config ({e.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"invalid JSON at line {e.lineno}: {e.msg}") from None
    return spec_from_dict(data, default_seed)


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
