"""Time grids, sampled signals, standard test inputs and CSV persistence."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import CsvFormatError, DomainError, MissingDerivativeError, ResolutionError

__all__ = [
    "Grid",
    "make_grid",
    "SampledSignal",
    "TestInput",
    "UnitConstant",
    "Heaviside",
    "DiracApprox",
    "Power",
    "Custom",
    "sample",
    "Trajectory",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing time points on [t0, t_end]."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise DomainError("grid needs at least two points")
        if not np.all(np.diff(pts) > 0.0):
            raise DomainError("grid points must be strictly increasing")
        if pts[0] < 0.0:
            raise DomainError(f"grid must start at t0 >= 0, got {pts[0]!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def t0(self) -> float:
        return float(self.points[0])

    @property
    def t_end(self) -> float:
        return float(self.points[-1])

    @property
    def n(self) -> int:
        return self.points.size

    @property
    def is_uniform(self) -> bool:
        d = np.diff(self.points)
        return bool(np.allclose(d, d[0], rtol=1e-12, atol=0.0))

    @property
    def h(self) -> float:
        """Step of a uniform grid."""
        if not self.is_uniform:
            raise DomainError("step is defined for uniform grids only")
        return (self.t_end - self.t0) / (self.n - 1)


def make_grid(t0: float, t_end: float, n: int, spacing: str = "uniform",
              grading: float = 1.0) -> Grid:
    """Build a uniform grid, or one graded toward t0 with exponent `grading`.

    Graded point i sits at t0 + (t_end - t0) * (i / (n - 1))**grading, which
    clusters points near t0 to resolve weakly singular kernels.
    """
    if t_end <= t0 or t0 < 0.0:
        raise DomainError(f"need t_end > t0 >= 0, got ({t0!r}, {t_end!r})")
    if n < 2:
        raise DomainError(f"need at least 2 points, got {n!r}")
    if spacing == "uniform":
        pts = np.linspace(t0, t_end, n)
    elif spacing == "graded":
        if grading < 1.0:
            raise DomainError(f"grading exponent must be >= 1, got {grading!r}")
        s = (np.arange(n) / (n - 1)) ** grading
        pts = t0 + (t_end - t0) * s
        pts[0], pts[-1] = t0, t_end
    else:
        raise DomainError(f"unknown spacing {spacing!r}")
    return Grid(pts)


@dataclass(frozen=True)
class Breakpoint:
    """Jump discontinuity of a signal: one-sided values at a known location."""

    location: float
    left: float
    right: float


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Values of a variable on a grid, optionally with analytic derivatives.

    `derivative_fns[k-1]` evaluates the k-th derivative on an array of times.
    `breakpoints` lists interior jump discontinuities so product-integration
    rules can split the affected cells exactly.
    """

    grid: Grid
    values: np.ndarray
    derivative_fns: tuple[Callable[[np.ndarray], np.ndarray], ...] = ()
    breakpoints: tuple[Breakpoint, ...] = ()

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise DomainError(
                f"values shape {vals.shape} does not match grid size {self.grid.n}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def max_derivative_order(self) -> int:
        return len(self.derivative_fns)

    def derivative(self, order: int) -> np.ndarray:
        """k-th derivative on the grid: analytic when provided, else O(h^2)
        finite differences on uniform grids (orders 1 and 2 only)."""
        if order == 0:
            return self.values
        if order <= len(self.derivative_fns):
            return np.asarray(self.derivative_fns[order - 1](self.grid.points), dtype=float)
        if not self.grid.is_uniform:
            raise MissingDerivativeError(
                f"derivative of order {order} needs an analytic provider on a non-uniform grid"
            )
        if order > 2:
            raise MissingDerivativeError(
                f"finite-difference fallback covers orders 1-2, order {order} needs a provider"
            )
        h = self.grid.h
        y = self.values if order == 1 else self.derivative(1)
        d = np.empty_like(y)
        d[1:-1] = (y[2:] - y[:-2]) / (2.0 * h)
        d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
        d[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * h)
        return d

    def interior_breakpoints(self) -> tuple[Breakpoint, ...]:
        lo, hi = self.grid.t0, self.grid.t_end
        return tuple(b for b in self.breakpoints if lo < b.location < hi)


def _power_eval(t: np.ndarray, coeff: float, exponent: float) -> np.ndarray:
    """coeff * t**exponent with exact handling of t == 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    zero = t == 0.0
    with np.errstate(divide="ignore"):
        out[~zero] = coeff * t[~zero] ** exponent
    if exponent > 0.0:
        out[zero] = 0.0
    elif exponent == 0.0:
        out[zero] = coeff
    else:
        out[zero] = math.copysign(math.inf, coeff) if coeff != 0.0 else 0.0
    return out


class TestInput:
    """Base class for standard exogenous test inputs."""

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative_fns(self) -> tuple[Callable[[np.ndarray], np.ndarray], ...]:
        return ()

    def breakpoints(self) -> tuple[Breakpoint, ...]:
        return ()


@dataclass(frozen=True)
class UnitConstant(TestInput):
    """X(tau) = 1."""

    def evaluate(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def derivative_fns(self):
        zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
        return (zero, zero, zero, zero)


@dataclass(frozen=True)
class Heaviside(TestInput):
    """X(tau) = 1 for tau <= T, 0 for tau > T."""

    T: float

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= self.T, 1.0, 0.0)

    def breakpoints(self):
        return (Breakpoint(self.T, 1.0, 0.0),)


@dataclass(frozen=True)
class DiracApprox(TestInput):
    """Normalized Gaussian bump of width eps centered at T (unit mass)."""

    T: float
    eps: float

    def __post_init__(self):
        if self.eps <= 0.0:
            raise DomainError(f"eps must be positive, got {self.eps!r}")

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        u = (t - self.T) / self.eps
        return np.exp(-0.5 * u * u) / (self.eps * math.sqrt(2.0 * math.pi))

    def derivative_fns(self):
        def d1(t):
            t = np.asarray(t, dtype=float)
            return -(t - self.T) / self.eps**2 * self.evaluate(t)

        def d2(t):
            t = np.asarray(t, dtype=float)
            u2 = ((t - self.T) / self.eps) ** 2
            return (u2 - 1.0) / self.eps**2 * self.evaluate(t)

        return (d1, d2)


@dataclass(frozen=True)
class Power(TestInput):
    """X(tau) = tau**(mu - 1), mu > 0."""

    mu: float

    def __post_init__(self):
        if self.mu <= 0.0:
            raise DomainError(f"mu must be positive, got {self.mu!r}")

    def evaluate(self, t):
        return _power_eval(t, 1.0, self.mu - 1.0)

    def derivative_fns(self):
        fns = []
        for order in range(1, 5):
            coeff = 1.0
            for j in range(order):
                coeff *= self.mu - 1.0 - j
            exponent = self.mu - 1.0 - order
            fns.append(lambda t, c=coeff, e=exponent: _power_eval(t, c, e))
        return tuple(fns)


@dataclass(frozen=True, eq=False)
class Custom(TestInput):
    """User-supplied evaluator with optional analytic derivatives/jumps."""

    fn: Callable[[np.ndarray], np.ndarray]
    derivatives: tuple[Callable[[np.ndarray], np.ndarray], ...] = ()
    jumps: tuple[Breakpoint, ...] = ()

    def evaluate(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    def derivative_fns(self):
        return self.derivatives

    def breakpoints(self):
        return self.jumps


def sample(test_input: TestInput, grid: Grid) -> SampledSignal:
    """Evaluate a test input on a grid.

    DiracApprox inputs must be resolved (eps >= 3 h near the bump) and carry
    unit mass under the trapezoid rule to 1e-6; otherwise ResolutionError.
    """
    values = test_input.evaluate(grid.points)
    if isinstance(test_input, DiracApprox):
        support = (grid.points >= test_input.T - 4 * test_input.eps) & (
            grid.points <= test_input.T + 4 * test_input.eps
        )
        idx = np.flatnonzero(support)
        if idx.size >= 2:
            local_h = float(np.max(np.diff(grid.points[idx[0]: idx[-1] + 1])))
        else:
            local_h = float(np.max(np.diff(grid.points)))
        if test_input.eps < 3.0 * local_h:
            raise ResolutionError(
                f"DiracApprox eps={test_input.eps!r} under-resolved: local step {local_h!r}"
            )
        mass = float(np.trapz(values, grid.points))
        if abs(mass - 1.0) > 1e-6:
            raise ResolutionError(
                f"DiracApprox mass on grid is {mass!r}, not 1 within 1e-6 "
                "(bump too close to the grid boundary?)"
            )
    return SampledSignal(
        grid=grid,
        values=values,
        derivative_fns=test_input.derivative_fns(),
        breakpoints=test_input.breakpoints(),
    )


@dataclass(eq=False)
class Trajectory:
    """Output time series: a time column plus named value series.

    Metadata (method, tolerances, ...) travels with the object but is not
    serialized to CSV.
    """

    t: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if self.t.ndim != 1:
            raise DomainError("time column must be one-dimensional")
        self.columns = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        for name, col in self.columns.items():
            if col.shape != self.t.shape:
                raise DomainError(f"column {name!r} length does not match time column")

    @classmethod
    def from_signal(cls, signal: SampledSignal, name: str = "value",
                    **metadata: str) -> "Trajectory":
        return cls(t=signal.grid.points.copy(), columns={name: signal.values.copy()},
                   metadata=dict(metadata))

    def series(self, name: str) -> np.ndarray:
        return self.columns[name]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_csv(traj: Trajectory, path: str | Path) -> None:
    """Write `t,<series...>` rows at 17 significant digits, LF line endings."""
    if traj.t.size == 0:
        raise DomainError("refusing to write an empty trajectory")
    names = list(traj.columns)
    if not names:
        raise DomainError("trajectory has no value series")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t"] + names)
        cols = [traj.columns[n] for n in names]
        for i in range(traj.t.size):
            writer.writerow([_fmt(traj.t[i])] + [_fmt(c[i]) for c in cols])


def read_csv(path: str | Path) -> Trajectory:
    """Read a trajectory written by write_csv; malformed rows name their line."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("file is empty", row=1) from None
        if len(header) < 2 or header[0] != "t":
            raise CsvFormatError(
                f"expected header starting with 't', got {header!r}", row=1
            )
        names = header[1:]
        t_vals: list[float] = []
        series: list[list[float]] = [[] for _ in names]
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvFormatError(
                    f"expected {len(header)} fields, got {len(row)}", row=row_num
                )
            parsed = []
            for token in row:
                try:
                    value = float(token)
                except ValueError:
                    raise CsvFormatError(f"not a number: {token!r}", row=row_num) from None
                if math.isnan(value):
                    raise CsvFormatError("NaN is not a valid sample", row=row_num)
                parsed.append(value)
            t_vals.append(parsed[0])
            for j, v in enumerate(parsed[1:]):
                series[j].append(v)
    if not t_vals:
        raise CsvFormatError("no data rows", row=2)
    return Trajectory(
        t=np.asarray(t_vals),
        columns={name: np.asarray(vals) for name, vals in zip(names, series)},
    )
