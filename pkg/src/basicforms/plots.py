"""Numeric verification of forms along sampled smooth curves and maps.

A :class:`Plot` is a sampled smooth map from a parameter box into R^n:
parameter grid, values, and Jacobians, all floats.  Pulling a form back
along a plot produces, per sample, the components of the pulled-back form
on the standard parameter basis k-tuples.  Two plots that land in the same
quotient (same composition with the projection) must produce identical
pullback tensors for any form that descends; :func:`criterion_check`
measures the worst disagreement.

The flat bump functions used by the built-in ``z2_p1``/``z2_p2`` pair are
the classic smooth-but-not-analytic examples: e^(-1/t^2) glued at 0, where
every derivative vanishes.  Their closed-form derivatives are built in, so
no finite differences pollute those plots.

Only :func:`smooth_gauge_check` differentiates numerically (the gauge path
is sampled, not symbolic); it refuses grids whose finite-difference error
estimate is not comfortably below the tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .forms import Form, eval_form

DEFAULT_SYMBOLIC_TOL = 1e-9
DEFAULT_FD_TOL = 1e-6


class GridTooCoarseError(ValueError):
    """Finite-difference error estimate too large for the requested tolerance."""


@dataclass(frozen=True)
class Plot:
    """Sampled smooth map: grid (S, q), values (S, n), jacobians (S, n, q)."""

    grid: np.ndarray
    values: np.ndarray
    jacobians: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim == 1:
            grid = grid[:, None]
        values = np.asarray(self.values, dtype=float)
        jac = np.asarray(self.jacobians, dtype=float)
        if grid.ndim != 2 or values.ndim != 2 or jac.ndim != 3:
            raise ValueError("plot arrays have wrong ranks")
        samples, q = grid.shape
        n = values.shape[1]
        if values.shape[0] != samples or jac.shape != (samples, n, q):
            raise ValueError(
                f"inconsistent plot shapes: grid {grid.shape}, values {values.shape}, "
                f"jacobians {jac.shape}"
            )
        for name, arr in (("grid", grid), ("values", values), ("jacobians", jac)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"plot {name} contain non-finite entries")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "jacobians", jac)

    @property
    def num_samples(self) -> int:
        return self.grid.shape[0]

    @property
    def param_dim(self) -> int:
        return self.grid.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class GroupPath:
    """Sampled path of invertible affine maps over a 1-parameter grid."""

    grid: np.ndarray
    linears: np.ndarray  # (S, n, n)
    translations: np.ndarray  # (S, n)

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim == 1:
            grid = grid[:, None]
        linears = np.asarray(self.linears, dtype=float)
        translations = np.asarray(self.translations, dtype=float)
        samples = grid.shape[0]
        if linears.ndim != 3 or linears.shape[0] != samples:
            raise ValueError("gauge linear parts have wrong shape")
        n = linears.shape[1]
        if linears.shape != (samples, n, n) or translations.shape != (samples, n):
            raise ValueError("gauge shapes are inconsistent")
        dets = np.linalg.det(linears)
        if np.any(np.abs(dets) < 1e-12):
            raise ValueError("gauge contains a numerically singular map")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "linears", linears)
        object.__setattr__(self, "translations", translations)

    @property
    def dim(self) -> int:
        return self.linears.shape[1]


@dataclass(frozen=True)
class DeviationReport:
    """Worst-case disagreement over all samples and basis tuples."""

    max_abs_deviation: float
    argmax_index: int
    argmax_param: tuple[float, ...]
    tolerance: float
    passed: bool
    deviations: np.ndarray = field(repr=False, compare=False)


def _flat_bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    nz = t != 0.0
    out[nz] = np.exp(-1.0 / t[nz] ** 2)
    return out


def _flat_bump_prime(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    nz = t != 0.0
    tn = t[nz]
    out[nz] = 2.0 * np.exp(-1.0 / tn ** 2) / tn ** 3
    return out


def default_line_grid(start: float = -1.5, stop: float = 1.5, count: int = 2001) -> np.ndarray:
    """Uniform 1-parameter grid; the midpoint is snapped to 0 exactly when
    the range is symmetric and the count odd (the flat plots glue there)."""
    grid = np.linspace(start, stop, count)
    if count % 2 == 1 and abs(start + stop) < 1e-15:
        grid[count // 2] = 0.0
    return grid


def _as_param_column(grid: np.ndarray) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    if g.ndim != 2 or g.shape[1] != 1:
        raise ValueError("this builtin needs a 1-parameter grid")
    return g


def _plot_z2_p1(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    sign = np.sign(t)
    values = (sign * _flat_bump(t))[:, None]
    jac = (sign * _flat_bump_prime(t))[:, None, None]
    return Plot(g, values, jac)


def _plot_z2_p2(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    values = (-_flat_bump(t))[:, None]
    jac = (-_flat_bump_prime(t))[:, None, None]
    return Plot(g, values, jac)


def _plot_torus_line(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    return Plot(g, t[:, None], np.ones_like(t)[:, None, None])


def _plot_torus_line_shifted(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    return Plot(g, (t + 1.0)[:, None], np.ones_like(t)[:, None, None])


def _plot_solenoid_line(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    values = np.stack([t, np.zeros_like(t)], axis=1)
    jac = np.stack([np.ones_like(t), np.zeros_like(t)], axis=1)[:, :, None]
    return Plot(g, values, jac)


def _plot_solenoid_line_flowed(grid: np.ndarray, bind_a: float | None) -> Plot:
    # the same line pushed by the flow at time t, so the slope parameter enters
    if bind_a is None:
        raise ValueError("plot 'solenoid_line_flowed' needs a numeric value for 'a'")
    g = _as_param_column(grid)
    t = g[:, 0]
    values = np.stack([2.0 * t, bind_a * t], axis=1)
    jac = np.stack([np.full_like(t, 2.0), np.full_like(t, bind_a)], axis=1)[:, :, None]
    return Plot(g, values, jac)


def _plot_so2_arc(grid: np.ndarray, bind_a: float | None) -> Plot:
    g = _as_param_column(grid)
    t = g[:, 0]
    values = np.stack([np.cos(t), np.sin(t)], axis=1)
    jac = np.stack([-np.sin(t), np.cos(t)], axis=1)[:, :, None]
    return Plot(g, values, jac)


_PLOT_REGISTRY: dict[str, Callable[[np.ndarray, float | None], Plot]] = {
    "z2_p1": _plot_z2_p1,
    "z2_p2": _plot_z2_p2,
    "torus_line": _plot_torus_line,
    "torus_line_shifted": _plot_torus_line_shifted,
    "solenoid_line": _plot_solenoid_line,
    "solenoid_line_flowed": _plot_solenoid_line_flowed,
    "so2_arc": _plot_so2_arc,
}


def plot_names() -> list[str]:
    return sorted(_PLOT_REGISTRY)


def builtin_plot(name: str, grid: np.ndarray, bind_a: float | None = None) -> Plot:
    """Instantiate a registered plot on a grid.

    Plots whose formulas involve the parameter require ``bind_a``.
    """
    builder = _PLOT_REGISTRY.get(name)
    if builder is None:
        raise KeyError(f"unknown plot {name!r}; known: {', '.join(plot_names())}")
    return builder(np.asarray(grid, dtype=float), bind_a)


def _gauge_so2_half_turn(grid: np.ndarray, bind_a: float | None) -> GroupPath:
    g = _as_param_column(grid)
    theta = g[:, 0] / 2.0
    c, s = np.cos(theta), np.sin(theta)
    linears = np.stack(
        [np.stack([c, -s], axis=1), np.stack([s, c], axis=1)], axis=1
    )
    return GroupPath(g, linears, np.zeros((g.shape[0], 2)))


def _gauge_so2_identity(grid: np.ndarray, bind_a: float | None) -> GroupPath:
    g = _as_param_column(grid)
    samples = g.shape[0]
    linears = np.broadcast_to(np.eye(2), (samples, 2, 2)).copy()
    return GroupPath(g, linears, np.zeros((samples, 2)))


_GAUGE_REGISTRY: dict[str, Callable[[np.ndarray, float | None], GroupPath]] = {
    "so2_half_turn": _gauge_so2_half_turn,
    "so2_identity": _gauge_so2_identity,
}


def gauge_names() -> list[str]:
    return sorted(_GAUGE_REGISTRY)


def builtin_gauge(name: str, grid: np.ndarray, bind_a: float | None = None) -> GroupPath:
    builder = _GAUGE_REGISTRY.get(name)
    if builder is None:
        raise KeyError(f"unknown gauge {name!r}; known: {', '.join(gauge_names())}")
    return builder(np.asarray(grid, dtype=float), bind_a)


def plot_from_poly_map(
    mapping, grid: np.ndarray, bind_a: float | None = None
) -> Plot:
    """Sample a polynomial map and its exact Jacobian on a grid."""
    g = np.asarray(grid, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    q = g.shape[1]
    if mapping.domain_dim != q:
        raise ValueError("grid parameter count does not match the map's domain")
    comps = mapping.components
    partials = [[comp.partial(j) for j in range(q)] for comp in comps]
    samples = g.shape[0]
    n = mapping.codomain_dim
    values = np.empty((samples, n))
    jac = np.empty((samples, n, q))
    for s in range(samples):
        u = g[s]
        for i, comp in enumerate(comps):
            values[s, i] = comp.evaluate(u, bind_a)
            for j in range(q):
                jac[s, i, j] = partials[i][j].evaluate(u, bind_a)
    return Plot(g, values, jac)


def basis_tuples(param_dim: int, grade: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(param_dim), grade))


def pullback_along_plot(
    plot: Plot, form: Form, bind_a: float | None = None
) -> np.ndarray:
    """Per-sample components of the pulled-back form.

    Output has shape (num_samples, C(param_dim, grade)); columns follow
    lexicographic parameter index tuples.  A grade above the parameter
    dimension yields a zero-width result (nothing survives pullback).
    """
    if form.dim != plot.ambient_dim:
        raise ValueError("form and plot live in different ambient dimensions")
    combos = basis_tuples(plot.param_dim, form.grade)
    out = np.zeros((plot.num_samples, len(combos)))
    if not combos:
        return out
    for s in range(plot.num_samples):
        point = plot.values[s]
        jac = plot.jacobians[s]
        for ci, combo in enumerate(combos):
            vectors = [jac[:, j] for j in combo]
            out[s, ci] = eval_form(form, point, vectors, bind_a)
    return out


def _report(deviations: np.ndarray, grid: np.ndarray, tol: float) -> DeviationReport:
    idx = int(np.argmax(deviations)) if deviations.size else 0
    worst = float(deviations[idx]) if deviations.size else 0.0
    return DeviationReport(
        max_abs_deviation=worst,
        argmax_index=idx,
        argmax_param=tuple(float(v) for v in grid[idx]) if grid.size else (),
        tolerance=tol,
        passed=worst <= tol,
        deviations=deviations,
    )


def criterion_check(
    first: Plot,
    second: Plot,
    form: Form,
    tol: float = DEFAULT_SYMBOLIC_TOL,
    bind_a: float | None = None,
) -> DeviationReport:
    """Compare pullbacks of a form along two plots over a shared grid.

    The two plots must be sampled on identical grids and land in the same
    ambient space.  PASS means the worst absolute difference of pullback
    components is within ``tol``.
    """
    if not np.array_equal(first.grid, second.grid):
        raise ValueError("plots are sampled on different grids")
    if first.ambient_dim != second.ambient_dim:
        raise ValueError("plots land in different ambient spaces")
    t1 = pullback_along_plot(first, form, bind_a)
    t2 = pullback_along_plot(second, form, bind_a)
    diff = np.abs(t1 - t2)
    per_sample = diff.max(axis=1) if diff.shape[1] else np.zeros(first.num_samples)
    return _report(per_sample, first.grid, tol)


def _fd_derivative(arr: np.ndarray, spacing: float) -> tuple[np.ndarray, float]:
    """Fourth-order finite-difference derivative along axis 0.

    One-sided fourth-order stencils cover the two rows at each end, so the
    accuracy is uniform across the grid.  Returns the derivative and an
    error estimate: the worst difference against the second-order stencil,
    which bounds the coarser stencil's truncation error and so is a
    conservative proxy for our own.
    """
    flat = arr.reshape(arr.shape[0], -1)
    if flat.shape[0] < 5:
        return np.gradient(flat, spacing, axis=0).reshape(arr.shape), np.inf
    second = np.gradient(flat, spacing, axis=0, edge_order=2)
    fourth = np.empty_like(second)
    fourth[2:-2] = (
        flat[:-4] - 8.0 * flat[1:-3] + 8.0 * flat[3:-1] - flat[4:]
    ) / (12.0 * spacing)
    h12 = 12.0 * spacing
    f0, f1, f2, f3, f4 = flat[0], flat[1], flat[2], flat[3], flat[4]
    fourth[0] = (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / h12
    fourth[1] = (-3.0 * f0 - 10.0 * f1 + 18.0 * f2 - 6.0 * f3 + f4) / h12
    g0, g1, g2, g3, g4 = flat[-1], flat[-2], flat[-3], flat[-4], flat[-5]
    fourth[-1] = (25.0 * g0 - 48.0 * g1 + 36.0 * g2 - 16.0 * g3 + 3.0 * g4) / h12
    fourth[-2] = (3.0 * g0 + 10.0 * g1 - 18.0 * g2 + 6.0 * g3 - g4) / h12
    estimate = float(np.max(np.abs(fourth - second)))
    return fourth.reshape(arr.shape), estimate


def smooth_gauge_check(
    plot: Plot,
    gauge: GroupPath,
    form: Form,
    tol: float = DEFAULT_FD_TOL,
    bind_a: float | None = None,
) -> DeviationReport:
    """Compare a plot against its pointwise gauge transform.

    The second plot is a(u) applied to the first; its Jacobian needs the
    derivative of the gauge path, estimated by finite differences over the
    (uniform, 1-parameter) grid.  Raises :class:`GridTooCoarseError` when
    the estimated finite-difference error exceeds tol / 10.
    """
    if plot.param_dim != 1:
        raise ValueError("gauge checks support 1-parameter plots only")
    if not np.array_equal(plot.grid, gauge.grid):
        raise ValueError("plot and gauge are sampled on different grids")
    if gauge.dim != plot.ambient_dim:
        raise ValueError("gauge acts on the wrong ambient dimension")
    t = plot.grid[:, 0]
    if len(t) < 5:
        raise GridTooCoarseError("need at least 5 samples for derivative estimates")
    spacings = np.diff(t)
    h = float(spacings[0])
    if h <= 0 or not np.allclose(spacings, h, rtol=1e-9, atol=0.0):
        raise ValueError("gauge checks need a uniformly increasing grid")

    lin_prime, lin_err = _fd_derivative(gauge.linears, h)
    tr_prime, tr_err = _fd_derivative(gauge.translations, h)
    scale = float(np.max(np.abs(plot.values))) if plot.values.size else 0.0
    estimate = lin_err * max(scale, 1.0) + tr_err
    if estimate > tol / 10.0:
        raise GridTooCoarseError(
            f"finite-difference error estimate {estimate:.3e} exceeds tol/10 = "
            f"{tol / 10.0:.3e}; refine the grid"
        )

    values = (
        np.einsum("sij,sj->si", gauge.linears, plot.values) + gauge.translations
    )
    jac = (
        np.einsum("sij,sjq->siq", gauge.linears, plot.jacobians)
        + (np.einsum("sij,sj->si", lin_prime, plot.values) + tr_prime)[:, :, None]
    )
    transformed = Plot(plot.grid, values, jac)
    return criterion_check(plot, transformed, form, tol, bind_a)


def format_plot_text(plot: Plot) -> str:
    """One sample per line: ``u... | x... | jacobian row-major``."""
    lines = [
        "# columns: parameters | ambient values | jacobian (row-major, ambient x parameter)"
    ]
    for s in range(plot.num_samples):
        u = " ".join(repr(float(v)) for v in plot.grid[s])
        x = " ".join(repr(float(v)) for v in plot.values[s])
        j = " ".join(repr(float(v)) for v in plot.jacobians[s].reshape(-1))
        lines.append(f"{u} | {x} | {j}")
    return "\n".join(lines) + "\n"


def parse_plot_text(text: str) -> Plot:
    """Parse the plot interchange format; '#' starts a comment."""
    grid_rows: list[list[float]] = []
    value_rows: list[list[float]] = []
    jac_rows: list[list[float]] = []
    shape: tuple[int, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise ValueError(
                f"line {lineno}: expected 'params | values | jacobian', got {len(parts)} sections"
            )
        try:
            u = [float(v) for v in parts[0].split()]
            x = [float(v) for v in parts[1].split()]
            j = [float(v) for v in parts[2].split()]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if not u or not x:
            raise ValueError(f"line {lineno}: empty parameter or value section")
        if shape is None:
            shape = (len(u), len(x))
        elif shape != (len(u), len(x)):
            raise ValueError(f"line {lineno}: inconsistent column counts")
        if len(j) != len(u) * len(x):
            raise ValueError(
                f"line {lineno}: jacobian needs {len(u) * len(x)} entries, got {len(j)}"
            )
        grid_rows.append(u)
        value_rows.append(x)
        jac_rows.append(j)
    if shape is None:
        raise ValueError("no samples in plot text")
    q, n = shape
    samples = len(grid_rows)
    return Plot(
        np.array(grid_rows),
        np.array(value_rows),
        np.array(jac_rows).reshape(samples, n, q),
    )
