"""Job descriptions and the one-shot runner behind the command line.

A job is a JSON object naming a command plus its inputs; expressions inside
(matrix entries, vector field components, form coefficients) use the
grammar of :mod:`basicforms.expressions`.  Each invocation resolves one job
into one report dict.  Reports are plain JSON data, deterministic except
for the ``generated_at`` stamp.

Exit codes are part of the interface::

    0  success (for checks: PASS)
    1  parse error (malformed JSON or a bad expression)
    2  validation error (well-formed but inconsistent job)
    3  a check ran fine and FAILed its tolerance
    4  unexpected computation error

A FAIL is a result, not a crash: the report is still written.

Parameter policy: jobs run over the exact field with ``a`` formal unless
``parameter`` binds it to a number.  The numeric commands (criterion,
gauge, symplectic) refuse to run with ``a`` formal if any of their inputs
mention it, rather than silently picking a value.
"""

from __future__ import annotations

import datetime as _dt
import json
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from . import __version__
from .actions import ActionSpec, AffineMap, GroupNotFiniteError, group_closure
from .examples import solenoid_stages
from .expressions import ParseError, parse_poly_expr, parse_scalar_expr
from .forms import Form, PolyMap, VectorField, render_form
from .orbifolds import OrbifoldChart, orbifold_invariant_forms
from .plots import (
    DEFAULT_FD_TOL,
    DEFAULT_SYMBOLIC_TOL,
    builtin_gauge,
    builtin_plot,
    criterion_check,
    default_line_grid,
    smooth_gauge_check,
)
from .polynomials import default_var_names, render_poly
from .solver import TruncationSpec, basic_form_basis, truncated_basic_cohomology
from .stages import IntertwiningError, stages_check
from .symplectic import builtin_model, level_restriction_check, momentum_residual

EXIT_OK = 0
EXIT_PARSE_ERROR = 1
EXIT_VALIDATION_ERROR = 2
EXIT_CHECK_FAILED = 3
EXIT_COMPUTATION_ERROR = 4

COMMANDS = (
    "basis",
    "cohomology",
    "stages",
    "criterion",
    "gauge",
    "orbifold",
    "symplectic",
)


class JobValidationError(ValueError):
    """Well-formed JSON that does not describe a runnable job."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise JobValidationError(message)


def _get(mapping: Mapping[str, Any], key: str, kind, path: str, default=None, required=False):
    if key not in mapping:
        _require(not required, f"{path}.{key} is required")
        return default
    value = mapping[key]
    if kind is float:
        _require(isinstance(value, (int, float)) and not isinstance(value, bool),
                 f"{path}.{key} must be a number")
        return float(value)
    if kind is int:
        _require(isinstance(value, int) and not isinstance(value, bool),
                 f"{path}.{key} must be an integer")
        return value
    _require(isinstance(value, kind), f"{path}.{key} has the wrong type")
    return value


def _wrap_expr(parse: Callable[[], Any], path: str):
    try:
        return parse()
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.position) from None


def _parse_affine(spec: Mapping[str, Any], dim: int, path: str) -> AffineMap:
    _require(isinstance(spec, dict), f"{path} must be an object")
    matrix = _get(spec, "matrix", list, path, required=True)
    translation = _get(spec, "translation", list, path, default=["0"] * dim)
    _require(len(matrix) == dim, f"{path}.matrix must have {dim} rows")
    rows = []
    for i, row in enumerate(matrix):
        _require(isinstance(row, list) and len(row) == dim,
                 f"{path}.matrix[{i}] must have {dim} entries")
        rows.append([
            _wrap_expr(lambda e=e: parse_scalar_expr(str(e)), f"{path}.matrix[{i}]")
            for e in row
        ])
    _require(len(translation) == dim, f"{path}.translation must have {dim} entries")
    shift = [
        _wrap_expr(lambda e=e: parse_scalar_expr(str(e)), f"{path}.translation")
        for e in translation
    ]
    try:
        return AffineMap.from_rows(rows, shift)
    except ValueError as exc:
        raise JobValidationError(f"{path}: {exc}") from None


def _parse_action(spec: Mapping[str, Any], path: str) -> ActionSpec:
    _require(isinstance(spec, dict), f"{path} must be an object")
    dim = _get(spec, "dimension", int, path, required=True)
    _require(dim >= 1, f"{path}.dimension must be positive")
    names = default_var_names(dim)
    discrete = []
    for i, g in enumerate(_get(spec, "discrete", list, path, default=[])):
        discrete.append(_parse_affine(g, dim, f"{path}.discrete[{i}]"))
    infinitesimal = []
    for i, comps in enumerate(_get(spec, "infinitesimal", list, path, default=[])):
        _require(isinstance(comps, list) and len(comps) == dim,
                 f"{path}.infinitesimal[{i}] must list {dim} components")
        polys = [
            _wrap_expr(
                lambda c=c: parse_poly_expr(str(c), names),
                f"{path}.infinitesimal[{i}]",
            )
            for c in comps
        ]
        infinitesimal.append(VectorField(polys))
    _require(bool(discrete) or bool(infinitesimal),
             f"{path} must give at least one generator")
    return ActionSpec(dim, discrete=discrete, infinitesimal=infinitesimal)


def _parse_truncation(spec: Mapping[str, Any], path: str) -> TruncationSpec:
    _require(isinstance(spec, dict), f"{path} must be an object")
    grade = _get(spec, "grade", int, path, required=True)
    max_degree = _get(spec, "max_degree", int, path, required=True)
    try:
        return TruncationSpec(grade, max_degree)
    except ValueError as exc:
        raise JobValidationError(f"{path}: {exc}") from None


def _parse_form(spec: Mapping[str, Any], dim: int, path: str) -> Form:
    _require(isinstance(spec, dict), f"{path} must be an object")
    grade = _get(spec, "grade", int, path, required=True)
    _require(0 <= grade <= dim, f"{path}.grade out of range for dimension {dim}")
    names = default_var_names(dim)
    entries = _get(spec, "terms", list, path, required=True)
    form = Form.zero(dim, grade)
    for i, term in enumerate(entries):
        _require(isinstance(term, dict), f"{path}.terms[{i}] must be an object")
        indices = _get(term, "indices", list, f"{path}.terms[{i}]", required=True)
        _require(
            all(isinstance(v, int) and not isinstance(v, bool) for v in indices),
            f"{path}.terms[{i}].indices must be integers",
        )
        coeff_text = _get(term, "coefficient", str, f"{path}.terms[{i}]", required=True)
        coeff = _wrap_expr(
            lambda: parse_poly_expr(coeff_text, names), f"{path}.terms[{i}].coefficient"
        )
        try:
            form = form + Form.monomial(dim, tuple(indices), coeff)
        except ValueError as exc:
            raise JobValidationError(f"{path}.terms[{i}]: {exc}") from None
    return form


def _parse_grid(spec: Mapping[str, Any] | None, path: str) -> np.ndarray:
    if spec is None:
        return default_line_grid()
    _require(isinstance(spec, dict), f"{path} must be an object")
    start = _get(spec, "start", float, path, required=True)
    stop = _get(spec, "stop", float, path, required=True)
    count = _get(spec, "count", int, path, required=True)
    _require(count >= 2, f"{path}.count must be at least 2")
    _require(stop > start, f"{path}.stop must exceed {path}.start")
    return default_line_grid(start, stop, count)


class _Binding:
    """Resolved parameter policy for one run."""

    def __init__(self, raw: Any):
        self.formal = True
        self.exact: Fraction | None = None
        if raw is None or raw == "formal":
            return
        if isinstance(raw, bool):
            raise JobValidationError("parameter must be 'formal', a number, or a fraction string")
        if isinstance(raw, (int, float)):
            self.formal = False
            self.exact = Fraction(str(raw))
        elif isinstance(raw, str):
            try:
                self.exact = Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise JobValidationError(
                    f"parameter {raw!r} is not 'formal', a number, or a fraction string"
                ) from None
            self.formal = False
        else:
            raise JobValidationError("parameter must be 'formal', a number, or a fraction string")

    @property
    def numeric(self) -> float | None:
        return None if self.exact is None else float(self.exact)

    def require_numeric(self, what: str) -> float:
        if self.exact is None:
            raise JobValidationError(
                f"{what} mentions the parameter 'a'; bind it with \"parameter\" "
                "or --bind-a instead of running formally"
            )
        return float(self.exact)

    def describe(self) -> Any:
        return "formal" if self.formal else str(self.exact)


def _form_json(form: Form) -> dict:
    names = default_var_names(form.dim)
    return {
        "string": render_form(form, names),
        "grade": form.grade,
        "dimension": form.dim,
        "terms": [
            {
                "indices": list(indices),
                "coefficient": render_poly(form.terms[indices], names),
            }
            for indices in sorted(form.terms)
        ],
    }


def _deviation_json(report) -> dict:
    return {
        "max_abs_deviation": report.max_abs_deviation,
        "argmax_index": report.argmax_index,
        "argmax_param": list(report.argmax_param),
        "tolerance": report.tolerance,
        "passed": report.passed,
    }


def _run_basis(job: Mapping[str, Any], binding: _Binding, tol: float | None) -> tuple[dict, bool]:
    action = _parse_action(_get(job, "action", dict, "job", required=True), "job.action")
    spec = _parse_truncation(_get(job, "truncation", dict, "job", required=True), "job.truncation")
    _require(spec.grade <= action.dim,
             "job.truncation.grade exceeds the action dimension")
    if binding.exact is not None:
        action = action.bind_param(binding.exact)
    basis = basic_form_basis(action, spec)
    results = {
        "window": {"grade": spec.grade, "max_degree": spec.max_degree},
        "dimension": len(basis),
        "basis": [_form_json(f) for f in basis],
    }
    return results, True


def _run_cohomology(job, binding: _Binding, tol) -> tuple[dict, bool]:
    action = _parse_action(_get(job, "action", dict, "job", required=True), "job.action")
    max_degree = _get(job, "max_degree", int, "job", required=True)
    _require(max_degree >= 0, "job.max_degree must be nonnegative")
    if binding.exact is not None:
        action = action.bind_param(binding.exact)
    windows = []
    for d in (max_degree, max_degree + 2):
        records = truncated_basic_cohomology(action, d)
        windows.append(
            {
                "max_degree": d,
                "records": [
                    {
                        "grade": r.grade,
                        "dim_basic": r.dim_basic,
                        "dim_closed": r.dim_closed,
                        "dim_exact": r.dim_exact,
                        "dim_cohomology": r.dim_cohomology,
                    }
                    for r in records
                ],
            }
        )
    return {"windows": windows}, True


def _run_stages(job, binding: _Binding, tol) -> tuple[dict, bool]:
    if "big" in job or "induced" in job or "projection" in job:
        big = _parse_action(_get(job, "big", dict, "job", required=True), "job.big")
        induced = _parse_action(
            _get(job, "induced", dict, "job", required=True), "job.induced"
        )
        comps = _get(job, "projection", list, "job", required=True)
        _require(len(comps) == induced.dim,
                 "job.projection must have one component per induced dimension")
        names = default_var_names(big.dim)
        projection = PolyMap(
            big.dim,
            [
                _wrap_expr(lambda c=c: parse_poly_expr(str(c), names), "job.projection")
                for c in comps
            ],
        )
    else:
        example = _get(job, "example", str, "job", required=True)
        _require(example == "solenoid", f"unknown stages example {example!r}")
        big, projection, induced = solenoid_stages()
    spec = _parse_truncation(_get(job, "truncation", dict, "job", required=True), "job.truncation")
    if binding.exact is not None:
        big = big.bind_param(binding.exact)
        induced = induced.bind_param(binding.exact)
        projection = PolyMap(
            projection.domain_dim,
            [c.bind_param(binding.exact) for c in projection.components],
        )
    try:
        report = stages_check(big, projection, induced, spec)
    except (ValueError, IntertwiningError) as exc:
        raise JobValidationError(f"stages inputs are inconsistent: {exc}") from None
    results = {
        "contained": report.contained,
        "span_equal": report.span_equal,
        "map_degree": report.map_degree,
        "dim_downstairs": report.induced_dim_downstairs,
        "dim_pulled_back": report.dim_pulled_back,
        "dim_direct": report.dim_direct,
        "window": {"grade": spec.grade, "max_degree": spec.max_degree},
        "direct_window": {
            "grade": report.direct_truncation.grade,
            "max_degree": report.direct_truncation.max_degree,
        },
        "passed": report.passed,
    }
    return results, report.passed


def _run_criterion(job, binding: _Binding, tol: float | None) -> tuple[dict, bool]:
    plots_spec = _get(job, "plots", dict, "job", required=True)
    first_name = _get(plots_spec, "first", str, "job.plots", required=True)
    second_name = _get(plots_spec, "second", str, "job.plots", required=True)
    grid = _parse_grid(_get(job, "grid", dict, "job"), "job.grid")
    tolerance = tol if tol is not None else _get(job, "tolerance", float, "job",
                                                 default=DEFAULT_SYMBOLIC_TOL)
    bind = binding.numeric
    try:
        first = builtin_plot(first_name, grid, bind)
        second = builtin_plot(second_name, grid, bind)
    except KeyError as exc:
        raise JobValidationError(str(exc.args[0])) from None
    except ValueError as exc:
        raise JobValidationError(str(exc)) from None
    form = _parse_form(_get(job, "form", dict, "job", required=True),
                       first.ambient_dim, "job.form")
    if form.uses_parameter:
        bind = binding.require_numeric("job.form")
    try:
        report = criterion_check(first, second, form, tolerance, bind)
    except ValueError as exc:
        raise JobValidationError(str(exc)) from None
    results = {
        "plots": {"first": first_name, "second": second_name},
        "form": _form_json(form),
        "check": _deviation_json(report),
    }
    return results, report.passed


def _run_gauge(job, binding: _Binding, tol: float | None) -> tuple[dict, bool]:
    plot_name = _get(job, "plot", str, "job", required=True)
    gauge_name = _get(job, "gauge", str, "job", required=True)
    grid = _parse_grid(_get(job, "grid", dict, "job"), "job.grid")
    tolerance = tol if tol is not None else _get(job, "tolerance", float, "job",
                                                 default=DEFAULT_FD_TOL)
    bind = binding.numeric
    try:
        plot = builtin_plot(plot_name, grid, bind)
        gauge = builtin_gauge(gauge_name, grid, bind)
    except KeyError as exc:
        raise JobValidationError(str(exc.args[0])) from None
    except ValueError as exc:
        raise JobValidationError(str(exc)) from None
    form = _parse_form(_get(job, "form", dict, "job", required=True),
                       plot.ambient_dim, "job.form")
    if form.uses_parameter:
        bind = binding.require_numeric("job.form")
    try:
        report = smooth_gauge_check(plot, gauge, form, tolerance, bind)
    except ValueError as exc:
        raise JobValidationError(str(exc)) from None
    results = {
        "plot": plot_name,
        "gauge": gauge_name,
        "form": _form_json(form),
        "check": _deviation_json(report),
    }
    return results, report.passed


def _run_orbifold(job, binding: _Binding, tol) -> tuple[dict, bool]:
    chart_spec = _get(job, "chart", dict, "job", required=True)
    dim = _get(chart_spec, "dimension", int, "job.chart", required=True)
    _require(dim >= 1, "job.chart.dimension must be positive")
    generators = [
        _parse_affine(g, dim, f"job.chart.generators[{i}]")
        for i, g in enumerate(_get(chart_spec, "generators", list, "job.chart", required=True))
    ]
    _require(bool(generators), "job.chart.generators must be nonempty")
    cap = _get(chart_spec, "closure_cap", int, "job.chart", default=64)
    try:
        group = group_closure(generators, cap=cap)
        chart = OrbifoldChart(
            dim, group, label=_get(chart_spec, "label", str, "job.chart", default="")
        )
    except (GroupNotFiniteError, ValueError) as exc:
        raise JobValidationError(f"job.chart: {exc}") from None
    spec = _parse_truncation(_get(job, "truncation", dict, "job", required=True), "job.truncation")
    _require(spec.grade <= dim, "job.truncation.grade exceeds the chart dimension")
    basis = orbifold_invariant_forms(chart, spec)
    results = {
        "group_order": len(group),
        "window": {"grade": spec.grade, "max_degree": spec.max_degree},
        "dimension": len(basis),
        "basis": [_form_json(f) for f in basis],
    }
    return results, True


def _run_symplectic(job, binding: _Binding, tol: float | None) -> tuple[dict, bool]:
    model_name = _get(job, "model", str, "job", default="r4_rotation")
    try:
        model = builtin_model(model_name)
    except KeyError as exc:
        raise JobValidationError(str(exc.args[0])) from None
    tolerance = tol if tol is not None else _get(job, "tolerance", float, "job",
                                                 default=DEFAULT_SYMBOLIC_TOL)
    sigma_spec = _get(job, "sigma", dict, "job")
    sigma = (
        _parse_form(sigma_spec, model.dim, "job.sigma")
        if sigma_spec is not None
        else model.omega
    )
    bind = None
    if sigma.uses_parameter:
        bind = binding.require_numeric("job.sigma")
    residual = momentum_residual(model)
    try:
        report = level_restriction_check(model, sigma, tolerance, bind)
    except ValueError as exc:
        raise JobValidationError(str(exc)) from None
    passed = residual.is_zero and report.passed
    results = {
        "model": model_name,
        "momentum_residual": _form_json(residual),
        "momentum_residual_zero": residual.is_zero,
        "sigma": _form_json(sigma),
        "contraction": _deviation_json(report.contraction),
        "invariance": _deviation_json(report.invariance),
        "passed": passed,
    }
    return results, passed


_HANDLERS: dict[str, Callable[[Mapping[str, Any], _Binding, float | None], tuple[dict, bool]]] = {
    "basis": _run_basis,
    "cohomology": _run_cohomology,
    "stages": _run_stages,
    "criterion": _run_criterion,
    "gauge": _run_gauge,
    "orbifold": _run_orbifold,
    "symplectic": _run_symplectic,
}


def _provenance(binding: _Binding, properness: bool | None) -> dict:
    return {
        "tool": "basicforms",
        "version": __version__,
        "scalar_field": "Q" if not binding.formal else "Q(a)",
        "identity_component_proper_asserted": properness,
    }


def run_job(
    job: Mapping[str, Any],
    command: str | None = None,
    bind_a: float | str | None = None,
    tol: float | None = None,
) -> tuple[dict, int]:
    """Execute one job; returns (report, exit code) and never raises.

    ``command`` (from the CLI) must agree with the job's own ``command``
    field when both are present.  ``bind_a`` and ``tol`` override the job's
    ``parameter`` and ``tolerance`` fields.
    """
    report: dict[str, Any] = {
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    try:
        _require(isinstance(job, Mapping), "job must be a JSON object")
        job_command = job.get("command")
        if job_command is not None:
            _require(isinstance(job_command, str) and job_command in COMMANDS,
                     f"job.command must be one of {', '.join(COMMANDS)}")
            _require(command is None or command == job_command,
                     f"job.command {job_command!r} does not match the CLI command {command!r}")
        resolved = command or job_command
        _require(resolved is not None, "no command given (CLI or job.command)")
        assert resolved is not None
        report["command"] = resolved

        raw_param: Any = job.get("parameter")
        if bind_a is not None:
            raw_param = bind_a
        binding = _Binding(raw_param)
        properness = job.get("assume_identity_component_proper")
        _require(properness is None or isinstance(properness, bool),
                 "job.assume_identity_component_proper must be a boolean")

        report["config"] = {
            "parameter": binding.describe(),
            "tolerance_override": tol,
        }
        report["provenance"] = _provenance(binding, properness)

        results, passed = _HANDLERS[resolved](job, binding, tol)
        report["results"] = results
        report["status"] = "ok" if passed else "fail"
        return report, EXIT_OK if passed else EXIT_CHECK_FAILED
    except ParseError as exc:
        report["status"] = "error"
        report["error"] = {"kind": "parse", "message": str(exc), "position": exc.position}
        return report, EXIT_PARSE_ERROR
    except JobValidationError as exc:
        report["status"] = "error"
        report["error"] = {"kind": "validation", "message": str(exc)}
        return report, EXIT_VALIDATION_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        report["status"] = "error"
        report["error"] = {"kind": "computation", "message": f"{type(exc).__name__}: {exc}"}
        return report, EXIT_COMPUTATION_ERROR


def format_report(report: Mapping[str, Any]) -> str:
    """Deterministic rendering: sorted keys, stable indentation."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
