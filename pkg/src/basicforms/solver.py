"""Bases of invariant horizontal forms in truncated polynomial windows.

Everything here is exact linear algebra over the scalar field.  A
truncation window W(k, d) is the span of monomial k-forms x^e dx_I with
|e| <= d; invariance under each affine generator (substitution preserves
degree) and vanishing Lie derivative along each vector field generator are
linear conditions on the window, as is horizontality (vanishing interior
product).  "Basic" forms are the invariant horizontal ones: the kernel of
the stacked constraint matrix.

Constraint equations are always imposed in a target window large enough to
hold every image coefficient, so no condition is silently dropped:

* affine invariance: target degree d;
* Lie invariance: target degree d + delta - 1 where delta is the largest
  generator component degree (transport adds delta - 1, Jacobian terms too);
* horizontality: grade k - 1, target degree d + delta.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .actions import ActionSpec, AffineMap, act_pullback
from .forms import Form, VectorField, ext_d, interior, lie_derivative
from .linalg import Matrix, column_span_equal, kernel_basis, rank, stack
from .polynomials import Exponents, Polynomial, grlex_key
from .scalars import Scalar


@dataclass(frozen=True)
class TruncationSpec:
    """Window parameters: form grade and maximum coefficient total degree."""

    grade: int
    max_degree: int

    def __post_init__(self) -> None:
        if self.grade < 0:
            raise ValueError("grade must be nonnegative")
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")


def exponents_upto(num_vars: int, max_degree: int) -> list[Exponents]:
    """All exponent tuples with total degree <= max_degree, graded-lex order."""
    out: list[Exponents] = []
    for total in range(max_degree + 1):
        out.extend(_exponents_of_degree(num_vars, total))
    return sorted(out, key=grlex_key)


def _exponents_of_degree(num_vars: int, total: int) -> list[Exponents]:
    if num_vars == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _exponents_of_degree(num_vars - 1, total - first):
            out.append((first,) + rest)
    return out


class Window:
    """Indexed monomial basis of the (grade, degree) truncation window."""

    __slots__ = ("dim", "grade", "max_degree", "pairs", "_index")

    def __init__(self, dim: int, grade: int, max_degree: int):
        if not 0 <= grade <= dim:
            raise ValueError(f"grade {grade} out of range for dimension {dim}")
        self.dim = dim
        self.grade = grade
        self.max_degree = max_degree
        exps = exponents_upto(dim, max_degree)
        idxs = list(itertools.combinations(range(dim), grade))
        self.pairs = [(e, I) for e in exps for I in idxs]
        self._index = {pair: pos for pos, pair in enumerate(self.pairs)}

    @property
    def size(self) -> int:
        return len(self.pairs)

    def monomial(self, position: int) -> Form:
        e, indices = self.pairs[position]
        return Form.monomial(self.dim, indices, Polynomial(self.dim, {e: 1}))

    def basis_forms(self) -> list[Form]:
        return [self.monomial(i) for i in range(self.size)]

    def coordinates(self, form: Form) -> list[Scalar]:
        """Expand a form in window coordinates; error if it sticks out."""
        if form.dim != self.dim or form.grade != self.grade:
            raise ValueError("form does not match the window's dimension or grade")
        vec = [Scalar.of(0)] * self.size
        for indices, poly in form.terms.items():
            for exps, coeff in poly.terms.items():
                pos = self._index.get((exps, indices))
                if pos is None:
                    raise ValueError(
                        f"term x^{exps} dx_{indices} falls outside the degree-"
                        f"{self.max_degree} window"
                    )
                vec[pos] = coeff
        return vec

    def combine(self, coords: Sequence[Scalar]) -> Form:
        if len(coords) != self.size:
            raise ValueError("coordinate vector has the wrong length")
        terms: dict[tuple[int, ...], Polynomial] = {}
        for (exps, indices), c in zip(self.pairs, coords):
            if c.is_zero:
                continue
            add = Polynomial(self.dim, {exps: c})
            terms[indices] = terms[indices] + add if indices in terms else add
        return Form(self.dim, self.grade, terms)


def monomial_form_basis(dim: int, spec: TruncationSpec) -> list[Form]:
    """Deterministic monomial basis of the truncation window."""
    return Window(dim, spec.grade, spec.max_degree).basis_forms()


def operator_block(
    domain: Window, target: Window, op: Callable[[Form], Form]
) -> Matrix:
    """Matrix of a linear operator from a window into a target window."""
    columns = [target.coordinates(op(domain.monomial(j))) for j in range(domain.size)]
    return Matrix.from_columns(columns) if columns else Matrix.zero(target.size, 0)


def invariance_constraints(action: ActionSpec, spec: TruncationSpec) -> Matrix:
    """Stacked linear conditions for invariance under every generator.

    Block order is fixed: discrete generators first (input order), then
    infinitesimal generators.  A form in the window is invariant iff its
    coordinate vector is in the kernel.
    """
    domain = Window(action.dim, spec.grade, spec.max_degree)
    blocks: list[Matrix] = []
    for g in action.discrete:
        target = Window(action.dim, spec.grade, spec.max_degree)
        blocks.append(
            operator_block(domain, target, lambda f, g=g: act_pullback(g, f) - f)
        )
    for xi in action.infinitesimal:
        delta = xi.max_degree()
        target_degree = max(spec.max_degree + delta - 1, 0)
        target = Window(action.dim, spec.grade, target_degree)
        blocks.append(
            operator_block(domain, target, lambda f, xi=xi: lie_derivative(xi, f))
        )
    if not blocks:
        return Matrix.zero(0, domain.size)
    return stack(blocks)


def horizontality_constraints(action: ActionSpec, spec: TruncationSpec) -> Matrix:
    """Stacked conditions i_xi(form) = 0 for every infinitesimal generator.

    Empty (zero rows) for finite groups: no connected directions, nothing to
    contract against.
    """
    domain = Window(action.dim, spec.grade, spec.max_degree)
    if spec.grade == 0 or not action.infinitesimal:
        return Matrix.zero(0, domain.size)
    blocks = []
    for xi in action.infinitesimal:
        delta = xi.max_degree()
        target = Window(action.dim, spec.grade - 1, spec.max_degree + delta)
        blocks.append(
            operator_block(domain, target, lambda f, xi=xi: interior(xi, f))
        )
    return stack(blocks)


def basic_form_basis(action: ActionSpec, spec: TruncationSpec) -> list[Form]:
    """Canonical basis of invariant horizontal forms in the window.

    The kernel of the stacked invariance + horizontality matrix, mapped back
    to forms through the monomial window.  Deterministic for a fixed input.
    """
    domain = Window(action.dim, spec.grade, spec.max_degree)
    system = invariance_constraints(action, spec).stack_below(
        horizontality_constraints(action, spec)
    )
    return [domain.combine(vec) for vec in kernel_basis(system)]


def _closure_spot_pairs(size: int) -> list[tuple[int, int]]:
    pairs = {(0, size - 1), (size - 1, 0), (size // 2, size // 2)}
    for i in range(min(3, size - 1)):
        pairs.add((i, i + 1))
    return sorted(pairs)


def reynolds_average(group: Sequence[AffineMap], form: Form) -> Form:
    """Group average (1/|G|) sum of pullbacks over a finite group.

    The input must be the whole group, not just generators; closure is
    spot-checked and a non-closed input raises ValueError.
    """
    if not group:
        raise ValueError("empty group")
    members = set(group)
    if len(members) != len(group):
        raise ValueError("group list contains duplicates")
    if AffineMap.identity(group[0].dim) not in members:
        raise ValueError("group does not contain the identity")
    for i, j in _closure_spot_pairs(len(group)):
        if group[i].compose(group[j]) not in members:
            raise ValueError(
                f"group is not closed: element {i} composed with {j} is missing"
            )
    total = Form.zero(form.dim, form.grade)
    for g in group:
        total = total + act_pullback(g, form)
    return total.scale(Scalar.of(1) / len(group))


@dataclass(frozen=True)
class CohomologyRecord:
    """Dimensions at one grade of the truncated basic de Rham complex."""

    grade: int
    window_degree: int
    dim_basic: int
    dim_closed: int
    dim_exact: int
    dim_cohomology: int


def truncated_basic_cohomology(action: ActionSpec, max_degree: int) -> list[CohomologyRecord]:
    """Closed-mod-exact dimensions of basic forms, one record per grade.

    Closed forms are measured inside the degree-``max_degree`` window;
    exact ones come from basic potentials one degree higher (d drops the
    coefficient degree by one, so every exact form in the window has a
    potential in the degree ``max_degree + 1`` window).  These are
    truncation dimensions, not a limit statement.
    """
    n = action.dim
    basics: dict[tuple[int, int], list[Form]] = {}
    for k in range(n + 1):
        basics[(k, max_degree)] = basic_form_basis(action, TruncationSpec(k, max_degree))
        if k < n:  # potentials for grade k + 1 exact forms
            basics[(k, max_degree + 1)] = basic_form_basis(
                action, TruncationSpec(k, max_degree + 1)
            )
    records = []
    for k in range(n + 1):
        basis = basics[(k, max_degree)]
        dim_basic = len(basis)
        # rank of d restricted to the basic subspace
        if k < n:
            image_window = Window(n, k + 1, max(max_degree - 1, 0))
            d_matrix = (
                Matrix.from_columns([image_window.coordinates(ext_d(b)) for b in basis])
                if basis
                else Matrix.zero(image_window.size, 0)
            )
            dim_closed = dim_basic - rank(d_matrix)
        else:
            dim_closed = dim_basic
        if k == 0:
            dim_exact = 0
        else:
            potentials = basics[(k - 1, max_degree + 1)]
            window = Window(n, k, max_degree)
            image = (
                Matrix.from_columns([window.coordinates(ext_d(b)) for b in potentials])
                if potentials
                else Matrix.zero(window.size, 0)
            )
            dim_exact = rank(image)
        records.append(
            CohomologyRecord(
                grade=k,
                window_degree=max_degree,
                dim_basic=dim_basic,
                dim_closed=dim_closed,
                dim_exact=dim_exact,
                dim_cohomology=dim_closed - dim_exact,
            )
        )
    return records


def span_matrix(window: Window, forms: Sequence[Form]) -> Matrix:
    """Forms as columns in window coordinates (for span comparisons)."""
    if not forms:
        return Matrix.zero(window.size, 0)
    return Matrix.from_columns([window.coordinates(f) for f in forms])


def spans_equal(window: Window, first: Sequence[Form], second: Sequence[Form]) -> bool:
    return column_span_equal(span_matrix(window, first), span_matrix(window, second))
