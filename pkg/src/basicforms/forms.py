"""Differential forms with polynomial coefficients on R^n.

A grade-k form is a sparse map from strictly increasing index tuples
(i_1 < ... < i_k) to polynomial coefficients; grade 0 forms have the single
key ``()``.  All five classical operations live here: wedge product,
exterior derivative, interior product, Lie derivative (via the Cartan
homotopy formula) and pullback along polynomial maps.  Everything is exact;
:func:`eval_form` is the only float path.

Grade bookkeeping: a wedge whose grades sum past the ambient dimension, and
the exterior derivative of a top form, both return the zero form of grade n
(grades above n cannot exist on R^n, and every such form is zero anyway).
Code that needs "is this the zero form" should test :attr:`Form.is_zero`
rather than compare against a zero form of a specific grade.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .polynomials import Polynomial, default_var_names, render_poly
from .scalars import Scalar, ScalarLike

Indices = tuple[int, ...]


def merge_indices(left: Indices, right: Indices) -> tuple[Indices | None, int]:
    """Merge two strictly increasing tuples, counting the Koszul sign.

    Returns ``(None, 0)`` when the tuples share an index (the wedge dies).
    The sign is (-1)**inversions needed to interleave ``right`` into ``left``.
    """
    merged: list[int] = []
    sign = 1
    i = j = 0
    while i < len(left) and j < len(right):
        a, b = left[i], right[j]
        if a == b:
            return None, 0
        if a < b:
            merged.append(a)
            i += 1
        else:
            merged.append(b)
            j += 1
            # b jumped over the remaining entries of ``left``
            if (len(left) - i) % 2:
                sign = -sign
    merged.extend(left[i:])
    merged.extend(right[j:])
    return tuple(merged), sign


class Form:
    """Immutable homogeneous differential form."""

    __slots__ = ("_dim", "_grade", "_terms")

    def __init__(self, dim: int, grade: int, terms: Mapping[Indices, Polynomial]):
        if not 0 <= grade <= dim:
            raise ValueError(f"grade {grade} out of range for dimension {dim}")
        clean: dict[Indices, Polynomial] = {}
        for indices, coeff in terms.items():
            indices = tuple(indices)
            if len(indices) != grade:
                raise ValueError(f"index tuple {indices} has wrong length for grade {grade}")
            if any(not 0 <= v < dim for v in indices):
                raise ValueError(f"index tuple {indices} out of range for dimension {dim}")
            if any(indices[t] >= indices[t + 1] for t in range(len(indices) - 1)):
                raise ValueError(f"index tuple {indices} is not strictly increasing")
            if coeff.num_vars != dim:
                raise ValueError("coefficient lives in the wrong variable count")
            if coeff.is_zero:
                continue
            if indices in clean:
                merged = clean[indices] + coeff
                if merged.is_zero:
                    del clean[indices]
                else:
                    clean[indices] = merged
            else:
                clean[indices] = coeff
        self._dim = dim
        self._grade = grade
        self._terms = clean

    @staticmethod
    def zero(dim: int, grade: int) -> "Form":
        return Form(dim, grade, {})

    @staticmethod
    def function(poly: Polynomial) -> "Form":
        """Wrap a polynomial as a 0-form."""
        return Form(poly.num_vars, 0, {(): poly})

    @staticmethod
    def covector(dim: int, index: int) -> "Form":
        """The constant 1-form dx_index."""
        return Form(dim, 1, {(index,): Polynomial.constant(dim, 1)})

    @staticmethod
    def monomial(dim: int, indices: Indices, coeff: Polynomial) -> "Form":
        return Form(dim, len(indices), {tuple(indices): coeff})

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def grade(self) -> int:
        return self._grade

    @property
    def terms(self) -> Mapping[Indices, Polynomial]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def uses_parameter(self) -> bool:
        return any(p.uses_parameter for p in self._terms.values())

    def coefficient(self, indices: Indices) -> Polynomial:
        return self._terms.get(tuple(indices), Polynomial.zero(self._dim))

    def _check_compatible(self, other: "Form") -> None:
        if self._dim != other._dim or self._grade != other._grade:
            raise ValueError(
                f"form mismatch: ({self._dim}, grade {self._grade}) vs "
                f"({other._dim}, grade {other._grade})"
            )

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        out = dict(self._terms)
        for idx, p in other._terms.items():
            out[idx] = out[idx] + p if idx in out else p
        return Form(self._dim, self._grade, out)

    def __neg__(self) -> "Form":
        return Form(self._dim, self._grade, {i: -p for i, p in self._terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, factor: ScalarLike) -> "Form":
        f = Scalar.of(factor)
        return Form(self._dim, self._grade, {i: p.scale(f) for i, p in self._terms.items()})

    def multiply_function(self, poly: Polynomial) -> "Form":
        """Multiply every coefficient by a polynomial (f * alpha)."""
        if poly.num_vars != self._dim:
            raise ValueError("function lives in the wrong variable count")
        return Form(self._dim, self._grade, {i: p * poly for i, p in self._terms.items()})

    def bind_param(self, value: Fraction) -> "Form":
        return Form(
            self._dim, self._grade, {i: p.bind_param(value) for i, p in self._terms.items()}
        )

    def max_coefficient_degree(self) -> int:
        degrees = [p.total_degree() for p in self._terms.values()]
        return int(max(degrees)) if degrees else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self._dim == other._dim
            and self._grade == other._grade
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self._dim, self._grade, frozenset(self._terms.items())))

    def __str__(self) -> str:
        return render_form(self)

    def __repr__(self) -> str:
        return f"Form({self._dim}, grade {self._grade}: {self})"


class VectorField:
    """Polynomial vector field: one component polynomial per coordinate."""

    __slots__ = ("_dim", "_components")

    def __init__(self, components: Sequence[Polynomial]):
        if not components:
            raise ValueError("vector field needs at least one component")
        dim = len(components)
        for comp in components:
            if comp.num_vars != dim:
                raise ValueError("component variable count must equal the dimension")
        self._dim = dim
        self._components = tuple(components)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def components(self) -> tuple[Polynomial, ...]:
        return self._components

    def component(self, i: int) -> Polynomial:
        return self._components[i]

    def max_degree(self) -> int:
        """Largest component total degree, at least 0 (zero field counts as 0)."""
        degs = [c.total_degree() for c in self._components if not c.is_zero]
        return int(max(degs)) if degs else 0

    @property
    def uses_parameter(self) -> bool:
        return any(c.uses_parameter for c in self._components)

    def bind_param(self, value: Fraction) -> "VectorField":
        return VectorField([c.bind_param(value) for c in self._components])

    def apply_to(self, poly: Polynomial) -> Polynomial:
        """Directional derivative X(f) = sum_i X^i d f / d x_i."""
        if poly.num_vars != self._dim:
            raise ValueError("function lives in the wrong variable count")
        out = Polynomial.zero(self._dim)
        for i, comp in enumerate(self._components):
            out = out + comp * poly.partial(i)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._components == other._components

    def __repr__(self) -> str:
        return f"VectorField({', '.join(str(c) for c in self._components)})"


class PolyMap:
    """Polynomial map R^m -> R^n given by n component polynomials in m variables."""

    __slots__ = ("_domain_dim", "_components")

    def __init__(self, domain_dim: int, components: Sequence[Polynomial]):
        if domain_dim < 1:
            raise ValueError("domain dimension must be positive")
        for comp in components:
            if comp.num_vars != domain_dim:
                raise ValueError("component variable count must equal the domain dimension")
        self._domain_dim = domain_dim
        self._components = tuple(components)

    @property
    def domain_dim(self) -> int:
        return self._domain_dim

    @property
    def codomain_dim(self) -> int:
        return len(self._components)

    @property
    def components(self) -> tuple[Polynomial, ...]:
        return self._components

    def max_degree(self) -> int:
        degs = [c.total_degree() for c in self._components if not c.is_zero]
        return int(max(degs)) if degs else 0

    @property
    def uses_parameter(self) -> bool:
        return any(c.uses_parameter for c in self._components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self after inner: (self . inner)(u) = self(inner(u))."""
        if inner.codomain_dim != self._domain_dim:
            raise ValueError("composition dimension mismatch")
        comps = [c.substitute(inner.components) for c in self._components]
        return PolyMap(inner.domain_dim, comps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (
            self._domain_dim == other._domain_dim
            and self._components == other._components
        )

    def __repr__(self) -> str:
        return f"PolyMap({self._domain_dim}->{self.codomain_dim})"


def wedge(left: Form, right: Form) -> Form:
    """Wedge product; grades summing past n give the zero n-form."""
    if left.dim != right.dim:
        raise ValueError("wedge of forms on different spaces")
    n = left.dim
    grade = left.grade + right.grade
    if grade > n:
        return Form.zero(n, n)
    out: dict[Indices, Polynomial] = {}
    for li, lp in left.terms.items():
        for ri, rp in right.terms.items():
            merged, sign = merge_indices(li, ri)
            if merged is None:
                continue
            contrib = lp * rp
            if sign < 0:
                contrib = -contrib
            out[merged] = out[merged] + contrib if merged in out else contrib
    return Form(n, grade, out)


def ext_d(form: Form) -> Form:
    """Exterior derivative; d of a top form is the zero n-form."""
    n = form.dim
    if form.grade >= n:
        return Form.zero(n, n)
    out: dict[Indices, Polynomial] = {}
    for indices, coeff in form.terms.items():
        for i in range(n):
            dp = coeff.partial(i)
            if dp.is_zero:
                continue
            merged, sign = merge_indices((i,), indices)
            if merged is None:
                continue
            contrib = dp if sign > 0 else -dp
            out[merged] = out[merged] + contrib if merged in out else contrib
    return Form(n, form.grade + 1, out)


def interior(field: VectorField, form: Form) -> Form:
    """Interior product (contraction in the first slot); grade drops by one."""
    if field.dim != form.dim:
        raise ValueError("field and form live on different spaces")
    if form.grade == 0:
        raise ValueError("interior product of a 0-form is undefined")
    out: dict[Indices, Polynomial] = {}
    for indices, coeff in form.terms.items():
        for pos, idx in enumerate(indices):
            comp = field.component(idx)
            if comp.is_zero:
                continue
            contrib = coeff * comp
            if pos % 2:
                contrib = -contrib
            reduced = indices[:pos] + indices[pos + 1 :]
            out[reduced] = out[reduced] + contrib if reduced in out else contrib
    return Form(form.dim, form.grade - 1, out)


def lie_derivative(field: VectorField, form: Form) -> Form:
    """Lie derivative via the homotopy formula L_X = i_X d + d i_X."""
    if field.dim != form.dim:
        raise ValueError("field and form live on different spaces")
    n, k = form.dim, form.grade
    da = ext_d(form)
    if da.grade == k + 1:
        first = interior(field, da)
    else:
        # top form: d(form) is the clamped zero n-form
        first = Form.zero(n, k)
    if k == 0:
        return first
    second = ext_d(interior(field, form))
    return first + second


def pullback(mapping: PolyMap, form: Form) -> Form:
    """Pullback along a polynomial map; the result lives on the domain.

    Coefficients are composed with the map and each dx_i becomes the
    differential of the i-th component.  If the grade exceeds the domain
    dimension the result is the zero form of top grade.
    """
    if mapping.codomain_dim != form.dim:
        raise ValueError("form does not live on the map's codomain")
    m = mapping.domain_dim
    out_grade = min(form.grade, m)
    out = Form.zero(m, out_grade)
    if form.is_zero:
        return out
    differentials = [
        Form(m, 1, {(j,): comp.partial(j) for j in range(m)})
        for comp in mapping.components
    ]
    for indices, coeff in form.terms.items():
        composed = coeff.substitute(mapping.components)
        if composed.is_zero:
            continue
        piece = Form.function(Polynomial.constant(m, 1))
        for idx in indices:
            piece = wedge(piece, differentials[idx])
            if piece.is_zero:
                break
        if piece.is_zero and form.grade > 0:
            continue
        if piece.grade != out_grade:
            continue
        out = out + piece.multiply_function(composed)
    return out


def _det_float(rows: list[list[float]]) -> float:
    """Small dense determinant by cofactor expansion (k is tiny here)."""
    k = len(rows)
    if k == 0:
        return 1.0
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0.0
    for j in range(k):
        sign = -1.0 if j % 2 else 1.0
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        total += sign * rows[0][j] * _det_float(minor)
    return total


def eval_form(
    form: Form,
    point: Sequence[float],
    vectors: Sequence[Sequence[float]],
    bind_a: float | None = None,
) -> float:
    """Evaluate the form at a point on a tuple of tangent vectors.

    ``len(vectors)`` must equal the grade; each vector has ``dim``
    coordinates.  Forms that mention the parameter need ``bind_a``.
    """
    if len(point) != form.dim:
        raise ValueError("point has the wrong number of coordinates")
    if len(vectors) != form.grade:
        raise ValueError(
            f"grade {form.grade} form needs {form.grade} vectors, got {len(vectors)}"
        )
    for v in vectors:
        if len(v) != form.dim:
            raise ValueError("tangent vector has the wrong number of coordinates")
    total = 0.0
    for indices, coeff in form.terms.items():
        c = coeff.evaluate(point, bind_a)
        if c == 0.0:
            continue
        rows = [[float(vectors[col][i]) for col in range(form.grade)] for i in indices]
        total += c * _det_float(rows)
    return total


def covector_names(names: Sequence[str]) -> list[str]:
    return [f"d{name}" for name in names]


def render_form(form: Form, names: Sequence[str] | None = None) -> str:
    """Canonical text: ``(coeff) dx^dy + ...`` with index tuples in lex order."""
    if names is None:
        names = default_var_names(form.dim)
    elif len(names) != form.dim:
        raise ValueError("wrong number of variable names")
    if form.is_zero:
        return "0"
    dnames = covector_names(names)
    pieces = []
    for indices in sorted(form.terms):
        coeff = render_poly(form.terms[indices], names)
        if indices:
            basis = "^".join(dnames[i] for i in indices)
            pieces.append(f"({coeff}) {basis}")
        else:
            pieces.append(f"({coeff})")
    return " + ".join(pieces)
