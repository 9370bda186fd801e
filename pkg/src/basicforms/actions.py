"""Affine group actions on R^n with optional infinitesimal generators.

An action is specified by finitely many invertible affine maps (discrete
generators) plus finitely many polynomial vector fields (infinitesimal
generators for connected directions).  The pullback action on forms is a
right action: pulling back by g then by h equals pulling back by g . h.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg
from .forms import Form, PolyMap, VectorField, pullback
from .linalg import Matrix
from .polynomials import Polynomial
from .scalars import Scalar, ScalarLike


class GroupNotFiniteError(RuntimeError):
    """Raised when a generated group exceeds the closure cap."""


class AffineMap:
    """Invertible exact affine map x -> A x + b."""

    __slots__ = ("_linear", "_translation")

    def __init__(self, linear: Matrix, translation: Sequence[ScalarLike]):
        if linear.rows != linear.cols:
            raise ValueError("linear part must be square")
        if len(translation) != linear.rows:
            raise ValueError("translation length must match the dimension")
        if linalg.determinant(linear).is_zero:
            raise ValueError("affine map is not invertible")
        self._linear = linear
        self._translation = tuple(Scalar.of(t) for t in translation)

    @staticmethod
    def from_rows(
        rows: Sequence[Sequence[ScalarLike]], translation: Sequence[ScalarLike]
    ) -> "AffineMap":
        return AffineMap(Matrix.from_rows(rows), translation)

    @staticmethod
    def identity(dim: int) -> "AffineMap":
        return AffineMap(Matrix.identity(dim), [0] * dim)

    @staticmethod
    def translation_by(offsets: Sequence[ScalarLike]) -> "AffineMap":
        return AffineMap(Matrix.identity(len(offsets)), offsets)

    @property
    def dim(self) -> int:
        return self._linear.rows

    @property
    def linear(self) -> Matrix:
        return self._linear

    @property
    def translation(self) -> tuple[Scalar, ...]:
        return self._translation

    @property
    def uses_parameter(self) -> bool:
        entries = list(self._translation)
        for i in range(self._linear.rows):
            entries.extend(self._linear.row(i))
        return any(e.uses_parameter for e in entries)

    def bind_param(self, value: Fraction) -> "AffineMap":
        n = self.dim
        rows = [[self._linear.entry(i, j).bind(value) for j in range(n)] for i in range(n)]
        return AffineMap.from_rows(rows, [t.bind(value) for t in self._translation])

    def as_poly_map(self) -> PolyMap:
        n = self.dim
        comps = []
        for i in range(n):
            terms = {(0,) * n: self._translation[i]}
            p = Polynomial(n, terms)
            for j in range(n):
                p = p + Polynomial.variable(n, j).scale(self._linear.entry(i, j))
            comps.append(p)
        return PolyMap(n, comps)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (self . other)(x) = self(other(x))."""
        if self.dim != other.dim:
            raise ValueError("composition of maps on different spaces")
        n = self.dim
        rows = []
        for i in range(n):
            rows.append(
                [
                    sum(
                        (self._linear.entry(i, t) * other._linear.entry(t, j) for t in range(n)),
                        Scalar.of(0),
                    )
                    for j in range(n)
                ]
            )
        shift = self._linear.apply(other._translation)
        translation = [shift[i] + self._translation[i] for i in range(n)]
        return AffineMap(Matrix.from_rows(rows), translation)

    def inverse(self) -> "AffineMap":
        inv = linalg.invert(self._linear)
        shifted = inv.apply(self._translation)
        return AffineMap(inv, [-t for t in shifted])

    def apply_exact(self, point: Sequence[ScalarLike]) -> tuple[Scalar, ...]:
        image = self._linear.apply(point)
        return tuple(image[i] + self._translation[i] for i in range(self.dim))

    def to_float(self, bind_a: float | None = None):
        """(linear, translation) as float nested lists for numeric paths."""
        n = self.dim
        lin = [[self._linear.entry(i, j).evaluate(bind_a) for j in range(n)] for i in range(n)]
        tr = [t.evaluate(bind_a) for t in self._translation]
        return lin, tr

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self._linear == other._linear and self._translation == other._translation

    def __hash__(self) -> int:
        return hash((tuple(self._linear.row(i) for i in range(self.dim)), self._translation))

    def __repr__(self) -> str:
        rows = "; ".join(
            " ".join(str(self._linear.entry(i, j)) for j in range(self.dim))
            for i in range(self.dim)
        )
        tr = ", ".join(str(t) for t in self._translation)
        return f"AffineMap([{rows}] + ({tr}))"


class ActionSpec:
    """Generators of a group action: affine maps plus vector fields."""

    __slots__ = ("_dim", "_discrete", "_infinitesimal")

    def __init__(
        self,
        dim: int,
        discrete: Sequence[AffineMap] = (),
        infinitesimal: Sequence[VectorField] = (),
    ):
        if dim < 1:
            raise ValueError("dimension must be positive")
        for g in discrete:
            if g.dim != dim:
                raise ValueError("discrete generator has the wrong dimension")
        for xi in infinitesimal:
            if xi.dim != dim:
                raise ValueError("infinitesimal generator has the wrong dimension")
        self._dim = dim
        self._discrete = tuple(discrete)
        self._infinitesimal = tuple(infinitesimal)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def discrete(self) -> tuple[AffineMap, ...]:
        return self._discrete

    @property
    def infinitesimal(self) -> tuple[VectorField, ...]:
        return self._infinitesimal

    @property
    def uses_parameter(self) -> bool:
        return any(g.uses_parameter for g in self._discrete) or any(
            xi.uses_parameter for xi in self._infinitesimal
        )

    def bind_param(self, value: Fraction) -> "ActionSpec":
        return ActionSpec(
            self._dim,
            [g.bind_param(value) for g in self._discrete],
            [xi.bind_param(value) for xi in self._infinitesimal],
        )

    def __repr__(self) -> str:
        return (
            f"ActionSpec(dim={self._dim}, {len(self._discrete)} discrete, "
            f"{len(self._infinitesimal)} infinitesimal)"
        )


def act_pullback(mapping: AffineMap, form: Form) -> Form:
    """Pullback of a form by an affine map; preserves coefficient degree."""
    if mapping.dim != form.dim:
        raise ValueError("map and form live on different spaces")
    return pullback(mapping.as_poly_map(), form)


def group_closure(generators: Sequence[AffineMap], cap: int = 64) -> list[AffineMap]:
    """All products of generators and their inverses, breadth-first.

    Deterministic: elements appear in breadth-first order by word length with
    ties broken by insertion order.  Raises :class:`GroupNotFiniteError` as
    soon as more than ``cap`` distinct elements appear.
    """
    if not generators:
        raise ValueError("need at least one generator")
    dim = generators[0].dim
    for g in generators:
        if g.dim != dim:
            raise ValueError("generators live on different spaces")
    letters: list[AffineMap] = []
    for g in generators:
        letters.append(g)
    for g in generators:
        inv = g.inverse()
        letters.append(inv)
    identity = AffineMap.identity(dim)
    seen = {identity}
    ordered = [identity]
    frontier = [identity]
    while frontier:
        next_frontier: list[AffineMap] = []
        for word in frontier:
            for letter in letters:
                candidate = word.compose(letter)
                if candidate in seen:
                    continue
                seen.add(candidate)
                ordered.append(candidate)
                next_frontier.append(candidate)
                if len(ordered) > cap:
                    raise GroupNotFiniteError(
                        f"group not finite within cap {cap}"
                    )
        frontier = next_frontier
    return ordered
