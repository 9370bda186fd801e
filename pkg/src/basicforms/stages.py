"""Two-route comparison for quotients taken in stages.

Given a big action on R^n, a polynomial projection pi onto R^m carrying an
induced action, and a truncation window, there are two ways to produce
forms on R^n that should descend all the way down:

* route one: compute the invariant horizontal basis for the induced action
  downstairs and pull it back through pi;
* route two: compute the invariant horizontal basis for the big action
  directly, in the window scaled by deg(pi) (pullback multiplies
  coefficient degrees by at most that factor).

Route one must land inside route two's span; for degree-1 projections the
two spans must agree exactly.  Both routes are computed independently and
compared by exact rank tests; nothing is collapsed into a single
computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import ActionSpec, act_pullback
from .forms import Form, PolyMap, lie_derivative, pullback
from .linalg import column_span_contains, column_span_equal
from .solver import TruncationSpec, Window, basic_form_basis, span_matrix


class IntertwiningError(ValueError):
    """The projection does not carry induced invariants to big invariants."""

    def __init__(self, message: str, witness: Form):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class StagesReport:
    """Outcome of the two-route span comparison."""

    contained: bool
    span_equal: bool | None  # None when deg(pi) > 1: only containment is claimed
    map_degree: int
    induced_dim_downstairs: int
    dim_pulled_back: int
    dim_direct: int
    truncation: TruncationSpec
    direct_truncation: TruncationSpec

    @property
    def passed(self) -> bool:
        if not self.contained:
            return False
        return self.span_equal is not False


def stages_check(
    big: ActionSpec,
    projection: PolyMap,
    induced: ActionSpec,
    spec: TruncationSpec,
) -> StagesReport:
    """Compare pulled-back induced basics against direct big basics.

    Before comparing, the projection is checked to intertwine the actions on
    the window: the pullback of every induced basic form must be invariant
    for the big action (discrete and infinitesimal).  A violation raises
    :class:`IntertwiningError` with the offending form as witness.
    """
    if projection.domain_dim != big.dim:
        raise ValueError("projection domain must match the big action's space")
    if projection.codomain_dim != induced.dim:
        raise ValueError("projection codomain must match the induced action's space")
    degree = max(projection.max_degree(), 1)

    downstairs = basic_form_basis(induced, spec)
    pulled = [pullback(projection, beta) for beta in downstairs]

    for beta, image in zip(downstairs, pulled):
        for g in big.discrete:
            if act_pullback(g, image) != image:
                raise IntertwiningError(
                    "projection does not intertwine: pulled-back form is not "
                    "invariant under a discrete generator",
                    beta,
                )
        for xi in big.infinitesimal:
            if not lie_derivative(xi, image).is_zero:
                raise IntertwiningError(
                    "projection does not intertwine: pulled-back form has "
                    "nonzero Lie derivative along an infinitesimal generator",
                    beta,
                )

    direct_spec = TruncationSpec(spec.grade, spec.max_degree * degree)
    direct = basic_form_basis(big, direct_spec)

    # compare in a window wide enough for both routes
    widest = max(
        [direct_spec.max_degree]
        + [f.max_coefficient_degree() for f in pulled + direct if not f.is_zero]
    )
    window = Window(big.dim, spec.grade, widest)
    pulled_matrix = span_matrix(window, pulled)
    direct_matrix = span_matrix(window, direct)
    contained = column_span_contains(direct_matrix, pulled_matrix)
    span_equal: bool | None = None
    if degree == 1:
        span_equal = column_span_equal(pulled_matrix, direct_matrix)
    return StagesReport(
        contained=contained,
        span_equal=span_equal,
        map_degree=degree,
        induced_dim_downstairs=len(downstairs),
        dim_pulled_back=len(pulled),
        dim_direct=len(direct),
        truncation=spec,
        direct_truncation=direct_spec,
    )
