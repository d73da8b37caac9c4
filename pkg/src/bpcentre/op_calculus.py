"""Degree-zero operations as linear functionals and their homotopy actions.

A stable degree-zero operation corresponds to a coefficient-linear functional
on the co-operation ring determined by its values on t-monomials; its action
on coefficients is recovered by precomposition with the right unit.  Since
the action on homotopy is faithful, operations are identified throughout
with the exact matrices of their actions on the ordered monomial basis of
each weight.

The family phi(alpha, beta) (value v^alpha on t^beta, zero elsewhere) spans
the degree-zero functionals weightwise.  Their matrices are triangular with
respect to the right-lex order, which makes any single elementary matrix
realizable up to a p-power scalar: :func:`elementary_realize` solves for the
combination exactly.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction

from .bp_hopf import EtaRTable, GradedPoly, coefficient_of_t
from .dvr_arith import is_integral, valuation
from .monomial_order import Exp, enumerate_weight, normalize, weight

_MU_CACHE: "weakref.WeakKeyDictionary[EtaRTable, dict]" = weakref.WeakKeyDictionary()


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class OpFunctional:
    """A coefficient-linear functional with finite support on t-monomials.

    ``support`` maps t-exponent sequences to weight-homogeneous v-polynomial
    values; ``shift`` is the drop in weight induced on homotopy (zero for
    operations of degree zero).
    """

    p: int
    shift: int
    support: tuple[tuple[Exp, GradedPoly], ...]
    name: str

    def value(self, beta: Exp) -> GradedPoly:
        beta = normalize(beta)
        for key, poly in self.support:
            if key == beta:
                return poly
        return GradedPoly.zero(self.p)


def phi_beta(p: int, beta) -> OpFunctional:
    """The functional dual to t^beta: value 1 there, zero elsewhere."""
    beta = normalize(beta)
    return OpFunctional(
        p=p,
        shift=weight(beta, p),
        support=((beta, GradedPoly.const(p, 1)),),
        name=f"phi_{beta}",
    )


def counit(p: int) -> OpFunctional:
    """The functional dual to 1; acts as the identity in every weight."""
    return phi_beta(p, ())


def phi_alpha_beta(p: int, alpha, beta) -> OpFunctional:
    """The degree-zero functional with value v^alpha on t^beta."""
    alpha, beta = normalize(alpha), normalize(beta)
    if weight(alpha, p) != weight(beta, p):
        raise ValueError(
            f"weight mismatch: {alpha} has weight {weight(alpha, p)}, "
            f"{beta} has weight {weight(beta, p)}"
        )
    return OpFunctional(
        p=p,
        shift=0,
        support=((beta, GradedPoly.v_mono(p, alpha)),),
        name=f"phi_{alpha},{beta}",
    )


@dataclass(frozen=True)
class DegreeMatrix:
    """Exact matrix of an action on the ordered monomial basis of one weight.

    Entry (i, j) is the coefficient of basis[i] in the image of basis[j].
    """

    p: int
    r: int
    basis: tuple[Exp, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def __mul__(self, other: "DegreeMatrix") -> "DegreeMatrix":
        if self.basis != other.basis:
            raise ValueError("basis mismatch")
        n = self.size
        entries = tuple(
            tuple(
                sum((self.entries[i][k] * other.entries[k][j] for k in range(n)),
                    Fraction(0))
                for j in range(n)
            )
            for i in range(n)
        )
        return DegreeMatrix(self.p, self.r, self.basis, entries)

    def __add__(self, other: "DegreeMatrix") -> "DegreeMatrix":
        if self.basis != other.basis:
            raise ValueError("basis mismatch")
        entries = tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        )
        return DegreeMatrix(self.p, self.r, self.basis, entries)

    def __sub__(self, other: "DegreeMatrix") -> "DegreeMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "DegreeMatrix":
        c = Fraction(c)
        return DegreeMatrix(
            self.p, self.r, self.basis,
            tuple(tuple(c * x for x in row) for row in self.entries),
        )

    def commutes_with(self, other: "DegreeMatrix") -> bool:
        return (self * other).entries == (other * self).entries

    def restrict(self, indices) -> "DegreeMatrix":
        idx = tuple(indices)
        return DegreeMatrix(
            self.p,
            self.r,
            tuple(self.basis[i] for i in idx),
            tuple(tuple(self.entries[i][j] for j in idx) for i in idx),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_scalar(self):
        """The scalar c with entries == c*I, or None."""
        c = self.entries[0][0] if self.size else Fraction(0)
        for i in range(self.size):
            for j in range(self.size):
                if self.entries[i][j] != (c if i == j else 0):
                    return None
        return c


def scalar_matrix(p: int, r: int, basis, c) -> DegreeMatrix:
    basis = tuple(basis)
    c = Fraction(c)
    entries = tuple(
        tuple(c if i == j else Fraction(0) for j in range(len(basis)))
        for i in range(len(basis))
    )
    return DegreeMatrix(p, r, basis, entries)


def mu_matrix(r: int, table: EtaRTable):
    """Pure-t coefficient scalars mu[i][j] = <t^basis[j]> eta_R(v^basis[i]).

    Lower triangular with diagonal p^(sum of exponents); cached per table.
    """
    per_table = _MU_CACHE.setdefault(table, {})
    if r in per_table:
        return per_table[r]
    basis = tuple(enumerate_weight(r, table.p))
    rows = []
    for gamma in basis:
        pure = table.eta(gamma).pure_t_terms()
        rows.append(tuple(pure.get(beta, Fraction(0)) for beta in basis))
    result = (basis, tuple(rows))
    per_table[r] = result
    return result


def action_matrix(op: OpFunctional, r: int, table: EtaRTable) -> DegreeMatrix:
    """Matrix of the operation's action on the weight-r monomial basis.

    The image of v^gamma is the sum over the support of value(beta) times
    the coefficient of t^beta in eta_R(v^gamma), expanded over the basis.
    """
    if op.shift != 0:
        raise ValueError("only degree-zero operations act within one weight")
    p = table.p
    basis = tuple(enumerate_weight(r, p))
    index = {alpha: i for i, alpha in enumerate(basis)}
    cols = []
    for gamma in basis:
        image = GradedPoly.zero(p)
        for beta, value in op.support:
            if weight(beta, p) > r:
                continue
            image = image + value * coefficient_of_t(gamma, beta, table)
        col = [Fraction(0)] * len(basis)
        for (v, t, m), c in image.terms.items():
            if t or m or v not in index:
                raise ConsistencyError(
                    f"image of v^{gamma} under {op.name} leaves the weight-{r} basis"
                )
            col[index[v]] = c
        cols.append(col)
    entries = tuple(
        tuple(cols[j][i] for j in range(len(basis))) for i in range(len(basis))
    )
    return DegreeMatrix(p, r, basis, entries)


def adams_matrix(p: int, k, r: int, size: int | None = None) -> DegreeMatrix:
    """The Adams operation for parameter k in weight r: k^((p-1)r) * I.

    k may be any p-local integer including 0 and p; 0^0 = 1 so that the
    parameter-0 operation is the identity in weight 0 and zero above.
    """
    k = Fraction(k)
    if not is_integral(k, p):
        raise ValueError(f"Adams parameter {k} is not p-local")
    basis = tuple(enumerate_weight(r, p))
    if size is not None and size != len(basis):
        raise ValueError(f"size {size} != weight-{r} basis size {len(basis)}")
    exponent = (p - 1) * r
    scalar = Fraction(1) if exponent == 0 else k**exponent
    return scalar_matrix(p, r, basis, scalar)


def elementary_realize(alpha, beta, table: EtaRTable):
    """Combination of the phi(alpha, gamma) acting as a multiple of E_(alpha,beta).

    Returns (mu_bar, coefficients) with mu_bar a p-power and the coefficients
    p-integral with at least one unit, such that
    sum_gamma coefficients[gamma] * M(alpha, gamma) = mu_bar * E_(alpha, beta)
    exactly on the full weight basis.  Solvable because the mu matrix is
    non-singular lower triangular.
    """
    p = table.p
    alpha, beta = normalize(alpha), normalize(beta)
    r = weight(alpha, p)
    if weight(beta, p) != r:
        raise ValueError("alpha and beta must have equal weight")
    basis, mu = mu_matrix(r, table)
    b = basis.index(beta)

    # Forward-substitute mu . x = e_b; mu[i][j] = 0 for i < j.
    x = [Fraction(0)] * len(basis)
    for i in range(len(basis)):
        if mu[i][i] == 0:
            raise ConsistencyError(f"vanishing diagonal mu at {basis[i]} in weight {r}")
        rhs = Fraction(1 if i == b else 0)
        rhs -= sum((mu[i][j] * x[j] for j in range(i)), Fraction(0))
        x[i] = rhs / mu[i][i]

    s = -min(valuation(c, p) for c in x if c != 0)
    if s < 0:
        raise ConsistencyError("realization scale has negative p-exponent")
    scale = Fraction(p) ** s
    coefficients = {
        basis[j]: scale * x[j] for j in range(len(basis)) if x[j] != 0
    }
    return scale, coefficients


def functional_matrix(alpha, beta, r: int, table: EtaRTable) -> DegreeMatrix:
    """Matrix M(alpha, beta) of phi(alpha, beta) in weight r = weight(alpha),
    built directly from the mu scalars (row alpha only)."""
    p = table.p
    alpha, beta = normalize(alpha), normalize(beta)
    basis, mu = mu_matrix(r, table)
    ia, ib = basis.index(alpha), basis.index(beta)
    entries = tuple(
        tuple(mu[j][ib] if i == ia else Fraction(0) for j in range(len(basis)))
        for i in range(len(basis))
    )
    return DegreeMatrix(p, r, basis, entries)


def stable_generators(p: int, max_weight: int) -> list[OpFunctional]:
    """The counit plus every phi(alpha, beta) of weight at most max_weight.

    This family spans the degree-zero functionals on t-monomials of weight
    up to the bound, hence every degree-zero action in those weights.
    """
    gens = [counit(p)]
    for r in range(1, max_weight + 1):
        basis = enumerate_weight(r, p)
        for alpha in basis:
            for beta in basis:
                gens.append(phi_alpha_beta(p, alpha, beta))
    return gens
