"""Height-n truncations at the coefficient level and the centre computation.

At height n, the weight-r monomial basis splits into the block R of
monomials on the first n generators and the block J of monomials divisible
by a higher generator; every R monomial precedes every J monomial in the
right-lex order.  A realized elementary operation vanishes on all of J, so
its restriction to R is the honest action on the truncated theory, and the
commutant of the full restricted elementary family is the desk-scale centre.

The window lattice collects, for all weights up to a bound simultaneously,
the scalar sequences realizable by integral combinations of the generating
operations (the spanning degree-zero functionals together with the Adams
family) whose action preserves the J block and is scalar on R modulo J.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bp_hopf import EtaRTable
from .dvr_arith import (
    DvrLattice,
    echelon_lattice,
    integral_kernel,
    is_integral,
    topological_generator,
)
from .monomial_order import Exp, enumerate_weight, in_ideal, normalize
from .op_calculus import (
    ConsistencyError,
    DegreeMatrix,
    action_matrix,
    elementary_realize,
    functional_matrix,
    scalar_matrix,
    stable_generators,
)


@dataclass(frozen=True)
class BlockSplit:
    """Partition of the weight-r basis into the R and J blocks at height n."""

    p: int
    r: int
    n: int
    basis: tuple[Exp, ...]
    r_indices: tuple[int, ...]
    j_indices: tuple[int, ...]

    @property
    def r_basis(self) -> tuple[Exp, ...]:
        return tuple(self.basis[i] for i in self.r_indices)

    @property
    def j_basis(self) -> tuple[Exp, ...]:
        return tuple(self.basis[i] for i in self.j_indices)


def block_split(r: int, n: int, p: int) -> BlockSplit:
    """Split the weight-r basis at height n and certify the block order."""
    if n < 1:
        raise ValueError("height must be at least 1")
    basis = tuple(enumerate_weight(r, p))
    r_idx = tuple(i for i, a in enumerate(basis) if not in_ideal(a, n))
    j_idx = tuple(i for i, a in enumerate(basis) if in_ideal(a, n))
    if r_idx != tuple(range(len(r_idx))):
        raise ConsistencyError(
            f"block order violated in weight {r} at height {n}: R indices {r_idx}"
        )
    return BlockSplit(p=p, r=r, n=n, basis=basis, r_indices=r_idx, j_indices=j_idx)


def projected_elementary(alpha, beta, r: int, n: int, table: EtaRTable) -> DegreeMatrix:
    """R-block matrix of the realized elementary operation at height n.

    The realized combination acts on the full weight-r basis as a p-power
    multiple of a single elementary matrix, killing every J column, so it
    descends to the truncation; the descent is its R-restriction.  The full
    matrix identity is re-verified here before restricting.
    """
    p = table.p
    alpha, beta = normalize(alpha), normalize(beta)
    split = block_split(r, n, p)
    if alpha not in split.r_basis or beta not in split.r_basis:
        raise ValueError(f"{alpha} and {beta} must avoid the height-{n} ideal")

    mu_bar, coeffs = elementary_realize(alpha, beta, table)
    combined = None
    for gamma, c in coeffs.items():
        term = functional_matrix(alpha, gamma, r, table).scale(c)
        combined = term if combined is None else combined + term

    ia, ib = split.basis.index(alpha), split.basis.index(beta)
    expected = tuple(
        tuple(mu_bar if (i, j) == (ia, ib) else Fraction(0)
              for j in range(len(split.basis)))
        for i in range(len(split.basis))
    )
    if combined.entries != expected:
        raise ConsistencyError(
            f"realized combination for ({alpha}, {beta}) is not "
            f"{mu_bar}*E in weight {r}"
        )
    return combined.restrict(split.r_indices)


def centre_commutant(r: int, n: int, table: EtaRTable):
    """Commutant of the realized elementary family on the R block.

    Returns (rank, basis matrices).  The family realizes a nonzero multiple
    of every R-block elementary matrix, so the commutant is the scalars:
    rank 1 whenever the block is non-empty.
    """
    from .dvr_arith import commutant as dvr_commutant

    split = block_split(r, n, table.p)
    mats = [
        projected_elementary(a, b, r, n, table).entries
        for a in split.r_basis
        for b in split.r_basis
    ]
    basis = dvr_commutant(mats, len(split.r_basis), table.p)
    return len(basis), basis


def default_adams_keys(p: int, max_weight: int, caps=None, q: int | None = None) -> list[int]:
    """Adams parameters p^s * q^a (plus 0) used as window generators."""
    if q is None:
        q = topological_generator(p)
    m_cap, s_cap = caps if caps is not None else (max_weight + 8, 3)
    keys = [0]
    for s in range(s_cap + 1):
        for a in range(m_cap + 1):
            keys.append(p**s * q**a)
    return keys


def diagonal_window_lattice(
    N: int,
    n: int,
    table: EtaRTable,
    adams_keys=None,
    caps=None,
    q: int | None = None,
) -> DvrLattice:
    """Lattice of scalar windows (mu_0, ..., mu_N) of realizable diagonals.

    A window is admitted when one integral combination of the generating
    operations acts, in every weight r <= N simultaneously, by a matrix that
    maps the J block into itself and restricts to mu_r times the identity on
    the R block modulo J.  Computed as the projection onto the mu
    coordinates of the integral solution module of one exact linear system.
    """
    p = table.p
    if N > table.max_weight:
        raise ValueError("window bound exceeds the table bound")
    if adams_keys is None:
        adams_keys = default_adams_keys(p, N, caps=caps, q=q)
    gens = stable_generators(p, N)
    n_gen, n_adams = len(gens), len(adams_keys)
    n_vars = n_gen + n_adams + (N + 1)

    rows = []
    for r in range(N + 1):
        split = block_split(r, n, p)
        actions = [action_matrix(g, r, table).entries for g in gens]
        adams_scalars = [
            Fraction(k) ** ((p - 1) * r) if (p - 1) * r else Fraction(1)
            for k in adams_keys
        ]
        r_set = set(split.r_indices)
        for i in split.r_indices:
            for j in range(len(split.basis)):
                row = [Fraction(0)] * n_vars
                for g_idx in range(n_gen):
                    row[g_idx] = actions[g_idx][i][j]
                if i == j:
                    for k_idx in range(n_adams):
                        row[n_gen + k_idx] = adams_scalars[k_idx]
                if i == j and j in r_set:
                    row[n_gen + n_adams + r] = Fraction(-1)
                rows.append(row)

    kernel = integral_kernel(rows, n_vars, p)
    windows = [vec[n_gen + n_adams:] for vec in kernel]
    return echelon_lattice(p, windows, N + 1)


def iota_hat_n_window(p: int, combination: dict, N: int, n: int) -> list[DegreeMatrix]:
    """Per-weight R-block matrices of an integral Adams combination.

    In weight r the combination acts as the scalar
    sum_k coeff(k) * k^((p-1)r) on the R block (0^0 = 1).
    """
    coeffs = []
    for k, c in combination.items():
        k, c = Fraction(k), Fraction(c)
        if not is_integral(k, p) or not is_integral(c, p):
            raise ValueError("Adams parameters and coefficients must be p-local")
        coeffs.append((k, c))
    out = []
    for r in range(N + 1):
        split = block_split(r, n, p)
        exponent = (p - 1) * r
        scalar = sum(
            (c * (k**exponent if exponent else Fraction(1)) for k, c in coeffs),
            Fraction(0),
        )
        out.append(scalar_matrix(p, r, split.r_basis, scalar))
    return out
