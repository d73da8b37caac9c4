"""Exact arithmetic and linear algebra over the p-local integers.

Scalars are ``fractions.Fraction`` values; an element is p-local (lies in
Z_(p)) when its reduced denominator is prime to p.  All computations here
are exact.  Lattices (finitely generated submodules of Z_(p)^m) are kept in
a canonical column echelon form with pure p-power pivots, so that equality
of lattices is literal equality of their forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INFINITY = math.inf

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def _check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def is_odd_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, int(p**0.5) + 1, 2))


def valuation(x, p: int):
    """Exponent of p in x, or the infinity marker for zero.

    Negative for rationals with p in the denominator; elements of Z_(p)
    always have valuation >= 0.
    """
    _check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    v = 0
    n = abs(x.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def is_integral(x, p: int) -> bool:
    """Whether x lies in Z_(p) (denominator prime to p)."""
    return Fraction(x).denominator % p != 0


def reduce_mod_p_power(x, p: int, e: int) -> int:
    """Canonical integer representative in [0, p^e) of x in Z_(p)/p^e."""
    x = Fraction(x)
    mod = p**e
    if mod == 1:
        return 0
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def topological_generator(p: int) -> int:
    """Smallest positive integer generating the units of Z/p^2.

    Such an integer is a topological generator of the p-adic units for odd p.
    """
    if not is_odd_prime(p):
        raise ValueError("p must be an odd prime")
    mod = p * p
    target = p * (p - 1)
    for q in range(2, mod):
        if q % p == 0:
            continue
        order, acc = 1, q % mod
        while acc != 1:
            acc = acc * q % mod
            order += 1
        if order == target:
            return q
    raise AssertionError("no generator found")  # unreachable for odd primes


# ---------------------------------------------------------------------------
# plain exact matrices (tuples of row tuples)
# ---------------------------------------------------------------------------

def as_vector(entries) -> Vector:
    return tuple(Fraction(x) for x in entries)


def as_matrix(rows) -> Matrix:
    return tuple(as_vector(row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def zero_matrix(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix size mismatch")
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
              for j in range(len(b[0]) if b else 0))
        for i in range(len(a))
    )


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise ValueError("matrix size mismatch")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def commutes(a: Matrix, b: Matrix) -> bool:
    return mat_mul(a, b) == mat_mul(b, a)


# ---------------------------------------------------------------------------
# lattices in canonical echelon form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DvrLattice:
    """A finitely generated submodule of Z_(p)^m in canonical echelon form.

    ``basis`` holds the columns; column j is zero above its pivot row,
    carries exactly p^e at the pivot, and pivot-row entries of earlier
    columns are reduced to their canonical representative mod p^e.  Two
    lattices are equal iff their forms compare equal.
    """

    p: int
    ambient_rank: int
    basis: tuple[Vector, ...]
    pivots: tuple[tuple[int, int], ...]  # (pivot row, p-exponent) per column

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.pivots)

    def colength(self) -> int:
        """Length of Z_(p)^m / L when full rank; sum of pivot exponents."""
        return sum(self.elementary_divisors)


def echelon_lattice(p: int, generators, ambient_rank: int) -> DvrLattice:
    """Canonical echelon form of the Z_(p)-span of the given vectors.

    Rejects vectors with entries outside Z_(p).  Feeding a lattice's own
    basis back returns the identical form.
    """
    _check_prime(p)
    cols = []
    for g in generators:
        v = as_vector(g)
        if len(v) != ambient_rank:
            raise ValueError(f"vector rank {len(v)} != ambient rank {ambient_rank}")
        for x in v:
            if not is_integral(x, p):
                raise ValueError(f"non-integral entry {x} (valuation {valuation(x, p)})")
        cols.append(list(v))

    active = list(range(len(cols)))
    echelon: list[list[Fraction]] = []
    pivots: list[tuple[int, int]] = []
    for row in range(ambient_rank):
        candidates = [j for j in active if cols[j][row] != 0]
        if not candidates:
            continue
        piv = min(candidates, key=lambda j: (valuation(cols[j][row], p), j))
        e = valuation(cols[piv][row], p)
        for j in active:
            if j == piv or cols[j][row] == 0:
                continue
            c = cols[j][row] / cols[piv][row]  # in Z_(p) by minimality of e
            cols[j] = [x - c * y for x, y in zip(cols[j], cols[piv])]
        unit = Fraction(p) ** e / cols[piv][row]
        echelon.append([unit * x for x in cols[piv]])
        pivots.append((row, e))
        active.remove(piv)

    # Leftover columns were cleared in every row.
    for j in active:
        assert all(x == 0 for x in cols[j])

    # Reduce pivot-row entries of earlier columns mod the pivot, top down.
    for j, (row, e) in enumerate(pivots):
        mod = Fraction(p) ** e
        for i in range(j):
            x = echelon[i][row]
            rep = Fraction(reduce_mod_p_power(x, p, e))
            q = (x - rep) / mod
            echelon[i] = [a - q * b for a, b in zip(echelon[i], echelon[j])]

    return DvrLattice(
        p=p,
        ambient_rank=ambient_rank,
        basis=tuple(tuple(col) for col in echelon),
        pivots=tuple(pivots),
    )


def lattice_membership(v, lattice: DvrLattice):
    """Coefficients of v over the echelon basis, or None when v is outside.

    A returned certificate re-multiplies to v exactly.
    """
    vec = as_vector(v)
    if len(vec) != lattice.ambient_rank:
        raise ValueError("vector rank does not match lattice ambient rank")
    residual = list(vec)
    coeffs = []
    for col, (row, _e) in zip(lattice.basis, lattice.pivots):
        c = residual[row] / col[row]
        if not is_integral(c, lattice.p):
            return None
        coeffs.append(c)
        residual = [x - c * y for x, y in zip(residual, col)]
    if any(x != 0 for x in residual):
        return None
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# integral kernels and commutants
# ---------------------------------------------------------------------------

def integral_kernel(rows, ncols: int, p: int) -> list[Vector]:
    """Z_(p)-basis of the module of integral vectors annihilated by the rows.

    Performs unimodular column elimination with minimal-valuation pivoting,
    so the result is saturated: every integral vector of the rational kernel
    is an integral combination of the returned basis.
    """
    _check_prime(p)
    work = [list(as_vector(row)) for row in rows]
    for row in work:
        if len(row) != ncols:
            raise ValueError("row length mismatch")
    trans = [[Fraction(1 if i == j else 0) for j in range(ncols)] for i in range(ncols)]

    active = list(range(ncols))
    for i in range(len(work)):
        candidates = [j for j in active if work[i][j] != 0]
        if not candidates:
            continue
        piv = min(candidates, key=lambda j: (valuation(work[i][j], p), j))
        for j in active:
            if j == piv or work[i][j] == 0:
                continue
            c = work[i][j] / work[i][piv]  # p-integral by pivot minimality
            for r in range(len(work)):
                work[r][j] -= c * work[r][piv]
            for r in range(ncols):
                trans[r][j] -= c * trans[r][piv]
        active.remove(piv)

    kernel = []
    for j in active:
        assert all(work[r][j] == 0 for r in range(len(work)))
        kernel.append(tuple(trans[r][j] for r in range(ncols)))
    return kernel


def commutant(mats, size: int, p: int) -> list[Matrix]:
    """Z_(p)-basis of {X : XM = MX for every M in mats}.

    Matrices are square of the given size with p-local entries; the empty
    family yields the full matrix space.  Unknowns are the size^2 entries of
    X in row-major order.
    """
    rows = []
    for m in mats:
        m = as_matrix(m)
        if len(m) != size or any(len(r) != size for r in m):
            raise ValueError("commutant input must be square of the given size")
        for i in range(size):
            for j in range(size):
                # (XM - MX)[i][j] as a linear form in the entries of X.
                row = [Fraction(0)] * (size * size)
                for b in range(size):
                    row[i * size + b] += m[b][j]
                for a in range(size):
                    row[a * size + j] -= m[i][a]
                rows.append(row)
    kernel = integral_kernel(rows, size * size, p)
    return [
        tuple(tuple(vec[i * size + j] for j in range(size)) for i in range(size))
        for vec in kernel
    ]
