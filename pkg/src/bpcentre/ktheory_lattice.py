"""Finite windows of the K-theory congruence ring, by an Adams-span oracle.

The ring of scalar sequences realizable as coefficient actions of additive
degree-zero operations on the connective Adams summand is cut out by p-local
congruences; since every such operation is a limit of combinations of Adams
operations, its finite windows can be computed independently of any explicit
congruence basis: take the Z_(p)-span of Adams windows (k^((p-1)i))_i over
parameters k = p^s q^a and k = 0, for a topological generator q of the
p-adic units, and grow the family until the echelon form stabilizes.

Stabilization is certified empirically (ascending chains of submodules of
Z_(p)^(N+1) are eventually constant); failure to stabilize inside the caps
raises, never silently truncates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bp_hopf import EtaRTable
from .dvr_arith import (
    DvrLattice,
    echelon_lattice,
    is_integral,
    lattice_membership,
    topological_generator,
)
from .truncation_centre import diagonal_window_lattice

Window = tuple[Fraction, ...]


class StabilizationError(RuntimeError):
    """The Adams span kept changing within the configured generator caps."""


@dataclass(frozen=True)
class StabilizationCertificate:
    """Record of how the Adams span stabilized."""

    p: int
    window: int
    q: int
    m_cap: int
    s_cap: int
    margin: int
    last_changed_a: int
    stopped_at_a: int


def adams_sequence(p: int, k, N: int) -> Window:
    """The window (k^((p-1)i)) for i = 0..N, with 0^0 = 1."""
    k = Fraction(k)
    if not is_integral(k, p):
        raise ValueError(f"Adams parameter {k} is not p-local")
    out = []
    for i in range(N + 1):
        e = (p - 1) * i
        out.append(Fraction(1) if e == 0 else k**e)
    return tuple(out)


def sg_window(
    p: int,
    N: int,
    q: int | None = None,
    caps=None,
    margin: int = 4,
):
    """Stabilized window lattice of the congruence ring, with certificate.

    Returns (lattice, certificate).  Generators are the Adams windows for
    k = p^s q^a with s <= S and a grown until ``margin`` consecutive steps
    leave the echelon form unchanged, plus the k = 0 window; exceeding the
    cap M on a without stabilizing is an explicit error.
    """
    if N < 0:
        raise ValueError("window bound must be non-negative")
    if margin < 1:
        raise ValueError("margin must be positive")
    if q is None:
        q = topological_generator(p)
    m_cap, s_cap = caps if caps is not None else (N + 8, 3)

    lattice = echelon_lattice(p, [adams_sequence(p, 0, N)], N + 1)
    streak = 0
    last_changed = -1
    for a in range(m_cap + 1):
        batch = [adams_sequence(p, p**s * q**a, N) for s in range(s_cap + 1)]
        grown = echelon_lattice(p, list(lattice.basis) + batch, N + 1)
        if grown == lattice:
            streak += 1
        else:
            streak = 0
            last_changed = a
            lattice = grown
        if streak >= margin:
            cert = StabilizationCertificate(
                p=p, window=N, q=q, m_cap=m_cap, s_cap=s_cap, margin=margin,
                last_changed_a=last_changed, stopped_at_a=a,
            )
            return lattice, cert
    raise StabilizationError(
        f"Adams span for window {N} did not stabilize for {margin} consecutive "
        f"steps within a <= {m_cap} (s <= {s_cap}); raise the caps"
    )


def sg_membership(w, lattice: DvrLattice):
    """Membership certificate of a window in a computed lattice, re-verified.

    Returns the coefficients over the echelon basis or None; a returned
    certificate has been checked by exact re-expansion.
    """
    vec = tuple(Fraction(x) for x in w)
    if len(vec) != lattice.ambient_rank:
        raise ValueError("window length does not match the lattice")
    cert = lattice_membership(vec, lattice)
    if cert is None:
        return None
    rebuilt = [Fraction(0)] * lattice.ambient_rank
    for c, col in zip(cert, lattice.basis):
        rebuilt = [x + c * y for x, y in zip(rebuilt, col)]
    if tuple(rebuilt) != vec:
        raise AssertionError("membership certificate failed re-expansion")
    return cert


def compare_with_diagonal_window(
    N: int,
    n: int,
    table: EtaRTable,
    q: int | None = None,
    caps=None,
    margin: int = 4,
) -> dict:
    """Compare the congruence window with the realizable diagonal window.

    Checks the inclusion of the former in the latter exactly (every echelon
    basis vector carries a verified certificate) and reports both elementary
    divisor sequences and the colength of the inclusion as the measured gap.
    The inclusion must hold; the gap is reported, never asserted to vanish.
    """
    p = table.p
    sg, cert = sg_window(p, N, q=q, caps=caps, margin=margin)
    diagonal = diagonal_window_lattice(N, n, table, caps=caps, q=q)
    memberships = [sg_membership(col, diagonal) for col in sg.basis]
    inclusion = all(m is not None for m in memberships)
    gap = None
    if inclusion and sg.rank == diagonal.rank:
        gap = sg.colength() - diagonal.colength()
    return {
        "window": N,
        "height": n,
        "sg_divisors": list(sg.elementary_divisors),
        "sg_pivot_rows": [row for row, _ in sg.pivots],
        "diagonal_divisors": list(diagonal.elementary_divisors),
        "diagonal_pivot_rows": [row for row, _ in diagonal.pivots],
        "inclusion": inclusion,
        "gap_colength": gap,
        "stabilization": {
            "q": cert.q,
            "m_cap": cert.m_cap,
            "s_cap": cert.s_cap,
            "margin": cert.margin,
            "last_changed_a": cert.last_changed_a,
            "stopped_at_a": cert.stopped_at_a,
        },
    }
