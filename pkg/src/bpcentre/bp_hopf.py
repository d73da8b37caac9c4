"""The coefficient ring and the right unit of the Brown-Peterson Hopf algebroid.

Everything is computed with exact rational arithmetic.  The coefficient ring
is Z_(p)[v_1, v_2, ...] on the Hazewinkel generators, defined through the
rational generators m_k by the recursion p*m_k = sum_{0<=i<k} m_i v_{k-i}^{p^i}
(m_0 = 1).  Co-operations live in Z_(p)[v][t], and the right unit is the ring
map determined on the rational generators by eta_R(m_k) = sum_{i+j=k} m_i t_j^{p^i}
with t_0 = 1.  Rational m-arithmetic never leaves this module: every exported
value is rewritten into v, t and checked to be p-integral.

:class:`EtaRTable` memoizes eta_R on v-monomials up to a weight bound and
serializes to a deterministic JSON document.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from functools import lru_cache

from .dvr_arith import is_odd_prime, valuation
from .monomial_order import (
    Exp,
    add,
    enumerate_weight,
    normalize,
    sort_key,
    unit_exp,
    weight,
)

# A mixed monomial: exponent sequences for the v, t and m generators.
Mono = tuple[Exp, Exp, Exp]

MONO_ONE: Mono = ((), (), ())

CONVENTION = "hazewinkel"


class IntegralityError(ArithmeticError):
    """A coefficient that should lie in Z_(p) has negative valuation."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


def mono_weight(key: Mono, p: int) -> int:
    v, t, m = key
    return weight(v, p) + weight(t, p) + weight(m, p)


def mono_sort_key(key: Mono):
    v, t, m = key
    return (sort_key(t), sort_key(v), sort_key(m))


class GradedPoly:
    """A sparse weight-homogeneous polynomial in the v, t and m generators.

    Immutable by convention; the term map sends mixed monomials to non-zero
    Fraction coefficients, and all stored terms share one total weight.
    """

    __slots__ = ("p", "terms", "weight")

    def __init__(self, p: int, terms):
        clean: dict[Mono, Fraction] = {}
        w = None
        for key, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            v, t, m = key
            key = (normalize(v), normalize(t), normalize(m))
            kw = mono_weight(key, p)
            if w is None:
                w = kw
            elif kw != w:
                raise ValueError(f"inhomogeneous terms: weight {kw} vs {w}")
            clean[key] = clean.get(key, Fraction(0)) + coeff
        clean = {k: c for k, c in clean.items() if c != 0}
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "weight", None if not clean else w)

    def __setattr__(self, *_):
        raise AttributeError("GradedPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "GradedPoly":
        return cls(p, {})

    @classmethod
    def const(cls, p: int, c) -> "GradedPoly":
        return cls(p, {MONO_ONE: Fraction(c)})

    @classmethod
    def v_mono(cls, p: int, alpha: Exp, coeff=1) -> "GradedPoly":
        return cls(p, {(normalize(alpha), (), ()): Fraction(coeff)})

    @classmethod
    def t_mono(cls, p: int, beta: Exp, coeff=1) -> "GradedPoly":
        return cls(p, {((), normalize(beta), ()): Fraction(coeff)})

    @classmethod
    def m_mono(cls, p: int, mu: Exp, coeff=1) -> "GradedPoly":
        return cls(p, {((), (), normalize(mu)): Fraction(coeff)})

    # -- ring structure -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, GradedPoly)
            and self.p == other.p
            and self.terms == other.terms
        )

    __hash__ = None

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        if self.p != other.p:
            raise ValueError("mixed primes")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return GradedPoly(self.p, out)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedPoly(self.p, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, GradedPoly):
            return NotImplemented
        if self.p != other.p:
            raise ValueError("mixed primes")
        out: dict[Mono, Fraction] = {}
        for (v1, t1, m1), c1 in self.terms.items():
            for (v2, t2, m2), c2 in other.terms.items():
                key = (add(v1, v2), add(t1, t2), add(m1, m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return GradedPoly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "GradedPoly":
        if n < 0:
            raise ValueError("negative power")
        result = GradedPoly.const(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure queries --------------------------------------------

    def coefficient(self, key: Mono) -> Fraction:
        v, t, m = key
        return self.terms.get((normalize(v), normalize(t), normalize(m)), Fraction(0))

    def constant(self) -> Fraction:
        return self.terms.get(MONO_ONE, Fraction(0))

    def by_t_part(self) -> dict[Exp, "GradedPoly"]:
        """Decompose as sum_b c_b(v) t^b; requires no m generators."""
        groups: dict[Exp, dict[Mono, Fraction]] = {}
        for (v, t, m), c in self.terms.items():
            if m:
                raise ValueError("polynomial still contains rational m generators")
            groups.setdefault(t, {})[(v, (), ())] = c
        return {t: GradedPoly(self.p, part) for t, part in groups.items()}

    def t_evaluated_at_zero(self) -> "GradedPoly":
        """Image under the ring map sending every t generator to zero."""
        kept = {k: c for k, c in self.terms.items() if not k[1]}
        return GradedPoly(self.p, kept)

    def pure_t_terms(self) -> dict[Exp, Fraction]:
        """Coefficients of the monomials involving only t generators."""
        return {
            t: c for (v, t, m), c in self.terms.items() if not v and not m
        }

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=mono_sort_key):
            coeff = self.terms[key]
            factors = []
            for name, exps in zip(("v", "t", "m"), key):
                for i, e in enumerate(exps, start=1):
                    if e == 1:
                        factors.append(f"{name}_{i}")
                    elif e > 1:
                        factors.append(f"{name}_{i}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            parts.append(("- " if coeff < 0 else "+ ") + text)
        first = parts[0].removeprefix("+ ").replace("- ", "-", 1)
        return " ".join([first] + parts[1:])

    __repr__ = __str__


def check_integrality(poly: GradedPoly):
    """Whether every coefficient lies in Z_(p); offenders listed if not."""
    offenders = [
        (key, coeff)
        for key, coeff in sorted(poly.terms.items(), key=lambda kv: mono_sort_key(kv[0]))
        if valuation(coeff, poly.p) < 0
    ]
    return (not offenders), offenders


@lru_cache(maxsize=None)
def hazewinkel_m(p: int, k: int) -> GradedPoly:
    """The rational generator m_k as a polynomial in v_1, ..., v_k.

    m_0 = 1 and p*m_k = sum_{0<=i<k} m_i v_{k-i}^{p^i}.
    """
    if not is_odd_prime(p):
        raise ValueError("p must be an odd prime")
    if k < 0:
        raise ValueError("index must be non-negative")
    if k == 0:
        return GradedPoly.const(p, 1)
    acc = GradedPoly.zero(p)
    for i in range(k):
        acc = acc + hazewinkel_m(p, i) * GradedPoly.v_mono(p, unit_exp(k - i)) ** (p**i)
    return acc * Fraction(1, p)


def _eta_of_m(p: int, k: int) -> GradedPoly:
    # eta_R(m_k) = sum_{i+j=k} m_i t_j^{p^i}, with m_0 = t_0 = 1.
    acc = GradedPoly.zero(p)
    for i in range(k + 1):
        j = k - i
        mi = GradedPoly.const(p, 1) if i == 0 else GradedPoly.m_mono(p, unit_exp(i))
        tj = GradedPoly.const(p, 1) if j == 0 else GradedPoly.t_mono(p, unit_exp(j))
        acc = acc + mi * tj ** (p**i)
    return acc


def substitute_m(poly: GradedPoly) -> GradedPoly:
    """Rewrite every m generator as its v-polynomial."""
    p = poly.p
    out = GradedPoly.zero(p)
    for (v, t, m), c in poly.terms.items():
        factor = GradedPoly(p, {(v, t, ()): c})
        for i, e in enumerate(m, start=1):
            if e:
                factor = factor * hazewinkel_m(p, i) ** e
        out = out + factor
    return out


class EtaRTable:
    """Memoized values of the right unit on v-monomials, up to a weight bound.

    Entries are p-integral polynomials in v and t, homogeneous of the weight
    of their key.  Population is deterministic; reads never mutate existing
    entries, so a populated table is safe to share between threads.
    """

    def __init__(self, p: int, max_weight: int, convention: str = CONVENTION):
        if not is_odd_prime(p):
            raise ValueError("p must be an odd prime")
        if convention != CONVENTION:
            raise ValueError(f"unsupported generator convention {convention!r}")
        if max_weight < 0:
            raise ValueError("max_weight must be non-negative")
        self.p = p
        self.max_weight = max_weight
        self.convention = convention
        self._cache: dict[Exp, GradedPoly] = {}

    # -- construction ---------------------------------------------------

    def _store(self, gamma: Exp, poly: GradedPoly) -> GradedPoly:
        ok, offenders = check_integrality(poly)
        if not ok:
            worst = ", ".join(f"{key} -> {c}" for key, c in offenders[:3])
            raise IntegralityError(
                f"eta_R(v^{gamma}) has non-integral coefficients: {worst}", offenders
            )
        if not poly.is_zero() and poly.weight != weight(gamma, self.p):
            raise IntegralityError(
                f"eta_R(v^{gamma}) is not homogeneous of weight {weight(gamma, self.p)}"
            )
        self._cache[gamma] = poly
        return poly

    def _eta_generator(self, k: int) -> GradedPoly:
        p = self.p
        expr = _eta_of_m(p, k) * p
        for i in range(1, k):
            expr = expr - _eta_of_m(p, i) * self.eta(unit_exp(k - i)) ** (p**i)
        return substitute_m(expr)

    def eta(self, gamma) -> GradedPoly:
        """eta_R(v^gamma), computed multiplicatively and memoized."""
        gamma = normalize(gamma)
        cached = self._cache.get(gamma)
        if cached is not None:
            return cached
        w = weight(gamma, self.p)
        if w > self.max_weight:
            raise ValueError(
                f"weight {w} exceeds the table bound {self.max_weight}"
            )
        if not gamma:
            poly = GradedPoly.const(self.p, 1)
        elif gamma == unit_exp(len(gamma)):
            poly = self._eta_generator(len(gamma))
        else:
            top = unit_exp(len(gamma))
            rest = normalize(
                tuple(e - (1 if i == len(gamma) - 1 else 0) for i, e in enumerate(gamma))
            )
            poly = self.eta(rest) * self.eta(top)
        return self._store(gamma, poly)

    def populate(self) -> "EtaRTable":
        for r in range(self.max_weight + 1):
            for gamma in enumerate_weight(r, self.p):
                self.eta(gamma)
        return self

    def keys(self):
        return sorted(self._cache, key=sort_key)

    # -- serialization ----------------------------------------------------

    def to_payload(self) -> dict:
        self.populate()
        entries = []
        for gamma in self.keys():
            poly = self._cache[gamma]
            terms = []
            for key in sorted(poly.terms, key=mono_sort_key):
                v, t, m = key
                assert not m
                coeff = poly.terms[key]
                terms.append(
                    {
                        "v_exponents": list(v),
                        "t_exponents": list(t),
                        "coefficient_numerator": str(coeff.numerator),
                        "coefficient_denominator": str(coeff.denominator),
                    }
                )
            entries.append({"v_exponents": list(gamma), "terms": terms})
        return {
            "prime": self.p,
            "convention": self.convention,
            "max_weight": self.max_weight,
            "entries": entries,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "EtaRTable":
        try:
            table = cls(int(payload["prime"]), int(payload["max_weight"]),
                        payload["convention"])
            for entry in payload["entries"]:
                gamma = normalize(tuple(entry["v_exponents"]))
                terms = {}
                for term in entry["terms"]:
                    key = (
                        tuple(term["v_exponents"]),
                        tuple(term["t_exponents"]),
                        (),
                    )
                    coeff = Fraction(
                        int(term["coefficient_numerator"]),
                        int(term["coefficient_denominator"]),
                    )
                    terms[key] = coeff
                table._store(gamma, GradedPoly(table.p, terms))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed cache document: {exc}") from exc
        expected = {
            g for r in range(table.max_weight + 1) for g in enumerate_weight(r, table.p)
        }
        if expected != set(table._cache):
            raise ValueError("cache document does not cover the declared weight bound")
        return table

    def to_bytes(self) -> bytes:
        return (json.dumps(self.to_payload(), indent=2) + "\n").encode("utf-8")

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "EtaRTable":
        with open(path, "rb") as fh:
            payload = json.loads(fh.read().decode("utf-8"))
        return cls.from_payload(payload)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()


def eta_r_v(gamma, table: EtaRTable) -> GradedPoly:
    """eta_R(v^gamma) from the table (computing and memoizing on demand)."""
    return table.eta(gamma)


def coefficient_of_t(gamma, beta, table: EtaRTable) -> GradedPoly:
    """The v-polynomial coefficient of t^beta in eta_R(v^gamma).

    Zero when t^beta does not occur; otherwise homogeneous of weight
    weight(gamma) - weight(beta).
    """
    beta = normalize(beta)
    poly = table.eta(gamma)
    picked = {
        (v, (), ()): c for (v, t, m), c in poly.terms.items() if t == beta
    }
    return GradedPoly(table.p, picked)
