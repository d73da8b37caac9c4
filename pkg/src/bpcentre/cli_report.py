"""Command-line front end: build the right-unit cache, verify, compute lattices.

Commands
--------
``eta-table``  populate and persist the right-unit table, printing per-weight
               statistics; ``verify SUITE`` run one of the named check suites
               (etaR, triangular, realize, centre, congruence, all) and print
               a PASS/FAIL report; ``lattices`` compute the congruence and
               diagonal window lattices and their comparison.

Reports embed the full configuration and the cache fingerprint, and are byte
reproducible: identical configuration yields identical output.  Exit codes:
0 all checks passed, 1 a mathematical check failed or an internal
inconsistency was detected, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .bp_hopf import (
    EtaRTable,
    GradedPoly,
    IntegralityError,
    check_integrality,
    eta_r_v,
)
from .dvr_arith import is_odd_prime, topological_generator, valuation
from .ktheory_lattice import (
    StabilizationError,
    adams_sequence,
    compare_with_diagonal_window,
    sg_membership,
    sg_window,
)
from .monomial_order import (
    enumerate_weight,
    max_generator_index,
    sort_key,
    unit_exp,
)
from .op_calculus import elementary_realize, functional_matrix, mu_matrix
from .truncation_centre import block_split, centre_commutant, diagonal_window_lattice

CACHE_ENV_VAR = "BPCENTRE_CACHE"
SUITES = ("etaR", "triangular", "realize", "centre", "congruence", "all")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    max_weight: int = 13
    heights: tuple[int, ...] = (1, 2)
    window: int = 5
    q: int | None = None
    cache_dir: str = ".bpcentre-cache"
    fmt: str = "markdown"
    caps: tuple[int, int] | None = None
    margin: int = 4

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ConfigError(f"p must be an odd prime, got {self.p}")
        if self.max_weight < 1:
            raise ConfigError("max-weight must be at least 1")
        if not (0 <= self.window <= self.max_weight):
            raise ConfigError("N must satisfy 0 <= N <= max-weight")
        if not self.heights or any(n < 1 for n in self.heights):
            raise ConfigError("heights must be positive integers")
        if self.fmt not in ("json", "csv", "markdown"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.margin < 1:
            raise ConfigError("margin must be positive")
        if self.caps is not None and (self.caps[0] < 0 or self.caps[1] < 0):
            raise ConfigError("caps must be non-negative")

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "max_weight": self.max_weight,
            "heights": list(self.heights),
            "N": self.window,
            "q": self.q if self.q is not None else topological_generator(self.p),
            "cache_dir": self.cache_dir,
            "format": self.fmt,
            "caps": list(self.caps) if self.caps else [self.window + 8, 3],
            "margin": self.margin,
        }

    def cache_path(self) -> str:
        name = f"etaR_p{self.p}_hazewinkel_w{self.max_weight}.json"
        return os.path.join(self.cache_dir, name)


def load_or_build_table(config: RunConfig):
    """Return (table, cache_status); builds and persists the cache if absent."""
    path = config.cache_path()
    if os.path.exists(path):
        table = EtaRTable.load(path)
        if table.p != config.p or table.max_weight != config.max_weight:
            raise ValueError(f"cache {path} does not match the configuration")
        return table, "hit"
    table = EtaRTable(config.p, config.max_weight).populate()
    os.makedirs(config.cache_dir, exist_ok=True)
    table.save(path)
    return table, "written"


def _check(checks: list, check_id: str, ok: bool, witness: str) -> bool:
    checks.append({"id": check_id, "status": "PASS" if ok else "FAIL",
                   "witness": witness})
    return ok


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def suite_etaR(config: RunConfig, table: EtaRTable) -> list[dict]:
    checks: list[dict] = []
    p = config.p
    expected_v1 = GradedPoly(p, {
        ((1,), (), ()): Fraction(1),
        ((), (1,), ()): Fraction(p),
    })
    got = eta_r_v((1,), table)
    _check(checks, "eta-v1-exact", got == expected_v1, f"eta_R(v_1) = {got}")

    for r in range(config.max_weight + 1):
        gammas = enumerate_weight(r, p)
        bad = []
        term_count = 0
        max_val = 0
        for gamma in gammas:
            poly = table.eta(gamma)
            term_count += len(poly.terms)
            ok, offenders = check_integrality(poly)
            if not ok:
                bad.append((gamma, offenders[0]))
            for c in poly.terms.values():
                v = valuation(c, p)
                if v != float("inf"):
                    max_val = max(max_val, v)
        witness = f"monomials={len(gammas)} terms={term_count} max_coeff_val={max_val}"
        if bad:
            witness += f" offender={bad[0]}"
        _check(checks, f"integrality/w={r}", not bad, witness)

    for r in range(config.max_weight + 1):
        gammas = enumerate_weight(r, p)
        top_ok, counit_ok = True, True
        for gamma in gammas:
            poly = table.eta(gamma)
            pure = poly.pure_t_terms()
            expected_top = Fraction(p) ** sum(gamma)
            if pure.get(gamma) != expected_top:
                top_ok = False
            if any(sort_key(t) > sort_key(gamma) for t in pure):
                top_ok = False
            if poly.t_evaluated_at_zero() != GradedPoly.v_mono(p, gamma):
                counit_ok = False
        _check(checks, f"top-term/w={r}", top_ok,
               f"top pure-t coefficient is p^(sum gamma) on {len(gammas)} monomials")
        _check(checks, f"counit/w={r}", counit_ok,
               "t -> 0 returns v^gamma exactly")
    return checks


def suite_triangular(config: RunConfig, table: EtaRTable) -> list[dict]:
    checks: list[dict] = []
    p = config.p
    for r in range(config.max_weight + 1):
        basis, mu = mu_matrix(r, table)
        ok = True
        witness_parts = []
        for i, gamma in enumerate(basis):
            for j, beta in enumerate(basis):
                value = mu[i][j]
                if i < j and value != 0:
                    ok = False
                    witness_parts.append(f"mu[{gamma},{beta}]={value}!=0")
                if i == j and value != Fraction(p) ** sum(beta):
                    ok = False
                    witness_parts.append(f"mu[{beta},{beta}]={value}")
        witness = f"pairs={len(basis)**2}" + ("; " + "; ".join(witness_parts[:3])
                                              if witness_parts else "")
        _check(checks, f"triangular/w={r}", ok, witness)
    return checks


def suite_realize(config: RunConfig, table: EtaRTable) -> list[dict]:
    checks: list[dict] = []
    p = config.p
    for r in range(config.max_weight + 1):
        basis = tuple(enumerate_weight(r, p))
        ok = True
        valuations = {}
        first_bad = ""
        for alpha in basis:
            for beta in basis:
                mu_bar, coeffs = elementary_realize(alpha, beta, table)
                valuations[str(beta)] = valuation(mu_bar, p)
                combined = None
                for gamma, c in coeffs.items():
                    term = functional_matrix(alpha, gamma, r, table).scale(c)
                    combined = term if combined is None else combined + term
                ia, ib = basis.index(alpha), basis.index(beta)
                good = (
                    mu_bar != 0
                    and all(valuation(c, p) >= 0 for c in coeffs.values())
                    and all(
                        combined.entries[i][j]
                        == (mu_bar if (i, j) == (ia, ib) else 0)
                        for i in range(len(basis))
                        for j in range(len(basis))
                    )
                )
                if not good and not first_bad:
                    first_bad = f"pair=({alpha},{beta})"
                    ok = False
        witness = "mu_bar valuations by column: " + json.dumps(valuations)
        if first_bad:
            witness += "; " + first_bad
        _check(checks, f"realize/w={r}", ok, witness)
    return checks


def suite_centre(config: RunConfig, table: EtaRTable) -> list[dict]:
    checks: list[dict] = []
    p = config.p
    for n in config.heights:
        for r in range(config.max_weight + 1):
            split = block_split(r, n, p)
            _check(
                checks,
                f"block-order/n={n}/w={r}",
                True,
                f"|R|={len(split.r_indices)} |J|={len(split.j_indices)}",
            )
            rank, basis = centre_commutant(r, n, table)
            scalar = all(
                all(m[i][j] == (m[0][0] if i == j else 0)
                    for i in range(len(m)) for j in range(len(m)))
                for m in basis
            )
            _check(
                checks,
                f"centre/n={n}/w={r}",
                rank == 1 and scalar,
                f"commutant rank={rank} scalar={scalar}",
            )
    return checks


def suite_congruence(config: RunConfig, table: EtaRTable) -> list[dict]:
    checks: list[dict] = []
    p = config.p
    q = config.q if config.q is not None else topological_generator(p)
    N = config.window
    try:
        sg, cert = sg_window(p, N, q=q, caps=config.caps, margin=config.margin)
    except StabilizationError as exc:
        _check(checks, f"sg-stabilization/N={N}", False, str(exc))
        return checks
    _check(
        checks,
        f"sg-stabilization/N={N}",
        True,
        f"last_changed_a={cert.last_changed_a} stopped_at_a={cert.stopped_at_a}",
    )
    for k in (0, 1, q, q * q, p, p * q):
        member = sg_membership(adams_sequence(p, k, N), sg)
        _check(checks, f"sg-generator-membership/k={k}", member is not None,
               "verified certificate" if member is not None else "no certificate")
    if N >= 1:
        smaller, _ = sg_window(p, N - 1, q=q, caps=config.caps, margin=config.margin)
        nested = all(
            sg_membership(col[: N], smaller) is not None for col in sg.basis
        )
        _check(checks, f"sg-nesting/N={N}->{N - 1}", nested,
               "projections of the basis belong to the smaller window")
    for n in config.heights:
        report = compare_with_diagonal_window(
            N, n, table, q=q, caps=config.caps, margin=config.margin
        )
        _check(
            checks,
            f"congruence-inclusion/n={n}/N={N}",
            report["inclusion"],
            f"sg divisors {report['sg_divisors']} "
            f"diagonal divisors {report['diagonal_divisors']} "
            f"gap={report['gap_colength']}",
        )
    return checks


def run_suites(config: RunConfig, table: EtaRTable, suite: str) -> list[dict]:
    runners = {
        "etaR": suite_etaR,
        "triangular": suite_triangular,
        "realize": suite_realize,
        "centre": suite_centre,
        "congruence": suite_congruence,
    }
    names = list(runners) if suite == "all" else [suite]
    return [{"name": name, "checks": runners[name](config, table)} for name in names]


# ---------------------------------------------------------------------------
# lattice report
# ---------------------------------------------------------------------------

def lattice_report(config: RunConfig, table: EtaRTable) -> dict:
    p = config.p
    q = config.q if config.q is not None else topological_generator(p)
    N = config.window
    sg, cert = sg_window(p, N, q=q, caps=config.caps, margin=config.margin)
    diagonal = {}
    inclusion = True
    gaps = {}
    for n in config.heights:
        lat = diagonal_window_lattice(N, n, table, caps=config.caps, q=q)
        diagonal[str(n)] = list(lat.elementary_divisors)
        ok = all(sg_membership(col, lat) is not None for col in sg.basis)
        inclusion = inclusion and ok
        gaps[str(n)] = (
            sg.colength() - lat.colength() if ok and sg.rank == lat.rank else None
        )
    return {
        "sg": list(sg.elementary_divisors),
        "diagonal": diagonal,
        "inclusion": inclusion,
        "gap": gaps,
        "stabilization": {
            "q": cert.q,
            "m_cap": cert.m_cap,
            "s_cap": cert.s_cap,
            "margin": cert.margin,
            "last_changed_a": cert.last_changed_a,
            "stopped_at_a": cert.stopped_at_a,
        },
    }


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section", "name", "id", "status", "witness"])
        for key, value in report["config"].items():
            writer.writerow(["config", key, "", "", json.dumps(value)])
        for suite in report["suites"]:
            for check in suite["checks"]:
                writer.writerow(
                    ["suite", suite["name"], check["id"], check["status"],
                     check["witness"]]
                )
        if report.get("lattices"):
            lat = report["lattices"]
            writer.writerow(["lattice", "S_g", "divisors", "", json.dumps(lat["sg"])])
            for n, div in lat["diagonal"].items():
                writer.writerow(
                    ["lattice", f"diagonal/n={n}", "divisors", "", json.dumps(div)]
                )
            writer.writerow(
                ["lattice", "inclusion", "",
                 "PASS" if lat["inclusion"] else "FAIL", json.dumps(lat["gap"])]
            )
        return buf.getvalue()

    lines = ["# bpcentre report", "", "## configuration", ""]
    for key, value in report["config"].items():
        lines.append(f"- {key}: {json.dumps(value)}")
    if "cache" in report:
        lines += ["", "## cache", ""]
        for key, value in report["cache"].items():
            lines.append(f"- {key}: {value}")
    for suite in report["suites"]:
        lines += ["", f"## suite: {suite['name']}", "",
                  "| check | status | witness |", "| --- | --- | --- |"]
        for check in suite["checks"]:
            witness = check["witness"].replace("|", "\\|")
            lines.append(f"| {check['id']} | {check['status']} | {witness} |")
    if report.get("lattices"):
        lat = report["lattices"]
        lines += ["", "## lattices", ""]
        lines.append(f"- S_g elementary divisors (p-exponents): {lat['sg']}")
        for n, div in lat["diagonal"].items():
            lines.append(f"- diagonal window divisors at height {n}: {div}")
        lines.append(
            f"- inclusion S_g in diagonal: "
            f"{'PASS' if lat['inclusion'] else 'FAIL'}"
        )
        lines.append(f"- gap colength by height: {json.dumps(lat['gap'])}")
        lines.append(f"- stabilization: {json.dumps(lat['stabilization'])}")
    if "eta" in report:
        lines += ["", "## right unit on the generators", ""]
        for row in report["eta"]:
            lines.append(f"- eta_R(v_{row['index']}) = {row['value']}")
        lines += ["", "## per-weight statistics", "",
                  "| weight | monomials | terms | max coefficient valuation |",
                  "| --- | --- | --- | --- |"]
        for row in report["weights"]:
            lines.append(
                f"| {row['weight']} | {row['monomials']} | {row['terms']} "
                f"| {row['max_coeff_val']} |"
            )
    return "\n".join(lines) + "\n"


def overall_status(report: dict) -> int:
    for suite in report.get("suites", ()):
        for check in suite["checks"]:
            if check["status"] != "PASS":
                return 1
    lattices = report.get("lattices")
    if lattices is not None and not lattices.get("inclusion", True):
        return 1
    return 0


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eta_table(config: RunConfig) -> int:
    try:
        table, status = load_or_build_table(config)
    except IntegralityError as exc:
        sys.stdout.write(f"FAIL integrality: {exc}\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stdout.write(f"FAIL cache: {exc}\n")
        return 1
    weights = []
    for r in range(config.max_weight + 1):
        gammas = enumerate_weight(r, config.p)
        terms = 0
        max_val = 0
        for gamma in gammas:
            poly = table.eta(gamma)
            terms += len(poly.terms)
            for c in poly.terms.values():
                v = valuation(c, config.p)
                if v != float("inf"):
                    max_val = max(max_val, v)
        weights.append(
            {"weight": r, "monomials": len(gammas), "terms": terms,
             "max_coeff_val": max_val}
        )
    eta_rows = [
        {"index": k, "value": str(table.eta(unit_exp(k)))}
        for k in range(1, max_generator_index(config.max_weight, config.p) + 1)
    ]
    report = {
        "config": config.as_dict(),
        "cache": {
            "path": config.cache_path(),
            "status": status,
            "fingerprint": table.fingerprint(),
        },
        "suites": [],
        "lattices": None,
        "eta": eta_rows,
        "weights": weights,
    }
    sys.stdout.write(render_report(report, config.fmt))
    return 0


def cmd_verify(config: RunConfig, suite: str) -> int:
    try:
        table, status = load_or_build_table(config)
    except (IntegralityError, ValueError, OSError) as exc:
        sys.stdout.write(f"FAIL cache: {exc}\n")
        return 1
    suites = run_suites(config, table, suite)
    lattices = None
    report = {
        "config": config.as_dict(),
        "cache": {
            "path": config.cache_path(),
            "status": status,
            "fingerprint": table.fingerprint(),
        },
        "suites": suites,
        "lattices": lattices,
    }
    sys.stdout.write(render_report(report, config.fmt))
    return overall_status(report)


def cmd_lattices(config: RunConfig) -> int:
    try:
        table, status = load_or_build_table(config)
    except (IntegralityError, ValueError, OSError) as exc:
        sys.stdout.write(f"FAIL cache: {exc}\n")
        return 1
    try:
        lattices = lattice_report(config, table)
    except StabilizationError as exc:
        sys.stdout.write(f"FAIL stabilization: {exc}\n")
        return 1
    report = {
        "config": config.as_dict(),
        "cache": {
            "path": config.cache_path(),
            "status": status,
            "fingerprint": table.fingerprint(),
        },
        "suites": [],
        "lattices": lattices,
    }
    sys.stdout.write(render_report(report, config.fmt))
    return overall_status(report)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    parser.add_argument("--max-weight", type=int, default=13,
                        help="weight bound for the right-unit table")
    parser.add_argument("--heights", type=str, default="1,2",
                        help="comma-separated truncation heights")
    parser.add_argument("--N", type=int, default=None, dest="window",
                        help="window bound for the lattices (default min(5, max-weight))")
    parser.add_argument("--q", type=int, default=None,
                        help="override the topological generator")
    parser.add_argument("--cache", type=str, default=None,
                        help=f"cache directory (or ${CACHE_ENV_VAR})")
    parser.add_argument("--format", type=str, default="markdown",
                        choices=("json", "csv", "markdown"))
    parser.add_argument("--caps", type=str, default=None,
                        help="generator caps as M,S for the Adams span")
    parser.add_argument("--margin", type=int, default=4,
                        help="stabilization margin for the Adams span")


def build_config(args: argparse.Namespace) -> RunConfig:
    try:
        heights = tuple(int(x) for x in args.heights.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad heights {args.heights!r}") from exc
    caps = None
    if args.caps is not None:
        try:
            m_cap, s_cap = (int(x) for x in args.caps.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad caps {args.caps!r}; expected M,S") from exc
        caps = (m_cap, s_cap)
    cache_dir = args.cache or os.environ.get(CACHE_ENV_VAR) or ".bpcentre-cache"
    window = args.window if args.window is not None else min(5, args.max_weight)
    return RunConfig(
        p=args.p,
        max_weight=args.max_weight,
        heights=heights,
        window=window,
        q=args.q,
        cache_dir=cache_dir,
        fmt=args.format,
        caps=caps,
        margin=args.margin,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bpcentre",
        description="Exact verification of degreewise operation algebra "
                    "on p-local bordism-type theories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eta = sub.add_parser("eta-table", help="build and persist the right-unit cache")
    _add_common(p_eta)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=SUITES)
    _add_common(p_verify)

    p_lat = sub.add_parser("lattices", help="compute and compare window lattices")
    _add_common(p_lat)

    args = parser.parse_args(argv)
    try:
        config = build_config(args)
    except ConfigError as exc:
        parser.error(str(exc))  # exits with code 2

    if args.command == "eta-table":
        return cmd_eta_table(config)
    if args.command == "verify":
        return cmd_verify(config, args.suite)
    return cmd_lattices(config)


if __name__ == "__main__":
    sys.exit(main())
