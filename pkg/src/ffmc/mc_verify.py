"""Main-conjecture verification scenarios.

Each verification pits an analytic side (Euler products from `lfun`)
against an algebraic side (point counts and class numbers from `geom`),
layer by layer along the constant-field tower F_{q^(l^k)}.  The two
sides share no code below this module, so agreement is a genuine
cross-check rather than an identity.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .base import (
    FqPolynomial,
    Place,
    finite_field,
    format_polynomial,
    parse_polynomial,
)
from .cyclotomic import Cyc, _int_poly_exact_div, _int_poly_mul
from .errors import ConfigError, InternalCountError
from .geom import (
    DEFAULT_COUNT_CAP,
    SuperellipticCurve,
    artin_factorization_check,
    base_change_curve,
    base_change_numerator,
    evaluate_at_one,
    zeta_numerator,
)
from .lfun import (
    LPolynomial,
    TruncationSpec,
    assemble_ncl,
    cpoly_eval,
    functional_equation_check,
    interpolation_check,
    l_function,
    swap_product_is_one,
)
from .reps import CharacterRep, kummer_group, trivial_character


# ---------------------------------------------------------------------------
# scenario description


@dataclass(frozen=True)
class Scenario:
    """One verification run: a Kummer cover with an l-adic constant tower."""

    q: int
    f: FqPolynomial
    m: int
    ell: int
    N: int
    M: int
    spec: TruncationSpec = dc_field(default_factory=TruncationSpec.empty)
    checks: tuple[str, ...] = ("artin", "class_tower", "selmer", "fe")
    interpolation: tuple[tuple[int, int], ...] = ()  # (chi_index, psi_order)
    count_cap: int = DEFAULT_COUNT_CAP
    workers: int = 1
    name: str = "scenario"

    def __post_init__(self):
        if self.q % self.ell == 0:
            raise ConfigError(f"ell = {self.ell} must not divide q = {self.q}")
        if (self.q - 1) % self.m:
            raise ConfigError(f"m = {self.m} must divide q - 1 = {self.q - 1}")
        if self.N < 1 or self.M < 0 or self.workers < 1:
            raise ConfigError("N >= 1, M >= 0 and workers >= 1 required")

    @property
    def field(self):
        return self.f.field

    def curve(self) -> SuperellipticCurve:
        return SuperellipticCurve(self.field, self.m, self.f)


_SCENARIO_SECTIONS = {"base": {"q", "f", "m", "ell", "N", "M"},
                      "truncation": {"sigma_w", "sigma_v"},
                      "checks": {"class_tower", "selmer", "fe", "artin",
                                 "interpolation"},
                      "limits": {"count_cap", "workers"}}


def _parse_place(field, text: str) -> Place:
    if text.strip() in ("inf", "infinity", "oo"):
        return Place.infinity(field)
    poly = parse_polynomial(text, field)
    if not poly.is_monic() or not poly.is_irreducible():
        raise ConfigError(f"place polynomial {text!r} is not monic irreducible")
    return Place.finite(poly)


def scenario_from_dict(data: dict, name: str = "scenario") -> Scenario:
    """Build a Scenario from parsed TOML, rejecting unknown keys."""
    for section, keys in data.items():
        if section not in _SCENARIO_SECTIONS:
            raise ConfigError(f"unknown scenario section [{section}]")
        if not isinstance(keys, dict):
            raise ConfigError(f"section [{section}] must be a table")
        unknown = set(keys) - _SCENARIO_SECTIONS[section]
        if unknown:
            raise ConfigError(
                f"unknown keys in [{section}]: {sorted(unknown)}")
    base = data.get("base", {})
    for key in ("q", "f", "m", "ell", "N", "M"):
        if key not in base:
            raise ConfigError(f"missing required key [base].{key}")
    try:
        fld = finite_field(int(base["q"]))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    f = parse_polynomial(str(base["f"]), fld)
    trunc = data.get("truncation", {})
    sigma_w = tuple(_parse_place(fld, s) for s in trunc.get("sigma_w", []))
    sigma_v = tuple(_parse_place(fld, s) for s in trunc.get("sigma_v", []))
    checks_tab = data.get("checks", {})
    checks = tuple(k for k in ("artin", "class_tower", "selmer", "fe")
                   if checks_tab.get(k, True))
    interp = tuple((int(e["chi_index"]), int(e["psi_order"]))
                   for e in checks_tab.get("interpolation", []))
    limits = data.get("limits", {})
    try:
        return Scenario(
            q=int(base["q"]), f=f, m=int(base["m"]), ell=int(base["ell"]),
            N=int(base["N"]), M=int(base["M"]),
            spec=TruncationSpec(sigma_w, sigma_v),
            checks=checks, interpolation=interp,
            count_cap=int(limits.get("count_cap", DEFAULT_COUNT_CAP)),
            workers=int(limits.get("workers", 1)), name=name)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def load_scenario(path: str) -> Scenario:
    try:
        import tomllib
    except ImportError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"invalid scenario file {path}: {e}") from None
    import os
    return scenario_from_dict(data, os.path.splitext(os.path.basename(path))[0])


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "detail": _jsonable(self.detail)}


def _jsonable(value):
    """JSON-safe copy with all integers rendered as decimal strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class VerdictReport:
    """Outcome of a scenario run; serializes byte-identically per scenario.

    Wall-clock timing is kept on the object but deliberately excluded
    from the serialized form so reports stay reproducible bit-for-bit.
    """

    def __init__(self, scenario: Scenario, results: Sequence[CheckResult],
                 elapsed: float = 0.0):
        self.scenario = scenario
        self.results = tuple(results)
        self.elapsed = elapsed

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def merged(self, other: "VerdictReport") -> "VerdictReport":
        return VerdictReport(self.scenario, self.results + other.results,
                             self.elapsed + other.elapsed)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.name,
            "base": {"q": str(self.scenario.q),
                     "f": format_polynomial(self.scenario.f),
                     "m": str(self.scenario.m),
                     "ell": str(self.scenario.ell),
                     "N": str(self.scenario.N), "M": str(self.scenario.M)},
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))


def parallel_map(fn, items, workers: int = 1) -> list:
    """Order-preserving map, optionally on a thread pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# shared arithmetic helpers


def ell_valuation(n: int, ell: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _layer_root_product(lpolys: Sequence[LPolynomial], ell: int,
                        k: int) -> int:
    """prod over zeta^(l^k) = 1 and all given L of L(zeta), as an integer."""
    total = Cyc.from_int(1)
    for L in lpolys:
        if not L.is_polynomial:
            raise InternalCountError(
                "layer products require polynomial L-functions")
        num = list(L.num)
        for i in range(k + 1):
            d = ell ** i
            zeta = Cyc.zeta(d)
            for a in range(d):
                if math.gcd(a, d) == 1 or d == 1:
                    total = total * cpoly_eval(num, zeta ** a)
    if not total.is_rational():
        raise InternalCountError(
            f"root-of-unity layer product is not rational: {total!r}")
    return total.to_int()


def _int_poly_div_exact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of little-endian integer polys with b[0] = 1."""
    assert b[0] == 1
    ra, rb = list(reversed(a)), list(reversed(b))
    q = _int_poly_exact_div(ra, rb)
    return list(reversed(q))


def _full_l_functions(scenario: Scenario) -> list[LPolynomial]:
    """Untruncated L(chi) for the nontrivial Kummer characters."""
    group = kummer_group(scenario.f, scenario.m)
    chars = group.nontrivial()
    return parallel_map(lambda chi: l_function(chi, TruncationSpec.empty()),
                        chars, scenario.workers)


# ---------------------------------------------------------------------------
# the exceptional trivial-zero bookkeeping
#
# When Sigma_W is empty and the base field already contains mu_ell, the
# trivial character contributes rank-1 factors (1 - t) and (1 - q t) at
# every layer.  Their finite-level l-valuations below were first obtained
# by brute force (see the tests, which re-derive them that way) and are
# hard-coded here:
#   * lattice part:  v_l( prod_{zeta^(l^k)=1, zeta != 1} (1 - zeta) ) = k,
#     i.e. the valuation of l^k itself;
#   * torus part:    v_l( q^(l^k) - 1 ) = v_l(q - 1) + k for odd l, with
#     the extra v_2(q + 1) - 1 correction for l = 2, k >= 1.


def exceptional_term_triggered(scenario: Scenario) -> bool:
    return not scenario.spec.sigma_w and scenario.q % scenario.ell == 1


def exceptional_lattice_valuation(ell: int, k: int) -> int:
    return k


def exceptional_torus_valuation(q: int, ell: int, k: int) -> int:
    base = ell_valuation(q - 1, ell)
    if ell == 2 and k >= 1:
        return base + ell_valuation(q + 1, 2) + k - 1
    return base + k


# ---------------------------------------------------------------------------
# the three verification suites


def verify_class_number_tower(scenario: Scenario) -> VerdictReport:
    """l-class numbers along the constant tower vs root-of-unity L-products.

    Algebraic side: P from point counts, pushed up the tower with
    base_change_numerator, plus a raw recount of the Jacobian order where
    the counting cap allows.  Analytic side: the product of L(chi, zeta)
    over all nontrivial chi and all l^k-th roots of unity zeta.
    """
    start = time.monotonic()
    curve = scenario.curve()
    zeta = zeta_numerator(curve, cap=scenario.count_cap)
    lpolys = _full_l_functions(scenario)
    results = []

    for k in range(scenario.M + 1):
        layer = scenario.ell ** k
        h_alg = evaluate_at_one(base_change_numerator(list(zeta.P), layer))
        v_alg = ell_valuation(h_alg, scenario.ell)
        h_ana = _layer_root_product(lpolys, scenario.ell, k)
        v_ana = ell_valuation(h_ana, scenario.ell)
        detail = {"k": k, "layer": layer, "h_from_counts": h_alg,
                  "l_product": h_ana, "v_algebraic": v_alg,
                  "v_analytic": v_ana}
        # raw recount where the extension tower stays within the cap
        needed = scenario.q ** (layer * max(2 * curve.genus, 1))
        if needed <= scenario.count_cap:
            big = base_change_curve(curve, layer)
            h_raw = zeta_numerator(big, cap=scenario.count_cap).h
            detail["h_recount"] = h_raw
            recount_ok = h_raw == abs(h_alg)
        else:
            detail["h_recount"] = "skipped (counting cap)"
            recount_ok = True
        results.append(CheckResult(
            f"class_tower[k={k}]", v_alg == v_ana and recount_ok, detail))

    if exceptional_term_triggered(scenario):
        vals = [{"k": k,
                 "lattice": exceptional_lattice_valuation(scenario.ell, k),
                 "torus": exceptional_torus_valuation(
                     scenario.q, scenario.ell, k)}
                for k in range(scenario.M + 1)]
        results.append(CheckResult(
            "exceptional_term", True,
            {"triggered": True, "valuations": vals}))

    return VerdictReport(scenario, results, time.monotonic() - start)


def _quotient_numerators(scenario: Scenario) -> dict[int, list[int]]:
    """Zeta numerators of the quotient curves y^d = f for each d | m."""
    out = {}
    for d in range(1, scenario.m + 1):
        if scenario.m % d == 0:
            quotient = SuperellipticCurve(scenario.field, d, scenario.f)
            out[d] = list(zeta_numerator(quotient, cap=scenario.count_cap).P)
    return out


def orbit_numerator(numerators: dict[int, list[int]], d: int) -> list[int]:
    """prod over chi of exact order d of L(chi), by Moebius inversion.

    The quotient-curve numerator for y^(d') = f collects the characters
    of order dividing d', so the exact-order-d package is the alternating
    product over divisors.  It always divides out to a polynomial.
    """
    from .base import moebius
    num, den = [1], [1]
    for dp, P in numerators.items():
        if d % dp:
            continue
        mu = moebius(d // dp)
        if mu == 1:
            num = _int_poly_mul(num, P)
        elif mu == -1:
            den = _int_poly_mul(den, P)
    return _int_poly_div_exact(num, den)


def verify_selmer_identity(scenario: Scenario) -> VerdictReport:
    """Eigenspace class-group valuations against per-character L-products.

    The class group splits into chi-eigenspaces (ell is prime to m).  The
    algebraic order of the order-d package comes from quotient-curve
    counting via Moebius inversion; the analytic order is the product of
    L(chi, zeta) over the characters chi of exact order d and the layer's
    roots of unity zeta.  Conjugate characters are grouped because only
    their joint package is visible to counting.
    """
    start = time.monotonic()
    numerators = _quotient_numerators(scenario)
    group = kummer_group(scenario.f, scenario.m)
    lpolys = parallel_map(
        lambda chi: l_function(chi, TruncationSpec.empty()),
        list(group)[1:], scenario.workers)
    results = []
    for d in sorted(numerators):
        if d == 1:
            continue  # the P^1 part: trivial eigenspace, nothing to compare
        q_d = orbit_numerator(numerators, d)
        orbit = [lpolys[j - 1] for j in range(1, scenario.m)
                 if scenario.m // math.gcd(j, scenario.m) == d]
        for k in range(scenario.M + 1):
            layer = scenario.ell ** k
            alg = evaluate_at_one(base_change_numerator(q_d, layer))
            v_alg = ell_valuation(alg, scenario.ell)
            ana = _layer_root_product(orbit, scenario.ell, k)
            v_ana = ell_valuation(ana, scenario.ell)
            results.append(CheckResult(
                f"selmer[d={d},k={k}]", v_alg == v_ana,
                {"d": d, "k": k, "eigenspace_order": alg,
                 "l_product": ana, "v_algebraic": v_alg,
                 "v_analytic": v_ana}))
    if not results:  # trivial Delta: the statement reduces to the tower check
        results.append(CheckResult(
            "selmer[trivial]", True,
            {"note": "trivial cover group; reduces to class_tower"}))
    return VerdictReport(scenario, results, time.monotonic() - start)


def verify_functional_equation_suite(scenario: Scenario) -> VerdictReport:
    """FE and epsilon-monomial double-swap for every cover character."""
    start = time.monotonic()
    group = kummer_group(scenario.f, scenario.m)

    def one_character(item):
        i, chi = item
        L = l_function(chi, scenario.spec)
        Ldual = l_function(chi.inverse(), scenario.spec.swapped())
        fe = functional_equation_check(L, Ldual, scenario.q)
        fe_back = functional_equation_check(Ldual, L, scenario.q)
        swap_ok = (fe.ok and fe_back.ok
                   and swap_product_is_one(fe.epsilon, fe_back.epsilon))
        detail = {"chi_index": i, "character": chi.name,
                  "fe_forward": fe.ok, "fe_backward": fe_back.ok,
                  "swap_product_one": swap_ok}
        if fe.epsilon is not None:
            detail["epsilon"] = repr(fe.epsilon)
        if fe.diagnostic:
            detail["diagnostic"] = fe.diagnostic
        return CheckResult(f"fe[chi={i}]",
                           fe.ok and fe_back.ok and swap_ok, detail)

    results = parallel_map(one_character, enumerate(group), scenario.workers)
    return VerdictReport(scenario, results, time.monotonic() - start)


def verify_artin(scenario: Scenario) -> VerdictReport:
    """Raw-count zeta numerator against the product of character L-series."""
    start = time.monotonic()
    lpolys = _full_l_functions(scenario)
    for L in lpolys:
        if not L.is_polynomial:
            raise InternalCountError("cover L-functions must be polynomials")
    check = artin_factorization_check(scenario.curve(),
                                      [list(L.num) for L in lpolys],
                                      cap=scenario.count_cap)
    result = CheckResult("artin", check.ok, {
        "p_from_counts": list(check.p_from_counts),
        "p_from_characters": list(check.p_from_characters)})
    return VerdictReport(scenario, [result], time.monotonic() - start)


def verify_interpolation(scenario: Scenario) -> VerdictReport:
    """Group-ring specializations of the assembled ncL tuple."""
    start = time.monotonic()
    group = kummer_group(scenario.f, scenario.m)
    base = trivial_character(scenario.field)
    ncl = assemble_ncl(group, base, scenario.spec, workers=scenario.workers)
    results = []
    for chi_index, psi_order in scenario.interpolation:
        if (scenario.ell ** scenario.M) % psi_order:
            raise ConfigError(
                f"psi_order {psi_order} must divide ell^M "
                f"= {scenario.ell ** scenario.M}")
        ok, detail = interpolation_check(ncl, chi_index, Cyc.zeta(psi_order),
                                         scenario.ell, scenario.N, scenario.M)
        results.append(CheckResult(
            f"interpolation[chi={chi_index},psi_order={psi_order}]", ok,
            {"chi_index": chi_index, "psi_order": psi_order, **detail}))
    return VerdictReport(scenario, results, time.monotonic() - start)


_SUITES = {
    "artin": verify_artin,
    "class_tower": verify_class_number_tower,
    "selmer": verify_selmer_identity,
    "fe": verify_functional_equation_suite,
}


def run_scenario(scenario: Scenario) -> VerdictReport:
    """Run every enabled check and merge the verdicts, in a fixed order."""
    report = VerdictReport(scenario, [])
    for name in ("artin", "class_tower", "selmer", "fe"):
        if name in scenario.checks:
            report = report.merged(_SUITES[name](scenario))
    if scenario.interpolation:
        report = report.merged(verify_interpolation(scenario))
    return report
