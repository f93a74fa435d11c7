"""Command-line front end: subcommands, config, JSON reports, place cache."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

from .base import (
    MAX_PLACE_DEGREE,
    Place,
    enumerate_places,
    field_of_order,
    format_polynomial,
    parse_polynomial,
    read_place_cache,
    write_place_cache,
)
from .errors import ConfigError, FfmcError
from .geom import DEFAULT_COUNT_CAP, SuperellipticCurve, zeta_numerator
from .lfun import TruncationSpec, functional_equation_check, l_function
from .mc_verify import _jsonable, load_scenario, run_scenario
from .motives import (
    duality_order_check,
    motive_torsion,
    tower_compatibility_check,
)
from .reps import kummer_character


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class Config:
    max_place_degree: int = MAX_PLACE_DEGREE
    count_cap: int = DEFAULT_COUNT_CAP
    workers: int = 1
    cache_dir: str = ""
    output: str = "json"

    def __post_init__(self):
        if min(self.max_place_degree, self.count_cap, self.workers) < 1:
            raise ConfigError("resource caps must be positive")
        if self.output not in ("json", "pretty"):
            raise ConfigError(f"unknown output format {self.output!r}")


_CONFIG_KEYS = {"max_place_degree", "count_cap", "workers", "cache_dir",
                "output"}


def load_config(path: str | None) -> Config:
    """Config from TOML (strict keys), with FFMC_CACHE_DIR overriding."""
    data = {}
    if path is not None:
        try:
            import tomllib
        except ImportError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"invalid config {path}: {e}") from None
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = Config(**data)
    env_cache = os.environ.get("FFMC_CACHE_DIR")
    if env_cache:
        cfg = replace(cfg, cache_dir=env_cache)
    return cfg


# ---------------------------------------------------------------------------
# place cache round-trip


def cache_roundtrip(path: str, field=None, max_degree: int = 3):
    """Enumerate, persist, re-read and re-enumerate; all four must agree.

    Returns (ok, diagnostic).  A missing file is regenerated transparently;
    a corrupted one fails with the reader's diagnostic.
    """
    if field is None:
        field = field_of_order(3)
    try:
        fresh = enumerate_places(field, max_degree)
        if not os.path.exists(path):
            write_place_cache(path, field, fresh)
        cached = read_place_cache(path, field)
        again = enumerate_places(field, max_degree)
        if cached != fresh or again != fresh:
            return False, "cache contents differ from fresh enumeration"
        # byte-exactness: rewriting must reproduce the file exactly
        with open(path, "r", encoding="utf-8") as fh:
            before = fh.read()
        write_place_cache(path, field, fresh)
        with open(path, "r", encoding="utf-8") as fh:
            after = fh.read()
        if before != after:
            return False, "cache file is not byte-stable under rewrite"
        return True, f"{len(fresh)} places round-tripped via {path}"
    except OSError as e:
        return False, f"cache I/O failed for {path}: {e}"
    except (ConfigError, ValueError) as e:
        return False, str(e)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (exit_code, report dict)


def _parse_place_list(field, text: str) -> tuple[Place, ...]:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token in ("inf", "infinity", "oo"):
            out.append(Place.infinity(field))
        else:
            poly = parse_polynomial(token, field)
            out.append(Place.finite(poly.monic()))
    return tuple(out)


def _truncation(field, args) -> TruncationSpec:
    sigma_w = _parse_place_list(field, args.sigma_w) if args.sigma_w else ()
    sigma_v = _parse_place_list(field, args.sigma_v) if args.sigma_v else ()
    return TruncationSpec(tuple(sigma_w), tuple(sigma_v))


def _cmd_places(args, cfg: Config):
    field = field_of_order(args.q)
    max_deg = min(args.max_deg, cfg.max_place_degree)
    if args.cache_roundtrip:
        cache_dir = cfg.cache_dir or "."
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"places_q{args.q}_d{max_deg}.txt")
        ok, diag = cache_roundtrip(path, field, max_deg)
        return (0 if ok else 1), {"check": "cache_roundtrip",
                                  "ok": ok, "diagnostic": diag}
    places = enumerate_places(field, max_deg)
    listed = ["inf" if v.is_infinity else format_polynomial(v.poly)
              for v in places]
    return 0, {"q": args.q, "max_degree": max_deg,
               "count": len(places), "places": listed}


def _cmd_lfun(args, cfg: Config):
    field = field_of_order(args.q)
    f = parse_polynomial(args.kummer_f, field)
    chi = kummer_character(f, args.m, power=args.power)
    spec = _truncation(field, args)
    L = l_function(chi, spec, workers=cfg.workers)
    report = {"q": args.q, "f": format_polynomial(f), "m": args.m,
              "power": args.power, "character": chi.name,
              "numerator": [_cyc_repr(c) for c in L.num],
              "denominator_atoms": [[_cyc_repr(b), d]
                                    for b, d in L.den_atoms]}
    if args.check_fe:
        Ldual = l_function(chi.inverse(), spec.swapped(), workers=cfg.workers)
        fe = functional_equation_check(L, Ldual, field.q)
        report["fe_ok"] = fe.ok
        if fe.epsilon is not None:
            report["epsilon"] = repr(fe.epsilon)
        return (0 if fe.ok else 1), report
    return 0, report


def _cyc_repr(c):
    return c.to_int() if c.is_rational() else repr(c)


def _cmd_zeta(args, cfg: Config):
    field = field_of_order(args.q)
    f = parse_polynomial(args.f, field)
    curve = SuperellipticCurve(field, args.m, f)
    data = zeta_numerator(curve, cap=cfg.count_cap)
    return 0, {"q": args.q, "m": args.m, "f": format_polynomial(f),
               "genus": curve.genus, "counts": list(data.counts),
               "P": list(data.P), "h": data.h}


def _cmd_motive(args, cfg: Config):
    field = field_of_order(args.q)
    z1 = _parse_place_list(field, args.z1)
    z2 = _parse_place_list(field, args.z2)
    mt = motive_torsion(z1, z2, args.n)
    duality = duality_order_check(z1, z2, args.n)
    tower_ok = True
    n = args.n
    ell = 2
    while n > 1:  # one tower check per prime factor of n
        if n % ell == 0:
            e = 0
            while n % ell == 0:
                n //= ell
                e += 1
            tower_ok = tower_ok and tower_compatibility_check(z1, z2, ell, e)
        ell += 1
    ok = duality.ok and tower_ok
    report = {"Z1": [repr(v) for v in mt.z1], "Z2": [repr(v) for v in mt.z2],
              "n": mt.n, "order": mt.order,
              "frobenius_matrix": [list(row) for row in mt.frobenius],
              "tower_ok": tower_ok, "duality_ok": duality.ok}
    return (0 if ok else 1), report


def _cmd_verify(args, cfg: Config):
    scenario = load_scenario(args.scenario)
    scenario = replace(scenario, workers=cfg.workers,
                       count_cap=min(scenario.count_cap, cfg.count_cap))
    report = run_scenario(scenario)
    print(f"verify: {scenario.name} in {report.elapsed:.2f}s",
          file=sys.stderr)
    return (0 if report.passed else 1), report.to_dict()


# ---------------------------------------------------------------------------
# argument parsing and entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors through exit code 2
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ffmc",
                     description="L-functions and class-number towers "
                                 "over rational function fields")
    parser.add_argument("--config", help="TOML configuration file")
    parser.add_argument("--output", choices=["json", "pretty"],
                        help="report format (default json)")
    parser.add_argument("--workers", type=int, help="worker thread count")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("places", help="enumerate places of P^1")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--cache-roundtrip", action="store_true",
                   help="persist and re-read through the cache directory")

    p = sub.add_parser("lfun", help="Kummer character L-polynomial")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kummer-f", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--sigma-w", help="comma-separated truncation places")
    p.add_argument("--sigma-v", help="comma-separated modification places")
    p.add_argument("--check-fe", action="store_true")

    p = sub.add_parser("zeta", help="zeta numerator of a superelliptic curve")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--f", required=True)

    p = sub.add_parser("motive", help="Picard 1-motive torsion report")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--z1", required=True, help="comma-separated places")
    p.add_argument("--z2", required=True, help="comma-separated places")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run a scenario file")
    p.add_argument("scenario", help="TOML scenario path")
    return parser


_HANDLERS = {"places": _cmd_places, "lfun": _cmd_lfun, "zeta": _cmd_zeta,
             "motive": _cmd_motive, "verify": _cmd_verify}


def run(argv=None) -> int:
    """Dispatch a command line; report on stdout, diagnostics on stderr."""
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        if args.output:
            cfg = replace(cfg, output=args.output)
        if args.workers:
            cfg = replace(cfg, workers=args.workers)
        code, report = _HANDLERS[args.command](args, cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FfmcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    payload = _jsonable(report)
    if cfg.output == "pretty":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
