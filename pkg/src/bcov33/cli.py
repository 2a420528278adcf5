"""Command-line driver: fan construction, Euler characteristics, series, and the full check."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from datetime import datetime, timezone

log = logging.getLogger("bcov33")

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    order: int = 12
    guard: int = 64
    threads: int = 1
    out: str | None = None
    exact_holo: bool = False
    check_saturation: bool = True
    point_semantics: str = "error"

    def __post_init__(self):
        if self.order < 4:
            raise ValueError("series order must be at least 4")
        if self.guard < 16:
            raise ValueError("Laurent guard must be at least 16")
        if self.threads < 1:
            raise ValueError("thread count must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {}
        if getattr(args, "config", None):
            with open(args.config) as fh:
                values.update(json.load(fh))
        for f in fields(cls):
            v = getattr(args, f.name, None)
            if v is not None:
                values[f.name] = v
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown configuration keys {sorted(unknown)}")
        return cls(**values)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def cmd_fan(args, cfg: RunConfig) -> int:
    from .lattice_fan import Fan, FanError, build_fan_pi, certify_pi

    if args.action == "build":
        fan = build_fan_pi()
        _emit(fan.to_json(), cfg.out or "-")
        return EXIT_PASS
    if args.input:
        with open(args.input) as fh:
            data = json.load(fh)
        try:
            fan = Fan.from_json(data)
        except (FanError, KeyError, TypeError, ValueError) as exc:
            log.error("invalid fan file: %s", exc)
            return EXIT_FAIL
    else:
        fan = build_fan_pi()
    try:
        cert = certify_pi(fan)
    except (FanError, ValueError, ArithmeticError) as exc:
        log.error("fan check failed: %s", exc)
        return EXIT_FAIL
    ok = cert["rays"] == 110 and cert["maximal_cones"] == 1458 and all(
        v for v in cert.values() if isinstance(v, bool))
    if args.json:
        _emit({**cert, "status": "PASS" if ok else "FAIL"}, cfg.out)
    else:
        print(f"{cert['rays']} rays, {cert['maximal_cones']} maximal cones")
    if not ok:
        log.error("fan check failed: %s", {k: v for k, v in cert.items() if v is False})
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_chi(args, cfg: RunConfig) -> int:
    if args.kind == "top":
        from .euler_top import total_chi_Y0

        res = total_chi_Y0(check_saturation=cfg.check_saturation, workers=cfg.threads,
                           point_semantics=cfg.point_semantics)
        if not args.strata:
            res.pop("strata")
        _emit(res, cfg.out)
        return EXIT_PASS if res["total"] == 192 else EXIT_FAIL
    from .euler_holo import holo_suite

    res = holo_suite(guard=cfg.guard, exact_check=cfg.exact_holo)
    _emit(res, cfg.out)
    expected = {"chi_O": 1, "chi_mL1": 0, "chi_mL2": 0, "chi_mL1mL2": 1, "chi_W0": 2}
    return EXIT_PASS if all(res[k] == v for k, v in expected.items()) else EXIT_FAIL


def cmd_series(args, cfg: RunConfig) -> int:
    from .series_engine import series_report

    res = series_report(cfg.order)
    _emit(res, cfg.out)
    return EXIT_PASS if all(res["checks"].values()) else EXIT_FAIL


def cmd_gw(args, cfg: RunConfig) -> int:
    from .gw_b_model import n1_invariants

    res = n1_invariants(cfg.order)
    _emit(res.to_json(), cfg.out)
    return EXIT_PASS


def cmd_verify(args, cfg: RunConfig) -> int:
    from .ledger import verify_bcov

    report = verify_bcov(order=cfg.order, guard=cfg.guard, workers=cfg.threads)
    payload = report.to_json()
    payload["config"] = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    payload["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _emit(payload, cfg.out)
    if not report.passed:
        log.error("FAIL at %s", report.first_failure.name)
        return EXIT_FAIL
    log.info("PASS")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--threads", type=int, default=None, help="worker processes")
    common.add_argument("--out", default=None, help="output path ('-' for stdout)")
    common.add_argument("--json", action="store_true", help="structured output where text is the default")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bcov33", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fan", parents=[common], help="build or validate the fan Pi")
    f.add_argument("action", choices=["build", "check"])
    f.add_argument("--in", dest="input", help="fan JSON to validate (default: rebuild)")
    f.set_defaults(func=cmd_fan)

    c = sub.add_parser("chi", parents=[common], help="Euler characteristics")
    c.add_argument("kind", choices=["top", "holo"])
    c.add_argument("--guard", type=int, default=None)
    c.add_argument("--exact-holo", dest="exact_holo", action="store_const", const=True, default=None,
                   help="also compare every chart with its exact rational expansion")
    c.add_argument("--no-saturation-check", dest="check_saturation", action="store_const", const=False,
                   default=None)
    c.add_argument("--point-strata", dest="point_semantics", choices=["error", "zero", "one"], default=None)
    c.add_argument("--strata", action="store_true", help="include per-stratum records")
    c.set_defaults(func=cmd_chi)

    s = sub.add_parser("series", parents=[common], help="Picard-Fuchs series tables")
    s.add_argument("--order", type=int, default=None)
    s.set_defaults(func=cmd_series)

    g = sub.add_parser("gw", parents=[common], help="genus-one invariants N_1^d")
    g.add_argument("--order", type=int, default=None)
    g.set_defaults(func=cmd_gw)

    v = sub.add_parser("verify", parents=[common], help="run the full pipeline")
    v.add_argument("target", choices=["all"])
    v.add_argument("--order", type=int, default=None)
    v.add_argument("--guard", type=int, default=None)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except Exception as exc:  # internal error
        log.exception("internal error: %s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
