"""Command-line interface: JSON on stdout, progress and errors on stderr.

Exit status: 0 success, 1 computation error (or a failed verification),
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path

from .chars import make_character
from .context import default_form
from .policy import EPS_FLOOR, PrecisionPolicy, TruncationError

SCHEMA = 1
log = logging.getLogger("shiftconv")


class UsageError(Exception):
    pass


@dataclass
class Config:
    level: int = 11
    char_index: int = 2
    epsilon: float = 1e-14
    c_max: int = 1100
    q_max: int = 2_000_000

    def policy(self) -> PrecisionPolicy:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            p = PrecisionPolicy(epsilon_abs=self.epsilon, cutoff_csum=self.c_max, cutoff_qseries=self.q_max)
        for w in caught:
            log.warning("%s", w.message)
        return p


_CASTS = {f.name: f.type for f in fields(Config)}


def load_config(path: str | Path | None, overrides: dict | None = None) -> Config:
    """Read flat ``key=value`` lines (``#`` comments allowed), then apply the
    non-None ``overrides``. A missing file falls back to the defaults."""
    values: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            log.warning("config file %s not found; using defaults", p)
        else:
            for lineno, raw in enumerate(p.read_text().splitlines(), 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{p}:{lineno}: malformed line {raw!r} (expected key=value)")
                key, val = (part.strip() for part in line.split("=", 1))
                if key not in _CASTS:
                    raise UsageError(f"{p}:{lineno}: unknown key {key!r}")
                values[key] = _cast(key, val, f"{p}:{lineno}")
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    cfg = Config(**values)
    if cfg.epsilon < EPS_FLOOR:
        log.warning("epsilon %.3g below the double-precision floor; clamped to %.0e", cfg.epsilon, EPS_FLOOR)
        cfg.epsilon = EPS_FLOOR
    return cfg


def _cast(key, val, where):
    typ = _CASTS[key]
    try:
        return int(val) if typ in (int, "int") else float(val)
    except ValueError:
        raise UsageError(f"{where}: bad value {val!r} for {key}") from None


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def cx(v) -> list[float]:
    v = complex(v)
    return [v.real, v.imag]


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeffs(args, cfg):
    a = _form(cfg).upto(args.upto)
    vals = [int(a.coeffs[n]) for n in range(1, args.upto + 1)]
    if args.format == "csv":
        sys.stdout.write(a.to_csv().split("\n", 1)[0] + "\n")
        for n, v in enumerate(vals, 1):
            sys.stdout.write(f"{n},{v}\n")
        return None
    return {"level": a.level, "source": a.source, "coefficients": vals}


def cmd_lambda_twist(args, cfg):
    from .lfun import TwistParams, lambda_twist_detailed

    res = lambda_twist_detailed(_form(cfg), TwistParams(args.t, args.d, args.c), cfg.policy())
    return {"t": cx(args.t), "c": args.c, "d": args.d, "lambda": cx(res.value), "err_est": res.err_est,
            "truncation": {"terms": res.terms}}


def cmd_kloosterman(args, cfg):
    from .eisenstein import kloosterman_chi, kloosterman_star

    chi = _chi(cfg)
    if args.star:
        val = kloosterman_star(args.n, args.m, chi, args.c, cfg.policy(), _form(cfg))
    else:
        val = kloosterman_chi(args.n, args.m, chi, args.c)
    return {"n": args.n, "m": args.m, "c": args.c, "star": args.star, "value": cx(val)}


def cmd_eisenstein_coeff(args, cfg):
    from . import eisenstein as eis

    chi = _chi(cfg)
    policy = cfg.policy()
    s = args.s
    if args.series == "classical":
        if args.route == "csum":
            r = eis.phi_classical(args.n, s, chi, eis.KLOOSTERMAN_SUM, policy, args.c_max_index)
        elif args.route == "closed":
            r = eis.phi_classical(args.n, s, chi, eis.CLOSED_FORM, policy)
        else:
            r = eis.phi_classical_extract(args.n, s, chi, args.y, args.nodes, cfg.c_max, policy)
    else:
        if args.route == "closed":
            raise UsageError("the starred series has no closed-form route here; use csum or extract")
        if args.route == "csum":
            r = (eis.phi_star(args.n, s, chi, policy, cfg.c_max) if args.n
                 else eis.phi_star_constant(s, chi, policy, cfg.c_max))
        else:
            r = eis.phi_star_extract(args.n, s, chi, args.y, args.nodes, cfg.c_max, policy)
    out = r.to_json()
    out["series"] = args.series
    return out


def cmd_shifted_sum(args, cfg):
    from .convolution import ConvolutionQuery, L_weighted, dds_csum, dds_direct

    chi = _chi(cfg)
    policy = cfg.policy()
    a = _form(cfg)
    if args.x is not None:
        if args.t != 1:
            raise UsageError("--x computes the t = 1 weighted sum; drop --t")
        res = L_weighted(args.n, args.x, args.s, a, chi, policy, cfg.c_max, detailed=True)
        route = "csum+tail"
        meta = {"c_max": cfg.c_max, "tail_terms": res.terms}
    else:
        q = ConvolutionQuery(args.n, args.s, args.t)
        if args.route == "direct":
            res = dds_direct(q, a, chi, policy, detailed=True)
        else:
            res = dds_csum(q, a, chi, policy, cfg.c_max, detailed=True)
        route = args.route
        meta = {k: v for k, v in res.meta.items() if k in ("c_max", "M", "K")}
    out = {"n": args.n, "s": cx(args.s), "t": cx(args.t), "value": cx(res.value), "err_est": res.err_est,
           "route": route, "truncation": meta}
    if args.x is not None:
        out["x"] = cx(args.x)
    return out


def cmd_verify(args, cfg):
    from .verify import run_suite

    log.info("running suite %s", args.suite)
    reports = run_suite(args.suite, cfg.policy())
    for r in reports:
        log.info("%-4s %s", r.status, r.identity_id)
    ok = all(r.passed for r in reports)
    return {"suite": args.suite, "passed": ok, "reports": [r.to_json() for r in reports]}, (0 if ok else 1)


def _form(cfg):
    if cfg.level != 11:
        raise ValueError(f"no built-in newform at level {cfg.level}; only level 11 is available")
    return default_form()


def _chi(cfg):
    return make_character(cfg.level, cfg.char_index)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key=value file (level, char_index, epsilon, c_max, q_max)")
    common.add_argument("--level", type=int)
    common.add_argument("--char-index", dest="char_index", type=int)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--c-max", dest="c_max", type=int, help="largest modulus in c-sums")
    common.add_argument("--q-max", dest="q_max", type=int, help="q-expansion term cap")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="shiftconv", description=__doc__.split("\n")[0], parents=[common],
                                allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", parents=[common], allow_abbrev=False, help="Fourier coefficients a(1..n) of the level-11 newform")
    c.add_argument("--upto", type=int, required=True)
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.set_defaults(func=cmd_coeffs)

    c = sub.add_parser("lambda-twist", parents=[common], allow_abbrev=False, help="Lambda(f, t, -d/c)")
    c.add_argument("--t", type=parse_complex, required=True)
    c.add_argument("--c", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.set_defaults(func=cmd_lambda_twist)

    c = sub.add_parser("kloosterman", parents=[common], allow_abbrev=False, help="twisted Kloosterman sum S or S*")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, default=0)
    c.add_argument("--c", type=int, required=True)
    c.add_argument("--star", action="store_true", help="weight by modular symbols")
    c.set_defaults(func=cmd_kloosterman)

    c = sub.add_parser("eisenstein-coeff", parents=[common], allow_abbrev=False, help="Fourier coefficient of E or E*")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--s", type=parse_complex, required=True)
    c.add_argument("--route", choices=["csum", "extract", "closed"], default="csum")
    c.add_argument("--series", choices=["star", "classical"], default="star")
    c.add_argument("--y", type=float, default=0.5, help="height for extraction")
    c.add_argument("--nodes", type=int, default=64)
    c.add_argument("--c-max-index", dest="c_max_index", type=int, default=2000,
                   help="classical c-sum: number of moduli N c")
    c.set_defaults(func=cmd_eisenstein_coeff)

    c = sub.add_parser("shifted-sum", parents=[common], allow_abbrev=False, help="shifted convolution sum")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--s", type=parse_complex, required=True)
    c.add_argument("--t", type=parse_complex, default=1 + 0j)
    c.add_argument("--x", type=parse_complex)
    c.add_argument("--route", choices=["direct", "csum"], default="csum")
    c.set_defaults(func=cmd_shifted_sum)

    c = sub.add_parser("verify", parents=[common], allow_abbrev=False, help="run identity checks")
    c.add_argument("--suite", default="all")
    c.set_defaults(func=cmd_verify)
    return p


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(getattr(args, "config", None), {k: getattr(args, k, None) for k in _CASTS})
        result = args.func(args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except KeyError as e:
        print(f"usage error: {e.args[0] if e.args else e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, TruncationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    if result is not None:
        doc = {"schema": SCHEMA, "command": args.command, "config": _config_json(cfg)}
        doc.update(result)
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    return code


def _config_json(cfg: Config) -> dict:
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)}


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
