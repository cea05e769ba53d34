from __future__ import annotations

import argparse
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .config import RunConfig, load_config_file, resolve_config
from .errors import InvalidParameters, PadicLinvError
from .escalate import with_precision
from .fields import QuadField, build_biquad
from .lfunctions import (
    DirichletCharacter,
    gen_bernoulli,
    gen_bernoulli_padic,
    kubota_leopoldt,
    leopoldt_at_one,
)
from .linvariants import fg_check, general_regulator, report
from .localalg import build_model, dims, model_report
from .logging_utils import setup_logging
from .padic import PadicScalar, iwasawa_log, padic_exp, padic_sqrt, teichmuller
from .reproduce import CRITERIA, results_table, run_criteria
from .serde import padic_from_dict, unit_table_from_dict
from .storage import dumps, write_table_csv
from .thetaforms import class_characters, theta_qexp, up_identity_check


logger = logging.getLogger(__name__)

_CHI = re.compile(r"^(?:quad:(-?\d+)|trivial)(?:\*omega\^(-?\d+))?$")


def _config(args: argparse.Namespace) -> RunConfig:
    return resolve_config(
        args.config,
        p=getattr(args, "p", None),
        prec=args.prec,
        truncation=getattr(args, "D", None),
        mode="json" if args.json else None,
        workers=getattr(args, "workers", None),
        seed=getattr(args, "seed", None),
    )


def _emit(cfg: RunConfig, obj: Any, kind: str, human: Optional[str] = None) -> None:
    if cfg.mode == "json":
        print(dumps(obj, kind))
    else:
        print(human if human is not None else dumps(obj, kind))


def parse_character(text: str, p: Optional[int] = None) -> DirichletCharacter:
    """quad:<disc>[*omega^k] or trivial[*omega^k]."""
    m = _CHI.match(text.replace(" ", ""))
    if not m:
        raise InvalidParameters(f"cannot parse character {text!r}")
    disc = int(m.group(1)) if m.group(1) else 1
    chi = DirichletCharacter(disc, p=p)
    return chi.twist(int(m.group(2)), p) if m.group(2) else chi


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameters(f"{text!r} is not a rational number") from exc


def _parse_s(text: str, p: int, prec: int) -> PadicScalar:
    if text.endswith((".json", ".yaml", ".yml")):
        return padic_from_dict(load_config_file(Path(text)), p, prec)
    return PadicScalar.from_rational(_rational(text), p, prec)


# -- padic -------------------------------------------------------------------------


def _cmd_padic(args: argparse.Namespace) -> int:
    cfg = _config(args)
    p, prec = cfg.p, cfg.prec
    if args.op == "log":
        value = iwasawa_log(PadicScalar.from_rational(_rational(args.x), p, prec))
    elif args.op == "exp":
        value = padic_exp(PadicScalar.from_rational(_rational(args.x), p, prec))
    elif args.op == "teich":
        value = teichmuller(int(_rational(args.x)), p, prec)
    else:
        value = padic_sqrt(int(_rational(args.x)), p, prec, args.seed_root)
    _emit(cfg, value, f"padic.{args.op}", str(value))
    return 0


# -- lfun ---------------------------------------------------------------------------


def _cmd_lfun_eval(args: argparse.Namespace) -> int:
    cfg = _config(args)
    chi = parse_character(args.chi, cfg.p)

    def run(prec: int) -> PadicScalar:
        return kubota_leopoldt(chi, cfg.p, prec).evaluate(_parse_s(args.s, cfg.p, prec))

    value = with_precision(run, cfg.prec)
    _emit(cfg, {"chi": str(chi), "p": cfg.p, "s": args.s, "value": value}, "lfun.eval", f"L_p({args.s}, {chi}) = {value}")
    return 0


def _cmd_lfun_bernoulli(args: argparse.Namespace) -> int:
    cfg = _config(args)
    chi = parse_character(args.chi, cfg.p)
    value: Any = gen_bernoulli(chi, args.n) if chi.is_rational else gen_bernoulli_padic(chi, args.n, cfg.prec)
    _emit(cfg, {"chi": str(chi), "n": args.n, "value": value}, "lfun.bernoulli", f"B_{args.n},{chi} = {value}")
    return 0


def _cmd_lfun_leopoldt(args: argparse.Namespace) -> int:
    cfg = _config(args)
    chi = parse_character(args.chi)
    value = leopoldt_at_one(chi, cfg.p, cfg.prec)
    _emit(cfg, {"chi": str(chi), "p": cfg.p, "value": value}, "lfun.leopoldt", f"L_p(1, {chi}) = {value}")
    return 0


# -- linv -------------------------------------------------------------------------------


def _cmd_linv_report(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rep = with_precision(lambda prec: report(build_biquad(args.dK, args.dF, cfg.p, prec)), cfg.prec)
    lines = [
        f"H = Q(sqrt({rep.dK}), sqrt({rep.dF})), K' disc {rep.dKprime}, p = {rep.p}, prec = {rep.prec}",
        f"slope        {rep.slope}",
        f"ell_p        {rep.ell_p}",
        f"ell_minus    {rep.ell_minus}  (routes agree to {rep.route_agreement} digits)",
        f"ell_psi      {rep.ell_psi}",
    ]
    lines += [f"[{'ok' if c.passed else 'FAIL'}] {c.name} ({c.agreement} digits)" for c in rep.checks]
    _emit(cfg, rep, "linv.report", "\n".join(lines))
    return 0 if all(c.passed for c in rep.checks) else 1


def _cmd_linv_fg(args: argparse.Namespace) -> int:
    cfg = _config(args)
    result = with_precision(lambda prec: fg_check(args.dKprime, cfg.p, prec), cfg.prec)
    human = f"{result.name}: lhs {result.lhs}, rhs {result.rhs}, agreement {result.agreement} digits"
    _emit(cfg, result, "linv.fg_check", human)
    return 0 if result.passed else 1


def _cmd_linv_general(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = unit_table_from_dict(load_config_file(Path(args.units)))
    value = general_regulator(table)
    _emit(cfg, {"rows": table.n, "value": value}, "linv.general", str(value))
    return 0


# -- theta --------------------------------------------------------------------------


def _character(disc: int, index: int) -> Any:
    chars = class_characters(QuadField(disc))
    if not 0 <= index < len(chars):
        raise InvalidParameters(f"character index {index} out of range (class number {len(chars)})")
    return chars[index]


def _cmd_theta_qexp(args: argparse.Namespace) -> int:
    cfg = _config(args)
    theta = theta_qexp(_character(args.disc, args.char), args.len)
    human = " + ".join(f"({theta[n]})q^{n}" for n in range(1, min(theta.length, 12) + 1) if not theta[n].is_zero())
    _emit(cfg, theta, "theta.qexp", human + " + ...")
    return 0


def _cmd_theta_up(args: argparse.Namespace) -> int:
    cfg = _config(args)
    result = up_identity_check(_character(args.disc, args.char), cfg.p, args.len)
    _emit(cfg, result, "theta.up_check", f"U_p identities hold for n <= {result.details['checked_upto']}")
    return 0


# -- localalg ------------------------------------------------------------------------


def _cmd_localalg_model(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if args.report:
        rep = model_report(args.case, args.r, args.e, cfg.truncation)
        human = (
            f"case {rep.case} r={rep.r} e={rep.e} D={rep.truncation}: dim {rep.dim}, tangent {rep.tangent_dim}, "
            f"dim T/(m_Lam, m^2) {rep.dlr_dim}, socle {rep.socle_dim} "
            f"({'Gorenstein' if rep.gorenstein else 'not Gorenstein'}), "
            f"C_psi (X^{rep.congruence_psi}), C_psi_tau (X^{rep.congruence_psi_tau}), stable {rep.stable}"
        )
        _emit(cfg, rep, "localalg.model", human)
        return 0 if rep.stable else 1
    model = build_model(args.case, args.r, args.e, cfg.truncation)
    d = dims(model.algebra, model.algebra.ideal([model.lambda_element]))
    _emit(cfg, d, "localalg.dims", f"dim {d.dim}, tangent {d.tangent_dim}, special fiber {d.special_fiber_dim}")
    return 0


# -- reproduce -----------------------------------------------------------------------


def _cmd_reproduce(args: argparse.Namespace) -> int:
    cfg = _config(args)
    log_dir = Path(args.log_dir) if args.log_dir else None
    if log_dir is not None:
        setup_logging(log_dir)
    names = [n.strip() for n in args.only.split(",")] if args.only else list(CRITERIA)
    unknown = [n for n in names if n not in CRITERIA]
    if unknown:
        raise InvalidParameters(f"unknown criteria {unknown}")
    results = run_criteria(names, cfg, log_dir)
    if args.csv:
        write_table_csv(Path(args.csv), results)
    _emit(cfg, {"criteria": results}, "reproduce", results_table(results).to_string(index=False))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML/JSON run configuration")
    common.add_argument("--prec", type=int, default=None)
    common.add_argument("--json", action="store_true", default=False)

    prime = argparse.ArgumentParser(add_help=False)
    prime.add_argument("--p", type=int, default=None)

    p = argparse.ArgumentParser(prog="padic-linv")
    p.add_argument("-v", "--verbose", action="store_true", default=False)
    sub = p.add_subparsers(dest="cmd", required=True)

    padic = sub.add_parser("padic", help="p-adic arithmetic").add_subparsers(dest="op", required=True)
    for op, arg_help in (("log", "rational unit"), ("exp", "rational in pZ_p"), ("teich", "residue"), ("sqrt", "integer")):
        cmd = padic.add_parser(op, parents=[common, prime])
        cmd.add_argument("x", type=str, help=arg_help)
        if op == "sqrt":
            cmd.add_argument("--seed-root", type=int, default=None, help="square root mod p to lift")
        cmd.set_defaults(func=_cmd_padic, op=op)

    lfun = sub.add_parser("lfun", help="p-adic L-functions").add_subparsers(dest="op", required=True)
    ev = lfun.add_parser("eval", parents=[common, prime])
    ev.add_argument("--chi", type=str, required=True, help="quad:<disc>[*omega^k]")
    ev.add_argument("--s", type=str, required=True, help="rational, or a p-adic JSON document")
    ev.set_defaults(func=_cmd_lfun_eval)
    bern = lfun.add_parser("bernoulli", parents=[common, prime])
    bern.add_argument("--chi", type=str, required=True)
    bern.add_argument("--n", type=int, required=True)
    bern.set_defaults(func=_cmd_lfun_bernoulli)
    leo = lfun.add_parser("leopoldt", parents=[common, prime])
    leo.add_argument("--chi", type=str, required=True)
    leo.set_defaults(func=_cmd_lfun_leopoldt)

    linv = sub.add_parser("linv", help="L-invariants").add_subparsers(dest="op", required=True)
    rep = linv.add_parser("report", parents=[common, prime])
    rep.add_argument("--dK", type=int, required=True)
    rep.add_argument("--dF", type=int, required=True)
    rep.set_defaults(func=_cmd_linv_report)
    fg = linv.add_parser("fg-check", parents=[common, prime])
    fg.add_argument("--dKprime", type=int, required=True)
    fg.set_defaults(func=_cmd_linv_fg)
    gen = linv.add_parser("general", parents=[common])
    gen.add_argument("--units", type=str, required=True, help="JSON/YAML unit log table")
    gen.set_defaults(func=_cmd_linv_general)

    theta = sub.add_parser("theta", help="weight one theta series").add_subparsers(dest="op", required=True)
    qexp = theta.add_parser("qexp", parents=[common])
    qexp.add_argument("--disc", type=int, required=True)
    qexp.add_argument("--char", type=int, default=1, help="index into the class group characters")
    qexp.add_argument("--len", type=int, default=100)
    qexp.set_defaults(func=_cmd_theta_qexp)
    up = theta.add_parser("up-check", parents=[common, prime])
    up.add_argument("--disc", type=int, required=True)
    up.add_argument("--char", type=int, default=1)
    up.add_argument("--len", type=int, default=600)
    up.set_defaults(func=_cmd_theta_up)

    alg = sub.add_parser("localalg", help="truncated local algebras").add_subparsers(dest="op", required=True)
    model = alg.add_parser("model", parents=[common])
    model.add_argument("--case", choices=["i", "ii"], required=True)
    model.add_argument("--r", type=int, default=3)
    model.add_argument("--e", type=int, default=1)
    model.add_argument("--D", type=int, default=None)
    model.add_argument("--report", action="store_true", default=False)
    model.set_defaults(func=_cmd_localalg_model)

    repro = sub.add_parser("reproduce", help="run the acceptance criteria").add_subparsers(dest="op", required=True)
    everything = repro.add_parser("all", parents=[common])
    everything.add_argument("--only", type=str, default=None, help="comma-separated criteria, e.g. A1,A3")
    everything.add_argument("--csv", type=str, default=None)
    everything.add_argument("--log-dir", type=str, default=None)
    everything.add_argument("--workers", type=int, default=None)
    everything.add_argument("--seed", type=int, default=None)
    everything.set_defaults(func=_cmd_reproduce)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if not (args.cmd == "reproduce" and args.log_dir):
        setup_logging(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except PadicLinvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
