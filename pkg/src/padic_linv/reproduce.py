from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Sequence

import pandas as pd

from .config import RunConfig
from .errors import PadicLinvError
from .escalate import PrecisionPolicy, with_precision
from .fields import QuadField, build_biquad
from .lfunctions import (
    DirichletCharacter,
    PadicLSeries,
    interpolation_value,
    kubota_leopoldt,
    leopoldt_at_one,
)
from .linvariants import ell_minus, fg_check, simple_zero_check, slope
from .localalg import AlgebraMorphism, from_presentation, iso_witness, iso_witness_check, model_report
from .logging_utils import jsonl_append
from .padic import (
    ExtElement,
    PadicScalar,
    UnramifiedExtension,
    ext_log,
    iwasawa_log,
    padic_exp,
    padic_sqrt,
    teichmuller,
)
from .thetaforms import class_characters, theta_qexp, up_identity_check


logger = logging.getLogger(__name__)

BIQUAD_CONFIGS = ((-4, 5, 29), (-4, 2, 17), (-8, 5, 11))
FG_CASES = ((-4, 5), (-8, 17), (-20, 29))
LEOPOLDT_CASES = ((5, 29), (5, 11), (8, 17), (8, 7))
UP_CASES = ((-23, 59), (-20, 29))
PROPERTY_CASES = 200


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    passed: bool
    cases: int
    detail: str


def _a1(cfg: RunConfig) -> CriterionResult:
    worst = None
    for dK, dF, p in BIQUAD_CONFIGS:
        config = build_biquad(dK, dF, p, cfg.prec)
        digits = slope(config).agreement(-1)
        worst = digits if worst is None else min(worst, digits)
    passed = worst is not None and worst >= cfg.prec - 2
    return CriterionResult("A1", passed, len(BIQUAD_CONFIGS), f"slope = -1 to >= {worst} digits")


def _a2(cfg: RunConfig) -> CriterionResult:
    digits = []
    for d, p in FG_CASES:
        result = with_precision(lambda prec: fg_check(d, p, prec), cfg.prec, PrecisionPolicy(max_attempts=2))
        if not result.passed:
            return CriterionResult("A2", False, len(FG_CASES), f"disc {d}, p = {p}: {result.agreement} digits")
        digits.append(result.agreement)
    return CriterionResult("A2", True, len(FG_CASES), f"agreement {min(digits)} digits")


def _a3(cfg: RunConfig) -> CriterionResult:
    worst = cfg.prec
    for d, p in LEOPOLDT_CASES:
        chi = DirichletCharacter(d)
        lhs = leopoldt_at_one(chi, p, cfg.prec)
        rhs = kubota_leopoldt(chi, p, cfg.prec).evaluate(1)
        worst = min(worst, lhs.agreement(rhs))
    passed = worst >= cfg.prec - 2
    return CriterionResult("A3", passed, len(LEOPOLDT_CASES), f"agreement {worst} digits")


def _a4(cfg: RunConfig) -> CriterionResult:
    for dK, dF, p in BIQUAD_CONFIGS:
        report = simple_zero_check(build_biquad(dK, dF, p, cfg.prec))
        if report.order != 1:
            return CriterionResult("A4", False, len(BIQUAD_CONFIGS), f"order {report.order} at ({dK}, {dF}, {p})")
    return CriterionResult("A4", True, len(BIQUAD_CONFIGS), "simple trivial zero at s = 0")


def _a5(cfg: RunConfig) -> CriterionResult:
    worst = cfg.prec
    for dK, dF, p in BIQUAD_CONFIGS:
        value, agreement = ell_minus(build_biquad(dK, dF, p, cfg.prec))
        if value.is_zero() or value.val >= cfg.prec:
            return CriterionResult("A5", False, len(BIQUAD_CONFIGS), f"ell_minus vanishes at ({dK}, {dF}, {p})")
        worst = min(worst, agreement)
    return CriterionResult("A5", worst >= cfg.prec - 4, len(BIQUAD_CONFIGS), f"routes agree to {worst} digits")


def _a6(cfg: RunConfig) -> CriterionResult:
    checked = []
    for disc, p in UP_CASES:
        psi = class_characters(QuadField(disc))[1]
        result = up_identity_check(psi, p, 600)
        checked.append(result.details["checked_upto"])
    return CriterionResult("A6", True, len(UP_CASES), f"identities hold up to n = {min(checked)}")


def _a7(cfg: RunConfig) -> CriterionResult:
    cases = 0
    runs = [("i", 3)] + [("ii", r) for r in (3, 4, 5)]
    for case, r in runs:
        rep = model_report(case, r, 1, 2 * r + 4)
        cases += 1
        expected_k = 1 if case == "i" else r - 1
        got_k = rep.congruence_psi if case == "i" else rep.congruence_psi_tau
        if rep.dlr_dim != 4 or rep.socle_dim != 3 or rep.gorenstein or got_k != expected_k or not rep.stable:
            return CriterionResult("A7", False, cases, f"case {case}, r = {r}: {rep}")
    for r in (2, 3, 4):
        phi, _ = iso_witness(r, 2 * r + 4)
        cases += 1
        if not iso_witness_check(phi):
            return CriterionResult("A7", False, cases, f"witness for r = {r} is not bijective")
    lam = from_presentation(["X"], [], 8)
    cases += 1
    if not iso_witness_check(AlgebraMorphism.identity(lam)):
        return CriterionResult("A7", False, cases, "identity is not bijective")
    return CriterionResult("A7", True, cases, "models, congruence ideals and witnesses as predicted")


@lru_cache(maxsize=None)
def _series(disc: int, p: int, prec: int) -> PadicLSeries:
    return PadicLSeries(DirichletCharacter(disc), p, prec)


@lru_cache(maxsize=None)
def _extension(f: int, p: int, prec: int) -> tuple[UnramifiedExtension, ExtElement]:
    ext = UnramifiedExtension.cyclotomic(f, p, prec)
    return ext, ext.root_of_unity(f)


def _ext_agreement(x: ExtElement, y: ExtElement) -> int:
    return min(a.agreement(b) for a, b in zip(x.coeffs, y.coeffs))


def _doubling_failures(rng: random.Random, N: int) -> dict[str, int]:
    """Reruns each operation at 2N and counts results that drift within the first N digits."""
    failures = {"log": 0, "exp": 0, "sqrt": 0, "ext_log": 0, "series": 0, "ell_minus": 0}
    primes = (3, 5, 7, 11, 13, 29)
    for _ in range(PROPERTY_CASES):
        p = rng.choice(primes)
        a = rng.randrange(1, p**6)
        if a % p == 0:
            a += 1
        x_low, x_high = (PadicScalar.from_rational(a, p, n) for n in (N, 2 * N))
        if iwasawa_log(x_low).agreement(iwasawa_log(x_high)) < N - 2:
            failures["log"] += 1
        e_low, e_high = (PadicScalar.from_rational(p * a, p, n) for n in (N, 2 * N))
        if padic_exp(e_low).agreement(padic_exp(e_high)) < N - 2:
            failures["exp"] += 1
        r = rng.randrange(1, p)
        square = r * r + p * rng.randrange(0, p**4)
        if padic_sqrt(square, p, N, seed=r).agreement(padic_sqrt(square, p, 2 * N, seed=r)) < N:
            failures["sqrt"] += 1
    for _ in range(PROPERTY_CASES):
        f, p = rng.choice(((4, 7), (3, 5), (5, 3)))
        k = rng.randrange(1, f)
        (_, z_low), (_, z_high) = _extension(f, p, N), _extension(f, p, 2 * N)
        if _ext_agreement(ext_log(1 - z_low**k), ext_log(1 - z_high**k)) < N - 2:
            failures["ext_log"] += 1
    pool = ((5, 7), (5, 11), (8, 7), (12, 5), (13, 3))
    for _ in range(PROPERTY_CASES):
        disc, p = rng.choice(pool)
        s = rng.randint(-3, 3)
        if _series(disc, p, N).evaluate(s).agreement(_series(disc, p, 2 * N).evaluate(s)) < N - 2:
            failures["series"] += 1
    dK, dF, p = rng.choice(BIQUAD_CONFIGS)
    M = max(N, 10)
    low, _ = ell_minus(build_biquad(dK, dF, p, M))
    high, _ = ell_minus(build_biquad(dK, dF, p, 2 * M))
    if low.agreement(high) < M - 4:
        failures["ell_minus"] += 1
    return failures


def _property_failures(seed: int, prec: int) -> dict[str, int]:
    rng = random.Random(seed)
    failures = {"log": 0, "teichmuller": 0, "interpolation": 0, "theta": 0}
    primes = (3, 5, 7, 11, 13, 29)
    for _ in range(PROPERTY_CASES):
        p = rng.choice(primes)
        a, b = (rng.randrange(1, p**6) for _ in range(2))
        if a % p == 0 or b % p == 0:
            a, b = a * p + 1, b * p + 1
        x = PadicScalar.from_rational(a, p, prec)
        y = PadicScalar.from_rational(b, p, prec)
        if iwasawa_log(x * y).agreement(iwasawa_log(x) + iwasawa_log(y)) < prec - 2:
            failures["log"] += 1
        r = rng.randrange(1, p)
        w = teichmuller(r, p, prec)
        if not (w ** (p - 1) - 1).is_zero() or w.residue(1) != r:
            failures["teichmuller"] += 1
    pool = ((5, 7), (5, 11), (8, 7), (12, 5), (13, 3))
    for _ in range(PROPERTY_CASES):
        disc, p = rng.choice(pool)
        n = rng.randint(1, 4)
        lhs = _series(disc, p, 12).evaluate(1 - n)
        rhs = interpolation_value(DirichletCharacter(disc), n, p, 12)
        if lhs.agreement(rhs) < 10:
            failures["interpolation"] += 1
    psi = class_characters(QuadField(-23))[1]
    L = 400
    theta = theta_qexp(psi, L)
    for _ in range(PROPERTY_CASES):
        m = rng.randint(1, 20)
        n = rng.randint(1, L // m)
        if math.gcd(m, n) == 1 and theta[m * n] != theta[m] * theta[n]:
            failures["theta"] += 1
    for name, count in _doubling_failures(rng, max(prec // 2, 6)).items():
        failures[f"doubling_{name}"] = count
    return failures


def _a8(cfg: RunConfig) -> CriterionResult:
    failures = _property_failures(cfg.seed, max(cfg.prec, 8))
    bad = {k: v for k, v in failures.items() if v}
    detail = "no failures" if not bad else ", ".join(f"{k}: {v}" for k, v in sorted(bad.items()))
    # ell_minus doubling is a single case
    cases = PROPERTY_CASES * (len(failures) - 1) + 1
    return CriterionResult("A8", not bad, cases, detail)


CRITERIA: dict[str, Callable[[RunConfig], CriterionResult]] = {
    "A1": _a1,
    "A2": _a2,
    "A3": _a3,
    "A4": _a4,
    "A5": _a5,
    "A6": _a6,
    "A7": _a7,
    "A8": _a8,
}


def _run_one(name: str, cfg: RunConfig, log_dir: Optional[Path]) -> CriterionResult:
    started = time.perf_counter()
    try:
        result = CRITERIA[name](cfg)
    except PadicLinvError as exc:
        logger.error("%s failed: %s", name, exc)
        result = CriterionResult(name, False, 0, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - started
    logger.info("%s %s in %.1fs: %s", name, "passed" if result.passed else "FAILED", elapsed, result.detail)
    if log_dir is not None:
        jsonl_append(log_dir / f"{name}.jsonl", result)
    return result


def run_criteria(
    names: Sequence[str], cfg: RunConfig, log_dir: Optional[Path] = None
) -> list[CriterionResult]:
    """Runs the named criteria on cfg.workers threads; results keep the order of names."""
    unknown = [n for n in names if n not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria {unknown}")
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda n: _run_one(n, cfg, log_dir), names))


def results_table(results: Sequence[CriterionResult]) -> pd.DataFrame:
    df = pd.DataFrame(
        [{"criterion": r.criterion, "passed": r.passed, "cases": r.cases, "detail": r.detail} for r in results]
    )
    return df
