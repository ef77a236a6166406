"""
Self-checks run by the ``selfcheck`` command. Each check compares two independent
computations or a computation with a known value and reports what it saw.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from loguru import logger

from .eulerchar import ec_weight, euler_of_module
from .exceptions import FAGraphsError
from .famod import FAModuleSpec
from .homology import build_complex, cohomology, compute_report, resolution_complex
from .symcore import Partition, SymFunction


@dataclass
class CheckResult:
    """
    Attributes:
        name (str): Which check.
        passed (bool): Whether it held.
        detail (str): What was compared.
        seconds (float): How long it took.
    """

    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def as_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class CheckSuite:
    name: str
    checks: list = field(default_factory=list)

    def register(self, func: Callable[[], tuple[bool, str]]) -> Callable[[], tuple[bool, str]]:
        self.checks.append(func)
        return func


CORE = CheckSuite("core")
FULL = CheckSuite("full")


def _trivial(c: int) -> SymFunction:
    return SymFunction.schur(Partition()).scale(c)


@CORE.register
def three_leg_tripod() -> tuple[bool, str]:
    report = compute_report(FAModuleSpec.c([1, 1, 1]), 0, 3)
    got = {e: dec.as_json() for e, dec in report.decompositions.items()}
    return got == {0: {"1,1,1": 1}}, f"H(G_111(0,3)) = {got}"


@CORE.register
def euler_cross_validation() -> tuple[bool, str]:
    mismatches = []
    for lam in ([1], [1, 1], [2], [1, 1, 1], [2, 1]):
        spec = FAModuleSpec.c(lam)
        table = euler_of_module(spec, 1, 3)
        for g in range(2):
            for n in range(4):
                if 2 * g + n < 3:
                    continue
                report = compute_report(spec, g, n)
                if report.euler != table.cell(g, n):
                    mismatches.append((spec.label(), g, n))
    return not mismatches, f"mismatches: {mismatches}" if mismatches else "all cells agree"


@CORE.register
def star_matches_full() -> tuple[bool, str]:
    mismatches = []
    for lam, g, n in (([1, 1], 1, 2), ([1, 1, 1], 1, 3), ([2, 1], 1, 3)):
        spec = FAModuleSpec.c(lam)
        full = compute_report(spec, g, n, variant="full").decompositions
        star = compute_report(spec, g, n, variant="star").decompositions
        if full != star:
            mismatches.append((spec.label(), g, n))
    return not mismatches, f"mismatches: {mismatches}" if mismatches else "star and full agree"


@CORE.register
def resolution_matches_quotient() -> tuple[bool, str]:
    mismatches = []
    for m, g, n in ((2, 1, 2), (2, 2, 0), (3, 1, 3)):
        quotient = cohomology(build_complex(FAModuleSpec.tilde(m), g, n), FAModuleSpec.tilde(m), g)
        oracle = cohomology(resolution_complex(m, g, n), None, g)
        if quotient.decompositions != oracle.decompositions:
            mismatches.append((m, g, n))
    return not mismatches, f"mismatches: {mismatches}" if mismatches else "resolution agrees"


@CORE.register
def weight_17_low_genus_total() -> tuple[bool, str]:
    table = ec_weight(17, 13, 0)
    got = [table.cell(g, 0) for g in (11, 12, 13)]
    want = [_trivial(1), _trivial(-1), _trivial(1)]
    return got == want, f"chi(gr_17,0 H_c(M_g)) for g = 11, 12, 13: {[f.as_json() for f in got]}"


@FULL.register
def weight_17_first_sheet() -> tuple[bool, str]:
    sheet = ec_weight(17, 14, 4).sheets["first"]
    cells = {
        (13, 0): _trivial(1),
        (14, 0): _trivial(-2),
        (11, 2): SymFunction.schur(Partition([1, 1])),
        (10, 4): SymFunction.schur(Partition([2, 1, 1])).scale(-1),
    }
    bad = [key for key, want in cells.items() if sheet.cell(*key) != want]
    return not bad, f"cells differing: {bad}" if bad else "spot cells agree"


@FULL.register
def weight_17_second_sheet() -> tuple[bool, str]:
    sheet = ec_weight(17, 14, 1).sheets["second"]
    cells = {
        (11, 0): _trivial(1),
        (12, 0): _trivial(-1),
        (13, 1): SymFunction.schur(Partition([1])).scale(21),
        (14, 0): _trivial(-18),
    }
    bad = [key for key, want in cells.items() if sheet.cell(*key) != want]
    return not bad, f"cells differing: {bad}" if bad else "spot cells agree"


SUITES = {"core": [CORE], "full": [CORE, FULL]}


def run_checks(suite: str = "core") -> list[CheckResult]:
    """
    Runs every check of a suite. A check that raises counts as failed.
    """
    results = []
    for group in SUITES[suite]:
        for func in group.checks:
            started = time.monotonic()
            try:
                passed, detail = func()
            except FAGraphsError as err:
                passed, detail = False, f"{type(err).__name__}: {err}"
            result = CheckResult(func.__name__, passed, detail, round(time.monotonic() - started, 3))
            logger.info("{} {} ({:.2f}s)", "PASS" if passed else "FAIL", result.name, result.seconds)
            results.append(result)
    return results
