"""Verdict-versus-witness consistency sweeps over exponent tuples.

Each tuple gets a verdict from the sharp predicate and a numerical cross-
examination: the hinted witness family must actually grow when the verdict
is unbounded, and no witness family may grow when the verdict is bounded
with a margin.  The grid is deterministic: curated quads covering every
region and the p-violation case, crossed with weight-order offsets around
each tuple's own threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decision import REGION_P_VIOLATION, Verdict, decide_shear
from .exponents import ExponentQuad, compute_AB
from .shear import growth_fit, ratio, witness_block

__all__ = [
    "TupleCase",
    "CaseResult",
    "SweepResult",
    "acceptance_grid",
    "run_case",
    "run_sweep",
    "SLOPE_MIN",
    "RATIO_DOUBLING_MIN",
    "BOUNDED_GROWTH_MAX",
    "FIT_RESIDUAL_MAX",
    "MARGIN",
]

# pinned consistency thresholds
SLOPE_MIN = 0.05            # unbounded: hinted witness slope must exceed this
RATIO_DOUBLING_MIN = 2.0    # ... or total ratio increase across the sweep
BOUNDED_GROWTH_MAX = 1.2    # bounded with margin: no family may grow past this
FIT_RESIDUAL_MAX = 0.05     # log-log fit residual for unbounded witnesses
MARGIN = Fraction(1, 4)     # the bounded-side margin s >= s* + 1/4

_GRID_QUADS = [
    # X0 interior and boundary
    ("1", "2", "2", "1"), ("1", "3/2", "2", "2"), ("2", "2", "2", "2"),
    ("1", "1", "2", "2"), ("1/2", "1", "1", "1/2"), ("1", "2", "2", "2"),
    ("1", "1", "inf", "1"), ("2", "3", "3", "2"), ("1", "4", "4", "1"),
    ("1/2", "1/2", "1", "1"), ("1", "inf", "inf", "1"), ("3/2", "2", "2", "3/2"),
    # X1: A > 0 >= B
    ("1", "2", "1", "2"), ("1", "4", "3/2", "2"), ("1", "2", "1", "1"),
    ("1/2", "1", "1/2", "1"), ("1", "3", "3/2", "3"), ("2", "4", "2", "2"),
    ("1", "inf", "2", "1"), ("1", "3", "1", "2"), ("2", "inf", "2", "2"),
    ("1", "4", "2", "1"), ("3/2", "4", "2", "3/2"), ("1", "2", "3/2", "1"),
    # X2: B > 0 >= A
    ("2", "1", "2", "1"), ("2", "1", "2", "2"), ("4", "1", "4", "2"),
    ("2", "1/2", "2", "1"), ("2", "2", "2", "1"), ("3", "1", "3", "2"),
    ("1", "1/2", "1", "1"), ("inf", "1", "inf", "2"), ("2", "3/2", "4", "1"),
    ("4", "2", "4", "1"), ("3", "3/2", "3", "1"), ("2", "1", "4", "1"),
    # X3: A, B > 0
    ("2", "inf", "2", "1"), ("3", "inf", "3", "1"), ("2", "inf", "3", "1"),
    ("2", "4", "2", "1"), ("3/2", "inf", "2", "1"), ("2", "3", "2", "1"),
    ("4", "inf", "4", "2"), ("3", "4", "3", "1"), ("2", "inf", "4", "1"),
    ("3/2", "4", "3/2", "1"), ("1", "inf", "1", "1/2"), ("2", "2", "3", "1/2"),
    # p violation: 1/p2 > 1/p1
    ("2", "2", "1", "2"), ("inf", "2", "2", "2"), ("4", "1", "2", "1"),
    ("2", "1", "1", "1"),
    # second pass for depth in each region
    ("2", "4", "4", "2"), ("1", "1", "1", "1"), ("3", "3", "3", "3"),
    ("1", "inf", "3/2", "1"), ("1/2", "2", "1", "1/2"), ("3", "1", "inf", "1"),
    ("2", "inf", "2", "3/2"), ("1", "3", "1", "1"), ("4", "3/2", "4", "2"),
]

_OFFSETS = (Fraction(-1, 2), Fraction(-1, 4), Fraction(1, 4), Fraction(1, 2))


@dataclass(frozen=True)
class TupleCase:
    d: int
    quad: ExponentQuad
    s: Fraction
    verdict: Verdict

    @property
    def margin(self) -> Fraction:
        return self.s - self.verdict.threshold


def _offset_valid(quad: ExponentQuad, verdict: Verdict, s: Fraction) -> bool:
    """Keep tuples whose witness asymptotics are clean at desk scales.

    Negative weight orders must stay above -1/(2 q1) so the weighted inner
    sums keep their power growth, and unbounded cases need a slope margin
    that is measurable over N in [32, 512].
    """
    if verdict.region == REGION_P_VIOLATION:
        # row_delta slope is d(1/p2 - 1/p1); require a visible gap
        gap = quad.p2.recip - quad.p1.recip
        return gap >= Fraction(1, 4)
    if s < 0:
        q1r = quad.q1.recip
        if s < Fraction(-2, 5):
            return False
        if q1r > 0 and s <= -1 / (2 * (1 / q1r)):
            return False
    if not verdict.bounded:
        # predicted slope of the hinted family
        A, B = verdict.A, verdict.B
        if verdict.witness_hint == "box":
            slope = A + B - s
        elif verdict.witness_hint == "column_delta":
            slope = (A - s) if s >= 0 else -s
        elif verdict.witness_hint == "antidiagonal":
            slope = (B - s) if s >= 0 else -s
        else:
            return False  # row_profile_box: exactly-critical, excluded here
        return slope >= Fraction(1, 8)
    return True


def acceptance_grid(count: int = 200, d: int = 1) -> list[TupleCase]:
    """Deterministic tuple grid: curated quads x threshold offsets."""
    cases: list[TupleCase] = []
    for quad_strs in _GRID_QUADS:
        quad = ExponentQuad.of(*quad_strs)
        A, B = compute_AB(d, quad)
        sstar = max(A, B, A + B, Fraction(0))
        for off in _OFFSETS:
            s = sstar + off
            verdict = decide_shear(d, quad, s)
            if _offset_valid(quad, verdict, s):
                cases.append(TupleCase(d, quad, s, verdict))
            if len(cases) == count:
                return cases
    return cases


@dataclass
class CaseResult:
    case: TupleCase
    family: str
    Ns: tuple[int, ...]
    ratios: tuple[float, ...]
    slope: float | None
    residual: float | None
    consistent: bool
    reason: str

    def rows(self) -> list[dict]:
        p1, q1, p2, q2 = self.case.quad.as_strs()
        return [
            {"family": self.family, "d": self.case.d, "p1": p1, "q1": q1,
             "p2": p2, "q2": q2, "s": float(self.case.s), "N": n, "ratio": r}
            for n, r in zip(self.Ns, self.ratios)
        ]


def run_case(case: TupleCase, Ns=(32, 64, 128, 256, 512)) -> list[CaseResult]:
    """Cross-examine one tuple; one result per family that was exercised."""
    out: list[CaseResult] = []
    if not case.verdict.bounded:
        fam = case.verdict.witness_hint
        fit = growth_fit(fam, case.d, case.quad, case.s, Ns)
        grew = (fit.slope > SLOPE_MIN
                or fit.ratios[-1] >= RATIO_DOUBLING_MIN * fit.ratios[0])
        clean = fit.residual < FIT_RESIDUAL_MAX
        ok = grew and clean
        reason = "witness grows" if ok else (
            f"witness failed: slope={fit.slope:.3f} "
            f"increase={fit.ratios[-1] / fit.ratios[0]:.2f} "
            f"residual={fit.residual:.3f}")
        out.append(CaseResult(case, fam, fit.Ns, fit.ratios, fit.slope,
                              fit.residual, ok, reason))
        return out
    if case.margin >= MARGIN:
        for fam in ("row_delta", "column_delta", "antidiagonal", "box"):
            ratios = []
            for N in Ns:
                blk = witness_block(fam, case.d, case.quad, case.s, N)
                ratios.append(ratio(blk, case.d, case.quad, case.s))
            ok = max(ratios) <= BOUNDED_GROWTH_MAX * ratios[0]
            reason = "no growth" if ok else (
                f"unexpected growth: max/first={max(ratios) / ratios[0]:.2f}")
            out.append(CaseResult(case, fam, tuple(int(n) for n in Ns),
                                  tuple(ratios), None, None, ok, reason))
        return out
    # bounded without margin: verdict stands on the theorem, nothing to measure
    out.append(CaseResult(case, "-", (), (), None, None, True,
                          "bounded, sub-margin: not swept"))
    return out


@dataclass
class SweepResult:
    results: list[CaseResult]
    n_cases: int
    n_checked: int
    n_inconsistent: int

    @property
    def consistent(self) -> bool:
        return self.n_inconsistent == 0

    def summary(self) -> dict:
        return {
            "cases": self.n_cases,
            "family_checks": self.n_checked,
            "inconsistent": self.n_inconsistent,
            "consistent": self.consistent,
            "thresholds": {
                "slope_min": SLOPE_MIN,
                "ratio_doubling_min": RATIO_DOUBLING_MIN,
                "bounded_growth_max": BOUNDED_GROWTH_MAX,
                "fit_residual_max": FIT_RESIDUAL_MAX,
            },
        }


def run_sweep(cases, Ns=(32, 64, 128, 256, 512), workers: int = 1) -> SweepResult:
    results: list[CaseResult] = []
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(lambda c: run_case(c, Ns), cases):
                results.extend(chunk)
    else:
        for case in cases:
            results.extend(run_case(case, Ns))
    bad = sum(1 for r in results if not r.consistent)
    return SweepResult(results, len(list(cases)), len(results), bad)
