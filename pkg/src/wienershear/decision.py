"""Boundedness verdicts for the shear operator on weighted mixed-norm spaces.

The shear T maps l^{(p1,q1)}_{1 (x) v_s} into l^{(p2,q2)} boundedly exactly
when 1/p2 <= 1/p1 and s >= s* = max(A, B, A+B, 0), where A = d(1/p2 - 1/q1)
and B = d(1/q2 - 1/p1), with strict inequality in three boundary cases.  The
free propagator verdict on the corresponding amalgam spaces coincides with
the shear verdict because the dilated power weight is equivalent to itself.

Sign tests on A and B are exact rational comparisons; float weight orders
fall back to a 1e-12 epsilon so decimal input on a boundary is treated as
sitting on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exponents import (ExponentQuad, Exponent, as_scalar, compute_AB,
                        scalar_cmp)

__all__ = [
    "Verdict",
    "REGION_X0",
    "REGION_X1",
    "REGION_X2",
    "REGION_X3",
    "REGION_P_VIOLATION",
    "embed",
    "region_classify",
    "decide_shear",
    "decide_schrodinger",
    "decide_unweighted",
    "theoremA_check",
    "explain",
]

REGION_X0 = "X0"
REGION_X1 = "X1"
REGION_X2 = "X2"
REGION_X3 = "X3"
REGION_P_VIOLATION = "p_violation"


@dataclass(frozen=True)
class Verdict:
    bounded: bool
    region: str
    A: Fraction
    B: Fraction
    threshold: Fraction
    strict_required: bool
    witness_hint: str | None

    def to_dict(self) -> dict:
        return {
            "bounded": self.bounded,
            "region": self.region,
            "A": float(self.A),
            "B": float(self.B),
            "threshold": float(self.threshold),
            "strict_required": self.strict_required,
            "witness_hint": self.witness_hint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def embed(d: int, q, p, s) -> bool:
    """Whether l^q with weight <n>^s embeds in l^p.

    True iff s >= max(d(1/p - 1/q), 0), strict when 1/p > 1/q.
    """
    q = Exponent.from_value(q)
    p = Exponent.from_value(p)
    s = as_scalar(s)
    gap = d * (p.recip - q.recip)
    threshold = max(gap, Fraction(0))
    c = scalar_cmp(s, threshold)
    if p.recip > q.recip:
        return c > 0
    return c >= 0


def region_classify(d: int, quad: ExponentQuad) -> str:
    """Sign pattern of (A, B): X0 both <= 0, X1 A > 0 >= B, X2 B > 0 >= A, X3 both > 0."""
    A, B = compute_AB(d, quad)
    if A > 0 and B > 0:
        return REGION_X3
    if A > 0:
        return REGION_X1
    if B > 0:
        return REGION_X2
    return REGION_X0


def _strictness(A: Fraction, B: Fraction, quad: ExponentQuad) -> bool:
    if A > 0 and B <= 0:
        return True
    if B > 0 and A <= 0:
        return True
    if A > 0 and B > 0 and quad.p1.recip == quad.p2.recip:
        return True
    return False


def decide_shear(d: int, quad: ExponentQuad, s) -> Verdict:
    """Sharp verdict for T: l^{(p1,q1)}_{1 (x) v_s} -> l^{(p2,q2)}."""
    s = as_scalar(s)
    A, B = compute_AB(d, quad)
    threshold = max(A, B, A + B, Fraction(0))
    strict = _strictness(A, B, quad)
    p_ok = quad.p2.recip <= quad.p1.recip
    c = scalar_cmp(s, threshold)
    bounded = bool(p_ok and (c > 0 or (c == 0 and not strict)))

    region = region_classify(d, quad) if p_ok else REGION_P_VIOLATION
    hint = None
    if not bounded:
        if not p_ok:
            hint = "row_delta"
        elif region == REGION_X3:
            hint = "row_profile_box" if c == 0 else "box"
        elif region == REGION_X1:
            hint = "column_delta"
        elif region == REGION_X2:
            hint = "antidiagonal"
        else:  # X0 with s below 0; endpoint sequence of the weighted embedding
            hint = "column_delta"
    return Verdict(bounded, region, A, B, threshold, strict, hint)


def decide_schrodinger(d: int, quad: ExponentQuad, s) -> Verdict:
    """Verdict for the free propagator between amalgam spaces.

    Identical to the shear verdict: rescaling the power weight by the
    conjugating dilation gives an equivalent weight, so the two boundedness
    questions coincide.
    """
    return decide_shear(d, quad, s)


def decide_unweighted(quad: ExponentQuad) -> bool:
    """Unweighted propagator boundedness: q1 <= p2 and p1 <= min(q2, p2)."""
    r = quad
    return bool(r.q1.recip >= r.p2.recip
                and r.p1.recip >= r.q2.recip
                and r.p1.recip >= r.p2.recip)


def theoremA_check(d: int, p, q, s) -> bool:
    """Diagonal-case predicate: s >= d|1/p - 1/q|, strict when p != q.

    Stated for 1 <= p, q <= inf only; inputs outside that range are an error
    rather than an extrapolation.
    """
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    if p.recip > 1 or q.recip > 1:
        raise ValueError("theoremA_check requires 1 <= p, q <= inf")
    s = as_scalar(s)
    gap = d * abs(p.recip - q.recip)
    c = scalar_cmp(s, gap)
    if p.recip == q.recip:
        return c >= 0
    return c > 0


def explain(v: Verdict, d: int, quad: ExponentQuad, s) -> str:
    """One-line English account naming the governing inequality."""
    p1, q1, p2, q2 = quad.as_strs()
    sf = float(as_scalar(s))
    if v.region == REGION_P_VIOLATION:
        return (f"unbounded: l^{{{p1}}} does not embed in l^{{{p2}}} "
                f"(1/p2 > 1/p1), no weight order can help")
    names = {REGION_X0: "s >= 0",
             REGION_X1: f"s {'>' if v.strict_required else '>='} A = d(1/p2-1/q1)",
             REGION_X2: f"s {'>' if v.strict_required else '>='} B = d(1/q2-1/p1)",
             REGION_X3: (f"s {'>' if v.strict_required else '>='} A+B "
                         f"= d(1/p2-1/q1+1/q2-1/p1)")}
    govern = names[v.region]
    verdict = "bounded" if v.bounded else "unbounded"
    detail = (f"s={sf:g} vs threshold {float(v.threshold):g} in region "
              f"{v.region} for (p1,q1,p2,q2)=({p1},{q1},{p2},{q2}), d={d}")
    if v.bounded:
        return f"{verdict}: governing inequality {govern} holds ({detail})"
    tail = f"; witness family: {v.witness_hint}" if v.witness_hint else ""
    return f"{verdict}: governing inequality {govern} fails ({detail}){tail}"
