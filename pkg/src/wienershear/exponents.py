"""Extended exponents p in (0, inf], the quantities A and B, and lattice weights.

An exponent is stored through its reciprocal, so p = inf is an exact
first-class value and every derived quantity (A, B, thresholds) is an exact
rational number whenever the inputs are rational.  The predicates downstream
are all affine in reciprocals, so exactness here is what keeps region
boundaries sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Exponent",
    "ExponentQuad",
    "WeightSpec",
    "compute_AB",
    "weight_eval",
    "as_scalar",
    "scalar_cmp",
    "INF",
]


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num.strip()), int(den.strip()))
    return Fraction(text)  # handles "2", "0.49", "-1.5"


def as_scalar(x):
    """Coerce a user-facing real parameter (e.g. the weight order s).

    Strings, ints and Fractions become exact rationals; floats are kept as
    floats and compared with a small epsilon downstream.
    """
    if isinstance(x, str):
        return _parse_fraction(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar parameter")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise TypeError(f"cannot interpret {x!r} as a real scalar")


def scalar_cmp(a, b, eps: float = 1e-12) -> int:
    """Three-way compare with exact arithmetic on rationals.

    Mixed or float comparisons fall back to an epsilon so that decimal input
    sitting numerically on a region boundary is classified as equal.
    """
    if isinstance(a, Rational) and isinstance(b, Rational):
        d = a - b
        return (d > 0) - (d < 0)
    d = float(a) - float(b)
    if abs(d) <= eps:
        return 0
    return 1 if d > 0 else -1


@dataclass(frozen=True, order=False)
class Exponent:
    """An exponent p in (0, inf], held as recip = 1/p (recip = 0 means p = inf)."""

    recip: Fraction

    def __post_init__(self):
        if not isinstance(self.recip, Fraction):
            object.__setattr__(self, "recip", Fraction(self.recip))
        if self.recip < 0:
            raise ValueError(f"reciprocal exponent must be >= 0, got {self.recip}")

    @classmethod
    def from_value(cls, p) -> "Exponent":
        if isinstance(p, Exponent):
            return p
        if isinstance(p, str):
            return cls.parse(p)
        if isinstance(p, float) and math.isinf(p):
            return cls(Fraction(0))
        r = as_scalar(p)
        if isinstance(r, float):
            r = Fraction(r)
        if r <= 0:
            raise ValueError(f"exponent must be positive, got {p!r}")
        return cls(1 / r)

    @classmethod
    def parse(cls, text: str) -> "Exponent":
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return cls(Fraction(0))
        try:
            val = _parse_fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse exponent {text!r}") from exc
        if val <= 0:
            raise ValueError(f"exponent must be positive, got {text!r}")
        return cls(1 / val)

    @property
    def is_inf(self) -> bool:
        return self.recip == 0

    @property
    def value(self):
        """p itself: a Fraction, or math.inf."""
        return math.inf if self.is_inf else 1 / self.recip

    def __float__(self) -> float:
        return math.inf if self.is_inf else float(1 / self.recip)

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(1 / self.recip)

    def __repr__(self) -> str:
        return f"Exponent({self})"


INF = Exponent(Fraction(0))


@dataclass(frozen=True)
class ExponentQuad:
    """The tuple (p1, q1, p2, q2) indexing a source and a target mixed norm."""

    p1: Exponent
    q1: Exponent
    p2: Exponent
    q2: Exponent

    @classmethod
    def of(cls, p1, q1, p2, q2) -> "ExponentQuad":
        E = Exponent.from_value
        return cls(E(p1), E(q1), E(p2), E(q2))

    def as_strs(self):
        return (str(self.p1), str(self.q1), str(self.p2), str(self.q2))


def compute_AB(d: int, quad: ExponentQuad):
    """A = d*(1/p2 - 1/q1), B = d*(1/q2 - 1/p1), with 1/inf = 0.  Exact."""
    if d < 1:
        raise ValueError("dimension must be a positive integer")
    A = d * (quad.p2.recip - quad.q1.recip)
    B = d * (quad.q2.recip - quad.p1.recip)
    return A, B


def _bracket_sq(idx: np.ndarray, dim: int) -> np.ndarray:
    """1 + |k|^2 for a flattened array of d-dimensional integer indices."""
    arr = np.asarray(idx, dtype=float)
    if dim == 1:
        return 1.0 + arr.reshape(-1) ** 2
    arr = arr.reshape(-1, dim)
    return 1.0 + (arr**2).sum(axis=1)


@dataclass(frozen=True)
class WeightSpec:
    """Weight m(k, n) on the index lattice.

    kind "tensor_power": m(k, n) = (1+|k|^2)^(s1/2) * (1+|n|^2)^(s2/2).
    The frequency-only power weight is tensor_power(0, s); the bracket
    convention (1+|n|^2)^(s/2) is used throughout.

    kind "sampled": an explicit table over a declared index window; lookups
    outside the window are an error.
    """

    dim: int = 1
    kind: str = "tensor_power"
    s1: float = 0.0
    s2: float = 0.0
    table: np.ndarray | None = None
    k_window: tuple[int, int] | None = None
    n_window: tuple[int, int] | None = None

    @classmethod
    def tensor_power(cls, s1, s2, dim: int = 1) -> "WeightSpec":
        return cls(dim=dim, kind="tensor_power", s1=float(s1), s2=float(s2))

    @classmethod
    def one(cls, dim: int = 1) -> "WeightSpec":
        return cls.tensor_power(0.0, 0.0, dim=dim)

    @classmethod
    def sampled(cls, table, k_window, n_window, dim: int = 1) -> "WeightSpec":
        table = np.asarray(table, dtype=float)
        ks = k_window[1] - k_window[0] + 1
        ns = n_window[1] - n_window[0] + 1
        expect = (ks,) * dim + (ns,) * dim
        if table.shape != expect:
            raise ValueError(f"table shape {table.shape} != window shape {expect}")
        if np.any(table <= 0):
            raise ValueError("weight table must be strictly positive")
        return cls(dim=dim, kind="sampled", table=table,
                   k_window=tuple(k_window), n_window=tuple(n_window))

    def eval(self, k, n) -> float:
        k = np.atleast_1d(np.asarray(k, dtype=int))
        n = np.atleast_1d(np.asarray(n, dtype=int))
        if k.size != self.dim or n.size != self.dim:
            raise ValueError(f"indices must have dim {self.dim}")
        if self.kind == "tensor_power":
            wk = (1.0 + float((k**2).sum())) ** (self.s1 / 2.0)
            wn = (1.0 + float((n**2).sum())) ** (self.s2 / 2.0)
            return wk * wn
        # sampled
        for x, win, label in ((k, self.k_window, "k"), (n, self.n_window, "n")):
            if np.any(x < win[0]) or np.any(x > win[1]):
                raise IndexError(
                    f"{label}={tuple(int(v) for v in x)} outside sampled weight "
                    f"window {win}")
        kk = tuple(int(v) - self.k_window[0] for v in k)
        nn = tuple(int(v) - self.n_window[0] for v in n)
        return float(self.table[kk + nn])

    def axis_factors(self, k_window, n_window, dim: int):
        """Flattened per-axis factors (wk, wn) with m = outer(wk, wn).

        Only tensor weights factor; sampled weights return None and callers
        fall back to the full table.
        """
        if self.kind != "tensor_power":
            return None
        kr = np.arange(k_window[0], k_window[1] + 1)
        nr = np.arange(n_window[0], n_window[1] + 1)
        if dim == 1:
            ksq = _bracket_sq(kr, 1)
            nsq = _bracket_sq(nr, 1)
        else:
            kg = np.stack(np.meshgrid(*([kr] * dim), indexing="ij"), axis=-1)
            ng = np.stack(np.meshgrid(*([nr] * dim), indexing="ij"), axis=-1)
            ksq = _bracket_sq(kg, dim)
            nsq = _bracket_sq(ng, dim)
        return ksq ** (self.s1 / 2.0), nsq ** (self.s2 / 2.0)

    def grid(self, k_window, n_window, dim: int) -> np.ndarray:
        """Full weight table over the requested window, flattened to 2-D."""
        fac = self.axis_factors(k_window, n_window, dim)
        if fac is not None:
            wk, wn = fac
            return np.outer(wk, wn)
        for win, own, label in ((k_window, self.k_window, "k"),
                                (n_window, self.n_window, "n")):
            if win[0] < own[0] or win[1] > own[1]:
                raise IndexError(
                    f"requested {label}-window {win} exceeds sampled weight "
                    f"window {own}")
        k0 = k_window[0] - self.k_window[0]
        k1 = k_window[1] - self.k_window[0] + 1
        n0 = n_window[0] - self.n_window[0]
        n1 = n_window[1] - self.n_window[0] + 1
        ksl = (slice(k0, k1),) * dim
        nsl = (slice(n0, n1),) * dim
        sub = self.table[ksl + nsl]
        ks = (k1 - k0) ** dim
        ns = (n1 - n0) ** dim
        return sub.reshape(ks, ns)


def weight_eval(w: WeightSpec, k, n) -> float:
    """Value of m(k, n) for the given weight."""
    return w.eval(k, n)
