"""The shear transform (Ta)_{k,n} = a_{k-n,n}, witness families, and growth fits.

The shear is a bijection of Z^d x Z^d, so it preserves the multiset of
values; what changes is how mass lines up along the two norm axes.  Witness
families realize the extremal sequences that certify unboundedness: deltas
along a row/column/antidiagonal for the embedding obstructions, boxes for
the combined threshold, and a profiled box for the critical equal-p case.
Operator norms between the quasi-normed spaces are not computed exactly;
ratios over growing scales give certified lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentQuad, WeightSpec, as_scalar, compute_AB
from .mixed_norm import Block, norm_l_paren_pq

__all__ = [
    "shear_apply",
    "shear_inverse",
    "WitnessFamily",
    "WITNESS_FAMILIES",
    "make_witness",
    "witness_block",
    "ratio",
    "GrowthFit",
    "growth_fit",
    "growth_slope",
    "opnorm_lower_bound",
    "FracIntegral",
    "frac_integral_apply",
]

WITNESS_FAMILIES = ("row_delta", "column_delta", "antidiagonal", "box",
                    "row_profile_box")


def shear_apply(a: Block) -> Block:
    """(Ta)_{k,n} = a_{k-n,n}; the output k-window is the Minkowski sum."""
    kw = (a.k_window[0] + a.n_window[0], a.k_window[1] + a.n_window[1])
    out = Block.zeros(a.dim, kw, a.n_window)
    K = a.k_size
    nsz = a.n_size
    src = a.values.reshape((K,) * a.dim + (nsz**a.dim,))
    dst = out.values.reshape((out.k_size,) * a.dim + (nsz**a.dim,))
    for flat in range(nsz**a.dim):
        n = np.unravel_index(flat, (nsz,) * a.dim)
        # for this n the output k-range starts at a.k0 + n, relative to out.k0
        start = [a.k_window[0] + (ni + a.n_window[0]) - kw[0] for ni in n]
        sl = tuple(slice(s, s + K) for s in start)
        dst[sl + (flat,)] = src[(slice(None),) * a.dim + (flat,)]
    return out


def shear_inverse(b: Block) -> Block:
    """Inverse of the shear: out_{k,n} = b_{k+n,n}."""
    kw = (b.k_window[0] - b.n_window[1], b.k_window[1] - b.n_window[0])
    out = Block.zeros(b.dim, kw, b.n_window)
    K = b.k_size
    nsz = b.n_size
    src = b.values.reshape((K,) * b.dim + (nsz**b.dim,))
    dst = out.values.reshape((out.k_size,) * b.dim + (nsz**b.dim,))
    for flat in range(nsz**b.dim):
        n = np.unravel_index(flat, (nsz,) * b.dim)
        start = [(b.k_window[0] - (ni + b.n_window[0])) - kw[0] for ni in n]
        sl = tuple(slice(s, s + K) for s in start)
        dst[sl + (flat,)] = src[(slice(None),) * b.dim + (flat,)]
    return out


@dataclass(frozen=True)
class WitnessFamily:
    """A scale-indexed extremal family of blocks.

    id one of WITNESS_FAMILIES; N the scale; profile the 1-d coefficient
    rule b (None selects the family default, "ones", "far_delta", an array
    over the index range, or a callable on integer index vectors).
    """

    id: str
    N: int
    profile: object = None

    def __post_init__(self):
        if self.id not in WITNESS_FAMILIES:
            raise ValueError(f"unknown witness family {self.id!r}")
        if self.N < 1:
            raise ValueError("scale N must be a positive integer")


def _profile_values(profile, idx: np.ndarray, N: int, dim: int) -> np.ndarray:
    """Evaluate a profile rule on index vectors (shape (M,) or (M, dim))."""
    flat = idx.reshape(idx.shape[0], -1)
    if profile is None or (isinstance(profile, str) and profile == "ones"):
        return np.ones(idx.shape[0])
    if isinstance(profile, str) and profile == "far_delta":
        target = np.zeros(flat.shape[1], dtype=int)
        target[0] = N
        return np.where((flat == target).all(axis=1), 1.0, 0.0)
    if callable(profile):
        return np.asarray(profile(idx if dim > 1 else idx.reshape(-1)),
                          dtype=float)
    arr = np.asarray(profile, dtype=float)
    if arr.shape[0] != idx.shape[0]:
        raise ValueError("profile array length does not match index range")
    return arr


def _index_vectors(lo: int, hi: int, dim: int) -> np.ndarray:
    r = np.arange(lo, hi + 1)
    if dim == 1:
        return r.reshape(-1, 1)
    grids = np.meshgrid(*([r] * dim), indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def make_witness(f: WitnessFamily, d: int = 1) -> Block:
    """Realize a witness family as a concrete block at its scale."""
    N = f.N
    if f.id == "row_delta":
        idx = _index_vectors(-N, N, d)
        vals = _profile_values(f.profile, idx, N, d)
        b = Block.zeros(d, (-N, N), (0, 0))
        b.values[...] = vals.reshape((2 * N + 1,) * d + (1,) * d)
        return b
    if f.id == "column_delta":
        idx = _index_vectors(-N, N, d)
        vals = _profile_values(f.profile, idx, N, d)
        b = Block.zeros(d, (0, 0), (-N, N))
        b.values[...] = vals.reshape((1,) * d + (2 * N + 1,) * d)
        return b
    if f.id == "antidiagonal":
        idx = _index_vectors(-N, N, d)
        vals = _profile_values(f.profile, idx, N, d)
        b = Block.zeros(d, (-N, N), (-N, N))
        flat = b.flat2d()
        M = 2 * N + 1
        for pos in range(M**d):
            k = np.unravel_index(pos, (M,) * d)
            n = tuple(2 * N - ki for ki in k)  # n = -k in window coordinates
            npos = int(np.ravel_multi_index(n, (M,) * d))
            flat[pos, npos] = vals[pos]
        return b
    if f.id == "box":
        if f.profile is not None:
            raise ValueError("box family takes no profile")
        return Block.ones(d, (-2 * N, 2 * N), (-N, N))
    # row_profile_box: a_{k,n} = b_n on |k| <= 2N, |n| <= N
    if f.profile is None:
        raise ValueError("row_profile_box requires a profile")
    idx = _index_vectors(-N, N, d)
    vals = _profile_values(f.profile, idx, N, d)
    b = Block.zeros(d, (-2 * N, 2 * N), (-N, N))
    b.values[...] = vals.reshape((1,) * d + (2 * N + 1,) * d)
    return b


def _endpoint_log_profile(d: int, quad: ExponentQuad, s) -> object:
    """Profile witnessing the critical equal-p case at logarithmic rate.

    b_n = <n>^(-s - d/q1) * log(e + |n|)^(-1/q1); the weighted l^{q1} mass
    then grows like an iterated logarithm while the sheared l^{q2} mass
    grows like a power of log.
    """
    sq = float(quad.q1.recip)
    sf = float(s)

    def rule(idx):
        idx = np.asarray(idx, dtype=float)
        if idx.ndim == 1:
            br = np.sqrt(1.0 + idx**2)
        else:
            br = np.sqrt(1.0 + (idx**2).sum(axis=-1))
        expo = -sf - d * sq
        return br**expo * np.log(math.e + br) ** (-sq)

    return rule


def witness_block(family_id: str, d: int, quad: ExponentQuad, s, N: int) -> Block:
    """Witness for a concrete tuple, with the profile rule the tuple calls for.

    Delta families use the box profile for s >= 0 and a single far-out delta
    for s < 0 (the endpoint sequence of the failed embedding); the profiled
    box uses the logarithmic endpoint profile.
    """
    s = as_scalar(s)
    profile = None
    if family_id in ("column_delta", "antidiagonal") and s < 0:
        profile = "far_delta"
    elif family_id == "row_profile_box":
        profile = _endpoint_log_profile(d, quad, s)
    return make_witness(WitnessFamily(family_id, N, profile), d)


def ratio(a: Block, d: int, quad: ExponentQuad, s) -> float:
    """Sheared-to-source norm quotient for one block.

    ||Ta||_{l^{(p2,q2)}} / ||a||_{l^{(p1,q1)}_{1 (x) v_s}}; a lower bound for
    the operator quasi-norm.
    """
    if d != a.dim:
        raise ValueError(f"block dim {a.dim} != d {d}")
    den = norm_l_paren_pq(a, quad.p1, quad.q1,
                          WeightSpec.tensor_power(0.0, float(as_scalar(s)), dim=d))
    if den == 0.0:
        raise ZeroDivisionError("witness block has zero source norm")
    num = norm_l_paren_pq(shear_apply(a), quad.p2, quad.q2)
    return num / den


@dataclass
class GrowthFit:
    """Least-squares fit of log ratio against log N."""

    family: str
    Ns: tuple[int, ...]
    ratios: tuple[float, ...]
    slope: float
    intercept: float
    residual: float  # RMS residual of the log-log fit

    def rows(self, d: int, quad: ExponentQuad, s) -> list[dict]:
        p1, q1, p2, q2 = quad.as_strs()
        return [
            {"family": self.family, "d": d, "p1": p1, "q1": q1, "p2": p2,
             "q2": q2, "s": float(s), "N": n, "ratio": r}
            for n, r in zip(self.Ns, self.ratios)
        ]


def growth_fit(family_id: str, d: int, quad: ExponentQuad, s,
               Ns) -> GrowthFit:
    """Measure witness ratios across scales and fit the growth exponent."""
    Ns = tuple(int(n) for n in Ns)
    if len(Ns) < 3 or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("need at least 3 strictly increasing scales")
    ratios = []
    for N in Ns:
        blk = witness_block(family_id, d, quad, s, N)
        ratios.append(ratio(blk, d, quad, s))
    r = np.asarray(ratios)
    if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
        raise ValueError(f"degenerate ratios {ratios} for family {family_id}")
    x = np.log(np.asarray(Ns, dtype=float))
    y = np.log(r)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return GrowthFit(family_id, Ns, tuple(float(v) for v in r),
                     float(slope), float(intercept), resid)


def growth_slope(family_id: str, d: int, quad: ExponentQuad, s, Ns) -> float:
    return growth_fit(family_id, d, quad, s, Ns).slope


def box_slope_prediction(d: int, quad: ExponentQuad, s) -> float:
    """d(1/p2 + 1/q2) - d(1/p1 + 1/q1) - s, the box-family growth exponent."""
    A, B = compute_AB(d, quad)
    return float(A + B) - float(s)


def opnorm_lower_bound(d: int, quad: ExponentQuad, s, families=None,
                       Ns=(8, 16, 32, 64)) -> dict:
    """Best certified lower bound on the shear quasi-norm from witnesses."""
    if families is None:
        families = ("row_delta", "column_delta", "antidiagonal", "box")
    best = 0.0
    by_family = {}
    for fam in families:
        vals = []
        for N in Ns:
            blk = witness_block(fam, d, quad, s, N)
            vals.append(ratio(blk, d, quad, s))
        fam_best = max(vals)
        by_family[fam] = {"ratios": vals, "best": fam_best}
        best = max(best, fam_best)
    return {"lower_bound": best, "by_family": by_family,
            "Ns": [int(n) for n in Ns]}


# ---------------------------------------------------------------------------
# discrete fractional integral (I_lam b)_k = sum_n b_{k-n} / <n>^(d-lam)
# ---------------------------------------------------------------------------

@dataclass
class FracIntegral:
    """Truncated fractional integral of a finitely supported sequence.

    values live on the index range start + [0, len); tail_bound is a sup-norm
    bound on the discarded kernel mass, by comparison with the integral of
    the kernel beyond the truncation radius.
    """

    dim: int
    start: tuple[int, ...]
    values: np.ndarray
    radius: int
    tail_bound: float

    def index_range(self, axis: int = 0):
        return self.start[axis], self.start[axis] + self.values.shape[axis] - 1


def _kernel(lam: float, d: int, R: int) -> np.ndarray:
    r = np.arange(-R, R + 1)
    if d == 1:
        br = np.sqrt(1.0 + r.astype(float) ** 2)
        return br ** (lam - d)
    grids = np.meshgrid(*([r] * d), indexing="ij")
    sq = sum(g.astype(float) ** 2 for g in grids)
    return np.sqrt(1.0 + sq) ** (lam - d)


def frac_integral_apply(b, lam: float, d: int = 1, start=None,
                        radius: int | None = None) -> FracIntegral:
    """Convolve b with the kernel <n>^(lam-d) truncated at radius R.

    R defaults to 8x the data window span with a floor of 512 so that norms
    of small-support inputs are stable under doubling R.
    """
    lam = float(lam)
    if not 0.0 < lam < d:
        raise ValueError(f"lambda must lie in (0, {d}), got {lam}")
    b = np.asarray(b, dtype=float)
    if b.ndim != d:
        raise ValueError(f"b must be a {d}-dimensional array")
    if start is None:
        start = tuple(-(m // 2) for m in b.shape)
    else:
        start = tuple(int(v) for v in np.atleast_1d(start))
    span = max(b.shape)
    if radius is None:
        radius = max(8 * span, 512)
    R = int(radius)
    ker = _kernel(lam, d, R)
    if d == 1:
        out = np.convolve(b, ker, mode="full")
    else:
        out = _convolve_nd(b, ker)
    l1 = float(np.abs(b).sum())
    tail = l1 * (1.0 + (R + 1) ** 2) ** ((lam - d) / 2.0)
    return FracIntegral(d, tuple(s - R for s in start), out, R, tail)


def _convolve_nd(b: np.ndarray, ker: np.ndarray) -> np.ndarray:
    out_shape = tuple(m + k - 1 for m, k in zip(b.shape, ker.shape))
    fb = np.fft.rfftn(b, out_shape)
    fk = np.fft.rfftn(ker, out_shape)
    return np.fft.irfftn(fb * fk, out_shape)


def lp_norm(values: np.ndarray, p) -> float:
    """Plain l^p (quasi-)norm of an array, with the same scaled accumulation."""
    from .exponents import Exponent
    from .mixed_norm import axis_pnorm

    flat = np.abs(np.asarray(values)).reshape(1, -1)
    return float(axis_pnorm(flat, Exponent.from_value(p), axis=1)[0])
