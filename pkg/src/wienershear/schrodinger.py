"""Chirp multipliers, the free propagator, and their STFT transport identities.

The chirp U_t multiplies the spectrum by exp(-i pi t |xi|^2); the free
propagator at unit time multiplies by exp(-i pi |2 xi|^2), equivalently the
dilation-conjugated chirp D_{1/2} U_1 D_2.  The central identity transports
the STFT of a chirped pair to a sheared, chirp-phased sample of the original
STFT:

    V_{U g}(U f)(x, w) = exp(-i pi |w|^2) V_g f(x - w, w),   U = U_1,

and its modulus form sampled on the lattice (k/N, n/N) is exactly the
discrete shear acting on STFT samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import decide_schrodinger
from .exponents import ExponentQuad, as_scalar
from .timefreq import (SampledSignal, TFGridSpec, dilate, fourier, gaussian,
                       inverse_fourier, stft, stft_point, tf_shift,
                       wiener_amalgam_norm)

__all__ = [
    "PropagatorSpec",
    "apply_propagator",
    "free_schrodinger_via_dilation",
    "magic_formula_residual",
    "lattice_shear_check",
    "TransportReport",
    "transport_ratio",
    "norm_transport_demo",
]


@dataclass(frozen=True)
class PropagatorSpec:
    """kind "chirp": symbol exp(-i pi t |xi|^2); "free_schrodinger": exp(-i pi t |2 xi|^2)."""

    kind: str
    t: float = 1.0

    def __post_init__(self):
        if self.kind not in ("chirp", "free_schrodinger"):
            raise ValueError(f"unknown propagator kind {self.kind!r}")

    @classmethod
    def chirp(cls, t: float = 1.0) -> "PropagatorSpec":
        return cls("chirp", float(t))

    @classmethod
    def free_schrodinger(cls, t0: float = 1.0) -> "PropagatorSpec":
        return cls("free_schrodinger", float(t0))

    def symbol(self, xi_sq: np.ndarray) -> np.ndarray:
        if self.kind == "chirp":
            return np.exp(-1j * np.pi * self.t * xi_sq)
        return np.exp(-1j * np.pi * self.t * 4.0 * xi_sq)


def _freq_sq(F: SampledSignal) -> np.ndarray:
    xi = F.axis()
    if F.dim == 1:
        return xi**2
    gx, gy = np.meshgrid(xi, xi, indexing="ij")
    return gx**2 + gy**2


def apply_propagator(spec: PropagatorSpec, f: SampledSignal) -> SampledSignal:
    """Multiply the spectrum by the propagator symbol and invert."""
    F = fourier(f)
    F.samples *= spec.symbol(_freq_sq(F))
    return inverse_fourier(F)


def free_schrodinger_via_dilation(f: SampledSignal, t0: float = 1.0) -> SampledSignal:
    """The composed path D_{1/2} chirp(t0) D_2; agrees with the direct symbol."""
    g = dilate(f, 2)
    g = apply_propagator(PropagatorSpec.chirp(t0), g)
    return dilate(g, 0.5)


def _chirp_pair(f: SampledSignal, g: SampledSignal):
    U = PropagatorSpec.chirp(1.0)
    return apply_propagator(U, f), apply_propagator(U, g)


def magic_formula_residual(f: SampledSignal, g: SampledSignal, points) -> float:
    """Max relative residual of the chirp transport identity over the points.

    Points snap to the sample grid in both slots so the sheared argument
    x - w stays aligned.
    """
    cf, cg = _chirp_pair(f, g)
    worst = 0.0
    for x, w in points:
        if f.dim == 1:
            x = round(float(x) / f.h) * f.h
            w = round(float(w) / f.h) * f.h
            wsq = w * w
            shift_x = x - w
        else:
            x = np.array([round(float(v) / f.h) * f.h for v in np.atleast_1d(x)])
            w = np.array([round(float(v) / f.h) * f.h for v in np.atleast_1d(w)])
            wsq = float((w**2).sum())
            shift_x = x - w
        lhs = stft_point(cf, cg, x, w)
        ref = stft_point(f, g, shift_x, w)
        rhs = np.exp(-1j * np.pi * wsq) * ref
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(ref)))
    return worst


def lattice_shear_check(f: SampledSignal, g: SampledSignal, N: int,
                        K: int) -> float:
    """Modulus form of the transport identity on the lattice (k/N, n/N), |k|,|n| <= K."""
    if f.dim != 1:
        raise ValueError("lattice check is 1-dimensional")
    step = 1.0 / N
    if abs(round(step / f.h) * f.h - step) > 1e-12:
        raise ValueError(f"lattice step 1/{N} is not aligned to h={f.h}")
    cf, cg = _chirp_pair(f, g)
    lhs = stft(cf, cg, TFGridSpec(step, step, K, K)).values
    rhs_grid = stft(f, g, TFGridSpec(step, step, 2 * K, K)).values
    worst = 0.0
    ks = np.arange(-K, K + 1)
    for i, k in enumerate(ks):
        for j, n in enumerate(ks):
            ref = rhs_grid[(k - n) + 2 * K, j]
            diff = abs(abs(lhs[i, j]) - abs(ref))
            worst = max(worst, diff / (1.0 + abs(ref)))
    return worst


# ---------------------------------------------------------------------------
# norm transport demonstration
# ---------------------------------------------------------------------------

@dataclass
class TransportReport:
    quad: ExponentQuad
    s: float
    family: str
    scales: tuple[int, ...]
    ratios: tuple[float, ...]
    bounded_verdict: bool
    doubling_factors: tuple[float, ...]
    consistent: bool

    def to_dict(self) -> dict:
        p1, q1, p2, q2 = self.quad.as_strs()
        return {
            "quad": {"p1": p1, "q1": q1, "p2": p2, "q2": q2},
            "s": self.s,
            "family": self.family,
            "scales": list(self.scales),
            "ratios": list(self.ratios),
            "bounded_verdict": self.bounded_verdict,
            "doubling_factors": list(self.doubling_factors),
            "consistent": self.consistent,
        }


def transport_ratio(f: SampledSignal, quad: ExponentQuad, s,
                    grid_in: TFGridSpec | None = None,
                    grid_out: TFGridSpec | None = None,
                    window: SampledSignal | None = None) -> float:
    """|| e^{i Delta} f ||_{W^{p2,q2}} / || f ||_{W^{p1,q1}_{1 (x) v_s}}."""
    if window is None:
        window = gaussian(f.L, f.h)
    uf = apply_propagator(PropagatorSpec.free_schrodinger(1.0), f)
    num = wiener_amalgam_norm(uf, window, quad.p2, quad.q2, 0.0, grid_out)
    den = wiener_amalgam_norm(f, window, quad.p1, quad.q1, float(as_scalar(s)),
                              grid_in)
    if den == 0.0:
        raise ZeroDivisionError("zero source norm")
    return num / den


def _gabor_sum_family(family: str, N: int, L: int, h: float,
                      beta: float = 0.5) -> SampledSignal:
    """Finite Gabor superposition mimicking a witness family.

    Atoms pi(k, beta*n) applied to a unit Gaussian, with (k, n) running over
    the family's support at scale N.
    """
    window = gaussian(L, h)
    acc = np.zeros(L, dtype=complex)
    if family == "box":
        supp = [(k, n) for k in range(-2 * N, 2 * N + 1)
                for n in range(-N, N + 1)]
    elif family == "column_delta":
        supp = [(0, n) for n in range(-N, N + 1)]
    elif family == "row_delta":
        supp = [(k, 0) for k in range(-N, N + 1)]
    elif family == "antidiagonal":
        supp = [(k, -k) for k in range(-N, N + 1)]
    else:
        raise ValueError(f"no signal family for {family!r}")
    for k, n in supp:
        acc += tf_shift(window, float(k), beta * n).samples
    return SampledSignal(1, L, h, acc)


def norm_transport_demo(quad: ExponentQuad, s, scales=(4, 8, 16),
                        family: str | None = None, L: int = 4096,
                        h: float = 1 / 32, beta: float = 0.25) -> TransportReport:
    """Transport the witness family through Gabor synthesis and compare norms.

    Ratios along the family must stay bounded when the verdict is bounded and
    must grow when it is unbounded; the "gaussian" pseudo-family sweeps
    widths instead of lattice scales.  The propagator moves the frequency-n
    component by about 4 beta n in position, so the domain and the norm grid
    must cover 2N + 4 beta N plus window tails.
    """
    s = float(as_scalar(s))
    verdict = decide_schrodinger(1, quad, s)
    if family is None:
        family = verdict.witness_hint or "box"
    window = gaussian(L, h)
    xmax = 2 * max(scales) * 1.0 + 4 * beta * max(scales) + 10
    ximax = beta * max(scales) + 6
    if xmax > L * h / 2:
        raise ValueError(f"domain extent {L * h} too small for scales {scales}")
    grid = TFGridSpec(x_step=0.5, xi_step=0.25,
                      x_count=int(math.ceil(xmax / 0.5)),
                      xi_count=int(math.ceil(ximax / 0.25)))
    ratios = []
    for N in scales:
        if family == "gaussian":
            f = gaussian(L, h, width=float(N))
        else:
            f = _gabor_sum_family(family, int(N), L, h, beta)
        ratios.append(transport_ratio(f, quad, s, grid, grid, window))
    factors = tuple(ratios[i + 1] / ratios[i] for i in range(len(ratios) - 1))
    if verdict.bounded:
        consistent = all(fac <= 1.25 for fac in factors)
    else:
        consistent = all(fac >= 1.1 for fac in factors)
    return TransportReport(quad, s, family, tuple(int(n) for n in scales),
                           tuple(ratios), verdict.bounded, factors, consistent)
