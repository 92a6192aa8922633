"""Finite discrete Gabor frames: analysis, synthesis, duals, frame bounds.

The finite model lives on periodic length-L signals with lattice steps a
(time, dividing L) and b (frequency bins, dividing L); atoms are
g_{j,l}[m] = exp(2 pi i b l m / L) g[m - a j].  Inner products here are plain
counting-measure sums, so frame bounds match dense-matrix eigenvalues
directly (the grid spacing h plays no role in this module's algebra).

Frame bounds come from power iteration on the frame operator S and on its
spectral reflection; dual windows from conjugate gradients on S, which is
Hermitian positive definite exactly when the system is a frame.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exponents import Exponent
from .mixed_norm import Block, mixed_norm_2d
from .timefreq import SampledSignal

__all__ = [
    "GaborSystem",
    "FrameBounds",
    "analysis",
    "synthesis",
    "frame_apply",
    "frame_matrix",
    "frame_bounds",
    "walnut_check",
    "dual_window",
    "canonical_tight_window",
    "gabor_wiener_norm",
]


@dataclass
class GaborSystem:
    """Lattice a Z_{L/a} x b Z_{L/b} with window g (a 1-d SampledSignal of length L)."""

    L: int
    a: int
    b: int
    g: SampledSignal

    def __post_init__(self):
        if self.g.dim != 1 or self.g.L != self.L:
            raise ValueError("window must be a 1-d signal of length L")
        if self.L % self.a or self.L % self.b:
            raise ValueError("a and b must divide L")

    @property
    def shifts(self) -> int:
        return self.L // self.a

    @property
    def mods(self) -> int:
        return self.L // self.b

    @property
    def redundancy(self) -> float:
        return self.L / (self.a * self.b)

    def window_array(self) -> np.ndarray:
        return self.g.samples


def analysis(sys: GaborSystem, f: SampledSignal) -> Block:
    """Coefficients c_{j,l} = <f, M_{bl} T_{aj} g> over the full lattice."""
    if f.dim != 1 or f.L != sys.L:
        raise ValueError("signal must be 1-d of length L")
    garr = sys.window_array()
    c = np.empty((sys.shifts, sys.mods), dtype=complex)
    for j in range(sys.shifts):
        u = f.samples * np.conj(np.roll(garr, sys.a * j))
        c[j] = np.fft.fft(u)[:: sys.b]
    return Block(1, (0, sys.shifts - 1), (0, sys.mods - 1), c)


def synthesis(sys: GaborSystem, c: Block) -> SampledSignal:
    """f = sum_{j,l} c_{j,l} M_{bl} T_{aj} g; the adjoint of analysis."""
    if c.dim != 1 or c.values.shape != (sys.shifts, sys.mods):
        raise ValueError("coefficient block does not match the lattice")
    garr = sys.window_array()
    out = np.zeros(sys.L, dtype=complex)
    spread = np.zeros(sys.L, dtype=complex)
    for j in range(sys.shifts):
        spread[:] = 0.0
        spread[:: sys.b] = c.values[j]
        v = np.fft.ifft(spread) * sys.L
        out += v * np.roll(garr, sys.a * j)
    return SampledSignal(1, sys.L, sys.g.h, out)


def frame_apply(sys: GaborSystem, x: np.ndarray) -> np.ndarray:
    """S x as a raw array operation (synthesis after analysis)."""
    garr = sys.window_array()
    out = np.zeros(sys.L, dtype=complex)
    spread = np.zeros(sys.L, dtype=complex)
    for j in range(sys.shifts):
        shifted = np.roll(garr, sys.a * j)
        coeff = np.fft.fft(x * np.conj(shifted))[:: sys.b]
        spread[:] = 0.0
        spread[:: sys.b] = coeff
        out += np.fft.ifft(spread) * sys.L * shifted
    return out


def frame_matrix(sys: GaborSystem) -> np.ndarray:
    """Dense L x L matrix of the frame operator (small L only)."""
    S = np.empty((sys.L, sys.L), dtype=complex)
    e = np.zeros(sys.L, dtype=complex)
    for m in range(sys.L):
        e[:] = 0.0
        e[m] = 1.0
        S[:, m] = frame_apply(sys, e)
    return S


@dataclass
class FrameBounds:
    A: float
    B: float
    is_frame: bool
    converged: bool
    iterations: int

    def to_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "is_frame": self.is_frame,
                "converged": self.converged, "iterations": self.iterations}


def _power_iteration(op, L: int, tol: float, maxiter: int, seed: int):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    x /= np.linalg.norm(x)
    lam = 0.0
    for it in range(1, maxiter + 1):
        y = op(x)
        new = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, True, it
        x = y / ny
        if it > 1 and abs(new - lam) <= tol * max(1.0, abs(new)):
            return new, True, it
        lam = new
    return lam, False, maxiter


def frame_bounds(sys: GaborSystem, tol: float = 1e-12,
                 maxiter: int = 2000, seed: int = 0) -> FrameBounds:
    """Extremal eigenvalue estimates of S by power iteration on S and B*I - S."""
    B, ok1, it1 = _power_iteration(lambda x: frame_apply(sys, x), sys.L,
                                   tol, maxiter, seed)
    shift = B * (1.0 + 1e-6) + 1e-30
    mu, ok2, it2 = _power_iteration(
        lambda x: shift * x - frame_apply(sys, x), sys.L, tol, maxiter, seed + 1)
    A = shift - mu
    converged = ok1 and ok2
    if not converged:
        warnings.warn("power iteration did not converge; bounds are estimates",
                      stacklevel=2)
    is_frame = A > max(1e-10 * max(B, 1.0), 0.0)
    return FrameBounds(float(A), float(B), bool(is_frame), converged, it1 + it2)


def walnut_check(g: SampledSignal, a: int) -> tuple[float, float]:
    """Min and max over x of sum_k |g(x - a k)|^2 (the periodized window energy)."""
    if g.dim != 1:
        raise ValueError("walnut_check is 1-dimensional")
    if g.L % a:
        raise ValueError("a must divide L")
    env = (np.abs(g.samples) ** 2).reshape(g.L // a, a).sum(axis=0)
    return float(env.min()), float(env.max())


def dual_window(sys: GaborSystem, rel_tol: float = 1e-13,
                maxiter: int | None = None) -> SampledSignal:
    """Canonical dual gamma = S^{-1} g by conjugate gradients on S."""
    if maxiter is None:
        maxiter = 10 * sys.L
    bvec = sys.window_array().astype(complex)
    x = np.zeros_like(bvec)
    r = bvec - frame_apply(sys, x)
    p = r.copy()
    rs = float(np.real(np.vdot(r, r)))
    b0 = math.sqrt(float(np.real(np.vdot(bvec, bvec))))
    for _ in range(maxiter):
        if math.sqrt(rs) <= rel_tol * b0:
            break
        Sp = frame_apply(sys, p)
        denom = float(np.real(np.vdot(p, Sp)))
        if denom <= 0.0:
            raise ArithmeticError(
                "frame operator is not positive definite (not a frame?)")
        alpha = rs / denom
        x += alpha * p
        r -= alpha * Sp
        rs_new = float(np.real(np.vdot(r, r)))
        p = r + (rs_new / rs) * p
        rs = rs_new
    else:
        fb = frame_bounds(sys)
        raise ArithmeticError(
            f"conjugate gradients did not reach {rel_tol:g} in {maxiter} "
            f"iterations (B/A ~ {fb.B / max(fb.A, 1e-300):.3g})")
    return SampledSignal(1, sys.L, sys.g.h, x)


def canonical_tight_window(sys: GaborSystem) -> SampledSignal:
    """S^{-1/2} g via dense eigendecomposition; O(L^3), desk scale only."""
    S = frame_matrix(sys)
    w, V = np.linalg.eigh((S + S.conj().T) / 2)
    if w.min() <= 0:
        raise ArithmeticError("frame operator not positive definite")
    inv_sqrt = (V * (w**-0.5)) @ V.conj().T
    return SampledSignal(1, sys.L, sys.g.h, inv_sqrt @ sys.window_array())


def gabor_wiener_norm(sys: GaborSystem, f: SampledSignal, p, q, s) -> float:
    """Amalgam-type sequence norm of the Gabor coefficients.

    l^{(p,q)} of c_{j,l} weighted by v_s evaluated at the physical lattice
    frequencies b l / (L h) (centered representatives), the discrete
    equivalent-norm realization.
    """
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    c = analysis(sys, f)
    mods = sys.mods
    l = np.arange(mods)
    l_center = np.where(l < (mods + 1) // 2, l, l - mods)
    freqs = l_center * (sys.b / (sys.L * sys.g.h))
    wn = (1.0 + freqs**2) ** (float(s) / 2.0)
    absc = np.abs(c.values)
    return mixed_norm_2d(absc, outer=p, inner=q, wk=None, wn=wn, inner_axis=1)
