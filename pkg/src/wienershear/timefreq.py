"""Sampled signals, the Fourier transform, time-frequency shifts, and the STFT.

Functions on R^d are modeled as periodic sampled signals on a centered grid:
index j corresponds to t = (j - L/2) h, so the domain is [-Lh/2, Lh/2).  The
transform convention is f^(xi) = int f(t) exp(-2 pi i t xi) dt, realized as a
Riemann sum; with the default grid (L = 1024, h = 1/32) the frequency grid
has the same spacing as the time grid, so points snapped to the time grid
are aligned in both domains.

STFT values are evaluated at exact requested frequencies (not DFT bins), so
the algebraic identities in this module hold to near machine precision for
well-contained signals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exponents import Exponent

__all__ = [
    "SampledSignal",
    "TFGridSpec",
    "TFGrid",
    "gaussian",
    "hermite",
    "chirped_gaussian",
    "bandlimited_noise",
    "constant_signal",
    "fourier",
    "inverse_fourier",
    "tf_shift",
    "dilate",
    "stft",
    "stft_point",
    "check_fundamental_identity",
    "check_scaling",
    "wiener_amalgam_norm",
    "modulation_norm",
    "save_signal",
    "load_signal",
]


@dataclass
class SampledSignal:
    """Complex samples of a function on a centered periodic grid.

    dim in {1, 2}; samples has shape (L,)*dim; index j <-> t = (j - L/2) h.
    """

    dim: int
    L: int
    h: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.L % 2 != 0:
            raise ValueError("L must be even")
        if self.h <= 0:
            raise ValueError("h must be positive")
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (self.L,) * self.dim:
            raise ValueError(
                f"samples shape {self.samples.shape} != {(self.L,) * self.dim}")

    @property
    def period(self) -> float:
        return self.L * self.h

    @property
    def freq_step(self) -> float:
        return 1.0 / (self.L * self.h)

    def axis(self) -> np.ndarray:
        return (np.arange(self.L) - self.L // 2) * self.h

    def norm2(self) -> float:
        return math.sqrt(self.h**self.dim * float(np.sum(np.abs(self.samples) ** 2)))

    def inner(self, other: "SampledSignal") -> complex:
        self._check_grid(other)
        return self.h**self.dim * complex(
            np.sum(self.samples * np.conj(other.samples)))

    def _check_grid(self, other: "SampledSignal"):
        if (self.dim, self.L) != (other.dim, other.L) or \
                not math.isclose(self.h, other.h, rel_tol=1e-12):
            raise ValueError("signals live on different grids")

    def copy(self) -> "SampledSignal":
        return SampledSignal(self.dim, self.L, self.h, self.samples.copy())


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _grid_eval(L: int, h: float, dim: int, func) -> SampledSignal:
    t = (np.arange(L) - L // 2) * h
    if dim == 1:
        vals = func(t)
    else:
        tx, ty = np.meshgrid(t, t, indexing="ij")
        vals = func(tx, ty)
    return SampledSignal(dim, L, h, np.asarray(vals, dtype=complex))


def gaussian(L: int = 1024, h: float = 1 / 32, width: float = 1.0,
             dim: int = 1) -> SampledSignal:
    """exp(-pi (t/width)^2); width 1 is the transform's fixed point."""
    if dim == 1:
        return _grid_eval(L, h, 1, lambda t: np.exp(-np.pi * (t / width) ** 2))
    return _grid_eval(L, h, 2,
                      lambda x, y: np.exp(-np.pi * (x**2 + y**2) / width**2))


def hermite(L: int = 1024, h: float = 1 / 32, k: int = 1) -> SampledSignal:
    """k-th Hermite function H_k(sqrt(2 pi) t) exp(-pi t^2), unit L2 norm."""
    from numpy.polynomial.hermite import hermval

    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    sig = _grid_eval(
        L, h, 1,
        lambda t: hermval(np.sqrt(2 * np.pi) * t, coeffs) * np.exp(-np.pi * t**2))
    nrm = sig.norm2()
    sig.samples /= nrm
    return sig


def chirped_gaussian(L: int = 1024, h: float = 1 / 32, rate: float = 1.0,
                     width: float = 1.0) -> SampledSignal:
    return _grid_eval(
        L, h, 1,
        lambda t: np.exp(-np.pi * (t / width) ** 2 + 1j * np.pi * rate * t**2))


def bandlimited_noise(L: int = 1024, h: float = 1 / 32, seed: int = 0,
                      band: float = 4.0) -> SampledSignal:
    """Seeded random signal with spectrum supported in |xi| <= band, unit L2."""
    rng = np.random.default_rng(seed)
    xi = (np.arange(L) - L // 2) / (L * h)
    mask = np.abs(xi) <= band
    spec = np.zeros(L, dtype=complex)
    spec[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
    sig = inverse_fourier(SampledSignal(1, L, 1.0 / (L * h), spec))
    sig.samples /= sig.norm2()
    return sig


def constant_signal(L: int = 1024, h: float = 1 / 32, value=1.0,
                    dim: int = 1) -> SampledSignal:
    return SampledSignal(dim, L, h, np.full((L,) * dim, value, dtype=complex))


# ---------------------------------------------------------------------------
# Fourier transform on the grid
# ---------------------------------------------------------------------------

def fourier(f: SampledSignal) -> SampledSignal:
    """Grid realization of f^(xi) = int f(t) exp(-2 pi i t xi) dt.

    Output spacing is 1/(L h); fourier(fourier(f))(t) = f(-t).
    """
    x = np.fft.ifftshift(f.samples)
    X = np.fft.fftn(x) if f.dim > 1 else np.fft.fft(x)
    X = np.fft.fftshift(X) * f.h**f.dim
    return SampledSignal(f.dim, f.L, f.freq_step, X)


def inverse_fourier(F: SampledSignal) -> SampledSignal:
    """Inverse of fourier; output spacing 1/(L h) of the input grid."""
    X = np.fft.ifftshift(F.samples)
    x = np.fft.ifftn(X) if F.dim > 1 else np.fft.ifft(X)
    x = np.fft.fftshift(x) * (F.L * F.h) ** F.dim
    return SampledSignal(F.dim, F.L, 1.0 / (F.L * F.h), x)


def _snap(value: float, step: float, label: str) -> int:
    k = round(value / step)
    if not math.isclose(k * step, value, rel_tol=0.0, abs_tol=step * 1e-9):
        warnings.warn(
            f"{label}={value} not aligned to step {step}; snapped to {k * step}",
            stacklevel=3)
    return k


def tf_shift(f: SampledSignal, x, xi) -> SampledSignal:
    """Time-frequency shift M_xi T_x f = exp(2 pi i xi t) f(t - x).

    x snaps to the sample grid and xi to the frequency grid (with a warning
    when not aligned), keeping the result exactly periodic.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    shifts = [_snap(v, f.h, "x") for v in x[:f.dim]]
    fbins = [_snap(v, f.freq_step, "xi") for v in xi[:f.dim]]
    out = np.roll(f.samples, shifts, axis=tuple(range(f.dim)))
    t = f.axis()
    if f.dim == 1:
        out = out * np.exp(2j * np.pi * (fbins[0] * f.freq_step) * t)
    else:
        tx, ty = np.meshgrid(t, t, indexing="ij")
        out = out * np.exp(2j * np.pi * ((fbins[0] * f.freq_step) * tx
                                         + (fbins[1] * f.freq_step) * ty))
    return SampledSignal(f.dim, f.L, f.h, out)


# ---------------------------------------------------------------------------
# dilation by 2 and 1/2
# ---------------------------------------------------------------------------

def _upsample2(std: np.ndarray) -> np.ndarray:
    """Band-limited 2x upsampling of a standard-order 1-D signal."""
    L = std.size
    X = np.fft.fft(std)
    Y = np.zeros(2 * L, dtype=complex)
    Y[: L // 2] = X[: L // 2]
    Y[L // 2] = X[L // 2] / 2
    Y[2 * L - L // 2] = X[L // 2] / 2
    Y[2 * L - L // 2 + 1:] = X[L // 2 + 1:]
    return np.fft.ifft(Y) * 2


def dilate(f: SampledSignal, lam) -> SampledSignal:
    """D_lam f(t) = f(lam t) for lam in {2, 1/2}.

    lam = 2 keeps every other sample (halved extent); lam = 1/2 upsamples by
    frequency zero-padding (doubled extent).  The spacing h is unchanged.
    """
    lam = float(lam)
    if lam == 2.0:
        if f.L % 4 != 0:
            raise ValueError("L must be divisible by 4 for dilation by 2")
        std = np.fft.ifftshift(f.samples)
        for ax in range(f.dim):
            std = np.take(std, np.arange(0, f.L, 2), axis=ax)
        return SampledSignal(f.dim, f.L // 2, f.h, np.fft.fftshift(std))
    if lam == 0.5:
        std = np.fft.ifftshift(f.samples)
        if f.dim == 1:
            up = _upsample2(std)
        else:
            up = np.apply_along_axis(_upsample2, 0, std)
            up = np.apply_along_axis(_upsample2, 1, up)
        return SampledSignal(f.dim, 2 * f.L, f.h, np.fft.fftshift(up))
    raise ValueError("lam must be 2 or 1/2")


# ---------------------------------------------------------------------------
# STFT
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TFGridSpec:
    """Symmetric lattice j*x_step, l*xi_step with |j| <= x_count, |l| <= xi_count."""

    x_step: float
    xi_step: float
    x_count: int
    xi_count: int

    def x_values(self) -> np.ndarray:
        return np.arange(-self.x_count, self.x_count + 1) * self.x_step

    def xi_values(self) -> np.ndarray:
        return np.arange(-self.xi_count, self.xi_count + 1) * self.xi_step


@dataclass
class TFGrid:
    """STFT samples on a lattice; for d = 2 the index axes come in pairs."""

    dim: int
    spec: TFGridSpec
    values: np.ndarray = field(repr=False)

    def x_values(self) -> np.ndarray:
        return self.spec.x_values()

    def xi_values(self) -> np.ndarray:
        return self.spec.xi_values()


def _window_products(f: SampledSignal, g: SampledSignal,
                     xvals: np.ndarray) -> np.ndarray:
    """Stack of f * conj(g(. - x)) for each lattice position x (1-D only)."""
    shifts = [_snap(x, f.h, "x") for x in xvals]
    out = np.empty((len(shifts), f.L), dtype=complex)
    for i, s in enumerate(shifts):
        out[i] = f.samples * np.conj(np.roll(g.samples, s))
    return out


def _freq_matrix(t: np.ndarray, xivals: np.ndarray, h: float) -> np.ndarray:
    return np.exp(-2j * np.pi * np.outer(t, xivals)) * h


def stft(f: SampledSignal, g: SampledSignal, grid: TFGridSpec) -> TFGrid:
    """V_g f on the lattice: transform of t -> f(t) conj(g(t-x)) at exact xi."""
    f._check_grid(g)
    if not np.any(np.abs(g.samples) > 0):
        raise ValueError("window must be nonzero")
    if f.dim == 1:
        U = _window_products(f, g, grid.x_values())
        E = _freq_matrix(f.axis(), grid.xi_values(), f.h)
        return TFGrid(1, grid, U @ E)
    # d = 2: separable frequency transform per axis
    xv = grid.x_values()
    xiv = grid.xi_values()
    t = f.axis()
    E = np.exp(-2j * np.pi * np.outer(t, xiv))
    nx, nxi = len(xv), len(xiv)
    vals = np.empty((nx, nx, nxi, nxi), dtype=complex)
    sx = [_snap(x, f.h, "x") for x in xv]
    for i1, s1 in enumerate(sx):
        for i2, s2 in enumerate(sx):
            u = f.samples * np.conj(np.roll(g.samples, (s1, s2), axis=(0, 1)))
            vals[i1, i2] = (E.T @ u @ E) * f.h**2
    return TFGrid(2, grid, vals)


def stft_point(f: SampledSignal, g: SampledSignal, x, xi) -> complex:
    """Single STFT value V_g f(x, xi); x snaps to the grid, xi is exact."""
    f._check_grid(g)
    if f.dim == 1:
        s = _snap(float(x), f.h, "x")
        u = f.samples * np.conj(np.roll(g.samples, s))
        t = f.axis()
        return complex(np.sum(u * np.exp(-2j * np.pi * t * float(xi))) * f.h)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    s = [_snap(v, f.h, "x") for v in x]
    u = f.samples * np.conj(np.roll(g.samples, s, axis=(0, 1)))
    t = f.axis()
    ph1 = np.exp(-2j * np.pi * t * xi[0])
    ph2 = np.exp(-2j * np.pi * t * xi[1])
    return complex(ph1 @ u @ ph2 * f.h**2)


def _snap_points(points, h: float):
    """Snap (x, xi) pairs so both coordinates are h-aligned (self-dual grid)."""
    snapped = []
    for x, xi in points:
        snapped.append((round(float(x) / h) * h, round(float(xi) / h) * h))
    return snapped


def check_fundamental_identity(f: SampledSignal, g: SampledSignal,
                               points) -> float:
    """Max relative residual of V_g f(x,xi) = e^{-2 pi i x xi} V_g^ f^(xi,-x)."""
    fh = fourier(f)
    gh = fourier(g)
    worst = 0.0
    for x, xi in _snap_points(points, f.h):
        lhs = stft_point(f, g, x, xi)
        rhs = np.exp(-2j * np.pi * x * xi) * stft_point(fh, gh, xi, -x)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return worst


def check_scaling(f: SampledSignal, g: SampledSignal, points) -> float:
    """Max relative residual of V_{D_half g}(D_half f)(x, w) = 2^d V_g f(x/2, 2w)."""
    fd = dilate(f, 0.5)
    gd = dilate(g, 0.5)
    worst = 0.0
    for x, w in points:
        # snap x to 2h so x/2 stays grid-aligned
        x = round(float(x) / (2 * f.h)) * (2 * f.h)
        w = float(w)
        lhs = stft_point(fd, gd, x, w)
        rhs = 2.0**f.dim * stft_point(f, g, x / 2.0, 2.0 * w)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return worst


# ---------------------------------------------------------------------------
# continuous mixed norms of the STFT (Riemann sums on the lattice)
# ---------------------------------------------------------------------------

def _bracket_pow(xi: np.ndarray, s: float) -> np.ndarray:
    return (1.0 + xi**2) ** (s / 2.0)


def _riemann_pnorm(x: np.ndarray, p: Exponent, axis, cell: float) -> np.ndarray:
    """(int |x|^p dmu)^(1/p) along an axis, or sup for p = inf."""
    if p.is_inf:
        return x.max(axis=axis)
    pf = 1.0 / float(p.recip)
    m = x.max(axis=axis, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = ((x / safe) ** pf).sum(axis=axis) * cell
    out = np.squeeze(safe, axis=axis) * s ** (1.0 / pf)
    return np.where(np.squeeze(m, axis=axis) > 0, out, 0.0)


def _grid_mixed_norm(tfg: TFGrid, p: Exponent, q: Exponent, s: float,
                     inner: str, weight_slot: str) -> tuple[float, float]:
    """Weighted mixed Riemann norm of |V|; returns (value, boundary fraction).

    inner "xi": amalgam order (inner frequency with q, outer position p);
    inner "x": modulation order (inner position with p, outer frequency q).
    """
    absV = np.abs(tfg.values)
    xs = tfg.spec.x_step
    xis = tfg.spec.xi_step
    xv = tfg.x_values()
    xiv = tfg.xi_values()
    if tfg.dim == 1:
        wx = _bracket_pow(xv, s) if weight_slot == "time" else np.ones_like(xv)
        wxi = _bracket_pow(xiv, s) if weight_slot == "freq" else np.ones_like(xiv)
        W = absV * wx[:, None] * wxi[None, :]
        if inner == "xi":
            inner_vals = _riemann_pnorm(W, q, axis=1, cell=xis)
            val = float(_riemann_pnorm(inner_vals.reshape(1, -1), p, axis=1,
                                       cell=xs)[0])
        else:
            inner_vals = _riemann_pnorm(W, p, axis=0, cell=xs)
            val = float(_riemann_pnorm(inner_vals.reshape(1, -1), q, axis=1,
                                       cell=xis)[0])
        boundary = max(absV[0].max(), absV[-1].max(), absV[:, 0].max(),
                       absV[:, -1].max())
        peak = absV.max()
        return val, boundary / peak if peak > 0 else 0.0
    # d = 2: flatten position pairs and frequency pairs
    nx = len(xv)
    nxi = len(xiv)
    A2 = absV.reshape(nx * nx, nxi * nxi)
    gx = np.stack(np.meshgrid(xv, xv, indexing="ij"), axis=-1).reshape(-1, 2)
    gxi = np.stack(np.meshgrid(xiv, xiv, indexing="ij"), axis=-1).reshape(-1, 2)
    brx = (1.0 + (gx**2).sum(axis=1)) ** (s / 2.0)
    brxi = (1.0 + (gxi**2).sum(axis=1)) ** (s / 2.0)
    wx = brx if weight_slot == "time" else np.ones(nx * nx)
    wxi = brxi if weight_slot == "freq" else np.ones(nxi * nxi)
    W = A2 * wx[:, None] * wxi[None, :]
    if inner == "xi":
        iv = _riemann_pnorm(W, q, axis=1, cell=xis**2)
        val = float(_riemann_pnorm(iv.reshape(1, -1), p, axis=1, cell=xs**2)[0])
    else:
        iv = _riemann_pnorm(W, p, axis=0, cell=xs**2)
        val = float(_riemann_pnorm(iv.reshape(1, -1), q, axis=1, cell=xis**2)[0])
    peak = absV.max()
    edge = max(absV[0].max(), absV[-1].max(), absV[:, 0].max(), absV[:, -1].max())
    return val, edge / peak if peak > 0 else 0.0


DEFAULT_NORM_GRID = TFGridSpec(x_step=0.25, xi_step=0.25, x_count=32, xi_count=32)


def wiener_amalgam_norm(f: SampledSignal, g: SampledSignal, p, q, s,
                        grid: TFGridSpec | None = None,
                        with_report: bool = False):
    """Riemann approximation of the amalgam norm: inner xi with weight v_s, outer x."""
    grid = grid or DEFAULT_NORM_GRID
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    tfg = stft(f, g, grid)
    val, edge = _grid_mixed_norm(tfg, p, q, float(s), inner="xi",
                                 weight_slot="freq")
    if edge > 1e-6:
        warnings.warn(f"norm grid boundary holds {edge:.2e} of the STFT peak; "
                      "enlarge the grid", stacklevel=2)
    if with_report:
        return val, {"boundary_fraction": edge, "grid": grid}
    return val


def modulation_norm(f: SampledSignal, g: SampledSignal, p, q, s,
                    grid: TFGridSpec | None = None,
                    weight_slot: str = "freq",
                    with_report: bool = False):
    """Riemann norm with integration order exchanged: inner x with p, outer xi."""
    grid = grid or DEFAULT_NORM_GRID
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    tfg = stft(f, g, grid)
    val, edge = _grid_mixed_norm(tfg, p, q, float(s), inner="x",
                                 weight_slot=weight_slot)
    if edge > 1e-6:
        warnings.warn(f"norm grid boundary holds {edge:.2e} of the STFT peak; "
                      "enlarge the grid", stacklevel=2)
    if with_report:
        return val, {"boundary_fraction": edge, "grid": grid}
    return val


# ---------------------------------------------------------------------------
# signal I/O
# ---------------------------------------------------------------------------

_SIG_MAGIC = "# wienershear signal v1"


def save_signal(f: SampledSignal, path) -> None:
    with open(path, "w") as fh:
        fh.write(_SIG_MAGIC + "\n")
        fh.write(f"dim {f.dim}\n")
        fh.write(f"L {f.L}\n")
        fh.write(f"h {f.h:.17g}\n")
        for z in f.samples.reshape(-1):
            fh.write(f"{z.real:.17g},{z.imag:.17g}\n")


def load_signal(path) -> SampledSignal:
    with open(path) as fh:
        lines = fh.readlines()
    try:
        if lines[0].strip() != _SIG_MAGIC:
            raise ValueError("missing signal header")
        dim = int(lines[1].split()[1])
        L = int(lines[2].split()[1])
        h = float(lines[3].split()[1])
        data = []
        for ln in lines[4:]:
            ln = ln.strip()
            if not ln:
                continue
            re_s, im_s = ln.split(",")
            data.append(complex(float(re_s), float(im_s)))
        samples = np.array(data, dtype=complex).reshape((L,) * dim)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed signal file: {exc}") from exc
    return SampledSignal(dim, L, h, samples)
