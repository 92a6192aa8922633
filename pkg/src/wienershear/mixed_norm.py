"""Weighted discrete mixed (quasi-)norms on finitely supported blocks.

A Block is a finitely supported sequence a_{k,n} on Z^d x Z^d, stored densely
over a rectangular index window; it is zero outside the window.  Two norm
orders are provided for the full range 0 < p, q <= inf:

  norm_lpq:        ( sum_n ( sum_k |a m|^p )^(q/p) )^(1/q)    inner k, outer n
  norm_l_paren_pq: ( sum_k ( sum_n |a m|^q )^(p/q) )^(1/p)    inner n, outer k

with suprema replacing sums at infinite exponents.  Power sums are taken
after factoring out the slice maximum so quasi-norms with p < 1 stay inside
floating-point range on large windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponents import Exponent, WeightSpec

__all__ = [
    "Block",
    "norm_lpq",
    "norm_l_paren_pq",
    "axis_pnorm",
    "mixed_norm_2d",
    "save_block",
    "load_block",
]


def _win_size(win) -> int:
    return win[1] - win[0] + 1


@dataclass
class Block:
    """Finitely supported sequence on Z^d x Z^d over a rectangular window.

    values has shape (K,)*dim + (N,)*dim where K, N are the per-axis window
    lengths; entry [k - k0, ..., n - n0, ...] holds a_{k,n}.
    """

    dim: int
    k_window: tuple[int, int]
    n_window: tuple[int, int]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.k_window = (int(self.k_window[0]), int(self.k_window[1]))
        self.n_window = (int(self.n_window[0]), int(self.n_window[1]))
        if self.k_window[0] > self.k_window[1] or self.n_window[0] > self.n_window[1]:
            raise ValueError("window bounds must satisfy lo <= hi")
        self.values = np.asarray(self.values, dtype=complex)
        expect = (self.k_size,) * self.dim + (self.n_size,) * self.dim
        if self.values.shape != expect:
            raise ValueError(f"values shape {self.values.shape} != {expect}")

    @property
    def k_size(self) -> int:
        return _win_size(self.k_window)

    @property
    def n_size(self) -> int:
        return _win_size(self.n_window)

    @classmethod
    def zeros(cls, dim, k_window, n_window) -> "Block":
        shape = (_win_size(k_window),) * dim + (_win_size(n_window),) * dim
        return cls(dim, tuple(k_window), tuple(n_window), np.zeros(shape, complex))

    @classmethod
    def delta(cls, dim, k, n, k_window=None, n_window=None) -> "Block":
        k = tuple(np.atleast_1d(k).astype(int))
        n = tuple(np.atleast_1d(n).astype(int))
        if k_window is None:
            k_window = (min(k), max(k))
        if n_window is None:
            n_window = (min(n), max(n))
        b = cls.zeros(dim, k_window, n_window)
        idx = tuple(ki - k_window[0] for ki in k) + tuple(ni - n_window[0] for ni in n)
        b.values[idx] = 1.0
        return b

    @classmethod
    def ones(cls, dim, k_window, n_window) -> "Block":
        b = cls.zeros(dim, k_window, n_window)
        b.values[...] = 1.0
        return b

    def flat2d(self) -> np.ndarray:
        """View with all k-axes flattened to axis 0 and n-axes to axis 1."""
        ks = self.k_size**self.dim
        ns = self.n_size**self.dim
        return self.values.reshape(ks, ns)

    def get(self, k, n) -> complex:
        k = np.atleast_1d(np.asarray(k, dtype=int))
        n = np.atleast_1d(np.asarray(n, dtype=int))
        if (np.any(k < self.k_window[0]) or np.any(k > self.k_window[1])
                or np.any(n < self.n_window[0]) or np.any(n > self.n_window[1])):
            return 0.0 + 0.0j
        idx = tuple(int(v) - self.k_window[0] for v in k) \
            + tuple(int(v) - self.n_window[0] for v in n)
        return complex(self.values[idx])

    def restrict(self, k_window, n_window) -> "Block":
        """Copy of the block on a new window (zero-filled where uncovered)."""
        out = Block.zeros(self.dim, k_window, n_window)
        klo = max(k_window[0], self.k_window[0])
        khi = min(k_window[1], self.k_window[1])
        nlo = max(n_window[0], self.n_window[0])
        nhi = min(n_window[1], self.n_window[1])
        if klo > khi or nlo > nhi:
            return out
        src = (slice(klo - self.k_window[0], khi - self.k_window[0] + 1),) * self.dim \
            + (slice(nlo - self.n_window[0], nhi - self.n_window[0] + 1),) * self.dim
        dst = (slice(klo - k_window[0], khi - k_window[0] + 1),) * self.dim \
            + (slice(nlo - n_window[0], nhi - n_window[0] + 1),) * self.dim
        out.values[dst] = self.values[src]
        return out

    def scaled(self, lam) -> "Block":
        return Block(self.dim, self.k_window, self.n_window, self.values * lam)


def axis_pnorm(x: np.ndarray, p: Exponent, axis: int) -> np.ndarray:
    """l^p (quasi-)norm of nonnegative data along one axis, scaled for range.

    Zero slices give 0 (empty inner sums contribute nothing) and p = inf is a
    supremum.
    """
    if x.shape[axis] == 0:
        return np.zeros(x.sum(axis=axis).shape)
    if p.is_inf:
        return x.max(axis=axis)
    pf = 1.0 / float(p.recip)
    m = x.max(axis=axis, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = ((x / safe) ** pf).sum(axis=axis)
    out = np.squeeze(safe, axis=axis) * s ** (1.0 / pf)
    return np.where(np.squeeze(m, axis=axis) > 0, out, 0.0)


def mixed_norm_2d(mat: np.ndarray, outer: Exponent, inner: Exponent,
                  wk: np.ndarray | None = None,
                  wn: np.ndarray | None = None,
                  inner_axis: int = 1) -> float:
    """Mixed norm of a nonnegative 2-D array (rows: k, cols: n).

    inner_axis selects which index is summed first; wk/wn are per-axis weight
    factors (the weight is their outer product).
    """
    x = mat
    if wk is not None:
        x = x * wk[:, None]
    if wn is not None:
        x = x * wn[None, :]
    inner_vals = axis_pnorm(x, inner, axis=inner_axis)
    return float(axis_pnorm(inner_vals, outer, axis=0))


def _prep(a: Block, m: WeightSpec | None):
    if m is None:
        m = WeightSpec.one(dim=a.dim)
    if m.dim != a.dim:
        raise ValueError(f"weight dim {m.dim} != block dim {a.dim}")
    absa = np.abs(a.flat2d())
    fac = m.axis_factors(a.k_window, a.n_window, a.dim)
    if fac is not None:
        wk, wn = fac
        return absa, wk, wn
    return absa * m.grid(a.k_window, a.n_window, a.dim), None, None


def norm_lpq(a: Block, p, q, m: WeightSpec | None = None) -> float:
    """|| a ||_{l^{p,q}_m}: inner sum over k with exponent p, outer over n."""
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    absa, wk, wn = _prep(a, m)
    return mixed_norm_2d(absa, outer=q, inner=p, wk=wk, wn=wn, inner_axis=0)


def norm_l_paren_pq(a: Block, p, q, m: WeightSpec | None = None) -> float:
    """|| a ||_{l^{(p,q)}_m}: inner sum over n with exponent q, outer over k."""
    p = Exponent.from_value(p)
    q = Exponent.from_value(q)
    absa, wk, wn = _prep(a, m)
    return mixed_norm_2d(absa, outer=p, inner=q, wk=wk, wn=wn, inner_axis=1)


# ---------------------------------------------------------------------------
# serialization: dense text grid with a header, plus CSV for d = 1
# ---------------------------------------------------------------------------

_MAGIC = "# wienershear block v1"


def save_block(a: Block, path) -> None:
    with open(path, "w") as fh:
        fh.write(_MAGIC + "\n")
        fh.write(f"dim {a.dim}\n")
        fh.write(f"k_window {a.k_window[0]} {a.k_window[1]}\n")
        fh.write(f"n_window {a.n_window[0]} {a.n_window[1]}\n")
        flat = a.values.reshape(-1)
        for z in flat:
            fh.write(f"{z.real:.17g} {z.imag:.17g}\n")


def _load_csv_block(lines) -> Block:
    rows = []
    for ln in lines:
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        entries = [complex(tok.strip().replace(" ", "")) for tok in ln.split(",")]
        rows.append(entries)
    if not rows:
        raise ValueError("empty CSV block")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged CSV block")
    vals = np.array(rows, dtype=complex)
    K, N = vals.shape
    kw = (-(K // 2), K - 1 - K // 2)
    nw = (-(N // 2), N - 1 - N // 2)
    return Block(1, kw, nw, vals)


def load_block(path) -> Block:
    """Load a block from the native text format, or CSV (d = 1, centered)."""
    with open(path) as fh:
        lines = fh.readlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    if lines[0].strip() != _MAGIC:
        return _load_csv_block(lines)
    try:
        dim = int(lines[1].split()[1])
        kw = tuple(int(v) for v in lines[2].split()[1:3])
        nw = tuple(int(v) for v in lines[3].split()[1:3])
        data = []
        for ln in lines[4:]:
            ln = ln.strip()
            if not ln:
                continue
            re_s, im_s = ln.split()
            data.append(complex(float(re_s), float(im_s)))
        shape = (_win_size(kw),) * dim + (_win_size(nw),) * dim
        vals = np.array(data, dtype=complex).reshape(shape)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed block file: {exc}") from exc
    return Block(dim, kw, nw, vals)
