"""Bessel functions of the first kind with their zeros, and Mathieu functions.

The Bessel evaluator uses Miller's backward recurrence (power series for small
arguments), vectorized over the argument array.  Zeros are bracketed by the
McMahon asymptotic / interlacing and polished by Newton iteration.

Mathieu characteristic values and Fourier coefficients come from the four
symmetric tridiagonal recurrence matrices (one per parity class), truncated at
K Fourier terms and auto-doubled until converged.  Angular functions are
normalized to ∫_0^{2π} Θ² dη = π, which reduces to cos(lη), sin(lη) at q = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "bessel_j",
    "bessel_zero",
    "BesselZeroTable",
    "MathieuExpansion",
    "mathieu_char_values",
    "mathieu_expansion",
    "mathieu_angular",
    "mathieu_radial",
    "TruncationError",
    "CoshOverflowError",
]

# cosh(k*xi) overflows double precision just above exp(709)
COSH_OVERFLOW_BOUND = 700.0

_SERIES_CUTOFF = 1.0  # below this |x|, the power series beats the recurrence


class TruncationError(RuntimeError):
    """Raised when doubling the Fourier truncation still changes a result."""


class CoshOverflowError(OverflowError):
    """Raised when a radial Mathieu evaluation would overflow cosh/sinh."""


# ---------------------------------------------------------------------------
# Bessel functions of the first kind
# ---------------------------------------------------------------------------

def _bessel_series(m: int, x: np.ndarray) -> np.ndarray:
    """Power series for J_m, accurate for small |x|."""
    half = x / 2.0
    # (x/2)^m / m!
    term = np.ones_like(x)
    for k in range(1, m + 1):
        term = term * half / k
    total = term.copy()
    x2 = -(half * half)
    for j in range(1, 24):
        term = term * x2 / (j * (m + j))
        total += term
    return total


def _bessel_miller(m: int, x: np.ndarray) -> np.ndarray:
    """Backward (Miller) recurrence for J_m(x), vectorized over x > 0."""
    xmax = float(np.max(x))
    # start order: comfortably above both the target order and the argument
    start = int(max(m, xmax) + 16 + 2.0 * math.sqrt(max(m, xmax)))
    if start % 2 == 1:
        start += 1
    jp = np.zeros_like(x)          # J_{k+1}
    jc = np.full_like(x, 1e-30)    # J_k at k = start
    target = np.zeros_like(x)
    even_sum = np.zeros_like(x)    # J_0 + 2*sum_{k>=1} J_2k
    inv_x = 1.0 / x
    for k in range(start, 0, -1):
        jm = 2.0 * k * inv_x * jc - jp
        jp = jc
        jc = jm
        # jc now holds J_{k-1}
        if k - 1 == m:
            target = jc.copy()
        if (k - 1) % 2 == 0:
            even_sum += jc if k - 1 == 0 else 2.0 * jc
        big = np.abs(jc) > 1e250
        if np.any(big):
            jc[big] *= 1e-250
            jp[big] *= 1e-250
            target[big] *= 1e-250
            even_sum[big] *= 1e-250
    return target / even_sum


def bessel_j(m: int, x) -> np.ndarray | float:
    """J_m(x) for integer order m (may be negative) and x >= 0.

    Negative orders are reduced with J_{-m} = (-1)^m J_m; negative arguments
    raise ValueError.
    """
    m = int(m)
    sign = 1.0
    if m < 0:
        m = -m
        if m % 2 == 1:
            sign = -1.0
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if np.any(x_arr < 0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("bessel_j requires finite x >= 0")
    out = np.empty_like(x_arr)
    small = x_arr < _SERIES_CUTOFF
    if np.any(small):
        out[small] = _bessel_series(m, x_arr[small])
    if np.any(~small):
        out[~small] = _bessel_miller(m, x_arr[~small])
    out *= sign
    return float(out[0]) if scalar else out


def bessel_j_derivative(m: int, x) -> np.ndarray | float:
    """J_m'(x) via the recurrence 2 J_m' = J_{m-1} - J_{m+1}."""
    return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))


def _refine_zero(m: int, x0: float, lo: float, hi: float) -> float:
    """Newton polish of a bracketed Bessel zero, bisection fallback."""
    f_lo = bessel_j(m, lo)
    x = x0
    for _ in range(60):
        f = bessel_j(m, x)
        if f_lo * f <= 0:
            hi = x
        else:
            lo = x
        df = bessel_j_derivative(m, x)
        step = f / df if df != 0 else hi - lo
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) < 1e-15 * x:
            x = x_new
            break
        x = x_new
    if abs(bessel_j(m, x)) > 1e-12:
        raise RuntimeError(f"zero refinement failed for J_{m} near {x0}")
    return x


@dataclass
class BesselZeroTable:
    """Cache of positive zeros k_{m,n} of J_m, built lazily per order."""

    _zeros: dict[int, list[float]] = field(default_factory=dict)

    def get(self, m: int, n: int) -> float:
        if n < 1:
            raise ValueError("zero index n starts at 1")
        m = abs(int(m))
        have = self._zeros.setdefault(m, [])
        while len(have) < n:
            self._extend(m)
        return have[n - 1]

    def get_array(self, m: int, n_max: int) -> np.ndarray:
        return np.array([self.get(m, n) for n in range(1, n_max + 1)])

    def _extend(self, m: int) -> None:
        have = self._zeros[m]
        n = len(have) + 1
        if m == 0:
            # McMahon expansion around beta = (n - 1/4) pi
            beta = (n - 0.25) * math.pi
            x0 = beta + 1.0 / (8 * beta)
            lo, hi = x0 - 0.6, x0 + 0.6
        elif m <= 1 or have or self._zeros.get(m - 1):
            # interlacing bracket k_{m-1,n} < k_{m,n} < k_{m-1,n+1}
            lo = self.get(m - 1, n)
            hi = self.get(m - 1, n + 1)
            x0 = 0.5 * (lo + hi)
        else:  # pragma: no cover - get() always fills lower orders first
            raise RuntimeError("zero table must be filled in order of m")
        have.append(_refine_zero(m, x0, lo, hi))


_DEFAULT_ZEROS = BesselZeroTable()


def bessel_zero(m: int, n: int, table: BesselZeroTable | None = None) -> float:
    """n-th positive zero of J_m (n >= 1), refined to |J_m(k)| < 1e-12."""
    return (table or _DEFAULT_ZEROS).get(m, n)


# ---------------------------------------------------------------------------
# Mathieu functions
# ---------------------------------------------------------------------------

# parity classes: (kind, l parity) -> how Fourier indices k run
#   ce even : k = 0, 2, 4, ...   ce odd : k = 1, 3, 5, ...
#   se even : k = 2, 4, 6, ...   se odd : k = 1, 3, 5, ...


def _class_of(kind: str, l: int) -> str:
    if kind not in ("ce", "se"):
        raise ValueError(f"kind must be 'ce' or 'se', got {kind!r}")
    if l < 0 or (kind == "se" and l < 1):
        raise ValueError(f"invalid order l={l} for {kind}")
    return f"{kind}_{'even' if l % 2 == 0 else 'odd'}"


def _tridiag(parity_class: str, q: float, size: int):
    """Diagonal and off-diagonal of the symmetric Fourier-recurrence matrix."""
    if parity_class == "ce_even":
        diag = (2.0 * np.arange(size)) ** 2
        off = np.full(size - 1, q)
        off[0] = math.sqrt(2.0) * q
    elif parity_class == "ce_odd":
        diag = (2.0 * np.arange(size) + 1.0) ** 2
        diag[0] += q
        off = np.full(size - 1, q)
    elif parity_class == "se_odd":
        diag = (2.0 * np.arange(size) + 1.0) ** 2
        diag[0] -= q
        off = np.full(size - 1, q)
    elif parity_class == "se_even":
        diag = (2.0 * np.arange(size) + 2.0) ** 2
        off = np.full(size - 1, q)
    else:
        raise ValueError(parity_class)
    return diag, off


def _fourier_indices(parity_class: str, size: int) -> np.ndarray:
    if parity_class == "ce_even":
        return 2 * np.arange(size)
    if parity_class in ("ce_odd", "se_odd"):
        return 2 * np.arange(size) + 1
    return 2 * np.arange(size) + 2


def _solve_class(parity_class: str, q: float, size: int, n_values: int,
                 want_vectors: bool):
    diag, off = _tridiag(parity_class, q, size)
    if want_vectors:
        vals, vecs = eigh_tridiagonal(diag, off,
                                      select="i", select_range=(0, n_values - 1))
        return vals, vecs
    vals = eigh_tridiagonal(diag, off, eigvals_only=True,
                            select="i", select_range=(0, n_values - 1))
    return vals, None


def _orders_in_class(parity_class: str, count: int) -> list[int]:
    start = {"ce_even": 0, "ce_odd": 1, "se_odd": 1, "se_even": 2}[parity_class]
    return [start + 2 * j for j in range(count)]


def mathieu_char_values(q: float, max_order: int, trunc: int = 64
                        ) -> list[tuple[str, int, float]]:
    """Characteristic values alpha_0..alpha_L (ce) and beta_1..beta_L (se).

    Returned sorted ascending, which realizes the classical ordering
    alpha_0 < beta_1 < alpha_1 < beta_2 < ...  Raises TruncationError if
    doubling the truncation moves any requested value by more than 1e-10.
    """
    if not math.isfinite(q) or q < 0:
        raise ValueError("q must be finite and >= 0")
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    out = []
    for parity_class in ("ce_even", "ce_odd", "se_odd", "se_even"):
        orders = [l for l in _orders_in_class(parity_class, max_order + 1)
                  if l <= max_order]
        if not orders:
            continue
        kind = parity_class.split("_")[0]
        size = trunc
        vals, _ = _solve_class(parity_class, q, size, len(orders), False)
        while True:
            size *= 2
            if size > 4096:
                raise TruncationError(
                    f"characteristic values for q={q} did not converge")
            vals2, _ = _solve_class(parity_class, q, size, len(orders), False)
            if np.max(np.abs(vals2 - vals)) < 1e-10:
                break
            vals = vals2
        for l, v in zip(orders, vals2):
            out.append((kind, l, float(v)))
    out.sort(key=lambda t: (t[2], t[0]))
    return out


@dataclass(frozen=True)
class MathieuExpansion:
    """Truncated Fourier expansion of one periodic Mathieu function.

    ``coeffs[j]`` multiplies cos(k_j eta) (kind 'ce') or sin(k_j eta) ('se')
    with k_j = fourier_indices[j]; the same coefficients with cosh/sinh
    kernels give the modified (radial) function.
    """

    kind: str
    l: int
    q: float
    char_value: float
    coeffs: np.ndarray
    fourier_indices: np.ndarray

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def validate(self) -> None:
        amax = np.max(np.abs(self.coeffs))
        if abs(self.coeffs[-1]) >= 1e-12 * amax:
            raise TruncationError(
                f"{self.kind}_{self.l}(q={self.q}): tail coefficient not negligible")


def mathieu_expansion(kind: str, l: int, q: float, trunc: int = 64
                      ) -> MathieuExpansion:
    """Solve one (kind, l) Mathieu eigenpair at rescaled energy q."""
    parity_class = _class_of(kind, l)
    if not math.isfinite(q) or q < 0:
        raise ValueError("q must be finite and >= 0")
    position = _orders_in_class(parity_class, 10 ** 9)  # lazy: compute index
    idx = (l - position[0]) // 2
    size = max(trunc, idx + 8)
    prev = None
    while True:
        vals, vecs = _solve_class(parity_class, q, size, idx + 1, True)
        val = float(vals[idx])
        vec = vecs[:, idx]
        if prev is not None and abs(val - prev) < 1e-10:
            tail = abs(vec[-1]) < 1e-12 * np.max(np.abs(vec))
            if tail:
                break
        prev = val
        size *= 2
        if size > 4096:
            raise TruncationError(f"{kind}_{l}(q={q}) did not converge")
    coeffs = vec.copy()
    if parity_class == "ce_even":
        coeffs[0] /= math.sqrt(2.0)  # undo the symmetrizing scale on A_0
    # sign convention: coefficient at the q->0 dominant index positive
    k_indices = _fourier_indices(parity_class, len(coeffs))
    lead = np.nonzero(k_indices == l)[0]
    pivot = coeffs[lead[0]] if lead.size and abs(coeffs[lead[0]]) > 1e-14 * np.max(
        np.abs(coeffs)) else coeffs[np.argmax(np.abs(coeffs))]
    if pivot < 0:
        coeffs = -coeffs
    # drop the (converged) far tail so later cosh sums stay cheap
    amax = np.max(np.abs(coeffs))
    keep = len(coeffs)
    while keep > idx + 4 and abs(coeffs[keep - 2]) < 1e-16 * amax \
            and abs(coeffs[keep - 1]) < 1e-16 * amax:
        keep -= 1
    return MathieuExpansion(kind=kind, l=l, q=q, char_value=val,
                            coeffs=coeffs[:keep],
                            fourier_indices=k_indices[:keep])


def mathieu_angular(exp: MathieuExpansion, eta) -> np.ndarray | float:
    """Ordinary Mathieu function Theta_l(eta) from its expansion."""
    eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
    karr = exp.fourier_indices[:, None] * eta_arr[None, :]
    kern = np.cos(karr) if exp.kind == "ce" else np.sin(karr)
    out = exp.coeffs @ kern
    return float(out[0]) if np.ndim(eta) == 0 else out


def mathieu_radial(exp: MathieuExpansion, xi) -> np.ndarray | float:
    """Modified Mathieu function Ce_l / Se_l, same coefficients, cosh/sinh."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi_arr < 0):
        raise ValueError("xi must be >= 0")
    kmax = float(exp.fourier_indices[-1])
    if kmax * float(np.max(xi_arr, initial=0.0)) > COSH_OVERFLOW_BOUND:
        raise CoshOverflowError(
            f"k*xi = {kmax * float(np.max(xi_arr)):.1f} exceeds cosh bound")
    karr = exp.fourier_indices[:, None] * xi_arr[None, :]
    kern = np.cosh(karr) if exp.kind == "ce" else np.sinh(karr)
    out = exp.coeffs @ kern
    return float(out[0]) if np.ndim(xi) == 0 else out
