"""Uniform sine-spectral grid on (0, pi) and odd angle fields.

The tangent angle of a symmetric periodic wave is an odd 2pi-periodic
function, zero at theta = 0 and theta = pi.  Working on the interior grid
theta_j = j*pi/n with a sine basis hard-codes that symmetry: every field
handled here is implicitly extended by Phi(-theta) = -Phi(theta).
"""

from __future__ import annotations

import numpy as np
from scipy import fft as _fft


class SineGrid:
    """Interior nodes theta_j = j*pi/n, j = 1..n-1, with DST-I transforms."""

    def __init__(self, n: int):
        if n < 4:
            raise ValueError(f"grid size must be at least 4, got {n}")
        self.n = int(n)
        self.theta = np.arange(1, self.n) * (np.pi / self.n)
        self.modes = np.arange(1, self.n)
        # closed grid includes the endpoints theta = 0 and theta = pi
        self.theta_closed = np.arange(0, self.n + 1) * (np.pi / self.n)

    def __repr__(self) -> str:
        return f"SineGrid(n={self.n})"

    def to_coefficients(self, values: np.ndarray) -> np.ndarray:
        """Sine coefficients b_k of the interpolant sum b_k sin(k theta)."""
        return _fft.dst(values, type=1) / self.n

    def to_values(self, coeffs: np.ndarray) -> np.ndarray:
        """Grid values of sum b_k sin(k theta_j)."""
        return _fft.dst(coeffs, type=1) / 2.0

    def cosine_values_closed(self, coeffs: np.ndarray) -> np.ndarray:
        """Values of sum_{k>=1} c_k cos(k theta) on the closed grid [0, pi].

        Input is indexed by mode k = 1..n-1.
        """
        y = np.zeros(self.n + 1)
        y[1:self.n] = coeffs
        return _fft.dct(y, type=1) / 2.0

    def antiderivative_closed(self, values: np.ndarray) -> np.ndarray:
        """Integral from 0 to theta of the sine interpolant, on [0, pi].

        For an odd integrand the result is even;  it is returned on the
        closed grid so that the exact values at 0 and pi are available.
        """
        s = self.to_coefficients(values) / self.modes
        out = s.sum() - self.cosine_values_closed(s)
        out[0] = 0.0  # identically zero; avoid summation-order round-off
        return out

    def evaluate_sine(self, coeffs: np.ndarray, theta: np.ndarray) -> np.ndarray:
        """Evaluate sum b_k sin(k theta) at arbitrary points (direct sum)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.zeros_like(theta)
        # chunk over modes to bound the temporary outer-product size
        step = max(1, int(4e6 // max(1, theta.size)))
        for start in range(0, coeffs.size, step):
            k = self.modes[start:start + step]
            out += np.sin(np.multiply.outer(theta, k)) @ coeffs[start:start + step]
        return out


_GRID_CACHE: dict[int, SineGrid] = {}


def get_grid(n: int) -> SineGrid:
    grid = _GRID_CACHE.get(n)
    if grid is None:
        grid = _GRID_CACHE[n] = SineGrid(n)
    return grid


class AngleField:
    """Odd angle function Phi on a SineGrid (grid values + sine coefficients)."""

    __slots__ = ("grid", "_values", "_coeffs")

    def __init__(self, grid: SineGrid, values: np.ndarray | None = None,
                 coefficients: np.ndarray | None = None):
        if (values is None) == (coefficients is None):
            raise ValueError("provide exactly one of values / coefficients")
        self.grid = grid
        if values is not None:
            values = np.asarray(values, dtype=float)
            if values.shape != (grid.n - 1,):
                raise ValueError(f"expected {grid.n - 1} grid values, got {values.shape}")
        if coefficients is not None:
            coefficients = np.asarray(coefficients, dtype=float)
            if coefficients.shape != (grid.n - 1,):
                raise ValueError(f"expected {grid.n - 1} coefficients, got {coefficients.shape}")
        self._values = values
        self._coeffs = coefficients

    @classmethod
    def from_values(cls, values: np.ndarray, n: int | None = None) -> "AngleField":
        values = np.asarray(values, dtype=float)
        return cls(get_grid(n if n is not None else values.size + 1), values=values)

    @classmethod
    def from_coefficients(cls, coeffs: np.ndarray, n: int | None = None) -> "AngleField":
        coeffs = np.asarray(coeffs, dtype=float)
        if n is None:
            n = coeffs.size + 1
        if coeffs.size < n - 1:
            coeffs = np.pad(coeffs, (0, n - 1 - coeffs.size))
        return cls(get_grid(n), coefficients=coeffs)

    @classmethod
    def from_callable(cls, func, n: int) -> "AngleField":
        grid = get_grid(n)
        return cls(grid, values=np.asarray(func(grid.theta), dtype=float))

    @classmethod
    def zero(cls, n: int) -> "AngleField":
        return cls(get_grid(n), values=np.zeros(n - 1))

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = self.grid.to_values(self._coeffs)
        return self._values

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = self.grid.to_coefficients(self._values)
        return self._coeffs

    def __call__(self, theta) -> np.ndarray:
        return self.grid.evaluate_sine(self.coefficients, theta)

    def sup_norm(self, oversample: int = 4) -> float:
        """Max of |Phi| over (0, pi), evaluated on an oversampled grid."""
        if oversample <= 1:
            return float(np.abs(self.values).max(initial=0.0))
        m = self.grid.n * int(oversample)
        padded = np.zeros(m - 1)
        padded[:self.grid.n - 1] = self.coefficients
        dense = get_grid(m).to_values(padded)
        return float(np.abs(dense).max(initial=0.0))

    def resample(self, n_new: int) -> "AngleField":
        """Spectral resampling: zero-pad or truncate the sine coefficients."""
        if n_new == self.grid.n:
            return self
        coeffs = self.coefficients
        out = np.zeros(n_new - 1)
        keep = min(coeffs.size, n_new - 1)
        out[:keep] = coeffs[:keep]
        return AngleField(get_grid(n_new), coefficients=out)

    def spectral_tail(self, fraction: float = 0.25, band: int | None = None) -> float:
        """Relative magnitude of the top `fraction` of the spectrum.

        Used to decide whether the grid resolves the field: an analytic
        field has an exponentially small tail once resolved.  `band`
        restricts the measurement to the first `band` modes (the retained
        band of a dealiased operator, whose upper half is exactly zero).
        """
        coeffs = np.abs(self.coefficients[:band])
        peak = coeffs.max(initial=0.0)
        if peak == 0.0:
            return 0.0
        cut = int((1.0 - fraction) * coeffs.size)
        return float(coeffs[cut:].max(initial=0.0) / peak)
