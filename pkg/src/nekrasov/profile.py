"""Physical wave reconstruction from a solved tangent-angle field.

Internally the wave is non-dimensionalized to wavelength 2*pi and unit
gravity; the requested wavelength and gravity enter only as output scales.
The crest sits at theta = 0 (minimal surface speed) and the troughs at
theta = +-pi; x decreases as theta increases, so one half-wave spans
x in [-lambda/2, 0].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy import fft as _fft

from .grid import AngleField
from .solver import BreakdownError, inner_accumulate


class GeometryWarning(UserWarning):
    """The reconstructed surface is not a graph (dx/dtheta changes sign)."""


class ReconstructionError(RuntimeError):
    """A physical quantity could not be recovered from the field."""


@dataclass
class WaveProfile:
    """Free-surface data over theta in [0, pi] (closed grid).

    x and eta are the surface coordinates, R the surface-speed factor
    (flow speed is q = c/R, maximal R at the crest), a_k the power-series
    coefficients of the conformal map derivative.  eta has zero mean over
    one period in x; metadata records the offsets for other gauges.
    """

    theta: np.ndarray
    x: np.ndarray
    eta: np.ndarray
    R: np.ndarray
    q_over_q0: np.ndarray
    wavelength: float
    c: float
    q0: float
    g: float
    mu: float
    a_k: np.ndarray
    metadata: dict = dataclass_field(default_factory=dict)

    @property
    def height(self) -> float:
        return float(self.eta[0] - self.eta[-1])


def _denominator(field: AngleField, mu: float) -> np.ndarray:
    """1 + mu*I on the closed grid, validated positive."""
    denom = 1.0 + mu * inner_accumulate(field)
    if denom.min() <= 0.0:
        raise BreakdownError("1 + mu*I lost positivity; cannot reconstruct")
    return denom


def reconstruct_R(field: AngleField, mu: float) -> np.ndarray:
    """Surface-speed factor R(theta) = [1 + mu*I(theta)]^(-1/3), R(0) = 1.

    Returned on the closed grid [0, pi] in crest-normalized units; the
    physically scaled factor (with R(0) = c/q0) is produced by
    reconstruct_profile.
    """
    return _denominator(field, mu) ** (-1.0 / 3.0)


def surface_speed_ratio(field: AngleField, mu: float) -> np.ndarray:
    """q(theta)/q0 = [1 + mu*I(theta)]^(1/3) on the closed grid."""
    return _denominator(field, mu) ** (1.0 / 3.0)


def _closed_values(field: AngleField) -> np.ndarray:
    v = np.zeros(field.n + 1)
    v[1:-1] = field.values
    return v


def _crest_normalized_R(field: AngleField, mu: float):
    """R with R(0)=1, cos(Phi), and the x-extent integral D = Int_0^pi R cos Phi."""
    r = reconstruct_R(field, mu)
    cos_phi = np.cos(_closed_values(field))
    integrand = r * cos_phi
    # trapezoid on the uniform closed grid integrates trig polynomials of
    # degree < 2n exactly
    d = np.trapezoid(integrand, dx=np.pi / field.n)
    if d <= 0.0:
        raise ReconstructionError("horizontal extent integral is nonpositive")
    return r, cos_phi, d


def physical_params(field: AngleField, mu: float, wavelength: float = 2.0 * np.pi,
                    g: float = 1.0) -> tuple[float, float]:
    """Wave speed c and crest speed q0 for given wavelength and gravity.

    c solves [3 g lambda/(2 pi c^2)]^(1/3) =
    (1/2 pi) Int_{-pi}^{pi} cos Phi [mu^(-1) + I]^(-1/3) dtau, after which
    q0 follows from mu = 3 g c lambda / (2 pi q0^3).
    """
    if not (mu > 0 and np.isfinite(mu)):
        raise ValueError(f"mu must be positive and finite, got {mu}")
    _, _, d = _crest_normalized_R(field, mu)
    q_at = mu ** (1.0 / 3.0) * d / np.pi
    c = np.sqrt(3.0 * g * wavelength / (2.0 * np.pi * q_at**3))
    q0 = (3.0 * g * c * wavelength / (2.0 * np.pi * mu)) ** (1.0 / 3.0)
    return float(c), float(q0)


def _integrate_profile(field: AngleField, even_series: np.ndarray,
                       odd_series: np.ndarray, wavelength: float):
    """x and eta on the closed grid from the cosine/sine series of
    -(2 pi/lambda) dx/dtheta = 1 + sum e_k cos and -(2 pi/lambda) deta/dtheta
    = sum o_k sin."""
    grid = field.grid
    scale = wavelength / (2.0 * np.pi)
    theta = grid.theta_closed
    k = grid.modes
    x = -scale * (theta + np.concatenate(
        ([0.0], grid.to_values(even_series / k), [0.0])))
    eta = scale * grid.cosine_values_closed(odd_series / k)
    return x, eta


def _mean_x_offset(x: np.ndarray, eta: np.ndarray, wavelength: float) -> float:
    """Mean of eta over one period in x (trapezoid in the x variable)."""
    return float(np.trapezoid(eta, x) / (x[-1] - x[0]))


def reconstruct_profile(field: AngleField, mu: float, wavelength: float = 2.0 * np.pi,
                        g: float = 1.0) -> WaveProfile:
    """Reconstruct the free surface by integrating the tangent-angle relations
    dx/dtheta = -(lambda/2 pi) R cos Phi, deta/dtheta = -(lambda/2 pi) R sin Phi.

    R is normalized so the horizontal extent over a full period is exactly
    the wavelength; eta is shifted to zero mean over one period.
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    r_unit, cos_phi, d = _crest_normalized_R(field, mu)
    grid = field.grid
    r = (np.pi / d) * r_unit
    rc = r * cos_phi
    if rc.min() <= 0.0:
        warnings.warn("dx/dtheta changes sign: surface is not a graph",
                      GeometryWarning, stacklevel=2)
    sin_phi = np.sin(_closed_values(field))
    # cosine series of R cos Phi - 1 (its mean is 0 after normalization)
    even_series = _cosine_coefficients(rc - 1.0, grid)
    odd_series = grid.to_coefficients((r * sin_phi)[1:-1])
    x, eta = _integrate_profile(field, even_series, odd_series, wavelength)
    offset = _mean_x_offset(x, eta, wavelength)
    eta = eta - offset
    c, q0 = physical_params(field, mu, wavelength, g)
    return WaveProfile(
        theta=grid.theta_closed.copy(), x=x, eta=eta, R=r,
        q_over_q0=surface_speed_ratio(field, mu),
        wavelength=wavelength, c=c, q0=q0, g=g, mu=mu,
        a_k=even_series,  # cosine modes of R cos Phi are the map modes
        metadata={
            "eta_offset_mean_zero": offset,
            "eta_trough": float(eta[-1]),
            "eta_crest": float(eta[0]),
            "n": field.n,
        })


def _cosine_coefficients(values_closed: np.ndarray, grid) -> np.ndarray:
    """Cosine coefficients c_k (k = 1..n-1) of an even function sampled on
    the closed grid, assuming zero mean."""
    # DCT-I is self-inverse up to 2/n on this grid
    full = _fft.dct(values_closed, type=1) / grid.n
    return full[1:-1]


def fourier_map_coefficients(field: AngleField, mu: float,
                             k_max: int | None = None) -> np.ndarray:
    """Power-series coefficients a_k of the conformal map derivative factor
    f(u) = 1 + sum a_k u^k.

    The boundary values of i log f are (-Phi, log R), so log f has power
    series coefficients equal to Phi's sine coefficients b_k; f follows by
    exact series exponentiation.  Raises when the requested modes exceed
    what the grid resolves.
    """
    _denominator(field, mu)
    b = field.coefficients
    if k_max is None:
        k_max = b.size
    if k_max > b.size:
        raise ReconstructionError(
            f"requested {k_max} map modes but the grid resolves {b.size}")
    a = np.zeros(k_max + 1)
    a[0] = 1.0
    for k in range(1, k_max + 1):
        m = np.arange(1, k + 1)
        a[k] = float(np.dot(m * b[m - 1], a[k - m]) / k)
    return a[1:]


def profile_from_map_coefficients(field: AngleField, mu: float,
                                  wavelength: float = 2.0 * np.pi,
                                  g: float = 1.0) -> WaveProfile:
    """Independent reconstruction route through the map coefficients a_k:

        eta = (lambda/2 pi) sum (a_k/k) cos(k theta),
        x   = -(lambda/2 pi) (theta + sum (a_k/k) sin(k theta)).
    """
    a = fourier_map_coefficients(field, mu)
    grid = field.grid
    x, eta = _integrate_profile(field, a, a, wavelength)
    offset = _mean_x_offset(x, eta, wavelength)
    eta = eta - offset
    c, q0 = physical_params(field, mu, wavelength, g)
    r, _, d = _crest_normalized_R(field, mu)
    return WaveProfile(
        theta=grid.theta_closed.copy(), x=x, eta=eta, R=(np.pi / d) * r,
        q_over_q0=surface_speed_ratio(field, mu),
        wavelength=wavelength, c=c, q0=q0, g=g, mu=mu, a_k=a,
        metadata={"eta_offset_mean_zero": offset, "route": "map_coefficients",
                  "n": field.n})


def wave_height(profile: WaveProfile) -> float:
    """Crest-to-trough height eta(0) - eta(pi) (offset independent)."""
    return profile.height
