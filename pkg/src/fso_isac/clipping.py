"""Analytical clipping-noise statistics for DCO-OFDM.

Non-negative clipping of the biased Gaussian signal x(n) + b is decomposed
as x^+(n) = K x(n) + w_p(n) with the linear gain K = Q(-b/sigma_x); the
residual w_p is uncorrelated with x.  Its autocorrelation at signal
autocorrelation r is

    R_wp(r) = I(r) + C1 * r + C2,

where I(r) is a double integral of the bivariate-Gaussian level-crossing
kernel.  Swapping the integration order collapses it to a single integral,
and the substitution t = sigma_x^2 sin(theta) removes the inverse-square-
root edge singularity:

    I(r) = sigma_x^2 / (2 pi) * int_{-pi/2}^{arcsin(r/sigma_x^2)}
           (r/sigma_x^2 - sin th) * exp(-c / (1 + sin th)) dth,
    c = (b / sigma_x)^2.

The integrand is smooth and bounded, so fixed-order Gauss-Legendre rules
evaluate it to near machine precision; a Chebyshev-spaced table in
theta-space serves the per-lag lookups inside the solvers.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from .config import OfdmConfig
from .channel import ChannelState
from .ofdm import validate_p_norm

R_X_DOMAIN_TOL = 1e-9


def gaussian_q(x: float) -> float:
    """Standard normal complementary CDF via erfc (relative error < 1e-12)."""
    return 0.5 * erfc(x / np.sqrt(2.0))


def gaussian_pdf(x: float) -> float:
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def bussgang_gain(b: float, sigma_x: float) -> float:
    """Linear-equivalent gain of the clipper, K = Q(-b/sigma_x)."""
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive (degenerate signal)")
    if b < 0:
        raise ValueError("bias must be non-negative")
    return gaussian_q(-b / sigma_x)


def clip_moments(b: float, sigma_x: float) -> tuple[float, float]:
    """First and second moments of the clipping noise w_p.

    E(w_p)   = sigma_x * |phi(lam) + lam * (1 - Q(lam))|
    E(w_p^2) = sigma_x^2 * (lam^2 (1 - Q(lam)) + lam phi(lam) + Q(lam) - K^2)

    with lam = -b/sigma_x.  Both reduce to sigma_x/sqrt(2 pi) and
    sigma_x^2/4 at b = 0 and vanish as b/sigma_x grows.
    """
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive (degenerate signal)")
    lam = -b / sigma_x
    q = gaussian_q(lam)
    phi = gaussian_pdf(lam)
    k = q
    mean_wp = abs(sigma_x * (phi + lam * (1.0 - q)))
    power_wp = sigma_x**2 * (lam**2 * (1.0 - q) + lam * phi + q - k * k)
    return mean_wp, max(power_wp, 0.0)


@lru_cache(maxsize=8)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _price_core(rho: np.ndarray, c: float, n_gl: int = 192) -> np.ndarray:
    """Normalized integral J(rho; c) = I(rho * sigma^2) / sigma^2.

    Vectorized fixed-order Gauss-Legendre over theta in [-pi/2, arcsin rho].
    """
    rho = np.clip(np.atleast_1d(np.asarray(rho, dtype=float)), -1.0, 1.0)
    psi = np.arcsin(rho)
    nodes, weights = _leggauss(n_gl)
    half = (psi + np.pi / 2.0) / 2.0
    theta = half[:, None] * (nodes[None, :] + 1.0) - np.pi / 2.0
    s = np.sin(theta)
    if c > 0:
        with np.errstate(divide="ignore"):
            kernel = np.exp(-c / (1.0 + s))
    else:
        kernel = np.ones_like(s)
    g = (rho[:, None] - s) * kernel
    return (half / (2.0 * np.pi)) * (g @ weights)


def _affine_constants(b: float, sigma_x: float, c: float) -> tuple[float, float, float, float]:
    """(mean_wp, power_wp, C1, C2) with the integral endpoints at high order."""
    var = sigma_x**2
    mean_wp, power_wp = clip_moments(b, sigma_x)
    i_zero, i_var = var * _price_core(np.array([0.0, 1.0]), c, n_gl=384)
    c2 = mean_wp**2 - i_zero
    c1 = (power_wp - c2 - i_var) / var
    return mean_wp, power_wp, c1, c2


def price_integral(r: float, b: float, sigma_x: float) -> float:
    """Adaptive-quadrature evaluation of I(r) (absolute error << 1e-10 sigma^2)."""
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive")
    var = sigma_x**2
    if abs(r) > var * (1.0 + 1e-12):
        raise ValueError(f"r must lie in [-sigma_x^2, sigma_x^2], got {r!r}")
    rho = min(max(r / var, -1.0), 1.0)
    c = (b / sigma_x) ** 2

    def integrand(theta):
        s = np.sin(theta)
        w = np.exp(-c / (1.0 + s)) if s > -1.0 else 0.0
        return (rho - s) * w / (2.0 * np.pi)

    val, _ = quad(integrand, -np.pi / 2.0, np.arcsin(rho), epsabs=1e-13, epsrel=1e-12, limit=200)
    return var * val


class PriceTable:
    """Chebyshev-spaced cache of I(r) for one (b, sigma_x) pair.

    Nodes are Chebyshev-Lobatto points in theta = arcsin(r/sigma^2), where
    the integral is analytic; barycentric interpolation then recovers I(r)
    to well below 1e-8 sigma^2.  Immutable after construction.
    """

    def __init__(self, b: float, sigma_x: float, degree: int = 512, n_gl: int = 192):
        if sigma_x <= 0:
            raise ValueError("sigma_x must be positive")
        self.var = sigma_x**2
        self.c = (b / sigma_x) ** 2
        j = np.arange(degree + 1)
        y = np.cos(np.pi * j / degree)  # descending from +1 to -1
        self._psi = (np.pi / 2.0) * y
        self._values = _price_core(np.sin(self._psi), self.c, n_gl=n_gl)
        w = np.where(j % 2 == 0, 1.0, -1.0)
        w[0] *= 0.5
        w[-1] *= 0.5
        self._weights = w

    def __call__(self, r) -> np.ndarray:
        scalar = np.isscalar(r)
        rho = np.clip(np.atleast_1d(np.asarray(r, dtype=float)) / self.var, -1.0, 1.0)
        psi = np.arcsin(rho)
        diff = psi[:, None] - self._psi[None, :]
        exact_row, exact_col = np.nonzero(diff == 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = self._weights[None, :] / diff
            out = (ratio @ self._values) / ratio.sum(axis=1)
        out[exact_row] = self._values[exact_col]
        out *= self.var
        return float(out[0]) if scalar else out


def signal_autocorrelation(p_norm: np.ndarray, ac_power: float, n: int) -> np.ndarray:
    """Autocorrelation of the OFDM signal from its power allocation.

    R_x(n) = (ac_power / N) * sum_k 2 p_norm(k) cos(2 pi k n / N), i.e. the
    inverse DFT of the Hermitian-symmetric per-bin power spectrum.
    """
    p = np.asarray(p_norm, dtype=float)
    spectrum = np.zeros(n)
    spectrum[1 : n // 2] = ac_power * p
    spectrum[n // 2 + 1 :] = ac_power * p[::-1]
    return np.fft.ifft(spectrum).real


def autocorrelation(
    b: float,
    sigma_x: float,
    r_x: np.ndarray,
    table: PriceTable | None = None,
) -> np.ndarray:
    """Clipping-noise autocorrelation over the lags of r_x.

    Lag 0 is pinned to E(w_p^2) exactly; other lags use R_wp = I(r) + C1 r
    + C2 with C2 = E(w_p)^2 - I(0) and C1 = (E(w_p^2) - C2 - I(var)) / var.
    """
    r_x = np.asarray(r_x, dtype=float)
    var = sigma_x**2
    if abs(r_x[0] - var) > R_X_DOMAIN_TOL * var:
        raise ValueError("r_x[0] must equal sigma_x^2")
    if np.any(np.abs(r_x) > var * (1.0 + R_X_DOMAIN_TOL)):
        raise ValueError("every |r_x(n)| must be <= sigma_x^2")
    if table is None:
        table = PriceTable(b, sigma_x)
    mean_wp, power_wp, c1, c2 = _affine_constants(b, sigma_x, table.c)
    r_wp = table(r_x) + c1 * r_x + c2
    r_wp[0] = power_wp
    return r_wp


def clipping_psd(r_wp: np.ndarray) -> np.ndarray:
    """PSD of the clipping noise: DFT of its autocorrelation."""
    spec = np.fft.fft(np.asarray(r_wp, dtype=float))
    scale = np.max(np.abs(spec))
    if scale > 0 and np.max(np.abs(spec.imag)) > 1e-9 * scale:
        raise ValueError("autocorrelation is not even: PSD has imaginary parts")
    return spec.real


@dataclass(frozen=True)
class ClippingStats:
    """Clipping-noise statistics for one (bias, allocation) operating point."""

    sigma_x2: float
    lambda_b: float
    bussgang: float
    mean_wp: float
    power_wp: float
    c1: float
    c2: float
    r_x: np.ndarray
    r_wp: np.ndarray
    p_wp: np.ndarray


@dataclass(frozen=True)
class SnrProfile:
    """Normalized per-subcarrier SNRs over k in [1, N/2)."""

    gamma_c: np.ndarray
    gamma_s: np.ndarray

    def __post_init__(self):
        for name, vec in (("gamma_c", self.gamma_c), ("gamma_s", self.gamma_s)):
            arr = np.asarray(vec)
            if np.any(~np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} entries must be non-negative and finite")


def compute_clipping_stats(b: float, p_norm: np.ndarray, cfg: OfdmConfig) -> ClippingStats:
    """Full analytical clipping model at bias b and allocation p_norm."""
    p = validate_p_norm(p_norm, cfg)
    ac_power = cfg.power_w - b * b
    if ac_power <= 0:
        raise ValueError("bias consumes the whole power budget")
    n = cfg.n_subcarriers
    var = ac_power / n
    sigma_x = np.sqrt(var)
    table = PriceTable(b, sigma_x)
    mean_wp, power_wp, c1, c2 = _affine_constants(b, sigma_x, table.c)
    r_x = signal_autocorrelation(p, ac_power, n)
    r_wp = table(r_x) + c1 * r_x + c2
    r_wp[0] = power_wp
    p_wp = clipping_psd(r_wp)
    return ClippingStats(
        sigma_x2=var,
        lambda_b=-b / sigma_x,
        bussgang=bussgang_gain(b, sigma_x),
        mean_wp=mean_wp,
        power_wp=power_wp,
        c1=c1,
        c2=c2,
        r_x=r_x,
        r_wp=r_wp,
        p_wp=p_wp,
    )


def snr_profiles(
    stats: ClippingStats,
    chan: ChannelState,
    cfg: OfdmConfig,
    b: float,
) -> SnrProfile:
    """Per-subcarrier normalized SNRs for the comm and sensing paths.

    gamma_c(k) = |H_c(k)|^2 K^2 (P - b^2)
                 / (N_c df / (2 E(h_c)^2) + |H_c(k)|^2 P_wp(k))
    and analogously for sensing with the reflectivity folded into the
    noise term.  The k = 0 bin of the clipping PSD never enters.
    """
    n_data = cfg.n_data_subcarriers
    ac_power = cfg.power_w - b * b
    k2 = stats.bussgang**2
    p_wp = stats.p_wp[1 : n_data + 1]
    hc2 = chan.response_c(n_data) ** 2
    hs2 = chan.response_s(n_data) ** 2
    noise_c = chan.noise_psd_c * cfg.delta_f / (2.0 * chan.gain_sq_c())
    noise_s = chan.noise_psd_s * cfg.delta_f / (
        2.0 * chan.reflectivity**2 * chan.gain_sq_s()
    )
    gamma_c = hc2 * k2 * ac_power / (noise_c + hc2 * p_wp)
    gamma_s = hs2 * k2 * ac_power / (noise_s + hs2 * p_wp)
    return SnrProfile(gamma_c=gamma_c, gamma_s=gamma_s)
