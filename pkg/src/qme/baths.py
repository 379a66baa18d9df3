"""Bath models: spectral density, correlation function, and timescales.

Each bath is defined by its spectral density gamma(omega) >= 0 (frequency
units, hbar = 1).  The correlation function is the inverse Fourier transform

    C(t) = (1/2pi) integral gamma(omega) exp(-i omega t) d omega,

and two derived quantities control every error estimate downstream:

    1/tau_SB = integral_0^inf |C(t)| dt        (system-bath coupling time)
    tau_B    = tau_SB * integral_0^T t |C(t)| dt   (bath correlation time)

Thermal baths satisfy the detailed-balance (KMS) relation
gamma(-omega) = exp(-beta omega) gamma(omega).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

logger = logging.getLogger(__name__)

__all__ = [
    "Bath",
    "BathTimescales",
    "OhmicBath",
    "ToyBath",
    "RectangleBath",
    "TabulatedBath",
    "load_tabulated",
    "make_bath",
    "gamma",
    "correlation",
    "lamb_amplitude_S",
    "half_fourier_f",
    "timescales",
    "kms_report",
]


@dataclass(frozen=True)
class BathTimescales:
    """Derived bath timescales; see module docstring for definitions."""

    tau_SB: float
    tau_B: float
    T_cutoff: float
    epsilon_T: float

    def __post_init__(self):
        if not self.tau_SB > 0:
            raise ValueError("tau_SB must be positive")
        if self.tau_B < 0 or self.epsilon_T < 0:
            raise ValueError("tau_B and epsilon_T must be nonnegative")


def _complex_quad(func, a, b, **kwargs):
    re, re_err = integrate.quad(lambda x: func(x).real, a, b, **kwargs)
    im, im_err = integrate.quad(lambda x: func(x).imag, a, b, **kwargs)
    return re + 1j * im, re_err + im_err


class Bath:
    """Base class; subclasses implement gamma() and usually correlation()."""

    kind = "abstract"
    thermal_flag = False
    beta = None
    cp_admissible = True

    def __init__(self):
        self._timescales_cache = {}

    # -- spectral density -------------------------------------------------

    def gamma(self, w):
        raise NotImplementedError

    def gamma_prime(self, w, h=1e-6):
        """Central finite difference of gamma."""
        return (self.gamma(np.asarray(w) + h) - self.gamma(np.asarray(w) - h)) / (2 * h)

    def support_radius(self, tol=1e-12):
        """Half-width W such that gamma is negligible outside [-W, W]."""
        gm = self.gamma_scale()
        W = self._initial_radius()
        while W < 1e7:
            if max(abs(float(self.gamma(W))), abs(float(self.gamma(-W)))) < tol * gm:
                return W
            W *= 2.0
        raise ValueError("spectral density does not decay: no finite support radius")

    def _initial_radius(self):
        return 1.0

    def gamma_scale(self):
        if not hasattr(self, "_gamma_scale"):
            w = np.linspace(-self._initial_radius() * 32, self._initial_radius() * 32, 2049)
            self._gamma_scale = float(np.max(np.abs(self.gamma(w))))
        return self._gamma_scale

    # -- correlation function --------------------------------------------

    def correlation(self, t, abs_tol=1e-10):
        """Inverse-Fourier quadrature fallback; closed forms override this."""
        W = self.support_radius()
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t_arr.shape, dtype=complex)
        for i, ti in enumerate(t_arr.ravel()):
            val, err = _complex_quad(
                lambda w: self.gamma(w) * np.exp(-1j * w * ti),
                -W, W, limit=800, epsabs=abs_tol, epsrel=1e-10,
                points=[0.0] if -W < 0 < W else None,
            )
            if err > max(abs_tol, 1e-8 * abs(val)) * 100:
                raise ArithmeticError(
                    f"correlation quadrature achieved only {err:.2e} at t={ti}"
                )
            out.ravel()[i] = val / (2 * np.pi)
        return out[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else out

    # -- half-Fourier transform and Lamb amplitude ------------------------

    def lamb_amplitude_S(self, w, excision_halfwidth=None):
        """Dispersive part S(omega) via a principal-value transform.

        S(w) = (1/2pi) PV integral gamma(x)/(w - x) dx, computed with a
        symmetric excision of half-width h around the pole plus the local
        analytic contribution -2 h gamma'(w) of the excised window.
        """
        lo, hi = self._pv_bounds(w)
        scale = max(1.0, abs(w))
        h = 1e-4 * scale if excision_halfwidth is None else excision_halfwidth

        def integrand(x):
            return self.gamma(x) / (w - x)

        total = 0.0
        for a, b in ((lo, w - h), (w + h, hi)):
            if b <= a:
                continue
            pts = [p for p in (0.0,) if a < p < b]
            val, _ = integrate.quad(integrand, a, b, limit=1000,
                                    points=pts or None, epsabs=1e-12, epsrel=1e-10)
            total += val
        total -= 2.0 * h * float(self.gamma_prime(w, h=max(1e-6, 1e-6 * scale)))
        return total / (2 * np.pi)

    def _pv_bounds(self, w):
        """Integration window for the principal-value transform."""
        W = self.support_radius()
        if abs(w) >= W:
            W = 2.0 * abs(w) + W
        return -W, W

    def half_fourier_f(self, w):
        """f(w) = integral_0^inf C(t) exp(i w t) dt = gamma(w)/2 + i S(w)."""
        return 0.5 * float(self.gamma(w)) + 1j * self.lamb_amplitude_S(w)

    # -- timescales -------------------------------------------------------

    def timescales(self, T_cutoff=np.inf):
        key = float(T_cutoff)
        if key not in self._timescales_cache:
            self._timescales_cache[key] = self._compute_timescales(float(T_cutoff))
        return self._timescales_cache[key]

    def _compute_timescales(self, T_cutoff):
        absC = lambda t: abs(self.correlation(t))
        norm, _ = integrate.quad(absC, 0, np.inf, limit=800)
        tau_SB = 1.0 / norm
        first, _ = integrate.quad(lambda t: t * absC(t), 0, T_cutoff, limit=800)
        tail, _ = integrate.quad(absC, T_cutoff, np.inf, limit=800) if np.isfinite(T_cutoff) else (0.0, 0.0)
        return BathTimescales(tau_SB=tau_SB, tau_B=tau_SB * first,
                              T_cutoff=T_cutoff, epsilon_T=tau_SB * tail)

    # -- thermal diagnostics ---------------------------------------------

    def kms_report(self, w_grid):
        """Per-omega relative deviation from detailed balance, plus the
        zero-frequency slope identity gamma'(0) = (beta/2) gamma(0)."""
        if not self.thermal_flag:
            raise ValueError(f"{self.kind} bath is not thermal: no KMS relation to check")
        w = np.asarray(w_grid, dtype=float)
        lhs = self.gamma(-w)
        rhs = np.exp(-self.beta * w) * self.gamma(w)
        denom = np.maximum(np.abs(rhs), 1e-300)
        deviation = np.abs(lhs - rhs) / denom
        h = 1e-4
        slope = float(self.gamma(h) - self.gamma(-h)) / (2 * h)
        target = 0.5 * self.beta * float(self.gamma(0.0))
        return {
            "omega": w,
            "relative_deviation": deviation,
            "max_relative_deviation": float(np.max(deviation)),
            "gamma_prime_0": slope,
            "half_beta_gamma_0": target,
            "slope_residual": abs(slope - target),
            "slope_relative_residual": abs(slope - target) / max(abs(target), 1e-300),
        }

    # -- validation -------------------------------------------------------

    def validate(self):
        """Positivity of gamma on a probe grid, and KMS for thermal baths."""
        W = self.support_radius(tol=1e-10)
        w = np.linspace(-W, W, 2001)
        g = np.asarray(self.gamma(w), dtype=float)
        gmax = float(np.max(np.abs(g)))
        if self.cp_admissible and np.min(g) < -1e-12 * gmax:
            raise ValueError(
                f"{self.kind} bath: gamma(omega) dips to {np.min(g):.3e} < 0"
            )
        if self.thermal_flag:
            probe = np.linspace(-min(W, 10.0 / self.beta), min(W, 10.0 / self.beta), 101)
            rep = self.kms_report(probe)
            mask = np.abs(self.gamma(probe)) > 1e-10 * gmax
            worst = float(np.max(rep["relative_deviation"][mask])) if mask.any() else 0.0
            if worst > 1e-8:
                raise ValueError(
                    f"{self.kind} bath: KMS relative deviation {worst:.3e} exceeds 1e-8"
                )


def _trigamma(z):
    """Trigamma function for complex z with Re z > 0, vectorized.

    Recurrence pushes the argument up by K, then the asymptotic series
    psi_1(z) ~ 1/z + 1/(2 z^2) + sum B_2k / z^(2k+1) finishes the job.
    """
    z = np.asarray(z, dtype=complex)
    K = max(0, int(np.ceil(24 - np.min(np.abs(z)))))
    acc = np.zeros_like(z)
    for k in range(K):
        acc += 1.0 / (z + k) ** 2
    zz = z + K
    inv = 1.0 / zz
    inv2 = inv * inv
    series = inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0
                    + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 - inv2 / 30.0)))))
    return acc + series


class OhmicBath(Bath):
    """Ohmic spectral density with exponential cutoff at temperature 1/beta:

    gamma(omega) = 2 pi kappa omega exp(-|omega|/omega_c) / (1 - exp(-beta omega)).
    """

    kind = "ohmic"
    thermal_flag = True

    def __init__(self, kappa, omega_c, beta):
        super().__init__()
        if kappa <= 0 or omega_c <= 0 or beta <= 0:
            raise ValueError("kappa, omega_c, beta must all be positive")
        self.kappa = float(kappa)
        self.omega_c = float(omega_c)
        self.beta = float(beta)
        self.validate()

    def _initial_radius(self):
        return max(self.omega_c, 1.0 / self.beta, 1.0)

    def gamma(self, w):
        scalar = np.asarray(w).ndim == 0
        w = np.atleast_1d(np.asarray(w, dtype=float))
        pref = 2 * np.pi * self.kappa
        b, wc = self.beta, self.omega_c
        small = np.isclose(w, 0.0, atol=1e-10)
        pos = (w > 0) & ~small
        neg = (w < 0) & ~small
        out = np.empty(w.shape, dtype=float)
        wp = np.where(pos, w, 1.0)
        out[pos] = (pref * wp * np.exp(-wp / wc) / (1.0 - np.exp(-b * wp)))[pos]
        u = np.where(neg, -w, 1.0)
        out[neg] = (pref * u * np.exp(-u / wc) * np.exp(-b * u)
                    / (1.0 - np.exp(-b * u)))[neg]
        out[small] = (pref / b) * (1.0 + b * w[small] / 2.0)
        return float(out[0]) if scalar else out

    def correlation(self, t, abs_tol=None):
        t = np.asarray(t, dtype=float)
        x = (1.0 / self.omega_c + 1j * t) / self.beta
        C = (self.kappa / self.beta ** 2) * (_trigamma(x) + _trigamma(np.conj(x) + 1.0))
        return C if C.ndim else complex(C)

    def _compute_timescales(self, T_cutoff):
        if not np.isfinite(T_cutoff):
            raise ValueError(
                "Ohmic bath: t|C(t)| decays only like 1/t, so tau_B diverges "
                "logarithmically; pass a finite T_cutoff"
            )
        absC = lambda t: abs(self.correlation(t))
        norm, _ = integrate.quad(absC, 0, np.inf, limit=800)
        first, _ = integrate.quad(lambda t: t * absC(t), 0, T_cutoff, limit=800)
        tail, _ = integrate.quad(absC, T_cutoff, np.inf, limit=800)
        tau_SB = 1.0 / norm
        return BathTimescales(tau_SB=tau_SB, tau_B=tau_SB * first,
                              T_cutoff=T_cutoff, epsilon_T=tau_SB * tail)


class ToyBath(Bath):
    """Double-exponential thermal bath with |C(t)| ~ 1/t^4:

    gamma(omega) = (A/tau_SB) exp(beta omega/2)
                   (exp(-b beta |omega|) - exp(-a b beta |omega|)/a),

    with a > 1, b > 1/2.  The prefactor A is fixed self-consistently so that
    integral_0^inf |C(t)| dt = 1/tau_SB holds exactly; the ``normalization``
    attribute reports A/3, the constant conventionally quoted for this bath's
    rational-function C(t) parameterization (approximately 21.0 at
    a=1.01, b=0.6, beta=4).
    """

    kind = "toy"
    thermal_flag = True

    def __init__(self, a=1.01, b=0.6, beta=4.0, tau_SB=10.0):
        super().__init__()
        if a <= 1:
            raise ValueError("toy bath requires a > 1")
        if b <= 0.5:
            raise ValueError("toy bath requires b > 1/2")
        if beta <= 0 or tau_SB <= 0:
            raise ValueError("beta and tau_SB must be positive")
        self.a = float(a)
        self.b = float(b)
        self.beta = float(beta)
        self.tau_SB = float(tau_SB)
        inv_A, err = integrate.quad(lambda t: abs(self._c0(t)), 0, np.inf,
                                    limit=800, epsabs=1e-13, epsrel=1e-12)
        if err > 1e-6 * inv_A:
            raise ArithmeticError(f"normalization quadrature error {err:.2e}")
        self.gamma_prefactor = 1.0 / inv_A
        self.normalization = self.gamma_prefactor / 3.0
        self.validate()

    def _initial_radius(self):
        return max(4.0 / ((self.b - 0.5) * self.beta), 1.0)

    def _c0(self, t):
        """Unit-prefactor correlation: inverse FT of
        exp(beta w/2)(exp(-b beta |w|) - exp(-a b beta |w|)/a), over 2 pi."""
        bb = self.b * self.beta
        ab = self.a * self.b * self.beta
        h = self.beta / 2.0
        t = np.asarray(t, dtype=complex)
        first = 1.0 / ((bb - h + 1j * t) * (bb + h - 1j * t))
        second = 1.0 / ((ab - h + 1j * t) * (ab + h - 1j * t))
        out = (bb / np.pi) * (first - second)
        return out if out.ndim else complex(out)

    def gamma(self, w):
        w = np.asarray(w, dtype=float)
        # combined exponents avoid overflow of exp(beta w/2) on its own
        g = (np.exp(self.beta * w / 2.0 - self.b * self.beta * np.abs(w))
             - np.exp(self.beta * w / 2.0 - self.a * self.b * self.beta * np.abs(w)) / self.a)
        out = (self.gamma_prefactor / self.tau_SB) * g
        return out if out.ndim else float(out)

    def correlation(self, t, abs_tol=None):
        return (self.gamma_prefactor / self.tau_SB) * self._c0(t)

    def _compute_timescales(self, T_cutoff):
        A = self.gamma_prefactor
        first, _ = integrate.quad(lambda t: t * abs(self._c0(t)), 0, T_cutoff, limit=800)
        if np.isfinite(T_cutoff):
            tail, _ = integrate.quad(lambda t: abs(self._c0(t)), T_cutoff, np.inf, limit=800)
        else:
            tail = 0.0
        return BathTimescales(tau_SB=self.tau_SB, tau_B=A * first,
                              T_cutoff=T_cutoff, epsilon_T=A * tail)


class RectangleBath(Bath):
    """Flat-in-time correlation C(t) = g^2 for |t| < tau_c, zero outside.

    Its spectral density 2 g^2 tau_c sinc(omega tau_c) goes negative, so this
    bath is not CP-admissible and carries no thermal (KMS) structure.  It is
    the standard worked example for dynamical-decoupling filters.
    """

    kind = "rectangle"
    thermal_flag = False
    cp_admissible = False

    def __init__(self, g, tau_c):
        super().__init__()
        if g <= 0 or tau_c <= 0:
            raise ValueError("g and tau_c must be positive")
        self.g = float(g)
        self.tau_c = float(tau_c)
        self.not_cp_message = "gamma(omega) < 0 for some omega: not CP-admissible"

    def _initial_radius(self):
        return 1.0 / self.tau_c

    def gamma(self, w):
        w = np.asarray(w, dtype=float)
        out = 2.0 * self.g ** 2 * self.tau_c * np.sinc(w * self.tau_c / np.pi)
        return out if out.ndim else float(out)

    def correlation(self, t, abs_tol=None):
        t = np.asarray(t, dtype=float)
        out = np.where(np.abs(t) < self.tau_c, self.g ** 2, 0.0).astype(complex)
        # half weight exactly on the edge, as the Fourier inversion gives
        out[np.isclose(np.abs(t), self.tau_c)] = 0.5 * self.g ** 2
        return out if out.ndim else complex(out)

    def half_fourier_f(self, w):
        g2, tc = self.g ** 2, self.tau_c
        if np.isclose(w, 0.0):
            return complex(g2 * tc)
        return g2 * (np.exp(1j * w * tc) - 1.0) / (1j * w)

    def lamb_amplitude_S(self, w, excision_halfwidth=None):
        return float(self.half_fourier_f(w).imag)

    def _compute_timescales(self, T_cutoff):
        g2, tc = self.g ** 2, self.tau_c
        tau_SB = 1.0 / (g2 * tc)
        T_eff = min(T_cutoff, tc)
        tau_B = tau_SB * g2 * T_eff ** 2 / 2.0
        eps = tau_SB * g2 * max(tc - T_cutoff, 0.0) if np.isfinite(T_cutoff) else 0.0
        return BathTimescales(tau_SB=tau_SB, tau_B=tau_B,
                              T_cutoff=T_cutoff, epsilon_T=eps)


class TabulatedBath(Bath):
    """Spectral density sampled on a grid, monotone-cubic interpolated.

    Queries outside the tabulated window raise (no extrapolation); gamma is
    clamped at zero so interpolation wiggles cannot break positivity.
    """

    kind = "tabulated"

    def __init__(self, omega_grid, gamma_values, beta=None):
        super().__init__()
        w = np.asarray(omega_grid, dtype=float)
        g = np.asarray(gamma_values, dtype=float)
        if w.ndim != 1 or w.shape != g.shape or len(w) < 4:
            raise ValueError("need matching 1-D grids with at least 4 points")
        if np.any(np.diff(w) <= 0):
            raise ValueError("omega grid must be strictly increasing")
        if np.min(g) < -1e-12 * max(np.max(np.abs(g)), 1e-300):
            raise ValueError("tabulated gamma has negative entries")
        self.omega_grid = w
        self.gamma_values = np.maximum(g, 0.0)
        self._interp = PchipInterpolator(w, self.gamma_values, extrapolate=False)
        self.beta = None if beta is None else float(beta)
        self.thermal_flag = self.beta is not None
        if self.thermal_flag:
            self.validate()

    def support_radius(self, tol=1e-12):
        return float(max(abs(self.omega_grid[0]), abs(self.omega_grid[-1])))

    def gamma_scale(self):
        return float(np.max(self.gamma_values))

    def _pv_bounds(self, w):
        lo, hi = float(self.omega_grid[0]), float(self.omega_grid[-1])
        if not lo < w < hi:
            raise ValueError("principal-value point outside tabulated grid")
        return lo, hi

    def gamma_prime(self, w, h=1e-6):
        lo, hi = float(self.omega_grid[0]), float(self.omega_grid[-1])
        h = min(h, 0.5 * (hi - w), 0.5 * (w - lo))
        return super().gamma_prime(w, h=h)

    def gamma(self, w):
        w = np.asarray(w, dtype=float)
        out = self._interp(w)
        if np.any(np.isnan(out)):
            raise ValueError(
                f"tabulated bath queried outside grid "
                f"[{self.omega_grid[0]}, {self.omega_grid[-1]}]"
            )
        out = np.maximum(out, 0.0)
        return out if out.ndim else float(out)

    def correlation(self, t, abs_tol=1e-10):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t_arr.shape, dtype=complex)
        for i, ti in enumerate(t_arr.ravel()):
            out.ravel()[i] = self._fourier_panels(ti) / (2 * np.pi)
        return out[0] if np.asarray(t).ndim == 0 else out

    def _fourier_panels(self, t, order=8):
        """int gamma(w) e^{-iwt} dw by composite Gauss over the knot panels.

        Each knot interval is split so the oscillation advances by at most
        ~2 radians per subpanel; order-8 Gauss then resolves cubic x phase
        to roundoff.  This is vectorized, unlike adaptive quadrature over
        the kinked interpolant, which subdivides at every knot.
        """
        edges = self.omega_grid
        widths = np.diff(edges)
        nsub = np.minimum(1 + (widths * abs(t) / 2.0).astype(int), 256)
        sub_edges = np.concatenate(
            [np.linspace(edges[k], edges[k + 1], nsub[k] + 1)[:-1]
             for k in range(len(widths))]
            + [edges[-1:]]
        )
        x, wt = np.polynomial.legendre.leggauss(order)
        mid = 0.5 * (sub_edges[:-1] + sub_edges[1:])
        half = 0.5 * np.diff(sub_edges)
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * wt[None, :]).ravel()
        g = np.maximum(self._interp(nodes), 0.0)
        return complex(np.sum(weights * g * np.exp(-1j * nodes * t)))

    def validate(self):
        if self.thermal_flag:
            W = self.support_radius()
            lim = min(W, abs(self.omega_grid[0]), abs(self.omega_grid[-1]))
            probe = np.linspace(-lim, lim, 101)
            rep = self.kms_report(probe)
            mask = self.gamma(probe) > 1e-10 * self.gamma_scale()
            if mask.any() and float(np.max(rep["relative_deviation"][mask])) > 1e-8:
                raise ValueError("tabulated bath fails the KMS check for given beta")

    def _compute_timescales(self, T_cutoff):
        if not np.isfinite(T_cutoff):
            raise ValueError(
                "tabulated bath: decay of C(t) is unknown; pass a finite T_cutoff"
            )
        # |C(t)| on a uniform grid via an FFT of the zero-padded spectrum
        # (adaptive quadrature of the nested Fourier integral is hopeless
        # for tabulated data); the padding refines the time step to
        # 2 pi / (4 * span).
        lo, hi = float(self.omega_grid[0]), float(self.omega_grid[-1])
        span = hi - lo
        n = 1 << 18
        dw = 4.0 * span / n
        w = lo + np.arange(n) * dw
        g = np.zeros(n)
        inside = w <= hi
        g[inside] = np.maximum(self._interp(w[inside]), 0.0)
        t = 2.0 * np.pi * np.arange(n) / (n * dw)
        absC = np.abs(self._fft_correlation(g, dw, lo, t))
        far = max(10.0 * T_cutoff, T_cutoff + 100.0)
        if far > t[-1]:
            raise ValueError(f"T_cutoff {T_cutoff} too large for the grid span")

        def integral(weight, a, b):
            sel = (t >= a) & (t <= b)
            return np.trapezoid(weight(t[sel]) * absC[sel], t[sel])

        norm = integral(lambda x: 1.0, 0.0, far)
        first = integral(lambda x: x, 0.0, T_cutoff)
        tail = integral(lambda x: 1.0, T_cutoff, far)
        tau_SB = 1.0 / norm
        return BathTimescales(tau_SB=tau_SB, tau_B=tau_SB * first,
                              T_cutoff=T_cutoff, epsilon_T=tau_SB * tail)

    @staticmethod
    def _fft_correlation(g, dw, lo, t):
        spec = np.fft.fft(g)
        return (dw / (2.0 * np.pi)) * np.exp(-1j * lo * t) * spec


def load_tabulated(path, beta=None):
    """Read a two-column (omega, gamma) text file; '#' starts a comment."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"expected two columns in {path}, got {data.shape[1]}")
    return TabulatedBath(data[:, 0], data[:, 1], beta=beta)


_KINDS = {
    "ohmic": OhmicBath,
    "toy": ToyBath,
    "rectangle": RectangleBath,
    "tabulated": TabulatedBath,
}


def make_bath(kind, **params):
    """Factory keyed by bath kind name."""
    if kind not in _KINDS:
        raise ValueError(f"unknown bath kind {kind!r}; choose from {sorted(_KINDS)}")
    if kind == "tabulated" and "path" in params:
        return load_tabulated(params.pop("path"), **params)
    return _KINDS[kind](**params)


# Functional aliases mirroring the class API.

def gamma(bath, w):
    return bath.gamma(w)


def correlation(bath, t, abs_tol=1e-10):
    return bath.correlation(t, abs_tol=abs_tol)


def lamb_amplitude_S(bath, w, excision_halfwidth=None):
    return bath.lamb_amplitude_S(w, excision_halfwidth=excision_halfwidth)


def half_fourier_f(bath, w):
    return bath.half_fourier_f(w)


def timescales(bath, T_cutoff=np.inf):
    return bath.timescales(T_cutoff)


def kms_report(bath, w_grid):
    return bath.kms_report(w_grid)
