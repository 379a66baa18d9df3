"""Time-dependent machinery.

Propagators for piecewise-constant Hamiltonians interrupted by instantaneous
pulses, the time-dependent coarse-grained Lindblad operators and Lamb shift
(coarse-graining window sliding with t), the time-dependent Redfield filter,
and the dynamical-decoupling suppression-ratio analysis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from .operators import HermitianOperator

__all__ = [
    "DriveSchedule",
    "DDSequence",
    "dd_schedule",
    "propagator",
    "heisenberg_A",
    "td_a_epsilon",
    "td_lamb",
    "td_redfield_filter",
    "dd_sign",
    "dd_window_filter",
    "dd_suppression_xi",
    "dd_suppression_xi_general",
]

UNITARY_TOL = 1e-12


def _as_matrix(op) -> np.ndarray:
    if isinstance(op, HermitianOperator):
        return op.entries
    return np.asarray(op, dtype=complex)


@dataclass(frozen=True)
class DriveSchedule:
    """Piecewise-constant Hamiltonian segments plus instantaneous pulses.

    ``segments`` is a tuple of (t_start, t_end, H) covering [0, duration]
    contiguously; ``pulses`` is a tuple of (t_pulse, U_pulse) with strictly
    increasing pulse times strictly inside (0, duration).  A pulse acts at its
    exact instant; windows use the half-open convention [t_from, t_to), i.e. a
    pulse at t_from belongs to the window and one at t_to does not.
    """

    segments: tuple
    pulses: tuple = ()
    duration: float = field(init=False, default=0.0)

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        segs = []
        prev_end = None
        for t0, t1, H in self.segments:
            t0, t1 = float(t0), float(t1)
            if not t1 > t0:
                raise ValueError(f"segment ({t0}, {t1}) has non-positive length")
            if prev_end is None:
                if abs(t0) > 1e-12:
                    raise ValueError("first segment must start at t = 0")
            elif abs(t0 - prev_end) > 1e-12 * max(1.0, abs(t1)):
                raise ValueError("segments must be contiguous and non-overlapping")
            segs.append((t0, t1, _as_matrix(H)))
            prev_end = t1
        dim = segs[0][2].shape[0]
        for _, _, H in segs:
            if H.shape != (dim, dim):
                raise ValueError("all segment Hamiltonians must share one dimension")

        pls = []
        prev_t = 0.0
        for tp, U in self.pulses:
            tp = float(tp)
            U = _as_matrix(U)
            if not (0.0 < tp < prev_end):
                raise ValueError(f"pulse time {tp} not strictly inside (0, duration)")
            if pls and tp <= prev_t:
                raise ValueError("pulse times must be strictly increasing")
            if U.shape != (dim, dim):
                raise ValueError("pulse unitary dimension mismatch")
            if np.max(np.abs(U.conj().T @ U - np.eye(dim))) > UNITARY_TOL:
                raise ValueError(f"pulse at t = {tp} is not unitary within {UNITARY_TOL}")
            pls.append((tp, U))
            prev_t = tp

        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "pulses", tuple(pls))
        object.__setattr__(self, "duration", prev_end)

    @property
    def dim(self) -> int:
        return self.segments[0][2].shape[0]

    def hamiltonian_at(self, t: float) -> np.ndarray:
        """Segment Hamiltonian at time t, extending the boundary segments
        beyond [0, duration] (sliding averaging windows may poke outside)."""
        if t < self.segments[0][1]:
            return self.segments[0][2]
        if t >= self.segments[-1][0]:
            return self.segments[-1][2]
        for t0, t1, H in self.segments:
            if t0 <= t < t1:
                return H
        return self.segments[-1][2]  # pragma: no cover

    def breakpoints(self, lo: float, hi: float) -> list:
        """Times in (lo, hi) where the integrand of a window quadrature loses
        smoothness: segment boundaries (kinks) and pulse instants (jumps)."""
        pts = set()
        for t0, t1, _ in self.segments:
            for x in (t0, t1):
                if lo < x < hi:
                    pts.add(x)
        for tp, _ in self.pulses:
            if lo < tp < hi:
                pts.add(tp)
        return sorted(pts)


@dataclass(frozen=True)
class DDSequence:
    """Periodic instantaneous pulses spaced by dt; averaging time 4*k_prime*dt."""

    dt: float
    k_prime: int = 1
    pulse: np.ndarray = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if int(self.k_prime) != self.k_prime or self.k_prime < 1:
            raise ValueError("k_prime must be an integer >= 1")
        if self.pulse is None:
            # exp(-i (pi/2) X) = -i X
            object.__setattr__(
                self, "pulse", -1j * np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
            )
        else:
            object.__setattr__(self, "pulse", _as_matrix(self.pulse))

    @property
    def averaging_time(self) -> float:
        return 4.0 * self.k_prime * self.dt


def dd_schedule(dd: DDSequence, duration: float) -> DriveSchedule:
    """Zero system Hamiltonian with the DD pulse applied at every multiple of dt."""
    dim = dd.pulse.shape[0]
    n = int(math.floor(duration / dd.dt - 1e-12))
    pulses = tuple((j * dd.dt, dd.pulse) for j in range(1, n + 1) if j * dd.dt < duration)
    return DriveSchedule(
        segments=((0.0, float(duration), np.zeros((dim, dim), dtype=complex)),),
        pulses=pulses,
    )


def _segment_step(H: np.ndarray, dt: float) -> np.ndarray:
    if dt == 0.0:
        return np.eye(H.shape[0], dtype=complex)
    if not np.any(H):
        return np.eye(H.shape[0], dtype=complex)
    return expm(-1j * dt * H)


def _propagator_forward(sched: DriveSchedule, t_from: float, t_to: float) -> np.ndarray:
    """U propagating t_from -> t_to (t_to >= t_from), pulses in [t_from, t_to),
    boundary segments extended outside [0, duration]."""
    dim = sched.dim
    U = np.eye(dim, dtype=complex)
    if t_to < t_from:
        raise ValueError("internal: t_to < t_from")

    events = [(tp, Up) for tp, Up in sched.pulses if t_from <= tp < t_to]
    cursor = t_from
    for tp, Up in events:
        U = _free_stretch(sched, cursor, tp) @ U
        U = Up @ U
        cursor = tp
    U = _free_stretch(sched, cursor, t_to) @ U
    return U


def _free_stretch(sched: DriveSchedule, a: float, b: float) -> np.ndarray:
    """Pulse-free evolution a -> b under the piecewise-constant Hamiltonian."""
    dim = sched.dim
    U = np.eye(dim, dtype=complex)
    if b <= a:
        return U
    cuts = [a] + [x for x in (t for t0, t1, _ in sched.segments for t in (t0, t1))
                  if a < x < b] + [b]
    cuts = sorted(set(cuts))
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        H = sched.hamiltonian_at(lo)
        U = _segment_step(H, hi - lo) @ U
    return U


def propagator(sched: DriveSchedule, t_from: float, t_to: float) -> np.ndarray:
    """Unitary mapping states at t_from to states at t_to.

    Reverse ordering is handled by the adjoint.  Times must lie within the
    schedule domain [0, duration]; window quadratures that need to peek
    outside use the boundary-extended internal path instead.
    """
    for t in (t_from, t_to):
        if not (-1e-12 <= t <= sched.duration + 1e-12):
            raise ValueError(f"time {t} outside schedule domain [0, {sched.duration}]")
    if t_to >= t_from:
        return _propagator_forward(sched, t_from, t_to)
    return _propagator_forward(sched, t_to, t_from).conj().T


def heisenberg_A(sched: DriveSchedule, A, t_prime: float, t: float) -> np.ndarray:
    """A(t', t) = U(t', t)^dagger A U(t', t), boundary segments extended."""
    A = _as_matrix(A)
    if t_prime >= t:
        U = _propagator_forward(sched, t, t_prime)
    else:
        U = _propagator_forward(sched, t_prime, t).conj().T
    return U.conj().T @ A @ U


def _panels(sched: DriveSchedule, t: float, lo: float, hi: float) -> list:
    """Quadrature panels for the window integrand t1 -> A(t + t1, t)."""
    inner = [x - t for x in sched.breakpoints(t + lo, t + hi)]
    edges = sorted({lo, hi, *inner})
    return list(zip(edges[:-1], edges[1:]))


def _gauss_nodes(lo: float, hi: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + half * x, half * w


def td_a_epsilon(sched: DriveSchedule, A, bath, t: float, eps: float, T_a: float,
                 quadrature_order: int = 32) -> np.ndarray:
    """Time-dependent coarse-grained Lindblad operator at frequency eps:

        A_eps(t) = sqrt(gamma(eps) / (2 pi T_a))
                   * int_{-T_a/2}^{T_a/2} e^{i eps t1} A(t + t1, t) dt1

    Per-panel Gauss-Legendre quadrature, subdivided where the integrand is
    non-smooth (pulse instants and segment boundaries).
    """
    if quadrature_order < 2:
        raise ValueError("quadrature order must be >= 2")
    if T_a <= 0:
        raise ValueError("T_a must be > 0")
    A = _as_matrix(A)
    g = max(float(np.real(bath.gamma(eps))), 0.0)
    acc = np.zeros_like(A, dtype=complex)
    for lo, hi in _panels(sched, t, -T_a / 2.0, T_a / 2.0):
        nodes, weights = _gauss_nodes(lo, hi, quadrature_order)
        for t1, w in zip(nodes, weights):
            acc += w * np.exp(1j * eps * t1) * heisenberg_A(sched, A, t + t1, t)
    return math.sqrt(g / (2.0 * math.pi * T_a)) * acc


def td_lamb(sched: DriveSchedule, A, bath, t: float, T_a: float,
            quadrature_order: int = 16) -> HermitianOperator:
    """Time-dependent Lamb shift over the sliding window [t - T_a/2, t + T_a/2]:

        H_LS(t) = (i / 2 T_a) * int int sgn(t1 - t2) C(t2 - t1)
                                  A(t + t2, t) A(t + t1, t) dt1 dt2

    The sgn kernel makes the double integral equal M - M^dagger with M the
    t1 > t2 triangle, so the result is Hermitian by construction.
    """
    if quadrature_order < 2:
        raise ValueError("quadrature order must be >= 2")
    A = _as_matrix(A)
    dim = A.shape[0]
    M = np.zeros((dim, dim), dtype=complex)
    lo0, hi0 = -T_a / 2.0, T_a / 2.0
    outer_panels = _panels(sched, t, lo0, hi0)
    for lo, hi in outer_panels:
        n1, w1 = _gauss_nodes(lo, hi, quadrature_order)
        for t1, wa in zip(n1, w1):
            A1 = heisenberg_A(sched, A, t + t1, t)
            # inner integral over t2 in [-T_a/2, t1)
            for ilo, ihi in _panels(sched, t, lo0, t1):
                n2, w2 = _gauss_nodes(ilo, ihi, quadrature_order)
                for t2, wb in zip(n2, w2):
                    c = bath.correlation(t2 - t1)
                    M += (wa * wb * c) * (
                        heisenberg_A(sched, A, t + t2, t) @ A1
                    )
    H = (1j / (2.0 * T_a)) * (M - M.conj().T)
    residual = float(np.max(np.abs(H - H.conj().T)))
    if residual > 1e-9 * max(1.0, float(np.max(np.abs(H)))):
        raise ArithmeticError(f"Lamb-shift Hermiticity residual {residual:.3e}")
    return HermitianOperator(H)


def td_redfield_filter(sched: DriveSchedule, A, bath, t: float,
                       history_cutoff: float) -> np.ndarray:
    """Time-dependent Redfield filter

        A_f(t) = int_0^cutoff C(-t') A(t - t', t) dt'

    by pulse-subdivided Gauss quadrature.  A cutoff shorter than ~3 bath
    correlation times truncates the memory integral; that triggers a warning.
    """
    if history_cutoff <= 0:
        raise ValueError("history_cutoff must be > 0")
    try:
        tau_B = bath.timescales().tau_B
    except Exception:
        tau_B = None
    if tau_B is not None and np.isfinite(tau_B) and history_cutoff < 3.0 * tau_B:
        warnings.warn(
            f"history_cutoff {history_cutoff:.3g} < 3 tau_B = {3 * tau_B:.3g}: "
            "memory integral truncated early",
            stacklevel=2,
        )
    A = _as_matrix(A)
    # breakpoints in t' where the integrand loses smoothness: pulse/segment
    # times crossed by t - t', plus a correlation-function support edge if the
    # bath has one (sharp-cutoff correlation functions are discontinuous there)
    edges = {0.0, history_cutoff}
    for x in sched.breakpoints(t - history_cutoff, t):
        edges.add(t - x)
    tau_c = getattr(bath, "tau_c", None)
    if tau_c is not None and 0.0 < tau_c < history_cutoff:
        edges.add(float(tau_c))
    edges = sorted(e for e in edges if 0.0 <= e <= history_cutoff)

    acc = np.zeros_like(A, dtype=complex)
    # A(t - t', t) oscillates at Bohr frequencies up to the spectral spread
    # of H; cap the panel width so each carries at most ~2 radians of phase
    spread = 0.0
    for t0, t1, H in sched.segments:
        ev = np.linalg.eigvalsh(H)
        spread = max(spread, float(ev[-1] - ev[0]))
    max_width = min(history_cutoff / 16.0, 2.0 / max(spread, 1e-12))
    for lo, hi in zip(edges[:-1], edges[1:]):
        nsub = max(1, int(math.ceil((hi - lo) / max_width)))
        for k in range(nsub):
            slo = lo + (hi - lo) * k / nsub
            shi = lo + (hi - lo) * (k + 1) / nsub
            nodes, weights = _gauss_nodes(slo, shi, 16)
            for tp, w in zip(nodes, weights):
                acc += w * bath.correlation(-tp) * heisenberg_A(sched, A, t - tp, t)
    return acc


# ---------------------------------------------------------------------------
# dynamical decoupling suppression ratio
# ---------------------------------------------------------------------------

def dd_sign(t_prime: float, t: float, dt: float) -> int:
    """Parity sign (-1)^(number of pulse instants in [min, max) of t, t').

    Pulses sit at dt, 2*dt, ... (matching ``dd_schedule``: no pulse at t = 0);
    the half-open window matches the propagator convention (pulse at the
    earlier endpoint included, at the later excluded).
    """
    lo, hi = (t, t_prime) if t_prime >= t else (t_prime, t)
    first = max(math.ceil(lo / dt - 1e-9), 1)
    count = max(0, math.ceil(hi / dt - 1e-9) - first)
    return -1 if count % 2 else 1


def dd_window_filter(eps: float, dt: float, T_a: float, t: float = 0.0) -> complex:
    """Exact window integral (1/T_a) int_{-T_a/2}^{T_a/2} e^{i eps t1} s(t1) dt1
    with s(t1) the DD parity sign of the stretch between t and t + t1.

    This models the bi-infinite periodic protocol (pulses at every integer
    multiple of dt, negative ones included), so the ratio is invariant under
    t -> t + dt.  The sign is piecewise constant between pulse instants, so
    the integral is a finite sum of elementary exponential integrals.
    """

    def parity_sign(x: float) -> int:
        a_, b_ = (t, x) if x >= t else (x, t)
        count = math.ceil(b_ / dt - 1e-9) - math.ceil(a_ / dt - 1e-9)
        return -1 if count % 2 else 1

    lo, hi = t - T_a / 2.0, t + T_a / 2.0
    j_lo = math.floor(lo / dt - 1e-9) + 1
    j_hi = math.ceil(hi / dt + 1e-9) - 1
    cuts = [lo] + [j * dt for j in range(j_lo, j_hi + 1) if lo < j * dt < hi] + [hi]
    total = 0.0 + 0.0j
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        sign = parity_sign(mid)
        if abs(eps) * (abs(a) + abs(b)) < 1e-12:
            seg = b - a
        else:
            seg = (np.exp(1j * eps * (b - t)) - np.exp(1j * eps * (a - t))) / (1j * eps)
        total += sign * seg
    return total / T_a


def _tan_sinc_factor(x: float, k_prime: int) -> float:
    """Stable evaluation of sinc(2 k' x) * tan(x).

    tan's poles are removable against sinc's zeros; the identity
    sin(2k'x)/cos(x) = 2 * sum_{j=1}^{k'} (-1)^(j+1) sin((2(k'-j)+1) x)
    removes them analytically.
    """
    s = 0.0
    for j in range(1, k_prime + 1):
        s += (-1) ** (j + 1) * math.sin((2 * (k_prime - j) + 1) * x)
    # sinc(2k'x) tan(x) = [sin(2k'x)/cos(x)] * sin(x)/(2k'x)
    return 2.0 * s * float(np.sinc(x / math.pi)) / (2.0 * k_prime)


def _xi_quad_halfline(func, W: float) -> float:
    val, _ = quad(func, -W, W, limit=800)
    return val


def dd_suppression_xi(bath, dt: float, k_prime: int = 1) -> float:
    """DD suppression ratio at pulse-aligned times with averaging time
    T_a = 4 k' dt:

        xi = int gamma(w) |sinc(2k' w dt) tan(w dt)|^2 dw
           / int gamma(w) |sinc(2k' w dt)|^2 dw

    xi < 1 is guaranteed when the bath's high-frequency cutoff satisfies
    omega_c * dt < pi/4.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if int(k_prime) != k_prime or k_prime < 1:
        raise ValueError("k_prime must be an integer >= 1")
    W = bath.support_radius()

    def num(w):
        return float(np.real(bath.gamma(w))) * _tan_sinc_factor(w * dt, k_prime) ** 2

    def den(w):
        return float(np.real(bath.gamma(w))) * float(np.sinc(2 * k_prime * w * dt / math.pi)) ** 2

    numerator = _xi_quad_halfline(num, W)
    denominator = _xi_quad_halfline(den, W)
    if denominator <= 0:
        raise ArithmeticError("vanishing reference decoherence rate")
    return numerator / denominator


def dd_suppression_xi_general(bath, dt: float, T_a: float, t: float = 0.0) -> float:
    """DD suppression ratio from the general window-filter form, valid for any
    averaging time and evaluation time (not just T_a = 4 k' dt, t = l dt)."""
    if dt <= 0 or T_a <= 0:
        raise ValueError("dt and T_a must be > 0")
    W = bath.support_radius()

    def num(w):
        return float(np.real(bath.gamma(w))) * abs(dd_window_filter(w, dt, T_a, t)) ** 2

    def den(w):
        return float(np.real(bath.gamma(w))) * float(np.sinc(w * T_a / (2 * math.pi))) ** 2

    numerator = _xi_quad_halfline(num, W)
    denominator = _xi_quad_halfline(den, W)
    if denominator <= 0:
        raise ArithmeticError("vanishing reference decoherence rate")
    return numerator / denominator
