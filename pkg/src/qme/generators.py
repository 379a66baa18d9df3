"""Time-independent master-equation generators.

Builds, from a Hamiltonian eigensystem and a coupling operator:

- the Bohr-frequency (jump) decomposition A = sum_w A_w,
- the Redfield filtered operator A_f = sum_w f*(-w) A_w,
- Davies-Lindblad generators (one jump operator per Bohr frequency),
- coarse-grained (finite averaging time T_a) generators, in both the
  frequency form (Kossakowski matrix over Bohr pairs, diagonalized into
  Lindblad operators) and the discretized continuous-filter form,
- the multi-coupling Lindblad form for several system operators coupled
  to correlated baths.

All coarse-grained coefficient integrals reduce the filter overlap

    gamma_{w w'} = integral f(eps, w) f(eps, -w') d eps,
    f(eps, w) = sqrt(gamma(eps) T_a / 2 pi) sinc[T_a (eps - w)/2]

to quadratures that are assembled as Gram matrices, so positivity of the
resulting Lindblad weights is automatic up to roundoff.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .operators import (
    HermitianOperator,
    EigenSystem,
    Superoperator,
    eigensystem,
    operator_norm,
    vectorize_generator,
    vectorize_redfield,
)

logger = logging.getLogger(__name__)

__all__ = [
    "JumpDecomposition",
    "GeneratorConfig",
    "GeneratorSet",
    "DiscretizationParams",
    "decompose_coupling",
    "redfield_filtered",
    "redfield_generator",
    "davies_generator",
    "cgme_x",
    "cgme_gamma",
    "cgme_lamb_F",
    "cgme_lamb_shift",
    "cgme_a_epsilon",
    "kossakowski_matrix",
    "discretization_params",
    "cgme_generator",
    "multi_coupling_generator",
]

WEIGHT_CLIP_TOL = 1e-9


@dataclass(frozen=True)
class JumpDecomposition:
    """Coupling operator split by Bohr frequency: A = sum_w A_w with
    exp(iHt) A_w exp(-iHt) = exp(-iwt) A_w (up to the overall sum)."""

    frequencies: np.ndarray          # ascending
    operators: tuple                 # A_w, same order
    coupling: np.ndarray
    hamiltonian: np.ndarray
    freq_tol: float

    @property
    def dim(self) -> int:
        return self.coupling.shape[0]

    def terms(self):
        return list(zip(self.frequencies, self.operators))

    def operator_at(self, w):
        idx = np.argmin(np.abs(self.frequencies - w))
        if abs(self.frequencies[idx] - w) > max(self.freq_tol, 1e-12):
            raise KeyError(f"no Bohr frequency near {w}")
        return self.operators[idx]

    def conjugation_residual(self, t=0.37):
        """Max-norm residual of exp(iHt) A exp(-iHt) = sum_w exp(-iwt) A_w."""
        from scipy.linalg import expm
        U = expm(1j * self.hamiltonian * t)
        lhs = U @ self.coupling @ U.conj().T
        rhs = sum(np.exp(-1j * w * t) * Aw
                  for w, Aw in zip(self.frequencies, self.operators))
        return float(np.max(np.abs(lhs - rhs)))


def decompose_coupling(eig: EigenSystem, A, freq_tol=None) -> JumpDecomposition:
    """A_w = sum over level pairs with E_m - E_n = w of P_n A P_m."""
    A_mat = A.entries if isinstance(A, HermitianOperator) else np.asarray(A, complex)
    H = eig.reconstruct()
    norm_A = operator_norm(A_mat)
    if abs(norm_A - 1.0) > 1e-9:
        warnings.warn(
            f"coupling operator norm is {norm_A:.6g}, not 1; error-bound "
            "formulas assume a normalized coupling", stacklevel=2)
    if freq_tol is None:
        freq_tol = 1e-8 * operator_norm(H)
    freq_tol = max(freq_tol, 0.0)

    raw = []
    for n, Pn in enumerate(eig.projectors):
        for m, Pm in enumerate(eig.projectors):
            w = eig.energies[m] - eig.energies[n]
            term = Pn @ A_mat @ Pm
            if np.max(np.abs(term)) > 1e-14 * max(norm_A, 1.0):
                raw.append((w, term))
    raw.sort(key=lambda p: p[0])

    freqs, ops = [], []
    for w, term in raw:
        if freqs and w - freqs[-1] <= freq_tol:
            ops[-1] = ops[-1] + term
            # keep the cluster representative stable (first value seen)
        else:
            freqs.append(w)
            ops.append(term.astype(complex))
    return JumpDecomposition(
        frequencies=np.array(freqs), operators=tuple(ops),
        coupling=A_mat, hamiltonian=H, freq_tol=freq_tol,
    )


@dataclass(frozen=True)
class DiscretizationParams:
    delta_epsilon: float
    k_star: int
    T_a: float

    def __post_init__(self):
        if self.delta_epsilon <= 0 or self.k_star < 1:
            raise ValueError("need delta_epsilon > 0 and k_star >= 1")


@dataclass(frozen=True)
class GeneratorConfig:
    equation_kind: str               # redfield | davies | cgme_frequency | cgme_discrete | ore
    T_a: float | None = None
    lambless: bool = False
    discretization: DiscretizationParams | None = None

    def __post_init__(self):
        kinds = {"redfield", "davies", "cgme_frequency", "cgme_discrete", "ore"}
        if self.equation_kind not in kinds:
            raise ValueError(f"unknown equation kind {self.equation_kind!r}")
        if self.equation_kind.startswith("cgme") and not (self.T_a and self.T_a > 0):
            raise ValueError("coarse-grained equations require T_a > 0")


@dataclass(frozen=True)
class GeneratorSet:
    """Effective Hamiltonian plus either Lindblad terms or a Redfield pair."""

    H_eff: np.ndarray
    kind: str
    lindblad_ops: tuple | None = None        # ((weight, L), ...)
    redfield_pair: tuple | None = None       # (A, A_f)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        H = np.asarray(self.H_eff, dtype=complex)
        if np.max(np.abs(H - H.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(H))):
            raise ValueError("H_eff is not Hermitian within 1e-10")
        if (self.lindblad_ops is None) == (self.redfield_pair is None):
            raise ValueError("provide exactly one of lindblad_ops / redfield_pair")
        if self.lindblad_ops is not None:
            for w, _ in self.lindblad_ops:
                if w < 0:
                    raise ValueError(f"negative Lindblad weight {w}")

    @property
    def dim(self) -> int:
        return self.H_eff.shape[0]

    def to_superoperator(self) -> Superoperator:
        if self.lindblad_ops is not None:
            return vectorize_generator(self.H_eff, self.lindblad_ops)
        A, A_f = self.redfield_pair
        return vectorize_redfield(self.H_eff, A, A_f)


# ---------------------------------------------------------------------------
# Redfield and Davies
# ---------------------------------------------------------------------------

def redfield_filtered(jd: JumpDecomposition, bath, lambless=False) -> np.ndarray:
    """Filtered coupling A_f = sum_w f*(-w) A_w (Lambless: (1/2) gamma(-w))."""
    A_f = np.zeros((jd.dim, jd.dim), dtype=complex)
    for w, Aw in jd.terms():
        coeff = 0.5 * bath.gamma(-w) if lambless else np.conj(bath.half_fourier_f(-w))
        A_f += coeff * Aw
    return A_f


def redfield_generator(jd: JumpDecomposition, bath, lambless=False) -> GeneratorSet:
    A_f = redfield_filtered(jd, bath, lambless=lambless)
    return GeneratorSet(H_eff=jd.hamiltonian, kind="redfield",
                        redfield_pair=(jd.coupling, A_f),
                        meta={"lambless": lambless})


def davies_generator(jd: JumpDecomposition, bath, lambless=False) -> GeneratorSet:
    """One Lindblad term per Bohr frequency, weight gamma(w);
    H_LS = sum_w S(w) A_w^dag A_w (the secular projection of the Redfield
    drift term, and the large-averaging-time limit of the coarse-grained
    Lamb shift)."""
    ops = []
    H_LS = np.zeros((jd.dim, jd.dim), dtype=complex)
    for w, Aw in jd.terms():
        ops.append((float(bath.gamma(w)), Aw))
        if not lambless:
            H_LS += bath.lamb_amplitude_S(w) * (Aw.conj().T @ Aw)
    H_LS = 0.5 * (H_LS + H_LS.conj().T)
    return GeneratorSet(H_eff=jd.hamiltonian + H_LS, kind="davies",
                        lindblad_ops=tuple(ops),
                        meta={"lambless": lambless, "H_LS": H_LS})


# ---------------------------------------------------------------------------
# Coarse-grained coefficients
# ---------------------------------------------------------------------------

def _complex_quad(func, a, b, **kw):
    re = integrate.quad(lambda x: func(x).real, a, b, **kw)[0]
    im = integrate.quad(lambda x: func(x).imag, a, b, **kw)[0]
    return re + 1j * im


def cgme_x(w, wp, T_a, bath) -> complex:
    """Triangular-domain coefficient

    x_{w w'} = (1/T_a) int_{-T_a/2}^{T_a/2} dt' int_{-T_a/2}^{t'} dtau'
               C(tau' - t') exp(-i(w t' + w' tau')),

    reduced exactly to one dimension in u = tau' - t' (the inner integral
    over t' is elementary)."""
    s = w + wp

    def integrand(u):
        if abs(s) > 1e-12:
            inner = (np.exp(1j * s * (T_a / 2.0 + u)) - np.exp(-1j * s * T_a / 2.0)) / (1j * s)
        else:
            inner = T_a + u
        return bath.correlation(u) * np.exp(-1j * wp * u) * inner

    return _complex_quad(integrand, -T_a, 0.0, limit=400,
                         epsabs=1e-12, epsrel=1e-10) / T_a


def cgme_gamma(w, wp, T_a, bath, method="epsilon") -> float:
    """Square-domain coefficient gamma_{w w'} (always real).

    method="epsilon" (default): filter factorization
        integral f(eps, w) f(eps, -w') d eps
    on a composite Gauss grid.  method="time": the exact one-dimensional
    reduction of the direct double integral over [-T_a/2, T_a/2]^2.
    """
    if method == "epsilon":
        nodes, wt = _epsilon_grid(bath, T_a, (w, -wp))
        F1 = _filter(bath, T_a, nodes, w)
        F2 = _filter(bath, T_a, nodes, -wp)
        return float(np.sum(wt * F1 * F2))
    if method == "time":
        s = w + wp

        def integrand(u):
            lo = max(-T_a / 2.0, -T_a / 2.0 - u)
            hi = min(T_a / 2.0, T_a / 2.0 - u)
            if abs(s) > 1e-12:
                inner = (np.exp(-1j * s * lo) - np.exp(-1j * s * hi)) / (1j * s)
            else:
                inner = hi - lo
            return bath.correlation(u) * np.exp(-1j * wp * u) * inner

        val = _complex_quad(integrand, -T_a, T_a, limit=800,
                            epsabs=1e-12, epsrel=1e-10) / T_a
        if abs(val.imag) > 1e-7 * max(1.0, abs(val.real)):
            raise ArithmeticError(
                f"gamma_ww' should be real; got imaginary part {val.imag:.3e}")
        return float(val.real)
    raise ValueError(f"unknown method {method!r}")


def _filter(bath, T_a, eps, w):
    """f(eps, w) = sqrt(gamma(eps) T_a / 2 pi) sinc[T_a (eps - w) / 2]."""
    g = np.maximum(np.asarray(bath.gamma(eps), dtype=float), 0.0)
    return np.sqrt(g * T_a / (2 * np.pi)) * np.sinc(T_a * (np.asarray(eps) - w) / (2 * np.pi))


def _epsilon_grid(bath, T_a, freqs=(), tol=1e-12, order=24):
    """Composite Gauss-Legendre grid resolving both gamma(eps) and the
    sinc oscillation of period 4 pi / T_a; panel edges include eps = 0."""
    W = bath.support_radius(tol=tol)
    if freqs:
        W = max(W, 1.5 * max(abs(f) for f in freqs) + 10.0 / max(T_a, 1e-9))
    width = min(np.pi / max(T_a, 1e-9), max(W / 16.0, 1e-12))
    n_half = int(np.ceil(W / width))
    edges = np.linspace(-n_half * width, n_half * width, 2 * n_half + 1)
    x, wgt = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * wgt[None, :]).ravel()
    return nodes, weights


def cgme_lamb_F(w, wp, T_a, bath) -> float:
    """Lamb-shift coefficient

    F_{w w'} = (1/(2 T_a w+)) Re int_0^{T_a}
               (exp(i(w th - T_a w+)) - exp(-i(w' th - T_a w+))) C(th) dth,

    evaluated through the identity
    (...) = 2i exp(i w- th) sin(w+ (th - T_a)), which makes the w+ -> 0
    limit manifestly removable (sin(w+ x)/w+ -> x)."""
    w_plus = 0.5 * (w + wp)
    w_minus = 0.5 * (w - wp)

    def integrand(th):
        x = th - T_a
        # sin(w+ x)/w+ written as x*sinc to stay analytic at w+ = 0
        ratio = x * np.sinc(w_plus * x / np.pi)
        return 1j * np.exp(1j * w_minus * th) * ratio * bath.correlation(th)

    val = _complex_quad(integrand, 0.0, T_a, limit=400,
                        epsabs=1e-12, epsrel=1e-10)
    return float(val.real) / T_a


def cgme_lamb_shift(jd: JumpDecomposition, bath, T_a) -> np.ndarray:
    """H_LS = sum_{w w'} F_{w w'} A_{w'} A_w."""
    H_LS = np.zeros((jd.dim, jd.dim), dtype=complex)
    for w, Aw in jd.terms():
        for wp, Awp in jd.terms():
            H_LS += cgme_lamb_F(w, wp, T_a, bath) * (Awp @ Aw)
    sym = 0.5 * (H_LS + H_LS.conj().T)
    if np.max(np.abs(H_LS - sym)) > 1e-9 * max(1.0, np.max(np.abs(sym))):
        raise ArithmeticError("Lamb shift failed to come out Hermitian")
    return sym


def cgme_a_epsilon(jd: JumpDecomposition, eps, T_a, bath) -> np.ndarray:
    """A_eps = sum_w f(eps, w) A_w (frequency-sum form)."""
    out = np.zeros((jd.dim, jd.dim), dtype=complex)
    for w, Aw in jd.terms():
        out += float(_filter(bath, T_a, np.asarray(eps, float), w)) * Aw
    return out


def kossakowski_matrix(jd: JumpDecomposition, bath, T_a,
                       discretization: DiscretizationParams | None = None):
    """Coefficient matrix K[i, j] = integral f(eps, w_i) f(eps, w_j) d eps
    over the Bohr frequencies of ``jd``.

    With continuous eps this is gamma_{w_i, -w_j}; passing discretization
    parameters replaces the integral by its Riemann sum over the
    (2 k* - 1) grid points, which is exactly the discretized generator's
    coefficient matrix.  Either way K is a Gram matrix, hence positive
    semidefinite up to roundoff.
    """
    freqs = jd.frequencies
    if discretization is None:
        nodes, wt = _epsilon_grid(bath, T_a, tuple(freqs))
    else:
        de, ks = discretization.delta_epsilon, discretization.k_star
        nodes = de * np.arange(-(ks - 1), ks)
        wt = np.full(nodes.shape, de)
    F = np.empty((len(nodes), len(freqs)))
    for j, w in enumerate(freqs):
        F[:, j] = _filter(bath, T_a, nodes, w)
    return (F * wt[:, None]).T @ F


def _lindblad_from_kossakowski(jd: JumpDecomposition, K):
    K = 0.5 * (K + np.conj(K).T)
    vals, vecs = np.linalg.eigh(K)
    if np.min(vals) < -WEIGHT_CLIP_TOL:
        raise ArithmeticError(
            f"Kossakowski matrix eigenvalue {np.min(vals):.3e} below "
            f"-{WEIGHT_CLIP_TOL}: positivity violated")
    ops = []
    for mu in range(len(vals)):
        wgt = max(float(vals[mu]), 0.0)
        if wgt == 0.0:
            continue
        L = np.zeros((jd.dim, jd.dim), dtype=complex)
        for i, Aw in enumerate(jd.operators):
            L += vecs[i, mu] * Aw
        ops.append((wgt, L))
    return tuple(ops)


def discretization_params(bath_timescales, commutator_norm,
                          error_target_mode="default") -> DiscretizationParams:
    """Filter-grid spacing and half-count for the discretized generator:

    delta_eps = (1/tau_SB) sqrt(tau_B/tau_SB) / (2 + ||[H,A]|| T_a)^2
                * sqrt(5) pi^2 / (2 (10 sqrt(2/5) + 1))
    k*        = ceil( (tau_SB/tau_B)^{3/2} (2 + ||[H,A]|| T_a)^4
                      * 4 (10 sqrt(2/5) + 1) / pi^3 + 0.5 )

    with T_a fixed at sqrt(tau_B tau_SB / 5).  These are worst-case
    guarantees; much coarser grids are usually accurate, so callers may
    override via GeneratorConfig.discretization.
    """
    if error_target_mode != "default":
        raise ValueError("only the default error-target mode is defined")
    tau_SB, tau_B = bath_timescales.tau_SB, bath_timescales.tau_B
    if tau_B <= 0:
        raise ValueError("discretization undefined for tau_B = 0")
    T_a = np.sqrt(tau_B * tau_SB / 5.0)
    chi = (2.0 + commutator_norm * T_a) ** 2
    c0 = 10.0 * np.sqrt(2.0 / 5.0) + 1.0
    delta_eps = (np.sqrt(tau_B / tau_SB) / tau_SB) / chi * np.sqrt(5.0) * np.pi ** 2 / (2.0 * c0)
    k_star = int(np.ceil((tau_SB / tau_B) ** 1.5 * chi ** 2 * 4.0 * c0 / np.pi ** 3 + 0.5))
    return DiscretizationParams(delta_epsilon=delta_eps, k_star=k_star, T_a=T_a)


def cgme_generator(jd: JumpDecomposition, bath, config: GeneratorConfig) -> GeneratorSet:
    """Coarse-grained generator in Lindblad form.

    equation_kind "cgme_frequency" integrates the filter overlap exactly;
    "cgme_discrete" uses the finite filter grid (config.discretization,
    with the Lamb shift still taken from the frequency form)."""
    if config.equation_kind not in ("cgme_frequency", "cgme_discrete"):
        raise ValueError("config.equation_kind must be cgme_frequency or cgme_discrete")
    disc = None
    if config.equation_kind == "cgme_discrete":
        disc = config.discretization
        if disc is None:
            raise ValueError("cgme_discrete requires discretization parameters")
    K = kossakowski_matrix(jd, bath, config.T_a, discretization=disc)
    ops = _lindblad_from_kossakowski(jd, K)
    if config.lambless:
        H_LS = np.zeros((jd.dim, jd.dim), dtype=complex)
    else:
        H_LS = cgme_lamb_shift(jd, bath, config.T_a)
    return GeneratorSet(
        H_eff=jd.hamiltonian + H_LS, kind=config.equation_kind,
        lindblad_ops=ops,
        meta={"T_a": config.T_a, "lambless": config.lambless,
              "H_LS": H_LS, "kossakowski": K,
              "discretization": disc},
    )


def multi_coupling_generator(decompositions, gamma_matrix, config: GeneratorConfig) -> GeneratorSet:
    """Coarse-grained generator for couplings A_1..A_n to correlated baths.

    ``gamma_matrix(eps)`` returns the Hermitian PSD matrix gamma_ij(eps).
    The coefficient matrix over the combined index (coupling i, Bohr
    frequency w) is

        K[(i,w),(j,v)] = integral (T_a/2pi) sinc[T_a(eps-w)/2]
                         sinc[T_a(eps-v)/2] gamma_ij(eps) d eps,

    assembled as a weighted sum of PSD blocks and diagonalized into
    Lindblad operators.  Only the dissipator is built (pass lambless=True);
    cross-coupling Lamb shifts would need the time-domain cross
    correlations, which gamma_ij alone does not supply.
    """
    if not config.lambless:
        raise NotImplementedError(
            "multi-coupling Lamb shift is not implemented; set lambless=True")
    if config.T_a is None or config.T_a <= 0:
        raise ValueError("multi-coupling generator requires T_a > 0")
    T_a = config.T_a
    dim = decompositions[0].dim
    H = decompositions[0].hamiltonian
    for jd in decompositions:
        if jd.dim != dim or np.max(np.abs(jd.hamiltonian - H)) > 1e-10:
            raise ValueError("all decompositions must share one Hamiltonian")

    index = [(i, w, Aw) for i, jd in enumerate(decompositions)
             for w, Aw in jd.terms()]
    n_c = len(decompositions)

    # probe grid: union of per-coupling grids
    all_freqs = tuple(w for _, w, _ in index)
    first_bath_radius = max(abs(f) for f in all_freqs) + 10.0 / T_a

    # grid on a symmetric window wide enough for every sinc center
    width = np.pi / T_a
    n_half = int(np.ceil(3.0 * first_bath_radius / width))
    edges = np.linspace(-n_half * width, n_half * width, 2 * n_half + 1)
    x, wgt = np.polynomial.legendre.leggauss(24)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * wgt[None, :]).ravel()

    m = len(index)
    K = np.zeros((m, m), dtype=complex)
    sinc_cols = np.empty((len(nodes), m))
    for p, (_, w, _) in enumerate(index):
        sinc_cols[:, p] = np.sinc(T_a * (nodes - w) / (2 * np.pi))
    gm_stack = np.empty((len(nodes), n_c, n_c), dtype=complex)
    for n, eps in enumerate(nodes):
        gm = np.asarray(gamma_matrix(eps), dtype=complex)
        herm = 0.5 * (gm + gm.conj().T)
        if np.max(np.abs(gm - herm)) > 1e-9 * max(1.0, np.max(np.abs(herm))):
            raise ValueError("gamma_matrix(eps) is not Hermitian")
        if np.min(np.linalg.eigvalsh(herm)) < -1e-9 * max(1.0, np.max(np.abs(herm))):
            raise ValueError(f"gamma_matrix({eps:.4g}) is not PSD")
        gm_stack[n] = herm
    pref = T_a / (2 * np.pi)
    for p, (i, _, _) in enumerate(index):
        for q, (j, _, _) in enumerate(index):
            K[p, q] = pref * np.sum(
                weights * sinc_cols[:, p] * sinc_cols[:, q] * gm_stack[:, i, j])

    K = 0.5 * (K + K.conj().T)
    vals, vecs = np.linalg.eigh(K)
    if np.min(vals) < -WEIGHT_CLIP_TOL:
        raise ArithmeticError(
            f"multi-coupling coefficient matrix eigenvalue {np.min(vals):.3e} "
            "is negative beyond tolerance")
    ops = []
    for mu in range(m):
        wv = max(float(vals[mu]), 0.0)
        if wv == 0.0:
            continue
        L = np.zeros((dim, dim), dtype=complex)
        for p, (_, _, Aw) in enumerate(index):
            L += vecs[p, mu] * Aw
        ops.append((wv, L))
    return GeneratorSet(H_eff=H, kind="cgme_multi", lindblad_ops=tuple(ops),
                        meta={"T_a": T_a, "lambless": True})
