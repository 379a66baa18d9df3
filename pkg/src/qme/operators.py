"""Dense complex linear algebra primitives.

Hermitian operators, eigendecompositions with degeneracy clustering, the
trace/operator norms used for all state and generator comparisons, and the
column-stacking vectorization that turns a master-equation right-hand side
into a dim^2 x dim^2 superoperator matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "HermitianOperator",
    "DensityMatrix",
    "EigenSystem",
    "Superoperator",
    "eigensystem",
    "trace_norm",
    "operator_norm",
    "vectorize_generator",
    "vectorize_redfield",
    "choi_matrix",
    "choi_min_eigenvalue",
]

HERMITICITY_TOL = 1e-12


def _as_square_complex(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


@dataclass(frozen=True)
class HermitianOperator:
    """A validated Hermitian matrix (Hamiltonians, couplings, observables)."""

    entries: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.entries)
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        object.__setattr__(self, "entries", 0.5 * (m + m.conj().T))
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return operator_norm(self.entries)


@dataclass(frozen=True)
class DensityMatrix:
    """A physical state: Hermitian, unit trace, positive semidefinite."""

    entries: np.ndarray
    positivity_tol: float = 1e-8

    def __post_init__(self):
        m = _as_square_complex(self.entries)
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > 1e-10 * scale:
            raise ValueError("density matrix is not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > 1e-9 or abs(np.trace(m).imag) > 1e-9:
            raise ValueError("density matrix trace differs from 1 beyond 1e-9")
        min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        if min_eig < -self.positivity_tol:
            raise ValueError(
                f"density matrix has eigenvalue {min_eig:.3e} below -positivity_tol"
            )
        object.__setattr__(self, "entries", m)
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def from_pure(psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return DensityMatrix(np.outer(v, v.conj()))


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition H = sum_n E_n P_n after degeneracy clustering."""

    energies: np.ndarray            # ascending, one entry per cluster
    projectors: tuple               # Hermitian projectors, same order
    degeneracy_tol: float
    # raw (unclustered) data kept for exact reconstruction checks
    raw_energies: np.ndarray = field(repr=False, default=None)

    @property
    def level_spacing(self) -> float:
        """Minimum gap between distinct (clustered) energies."""
        e = self.energies
        if len(e) < 2:
            return np.inf
        return float(np.min(np.diff(e)))

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projectors[0], dtype=complex)
        for en, p in zip(self.energies, self.projectors):
            out += en * p
        return out


def eigensystem(H: HermitianOperator, degeneracy_tol: float | None = None) -> EigenSystem:
    """Eigendecompose H, merging eigenvalues closer than ``degeneracy_tol``.

    Default tolerance is 1e-9 * max(1, ||H||): floating-point eigenvalues of a
    degenerate level are never exactly equal, but must share one projector.
    """
    if degeneracy_tol is None:
        degeneracy_tol = 1e-9 * max(1.0, H.norm())
    if degeneracy_tol < 0:
        raise ValueError("degeneracy_tol must be >= 0")
    try:
        vals, vecs = np.linalg.eigh(H.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        cond = np.linalg.cond(H.entries)
        raise ArithmeticError(
            f"eigensolver failed to converge (condition number {cond:.3e})"
        ) from exc

    # cluster ascending eigenvalues
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[clusters[-1][0]] < degeneracy_tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    energies = []
    projectors = []
    for idx in clusters:
        v = vecs[:, idx]
        projectors.append(v @ v.conj().T)
        energies.append(float(np.mean(vals[idx])))
    return EigenSystem(
        energies=np.array(energies),
        projectors=tuple(projectors),
        degeneracy_tol=degeneracy_tol,
        raw_energies=vals,
    )


def trace_norm(X) -> float:
    """Sum of singular values (valid for non-Hermitian differences too)."""
    m = _as_square_complex(X)
    return float(np.linalg.svd(m, compute_uv=False).sum())


def operator_norm(X) -> float:
    """Largest singular value."""
    m = _as_square_complex(X)
    return float(np.linalg.svd(m, compute_uv=False).max())


@dataclass(frozen=True)
class Superoperator:
    """dim^2 x dim^2 matrix acting on column-stacked density matrices."""

    matrix: np.ndarray
    dim: int

    def __post_init__(self):
        m = _as_square_complex(self.matrix)
        if m.shape[0] != self.dim ** 2:
            raise ValueError("superoperator size does not match dim^2")
        object.__setattr__(self, "matrix", m)
        self.matrix.setflags(write=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        v = self.matrix @ np.asarray(rho, dtype=complex).reshape(-1, order="F")
        return v.reshape(self.dim, self.dim, order="F")

    def __add__(self, other: "Superoperator") -> "Superoperator":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return Superoperator(self.matrix + other.matrix, self.dim)


def _left(mat: np.ndarray) -> np.ndarray:
    d = mat.shape[0]
    return np.kron(np.eye(d), mat)


def _right(mat: np.ndarray) -> np.ndarray:
    d = mat.shape[0]
    return np.kron(mat.T, np.eye(d))


def _sandwich(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> left @ rho @ right (column stacking)."""
    return np.kron(right.T, left)


def hamiltonian_superop(H_eff: np.ndarray) -> np.ndarray:
    """Matrix of rho -> -i [H_eff, rho]."""
    H = np.asarray(H_eff, dtype=complex)
    return -1j * (_left(H) - _right(H))


def vectorize_generator(H_eff, lindblad_ops) -> Superoperator:
    """Vectorize -i[H_eff, rho] + sum_k w_k (L rho L^+ - 1/2 {L^+L, rho}).

    ``lindblad_ops`` is a list of (weight >= 0, L) pairs. Negative weights are
    rejected here; use :func:`vectorize_redfield` for non-Lindblad generators.
    """
    H = H_eff.entries if isinstance(H_eff, HermitianOperator) else np.asarray(H_eff, complex)
    d = H.shape[0]
    mat = hamiltonian_superop(H)
    for w, L in lindblad_ops:
        if w < 0:
            raise ValueError(f"negative Lindblad weight {w}")
        L = np.asarray(L, dtype=complex)
        if L.shape != (d, d):
            raise ValueError("Lindblad operator dimension mismatch")
        LdL = L.conj().T @ L
        mat = mat + w * (
            _sandwich(L, L.conj().T) - 0.5 * _left(LdL) - 0.5 * _right(LdL)
        )
    return Superoperator(mat, d)


def vectorize_redfield(H, A, A_f) -> Superoperator:
    """Vectorize -i[H, rho] + (A rho A_f - rho A_f A + h.c.).

    The filtered operator ``A_f`` carries arbitrary complex coefficients, so
    this entry point does not require Lindblad-form weights.
    """
    H = H.entries if isinstance(H, HermitianOperator) else np.asarray(H, complex)
    A = A.entries if isinstance(A, HermitianOperator) else np.asarray(A, complex)
    A_f = np.asarray(A_f, dtype=complex)
    d = H.shape[0]
    if A.shape != (d, d) or A_f.shape != (d, d):
        raise ValueError("dimension mismatch")
    mat = hamiltonian_superop(H)
    # A rho A_f - rho A_f A
    mat = mat + _sandwich(A, A_f) - _right(A_f @ A)
    # h.c.: A_f^+ rho A - A A_f^+ rho
    mat = mat + _sandwich(A_f.conj().T, A) - _left(A @ A_f.conj().T)
    return Superoperator(mat, d)


def choi_matrix(sop: Superoperator) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of the map Phi."""
    d = sop.dim
    C = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            C[i * d:(i + 1) * d, j * d:(j + 1) * d] = sop.apply(E)
    return C


def choi_min_eigenvalue(sop: Superoperator, dt: float) -> float:
    """Minimum Choi eigenvalue of (identity + dt * generator).

    A Lindblad-form generator yields a completely positive short-time map, so
    this should be >= -O(dt^2).
    """
    step = Superoperator(np.eye(sop.dim ** 2) + dt * sop.matrix, sop.dim)
    C = choi_matrix(step)
    C = 0.5 * (C + C.conj().T)
    return float(np.linalg.eigvalsh(C).min())
