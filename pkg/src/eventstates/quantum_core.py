"""Dense complex linear algebra and quantum-information primitives.

Conventions used throughout the package:

* Operators are square complex ``numpy`` arrays (row-major indexing).
* Kets are one-dimensional complex arrays with unit norm.
* All entropies are in bits (logarithms base 2).
* A measurement basis stores one ket per row, paired with a real outcome
  label per ket.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .policy import DEFAULT_POLICY, NumericPolicy, NumericsError

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "MeasurementModel",
    "DensityCheck",
    "as_operator",
    "as_ket",
    "bloch_ket",
    "bloch_pair",
    "tensor_product",
    "partial_trace",
    "projector",
    "von_neumann_entropy",
    "shannon_entropy",
    "trace_distance",
    "dephase",
    "relative_entropy_of_coherence",
    "validate_density",
    "assert_density",
    "is_unitary",
    "assert_unitary",
]

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI_X.setflags(write=False)
PAULI_Y.setflags(write=False)
PAULI_Z.setflags(write=False)


def as_operator(value, *, name: str = "operator") -> np.ndarray:
    """Coerce ``value`` to a square complex matrix with finite entries."""
    mat = np.asarray(value, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError(f"{name} has non-finite entries")
    return mat


def as_ket(value, *, policy: NumericPolicy = DEFAULT_POLICY, name: str = "ket") -> np.ndarray:
    """Coerce ``value`` to a unit-norm complex vector."""
    vec = np.asarray(value, dtype=complex)
    if vec.ndim != 1 or vec.size < 1:
        raise ValueError(f"{name} must be a vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{name} has non-finite entries")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > policy.ket_norm_tol:
        raise NumericsError(f"{name} is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    return vec


def bloch_ket(theta: float, phi: float = 0.0) -> np.ndarray:
    """Qubit ket at polar angle ``theta`` and azimuth ``phi`` on the Bloch sphere."""
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)], dtype=complex)


def bloch_pair(theta: float, phi: float = 0.0) -> np.ndarray:
    """Orthonormal qubit pair (rows): the ket at (theta, phi) and its antipode."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [[c, np.exp(1j * phi) * s], [-np.exp(-1j * phi) * s, c]], dtype=complex
    )


def projector(ket: np.ndarray) -> np.ndarray:
    """Rank-1 projector |ket><ket|."""
    vec = np.asarray(ket, dtype=complex)
    return np.outer(vec, vec.conj())


def tensor_product(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more operators (or kets)."""
    out = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    for extra in more:
        out = np.kron(out, np.asarray(extra, dtype=complex))
    return out


def partial_trace(rho, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    rho:
        Operator on a space of dimension ``dims[0] * dims[1]``.
    dims:
        Factor dimensions ``(d_a, d_b)``.
    keep:
        ``"A"`` keeps the first factor, ``"B"`` the second.
    """
    mat = as_operator(rho, name="rho")
    da, db = int(dims[0]), int(dims[1])
    if da < 1 or db < 1 or mat.shape[0] != da * db:
        raise ValueError(f"dimension mismatch: operator is {mat.shape[0]}-dim, dims give {da * db}")
    four = mat.reshape(da, db, da, db)
    if keep == "A":
        out = np.einsum("ajbj->ab", four)
    elif keep == "B":
        out = np.einsum("iaib->ab", four)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return 0.5 * (out + out.conj().T)


def _clamped_spectrum(rho: np.ndarray, policy: NumericPolicy) -> np.ndarray:
    herm = 0.5 * (rho + rho.conj().T)
    vals = np.linalg.eigvalsh(herm)
    if vals.min() < -policy.psd_tol:
        raise NumericsError(f"operator is not positive semidefinite: min eigenvalue {vals.min():.3e}")
    return np.clip(vals, 0.0, None)


def shannon_entropy(probs) -> float:
    """Shannon entropy in bits of a nonnegative weight vector (zeros ignored)."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    if p.size == 0:
        return 0.0
    return float(-(p @ np.log2(p)))


def von_neumann_entropy(rho, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Spectral entropy of a density matrix, in bits."""
    mat = as_operator(rho, name="rho")
    return shannon_entropy(_clamped_spectrum(mat, policy))


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of the difference of two Hermitian operators."""
    a = as_operator(rho, name="rho")
    b = as_operator(sigma, name="sigma")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def _basis_rows(basis, dim: int) -> np.ndarray | None:
    """Resolve a dephasing basis to a (dim, dim) array of kets, or None for computational."""
    if basis is None:
        return None
    if isinstance(basis, MeasurementModel):
        rows = basis.kets
    elif isinstance(basis, (list, tuple)) and basis and isinstance(basis[0], MeasurementModel):
        rows = basis[0].kets
        for part in basis[1:]:
            rows = np.kron(rows, part.kets)
    else:
        rows = np.asarray(basis, dtype=complex)
    if rows.shape != (dim, dim):
        raise ValueError(f"basis dimension {rows.shape} does not match operator dimension {dim}")
    return rows


def dephase(rho, basis=None) -> np.ndarray:
    """Zero all coherences of ``rho`` in the given orthonormal basis.

    ``basis`` may be None (computational basis), a :class:`MeasurementModel`,
    or a sequence of models whose tensor product spans the space.
    """
    mat = as_operator(rho, name="rho")
    rows = _basis_rows(basis, mat.shape[0])
    if rows is None:
        return np.diag(np.diag(mat))
    probs = np.einsum("mi,ij,mj->m", rows.conj(), mat, rows)
    return np.einsum("m,mi,mj->ij", probs, rows, rows.conj())


def relative_entropy_of_coherence(
    rho, basis=None, *, policy: NumericPolicy = DEFAULT_POLICY
) -> float:
    """Entropy gained by dephasing ``rho`` in the given basis, in bits.

    Equals S(dephased) - S(rho); zero exactly when dephasing leaves the state
    unchanged.  ``basis`` follows the same convention as :func:`dephase`.
    """
    mat = as_operator(rho, name="rho")
    rows = _basis_rows(basis, mat.shape[0])
    if rows is None:
        probs = np.real(np.diag(mat))
    else:
        probs = np.real(np.einsum("mi,ij,mj->m", rows.conj(), mat, rows))
    value = shannon_entropy(np.clip(probs, 0.0, None)) - von_neumann_entropy(mat, policy=policy)
    return max(value, 0.0)


@dataclass(frozen=True)
class DensityCheck:
    """Diagnostic report produced by :func:`validate_density`."""

    dim: int
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    hermitian_ok: bool
    trace_ok: bool
    psd_ok: bool

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok


def validate_density(op, *, policy: NumericPolicy = DEFAULT_POLICY) -> DensityCheck:
    """Report how far ``op`` is from being a valid density matrix."""
    mat = as_operator(op, name="operator")
    herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
    trace_defect = float(abs(np.trace(mat) - 1.0))
    min_eig = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)).min())
    return DensityCheck(
        dim=mat.shape[0],
        hermiticity_defect=herm_defect,
        trace_defect=trace_defect,
        min_eigenvalue=min_eig,
        hermitian_ok=herm_defect <= policy.hermiticity_tol,
        trace_ok=trace_defect <= policy.trace_tol,
        psd_ok=min_eig >= -policy.psd_tol,
    )


def assert_density(op, *, policy: NumericPolicy = DEFAULT_POLICY, name: str = "state") -> np.ndarray:
    """Validate ``op`` as a density matrix, raising :class:`NumericsError` on failure."""
    mat = as_operator(op, name=name)
    check = validate_density(mat, policy=policy)
    if not check.ok:
        raise NumericsError(
            f"{name} is not a valid density matrix: "
            f"hermiticity defect {check.hermiticity_defect:.3e}, "
            f"trace defect {check.trace_defect:.3e}, "
            f"min eigenvalue {check.min_eigenvalue:.3e}"
        )
    return mat


def is_unitary(op, *, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    mat = as_operator(op, name="operator")
    eye = np.eye(mat.shape[0])
    return float(np.max(np.abs(mat.conj().T @ mat - eye))) <= policy.unitary_tol


def assert_unitary(op, *, policy: NumericPolicy = DEFAULT_POLICY, name: str = "operator") -> np.ndarray:
    mat = as_operator(op, name=name)
    defect = float(np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0]))))
    if defect > policy.unitary_tol:
        raise NumericsError(f"{name} is not unitary: defect {defect:.3e}")
    return mat


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """A complete orthonormal measurement basis with real outcome labels.

    ``kets[i]`` is the i-th basis ket; ``labels[i]`` is the value recorded
    when that outcome fires.  Labels must be pairwise distinct.
    """

    kets: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        kets = np.asarray(self.kets, dtype=complex)
        labels = np.asarray(self.labels, dtype=float)
        if kets.ndim != 2 or kets.shape[0] != kets.shape[1]:
            raise ValueError(f"basis kets must form a square matrix, got {kets.shape}")
        if labels.shape != (kets.shape[0],):
            raise ValueError("one label per basis ket required")
        gram = kets.conj() @ kets.T
        defect = float(np.max(np.abs(gram - np.eye(kets.shape[0]))))
        if defect > DEFAULT_POLICY.ortho_tol:
            raise NumericsError(f"basis is not orthonormal: defect {defect:.3e}")
        if np.unique(labels).size != labels.size:
            raise ValueError("outcome labels must be distinct")
        object.__setattr__(self, "kets", _readonly(kets))
        object.__setattr__(self, "labels", _readonly(labels))

    @property
    def dim(self) -> int:
        return self.kets.shape[0]

    def ket(self, index: int) -> np.ndarray:
        return self.kets[index]

    def projector(self, index: int) -> np.ndarray:
        return projector(self.kets[index])

    @classmethod
    def from_kets(cls, kets: Sequence, labels: Sequence[float]) -> "MeasurementModel":
        return cls(kets=np.asarray(kets, dtype=complex), labels=np.asarray(labels, dtype=float))

    @classmethod
    def sz(cls) -> "MeasurementModel":
        return cls.from_kets([[1.0, 0.0], [0.0, 1.0]], [1.0, -1.0])

    @classmethod
    def sx(cls) -> "MeasurementModel":
        r = 1.0 / np.sqrt(2.0)
        return cls.from_kets([[r, r], [r, -r]], [1.0, -1.0])

    @classmethod
    def sy(cls) -> "MeasurementModel":
        r = 1.0 / np.sqrt(2.0)
        return cls.from_kets([[r, 1j * r], [r, -1j * r]], [1.0, -1.0])

    @classmethod
    def computational(cls, dim: int) -> "MeasurementModel":
        return cls.from_kets(np.eye(dim), np.arange(dim, dtype=float))

    @classmethod
    def from_axis_angle(
        cls, theta: float, phi: float = 0.0, labels: Sequence[float] = (1.0, -1.0)
    ) -> "MeasurementModel":
        """Qubit basis measuring the spin axis at Bloch angles (theta, phi)."""
        return cls(kets=bloch_pair(theta, phi), labels=np.asarray(labels, dtype=float))
