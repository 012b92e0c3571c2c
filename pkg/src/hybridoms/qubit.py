"""Qubit density matrices.

Basis order is ``(|down>, |up>)``. Bloch components use the standard matrix
Pauli operators in that order, so ``rho = (I + r . sigma) / 2`` has
``rho[0, 0] = (1 + r_z) / 2``.
"""

from __future__ import annotations

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class QubitDensityMatrix:
    """Validated 2x2 density matrix with Bloch-vector accessors."""

    def __init__(self, matrix, atol: float = 1e-10):
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("a qubit density matrix is 2x2")
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > atol:
            raise ValueError(f"density matrix trace is {np.trace(m).real:.12g}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -atol:
            raise ValueError("density matrix has a negative eigenvalue")
        self.matrix = 0.5 * (m + m.conj().T)
        self.matrix.setflags(write=False)

    @classmethod
    def from_bloch(cls, rx: float, ry: float, rz: float) -> "QubitDensityMatrix":
        if rx * rx + ry * ry + rz * rz > 1 + 1e-12:
            raise ValueError("Bloch vector longer than one")
        return cls(0.5 * (IDENTITY + rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z))

    @property
    def rx(self) -> float:
        return float(2 * self.matrix[1, 0].real)

    @property
    def ry(self) -> float:
        return float(2 * self.matrix[1, 0].imag)

    @property
    def rz(self) -> float:
        return float((self.matrix[0, 0] - self.matrix[1, 1]).real)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz])

    def eigensystem(self):
        """Populations ``P_u`` and eigenvectors (columns) of the state."""
        w, v = np.linalg.eigh(self.matrix)
        return np.clip(w, 0.0, None), v

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        rx, ry, rz = self.bloch
        return f"QubitDensityMatrix(r=({rx:.6g}, {ry:.6g}, {rz:.6g}))"


def as_density_matrix(rho, atol: float = 1e-10) -> QubitDensityMatrix:
    return rho if isinstance(rho, QubitDensityMatrix) else QubitDensityMatrix(rho, atol)
