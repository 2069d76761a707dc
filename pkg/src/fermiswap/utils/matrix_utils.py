import numpy as np

from ..core.errors import InputValidationError


def check_unitary(u: np.ndarray, tol: float) -> np.ndarray:
    """Return u as a complex array, rejecting non-square or non-unitary input"""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputValidationError(f"Expected a square matrix, got shape {u.shape}")
    error = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if error > tol:
        raise InputValidationError(f"Matrix is not unitary (max deviation {error:.3e})")
    return u
