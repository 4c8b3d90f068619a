"""Error norms over solution points."""

from __future__ import annotations

import numpy as np

__all__ = ["l2_error", "normalized_l2_error", "max_error"]


def l2_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    """
    Root-mean-square difference over all solution points.

    ``sqrt(sum (phi - phi_exact)^2 / N_DOF)`` with ``N_DOF`` the number of
    entries, ``N_elem * N^2`` for a scalar field.
    """
    diff = np.asarray(numeric, dtype=float) - np.asarray(exact, dtype=float)
    if diff.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(diff * diff)))


def normalized_l2_error(numeric: np.ndarray, exact: np.ndarray, reference: float) -> float:
    """:func:`l2_error` divided by a reference magnitude."""
    return l2_error(numeric, exact) / abs(reference)


def max_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    diff = np.abs(np.asarray(numeric, dtype=float) - np.asarray(exact, dtype=float))
    return float(diff.max()) if diff.size else 0.0
