"""Symplectic linear algebra on the normal fiber R^{2n}.

Frame convention used throughout the package: the unitary frame is ordered
(e_1, ..., e_n, e_{n+1}, ..., e_{2n}) with e_{n+j} = J e_j.  The standard
symplectic frame is v_j = e_j, w_j = e_{n+j}, so omega(v_i, w_j) = delta_ij.
In this frame the metric g(s, t) = omega(s, Jt) is the identity matrix.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

SP_TOL = 1e-12


def omega_matrix(n):
    """Matrix of the standard symplectic form: omega(u, v) = u^T Omega v."""
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def j_matrix(n):
    """Standard complex structure J0: a_j -> b_j, b_j -> -a_j.

    Satisfies J0^2 = -I and Omega @ J0 = I (so the unitary frame is
    g-orthonormal).
    """
    j0 = np.zeros((2 * n, 2 * n))
    j0[:n, n:] = -np.eye(n)
    j0[n:, :n] = np.eye(n)
    return j0


def omega_pair(u, v):
    """omega(u, v) for coefficient vectors in the unitary frame."""
    n = len(u) // 2
    return u @ omega_matrix(n) @ v


def sp_defect(a):
    """Size of A^T Omega + Omega A; zero iff A is in sp(n, R) (complexified)."""
    n = a.shape[0] // 2
    omega = omega_matrix(n)
    return np.linalg.norm(a.T @ omega + omega @ a)


def require_sp(a, tol=SP_TOL):
    defect = sp_defect(a)
    scale = max(1.0, np.linalg.norm(a))
    if defect > tol * scale:
        raise ValueError(
            f"matrix is not in sp(n,R): omega-compatibility defect {defect:.3e}"
        )


def random_sp_element(n, rng, scale=1.0):
    """Random element of sp(n, R): A with A^T Omega + Omega A = 0."""
    omega = omega_matrix(n)
    s = rng.standard_normal((2 * n, 2 * n))
    s = (s + s.T) / 2.0
    # A = Omega @ S with S symmetric is the general solution.
    return scale * (omega @ s)


def random_symplectic(n, rng, scale=0.5):
    """Random Sp(2n, R) matrix via the exponential of an sp element."""
    return expm(random_sp_element(n, rng, scale=scale))


def random_unitary_frame_rotation(n, rng, scale=0.5):
    """Random rotation preserving both omega and g (i.e. in U(n) in Sp(2n,R)).

    Generated from u(n) embedded as [[X, -Y], [Y, X]] with X skew, Y symmetric.
    """
    x = rng.standard_normal((n, n))
    x = (x - x.T) / 2.0
    y = rng.standard_normal((n, n))
    y = (y + y.T) / 2.0
    a = np.block([[x, -y], [y, x]])
    return expm(scale * a)


def symplectic_pairs(n):
    """Indices (v_i, w_i) of the standard symplectic frame inside the unitary frame."""
    return [(i, n + i) for i in range(n)]
