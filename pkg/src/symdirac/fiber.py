"""Truncated Weyl-algebra model of the symplectic spinor fiber.

The fiber is L2(R^n), modelled by the span of the orthonormal Hermite
functions h_beta with |beta| <= L, in graded lexicographic order.  The
Clifford generators act through the tridiagonal position matrix
(x_j : k -> sqrt((k+1)/2) raising + sqrt(k/2) lowering in slot j) and the
derivative matrix (sqrt(k/2) lowering - sqrt((k+1)/2) raising), so every
generator is exactly skew-Hermitian after truncation.

Truncation contract: an operator built from q Clifford generators agrees
with the untruncated Weyl-algebra operator on states supported on levels
<= L - q.  All identity checks in this package project onto that protected
range first; `protected_projection` is the helper that does it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .symplectic import j_matrix, omega_matrix, require_sp

__all__ = [
    "MultiIndex",
    "FiberBasis",
    "FiberVector",
    "FiberOperator",
    "build_basis",
    "clifford_generator",
    "clifford_matrix",
    "hamilton_operator",
    "level_projection",
    "protected_projection",
    "fiber_inner",
    "vacuum_state",
    "quadratic_action",
    "quadratic_action_matrix",
]


@dataclass(frozen=True)
class MultiIndex:
    """Ordered tuple of non-negative Hermite indices (beta_1, ..., beta_n)."""

    entries: tuple

    def __post_init__(self):
        if any(b < 0 for b in self.entries):
            raise ValueError(f"negative entry in multi-index {self.entries}")

    @property
    def level(self):
        return sum(self.entries)


class FiberBasis:
    """Graded-lexicographic enumeration of {beta : |beta| <= L} for L2(R^n).

    dim = C(n+L, L); the level-l block is contiguous with size C(n+l-1, l).
    Instances are immutable; the position/derivative matrices per slot are
    precomputed once.
    """

    def __init__(self, n, L):
        if n < 1:
            raise ValueError(f"fiber half-dimension n must be >= 1, got {n}")
        if L < 2:
            raise ValueError(
                f"truncation level L must be >= 2 so at least one protected "
                f"level exists, got {L}"
            )
        self.n = n
        self.L = L
        indices = []
        for level in range(L + 1):
            block = sorted(
                beta
                for beta in itertools.product(range(level + 1), repeat=n)
                if sum(beta) == level
            )
            indices.extend(block)
        self.indices = tuple(indices)
        self.dim = len(indices)
        assert self.dim == math.comb(n + L, L)
        self.index_of = {beta: i for i, beta in enumerate(indices)}
        self.levels = np.array([sum(beta) for beta in indices])
        # position[j], derivative[j]: matrix elements of x_j and d/dx_j in the
        # orthonormal Hermite basis, compressed to |beta| <= L.
        self.position = []
        self.derivative = []
        for j in range(n):
            pos = np.zeros((self.dim, self.dim))
            der = np.zeros((self.dim, self.dim))
            for i, beta in enumerate(indices):
                k = beta[j]
                if k >= 1:
                    lower = list(beta)
                    lower[j] -= 1
                    i_lo = self.index_of[tuple(lower)]
                    c = math.sqrt(k / 2.0)
                    pos[i_lo, i] = c
                    der[i_lo, i] = c
                if sum(beta) + 1 <= L:
                    upper = list(beta)
                    upper[j] += 1
                    i_up = self.index_of[tuple(upper)]
                    c = math.sqrt((k + 1) / 2.0)
                    pos[i_up, i] = c
                    der[i_up, i] = -c
            self.position.append(pos)
            self.derivative.append(der)

    def multi_indices(self):
        return tuple(MultiIndex(beta) for beta in self.indices)

    def level_block(self, level):
        """Ordinal slice of the level-l block."""
        if not 0 <= level <= self.L:
            raise ValueError(f"level {level} outside 0..{self.L}")
        mask = np.flatnonzero(self.levels == level)
        return slice(mask[0], mask[-1] + 1)

    def level_mask(self, max_level):
        return self.levels <= max_level

    def __eq__(self, other):
        return (
            isinstance(other, FiberBasis)
            and self.n == other.n
            and self.L == other.L
        )

    def __hash__(self):
        return hash((self.n, self.L))

    def __repr__(self):
        return f"FiberBasis(n={self.n}, L={self.L}, dim={self.dim})"


def build_basis(n, L):
    return FiberBasis(n, L)


@dataclass(frozen=True)
class FiberVector:
    """Value of a symplectic spinor at a point: coefficients over the basis."""

    basis: FiberBasis
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.coeffs) != self.basis.dim:
            raise ValueError(
                f"coefficient length {len(self.coeffs)} != dim {self.basis.dim}"
            )

    def norm(self):
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class FiberOperator:
    """Dense operator on the truncated fiber."""

    basis: FiberBasis
    matrix: np.ndarray

    def __post_init__(self):
        d = self.basis.dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} != ({d}, {d})")

    def __call__(self, vec: FiberVector) -> FiberVector:
        _require_same_basis(self.basis, vec.basis)
        return FiberVector(self.basis, self.matrix @ vec.coeffs)


def _require_same_basis(a, b):
    if a != b:
        raise ValueError(f"fiber basis mismatch: {a} vs {b}")


def clifford_matrix(basis, v):
    """Matrix of the truncated Clifford generator sigma_L(v).

    sigma(e_j) = i x_j for j < n and sigma(e_{n+j}) = d/dx_j, extended
    linearly; complex coefficient vectors are allowed (complexified
    sections), in which case the result is not skew-Hermitian.
    """
    v = np.asarray(v)
    if v.shape != (2 * basis.n,):
        raise ValueError(
            f"normal coefficient vector must have length {2 * basis.n}, "
            f"got shape {v.shape}"
        )
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in range(basis.n):
        if v[j] != 0:
            out += 1j * v[j] * basis.position[j]
        if v[basis.n + j] != 0:
            out += v[basis.n + j] * basis.derivative[j]
    return out


def clifford_generator(basis, v):
    return FiberOperator(basis, clifford_matrix(basis, v))


def hamilton_operator(basis):
    """Oscillator Hamiltonian (1/2) sum_j (d^2/dx_j^2 - x_j^2): diagonal
    with entry -(|beta| + n/2)."""
    diag = -(basis.levels + basis.n / 2.0)
    return FiberOperator(basis, np.diag(diag).astype(complex))


def level_projection(basis, level):
    """Orthogonal projection onto the level-l eigenblock of the Hamiltonian."""
    if not 0 <= level <= basis.L:
        raise ValueError(f"level {level} outside 0..{basis.L}")
    diag = (basis.levels == level).astype(complex)
    return FiberOperator(basis, np.diag(diag))


def protected_projection(basis, q):
    """Projection onto levels <= L - q, the range an operator built from q
    Clifford generators can be trusted on."""
    if q < 0:
        raise ValueError("q must be >= 0")
    diag = (basis.levels <= basis.L - q).astype(complex)
    return FiberOperator(basis, np.diag(diag))


def fiber_inner(f: FiberVector, g: FiberVector):
    """Hermitian product, linear in the first slot, conjugate-linear in the
    second."""
    _require_same_basis(f.basis, g.basis)
    return complex(np.vdot(g.coeffs, f.coeffs))


def vacuum_state(basis):
    coeffs = np.zeros(basis.dim, dtype=complex)
    coeffs[0] = 1.0
    return FiberVector(basis, coeffs)


def quadratic_action_matrix(basis, a, validate=True):
    """Matrix of the infinitesimal sp(n,R) action
    (1/2i) sum_j {sigma(w_j) sigma(A v_j) - sigma(v_j) sigma(A w_j)}
    over the standard symplectic frame v_j = e_j, w_j = e_{n+j}.

    Satisfies [Q(A), sigma(v)] = sigma(A v) on protected levels, and is
    built from truncated generators, so it is trusted on levels <= L - 2.
    """
    a = np.asarray(a)
    n = basis.n
    if a.shape != (2 * n, 2 * n):
        raise ValueError(f"expected a {2 * n}x{2 * n} matrix, got {a.shape}")
    if validate:
        require_sp(a)
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in range(n):
        sv = clifford_matrix(basis, _unit(2 * n, j))
        sw = clifford_matrix(basis, _unit(2 * n, n + j))
        out += sw @ clifford_matrix(basis, a[:, j])
        out -= sv @ clifford_matrix(basis, a[:, n + j])
    return out / (2.0j)


def quadratic_action(basis, a, validate=True):
    return FiberOperator(basis, quadratic_action_matrix(basis, a, validate))


def _unit(m, i):
    u = np.zeros(m)
    u[i] = 1.0
    return u


def frame_sigma_matrices(basis):
    """sigma_L(e_X) for the 2n unitary frame directions."""
    return [clifford_matrix(basis, _unit(2 * basis.n, x)) for x in range(2 * basis.n)]


def hamilton_via_clifford(basis):
    """(1/2) sum_X sigma_L(e_X)^2 - the Clifford form of the Hamiltonian,
    exact on levels <= L - 2."""
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for s in frame_sigma_matrices(basis):
        out += s @ s
    return out / 2.0


# Convenience constants for the fiber's symplectic structure.
def omega0(n):
    return omega_matrix(n)


def j0(n):
    return j_matrix(n)
