"""Truncated Fourier series on the transverse torus T^{2n}.

A field is a finite sum f(x) = sum_k c_k e^{2 pi i k.x} with k in Z^{2n} and
values c_k numpy arrays of one common shape: () for scalars, (2n,) for
sections of the normal bundle, matrix shapes for frame-endomorphism fields.

Differentiation is exact (multiplication by 2 pi i k_X).  Products are
truncated convolutions against a band limit; the squared norm of every
discarded coefficient is accumulated on the result's `aliasing` attribute so
checks can certify that nothing was silently thrown away.  Fields are
immutable by convention; all operations return new fields.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI_I = 2.0j * math.pi


class TransverseField:
    __slots__ = ("dim", "shape", "modes", "aliasing")

    def __init__(self, dim, modes, shape=None, aliasing=0.0):
        self.dim = dim
        clean = {}
        for k, v in modes.items():
            key = tuple(int(c) for c in k)
            if len(key) != dim:
                raise ValueError(f"mode {key} has wrong length (dim={dim})")
            arr = np.asarray(v, dtype=complex)
            if np.any(arr != 0):
                clean[key] = arr
        self.modes = clean
        if shape is None:
            shape = next(iter(clean.values())).shape if clean else ()
        self.shape = tuple(shape)
        for v in clean.values():
            if v.shape != self.shape:
                raise ValueError(
                    f"inconsistent value shapes {v.shape} vs {self.shape}"
                )
        self.aliasing = float(aliasing)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, dim, value):
        value = np.asarray(value, dtype=complex)
        return cls(dim, {(0,) * dim: value}, shape=value.shape)

    @classmethod
    def zero(cls, dim, shape=()):
        return cls(dim, {}, shape=shape)

    # -- basic queries -------------------------------------------------------

    @property
    def support_K(self):
        """Max |k|_infty over populated modes."""
        if not self.modes:
            return 0
        return max(max(abs(c) for c in k) for k in self.modes)

    def sorted_items(self):
        return [(k, self.modes[k]) for k in sorted(self.modes)]

    def zero_mode(self):
        return self.modes.get((0,) * self.dim, np.zeros(self.shape, dtype=complex))

    def norm2(self):
        """Parseval: integral of |f|^2 over the unit torus."""
        return float(sum(np.sum(np.abs(v) ** 2) for v in self.modes.values()))

    def norm(self):
        return math.sqrt(self.norm2())

    def is_real(self, tol=1e-12):
        """True if the represented function is real: c_{-k} = conj(c_k)."""
        for k, v in self.modes.items():
            mk = tuple(-c for c in k)
            w = self.modes.get(mk)
            if w is None or np.max(np.abs(np.conj(v) - w)) > tol:
                return False
        return True

    def evaluate(self, x):
        """Pointwise value at x (array of length dim); used by grid oracles."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(self.shape, dtype=complex)
        for k, v in self.sorted_items():
            out = out + v * np.exp(TWO_PI_I * float(np.dot(k, x)))
        return out

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.modes)
        for k, v in other.modes.items():
            out[k] = out[k] + v if k in out else v
        return TransverseField(
            self.dim, out, shape=self.shape, aliasing=self.aliasing + other.aliasing
        )

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return TransverseField(
            self.dim,
            {k: scalar * v for k, v in self.modes.items()},
            shape=self.shape,
            aliasing=self.aliasing,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def map_values(self, fn, shape=None):
        """Apply fn to every coefficient (fn must be linear for this to be a
        pointwise operation on the field)."""
        out = {k: fn(v) for k, v in self.modes.items()}
        return TransverseField(self.dim, out, shape=shape, aliasing=self.aliasing)

    def conj(self):
        """Complex conjugate of the function: coefficients conj(c_{-k})."""
        out = {
            tuple(-c for c in k): np.conj(v) for k, v in self.modes.items()
        }
        return TransverseField(self.dim, out, shape=self.shape, aliasing=self.aliasing)

    def derivative(self, direction):
        """Exact partial derivative along torus coordinate `direction`."""
        out = {
            k: TWO_PI_I * k[direction] * v
            for k, v in self.modes.items()
            if k[direction] != 0
        }
        return TransverseField(self.dim, out, shape=self.shape, aliasing=self.aliasing)

    def _check_compatible(self, other):
        if self.dim != other.dim or self.shape != other.shape:
            raise ValueError(
                f"incompatible fields: dim {self.dim}/{other.dim}, "
                f"shape {self.shape}/{other.shape}"
            )


def convolve(f, g, combine=None, band=None, shape=None):
    """Mode-space product h(x) = combine(f(x), g(x)).

    combine defaults to elementwise multiplication; pass np.matmul-style
    callables for matrix.vector or matrix.matrix fields.  Modes beyond the
    band limit |k|_infty > band are dropped and their energy recorded.
    """
    if f.dim != g.dim:
        raise ValueError("field dimension mismatch")
    if combine is None:
        combine = lambda a, b: a * b
    acc = {}
    for k1, v1 in f.sorted_items():
        for k2, v2 in g.sorted_items():
            k = tuple(a + b for a, b in zip(k1, k2))
            val = combine(v1, v2)
            acc[k] = acc[k] + val if k in acc else np.asarray(val, dtype=complex)
    kept = {}
    discarded = 0.0
    for k, v in acc.items():
        if band is not None and max(abs(c) for c in k) > band:
            discarded += float(np.sum(np.abs(v) ** 2))
        else:
            kept[k] = v
    return TransverseField(
        f.dim,
        kept,
        shape=shape,
        aliasing=f.aliasing + g.aliasing + discarded,
    )


def integral(f, density=None):
    """Integral over the unit torus, optionally against a density field.

    The contraction sum_k f_k rho_{-k} is exact: no truncation is involved."""
    if density is None:
        return f.zero_mode()
    if f.dim != density.dim:
        raise ValueError("field dimension mismatch")
    out = np.zeros(f.shape, dtype=complex)
    for k, v in f.sorted_items():
        mk = tuple(-c for c in k)
        w = density.modes.get(mk)
        if w is not None:
            out = out + v * w
    return out


def exp_field(f, tol=1e-18, max_terms=60):
    """exp(f) for a scalar field, by the Taylor series with exact convolutions.

    Converges superexponentially for the small-amplitude warp profiles used
    by the model catalog; raises if the series has not converged by
    max_terms (amplitude too large for a trustworthy expansion)."""
    if f.shape != ():
        raise ValueError("exp_field expects a scalar field")
    result = TransverseField.constant(f.dim, 1.0)
    term = TransverseField.constant(f.dim, 1.0)
    for m in range(1, max_terms + 1):
        term = convolve(term, f) * (1.0 / m)
        result = result + term
        if term.norm() < tol:
            return result
    raise ValueError("exp_field did not converge; field amplitude too large")
