"""Desk-scale model foliations with transversely symplectic structure.

Each model lives over the transverse torus T^{2n} (coordinates = the unitary
frame directions, which commute), with basic fields represented as truncated
Fourier series.  The leaf geometry enters only through the mean curvature
form kappa and the leaf volume density rho; the volume form used in all
integrals is rho(x) dx.

Connection coefficients Gamma(X) are matrix fields: nabla_{e_X} s =
d_X s + Gamma(X) s on coefficient vectors.  A connection is transversely
symplectic iff Gamma(X)^T Omega + Omega Gamma(X) = 0 pointwise, preserves J
iff [Gamma(X), J0] = 0 pointwise, and is torsion free iff Gamma(i) e_j =
Gamma(j) e_i (the frame fields commute).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import TransverseField, convolve, exp_field, integral
from .symplectic import j_matrix, omega_matrix, symplectic_pairs

FLAG_TOL = 1e-12


# ---------------------------------------------------------------------------
# Connection data
# ---------------------------------------------------------------------------

@dataclass
class ConnectionData:
    """Connection coefficients per frame direction, with recomputed flags."""

    n: int
    gamma: tuple  # length 2n, each a TransverseField of (2n, 2n) matrices
    is_symplectic: bool = dc_field(init=False)
    is_torsion_free: bool = dc_field(init=False)
    preserves_j: bool = dc_field(init=False)

    def __post_init__(self):
        dim = 2 * self.n
        if len(self.gamma) != dim:
            raise ValueError(f"need {dim} coefficient fields, got {len(self.gamma)}")
        for g in self.gamma:
            if g.shape != (dim, dim):
                raise ValueError(f"coefficient field has shape {g.shape}")
        omega = omega_matrix(self.n)
        j0 = j_matrix(self.n)
        sympl = 0.0
        jdef = 0.0
        for g in self.gamma:
            for _, m in g.sorted_items():
                sympl = max(sympl, np.max(np.abs(m.T @ omega + omega @ m)))
                jdef = max(jdef, np.max(np.abs(m @ j0 - j0 @ m)))
        tdef = 0.0
        for i in range(dim):
            for j in range(i + 1, dim):
                t = self.torsion_section(i, j)
                if t.modes:
                    tdef = max(tdef, max(np.max(np.abs(v)) for v in t.modes.values()))
        self.is_symplectic = sympl <= FLAG_TOL
        self.is_torsion_free = tdef <= FLAG_TOL
        self.preserves_j = jdef <= FLAG_TOL

    def torsion_section(self, i, j):
        """T(e_i, e_j) = Gamma(i) e_j - Gamma(j) e_i as a section field."""
        gi = self.gamma[i].map_values(lambda m: m[:, j], shape=(2 * self.n,))
        gj = self.gamma[j].map_values(lambda m: m[:, i], shape=(2 * self.n,))
        return gi - gj

    def is_flat_zero(self):
        return all(not g.modes for g in self.gamma)


def flat_connection(n):
    dim = 2 * n
    return ConnectionData(
        n, tuple(TransverseField.zero(dim, shape=(dim, dim)) for _ in range(dim))
    )


def make_j_compatible(connection):
    """Project a symplectic connection onto one with nabla J = 0:
    Gamma'(X) = Gamma(X) + (1/2) [Gamma(X), J0] J0.

    The output is symplectic, J-preserving and metric (all revalidated by
    the ConnectionData constructor plus the explicit checks below); it is a
    fixed point on connections that already preserve J."""
    if not connection.is_symplectic:
        raise ValueError("make_j_compatible requires a symplectic connection")
    n = connection.n
    j0 = j_matrix(n)

    def project(m):
        return m + 0.5 * (m @ j0 - j0 @ m) @ j0

    new = ConnectionData(
        n, tuple(g.map_values(project, shape=g.shape) for g in connection.gamma)
    )
    if not (new.is_symplectic and new.preserves_j):
        raise AssertionError("J-compatibilization failed validation")
    # nabla g = 0 <=> Gamma(X) pointwise antisymmetric (orthonormal frame)
    for g in new.gamma:
        for _, m in g.sorted_items():
            if np.max(np.abs(m + m.T)) > FLAG_TOL * max(1.0, np.max(np.abs(m))):
                raise AssertionError("J-compatibilized connection is not metric")
    return new


# ---------------------------------------------------------------------------
# Curvature
# ---------------------------------------------------------------------------

@dataclass
class CurvatureTensor:
    """R(e_i, e_j) endomorphism fields, stored as one field of
    (2n, 2n, 2n, 2n) arrays: value[a, b, i, j] = (R(e_i, e_j))_{ab}."""

    n: int
    components: TransverseField

    def matrix_field(self, i, j):
        return self.components.map_values(
            lambda v: v[:, :, i, j], shape=(2 * self.n, 2 * self.n)
        )

    def constant_part(self):
        return self.components.zero_mode()

    def is_zero(self):
        return not self.components.modes

    def ricci_section(self, a):
        """Ric(e_a) = sum_k R(e_a, e_k) e_k as a section field."""
        dim = 2 * self.n

        def ric(v):
            return sum(v[:, k, a, k] for k in range(dim))

        return self.components.map_values(ric, shape=(dim,))


def curvature_from_connection(connection, band=None):
    """R(e_i, e_j) = d_i Gamma(j) - d_j Gamma(i) + [Gamma(i), Gamma(j)]
    (frame fields commute on the torus models)."""
    n = connection.n
    dim = 2 * n
    total = TransverseField.zero(dim, shape=(dim, dim, dim, dim))
    zero = np.zeros((dim, dim, dim, dim), dtype=complex)
    acc = {}
    aliasing = 0.0
    for i in range(dim):
        for j in range(dim):
            if i == j:
                continue
            term = connection.gamma[j].derivative(i) - connection.gamma[i].derivative(j)
            comm = convolve(
                connection.gamma[i],
                connection.gamma[j],
                combine=lambda a, b: a @ b - b @ a,
                band=band,
                shape=(dim, dim),
            )
            rij = term + comm
            aliasing += rij.aliasing
            for k, v in rij.modes.items():
                if k not in acc:
                    acc[k] = zero.copy()
                acc[k][:, :, i, j] += v
    comps = TransverseField(dim, acc, shape=(dim, dim, dim, dim), aliasing=aliasing)
    return CurvatureTensor(n, comps)


def chsc_curvature(n, h):
    """Constant algebraic curvature tensor of a transverse Kaehler structure
    with constant holomorphic sectional curvature h:
    omega(R(X,Y)Z, W) = (h/4){omega(X,Z)omega(Y,JW) + omega(X,W)omega(Y,JZ)
    - omega(Y,Z)omega(X,JW) - omega(Y,W)omega(X,JZ) + 2 omega(X,Y)omega(Z,JW)}.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = 2 * n
    omega = omega_matrix(n)
    j0 = j_matrix(n)
    oj = omega @ j0  # omega(u, J v) = u^T (Omega J) v
    r = np.zeros((dim, dim, dim, dim), dtype=complex)
    if h != 0.0:
        cov = np.zeros((dim, dim, dim, dim))  # cov[l, k, i, j] = omega(R(ei,ej)ek, el)
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    for l in range(dim):
                        cov[l, k, i, j] = (h / 4.0) * (
                            omega[i, k] * oj[j, l]
                            + omega[i, l] * oj[j, k]
                            - omega[j, k] * oj[i, l]
                            - omega[j, l] * oj[i, k]
                            + 2.0 * omega[i, j] * oj[k, l]
                        )
        # recover the endomorphism: omega(u, e_l) = c_l  =>  u = Omega c
        r = np.einsum("al,lkij->akij", omega, cov).astype(complex)
    comps = (
        TransverseField.constant(dim, r)
        if np.any(r != 0)
        else TransverseField.zero(dim, shape=(dim, dim, dim, dim))
    )
    return CurvatureTensor(n, comps)


# ---------------------------------------------------------------------------
# Foliation models
# ---------------------------------------------------------------------------

@dataclass
class FoliationModel:
    """One desk-scale transversely symplectic foliation.

    All fields are basic; kappa_sharp is the omega-dual of kappa, and
    kappa_sharp_g its g-dual (J kappa_sharp = kappa_sharp_g, validated)."""

    name: str
    n: int
    K: int
    band: int
    connection: ConnectionData
    kappa_form: TransverseField     # covector components kappa(e_X)
    leaf_density: TransverseField   # scalar rho, mu_M = rho dx
    leaf_dim: int = 0
    chsc_h: float | None = None
    pointlike: bool = False         # single-point base: no Fourier modes
    curvature_override: CurvatureTensor | None = None
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        dim = 2 * self.n
        self.omega = omega_matrix(self.n)
        self.j = j_matrix(self.n)
        if not self.connection.is_symplectic:
            raise ValueError(f"model {self.name}: connection is not symplectic")
        if not self.kappa_form.is_real() or not self.leaf_density.is_real():
            raise ValueError(f"model {self.name}: kappa and rho must be real fields")
        # torsion tensor and torsion vector
        self.torsion = {
            (i, j): self.connection.torsion_section(i, j)
            for i in range(dim)
            for j in range(dim)
        }
        tau = TransverseField.zero(dim, shape=(dim,))
        for i, w in symplectic_pairs(self.n):
            tau = tau + self.torsion[(i, w)]
        self.tau = tau
        # duals of kappa: kappa(Y) = omega(kappa_sharp, Y) => kappa_sharp =
        # Omega kappa_vec; g-dual = components themselves (orthonormal frame)
        self.kappa_sharp = self.kappa_form.map_values(
            lambda v: self.omega @ v, shape=(dim,)
        )
        self.kappa_sharp_g = self.kappa_form
        jks = self.kappa_sharp.map_values(lambda v: self.j @ v, shape=(dim,))
        if (jks - self.kappa_sharp_g).norm() > 1e-12:
            raise AssertionError("J kappa_sharp != kappa_sharp_g")
        self.minimal = self.kappa_form.norm() == 0.0
        self.fedosov = self.connection.is_torsion_free
        self.preserves_j = self.connection.preserves_j
        self.kahler = (
            self.fedosov and self.preserves_j and self.connection.is_flat_zero()
        ) or self.chsc_h is not None
        self._curvature = None
        self._calc = {}

    # -- derived geometry ----------------------------------------------------

    def curvature(self):
        if self._curvature is None:
            if self.curvature_override is not None:
                self._curvature = self.curvature_override
            else:
                self._curvature = curvature_from_connection(
                    self.connection, band=self.band
                )
        return self._curvature

    def mean_curvature_plus_torsion(self):
        """The correction section kappa_sharp + tau appearing in both Dirac
        operators."""
        return self.kappa_sharp + self.tau

    def volume(self):
        return float(integral(self.leaf_density).real)

    def flags(self):
        return {
            "minimal": self.minimal,
            "fedosov": self.fedosov,
            "preserves_j": self.preserves_j,
            "kahler": self.kahler,
            "chsc_h": self.chsc_h,
            "pointlike": self.pointlike,
            "flat_connection": self.connection.is_flat_zero(),
        }

    def __repr__(self):
        return f"FoliationModel({self.name}, n={self.n}, K={self.K})"


# ---------------------------------------------------------------------------
# Divergence machinery
# ---------------------------------------------------------------------------

def covariant_derivative_section(model, direction, s):
    """nabla_{e_X} s = d_X s + Gamma(X) s for a section field s."""
    ds = s.derivative(direction)
    gam = model.connection.gamma[direction]
    if not gam.modes:
        return ds
    return ds + convolve(gam, s, combine=lambda a, b: a @ b, band=model.band)


def transversal_divergence(model, s):
    """div(s) = sum_i {omega(nabla_{v_i} s, w_i) - omega(nabla_{w_i} s, v_i)}
    over the standard symplectic frame; returns a scalar field."""
    dim = 2 * model.n
    if s.shape != (dim,):
        raise ValueError(f"expected a section field of shape ({dim},)")
    omega = model.omega
    out = TransverseField.zero(dim)
    for vi, wi in symplectic_pairs(model.n):
        dv = covariant_derivative_section(model, vi, s)
        dw = covariant_derivative_section(model, wi, s)
        ev = np.zeros(dim)
        ev[vi] = 1.0
        ew = np.zeros(dim)
        ew[wi] = 1.0
        out = out + dv.map_values(lambda u, w=ew: u @ omega @ w, shape=())
        out = out - dw.map_values(lambda u, v=ev: u @ omega @ v, shape=())
    return out


def divergence_in_rotated_frame(model, s, g):
    """Divergence recomputed in the rotated symplectic frame f_a = sum G_ba e_b;
    used by the frame-independence checks."""
    dim = 2 * model.n
    omega = model.omega
    out = TransverseField.zero(dim)
    derivs = [covariant_derivative_section(model, x, s) for x in range(dim)]
    for vi, wi in symplectic_pairs(model.n):
        fv = g[:, vi]
        fw = g[:, wi]
        dv = _combine_sections(derivs, fv, dim)
        dw = _combine_sections(derivs, fw, dim)
        out = out + dv.map_values(lambda u, w=fw: u @ omega @ w, shape=())
        out = out - dw.map_values(lambda u, v=fv: u @ omega @ v, shape=())
    return out


def _combine_sections(fields, coeffs, dim):
    out = TransverseField.zero(dim, shape=(dim,))
    for c, f in zip(coeffs, fields):
        if c != 0:
            out = out + float(c) * f
    return out


def divergence_theorem_residual(model, s):
    """|LHS - RHS| / max(1, |LHS|, |RHS|) for
    integral of div(s) rho dx = integral of omega(kappa_sharp + tau, s) rho dx."""
    div = transversal_divergence(model, s)
    lhs = integral(div, density=model.leaf_density)
    u = model.mean_curvature_plus_torsion()
    omega = model.omega
    pairing = convolve(u, s, combine=lambda a, b: a @ omega @ b, band=None, shape=())
    rhs = integral(pairing, density=model.leaf_density)
    return float(abs(lhs - rhs)) / max(1.0, abs(lhs), abs(rhs))


# ---------------------------------------------------------------------------
# Symplectic Ricci data
# ---------------------------------------------------------------------------

def symplectic_ricci(model):
    """Sric(s, t) = sum_j omega(R(v_j, w_j) s, t) as a matrix field
    (Sric[a, b] = Sric(e_a, e_b)) together with the scalar field
    r = sum_j Sric(e_j, e_j), cross-checked against the second trace form
    (1/2) sum_{i,j} omega(R(e_i, J e_i) e_j, e_j)."""
    curv = model.curvature()
    dim = 2 * model.n
    omega = model.omega
    j0 = model.j

    def sric(v):
        m = np.zeros((dim, dim), dtype=complex)
        for vj, wj in symplectic_pairs(model.n):
            r = v[:, :, vj, wj]  # endomorphism matrix
            for a in range(dim):
                for b in range(dim):
                    m[a, b] = m[a, b] + (r[:, a] @ omega[:, b])
        return m

    sric_field = curv.components.map_values(sric, shape=(dim, dim))
    r_field = sric_field.map_values(lambda m: np.trace(m), shape=())

    def r_second(v):
        total = 0.0
        for i in range(dim):
            ji = j0[:, i]
            r = sum(ji[b] * v[:, :, i, b] for b in range(dim))
            for a in range(dim):
                total = total + r[:, a] @ omega[:, a]
        return 0.5 * total

    r_field_2 = curv.components.map_values(r_second, shape=())
    if (r_field - r_field_2).norm() > 1e-11 * max(1.0, r_field.norm()):
        raise AssertionError("symplectic scalar curvature trace forms disagree")
    return sric_field, r_field


# ---------------------------------------------------------------------------
# Model catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: int = 1
    K: int = 2
    params: tuple = ()  # sorted (key, value) pairs; use make_model_spec

    def param_dict(self):
        return dict(self.params)


def make_model_spec(name, n=1, K=2, **params):
    return ModelSpec(name=name, n=n, K=K, params=tuple(sorted(params.items())))


BAND_MARGIN = 8


def _real_mode_field(dim, entries, shape=()):
    """Build a real field from (k, value) entries by adding the mirror mode."""
    modes = {}
    for k, v in entries:
        k = tuple(int(c) for c in k)
        v = np.asarray(v, dtype=complex)
        modes[k] = modes.get(k, 0) + v
        mk = tuple(-c for c in k)
        if mk != k:
            modes[mk] = modes.get(mk, 0) + np.conj(v)
    return TransverseField(dim, modes, shape=shape)


def build_model(spec):
    """Instantiate a catalog model from its spec; flags are recomputed from
    the data, never asserted."""
    builders = {
        "FlatKahlerTorus": _build_flat_kahler,
        "HeisenbergFlow": _build_heisenberg_flow,
        "WarpedNonTaut": _build_warped_nontaut,
        "SymmetricPerturbedFedosov": _build_symmetric_fedosov,
        "TorsionPerturbedSymplectic": _build_torsion_symplectic,
        "ChscFiber": _build_chsc_fiber,
    }
    if spec.name not in builders:
        raise ValueError(
            f"unknown model {spec.name!r}; catalog: {sorted(builders)}"
        )
    return builders[spec.name](spec)


def _flat_base(spec, name=None, leaf_dim=0):
    n, K = spec.n, spec.K
    dim = 2 * n
    return FoliationModel(
        name=name or spec.name,
        n=n,
        K=K,
        band=K + BAND_MARGIN,
        connection=flat_connection(n),
        kappa_form=TransverseField.zero(dim, shape=(dim,)),
        leaf_density=TransverseField.constant(dim, 1.0),
        leaf_dim=leaf_dim,
        chsc_h=0.0,
        params=spec.param_dict(),
    )


def _build_flat_kahler(spec):
    return _flat_base(spec, leaf_dim=0)


def _build_heisenberg_flow(spec):
    # codimension-2 flow: same flat transverse data at n=1, genuine 1-d leaves
    if spec.n != 1:
        raise ValueError("HeisenbergFlow is a codimension-2 flow (n=1)")
    return _flat_base(spec, leaf_dim=1)


def _default_warp_entries(n):
    k = (1,) + (0,) * (2 * n - 1)
    return ((k, 0.05),)  # f = 0.1 cos(2 pi x_1)


def _build_warped_nontaut(spec):
    n, K = spec.n, spec.K
    dim = 2 * n
    params = spec.param_dict()
    entries = params.get("warp", _default_warp_entries(n))
    f = _real_mode_field(dim, entries)
    if f.support_K > K:
        raise ValueError("warp profile exceeds the mode cutoff K")
    if f.norm() == 0.0:
        raise ValueError("WarpedNonTaut needs a nonzero warp profile")
    # kappa = -df (leaf metric e^{2f} dtheta^2 over a flat transverse torus)
    modes = {}
    for x in range(dim):
        for k, v in f.derivative(x).modes.items():
            if k not in modes:
                modes[k] = np.zeros(dim, dtype=complex)
            modes[k][x] -= v
    kappa = TransverseField(dim, modes, shape=(dim,))
    return FoliationModel(
        name=spec.name,
        n=n,
        K=K,
        band=K + BAND_MARGIN,
        connection=flat_connection(n),
        kappa_form=kappa,
        leaf_density=exp_field(f),
        leaf_dim=1,
        chsc_h=0.0,
        params=params,
    )


def _default_symmetric_entries(n):
    # totally symmetric 3-tensor entries (indices, mode, value); symmetrized.
    # The (0,0,0) x2-mode keeps the J-compatible projection curved: the
    # u(n)-part of Gamma then has a non-closed coefficient 1-form.
    zero = (0,) * (2 * n)
    k1 = (1,) + (0,) * (2 * n - 1)
    k2 = (0, 1) + (0,) * (2 * n - 2)
    return (
        ((0, 0, 0), zero, 0.04),
        ((0, 0, 0), k1, 0.025),
        ((0, 0, 0), k2, 0.02),
        ((0, 0, 1), k2, 0.02),
        ((0, 1, 1), k1, 0.015),
    )


def _build_symmetric_fedosov(spec):
    n, K = spec.n, spec.K
    dim = 2 * n
    params = spec.param_dict()
    entries = params.get("symmetric", _default_symmetric_entries(n))
    smodes = {}
    for idx, k, val in entries:
        a, b, c = idx
        k = tuple(int(x) for x in k)
        if max(abs(x) for x in k) > 1:
            raise ValueError("symmetric perturbation modes must satisfy |k|_inf <= 1")
        arr = smodes.setdefault(k, np.zeros((dim, dim, dim), dtype=complex))
        for p in {(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)}:
            arr[p] = val
        mk = tuple(-x for x in k)
        if mk != k:
            arrm = smodes.setdefault(mk, np.zeros((dim, dim, dim), dtype=complex))
            for p in {(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)}:
                arrm[p] = np.conj(val)
    sfield = TransverseField(dim, smodes, shape=(dim, dim, dim))
    for _, v in sfield.sorted_items():
        for perm in ((0, 2, 1), (1, 0, 2)):
            if np.max(np.abs(v - v.transpose(perm))) > 1e-14:
                raise ValueError("perturbation tensor is not totally symmetric")
    omega = omega_matrix(n)
    gamma = []
    for x in range(dim):
        # omega(Gamma(X) s, t) = S(X, s, t)  =>  Gamma(X) = Omega S_X
        gx = sfield.map_values(lambda v, x=x: omega @ v[x], shape=(dim, dim))
        gamma.append(gx)
    conn = ConnectionData(n, tuple(gamma))
    if not (conn.is_symplectic and conn.is_torsion_free):
        raise AssertionError("symmetric perturbation must give a Fedosov connection")
    return FoliationModel(
        name=spec.name,
        n=n,
        K=K,
        band=K + BAND_MARGIN,
        connection=conn,
        kappa_form=TransverseField.zero(dim, shape=(dim,)),
        leaf_density=TransverseField.constant(dim, 1.0),
        leaf_dim=0,
        chsc_h=None,
        params=params,
    )


def _default_torsion_entries(n):
    zero = (0,) * (2 * n)
    k1 = (1,) + (0,) * (2 * n - 1)
    entries = []
    # A(e_1) has an upper-triangular sl-part, A(e_{n+1}) a lower one, so
    # A(e_i) e_j != A(e_j) e_i and the torsion vector is nonzero.
    up = np.zeros((2 * n, 2 * n))
    up[0, n] = 1.0
    lo = np.zeros((2 * n, 2 * n))
    lo[n, 0] = 1.0
    entries.append((0, zero, 0.1 * up))
    entries.append((n, zero, 0.1 * lo))
    entries.append((0, k1, 0.03 * lo))
    return tuple(entries)


def _build_torsion_symplectic(spec):
    n, K = spec.n, spec.K
    dim = 2 * n
    params = spec.param_dict()
    entries = params.get("torsion", _default_torsion_entries(n))
    gmodes = [dict() for _ in range(dim)]
    for x, k, mat in entries:
        k = tuple(int(c) for c in k)
        if max(abs(c) for c in k) > 1:
            raise ValueError("torsion perturbation modes must satisfy |k|_inf <= 1")
        mat = np.asarray(mat, dtype=complex)
        gmodes[x][k] = gmodes[x].get(k, 0) + mat
        mk = tuple(-c for c in k)
        if mk != k:
            gmodes[x][mk] = gmodes[x].get(mk, 0) + np.conj(mat)
    gamma = tuple(
        TransverseField(dim, m, shape=(dim, dim)) for m in gmodes
    )
    conn = ConnectionData(n, gamma)
    if not conn.is_symplectic:
        raise ValueError("torsion perturbation matrices must lie in sp(n, R)")
    if conn.is_torsion_free:
        raise ValueError("TorsionPerturbedSymplectic requires nonzero torsion")
    return FoliationModel(
        name=spec.name,
        n=n,
        K=K,
        band=K + BAND_MARGIN,
        connection=conn,
        kappa_form=TransverseField.zero(dim, shape=(dim,)),
        leaf_density=TransverseField.constant(dim, 1.0),
        leaf_dim=0,
        chsc_h=None,
        params=params,
    )


def _build_chsc_fiber(spec):
    n = spec.n
    params = spec.param_dict()
    h = float(params.get("h", -2.0))
    dim = 2 * n
    model = FoliationModel(
        name=spec.name,
        n=n,
        K=0,
        band=BAND_MARGIN,
        connection=flat_connection(n),
        kappa_form=TransverseField.zero(dim, shape=(dim,)),
        leaf_density=TransverseField.constant(dim, 1.0),
        leaf_dim=0,
        chsc_h=h,
        pointlike=True,
        curvature_override=chsc_curvature(n, h),
        params=params,
    )
    return model


def j_compatible_model(model):
    """Rebuild a model with its connection replaced by the J-compatible
    projection; torsion, tau and flags are recomputed from scratch."""
    new_conn = make_j_compatible(model.connection)
    return FoliationModel(
        name=model.name + "+Jcompat",
        n=model.n,
        K=model.K,
        band=model.band,
        connection=new_conn,
        kappa_form=model.kappa_form,
        leaf_density=model.leaf_density,
        leaf_dim=model.leaf_dim,
        chsc_h=model.chsc_h,
        pointlike=model.pointlike,
        curvature_override=model.curvature_override,
        params=dict(model.params),
    )
