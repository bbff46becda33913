"""Finite-difference Wirtinger calculus on V and the twisted Hua operators.

Scalar fields are evaluated in batches: a field receives an array of shape
(N, r, r+b) and returns N values.  Plain per-point callables can be wrapped
with ``ScalarField(fn, batched=False)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domain import (
    DomainParams,
    KEndo,
    basis,
    bergman_apply,
    d_endo,
    frame,
    h_poly,
)

__all__ = [
    "FDScheme",
    "ScalarField",
    "RadialField",
    "BoundaryError",
    "SingularConfigurationError",
    "mixed_hessian",
    "wirtinger_gradient",
    "holo_derivative_check",
    "hua_origin",
    "hua_general",
    "hua_prime",
    "project_k1",
    "radial_hua_j",
    "radial_sides",
    "radial_consistency",
]

# minimum h(z, z) tolerated at any stencil point
H_GUARD = 1e-3

_FIRST = {
    2: (np.array([-1, 1]), np.array([-0.5, 0.5])),
    4: (np.array([-2, -1, 1, 2]), np.array([1 / 12, -2 / 3, 2 / 3, -1 / 12])),
}
_SECOND = {
    2: (np.array([-1, 0, 1]), np.array([1.0, -2.0, 1.0])),
    4: (np.array([-2, -1, 0, 1, 2]), np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])),
}


class BoundaryError(ValueError):
    """Stencil reaches too close to the boundary of the domain."""


class SingularConfigurationError(ValueError):
    """Radial coordinates at a pole of the radial operators."""


@dataclass(frozen=True)
class FDScheme:
    step: float = 1e-3
    order: int = 4
    richardson: bool = False

    def __post_init__(self):
        if not 1e-6 <= self.step <= 1e-1:
            raise ValueError(f"step {self.step} outside [1e-6, 1e-1]")
        if self.order not in (2, 4):
            raise ValueError("order must be 2 or 4")


@dataclass(frozen=True)
class ScalarField:
    fn: Callable
    label: str = ""
    batched: bool = True

    def __call__(self, zs):
        zs = np.asarray(zs)
        if zs.ndim == 2:
            return self(zs[None])[0]
        if self.batched:
            return np.asarray(self.fn(zs))
        return np.array([self.fn(z) for z in zs])


@dataclass(frozen=True)
class RadialField:
    """K-invariant profile t -> F(sum t_j e_j); vectorised over leading axes of t."""

    fn: Callable
    label: str = ""

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))


def _as_field(f) -> ScalarField:
    return f if isinstance(f, ScalarField) else ScalarField(f)


def _real_directions(shape) -> np.ndarray:
    """Directions for x_alpha and y_alpha, shape (2n, r, m); index 2a is real, 2a+1 imaginary."""
    n = shape[0] * shape[1]
    e = np.eye(n, dtype=complex).reshape(n, *shape)
    dirs = np.empty((2 * n, *shape), dtype=complex)
    dirs[0::2] = e
    dirs[1::2] = 1j * e
    return dirs


def _real_hessian(f: ScalarField, z, step, order):
    dirs = _real_directions(z.shape)
    m = len(dirs)
    off1, w1 = _FIRST[order]
    off2, w2 = _SECOND[order]
    pts, wts, slots = [], [], []
    for i in range(m):
        for o, w in zip(off2, w2):
            pts.append(z + o * step * dirs[i])
            wts.append(w / step**2)
            slots.append((i, i))
        for j in range(i + 1, m):
            for oi, wi in zip(off1, w1):
                for oj, wj in zip(off1, w1):
                    pts.append(z + step * (oi * dirs[i] + oj * dirs[j]))
                    wts.append(wi * wj / step**2)
                    slots.append((i, j))
    vals = f(np.array(pts))
    _check_finite(vals)
    hess = np.zeros((m, m), dtype=complex)
    for (i, j), w, v in zip(slots, wts, vals):
        hess[i, j] += w * v
    iu = np.triu_indices(m, 1)
    hess[(iu[1], iu[0])] = hess[iu]
    return hess


def _check_finite(vals):
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite field value inside the stencil")


def _richardson(estimate, scheme: FDScheme):
    coarse = estimate(scheme.step)
    if not scheme.richardson:
        return coarse
    fine = estimate(scheme.step / 2)
    k = 2**scheme.order
    return (k * fine - coarse) / (k - 1)


def _wirtinger_from_real(hr, n):
    xx = hr[0::2, 0::2]
    xy = hr[0::2, 1::2]
    yx = hr[1::2, 0::2]
    yy = hr[1::2, 1::2]
    return 0.25 * (xx + 1j * xy - 1j * yx + yy)


def mixed_hessian(f, z, scheme: FDScheme = FDScheme()) -> np.ndarray:
    """Matrix of d_alpha dbar_beta f(z) in the matrix-unit coordinates."""
    f = _as_field(f)
    z = np.asarray(z, dtype=complex)
    n = z.size
    return _richardson(lambda h: _wirtinger_from_real(_real_hessian(f, z, h, scheme.order), n), scheme)


def _real_gradient_points(z, step, order):
    dirs = _real_directions(z.shape)
    off, w = _FIRST[order]
    pts = z + step * off[None, :, None, None] * dirs[:, None]  # (2n, S, r, m)
    return pts, w / step


def _combine_gradient(vals, w):
    """vals: (2n, S, ...) -> (d/dz, d/dzbar) each of shape (n, ...)."""
    dr = np.tensordot(w, vals, axes=(0, 1))  # (2n, ...)
    dx, dy = dr[0::2], dr[1::2]
    return 0.5 * (dx - 1j * dy), 0.5 * (dx + 1j * dy)


def wirtinger_gradient(f, z, scheme: FDScheme = FDScheme()):
    """(d_alpha f, dbar_alpha f) at z, each an n-vector."""
    f = _as_field(f)
    z = np.asarray(z, dtype=complex)

    def est(h):
        pts, w = _real_gradient_points(z, h, scheme.order)
        vals = f(pts.reshape(-1, *z.shape)).reshape(pts.shape[:2])
        _check_finite(vals)
        return np.array(_combine_gradient(vals, w))

    d, db = _richardson(est, scheme)
    return d, db


def holo_derivative_check(s, z, w, scheme: FDScheme = FDScheme()) -> float:
    """Max residual between the FD gradient of z -> h(z, w)^s and -s h^s (w-bar^z).

    The closed form pairs d_alpha with the coordinates of the conjugate
    quasi-inverse: d_alpha h(z, w)^s = -s h^s conj((w^{z-bar})_alpha).
    """
    from .domain import quasi_inverse

    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    field = ScalarField(lambda zs: h_poly(zs, w) ** s)
    d, _ = wirtinger_gradient(field, z, scheme)
    closed = -s * h_poly(z, w) ** s * np.conj(quasi_inverse(w, z)).reshape(-1)
    return float(np.max(np.abs(d - closed)))


def _sum_d_endo(xs, domain: DomainParams) -> KEndo:
    """sum_k D(x_k, e_k-bar) over the matrix-unit basis, xs of shape (n, r, m)."""
    e = basis(domain)
    a = np.einsum("kij,klj->il", xs, np.conj(e))
    d = -np.einsum("kji,kjl->il", np.conj(e), xs)
    return KEndo(a, d)


def hua_origin(f, domain: DomainParams, scheme: FDScheme = FDScheme()) -> KEndo:
    """H f(0) = sum_{alpha,beta} d_alpha dbar_beta f(0) D(e_beta, e_alpha-bar)."""
    zero = np.zeros(domain.shape, dtype=complex)
    hm = mixed_hessian(f, zero, scheme)
    xs = np.einsum("ab,bij->aij", hm, basis(domain))
    return _sum_d_endo(xs, domain)


def _guard(zs):
    hz = np.real(h_poly(zs, zs))
    if np.min(hz) < H_GUARD:
        raise BoundaryError(f"h(z, z) = {np.min(hz):.3g} below guard {H_GUARD}")
    return hz


def _nested(f, z, scheme, outer_weight, inner):
    """Outer FD gradient of w -> outer_weight(w) * inner(f values around w).

    Returns the (d/dz_k, d/dzbar_k) arrays of the vector field, each (n, n).
    """
    order = scheme.order
    shape = z.shape

    def est(step):
        outer_pts, wo = _real_gradient_points(z, step, order)  # (2n, S, r, m)
        centres = outer_pts.reshape(-1, *shape)
        inner_pts, wi = _real_gradient_points(np.zeros(shape, complex), step, order)
        allpts = centres[:, None, None] + inner_pts[None]  # (C, 2n, S, r, m)
        _guard(allpts.reshape(-1, *shape))
        vals = f(allpts.reshape(-1, *shape)).reshape(allpts.shape[:3])
        _check_finite(vals)
        # per-centre inner Wirtinger gradient: (C, n)
        dr = np.einsum("s,cks->ck", wi, vals)
        dx, dy = dr[:, 0::2], dr[:, 1::2]
        grads = inner(centres, vals, 0.5 * (dx - 1j * dy), 0.5 * (dx + 1j * dy))
        field = outer_weight(centres)[:, None] * grads  # (C, n)
        field = field.reshape(*outer_pts.shape[:2], -1)
        return np.array(_combine_gradient(field, wo))

    return _richardson(est, scheme)


def _check_interior(z):
    hz = float(np.real(h_poly(z, z)))
    if hz < H_GUARD:
        raise BoundaryError(f"h(z, z) = {hz:.3g} below guard {H_GUARD}")
    return hz


def hua_general(f, z, nu, domain: DomainParams, scheme: FDScheme = FDScheme()) -> KEndo:
    """Twisted Hua operator at z.

    H F(z) = sum_k D(X_k, e_k-bar),
    X_k = h^{-nu} B(z, z-bar) d_k (h^nu dbar F),
    with the outer d_k applied to the vector field w -> h(w,w)^nu dbar F(w).
    """
    f = _as_field(f)
    z = np.asarray(z, dtype=complex)
    hz = _check_interior(z)
    e = basis(domain)

    def weight(ws):
        return np.real(h_poly(ws, ws)) ** nu

    d_out, _ = _nested(f, z, scheme, weight, lambda c, v, d, db: db)
    # d_out[k, l] = d_k (h^nu dbar_l F)
    xs = np.einsum("kl,lij->kij", d_out, e)
    xs = bergman_apply(z[None], z[None], xs) * hz ** (-nu)
    return _sum_d_endo(xs, domain)


def hua_prime(f, z, nu, domain: DomainParams, scheme: FDScheme = FDScheme()) -> KEndo:
    """Hua operator with the reversed order: sum_k D(B dbar(h^{-nu} d_k(h^nu F)), e_k-bar)."""
    f = _as_field(f)
    z = np.asarray(z, dtype=complex)
    _check_interior(z)
    e = basis(domain)
    twisted = ScalarField(lambda ws: np.real(h_poly(ws, ws)) ** nu * f(ws))

    def weight(ws):
        return np.real(h_poly(ws, ws)) ** (-nu)

    _, db_out = _nested(twisted, z, scheme, weight, lambda c, v, d, db: d)
    # db_out[l, k] = dbar_l (h^{-nu} d_k (h^nu F))
    xs = np.einsum("lk,lij->kij", db_out, e)
    xs = bergman_apply(z[None], z[None], xs)
    return _sum_d_endo(xs, domain)


def project_k1(x: KEndo, domain: DomainParams) -> tuple[KEndo, KEndo]:
    """Split x into its gl_r ideal component and its sl_{r+b} component."""
    m = domain.q
    ta = np.trace(x.a)
    k1 = KEndo(x.a, -(ta / m) * np.eye(m))
    k2 = KEndo(np.zeros_like(x.a), x.d + (ta / m) * np.eye(m))
    return k1, k2


def _radial_derivatives(F: RadialField, t, step, order):
    """Gradient and diagonal second derivatives of the profile at t."""
    r = len(t)
    off1, w1 = _FIRST[order]
    off2, w2 = _SECOND[order]
    eye = np.eye(r)
    p1 = t[None, None] + step * off1[None, :, None] * eye[:, None]
    p2 = t[None, None] + step * off2[None, :, None] * eye[:, None]
    v1 = np.asarray(F(p1.reshape(-1, r))).reshape(r, -1)
    v2 = np.asarray(F(p2.reshape(-1, r))).reshape(r, -1)
    # differences from the centre value, so constants are annihilated exactly
    centre = v2[:, [len(off2) // 2]]
    return v1 @ w1 / step, (v2 - centre) @ w2 / step**2


def _check_radial(t, tol=1e-8):
    r = len(t)
    for j in range(r):
        if abs(t[j]) < tol:
            raise SingularConfigurationError(f"t_{j + 1} = 0")
        if abs(t[j]) >= 1:
            raise SingularConfigurationError(f"|t_{j + 1}| >= 1")
        for k in range(j + 1, r):
            if abs(t[j] - t[k]) < tol or abs(t[j] + t[k]) < tol:
                raise SingularConfigurationError(f"t_{j + 1} = +-t_{k + 1}")


def radial_hua_j(F, t, j, nu, domain: DomainParams, scheme: FDScheme = FDScheme()) -> complex:
    """Scalar radial operator H_j applied to a K-invariant profile at t."""
    F = F if isinstance(F, RadialField) else RadialField(F)
    t = np.asarray(t, dtype=float)
    _check_radial(t)
    grad, second = _radial_derivatives(F, t, scheme.step, scheme.order)
    tj = t[j]
    cj = 1 - tj**2
    val = cj**2 * (second[j] + (1 + 2 * nu) / tj * grad[j])
    for k in range(len(t)):
        if k == j:
            continue
        tk = t[k]
        val += (domain.a / 2) * cj * (1 - tk**2) * (
            (grad[j] - grad[k]) / (tj - tk) + (grad[j] + grad[k]) / (tj + tk)
        )
    val += (2 * domain.b - 2 * nu) * cj / tj * grad[j]
    return complex(val)


def radial_sides(F, profile, t, nu, domain: DomainParams, scheme: FDScheme = FDScheme()) -> tuple[KEndo, KEndo]:
    """(4 H F(a), sum_j H_j F(t) D(e_j, e_j-bar)) at a = sum t_j e_j.

    Non-tube domains return the gl_r components only.
    """
    t = np.asarray(t, dtype=float)
    a = np.zeros(domain.shape, dtype=complex)
    a[np.arange(domain.r), np.arange(domain.r)] = t
    left = 4 * hua_general(F, a, nu, domain, scheme)
    right = KEndo.zero(domain)
    for j, ej in enumerate(frame(domain)):
        right = right + radial_hua_j(profile, t, j, nu, domain, scheme) * d_endo(ej, ej)
    if not domain.tube:
        left = project_k1(left, domain)[0]
        right = project_k1(right, domain)[0]
    return left, right


def radial_consistency(F, profile, t, nu, domain: DomainParams, scheme: FDScheme = FDScheme()) -> float:
    """Max-abs residual of 4 H F(a) = sum_j H_j F(t) D(e_j, e_j-bar)."""
    left, right = radial_sides(F, profile, t, nu, domain, scheme)
    return (left - right).max_abs()
