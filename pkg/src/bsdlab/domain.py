"""Jordan triple primitives for the type I domain of r x (r+b) complex matrices.

Points of V are plain complex ndarrays of shape (r, r+b).  Most functions
accept a leading batch axis so finite-difference stencils can be evaluated
in one call.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "DomainParams",
    "KEndo",
    "GroupElement",
    "SingularityError",
    "make_domain",
    "matrix_unit",
    "basis",
    "frame",
    "max_tripotent",
    "triple_product",
    "d_endo",
    "quadratic_map",
    "bergman_apply",
    "bergman_operator",
    "h_poly",
    "quasi_inverse",
    "quasi_inverse_defining",
    "q_map",
    "inner_product",
    "polar",
    "identity_endo",
    "moebius_apply",
    "jacobian_factor",
    "jacobian_power",
    "moebius_differential",
    "sample_group_element",
    "random_point",
]


class SingularityError(ValueError):
    """Raised when a required matrix inverse does not exist."""


@dataclass(frozen=True)
class DomainParams:
    """Structure constants of I_{r, r+b}."""

    r: int
    b: int
    a: int = field(init=False)
    n: int = field(init=False)
    p: int = field(init=False)
    q: int = field(init=False)

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError(f"rank must be a positive integer, got {self.r!r}")
        if int(self.b) != self.b or self.b < 0:
            raise ValueError(f"b must be a non-negative integer, got {self.b!r}")
        a = 2 if self.r >= 2 else 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n", self.r * (self.r + self.b))
        object.__setattr__(self, "p", (self.r - 1) * a + self.b + 2)
        object.__setattr__(self, "q", self.r + self.b)

    @property
    def tube(self) -> bool:
        return self.b == 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.r, self.r + self.b)

    def __str__(self):
        return f"I_{{{self.r},{self.r + self.b}}}"


def make_domain(r: int, b: int = 0) -> DomainParams:
    return DomainParams(r, b)


def _ct(x):
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(x, -1, -2))


def matrix_unit(domain: DomainParams, i: int, j: int) -> np.ndarray:
    e = np.zeros(domain.shape, dtype=complex)
    e[i, j] = 1.0
    return e


def basis(domain: DomainParams) -> np.ndarray:
    """Orthonormal basis of V (matrix units in row-major order), shape (n, r, r+b)."""
    return np.eye(domain.n, dtype=complex).reshape(domain.n, *domain.shape)


def frame(domain: DomainParams) -> list[np.ndarray]:
    """The standard frame e_j = E_jj."""
    return [matrix_unit(domain, j, j) for j in range(domain.r)]


def max_tripotent(domain: DomainParams) -> np.ndarray:
    return np.eye(*domain.shape, dtype=complex)


def _check_same_shape(*xs):
    shapes = {np.shape(x)[-2:] for x in xs}
    if len(shapes) != 1:
        raise ValueError(f"incompatible shapes: {[np.shape(x) for x in xs]}")


def triple_product(x, y, z):
    """{x y-bar z} = x y* z + z y* x."""
    _check_same_shape(x, y, z)
    yc = _ct(y)
    return x @ yc @ z + z @ yc @ x


def quadratic_map(z, v):
    """Q(z) v-bar = z v* z, so that Q(e) e-bar = e for a partial isometry e."""
    _check_same_shape(z, v)
    return z @ _ct(v) @ z


@dataclass(frozen=True, eq=False)
class KEndo:
    """Element of k_C acting on V by w -> a w - w d.

    The pair is normalised so that tr(a) + tr(d) = 0, which makes the
    representation unique (the pair (cI, cI) acts as zero).
    """

    a: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=complex))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=complex))

    @classmethod
    def zero(cls, domain: DomainParams) -> "KEndo":
        r, m = domain.shape
        return cls(np.zeros((r, r), complex), np.zeros((m, m), complex))

    @classmethod
    def from_pair(cls, a, d) -> "KEndo":
        """Build from any pair, shifting it onto the trace-free representative."""
        a = np.asarray(a, dtype=complex)
        d = np.asarray(d, dtype=complex)
        r, m = a.shape[0], d.shape[0]
        c = (np.trace(a) + np.trace(d)) / (r + m)
        return cls(a - c * np.eye(r), d - c * np.eye(m))

    def apply(self, w):
        return self.a @ w - w @ self.d

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.a) + np.trace(self.d))

    def as_operator(self) -> np.ndarray:
        """n x n matrix of the action on V in the matrix-unit basis."""
        r, m = self.a.shape[0], self.d.shape[0]
        # vec_row(a w - w d) = (a kron I - I kron d^T) vec_row(w)
        return np.kron(self.a, np.eye(m)) - np.kron(np.eye(r), self.d.T)

    def __add__(self, other):
        return KEndo(self.a + other.a, self.d + other.d)

    def __sub__(self, other):
        return KEndo(self.a - other.a, self.d - other.d)

    def __neg__(self):
        return KEndo(-self.a, -self.d)

    def __mul__(self, c):
        return KEndo(c * self.a, c * self.d)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return KEndo(self.a / c, self.d / c)

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.a)), np.max(np.abs(self.d))))

    def allclose(self, other, atol=1e-10) -> bool:
        return (self - other).max_abs() <= atol

    def __repr__(self):
        return f"KEndo(a={self.a!r}, d={self.d!r})"


def d_endo(z, v) -> KEndo:
    """D(z, v-bar) as the pair (z v*, -v* z)."""
    _check_same_shape(z, v)
    return KEndo(z @ _ct(v), -(_ct(v) @ z))


def identity_endo(domain: DomainParams) -> KEndo:
    """The element Id = -i Z_0 acting as the identity on V."""
    r, m = domain.shape
    return KEndo((m / domain.p) * np.eye(r), -(r / domain.p) * np.eye(m))


def bergman_apply(z, w, v):
    """B(z, w-bar) v = (I - z w*) v (I - w* z)."""
    _check_same_shape(z, w, v)
    r, m = np.shape(z)[-2:]
    return (np.eye(r) - z @ _ct(w)) @ v @ (np.eye(m) - _ct(w) @ z)


def bergman_operator(z, w) -> np.ndarray:
    """B(z, w-bar) as an n x n matrix in the matrix-unit basis."""
    z = np.asarray(z)
    r, m = z.shape
    left = np.eye(r) - z @ _ct(w)
    right = np.eye(m) - _ct(w) @ z
    return np.kron(left, right.T)


def h_poly(z, w):
    """h(z, w) = det(I_r - z w*); holomorphic in z, antiholomorphic in w."""
    z = np.asarray(z)
    w = np.asarray(w)
    r = z.shape[-2]
    return np.linalg.det(np.eye(r) - z @ _ct(w))


def _solve(m, x):
    try:
        return np.linalg.solve(m, x)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(str(exc)) from None


def quasi_inverse(w, z):
    """Quasi-inverse w^{z-bar} = (I_r - w z*)^{-1} w."""
    _check_same_shape(w, z)
    r = np.shape(w)[-2]
    m = np.eye(r) - w @ _ct(z)
    if np.any(np.abs(np.linalg.det(m)) < 1e-14):
        raise SingularityError("I - w z* is singular")
    return _solve(m, w)


def quasi_inverse_defining(w, z):
    """B(w, z-bar)^{-1} (w - Q(w) z-bar), solved on V as an n x n system."""
    w = np.asarray(w, dtype=complex)
    b = bergman_operator(w, z)
    rhs = (w - quadratic_map(w, z)).reshape(-1)
    try:
        x = np.linalg.solve(b, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(str(exc)) from None
    return x.reshape(w.shape)


def q_map(z):
    """q(z) = (I - z-bar z^T)^{-1} z-bar, the quasi-inverse of z-bar w.r.t. z.

    The result is the entrywise conjugate of z^{z-bar}; it represents a point
    of V-bar, so conical polynomials evaluated on it give the conjugate
    polynomials of z^{z-bar}.
    """
    z = np.asarray(z)
    r = z.shape[-2]
    zb = np.conj(z)
    m = np.eye(r) - zb @ np.swapaxes(z, -1, -2)
    if np.any(np.abs(np.linalg.det(m)) < 1e-14):
        raise SingularityError("z is not an interior point")
    return _solve(m, zb)


def inner_product(z, w):
    """<z, w> = tr(z w*)."""
    return np.sum(z * np.conj(w), axis=(-2, -1))


def polar(z):
    """Singular values (non-increasing) and the interior flag s_max < 1."""
    s = np.linalg.svd(np.asarray(z), compute_uv=False)
    return s, bool(s[0] < 1.0)


def random_point(rng: np.random.Generator, domain: DomainParams, radius: float = 0.5):
    """Random interior point whose spectral norm lies in [0.2, 1] * radius."""
    r, m = domain.shape
    z = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
    s = np.linalg.norm(z, 2)
    return z * (radius * rng.uniform(0.2, 1.0) / s)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of SU(r, r+b) in block form [[A, B], [C, D]]."""

    matrix: np.ndarray
    r: int

    @property
    def A(self):
        return self.matrix[: self.r, : self.r]

    @property
    def B(self):
        return self.matrix[: self.r, self.r :]

    @property
    def C(self):
        return self.matrix[self.r :, : self.r]

    @property
    def D(self):
        return self.matrix[self.r :, self.r :]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, self.r)

    def inverse(self) -> "GroupElement":
        # g^{-1} = J g* J for pseudo-unitary g
        J = self.form()
        return GroupElement(J @ self.matrix.conj().T @ J, self.r)

    def form(self) -> np.ndarray:
        size = self.matrix.shape[0]
        return np.diag([1.0] * self.r + [-1.0] * (size - self.r)).astype(complex)

    def pseudo_unitarity_residual(self) -> float:
        J = self.form()
        g = self.matrix
        return float(np.max(np.abs(g.conj().T @ J @ g - J)))

    @classmethod
    def identity(cls, domain: DomainParams) -> "GroupElement":
        return cls(np.eye(domain.r + domain.q, dtype=complex), domain.r)


def _cz_plus_d(g: GroupElement, z):
    return g.C @ z + g.D


def moebius_apply(g: GroupElement, z):
    """g.z = (A z + B)(C z + D)^{-1}."""
    den = _cz_plus_d(g, z)
    num = g.A @ z + g.B
    try:
        # X den = num  <=>  den^T X^T = num^T
        return np.swapaxes(np.linalg.solve(np.swapaxes(den, -1, -2), np.swapaxes(num, -1, -2)), -1, -2)
    except np.linalg.LinAlgError as exc:
        raise SingularityError("C z + D is singular") from exc


def jacobian_factor(g: GroupElement, z, p: int | None = None):
    """Complex Jacobian J_g(z) = det(C z + D)^{-p}."""
    if p is None:
        m = g.matrix.shape[0] - g.r
        p = g.r + m
    return np.linalg.det(_cz_plus_d(g, z)) ** (-p)


def jacobian_power(g: GroupElement, z, nu: float):
    """J_g(z)^{nu/p} taken as det(C z + D)^{-nu} (single valued for integer nu)."""
    return np.linalg.det(_cz_plus_d(g, z)) ** (-nu)


def moebius_differential(g: GroupElement, z) -> tuple[np.ndarray, np.ndarray]:
    """dg(z) v = P v Q with P = A - g(z) C and Q = (C z + D)^{-1}."""
    gz = moebius_apply(g, z)
    return g.A - gz @ g.C, np.linalg.inv(_cz_plus_d(g, z))


def sample_group_element(rng: np.random.Generator, domain: DomainParams, scale: float = 0.3) -> GroupElement:
    """exp of a random element of su(r, r+b) whose entries are O(scale)."""
    if scale < 0:
        raise ValueError("scale must be non-negative")
    r, m = domain.shape
    size = r + m

    def anti_hermitian(k):
        x = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        return (x - x.conj().T) / 2

    off = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
    X = np.zeros((size, size), dtype=complex)
    X[:r, :r] = anti_hermitian(r)
    X[r:, r:] = anti_hermitian(m)
    X[:r, r:] = off
    X[r:, :r] = off.conj().T
    X -= (np.trace(X) / size) * np.eye(size)
    return GroupElement(scipy.linalg.expm(scale * X), r)
