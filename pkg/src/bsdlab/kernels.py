"""Poisson kernels, spectral parameters, conical functions and the Poisson transform."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

import numpy as np
from scipy.special import loggamma

from .domain import DomainParams, GroupElement, h_poly
from .symmetric import Signature, gen_pochhammer

__all__ = [
    "SpectralParams",
    "spectral_params",
    "szego_params",
    "poisson_kernel",
    "kernel_multiplier",
    "conical",
    "c_constant",
    "DiscreteSeries",
    "discrete_series_set",
    "ShimenoCheck",
    "shimeno_check",
    "shimeno_condition_ok",
    "EDenominator",
    "c_denominator_e",
    "sample_shilov",
    "MonteCarlo",
    "CircleQuadrature",
    "poisson_transform",
    "spherical_phi",
    "szego_target",
    "worker_count",
]


@dataclass(frozen=True)
class SpectralParams:
    """(s, nu, delta) on a given domain, with the derived sigma, rho and lambda_s."""

    domain: DomainParams
    s: complex
    nu: float
    delta: int = 0
    sigma: complex = field(init=False)
    rho: np.ndarray = field(init=False, repr=False, compare=False)
    lambda_s: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dom = self.domain
        object.__setattr__(self, "sigma", self.s * dom.n / dom.r)
        rho = np.array([(dom.b + 1 + dom.a * j) / 2 for j in range(dom.r)])
        shift = (2 * dom.n * (self.s - 1) - self.nu * dom.r) / (2 * dom.r)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "lambda_s", rho + shift)

    @property
    def szego_regime(self) -> bool:
        dom = self.domain
        return abs(self.sigma - (dom.q + self.delta - self.nu)) < 1e-12


def spectral_params(domain: DomainParams, s, nu, delta: int = 0) -> SpectralParams:
    return SpectralParams(domain, s, nu, delta)


def szego_params(domain: DomainParams, nu, delta: int) -> SpectralParams:
    """Parameters with sigma = n/r + delta - nu."""
    q = domain.q
    return SpectralParams(domain, (q + delta - nu) / q, nu, delta)


def _int_power(x, nu):
    if float(nu).is_integer():
        return x ** int(nu)
    return x**nu


def poisson_kernel(sp: SpectralParams, z, u):
    """P_{s,nu}(z, u) = (h(z,z)/|h(z,u)|^2)^sigma h(z,u)^{-nu}; broadcasts over batches."""
    z = np.asarray(z)
    u = np.asarray(u)
    hzz = np.real(h_poly(z, z))
    hzu = h_poly(z, u)
    return (hzz / np.abs(hzu) ** 2) ** sp.sigma * _int_power(hzu, -sp.nu)


def kernel_multiplier(sp: SpectralParams, g: GroupElement, z, u):
    """m with P(gz, gu) = m P(z, u): j(z)^nu conj(j(u))^nu |j(u)|^{2 sigma}, j = det(C . + D)."""
    jz = np.linalg.det(g.C @ z + g.D)
    ju = np.linalg.det(g.C @ u + g.D)
    return _int_power(jz, sp.nu) * _int_power(np.conj(ju), sp.nu) * np.abs(ju) ** (2 * sp.sigma)


def conical(m, z):
    """Delta_m(z) = prod_j Delta_j(z)^{m_j - m_{j+1}} with leading j x j minors."""
    m = Signature(m)
    z = np.asarray(z)
    out = np.ones(z.shape[:-2], dtype=complex)
    ext = tuple(m) + (0,)
    for j in range(len(m)):
        k = ext[j] - ext[j + 1]
        if k:
            out = out * np.linalg.det(z[..., : j + 1, : j + 1]) ** k
    return out if out.ndim else complex(out)


def c_constant(m, delta: int, domain: DomainParams):
    """c(m, delta) = prod_j ((a/2)(r-j) + 1 + m_j)_delta; exact for integer input."""
    m = Signature(m)
    out = Fraction(1)
    for j, mj in enumerate(m, start=1):
        base = Fraction(domain.a, 2) * (domain.r - j) + 1 + mj
        for i in range(delta):
            out *= base + i
    return out


@dataclass(frozen=True)
class DiscreteSeries:
    """ell and D_nu; `tuples` use the increasing order 0 <= m_1 <= ... <= m_r <= ell."""

    ell: int
    tuples: tuple

    def signatures(self) -> list[Signature]:
        return [Signature(reversed(t)) for t in self.tuples]


def discrete_series_set(nu, domain: DomainParams) -> DiscreteSeries:
    if not nu > domain.p - 1:
        raise ValueError(f"no relative discrete series parameters: nu = {nu} <= p - 1 = {domain.p - 1}")
    alpha = nu - domain.p
    if float(alpha).is_integer() and int(alpha) % 2 == 1:
        ell = (int(alpha) - 1) // 2
    else:
        ell = floor((alpha + 1) / 2)

    def rec(prefix, lo):
        if len(prefix) == domain.r:
            yield tuple(prefix)
            return
        for x in range(lo, ell + 1):
            yield from rec(prefix + [x], x)

    return DiscreteSeries(ell, tuple(rec([], 0)))


@dataclass(frozen=True)
class ShimenoCheck:
    value: complex
    in_lambda1: bool
    in_lambda2: bool
    ambiguous: bool  # lands on the Z_+ = {0,1,...} boundary of Lambda_1

    @property
    def ok(self) -> bool:
        return not (self.in_lambda1 or self.in_lambda2)


def shimeno_check(s, nu, domain: DomainParams, tol: float = 1e-9) -> ShimenoCheck:
    """Membership of 4n(1-s)/r in Lambda_1 = Z_+ - 2nu + 2 and Lambda_2 = 2Z_>= - 4nu + 4."""
    x = 4 * domain.n * (1 - complex(s)) / domain.r
    if abs(x.imag) > tol:
        return ShimenoCheck(x, False, False, False)
    k1 = x.real + 2 * nu - 2
    k2 = (x.real + 4 * nu - 4) / 2
    near1 = abs(k1 - round(k1)) <= tol
    near2 = abs(k2 - round(k2)) <= tol
    in1 = near1 and round(k1) >= 1
    in2 = near2 and round(k2) >= 0
    ambiguous = near1 and round(k1) == 0
    return ShimenoCheck(x, in1, in2, ambiguous)


def shimeno_condition_ok(s, nu, domain: DomainParams) -> bool:
    return shimeno_check(s, nu, domain).ok


@dataclass(frozen=True)
class EDenominator:
    value: complex
    log_value: complex
    poles: tuple  # (label, argument) pairs where Gamma has a pole

    @property
    def singular(self) -> bool:
        return bool(self.poles)


def _is_pole(x, tol=1e-9):
    x = complex(x)
    return abs(x.imag) <= tol and abs(x.real - round(x.real)) <= tol and round(x.real) <= 0


def c_denominator_e(sp: SpectralParams) -> EDenominator:
    """e_nu(lambda): products of Gamma over the roots, in beta coordinates of lambda."""
    dom = sp.domain
    lam = np.asarray(sp.lambda_s, dtype=complex)
    args = []
    for j in range(dom.r):
        for k in range(j):
            args.append((f"a/2+l{j + 1}+l{k + 1}", dom.a / 2 + lam[j] + lam[k]))
            args.append((f"a/2+l{j + 1}-l{k + 1}", dom.a / 2 + lam[j] - lam[k]))
        args.append((f"(b+1+2l{j + 1}+nu)/2", (dom.b + 1 + 2 * lam[j] + sp.nu) / 2))
        args.append((f"(b+1+2l{j + 1}-nu)/2", (dom.b + 1 + 2 * lam[j] - sp.nu) / 2))
    poles = tuple((label, complex(x)) for label, x in args if _is_pole(x))
    if poles:
        return EDenominator(complex(np.inf), complex(np.inf), poles)
    logv = complex(sum(loggamma(complex(x)) for _, x in args))
    return EDenominator(complex(np.exp(logv)), logv, ())


def sample_shilov(rng: np.random.Generator, domain: DomainParams, size: int | None = None):
    """Haar-distributed u with u u* = I_r, via QR of a complex Gaussian (r+b) x r matrix."""
    r, m = domain.shape
    count = 1 if size is None else size

    def gaussian(k):
        return rng.standard_normal((k, m, r)) + 1j * rng.standard_normal((k, m, r))

    g = gaussian(count)
    q, rr = np.linalg.qr(g)
    diag = np.diagonal(rr, axis1=-2, axis2=-1)
    # rank-deficient draws have probability zero; redraw them anyway
    bad = np.abs(diag).min(axis=-1) < 1e-12
    while np.any(bad):
        q[bad], rr[bad] = np.linalg.qr(gaussian(int(bad.sum())))
        diag = np.diagonal(rr, axis1=-2, axis2=-1)
        bad = np.abs(diag).min(axis=-1) < 1e-12
    q = q * (diag / np.abs(diag))[..., None, :]
    u = np.conj(np.swapaxes(q, -1, -2))
    return u[0] if size is None else u


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int = 0
    shards: int = 16
    chunk: int = 50_000


@dataclass(frozen=True)
class CircleQuadrature:
    nodes: int = 512


def worker_count() -> int:
    env = os.environ.get("BSDLAB_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def _shard_stats(f, sp, z, domain, seed_seq, count, chunk):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    n_tot, mean, m2 = 0, 0j, 0.0
    done = 0
    while done < count:
        k = min(chunk, count - done)
        us = sample_shilov(rng, domain, k)
        vals = poisson_kernel(sp, z[None], us) * f(us)
        n_tot, mean, m2 = _merge(n_tot, mean, m2, k, vals.mean(), float(np.sum(np.abs(vals - vals.mean()) ** 2)))
        done += k
    return n_tot, mean, m2


def _merge(na, ma, m2a, nb, mb, m2b):
    n = na + nb
    delta = mb - ma
    mean = ma + delta * nb / n
    m2 = m2a + m2b + abs(delta) ** 2 * na * nb / n
    return n, mean, m2


def poisson_transform(f, sp: SpectralParams, z, method) -> tuple[complex, float]:
    """Estimate of the integral of P_{s,nu}(z, u) f(u) du over the Shilov boundary.

    `f` maps a batch of boundary points (N, r, r+b) to N values.  Returns the
    value and its standard error (0 for the deterministic quadrature).
    """
    dom = sp.domain
    z = np.asarray(z, dtype=complex)
    if np.linalg.norm(z, 2) >= 1:
        raise ValueError("z must be an interior point")
    if isinstance(method, CircleQuadrature):
        if dom.shape != (1, 1):
            raise ValueError("circle quadrature needs r = 1, b = 0")
        theta = 2 * np.pi * np.arange(method.nodes) / method.nodes
        us = np.exp(1j * theta).reshape(-1, 1, 1)
        vals = poisson_kernel(sp, z[None], us) * f(us)
        return complex(vals.mean()), 0.0
    if isinstance(method, MonteCarlo):
        shards = max(1, min(method.shards, method.samples))
        seqs = np.random.SeedSequence(method.seed).spawn(shards)
        counts = [method.samples // shards + (i < method.samples % shards) for i in range(shards)]
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            stats = list(pool.map(
                lambda i: _shard_stats(f, sp, z, dom, seqs[i], counts[i], method.chunk), range(shards)
            ))
        n, mean, m2 = 0, 0j, 0.0
        for st in stats:
            n, mean, m2 = _merge(n, mean, m2, *st)
        stderr = np.sqrt(m2 / (n - 1) / n) if n > 1 else float("inf")
        return complex(mean), float(stderr)
    raise TypeError(f"unknown integration method {method!r}")


def spherical_phi(sp: SpectralParams, z, method) -> tuple[complex, float]:
    """Shilov-boundary integral of the kernel against 1 (K-invariant in z)."""
    return poisson_transform(lambda us: np.ones(len(us)), sp, z, method)


def szego_target(sp: SpectralParams, z) -> complex:
    """((sigma)_delta / (n/r)_delta) * conj(Delta_delta)(q(z)), signature (delta,...,delta).

    Uses conj(Delta_delta(z)) / h(z,z)^delta, which equals the conjugate conical
    function at the quasi-inverse q(z).
    """
    dom = sp.domain
    d = Signature([sp.delta] * dom.r)
    ratio = gen_pochhammer(sp.sigma, d, dom.a) / gen_pochhammer(dom.q, d, dom.a)
    z = np.asarray(z)
    return complex(ratio * np.conj(conical(d, z)) / np.real(h_poly(z, z)) ** sp.delta)
