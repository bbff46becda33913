"""Measure c in (H - H')F = c F Id over domains, twists and test functions."""
import numpy as np

from bsdlab.calculus import ScalarField, hua_general, hua_prime
from bsdlab.domain import identity_endo, make_domain, random_point
from bsdlab.kernels import poisson_kernel, sample_shilov, spectral_params


def main():
    rng = np.random.default_rng(5)
    print(f"{'domain':<9} {'nu':>4} {'field':<8} {'c':>10} {'p nu':>6} {'-(2n/r) nu':>11}")
    for r, b in [(1, 0), (2, 0), (2, 1), (3, 0)]:
        dom = make_domain(r, b)
        ident = identity_endo(dom)
        for nu in (2.0, 4.0):
            sp = spectral_params(dom, 0.7, nu)
            u = sample_shilov(rng, dom)
            fields = {"one": ScalarField(lambda zs: np.ones(len(zs), complex)),
                      "poisson": ScalarField(lambda zs: poisson_kernel(sp, zs, u))}
            z = random_point(rng, dom, 0.5)
            for label, f in fields.items():
                diff = hua_general(f, z, nu, dom) - hua_prime(f, z, nu, dom)
                c = np.vdot(ident.as_operator().ravel(), diff.as_operator().ravel()) / dom.n / complex(f(z))
                print(f"{str(dom):<9} {nu:>4g} {label:<8} {c.real:>10.6f} {dom.p * nu:>6g} {-2 * dom.n / dom.r * nu:>11g}")


if __name__ == "__main__":
    main()
