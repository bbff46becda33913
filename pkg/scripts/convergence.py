"""Finite-difference and Monte Carlo convergence tables with fitted log-log slopes."""
import argparse

from bsdlab.experiments import convergence_study, default_spec


def table(res):
    for v, rep in zip(res.values, res.reports):
        se = "" if rep.stderr is None else f"  stderr={rep.stderr:.3e}"
        print(f"  {res.param}={v:<10g} abs_err={rep.abs_err:.3e}{se}")
    print(f"  slope: {res.slope if res.slope is None else round(res.slope, 3)}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", default="1e-2,5e-3,2.5e-3")
    parser.add_argument("--samples", default="1e3,1e4,1e5")
    args = parser.parse_args()
    steps = [float(v) for v in args.steps.split(",")]
    samples = [float(v) for v in args.samples.split(",")]
    for order in (2, 4):
        for s, nu in [(0.7, 4.0), (1.3, 8.0)]:
            print(f"hua at 0, order {order}, s={s}, nu={nu}")
            table(convergence_study(default_spec("thm61_hua_eigen", s=s, nu=nu, order=order), "step", steps))
    print("conical transform, Monte Carlo")
    table(convergence_study(default_spec("prop83_mc"), "samples", samples))


if __name__ == "__main__":
    main()
