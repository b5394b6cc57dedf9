"""The 2-dimensional family (d/dt)^2 = f(t) d/dt0 and its R-matrix.

For linear and quadratic f a global meromorphic gamma exists (it is found as
an exact polynomial solution); for f = t(t^2 - 1) the rational-solution test
certifies that none exists, and the unique local meromorphic solutions at the
discriminant roots visibly disagree.  This is the obstruction to extending
the chart to a cohomological field theory globally.
"""

from fractions import Fraction

from tautrel.multipoly import MultiPoly
from tautrel.rmatrix import ode_series_solution, solve_2d_family

t = MultiPoly.var("t")


def show(f):
    diag = solve_2d_family(f)
    print("f =", f)
    if diag.gamma_global is not None:
        print("  global solution: gamma =", diag.gamma_global)
    else:
        print(" ", diag.certificate)
    for center in sorted(diag.gamma_series):
        print("  series at t = %s: %s" % (center, diag.gamma_series[center]))
    print()


def main():
    show(t)
    show(t * (t + 1))
    show(t * (t * t - 1))

    print("delta-substitution chain for f = t(t^2-1), in u = t^2:")
    u = MultiPoly.var("t")
    a, b, c = 4 * u * (u - 1), 3 * u - 1, MultiPoly.const(Fraction(-1, 8))
    d0 = ode_series_solution(a, b, c, "t", 0, 8)
    d1 = ode_series_solution(a, b, c, "t", 1, 8)
    print("  at u = 0:", d0)
    print("  at u = 1:", d1)
    print("  constant terms %s vs %s certify the mismatch"
          % (d0.coefficient(0), d1.coefficient(0)))


if __name__ == "__main__":
    main()
