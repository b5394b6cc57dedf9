"""Walk through the local analysis of the two model charts.

The cubic chart (potential t0^2 t1/2 + t1^4/24) has discriminant {t1 = 0};
on a double cover we get meromorphic idempotents, canonical coordinates
u = t0 +- (2/3) t1^(3/2) and norms Delta = +-2 sqrt(t1).  The quartic chart,
expanded near the smooth discriminant branch where two critical points of
x^4/4 + t2 x^2 + t1 x + t0 collide, reproduces the closed-form critical
values and idempotents in the coordinates (phi, zeta3, t0).
"""

from tautrel.charts import a2_expansion, a3_expansion
from tautrel.frobenius import idempotent_frame, local_structure_probe, psi0_frame


def show_frame(name, frame):
    print("== %s" % name)
    for i in range(frame.dim):
        print("  idempotent %d: (%s)" % (i, ", ".join(str(c) for c in frame.eps[i])))
    for i in range(frame.dim):
        print("  u_%d = %s" % (i, frame.u[i]))
    for i in range(frame.dim):
        print("  Delta_%d = %s" % (i, frame.delta[i]))
    report = local_structure_probe(frame)
    print("  m = %s, singular pair %s, order(u1 - u2) = %s"
          % (report.m, report.singular, report.u_diff_order))
    print()


def main():
    frame = idempotent_frame(a2_expansion(trunc=6))
    show_frame("cubic chart (two-dimensional)", frame)
    p0 = psi0_frame(frame)
    print("  canonical t = %s, eta0 = %s, eta1 = %s" % (p0.t, p0.eta0, p0.eta1))
    print("  Psi-tilde entry orders:",
          [[str(e.order()) for e in row] for row in p0.psi_tilde.entries])
    print()

    frame3 = idempotent_frame(a3_expansion(trunc=6), probe=[0, 1, 0])
    show_frame("quartic chart near a smooth discriminant point", frame3)


if __name__ == "__main__":
    main()
